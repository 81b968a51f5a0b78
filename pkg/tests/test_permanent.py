import itertools
import math

import numpy as np
import pytest

from atomsampler.errors import DegenerateSampleError, SizeCapError, ValidationError
from atomsampler.fock import FockState, enumerate_basis
from atomsampler.interferometer import coupling_matrix, haar_random_unitary
from atomsampler.permanent import permanent_glynn, permanent_naive
from atomsampler.sampling import (
    collision_free_mass,
    distribution_to_json,
    draw_samples,
    outcome_probability,
    output_distribution,
    sampling_submatrix,
)

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


def random_complex(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def test_naive_examples():
    assert permanent_naive(np.array([[1.0, 2.0], [3.0, 4.0]])) == pytest.approx(10.0)
    for n in range(1, 6):
        assert permanent_naive(np.eye(n)) == pytest.approx(1.0)


def test_naive_triangular_single_permutation():
    # strictly zero lower triangle and unit diagonal: only the identity
    # permutation contributes
    t = np.triu(np.full((5, 5), 2.0), k=1) + np.eye(5)
    assert permanent_naive(t) == pytest.approx(1.0)
    assert permanent_glynn(t) == pytest.approx(1.0)


def test_glynn_examples():
    assert permanent_glynn(np.eye(3)) == pytest.approx(1.0)
    assert permanent_glynn(np.ones((2, 2))) == pytest.approx(2.0)


def test_glynn_matches_naive():
    rng = np.random.default_rng(42)
    for n in range(1, 9):
        for _ in range(10):
            a = random_complex(rng, n)
            g = permanent_glynn(a)
            nv = permanent_naive(a)
            assert abs(g - nv) <= 1e-10 * max(1.0, abs(nv))


def test_permanent_permutation_invariance():
    rng = np.random.default_rng(7)
    for n in (2, 4, 7):
        a = random_complex(rng, n)
        ref = permanent_glynn(a)
        for _ in range(5):
            p = rng.permutation(n)
            q = rng.permutation(n)
            assert permanent_glynn(a[p][:, q]) == pytest.approx(ref, rel=1e-10)


def test_permanent_row_linearity():
    rng = np.random.default_rng(8)
    a = random_complex(rng, 5)
    ref = permanent_glynn(a)
    scaled = a.copy()
    scaled[2] *= 3.5 - 1.25j
    assert permanent_glynn(scaled) == pytest.approx((3.5 - 1.25j) * ref, rel=1e-10)


def test_permanent_input_validation():
    with pytest.raises(ValidationError):
        permanent_glynn(np.ones((2, 3)))
    with pytest.raises(SizeCapError):
        permanent_glynn(np.eye(30))
    with pytest.raises(SizeCapError):
        permanent_naive(np.eye(10))


def test_sampling_submatrix_examples():
    one_one = FockState((1, 1))
    assert np.allclose(sampling_submatrix(HADAMARD, one_one, one_one), HADAMARD)
    sub = sampling_submatrix(HADAMARD, one_one, FockState((2, 0)))
    assert np.allclose(sub, np.full((2, 2), 1.0 / np.sqrt(2.0)))


def test_sampling_submatrix_against_index_expansion():
    # independent construction: repeat each mode index explicitly
    u = haar_random_unitary(5, seed=12)
    inp = FockState((2, 0, 1, 0, 0))
    out = FockState((0, 1, 0, 2, 0))
    rows = [j for j, c in enumerate(out.occupations) for _ in range(c)]
    cols = [i for i, c in enumerate(inp.occupations) for _ in range(c)]
    expected = np.array([[u[r, c] for c in cols] for r in rows])
    assert np.allclose(sampling_submatrix(u, inp, out), expected)


def test_sampling_submatrix_particle_mismatch():
    with pytest.raises(ValidationError):
        sampling_submatrix(HADAMARD, FockState((1, 1)), FockState((1, 0)))


def test_outcome_probability_hom_dip():
    one_one = FockState((1, 1))
    assert outcome_probability(HADAMARD, one_one, one_one) < 1e-12
    assert outcome_probability(HADAMARD, one_one, FockState((2, 0))) == pytest.approx(0.5, abs=1e-12)
    t = coupling_matrix(np.pi / 2.0, 0.0)
    assert outcome_probability(t, one_one, one_one) < 1e-12


def test_outcome_probability_identity_point_mass():
    u = np.eye(4, dtype=complex)
    inp = FockState((1, 0, 2, 1))
    for out in enumerate_basis(4, 4):
        expected = 1.0 if out == inp else 0.0
        assert outcome_probability(u, inp, out) == pytest.approx(expected, abs=1e-12)


def test_outcome_probability_global_phase_invariance():
    u = haar_random_unitary(4, seed=3)
    inp = FockState((1, 1, 0, 0))
    out = FockState((0, 1, 1, 0))
    base = outcome_probability(u, inp, out)
    rotated = outcome_probability(np.exp(1.23j) * u, inp, out)
    assert rotated == pytest.approx(base, abs=1e-12)


def _tensor_outcome_probability(u, inp, out):
    """First-quantized oracle: symmetrize, apply u per particle slot, project."""
    n = inp.total
    m = inp.m

    def symmetric_tensor(state):
        modes = [j for j, c in enumerate(state.occupations) for _ in range(c)]
        coeff = math.sqrt(
            math.prod(math.factorial(c) for c in state.occupations) / math.factorial(n)
        )
        tensor = np.zeros((m,) * n, dtype=complex)
        for perm in set(itertools.permutations(modes)):
            tensor[perm] = coeff
        return tensor

    evolved = symmetric_tensor(inp)
    for _ in range(n):
        evolved = np.tensordot(u, evolved, axes=(1, n - 1))
    amplitude = np.vdot(symmetric_tensor(out), evolved)
    return abs(amplitude) ** 2


def test_outcome_probability_against_tensor_oracle():
    rng_seeds = [(2, 4, 21), (3, 5, 22), (3, 6, 23)]
    for n, m, seed in rng_seeds:
        u = haar_random_unitary(m, seed=seed)
        occ = [0] * m
        for j in range(n):
            occ[j] = 1
        inp = FockState(tuple(occ))
        for out in enumerate_basis(n, m):
            expected = _tensor_outcome_probability(u, inp, out)
            assert outcome_probability(u, inp, out) == pytest.approx(expected, abs=1e-10)


def test_output_distribution_splitter():
    dist = output_distribution(HADAMARD, FockState((1, 1)))
    probs = {s.occupations: p for s, p in dist.outcomes}
    assert probs[(2, 0)] == pytest.approx(0.5, abs=1e-12)
    assert probs[(1, 1)] == pytest.approx(0.0, abs=1e-12)
    assert probs[(0, 2)] == pytest.approx(0.5, abs=1e-12)
    assert dist.total_mass == pytest.approx(1.0, abs=1e-10)


def test_output_distribution_normalization_haar():
    u = haar_random_unitary(9, seed=5)
    dist = output_distribution(u, FockState((1, 1, 1, 0, 0, 0, 0, 0, 0)))
    assert dist.total_mass == pytest.approx(1.0, abs=1e-10)


def test_output_distribution_normalization_four_particles():
    u = haar_random_unitary(12, seed=6)
    inp = FockState((1, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0))
    dist = output_distribution(u, inp)
    assert len(dist.outcomes) == 1365
    assert dist.total_mass == pytest.approx(1.0, abs=1e-10)


def test_output_distribution_worker_invariance():
    u = haar_random_unitary(6, seed=17)
    inp = FockState((1, 0, 1, 0, 0, 0))
    lone = output_distribution(u, inp, workers=1)
    many = output_distribution(u, inp, workers=4)
    assert lone.total_mass == many.total_mass
    for (s1, p1), (s2, p2) in zip(lone.outcomes, many.outcomes):
        assert s1 == s2 and p1 == p2


def test_output_distribution_collision_free():
    u = haar_random_unitary(6, seed=2)
    dist = output_distribution(u, FockState((1, 1, 0, 0, 0, 0)), collision_free_only=True)
    assert len(dist.outcomes) == math.comb(6, 2)
    assert all(max(s.occupations) <= 1 for s, _ in dist.outcomes)
    assert 0.0 < dist.total_mass < 1.0


def test_draw_samples_point_mass():
    u = np.eye(3, dtype=complex)
    inp = FockState((0, 2, 1))
    dist = output_distribution(u, inp)
    samples = draw_samples(dist, 50, seed=1)
    assert all(s == inp for s in samples)


def test_draw_samples_determinism_and_frequency():
    dist = output_distribution(HADAMARD, FockState((1, 1)))
    first = draw_samples(dist, 10**5, seed=11)
    again = draw_samples(dist, 10**5, seed=11)
    assert first == again
    freq = sum(1 for s in first if s.occupations == (2, 0)) / len(first)
    assert abs(freq - 0.5) < 0.005  # 3 sigma of a fair binomial at 1e5 shots


def test_draw_samples_goodness_of_fit():
    from conftest import merged_chisquare_pvalue

    u = haar_random_unitary(4, seed=9)
    dist = output_distribution(u, FockState((1, 1, 0, 0)))
    samples = draw_samples(dist, 20000, seed=4)
    index = {s: i for i, (s, _) in enumerate(dist.outcomes)}
    counts = np.zeros(len(dist.outcomes))
    for s in samples:
        counts[index[s]] += 1
    expected = dist.probabilities() * len(samples)
    assert merged_chisquare_pvalue(counts, expected) > 0.01


def test_draw_samples_zero_mass():
    dist = output_distribution(HADAMARD, FockState((1, 1)))
    hollow = type(dist)(
        input=dist.input, outcomes=dist.outcomes, collision_free_only=False, total_mass=0.0
    )
    with pytest.raises(DegenerateSampleError):
        draw_samples(hollow, 10, seed=0)


def test_distribution_to_json():
    import json

    dist = output_distribution(HADAMARD, FockState((1, 1)))
    payload = json.loads(json.dumps(distribution_to_json(dist)))
    assert payload[0]["state"] == [2, 0]
    assert payload[0]["probability"] == pytest.approx(0.5, abs=1e-12)
    assert len(payload) == 3


def test_collision_free_mass_values():
    for m in (1, 3, 10, 50):
        assert collision_free_mass(1, m) == pytest.approx(1.0)
    assert collision_free_mass(2, 4) == pytest.approx(0.6)
    assert collision_free_mass(5, 4) == 0.0


def test_collision_free_mass_asymptote():
    # finite-size value sits slightly above 1/e; the inverse-relative gap is
    # below 5% at N=20 and keeps shrinking
    p20 = collision_free_mass(20, 400)
    p30 = collision_free_mass(30, 900)
    target = 1.0 / math.e
    assert abs(p20 - target) <= 0.05 * p20
    assert abs(p30 - target) < abs(p20 - target)
