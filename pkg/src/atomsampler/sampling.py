"""Exact output distributions of a linear mode circuit and samples from them.

The probability of measuring occupations (n_1, ..., n_M) after N identical
bosons traverse a circuit with transfer matrix U is

    P(n) = |perm(U_sub)|^2 / (prod_j n_j! prod_i q_i!)

where the rows of U_sub repeat output modes with multiplicity n_j and the
columns repeat input modes with multiplicity q_i.  Collision-free
post-selection keeps only outcomes with every mode singly occupied.
"""

from dataclasses import dataclass
from itertools import combinations
from math import comb, factorial

import numpy as np

from .errors import DegenerateSampleError, SizeCapError, ValidationError
from .fock import BASIS_CAP, FockState, basis_array, multiset_dimension
from .parallel import parallel_map
from .permanent import permanent_glynn


@dataclass(frozen=True)
class OutputDistribution:
    """Exact outcome probabilities for one input state and circuit."""

    input: FockState
    outcomes: tuple  # of (FockState, probability) in canonical order
    collision_free_only: bool
    total_mass: float

    def probabilities(self):
        return np.array([p for _, p in self.outcomes])

    def states(self):
        return [s for s, _ in self.outcomes]


def _mode_indices(state):
    """Mode index of each particle, occupations expanded by multiplicity."""
    return np.repeat(np.arange(state.m), state.occupations)


def sampling_submatrix(u, input_state, output_state):
    """N x N submatrix whose permanent gives the transition amplitude.

    Rows follow the output occupations, columns the input occupations.
    """
    u = np.asarray(u, dtype=complex)
    if input_state.total != output_state.total:
        raise ValidationError(
            f"particle numbers differ: input {input_state.total}, "
            f"output {output_state.total}"
        )
    if input_state.m != u.shape[0] or output_state.m != u.shape[0]:
        raise ValidationError("state length does not match the unitary size")
    rows = _mode_indices(output_state)
    cols = _mode_indices(input_state)
    return u[np.ix_(rows, cols)]


def outcome_probability(u, input_state, output_state):
    """Probability of one output occupation pattern."""
    n = input_state.total
    if n == 0:
        return 1.0 if output_state.total == 0 else 0.0
    sub = sampling_submatrix(u, input_state, output_state)
    norm = prod_factorials(input_state) * prod_factorials(output_state)
    return float(abs(permanent_glynn(sub)) ** 2 / norm)


def prod_factorials(state):
    out = 1
    for n in state.occupations:
        out *= factorial(n)
    return out


def _collision_free_states(n, m):
    for modes in combinations(range(m), n):
        occ = [0] * m
        for j in modes:
            occ[j] = 1
        yield FockState(tuple(occ))


def output_distribution(u, input_state, collision_free_only=False, workers=1, cap=BASIS_CAP):
    """Exact distribution over all outcomes, in canonical basis order.

    The full distribution sums to one; under collision-free post-selection
    `total_mass` is the retained probability.  Outcome probabilities are
    independent of each other, so `workers` may fan the permanents out; the
    outcome order, and therefore every reduction, is fixed.
    """
    u = np.asarray(u, dtype=complex)
    n = input_state.total
    m = input_state.m
    if collision_free_only:
        count = comb(m, n)
        if count > cap:
            raise SizeCapError(f"{count} outcomes exceed the configured cap of {cap}")
        states = list(_collision_free_states(n, m))
    else:
        count = multiset_dimension(n, m)
        if count > cap:
            raise SizeCapError(f"{count} outcomes exceed the configured cap of {cap}")
        states = [FockState(tuple(row)) for row in basis_array(n, m, cap=cap)]

    chunks = [states[i : i + 256] for i in range(0, len(states), 256)]
    probs = parallel_map(
        lambda chunk: [outcome_probability(u, input_state, s) for s in chunk],
        chunks,
        workers=workers,
    )
    flat = [p for chunk in probs for p in chunk]
    outcomes = tuple(zip(states, flat))
    return OutputDistribution(
        input=input_state,
        outcomes=outcomes,
        collision_free_only=collision_free_only,
        total_mass=float(sum(flat)),
    )


def draw_samples(dist, shots, seed):
    """I.i.d. draws from a distribution, conditioned on its total mass.

    Deterministic for a fixed seed; inverse-CDF over the canonical outcome
    order.
    """
    if dist.total_mass <= 0.0:
        raise DegenerateSampleError("distribution carries no probability mass")
    probs = dist.probabilities() / dist.total_mass
    cdf = np.cumsum(probs)
    rng = np.random.default_rng(seed)
    idx = np.searchsorted(cdf, rng.random(shots), side="right")
    idx = np.minimum(idx, len(probs) - 1)
    states = dist.states()
    return [states[i] for i in idx]


def collision_free_mass(n, m):
    """Probability that a uniformly mixed N-boson state is collision free.

    binomial(M, N) singly-occupied patterns out of the full multiset count;
    approaches exp(-N^2/M)-type behavior, about 1/e for M = N^2 and large N.
    """
    return comb(m, n) / multiset_dimension(n, m)


def distribution_to_json(dist):
    """JSON-ready outcome list: [{"state": [...], "probability": p}, ...]."""
    return [
        {"state": state.to_json(), "probability": float(p)}
        for state, p in dist.outcomes
    ]
