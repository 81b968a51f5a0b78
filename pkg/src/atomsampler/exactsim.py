"""Exact N-particle state-vector simulation of the stepped lossy circuit.

The state lives in the canonical N-particle Fock basis over M modes.  One
circuit step applies the non-unitary decay factor exp(-H t_step) followed by
the coherent couplings of one mesh layer, where H is diagonal in the Fock
basis with per-state rate

    N / (2 tau_bg) + sum_s n_s (n_s - 1) / (4 tau_tb)

summed over lattice sites s (modes 2s and 2s+1).  Norm is only ever reduced
by decay, and the squared-norm ratio across step j is the per-step survival
probability p_j; the product of all p_j is the total survival.

Mesh layers act fiber by fiber: fixing the occupations of all modes outside
one coupled pair leaves an (n_pair + 1)-dimensional block on which the 2x2
coupling acts through its symmetric-power representation, so a layer never
touches amplitudes outside its pairs' fibers.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import lossmodel
from .errors import ValidationError
from .fock import basis_array, multiset_dimension, state_rank
from .interferometer import clements_decompose, coupling_matrix, haar_random_unitary
from .parallel import parallel_map, spawn_seeds


@dataclass(frozen=True)
class SimState:
    """Amplitude vector over the canonical (n, m) Fock basis."""

    amplitudes: np.ndarray
    n: int
    m: int

    def norm_squared(self):
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True)
class DecayDiagonal:
    """Per-basis-state amplitude decay rates of the loss generator."""

    rates: np.ndarray
    n: int
    m: int


@dataclass(frozen=True)
class SurvivalTrace:
    """Per-step survival ratios p_j and their product."""

    p_j: np.ndarray
    p_total: float
    steps: int


@dataclass(frozen=True)
class BenchmarkResult:
    """Simulated per-step survival versus the closed-form step model."""

    n: int
    m: int
    tau_tb: float
    t_step: float
    realizations: int
    p_j: np.ndarray  # (realizations, steps)
    p_totals: np.ndarray
    model_p_step: float
    model_p_step_pow_m: float
    excluded_occupancy_mass: float

    @property
    def mean_p_j(self):
        return self.p_j.mean(axis=0)

    @property
    def mean_p_total(self):
        return float(self.p_totals.mean())


def uniform_state(n, m, random_phases=False, seed=None):
    """Normalized state with uniform probability over the whole basis.

    By default all amplitudes are equal, positive, and real; with
    `random_phases` each amplitude carries an independent uniform phase.
    """
    dim = multiset_dimension(n, m)
    if random_phases:
        rng = np.random.default_rng(seed)
        amps = np.exp(2j * np.pi * rng.random(dim))
    else:
        amps = np.ones(dim, dtype=complex)
    return SimState(amplitudes=amps / np.sqrt(dim), n=n, m=m)


def basis_state(state):
    """SimState with all amplitude on one Fock basis state."""
    amps = np.zeros(multiset_dimension(state.total, state.m), dtype=complex)
    amps[state_rank(state)] = 1.0
    return SimState(amplitudes=amps, n=state.total, m=state.m)


def build_decay_diagonal(n, m, tau_bg, tau_tb):
    """Loss rates for every basis state from its site occupancies."""
    if m % 2 != 0:
        raise ValidationError(f"mode count {m} is odd; the site pairing needs even M")
    arr = basis_array(n, m)
    sites = arr.reshape(arr.shape[0], m // 2, 2).sum(axis=2)
    pair_terms = (sites * (sites - 1)).sum(axis=1)
    rates = n / (2.0 * tau_bg) + pair_terms / (4.0 * tau_tb)
    return DecayDiagonal(rates=rates, n=n, m=m)


def apply_decay(state, diag, t):
    """Multiply amplitudes by exp(-rate t); never increases the norm."""
    if t < 0.0:
        raise ValidationError(f"time must be non-negative, got {t}")
    if (diag.n, diag.m) != (state.n, state.m):
        raise ValidationError("decay diagonal does not match the state dimensions")
    return SimState(
        amplitudes=state.amplitudes * np.exp(-diag.rates * t), n=state.n, m=state.m
    )


@lru_cache(maxsize=256)
def _pair_fibers(n, m, mode):
    """Basis indices grouped into fibers of the coupled pair (mode, mode+1).

    Returns a tuple of (n_pair, rows) where rows[f, p] is the basis index of
    the f-th fiber's state with p atoms in `mode` and n_pair - p in the
    partner mode.
    """
    arr = basis_array(n, m)
    rest = np.delete(arr, (mode, mode + 1), axis=1)
    uniq, inv = np.unique(rest, axis=0, return_inverse=True)
    pair_occ = n - uniq.sum(axis=1)
    idx = np.full((len(uniq), n + 1), -1, dtype=np.int64)
    idx[inv, arr[:, mode]] = np.arange(arr.shape[0])
    groups = []
    for value in np.unique(pair_occ):
        rows = np.ascontiguousarray(idx[pair_occ == value][:, : value + 1])
        rows.setflags(write=False)
        groups.append((int(value), rows))
    return tuple(groups)


def _pair_block(t2, n_pair):
    """Symmetric-power representation of a 2x2 coupling on n_pair bosons."""
    block = np.zeros((n_pair + 1, n_pair + 1), dtype=complex)
    for p_in in range(n_pair + 1):
        q_in = n_pair - p_in
        for p_out in range(n_pair + 1):
            q_out = n_pair - p_out
            acc = 0.0 + 0.0j
            for i in range(max(0, p_out - q_in), min(p_in, p_out) + 1):
                acc += (
                    math.comb(p_in, i)
                    * math.comb(q_in, p_out - i)
                    * t2[0, 0] ** i
                    * t2[1, 0] ** (p_in - i)
                    * t2[0, 1] ** (p_out - i)
                    * t2[1, 1] ** (q_in - p_out + i)
                )
            scale = math.sqrt(
                math.factorial(p_out)
                * math.factorial(q_out)
                / (math.factorial(p_in) * math.factorial(q_in))
            )
            block[p_out, p_in] = scale * acc
    return block


def apply_layer(state, couplings):
    """Apply one mesh layer of disjoint adjacent-pair couplings."""
    seen = set()
    amps = state.amplitudes.copy()
    for coupling in couplings:
        lo, hi = coupling.pair
        if hi != lo + 1 or hi >= state.m:
            raise ValidationError(f"coupling pair {coupling.pair} is invalid for m={state.m}")
        if lo in seen or hi in seen:
            raise ValidationError(f"overlapping couplings on mode pair {coupling.pair}")
        seen.update((lo, hi))
        if coupling.theta == 0.0 and coupling.phi == 0.0:
            continue
        t2 = coupling_matrix(coupling.theta, coupling.phi)
        for n_pair, rows in _pair_fibers(state.n, state.m, lo):
            if n_pair == 0:
                continue
            block = _pair_block(t2, n_pair)
            amps[rows] = amps[rows] @ block.T
    return SimState(amplitudes=amps, n=state.n, m=state.m)


def apply_output_phases(state, phases):
    """Apply per-mode output phases; diagonal, norm preserving."""
    arr = basis_array(state.n, state.m)
    total_phase = arr @ np.asarray(phases, dtype=float)
    return SimState(
        amplitudes=state.amplitudes * np.exp(1j * total_phase), n=state.n, m=state.m
    )


def outcome_probabilities(state):
    """|amplitude|^2 for every canonical basis state."""
    return np.abs(state.amplitudes) ** 2


def run_circuit(initial, plan, t_step, tau_bg, tau_tb, apply_phases=True):
    """Alternate decay and coherent layers; record per-step survival.

    Decay acts before each layer.  Output phases are applied after the last
    layer; they change no survival ratio.
    """
    if plan.m != initial.m:
        raise ValidationError(
            f"plan has {plan.m} modes but the state has {initial.m}"
        )
    diag = build_decay_diagonal(initial.n, initial.m, tau_bg, tau_tb)
    state = initial
    ratios = []
    for layer in plan.layers:
        before = state.norm_squared()
        state = apply_decay(state, diag, t_step)
        state = apply_layer(state, layer)
        ratios.append(state.norm_squared() / before)
    if apply_phases:
        state = apply_output_phases(state, plan.output_phases)
    p_j = np.asarray(ratios)
    trace = SurvivalTrace(p_j=p_j, p_total=float(np.prod(p_j)), steps=len(ratios))
    return state, trace


def _one_realization(args):
    n, m, t_step, tau_tb, random_phases, seedseq = args
    child_u, child_phase = seedseq.spawn(2)
    u = haar_random_unitary(m, child_u)
    plan = clements_decompose(u)
    initial = uniform_state(n, m, random_phases=random_phases, seed=child_phase)
    _, trace = run_circuit(
        initial, plan, t_step=t_step, tau_bg=math.inf, tau_tb=tau_tb, apply_phases=False
    )
    return trace


def benchmark_vs_model(n, m, tau_tb_over_texec, realizations, seed, workers=1, random_phases=False):
    """Average stepped-circuit survival over random circuits vs the model.

    Each realization decomposes a fresh Haar unitary and runs the circuit
    from the uniform initial state with background loss switched off.  Times
    are measured in units of the step duration, so only the ratio of the
    pair lifetime to the execution time t_exec = M t_step matters.
    """
    if realizations < 1:
        raise ValidationError(f"need at least one realization, got {realizations}")
    t_step = 1.0
    tau_tb = tau_tb_over_texec * m * t_step
    seeds = spawn_seeds(seed, realizations)
    traces = parallel_map(
        _one_realization,
        [(n, m, t_step, tau_tb, random_phases, s) for s in seeds],
        workers=workers,
    )
    p_j = np.vstack([t.p_j for t in traces])
    p_totals = np.asarray([t.p_total for t in traces])
    model_p_step = lossmodel.p_step_twobody(n, m, t_step, tau_tb, model="finite")
    return BenchmarkResult(
        n=n,
        m=m,
        tau_tb=tau_tb,
        t_step=t_step,
        realizations=realizations,
        p_j=p_j,
        p_totals=p_totals,
        model_p_step=model_p_step,
        model_p_step_pow_m=model_p_step**m,
        excluded_occupancy_mass=lossmodel.excluded_occupancy_mass(n, m),
    )
