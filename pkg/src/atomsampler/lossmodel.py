"""Closed-form loss and sampling-rate models for the atom machine.

Survival is governed by two mechanisms: background-gas collisions eject
single atoms at rate 1/tau_bg each, and two-body collisions empty doubly
occupied lattice sites with pair lifetime tau_tb (a trio decays three times
faster).  Under the uniform-mixture assumption the probability that exactly
k2 sites hold pairs and k3 sites hold trios is

    P(k2, k3) = 4^k3 C(S, k3) 3^k2 C(S - k3, k2) 2^(N - 2 k2 - 3 k3)
                C(S - k2 - k3, N - 2 k2 - 3 k3) / C(M + N - 1, N)

with S = M / 2 sites; for large N at fixed c = M / N^2 this tends to a
Poisson law with mean 3 / (2 c).  Occupancies above three are dropped; the
neglected probability mass is available via `excluded_occupancy_mass`.

Sampling rates: the lossless machine draws collision-free events at
(1/e) / (c N^2 t_step + t_init + t_det); preparation and detection
inefficiencies contribute (eta_init eta_det)^N and the survival factor
multiplies on top.  Photonic and classical-computer competitor rates follow
the same conventions so the curves can be compared directly.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import ValidationError

#: Largest N evaluated with the finite-size pair/trio sum before switching
#: to the large-N closed form.
FINITE_MODEL_LIMIT = 40


def _require_positive_time(name, value):
    if not value > 0.0:
        raise ValidationError(f"{name} must be positive, got {value}")


def _require_probability(name, value):
    if not 0.0 < value <= 1.0:
        raise ValidationError(f"{name} must lie in (0, 1], got {value}")


@dataclass(frozen=True)
class LossScenario:
    """Physical parameter bundle for the atom sampler rate model."""

    t_step: float
    tau_bg: float
    tau_tb: float
    t_init: float
    t_det: float
    eta_init: float
    eta_det: float
    mode_ratio_c: float = 1.0

    def __post_init__(self):
        for name in ("t_step", "tau_bg", "tau_tb", "t_init", "t_det"):
            _require_positive_time(name, getattr(self, name))
        for name in ("eta_init", "eta_det"):
            _require_probability(name, getattr(self, name))
        if not self.mode_ratio_c > 0.0:
            raise ValidationError(f"mode_ratio_c must be positive, got {self.mode_ratio_c}")


@dataclass(frozen=True)
class PhotonicScenario:
    """Source rate and efficiencies of a photonic competitor."""

    r0: float
    eta_f: float
    eta_c: float

    def __post_init__(self):
        if not self.r0 > 0.0:
            raise ValidationError(f"r0 must be positive, got {self.r0}")
        _require_probability("eta_f", self.eta_f)
        _require_probability("eta_c", self.eta_c)


@dataclass(frozen=True)
class ClassicalScenario:
    """Per-operation time of a classical sampling computer."""

    a_tilde: float

    def __post_init__(self):
        if not self.a_tilde > 0.0:
            raise ValidationError(f"a_tilde must be positive, got {self.a_tilde}")


def even_mode_count(n, c=1.0):
    """Even mode count nearest to c * n^2, for site-paired combinatorics."""
    return 2 * round(c * n * n / 2.0)


def p_pairs_trios(n, m, k2, k3, exact=False):
    """Probability of exactly k2 pair sites and k3 trio sites.

    Evaluated under the uniform bosonic mixture over M modes (M/2 sites)
    with exact integer combinatorics; unsatisfiable configurations get
    probability zero.  Set `exact` for the rational value.
    """
    if m % 2 != 0:
        raise ValidationError(f"mode count {m} is odd; the site pairing needs even M")
    if k2 < 0 or k3 < 0:
        raise ValidationError(f"negative occupancy counts k2={k2}, k3={k3}")
    sites = m // 2
    singles = n - 2 * k2 - 3 * k3
    free_sites = sites - k2 - k3
    if singles < 0 or free_sites < 0 or singles > free_sites:
        return Fraction(0) if exact else 0.0
    numerator = (
        4**k3
        * comb(sites, k3)
        * 3**k2
        * comb(sites - k3, k2)
        * 2**singles
        * comb(free_sites, singles)
    )
    value = Fraction(numerator, comb(m + n - 1, n))
    return value if exact else float(value)


def _occupancy_sector(n, m):
    """All (k2, k3, probability) terms with site occupancy capped at three."""
    terms = []
    for k3 in range(n // 3 + 1):
        for k2 in range((n - 3 * k3) // 2 + 1):
            p = p_pairs_trios(n, m, k2, k3, exact=True)
            if p:
                terms.append((k2, k3, p))
    return terms


def truncated_sector_mass(n, m, exact=False):
    """Total probability of states with no site holding four or more atoms."""
    total = sum(p for _, _, p in _occupancy_sector(n, m))
    return total if exact else float(total)


def excluded_occupancy_mass(n, m):
    """Probability mass dropped by ignoring quartet and higher occupancies."""
    return float(1 - truncated_sector_mass(n, m, exact=True))


def poisson_pair_limit(c, k2):
    """Large-N limit of the pair-count distribution: Poisson, mean 3/(2c)."""
    if not c > 0.0:
        raise ValidationError(f"mode ratio c must be positive, got {c}")
    lam = 3.0 / (2.0 * c)
    return lam**k2 * math.exp(-lam) / math.factorial(k2)


def p_step_twobody_closed(c, t, tau_tb):
    """Large-N per-step two-body survival exp[(3/(2c)) (exp(-t/tau) - 1)]."""
    return math.exp(1.5 / c * math.expm1(-t / tau_tb))


def p_step_twobody(n, m, t, tau_tb, model="auto", finite_limit=FINITE_MODEL_LIMIT):
    """Per-step survival against two-body loss.

    The finite-size form weights each (k2, k3) sector by exp(-(k2 + 3 k3)
    t / tau_tb) and renormalizes by the mass of the included sectors, so it
    equals one at t = 0.  Above `finite_limit` particles (or on request) the
    large-N closed form with c = M / N^2 is used instead.
    """
    if t < 0.0:
        raise ValidationError(f"time must be non-negative, got {t}")
    if model not in ("auto", "finite", "closed"):
        raise ValidationError(f"unknown model {model!r}")
    if model == "closed" or (model == "auto" and n > finite_limit):
        return p_step_twobody_closed(m / n**2, t, tau_tb)
    terms = _occupancy_sector(n, m)
    # sum the same float weights for mass and decay so t = 0 gives exactly 1
    weights = [float(p) for _, _, p in terms]
    decayed = sum(
        w * math.exp(-(k2 + 3.0 * k3) * t / tau_tb)
        for (k2, k3, _), w in zip(terms, weights)
    )
    return decayed / sum(weights)


def p_step_background(n, t, tau_bg):
    """Probability that no background-gas collision hits any of N atoms."""
    if t < 0.0:
        raise ValidationError(f"time must be non-negative, got {t}")
    return math.exp(-n * t / tau_bg)


def circuit_steps(scenario, n):
    """Number of circuit steps c * N^2 (kept exact, not rounded)."""
    return scenario.mode_ratio_c * n * n


def p_survival(scenario, n, model="auto"):
    """Probability that all N atoms survive the full circuit execution.

    (P_bg P_tb)^(c N^2); the two-body factor uses the finite-size sum on an
    even mode count near c N^2, or the closed form for large N.
    """
    if n < 1:
        raise ValidationError(f"need n >= 1, got {n}")
    t = scenario.t_step
    c = scenario.mode_ratio_c
    if model == "closed" or (model == "auto" and n > FINITE_MODEL_LIMIT):
        # single exponential keeps the (P_bg P_tb)^(c N^2) identity exact
        return math.exp(
            -c * n**3 * t / scenario.tau_bg
            + 1.5 * n * n * math.expm1(-t / scenario.tau_tb)
        )
    p_bg = p_step_background(n, t, scenario.tau_bg)
    m = even_mode_count(n, c)
    p_tb = p_step_twobody(n, m, t, scenario.tau_tb, model="finite")
    return (p_bg * p_tb) ** circuit_steps(scenario, n)


def n_threshold(scenario):
    """Atom number below which two-body loss dominates: 3 tau_bg / (2 tau_tb)."""
    return 1.5 * scenario.tau_bg / scenario.tau_tb


def r_ideal(scenario, n):
    """Collision-free sampling rate of the lossless machine, in Hz."""
    if n < 1:
        raise ValidationError(f"need n >= 1, got {n}")
    t_exec = circuit_steps(scenario, n) * scenario.t_step
    return (1.0 / math.e) / (t_exec + scenario.t_init + scenario.t_det)


def r_nisq(scenario, n, model="auto"):
    """Sampling rate with preparation, loss, and detection penalties, in Hz."""
    eta = (scenario.eta_init * scenario.eta_det) ** n
    return eta * p_survival(scenario, n, model=model) * r_ideal(scenario, n)


def r_photonic(photonic, n, depth=None):
    """Sampling rate of a photonic machine, in Hz.

    Per-photon success is eta_f times the circuit transmission eta_c^depth;
    the depth defaults to the square-circuit value N^2.
    """
    if n < 1:
        raise ValidationError(f"need n >= 1, got {n}")
    if depth is None:
        depth = n * n
    eta = photonic.eta_f * photonic.eta_c**depth
    return (1.0 / math.e) * (photonic.r0 / n) * eta**n


def r_classical(classical, n):
    """Rate of Metropolised-independence sampling on a classical machine."""
    if n < 1:
        raise ValidationError(f"need n >= 1, got {n}")
    return 2.0 ** (-n) / (100.0 * classical.a_tilde * n * n)


def crossover(scenario, classical, n_range=(2, 200), model="auto"):
    """Smallest N where the atom machine outpaces the classical sampler.

    Returns None when no crossover occurs inside `n_range` (inclusive).
    """
    lo, hi = n_range
    for n in range(lo, hi + 1):
        if r_nisq(scenario, n, model=model) > r_classical(classical, n):
            return n
    return None
