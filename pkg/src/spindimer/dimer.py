"""Closed-form physics of an exchange-coupled spin-1/2 dimer plus Curie monomer.

Model
-----
The compound susceptibility is a superposition chi = chi_d + chi_m of

    chi_d = (g mu_B)^2 / (k_B T) * 2 / (3 + exp(-J/(k_B T)))      (dimer)
    chi_m = C / T                                                  (monomer)

with the exchange quoted as J/k_B in kelvin, J < 0 antiferromagnetic.  The
dimer Hamiltonian convention is H = -J S1.S2, chosen because it reproduces
the dimer susceptibility above: the singlet then sits at 3J/4 and the
triplet at -J/4, a gap of -J.

Writing K = exp(-J/(k_B T)) and the reduced susceptibility
x(T) = k_B T chi_d / (g mu_B)^2 = 2/(3 + K), the thermal dimer state gives
closed forms for the entanglement quantifiers:

    concurrence     C(T)   = max(0, 1 - 6/(3 + K)) = max(0, 1 - 3 x)
    Bell mean value |<B>|  = 4 sqrt(2) |x - 1/2|

and their experimental twins obtained by substituting the measured chi via
x = k_B T (chi - C/T) / (g mu_B)^2.  Setting these expressions to their
critical values yields the three temperatures reported by ``thresholds``:

    concurrence reaches 0      at  T_e       = -J / (k_B ln 3)
    |<B>| crosses 2            at  T_Bell    = -J / (k_B ln(5 + 4 sqrt(2)))
    concurrence falls to 1-eps at  T_plateau = -J / (k_B ln(6/eps - 3))

All temperatures are in kelvin and chi in mu_B FU^-1 Oe^-1 throughout.
"""

import math
from dataclasses import dataclass

import numpy as np

from .constants import reduced_susceptibility, susceptibility_from_reduced
from .errors import NonPositiveTemperatureError, NotAntiferromagneticError

BELL_CEILING = 2.0 * math.sqrt(2.0)
_FOUR_SQRT2 = 4.0 * math.sqrt(2.0)

# exp argument above which exp(-J/k_B T) would overflow a double; the
# asymptotic form 2*exp(J/k_B T) is exact to better than 1e-290 there.
_EXP_OVERFLOW = 700.0


@dataclass
class ModelParams:
    """Fitted physical parameters plus witness normalization metadata.

    j_over_kb : exchange coupling J/k_B in K (negative = antiferromagnetic)
    g         : Lande factor
    curie_c   : monomer Curie constant in K mu_B FU^-1 Oe^-1
    n_spins   : number of spins per formula unit entering the witness
    spin      : spin quantum number of those spins
    """

    j_over_kb: float
    g: float
    curie_c: float
    n_spins: int = 3
    spin: float = 0.5

    def __post_init__(self):
        if self.g <= 0.0:
            raise ValueError(f"g must be positive, got {self.g}")
        if self.curie_c < 0.0:
            raise ValueError(f"curie_c must be >= 0, got {self.curie_c}")
        if self.n_spins < 1:
            raise ValueError(f"n_spins must be >= 1, got {self.n_spins}")
        if self.spin <= 0.0:
            raise ValueError(f"spin must be positive, got {self.spin}")


@dataclass
class ThresholdSet:
    """Critical temperatures of the entanglement quantifiers, in kelvin."""

    t_entanglement: float
    t_bell: float
    t_plateau: float
    plateau_epsilon: float


def _check_temperature(temperature):
    if temperature <= 0.0:
        raise NonPositiveTemperatureError(f"temperature must be > 0 K, got {temperature}")


def reduced_chi_dimer(j_over_kb: float, temperature: float) -> float:
    """Dimensionless x(T) = 2/(3 + exp(-J/(k_B T))), overflow-safe."""
    _check_temperature(temperature)
    a = -j_over_kb / temperature
    if a > _EXP_OVERFLOW:
        return 2.0 * math.exp(-a)
    return 2.0 / (3.0 + math.exp(a))


def chi_dimer(params: ModelParams, temperature: float) -> float:
    """Dimer susceptibility in mu_B FU^-1 Oe^-1."""
    x = reduced_chi_dimer(params.j_over_kb, temperature)
    return susceptibility_from_reduced(x, temperature, params.g)


def chi_monomer(params: ModelParams, temperature: float) -> float:
    """Curie-law monomer susceptibility C/T."""
    _check_temperature(temperature)
    return params.curie_c / temperature


def chi_total(params: ModelParams, temperature: float) -> float:
    """Compound susceptibility chi_d + chi_m."""
    return chi_dimer(params, temperature) + chi_monomer(params, temperature)


def thermal_dimer_state(params: ModelParams, temperature: float) -> np.ndarray:
    """Thermal state of H = -J S1.S2 as a 4x4 density matrix.

    Diagonal in the singlet-triplet basis with singlet weight K/(3+K) and
    1/(3+K) per triplet state, K = exp(-J/(k_B T)).  Returned in the
    computational basis |00>, |01>, |10>, |11>.
    """
    _check_temperature(temperature)
    a = -params.j_over_kb / temperature
    if a > _EXP_OVERFLOW:
        em = math.exp(-a)
        w_singlet = 1.0 / (1.0 + 3.0 * em)
        w_triplet = em / (1.0 + 3.0 * em)
    else:
        k = math.exp(a)
        w_singlet = k / (3.0 + k)
        w_triplet = 1.0 / (3.0 + k)
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = w_triplet
    rho[3, 3] = w_triplet
    mid = 0.5 * (w_singlet + w_triplet)
    off = 0.5 * (w_triplet - w_singlet)
    rho[1, 1] = mid
    rho[2, 2] = mid
    rho[1, 2] = off
    rho[2, 1] = off
    return rho


def concurrence_closed(params: ModelParams, temperature: float) -> float:
    """Dimer concurrence max(0, 1 - 6/(3 + K)) from the closed form."""
    x = reduced_chi_dimer(params.j_over_kb, temperature)
    return max(0.0, 1.0 - 3.0 * x)


def concurrence_from_chi(chi, temperature: float, params: ModelParams) -> float:
    """Concurrence from a measured susceptibility.

    Subtracts the monomer Curie term and applies
    C = max(0, 1 - 3 k_B T (chi - C/T) / (g mu_B)^2).  With chi produced by
    ``chi_total`` this matches ``concurrence_closed`` to rounding.
    """
    _check_temperature(temperature)
    x = reduced_susceptibility(chi - params.curie_c / temperature, temperature, params.g)
    return max(0.0, 1.0 - 3.0 * x)


def bell_closed(params: ModelParams, temperature: float) -> float:
    """|<B>| = 4 sqrt(2) |2/(3+K) - 1/2| for the optimal direction set."""
    x = reduced_chi_dimer(params.j_over_kb, temperature)
    return _FOUR_SQRT2 * abs(x - 0.5)


def bell_from_chi(chi, temperature: float, params: ModelParams) -> float:
    """|<B>| from a measured susceptibility (monomer term subtracted)."""
    _check_temperature(temperature)
    x = reduced_susceptibility(chi - params.curie_c / temperature, temperature, params.g)
    return _FOUR_SQRT2 * abs(x - 0.5)


def bisect_root(func, lo: float, hi: float, xtol: float = 1e-6) -> float:
    """Bisection root of a scalar function with a sign change on [lo, hi]."""
    f_lo = func(lo)
    f_hi = func(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        f_mid = func(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def thresholds(params: ModelParams, plateau_epsilon: float = 0.01) -> ThresholdSet:
    """Critical temperatures T_plateau < T_Bell < T_entanglement.

    Closed forms are used; each is cross-checked against a bisection root of
    the corresponding curve to 1e-6 K.  Requires an antiferromagnetic
    coupling (J < 0); otherwise the quantifiers never reach their critical
    values and :class:`NotAntiferromagneticError` is raised.
    """
    if params.j_over_kb >= 0.0:
        raise NotAntiferromagneticError(
            f"thresholds require J/k_B < 0, got {params.j_over_kb}"
        )
    if not 0.0 < plateau_epsilon < 1.0:
        raise ValueError(f"plateau_epsilon must be in (0, 1), got {plateau_epsilon}")

    j = params.j_over_kb
    t_entanglement = -j / math.log(3.0)
    t_bell = -j / math.log(5.0 + 4.0 * math.sqrt(2.0))
    t_plateau = -j / math.log(6.0 / plateau_epsilon - 3.0)

    # x(T) is strictly increasing, so each criterion is a simple sign change.
    checks = (
        (t_entanglement, lambda t: reduced_chi_dimer(j, t) - 1.0 / 3.0),
        (t_bell, lambda t: bell_closed(params, t) - 2.0),
        (t_plateau, lambda t: concurrence_closed(params, t) - (1.0 - plateau_epsilon)),
    )
    for closed, curve in checks:
        root = bisect_root(curve, 0.5 * closed, 2.0 * closed, xtol=1e-6)
        if abs(root - closed) > 1e-6:
            raise RuntimeError(
                f"closed-form threshold {closed} disagrees with bisection root {root}"
            )

    return ThresholdSet(
        t_entanglement=t_entanglement,
        t_bell=t_bell,
        t_plateau=t_plateau,
        plateau_epsilon=plateau_epsilon,
    )
