"""Entanglement and nonlocality measures for two-qubit density matrices.

Three quantifiers are provided for an arbitrary 4x4 density matrix rho:

* ``concurrence`` -- the standard spin-flip entanglement monotone
  C = max(0, sqrt(L1) - sqrt(L2) - sqrt(L3) - sqrt(L4)) where the L's are
  the (decreasingly ordered) eigenvalues of
  R = rho (sy x sy) rho* (sy x sy).
* ``bell_expectation`` -- <B> for the four-direction Bell-CHSH operator
  B = n1.s x (n2.s - n4.s) + n3.s x (n2.s + n4.s); |<B>| <= 2 for every
  separable state, 2*sqrt(2) at most.
* ``chsh_maximum`` -- the direction-set optimum 2*sqrt(u1+u2) from the two
  largest eigenvalues of T^T T, T_ab = tr(rho sa x sb).  It upper-bounds
  |bell_expectation| over all direction sets, so it certifies whether a
  chosen set is optimal.

``DEFAULT_BELL_DIRECTIONS`` is the set that maximally violates the
inequality for the antiferromagnetic-dimer ground state; with it the Bell
operator reduces to sqrt(2)*(sz x sz + sx x sx).

There is also ``witness_from_chi``, the susceptibility-based entanglement
witness for N spin-S particles,

    EW(N) = 3 k_B T chibar / ((g mu_B)^2 N S) - 1,

negative exactly when the magnetometry data certifies entanglement.  The
supplied chibar is taken to be already averaged over the three orthogonal
field directions (for powder/isotropic data that is the measured chi).
"""

from dataclasses import dataclass

import numpy as np

from .constants import reduced_susceptibility
from .errors import InvalidStateError, NonPositiveTemperatureError
from .quantum import SIGMA_X, SIGMA_Y, SIGMA_Z, hermitian_eig, kron

PSD_CLAMP = 1e-10  # negative-eigenvalue tolerance matching the eigensolver

_SIGMA_VEC = (SIGMA_X, SIGMA_Y, SIGMA_Z)
_YY = kron(SIGMA_Y, SIGMA_Y)


@dataclass
class BellDirections:
    """Four unit vectors defining a Bell-CHSH measurement set."""

    n1: np.ndarray
    n2: np.ndarray
    n3: np.ndarray
    n4: np.ndarray

    def __post_init__(self):
        for name in ("n1", "n2", "n3", "n4"):
            vec = np.asarray(getattr(self, name), dtype=float)
            if vec.shape != (3,):
                raise ValueError(f"{name} must be a real 3-vector")
            if abs(np.linalg.norm(vec) - 1.0) > 1e-12:
                raise ValueError(f"{name} must have unit norm to 1e-12")
            setattr(self, name, vec)


DEFAULT_BELL_DIRECTIONS = BellDirections(
    n1=np.array([0.0, 0.0, -1.0]),
    n2=np.array([-1.0, 0.0, -1.0]) / np.sqrt(2.0),
    n3=np.array([-1.0, 0.0, 0.0]),
    n4=np.array([-1.0, 0.0, 1.0]) / np.sqrt(2.0),
)


def direction_operator(n) -> np.ndarray:
    """Spin projection n . sigma for a real 3-vector n."""
    n = np.asarray(n, dtype=float)
    return n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z


def check_state(rho: np.ndarray) -> np.ndarray:
    """Validate a 4x4 density matrix; returns it as complex ndarray.

    Raises :class:`InvalidStateError` unless rho is Hermitian (1e-12),
    unit trace (1e-12) and positive semidefinite (eigenvalues >= -1e-10).
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidStateError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
        raise InvalidStateError("density matrix is not Hermitian to 1e-12")
    if abs(np.trace(rho).real - 1.0) > 1e-12 or abs(np.trace(rho).imag) > 1e-12:
        raise InvalidStateError("density matrix does not have unit trace to 1e-12")
    eigenvalues = hermitian_eig(rho).values
    if eigenvalues[0] < -PSD_CLAMP:
        raise InvalidStateError(f"density matrix has eigenvalue {eigenvalues[0]:.3e} < -1e-10")
    return rho


def _matrix_sqrt_psd(rho: np.ndarray) -> np.ndarray:
    dec = hermitian_eig(rho)
    values = np.where(dec.values > 0.0, dec.values, 0.0)
    return (dec.vectors * np.sqrt(values)) @ dec.vectors.conj().T


def concurrence(rho: np.ndarray) -> float:
    """Concurrence of a two-qubit density matrix, in [0, 1].

    The sqrt(L_i) of the non-Hermitian R = rho (sy x sy) rho* (sy x sy) are
    the singular values of M = (sy x sy) sqrt(rho)* (sy x sy) sqrt(rho),
    since M^dagger M equals the Hermitian-equivalent product
    sqrt(rho) (sy x sy) rho* (sy x sy) sqrt(rho).  They are read off as the
    positive eigenvalues of the augmented Hermitian matrix [[0, M], [M+, 0]],
    so only the Hermitian eigensolver is ever needed, and -- unlike
    diagonalizing M^dagger M itself -- the small sqrt(L_i) keep full
    absolute precision instead of being squared below round-off.  Negative
    round-off values are clamped to zero.
    """
    rho = check_state(rho)
    root = _matrix_sqrt_psd(rho)
    flipped_root = _YY @ root.conj() @ _YY  # = sqrt of (sy x sy) rho* (sy x sy)
    m = flipped_root @ root
    augmented = np.zeros((8, 8), dtype=complex)
    augmented[:4, 4:] = m
    augmented[4:, :4] = m.conj().T
    roots = hermitian_eig(augmented).values[::-1][:4]  # singular values of M
    roots = np.where(roots > 0.0, roots, 0.0)
    return max(0.0, roots[0] - roots[1] - roots[2] - roots[3])


def bell_operator(dirs: BellDirections = DEFAULT_BELL_DIRECTIONS) -> np.ndarray:
    """The 4x4 Bell-CHSH operator for a direction set."""
    op_1 = direction_operator(dirs.n1)
    op_2 = direction_operator(dirs.n2)
    op_3 = direction_operator(dirs.n3)
    op_4 = direction_operator(dirs.n4)
    return kron(op_1, op_2 - op_4) + kron(op_3, op_2 + op_4)


def bell_expectation(rho: np.ndarray, dirs: BellDirections = DEFAULT_BELL_DIRECTIONS) -> float:
    """Signed mean value <B> = tr(rho B) for the given direction set."""
    rho = check_state(rho)
    return float(np.trace(rho @ bell_operator(dirs)).real)


def correlation_matrix(rho: np.ndarray) -> np.ndarray:
    """3x3 spin-correlation matrix T_ab = tr(rho sigma_a x sigma_b)."""
    rho = check_state(rho)
    t = np.empty((3, 3))
    for a in range(3):
        for b in range(3):
            t[a, b] = np.trace(rho @ kron(_SIGMA_VEC[a], _SIGMA_VEC[b])).real
    return t


def chsh_maximum(rho: np.ndarray) -> float:
    """Largest attainable |<B>| over all direction sets: 2*sqrt(u1 + u2).

    u1 >= u2 are the two largest eigenvalues of T^T T.  A value above 2
    means some direction set violates the CHSH inequality; 2*sqrt(2) is the
    absolute ceiling.
    """
    t = correlation_matrix(rho)
    u = hermitian_eig(t.T @ t).values  # ascending, all >= 0
    u = np.where(u > 0.0, u, 0.0)
    return 2.0 * float(np.sqrt(u[-1] + u[-2]))


def witness_from_chi(chi_bar, temperature, g, n_spins: int, spin: float) -> float:
    """Susceptibility entanglement witness EW(N); negative certifies entanglement.

    ``chi_bar`` is the direction-averaged susceptibility per formula unit in
    mu_B FU^-1 Oe^-1, ``n_spins`` the number of spin-``spin`` particles the
    normalization counts.
    """
    if temperature <= 0.0:
        raise NonPositiveTemperatureError(f"temperature must be > 0 K, got {temperature}")
    if n_spins < 1:
        raise ValueError(f"n_spins must be >= 1, got {n_spins}")
    if spin <= 0.0:
        raise ValueError(f"spin must be positive, got {spin}")
    x = reduced_susceptibility(chi_bar, temperature, g)
    return 3.0 * x / (n_spins * spin) - 1.0
