"""Dense complex linear algebra and spin-operator construction.

Everything here operates on plain ``numpy.ndarray`` objects with dtype
``complex128``.  Conventions fixed once for the whole library:

* qubit 0 is the leftmost tensor factor,
* the two-qubit computational basis is ordered |00>, |01>, |10>, |11>,
* spin operators are S = sigma/2 (hbar = 1).

The Hermitian eigensolver is a cyclic Jacobi sweep, which is simple,
dependency-free and unconditionally stable at the dense sizes this
library works with (dimension <= 4096).
"""

from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionMismatchError,
    DimensionTooLargeError,
    NotHermitianError,
    SiteOutOfRangeError,
    TooManySitesError,
)

HERMITIAN_ATOL = 1e-12
EIG_DIM_CAP = 4096
MAX_SITES = 12

IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


class EigenDecomposition(NamedTuple):
    """Eigenvalues in ascending order and matching orthonormal column vectors."""

    values: np.ndarray
    vectors: np.ndarray


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def is_hermitian(a: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return bool(np.max(np.abs(a - a.conj().T)) <= atol)


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """One two-sided unitary rotation zeroing a[p, q] (and a[q, p]) in place."""
    apq = a[p, q]
    r = abs(apq)
    phase = apq / r
    tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
    if tau >= 0.0:
        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c

    # Columns: A <- A U with U[p,p]=U[q,q]=c, U[p,q]=s*phase, U[q,p]=-s*conj(phase)
    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - s * np.conj(phase) * col_q
    a[:, q] = s * phase * col_p + c * col_q
    # Rows: A <- U^dagger A
    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - s * phase * row_q
    a[q, :] = s * np.conj(phase) * row_p + c * row_q
    # Exact zeros on the annihilated pair; diagonal stays real.
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real

    vcol_p = v[:, p].copy()
    vcol_q = v[:, q].copy()
    v[:, p] = c * vcol_p - s * np.conj(phase) * vcol_q
    v[:, q] = s * phase * vcol_p + c * vcol_q


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def hermitian_eig(a: np.ndarray) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Sweeps stop once the off-diagonal Frobenius norm falls below
    1e-13 * ||A||_F (at most 100 sweeps).  Eigenvalues are returned in
    ascending order; each eigenvector's phase is fixed by making its first
    component with |v| > 1e-12 real and positive, so the decomposition is
    deterministic.

    Raises
    ------
    NotHermitianError
        if ``a`` is not Hermitian within 1e-12 absolute.
    DimensionTooLargeError
        above the 4096-dimension cap.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > EIG_DIM_CAP:
        raise DimensionTooLargeError(f"dimension {n} exceeds cap {EIG_DIM_CAP}")
    a = a.astype(complex, copy=False)
    if not is_hermitian(a):
        raise NotHermitianError("matrix is not Hermitian to 1e-12 absolute")

    work = 0.5 * (a + a.conj().T)  # remove the (tolerated) asymmetry exactly
    v = np.eye(n, dtype=complex)
    norm_a = float(np.linalg.norm(work))
    threshold = 1e-13 * norm_a
    if n > 1 and norm_a > 0.0:
        # Rotations on elements this small cannot move the off-diagonal norm
        # past the threshold; skipping them keeps sweeps O(n^2) when nearly done.
        skip = threshold / (n * n)
        for _ in range(100):
            if _offdiag_norm(work) <= threshold:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    if abs(work[p, q]) > skip:
                        _jacobi_rotate(work, v, p, q)

    values = np.diag(work).real.copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = v[:, order]
    for k in range(n):
        col = vectors[:, k]
        nonzero = np.nonzero(np.abs(col) > 1e-12)[0]
        if nonzero.size:
            lead = col[nonzero[0]]
            vectors[:, k] = col * (np.conj(lead) / abs(lead))
    return EigenDecomposition(values=values, vectors=vectors)


def partial_trace(rho: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out all subsystems not listed in ``keep``.

    ``dims`` lists the subsystem dimensions left-to-right; their product must
    equal the matrix dimension.  Kept subsystems stay in ascending original
    order.  Trace and Hermiticity are preserved exactly (sums only).
    """
    rho = np.asarray(rho, dtype=complex)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if rho.ndim != 2 or rho.shape != (total, total):
        raise DimensionMismatchError(
            f"matrix shape {rho.shape} does not match subsystem dims {dims}"
        )
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise DimensionMismatchError(f"keep indices {keep} out of range for {len(dims)} subsystems")

    n = len(dims)
    tensor = rho.reshape(dims + dims)
    remaining = n
    for i in [j for j in range(n) if j not in keep][::-1]:
        tensor = np.trace(tensor, axis1=i, axis2=i + remaining)
        remaining -= 1
    kept_dim = int(np.prod([dims[k] for k in keep]))
    return tensor.reshape(kept_dim, kept_dim)


def spin_operator(axis: str, site: int, n_sites: int) -> np.ndarray:
    """S_axis = sigma_axis / 2 acting on ``site``, identity elsewhere.

    Site 0 is the leftmost tensor factor.
    """
    if axis not in PAULI:
        raise ValueError(f"axis must be one of 'x', 'y', 'z', got {axis!r}")
    if not 1 <= n_sites <= MAX_SITES:
        raise TooManySitesError(f"n_sites must be in [1, {MAX_SITES}], got {n_sites}")
    if not 0 <= site < n_sites:
        raise SiteOutOfRangeError(f"site {site} out of range for {n_sites} sites")
    op = np.ones((1, 1), dtype=complex)
    for k in range(n_sites):
        factor = 0.5 * PAULI[axis] if k == site else IDENTITY_2
        op = np.kron(op, factor)
    return op


def total_sz_diagonal(n_sites: int) -> np.ndarray:
    """Diagonal of sum_i S_i^z in the computational basis (bit 0 = spin up)."""
    if not 1 <= n_sites <= MAX_SITES:
        raise TooManySitesError(f"n_sites must be in [1, {MAX_SITES}], got {n_sites}")
    basis = np.arange(2**n_sites)
    mz = np.zeros(2**n_sites)
    for site in range(n_sites):
        bit = (basis >> (n_sites - 1 - site)) & 1
        mz += 0.5 - bit.astype(float)
    return mz
