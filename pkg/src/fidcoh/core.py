"""Complex-matrix foundations: state validation, Hermitian eigensolvers, seeded sampling.

States are plain numpy arrays in a fixed reference basis: a pure state is a
normalized 1-D complex vector, a density matrix a Hermitian PSD unit-trace
2-D complex array. The validators below are the constructors; everything
downstream assumes validated inputs.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

#: Slack allowed when validating user-supplied states.
STRUCTURAL_TOL = 1e-9
#: Budget for decomposition residuals (orthonormality, reconstruction).
NUMERIC_TOL = 1e-10
#: Eigenvalues at or below this threshold do not count toward the numerical rank.
RANK_TOL = 1e-10


class ValidationError(ValueError):
    """An input fails a structural requirement."""


class HermiticityError(ValidationError):
    """Matrix is not Hermitian within tolerance."""


class TraceError(ValidationError):
    """Trace differs from 1 beyond tolerance."""


class NotPSDError(ValidationError):
    """Matrix has an eigenvalue below the PSD tolerance."""


class DimensionError(ValidationError):
    """Operand dimensions are inconsistent."""


class EigSystem(NamedTuple):
    eigenvalues: np.ndarray   # real, ascending
    eigenvectors: np.ndarray  # orthonormal columns, eigenvectors[:, k] <-> eigenvalues[k]


def rng_from_seed(seed, *stream) -> np.random.Generator:
    """Counter-based Philox generator keyed by ``(seed, *stream)``.

    Sub-tasks (restarts, trials) derive child generators by hashing the master
    seed together with their index through ``numpy.random.SeedSequence``, so
    streams are independent of scheduling and call order. A ready-made
    ``Generator`` is passed through unchanged.
    """
    if isinstance(seed, np.random.Generator):
        if stream:
            raise ValidationError("stream indices require an integer master seed")
        return seed
    entropy = (int(seed),) + tuple(int(s) for s in stream)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def _as_square_matrix(M, name: str = "matrix") -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {A.shape}")
    return A


def as_state_vector(psi, tol: float = STRUCTURAL_TOL) -> np.ndarray:
    """Coerce to a normalized 1-D complex amplitude vector.

    Norms within ``tol`` of 1 are renormalized exactly; anything further off
    is rejected.
    """
    v = np.asarray(psi, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"state vector must be 1-D and nonempty, got shape {v.shape}")
    nsq = float((v.real**2 + v.imag**2).sum())
    if abs(nsq - 1.0) > tol:
        raise ValidationError(f"state vector norm^2 is {nsq:.12g}, not 1 within {tol:g}")
    if nsq != 1.0:
        v = v / math.sqrt(nsq)
    return v


def hermitian_eig(M, tol: float = STRUCTURAL_TOL) -> EigSystem:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    dim 2 uses the exact closed form (branch-free for the hot qubit loops);
    larger matrices go through LAPACK's Hermitian solver.
    """
    A = _as_square_matrix(M)
    asym = float(np.abs(A - A.conj().T).max())
    if asym > tol:
        raise HermiticityError(f"matrix is not Hermitian: max asymmetry {asym:.3e}")
    if A.shape[0] == 2:
        return _eig2(A)
    vals, vecs = np.linalg.eigh(A)
    return EigSystem(vals, vecs)


def _eig2(A: np.ndarray) -> EigSystem:
    a = A[0, 0].real
    c = A[1, 1].real
    b = complex(A[0, 1])
    half = 0.5 * (a + c)
    delta = 0.5 * (a - c)
    s = math.hypot(delta, abs(b))
    vals = np.array([half - s, half + s])
    if b == 0:
        if a <= c:
            vecs = np.eye(2, dtype=complex)
        else:
            vecs = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        return EigSystem(vals, vecs)
    # pick the component pair that avoids cancellation for the given sign of delta
    if delta >= 0:
        v_lo = np.array([b, -(delta + s)])
    else:
        v_lo = np.array([delta - s, b.conjugate()])
    v_lo = v_lo / np.linalg.norm(v_lo)
    v_hi = np.array([-v_lo[1].conjugate(), v_lo[0].conjugate()])
    return EigSystem(vals, np.column_stack([v_lo, v_hi]))


def matrix_sqrt_psd(M, tol: float = STRUCTURAL_TOL) -> np.ndarray:
    """Hermitian PSD square root via eigendecomposition.

    Eigenvalues in ``[-tol, 0)`` are clipped to zero; anything more negative
    raises :class:`NotPSDError`.
    """
    eig = hermitian_eig(M, tol)
    low = float(eig.eigenvalues[0])
    if low < -tol:
        raise NotPSDError(f"eigenvalue {low:.6g} below -{tol:g}; matrix is not PSD")
    root = (eig.eigenvectors * np.sqrt(np.clip(eig.eigenvalues, 0.0, None))) @ eig.eigenvectors.conj().T
    return 0.5 * (root + root.conj().T)


def validate_density(M, tol: float = STRUCTURAL_TOL) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, PSD within ``tol``.

    Eigenvalues in ``[-tol, 0)`` are clipped to zero and the trace is
    renormalized when it is within ``tol`` of 1; inputs that already satisfy
    everything exactly pass through unchanged.
    """
    A = _as_square_matrix(M, "density matrix")
    asym = float(np.abs(A - A.conj().T).max())
    if asym > tol:
        raise HermiticityError(f"density matrix is not Hermitian: max asymmetry {asym:.3e}")
    tr = complex(np.trace(A))
    if abs(tr - 1.0) > tol:
        raise TraceError(f"trace {tr.real:.12g} differs from 1 by more than {tol:g}")
    eig = hermitian_eig(A, tol)
    low = float(eig.eigenvalues[0])
    if low < -tol:
        raise NotPSDError(f"eigenvalue {low:.6g} below -{tol:g}; not a density matrix")
    if low < 0.0:
        clipped = np.clip(eig.eigenvalues, 0.0, None)
        A = (eig.eigenvectors * clipped) @ eig.eigenvectors.conj().T
        A = 0.5 * (A + A.conj().T)
    tr_now = float(np.trace(A).real)
    if tr_now != 1.0:
        A = A / tr_now
    return A


def is_incoherent(rho, tol: float = STRUCTURAL_TOL) -> bool:
    """True iff every off-diagonal entry has modulus at most ``tol``."""
    A = _as_square_matrix(rho)
    off = np.abs(A).copy()
    np.fill_diagonal(off, 0.0)
    return bool(off.max() <= tol)


def dephase(rho) -> np.ndarray:
    """Project onto the incoherent set: keep the diagonal, zero the rest."""
    A = _as_square_matrix(rho)
    return np.diag(np.diagonal(A))


def random_pure(dim: int, seed) -> np.ndarray:
    """Haar-random pure state: normalized vector of standard complex Gaussians."""
    if dim < 1:
        raise ValidationError("dim must be >= 1")
    rng = rng_from_seed(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rank: int, seed) -> np.ndarray:
    """Random density matrix of the requested rank (normalized Wishart)."""
    if not 1 <= rank <= dim:
        raise ValidationError(f"rank must satisfy 1 <= rank <= dim, got rank={rank}, dim={dim}")
    rng = rng_from_seed(seed)
    G = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    W = G @ G.conj().T
    W = 0.5 * (W + W.conj().T)
    return W / np.trace(W).real


def random_incoherent(dim: int, seed) -> np.ndarray:
    """Random diagonal density matrix with Dirichlet-uniform diagonal."""
    if dim < 1:
        raise ValidationError("dim must be >= 1")
    rng = rng_from_seed(seed)
    return np.diag(rng.dirichlet(np.ones(dim)).astype(complex))
