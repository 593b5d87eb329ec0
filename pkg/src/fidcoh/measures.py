"""Coherence measures: Uhlmann fidelity, l1 norm, closed forms, convex-roof estimator.

The measure evaluated here is the infidelity-based one: on a pure state it is
``sqrt(1 - max_i |c_i|^2)``, extended to mixed states by minimizing the
ensemble average over all pure-state decompositions. For qubits the minimum
has the closed form ``f(|rho_01|)`` with ``f`` as in :func:`f_of`; in general
it is estimated numerically from above by :func:`c_f_roof_estimate`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    RANK_TOL,
    STRUCTURAL_TOL,
    DimensionError,
    ValidationError,
    _as_square_matrix,
    as_state_vector,
    hermitian_eig,
    matrix_sqrt_psd,
    rng_from_seed,
    validate_density,
)


def uhlmann_fidelity(rho, sigma, tol: float = STRUCTURAL_TOL) -> float:
    """Uhlmann fidelity between two density matrices.

    Computed as the squared sum of singular values of ``sqrt(rho) @ sqrt(sigma)``,
    which equals the trace-of-nested-roots definition while needing one matrix
    root fewer (better conditioned near rank deficiency).
    """
    A = _as_square_matrix(rho, "rho")
    B = _as_square_matrix(sigma, "sigma")
    if A.shape != B.shape:
        raise DimensionError(f"dimension mismatch: {A.shape[0]} vs {B.shape[0]}")
    prod = matrix_sqrt_psd(A, tol) @ matrix_sqrt_psd(B, tol)
    sv = np.linalg.svd(prod, compute_uv=False)
    return float(sv.sum() ** 2)


def c_l1(rho) -> float:
    """l1 coherence: sum of off-diagonal moduli."""
    A = _as_square_matrix(rho)
    mags = np.abs(A)
    return float(mags.sum() - np.trace(mags))


def c_f_pure(psi, tol: float = STRUCTURAL_TOL) -> float:
    """Pure-state coherence ``sqrt(1 - max_i |c_i|^2)``.

    Zero exactly when the state is a basis state up to phase.
    """
    v = as_state_vector(psi, tol)
    top = float((v.real**2 + v.imag**2).max())
    return math.sqrt(max(0.0, 1.0 - top))


def dominant_index(psi, tol: float = STRUCTURAL_TOL) -> int:
    """Index of the largest amplitude modulus (smallest index on ties)."""
    v = as_state_vector(psi, tol)
    return int(np.argmax(v.real**2 + v.imag**2))


def f_of(x: float, tol: float = STRUCTURAL_TOL) -> float:
    """The qubit coherence response ``sqrt((1 - sqrt(1 - 4x^2)) / 2)``.

    Convex and increasing on ``[0, 1/2]``; inputs within ``tol`` outside that
    interval are clamped, anything further raises. Evaluated in the
    cancellation-free form ``x * sqrt(2 / (1 + sqrt(1 - 4x^2)))``.
    """
    if x < -tol or x > 0.5 + tol:
        raise ValidationError(f"f_of argument {x!r} outside [0, 1/2]")
    x = min(max(x, 0.0), 0.5)
    return x * math.sqrt(2.0 / (1.0 + math.sqrt(max(0.0, 1.0 - 4.0 * x * x))))


def c_f_qubit(rho, tol: float = STRUCTURAL_TOL) -> float:
    """Exact qubit coherence ``f_of(|rho_01|)``. Zero iff the state is diagonal."""
    A = _as_square_matrix(rho)
    if A.shape[0] != 2:
        raise DimensionError(f"closed form requires dim 2, got dim {A.shape[0]}")
    return f_of(abs(A[0, 1]), tol)


@dataclass(frozen=True)
class Ensemble:
    """Weighted pure-state decomposition ``{(p_n, |phi_n>)}`` of a density matrix."""

    members: tuple[tuple[float, np.ndarray], ...]

    def mixture(self) -> np.ndarray:
        """The density matrix this ensemble realizes."""
        dim = self.members[0][1].shape[0]
        out = np.zeros((dim, dim), dtype=complex)
        for weight, psi in self.members:
            out += weight * np.outer(psi, psi.conj())
        return out

    def average_coherence(self) -> float:
        """Weighted average of the members' pure-state coherence."""
        return float(sum(w * c_f_pure(psi) for w, psi in self.members))

    def realizes(self, rho, tol: float = STRUCTURAL_TOL) -> bool:
        """True iff the mixture reproduces ``rho`` entrywise within ``tol``."""
        return bool(np.abs(self.mixture() - np.asarray(rho, dtype=complex)).max() <= tol)


def optimal_qubit_ensemble(rho, tol: float = STRUCTURAL_TOL) -> Ensemble:
    """Minimizing two-member ensemble for a phase-canonical qubit state.

    Requires a real non-negative off-diagonal (callers canonicalize first,
    see ``transform.canonicalize_qubit_mixed``). Solves ``sqrt(q(1-q)) = rho_01``
    with the root ``q >= 1/2`` and splits the diagonal accordingly; both
    members score exactly ``f_of(rho_01)``.
    """
    A = _as_square_matrix(rho)
    if A.shape[0] != 2:
        raise DimensionError(f"qubit ensemble requires dim 2, got dim {A.shape[0]}")
    off = complex(A[0, 1])
    if abs(off.imag) > tol or off.real < -tol:
        raise ValidationError(
            "off-diagonal must be real non-negative; apply canonicalize_qubit_mixed first"
        )
    x = max(off.real, 0.0)
    root = math.sqrt(max(0.0, 1.0 - 4.0 * x * x))   # root == 2q - 1
    q = 0.5 * (1.0 + root)
    phi1 = np.array([math.sqrt(q), math.sqrt(1.0 - q)], dtype=complex)
    if root < tol:
        # maximally coherent target: both members coincide
        return Ensemble(((1.0, phi1),))
    p1 = (A[0, 0].real - (1.0 - q)) / root
    p1 = min(max(p1, 0.0), 1.0)
    phi2 = np.array([math.sqrt(1.0 - q), math.sqrt(q)], dtype=complex)
    members = [(w, v) for w, v in ((p1, phi1), (1.0 - p1, phi2)) if w > 1e-15]
    return Ensemble(tuple(members))


@dataclass(frozen=True)
class RoofConfig:
    """Settings for the convex-roof estimator.

    ``ensemble_size`` of ``None`` means ``rank**2`` of the target state.
    ``max_iterations`` caps coordinate-descent sweeps per restart.
    """

    ensemble_size: int | None = None
    restarts: int = 32
    max_iterations: int = 60
    convergence_tol: float = 1e-8
    seed: int = 0


@dataclass(frozen=True)
class RoofResult:
    value: float
    ensemble: Ensemble
    converged: bool
    iterations_used: int


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_GRID = 16          # coarse scan points over one half-period of the rotation angle
_GOLDEN_STEPS = 18  # bracket shrink 0.618**18, angle resolution ~3e-5 rad


def _member_costs(x: np.ndarray) -> np.ndarray:
    """Per-member weighted coherence for unnormalized amplitude rows.

    For a row with norm^2 ``p`` and largest modulus^2 ``m`` the contribution is
    ``p * sqrt(1 - m/p) = sqrt(p (p - m))``; zero rows contribute zero.
    """
    absq = x.real**2 + x.imag**2
    return _costs_from_absq(absq)


def _costs_from_absq(absq: np.ndarray) -> np.ndarray:
    s = absq.sum(axis=-1)
    top = absq.max(axis=-1)
    return np.sqrt(np.clip(s * (s - top), 0.0, None))


def _disjoint_pair_rounds(m: int) -> list[list[tuple[int, int]]]:
    """Round-robin schedule: each round pairs up disjoint rows, all pairs covered."""
    items: list[int | None] = list(range(m))
    if m % 2:
        items.append(None)
    n = len(items)
    rounds = []
    for _ in range(n - 1):
        pairs = []
        for k in range(n // 2):
            x, y = items[k], items[n - 1 - k]
            if x is not None and y is not None:
                pairs.append((min(x, y), max(x, y)))
        rounds.append(pairs)
        items = [items[0], items[-1], *items[1:-1]]
    return rounds


def c_f_roof_estimate(rho, cfg: RoofConfig | None = None) -> RoofResult:
    """Upper-bound estimate of the convex-roof coherence of ``rho``.

    Every size-m ensemble of ``rho`` is an isometry applied to the weighted
    eigenvectors, so the search runs over m x rank matrices with orthonormal
    columns: seeded random restarts of gradient-free coordinate descent on
    Givens-rotation parameters (real and imaginary planes per row pair), each
    step refined by golden-section line search. Restarts evolve in lockstep
    but independently; restart ``r`` draws its start from child seed
    ``(cfg.seed, r)`` and ties go to the lowest restart index.

    The input is phase-canonicalized first (first-row phases rotated away by
    a diagonal unitary, which cannot change the measure), so equal-seed runs
    agree for inputs that differ by diagonal-unitary conjugation. Returned
    ensemble members are rotated back to realize the original ``rho``.
    """
    cfg = RoofConfig() if cfg is None else cfg
    if cfg.restarts < 1:
        raise ValidationError("restarts must be >= 1")
    if cfg.max_iterations < 1:
        raise ValidationError("max_iterations must be >= 1")
    A = validate_density(rho)
    w = np.exp(1j * np.angle(A[0]))   # w[0] == 1, diag(w) rho diag(w)^+ has real row 0
    Ac = A * np.outer(w, w.conj())
    eig = hermitian_eig(Ac)
    keep = eig.eigenvalues > RANK_TOL
    lam = eig.eigenvalues[keep]
    vecs = eig.eigenvectors[:, keep]
    rank = int(lam.size)
    back = w.conj()

    if rank == 1:
        psi = back * vecs[:, 0]
        return RoofResult(c_f_pure(psi), Ensemble(((1.0, psi),)), True, 0)

    m = rank * rank if cfg.ensemble_size is None else int(cfg.ensemble_size)
    if m < rank:
        raise ValidationError(f"ensemble_size {m} is below the state rank {rank}")

    D = np.sqrt(lam)[:, None] * vecs.T             # rows: weighted eigenvectors
    n_restarts = int(cfg.restarts)
    T = np.empty((n_restarts, m, rank), dtype=complex)
    T[0] = np.eye(m, rank)                         # eigen-ensemble start
    for r in range(1, n_restarts):
        g = rng_from_seed(cfg.seed, r)
        G = g.standard_normal((m, rank)) + 1j * g.standard_normal((m, rank))
        T[r] = np.linalg.qr(G)[0]
    psi = T @ D                                    # (restarts, m, dim), unnormalized members
    contrib = _member_costs(psi)
    total = contrib.sum(axis=1)

    rounds = _disjoint_pair_rounds(m)
    half = math.pi / _GRID
    grid = np.linspace(-math.pi / 2, math.pi / 2, _GRID, endpoint=False)
    # rotated row moduli are |a'|^2 = c^2 X + s^2 Y -+ 2cs G with G the interference
    # term, so the whole search runs in real arithmetic
    cos2_g = np.cos(grid) ** 2
    sin2_g = np.sin(grid) ** 2
    cross_g = 2.0 * np.cos(grid) * np.sin(grid)

    # converged restarts retire their rows into the *_final arrays so late
    # sweeps only pay for the restarts still descending
    psi_final = psi.copy()
    total_final = total.copy()
    converged = np.zeros(n_restarts, dtype=bool)
    sweeps = np.zeros(n_restarts, dtype=int)
    live = np.arange(n_restarts)
    best_seen = float(total.min())
    stable_sweeps = 0

    iteration = 0
    while iteration < cfg.max_iterations and live.size:
        iteration += 1
        before = total.copy()
        for pair_list in rounds:
            ii = [i for i, _ in pair_list]
            jj = [j for _, j in pair_list]
            for gen in (1.0 + 0.0j, 1.0j):
                a = psi[:, ii, :]                  # (live, pairs, dim) copies
                b = psi[:, jj, :]
                X = a.real**2 + a.imag**2
                Y = b.real**2 + b.imag**2
                Z = a.conj() * b
                G = Z.imag if gen == 1.0j else Z.real
                base = contrib[:, ii] + contrib[:, jj]

                qa = cos2_g[:, None] * X[:, :, None, :] + sin2_g[:, None] * Y[:, :, None, :] \
                    - cross_g[:, None] * G[:, :, None, :]
                qb = sin2_g[:, None] * X[:, :, None, :] + cos2_g[:, None] * Y[:, :, None, :] \
                    + cross_g[:, None] * G[:, :, None, :]
                vals = _costs_from_absq(qa) + _costs_from_absq(qb)     # (live, pairs, K)
                kmin = vals.argmin(axis=-1)
                fbest = np.take_along_axis(vals, kmin[..., None], -1)[..., 0]
                tbest = grid[kmin]
                lo = tbest - half
                hi = tbest + half
                for _ in range(_GOLDEN_STEPS):
                    span = hi - lo
                    probes = np.stack([hi - _GOLDEN * span, lo + _GOLDEN * span])
                    ct = np.cos(probes)
                    st = np.sin(probes)
                    c2 = (ct * ct)[..., None]
                    s2 = (st * st)[..., None]
                    cs = (2.0 * ct * st)[..., None]
                    qa = c2 * X + s2 * Y - cs * G                      # (2, live, pairs, dim)
                    qb = s2 * X + c2 * Y + cs * G
                    fpair = _costs_from_absq(qa) + _costs_from_absq(qb)
                    for probe in (0, 1):
                        upd = fpair[probe] < fbest
                        tbest = np.where(upd, probes[probe], tbest)
                        fbest = np.where(upd, fpair[probe], fbest)
                    shrink_right = fpair[0] < fpair[1]
                    hi = np.where(shrink_right, probes[1], hi)
                    lo = np.where(shrink_right, lo, probes[0])
                take = fbest < base
                if not take.any():
                    continue
                ct = np.cos(tbest)[..., None]
                st = np.sin(tbest)[..., None]
                na = ct * a - np.conj(gen) * st * b
                nb = gen * st * a + ct * b
                ca = _member_costs(na)
                cb = _member_costs(nb)
                mask = take[..., None]
                psi[:, ii, :] = np.where(mask, na, a)
                psi[:, jj, :] = np.where(mask, nb, b)
                contrib[:, ii] = np.where(take, ca, contrib[:, ii])
                contrib[:, jj] = np.where(take, cb, contrib[:, jj])
                total = total + np.where(take, ca + cb - base, 0.0).sum(axis=1)
        sweeps[live] += 1
        done = (before - total) <= cfg.convergence_tol
        if done.any():
            retired = live[done]
            converged[retired] = True
            psi_final[retired] = psi[done]
            total_final[retired] = total[done]
            keep = ~done
            live = live[keep]
            psi = psi[keep]
            contrib = contrib[keep]
            total = total[keep]
        # stop early once the returned (best-of) value has settled: restarts
        # still crawling at this point are strictly worse than the leader
        best_now = float(min(total.min(), total_final.min())) if live.size else float(total_final.min())
        if best_seen - best_now <= cfg.convergence_tol:
            stable_sweeps += 1
            if stable_sweeps >= 3:
                break
        else:
            stable_sweeps = 0
        best_seen = min(best_seen, best_now)
    settled = stable_sweeps >= 3 or not live.size
    if live.size:
        psi_final[live] = psi
        total_final[live] = total

    best = int(np.argmin(total_final))
    rows = psi_final[best]
    weights = (rows.real**2 + rows.imag**2).sum(axis=1)
    members = tuple(
        (float(p), back * (row / math.sqrt(p)))
        for p, row in zip(weights, rows)
        if p > 1e-15
    )
    ensemble = Ensemble(members)
    return RoofResult(
        ensemble.average_coherence(), ensemble, bool(converged[best] or settled), int(sweeps[best])
    )
