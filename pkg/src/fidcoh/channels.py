"""Kraus-operator machinery for incoherent channels.

A channel is incoherent when every Kraus operator has at most one nonzero
entry per column; that column structure is exactly the statement that each
operator sends basis states to (scaled) basis states, hence diagonal states
to diagonal states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    STRUCTURAL_TOL,
    DimensionError,
    ValidationError,
    _as_square_matrix,
    rng_from_seed,
)


@dataclass(frozen=True)
class ChannelViolation:
    kind: str        # "dimension" | "completeness" | "incoherence"
    detail: str
    magnitude: float


class ChannelValidationError(ValidationError):
    """Raised with the full list of violated channel conditions."""

    def __init__(self, violations: list[ChannelViolation]):
        self.violations = tuple(violations)
        super().__init__(
            "; ".join(f"{v.kind}: {v.detail} (magnitude {v.magnitude:.3e})" for v in violations)
        )


@dataclass(frozen=True)
class IncoherentChannel:
    """Validated incoherent channel: complete Kraus set with column structure."""

    kraus_ops: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.kraus_ops[0].shape[0]

    def __len__(self) -> int:
        return len(self.kraus_ops)


@dataclass(frozen=True)
class SelectiveOutcome:
    probability: float
    post_state: np.ndarray


@dataclass(frozen=True)
class MeasurementOutcomes:
    """Per-Kraus outcomes of a selective measurement; drops are counted, not hidden."""

    outcomes: tuple[SelectiveOutcome, ...]
    dropped: int

    def __iter__(self):
        return iter(self.outcomes)

    def __len__(self) -> int:
        return len(self.outcomes)


def completeness_residual(ops) -> float:
    """Max-norm distance of ``sum_n K_n^+ K_n`` from the identity."""
    mats = [np.asarray(K, dtype=complex) for K in ops]
    dim = mats[0].shape[0]
    acc = np.zeros((dim, dim), dtype=complex)
    for K in mats:
        acc += K.conj().T @ K
    return float(np.abs(acc - np.eye(dim)).max())


def column_structure_residual(K) -> float:
    """Largest second-biggest column modulus; zero iff one nonzero per column."""
    mags = np.abs(np.asarray(K, dtype=complex))
    if mags.shape[0] == 1:
        return 0.0
    part = np.sort(mags, axis=0)
    return float(part[-2, :].max())


def is_incoherent_kraus(K, tol: float = STRUCTURAL_TOL) -> bool:
    """True iff each column of ``K`` has at most one entry with modulus above ``tol``."""
    return column_structure_residual(_as_square_matrix(K, "Kraus operator")) <= tol


def validate_channel(ops, tol: float = STRUCTURAL_TOL) -> IncoherentChannel:
    """Validate Kraus operators as an incoherent channel.

    All violated conditions are reported together (dimension consistency,
    completeness, per-column incoherence), each with its magnitude.
    """
    ops = list(ops)
    if not ops:
        raise ChannelValidationError(
            [ChannelViolation("dimension", "channel needs at least one Kraus operator", 0.0)]
        )
    violations: list[ChannelViolation] = []
    mats = []
    for n, K in enumerate(ops):
        K = np.asarray(K, dtype=complex)
        if K.ndim != 2 or K.shape[0] != K.shape[1]:
            violations.append(
                ChannelViolation("dimension", f"operator {n} has shape {K.shape}, expected square", 0.0)
            )
            continue
        mats.append(K)
    if violations:
        raise ChannelValidationError(violations)
    dim = mats[0].shape[0]
    for n, K in enumerate(mats):
        if K.shape[0] != dim:
            violations.append(
                ChannelViolation(
                    "dimension", f"operator {n} is {K.shape[0]}x{K.shape[0]}, expected {dim}x{dim}", 0.0
                )
            )
    if violations:
        raise ChannelValidationError(violations)

    residual = completeness_residual(mats)
    if residual > tol:
        violations.append(
            ChannelViolation("completeness", "sum K^+ K deviates from identity", residual)
        )
    for n, K in enumerate(mats):
        mags = np.abs(K)
        if mags.shape[0] == 1:
            continue
        part = np.sort(mags, axis=0)
        for col in range(dim):
            second = float(part[-2, col])
            if second > tol:
                violations.append(
                    ChannelViolation(
                        "incoherence",
                        f"operator {n} column {col} has more than one nonzero entry",
                        second,
                    )
                )
    if violations:
        raise ChannelValidationError(violations)
    return IncoherentChannel(tuple(mats))


def apply_channel(channel: IncoherentChannel, rho) -> np.ndarray:
    """Evaluate ``sum_n K_n rho K_n^+`` (result re-hermitized against roundoff)."""
    A = _as_square_matrix(rho, "density matrix")
    if A.shape[0] != channel.dim:
        raise DimensionError(f"state dim {A.shape[0]} does not match channel dim {channel.dim}")
    out = np.zeros_like(A)
    for K in channel.kraus_ops:
        out += K @ A @ K.conj().T
    return 0.5 * (out + out.conj().T)


def selective_outcomes(
    channel: IncoherentChannel, rho, prob_floor: float = 1e-12
) -> MeasurementOutcomes:
    """Per-Kraus outcomes ``(p_n, K_n rho K_n^+ / p_n)``.

    Outcomes with probability at or below ``prob_floor`` are dropped and
    counted in the result's ``dropped`` field so probability bookkeeping
    stays auditable.
    """
    A = _as_square_matrix(rho, "density matrix")
    if A.shape[0] != channel.dim:
        raise DimensionError(f"state dim {A.shape[0]} does not match channel dim {channel.dim}")
    outcomes = []
    dropped = 0
    for K in channel.kraus_ops:
        raw = K @ A @ K.conj().T
        p = float(np.trace(raw).real)
        if p <= prob_floor:
            dropped += 1
            continue
        post = raw / p
        outcomes.append(SelectiveOutcome(p, 0.5 * (post + post.conj().T)))
    return MeasurementOutcomes(tuple(outcomes), dropped)


def random_incoherent_channel(dim: int, n_kraus: int, seed) -> IncoherentChannel:
    """Seeded random incoherent channel, complete by construction.

    Each operator's column targets form a uniform random permutation, so for
    any pair of distinct columns no operator maps them to the same row and
    ``sum K^+ K`` is exactly diagonal; per-column amplitude vectors over the
    operators are normalized to make it exactly the identity.
    """
    if dim < 1:
        raise ValidationError("dim must be >= 1")
    if n_kraus < 1:
        raise ValidationError("n_kraus must be >= 1")
    rng = rng_from_seed(seed)
    targets = np.stack([rng.permutation(dim) for _ in range(n_kraus)])
    amps = rng.standard_normal((n_kraus, dim)) + 1j * rng.standard_normal((n_kraus, dim))
    amps /= np.linalg.norm(amps, axis=0, keepdims=True)
    ops = np.zeros((n_kraus, dim, dim), dtype=complex)
    for n in range(n_kraus):
        ops[n, targets[n], np.arange(dim)] = amps[n]
    return IncoherentChannel(tuple(ops))


def incoherent_unitary(phases, permutation) -> np.ndarray:
    """Unitary sending ``|i> -> exp(1j phases[i]) |permutation[i]>``."""
    perm = np.asarray(permutation, dtype=int)
    ph = np.asarray(phases, dtype=float)
    dim = perm.size
    if sorted(perm.tolist()) != list(range(dim)):
        raise ValidationError(f"permutation {perm.tolist()} is not a bijection on 0..{dim - 1}")
    if ph.size != dim:
        raise DimensionError(f"need {dim} phases, got {ph.size}")
    U = np.zeros((dim, dim), dtype=complex)
    U[perm, np.arange(dim)] = np.exp(1j * ph)
    return U
