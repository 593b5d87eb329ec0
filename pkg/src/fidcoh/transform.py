"""Pure-to-qubit state transformations under incoherent operations.

Canonicalizes both endpoints with incoherent unitaries, decides
transformability by comparing coherence values, and constructs the explicit
four-operator incoherent channel that realizes the transformation when the
criterion holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    STRUCTURAL_TOL,
    DimensionError,
    ValidationError,
    _as_square_matrix,
    as_state_vector,
)
from .channels import IncoherentChannel, incoherent_unitary
from .measures import c_f_pure, c_f_qubit

#: Below this margin the degenerate closed forms replace the generic one.
DEGENERATE_TOL = 1e-9


class TransformabilityError(ValidationError):
    """Requested transformation would increase coherence."""


@dataclass(frozen=True)
class TransformProblem:
    """Canonical parameters of a pure-to-qubit transformation.

    ``p`` is the squared large amplitude of the canonical source
    ``sqrt(p)|0> + sqrt(1-p)|1>``; ``q`` and ``p_tilde1`` parameterize the
    canonical target ensemble. The canonicalizers are incoherent unitaries:
    ``source_canonicalizer @ phi`` is the canonical source and
    ``target_canonicalizer rho target_canonicalizer^+`` the canonical target.
    """

    p: float
    q: float
    p_tilde1: float
    source_canonicalizer: np.ndarray
    target_canonicalizer: np.ndarray


def canonicalize_qubit_pure(phi) -> tuple[float, np.ndarray]:
    """Canonical form of a pure qubit state.

    Returns ``(p, U)`` with ``U`` an incoherent unitary (phases plus optional
    swap) such that ``U @ phi`` has components ``(sqrt(p), sqrt(1-p))`` and
    ``p >= 1/2``.
    """
    v = as_state_vector(phi)
    if v.size != 2:
        raise DimensionError(f"expected a qubit state, got dim {v.size}")
    phases = -np.angle(v)
    p0 = float(v[0].real**2 + v[0].imag**2)
    perm = [0, 1] if p0 >= 0.5 else [1, 0]
    U = incoherent_unitary(phases, perm)
    return max(p0, 1.0 - p0), U


def canonicalize_qubit_mixed(rho) -> tuple[float, float, np.ndarray]:
    """Canonical ensemble parameters of a qubit density matrix.

    Returns ``(q, p_tilde1, U)`` where ``U = diag(1, exp(1j arg(rho_01)))``
    makes the off-diagonal real non-negative, ``q >= 1/2`` solves
    ``sqrt(q(1-q)) = |rho_01|`` and ``p_tilde1`` splits the diagonal between
    the two canonical members. For the maximally coherent (pure) case the
    split is unconstrained and ``p_tilde1`` is set to 1.
    """
    A = _as_square_matrix(rho)
    if A.shape[0] != 2:
        raise DimensionError(f"expected a qubit state, got dim {A.shape[0]}")
    theta = float(np.angle(A[0, 1]))
    U = incoherent_unitary([0.0, theta], [0, 1])
    x = abs(complex(A[0, 1]))
    root = math.sqrt(max(0.0, 1.0 - 4.0 * x * x))   # root == 2q - 1
    q = 0.5 * (1.0 + root)
    if root < DEGENERATE_TOL:
        p1 = 1.0
    else:
        p1 = min(max((A[0, 0].real - (1.0 - q)) / root, 0.0), 1.0)
    return q, p1, U


def transform_problem(phi, rho) -> TransformProblem:
    """Canonicalize source and target into a :class:`TransformProblem`."""
    p, U = canonicalize_qubit_pure(phi)
    q, p1, V = canonicalize_qubit_mixed(rho)
    return TransformProblem(p, q, p1, U, V)


def can_transform(phi, rho, tol: float = DEGENERATE_TOL) -> bool:
    """True iff the pure source is at least as coherent as the qubit target."""
    return c_f_pure(phi) >= c_f_qubit(rho) - tol


def build_transform_channel(phi, rho, tol: float = DEGENERATE_TOL) -> IncoherentChannel:
    """Incoherent channel mapping the pure qubit ``phi`` onto ``rho``.

    In the canonical frame the channel consists of up to four Kraus operators
    with weights ``sqrt(p_tilde(p+q-1)/(2q-1))`` and ``sqrt(p_tilde(q-p)/(2q-1))``
    on diagonal/antidiagonal entry patterns built from ``sqrt(q/p)``,
    ``sqrt((1-q)/(1-p))``, ``sqrt(q/(1-p))`` and ``sqrt((1-q)/p)``; the final
    operators are conjugated back through the canonicalizing unitaries.
    Zero-coefficient operators are dropped. Degenerate parameter regimes
    (``q = 1/2``, ``p = 1``) replace the 0/0 entries by their closed limits.
    """
    src = as_state_vector(phi)
    tgt = _as_square_matrix(rho)
    if src.size != 2 or tgt.shape[0] != 2:
        raise DimensionError("transformation construction requires qubit states")
    cf_src = c_f_pure(src)
    cf_tgt = c_f_qubit(tgt)
    if cf_src < cf_tgt - tol:
        raise TransformabilityError(
            f"source coherence {cf_src:.12g} is below target coherence {cf_tgt:.12g}"
        )
    prob = transform_problem(src, tgt)
    p, q, p1 = prob.p, prob.q, prob.p_tilde1
    p2 = 1.0 - p1
    denom = 2.0 * q - 1.0

    if denom < DEGENERATE_TOL:
        # target is the pure maximally coherent state, which forces p = 1/2:
        # the canonical channel is the identity
        canonical = [np.eye(2, dtype=complex)]
    elif 1.0 - p < DEGENERATE_TOL:
        # incoherent source forces an incoherent target: classical relabeling
        eye = np.eye(2, dtype=complex)
        flip = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        canonical = [
            math.sqrt(weight) * op
            for weight, op in ((p1, eye), (p2, flip))
            if weight > 0.0
        ]
    else:
        keep = math.sqrt(max(p + q - 1.0, 0.0) / denom)
        move = math.sqrt(max(q - p, 0.0) / denom)
        c_keep1 = math.sqrt(p1) * keep
        c_move1 = math.sqrt(p1) * move
        c_keep2 = math.sqrt(p2) * keep
        c_move2 = math.sqrt(p2) * move
        e_qp = math.sqrt(q / p)
        e_cqcp = math.sqrt((1.0 - q) / (1.0 - p))
        e_qcp = math.sqrt(q / (1.0 - p))
        e_cqp = math.sqrt((1.0 - q) / p)
        raw = [
            (c_keep1, np.array([[e_qp, 0.0], [0.0, e_cqcp]], dtype=complex)),
            (c_move1, np.array([[0.0, e_qcp], [e_cqp, 0.0]], dtype=complex)),
            (c_keep2, np.array([[0.0, e_cqcp], [e_qp, 0.0]], dtype=complex)),
            (c_move2, np.array([[e_cqp, 0.0], [0.0, e_qcp]], dtype=complex)),
        ]
        canonical = [c * K for c, K in raw if c > 0.0]

    V_dag = prob.target_canonicalizer.conj().T
    U = prob.source_canonicalizer
    return IncoherentChannel(tuple(V_dag @ K @ U for K in canonical))
