"""Randomized property suites certifying the coherence-measure axioms.

Each suite draws seeded trials and records a signed margin per trial:
a margin above zero is a violation of the property under test. Margins fold
in the suite's tolerance, so reports pass exactly when every margin is <= 0.
Trial ``t`` of a run seeded with ``s`` uses the child generator keyed by
``(s, t)``; a recorded violation therefore replays from its seed alone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import (
    ValidationError,
    random_density,
    random_incoherent,
    rng_from_seed,
)
from .channels import random_incoherent_channel, selective_outcomes
from .fileio import matrix_to_data
from .measures import RoofConfig, c_f_qubit, c_f_roof_estimate, c_l1, f_of

#: Minimum off-diagonal mass demanded of "coherent" draws in the C1 suite.
_COHERENT_FLOOR = 1e-3
#: Fixed bound for the l1-relation suite (a closed-form identity, not a margin).
L1_RELATION_TOL = 1e-12
#: Fixed bounds for the roof-oracle suite.
ROOF_MATCH_TOL = 1e-4
ROOF_UNDERSHOOT_TOL = 1e-9


class Suite(enum.Enum):
    C1 = "c1"
    C3 = "c3"
    C4 = "c4"
    L1_RELATION = "l1"
    ROOF_ORACLE = "roof"
    ALL = "all"


class UnsupportedSuiteError(ValidationError):
    """Suite/dimension combination has no exact reference value."""


@dataclass(frozen=True)
class SuiteConfig:
    suite: Suite = Suite.ALL
    trials: int = 10000
    dim: int = 2
    seed: int = 0
    tolerance: float = 1e-9


@dataclass(frozen=True)
class Violation:
    trial: int
    seed: tuple[int, int]
    magnitude: float
    inputs: dict


@dataclass(frozen=True)
class VerificationReport:
    suite: Suite
    trials_run: int
    violations: tuple[Violation, ...]
    max_violation: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "suite": self.suite.value,
            "trials_run": self.trials_run,
            "max_violation": self.max_violation,
            "passed": self.passed,
            "violations": [
                {"seed": list(v.seed), "magnitude": v.magnitude} for v in self.violations
            ],
        }


def _check_config(cfg: SuiteConfig) -> None:
    if cfg.trials < 1:
        raise ValidationError("trials must be >= 1")
    if cfg.dim < 2:
        raise ValidationError("dim must be >= 2")


def _require_qubit(cfg: SuiteConfig, suite: Suite) -> None:
    if cfg.dim != 2:
        raise UnsupportedSuiteError(
            f"{suite.value.upper()} suite requires dim 2 (the exact closed form); "
            f"got dim {cfg.dim}"
        )


def _coherence_score(rho, rng) -> float:
    if rho.shape[0] == 2:
        return c_f_qubit(rho)
    cfg = RoofConfig(seed=int(rng.integers(2**62)))
    return c_f_roof_estimate(rho, cfg).value


def _c1_trial(rng, cfg: SuiteConfig):
    dim = cfg.dim
    diag = random_incoherent(dim, rng)
    score_diag = _coherence_score(diag, rng)
    while True:
        coherent = random_density(dim, dim, rng)
        if c_l1(coherent) >= _COHERENT_FLOOR:
            break
    score_coh = _coherence_score(coherent, rng)
    magnitude = max(score_diag - cfg.tolerance, cfg.tolerance - score_coh)
    inputs = {"incoherent": matrix_to_data(diag), "coherent": matrix_to_data(coherent)}
    return magnitude, inputs


def _c3_trial(rng, cfg: SuiteConfig):
    rho = random_density(2, int(rng.integers(1, 3)), rng)
    channel = random_incoherent_channel(2, int(rng.integers(1, 5)), rng)
    measured = selective_outcomes(channel, rho)
    average = sum(out.probability * c_f_qubit(out.post_state) for out in measured)
    magnitude = (average - c_f_qubit(rho)) - cfg.tolerance
    inputs = {
        "state": matrix_to_data(rho),
        "kraus": [matrix_to_data(K) for K in channel.kraus_ops],
    }
    return magnitude, inputs


def _c4_trial(rng, cfg: SuiteConfig):
    rho1 = random_density(2, int(rng.integers(1, 3)), rng)
    rho2 = random_density(2, int(rng.integers(1, 3)), rng)
    lam = float(rng.uniform())
    mixed = lam * rho1 + (1.0 - lam) * rho2
    gap = c_f_qubit(mixed) - lam * c_f_qubit(rho1) - (1.0 - lam) * c_f_qubit(rho2)
    magnitude = gap - cfg.tolerance
    inputs = {"rho1": matrix_to_data(rho1), "rho2": matrix_to_data(rho2), "weight": lam}
    return magnitude, inputs


def _l1_trial(rng, cfg: SuiteConfig):
    rho = random_density(2, int(rng.integers(1, 3)), rng)
    diff = abs(c_f_qubit(rho) - f_of(c_l1(rho) / 2.0))
    return diff - L1_RELATION_TOL, {"state": matrix_to_data(rho)}


def _roof_trial(rng, cfg: SuiteConfig):
    rho = random_density(2, int(rng.integers(1, 3)), rng)
    estimate = c_f_roof_estimate(rho, RoofConfig(seed=int(rng.integers(2**62)))).value
    diff = estimate - c_f_qubit(rho)
    magnitude = max(diff - ROOF_MATCH_TOL, -diff - ROOF_UNDERSHOOT_TOL)
    return magnitude, {"state": matrix_to_data(rho)}


_TRIALS = {
    Suite.C1: _c1_trial,
    Suite.C3: _c3_trial,
    Suite.C4: _c4_trial,
    Suite.L1_RELATION: _l1_trial,
    Suite.ROOF_ORACLE: _roof_trial,
}


def _run(cfg: SuiteConfig, suite: Suite) -> VerificationReport:
    _check_config(cfg)
    trial_fn = _TRIALS[suite]
    violations = []
    max_violation = -np.inf
    for t in range(cfg.trials):
        rng = rng_from_seed(cfg.seed, t)
        magnitude, inputs = trial_fn(rng, cfg)
        if magnitude > max_violation:
            max_violation = magnitude
        if magnitude > 0.0:
            violations.append(Violation(t, (cfg.seed, t), float(magnitude), inputs))
    return VerificationReport(
        suite=suite,
        trials_run=cfg.trials,
        violations=tuple(violations),
        max_violation=float(max_violation),
        passed=not violations,
    )


def run_c1_suite(cfg: SuiteConfig) -> VerificationReport:
    """Zero coherence for diagonal states, positive for coherent ones.

    Qubits score through the closed form; higher dimensions through the roof
    estimator (an upper bound, which can only make the coherent check easier
    and the diagonal check legitimate).
    """
    _check_config(cfg)
    return _run(cfg, Suite.C1)


def run_c3_suite(cfg: SuiteConfig) -> VerificationReport:
    """Selective measurements do not increase coherence on average (dim 2 only)."""
    _require_qubit(cfg, Suite.C3)
    return _run(cfg, Suite.C3)


def run_c4_suite(cfg: SuiteConfig) -> VerificationReport:
    """Mixing does not increase coherence (convexity, dim 2 only)."""
    _require_qubit(cfg, Suite.C4)
    return _run(cfg, Suite.C4)


def run_l1_relation_suite(cfg: SuiteConfig) -> VerificationReport:
    """Qubit closed form equals ``f_of`` of half the l1 coherence, to 1e-12."""
    _require_qubit(cfg, Suite.L1_RELATION)
    return _run(cfg, Suite.L1_RELATION)


def run_roof_oracle_suite(cfg: SuiteConfig) -> VerificationReport:
    """Roof estimator reproduces the qubit closed form within 1e-4 from above."""
    _require_qubit(cfg, Suite.ROOF_ORACLE)
    return _run(cfg, Suite.ROOF_ORACLE)


_RUNNERS = {
    Suite.C1: run_c1_suite,
    Suite.C3: run_c3_suite,
    Suite.C4: run_c4_suite,
    Suite.L1_RELATION: run_l1_relation_suite,
    Suite.ROOF_ORACLE: run_roof_oracle_suite,
}


def run_all(cfg: SuiteConfig) -> tuple[VerificationReport, ...]:
    """Run the five suites with identical settings; passes iff all pass."""
    order = (Suite.C1, Suite.C3, Suite.C4, Suite.L1_RELATION, Suite.ROOF_ORACLE)
    return tuple(_RUNNERS[s](SuiteConfig(s, cfg.trials, cfg.dim, cfg.seed, cfg.tolerance)) for s in order)


def run_suite(cfg: SuiteConfig) -> tuple[VerificationReport, ...]:
    """Dispatch on ``cfg.suite``; always returns a tuple of reports."""
    if cfg.suite is Suite.ALL:
        return run_all(cfg)
    return (_RUNNERS[cfg.suite](cfg),)


def replay_trial(
    suite: Suite, seed: int, trial: int, dim: int = 2, tolerance: float = 1e-9
) -> float:
    """Recompute the margin of one recorded trial from its seed."""
    cfg = SuiteConfig(suite=suite, trials=1, dim=dim, seed=seed, tolerance=tolerance)
    rng = rng_from_seed(seed, trial)
    magnitude, _ = _TRIALS[suite](rng, cfg)
    return float(magnitude)
