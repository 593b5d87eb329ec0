"""Command-line front end.

Exit codes are a stable contract: 0 success (or property true), 1 domain
false (not transformable, suite failed), 2 validation error, 3 file or parse
error. The environment variable ``FIDCOH_SEED`` supplies the default seed for
randomized commands; an explicit ``--seed`` wins.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .core import ValidationError, validate_density
from .channels import (
    ChannelValidationError,
    apply_channel,
    column_structure_residual,
    completeness_residual,
    validate_channel,
)
from .fileio import (
    FileFormatError,
    matrix_to_data,
    read_channel_raw,
    read_state,
    write_channel,
    write_density,
)
from .measures import RoofConfig, c_f_pure, c_f_qubit, c_f_roof_estimate, c_l1, uhlmann_fidelity
from .transform import TransformabilityError, build_transform_channel
from .verify import Suite, SuiteConfig, UnsupportedSuiteError, run_suite

SEED_ENV_VAR = "FIDCOH_SEED"


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get(SEED_ENV_VAR, "0"))


def _as_density(kind: str, state: np.ndarray) -> np.ndarray:
    if kind == "pure":
        return np.outer(state, state.conj())
    return state


def _cmd_measure(args) -> int:
    kind, state = read_state(args.input)
    if args.measure == "cl1":
        value = c_l1(_as_density(kind, state))
    elif kind == "pure":
        value = c_f_pure(state)
    elif state.shape[0] == 2:
        value = c_f_qubit(state)
    else:
        print("upper-bound estimate (convex-roof numerical optimization)")
        cfg = RoofConfig(
            ensemble_size=args.ensemble_size,
            restarts=args.restarts,
            max_iterations=args.max_iter,
            seed=_seed(args),
        )
        value = c_f_roof_estimate(state, cfg).value
    print(f"{value:.12g}")
    return 0


def _cmd_fidelity(args) -> int:
    kind_a, a = read_state(args.a)
    kind_b, b = read_state(args.b)
    value = uhlmann_fidelity(_as_density(kind_a, a), _as_density(kind_b, b))
    print(f"{value:.12f}")
    return 0


def _read_transform_pair(args):
    kind_s, src = read_state(args.source)
    if kind_s != "pure":
        raise ValidationError("source must be a pure state file")
    kind_t, tgt = read_state(args.target)
    rho = _as_density(kind_t, tgt)
    if src.size != 2 or rho.shape[0] != 2:
        raise ValidationError("transform commands require qubit states")
    return src, rho


def _cmd_transform_check(args) -> int:
    src, rho = _read_transform_pair(args)
    cf_src = c_f_pure(src)
    cf_tgt = c_f_qubit(rho)
    if cf_src >= cf_tgt - 1e-9:
        print(f"transformable ({cf_src:.6g} >= {cf_tgt:.6g})")
        return 0
    print(f"not transformable ({cf_src:.6g} < {cf_tgt:.6g})")
    return 1


def _cmd_transform_build(args) -> int:
    src, rho = _read_transform_pair(args)
    try:
        channel = build_transform_channel(src, rho)
    except TransformabilityError as exc:
        print(f"not transformable: {exc}", file=sys.stderr)
        return 1
    comp = completeness_residual(channel.kraus_ops)
    recon = float(np.abs(apply_channel(channel, np.outer(src, src.conj())) - rho).max())
    if args.out:
        write_channel(args.out, channel)
        print(f"wrote {len(channel)} Kraus operators to {args.out}")
    else:
        doc = {"dim": channel.dim, "kraus": [matrix_to_data(K) for K in channel.kraus_ops]}
        print(json.dumps(doc, indent=2))
    print(f"completeness residual: {comp:.3e}")
    print(f"reconstruction residual: {recon:.3e}")
    return 0


def _cmd_channel_validate(args) -> int:
    ops = read_channel_raw(args.channel)
    comp = completeness_residual(ops)
    col = max(column_structure_residual(K) for K in ops)
    print(f"completeness residual: {comp:.3e}")
    print(f"column-structure residual: {col:.3e}")
    try:
        validate_channel(ops)
    except ChannelValidationError as exc:
        print("FAIL")
        for violation in exc.violations:
            print(f"  {violation.kind}: {violation.detail} (magnitude {violation.magnitude:.3e})")
        return 2
    print("PASS")
    return 0


def _cmd_channel_apply(args) -> int:
    channel = validate_channel(read_channel_raw(args.channel))
    kind, state = read_state(args.state)
    result = validate_density(apply_channel(channel, _as_density(kind, state)))
    if args.out:
        write_density(args.out, result)
        print(f"wrote output state to {args.out}")
    else:
        doc = {"kind": "density", "dim": result.shape[0], "data": matrix_to_data(result)}
        print(json.dumps(doc, indent=2))
    return 0


def _cmd_verify(args) -> int:
    cfg = SuiteConfig(
        suite=Suite(args.suite),
        trials=args.trials,
        dim=args.dim,
        seed=_seed(args),
        tolerance=args.tol,
    )
    reports = run_suite(cfg)
    if args.json:
        payload = [r.to_dict() for r in reports]
        print(json.dumps(payload[0] if len(payload) == 1 else payload, indent=2))
    else:
        for r in reports:
            status = "PASS" if r.passed else f"FAIL ({len(r.violations)} violations)"
            print(
                f"suite {r.suite.value}: {r.trials_run} trials, "
                f"max violation {r.max_violation:.3e}, {status}"
            )
    return 0 if all(r.passed for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fidcoh",
        description="Fidelity-based coherence: measures, incoherent channels, transformations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("measure", help="evaluate a coherence measure on a state file")
    m.add_argument("input", help="state file (pure or density)")
    m.add_argument("measure", choices=["cf", "cl1"], help="which measure to evaluate")
    m.add_argument("--restarts", type=int, default=32, help="roof-estimator restarts (dim >= 3)")
    m.add_argument("--ensemble-size", type=int, default=None, help="roof ensemble size (default rank^2)")
    m.add_argument("--max-iter", type=int, default=200, help="roof sweeps per restart")
    m.add_argument("--seed", type=int, default=None, help=f"roof seed (default ${SEED_ENV_VAR} or 0)")
    m.set_defaults(func=_cmd_measure)

    f = sub.add_parser("fidelity", help="Uhlmann fidelity between two state files")
    f.add_argument("a")
    f.add_argument("b")
    f.set_defaults(func=_cmd_fidelity)

    t = sub.add_parser("transform", help="pure-to-qubit transformability under incoherent maps")
    tsub = t.add_subparsers(dest="action", required=True)
    tc = tsub.add_parser("check", help="print the verdict and both coherence values")
    tc.add_argument("source")
    tc.add_argument("target")
    tc.set_defaults(func=_cmd_transform_check)
    tb = tsub.add_parser("build", help="construct the realizing incoherent channel")
    tb.add_argument("source")
    tb.add_argument("target")
    tb.add_argument("--out", default=None, help="channel file to write (default: stdout)")
    tb.set_defaults(func=_cmd_transform_build)

    c = sub.add_parser("channel", help="validate or apply a Kraus channel file")
    csub = c.add_subparsers(dest="action", required=True)
    cv = csub.add_parser("validate", help="print per-condition residuals and pass/fail")
    cv.add_argument("channel")
    cv.set_defaults(func=_cmd_channel_validate)
    ca = csub.add_parser("apply", help="apply the channel to a state file")
    ca.add_argument("channel")
    ca.add_argument("state")
    ca.add_argument("--out", default=None, help="density file to write (default: stdout)")
    ca.set_defaults(func=_cmd_channel_apply)

    v = sub.add_parser("verify", help="run the randomized property suites")
    v.add_argument("--suite", choices=[s.value for s in Suite], default="all")
    v.add_argument("--trials", type=int, default=10000)
    v.add_argument("--dim", type=int, default=2)
    v.add_argument("--seed", type=int, default=None, help=f"default ${SEED_ENV_VAR} or 0")
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--json", action="store_true", help="emit the structured report")
    v.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except UnsupportedSuiteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
