import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from dotenv import load_dotenv
from pydantic import ValidationError

from lieblab.common.errors import ConfigError, InvalidInput, LiebLabError
from lieblab.common.validators import validate_matrix_record, validate_report_payload
from lieblab.functions.conjugate import ConjugateDirection, conjugate_table
from lieblab.functions.scalar import build_function
from lieblab.lieb.functionals import (
    LiebSpec,
    lieb_trace,
    lieb_trace_inverted,
    log_limit_trace,
    mean_norm_fn,
)
from lieblab.lieb.maps import build_map
from lieblab.linalg.matrices import PosDefMatrix, matrix_from_record
from lieblab.models import LiebSpecDescriptor, RunConfig
from lieblab.operators.means import build_mean
from lieblab.verifier.counterexamples import remark_4_6
from lieblab.verifier.dataframe import reports_to_dataframe
from lieblab.verifier.falsify import (
    DEFAULT_FALSIFICATION,
    DEFAULT_FALSIFY_TRIALS,
    NO_CLAIM_BANNER,
    falsify_boundary,
)
from lieblab.verifier.falsify import missing_region_sweep
from lieblab.verifier.pipeline import SuiteResult, default_pipeline, normalize_suite_id
from lieblab.verifier.suites import SuiteSettings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2

EVAL_KINDS = ("lieb", "lieb-inverted", "mean-norm", "log-limit")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    try:
        return int(raw) if raw not in (None, "") else default
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}")
        return default


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", type=int, default=_env_int("LIEBLAB_SEED", 42), help="Master seed"
    )
    common.add_argument(
        "--trials",
        type=int,
        default=_env_int("LIEBLAB_TRIALS", 1000),
        help="Midpoint trials per grid point",
    )
    common.add_argument(
        "--dims", type=str, default="2,3", help="Comma-separated matrix sizes"
    )
    common.add_argument(
        "--tol", type=float, default=1e-8, dest="rel_tol", help="Relative gap tolerance"
    )
    common.add_argument(
        "--cond-cap",
        type=float,
        default=100.0,
        dest="cond_cap",
        help="Condition number cap for sampled matrices",
    )
    common.add_argument(
        "--jobs",
        type=int,
        default=_env_int("LIEBLAB_JOBS", 1),
        help="Worker threads for trial lanes",
    )
    common.add_argument(
        "--out", type=str, default=None, dest="out_path", help="Output file (default stdout)"
    )
    common.add_argument(
        "--format", type=str, default="json", choices=["json", "csv"], help="Report format"
    )
    common.add_argument(
        "--log-level",
        type=str,
        default=os.getenv("LOG_LEVEL", "INFO"),
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        dest="log_level",
        help="Logging level",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Matrix trace and norm functionals with randomized concavity checks",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    common = _common_flags()
    subparsers = parser.add_subparsers(dest="command", help="Command to execute")

    verify = subparsers.add_parser(
        "verify",
        parents=[common],
        help="Run theorem suites",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    verify.add_argument("suites", nargs="+", help="Suite ids (thm2.1, range_ii, ...) or 'all'")
    verify.add_argument(
        "--grid-file",
        type=str,
        default=None,
        dest="grid_file",
        help="JSON list of grid points replacing the default grid of a single suite",
    )

    conj = subparsers.add_parser(
        "conjugate",
        parents=[common],
        help="Tabulate hat/check conjugates",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    conj.add_argument("--fn", required=True, help="Function descriptor (JSON or path)")
    conj.add_argument("--direction", choices=["hat", "check"], default="hat")
    conj.add_argument("--grid", default="0.1,10,25", help="lo,hi,n")

    evaluate = subparsers.add_parser(
        "eval",
        parents=[common],
        help="Evaluate one functional",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    evaluate.add_argument("--spec", required=True, help="Lieb spec descriptor (JSON or path)")
    evaluate.add_argument("--a", required=True, help="Matrix A (JSON or path)")
    evaluate.add_argument("--b", default=None, help="Matrix B (JSON or path); defaults to A")
    evaluate.add_argument("--kind", choices=EVAL_KINDS, default="lieb")
    evaluate.add_argument("--mean", default="arithmetic", help="Mean name or descriptor")
    evaluate.add_argument("--norm", default="ky_fan_anti:1", help="Norm for mean-norm")
    evaluate.add_argument("--alpha", type=float, default=0.5, help="Weight for log-limit")

    counter = subparsers.add_parser(
        "counterexample",
        parents=[common],
        help="Closed-form counterexamples",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    counter.add_argument("name", choices=["remark4.6"])
    counter.add_argument("--t", type=float, required=True)
    counter.add_argument("--p", type=float, required=True)
    counter.add_argument("--s", type=float, required=True)

    sweep = subparsers.add_parser(
        "sweep",
        parents=[common],
        help="Exploratory sweeps (no claims)",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sweep.add_argument("name", choices=["missing-region"])

    return parser


def _load_json(value: str) -> Any:
    """Inline JSON, or a path resolved against LIEBLAB_SUITE_DIR when relative."""
    text = value.strip()
    if text[:1] in ("{", "["):
        return json.loads(text)
    path = Path(text).expanduser()
    suite_dir = os.getenv("LIEBLAB_SUITE_DIR")
    if not path.is_absolute() and not path.exists() and suite_dir:
        path = Path(suite_dir).expanduser() / path
    with path.open("r", encoding="utf-8") as handle:
        return json.load(handle)


def _load_matrix(value: str) -> PosDefMatrix:
    record = _load_json(value)
    if not validate_matrix_record(record):
        raise ConfigError(f"Malformed matrix record: {value}")
    return PosDefMatrix.from_array(matrix_from_record(record))


def _emit(text: str, out_path: Optional[Path]) -> None:
    if out_path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    out_path.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    logger.info(f"Wrote {out_path}")


def _dump(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def run_verify(args: argparse.Namespace, config: RunConfig) -> int:
    pipeline = default_pipeline()
    requested = [item.strip() for item in args.suites]
    run_all = any(item.lower() == "all" for item in requested)
    ids = pipeline.available() if run_all else requested
    grid = _load_json(args.grid_file) if args.grid_file else None
    if grid is not None and not isinstance(grid, list):
        raise ConfigError("--grid-file must hold a JSON list of grid points")
    distinct = {normalize_suite_id(item) for item in ids}
    if grid is not None and len(distinct) > 1:
        raise ConfigError(
            f"--grid-file applies to a single suite, got {sorted(distinct)}"
        )

    settings = SuiteSettings(
        seed=config.seed,
        trials=config.trials,
        rel_tol=config.rel_tol,
        cond_cap=config.cond_cap,
        jobs=config.jobs,
    )
    results: List[SuiteResult] = []
    for theorem_id in ids:
        logger.info(f"Running suite {theorem_id}")
        results.append(pipeline.run(theorem_id, settings, dims=config.dims, grid=grid))

    passed = all(result.passed for result in results)
    if len(results) == 1:
        payload = dict(results[0].to_dict(), header=config.header())
    else:
        payload = {
            "header": config.header(),
            "seed": config.seed,
            "passed": passed,
            "suites": [result.to_dict() for result in results],
        }

    if run_all:
        p, q, s = DEFAULT_FALSIFICATION
        report = falsify_boundary(
            p,
            q,
            s,
            trials=DEFAULT_FALSIFY_TRIALS,
            seed=config.seed,
            rel_tol=config.rel_tol,
            cond_cap=config.cond_cap,
            jobs=config.jobs,
        )
        found = report.violations > 0
        payload["falsification"] = dict(report.to_dict(), found=found)
        passed = passed and found
        payload["passed"] = passed

    if not validate_report_payload(payload):
        logger.warning("Report payload failed validation; writing it anyway")

    if config.format == "csv":
        frames = [
            reports_to_dataframe(result.reports, suite=result.theorem_id)
            for result in results
        ]
        _emit(pd.concat(frames, ignore_index=True).to_csv(index=False), config.out_path)
    else:
        _emit(_dump(payload), config.out_path)

    for result in results:
        status = "PASS" if result.passed else "FAIL"
        logger.info(f"{result.theorem_id}: {status} ({len(result.reports)} reports)")
    return EXIT_OK if passed else EXIT_FAILED


def run_conjugate(args: argparse.Namespace, config: RunConfig) -> int:
    f = build_function(_load_json(args.fn))
    try:
        lo, hi, n = args.grid.split(",")
        ts = np.linspace(float(lo), float(hi), int(n))
    except ValueError as exc:
        raise ConfigError(f"--grid must be lo,hi,n; got {args.grid!r}") from exc
    if ts.size < 1 or np.any(ts <= 0):
        raise ConfigError(f"--grid must describe points in (0, inf); got {args.grid!r}")
    table = conjugate_table(f, ConjugateDirection(args.direction), ts)
    _emit(table.to_csv(index=False), config.out_path)
    return EXIT_OK


def _build_spec(descriptor: Dict[str, Any]) -> LiebSpec:
    parsed = LiebSpecDescriptor.model_validate(descriptor)
    return LiebSpec(
        f=build_function(parsed.f),
        phi=build_map(parsed.phi),
        psi=build_map(parsed.psi),
        p=parsed.p,
        q=parsed.q,
        gamma_rule=parsed.gamma_rule,
    )


def run_eval(args: argparse.Namespace, config: RunConfig) -> int:
    spec = _build_spec(_load_json(args.spec))
    a = _load_matrix(args.a)
    b = _load_matrix(args.b) if args.b else a
    if args.kind == "lieb":
        value = lieb_trace(spec, a, b)
    elif args.kind == "lieb-inverted":
        value = lieb_trace_inverted(spec, a, b)
    elif args.kind == "mean-norm":
        mean = _load_json(args.mean) if args.mean.strip()[:1] == "{" else args.mean
        value = mean_norm_fn(spec, build_mean(mean), args.norm, a, b)
    else:
        value = log_limit_trace(spec.f, spec.phi, spec.psi, args.alpha, a, b)
    _emit(_dump({"kind": args.kind, "value": value}), config.out_path)
    return EXIT_OK


def run_counterexample(args: argparse.Namespace, config: RunConfig) -> int:
    pair = remark_4_6(args.t, args.p, args.s)
    verdict = "VIOLATED" if pair.convexity_violated else "HOLDS"
    print(f"lhs={pair.lhs:.10g} rhs={pair.rhs:.10g} {verdict}")
    if config.out_path is not None:
        _emit(_dump(dict(pair._asdict(), consistent=pair.consistent)), config.out_path)
    if not pair.consistent:
        logger.error("Closed forms do not match the direct 2x2 evaluation")
        return EXIT_FAILED
    return EXIT_OK


def run_sweep(args: argparse.Namespace, config: RunConfig) -> int:
    print(NO_CLAIM_BANNER)
    reports = missing_region_sweep(
        trials=config.trials,
        seed=config.seed,
        dims=config.dims,
        rel_tol=config.rel_tol,
        cond_cap=config.cond_cap,
        jobs=config.jobs,
    )
    if config.format == "csv":
        text = reports_to_dataframe(reports, suite="missing-region").to_csv(index=False)
    else:
        text = _dump(
            {
                "sweep": args.name,
                "claim": "none",
                "header": config.header(),
                "points": [report.to_dict() for report in reports],
            }
        )
    _emit(text, config.out_path)
    return EXIT_OK


COMMANDS = {
    "verify": run_verify,
    "conjugate": run_conjugate,
    "eval": run_eval,
    "counterexample": run_counterexample,
    "sweep": run_sweep,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_OK

    logging.basicConfig(
        level=getattr(logging, args.log_level.upper()),
        format="%(asctime)s | %(levelname)-8s | %(name)s | %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    try:
        config = RunConfig(
            command=args.command,
            seed=args.seed,
            trials=args.trials,
            dims=args.dims,
            rel_tol=args.rel_tol,
            cond_cap=args.cond_cap,
            jobs=args.jobs,
            out_path=Path(args.out_path) if args.out_path else None,
            format=args.format,
        )
        return COMMANDS[args.command](args, config)
    except (ConfigError, InvalidInput, ValidationError) as exc:
        logger.error(f"Configuration error: {exc}")
        return EXIT_CONFIG
    except json.JSONDecodeError as exc:
        logger.error(f"Malformed JSON: {exc}")
        return EXIT_CONFIG
    except OSError as exc:
        logger.error(f"Cannot read or write file: {exc}")
        return EXIT_CONFIG
    except LiebLabError as exc:
        logger.error(f"Run aborted: {exc}")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
