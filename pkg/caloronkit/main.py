"""
CaloronKit command-line application.

Subcommands:
- generate: deterministic random pairs, maps, connections and homotopies
- compute: Chern-Weil, Chern-Simons, string, holonomy and equivalence quantities of stored data
- verify: named identity suites with a JSON/CSV report

Exit codes: 0 success, 1 identity failure, 2 input or schema error.
"""

import argparse
import json
import logging
import sys
from contextlib import contextmanager
from typing import Iterator, Optional, Sequence, get_args

import structlog
from pydantic import ValidationError

from .config import settings
from .errors import CaloronKitError, SchemaError
from .schemas.config import DataKind, Quantity, RunConfig
from .services.suites import SUITE_NAMES

logger = structlog.get_logger(__name__)


def configure_logging(level: Optional[str] = None, json_logs: Optional[bool] = None) -> None:
    """Route structlog through stdlib logging on stderr."""
    level_name = (level or ("DEBUG" if settings.DEBUG else settings.LOG_LEVEL)).upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format="%(message)s",
        stream=sys.stderr,
        force=True,
    )
    use_json = settings.LOG_JSON if json_logs is None else json_logs
    renderer = structlog.processors.JSONRenderer() if use_json else structlog.dev.ConsoleRenderer(colors=False)
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--grid", help="Grid tokens, e.g. 16x16x32s1 (s1: distinguished circle, i: interval)")
    parser.add_argument("--grid-file", dest="grid_file", help="JSON grid descriptor")
    parser.add_argument("--rank", type=int, default=2)
    parser.add_argument("--cutoff", type=int)
    parser.add_argument("--seed", type=int, default=settings.SEED)
    parser.add_argument("--band-limit", dest="band_limit", type=int, default=settings.BAND_LIMIT)
    parser.add_argument("--tol", type=float, help="Identity tolerance override")
    parser.add_argument("--exact-tol", dest="exact_tol", type=float, help="Exactness tolerance")
    parser.add_argument("--ode-steps", dest="ode_steps", type=int, help="RK4 steps for holonomy")
    parser.add_argument("--out", help="Output JSON path (CSV written alongside)")
    parser.add_argument("--log-level", dest="log_level")
    parser.add_argument("--log-json", dest="log_json", action="store_true", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="caloronkit", description="Caloron correspondence and string-form toolkit")
    commands = parser.add_subparsers(dest="command", required=True)

    generate = commands.add_parser("generate", help="Write deterministic random test data")
    generate.add_argument("--kind", default="pair", choices=list(get_args(DataKind)))
    generate.add_argument("--amplitude", type=float, default=settings.AMPLITUDE)
    generate.add_argument("--samples", type=int, default=33, help="t-samples of homotopies")
    generate.add_argument("--non-unitary", dest="unitary", action="store_false")
    generate.add_argument("--from", dest="input", help="Map whose rotation homotopy is written")
    _common(generate)

    compute = commands.add_parser("compute", help="Evaluate one quantity on stored data")
    compute.add_argument("--quantity", required=True, choices=list(get_args(Quantity)))
    compute.add_argument("--input", required=True)
    compute.add_argument("--input2")
    compute.add_argument("--algorithm")
    _common(compute)

    verify = commands.add_parser("verify", help="Run identity suites")
    verify.add_argument("--suite", default="all", choices=list(SUITE_NAMES) + ["all"])
    _common(verify)
    return parser


_OVERRIDES = {"exact_tol": "EXACT_TOL", "tol": "IDENTITY_TOL", "ode_steps": "ODE_STEPS"}


@contextmanager
def scoped_overrides(config: RunConfig) -> Iterator[None]:
    """Command-line tolerances and step counts replace the defaults for one run only."""
    saved = {name: getattr(settings, name) for name in _OVERRIDES.values()}
    try:
        for field, name in _OVERRIDES.items():
            value = getattr(config, field)
            if value is not None:
                setattr(settings, name, value)
        yield
    finally:
        for name, value in saved.items():
            setattr(settings, name, value)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, dispatch, and map errors to exit codes."""
    from .cli.commands import cmd_compute, cmd_generate, cmd_verify

    args = vars(build_parser().parse_args(argv))
    configure_logging(args.pop("log_level", None), args.pop("log_json", None))
    try:
        try:
            config = RunConfig(**args)
        except ValidationError as exc:
            raise SchemaError(
                "Invalid command-line configuration",
                errors=[{"loc": list(e["loc"]), "msg": e["msg"]} for e in exc.errors()],
            ) from exc
        logger.info("caloronkit.start", command=config.command, version=settings.APP_VERSION)
        with scoped_overrides(config):
            if config.command == "generate":
                cmd_generate(config)
            elif config.command == "compute":
                cmd_compute(config)
            else:
                cmd_verify(config)
        return 0
    except CaloronKitError as exc:
        print(json.dumps(exc.to_dict(), default=str), file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
