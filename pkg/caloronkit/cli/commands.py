"""
Command handlers for the CaloronKit CLI.
generate writes deterministic test data, compute evaluates one quantity on
stored inputs, verify runs the identity suites and writes a report.
"""

from pathlib import Path
from typing import Any, Optional

import numpy as np
import structlog

from ..errors import ConfigError, IdentityFailure
from ..models.connection import FormPath
from ..models.forms import GradedScalarForm, graded_defect
from ..models.grid import Grid
from ..models.group import GroupMap
from ..models.report import EquivalenceReport
from ..schemas.config import RunConfig
from ..schemas.data import FormFile, GradedFormFile, GroupMapFile, PairFile
from ..schemas.grid import GridSpec
from ..schemas.report import EquivalenceReportSchema, SuiteReportSchema, SuiteRowSchema, VerdictSchema
from ..services.calculus import integrate, is_exact
from ..services.chernweil import chern_character, chern_simons, chern_simons_via_slices, odd_chern_character
from ..services.generator import random_connection, random_homotopy_values, random_pair
from ..services.geometry import higgs_holonomy_map, straight_line
from ..services.kmodel import cs_equivalent, string_data_equivalent
from ..services.lie import random_smooth_map, rotation_homotopy_map
from ..services.stringforms import (
    gerbe_curving_check, string_form, string_potential, tau_hat_pullback, total_string_potential,
)
from ..services.suites import SuiteConfig, run_suite
from ..storage import load_form, load_map, load_pair, read_model, write_csv, write_model

logger = structlog.get_logger(__name__)

SUMMARY_FIELDS = [
    "quantity", "algorithm", "degree", "sup_norm", "integral_re", "integral_im",
    "status", "closedness", "worst_period", "cross_defect",
]
ROW_FIELDS = ["name", "identity", "defect", "tolerance", "passed", "seconds", "error"]
VERDICT_FIELDS = ["degree", "status", "closedness", "worst_period", "cycle", "scale", "consistency"]

ALGORITHMS = {
    "cs": ("direct", "slice"),
    "string-form": ("direct", "via_caloron"),
    "string-potential": ("explicit", "slice", "cs_fiber"),
    "tau-hat": ("direct", "fiber"),
}


def resolve_grid(config: RunConfig) -> Grid:
    if config.grid_file:
        return read_model(config.grid_file, GridSpec).to_grid()
    if config.grid:
        return GridSpec.from_tokens(config.grid).to_grid()
    raise ConfigError("A grid is required (--grid or --grid-file)")


def _require(value: Optional[str], flag: str) -> str:
    if not value:
        raise ConfigError(f"{flag} is required for this command")
    return value


def _output(config: RunConfig, default: str) -> Path:
    return Path(config.out or default)


# generate

def cmd_generate(config: RunConfig) -> list[Path]:
    """
    Write deterministic random data of the requested kind.

    Regenerating with the same configuration yields byte-identical files.
    """
    kind = config.kind or "pair"
    out = _output(config, f"{kind}.json")
    if kind == "homotopy" and config.input:
        g = load_map(config.input)
        model: Any = GroupMapFile.from_map(rotation_homotopy_map(g, config.samples))
    else:
        grid = resolve_grid(config)
        if kind == "pair":
            p = random_pair(grid, config.rank, config.seed, config.band_limit, config.unitary,
                            amplitude=config.amplitude)
            model = PairFile.from_pair(p)
        elif kind == "connection":
            a = random_connection(grid, config.rank, config.seed, config.band_limit, config.unitary, config.amplitude)
            model = FormFile.from_form(a)
        elif kind in ("map", "based-map"):
            g = random_smooth_map(grid, config.rank, config.seed, config.band_limit, config.unitary,
                                  based=kind == "based-map", amplitude=config.amplitude)
            model = GroupMapFile.from_map(g)
        else:
            homotopy_grid, values = random_homotopy_values(
                grid, config.rank, config.samples, config.seed, config.band_limit, config.amplitude,
            )
            model = GroupMapFile.from_map(GroupMap(homotopy_grid, config.rank, values, unitary=True))
    path = write_model(out, model)
    logger.info("generate.done", kind=kind, path=str(path), seed=config.seed)
    return [path]


# compute

def _summary(
    form: GradedScalarForm,
    quantity: str,
    algorithm: str,
    cross: Optional[dict[int, float]] = None,
) -> list[dict[str, Any]]:
    """Per-degree sup norms, integrals of top-degree terms and periods on tori."""
    rows = []
    for degree, term in form:
        row: dict[str, Any] = {
            "quantity": quantity, "algorithm": algorithm, "degree": degree, "sup_norm": term.sup_norm(),
        }
        if degree == form.grid.dim:
            value = complex(integrate(term)[0, 0])
            row["integral_re"], row["integral_im"] = value.real, value.imag
        if form.grid.is_torus and degree > 0:
            verdict = is_exact(term)
            row["status"], row["closedness"], row["worst_period"] = (
                verdict.status, verdict.closedness, verdict.worst_period,
            )
        if cross is not None:
            row["cross_defect"] = cross.get(degree, 0.0)
        rows.append(row)
    return rows


def _algorithms(config: RunConfig, quantity: str) -> list[str]:
    known = ALGORITHMS.get(quantity)
    if known is None:
        if config.algorithm not in (None, "direct"):
            raise ConfigError(f"{quantity} has a single algorithm")
        return ["direct"]
    if config.algorithm is None:
        return [known[0]]
    if config.algorithm == "both":
        return list(known)
    if config.algorithm not in known:
        raise ConfigError(f"Unknown algorithm for {quantity}: {config.algorithm}", known=list(known) + ["both"])
    return [config.algorithm]


def _graded(config: RunConfig, quantity: str, algorithm: str) -> GradedScalarForm:
    source = _require(config.input, "--input")
    if quantity == "chern":
        return chern_character(load_form(source), config.cutoff)
    if quantity == "odd-chern":
        return odd_chern_character(load_map(source), config.cutoff)
    if quantity == "cs":
        path = FormPath.straight(load_form(source), load_form(_require(config.input2, "--input2")))
        return chern_simons(path, config.cutoff) if algorithm == "direct" else chern_simons_via_slices(path, config.cutoff)
    if quantity == "string-form":
        return string_form(load_pair(source), config.cutoff, algorithm)
    if quantity == "string-potential":
        line = straight_line(load_pair(source), load_pair(_require(config.input2, "--input2")))
        return string_potential(line, config.cutoff, algorithm)
    if quantity == "total-string-potential":
        return total_string_potential(load_pair(source), config.cutoff)
    if quantity == "tau-hat":
        return tau_hat_pullback(load_map(source), config.cutoff, algorithm)
    raise ConfigError(f"Unknown quantity: {quantity}")


def _equivalence(config: RunConfig, quantity: str) -> EquivalenceReport:
    source = _require(config.input, "--input")
    if quantity == "string-equivalence":
        return string_data_equivalent(load_pair(source), load_pair(_require(config.input2, "--input2")),
                                      config.cutoff, config.exact_tol)
    G = load_map(source)
    t_axis = G.grid.dim - 1
    base = G.grid.without_axis(t_axis)
    g0, g1 = (GroupMap(base, G.rank, G.slice_values(t_axis, index), unitary=G.unitary) for index in (0, -1))
    return cs_equivalent(g0, g1, G, config.cutoff, config.exact_tol)


def cmd_compute(config: RunConfig) -> list[Path]:
    """Evaluate one quantity and write its JSON file plus a CSV summary."""
    quantity = config.quantity
    if quantity is None:
        raise ConfigError("--quantity is required for compute")
    out = _output(config, f"{quantity}.json")
    csv_path = out.with_suffix(".csv")

    if quantity == "holonomy":
        g = higgs_holonomy_map(load_pair(_require(config.input, "--input")), config.ode_steps)
        written = write_model(out, GroupMapFile.from_map(g))
        rows = [{"quantity": quantity, "algorithm": "rk4", "sup_norm": float(np.max(np.abs(g.values)))}]
        return [written, write_csv(csv_path, rows, SUMMARY_FIELDS)]

    if quantity == "gerbe":
        curving, defect = gerbe_curving_check(load_pair(_require(config.input, "--input")))
        written = write_model(out, FormFile.from_form(curving))
        rows = [{"quantity": quantity, "algorithm": "direct", "degree": 2,
                 "sup_norm": curving.sup_norm(), "cross_defect": defect}]
        return [written, write_csv(csv_path, rows, SUMMARY_FIELDS)]

    if quantity in ("cs-equivalence", "string-equivalence"):
        report = _equivalence(config, quantity)
        schema = EquivalenceReportSchema(
            verdict=report.verdict,
            per_degree=[VerdictSchema(**v.to_dict()) for v in report.per_degree],
            consistency={str(k): v for k, v in report.consistency.items()},
            params=report.params,
        )
        rows = [{**v.to_dict(), "consistency": report.consistency.get(v.degree + 1)} for v in report.per_degree]
        written = write_model(out, schema)
        logger.info("compute.done", quantity=quantity, verdict=report.verdict, path=str(written))
        return [written, write_csv(csv_path, rows, VERDICT_FIELDS)]

    algorithms = _algorithms(config, quantity)
    forms = {algorithm: _graded(config, quantity, algorithm) for algorithm in algorithms}
    first = forms[algorithms[0]]
    rows = []
    for algorithm, form in forms.items():
        cross = graded_defect(form, first) if len(forms) > 1 else None
        rows.extend(_summary(form, quantity, algorithm, cross))
    written = write_model(out, GradedFormFile.from_graded(first, quantity))
    logger.info("compute.done", quantity=quantity, algorithms=algorithms, path=str(written))
    return [written, write_csv(csv_path, rows, SUMMARY_FIELDS)]


# verify

def cmd_verify(config: RunConfig) -> list[Path]:
    """
    Run a suite and write the JSON and CSV reports.

    Raises:
        IdentityFailure: At least one row exceeded its tolerance or errored
    """
    suite = config.suite or "all"
    grid = resolve_grid(config) if (config.grid or config.grid_file) else None
    suite_config = SuiteConfig(
        grid=grid, rank=config.rank, seed=config.seed, cutoff=config.cutoff,
        band_limit=config.band_limit, tol=config.tol,
    )
    rows = run_suite(suite, suite_config)
    report = SuiteReportSchema(
        suite=suite,
        config=config.model_dump(),
        rows=[SuiteRowSchema(**row.to_dict()) for row in rows],
    )
    out = _output(config, f"verify-{suite}.json")
    written = [write_model(out, report), write_csv(out.with_suffix(".csv"), [row.to_dict() for row in rows], ROW_FIELDS)]
    failed = [row for row in rows if not row.passed]
    if failed:
        logger.warning("verify.failed", suite=suite, failed=[row.name for row in failed])
        raise IdentityFailure(
            f"{len(failed)} of {len(rows)} identities failed",
            defect=max(row.defect for row in failed),
            failed=[row.name for row in failed],
            report=str(out),
        )
    logger.info("verify.passed", suite=suite, rows=len(rows))
    return written
