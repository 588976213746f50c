"""
Verification suites for CaloronKit.
Named collections of identity checks, each measuring a defect against a
tolerance on deterministic seed data. Rows run on a thread pool.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import structlog

from ..config import settings
from ..errors import CaloronKitError, ConfigError
from ..models.connection import ConnectionPair, FormPath
from ..models.forms import MatrixForm, graded_defect
from ..models.grid import Circle, EulerSphere3, Grid, make_grid, torus
from ..models.group import GroupMap
from ..models.report import SuiteRow
from .calculus import d, d_graded, integrate, is_exact_graded, wedge
from .chernweil import chern_character, chern_simons, chern_simons_via_slices, odd_chern_character, total_chern_simons
from .generator import homotopy_grid, random_connection, random_homotopy_values, random_pair
from .geometry import (
    caloron_transform, curvature, flat_pair, higgs_covariant_derivative, higgs_holonomy_map,
    horizontal_curvature, inverse_caloron, straight_line, trivial_pair,
)
from .kmodel import cs_equivalent, inverse_witness, twz_transgression
from .lie import (
    holonomy, matrix_exp, maurer_cartan, random_smooth_map, rotation_homotopy_map, sphere_identity_map, winding_map,
)
from .stringforms import (
    gerbe_curving_check, string_form, string_potential, surjectivity_witness, tau_hat_pullback,
    total_string_potential, total_string_potential_via_caloron, universal_string_pullback,
)

logger = structlog.get_logger(__name__)

SUITE_NAMES = ("calculus", "caloron", "chernweil", "string", "total", "twz")

# Required convergence order of the holonomy integrator
HOLONOMY_ORDER = 3.7


@dataclass(frozen=True)
class SuiteConfig:
    """
    Parameters shared by every row of a suite run.

    Attributes:
        grid: Overrides the suite's default grid when given
        rank: Matrix rank of random data
        seed: Seed of every random field
        cutoff: Series cutoff (None: the suite default)
        band_limit: Band limit of random data
        tol: Overrides every identity tolerance when given
    """

    grid: Optional[Grid] = None
    rank: int = 2
    seed: int = 7
    cutoff: Optional[int] = None
    band_limit: int = 1
    tol: Optional[float] = None


@dataclass(frozen=True)
class Check:
    """One identity: a defect measurement and its tolerance."""

    name: str
    identity: str
    tolerance: float
    measure: Callable[[], float]


def _tolerance(config: SuiteConfig, default: float) -> float:
    return default if config.tol is None else config.tol


def _worst(defects: dict[int, float]) -> float:
    return max(defects.values(), default=0.0)


def _grid(config: SuiteConfig, default: Grid, loop: bool) -> Grid:
    """
    Suite grid from the configured one.

    Loop suites treat a trailing plain circle as θ; base suites ignore the
    distinguished marker and run on all factors.
    """
    grid = default if config.grid is None else config.grid
    if loop and grid.distinguished_circle is None:
        if len(grid.factors) < 2 or not isinstance(grid.factors[-1], Circle):
            raise ConfigError("Loop suites need a grid ending in a circle factor after at least one other factor")
        loop_circle = Circle(grid.factors[-1].n, grid.factors[-1].period)
        return make_grid(grid.factors[:-1] + (loop_circle,), grid.dim - 1)
    if not loop and grid.distinguished_circle is not None:
        return make_grid(grid.factors)
    return grid


# Calculus

def calculus_checks(config: SuiteConfig) -> list[Check]:
    grid = _grid(config, torus(32, 32, 32), loop=False)
    tol = _tolerance(config, settings.CLOSED_TOL)

    def connections() -> tuple[MatrixForm, MatrixForm]:
        a = random_connection(grid, config.rank, config.seed, config.band_limit, unitary=False)
        b = random_connection(grid, config.rank, config.seed + 1, config.band_limit, unitary=False)
        return a, b

    def d_squared() -> float:
        a, _ = connections()
        return d(d(a)).sup_norm()

    def leibniz() -> float:
        a, b = connections()
        return (d(wedge(a, b)) - (wedge(d(a), b) - wedge(a, d(b)))).sup_norm()

    def stokes() -> float:
        a, b = connections()
        eta = wedge(a, b).trace()
        while eta.degree < grid.dim - 1:
            eta = wedge(eta, random_connection(grid, 1, config.seed + 2 + eta.degree, config.band_limit))
        return float(np.max(np.abs(integrate(d(eta)))))

    def flatness() -> float:
        g = random_smooth_map(grid, config.rank, config.seed, config.band_limit, unitary=True)
        theta = maurer_cartan(g)
        return (d(theta) + wedge(theta, theta)).sup_norm()

    return [
        Check("d_squared", "d(d(a)) = 0", tol, d_squared),
        Check("leibniz", "d(a∧b) = da∧b − a∧db", tol, leibniz),
        Check("stokes", "∫ dη = 0 on the torus", tol, stokes),
        Check("maurer_cartan_flatness", "dΘ + Θ∧Θ = 0 for Θ = g⁻¹dg", tol, flatness),
    ]


# Caloron correspondence

def caloron_checks(config: SuiteConfig) -> list[Check]:
    grid = _grid(config, torus(16, 16, loop=32), loop=True)
    tol = _tolerance(config, settings.CLOSED_TOL)

    def pair():
        return random_pair(grid, config.rank, config.seed, config.band_limit)

    def roundtrip() -> float:
        p = pair()
        back = inverse_caloron(caloron_transform(p))
        framed = caloron_transform(back)
        defect = max((back.connection - p.connection).sup_norm(), (back.higgs - p.higgs).sup_norm())
        return max(defect, (framed.form - caloron_transform(p).form).sup_norm())

    def splitting() -> float:
        p = pair()
        theta = grid.circle_axis
        F = curvature(caloron_transform(p))
        F_M = horizontal_curvature(p)
        nabla_phi = higgs_covariant_derivative(p)
        worst = 0.0
        for index, array in F.coeffs.items():
            expected = nabla_phi.coeffs[index[:1]] if index[-1] == theta else F_M.coeffs[index]
            worst = max(worst, float(np.max(np.abs(array - expected))))
        return worst

    def constant_holonomy() -> float:
        p = trivial_pair(grid, config.rank)
        half = MatrixForm.function(grid, np.broadcast_to(0.5j * np.eye(config.rank), grid.shape + (config.rank,) * 2))
        shifted = ConnectionPair(p.connection, half, unitary=True)
        values = higgs_holonomy_map(shifted).values
        return float(np.max(np.abs(values + np.eye(config.rank))))

    def holonomy_order() -> float:
        phi = np.array([[0.3j, 1.0], [-1.0, -0.2j]])
        exact = matrix_exp(2 * math.pi * phi)
        errors = []
        for n in (16, 32, 64):
            loop = np.broadcast_to(phi, (n, 2, 2))
            errors.append(float(np.max(np.abs(holonomy(loop, steps=n) - exact))))
        order = min(math.log2(errors[0] / errors[1]), math.log2(errors[1] / errors[2]))
        return max(0.0, HOLONOMY_ORDER - order)

    return [
        Check("caloron_roundtrip", "inverse_caloron ∘ caloron = id", 0.0, roundtrip),
        Check("curvature_splitting", "F(A + Φdθ) = F_M + ∇Φ∧dθ", tol, splitting),
        Check("constant_holonomy", "hol(Φ = i/2·I) = −I", settings.UNITARY_TOL, constant_holonomy),
        Check("holonomy_order", f"RK4 convergence order ≥ {HOLONOMY_ORDER}", 0.0, holonomy_order),
    ]


# Chern-Weil

def chernweil_checks(config: SuiteConfig) -> list[Check]:
    grid = _grid(config, torus(24, 24, 24), loop=False)
    cutoff = 2 if config.cutoff is None else config.cutoff
    closed = _tolerance(config, settings.CLOSED_TOL)
    tol = _tolerance(config, settings.IDENTITY_TOL)

    def connections() -> tuple[MatrixForm, MatrixForm]:
        return (random_connection(grid, config.rank, config.seed, config.band_limit),
                random_connection(grid, config.rank, config.seed + 1, config.band_limit))

    def ch_closed() -> float:
        a, _ = connections()
        return _worst(d_graded(chern_character(a, cutoff)).sup_norms())

    def transgression() -> float:
        a0, a1 = connections()
        cs = chern_simons(FormPath.straight(a0, a1), cutoff)
        delta = chern_character(a1, cutoff) - chern_character(a0, cutoff)
        return _worst(graded_defect(d_graded(cs), delta))

    def cross_algorithm() -> float:
        a0, a1 = connections()
        path = FormPath.straight(a0, a1)
        return _worst(graded_defect(chern_simons(path, cutoff), chern_simons_via_slices(path, cutoff)))

    def total() -> float:
        _, a = connections()
        line = FormPath.straight(MatrixForm.zeros(grid, 1, config.rank), a)
        return _worst(graded_defect(total_chern_simons(a, cutoff), chern_simons(line, cutoff)))

    def winding() -> float:
        circle = make_grid([Circle(grid.shape[0])])
        worst = 0.0
        for k in range(-3, 4):
            term = odd_chern_character(winding_map(circle, k), 0).term(1)
            worst = max(worst, abs(complex(integrate(term)[0, 0]) - k))
        return worst

    return [
        Check("chern_closed", "d Ch(∇) = 0", closed, ch_closed),
        Check("chern_simons_transgression", "dCS(γ) = Ch(∇₁) − Ch(∇₀)", tol, transgression),
        Check("chern_simons_cross_algorithm", "CS direct = CS via slices", tol, cross_algorithm),
        Check("total_chern_simons", "total CS(a) = CS(0 → a)", tol, total),
        Check("winding_integrality", "∫ Ch₁(e^{ikθ}) = k", settings.UNITARY_TOL, winding),
    ]


def sphere_check(config: SuiteConfig) -> Check:
    """Degree of the identity of SU(2) through the Euler chart."""
    def degree() -> float:
        grid = make_grid([EulerSphere3(24, 24, 48)])
        term = odd_chern_character(sphere_identity_map(grid), 1).term(3)
        return abs(complex(integrate(term)[0, 0]) - 1.0)

    return Check("sphere_degree", "∫_{S³} Ch₃(id_{SU(2)}) = 1", 1e-3, degree)


# String forms

def string_checks(config: SuiteConfig) -> list[Check]:
    grid = _grid(config, torus(16, 16, loop=32), loop=True)
    cutoff = 3 if config.cutoff is None else config.cutoff
    tol = _tolerance(config, settings.IDENTITY_TOL)

    def pairs():
        return [random_pair(grid, config.rank, config.seed + k, config.band_limit) for k in range(3)]

    def two_algorithms() -> float:
        p = pairs()[0]
        return _worst(graded_defect(string_form(p, cutoff, "direct"), string_form(p, cutoff, "via_caloron")))

    def three_algorithms() -> float:
        p0, p1, _ = pairs()
        line = straight_line(p0, p1)
        explicit = string_potential(line, cutoff, "explicit")
        return max(_worst(graded_defect(explicit, string_potential(line, cutoff, "slice"))),
                   _worst(graded_defect(explicit, string_potential(line, cutoff, "cs_fiber"))))

    def potential_derivative() -> float:
        p0, p1, _ = pairs()
        S = string_potential(straight_line(p0, p1), cutoff)
        form_cutoff = (S.grid.dim + 1) // 2
        delta = string_form(p1, form_cutoff) - string_form(p0, form_cutoff)
        return _worst(graded_defect(d_graded(S), delta))

    def path_independence() -> float:
        p0, p1, p2 = pairs()
        loop = (string_potential(straight_line(p0, p1), cutoff)
                + string_potential(straight_line(p1, p2), cutoff)
                - string_potential(straight_line(p0, p2), cutoff))
        worst = 0.0
        for verdict in is_exact_graded(loop):
            worst = max(worst, verdict.closedness, verdict.worst_period or 0.0)
        return worst

    return [
        Check("string_form_algorithms", "s direct = ∫_{S¹} Ch(caloron)", _tolerance(config, settings.CLOSED_TOL),
              two_algorithms),
        Check("string_potential_algorithms", "S explicit = S slice = S cs_fiber", tol, three_algorithms),
        Check("string_potential_derivative", "dS = s₁ − s₀", tol, potential_derivative),
        Check("string_path_independence", "S around a triangle of pairs is exact",
              _tolerance(config, settings.EXACT_TOL), path_independence),
    ]


# Total string potential

def total_checks(config: SuiteConfig) -> list[Check]:
    grid = _grid(config, torus(16, 16, loop=32), loop=True)
    cutoff = 3 if config.cutoff is None else config.cutoff
    tol = _tolerance(config, settings.IDENTITY_TOL)

    def pair():
        return random_pair(grid, config.rank, config.seed, config.band_limit)

    def based_map() -> GroupMap:
        return random_smooth_map(grid, config.rank, config.seed, config.band_limit, unitary=True, based=True,
                                 amplitude=0.1)

    def total_vs_line() -> float:
        p = pair()
        line = straight_line(trivial_pair(grid, config.rank), p)
        return _worst(graded_defect(total_string_potential(p, cutoff), string_potential(line, cutoff)))

    def total_via_caloron() -> float:
        p = pair()
        return _worst(graded_defect(total_string_potential(p, cutoff), total_string_potential_via_caloron(p, cutoff)))

    def total_derivative() -> float:
        p = pair()
        S = total_string_potential(p, cutoff)
        return _worst(graded_defect(d_graded(S), string_form(p, (S.grid.dim + 1) // 2)))

    def tau_hat() -> float:
        G = based_map()
        direct = tau_hat_pullback(G, cutoff)
        return max(_worst(graded_defect(direct, total_string_potential(flat_pair(G), cutoff))),
                   _worst(graded_defect(direct, tau_hat_pullback(G, cutoff, "fiber"))))

    def gerbe() -> float:
        return gerbe_curving_check(pair())[1]

    def universal() -> float:
        g = random_smooth_map(grid, config.rank, config.seed, config.band_limit)
        return _worst(graded_defect(universal_string_pullback(g), odd_chern_character(g)))

    def surjectivity() -> float:
        base = grid.base()
        coords = base.mesh()
        profiles = [np.sin(coords[0]), np.cos(coords[0]) * np.sin(coords[-1]), 0.3 + np.cos(2 * coords[-1])]
        worst = 0.0
        for f in profiles:
            witness = surjectivity_witness(grid, f)
            S = string_potential(straight_line(trivial_pair(grid, 1), witness))
            worst = max(worst, float(np.max(np.abs(S.term(0).coeffs[()][..., 0, 0] - f))))
        return worst

    return [
        Check("total_string_potential", "S(A, Φ) = S(0 → (A, Φ))", tol, total_vs_line),
        Check("total_string_potential_via_caloron", "S(A, Φ) = ∫_{S¹} total CS", tol, total_via_caloron),
        Check("total_string_potential_derivative", "dS(A, Φ) = s(A, Φ)", tol, total_derivative),
        Check("tau_hat_pullback", "G*τ̂ = S(0 → flat pair of G)", tol, tau_hat),
        Check("gerbe_curving", "S₂ = (1/2πi)B + d((1/8π²)∫⟨A,Φ⟩)", tol, gerbe),
        Check("universal_string_form", "universal string pullback = Ch_odd", 1e-12, universal),
        Check("surjectivity_witness", "S(0 → (0, if)) = f", settings.UNITARY_TOL, surjectivity),
    ]


# CS-equivalence

def twz_checks(config: SuiteConfig) -> list[Check]:
    base = _grid(config, torus(32, 32), loop=False)
    cutoff = 2 if config.cutoff is None else config.cutoff

    def random_map() -> GroupMap:
        return random_smooth_map(base, config.rank, config.seed, config.band_limit, unitary=True)

    def homotopy() -> tuple[GroupMap, GroupMap, GroupMap]:
        grid, values = random_homotopy_values(base, config.rank, 65, config.seed, config.band_limit)
        G = GroupMap(grid, config.rank, values, unitary=True)
        t_axis = grid.dim - 1
        g0 = GroupMap(base, config.rank, G.slice_values(t_axis, 0), unitary=True)
        g1 = GroupMap(base, config.rank, G.slice_values(t_axis, -1), unitary=True)
        return g0, g1, G

    def nullity() -> float:
        return _worst(twz_transgression(rotation_homotopy_map(random_map()), cutoff).sup_norms())

    def inverse_class() -> float:
        _, _, report = inverse_witness(random_map(), cutoff)
        if not report.equivalent:
            return math.inf
        return max((v.worst_period or 0.0) for v in report.per_degree)

    def consistency() -> float:
        g0, g1, G = homotopy()
        return _worst(cs_equivalent(g0, g1, G, cutoff).consistency)

    def reflexive() -> float:
        g = random_map()
        grid = homotopy_grid(base, 9)
        constant = GroupMap(grid, config.rank, np.repeat(g.values[..., None, :, :], 9, axis=-3), unitary=True)
        report = cs_equivalent(g, g, constant, cutoff)
        return _worst(report.defect.sup_norms()) if report.equivalent else math.inf

    def symmetric() -> float:
        _, _, G = homotopy()
        reverse = GroupMap(G.grid, G.rank, G.values[..., ::-1, :, :].copy(), unitary=True)
        return _worst((twz_transgression(G, cutoff) + twz_transgression(reverse, cutoff)).sup_norms())

    return [
        Check("rotation_nullity", "tr(X⁻¹∂_tX (X⁻¹dX)^{2j}) = 0 for the rotation homotopy",
              _tolerance(config, settings.UNITARY_TOL), nullity),
        Check("inverse_class", "g⊕g⁻¹ is CS-equivalent to the identity", _tolerance(config, settings.EXACT_TOL),
              inverse_class),
        Check("transgression_consistency", "d(transgression) = Ch_odd(g₁) − Ch_odd(g₀)",
              _tolerance(config, settings.EXACT_TOL), consistency),
        Check("cs_reflexive", "constant homotopy is equivalent with zero defect",
              _tolerance(config, settings.UNITARY_TOL), reflexive),
        Check("cs_symmetric", "reversed homotopy negates the transgression",
              _tolerance(config, settings.EXACT_TOL), symmetric),
    ]


SUITES: dict[str, Callable[[SuiteConfig], list[Check]]] = {
    "calculus": calculus_checks,
    "caloron": caloron_checks,
    "chernweil": lambda config: chernweil_checks(config) + [sphere_check(config)],
    "string": string_checks,
    "total": total_checks,
    "twz": twz_checks,
}


def _run_check(suite: str, check: Check) -> SuiteRow:
    start = time.perf_counter()
    try:
        defect = float(check.measure())
        error = None
    except CaloronKitError as exc:
        defect, error = math.inf, f"{exc.kind}: {exc.message}"
    seconds = time.perf_counter() - start
    row = SuiteRow(f"{suite}.{check.name}", check.identity, defect, check.tolerance, seconds, error)
    logger.info("suite.row", name=row.name, defect=row.defect, passed=row.passed, seconds=round(seconds, 3))
    return row


def run_suite(name: str, config: Optional[SuiteConfig] = None, threads: Optional[int] = None) -> list[SuiteRow]:
    """
    Run one named suite (or "all") and return its rows in check order.

    Raises:
        ConfigError: Unknown suite name
    """
    config = SuiteConfig() if config is None else config
    if name == "all":
        names = list(SUITE_NAMES)
    elif name in SUITES:
        names = [name]
    else:
        raise ConfigError(f"Unknown suite: {name}", known=list(SUITE_NAMES) + ["all"])
    jobs = [(suite, check) for suite in names for check in SUITES[suite](config)]
    workers = settings.THREADS if threads is None else threads
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(lambda job: _run_check(*job), jobs))
    logger.info("suite.finished", suite=name, rows=len(rows), passed=sum(row.passed for row in rows))
    return rows
