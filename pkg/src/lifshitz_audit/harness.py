"""Sweeps, Nernst audits and scheme comparisons driven by a :class:`RunConfig`.

Tables are assembled in grid order (material, separation, temperature,
scheme) whatever the number of worker processes, and written with a fixed
float format, so identical inputs give byte-identical files.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from . import __version__
from . import constants as const
from . import kernel
from .config import AuditSettings, RunConfig, config_hash
from .lifshitz import (
    ConvergenceError,
    EvaluationPoint,
    FitError,
    entropy,
    fit_power_law,
    free_energy,
    pressure,
)
from .materials import ScreenedConductor, ScreeningError
from .schemes import ModifiedScreened, build_scheme
from .specfun import EntropyLimit, entropy_dielectric_limit, entropy_metal_limit

log = logging.getLogger(__name__)

QUANTITIES = ("free_energy", "pressure", "entropy")
UNITS = {"free_energy": "J_per_m2", "pressure": "Pa", "entropy": "J_per_K_m2"}


@dataclass(frozen=True)
class Column:
    name: str
    unit: str = ""

    @property
    def header(self):
        return f"{self.name}_{self.unit}" if self.unit else self.name


@dataclass
class ResultTable:
    columns: Tuple[Column, ...]
    rows: List[tuple] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def headers(self):
        return [c.header for c in self.columns]

    def column(self, header):
        i = self.headers.index(header)
        return [r[i] for r in self.rows]

    @property
    def all_converged(self):
        if "converged" not in self.headers:
            return True
        return all(self.column("converged"))


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(float(v))
    return str(v)


def format_table(table: ResultTable) -> str:
    lines = [f"# {k}: {table.metadata[k]}" for k in sorted(table.metadata)]
    lines.append(",".join(table.headers))
    for row in table.rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def emit_table(table: ResultTable, path):
    """Write ``table`` as CSV with a ``#`` metadata preamble."""
    path = Path(path)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(format_table(table))
    except OSError as exc:
        raise OSError(f"cannot write table to {path}: {exc.strerror}") from exc


def _metadata(config: RunConfig, materials, command):
    return {
        "tool": f"lifshitz_audit {__version__}",
        "constants": const.CONSTANTS_SET,
        "config_sha256": config_hash(config, materials),
        "backend": kernel.BACKEND,
        "command": command,
        "materials": ";".join(m.name for m in materials),
    }


# ---------------------------------------------------------------------------
# point evaluation (module level so worker processes can unpickle it)


def _evaluate(task):
    a, T, scheme, quantities, tol, etol = task
    out = {}
    ok = True
    l_max = 0
    qerr = 0.0
    try:
        point = EvaluationPoint(a, T, scheme)
        for q in quantities:
            if q == "free_energy":
                r = free_energy(point, tol)
                out[q] = r.free_energy
            elif q == "pressure":
                r = pressure(point, tol)
                out[q] = r.pressure
            else:
                r = entropy(point, etol)
                out[q] = r.entropy
            l_max = max(l_max, r.diagnostics.l_max)
            qerr = max(qerr, r.diagnostics.quad_error)
    except (ConvergenceError, ScreeningError, ZeroDivisionError, ValueError) as exc:
        log.warning("a=%g m T=%g K %s: %s", a, T, scheme.name, exc)
        ok = False
    return tuple(out.get(q, math.nan) for q in quantities), l_max, qerr, ok


def _run(tasks, jobs):
    if jobs and jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_evaluate, tasks))
    return [_evaluate(t) for t in tasks]


def _quantities(config: RunConfig, default=("free_energy",)):
    qs = tuple(q for q in QUANTITIES if q in config.outputs)
    return qs or default


def run_sweep(config: RunConfig, jobs=1, tol=None) -> ResultTable:
    """One row per (material, a, T, scheme) with the requested quantities."""
    materials = config.load_materials()
    tol = config.tol if tol is None else tol
    qs = _quantities(config)
    cols = [Column("material"), Column("scheme"), Column("a", "nm"), Column("T", "K")]
    cols += [Column(q, UNITS[q]) for q in qs]
    cols += [Column("l_max"), Column("quad_error_rel", "dimensionless"), Column("converged")]
    keys, tasks = [], []
    for m in materials:
        for a_nm, a in zip(config.separation.values(), config.separations_m()):
            for T in config.temperatures_K():
                for s in config.schemes:
                    keys.append((m.name, s, a_nm, T))
                    tasks.append((a, T, build_scheme(s, m.response), qs, tol, config.entropy_tol))
    table = ResultTable(tuple(cols), metadata=_metadata(config, materials, "sweep"))
    for key, (vals, l_max, qerr, ok) in zip(keys, _run(tasks, jobs)):
        table.rows.append((*key, *vals, l_max, qerr, ok))
    return table


def scheme_compare(config: RunConfig, jobs=1, tol=None) -> ResultTable:
    """Differences ``Q_scheme - Q_reference`` at every grid point."""
    if len(config.schemes) < 2:
        raise ValueError("scheme comparison needs at least two schemes")
    materials = config.load_materials()
    tol = config.tol if tol is None else tol
    qs = _quantities(config, default=("pressure",))
    ref = config.reference_scheme or config.schemes[0]
    ref_idx = config.schemes.index(ref)
    cols = [Column("material"), Column("scheme"), Column("reference"), Column("a", "nm"), Column("T", "K")]
    for q in qs:
        u = UNITS[q]
        cols += [Column(q, u), Column(f"{q}_ref", u), Column(f"{q}_diff", u),
                 Column(f"{q}_rel_diff", "dimensionless")]
    cols.append(Column("converged"))
    keys, tasks = [], []
    for m in materials:
        for a_nm, a in zip(config.separation.values(), config.separations_m()):
            for T in config.temperatures_K():
                for i, s in enumerate(config.schemes):
                    keys.append((m.name, i, s, a_nm, T))
                    tasks.append((a, T, build_scheme(s, m.response), qs, tol, config.entropy_tol))
    results = _run(tasks, jobs)
    table = ResultTable(tuple(cols), metadata=_metadata(config, materials, "compare"))
    n_s = len(config.schemes)
    for start in range(0, len(keys), n_s):
        block = list(zip(keys[start:start + n_s], results[start:start + n_s]))
        ref_vals, _, _, ref_ok = block[ref_idx][1]
        for i, ((mat, _, s, a_nm, T), (vals, _, _, ok)) in enumerate(block):
            if i == ref_idx:
                continue
            row = [mat, s, ref, a_nm, T]
            for v, r in zip(vals, ref_vals):
                d = v - r
                rel = d / abs(r) if r else (0.0 if d == 0 else math.nan)
                row += [v, r, d, rel]
            row.append(ok and ref_ok)
            table.rows.append(tuple(row))
    return table


# ---------------------------------------------------------------------------
# Nernst audit


def entropy_unit(a):
    """Natural entropy scale k_B / (16 pi a^2), J/(K m^2)."""
    return const.k_B / (16.0 * math.pi * a * a)


def closed_form_limit(scheme, a) -> Optional[EntropyLimit]:
    """Zero-temperature entropy predicted in closed form for ``scheme``, if any.

    Available for the screened scheme (and its nonlocal twin) when the carrier
    density stays finite: metals whose conductivity survives at T = 0 give the
    negative plasma-TE limit, conductors whose mobility freezes out give the
    positive dielectric limit.
    """
    if not isinstance(scheme, ModifiedScreened):
        return None
    mat: ScreenedConductor = scheme.material
    car = mat.carriers
    if car.density_vanishes_at_zero() or car.density == 0:
        return None
    if car.mobility_activation > 0 or car.mobility == 0:
        return entropy_dielectric_limit(a, mat.eps0)
    return entropy_metal_limit(a, car.plasma_frequency(car.T_ref))


def verdict(S0, exponent, limit_available, settings: AuditSettings, unit):
    """Classify an extrapolated zero-temperature entropy.

    ``satisfies_nernst`` when ``|S0|`` is below ``zero_tol`` natural units and
    S(T) vanishes with an exponent of at least ``min_exponent``;
    ``violates_nernst`` when ``|S0|`` exceeds ``violation_tol`` units;
    ``inconclusive`` otherwise or when the fit failed (NaN inputs).  The
    closed-form availability does not change the verdict, only whether a
    deviation from the limit is reported.
    """
    if S0 is None or exponent is None or math.isnan(S0) or math.isnan(exponent):
        return "inconclusive"
    size = abs(S0) / unit
    if size <= settings.zero_tol and exponent >= settings.min_exponent:
        return "satisfies_nernst"
    if size >= settings.violation_tol:
        return "violates_nernst"
    return "inconclusive"


AUDIT_COLUMNS = (
    Column("kind"), Column("material"), Column("scheme"), Column("a", "nm"), Column("T", "K"),
    Column("entropy", "J_per_K_m2"), Column("S0", "J_per_K_m2"), Column("exponent", "dimensionless"),
    Column("fit_residual", "dimensionless"), Column("limit", "J_per_K_m2"),
    Column("rel_deviation", "dimensionless"), Column("matches_limit"), Column("verdict"),
    Column("converged"),
)


def audit_one(a_nm, scheme, T_grid: Sequence[float], settings=AuditSettings(), tol=1e-4, material=""):
    """Sample and summary rows of the Nernst audit for one scheme and separation (in nm)."""
    Ts = sorted(T_grid, reverse=True)
    a = a_nm * 1e-9
    rows = []
    S = []
    ok = True
    for T in Ts:
        try:
            s = entropy(EvaluationPoint(a, T, scheme), tol).entropy
            good = True
        except (ConvergenceError, ScreeningError, ValueError) as exc:
            log.warning("audit a=%g m T=%g K %s: %s", a, T, scheme.name, exc)
            s, good = math.nan, False
        ok &= good
        S.append(s)
        rows.append(("sample", material, scheme.name, a_nm, T, s, None, None, None, None, None, None, None, good))
    limit = closed_form_limit(scheme, a)
    lim_val = limit.value if limit is not None else math.nan
    S0 = p = res = math.nan
    if ok and len(Ts) >= 6:
        S0, p, _, res = fit_power_law(Ts, S)
        if not res <= settings.max_residual:
            log.warning("audit %s: fit residual %.3e above %.1e", scheme.name, res, settings.max_residual)
            S0 = p = math.nan
    dev = abs(S0 - lim_val) / abs(lim_val) if limit is not None and lim_val != 0 else math.nan
    matches = None if math.isnan(dev) else bool(dev <= settings.match_tol)
    v = verdict(S0, p, limit is not None, settings, entropy_unit(a))
    rows.append(("summary", material, scheme.name, a_nm, None, None, S0, p, res, lim_val, dev, matches, v, ok))
    return rows


def nernst_audit(config: RunConfig, jobs=1, tol=None) -> ResultTable:
    """Entropy samples, zero-temperature extrapolation and verdict per scheme and separation."""
    materials = config.load_materials()
    etol = config.entropy_tol if tol is None else tol
    Ts = config.temperatures_K()
    if len(Ts) < 6:
        raise FitError(f"the audit needs at least 6 temperatures, got {len(Ts)}")
    table = ResultTable(AUDIT_COLUMNS, metadata=_metadata(config, materials, "audit"))
    tasks = []
    for m in materials:
        for a_nm in config.separation.values():
            for s in config.schemes:
                tasks.append((a_nm, build_scheme(s, m.response), tuple(Ts), config.audit, etol, m.name))
    if jobs and jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            blocks = list(pool.map(_audit_task, tasks))
    else:
        blocks = [_audit_task(t) for t in tasks]
    for b in blocks:
        table.rows.extend(b)
    return table


def _audit_task(task):
    a_nm, scheme, Ts, settings, etol, name = task
    return audit_one(a_nm, scheme, Ts, settings, etol, name)


def reverdict(table: ResultTable, settings: AuditSettings):
    """Recompute the verdicts of a stored audit table (pure function of its columns)."""
    out = []
    h = table.headers
    for row in table.rows:
        if row[h.index("kind")] != "summary":
            out.append(None)
            continue
        a = row[h.index("a_nm")] * 1e-9
        S0 = row[h.index("S0_J_per_K_m2")]
        p = row[h.index("exponent_dimensionless")]
        lim = row[h.index("limit_J_per_K_m2")]
        out.append(verdict(S0, p, not math.isnan(lim), settings, entropy_unit(a)))
    return out
