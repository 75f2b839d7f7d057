"""Material files and run configurations.

Both use the same sectioned text format::

    # comment
    [section]
    key = value          # trailing comments allowed
    [table_section]
    1.0  2.0  3.0        # whitespace-separated numeric rows

Unknown sections and keys are rejected with the line and column of the
offending token.  Key names carry their units (``a_min_nm``, ``T_max_K``).
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import constants as const
from .materials import (
    CarrierModel,
    Dielectric,
    DrudeMetal,
    DrudeParams,
    GeneralizedPlasma,
    MaterialError,
    MaterialResponse,
    ScreenedConductor,
    ScreeningKind,
    Statistics,
    oscillator_set,
)
from .schemes import SCHEME_NAMES, build_scheme


class ConfigError(ValueError):
    """Syntax or semantic error in a material file or run configuration."""

    def __init__(self, message, path=None, line=None, column=None):
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
                if column is not None:
                    where += f":{column}"
            where += ": "
        super().__init__(where + message)
        self.path, self.line, self.column = path, line, column


@dataclass
class _Entry:
    value: str
    line: int
    column: int
    key_column: int


@dataclass
class _Section:
    name: str
    line: int
    keys: Dict[str, _Entry] = field(default_factory=dict)
    rows: List[Tuple[List[float], int]] = field(default_factory=list)


def parse_sections(text, path=None, table_sections=()):
    """Split text into sections; ``table_sections`` hold numeric rows instead of keys."""
    sections: Dict[str, _Section] = {}
    current: Optional[_Section] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.lstrip()
        if not stripped:
            continue
        col = len(line) - len(stripped) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ConfigError("unterminated section header", path, lineno, col)
            name = stripped[1:-1].strip()
            if not name:
                raise ConfigError("empty section name", path, lineno, col + 1)
            if name in sections:
                raise ConfigError(f"duplicate section [{name}]", path, lineno, col)
            current = sections[name] = _Section(name, lineno)
            continue
        if current is None:
            raise ConfigError("content before the first section header", path, lineno, col)
        if current.name in table_sections:
            row = []
            offset = col
            for tok in stripped.split():
                pos = line.index(tok, offset - 1) + 1
                try:
                    row.append(float(tok))
                except ValueError:
                    raise ConfigError(f"expected a number, got {tok!r}", path, lineno, pos) from None
                offset = pos + len(tok)
            current.rows.append((row, lineno))
            continue
        if "=" not in stripped:
            raise ConfigError("expected 'key = value'", path, lineno, col)
        key, value = stripped.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError("missing key before '='", path, lineno, col)
        if key in current.keys:
            raise ConfigError(f"duplicate key {key!r}", path, lineno, col)
        vcol = line.index("=") + 2 + (len(value) - len(value.lstrip()))
        current.keys[key] = _Entry(value.strip(), lineno, vcol, col)
    return sections


class _Reader:
    """Typed access to one section with unknown-key detection."""

    def __init__(self, section: Optional[_Section], allowed, path):
        self.section = section
        self.path = path
        if section is not None:
            for key, entry in section.keys.items():
                if key not in allowed:
                    raise ConfigError(
                        f"unknown key {key!r} in [{section.name}]; allowed: {', '.join(sorted(allowed))}",
                        path, entry.line, entry.key_column,
                    )

    def _entry(self, key):
        if self.section is None:
            return None
        return self.section.keys.get(key)

    def has(self, key):
        return self._entry(key) is not None

    def error(self, key, message):
        e = self._entry(key)
        if e is None:
            return ConfigError(message, self.path)
        return ConfigError(f"{key}: {message}", self.path, e.line, e.column)

    def text(self, key, default=None, choices=None):
        e = self._entry(key)
        if e is None:
            if default is None:
                where = f"[{self.section.name}]" if self.section else "section"
                raise ConfigError(f"missing required key {key!r} in {where}", self.path)
            return default
        if choices is not None and e.value not in choices:
            raise self.error(key, f"expected one of {', '.join(choices)}, got {e.value!r}")
        return e.value

    def number(self, key, default=None, integer=False):
        e = self._entry(key)
        if e is None:
            if default is None:
                where = f"[{self.section.name}]" if self.section else "section"
                raise ConfigError(f"missing required key {key!r} in {where}", self.path)
            return default
        try:
            v = int(e.value) if integer else float(e.value)
        except ValueError:
            kind = "an integer" if integer else "a number"
            raise self.error(key, f"expected {kind}, got {e.value!r}") from None
        return v

    def items(self, key, default=None):
        raw = self.text(key, default)
        return [s.strip() for s in raw.split(",") if s.strip()]


def _check_sections(sections, allowed, path):
    for name, sec in sections.items():
        if name not in allowed:
            raise ConfigError(f"unknown section [{name}]; allowed: {', '.join(allowed)}", path, sec.line, 1)


# ---------------------------------------------------------------------------
# material files

MATERIAL_SECTIONS = ("model", "oscillators", "carriers", "drude", "density_table")
VARIANTS = ("dielectric", "drude_metal", "generalized_plasma", "screened_conductor")
MODEL_KEYS = {"name", "variant", "screening"}
CARRIER_KEYS = {
    "n_per_cm3", "mass_ratio", "mobility_cm2_per_Vs", "statistics", "T_ref_K",
    "n_activation_eV", "mobility_activation_eV", "mobility_T_exponent",
}
DRUDE_KEYS = {"omega_p_eV", "gamma_eV"}


@dataclass(frozen=True)
class MaterialSpec:
    name: str
    response: MaterialResponse
    source: str

    @property
    def digest(self):
        return hashlib.sha256(self.source.encode()).hexdigest()


def parse_material(text, path=None) -> MaterialSpec:
    """Build a material from the text of a material file."""
    secs = parse_sections(text, path, table_sections=("oscillators", "density_table"))
    _check_sections(secs, MATERIAL_SECTIONS, path)
    if "model" not in secs:
        raise ConfigError("missing [model] section", path)
    model = _Reader(secs["model"], MODEL_KEYS, path)
    variant = model.text("variant", choices=VARIANTS)
    name = model.text("name", default=Path(path).stem if path else "material")

    rows = []
    for row, line in secs["oscillators"].rows if "oscillators" in secs else []:
        if len(row) not in (2, 3):
            raise ConfigError("oscillator rows are 'f_eV2 omega_eV [gamma_eV]'", path, line, 1)
        rows.append(tuple(row) if len(row) == 3 else (row[0], row[1], 0.0))
    try:
        osc = oscillator_set(rows)
    except MaterialError as exc:
        raise ConfigError(str(exc), path) from None

    carriers = _carriers(secs, path)
    drude = None
    if "drude" in secs:
        dr = _Reader(secs["drude"], DRUDE_KEYS, path)
        drude = DrudeParams(
            dr.number("omega_p_eV") * const.EV_TO_RAD_S,
            dr.number("gamma_eV", 0.0) * const.EV_TO_RAD_S,
        )

    if model.has("screening") and variant != "screened_conductor":
        raise model.error("screening", "only screened_conductor materials take a screening kind")
    try:
        if variant == "dielectric":
            response = Dielectric(osc)
        elif variant == "drude_metal":
            if drude is None and carriers is None:
                raise ConfigError("drude_metal needs a [drude] or [carriers] section", path)
            response = DrudeMetal(osc, drude, carriers)
        elif variant == "generalized_plasma":
            if drude is not None:
                wp = drude.omega_p
            elif carriers is not None:
                wp = carriers.plasma_frequency()
            else:
                raise ConfigError("generalized_plasma needs a [drude] or [carriers] section", path)
            response = GeneralizedPlasma(osc, wp)
        else:
            if carriers is None:
                raise ConfigError("screened_conductor needs a [carriers] section", path)
            kinds = tuple(k.value for k in ScreeningKind)
            kind = ScreeningKind(model.text("screening", "debye_huckel", choices=kinds))
            response = ScreenedConductor(osc, carriers, kind)
    except MaterialError as exc:
        raise ConfigError(str(exc), path) from None
    return MaterialSpec(name, response, text)


def _carriers(secs, path):
    if "carriers" not in secs:
        if "density_table" in secs:
            raise ConfigError("[density_table] needs a [carriers] section", path)
        return None
    cr = _Reader(secs["carriers"], CARRIER_KEYS, path)
    table = []
    for row, line in secs["density_table"].rows if "density_table" in secs else []:
        if len(row) != 2:
            raise ConfigError("density_table rows are 'T_K n_per_cm3'", path, line, 1)
        table.append((row[0], row[1] * 1e6))
    stats = tuple(s.value for s in Statistics)
    try:
        return CarrierModel(
            density=cr.number("n_per_cm3") * 1e6,
            effective_mass=cr.number("mass_ratio", 1.0) * const.m_e,
            mobility=cr.number("mobility_cm2_per_Vs", 0.0) * 1e-4,
            statistics=Statistics(cr.text("statistics", "maxwell_boltzmann", choices=stats)),
            T_ref=cr.number("T_ref_K", 300.0),
            density_activation=cr.number("n_activation_eV", 0.0) * const.e,
            mobility_activation=cr.number("mobility_activation_eV", 0.0) * const.e,
            mobility_exponent=cr.number("mobility_T_exponent", 0.0),
            density_table=tuple(table),
        )
    except MaterialError as exc:
        raise ConfigError(str(exc), path) from None


def load_material(path) -> MaterialSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read material file: {exc.strerror}", path) from None
    return parse_material(text, path)


# ---------------------------------------------------------------------------
# run configurations

RUN_SECTIONS = ("run", "separation", "temperature", "audit")
OUTPUTS = ("free_energy", "pressure", "entropy", "nernst_audit", "scheme_compare")
SPACINGS = ("linear", "log")
RUN_KEYS = {"material", "schemes", "reference_scheme", "outputs", "tol", "entropy_tol"}
SEP_KEYS = {"a_min_nm", "a_max_nm", "a_count", "a_spacing"}
TEMP_KEYS = {"T_min_K", "T_max_K", "T_count", "T_spacing"}
AUDIT_KEYS = {"zero_tol", "violation_tol", "match_tol", "max_residual", "min_exponent"}


@dataclass(frozen=True)
class Grid:
    lo: float
    hi: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("grid count must be >= 1")
        if self.count > 1 and not self.lo < self.hi:
            raise ValueError("grid needs min < max")
        if self.count == 1 and self.lo > self.hi:
            raise ValueError("grid needs min <= max")
        if self.spacing not in SPACINGS:
            raise ValueError(f"spacing must be one of {SPACINGS}")
        if self.spacing == "log" and not self.lo > 0:
            raise ValueError("log spacing needs a positive minimum")

    def values(self):
        if self.count == 1:
            return [float(self.lo)]
        if self.spacing == "log":
            v = np.geomspace(self.lo, self.hi, self.count)
        else:
            v = np.linspace(self.lo, self.hi, self.count)
        return [float(x) for x in v]


@dataclass(frozen=True)
class AuditSettings:
    """Thresholds of the Nernst verdict, in units of k_B / (16 pi a^2) where dimensional."""

    zero_tol: float = 1e-3
    violation_tol: float = 1e-2
    match_tol: float = 1e-2
    max_residual: float = 1e-3
    min_exponent: float = 0.5


@dataclass(frozen=True)
class RunConfig:
    materials: Tuple[str, ...]
    schemes: Tuple[str, ...]
    separation: Grid
    temperature: Grid
    outputs: Tuple[str, ...] = ("free_energy",)
    reference_scheme: Optional[str] = None
    tol: float = 1e-8
    entropy_tol: float = 1e-4
    audit: AuditSettings = AuditSettings()
    base_dir: str = field(default=".", compare=False)

    def material_paths(self):
        return [Path(self.base_dir) / m for m in self.materials]

    def load_materials(self):
        return [load_material(p) for p in self.material_paths()]

    def separations_m(self):
        return [v * 1e-9 for v in self.separation.values()]

    def temperatures_K(self):
        return self.temperature.values()


def parse_config(text, path=None) -> RunConfig:
    secs = parse_sections(text, path)
    _check_sections(secs, RUN_SECTIONS, path)
    for name in ("run", "separation", "temperature"):
        if name not in secs:
            raise ConfigError(f"missing [{name}] section", path)
    run = _Reader(secs["run"], RUN_KEYS, path)
    sep = _Reader(secs["separation"], SEP_KEYS, path)
    temp = _Reader(secs["temperature"], TEMP_KEYS, path)
    aud = _Reader(secs.get("audit"), AUDIT_KEYS, path)

    materials = tuple(run.items("material"))
    if not materials:
        raise run.error("material", "at least one material file is required")
    schemes = tuple(run.items("schemes"))
    if not schemes:
        raise run.error("schemes", "at least one scheme is required")
    for s in schemes:
        if s not in SCHEME_NAMES:
            raise run.error("schemes", f"unknown scheme {s!r}; choose from {', '.join(SCHEME_NAMES)}")
    outputs = tuple(run.items("outputs", "free_energy"))
    for o in outputs:
        if o not in OUTPUTS:
            raise run.error("outputs", f"unknown output {o!r}; choose from {', '.join(OUTPUTS)}")
    reference = run.text("reference_scheme", "") or None
    if reference is not None and reference not in schemes:
        raise run.error("reference_scheme", "must be one of the selected schemes")
    if "scheme_compare" in outputs and len(schemes) < 2:
        raise run.error("outputs", "scheme_compare needs at least two schemes")
    tol = run.number("tol", 1e-8)
    etol = run.number("entropy_tol", 1e-4)
    for key, v in (("tol", tol), ("entropy_tol", etol)):
        if not 0 < v < 1:
            raise run.error(key, "tolerance must lie in (0, 1)")

    def grid(reader, prefix, unit):
        try:
            lo = reader.number(f"{prefix}_min_{unit}")
            hi = reader.number(f"{prefix}_max_{unit}", lo)
            count = reader.number(f"{prefix}_count", 1, integer=True)
            spacing = reader.text(f"{prefix}_spacing", "linear", choices=SPACINGS)
            return Grid(lo, hi, count, spacing)
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise reader.error(f"{prefix}_min_{unit}", str(exc)) from None

    separation = grid(sep, "a", "nm")
    temperature = grid(temp, "T", "K")
    if not separation.lo > 0:
        raise sep.error("a_min_nm", "separations must be positive")
    if not temperature.lo > 0:
        raise temp.error("T_min_K", "temperatures must be positive")

    defaults = AuditSettings()
    audit = AuditSettings(**{f.name: aud.number(f.name, getattr(defaults, f.name)) for f in fields(AuditSettings)})
    base = str(Path(path).parent) if path is not None else "."
    return RunConfig(materials, schemes, separation, temperature, outputs, reference, tol, etol, audit, base)


def validate(config: RunConfig, path=None):
    """Semantic checks that need the material files: scheme/material compatibility."""
    specs = []
    for mp in config.material_paths():
        spec = load_material(mp)
        for s in config.schemes:
            try:
                build_scheme(s, spec.response)
            except MaterialError as exc:
                raise ConfigError(f"schemes: {s!r} cannot be used with material {spec.name!r}: {exc}", path) from None
        specs.append(spec)
    return specs


def load_config(path) -> RunConfig:
    """Read and validate a run configuration (including its material files)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", path) from None
    config = parse_config(text, path)
    validate(config, path)
    return config


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def dump_config(config: RunConfig) -> str:
    """Canonical text of a resolved configuration (every default spelled out)."""
    lines = ["[run]"]
    lines.append(f"material = {', '.join(config.materials)}")
    lines.append(f"schemes = {', '.join(config.schemes)}")
    if config.reference_scheme:
        lines.append(f"reference_scheme = {config.reference_scheme}")
    lines.append(f"outputs = {', '.join(config.outputs)}")
    lines.append(f"tol = {_fmt(config.tol)}")
    lines.append(f"entropy_tol = {_fmt(config.entropy_tol)}")
    for name, g, prefix, unit in (
        ("separation", config.separation, "a", "nm"),
        ("temperature", config.temperature, "T", "K"),
    ):
        lines += [
            "",
            f"[{name}]",
            f"{prefix}_min_{unit} = {_fmt(float(g.lo))}",
            f"{prefix}_max_{unit} = {_fmt(float(g.hi))}",
            f"{prefix}_count = {g.count}",
            f"{prefix}_spacing = {g.spacing}",
        ]
    lines += ["", "[audit]"]
    for f in fields(AuditSettings):
        lines.append(f"{f.name} = {_fmt(float(getattr(config.audit, f.name)))}")
    return "\n".join(lines) + "\n"


def config_hash(config: RunConfig, materials=None) -> str:
    """SHA-256 over the canonical config text and the material file contents."""
    h = hashlib.sha256(dump_config(config).encode())
    for spec in materials or config.load_materials():
        h.update(b"\0")
        h.update(spec.source.encode())
    return h.hexdigest()
