import pytest
from hypothesis import given, strategies as st

from conftest import EXAMPLES
from lifshitz_audit import config as C
from lifshitz_audit import materials as M

RUN = """\
[run]
material = gold.mat
schemes = modified, fresnel
outputs = pressure, free_energy

[separation]
a_min_nm = 200
a_max_nm = 800
a_count = 4

[temperature]
T_min_K = 300
"""


def test_example_material_files_load():
    for path in sorted(EXAMPLES.glob("*.mat")):
        spec = C.load_material(path)
        assert spec.name
        assert spec.source == path.read_text()


def test_gold_material():
    spec = C.load_material(EXAMPLES / "gold.mat")
    assert isinstance(spec.response, M.ScreenedConductor)
    assert spec.response.kind is M.ScreeningKind.THOMAS_FERMI
    assert spec.response.carriers.mobility_exponent == 5.0


def test_run_config_defaults():
    cfg = C.parse_config(RUN)
    assert cfg.schemes == ("modified", "fresnel")
    assert cfg.separation.values() == [200.0, 400.0, 600.0, 800.0]
    assert cfg.temperature.values() == [300.0]
    assert cfg.tol == 1e-8
    assert cfg.audit == C.AuditSettings()


def test_round_trip():
    cfg = C.parse_config(RUN)
    text = C.dump_config(cfg)
    again = C.parse_config(text)
    assert again == cfg
    assert C.dump_config(again) == text


@given(
    st.floats(10.0, 1000.0),
    st.floats(1.5, 9.0),
    st.integers(1, 20),
    st.sampled_from(["linear", "log"]),
    st.floats(1e-12, 0.5),
)
def test_round_trip_property(lo, factor, count, spacing, tol):
    text = RUN.replace("a_min_nm = 200", f"a_min_nm = {lo!r}").replace("a_max_nm = 800", f"a_max_nm = {lo * factor!r}")
    text = text.replace("a_count = 4", f"a_count = {count}\na_spacing = {spacing}")
    text = text.replace("[run]\n", f"[run]\ntol = {tol!r}\n")
    cfg = C.parse_config(text)
    assert C.parse_config(C.dump_config(cfg)) == cfg


def test_log_grid_of_seven():
    text = RUN.replace("T_min_K = 300", "T_min_K = 0.05\nT_max_K = 5\nT_count = 7\nT_spacing = log")
    values = C.parse_config(text).temperature.values()
    assert len(values) == 7
    assert values[0] == pytest.approx(0.05) and values[-1] == pytest.approx(5.0)
    assert values[3] == pytest.approx(0.5)


@pytest.mark.parametrize(
    "edit,line,column,fragment",
    [
        (("a_count = 4", "a_count = 4\n  colour = blue"), 10, 3, "unknown key 'colour'"),
        (("a_count = 4", "a_count = four"), 9, 11, "a_count"),
        (("[temperature]", "[temperature"), 11, 1, "unterminated"),
        (("schemes = modified, fresnel", "schemes = modified, magic"), 3, 11, "unknown scheme 'magic'"),
        (("T_min_K = 300", "T_min_K = -1"), 12, 11, "positive"),
        (("[run]", "[run]\nfoo"), 2, 1, "key = value"),
    ],
)
def test_errors_carry_line_and_column(edit, line, column, fragment):
    with pytest.raises(C.ConfigError) as info:
        C.parse_config(RUN.replace(*edit), "run.cfg")
    err = info.value
    assert (err.line, err.column) == (line, column)
    assert fragment in str(err)
    assert str(err).startswith(f"run.cfg:{line}:{column}: ")


def test_unknown_section():
    with pytest.raises(C.ConfigError, match=r"\[plots\]"):
        C.parse_config(RUN + "\n[plots]\nx = 1\n")


def test_missing_section():
    with pytest.raises(C.ConfigError, match="missing"):
        C.parse_config(RUN.split("[temperature]")[0])


def test_material_errors():
    with pytest.raises(C.ConfigError) as info:
        C.parse_material("[model]\nname = x\nvariant = dielectric\n[oscillators]\n1.0 abc\n", "x.mat")
    assert (info.value.line, info.value.column) == (5, 5)
    with pytest.raises(C.ConfigError):
        C.parse_material("[model]\nname = x\nvariant = crystal\n")


def test_screened_scheme_needs_carriers(tmp_path):
    (tmp_path / "plain.mat").write_text("[model]\nname = plain\nvariant = dielectric\n[oscillators]\n200 10\n")
    cfg = tmp_path / "run.cfg"
    cfg.write_text(RUN.replace("gold.mat", "plain.mat"))
    with pytest.raises(C.ConfigError, match="modified"):
        C.load_config(cfg)


def test_config_hash_tracks_materials(tmp_path):
    cfg = C.load_config(EXAMPLES / "gold_pressure.cfg")
    h1 = C.config_hash(cfg)
    assert h1 == C.config_hash(C.load_config(EXAMPLES / "gold_pressure.cfg"))
    (tmp_path / "gold.mat").write_text((EXAMPLES / "gold.mat").read_text().replace("T_ref_K = 300", "T_ref_K = 290"))
    (tmp_path / "run.cfg").write_text((EXAMPLES / "gold_pressure.cfg").read_text())
    assert C.config_hash(C.load_config(tmp_path / "run.cfg")) != h1
