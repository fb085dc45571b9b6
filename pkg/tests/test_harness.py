import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from szegointerp.harness import (
    CATALOG,
    CSV_HEADER,
    ConfigError,
    ExperimentConfig,
    MeasureSpecError,
    WStrategy,
    parse_config,
    parse_measure_spec,
    render_config,
    run_convergence,
    run_verify,
)
from szegointerp.harness.cli import main
from szegointerp.measure import SzegoClass, moments


def test_grammar_basic():
    assert parse_measure_spec("lebesgue").szego_class is SzegoClass.SZEGO
    m = parse_measure_spec("arc:1.5707963")
    assert m.arc_half_width == pytest.approx(math.pi / 2, abs=1e-7)
    m = parse_measure_spec("lebesgue+atoms:0:1.0")
    assert moments(m, 1).values[1] == pytest.approx(1.0)
    m = parse_measure_spec("arc:1.5707963+atoms:0:0.25,3.1:0.5")
    assert len(m.atoms) == 2
    assert m.total_mass == pytest.approx(0.5 + 0.75, abs=1e-7)


@pytest.mark.parametrize("text", ["", "lebesgu", "arc", "arc:", "arc:x", "lebesgue+atoms",
                                  "lebesgue+atoms:0", "lebesgue+atoms:0:1,", "lebesgue junk"])
def test_grammar_syntax_errors(text):
    with pytest.raises(MeasureSpecError):
        parse_measure_spec(text)


@pytest.mark.parametrize("text", ["arc:0", "arc:4", "lebesgue+atoms:0:-1", "lebesgue+atoms:0:1,0:2"])
def test_grammar_semantic_errors(text):
    with pytest.raises(MeasureSpecError):
        parse_measure_spec(text)


def test_syntax_error_reports_position():
    with pytest.raises(MeasureSpecError) as info:
        parse_measure_spec("arc:1.0+atomz:0:1")
    assert info.value.position == 7


def test_catalog_values():
    z = np.exp(1j * np.array([0.0, math.pi / 2, math.pi]))
    np.testing.assert_allclose(CATALOG["conj"](z), 1 / z, atol=1e-15)
    np.testing.assert_allclose(CATALOG["absim"](z), [0, 1, 0], atol=1e-15)
    np.testing.assert_allclose(CATALOG["dist1"](z), [0, math.sqrt(2), 2], atol=1e-15)
    np.testing.assert_allclose(CATALOG["geom"](z), 1 / (2 - z))
    grid = np.exp(1j * np.linspace(0, 2 * math.pi, 4001))
    for f in CATALOG.values():
        assert np.max(np.abs(f(grid))) <= f.sup_norm * (1 + 1e-12)


def test_w_strategies():
    assert WStrategy("fixed", 1.0).angle(7, None) == 1.0
    assert WStrategy("rotate", 0.5).angle(3, None) == pytest.approx(1.5)
    a = WStrategy("pseudorandom").angle(4, 9)
    assert a == WStrategy("pseudorandom").angle(4, 9)
    assert a != WStrategy("pseudorandom").angle(5, 9)
    with pytest.raises(ConfigError):
        WStrategy.parse("spiral:1")


def base_config(**kw):
    args = dict(measure="lebesgue", f="exp", w=WStrategy("fixed", 0.0), degrees=(4, 8), p=(2.0,))
    args.update(kw)
    return ExperimentConfig(**args)


@pytest.mark.parametrize("kw", [dict(degrees=(4, 4)), dict(degrees=()), dict(p=(0.0,)), dict(p=(2.5,)),
                                dict(w=WStrategy("pseudorandom")), dict(f="sin"), dict(format="xml"),
                                dict(measure="arc:9")])
def test_config_invariants(kw):
    with pytest.raises(ValueError):
        base_config(**kw)


@settings(max_examples=40, deadline=None)
@given(
    degrees=st.lists(st.integers(0, 200), min_size=1, max_size=6, unique=True).map(sorted),
    p=st.lists(st.floats(0.01, 2.0), min_size=1, max_size=3),
    kind=st.sampled_from(["fixed", "rotate", "pseudorandom"]),
    value=st.floats(-10, 10),
    seed=st.integers(0, 2**31),
    f=st.sampled_from(sorted(CATALOG)),
    fmt=st.sampled_from(["csv", "json"]),
)
def test_config_round_trip(degrees, p, kind, value, seed, f, fmt):
    w = WStrategy(kind) if kind == "pseudorandom" else WStrategy(kind, value)
    cfg = ExperimentConfig("arc:1.2+atoms:0.5:0.1", f, w, tuple(degrees), tuple(p), fmt, seed, None)
    assert parse_config(render_config(cfg)) == cfg


def test_parse_config_errors():
    with pytest.raises(ConfigError):
        parse_config("measure=lebesgue\nf=exp\n")
    with pytest.raises(ConfigError):
        parse_config("measure=lebesgue\nf=exp\ndegrees=1\np=2\ncolour=red\n")
    with pytest.raises(ConfigError):
        parse_config("measure=lebesgue\nmeasure=lebesgue\n")
    cfg = parse_config("# comment\n\nmeasure = lebesgue\nf=exp\ndegrees=1,2\np=1,2\n")
    assert cfg.degrees == (1, 2) and cfg.p == (1.0, 2.0)


def test_convergence_report_shape():
    cfg = base_config(degrees=(4, 8, 12), p=(1.0, 2.0))
    rep = run_convergence(cfg)
    assert len(rep.rows) == 6
    assert all(r.interp_error >= 0 and r.quad_error >= 0 for r in rep.rows)
    lines = rep.to_csv().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 7
    assert rep.to_csv(timing=True).splitlines()[0].endswith(",wall_time")
    doc = json.loads(rep.to_json())
    assert doc["version"] and len(doc["rows"]) == 6 and "wall_time" not in doc["rows"][0]


def test_exp_errors_decrease_tenfold():
    e = run_convergence(base_config(degrees=(4, 8, 12))).series(2.0)
    assert e[1] < e[0] / 10 and e[2] < e[1] / 10


def test_poly7_reproduced():
    e = run_convergence(base_config(f="poly7", degrees=(8, 16))).series(2.0)
    assert max(e) <= 1e-8


def flaky_nodes(monkeypatch, bad_n):
    import szegointerp.harness.converge as conv
    from szegointerp.paraorth import NodeFindingFailure

    real = conv.find_nodes

    def fake(b, n, w):
        if n == bad_n:
            raise NodeFindingFailure("injected")
        return real(b, n, w)

    monkeypatch.setattr(conv, "find_nodes", fake)


def test_failed_rows_are_marked(monkeypatch):
    flaky_nodes(monkeypatch, 8)
    rep = run_convergence(base_config(degrees=(2, 8)))
    assert not rep.rows[0].failed
    assert rep.rows[1].failed and math.isnan(rep.rows[1].interp_error)


def test_verify_lebesgue_tight():
    rep = run_verify("lebesgue", 16, 3)
    assert rep.passed
    for c in rep.checks.values():
        if c.tol is not None and not c.lower_bound:
            assert c.value <= 1e-10, c.name


@pytest.mark.parametrize("spec,nmax,seed", [("arc:1.5707963", 16, 42), ("lebesgue+atoms:0:1.0", 8, 7)])
def test_verify_passes(spec, nmax, seed):
    assert run_verify(spec, nmax, seed).passed


def test_verify_rejects_large_nmax():
    with pytest.raises(ValueError):
        run_verify("lebesgue", 65, 0)


def test_cli_exit_codes(capsys, tmp_path):
    assert main(["nodes", "--measure", "lebesgue", "--n", "3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "j,angle,weight" and len(out) == 5
    assert main(["nodes", "--measure", "lebesgue", "--n", "2", "--w", "0.5", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["angles"][0] == pytest.approx(0.5)
    assert main(["quadrature", "--measure", "arc:1", "--n", "4", "--f", "dist1"]) == 0
    assert "abs_error" in capsys.readouterr().out
    assert main(["interpolate", "--measure", "lebesgue", "--n", "4", "--f", "exp", "--p", "1,2"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 3
    assert main(["verify", "--measure", "lebesgue", "--nmax", "4", "--seed", "1"]) == 0
    assert main(["nodes", "--measure", "arc:9", "--n", "3"]) == 1
    with pytest.raises(SystemExit) as info:
        main(["nodes", "--n", "3"])
    assert info.value.code == 1
    assert main(["converge", "--measure", "lebesgue"]) == 1
    assert main(["converge", "--config", str(tmp_path / "missing.cfg")]) == 1


def test_cli_numerical_failure_exit(capsys, monkeypatch):
    import szegointerp.harness.cli as cli
    from szegointerp.opuc import DegenerateMeasure

    def degenerate(m, n):
        raise DegenerateMeasure(3, 1.0)

    flaky_nodes(monkeypatch, 8)
    assert main(["converge", "--measure", "lebesgue", "--f", "exp", "--degrees", "2,8", "--p", "2"]) == 2
    monkeypatch.setattr(cli, "build_basis", degenerate)
    assert main(["nodes", "--measure", "lebesgue", "--n", "3"]) == 2
    assert "numerical failure" in capsys.readouterr().err


def test_cli_converge_config_file(tmp_path, capsys):
    path = tmp_path / "run.cfg"
    path.write_text(render_config(base_config(seed=3, w=WStrategy("pseudorandom"))))
    out = tmp_path / "out.csv"
    assert main(["converge", "--config", str(path), "--output", str(out)]) == 0
    body = out.read_text().splitlines()
    assert body[0] == ",".join(CSV_HEADER)
    assert body[1].endswith(",pseudorandom,3")
