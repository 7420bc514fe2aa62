import json
import struct
import subprocess
import sys

import numpy as np
import pytest

from oscpair import SchemaError, load_shipped, parse_scenario, shipped_scenarios, solve_angle
from oscpair.cli import main

from conftest import SHIPPED

MINIMAL = {
    "m1": {"kind": "constant", "value": 1.0},
    "m2": {"kind": "constant", "value": 1.0},
    "omega1": {"kind": "constant", "value": 1.0},
    "omega2": {"kind": "constant", "value": 2.0},
    "f1": {"kind": "constant", "value": 0.0},
    "f2": {"kind": "constant", "value": 0.0},
    "lambda": {"kind": "constant", "value": 1.5},
    "t_min": 0.0,
    "t_max": 4.0,
}


def _doc(**overrides):
    doc = json.loads(json.dumps(MINIMAL))
    doc.update(overrides)
    return json.dumps(doc)


def test_minimal_document_fills_defaults():
    sc = parse_scenario(_doc())
    assert sc.system.hbar == 1.0
    assert sc.window == (0.0, 4.0)
    assert sc.quad_order == 8 and sc.quad_panels == 64
    assert sc.ode_tol == 1e-10
    assert sc.grid_points == (256, 256)
    assert sc.initial_sigma == pytest.approx((np.sqrt(0.5), np.sqrt(0.5)))


def test_unknown_field_rejected():
    with pytest.raises(SchemaError, match="unknown field 'omega3'"):
        parse_scenario(_doc(omega3={"kind": "constant", "value": 1.0}))


def test_all_violations_reported_together():
    doc = json.loads(_doc(bogus=1))
    del doc["m2"]
    doc["omega1"] = {"kind": "constant"}
    with pytest.raises(SchemaError) as exc:
        parse_scenario(json.dumps(doc))
    text = str(exc.value)
    assert "bogus" in text
    assert "m2" in text
    assert "omega1" in text
    assert len(exc.value.violations) >= 3


def test_non_positive_mass_names_coefficient_and_time():
    bad = _doc(m1={"kind": "sinusoidal", "a": 0.5, "b": 1.0, "nu": 1.0})
    with pytest.raises(SchemaError, match=r"mass m1 is non-positive at t"):
        parse_scenario(bad)


def test_window_must_sit_inside_domain():
    with pytest.raises(SchemaError, match="window"):
        parse_scenario(_doc(window=[0.0, 9.0]))
    with pytest.raises(SchemaError, match="window"):
        parse_scenario(_doc(window=[2.0, 1.0]))


def test_invalid_json_and_encoding():
    with pytest.raises(SchemaError, match="not valid JSON"):
        parse_scenario(b"{nope")
    with pytest.raises(SchemaError, match="not UTF-8"):
        parse_scenario(b"\xff\xfe{}")


def test_shipped_scenarios_parse_and_decouple():
    assert sorted(SHIPPED) == shipped_scenarios()
    for name in SHIPPED:
        sc = load_shipped(name)
        dec = solve_angle(sc.system, gamma_tol=sc.gamma_tol)
        assert dec.admissible, name


# --- command line -----------------------------------------------------------

@pytest.fixture()
def scenario_file(tmp_path):
    def write(name="s.json", **overrides):
        p = tmp_path / name
        p.write_text(_doc(**overrides))
        return str(p)
    return write


def test_cli_decouple_prints_closed_form_angle(scenario_file, capsys):
    rc = main(["decouple", "--scenario", scenario_file(), "--out", "/dev/null"])
    out = capsys.readouterr().out
    assert rc == 0
    alpha = float(out.splitlines()[0].split("=")[1])
    assert alpha == pytest.approx(np.pi / 8, abs=1e-10)
    assert "admissible = true" in out


def test_cli_decouple_csv_columns(scenario_file, tmp_path):
    out = tmp_path / "dec.csv"
    rc = main(["decouple", "--scenario", scenario_file(), "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,omega1_sq,omega2_sq,F1,F2,gamma"
    assert len(lines) == 513
    # 17 significant digits round-trip
    val = lines[1].split(",")[1]
    assert float(val) == float(f"{float(val):.17g}")


def test_cli_kernel_points_csv_and_json(scenario_file, tmp_path):
    pts_csv = tmp_path / "pts.csv"
    pts_csv.write_text("x1q,x2q,x1p,x2p\n0.5,0.3,-0.2,0.1\n0,0,0,0\n")
    out1 = tmp_path / "k1.csv"
    rc = main(["kernel", "--scenario", scenario_file(window=[0.0, 1.2]),
               "--points", str(pts_csv), "--out", str(out1)])
    assert rc == 0
    pts_json = tmp_path / "pts.json"
    pts_json.write_text("[[0.5,0.3,-0.2,0.1],[0,0,0,0]]")
    out2 = tmp_path / "k2.csv"
    rc = main(["kernel", "--scenario", scenario_file(window=[0.0, 1.2]),
               "--points", str(pts_json), "--out", str(out2)])
    assert rc == 0
    assert out1.read_text() == out2.read_text()
    header, row1, row2 = out1.read_text().splitlines()
    assert header == "x1q,x2q,x1p,x2p,ReK,ImK"
    # value agrees with the library
    from oscpair import build_kernel
    sc = parse_scenario(_doc(window=[0.0, 1.2]))
    kern = build_kernel(solve_angle(sc.system), 0.0, 1.2)
    vals = row1.split(",")
    K = complex(float(vals[4]), float(vals[5]))
    assert K == pytest.approx(complex(kern.evaluate(0.5, 0.3, -0.2, 0.1)), rel=1e-12)


def test_cli_kernel_dump_aux(scenario_file, tmp_path):
    pts = tmp_path / "pts.csv"
    pts.write_text("0,0,0,0\n")
    aux = tmp_path / "aux.csv"
    rc = main(["kernel", "--scenario", scenario_file(window=[0.0, 1.2]),
               "--points", str(pts), "--out", "/dev/null",
               "--dump-aux", str(aux), "--aux-points", "17"])
    assert rc == 0
    lines = aux.read_text().splitlines()
    assert lines[0] == "t,rho1,drho1,phi1,rho2,drho2,phi2"
    assert len(lines) == 18
    first = [float(v) for v in lines[1].split(",")]
    assert first[1] == pytest.approx(1.0)  # rho(t') = 1
    assert first[3] == pytest.approx(0.0)  # phi(t') = 0


def test_cli_evolve_columns(scenario_file, tmp_path):
    out = tmp_path / "ev.csv"
    rc = main(["evolve", "--scenario", scenario_file(window=[0.0, 1.0]),
               "--steps", "4", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ("t,x1_mean,x2_mean,p1_mean,p2_mean,"
                        "var_x1,var_x2,cov_x1x2,norm,phase")
    assert len(lines) == 6
    norms = [float(l.split(",")[8]) for l in lines[1:]]
    assert np.allclose(norms, 1.0, atol=1e-9)


def test_cli_oracle_and_psi_dump(scenario_file, tmp_path):
    out = tmp_path / "orc.csv"
    dump = tmp_path / "psi.bin"
    rc = main(["oracle", "--scenario",
               scenario_file(window=[0.0, 0.5], grid={"points": 64, "extent": [16.0, 16.0]}),
               "--steps", "64", "--rows", "4",
               "--out", str(out), "--dump-psi", str(dump)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,norm,x1_mean,x2_mean,x1_sq_mean,x2_sq_mean,energy"
    raw = dump.read_bytes()
    n1, n2, r1, r2 = struct.unpack("<iiii", raw[:16])
    assert (n1, n2, r1, r2) == (64, 64, 0, 0)
    density = np.frombuffer(raw[16:], dtype="<f8").reshape(n1, n2)
    assert density.sum() * (16.0 / 64) ** 2 == pytest.approx(1.0, abs=1e-9)


def test_cli_residual(scenario_file, tmp_path):
    out = tmp_path / "res.csv"
    rc = main(["residual", "--scenario", scenario_file(window=[0.0, 1.2]),
               "--points", "3", "--seed", "7", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "variant,t,x1q,x2q,x1p,x2p,residual"
    assert len(lines) == 7  # both variants, 3 points each
    assert all(float(l.split(",")[6]) < 1e-4 for l in lines[1:])


def test_cli_compare_deterministic_and_passing(scenario_file, tmp_path):
    scen = scenario_file(window=[0.0, 0.8],
                         grid={"points": 64, "extent": [16.0, 16.0], "steps": 256})
    outs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        rc = main(["compare", "--scenario", scen, "--out", str(out)])
        assert rc == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]  # bit-identical CSV
    header = outs[0].decode().splitlines()[0]
    assert header.startswith("scenario,variant,fidelity_vs_oracle,max_residual")


def test_cli_exit_codes(scenario_file, tmp_path):
    # missing file -> 3
    assert main(["decouple", "--scenario", str(tmp_path / "absent.json")]) == 3
    # schema violation -> 1
    bad = tmp_path / "bad.json"
    bad.write_text(_doc(omega3={"kind": "constant", "value": 1.0}))
    assert main(["decouple", "--scenario", str(bad)]) == 1
    # kernel at a caustic -> 2
    caustic = tmp_path / "caustic.json"
    doc = json.loads(_doc(window=[0.0, np.pi]))
    doc["omega2"] = {"kind": "constant", "value": 1.0}
    doc["lambda"] = {"kind": "constant", "value": 0.0}
    caustic.write_text(json.dumps(doc))
    pts = tmp_path / "p.csv"
    pts.write_text("0,0,0,0\n")
    assert main(["kernel", "--scenario", str(caustic), "--points", str(pts),
                 "--out", "/dev/null"]) == 2
    # inadmissible system -> 1
    inadm = tmp_path / "inadm.json"
    inadm.write_text(_doc(window=[0.0, 1.0], alpha=0.03))
    assert main(["kernel", "--scenario", str(inadm), "--points", str(pts),
                 "--out", "/dev/null"]) == 1


def test_cli_help_lists_subcommands():
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0


def test_console_script_installed():
    proc = subprocess.run([sys.executable, "-m", "oscpair.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    for sub in ("decouple", "kernel", "evolve", "oracle", "compare", "residual"):
        assert sub in proc.stdout
