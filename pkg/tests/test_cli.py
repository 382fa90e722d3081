import io
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from oracles import cubic_real_root
from specrig.cli import RunConfig, build_config, build_parser, dumps, main
from specrig.errors import ValidationError
from specrig.ratmap import random_map, random_mobius, ratmap_conjugate, ratmap_new

Z2 = Path(__file__).resolve().parents[1] / "demos" / "maps" / "z2.json"


def run(*argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def map_json(f) -> str:
    return json.dumps(f.to_json())


def test_spectrum_power_map():
    code, out, _ = run("spectrum", "--map", str(Z2), "--n", "2")
    assert code == 0
    obj = json.loads(out)
    s1, s2 = (p["multipliers"] for p in obj["periods"])
    assert np.allclose(sorted(complex(*v).real for v in s1), [0, 0, 2], atol=1e-9)
    assert np.allclose(sorted(complex(*v).real for v in s2), [0, 0, 4, 4, 4], atol=1e-9)


def test_compare_conjugates(tmp_path):
    f = random_map(2, np.random.default_rng(11))
    g = ratmap_conjugate(f, random_mobius(np.random.default_rng(12)))
    (tmp_path / "f.json").write_text(map_json(f))
    (tmp_path / "g.json").write_text(map_json(g))
    code, out, _ = run("compare", "--a", str(tmp_path / "f.json"), "--b", str(tmp_path / "g.json"), "--n", "2")
    obj = json.loads(out)
    assert code == 0 and obj["equal"] is True and obj["distance"] < 1e-6


def test_centers_csv():
    code, out, _ = run("centers", "--d", "2", "--period", "3")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "re,im,kind,period" and len(lines) == 4
    rows = [line.split(",") for line in lines[1:]]
    pts = sorted((complex(float(r[0]), float(r[1])) for r in rows), key=lambda z: (round(z.real, 8), z.imag))
    assert pts[0] == pytest.approx(cubic_real_root(), abs=1e-12)
    assert abs(pts[1] - complex(-0.12256, -0.74486)) < 1e-5
    assert abs(pts[2] - complex(-0.12256, 0.74486)) < 1e-5
    assert {r[2] for r in rows} == {"center"} and {r[3] for r in rows} == {"3"}


def test_inline_map_and_formats():
    code, out, _ = run("lengths", "--map", map_json(ratmap_new([-1, 0, 1])), "--n", "1", "--format", "json")
    assert code == 0
    L = json.loads(out)["lengths"][0]["lengths"]
    assert sorted(L) == pytest.approx([0, (5 ** 0.5) - 1, 1 + 5 ** 0.5], abs=1e-9)


@pytest.mark.parametrize("argv", [
    ["spectrum", "--map", '{"degree": 2, "num": {"coeffs": [[1, 0]]}, "den": {"coeffs": [[1, 0]]}}'],
    ["spectrum", "--map", "/nonexistent/map.json"],
    ["spectrum", "--map", "{not json"],
    ["spectrum", "--map", str(Z2), "--precision", "32"],
    ["spectrum", "--map", str(Z2), "--root-tol", "-1"],
    ["spectrum"],
    ["nosuchcommand"],
    ["green", "--t", "0", "--marked", "nosuch"],
])
def test_validation_exit_code(argv):
    code, out, err = run(*argv)
    assert code == 2 and out == ""


def test_numerical_exit_code():
    code, out, err = run("centers", "--period", "20")
    assert code == 3 and out == "" and "DegreeCapExceeded" in err
    code, _, err = run("diagnostics", "ce", "--map", str(Z2), "--c", "0")
    assert code == 3 and "DerivativeVanishes" in err


def test_config_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 5, "threads": 2, "output_format": "json"}))
    p = build_parser()
    args = p.parse_args(["centers", "--period", "2", "--config", str(cfg), "--seed", "9"])
    c = build_config(args, environ={"SPECRIG_THREADS": "7"})
    assert c.seed == 9 and c.threads == 2 and c.output_format == "json"
    args = p.parse_args(["centers", "--period", "2"])
    c = build_config(args, environ={"SPECRIG_THREADS": "7"})
    assert c.threads == 7 and c.output_format == "csv"
    args = p.parse_args(["centers", "--period", "2", "--threads", "3"])
    assert build_config(args, environ={"SPECRIG_THREADS": "7"}).threads == 3


def test_run_config_validation():
    with pytest.raises(ValidationError):
        RunConfig(precision=5000)
    with pytest.raises(ValidationError):
        RunConfig(compare_tol=0)
    c = RunConfig(precision=256, threads="auto")
    assert RunConfig.from_json(c.to_json()) == c and c.bits == 256 and c.workers >= 1


# -- round trip and determinism -----------------------------------------------

COMMANDS = [
    ["spectrum", "--map", str(Z2), "--n", "2"],
    ["fixedpoints", "--map", str(Z2), "--n", "2"],
    ["critical", "--map", str(Z2)],
    ["milnor", "--map", str(Z2)],
    ["lattes", "--a", "1", "--b", "1"],
    ["conj", "--f", str(Z2), "--g", str(Z2)],
    ["elemtrans", "--h1", str(Z2), "--h2", map_json(ratmap_new([1, 1]))],
    ["semiconj", "--f", map_json(ratmap_new([-2, 0, 1])), "--g", str(Z2), "--deg", "2"],
    ["pcf", "--map", map_json(ratmap_new([-1, 0, 1]))],
    ["hyperbolic", "--map", map_json(ratmap_new([-1, 0, 1]))],
    ["green", "--t", "100"],
    ["bifgrid", "--resolution", "32", "--format", "json"],
    ["centers", "--period", "4", "--format", "json"],
    ["equidist", "--periods", "3", "4", "--resolution", "32"],
    ["similarity", "--t0", "-2", "--periods", "4", "6", "--samples", "9"],
    ["diagnostics", "ce", "--map", map_json(ratmap_new([-2, 0, 1])), "--N", "2"],
    ["diagnostics", "pr", "--map", map_json(ratmap_new([-1, 0, 1]))],
    ["diagnostics", "sep", "--map", str(Z2), "--a", "2", "--b", "3", "--n", "8", "--precision", "512"],
    ["diagnostics", "dynrel", "--map", str(Z2), "--a", "2", "--b", "4"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a[:2]))
def test_round_trip_and_determinism(argv):
    code, out, err = run(*argv)
    assert code == 0, err
    assert out.strip()
    obj = json.loads(out)
    assert dumps(obj) == out
    code2, out2, _ = run(*argv)
    assert code2 == 0 and out2 == out


def test_sentinel_serialisation():
    _, out, _ = run("diagnostics", "pr", "--map", map_json(ratmap_new([-1, 0, 1])))
    assert json.loads(out) == {"s": "inf"}


def test_out_dir_and_threads(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run("bifgrid", "--resolution", "48", "--out", str(a), "--threads", "1")[0] == 0
    assert run("bifgrid", "--resolution", "48", "--out", str(b), "--threads", "4")[0] == 0
    for name in ("result.json", "grid.pgm", "points.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert (a / "grid.pgm").read_bytes().startswith(b"P5\n48 48\n65535\n")


def test_module_entry_point():
    argv = [sys.executable, "-m", "specrig", "centers", "--period", "3"]
    r1 = subprocess.run(argv, capture_output=True, check=True)
    r2 = subprocess.run(argv, capture_output=True, check=True)
    assert r1.stdout == r2.stdout and r1.stdout.startswith(b"re,im,kind,period\n")
