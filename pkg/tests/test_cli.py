import json
import math
import xml.dom.minidom

import pytest

from isoptic.cli import main

GENERIC = {"vertices": [[0, 0], [4, 0], [5, 3], [1, 4]]}
SQUARE = {"vertices": [[1, 1], [-1, 1], [-1, -1], [1, -1]]}


@pytest.fixture
def quad_file(tmp_path):
    def write(payload, name="quad.json"):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return str(path)
    return write


class TestAnalyze:
    def test_generic(self, quad_file, tmp_path):
        out = tmp_path / "report.json"
        assert main(["analyze", quad_file(GENERIC), "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["w"]["kind"] == "point"
        assert doc["s"]["kind"] == "point"
        assert doc["r"] == pytest.approx(-0.02724358974358974, abs=1e-12)
        assert doc["input"]["vertices"] == [[0, 0], [4, 0], [5, 3], [1, 4]]
        assert all(v >= 0 for v in doc["residuals"].values())

    def test_square_is_cyclic(self, quad_file, tmp_path):
        out = tmp_path / "report.json"
        assert main(["analyze", quad_file(SQUARE), "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["shape"]["cyclic"]
        assert abs(doc["r"]) < 1e-9
        assert doc["w"]["xy"] == [0.0, 0.0]

    def test_orthocentric_w_at_infinity(self, quad_file, tmp_path):
        # (0,0),(4,0),(1,3) and their orthocenter
        quad = {"vertices": [[0, 0], [4, 0], [1, 3], [1, 1]]}
        out = tmp_path / "report.json"
        assert main(["analyze", quad_file(quad), "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["w"]["kind"] == "at-infinity"
        dx, dy = doc["w"]["direction"]
        assert math.hypot(dx, dy) == pytest.approx(1.0, abs=1e-12)

    def test_three_vertices_exit_1(self, quad_file):
        assert main(["analyze", quad_file({"vertices": [[0, 0], [1, 0], [0, 1]]})]) == 1

    def test_nan_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"vertices": [[0,0],[1,0],[0,1],[NaN,1]]}')
        assert main(["analyze", str(path)]) == 1

    def test_degenerate_quad_exit_2(self, quad_file):
        collinear = {"vertices": [[0, 0], [1, 0], [2, 0], [0, 3]]}
        assert main(["analyze", quad_file(collinear)]) == 2

    def test_roundtrip_17_digits(self, quad_file, tmp_path):
        quad = {"vertices": [[0.1, 0.2], [4.3, 0.7], [5.9, 3.1], [1.4, 4.8]]}
        out = tmp_path / "report.json"
        main(["analyze", quad_file(quad), "--out", str(out)])
        doc = json.loads(out.read_text())
        assert doc["input"]["vertices"] == quad["vertices"]


class TestIterate:
    def test_forward(self, quad_file, tmp_path):
        out = tmp_path / "it.json"
        rc = main(["iterate", quad_file(GENERIC), "--generations", "5",
                   "--out", str(out)])
        assert rc == 0
        doc = json.loads(out.read_text())
        assert len(doc["generations"]) == 6
        for ratio in doc["area_ratios"]:
            assert ratio == pytest.approx(0.02724358974358974, abs=1e-9)

    def test_cyclic_degeneration(self, quad_file, tmp_path):
        out = tmp_path / "it.json"
        rc = main(["iterate", quad_file(SQUARE), "--generations", "1",
                   "--out", str(out)])
        assert rc == 2
        doc = json.loads(out.read_text())
        assert doc["degeneration"]["reason"] == "cyclic"
        assert doc["degeneration"]["point"]["xy"] == [0.0, 0.0]

    def test_forward_backward_roundtrip(self, quad_file, tmp_path):
        fwd = tmp_path / "fwd.json"
        main(["iterate", quad_file(GENERIC), "--generations", "2",
              "--out", str(fwd)])
        last = json.loads(fwd.read_text())["generations"][-1]
        back = tmp_path / "back.json"
        main(["iterate", quad_file({"vertices": last}, "mid.json"),
              "--generations", "2", "--direction", "backward",
              "--out", str(back)])
        recovered = json.loads(back.read_text())["generations"][-1]
        for got, want in zip(recovered, GENERIC["vertices"]):
            assert math.hypot(got[0] - want[0], got[1] - want[1]) < 1e-8


class TestVerify:
    def test_exit_zero_and_deterministic(self, tmp_path):
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        args = ["verify", "--cases", "25", "--seed", "42",
                "--class", "convex-noncyclic", "--tol", "1e-8"]
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_cyclic_class_sections(self, tmp_path):
        out = tmp_path / "c.json"
        assert main(["verify", "--cases", "5", "--seed", "1",
                     "--class", "cyclic", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert "ptolemy" in doc["invariants"]
        assert "six_cs_concurrence" not in doc["invariants"]

    def test_zero_cases_exit_1(self):
        assert main(["verify", "--cases", "0", "--seed", "1",
                     "--class", "cyclic"]) == 1

    def test_invalid_class_exit_1(self):
        assert main(["verify", "--cases", "5", "--seed", "1",
                     "--class", "heptagon"]) == 1


class TestRender:
    def test_golden_byte_stability(self, quad_file, tmp_path):
        f1, f2 = tmp_path / "a.svg", tmp_path / "b.svg"
        args = ["render", quad_file(GENERIC), "--layers", "quad,triads,cs,w,s"]
        assert main(args + ["--out", str(f1)]) == 0
        assert main(args + ["--out", str(f2)]) == 0
        assert f1.read_bytes() == f2.read_bytes()
        xml.dom.minidom.parseString(f1.read_text())

    def test_unknown_layer_exit_1(self, quad_file, tmp_path):
        assert main(["render", quad_file(GENERIC), "--out",
                     str(tmp_path / "x.svg"), "--layers", "quad,nope"]) == 1


class TestReconstruct:
    def test_fourth_vertex(self, capsys):
        rc = main(["reconstruct", "--mode", "fourth-vertex",
                   "--a", "0,0", "--b", "4,0", "--c", "5,3",
                   "--w", "2.2917316692667713,1.926677067082684"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert math.hypot(doc["point"][0] - 1, doc["point"][1] - 4) < 1e-8
        assert doc["residual"] < 1e-8

    def test_underdetermined_exit_2(self):
        assert main(["reconstruct", "--mode", "fourth-vertex",
                     "--a", "0,0", "--b", "2,0", "--c", "2,2",
                     "--w", "1,1"]) == 2

    def test_pedal_w(self, capsys):
        # side midpoints of the square (0,0),(2,0),(2,2),(0,2) seen from its center
        rc = main(["reconstruct", "--mode", "pedal-w", "--w", "1,1",
                   "--feet", "1,0", "2,1", "1,2", "0,1"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        got = {tuple(v) for v in doc["vertices"]}
        assert got == {(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)}

    def test_missing_inputs_exit_1(self):
        assert main(["reconstruct", "--mode", "pedal-w", "--w", "0,0"]) == 1


def test_analyze_reconstruct_analyze_roundtrip(quad_file, tmp_path, capsys):
    out = tmp_path / "r.json"
    main(["analyze", quad_file(GENERIC), "--out", str(out)])
    doc = json.loads(out.read_text())
    w = doc["w"]["xy"]
    feet = doc["pedal_w"]
    rc = main(["reconstruct", "--mode", "pedal-w",
               "--w", f"{w[0]},{w[1]}",
               "--feet"] + [f"{f[0]},{f[1]}" for f in feet])
    assert rc == 0
    rec = json.loads(capsys.readouterr().out)
    out2 = tmp_path / "r2.json"
    main(["analyze", quad_file({"vertices": rec["vertices"]}, "rec.json"),
          "--out", str(out2)])
    w2 = json.loads(out2.read_text())["w"]["xy"]
    assert math.hypot(w2[0] - w[0], w2[1] - w[1]) < 1e-7 * 6.4
