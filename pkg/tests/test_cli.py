"""Command-line behaviour: JSON/CSV output, determinism, and exit codes."""
import contextlib
import io
import json
import math

import numpy as np
import pytest

from bmdist import body_to_dict, cross_polytope, cube
from bmdist.bodies import Polytope
from bmdist.cli import main


def _run(argv):
    out = io.StringIO()
    err = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def _write_body(path, body):
    path.write_text(json.dumps(body_to_dict(body)))
    return str(path)


# ---------------------------------------------------------------------------
# body


def test_body_from_hanner_tree():
    code, out, err = _run(["body", "--hanner", "l1(seg,seg)"])
    assert code == 0 and err == ""
    data = json.loads(out)
    got = sorted(tuple(v) for v in data["vertices"])
    want = sorted(tuple(v) for v in cross_polytope(2).vertices.tolist())
    assert np.allclose(got, want)


def test_body_from_catalogue():
    code, out, _ = _run(["body", "--name", "cross_polytope", "--n", "3"])
    assert code == 0
    assert len(json.loads(out)["vertices"]) == 6


def test_body_round_trip(tmp_path):
    stored = tmp_path / "body.json"
    code, _, _ = _run(["body", "--hanner", "linf(seg,seg)",
                       "--out", str(stored)])
    assert code == 0
    code, out, _ = _run(["body", "--in", str(stored)])
    assert code == 0
    assert out == stored.read_text()


def test_body_requires_exactly_one_source(tmp_path):
    code, _, err = _run(["body"])
    assert code == 2 and err.startswith("error:")
    stored = _write_body(tmp_path / "b.json", cube(2))
    code, _, err = _run(["body", "--hanner", "l1(seg,seg)", "--in", stored])
    assert code == 2 and err.startswith("error:")


# ---------------------------------------------------------------------------
# distance


def test_distance_command_is_deterministic(tmp_path):
    a = _write_body(tmp_path / "a.json", cross_polytope(2))
    b = _write_body(tmp_path / "b.json", cube(2))
    argv = ["distance", "--a", a, "--b", b, "--restarts", "20", "--seed", "0"]
    code, out, _ = _run(argv)
    assert code == 0
    est = json.loads(out)
    assert est["upper"] == pytest.approx(1.0, abs=0.01)
    code2, out2, _ = _run(argv)
    assert code2 == 0 and out2 == out


def test_distance_missing_file(tmp_path):
    a = _write_body(tmp_path / "a.json", cube(2))
    code, _, err = _run(["distance", "--a", a,
                         "--b", str(tmp_path / "nope.json")])
    assert code == 2
    assert err.startswith("error:")
    assert "Traceback" not in err


# ---------------------------------------------------------------------------
# certify / verify-certificate


def test_certify_command(tmp_path):
    body = _write_body(tmp_path / "diamond.json", cross_polytope(2))
    code, out, _ = _run(["certify", "--body", body])
    assert code == 0
    record = json.loads(out)
    assert record["value"] == pytest.approx(math.sqrt(2.0), abs=1e-9)
    assert record["certificate"]["residual"] <= 1e-8


def test_certify_rejects_uncertifiable_position(tmp_path):
    stretched = Polytope(cross_polytope(2).vertices * np.array([2.0, 1.0]),
                         symmetric=True)
    body = _write_body(tmp_path / "stretched.json", stretched)
    code, _, err = _run(["certify", "--body", body])
    assert code == 2
    assert err.startswith("error:")


def test_verify_certificate_round_trip(tmp_path):
    body = _write_body(tmp_path / "square.json", cube(2))
    cert_path = tmp_path / "cert.json"
    code, _, _ = _run(["certify", "--body", body, "--out", str(cert_path)])
    assert code == 0
    code, out, _ = _run(["verify-certificate", "--cert", str(cert_path)])
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_verify_certificate_flags_tampering(tmp_path):
    body = _write_body(tmp_path / "square.json", cube(2))
    cert_path = tmp_path / "cert.json"
    _run(["certify", "--body", body, "--out", str(cert_path)])
    record = json.loads(cert_path.read_text())
    record["certificate"]["lambda"] = [
        2.0 * w for w in record["certificate"]["lambda"]
    ]
    cert_path.write_text(json.dumps(record))
    code, out, _ = _run(["verify-certificate", "--cert", str(cert_path)])
    assert code == 2
    assert json.loads(out)["ok"] is False


# ---------------------------------------------------------------------------
# theorem / equilateral


def test_theorem_command(tmp_path):
    code, out, _ = _run(["theorem", "--suite", "thm-l1-sum", "--cases", "1",
                         "--restarts", "20", "--seed", "0"])
    assert code == 0
    report = json.loads(out)
    assert report["suite"] == "thm-l1-sum"
    assert report["summary"]["failed"] == 0


def test_theorem_unknown_suite():
    code, _, err = _run(["theorem", "--suite", "thm-nonexistent"])
    assert code == 2
    assert err.startswith("error:")


def test_equilateral_csv_matrix():
    code, out, _ = _run(["equilateral", "--count", "2",
                         "--restarts", "15", "--seed", "0"])
    assert code == 0
    rows = [[float(x) for x in line.split(",")]
            for line in out.strip().splitlines()]
    assert len(rows) == 2 and len(rows[0]) == 2
    assert rows[0][0] == 1.0 and rows[1][1] == 1.0
    assert rows[0][1] == rows[1][0]
    assert 1.0 <= rows[0][1] <= 1.5


def test_equilateral_capacity_limit():
    code, _, err = _run(["equilateral", "--count", "5", "--restarts", "5"])
    assert code == 2
    assert err.startswith("error:")


# ---------------------------------------------------------------------------
# render


def test_render_svg(tmp_path):
    a = _write_body(tmp_path / "a.json", cross_polytope(2))
    b = _write_body(tmp_path / "b.json", cube(2))
    code, out, _ = _run(["render", a, b])
    assert code == 0
    assert "<svg" in out and "</svg>" in out
    code2, out2, _ = _run(["render", a, b])
    assert out2 == out


def test_render_with_witness(tmp_path):
    a = _write_body(tmp_path / "a.json", cross_polytope(2))
    b = _write_body(tmp_path / "b.json", cube(2))
    wit = tmp_path / "est.json"
    code, _, _ = _run(["distance", "--a", a, "--b", b, "--restarts", "10",
                       "--seed", "0", "--out", str(wit)])
    assert code == 0
    code, out, _ = _run(["render", a, b, "--witness", str(wit)])
    assert code == 0
    assert "<svg" in out


# ---------------------------------------------------------------------------
# error surface


def test_malformed_body_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = _run(["certify", "--body", str(bad)])
    assert code == 2
    assert err.startswith("error:")
    assert "Traceback" not in err
