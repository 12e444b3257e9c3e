import json
import math
from pathlib import Path

import pytest

import curator

GOLDEN = Path(__file__).resolve().parents[1] / "data" / "golden"


def circle(radius, n=360):
    return [(radius * math.cos(2 * math.pi * i / n), radius * math.sin(2 * math.pi * i / n)) for i in range(n)]


def test_circle_and_line_complexity():
    assert curator.polyline_complexity(circle(10.0)) == pytest.approx(0.10015335287430287, abs=1e-9)
    assert curator.polyline_complexity([(0, 0), (50, 10), (100, 20)]) == 0.0


def test_entropy_of_identity_covariance():
    assert curator.gaussian_entropy(1.0, 0.0, 1.0) == pytest.approx(math.log(2 * math.pi * math.e), abs=1e-12)
    with pytest.raises(curator.DomainError):
        curator.gaussian_entropy(1.0, 2.0, 1.0)


def test_dissimilarity_is_directed():
    a = [[0.0], [1.0]]
    b = [[0.0]]
    assert curator.dissimilarity(a, b) == 1.0
    assert curator.dissimilarity(b, a) == 0.0
    assert curator.dissimilarity(b, a, symmetric=True) == 1.0


def test_schema_lists_both_vectors():
    s = curator.schema()
    assert len(s["snippet"]) == 28
    assert len(s["frame"]) == 10


def test_curate_matches_golden_result():
    config = json.loads((GOLDEN / "config.json").read_text())
    got = curator.curate(GOLDEN / "features", config)
    assert got == json.loads((GOLDEN / "expected_result.json").read_text())


def test_curate_rejects_bad_config():
    with pytest.raises(curator.InputError):
        curator.curate(GOLDEN / "features", {"surprise": 1})


def test_cli_round_trip(tmp_path):
    pool = tmp_path / "pool" / "pool.jsonl"
    code, out, err = curator.run(["synth", "--mode", "random", "--snippets", "12", "--seed", "3", "--out", str(pool)])
    assert code == 0, err
    assert curator.run(["score", "--pool", str(pool), "--out", str(tmp_path / "f")])[0] == 0
    assert curator.run(["curate", "--features", str(tmp_path / "f"), "--out", str(tmp_path / "r.json")])[0] == 0
    result = json.loads((tmp_path / "r.json").read_text())
    assert result["method"] == "curate"
    code, _, err = curator.run(["score", "--pool", str(tmp_path / "missing.jsonl"), "--out", str(tmp_path / "g")])
    assert code == 2
    assert "missing.jsonl" in err
