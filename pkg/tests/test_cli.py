from __future__ import annotations

import json
from pathlib import Path

import pytest

from tropsurf.cli import main, point_label

DATA = Path(__file__).resolve().parent.parent / "data"
EX_THOMAS = str(DATA / "ex_thomas.json")
WORKED = str(DATA / "worked_example.json")
CODIM2 = str(DATA / "codim2_family.json")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


@pytest.mark.parametrize(
    "i, label", [(0, "a"), (1, "b"), (25, "z"), (26, "aa"), (27, "ab"), (2 * 26, "ba")]
)
def test_point_label(i, label):
    assert point_label(i) == label


def test_singular_quadrangle(capsys):
    code, doc, err = run_json(capsys, "singular", EX_THOMAS)
    assert code == 0
    assert err == ""
    assert doc["codim"] == 1
    assert doc["generic"] is True
    assert doc["max_dimensional"] is True
    assert doc["circuit"] == {
        "points": ["a", "b", "c"],
        "type": "E",
        "dim": 1,
        "dependence": ["1", "-2", "1"],
    }
    assert doc["refusals"] == []
    by_label = {p["label"]: p for p in doc["points"]}
    assert set(by_label) == {"c-barycenter", "c-virtual-barycenter"}
    assert by_label["c-barycenter"]["location"] == ["-1", "-1", "0"]
    assert by_label["c-virtual-barycenter"]["location"] == ["0", "0", "0"]
    assert by_label["c-barycenter"]["metric"]["triple"] == ["d", "e", "f"]
    assert "certificate" not in by_label["c-barycenter"]


def test_singular_certificate_flag(capsys):
    code, doc, err = run_json(capsys, "singular", EX_THOMAS, "--certificate")
    assert code == 0
    by_label = {p["label"]: p for p in doc["points"]}
    cert = by_label["c-virtual-barycenter"]["certificate"]
    assert cert["flag"] == [["d"], ["d", "e", "f", "g"], ["a", "b", "c", "d", "e", "f", "g"]]
    assert cert["maximal"] is True
    assert cert["case"] == "c"
    cert2 = by_label["c-barycenter"]["certificate"]
    assert cert2["flag"][0] == ["g"]


def test_singular_worked_example(capsys):
    code, doc, err = run_json(capsys, "singular", WORKED)
    assert code == 0
    locations = sorted(p["location"] for p in doc["points"])
    assert locations == [["1", "0", "0"], ["1/2", "0", "0"]]


def test_singular_codim_two_refused(capsys):
    code, out, err = run(capsys, "singular", CODIM2)
    assert code == 1
    assert "refused: subdivision is not of codimension 1" in err
    doc = json.loads(out)
    assert doc["codim"] == 2
    assert doc["points"] == []


def test_singular_defective_refused(capsys, tmp_path):
    src = {
        "points": [
            [0, 0, 0], [0, 0, 1], [0, 0, 2], [0, 1, 0],
            [0, -1, 0], [1, 0, 0], [1, 1, 0], [-1, 0, 0],
        ],
        "heights": [0, 0, 0, -1, -1, -2, -2, -3],
    }
    path = tmp_path / "defective.json"
    path.write_text(json.dumps(src))
    code, out, err = run(capsys, "singular", str(path))
    assert code == 1
    assert "refused: heights are not generic" in err
    assert json.loads(out)["generic"] is False


def test_subdivide(capsys):
    code, doc, err = run_json(capsys, "subdivide", EX_THOMAS)
    assert code == 0
    assert doc["codim"] == 1
    assert doc["max_dimensional"] is True
    assert [c["marked"] for c in doc["cells"]] == [
        ["a", "b", "c", "d", "e"],
        ["a", "b", "c", "d", "f"],
        ["a", "b", "c", "e", "g"],
        ["a", "b", "c", "f", "g"],
        ["a", "e", "f", "g"],
    ]
    assert doc["circuit"]["points"] == ["a", "b", "c"]


def test_surface(capsys):
    code, doc, err = run_json(capsys, "surface", EX_THOMAS)
    assert code == 0
    assert len(doc["vertices"]) == 5
    assert len(doc["edges"]) == 14
    assert len(doc["faces"]) == 14
    quad = next(f for f in doc["faces"] if f["dual_edge"] == ["a", "b", "c"])
    assert quad["weight"] == 2
    assert len(quad["vertices"]) == 4


def test_flags(capsys):
    code, doc, err = run_json(capsys, "flags", EX_THOMAS)
    assert code == 0
    assert doc["height_flag"]["maximal"] is True
    assert doc["height_flag"]["case"] == "c"
    assert doc["height_flag"]["levels"][0] == ["d"]
    assert all(set(f) == {"levels", "case", "circuit"} for f in doc["accepted_flags"])
    assert any(f["circuit"] == ["a", "b", "c"] for f in doc["accepted_flags"])


def test_oracle_families(capsys):
    code, doc, err = run_json(capsys, "oracle", CODIM2)
    assert code == 0
    assert len(doc["families"]) == 2
    segment, ray = doc["families"]
    assert segment["endpoints"] == [["-3", "0", "0"], ["1", "0", "0"]]
    assert segment["unbounded"] is False
    assert ray["unbounded"] is True
    assert ray["direction"] == [1, 0, 0]


def test_oracle_isolated_points(capsys):
    code, doc, err = run_json(capsys, "oracle", EX_THOMAS)
    assert code == 0
    assert doc["points"] == [["-1", "-1", "0"], ["0", "0", "0"]]
    assert doc["families"] == []


def test_catalog_all_groups(capsys):
    code, doc, err = run_json(capsys, "catalog")
    assert code == 0
    assert set(doc) == {"a1", "a2", "triangles", "E1", "E2"}


def test_catalog_single_group(capsys):
    code, doc, err = run_json(capsys, "catalog", "--group", "a2")
    assert code == 0
    assert set(doc) == {"a2"}
    assert len(doc["a2"]) == 8
    assert doc["a2"][0]["id"] == "a2/vol4"


def test_catalog_unknown_group(capsys):
    code, out, err = run(capsys, "catalog", "--group", "a9")
    assert code == 2
    assert "unknown catalog group" in err


def test_render_stdout(capsys):
    code, out, err = run(capsys, "render", EX_THOMAS)
    assert code == 0
    lines = out.splitlines()
    assert any(line == "OFF" for line in lines)
    assert sum("singular point" in line for line in lines) == 2


def test_render_to_file(capsys, tmp_path):
    target = tmp_path / "surface.off"
    code, out, err = run(capsys, "render", EX_THOMAS, "--bound", "30", "-o", str(target))
    assert code == 0
    assert out == ""
    assert "OFF" in target.read_text().splitlines()


def test_missing_file_exit_2(capsys):
    code, out, err = run(capsys, "singular", "no_such_file.json")
    assert code == 2
    assert "error:" in err


def test_invalid_json_exit_2(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, out, err = run(capsys, "singular", str(path))
    assert code == 2
    assert "invalid JSON" in err


def test_degenerate_points_exit_2(capsys, tmp_path):
    path = tmp_path / "flat.json"
    path.write_text(json.dumps({"points": [[0, 0, 0], [1, 0, 0], [2, 0, 0], [3, 0, 0]], "heights": [0, 0, 0, 0]}))
    code, out, err = run(capsys, "singular", str(path))
    assert code == 2
    assert "3-dimensional" in err


def test_heights_required_exit_2(capsys, tmp_path):
    path = tmp_path / "no_heights.json"
    path.write_text(json.dumps({"points": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]}))
    code, out, err = run(capsys, "singular", str(path))
    assert code == 2
    assert "heights" in err


def test_flags_enumeration_bound_exit_2(capsys, tmp_path):
    points = [[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)]
    points += [[2, 0, 0], [0, 2, 0], [0, 0, 2]]
    path = tmp_path / "big.json"
    path.write_text(json.dumps({"points": points}))
    code, out, err = run(capsys, "flags", str(path))
    assert code == 2
    assert "at most 10 points" in err
