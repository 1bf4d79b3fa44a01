import csv
import io
import json

import pytest
import scipy.io

from polysparse.builtin_meshes import builtin
from polysparse.cli import main
from polysparse.periodic_complex import serialize_mesh


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_topology_markdown(capsys):
    code, out, _ = run(capsys, "topology", "--mesh", "triangle2d", "--format", "md")
    assert code == 0
    rows = [ln for ln in out.splitlines() if ln.startswith("| (")]
    assert len(rows) == 3 and "(V,1) | 7 | 12 | 6 | 1/2" in rows[0]


def test_topology_json_and_csv(capsys):
    code, out, _ = run(capsys, "topology", "--mesh", "hex3d", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["derivation"] == "mesh-derived" and len(data["classes"]) == 4
    code, out, _ = run(capsys, "topology", "--mesh", "hex3d", "--format", "csv", "--fixture", "printed")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["class", "V", "Ed", "Fa", "C", "R"]
    assert rows[1] == ["(V,1)", "27", "54", "12", "-", "1"]


def test_broken_mesh_file_exits_3(tmp_path, capsys):
    data = json.loads(serialize_mesh(builtin("quad2d")))
    face = next(o for o in data["orbits"] if o["dim"] == 2)
    face["boundary"] = face["boundary"][1:]
    path = tmp_path / "mymesh.json"
    path.write_text(json.dumps(data))
    code, out, err = run(capsys, "topology", "--mesh", str(path))
    assert code == 3 and out == "" and "'ex'" in err


def test_unparsable_mesh_exits_3(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"name": "x"}')
    assert run(capsys, "topology", "--mesh", str(path))[0] == 3


def test_user_mesh_file_works(tmp_path, capsys):
    path = tmp_path / "hex.json"
    path.write_text(serialize_mesh(builtin("hexagon2d")))
    code, out, _ = run(capsys, "poly", "--mesh", str(path), "--method", "VEM", "--metric", "ncdof")
    assert code == 0 and out == "3*k - 1\n"


@pytest.mark.parametrize("argv", [
    ["topology", "--mesh", "nowhere"],
    ["topology", "--mesh", "quad2d", "--format", "xml"],
    ["table", "--mesh", "quad2d", "--k-min", "0"],
    ["table", "--mesh", "quad2d", "--k-min", "5", "--k-max", "4"],
    ["table", "--mesh", "quad2d", "--k-max", "51"],
    ["poly", "--mesh", "quad2d", "--method", "FEM"],
    ["poly", "--mesh", "quad2d", "--method", "HHO", "--metric", "ndof"],
    ["verify", "--mesh", "quad2d", "--tiling", "2"],
    ["export-pattern", "--mesh", "quad2d", "--method", "DG", "--k", "1"],
])
def test_bad_arguments_exit_2(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2
    assert capsys.readouterr().err


def test_fixture_for_user_mesh_is_rejected(tmp_path, capsys):
    path = tmp_path / "q.json"
    path.write_text(serialize_mesh(builtin("quad2d")))
    assert run(capsys, "topology", "--mesh", str(path), "--fixture", "printed")[0] == 2


@pytest.mark.parametrize("argv, expected", [
    (["poly", "--mesh", "triangle2d", "--method", "HDG", "--metric", "ncdof"], "3/2*k + 3/2"),
    (["poly", "--mesh", "truncoct3d", "--method", "DG", "--metric", "nnze", "--fixture", "implied"],
     "5/12*k^6 + 5*k^5 + 145/6*k^4 + 60*k^3 + 965/12*k^2 + 55*k + 15"),
])
def test_poly(argv, expected, capsys):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.strip() == expected


def test_poly_json_carries_derivation(capsys):
    code, out, _ = run(capsys, "poly", "--mesh", "oct3d", "--fixture", "implied", "--format", "json")
    data = json.loads(out)
    assert data["derivation"] == "fixture-implied" and len(data["polynomials"]) == 12


def test_derived_notice_on_differing_3d_rows(capsys):
    code, out, err = run(capsys, "poly", "--mesh", "hex3d", "--method", "VEM", "--metric", "nnze")
    assert code == 0 and "notice" in err and "VEM nnze" in err
    code, out, err = run(capsys, "poly", "--mesh", "hex3d", "--method", "DG", "--metric", "nnze")
    assert err == ""


def test_table_decimal_and_exact(capsys):
    base = ["table", "--mesh", "tet3d", "--methods", "VEM", "--metric", "ncdof",
            "--k-min", "1", "--k-max", "1", "--fixture", "implied"]
    code, out, _ = run(capsys, *base, "--decimal")
    assert code == 0 and out.splitlines()[-1].endswith("| 0.2 |")
    code, out, _ = run(capsys, *base)
    assert out.splitlines()[-1].endswith("| 1/6 |")


def test_table_hexagon_grid(capsys, reference):
    code, out, _ = run(capsys, "table", "--mesh", "hexagon2d", "--methods", "DG,TDG2,TDG1,HDG,HHO,VEM",
                       "--metric", "nnze", "--k-min", "1", "--k-max", "10", "--format", "csv", "--decimal")
    rows = list(csv.reader(io.StringIO(out)))[1:]
    assert len(rows) == 6
    for row, method in zip(rows, ["DG", "TDG2", "TDG1", "HDG", "HHO", "VEM"]):
        assert row[1:] == reference["values"]["hexagon2d"][method]["nnze"]


def test_table_json(capsys):
    code, out, _ = run(capsys, "table", "--mesh", "quad2d", "--k-max", "2", "--format", "json", "--decimal")
    data = json.loads(out)
    assert data["derivation"] == "mesh-derived" and data["k"] == [1, 2]
    assert data["rows"][0]["values"] == ["3", "6"]


def test_verify_triangle(capsys):
    code, out, _ = run(capsys, "verify", "--mesh", "triangle2d", "--k-max", "4")
    assert code == 0
    assert "oracle == formula: 24/24 checks" in out
    assert "no errata" in out


def test_verify_hex3d_errata(capsys):
    code, out, _ = run(capsys, "verify", "--mesh", "hex3d", "--k-max", "3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"] == data["checks"] == 18
    (entry,) = data["fixture"]["errata"]
    assert entry["location"] == "(V,1) Nb(Fa)"
    assert (entry["printed"], entry["derived"]) == ("12", "36")
    assert entry["downstream effect"] == "VEM nnze for k >= 2"


def test_verify_oct_flags_euler(capsys):
    code, out, _ = run(capsys, "verify", "--mesh", "oct3d", "--k-max", "2")
    assert code == 0
    assert "| Euler characteristic per element | 1/3 | 0 |" in out
    assert "| oct3d | (V,2) R | 2/3 | 1/3 |" in out


def test_verify_mismatch_exits_1(monkeypatch, capsys):
    import polysparse.cli as cli
    from polysparse.polynomial import RationalPolynomial
    monkeypatch.setattr(cli, "nnze_poly", lambda m, s: RationalPolynomial([1]))
    code, out, err = run(capsys, "verify", "--mesh", "quad2d", "--k-max", "1")
    assert code == 1 and "oracle == formula: 0/6 checks" in out


def test_export_pattern(tmp_path, capsys):
    path = tmp_path / "p.mtx"
    code, out, _ = run(capsys, "export-pattern", "--mesh", "quad2d", "--method", "DG", "--k", "1",
                       "--tiling", "3", "--out", str(path))
    assert code == 0 and out.strip() == "27 27 405"
    m = scipy.io.mmread(str(path))
    assert m.shape == (27, 27) and m.nnz == 405


def test_export_collapsed_tiling_needs_force(tmp_path, capsys):
    path = tmp_path / "p.mtx"
    argv = ["export-pattern", "--mesh", "quad2d", "--method", "DG", "--k", "1", "--tiling", "1", "--out", str(path)]
    code, _, err = run(capsys, *argv)
    assert code == 2 and "stability check failed" in err and not path.exists()
    code, out, err = run(capsys, *argv, "--force")
    assert code == 0 and "stability check failed" in err and out.strip() == "3 3 9"


def test_write_failures_exit_4(tmp_path, capsys):
    bad = str(tmp_path / "nope" / "p.mtx")
    assert run(capsys, "export-pattern", "--mesh", "quad2d", "--method", "DG", "--k", "1", "--out", bad)[0] == 4
    assert run(capsys, "topology", "--mesh", "quad2d", "--out", bad)[0] == 4


def test_out_writes_file(tmp_path, capsys):
    path = tmp_path / "t.md"
    code, out, _ = run(capsys, "topology", "--mesh", "quad2d", "--out", str(path))
    assert code == 0 and out == "" and "(Ed,1) | 6 | 7 | 2 | 2" in path.read_text()
