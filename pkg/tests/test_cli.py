import json

import pytest

from blaschke_atlas.cli import parse_complex, parse_resolution, read_config, run, UsageError


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_disjoint(capsys):
    code, out, _ = call(capsys, "classify", "--a", "5.25")
    d = json.loads(out)
    assert code == 0 and d["label"] == "disjoint" and d["period"] == 2


def test_classify_disk_escape(capsys):
    code, out, _ = call(capsys, "classify", "--a", "0.5")
    d = json.loads(out)
    assert d["label"] == "disk-escape" and d["connectivity"] == "circle-julia"


def test_classify_superattracting_at_two(capsys):
    _, out, _ = call(capsys, "classify", "--a", "2")
    cyc = json.loads(out)["cycle_plus"]
    assert cyc["period"] == 1
    assert abs(complex(*cyc["points"][0]) - 1) < 1e-12
    assert abs(complex(*cyc["multiplier"])) < 1e-12


def test_negative_values_are_accepted(capsys):
    code, out, _ = call(capsys, "classify", "--a", "-0.87,2.05333")
    assert code == 0 and json.loads(out)["connectivity"] == "disconnected"


def test_orbit(capsys):
    code, out, _ = call(capsys, "orbit", "--a", "0.5", "--z", "0.3,0")
    assert code == 0 and json.loads(out)["tag"] == "escape-zero"
    _, out, _ = call(capsys, "orbit", "--a", "5.25", "--z", "c_minus")
    assert json.loads(out)["cycle"]["disk_pattern"] == "11"


@pytest.mark.parametrize(
    "argv",
    [["classify", "--bogus"], ["frobnicate"], [], ["classify"], ["classify", "--a", "x,y"],
     ["param-plane", "--res", "0"], ["param-plane", "--res", "5000", "--out", "x.ppm"],
     ["center", "--a", "5.25"]],
)
def test_usage_errors_exit_one(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 1 and "usage" in err


def test_numeric_failures_exit_two(capsys):
    assert call(capsys, "lift", "--a", "1.5")[0] == 2
    assert call(capsys, "solve-multiplier", "--a", "1.5", "--target", "0")[0] == 2
    assert call(capsys, "solve-multiplier", "--a", "-0.87,2.05333", "--target", "0")[0] == 2


def test_param_plane_writes_p6(tmp_path, capsys):
    out = tmp_path / "plane.ppm"
    code, text, _ = call(capsys, "param-plane", "--center", "0,0", "--width", "16", "--res", "40", "--out", str(out))
    assert code == 0
    data = out.read_bytes()
    assert data.startswith(b"P6\n40 40\n255\n") and len(data) == 13 + 40 * 40 * 3
    assert sum(json.loads(text)["counts"].values()) == 1600


def test_re_render_from_csv(tmp_path, capsys):
    img, csv, img2 = tmp_path / "a.ppm", tmp_path / "a.csv", tmp_path / "b.ppm"
    call(capsys, "param-plane", "--width", "8", "--res", "12,10", "--out", str(img), "--csv", str(csv), "--threads", "3")
    code, _, _ = call(capsys, "param-plane", "--width", "8", "--res", "12,10", "--from-csv", str(csv), "--out", str(img2))
    assert code == 0 and img.read_bytes() == img2.read_bytes()


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "job.cfg"
    cfg.write_text("# a job\ncenter = 1,1\nwidth=4\nres = 6\nthreads=2\nmax-iter = 500\n")
    out = tmp_path / "c.ppm"
    code, text, _ = call(capsys, "param-plane", "--config", str(cfg), "--res", "5", "--out", str(out))
    d = json.loads(text)
    assert code == 0 and d["resolution"] == [5, 5] and d["width"] == 4 and d["center"] == [1, 1]


def test_dyn_and_poly_planes(tmp_path, capsys):
    code, text, _ = call(capsys, "dyn-plane", "--a", "4", "--width", "4", "--res", "30", "--out", str(tmp_path / "d.ppm"))
    assert code == 0 and json.loads(text)["label"] == "disjoint"
    code, text, _ = call(capsys, "poly-plane", "--family", "cubic", "--center", "-3,0", "--width", "12", "--res", "20",
                         "--csv", str(tmp_path / "c.csv"))
    assert code == 0 and json.loads(text)["family"] == "cubic"
    assert (tmp_path / "c.csv").read_text().startswith("family,")
    code, _, _ = call(capsys, "poly-plane", "--family", "blaschke", "--res", "4")
    assert code == 0


def test_swapping_preset(capsys):
    code, text, _ = call(capsys, "param-plane", "--mode", "tricorn", "--res", "30")
    counts = json.loads(text)["counts"]
    assert code == 0 and counts.get("swapping-bitransitive", 0) + counts.get("swapping-disjoint", 0) > 0


def test_lift_and_solvers(capsys, tmp_path):
    code, text, _ = call(capsys, "lift", "--a", "4", "--csv", str(tmp_path / "l.csv"))
    d = json.loads(text)
    assert code == 0 and d["defect"] < 1e-6 and d["monotone"] and d["winding"] == 2
    code, text, _ = call(capsys, "solve-multiplier", "--a", "5.25", "--target", "0.5,0", "--json", str(tmp_path / "r.json"))
    assert code == 0 and json.loads(text)["residual"] < 1e-8
    assert json.loads((tmp_path / "r.json").read_text())["period"] == 2
    code, text, _ = call(capsys, "center", "--a", "5.25", "--period", "2")
    assert code == 0 and abs(json.loads(text)["a_star"][0] - 5.243767771392311) < 1e-9


def test_parsers():
    assert parse_complex("1.5") == 1.5
    assert parse_complex("-1,2") == complex(-1, 2)
    assert parse_complex("1+2i") == complex(1, 2)
    assert parse_resolution("7") == (7, 7)
    assert parse_resolution("7,3") == (7, 3)
    with pytest.raises(UsageError):
        parse_resolution("7,x")


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("width 4\n")
    with pytest.raises(UsageError, match="key=value"):
        read_config(bad)
    with pytest.raises(UsageError):
        read_config(tmp_path / "none.cfg")
