import csv
import json
import subprocess
import sys

import pytest

from gcrewe.cli import main
from gcrewe.pipeline import RunConfig, incremental_noise, run_align

SMALL = ["--synth-nodes", "200", "--synth-permute", "--seed", "7"]


def run_json(tmp_path, name, *extra):
    out = tmp_path / name
    assert main(["run", *SMALL, *extra, "--out", str(out)]) == 0
    return json.loads(out.read_text())


def strip(report):
    report = dict(report)
    report.pop("timings")
    report["config"] = {k: v for k, v in report["config"].items() if k != "out"}
    return report


def test_run_is_deterministic(tmp_path):
    a = run_json(tmp_path, "a.json", "--edge-noise", "0.02")
    b = run_json(tmp_path, "b.json", "--edge-noise", "0.02")
    assert strip(a) == strip(b)
    assert a["config"]["seed_weights"] == 7 and a["config"]["phi"] == 0.2


def test_run_report_contents(tmp_path):
    r = run_json(tmp_path, "r.json")
    assert r["metrics"]["accuracy"] >= 0.95
    assert r["metrics"]["top_1"] <= r["metrics"]["top_5"] <= r["metrics"]["top_10"]
    assert len(r["candidates"]) == 200
    assert set(r["timings"]) >= {"features", "embed", "guiding", "compress", "align", "score", "total"}


def test_stage_timings_sum_to_total(tmp_path):
    r = run_json(tmp_path, "t.json")
    t = r["timings"]
    parts = sum(t[k] for k in ("features", "embed", "guiding", "compress", "align", "score"))
    assert abs(parts - t["total"]) <= 0.05 * t["total"]


def test_phi_zero_skips_supernodes(tmp_path):
    r = run_json(tmp_path, "p.json", "--phi", "0")
    assert r["compression"]["g1"]["supernodes"] == 0 and r["compression"]["g2"]["supernodes"] == 0
    assert "supernode: skipped (no supernodes)" in r["notes"]


def test_dumps(tmp_path):
    prefix = tmp_path / "sn"
    run_json(tmp_path, "d.json", "--dump-features", str(tmp_path / "f.csv"),
             "--dump-embeddings", str(tmp_path / "e.csv"), "--dump-supernodes", str(prefix))
    assert (tmp_path / "f.csv").read_text().startswith("graph,label,")
    assert len((tmp_path / "e.csv").read_text().splitlines()) == 400
    assert (tmp_path / "sn.g1").read_text().startswith("S0: ")


def test_grid_rows(tmp_path):
    out = tmp_path / "g.csv"
    assert main(["grid", *SMALL, "--levels", "0,0.01,0.02", "--trials", "2", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert [float(r["noise"]) for r in rows] == [0.0, 0.01, 0.02]
    assert {"accuracy", "top_1", "top_5", "top_10", "runtime"} <= set(rows[0])


def test_grid_single_level_matches_run(tmp_path):
    out = tmp_path / "g.csv"
    assert main(["grid", *SMALL, "--levels", "0", "--trials", "1", "--out", str(out)]) == 0
    row = next(csv.DictReader(out.open()))
    r = run_json(tmp_path, "r.json")
    assert float(row["accuracy"]) == r["metrics"]["accuracy"]


def test_grid_rejects_decreasing_levels(capsys):
    assert main(["grid", *SMALL, "--levels", "0.02,0.01"]) == 2
    assert "nondecreasing" in capsys.readouterr().err


def test_incremental_noise_compounds():
    qs = incremental_noise([0.0, 0.01, 0.03, 0.05])
    keep = 1.0
    for q, lv in zip(qs, [0.0, 0.01, 0.03, 0.05]):
        keep *= 1 - q
        assert keep == pytest.approx(1 - lv, abs=1e-15)


def test_synth_then_run_from_files(tmp_path):
    d = tmp_path / "prob"
    assert main(["synth", *SMALL, "--edge-noise", "0.01", "--synth-attrs", "2", "--out-dir", str(d)]) == 0
    for name in ("g1.edges", "g2.edges", "truth.txt", "g1.attrs", "g2.attrs"):
        assert (d / name).exists()
    out = tmp_path / "r.json"
    code = main(["run", "--edgelist1", str(d / "g1.edges"), "--edgelist2", str(d / "g2.edges"),
                 "--attrs1", str(d / "g1.attrs"), "--attrs2", str(d / "g2.attrs"),
                 "--truth", str(d / "truth.txt"), "--out", str(out)])
    assert code == 0
    r = json.loads(out.read_text())
    assert r["graphs"]["g1"]["attributes"] == 2 and r["alignment_mode"] == "exhaustive"
    assert r["metrics"]["accuracy"] > 0.5


def test_missing_file_reports_stage(tmp_path, capsys):
    code = main(["run", "--edgelist1", str(tmp_path / "nope"), "--synth-permute"])
    assert code == 2
    assert "stage 'load'" in capsys.readouterr().err


def test_bad_phi_rejected(capsys):
    assert main(["run", *SMALL, "--phi", "1.5"]) == 2


def test_console_entry_point(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run([sys.executable, "-m", "gcrewe.cli", "run", *SMALL, "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["metrics"]["evaluated"] == 200


def test_trials_block():
    r = run_align(RunConfig(synth_nodes=150, synth_permute=True, edge_noise=0.01, trials=2))
    assert len(r["trials"]["metrics"]) == 2 and "accuracy" in r["trials"]["mean"]
