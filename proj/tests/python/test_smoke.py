import math
from pathlib import Path

import pytest

import bfp

DATA = Path(__file__).resolve().parent.parent / "data"


def test_wald_row_matches_printed_coefficient():
    r = bfp.wald_row("RoA", -81.0931, 25.0742)
    assert abs(r.z - -3.2341) < 2e-3
    assert abs(r.p_value - 0.0012) < 5e-4
    assert r.ci_low == pytest.approx(-130.2376, rel=5e-4)


def test_fit_intercept_only_log_odds():
    x = [[] for _ in range(90)]
    y = [1] * 30 + [0] * 60
    f = bfp.fit(x, y)
    assert f.converged
    assert abs(f.beta[0] - math.log(30 / 60)) < 1e-8


def test_fit_and_predict_on_fixture():
    ids, labels, features, rows = bfp.load_ratios(str(DATA / "firms_90.csv"))
    assert len(ids) == 90
    assert sum(labels) == 45
    cols = [features.index("roa"), features.index("current_ratio")]
    x = [[r[c] for c in cols] for r in rows]
    f = bfp.fit(x, labels, ["roa", "current_ratio"])
    assert f.converged
    table = f.wald()
    assert table[0].is_intercept
    assert [r.name for r in table[1:]] == ["roa", "current_ratio"]
    p = f.predict_proba(x)
    assert all(0.0 < v < 1.0 for v in p)
    kept, dropped = bfp.select(table, top_k=2)
    assert kept == ["roa", "current_ratio"]
    assert dropped == []


def test_separation_raises_with_code():
    with pytest.raises(bfp.BfpError) as info:
        bfp.fit([[-1.0], [-1.0], [1.0], [1.0]], [0, 0, 1, 1])
    assert info.value.code == "SeparationDetected"


def test_metrics_and_roc():
    m = bfp.class_metrics(12, 3, 2, 10)
    assert abs(m["accuracy"] - 22 / 27) < 1e-12
    assert abs(m["precision"] - 0.769) < 5e-4
    pts, auc = bfp.roc_curve([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0])
    assert auc == 1.0
    assert math.isinf(pts[0][0])
    assert bfp.confusion_matrix([1, 1, 0], [1, 0, 0]) == ((1, 1), (0, 1))


def test_descriptives_and_split():
    d = bfp.describe([1.0] * 45 + [0.0] * 45)
    assert abs(d["standard_deviation"] - 0.5028) < 5e-4
    train, test = bfp.split_indices([1, 0] * 45, 0.7, 1, True)
    assert len(train) == 63 and len(test) == 27
    c = bfp.correlation_matrix(["a", "b"], [[1, 2, 3, 4], [2, 4, 6, 8.5]])
    assert c[0][0] == 1.0 and c[0][1] == c[1][0]


def test_pipeline_report(tmp_path):
    rep = bfp.run_pipeline([str(DATA / "firms_90.csv")], seed=7, out_dir=str(tmp_path))
    h = rep["horizons"][0]
    assert h["records"]["test"] == 27
    assert (tmp_path / "report.txt").exists()
    m = bfp.load_model(str(tmp_path / "model.json"))
    assert m.converged
    again = bfp.run_pipeline([str(DATA / "firms_90.csv")], seed=7)
    assert again["horizons"][0]["evaluation"] == h["evaluation"]
