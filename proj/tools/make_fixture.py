#!/usr/bin/env python3
"""Generate the synthetic firm fixtures under tests/data/.

Each firm's statements are drawn at random; its bankruptcy label follows a
logistic model on four ratios (roa, current_ratio, altman_a, altman_e) with
the slopes in GENERATING_SLOPES (scaled by `strength`; the 2018 horizon uses
2.5, a sharper signal nearer the filing). Firms are drawn until 45 bankrupt and
45 healthy ones are collected, so slopes are preserved and only the intercept
shifts. All other ratios carry no signal.
"""

import argparse
import csv
import math
from pathlib import Path

import numpy as np

GENERATING_SLOPES = {
    "roa": -12.0,
    "current_ratio": -1.5,
    "altman_a": 3.0,
    "altman_e": 1.2,
}
INTERCEPT = 0.5

COLUMNS = [
    "firm_id", "fiscal_year", "label", "total_assets", "total_liabilities",
    "current_assets", "current_liabilities", "total_debt", "shareholder_equity",
    "retained_earnings", "sales", "ebit", "net_income", "market_value_equity",
    "working_capital",
]


def draw_firm(rng):
    ta = round(float(np.exp(rng.normal(7.0, 1.0))), 2)
    ca = round(ta * rng.uniform(0.2, 0.7), 2)
    cr = float(np.exp(rng.normal(0.15, 0.45)))
    cl = round(ca / cr, 2)
    sales = round(ta * float(np.exp(rng.normal(-0.5, 0.6))), 2)
    ebit = round(sales * rng.normal(0.08, 0.10), 2)
    net_income = round(ta * rng.normal(0.0, 0.08), 2)
    tl = round(ta * rng.uniform(0.3, 0.9), 2)
    equity = round(ta - tl, 2)
    return {
        "total_assets": ta,
        "total_liabilities": tl,
        "current_assets": ca,
        "current_liabilities": cl,
        "total_debt": round(tl * rng.uniform(0.3, 0.8), 2),
        "shareholder_equity": equity,
        "retained_earnings": round(ta * rng.normal(0.1, 0.2), 2),
        "sales": sales,
        "ebit": ebit,
        "net_income": net_income,
        "market_value_equity": round(equity * float(np.exp(rng.normal(0.3, 0.5))), 2),
        "working_capital": round(ca - cl, 2),
    }


def ratios(f):
    return {
        "roa": f["net_income"] / f["total_assets"],
        "current_ratio": f["current_assets"] / f["current_liabilities"],
        "altman_a": (f["current_assets"] - f["current_liabilities"]) / f["total_assets"],
        "altman_e": f["sales"] / f["total_assets"],
    }


def generate(seed, year, strength=1.0, per_class=45):
    rng = np.random.default_rng(seed)
    firms = {0: [], 1: []}
    while min(len(firms[0]), len(firms[1])) < per_class:
        f = draw_firm(rng)
        r = ratios(f)
        eta = INTERCEPT + strength * sum(GENERATING_SLOPES[k] * r[k] for k in GENERATING_SLOPES)
        label = int(rng.uniform() < 1.0 / (1.0 + math.exp(-eta)))
        if len(firms[label]) < per_class:
            firms[label].append(f)
    rows = []
    for label in (1, 0):
        for i, f in enumerate(firms[label]):
            prefix = "B" if label else "N"
            rows.append({"firm_id": f"{prefix}{i + 1:03d}", "fiscal_year": year, "label": label, **f})
    order = rng.permutation(len(rows))
    return [rows[i] for i in order]


def write(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (f"{r[k]:.2f}" if isinstance(r[k], float) else r[k]) for k in COLUMNS})


def write_duplicated_ratios(path, rows):
    # altman_c repeats roa exactly: a forced collinear pair.
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["firm_id", "label", "roa", "current_ratio", "altman_a", "altman_c", "altman_e"])
        for r in rows:
            q = ratios(r)
            w.writerow([r["firm_id"], r["label"], repr(q["roa"]), repr(q["current_ratio"]),
                        repr(q["altman_a"]), repr(q["roa"]), repr(q["altman_e"])])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "tests" / "data"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    first = generate(seed=2017, year=2017)
    write(out / "firms_90.csv", first)
    write(out / "firms_90_2018.csv", generate(seed=2019, year=2018, strength=2.5))
    write_duplicated_ratios(out / "ratios_duplicated.csv", first)


if __name__ == "__main__":
    main()
