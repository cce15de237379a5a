#!/usr/bin/env python3
"""Regenerate the small benchmark CSVs under data/.

The ODDS versions of these datasets are derived from public UCI sources. This
script rebuilds equivalent tables from two pip-installable sources so that the
repository does not depend on downloading ODDS .mat files:

  breastw  KEEL "wisconsin"                     (683 rows, 444 benign / 239 malignant)
  glass    KEEL "glass5" (tableware vs rest)    (214 rows, 205 / 9)
  lympho   KEEL "lymphography-normal-fibrosis"  (148 rows, 142 / 6), UCI integer codes
  wbc      sklearn breast_cancer, 21 malignant  (378 rows, 357 / 21)
  wine     sklearn wine, 10 of class 0          (129 rows, 119 / 10)

Output format: header f0..f{d-1},label with label 0 = target, 1 = outlier.

    pip install keel_ds scikit-learn
    python3 tools/make_datasets.py data/
"""

import csv
import os
import sys
import zipfile
from importlib import resources

import numpy as np

# UCI lymphography attribute domains; KEEL stores the category names.
LYMPHO_DOMAINS = [
    ["normal", "arched", "deformed", "displaced"],
    ["no", "yes"],
    ["no", "yes"],
    ["no", "yes"],
    ["no", "yes"],
    ["no", "yes"],
    ["no", "yes"],
    ["no", "yes"],
    None,
    None,
    ["bean", "oval", "round"],
    ["no", "lacunar", "lac_margin", "lac_central"],
    ["no", "lacunar", "lac_margin", "lac_central"],
    ["no", "grainy", "drop_like", "coarse", "diluted", "reticular", "stripped", "faint"],
    ["no", "chalices", "vesicles"],
    ["no", "yes"],
    ["no", "yes"],
    None,
]


def keel_rows(name):
    path = resources.files("keel_ds") / "data" / "imbalanced" / "raw" / f"{name}.dat"
    rows = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        rows.append([tok.strip() for tok in line.split(",")])
    return rows


def keel_numeric(name):
    rows = keel_rows(name)
    x = np.array([[float(v) for v in r[:-1]] for r in rows])
    y = np.array([1 if r[-1] == "positive" else 0 for r in rows])
    return x, y


def lympho():
    rows = keel_rows("lymphography-normal-fibrosis")
    x = []
    for r in rows:
        feats = []
        for value, domain in zip(r[:-1], LYMPHO_DOMAINS):
            feats.append(float(value) if domain is None else float(domain.index(value) + 1))
        x.append(feats)
    y = np.array([1 if r[-1] == "positive" else 0 for r in rows])
    return np.array(x), y


def downsample(x, y_outlier_mask, keep, seed):
    rng = np.random.RandomState(seed)
    outliers = np.flatnonzero(y_outlier_mask)
    chosen = np.sort(rng.choice(outliers, size=keep, replace=False))
    rows = np.concatenate([np.flatnonzero(~y_outlier_mask), chosen])
    rows.sort()
    return x[rows], y_outlier_mask[rows].astype(int)


def wbc():
    from sklearn.datasets import load_breast_cancer

    d = load_breast_cancer()
    # sklearn: 0 = malignant, 1 = benign
    return downsample(d.data, d.target == 0, 21, seed=0)


def wine():
    from sklearn.datasets import load_wine

    d = load_wine()
    return downsample(d.data, d.target == 0, 10, seed=0)


def write(path, x, y):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow([f"f{j}" for j in range(x.shape[1])] + ["label"])
        for row, label in zip(x, y):
            w.writerow([repr(float(v)) for v in row] + [int(label)])


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "data"
    os.makedirs(out, exist_ok=True)
    sets = {
        "breastw": keel_numeric("wisconsin"),
        "glass": keel_numeric("glass5"),
        "lympho": lympho(),
        "wbc": wbc(),
        "wine": wine(),
    }
    for name, (x, y) in sets.items():
        write(os.path.join(out, f"{name}.csv"), x, y)
        print(f"{name}: n={len(y)} d={x.shape[1]} targets={int((y == 0).sum())} outliers={int(y.sum())}")


if __name__ == "__main__":
    main()
