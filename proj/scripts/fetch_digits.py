#!/usr/bin/env python3
"""Regenerate data/digits.csv (UCI optical digits, 1797 rows of 8x8 images).

Writes the CSV schema the library reads: header f0,...,f63,label with
integer pixel intensities in 0..16 followed by the class label 0..9.

Prefers the scikit-learn packaged copy; falls back to downloading the UCI
test split (optdigits.tes), which is the same 1797-sample set.
"""

import csv
import os
import sys

OUT = os.path.join(os.path.dirname(__file__), "..", "data", "digits.csv")
UCI_URL = (
    "https://archive.ics.uci.edu/ml/machine-learning-databases/"
    "optdigits/optdigits.tes"
)


def rows_from_sklearn():
    from sklearn.datasets import load_digits

    d = load_digits()
    for x, y in zip(d.data, d.target):
        yield [int(v) for v in x] + [int(y)]


def rows_from_uci():
    import urllib.request

    with urllib.request.urlopen(UCI_URL) as resp:
        for line in resp.read().decode("ascii").splitlines():
            if not line.strip():
                continue
            vals = [int(v) for v in line.split(",")]
            if len(vals) != 65:
                raise ValueError(f"expected 65 columns, got {len(vals)}")
            yield vals


def main():
    try:
        rows = list(rows_from_sklearn())
        source = "scikit-learn"
    except ImportError:
        rows = list(rows_from_uci())
        source = UCI_URL

    if len(rows) != 1797:
        print(f"warning: expected 1797 rows, got {len(rows)}", file=sys.stderr)

    with open(OUT, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow([f"f{i}" for i in range(64)] + ["label"])
        w.writerows(rows)
    print(f"wrote {OUT} ({len(rows)} rows, source: {source})")


if __name__ == "__main__":
    main()
