#!/usr/bin/env python3
"""Regenerate the UCI fixture CSVs under tests/data/uci/.

The sandbox this project is developed in has no route to the UCI archive, so
the fixtures are rebuilt from copies bundled in Python packages:

  iris.csv          sklearn.datasets (bundled iris.csv)
  breastcancer.csv  pydataset resources (R MASS::biopsy, 699 rows)
  ionosphere.csv    keel-ds wheel (KEEL ionosphere, 351 rows)

Usage:
  pip download --no-deps pydataset keel-ds -d /tmp/dl
  python3 tools/scripts/prepare_uci_data.py --pydataset /tmp/dl/pydataset-0.2.0.tar.gz \
      --keel /tmp/dl/keel_ds-0.2.5-py3-none-any.whl --out tests/data/uci
"""
import argparse
import csv
import io
import os
import statistics
import tarfile
import zipfile

import sklearn


def write(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def iris(out):
    src = os.path.join(os.path.dirname(sklearn.__file__), "datasets", "data", "iris.csv")
    with open(src) as f:
        lines = f.read().splitlines()
    names = lines[0].split(",")[2:]
    rows = []
    for line in lines[1:]:
        *vals, cls = line.split(",")
        rows.append(vals + [names[int(cls)]])
    header = ["sepal_length", "sepal_width", "petal_length", "petal_width", "class"]
    write(os.path.join(out, "iris.csv"), header, rows)


def breastcancer(tarball, out):
    # The sdist nests the data in a second archive, resources.tar.gz.
    with tarfile.open(tarball) as outer:
        inner = next(m for m in outer.getmembers() if m.name.endswith("resources.tar.gz"))
        with tarfile.open(fileobj=outer.extractfile(inner)) as tf:
            member = next(m for m in tf.getmembers()
                          if m.name.endswith("rdata/csv/MASS/biopsy.csv"))
            text = tf.extractfile(member).read().decode()
    records = list(csv.reader(io.StringIO(text)))[1:]
    # 16 rows carry NA in V6 (bare nuclei); impute the column median so the
    # row count stays at 699.
    v6 = [float(r[7]) for r in records if r[7] != "NA"]
    med = statistics.median(v6)
    rows = []
    for r in records:
        vals = [r[i] if r[i] != "NA" else repr(med) for i in range(2, 11)]
        rows.append(vals + [r[11]])
    header = ["clump_thickness", "cell_size", "cell_shape", "adhesion", "epithelial_size",
              "bare_nuclei", "chromatin", "normal_nucleoli", "mitoses", "class"]
    write(os.path.join(out, "breastcancer.csv"), header, rows)


def ionosphere(wheel, out):
    with zipfile.ZipFile(wheel) as z:
        text = z.read("keel_ds/data/balanced/raw/ionosphere.dat").decode()
    rows = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("@"):
            continue
        *vals, cls = [c.strip() for c in line.split(",")]
        # KEEL drops the second UCI attribute (constant 0); restore it.
        vals.insert(1, "0")
        rows.append(vals + ["bad" if cls == "b" else "good"])
    header = ["a%02d" % (i + 1) for i in range(34)] + ["class"]
    write(os.path.join(out, "ionosphere.csv"), header, rows)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pydataset", required=True)
    ap.add_argument("--keel", required=True)
    ap.add_argument("--out", default="tests/data/uci")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    iris(args.out)
    breastcancer(args.pydataset, args.out)
    ionosphere(args.keel, args.out)


if __name__ == "__main__":
    main()
