#!/usr/bin/env python3
"""Build the bundled CSV copies of the small UCI benchmark datasets.

Sources are packages that ship the raw UCI files, so no network access to
the UCI archive is needed:

  wine      -> scikit-learn (sklearn.datasets.load_wine)
  zoo       -> Orange3 wheel (Orange/datasets/zoo.tab)
  haberman  -> imbalanced_databases wheel (data/haberman/haberman.dat)

Usage:
  pip download --no-deps -d /tmp/wheels orange3 imbalanced-databases
  python3 scripts/prepare_datasets.py /tmp/wheels data/

Every output file has a header row and the class label in the last column.
"""
import csv
import glob
import os
import sys
import zipfile


def wheel_member(wheel_dir, pattern, member):
    paths = glob.glob(os.path.join(wheel_dir, pattern))
    if not paths:
        sys.exit(f"no wheel matching {pattern} in {wheel_dir}")
    return zipfile.ZipFile(paths[0]).read(member).decode()


def write(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    print(f"{path}: {len(rows)} rows, {len(header) - 1} features")


def wine(out):
    from sklearn.datasets import load_wine

    ds = load_wine()
    header = [n.replace(" ", "_") for n in ds.feature_names] + ["class"]
    rows = [[repr(float(v)) if v != int(v) else str(int(v)) for v in x] + [str(int(y) + 1)]
            for x, y in zip(ds.data, ds.target)]
    write(os.path.join(out, "wine.csv"), header, rows)


def zoo(wheel_dir, out):
    text = wheel_member(wheel_dir, "orange3-*.whl", "Orange/datasets/zoo.tab")
    lines = text.splitlines()
    names = lines[0].split("\t")
    # three header lines: names, types, flags; first column is the animal name
    header = names[1:-1] + ["class"]
    rows = [ln.split("\t")[1:] for ln in lines[3:] if ln.strip()]
    write(os.path.join(out, "zoo.csv"), header, rows)


def haberman(wheel_dir, out):
    text = wheel_member(wheel_dir, "imbalanced_databases-*.whl",
                        "imbalanced_databases/data/haberman/haberman.dat")
    rows = []
    for ln in text.splitlines():
        if not ln.strip() or ln.startswith("@"):
            continue
        rows.append([f.strip() for f in ln.split(",")])
    write(os.path.join(out, "haberman.csv"), ["age", "year", "positive_nodes", "class"], rows)


def main():
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    wheel_dir, out = sys.argv[1], sys.argv[2]
    os.makedirs(out, exist_ok=True)
    wine(out)
    zoo(wheel_dir, out)
    haberman(wheel_dir, out)


if __name__ == "__main__":
    main()
