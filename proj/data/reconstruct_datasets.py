#!/usr/bin/env python3
"""Rebuild the bundled example datasets (lfp.csv, titanic.csv, program.csv).

Sources (all public, installable from PyPI):

  * lfp      -- carData::Mroz, shipped in the `rdatasets` wheel.
  * program  -- openintro::hsb2 (same 200 students as the UCLA hsbdemo file),
                shipped in the `rdatasets` wheel.
  * titanic  -- Kaggle Titanic passenger list (891 passengers), shipped in the
                `explainerdashboard` wheel (missing ages coded as -999).

Usage:
    pip download rdatasets explainerdashboard --no-deps -d /tmp/wheels
    python3 data/reconstruct_datasets.py /tmp/wheels data/
"""
import glob
import io
import lzma
import os
import pickle
import warnings
import sys
import zipfile

import numpy as np
import pandas as pd


def wheel(dirname, prefix):
    hits = sorted(glob.glob(os.path.join(dirname, prefix + "-*.whl")))
    if not hits:
        sys.exit(f"no {prefix} wheel in {dirname}")
    return zipfile.ZipFile(hits[-1])


def rdataset(zf, pkg, name):
    raw = zf.read(f"rdatasets/_data/{pkg}/{name}.pkl.compress")
    return pickle.loads(lzma.decompress(raw))


def standardize(x):
    return (x - x.mean()) / x.std(ddof=1)


def build_lfp(rd):
    m = rdataset(rd, "carData", "Mroz")
    out = pd.DataFrame({
        "lfp": (m["lfp"] == "yes").astype(int),
        "intercept": 1,
        "k5": m["k5"],
        "k618": m["k618"],
        "age": standardize(m["age"].astype(float)),
        "wc": (m["wc"] == "yes").astype(int),
        "hc": (m["hc"] == "yes").astype(int),
        "lwg": m["lwg"],
        "inc": m["inc"].astype(float).round(4),
    })
    return out


def build_program(rd):
    h = rdataset(rd, "openintro", "hsb2")
    labels = {"academic": "academic", "general": "general", "vocational": "vocation"}
    out = pd.DataFrame({
        "program": h["prog"].map(labels),
        "intercept": 1,
        "female": (h["gender"] == "female").astype(int),
        "ses": h["ses"].map({"low": 1, "middle": 2, "high": 3}),
        "write": standardize(h["write"].astype(float)),
    })
    return out


def build_titanic(ed):
    frames = [pd.read_csv(io.BytesIO(ed.read(f"explainerdashboard/datasets/titanic_{s}.csv")))
              for s in ("train", "test")]
    p = pd.concat(frames, ignore_index=True)
    p["title"] = p["Name"].str.extract(r",\s*([^\.]+)\.")[0]
    p.loc[p["Age"] < 0, "Age"] = np.nan
    # missing ages: mean age of passengers sharing the same title
    p["Age"] = p.groupby("title")["Age"].transform(lambda a: a.fillna(a.mean()))
    p["age.group"] = (np.ceil(p["Age"] / 5) * 5).astype(int)
    p["female"] = p["Sex_female"].astype(int)
    p["pclass"] = p["PassengerClass"].astype(int)
    g = (p.groupby(["age.group", "female", "pclass"], sort=True)["Survival"]
          .agg(["sum", "count"]).reset_index())
    g = g.sort_values(["age.group", "female", "pclass"], ascending=[True, False, True])
    out = pd.DataFrame({
        "survived": g["sum"].astype(int),
        "total": g["count"].astype(int),
        "intercept": 1,
        "pclass": g["pclass"],
        "female": g["female"],
        "age.group": g["age.group"],
    })
    return out


def main():
    warnings.simplefilter("ignore")
    wheels, dest = sys.argv[1], sys.argv[2]
    rd = wheel(wheels, "rdatasets")
    ed = wheel(wheels, "explainerdashboard")
    build_lfp(rd).to_csv(os.path.join(dest, "lfp.csv"), index=False, float_format="%.7f")
    build_program(rd).to_csv(os.path.join(dest, "program.csv"), index=False, float_format="%.6f")
    build_titanic(ed).to_csv(os.path.join(dest, "titanic.csv"), index=False)


if __name__ == "__main__":
    main()
