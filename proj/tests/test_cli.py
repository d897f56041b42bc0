#!/usr/bin/env python3
"""End-to-end checks of the command-line surface: exit codes, JSON shapes,
CSV sweeps, and grid workflows."""

import json
import math
import subprocess
import sys
import tempfile
import os

BIN = sys.argv[1]

S = 1.0 / math.sqrt(2.0)
SERIES = {
    "ambient_dim": 2,
    "bases": {
        "U": [[[S, 0.0], [S, 0.0]]],
        "E": [[[S, 0.0], [-S, 0.0]]],
        "J": [],
        "P1": [[[1.0, 0.0], [0.0, 0.0]]],
        "P2": [[[0.0, 0.0], [1.0, 0.0]]],
    },
}

passed = 0
failed = []


def check(name, cond):
    global passed
    if cond:
        passed += 1
    else:
        failed.append(name)
    print(("pass" if cond else "FAIL") + "  " + name)


def run(*args, data=None):
    return subprocess.run([BIN] + list(args), capture_output=True, text=True,
                          input=data)


def entry(mat, i, j):
    return complex(mat[i][j][0], mat[i][j][1])


with tempfile.TemporaryDirectory() as tmp:
    series_path = os.path.join(tmp, "series.json")
    with open(series_path, "w") as f:
        json.dump(SERIES, f)

    # validate: well-formed collection exits 0 with a passing report
    r = run("validate", series_path)
    rep = json.loads(r.stdout)
    check("validate exit 0", r.returncode == 0)
    check("validate report passed", rep["passed"] is True)

    # effective: series closed form at (1, 3) is the harmonic mean 1.5
    r = run("effective", series_path, "--l1", "1", "--l2", "3")
    out = json.loads(r.stdout)
    check("effective exit 0", r.returncode == 0)
    check("effective series value", abs(entry(out["matrix"], 0, 0) - 1.5) < 1e-12)

    # all methods agree on the series model
    for method in ["schur", "inverse", "fraction", "spectral", "cf:1"]:
        r = run("effective", series_path, "--l1", "2+1i", "--l2", "1",
                "--method", method)
        out = json.loads(r.stdout)
        v = entry(out["matrix"], 0, 0)
        ref = 2 * (2 + 1j) / (3 + 1j)
        check("method " + method, r.returncode == 0 and abs(v - ref) < 1e-8)

    # mathematical failure: l1 = -l2 makes L11 singular -> exit 1 + error object
    r = run("effective", series_path, "--l1", "1", "--l2", "-1")
    err = json.loads(r.stdout)
    check("singular exit 1", r.returncode == 1)
    check("singular error object",
          err["error"] == "SingularL11" and err["dim_ker"] == 1)

    # input malformation -> exit 2
    bad_path = os.path.join(tmp, "bad.json")
    with open(bad_path, "w") as f:
        f.write("{not json")
    r = run("validate", bad_path)
    check("malformed exit 2", r.returncode == 2)
    check("malformed error object", json.loads(r.stdout)["error"] == "parse")

    r = run("effective", series_path, "--l1", "1 + 2i", "--l2", "1")
    check("bad literal exit 2", r.returncode == 2)

    r = run("effective", series_path, "--method", "nope")
    check("unknown method exit 2", r.returncode == 2)

    # random -> validate round trip
    col_path = os.path.join(tmp, "col.json")
    r = run("random", "--dim", "8", "--du", "2", "--de", "3", "--dj", "3",
            "--dp1", "4", "--seed", "7", "-o", col_path)
    check("random exit 0", r.returncode == 0)
    r = run("validate", col_path)
    check("random validates", r.returncode == 0)

    # recurse: hierarchy JSON with a termination tag
    r = run("recurse", col_path, "--depth", "3")
    h = json.loads(r.stdout)
    check("recurse exit 0", r.returncode == 0)
    check("recurse levels", len(h["levels"]) >= 1)
    check("recurse termination",
          h["termination"] in ["depth_reached", "dim_zero", "degenerate"])
    check("recurse spectrum", len(h["spectral"]["eigenvalues"]) == 3)

    # sweep: CSV shape and a clean pole column
    csv_path = os.path.join(tmp, "sweep.csv")
    r = run("sweep", col_path, "--fix", "l2", "--value", "1",
            "--re-min", "-2", "--re-max", "2", "--n-re", "5",
            "--im-min", "0.1", "--im-max", "1", "--n-im", "3", "-o", csv_path)
    check("sweep exit 0", r.returncode == 0)
    with open(csv_path) as f:
        lines = [ln for ln in f.read().splitlines() if ln]
    header = lines[0].split(",")
    check("sweep rows", len(lines) == 1 + 15)
    check("sweep header", header[:2] == ["re", "im"] and
          header[-2:] == ["lambda_min_im", "pole"] and "re_00" in header)
    check("sweep no poles", all(ln.endswith(",0") for ln in lines[1:]))

    # grid: laminate gives the classical means
    lam_path = os.path.join(tmp, "lam.txt")
    with open(lam_path, "w") as f:
        f.write("1111\n" * 8 + "2222\n" * 8)
    r = run("grid", "--geometry", lam_path, "--sigma1", "1", "--sigma2", "4")
    g = json.loads(r.stdout)
    check("grid exit 0", r.returncode == 0)
    sig = g["sigma_star"]
    check("grid harmonic mean", abs(entry(sig, 0, 0) - 1.6) < 1e-8)
    check("grid arithmetic mean", abs(entry(sig, 1, 1) - 2.5) < 1e-8)
    check("grid volume fraction",
          abs(g["diagnostics"]["volume_fraction_1"] - 0.5) < 1e-12)

    # grid --emit-collection produces a collection that validates
    gc_path = os.path.join(tmp, "grid_col.json")
    r = run("grid", "--geometry", lam_path, "--emit-collection", gc_path)
    check("grid emit exit 0", r.returncode == 0)
    r = run("validate", gc_path)
    check("grid collection validates", r.returncode == 0)

    # verify: seeded property suite passes
    r = run("verify", "--seed-range", "1..3", "--dim", "8")
    check("verify exit 0", r.returncode == 0)
    check("verify summary", "checks passed" in r.stdout)

print(f"{passed} passed, {len(failed)} failed")
if failed:
    print("failed:", ", ".join(failed))
    sys.exit(1)
