#!/usr/bin/env python3
"""Drive the command-line tool end to end and validate every JSON report."""

import argparse
import csv
import json
import math
import pathlib
import shutil
import subprocess
import sys

import jsonschema

RUNS = {
    "modes": ["modes"],
    "classical": ["classical", "--method", "quadrature"],
    "classical_mc": ["classical", "--method", "torus_mc", "--samples", "20000"],
    "wkb": ["wkb"],
    "ground": ["ground", "--omega", "1", "--Omega", "5", "--C", "0.5", "--n", "0", "--m", "0"],
    "sweep": ["sweep", "--vary", "C", "--from", "0.05", "--to", "0.4", "--points", "5"],
    "trajectory": ["trajectory", "--steps", "20000", "--stride", "10"],
    "quantum": ["quantum", "--n", "4", "--m", "6"],
}


def run(cli, args, out):
    proc = subprocess.run([cli, *args, "--json", "--no-cache", "--out", str(out)],
                          capture_output=True, text=True, timeout=600)
    if proc.returncode not in (0, 2):
        raise SystemExit(f"{args[0]} exited with {proc.returncode}: {proc.stderr}")
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cli", required=True)
    ap.add_argument("--schema", required=True)
    ap.add_argument("--workdir", required=True)
    a = ap.parse_args()

    schema = json.loads(pathlib.Path(a.schema).read_text())
    validator = jsonschema.Draft202012Validator(schema)
    work = pathlib.Path(a.workdir)
    shutil.rmtree(work, ignore_errors=True)
    failures = []

    for name, args in RUNS.items():
        first = run(a.cli, args, work / name / "a")
        errors = sorted(validator.iter_errors(first), key=str)
        for e in errors:
            failures.append(f"{name}: {'/'.join(map(str, e.path))}: {e.message}")
        on_disk = json.loads((work / name / "a" / "report.json").read_text())
        second = run(a.cli, args, work / name / "b")
        for r in (first, second, on_disk):
            r.pop("timing", None)
            r.pop("files", None)
        if first != second:
            failures.append(f"{name}: repeated run differs")
        if first != on_disk:
            failures.append(f"{name}: report.json differs from stdout")
        print(f"{name}: {len(errors)} schema errors")

    with open(work / "sweep" / "a" / "sweep.csv", newline="") as f:
        rows = list(csv.DictReader(f))
    if len(rows) != 5:
        failures.append(f"sweep.csv has {len(rows)} rows")
    for prev, cur in zip(rows, rows[1:]):
        slope = (float(cur["S_CE"]) - float(prev["S_CE"])) / (float(cur["ln_C"]) - float(prev["ln_C"]))
        if not math.isclose(slope, 1.0, rel_tol=1e-9):
            failures.append(f"sweep slope {slope}")
        if float(cur["S_WKB"]) <= float(prev["S_WKB"]):
            failures.append("S_WKB not increasing")
    if not (work / "sweep" / "a" / "entropy_vs_log.svg").exists():
        failures.append("sweep plot missing")

    for f in failures:
        print("FAIL", f)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
