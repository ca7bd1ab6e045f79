#!/usr/bin/env python3
"""Regenerate tests/golden/catalog.json from the hlie binary.

Usage: tools/make_golden.py build/tools/hlie tests/golden/catalog.json
"""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

FIXTURES = [
    ("abelian", 4), ("heisenberg3", None), ("su2_biinvariant", None), ("sl2r", None),
    ("hyperbolic_solvable", 3), ("hyperbolic_solvable", 4), ("hyperbolic_solvable", 5),
    ("su2_plus_abelian3", None), ("su2_plus_su2", None),
]


def run(hlie, *args):
    out = subprocess.run([hlie, *args], capture_output=True, text=True, check=False)
    if out.returncode not in (0, 1):
        sys.exit(f"hlie {' '.join(args)} failed: {out.stderr}")
    return json.loads(out.stdout)


def main():
    hlie, target = sys.argv[1], Path(sys.argv[2])
    entries = []
    with tempfile.TemporaryDirectory() as tmp:
        for name, n in FIXTURES:
            path = Path(tmp) / f"{name}_{n}.json"
            args = ["catalog", "build", name, "--out", str(path)]
            if n is not None:
                args += ["--n", str(n)]
            run(hlie, *args)
            algebra = json.loads(path.read_text())
            dec = run(hlie, "decompose", str(path))["results"]["decomposition"]
            entries.append({
                "name": name,
                "n": n,
                "algebra": algebra,
                "ricci_eigenvalues": dec["eigenvalues"],
                "multiplicities": dec["multiplicities"],
            })
    target.write_text(json.dumps({"fixtures": entries}, indent=2) + "\n")


if __name__ == "__main__":
    main()
