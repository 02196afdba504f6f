"""The square-code distinguisher.

A random [n, k] code has dim C*C = min(n, k(k+1)/2) with high
probability, so a square dimension below the generic value exposes
hidden algebraic structure.  That dimension gap is what breaks
McEliece-type schemes instantiated with algebraic codes: the public
code looks random entry-wise but its square stays small.
"""

import subprocess
import sys
import tempfile
from pathlib import Path

from starprod import (
    LinearCode,
    MatrixGF,
    SplitMix64,
    distinguish,
    field_new,
    rs_code,
)
from starprod.cli import write_genmatrix

# Library-level: a Reed-Solomon code versus a random code.
rs = rs_code(4, 11, field_new(11), list(range(11)))
rep = distinguish(rs, dual_dmax=True)
print(f"RS [11,4] over GF(11): dim C*C = {rep.dim_square}, generic "
      f"{rep.expected}, deficit {rep.deficit} -> {rep.verdict}")
print(f"  dual square dmax = {rep.dual_dmax} "
      f"(threshold k+l = {rep.dual_dmax_threshold})")

rng = SplitMix64(1)
gf2 = field_new(2)
rows = [[rng.below(2) for _ in range(20)] for _ in range(5)]
rnd = LinearCode(gf2, MatrixGF(gf2, rows, ncols=20))
rep = distinguish(rnd)
print(f"random [20,5] over GF(2): dim C*C = {rep.dim_square}, generic "
      f"{rep.expected} -> {rep.verdict}")

# CLI-level: the same check through the generator-matrix file format.
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "rs_11_4.gm"
    write_genmatrix(path, rs)
    print(f"\n$ starprod distinguish --gen {path.name} --dual-dmax")
    proc = subprocess.run(
        [sys.executable, "-m", "starprod.cli", "distinguish",
         "--gen", str(path), "--dual-dmax"],
        capture_output=True, text=True)
    sys.stdout.write(proc.stdout)
