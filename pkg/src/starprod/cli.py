"""Command-line front end.

Subcommands
-----------
* ``bounds``      - evaluate a closed-form bound (span, psw, dependent,
  dmax, toy, gap).
* ``exact``       - exact chain/decomposition/enumeration quantities.
* ``mc``          - one Monte Carlo campaign cell, CSV output.
* ``distinguish`` - square-code distinguisher on a generator-matrix file.
* ``tables``      - the default desk-scale verification campaign (or a
  campaign CSV), one output file per theorem family.

Exit codes: 0 success, 2 usage/parse error, 3 a Monte Carlo verdict was
"violated" (estimate exceeds its bound beyond statistical doubt),
4 rejection-cap exceeded while sampling.

Generator-matrix file format (``distinguish --gen``): ``#`` starts a
comment line; the first two payload lines are ``q <value>`` and
``rows <k> cols <n>``; then k lines of n whitespace-separated integers
in [0, q), elements written as canonical integers (for q = p^e the
base-p digits are the polynomial coefficients, low degree first).

All randomized commands require an explicit ``--seed``.  Decimals are
printed with 12 significant digits next to exact numerator/denominator
forms where the value is an exact rational.  CSV files use ``,``
delimiters, ``.`` decimal points, and LF line endings.
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from .bounds import (
    DEFAULT_KAPPA,
    BoundValue,
    OutOfDomainError,
    bound_gap_markov,
    bound_prop_toy,
    bound_thm_dependent,
    bound_thm_dmax,
    bound_thm_psw,
    bound_thm_span,
)
from .codes import LinearCode, weight_enumerator_dual, simplex_code, tensor_code
from .exactdist import (
    SizeGuardError,
    build_chain,
    exact_pn_bruteforce,
    n_decomp,
    ps0_sequence,
)
from .experiments import (
    ExperimentConfig,
    RejectionCapExceededError,
    campaign_row,
    default_campaign,
    distinguish,
    estimate,
    verify_campaign,
)
from .gf import field_of_order
from .linalg import MatrixGF
from .bounds import exact_cprime, rho
from .rng import SplitMix64

CSV_COLUMNS = ["q", "k", "l", "n", "model", "target", "trials", "seed",
               "successes", "estimate", "ci_low", "ci_high", "bound_low",
               "bound_high", "in_param_space", "vacuous", "verdict"]


class GenMatrixParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


# ----------------------------------------------------------------------
# Formatting
# ----------------------------------------------------------------------

def _dec(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    return f"{float(x):.12g}"


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _bound_lines(b: BoundValue) -> List[str]:
    lines = [f"formula        {b.formula}"]
    if b.exact:
        lines.append(f"value          {_dec(b.lo)}  (= {_frac(b.lo)})")
    else:
        lines.append(f"value in       [{_dec(b.lo)}, {_dec(b.hi)}]")
    lines.append(f"vacuous        {'yes' if b.vacuous else 'no'}")
    if b.in_param_space is not None:
        lines.append(f"in_param_space {'yes' if b.in_param_space else 'no'}"
                     + ("" if b.in_param_space else "  (bound not asserted)"))
    return lines


# ----------------------------------------------------------------------
# Generator matrix files
# ----------------------------------------------------------------------

def parse_genmatrix(path: str | Path) -> LinearCode:
    payload = []  # (line_no, text)
    with open(path, "r", encoding="utf-8") as fh:
        for i, raw in enumerate(fh, start=1):
            s = raw.strip()
            if not s or s.startswith("#"):
                continue
            payload.append((i, s))
    if len(payload) < 2:
        raise GenMatrixParseError(len(payload) + 1, "missing header lines")
    line_no, qline = payload[0]
    parts = qline.split()
    if len(parts) != 2 or parts[0] != "q":
        raise GenMatrixParseError(line_no, f"expected 'q <value>', got {qline!r}")
    try:
        field = field_of_order(int(parts[1]))
    except ValueError as e:
        raise GenMatrixParseError(line_no, str(e)) from e
    line_no, dims = payload[1]
    parts = dims.split()
    if len(parts) != 4 or parts[0] != "rows" or parts[2] != "cols":
        raise GenMatrixParseError(line_no,
                                  f"expected 'rows <k> cols <n>', got {dims!r}")
    try:
        k, n = int(parts[1]), int(parts[3])
    except ValueError as e:
        raise GenMatrixParseError(line_no, str(e)) from e
    if len(payload) != 2 + k:
        raise GenMatrixParseError(payload[-1][0],
                                  f"expected {k} matrix rows, found {len(payload) - 2}")
    rows = []
    for line_no, text in payload[2:]:
        entries = text.split()
        if len(entries) != n:
            raise GenMatrixParseError(line_no,
                                      f"expected {n} entries, found {len(entries)}")
        row = []
        for tok in entries:
            try:
                v = int(tok)
            except ValueError as e:
                raise GenMatrixParseError(line_no, f"bad entry {tok!r}") from e
            if not 0 <= v < field.q:
                raise GenMatrixParseError(line_no,
                                          f"entry {v} out of range [0, {field.q})")
            row.append(v)
        rows.append(row)
    return LinearCode(field, MatrixGF(field, rows, ncols=n))


def write_genmatrix(path: str | Path, code: LinearCode) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"q {code.field.q}\n")
        fh.write(f"rows {code.gen.nrows} cols {code.n}\n")
        for row in code.gen.rows:
            fh.write(" ".join(str(x) for x in row) + "\n")


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------

def _require(args, names: Sequence[str], which: str) -> bool:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        print(f"error: --which {which} requires {', '.join(missing)}",
              file=sys.stderr)
        return False
    return True


def cmd_bounds(args) -> int:
    eps = Fraction(args.epsilon) if args.epsilon is not None else Fraction(1, 2)
    kappa = Fraction(args.kappa) if args.kappa is not None else DEFAULT_KAPPA
    which = args.which
    if which == "span":
        if not _require(args, ["q", "k", "l", "n"], which):
            return 2
        b = bound_thm_span(args.q, args.k, args.l, args.n, eps, kappa)
    elif which == "psw":
        if not _require(args, ["q", "k", "l", "w"], which):
            return 2
        b = bound_thm_psw(args.q, args.k, args.l, args.w)
    elif which == "dependent":
        if not _require(args, ["q", "k", "l", "n"], which):
            return 2
        b = bound_thm_dependent(args.q, args.k, args.l, args.n, eps)
    elif which == "dmax":
        if not _require(args, ["q", "k", "l", "n"], which):
            return 2
        b = bound_thm_dmax(args.q, args.k, args.l, args.n)
    elif which == "toy":
        if not _require(args, ["q", "m", "n", "r"], which):
            return 2
        b = bound_prop_toy(args.q, args.m, args.n, args.r)
    elif which == "gap":
        if not _require(args, ["q", "k", "l", "n", "g"], which):
            return 2
        b = bound_gap_markov(args.q, args.k, args.l, args.n, args.g, eps, kappa)
    else:  # pragma: no cover - argparse choices guard this
        return 2
    for line in _bound_lines(b):
        print(line)
    return 0


def cmd_exact(args) -> int:
    q, k, l = args.q, args.k, args.l
    if args.ps0_upto is not None:
        chain = build_chain(q, k, l, args.model)
        print("w,ps0_num,ps0_den,ps0")
        for w, p in enumerate(ps0_sequence(chain, args.ps0_upto)):
            print(f"{w},{p.numerator},{p.denominator},{_dec(p)}")
        return 0
    if args.ndecomp is not None:
        r, w = args.ndecomp
        value = n_decomp(q, k, l, r, w)
        print("r,w,n_decomp")
        print(f"{r},{w},{value}")
        return 0
    if args.pn is not None:
        value = exact_pn_bruteforce(q, k, l, args.pn, args.model)
        print("n,model,pn_num,pn_den,pn")
        print(f"{args.pn},{args.model},{value.numerator},{value.denominator},"
              f"{_dec(value)}")
        return 0
    print("error: one of --ps0-upto, --ndecomp, --pn is required",
          file=sys.stderr)
    return 2


def _mc_rows(res) -> List[dict]:
    if res.config.target == "dim-histogram":
        rows = []
        base = campaign_row(res)
        for dim in sorted(res.histogram):
            row = dict(base)
            row["target"] = f"dim-histogram[{dim}]"
            row["successes"] = res.histogram[dim]
            row["estimate"] = Fraction(res.histogram[dim], res.trials)
            row["ci_low"] = row["ci_high"] = None
            rows.append(row)
        return rows
    return [campaign_row(res)]


def _write_csv(path, rows: List[dict], columns: List[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            out = []
            for col in columns:
                v = row.get(col)
                if v is None:
                    out.append("")
                elif isinstance(v, bool):
                    out.append("true" if v else "false")
                elif isinstance(v, (Fraction, float)):
                    out.append(_dec(v))
                else:
                    out.append(str(v))
            writer.writerow(out)


def cmd_mc(args) -> int:
    eps = Fraction(args.epsilon) if args.epsilon is not None else Fraction(1, 2)
    kappa = Fraction(args.kappa) if args.kappa is not None else DEFAULT_KAPPA
    target = {"span": "span-failure", "dmax": "dmax-exceed",
              "gap": "dim-deficit", "hist": "dim-histogram"}.get(
                  args.target, args.target)
    if target == "dmax-exceed" and args.n < args.k + args.l:
        print("error: dmax target requires n >= k+l", file=sys.stderr)
        return 2
    if target == "dmax-exceed" and args.n > args.k * args.l:
        print("error: dmax target requires n <= k*l", file=sys.stderr)
        return 2
    cfg = ExperimentConfig(q=args.q, k=args.k, l=args.l, n=args.n,
                           trials=args.trials, seed=args.seed,
                           model=args.model, target=target, g=args.g,
                           epsilon=eps, kappa=kappa, threads=args.threads)
    res = estimate(cfg)
    _write_csv(args.out, _mc_rows(res), CSV_COLUMNS)
    b = res.bound
    bound_txt = f" bound<= {_dec(b.hi)}" if b else ""
    print(f"{target} q={args.q} k={args.k} l={args.l} n={args.n} "
          f"model={args.model}: {res.successes}/{res.trials} "
          f"= {_dec(res.estimate)} ci=[{_dec(res.ci_low)},{_dec(res.ci_high)}]"
          f"{bound_txt} verdict={res.verdict}")
    return 3 if res.verdict == "violated" else 0


def cmd_distinguish(args) -> int:
    code = parse_genmatrix(args.gen)
    rep = distinguish(code, dual_dmax=args.dual_dmax)
    print(f"n              {rep.n}")
    print(f"dim            {rep.dim}")
    print(f"dim square     {rep.dim_square}")
    print(f"generic dim    {rep.expected}   (min(n, k(k+1)/2))")
    print(f"deficit        {rep.deficit}")
    print(f"verdict        {rep.verdict}")
    if rep.verdict == "random-like":
        print("note: the verdict is probabilistic; a structured code can "
              "evade the test, a random one fails it only rarely")
    if args.dual_dmax:
        shown = "-" if rep.dual_dmax is None else str(rep.dual_dmax)
        print(f"dmax dual sq   {shown}   (threshold {rep.dual_dmax_threshold})")
    return 0


def _parse_campaign_file(path) -> List[ExperimentConfig]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(ExperimentConfig(
                q=int(row["q"]), k=int(row["k"]), l=int(row["l"]),
                n=int(row["n"]), trials=int(row["trials"]),
                seed=int(row["seed"]), model=row.get("model", "L"),
                target=row.get("target", "span-failure"),
                g=int(row.get("g", 0) or 0),
                epsilon=Fraction(row.get("epsilon") or "1/2"),
                kappa=Fraction(row.get("kappa") or DEFAULT_KAPPA)))
    return out


def _tables_psw(out_dir: Path) -> None:
    rows = []
    for q in (2, 3):
        for k in (2, 3):
            for l in range(k, 5):
                chain = build_chain(q, k, l, "L")
                seq = ps0_sequence(chain, 30)
                for w in range(1, 31):
                    b = bound_thm_psw(q, k, l, w)
                    rows.append({
                        "q": q, "k": k, "l": l, "w": w,
                        "ps0_num": seq[w].numerator,
                        "ps0_den": seq[w].denominator,
                        "ps0": seq[w], "bound_low": b.lo, "bound_high": b.hi,
                        "branch": b.formula,
                        "ok": Fraction(seq[w]) <= b.lo})
    _write_csv(out_dir / "psw_check.csv", rows,
               ["q", "k", "l", "w", "ps0_num", "ps0_den", "ps0",
                "bound_low", "bound_high", "branch", "ok"])


def _tables_sandwich(out_dir: Path) -> None:
    rows = []
    for n in range(4, 8):
        p = exact_pn_bruteforce(2, 2, 2, n, "L")
        lo = rho(2) ** n
        hi = exact_cprime(2, 2, 2, n)
        rows.append({"q": 2, "k": 2, "l": 2, "n": n,
                     "rho_pow_n": lo, "exact_pn": p, "cprime": hi,
                     "ok": lo <= p <= hi})
    _write_csv(out_dir / "sandwich_cc.csv", rows,
               ["q", "k", "l", "n", "rho_pow_n", "exact_pn", "cprime", "ok"])


def _tables_ndecomp(out_dir: Path) -> None:
    rows = []
    for k in (2, 3):
        for l in range(k, 4):
            field = field_of_order(2)
            dual_enum = weight_enumerator_dual(
                tensor_code(simplex_code(k, field), simplex_code(l, field)))
            w_max = max(8, len(dual_enum) - 1)
            for i in range(w_max + 1):
                rows.append({
                    "q": 2, "k": k, "l": l, "i": i,
                    "n_decomp_0_i": n_decomp(2, k, l, 0, i) if i <= 8 else None,
                    "dual_weight_enum_i":
                        dual_enum[i] if i < len(dual_enum) else None})
    _write_csv(out_dir / "ndecomp_vs_dual_weights.csv", rows,
               ["q", "k", "l", "i", "n_decomp_0_i", "dual_weight_enum_i"])


def _tables_asympt(out_dir: Path) -> None:
    from .exactdist import convergence_profile
    rows = []
    for q, k, l in [(2, 2, 2), (2, 2, 3), (3, 2, 2)]:
        chain = build_chain(q, k, l, "L")
        prof = convergence_profile(chain, 60)
        for w in range(0, 61, 5):
            rows.append({"q": q, "k": k, "l": l, "w": w,
                         "deviation": prof[w]})
    _write_csv(out_dir / "asympt_profile.csv", rows,
               ["q", "k", "l", "w", "deviation"])


def cmd_tables(args) -> int:
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as e:
        print(f"error: output directory not writable: {e}", file=sys.stderr)
        return 2
    if args.campaign == "default":
        configs = default_campaign()
    else:
        configs = _parse_campaign_file(args.campaign)
    rows = verify_campaign(configs)
    extra = ["exact_pn", "sandwich_low", "sandwich_ok"]
    by_target = {"span-failure": [], "dependence": [], "dmax-exceed": [],
                 "dim-deficit": [], "dim-histogram": []}
    for row in rows:
        by_target[row["target"].split("[")[0]].append(row)
    name_of = {"span-failure": "mc_span.csv", "dependence": "mc_dependent.csv",
               "dmax-exceed": "mc_dmax.csv", "dim-deficit": "mc_gap.csv",
               "dim-histogram": "mc_hist.csv"}
    for target, target_rows in by_target.items():
        if target_rows:
            _write_csv(out_dir / name_of[target], target_rows,
                       CSV_COLUMNS + extra)
    if args.campaign == "default":
        _tables_psw(out_dir)
        _tables_sandwich(out_dir)
        _tables_ndecomp(out_dir)
        _tables_asympt(out_dir)
    violated = [r for r in rows if r["verdict"] == "violated"]
    print(f"{len(rows)} campaign rows written to {out_dir}"
          + (f"; {len(violated)} VIOLATED" if violated else "; all consistent"))
    return 3 if violated else 0


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="starprod",
        description="Star-products of random codes: exact bounds, exact "
                    "distributions, Monte Carlo verification, distinguisher.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="evaluate a closed-form bound")
    b.add_argument("--which", required=True,
                   choices=["span", "psw", "dependent", "dmax", "toy", "gap"])
    b.add_argument("--q", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("--l", type=int)
    b.add_argument("--n", type=int)
    b.add_argument("--w", type=int)
    b.add_argument("--g", type=int)
    b.add_argument("--m", type=int, help="ambient dimension (toy bound)")
    b.add_argument("--r", type=int, help="span dimension (toy bound)")
    b.add_argument("--epsilon", type=str)
    b.add_argument("--kappa", type=str)
    b.set_defaults(func=cmd_bounds)

    e = sub.add_parser("exact", help="exact rank-orbit chain quantities")
    e.add_argument("--q", type=int, required=True)
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--l", type=int, required=True)
    e.add_argument("--model", choices=["L", "R1"], default="L")
    e.add_argument("--ps0-upto", type=int, dest="ps0_upto",
                   help="table of P[s_w = 0] for w = 0..W")
    e.add_argument("--ndecomp", type=int, nargs=2, metavar=("R", "W"),
                   help="ordered rank-1 decomposition count N(r, w)")
    e.add_argument("--pn", type=int,
                   help="exact span-failure probability for n draws")
    e.set_defaults(func=cmd_exact)

    m = sub.add_parser("mc", help="Monte Carlo campaign cell")
    m.add_argument("--q", type=int, required=True)
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--l", type=int, required=True)
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--model", choices=["L", "R1", "FS", "FR"], default="L")
    m.add_argument("--trials", type=int, required=True)
    m.add_argument("--seed", type=int, required=True)
    m.add_argument("--target", default="span-failure",
                   choices=["span-failure", "dependence", "dim-deficit",
                            "dmax-exceed", "dim-histogram", "span", "dmax",
                            "gap", "hist"])
    m.add_argument("--g", type=int, default=0)
    m.add_argument("--epsilon", type=str)
    m.add_argument("--kappa", type=str)
    m.add_argument("--threads", type=int, default=1)
    m.add_argument("--out", required=True, help="CSV output path")
    m.set_defaults(func=cmd_mc)

    d = sub.add_parser("distinguish", help="square-code distinguisher")
    d.add_argument("--gen", required=True, help="generator matrix file")
    d.add_argument("--dual-dmax", action="store_true", dest="dual_dmax")
    d.set_defaults(func=cmd_distinguish)

    t = sub.add_parser("tables", help="verification campaign tables")
    t.add_argument("--campaign", default="default",
                   help="'default' or a campaign CSV file")
    t.add_argument("--out", required=True, help="output directory")
    t.set_defaults(func=cmd_tables)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GenMatrixParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except RejectionCapExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        return 4
    except (OutOfDomainError, SizeGuardError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
