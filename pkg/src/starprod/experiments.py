"""Reproducible Monte Carlo campaigns for product-code dimension events.

Four sampling models for the generator pair (G, G') of random codes:

* ``"L"``  - entries uniform (columns of G, G' may be zero); position j
  then contributes the rank <= 1 matrix p_j q_j^T with possibly-zero
  factors,
* ``"R1"`` - every column nonzero by construction, i.e. each position
  contributes a uniform rank-1 matrix,
* ``"FS"`` - the same full-support distribution as R1, but realized by
  the rejection protocol (redraw uniform matrices until no zero column;
  the achieved acceptance rate is recorded),
* ``"FR"`` - rejection until full support and full rank (uniform full
  support [n,k] x [n,l] code pairs).

Determinism contract: trials are partitioned into fixed chunks of
:data:`starprod.rng.CHUNK_TRIALS`; chunk i draws from the pinned stream
``chunk_stream(seed, i)``.  Results are therefore a pure function of
(config, seed), independent of the worker count used to run chunks.

Per-trial draw order (part of the contract):

* q = 2, n <= 63 (bit-packed path): the k rows of G as one 64-bit word
  each (low bit = column 0), then the l rows of G'.  Model R1 instead
  draws column j of G as ``1 + below(2^k - 1)`` (bit i = row i), then
  the columns of G'.
* otherwise (generic path): entries of G row-major via ``below(q)``,
  then G'.  Model R1 draws column j as the base-q digits of
  ``1 + below(q^k - 1)`` (digit i = row i).

Models FS/FR redraw whole matrices (cap 10^4 per matrix).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from scipy.stats import beta as _beta

from .bounds import (
    DEFAULT_KAPPA,
    BoundValue,
    OutOfDomainError,
    bound_gap_markov,
    bound_thm_dmax,
    bound_thm_span,
    exact_cprime,
    rho,
)
from .codes import LinearCode, dmax as code_dmax, dual as code_dual, star_power
from .exactdist import (
    MAX_PAIR_ENUM,
    SizeGuardError,
    build_chain,
    exact_pn_bruteforce,
    gap_bound_exact,
    ssw_bound_exact,
)
from .gf import field_of_order
from .linalg import MatrixGF, kernel_gf2, rank_gf2, rank_rows
from .rng import CHUNK_TRIALS, SplitMix64, chunk_stream

MODELS = ("L", "R1", "FS", "FR")
TARGETS = ("span-failure", "dependence", "dim-deficit", "dmax-exceed",
           "dim-histogram")
REJECTION_CAP = 10 ** 4
MAX_EXACT_CAMPAIGN = 1 << 24


class RejectionCapExceededError(RuntimeError):
    """Raised when FS/FR rejection fails to accept within the cap."""


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte Carlo campaign cell."""

    q: int
    k: int
    l: int
    n: int
    trials: int
    seed: int
    model: str = "L"
    target: str = "span-failure"
    g: int = 0
    epsilon: Fraction = Fraction(1, 2)
    kappa: Fraction = DEFAULT_KAPPA
    threads: int = 1
    record_intersections: bool = False

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if self.target not in TARGETS:
            raise ValueError(f"unknown target {self.target!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 1 <= self.k <= self.l:
            raise ValueError("need 1 <= k <= l")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        field_of_order(self.q)  # validates q


@dataclass(frozen=True)
class EstimateResult:
    """A campaign cell's outcome: counts, interval, matched bound."""

    config: ExperimentConfig
    successes: int
    trials: int
    estimate: Fraction
    ci_low: float
    ci_high: float
    bound: Optional[BoundValue]
    verdict: str  # "consistent" | "violated" | "no-bound"
    attempts: int
    histogram: Optional[Dict[int, int]] = None
    intersection_hist: Optional[Dict[int, int]] = None

    @property
    def acceptance_rate(self) -> Fraction:
        # accepted matrix draws / attempted matrix draws (1 unless FS/FR)
        return Fraction(2 * self.trials, self.attempts)


def clopper_pearson(successes: int, trials: int,
                    confidence: float = 0.95) -> Tuple[float, float]:
    """Exact (conservative) binomial confidence interval endpoints."""
    if not 0 <= successes <= trials:
        raise ValueError("need 0 <= successes <= trials")
    alpha = 1.0 - confidence
    lo = 0.0 if successes == 0 else float(
        _beta.ppf(alpha / 2, successes, trials - successes + 1))
    hi = 1.0 if successes == trials else float(
        _beta.ppf(1 - alpha / 2, successes + 1, trials - successes))
    return lo, hi


# ----------------------------------------------------------------------
# Samplers
# ----------------------------------------------------------------------

def _digits(v: int, base: int, width: int) -> List[int]:
    out = []
    for _ in range(width):
        out.append(v % base)
        v //= base
    return out


def sample_rank1(q: int, k: int, l: int, model: str,
                 rng: SplitMix64) -> MatrixGF:
    """One random rank <= 1 matrix: u = p q^T with uniform factors,
    including zero for model L, excluding it for model R1."""
    if model not in ("L", "R1"):
        raise ValueError("sample_rank1 supports models 'L' and 'R1'")
    field = field_of_order(q)
    if model == "L":
        p = _digits(rng.below(q ** k), q, k)
        qq = _digits(rng.below(q ** l), q, l)
    else:
        p = _digits(1 + rng.below(q ** k - 1), q, k)
        qq = _digits(1 + rng.below(q ** l - 1), q, l)
    from .linalg import outer_product
    return outer_product(field, p, qq)


def _draw_matrix_generic(rng: SplitMix64, q: int, rows: int, n: int,
                         model: str, want_full_rank: bool,
                         field) -> Tuple[List[List[int]], int]:
    """One generator matrix under the model; returns (rows, attempts)."""
    if model == "R1":
        cols = [_digits(1 + rng.below(q ** rows - 1), q, rows)
                for _ in range(n)]
        return [[cols[j][i] for j in range(n)] for i in range(rows)], 1
    attempts = 0
    while True:
        attempts += 1
        if attempts > REJECTION_CAP:
            raise RejectionCapExceededError(
                f"no acceptable matrix in {REJECTION_CAP} draws")
        mat = [[rng.below(q) for _ in range(n)] for _ in range(rows)]
        if model == "L":
            return mat, attempts
        # FS / FR: full support
        if any(all(mat[i][j] == 0 for i in range(rows)) for j in range(n)):
            continue
        if want_full_rank and rank_rows(field, [r[:] for r in mat]) < rows:
            continue
        return mat, attempts


def sample_code_pair(q: int, k: int, l: int, n: int, model: str,
                     rng: SplitMix64) -> Tuple[LinearCode, LinearCode]:
    """A random generator-matrix pair (as codes) under the model."""
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    field = field_of_order(q)
    fr = model == "FR"
    g, _ = _draw_matrix_generic(rng, q, k, n, model, fr, field)
    gp, _ = _draw_matrix_generic(rng, q, l, n, model, fr, field)
    return (LinearCode(field, MatrixGF(field, g, ncols=n)),
            LinearCode(field, MatrixGF(field, gp, ncols=n)))


# ----------------------------------------------------------------------
# Chunk runners
# ----------------------------------------------------------------------

def _draw_rows_gf2(rng: SplitMix64, rows: int, n: int, model: str,
                   want_full_rank: bool) -> Tuple[List[int], int]:
    mask = (1 << n) - 1
    if model == "R1":
        out = [0] * rows
        top = (1 << rows) - 1
        for j in range(n):
            v = 1 + rng.below(top)
            for i in range(rows):
                if (v >> i) & 1:
                    out[i] |= 1 << j
        return out, 1
    attempts = 0
    while True:
        attempts += 1
        if attempts > REJECTION_CAP:
            raise RejectionCapExceededError(
                f"no acceptable matrix in {REJECTION_CAP} draws")
        mat = [rng.next64() & mask for _ in range(rows)]
        if model == "L":
            return mat, attempts
        acc = 0
        for r in mat:
            acc |= r
        if acc != mask:
            continue
        if want_full_rank and rank_gf2(mat) < rows:
            continue
        return mat, attempts


def _tally(cfg: ExperimentConfig, dim: int, state: dict) -> None:
    m = cfg.k * cfg.l
    if cfg.target == "span-failure":
        state["successes"] += dim < m
    elif cfg.target == "dependence":
        state["successes"] += dim < cfg.n
    elif cfg.target == "dim-deficit":
        state["successes"] += dim < min(cfg.n, m) - cfg.g
    elif cfg.target == "dim-histogram":
        hist = state["histogram"]
        hist[dim] = hist.get(dim, 0) + 1


def _run_chunk(cfg: ExperimentConfig, index: int, count: int) -> dict:
    """Pure function of (config, chunk index): tallies for `count` trials."""
    rng = chunk_stream(cfg.seed, index)
    q, k, l, n = cfg.q, cfg.k, cfg.l, cfg.n
    state = {"successes": 0, "attempts": 0, "histogram": {},
             "intersections": {}}
    use_bits = q == 2 and n <= 63
    field = field_of_order(q)
    fr = cfg.model == "FR"

    for _ in range(count):
        if use_bits:
            g, a1 = _draw_rows_gf2(rng, k, n, cfg.model, fr)
            gp, a2 = _draw_rows_gf2(rng, l, n, cfg.model, fr)
            state["attempts"] += a1 + a2
            prod = [x & y for x in g for y in gp]
            dim = rank_gf2(prod)
            if cfg.target == "dmax-exceed":
                state["successes"] += _dmax_exceeds_gf2(prod, n, k + l)
            else:
                _tally(cfg, dim, state)
            if cfg.record_intersections:
                inter = rank_gf2(g) + rank_gf2(gp) - rank_gf2(g + gp)
                state["intersections"][inter] = \
                    state["intersections"].get(inter, 0) + 1
        else:
            g, a1 = _draw_matrix_generic(rng, q, k, n, cfg.model, fr, field)
            gp, a2 = _draw_matrix_generic(rng, q, l, n, cfg.model, fr, field)
            state["attempts"] += a1 + a2
            mul = field.mul
            prod = [[mul(x, y) for x, y in zip(rg, rgp)]
                    for rg in g for rgp in gp]
            if cfg.target == "dmax-exceed":
                code = LinearCode(field, MatrixGF(field, prod, ncols=n))
                state["successes"] += _dmax_exceeds_generic(code, k + l)
            else:
                dim = rank_rows(field, [r[:] for r in prod])
                _tally(cfg, dim, state)
            if cfg.record_intersections:
                ra = rank_rows(field, [r[:] for r in g])
                rb = rank_rows(field, [r[:] for r in gp])
                rab = rank_rows(field, [r[:] for r in g] + [r[:] for r in gp])
                inter = ra + rb - rab
                state["intersections"][inter] = \
                    state["intersections"].get(inter, 0) + 1
    return state


def _dmax_exceeds_gf2(prod_rows: List[int], n: int, threshold: int) -> bool:
    """Whether the dual of the product code has a word of weight >=
    threshold (false for the zero dual)."""
    basis = kernel_gf2(prod_rows, n)
    if not basis:
        return False
    best = 0
    cw = 0
    for t in range(1, 1 << len(basis)):
        idx = (t & -t).bit_length() - 1
        cw ^= basis[idx]
        w = cw.bit_count()
        if w > best:
            best = w
            if best >= threshold:
                return True
    return False


def _dmax_exceeds_generic(code: LinearCode, threshold: int) -> bool:
    d = code_dual(code)
    if d.dim == 0:
        return False
    return code_dmax(d) >= threshold


# ----------------------------------------------------------------------
# Estimation
# ----------------------------------------------------------------------

def _matched_bound(cfg: ExperimentConfig) -> Optional[BoundValue]:
    """The paper bound corresponding to the config's target, when its
    preconditions hold (None otherwise)."""
    q, k, l, n = cfg.q, cfg.k, cfg.l, cfg.n
    try:
        if cfg.target == "span-failure":
            return bound_thm_span(q, k, l, n, cfg.epsilon, cfg.kappa)
        if cfg.target == "dependence":
            if n <= k * l and q ** (k + l) <= MAX_PAIR_ENUM:
                v = ssw_bound_exact(build_chain(q, k, l, "L"), n)
                return BoundValue(lo=v, hi=v, formula="ssw_exact",
                                  vacuous=v >= 1)
            return None
        if cfg.target == "dim-deficit":
            if n >= k * l:
                return bound_gap_markov(q, k, l, n, cfg.g, cfg.epsilon,
                                        cfg.kappa)
            if q ** (k + l) <= MAX_PAIR_ENUM:
                v = gap_bound_exact(build_chain(q, k, l, "L"), n, cfg.g)
                return BoundValue(lo=v, hi=v, formula="gap_exact",
                                  vacuous=v >= 1)
            return None
        if cfg.target == "dmax-exceed":
            return bound_thm_dmax(q, k, l, n)
    except OutOfDomainError:
        return None
    return None


def estimate(cfg: ExperimentConfig) -> EstimateResult:
    """Run the campaign cell: `trials` independent trials in fixed chunks,
    a Clopper-Pearson 95% interval, and the matched bound with a verdict.

    The result is deterministic given (config, seed), whatever
    ``cfg.threads`` is.
    """
    chunks = []
    left = cfg.trials
    index = 0
    while left > 0:
        take = min(CHUNK_TRIALS, left)
        chunks.append((index, take))
        left -= take
        index += 1

    if cfg.threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            states = list(pool.map(lambda c: _run_chunk(cfg, *c), chunks))
    else:
        states = [_run_chunk(cfg, i, c) for i, c in chunks]

    successes = sum(s["successes"] for s in states)
    attempts = sum(s["attempts"] for s in states)
    histogram: Dict[int, int] = {}
    intersections: Dict[int, int] = {}
    for s in states:
        for d, c in s["histogram"].items():
            histogram[d] = histogram.get(d, 0) + c
        for d, c in s["intersections"].items():
            intersections[d] = intersections.get(d, 0) + c

    ci_low, ci_high = clopper_pearson(successes, cfg.trials)
    bound = _matched_bound(cfg)
    if cfg.target == "dim-histogram" or bound is None:
        verdict = "no-bound"
    elif Fraction(ci_low) > bound.hi:
        verdict = "violated"
    else:
        verdict = "consistent"
    return EstimateResult(
        config=cfg, successes=successes, trials=cfg.trials,
        estimate=Fraction(successes, cfg.trials),
        ci_low=ci_low, ci_high=ci_high, bound=bound, verdict=verdict,
        attempts=attempts,
        histogram=histogram if cfg.target == "dim-histogram" else None,
        intersection_hist=intersections if cfg.record_intersections else None)


# ----------------------------------------------------------------------
# Campaign tables
# ----------------------------------------------------------------------

def campaign_row(res: EstimateResult) -> Dict[str, object]:
    """Flatten an estimate into the standard report/CSV row."""
    cfg = res.config
    b = res.bound
    return {
        "q": cfg.q, "k": cfg.k, "l": cfg.l, "n": cfg.n,
        "model": cfg.model, "target": cfg.target,
        "trials": res.trials, "seed": cfg.seed,
        "successes": res.successes,
        "estimate": res.estimate,
        "ci_low": res.ci_low, "ci_high": res.ci_high,
        "bound_low": b.lo if b else None,
        "bound_high": b.hi if b else None,
        "in_param_space": b.in_param_space if b else None,
        "vacuous": b.vacuous if b else None,
        "verdict": res.verdict,
    }


def verify_campaign(configs: Sequence[ExperimentConfig]) -> List[Dict[str, object]]:
    """One report row per config; where full enumeration is feasible the
    row also carries the exact probability and the two-sided sandwich
    check rho^n <= P(n) <= exact_cprime (for spanning targets)."""
    rows = []
    for cfg in configs:
        res = estimate(cfg)
        row = campaign_row(res)
        row["exact_pn"] = None
        row["sandwich_low"] = None
        row["sandwich_ok"] = None
        feasible = (cfg.q ** (cfg.k + cfg.l)) ** cfg.n <= MAX_EXACT_CAMPAIGN
        if feasible and cfg.model == "L" and cfg.target in (
                "span-failure", "dependence"):
            try:
                exact = exact_pn_bruteforce(cfg.q, cfg.k, cfg.l, cfg.n, "L")
            except SizeGuardError:
                exact = None
            if exact is not None and cfg.target == "span-failure" \
                    and cfg.n >= cfg.k * cfg.l:
                low = rho(cfg.q) ** cfg.n
                high = exact_cprime(cfg.q, cfg.k, cfg.l, cfg.n)
                row["exact_pn"] = exact
                row["sandwich_low"] = low
                row["sandwich_ok"] = low <= exact <= high
            elif exact is not None:
                row["exact_pn"] = exact
        rows.append(row)
    return rows


def default_campaign(trials_q2: int = 20000, trials_q3: int = 4000,
                     seed: int = 20240601) -> List[ExperimentConfig]:
    """The desk-scale verification grid: q in {2, 3}, k <= 3, l <= 4,
    n around kl, one cell per target/theorem family."""
    out = []
    shapes = [(2, 2), (2, 3), (3, 3), (3, 4)]
    for q in (2, 3):
        trials = trials_q2 if q == 2 else trials_q3
        for k, l in shapes:
            m = k * l
            for n in (m, m + 2, m + 4):
                out.append(ExperimentConfig(
                    q=q, k=k, l=l, n=n, trials=trials, seed=seed,
                    model="L", target="span-failure"))
            for n in (max(2, m - 3), m - 1):
                out.append(ExperimentConfig(
                    q=q, k=k, l=l, n=n, trials=trials, seed=seed,
                    model="L", target="dependence"))
            if k + l <= m - 1:
                out.append(ExperimentConfig(
                    q=q, k=k, l=l, n=m - 1, trials=min(trials, 10000),
                    seed=seed, model="L", target="dmax-exceed"))
    return out


# ----------------------------------------------------------------------
# Square-code distinguisher
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DistinguisherReport:
    n: int
    dim: int
    dim_square: int
    expected: int
    deficit: int
    verdict: str  # "structured" | "random-like"
    dual_dmax: Optional[int] = None
    dual_dmax_threshold: Optional[int] = None


def distinguish(code: LinearCode, dual_dmax: bool = False) -> DistinguisherReport:
    """Square-code dimension test: a random [n,k] code has
    dim C*C = min(n, k(k+1)/2) with high probability, so any deficit
    flags hidden multiplicative structure.  (For dim <= 1 codes the
    expected and actual dimensions coincide trivially; the verdict is
    then vacuously "random-like".)"""
    k = code.dim
    square = star_power(code, 2)
    expected = min(code.n, k * (k + 1) // 2)
    deficit = expected - square.dim
    report = DistinguisherReport(
        n=code.n, dim=k, dim_square=square.dim, expected=expected,
        deficit=deficit,
        verdict="structured" if deficit > 0 else "random-like")
    if dual_dmax:
        d = code_dual(square)
        value = None
        if d.dim > 0 and code.field.q ** d.dim <= MAX_EXACT_CAMPAIGN:
            value = code_dmax(d)
        report = replace(report, dual_dmax=value,
                         dual_dmax_threshold=2 * k)
    return report
