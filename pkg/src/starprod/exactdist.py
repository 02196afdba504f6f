"""Exact distribution of sums of random rank <= 1 matrices.

The running sum s_w = u_1 + ... + u_w of iid rank <= 1 matrices is a
random walk on GF(q)^(k x l).  Its distribution, projected onto rank
classes, is again a Markov chain: the distribution of each u is
invariant under left/right multiplication by invertible matrices, so
the transition probability out of a matrix M depends only on rank(M).
The library does not prove this lumpability; it validates it against a
full state-space walk in the test suite, and each transition row is
computed at the canonical block-identity representative of its rank
(tests spot-check invariance under random GL x GL conjugation).

Everything in this module is exact big-integer / big-rational
arithmetic; no floating point.  Chain powering keeps an integer vector
over the common denominator q^((k+l)w), so no gcd reductions happen in
the loop.

Two factor models are supported:

* ``"L"``  - factors uniform including zero (the sum then hits the zero
  matrix with positive probability at every step),
* ``"R1"`` - factors uniform nonzero, i.e. each u is a uniform rank-1
  matrix.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from .gf import GF, field_of_order
from .linalg import projective_reps, rank_rows as _rank_rows

MAX_PAIR_ENUM = 1 << 26
MAX_OUTCOME_ENUM = 1 << 28

Model = str  # "L" or "R1"


class SizeGuardError(ValueError):
    """Raised when an enumeration exceeds its configured guard."""


def _check_model(model: str) -> str:
    if model not in ("L", "R1"):
        raise ValueError(f"model must be 'L' or 'R1', got {model!r}")
    return model


@dataclass(frozen=True)
class RankOrbitChain:
    """Exact transition kernel of the rank-orbit walk for GF(q)^(k x l).

    ``counts[r][r']`` is the number of factor outcomes moving a matrix of
    rank r to rank r' (out of ``denom`` outcomes per step); ``transition``
    holds the same data as reduced fractions.  ``orbit_sizes[r]`` is the
    number of k x l matrices of rank r.
    """

    q: int
    k: int
    l: int
    model: str
    counts: Tuple[Tuple[int, ...], ...]
    denom: int
    transition: Tuple[Tuple[Fraction, ...], ...]
    orbit_sizes: Tuple[int, ...]


def _representative(k: int, l: int, r: int) -> List[List[int]]:
    return [[1 if (i == j and i < r) else 0 for j in range(l)] for i in range(k)]


def _transition_row(field: GF, k: int, l: int, rep: List[List[int]],
                    model: str) -> List[int]:
    """Tally rank(rep + p q^T) over all factor pairs of the model."""
    q = field.q
    add, mul = field.add, field.mul
    counts = [0] * (min(k, l) + 1)
    p_iter = itertools.product(range(q), repeat=k)
    for p in p_iter:
        if model == "R1" and not any(p):
            continue
        for qq in itertools.product(range(q), repeat=l):
            if model == "R1" and not any(qq):
                continue
            rows = [[add(rep[i][j], mul(p[i], qq[j])) for j in range(l)]
                    for i in range(k)]
            counts[_rank_rows(field, rows)] += 1
    return counts


def build_chain(q: int, k: int, l: int, model: Model = "L") -> RankOrbitChain:
    """Build the exact kernel by enumerating every factor pair against one
    canonical block-identity representative per rank."""
    _check_model(model)
    if k > l:
        raise ValueError(f"requires k <= l, got ({k}, {l})")
    if q ** (k + l) > MAX_PAIR_ENUM:
        raise SizeGuardError(f"q^(k+l) = {q}^{k + l} exceeds pair-enumeration guard")
    field = field_of_order(q)
    denom = q ** (k + l) if model == "L" else (q ** k - 1) * (q ** l - 1)
    counts = []
    for r in range(k + 1):
        row = _transition_row(field, k, l, _representative(k, l, r), model)
        assert sum(row) == denom, "transition row must exhaust all outcomes"
        for rp, c in enumerate(row):
            # adding a rank <= 1 matrix moves the rank by at most 1
            assert c == 0 or abs(rp - r) <= 1, "rank-jump locality violated"
        counts.append(tuple(row))
    from .bounds import count_rank
    orbit_sizes = tuple(count_rank(k, l, r, q) for r in range(k + 1))
    transition = tuple(tuple(Fraction(c, denom) for c in row) for row in counts)
    return RankOrbitChain(q=q, k=k, l=l, model=model, counts=tuple(counts),
                          denom=denom, transition=transition,
                          orbit_sizes=orbit_sizes)


def _walk_int(chain: RankOrbitChain, w: int):
    """Yield integer state vectors v_0, ..., v_w with common denominators
    denom^0, ..., denom^w; v_i[r] / denom^i = P[rank(s_i) = r]."""
    dim = chain.k + 1
    counts = chain.counts
    v = [1] + [0] * (dim - 1)
    yield v
    for _ in range(w):
        v = [sum(v[i] * counts[i][j] for i in range(dim)) for j in range(dim)]
        yield v


def exact_ps0(chain: RankOrbitChain, w: int) -> Fraction:
    """P[s_w = 0], exactly (equals 1 at w = 0)."""
    if w < 0:
        raise ValueError("w must be >= 0")
    for i, v in enumerate(_walk_int(chain, w)):
        if i == w:
            return Fraction(v[0], chain.denom ** w)
    raise AssertionError("unreachable")


def ps0_sequence(chain: RankOrbitChain, w_max: int) -> List[Fraction]:
    """[P[s_0 = 0], ..., P[s_wmax = 0]] in one powering pass."""
    return [Fraction(v[0], chain.denom ** i)
            for i, v in enumerate(_walk_int(chain, w_max))]


def rank_distribution(chain: RankOrbitChain, w: int) -> List[Fraction]:
    """Distribution of rank(s_w) over 0..min(k,l)."""
    for i, v in enumerate(_walk_int(chain, w)):
        if i == w:
            d = chain.denom ** w
            return [Fraction(x, d) for x in v]
    raise AssertionError("unreachable")


def convergence_profile(chain: RankOrbitChain, w_max: int) -> List[Fraction]:
    """|P[s_w = 0] - q^-(kl)| for w = 0..w_max.  The walk is irreducible
    and aperiodic on the full matrix space (the rank <= 1 set contains 0
    and spans), so the deviation tends to 0 geometrically."""
    target = Fraction(1, chain.q ** (chain.k * chain.l))
    return [abs(p - target) for p in ps0_sequence(chain, w_max)]


def ssw_bound_exact(chain: RankOrbitChain, n: int) -> Fraction:
    """Exact union bound over linear relations (counted up to
    proportionality) on the probability that n draws are dependent:

        sum_{w=1..n} C(n,w) (q-1)^(w-1) P[s_w = 0].
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    q = chain.q
    ps0 = ps0_sequence(chain, n)
    return sum((math.comb(n, w) * (q - 1) ** (w - 1) * ps0[w]
                for w in range(1, n + 1)), Fraction(0))


def gap_bound_exact(chain: RankOrbitChain, n: int, g: int) -> Fraction:
    """Exact Markov-inequality bound on P[dim span < n - g]:

        (q^(g+1) - 1)^-1 sum_{w=1..n} C(n,w) (q-1)^w P[s_w = 0].
    """
    if n < 1 or g < 0:
        raise ValueError("need n >= 1 and g >= 0")
    q = chain.q
    ps0 = ps0_sequence(chain, n)
    total = sum((math.comb(n, w) * (q - 1) ** w * ps0[w]
                 for w in range(1, n + 1)), Fraction(0))
    return total / (q ** (g + 1) - 1)


# ----------------------------------------------------------------------
# Ordered rank-1 decomposition counts
# ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def _decomp_kernel(q: int, k: int, l: int) -> Tuple[Tuple[int, ...], ...]:
    """K[r][r'] = number of rank-1 matrices u with rank(M_r - u) = r'."""
    if k > l:
        raise ValueError(f"requires k <= l, got ({k}, {l})")
    if q ** (k + l) > MAX_PAIR_ENUM:
        raise SizeGuardError(f"q^(k+l) = {q}^{k + l} exceeds pair-enumeration guard")
    field = field_of_order(q)
    sub, mul = field.sub, field.mul
    # each rank-1 u exactly once: p over projective representatives,
    # second factor over nonzero vectors
    preps = projective_reps(field, k)
    rows = []
    for r in range(k + 1):
        rep = _representative(k, l, r)
        row = [0] * (k + 1)
        for p in preps:
            for qq in itertools.product(range(q), repeat=l):
                if not any(qq):
                    continue
                m = [[sub(rep[i][j], mul(p[i], qq[j])) for j in range(l)]
                     for i in range(k)]
                row[_rank_rows(field, m)] += 1
        rows.append(tuple(row))
    return tuple(rows)


def n_decomp(q: int, k: int, l: int, r: int, w: int) -> int:
    """Number of ways to write a rank-r matrix in GF(q)^(k x l) as an
    ordered sum of w matrices of rank exactly 1 (well defined: the count
    is the same for every matrix of that rank)."""
    if not 0 <= r <= min(k, l):
        raise ValueError(f"rank {r} not in 0..min(k,l)")
    if w < 0:
        raise ValueError("w must be >= 0")
    kernel = _decomp_kernel(q, k, l)
    # N(r, 0) = [r == 0]; N(r, w) = sum_{r'} K[r][r'] N(r', w-1)
    current = [1 if rr == 0 else 0 for rr in range(k + 1)]
    for _ in range(w):
        current = [sum(kernel[rr][rp] * current[rp] for rp in range(k + 1))
                   for rr in range(k + 1)]
    return current[r]


# ----------------------------------------------------------------------
# Exhaustive span-failure probability (the independent oracle)
# ----------------------------------------------------------------------

def _support(q: int, k: int, l: int, model: str):
    """Distinct values of u = p q^T with multiplicities over the model's
    factor outcomes.  Returns (list of (vec, weight), total weight)."""
    field = field_of_order(q)
    mul = field.mul
    weights: Dict[Tuple[int, ...], int] = {}
    for p in itertools.product(range(q), repeat=k):
        if model == "R1" and not any(p):
            continue
        for qq in itertools.product(range(q), repeat=l):
            if model == "R1" and not any(qq):
                continue
            u = tuple(mul(pi, qj) for pi in p for qj in qq)
            weights[u] = weights.get(u, 0) + 1
    total = q ** (k + l) if model == "L" else (q ** k - 1) * (q ** l - 1)
    assert sum(weights.values()) == total
    return list(weights.items()), total


class _SpanStates:
    """Lazily discovered span subspaces with per-state transitions.

    A state is the canonical RREF basis (tuple of pivot-normalized,
    fully reduced rows).  Grouping enumeration paths by their current
    span makes the exhaustive outcome walk tractable while remaining an
    exact regrouping of the full factor-tuple enumeration (the test
    suite compares it against the literal tuple loop on tiny cases).
    """

    def __init__(self, field: GF, support, dim_ambient: int):
        self.field = field
        self.support = support
        self.dim_ambient = dim_ambient
        self.keys: List[Tuple[Tuple[int, ...], ...]] = [()]
        self.index: Dict[Tuple[Tuple[int, ...], ...], int] = {(): 0}
        self.transitions: List[List[Tuple[int, int]]] = []  # sid -> [(next,w)]
        self.dims: List[int] = [0]

    def _reduce(self, basis, u):
        f = self.field
        u = list(u)
        for row in basis:
            pivot = next(i for i, x in enumerate(row) if x)
            if u[pivot]:
                coef = u[pivot]
                u = [f.sub(x, f.mul(coef, y)) for x, y in zip(u, row)]
        return u

    def _extend(self, basis, u):
        f = self.field
        res = self._reduce(basis, u)
        if not any(res):
            return None
        pivot = next(i for i, x in enumerate(res) if x)
        inv = f.inv(res[pivot])
        if inv != 1:
            res = [f.mul(inv, x) for x in res]
        new_rows = []
        for row in basis:
            if row[pivot]:
                coef = row[pivot]
                row = tuple(f.sub(x, f.mul(coef, y)) for x, y in zip(row, res))
            new_rows.append(row)
        new_rows.append(tuple(res))
        new_rows.sort(key=lambda row: next(i for i, x in enumerate(row) if x))
        return tuple(new_rows)

    def transitions_of(self, sid: int):
        while len(self.transitions) <= sid:
            basis = self.keys[len(self.transitions)]
            out = []
            for u, w in self.support:
                nxt = self._extend(basis, u)
                if nxt is None:
                    out.append((len(self.transitions), w))  # stays put
                else:
                    if nxt not in self.index:
                        self.index[nxt] = len(self.keys)
                        self.keys.append(nxt)
                        self.dims.append(len(nxt))
                    out.append((self.index[nxt], w))
            self.transitions.append(out)
        return self.transitions[sid]


def exact_pn_bruteforce(q: int, k: int, l: int, n: int,
                        model: Model = "L") -> Fraction:
    """Exact P[dim span(u_1, ..., u_n) < min(n, kl)] by exhausting all
    factor-tuple outcomes (grouped by the span of the prefix; tiny
    instances only)."""
    _check_model(model)
    if n < 0:
        raise ValueError("n must be >= 0")
    if n and (q ** (k + l)) ** n > MAX_OUTCOME_ENUM:
        raise SizeGuardError(
            f"(q^(k+l))^n = ({q}^{k + l})^{n} exceeds outcome-enumeration guard")
    if n == 0:
        return Fraction(0)
    field = field_of_order(q)
    support, total = _support(q, k, l, model)
    m = k * l
    states = _SpanStates(field, support, m)

    if n <= m:
        # failure the moment a draw lands inside the current span
        memo: Dict[int, Fraction] = {}

        def fail_prob(sid: int, depth: int) -> Fraction:
            # along explored paths dim == depth, so depth is implied by sid
            if depth == n:
                return Fraction(0)
            if sid in memo:
                return memo[sid]
            acc = Fraction(0)
            for nxt, w in states.transitions_of(sid):
                if nxt == sid:
                    acc += Fraction(w, total)
                else:
                    acc += Fraction(w, total) * fail_prob(nxt, depth + 1)
            memo[sid] = acc
            return acc

        return fail_prob(0, 0)

    # n > m: failure iff the final span is still proper
    memo2: Dict[Tuple[int, int], Fraction] = {}

    def fail_prob2(sid: int, depth: int) -> Fraction:
        if states.dims[sid] == m:
            return Fraction(0)
        if depth == n:
            return Fraction(1)
        key = (sid, depth)
        if key in memo2:
            return memo2[key]
        acc = Fraction(0)
        for nxt, w in states.transitions_of(sid):
            acc += Fraction(w, total) * fail_prob2(nxt, depth + 1)
        memo2[key] = acc
        return acc

    return fail_prob2(0, 0)
