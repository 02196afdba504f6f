"""Closed-form counting quantities and probability bounds, evaluated
exactly.

Everything rational is computed with exact big-rational arithmetic.
The one irrational constant, the infinite product
``C_q = prod_{j>=1} (1 - q^-j)^-1``, is returned as a certified rational
interval (partial product below, partial product times a rational tail
bound above), and every bound containing it propagates the interval.
Square roots (needed when an exponent kw/2 is half-integral) are also
certified rational intervals.  "Bound satisfied" checks against these
intervals are therefore rigorous, never floating point.

Probability bounds larger than 1 are returned as-is with a ``vacuous``
flag; parameter pairs outside the admissible space P(epsilon, kappa) get
``in_param_space=False`` rather than an error, so campaigns can chart
where the theorems' hypotheses bite.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .gf import field_of_order
from .linalg import MatrixGF, projective_reps

DEFAULT_KAPPA = Fraction(23, 100)
DEFAULT_PRECISION = Fraction(1, 10 ** 12)


class OutOfDomainError(ValueError):
    """Raised when arguments violate a hard precondition of a formula."""


@dataclass(frozen=True)
class BoundValue:
    """A certified interval [lo, hi] containing the value of a formula.

    ``vacuous`` marks probability bounds whose certified lower end is
    already >= 1 (the bound then says nothing).  ``in_param_space`` is
    None when no admissibility condition applies, otherwise it records
    whether the theorem actually asserts the bound for these parameters.
    """

    lo: Fraction
    hi: Fraction
    formula: str
    vacuous: bool = False
    in_param_space: Optional[bool] = None

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def midpoint(self) -> float:
        return float((self.lo + self.hi) / 2)

    def __float__(self) -> float:
        return self.midpoint


def _prob_bound(lo: Fraction, hi: Fraction, formula: str,
                in_param_space: Optional[bool] = None) -> BoundValue:
    return BoundValue(lo=lo, hi=hi, formula=formula, vacuous=lo >= 1,
                      in_param_space=in_param_space)


# ----------------------------------------------------------------------
# Counting quantities
# ----------------------------------------------------------------------

def gaussian_binomial(m: int, r: int, q: int) -> int:
    """Number of r-dimensional subspaces of GF(q)^m (0 if r outside 0..m)."""
    if r < 0 or r > m:
        return 0
    value = Fraction(1)
    for j in range(1, r + 1):
        value *= Fraction(q ** (m - r + j) - 1, q ** j - 1)
    assert value.denominator == 1
    return value.numerator


def gl_order(r: int, q: int) -> int:
    """Order of the group of invertible r x r matrices over GF(q)."""
    out = 1
    for i in range(r):
        out *= q ** r - q ** i
    return out


def count_rank(k: int, l: int, r: int, q: int) -> int:
    """Number of k x l matrices over GF(q) of rank exactly r."""
    if r < 0 or r > min(k, l):
        raise OutOfDomainError(f"rank {r} not in 0..min({k},{l})")
    return gaussian_binomial(k, r, q) * gaussian_binomial(l, r, q) * gl_order(r, q)


def c_q(q: int, precision: Fraction = DEFAULT_PRECISION) -> BoundValue:
    """The constant prod_{j>=1} (1 - q^-j)^-1 as a certified interval of
    absolute width <= precision.

    The tail prod_{j>J} (1-q^-j)^-1 is at most 1/(1 - 2 q^-J/(q-1))
    (each factor is <= 1 + 2 q^-j, and prod(1+a_j) <= 1/(1-sum a_j)).
    """
    if q < 2:
        raise OutOfDomainError("q must be >= 2")
    precision = Fraction(precision)
    partial = Fraction(1)
    j = 0
    while True:
        j += 1
        partial *= Fraction(q ** j, q ** j - 1)
        tail_sum = Fraction(2, q ** j * (q - 1))
        if tail_sum < 1:
            hi = partial / (1 - tail_sum)
            if hi - partial <= precision:
                return BoundValue(lo=partial, hi=hi, formula="c_q")


def hyperplane_prob(q: int, r: int) -> Fraction:
    """Probability that a random rank <= 1 matrix (uniform factor model)
    lies in the kernel of a rank-r linear form: (1/q)(1 + (q-1)/q^r)."""
    if r < 0:
        raise OutOfDomainError("rank must be >= 0")
    return Fraction(1, q) * (1 + Fraction(q - 1, q ** r))


def rho(q: int) -> Fraction:
    """The worst-hyperplane probability (1/q)(1 + (q-1)/q), i.e. the
    rank-1 value of hyperplane_prob."""
    return hyperplane_prob(q, 1)


def c_doubleprime(q: int, epsilon: Fraction,
                  precision: Fraction = DEFAULT_PRECISION) -> BoundValue:
    """(q C_q / (q-1)^2) (1 + 1/(1-epsilon))."""
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise OutOfDomainError("epsilon must be in (0,1)")
    cq = c_q(q, precision)
    factor = Fraction(q, (q - 1) ** 2) * (1 + 1 / (1 - epsilon))
    return BoundValue(lo=cq.lo * factor, hi=cq.hi * factor, formula="c''")


def exact_cprime(q: int, k: int, l: int, n: int) -> Fraction:
    """The exact union-bound sum over hyperplanes of the matrix space,
    grouped by the rank of the defining form:

        sum_{r=1..min(k,l)} count_rank(k,l,r,q)/(q-1) * hyperplane_prob(q,r)^n

    (count/(q-1) because proportional forms cut the same hyperplane).
    With n = kl this is the constant c' of the sandwich corollary; with
    general exponent n it is the full union bound on the probability of
    n random rank <= 1 matrices not spanning."""
    if n < 1:
        raise OutOfDomainError("exponent n must be >= 1")
    total = Fraction(0)
    for r in range(1, min(k, l) + 1):
        total += Fraction(count_rank(k, l, r, q), q - 1) * hyperplane_prob(q, r) ** n
    return total


# ----------------------------------------------------------------------
# Admissible parameter space
# ----------------------------------------------------------------------

_CMP_PREC = 96


def _interval_mul(alo, ahi, ae, blo, bhi, be):
    lo, hi, e = alo * blo, ahi * bhi, ae + be
    s = hi.bit_length() - _CMP_PREC
    if s > 0:
        lo >>= s
        hi = (hi >> s) + 1
        e += s
    return lo, hi, e


def _interval_pow(base: int, exp: int):
    """Certified interval [lo*2^e, hi*2^e] containing base^exp."""
    rlo, rhi, re = 1, 1, 0
    blo, bhi, be = base, base, 0
    while exp:
        if exp & 1:
            rlo, rhi, re = _interval_mul(rlo, rhi, re, blo, bhi, be)
        exp >>= 1
        if exp:
            blo, bhi, be = _interval_mul(blo, bhi, be, blo, bhi, be)
    return rlo, rhi, re


def _pow_ge(base_a: int, exp_a: int, base_b: int, exp_b: int) -> bool:
    """Decide base_a^exp_a >= base_b^exp_b exactly.

    Fast path: truncated-integer interval powering (pure integer
    arithmetic with directed rounding).  If the intervals overlap the
    comparison falls back to full cross-multiplication of exact powers.
    """
    alo, ahi, ae = _interval_pow(base_a, exp_a)
    blo, bhi, be = _interval_pow(base_b, exp_b)

    def ge(x, ex, y, ey):
        d = ex - ey
        return (x << d) >= y if d >= 0 else x >= (y << -d)

    if ge(alo, ae, bhi, be):
        return True
    if not ge(ahi, ae, blo, be):
        return False
    return base_a ** exp_a >= base_b ** exp_b


def kappa_valid(q: int, kappa: Fraction) -> bool:
    """Whether q^((1-kappa)^2) >= 1 + (q-1)/q, the admissibility
    condition on kappa.  Decided exactly: with kappa = a/b the condition
    is q^((b-a)^2 + b^2) >= (2q-1)^(b^2), an integer comparison."""
    kappa = Fraction(kappa)
    if kappa <= 0:
        raise OutOfDomainError("kappa must be > 0")
    a, b = kappa.numerator, kappa.denominator
    return _pow_ge(q, (b - a) ** 2 + b * b, 2 * q - 1, b * b)


def param_space_member(k: int, l: int, q: int, epsilon: Fraction,
                       kappa: Fraction) -> bool:
    """Membership of (k, l) in the admissible space
    {2 <= k <= l <= epsilon q^(kappa k) / ((q-1) k)}, decided by exact
    integer cross-multiplication."""
    epsilon = Fraction(epsilon)
    kappa = Fraction(kappa)
    if not (2 <= k <= l):
        return False
    a, b = kappa.numerator, kappa.denominator
    lhs = (l * (q - 1) * k * epsilon.denominator) ** b
    rhs = epsilon.numerator ** b * q ** (a * k)
    return lhs <= rhs


# ----------------------------------------------------------------------
# Theorem bounds
# ----------------------------------------------------------------------

def bound_thm_span(q: int, k: int, l: int, n: int, epsilon: Fraction,
                   kappa: Fraction = DEFAULT_KAPPA,
                   precision: Fraction = DEFAULT_PRECISION) -> BoundValue:
    """Upper bound c'' rho^(n-kl) on the probability that n random
    rank <= 1 matrices (equivalently, the product of random [n,k] and
    [n,l] codes) fail to span the full kl-dimensional space, n >= kl."""
    if n < k * l:
        raise OutOfDomainError(f"requires n >= k*l, got n={n} < {k * l}")
    cpp = c_doubleprime(q, epsilon, precision)
    factor = rho(q) ** (n - k * l)
    in_p = kappa_valid(q, kappa) and param_space_member(k, l, q, epsilon, kappa)
    return _prob_bound(cpp.lo * factor, cpp.hi * factor, "thm_span", in_p)


def _inv_q_pow_half(q: int, num: int, bits: int = 64):
    """Certified interval for q^(-num/2)."""
    if num % 2 == 0:
        v = Fraction(1, q ** (num // 2))
        return v, v
    s = math.isqrt(q << (2 * bits))
    sqrt_lo = Fraction(s, 1 << bits)
    sqrt_hi = Fraction(s + 1, 1 << bits)
    base = Fraction(1, q ** ((num - 1) // 2))
    return base / sqrt_hi, base / sqrt_lo


def bound_thm_psw(q: int, k: int, l: int, w: int,
                  precision: Fraction = DEFAULT_PRECISION) -> BoundValue:
    """Upper bound on the probability that a sum of w random rank <= 1
    matrices is zero:

    * 1 <= w < k+l:   (2 q C_q / (q-1)) / q^(kw/2)
    * w >= k+l:       C_q (1 - q^-(w-l))^-1 / q^(kl)
    """
    if k > l:
        raise OutOfDomainError("requires k <= l")
    if w < 1:
        raise OutOfDomainError("requires w >= 1")
    cq = c_q(q, precision)
    if w < k + l:
        front = Fraction(2 * q, q - 1)
        half_lo, half_hi = _inv_q_pow_half(q, k * w)
        return _prob_bound(front * cq.lo * half_lo, front * cq.hi * half_hi,
                           "thm_psw_i")
    factor = Fraction(1, q ** (k * l)) / (1 - Fraction(1, q ** (w - l)))
    return _prob_bound(cq.lo * factor, cq.hi * factor, "thm_psw_ii")


def bound_thm_dependent(q: int, k: int, l: int, n: int, epsilon: Fraction,
                        precision: Fraction = DEFAULT_PRECISION) -> BoundValue:
    """Upper bound (q C_q/(q-1)^2)(2 eps/(1-eps) + q^-(kl-n)) on the
    probability that n <= kl random rank <= 1 matrices are linearly
    dependent (equivalently dim C*C' < n); admissible space uses
    kappa = 1/2."""
    epsilon = Fraction(epsilon)
    if n > k * l:
        raise OutOfDomainError(f"requires n <= k*l, got n={n} > {k * l}")
    if not 0 < epsilon < 1:
        raise OutOfDomainError("epsilon must be in (0,1)")
    cq = c_q(q, precision)
    factor = Fraction(q, (q - 1) ** 2) * (
        2 * epsilon / (1 - epsilon) + Fraction(1, q ** (k * l - n)))
    in_p = param_space_member(k, l, q, epsilon, Fraction(1, 2))
    return _prob_bound(cq.lo * factor, cq.hi * factor, "thm_dependent", in_p)


def bound_thm_dmax(q: int, k: int, l: int, n: int,
                   precision: Fraction = DEFAULT_PRECISION) -> BoundValue:
    """Unconditional upper bound (q C_q/(q-1)^2) q^-(kl-n) on the
    probability that the dual of the product code has a codeword of
    weight >= k+l; requires k+l <= n <= kl."""
    if not k + l <= n <= k * l:
        raise OutOfDomainError(f"requires k+l <= n <= k*l, got n={n}")
    cq = c_q(q, precision)
    factor = Fraction(q, (q - 1) ** 2) / q ** (k * l - n)
    return _prob_bound(cq.lo * factor, cq.hi * factor, "thm_dmax")


def bound_prop_toy(q: int, m: int, n: int, r: int,
                   precision: Fraction = DEFAULT_PRECISION) -> BoundValue:
    """For n uniform random vectors of GF(q)^m: upper bound
    C_q q^(-(n-r)(m-r)) on the probability their span has dim <= r."""
    if not 0 <= r <= min(m, n):
        raise OutOfDomainError("requires 0 <= r <= min(m, n)")
    cq = c_q(q, precision)
    factor = Fraction(1, q ** ((n - r) * (m - r)))
    return _prob_bound(cq.lo * factor, cq.hi * factor, "prop_toy")


def bound_gap_markov(q: int, k: int, l: int, n: int, g: int,
                     epsilon: Optional[Fraction] = None,
                     kappa: Fraction = DEFAULT_KAPPA) -> BoundValue:
    """Upper bound c' rho^(n-kl) (q-1)/(q^(g+1)-1) on the probability
    that the span of n random rank <= 1 matrices misses dimension kl by
    more than g.  Uses the exact c' (exact_cprime at exponent kl), so the
    value is an exact rational; epsilon only feeds the informational
    admissibility flag (the inequality itself needs no such hypothesis)."""
    if g < 0:
        raise OutOfDomainError("gap must be >= 0")
    m = k * l
    value = exact_cprime(q, k, l, m) * rho(q) ** (n - m) \
        * Fraction(q - 1, q ** (g + 1) - 1)
    in_p = None
    if epsilon is not None:
        in_p = kappa_valid(q, kappa) and param_space_member(k, l, q, epsilon, kappa)
    return _prob_bound(value, value, "gap_markov", in_p)


# ----------------------------------------------------------------------
# Star-power dimension ceiling
# ----------------------------------------------------------------------

def chi_q(k: int, s: int, q: int) -> int:
    """True ceiling for the dimension of the s-th star power of a
    k-dimensional code: the rank of the matrix of all degree-s monomials
    in k variables evaluated at the canonical projective points of
    GF(q)^k.  Equals C(k+s-1, s) when s <= q and is strictly smaller
    when s > q."""
    if k < 1 or s < 1:
        raise OutOfDomainError("requires k >= 1 and s >= 1")
    field = field_of_order(q)
    if q ** k > (1 << 26):
        raise OutOfDomainError(f"q^k = {q}^{k} exceeds enumeration guard")
    pts = projective_reps(field, k)
    rows = []
    for combo in itertools.combinations_with_replacement(range(k), s):
        row = []
        for pt in pts:
            v = 1
            for i in combo:
                v = field.mul(v, pt[i])
            row.append(v)
        rows.append(row)
    return MatrixGF(field, rows, ncols=len(pts)).rank()
