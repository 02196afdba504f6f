"""Linear codes over GF(q): componentwise (star) products and powers,
duals, distance statistics, and general-position profiles.

A code is the row space of a generator matrix that is *not* required to
have full rank; the dimension is always the rank, cached at first use.
Codes are immutable values.

Distance statistics (`dmin`, `dmax`, `weight_enumerator`) enumerate all
q^dim codewords behind a hard size guard.  Exhaustive enumeration is
deliberate: the library targets desk-scale parameters and exhaustiveness
doubles as its own oracle.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence, Tuple

from .gf import GF
from .linalg import (
    MatrixGF,
    outer_product,
    pack_rows_gf2,
    projective_reps,
    row_space_equal,
    vec,
)

MAX_CODEWORDS = 1 << 26


class CodeTooLargeError(ValueError):
    """Raised when q^dim exceeds the codeword enumeration guard."""


class ZeroCodeError(ValueError):
    """Raised for distance statistics of the zero code."""


class LinearCode:
    """A linear code given by (the row space of) a generator matrix."""

    __slots__ = ("field", "n", "gen", "_dim", "_basis")

    def __init__(self, field: GF, gen: MatrixGF | Sequence[Sequence[int]],
                 n: int | None = None):
        if not isinstance(gen, MatrixGF):
            gen = MatrixGF(field, gen, ncols=n)
        if gen.field != field:
            raise ValueError("generator field mismatch")
        if n is not None and gen.ncols != n:
            raise ValueError(f"length {n} != generator width {gen.ncols}")
        self.field = field
        self.n = gen.ncols
        self.gen = gen
        self._dim = None
        self._basis = None

    @property
    def dim(self) -> int:
        if self._dim is None:
            self._dim = self.gen.rank()
        return self._dim

    def basis(self) -> MatrixGF:
        """Canonical (RREF) basis matrix of the code, dim rows."""
        if self._basis is None:
            self._basis = self.gen.row_basis()
            self._dim = self._basis.nrows
        return self._basis

    def __eq__(self, other) -> bool:
        return (isinstance(other, LinearCode) and self.field == other.field
                and self.n == other.n and row_space_equal(self.gen, other.gen))

    def __hash__(self) -> int:
        return hash((self.field, self.n, self.basis().rows))

    def __repr__(self) -> str:
        return f"LinearCode[{self.n},{self.dim}] over {self.field}"

    def contains(self, other: "LinearCode") -> bool:
        from .linalg import stack
        if self.field != other.field or self.n != other.n:
            raise ValueError("field/length mismatch")
        return stack(self.gen, other.gen).rank() == self.dim

    def codewords(self):
        """Yield all q^dim codewords (tuples).  Guarded by MAX_CODEWORDS."""
        f = self.field
        basis = self.basis().rows
        k = len(basis)
        if f.q ** k > MAX_CODEWORDS:
            raise CodeTooLargeError(f"q^dim = {f.q}^{k} exceeds enumeration guard")
        n = self.n
        cw = [0] * n
        digits = [0] * k
        yield tuple(cw)
        total = f.q ** k
        for _ in range(total - 1):
            # mixed-radix odometer; on each digit change add the delta
            # (new - old scalar) times the corresponding basis row
            d = 0
            while digits[d] == f.q - 1:
                delta = f.neg(f.q - 1)  # 0 - (q-1) as field elements
                row = basis[d]
                for j in range(n):
                    if row[j]:
                        cw[j] = f.add(cw[j], f.mul(delta, row[j]))
                digits[d] = 0
                d += 1
            delta = f.sub(digits[d] + 1, digits[d])
            row = basis[d]
            for j in range(n):
                if row[j]:
                    cw[j] = f.add(cw[j], f.mul(delta, row[j]))
            digits[d] += 1
            yield tuple(cw)


# ----------------------------------------------------------------------
# Products and powers
# ----------------------------------------------------------------------

def _star_rows(field: GF, rows_a, rows_b):
    mul = field.mul
    return [[mul(x, y) for x, y in zip(ra, rb)] for ra in rows_a for rb in rows_b]


def star_product(c: LinearCode, d: LinearCode) -> LinearCode:
    """Span of all componentwise products of a codeword of c and one of d."""
    if c.field != d.field:
        raise ValueError("field mismatch")
    if c.n != d.n:
        raise ValueError(f"length mismatch {c.n} != {d.n}")
    rows = _star_rows(c.field, c.basis().rows, d.basis().rows)
    prod = LinearCode(c.field, MatrixGF(c.field, rows, ncols=c.n))
    assert prod.dim <= min(c.n, c.dim * d.dim)
    return prod


def star_power(c: LinearCode, s: int) -> LinearCode:
    """Span of all degree-s componentwise monomials of codewords of c."""
    if s < 1:
        raise ValueError("power must be >= 1 (the degree-0 code is out of scope)")
    if s == 1:
        return c
    f = c.field
    basis = c.basis().rows
    mul = f.mul
    rows = []
    for combo in itertools.combinations_with_replacement(range(len(basis)), s):
        row = [1] * c.n
        for i in combo:
            b = basis[i]
            row = [mul(x, y) for x, y in zip(row, b)]
        rows.append(row)
    power = LinearCode(f, MatrixGF(f, rows, ncols=c.n))
    assert power.dim <= min(c.n, math.comb(c.dim + s - 1, s))
    return power


def dual(c: LinearCode) -> LinearCode:
    """The dual code; its dimension is n - dim c."""
    ker = c.basis().kernel()
    d = LinearCode(c.field, ker, n=c.n)
    assert d.dim == c.n - c.dim
    return d


def tensor_code(c: LinearCode, d: LinearCode) -> LinearCode:
    """Tensor (Kronecker) product code of length n * n'."""
    if c.field != d.field:
        raise ValueError("field mismatch")
    f = c.field
    mul = f.mul
    rows = []
    for ra in c.gen.rows:
        for rb in d.gen.rows:
            rows.append([mul(x, y) for x in ra for y in rb])
    return LinearCode(f, MatrixGF(f, rows, ncols=c.n * d.n))


# ----------------------------------------------------------------------
# Distance statistics
# ----------------------------------------------------------------------

def weight_enumerator(c: LinearCode) -> list[int]:
    """Counts of codewords by Hamming weight, indices 0..n; sums to q^dim."""
    f = c.field
    n = c.n
    counts = [0] * (n + 1)
    k = c.dim
    if f.q ** k > MAX_CODEWORDS:
        raise CodeTooLargeError(f"q^dim = {f.q}^{k} exceeds enumeration guard")
    if f.p == 2 and f.e == 1:
        # Gray-code walk over the 2^k combinations of bit-packed basis rows
        basis = pack_rows_gf2(c.basis())
        counts[0] = 1
        cw = 0
        for t in range(1, 1 << k):
            idx = (t & -t).bit_length() - 1
            cw ^= basis[idx]
            counts[cw.bit_count()] += 1
        return counts
    for cw in c.codewords():
        counts[sum(1 for x in cw if x)] += 1
    return counts


def weight_enumerator_dual(c: LinearCode) -> list[int]:
    """Weight enumerator of the dual code via the MacWilliams transform,
    avoiding enumeration of q^(n-dim) dual codewords."""
    enum = weight_enumerator(c)
    n = c.n
    q = c.field.q
    k = c.dim
    out = []
    for j in range(n + 1):
        acc = 0
        for w, count in enumerate(enum):
            if not count:
                continue
            kraw = sum((-1) ** i * (q - 1) ** (j - i)
                       * math.comb(w, i) * math.comb(n - w, j - i)
                       for i in range(0, min(w, j) + 1))
            acc += count * kraw
        num, rem = divmod(acc, q ** k)
        assert rem == 0, "MacWilliams transform must be integral"
        out.append(num)
    return out


def dmin(c: LinearCode) -> int:
    """Least weight of a nonzero codeword."""
    if c.dim == 0:
        raise ZeroCodeError("dmin undefined for the zero code")
    enum = weight_enumerator(c)
    return next(w for w in range(1, c.n + 1) if enum[w])


def dmax(c: LinearCode) -> int:
    """Greatest weight of a codeword."""
    if c.dim == 0:
        raise ZeroCodeError("dmax undefined for the zero code")
    enum = weight_enumerator(c)
    return max(w for w in range(c.n + 1) if enum[w])


def general_position_profile(c: LinearCode) -> Tuple[int, int, int]:
    """Thresholds (a, b, g) for the columns of a full-rank generator
    matrix viewed as a point set X in GF(q)^dim:

    * every subset of X of size <= a is linearly independent
      (a = dmin(dual) - 1; a = n when the dual is the zero code,
      i.e. there is no nontrivial parity check),
    * every subset of size >= b spans (b = n - dmin + 1),
    * the dimension of the span of any S is within g of
      min(|S|, dim): g = min(dim - a, b - dim).
    """
    k = c.dim
    d = dual(c)
    a = c.n if d.dim == 0 else dmin(d) - 1
    b = c.n - dmin(c) + 1
    return a, b, min(k - a, b - k)


# ----------------------------------------------------------------------
# Standard constructions
# ----------------------------------------------------------------------

def simplex_code(k: int, field: GF) -> LinearCode:
    """The [(q^k - 1)/(q - 1), k] code whose generator columns are the
    canonical projective points of GF(q)^k."""
    if field.q ** k > MAX_CODEWORDS:
        raise CodeTooLargeError(f"q^k = {field.q}^{k} exceeds guard")
    pts = projective_reps(field, k)
    gen = [[pt[i] for pt in pts] for i in range(k)]
    return LinearCode(field, MatrixGF(field, gen, ncols=len(pts)))


def rs_code(k: int, n: int, field: GF, eval_points: Sequence[int]) -> LinearCode:
    """Reed-Solomon code: evaluations of polynomials of degree < k at n
    distinct points (Vandermonde generator)."""
    pts = list(eval_points)
    if not k <= n <= field.q:
        raise ValueError(f"need k <= n <= q, got k={k}, n={n}, q={field.q}")
    if len(pts) != n or len(set(pts)) != n:
        raise ValueError("evaluation points must be n distinct elements")
    gen = [[field.pow(x, i) for x in pts] for i in range(k)]
    return LinearCode(field, MatrixGF(field, gen, ncols=n))


def all_ones_code(field: GF, n: int) -> LinearCode:
    """The [n, 1] repetition code, the identity for the star product."""
    return LinearCode(field, MatrixGF(field, [[1] * n], ncols=n))


# ----------------------------------------------------------------------
# Equivalent constructions of the product generator (used by tests and
# the verification campaign to cross-check the two descriptions).
# ----------------------------------------------------------------------

def product_gen_from_rows(g: MatrixGF, gp: MatrixGF) -> MatrixGF:
    """Product generator built row-wise: all componentwise products of a
    row of g with a row of gp ('hat' matrix, k*l rows of length n)."""
    if g.field != gp.field or g.ncols != gp.ncols:
        raise ValueError("field/length mismatch")
    return MatrixGF(g.field, _star_rows(g.field, g.rows, gp.rows), ncols=g.ncols)


def product_gen_from_columns(g: MatrixGF, gp: MatrixGF) -> MatrixGF:
    """Product generator built column-wise: column j is the flattened
    rank <= 1 matrix (col_j g)(col_j gp)^T."""
    if g.field != gp.field or g.ncols != gp.ncols:
        raise ValueError("field/length mismatch")
    f = g.field
    cols = []
    gt = g.transpose().rows
    gpt = gp.transpose().rows
    for p, q in zip(gt, gpt):
        cols.append(vec(outer_product(f, p, q)))
    rows = list(zip(*cols)) if cols else []
    return MatrixGF(f, rows, ncols=g.ncols)
