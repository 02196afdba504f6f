"""Dense matrices over GF(q): rank, canonical RREF, kernels, products.

Matrices are immutable values (tuples of tuples of canonical field
ints).  Operations never mutate their inputs; elimination works on
internal scratch copies, so matrices are safe to share across workers.

RREF pivots are chosen as the first nonzero entry scanning columns
left to right, rows normalized to a leading 1.  That makes the RREF
canonical (unique per row space), so row-space equality is a plain
comparison of reduced forms.

For GF(2) there is a bit-packed fast path (`rank_gf2`, rows as Python
ints, word-wise XOR elimination).  It must agree with the generic path
entry for entry; the test suite enforces this.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Tuple

from .gf import GF

MAX_ENTRIES = 1 << 24


class MatrixSizeError(ValueError):
    """Raised when a matrix exceeds the rows*cols <= 2^24 guard."""


class MatrixGF:
    """An immutable rows x cols matrix over a finite field."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: GF, rows: Iterable[Iterable[int]], ncols: int | None = None):
        rows = tuple(tuple(r) for r in rows)
        if rows:
            ncols_seen = len(rows[0])
            if any(len(r) != ncols_seen for r in rows):
                raise ValueError("ragged rows")
            if ncols is not None and ncols != ncols_seen:
                raise ValueError(f"ncols={ncols} but rows have {ncols_seen} entries")
            ncols = ncols_seen
        elif ncols is None:
            ncols = 0
        if len(rows) * ncols > MAX_ENTRIES:
            raise MatrixSizeError(
                f"{len(rows)}x{ncols} exceeds {MAX_ENTRIES} entries")
        q = field.q
        for r in rows:
            for x in r:
                if not 0 <= x < q:
                    raise ValueError(f"entry {x} not a canonical element of {field}")
        self.field = field
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = rows

    # -- basic structure -----------------------------------------------

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return (isinstance(other, MatrixGF) and self.field == other.field
                and self.rows == other.rows and self.ncols == other.ncols)

    def __hash__(self) -> int:
        return hash((self.field, self.ncols, self.rows))

    def __repr__(self) -> str:
        return f"MatrixGF({self.field}, {self.nrows}x{self.ncols})"

    def transpose(self) -> "MatrixGF":
        return MatrixGF(self.field,
                        tuple(zip(*self.rows)) if self.rows else (),
                        ncols=self.nrows)

    def matmul(self, other: "MatrixGF") -> "MatrixGF":
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} @ "
                             f"{other.nrows}x{other.ncols}")
        f = self.field
        cols = other.transpose().rows
        out = []
        for row in self.rows:
            out_row = []
            for col in cols:
                acc = 0
                for a, b in zip(row, col):
                    if a and b:
                        acc = f.add(acc, f.mul(a, b))
                out_row.append(acc)
            out.append(out_row)
        return MatrixGF(f, out, ncols=other.ncols)

    def add(self, other: "MatrixGF") -> "MatrixGF":
        if self.field != other.field or self.nrows != other.nrows \
                or self.ncols != other.ncols:
            raise ValueError("shape/field mismatch")
        f = self.field
        return MatrixGF(f, [[f.add(a, b) for a, b in zip(ra, rb)]
                            for ra, rb in zip(self.rows, other.rows)],
                        ncols=self.ncols)

    # -- elimination ----------------------------------------------------

    def _rref_rows(self) -> Tuple[list[list[int]], list[int]]:
        """Scratch RREF; returns (all rows, pivot column list)."""
        f = self.field
        mat = [list(r) for r in self.rows]
        m = len(mat)
        pivots: list[int] = []
        r = 0
        for c in range(self.ncols):
            if r >= m:
                break
            piv = None
            for i in range(r, m):
                if mat[i][c]:
                    piv = i
                    break
            if piv is None:
                continue
            if piv != r:
                mat[r], mat[piv] = mat[piv], mat[r]
            lead = mat[r][c]
            if lead != 1:
                inv = f.inv(lead)
                mat[r] = [f.mul(inv, x) for x in mat[r]]
            prow = mat[r]
            for i in range(m):
                if i != r and mat[i][c]:
                    coef = mat[i][c]
                    row = mat[i]
                    mat[i] = [f.sub(x, f.mul(coef, y)) for x, y in zip(row, prow)]
            pivots.append(c)
            r += 1
        return mat, pivots

    def rank(self) -> int:
        if self.field.p == 2 and self.field.e == 1:
            return rank_gf2(pack_rows_gf2(self))
        return len(self._rref_rows()[1])

    def rref(self) -> "MatrixGF":
        """Canonical reduced row echelon form (same shape, zero rows last)."""
        mat, pivots = self._rref_rows()
        r = len(pivots)
        return MatrixGF(self.field, mat[:r] + mat[r:], ncols=self.ncols)

    def row_basis(self) -> "MatrixGF":
        """Nonzero rows of the RREF: a canonical basis of the row space."""
        mat, pivots = self._rref_rows()
        return MatrixGF(self.field, mat[:len(pivots)], ncols=self.ncols)

    def kernel(self) -> "MatrixGF":
        """Basis of the right kernel, one vector per row (0 rows if trivial)."""
        f = self.field
        mat, pivots = self._rref_rows()
        pivot_set = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        basis = []
        for fc in free:
            v = [0] * self.ncols
            v[fc] = 1
            for row, pc in zip(mat, pivots):
                if row[fc]:
                    v[pc] = f.neg(row[fc])
            basis.append(v)
        return MatrixGF(f, basis, ncols=self.ncols)


# ----------------------------------------------------------------------
# Constructors and free functions
# ----------------------------------------------------------------------

def zeros(field: GF, nrows: int, ncols: int) -> MatrixGF:
    return MatrixGF(field, [[0] * ncols for _ in range(nrows)], ncols=ncols)


def identity(field: GF, n: int) -> MatrixGF:
    return MatrixGF(field, [[1 if i == j else 0 for j in range(n)]
                            for i in range(n)], ncols=n)


def stack(a: MatrixGF, b: MatrixGF) -> MatrixGF:
    if a.field != b.field or a.ncols != b.ncols:
        raise ValueError("field/width mismatch")
    return MatrixGF(a.field, a.rows + b.rows, ncols=a.ncols)


def outer_product(field: GF, p: Sequence[int], q: Sequence[int]) -> MatrixGF:
    """The rank <= 1 matrix with entries p[i] * q[j]."""
    return MatrixGF(field, [[field.mul(pi, qj) for qj in q] for pi in p],
                    ncols=len(q))


def vec(m: MatrixGF) -> Tuple[int, ...]:
    """Row-major flattening of a matrix to a length rows*cols vector."""
    return tuple(x for row in m.rows for x in row)


def unvec(field: GF, v: Sequence[int], nrows: int, ncols: int) -> MatrixGF:
    if len(v) != nrows * ncols:
        raise ValueError(f"vector of length {len(v)} is not {nrows}x{ncols}")
    return MatrixGF(field, [v[i * ncols:(i + 1) * ncols] for i in range(nrows)],
                    ncols=ncols)


def bilinear_form_eval(b: MatrixGF, u: MatrixGF) -> int:
    """trace(B^T U) = sum_ij B[i][j] * U[i][j], the pairing that realizes
    every linear form on the matrix space."""
    if b.field != u.field or b.nrows != u.nrows or b.ncols != u.ncols:
        raise ValueError("shape/field mismatch")
    f = b.field
    acc = 0
    for rb, ru in zip(b.rows, u.rows):
        for x, y in zip(rb, ru):
            if x and y:
                acc = f.add(acc, f.mul(x, y))
    return acc


def row_space_equal(a: MatrixGF, b: MatrixGF) -> bool:
    """True iff the two matrices span the same row space."""
    if a.field != b.field or a.ncols != b.ncols:
        raise ValueError("field/width mismatch")
    return a.row_basis().rows == b.row_basis().rows


def projective_reps(field: GF, k: int) -> list[Tuple[int, ...]]:
    """Canonical representatives of the projective points of GF(q)^k:
    first nonzero coordinate equal to 1, sorted lexicographically.
    There are (q^k - 1)/(q - 1) of them."""
    q = field.q
    reps = []
    for lead in range(k - 1, -1, -1):
        # vectors (0, ..., 0, 1, *, ..., *) with the 1 in position `lead`
        tail = k - lead - 1
        idx = [0] * tail
        while True:
            reps.append((0,) * lead + (1,) + tuple(idx))
            i = tail - 1
            while i >= 0 and idx[i] == q - 1:
                idx[i] = 0
                i -= 1
            if i < 0:
                break
            idx[i] += 1
    reps.sort()
    return reps


# ----------------------------------------------------------------------
# GF(2) bit-packed fast path
# ----------------------------------------------------------------------

def pack_rows_gf2(m: MatrixGF) -> list[int]:
    """Rows as ints; bit j of the int is column j."""
    out = []
    for row in m.rows:
        v = 0
        for j, x in enumerate(row):
            if x:
                v |= 1 << j
        out.append(v)
    return out


def kernel_gf2(bitrows: Sequence[int], ncols: int) -> list[int]:
    """Basis of the right kernel over GF(2), rows as bit-packed ints."""
    # full RREF: reduce incoming rows, then back-substitute the new pivot
    pivots: list[tuple[int, int]] = []  # (pivot_col, row)
    for row in bitrows:
        for pc, prow in pivots:
            if (row >> pc) & 1:
                row ^= prow
        if row:
            pc = (row & -row).bit_length() - 1
            pivots = [(c, r ^ row if (r >> pc) & 1 else r) for c, r in pivots]
            pivots.append((pc, row))
            pivots.sort()
    pivot_cols = {pc for pc, _ in pivots}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        v = 1 << free
        for pc, prow in pivots:
            if (prow >> free) & 1:
                v |= 1 << pc
        basis.append(v)
    return basis


def rank_rows(field: GF, rows: list[list[int]]) -> int:
    """Gaussian-elimination rank of a small list-of-lists (consumed)."""
    m = len(rows)
    if m == 0:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, m):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][c]
        if lead != 1:
            inv = field.inv(lead)
            rows[r] = [field.mul(inv, x) for x in rows[r]]
        prow = rows[r]
        for i in range(r + 1, m):
            if rows[i][c]:
                coef = rows[i][c]
                rows[i] = [field.sub(x, field.mul(coef, y))
                           for x, y in zip(rows[i], prow)]
        r += 1
        if r == m:
            break
    return r


def rank_gf2(bitrows: Sequence[int]) -> int:
    """Rank over GF(2) of rows given as bit-packed ints.

    Pivot rows are kept sorted by their lowest set bit; reducing a new
    row against them in ascending pivot order clears each pivot bit for
    good (a pivot row has no bits below its own pivot).
    """
    pivots: list[int] = []
    for row in bitrows:
        for prow in pivots:
            if row & (prow & -prow):
                row ^= prow
        if row:
            pivots.append(row)
            pivots.sort(key=lambda v: v & -v)
    return len(pivots)
