"""Exact arithmetic in GF(q) for q = p^e, q <= 2^16.

Elements are canonical integers in [0, q): for an extension field the
integer's base-p digits, low degree first, are the coefficients of the
residue polynomial.  A field is an immutable :class:`GF` object and is
passed explicitly to every operation, so several fields can coexist.

The reduction modulus for GF(p^e) is the lexicographically smallest
monic irreducible polynomial of degree e over GF(p), coefficients
compared low-degree-first.  This makes construction deterministic:
every build of the library, on every platform, agrees element by
element.  (For e = 1 the modulus is the polynomial t, so the quotient
is the prime field itself.)

Prime fields use direct modular arithmetic.  Extension fields multiply
through exp/log tables built from the smallest generator of the cyclic
group GF(q)^*.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Tuple

MAX_ORDER = 1 << 16


class NotPrimeError(ValueError):
    """Raised when the requested characteristic is not prime."""


class FieldTooLargeError(ValueError):
    """Raised when p^e exceeds the supported maximum order 2^16."""


def is_prime(n: int) -> bool:
    """Trial-division primality check (sufficient for n <= 2^16)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ----------------------------------------------------------------------
# Polynomial helpers over GF(p).  A polynomial is a tuple of ints
# (c0, c1, ..., cd), low degree first, with no trailing zeros (except
# the zero polynomial, which is the empty tuple).
# ----------------------------------------------------------------------

def _poly_trim(c: list[int]) -> Tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mod(a: Tuple[int, ...], m: Tuple[int, ...], p: int) -> Tuple[int, ...]:
    """Remainder of a modulo the monic polynomial m, over GF(p)."""
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        lead = a[-1] % p
        shift = len(a) - 1 - dm
        if lead:
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - lead * mi) % p
        a.pop()
    return _poly_trim([x % p for x in a])


def _poly_mul_mod(a: Tuple[int, ...], b: Tuple[int, ...], m: Tuple[int, ...],
                  p: int) -> Tuple[int, ...]:
    if not a or not b:
        return ()
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_mod(_poly_trim(prod), m, p)


def _poly_is_irreducible(cand: Tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(cand) - 1
    for d in range(1, deg // 2 + 1):
        for div in _monic_polys(p, d):
            if not _poly_mod(cand, div, p):
                return False
    return True


def _monic_polys(p: int, d: int) -> Iterable[Tuple[int, ...]]:
    """All monic degree-d polynomials over GF(p), low-first lex order."""
    coeffs = [0] * d
    while True:
        yield tuple(coeffs) + (1,)
        i = d - 1
        while i >= 0 and coeffs[i] == p - 1:
            coeffs[i] = 0
            i -= 1
        if i < 0:
            return
        coeffs[i] += 1


def smallest_irreducible(p: int, e: int) -> Tuple[int, ...]:
    """Lexicographically smallest (low-degree-first) monic irreducible
    polynomial of degree e over GF(p), as a coefficient tuple of length
    e + 1."""
    if e == 1:
        return (0, 1)  # the polynomial t
    best = None
    # Enumerate coefficient vectors (c0, ..., c_{e-1}) in ascending lex
    # order, c0 most significant.
    total = p ** e
    for idx in range(total):
        coeffs = []
        v = idx
        for _ in range(e):
            coeffs.append(v // (total // p))
            v = (v % (total // p)) * p
        # The loop above walks digits from most significant (c0) down.
        cand = tuple(coeffs) + (1,)
        if cand[0] == 0:
            continue  # divisible by t
        if _poly_is_irreducible(cand, p):
            best = cand
            break
    assert best is not None, "no irreducible polynomial found (impossible)"
    return best


class GF:
    """The finite field GF(p^e), with exact deterministic arithmetic.

    Elements are plain ints in ``range(q)``.  For e > 1 the integer
    ``a`` stands for the polynomial whose base-p digits (low degree
    first) are the digits of ``a``.

    Attributes
    ----------
    p, e, q : int
        Characteristic, extension degree, order q = p^e.
    modulus : tuple[int, ...]
        Reduction polynomial, low-degree-first coefficients, monic.
    exp_table, log_table : list[int] | None
        Discrete exp/log tables for e > 1 (None for prime fields).
        ``exp_table[i] = g^i`` for the smallest generator g, period q-1.
    """

    __slots__ = ("p", "e", "q", "modulus", "exp_table", "log_table")

    def __init__(self, p: int, e: int = 1):
        if not is_prime(p):
            raise NotPrimeError(f"characteristic {p} is not prime")
        if e < 1:
            raise ValueError(f"extension degree must be >= 1, got {e}")
        q = p ** e
        if q > MAX_ORDER:
            raise FieldTooLargeError(f"field order {q} exceeds 2^16")
        self.p = p
        self.e = e
        self.q = q
        self.modulus = smallest_irreducible(p, e)
        if e == 1:
            self.exp_table = None
            self.log_table = None
        else:
            self.exp_table, self.log_table = self._build_tables()

    # -- construction helpers ------------------------------------------

    def _int_to_poly(self, a: int) -> Tuple[int, ...]:
        digits = []
        while a:
            digits.append(a % self.p)
            a //= self.p
        return tuple(digits)

    def _poly_to_int(self, c: Tuple[int, ...]) -> int:
        v = 0
        for d in reversed(c):
            v = v * self.p + d
        return v

    def _mul_raw(self, a: int, b: int) -> int:
        """Table-free multiplication (used only during construction)."""
        pa = self._int_to_poly(a)
        pb = self._int_to_poly(b)
        return self._poly_to_int(_poly_mul_mod(pa, pb, self.modulus, self.p))

    def _order_divides(self, g: int, n: int) -> bool:
        """g^n == 1 by square-and-multiply with raw multiplication."""
        acc, base = 1, g
        while n:
            if n & 1:
                acc = self._mul_raw(acc, base)
            base = self._mul_raw(base, base)
            n >>= 1
        return acc == 1

    def _build_tables(self) -> Tuple[list[int], list[int]]:
        n = self.q - 1
        factors = []
        m, d = n, 2
        while d * d <= m:
            if m % d == 0:
                factors.append(d)
                while m % d == 0:
                    m //= d
            d += 1
        if m > 1:
            factors.append(m)
        gen = None
        for g in range(2, self.q):
            if all(not self._order_divides(g, n // f) for f in factors):
                gen = g
                break
        assert gen is not None, "multiplicative group has a generator"
        exp = [0] * n
        log = [0] * self.q
        v = 1
        for i in range(n):
            exp[i] = v
            log[v] = i
            v = self._mul_raw(v, gen)
        assert v == 1, "generator order mismatch"
        return exp, log

    # -- arithmetic ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        s, out, shift = 0, 0, 1
        while a or b:
            s = (a % self.p + b % self.p) % self.p
            out += s * shift
            shift *= self.p
            a //= self.p
            b //= self.p
        return out

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        out, shift = 0, 1
        while a:
            out += ((-a) % self.p) * shift
            shift *= self.p
            a //= self.p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        n = self.q - 1
        return self.exp_table[(self.log_table[a] + self.log_table[b]) % n]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        n = self.q - 1
        return self.exp_table[(n - self.log_table[a]) % n]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        """a^n for integer n >= 0 (0^0 = 1)."""
        if n == 0:
            return 1
        if a == 0:
            return 0
        if self.e == 1:
            return pow(a, n, self.p)
        m = self.q - 1
        return self.exp_table[(self.log_table[a] * n) % m]

    # -- iteration and misc --------------------------------------------

    def elements(self) -> range:
        return range(self.q)

    def nonzero_elements(self) -> range:
        return range(1, self.q)

    def __repr__(self) -> str:
        return f"GF({self.q})" if self.e == 1 else f"GF({self.p}^{self.e})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self) -> int:
        return hash((self.p, self.e))


@lru_cache(maxsize=None)
def field_new(p: int, e: int = 1) -> GF:
    """Construct (and cache) GF(p^e).  Deterministic: repeated calls
    with the same (p, e) return the identical object."""
    return GF(p, e)


@lru_cache(maxsize=None)
def field_of_order(q: int) -> GF:
    """GF(q) from the order alone; q must be a prime power <= 2^16."""
    if q < 2:
        raise ValueError(f"field order must be >= 2, got {q}")
    p = q
    for d in range(2, q + 1):
        if d * d > q:
            break
        if q % d == 0:
            p = d
            break
    e = 0
    m = q
    while m % p == 0 and m > 1:
        m //= p
        e += 1
    if m != 1:
        raise NotPrimeError(f"{q} is not a prime power")
    return field_new(p, e)
