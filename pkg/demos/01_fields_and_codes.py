"""Fields, codes, and star products: a quick tour.

Builds a couple of finite fields, the standard code constructions, and
shows how the dimension of a componentwise (star) product behaves for
structured versus generic generators.
"""

from starprod import (
    LinearCode,
    MatrixGF,
    dmin,
    dual,
    field_new,
    general_position_profile,
    rs_code,
    simplex_code,
    star_power,
    star_product,
    weight_enumerator,
)

# ----------------------------------------------------------------- fields
gf16 = field_new(2, 4)
print(f"{gf16}: modulus coefficients (low degree first) = {gf16.modulus}")
t = 2  # the residue class of the variable
print(f"t * t = {gf16.mul(t, t)},  t^15 = {gf16.pow(t, 15)} (cyclic group)")

gf11 = field_new(11)
print(f"{gf11}: inverse of 7 is {gf11.inv(7)} (7 * {gf11.inv(7)} = "
      f"{gf11.mul(7, gf11.inv(7))})")

# ------------------------------------------------------------------ codes
gf2 = field_new(2)
s3 = simplex_code(3, gf2)
print(f"\nsimplex code S_3 over GF(2): [{s3.n}, {s3.dim}], "
      f"dmin = {dmin(s3)}")
print(f"weight enumerator: {weight_enumerator(s3)}")

a, b, g = general_position_profile(s3)
print(f"general position profile of the generator columns: a={a}, b={b}, "
      f"gap g={g}")

# ------------------------------------------------------- star products
# The square of a simplex code fills the quadratic monomial space:
sq = star_power(s3, 2)
print(f"\ndim S_3^(*2) = {sq.dim}  (all 6 quadratic monomials on 7 points)")

# Reed-Solomon squares stay small: degree < k times degree < k is
# degree < 2k-1, so the square has dimension 2k-1, not k(k+1)/2.
rs = rs_code(4, 11, gf11, list(range(11)))
rs_sq = star_product(rs, rs)
print(f"RS [11,4] over GF(11): dim C*C = {rs_sq.dim} "
      f"(generic would be {min(11, 4 * 5 // 2)})")

# A generic code, by contrast, fills the whole product space:
from starprod import SplitMix64

rng = SplitMix64(1)
rows = [[rng.below(2) for _ in range(20)] for _ in range(5)]
random_code = LinearCode(gf2, MatrixGF(gf2, rows, ncols=20))
print(f"random [20,5] over GF(2): dim C*C = {star_power(random_code, 2).dim} "
      f"(generic value {min(20, 15)})")

# Duality: the profile thresholds come from dmin of the code and its dual
d = dual(rs)
print(f"\ndual of RS [11,4] is [{d.n}, {d.dim}]; dmin = {dmin(d)} "
      "(MDS: n - k + 1)")
