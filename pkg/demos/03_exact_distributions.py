"""The exact rank-orbit walk of sums of random rank <= 1 matrices.

Everything here is exact big-rational arithmetic: the transition kernel
is enumerated, powered, and compared against closed-form bounds and a
full outcome enumeration, with zero floating point.
"""

from fractions import Fraction

from starprod import (
    bound_thm_psw,
    build_chain,
    convergence_profile,
    exact_cprime,
    exact_pn_bruteforce,
    exact_ps0,
    n_decomp,
    ps0_sequence,
    rho,
    ssw_bound_exact,
)

q, k, l = 2, 2, 3
chain = build_chain(q, k, l, "L")
print(f"rank-orbit kernel for GF({q})^({k}x{l}), factors possibly zero:")
for r, row in enumerate(chain.transition):
    cells = "  ".join(f"{p!s:>9}" for p in row)
    print(f"  from rank {r}: {cells}")

print("\nreturn probability P[s_w = 0]:")
for w, p in enumerate(ps0_sequence(chain, 8)):
    b = bound_thm_psw(q, k, l, w) if w >= 1 else None
    extra = f"   bound <= {float(b.hi):.5f}" if b else ""
    print(f"  w={w}: {p!s:>22} = {float(p):.6f}{extra}")

target = Fraction(1, q ** (k * l))
prof = convergence_profile(chain, 400)
print(f"\nstationary value 1/q^kl = {target}; deviation at w=400: "
      f"{float(prof[400]):.3e}")

# Ordered decompositions of a matrix into w rank-1 summands:
print("\ndecomposition counts N(r, w) over GF(2)^(2x2):")
for w in range(5):
    row = [n_decomp(2, 2, 2, r, w) for r in range(3)]
    print(f"  w={w}: N(0,w)={row[0]:>5}  N(1,w)={row[1]:>5}  N(2,w)={row[2]:>5}")

# The union bound over linear relations versus the exact probability:
print("\nexact P(n) = P[n draws fail general position] over GF(2)^(2x2):")
small = build_chain(2, 2, 2, "L")
for n in range(1, 7):
    exact = exact_pn_bruteforce(2, 2, 2, n, "L")
    if n <= 4:
        bound = ssw_bound_exact(small, n)
        note = f"  relation union bound {float(bound):.4f}"
    else:
        lo = rho(2) ** n
        hi = exact_cprime(2, 2, 2, n)
        note = f"  sandwich [{float(lo):.4f}, {float(hi):.4f}]"
    print(f"  n={n}: P = {float(exact):.6f}{note}")
