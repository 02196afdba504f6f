"""Rank-orbit chain, decomposition counts, exhaustive span probabilities."""

import itertools
import random
from fractions import Fraction

import pytest

from starprod.gf import field_of_order
from starprod.linalg import MatrixGF, outer_product, vec
from starprod.bounds import count_rank, exact_cprime, rho
from starprod.exactdist import (
    RankOrbitChain,
    SizeGuardError,
    _rank_rows,
    _representative,
    _transition_row,
    build_chain,
    convergence_profile,
    exact_pn_bruteforce,
    exact_ps0,
    gap_bound_exact,
    n_decomp,
    ps0_sequence,
    rank_distribution,
    ssw_bound_exact,
)


def model_pairs(q, k, l, model):
    """All factor pairs of the model, as (p, q) tuples."""
    out = []
    for p in itertools.product(range(q), repeat=k):
        if model == "R1" and not any(p):
            continue
        for qq in itertools.product(range(q), repeat=l):
            if model == "R1" and not any(qq):
                continue
            out.append((p, qq))
    return out


def literal_pn(q, k, l, n, model):
    """Literal full enumeration over factor tuples (no prefix grouping)."""
    field = field_of_order(q)
    pairs = model_pairs(q, k, l, model)
    fail = 0
    for combo in itertools.product(pairs, repeat=n):
        vecs = [vec(outer_product(field, p, qq)) for p, qq in combo]
        fail += MatrixGF(field, vecs).rank() < min(n, k * l)
    return Fraction(fail, len(pairs) ** n)


def literal_ps0(q, k, l, w, model):
    """Literal P[s_w = 0] over all factor tuples."""
    field = field_of_order(q)
    pairs = model_pairs(q, k, l, model)
    zero = 0
    for combo in itertools.product(pairs, repeat=w):
        acc = [0] * (k * l)
        for p, qq in combo:
            u = vec(outer_product(field, p, qq))
            acc = [field.add(a, b) for a, b in zip(acc, u)]
        zero += not any(acc)
    return Fraction(zero, len(pairs) ** w)


def test_chain_2x2_model_l():
    chain = build_chain(2, 2, 2, "L")
    assert chain.transition[0][0] == Fraction(7, 16)
    assert chain.transition[0][1] == Fraction(9, 16)
    assert chain.transition[0][2] == 0
    assert chain.orbit_sizes == (1, 9, 6)


def test_chain_2x2_model_r1():
    chain = build_chain(2, 2, 2, "R1")
    assert chain.transition[0][0] == 0
    assert chain.transition[0][1] == 1


def test_chain_rows_sum_to_one():
    for q, k, l in [(2, 2, 2), (2, 2, 3), (3, 2, 2), (2, 3, 4), (3, 3, 4)]:
        for model in ("L", "R1"):
            chain = build_chain(q, k, l, model)
            for row in chain.transition:
                assert sum(row) == 1
            for r, row in enumerate(chain.counts):
                for rp, c in enumerate(row):
                    assert c == 0 or abs(r - rp) <= 1


def test_chain_rejects_bad_args():
    with pytest.raises(ValueError):
        build_chain(2, 3, 2)
    with pytest.raises(ValueError):
        build_chain(2, 2, 2, "uniform")
    with pytest.raises(SizeGuardError):
        build_chain(2, 13, 14)


def test_transition_row_representative_invariance():
    # conjugating the canonical representative by random invertible
    # matrices must not change its transition row
    rng = random.Random(211)
    for q, k, l in [(2, 2, 3), (3, 2, 2)]:
        field = field_of_order(q)

        def random_invertible(size):
            while True:
                rows = [[rng.randrange(q) for _ in range(size)] for _ in range(size)]
                if MatrixGF(field, rows).rank() == size:
                    return MatrixGF(field, rows)

        for r in range(k + 1):
            rep = MatrixGF(field, _representative(k, l, r))
            a = random_invertible(k)
            b = random_invertible(l)
            conj = a.matmul(rep).matmul(b)
            assert MatrixGF(field, conj.rows).rank() == r
            row_canon = _transition_row(field, k, l, _representative(k, l, r), "L")
            row_conj = _transition_row(field, k, l, [list(rw) for rw in conj.rows], "L")
            assert row_canon == row_conj


def test_exact_ps0_basics():
    chain = build_chain(2, 2, 2, "L")
    assert exact_ps0(chain, 0) == 1
    scalar = build_chain(2, 1, 1, "L")
    # P[u = 0] = 3/4 in the scalar case; two-step return = (3/4)^2+(1/4)^2
    assert exact_ps0(scalar, 1) == Fraction(3, 4)
    assert exact_ps0(scalar, 2) == Fraction(5, 8)


def test_exact_ps0_matches_literal_enumeration():
    for model in ("L", "R1"):
        chain = build_chain(2, 2, 2, model)
        for w in range(4):
            assert exact_ps0(chain, w) == literal_ps0(2, 2, 2, w, model)


def test_ps0_sequence_consistent():
    chain = build_chain(3, 2, 2, "L")
    seq = ps0_sequence(chain, 6)
    for w in (0, 3, 6):
        assert seq[w] == exact_ps0(chain, w)


def test_lumpability_projection():
    # full 16-state walk on GF(2)^(2x2), projected onto rank classes,
    # must reproduce the lumped chain's marginals exactly
    q, k, l = 2, 2, 2
    field = field_of_order(q)
    step = {}
    for p, qq in model_pairs(q, k, l, "L"):
        u = vec(outer_product(field, p, qq))
        step[u] = step.get(u, 0) + 1
    vectors = list(itertools.product(range(q), repeat=k * l))
    rank_of = {v: MatrixGF(field, [v[:l], v[l:]]).rank() for v in vectors}
    dist = {v: Fraction(v == (0, 0, 0, 0)) for v in vectors}
    chain = build_chain(q, k, l, "L")
    for w in range(1, 5):
        new = {v: Fraction(0) for v in vectors}
        for v, pv in dist.items():
            if not pv:
                continue
            for u, cnt in step.items():
                nxt = tuple(field.add(a, b) for a, b in zip(v, u))
                new[nxt] += pv * Fraction(cnt, 16)
        dist = new
        marginal = [Fraction(0)] * (k + 1)
        for v, pv in dist.items():
            marginal[rank_of[v]] += pv
        assert marginal == rank_distribution(chain, w)


def test_n_decomp_base_cases():
    assert n_decomp(2, 2, 2, 1, 1) == 1
    assert n_decomp(2, 2, 2, 0, 1) == 0
    assert n_decomp(2, 2, 2, 0, 0) == 1
    assert n_decomp(2, 2, 2, 0, 2) == 9


def test_n_decomp_oracle_2x2():
    # enumerate all ordered pairs of rank-1 matrices summing to zero
    field = field_of_order(2)
    rank1 = []
    for p in itertools.product(range(2), repeat=2):
        for qq in itertools.product(range(2), repeat=2):
            if any(p) and any(qq):
                u = vec(outer_product(field, p, qq))
                rank1.append(u)
    assert len(rank1) == 9
    pairs = sum(1 for a in rank1 for b in rank1
                if all(field.add(x, y) == 0 for x, y in zip(a, b)))
    assert n_decomp(2, 2, 2, 0, 2) == pairs


def test_n_decomp_partition_identity():
    for q, k, l in [(2, 2, 2), (2, 2, 3), (3, 2, 2)]:
        n_rank1 = count_rank(k, l, 1, q)
        for w in range(7):
            total = sum(count_rank(k, l, r, q) * n_decomp(q, k, l, r, w)
                        for r in range(min(k, l) + 1))
            assert total == n_rank1 ** w


def test_n_decomp_matches_r1_chain():
    for q, k, l in [(2, 2, 2), (2, 2, 3), (3, 2, 2)]:
        chain = build_chain(q, k, l, "R1")
        n_rank1 = count_rank(k, l, 1, q)
        for w in range(6):
            assert exact_ps0(chain, w) == Fraction(n_decomp(q, k, l, 0, w),
                                                   n_rank1 ** w)


def test_ssw_bound_examples():
    r1 = build_chain(2, 2, 2, "R1")
    assert ssw_bound_exact(r1, 1) == 0
    ll = build_chain(2, 2, 2, "L")
    assert ssw_bound_exact(ll, 1) == Fraction(7, 16)
    assert exact_pn_bruteforce(2, 2, 2, 1, "L") == Fraction(7, 16)  # tight
    # the bound dominates the exact probability wherever n <= kl
    for n in (2, 3, 4):
        assert exact_pn_bruteforce(2, 2, 2, n, "L") <= ssw_bound_exact(ll, n)


def test_gap_bound_exact():
    import math

    chain = build_chain(2, 2, 2, "L")
    ps0 = ps0_sequence(chain, 4)
    total = sum((Fraction(math.comb(4, w)) * ps0[w] for w in range(1, 5)),
                Fraction(0))  # (q-1)^w = 1 at q = 2
    assert gap_bound_exact(chain, 4, 0) == total / (2 ** 1 - 1)
    assert gap_bound_exact(chain, 4, 2) == total / (2 ** 3 - 1)


def test_convergence_profile():
    chain = build_chain(2, 2, 2, "L")
    prof = convergence_profile(chain, 200)
    assert prof[0] == 1 - Fraction(1, 16)
    assert prof[200] < Fraction(1, 10 ** 9)
    r1 = build_chain(2, 2, 2, "R1")
    prof_r1 = convergence_profile(r1, 200)
    assert prof_r1[200] < Fraction(1, 10 ** 6)
    # eventually decreasing tail
    assert all(prof[w + 1] <= prof[w] for w in range(50, 200))


def test_exact_pn_r1_single_draw():
    assert exact_pn_bruteforce(2, 2, 2, 1, "R1") == 0


def test_exact_pn_matches_literal():
    for model in ("L", "R1"):
        for n in (1, 2, 3):
            assert exact_pn_bruteforce(2, 2, 2, n, model) \
                == literal_pn(2, 2, 2, n, model)
    assert exact_pn_bruteforce(3, 1, 2, 2, "L") == literal_pn(3, 1, 2, 2, "L")


def test_exact_pn_two_draw_identity():
    # closed-form cross-check: for n = 2 over GF(2), dependence means
    # u1 = 0, or u2 = 0, or u2 = u1; the middle term uses chain marginals
    chain = build_chain(2, 2, 2, "L")
    p0 = exact_ps0(chain, 1)            # P[u = 0] = 7/16
    ps2 = exact_ps0(chain, 2)           # P[u1 + u2 = 0] = P[u2 = u1]
    expected = ps2 + 2 * p0 * (1 - p0)
    assert exact_pn_bruteforce(2, 2, 2, 2, "L") == expected
    # and the strictly-increasing path of the span walk agrees:
    # the first draw extends with prob 9/16, the second must avoid the
    # 2-element span {0, u1}, i.e. extends with prob 8/16
    assert expected == 1 - Fraction(9, 16) * Fraction(8, 16)


def test_exact_pn_sandwich():
    q, k, l = 2, 2, 2
    for n in (5, 6):
        p = exact_pn_bruteforce(q, k, l, n, "L")
        assert rho(q) ** n <= p <= exact_cprime(q, k, l, n)


def test_exact_pn_guard():
    with pytest.raises(SizeGuardError):
        exact_pn_bruteforce(2, 2, 2, 8, "L")


def test_rank_rows_helper():
    field = field_of_order(3)
    assert _rank_rows(field, [[0, 0], [0, 0]]) == 0
    assert _rank_rows(field, [[1, 2], [2, 2]]) == 2  # det = -2 = 1 mod 3
    assert _rank_rows(field, [[1, 2], [2, 1]]) == 1  # second row = 2 * first
