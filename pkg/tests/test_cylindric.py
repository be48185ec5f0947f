"""Cylindric partition combinatorics against first principles."""

import pytest

from cylq.exactalg import Poly, TruncSeries
from cylq.cylindric import (
    all_profiles,
    borodin_exponents,
    borodin_product,
    c_of_J,
    cw_equation,
    cyclic_normalize,
    enumerate_oracle,
    h_series_from_oracle,
    index_set,
    is_cylindric,
    modulus,
    oracle_series,
    oracle_to_json,
    partitions_up_to,
)


def test_is_cylindric_known_cases():
    # the classic illustration: (4,3,1) over (2,2) over (1,1,1,1) wraps
    # around the cylinder with profile (2,0,2)
    pi = ((4, 3, 1), (2, 2), (1, 1, 1, 1))
    assert is_cylindric(pi, (2, 0, 2))
    # shrinking the wrap offset breaks the wraparound inequality
    assert not is_cylindric(pi, (2, 0, 0))
    # the all-shifts-zero profile demands cyclic pointwise domination,
    # which forces all components equal
    assert is_cylindric(((2, 1), (2, 1), (2, 1)), (0, 0, 0))
    assert not is_cylindric(((2, 1), (2, 1), (1, 1)), (0, 0, 0))
    assert is_cylindric(((), (), ()), (1, 2, 0))


def test_is_cylindric_validates_input():
    with pytest.raises(ValueError):
        is_cylindric(((1, 2),), (3,))          # increasing
    with pytest.raises(ValueError):
        is_cylindric(((1,), (1,)), (1, 0, 0))  # wrong arity
    with pytest.raises(ValueError):
        is_cylindric(((0,), ()), (1, 1))       # nonpositive part


def test_profile_helpers():
    assert cyclic_normalize((2, 0, 2)) == (2, 2, 0)
    assert cyclic_normalize((0, 0, 8)) == (8, 0, 0)
    assert modulus((4, 4, 0)) == 11
    assert index_set((4, 0, 3)) == (1, 3)
    assert all_profiles(3, 2) == [(2, 0, 0), (1, 1, 0)]


def test_c_of_J_examples():
    assert c_of_J((2, 0, 2), [1]) == (1, 1, 2)
    assert c_of_J((2, 0, 2), [1, 3]) == (2, 1, 1)
    assert c_of_J((2, 2, 2), [1, 2, 3]) == (2, 2, 2)
    assert sum(c_of_J((4, 4, 0), [2])) == 8
    with pytest.raises(ValueError):
        c_of_J((2, 0, 2), [])
    with pytest.raises(ValueError):
        c_of_J((2, 0, 2), [2])


def test_c_of_J_preserves_level_and_length():
    from itertools import combinations
    for c in all_profiles(3, 5):
        I = index_set(c)
        for size in range(1, len(I) + 1):
            for J in combinations(I, size):
                cj = c_of_J(c, J)
                assert sum(cj) == sum(c) and len(cj) == len(c)


def test_cw_equation_single_term_profile():
    eq = cw_equation((8, 0, 0))
    assert eq == [
        ((8, 0, 0), 0, Poly.one()),
        ((7, 1, 0), 1, Poly.const(-1)),
    ]


def test_cw_equation_four_terms():
    eq = cw_equation((4, 4, 0))
    zq = Poly.mono(1, 1, 1)
    expect = {
        ((4, 4, 0), 0): Poly.one(),
        ((5, 0, 3), 1): Poly.const(-1),
        ((4, 3, 1), 1): Poly.const(-1),
        ((4, 1, 3), 2): Poly.one() - zq,
    }
    assert {(p, s): co for p, s, co in eq} == expect


def test_cw_equation_term_count():
    for c in [(3, 1, 0), (2, 1, 1), (5, 0, 0)]:
        eq = cw_equation(c)
        assert len(eq) == 2 ** len(index_set(c))


def test_enumerate_oracle_basics():
    t = enumerate_oracle((2, 0, 2), 6)
    assert t[(0, 0)] == 1
    # rotation invariance
    assert t == enumerate_oracle((0, 2, 2), 6)
    assert t == enumerate_oracle((2, 2, 0), 6)


def test_enumerate_matches_membership():
    # the table at small order agrees with filtering raw triples through
    # is_cylindric
    c = (1, 1, 0)
    N = 5
    pool = [p for tot in partitions_up_to(N) for p in tot]
    table = {}
    for p1 in pool:
        for p2 in pool:
            for p3 in pool:
                tot = sum(p1) + sum(p2) + sum(p3)
                if tot > N:
                    continue
                if is_cylindric((p1, p2, p3), c):
                    mp = max([x[0] for x in (p1, p2, p3) if x], default=0)
                    table[(mp, tot)] = table.get((mp, tot), 0) + 1
    assert table == enumerate_oracle(c, N)


def test_borodin_matches_oracle():
    for c in [(2, 0, 2), (1, 1, 1), (3, 0, 0), (2, 1, 0)]:
        N = 9
        t = enumerate_oracle(c, N)
        z1 = {}
        for (mp, tot), cnt in t.items():
            z1[tot] = z1.get(tot, 0) + cnt
        prod = borodin_product(c, N)
        for n in range(N + 1):
            assert prod.coeff(n) == z1.get(n, 0), (c, n)


def test_borodin_exponent_structure():
    m, exps = borodin_exponents((2, 0, 2))
    assert m == 7
    # each unit of the level contributes r factors
    assert len(exps) == 3 * sum((2, 0, 2))
    assert all(0 < e for e in exps)


def test_corteel_welsh_recurrence_bivariate():
    # F_c(z,q) = sum over J of (-1)^{|J|-1} F_{c(J)}(zq^{|J|}) / (1 - zq^{|J|})
    from itertools import combinations
    N = 8
    for c in [(2, 0, 0), (1, 1, 0), (2, 0, 2)]:
        c = cyclic_normalize(c)
        tables = {}

        def f_series(p):
            p = cyclic_normalize(p)
            if p not in tables:
                tables[p] = oracle_series(enumerate_oracle(p, N), N)
            return tables[p]

        lhs = f_series(c)
        rhs = TruncSeries.zero(N)
        I = index_set(c)
        for size in range(1, len(I) + 1):
            for J in combinations(I, size):
                num = f_series(c_of_J(c, J)).subs_z(size)
                den = TruncSeries.from_poly(
                    Poly.one() - Poly.mono(1, size, 1), N).invert()
                term = (num * den).scale((-1) ** (size - 1))
                rhs = rhs + term
        assert lhs.agree(rhs, through=N)


def test_h_equation_numeric_zero():
    N = 8
    for c in [(2, 0, 0), (2, 0, 2), (3, 1, 0)]:
        eq = cw_equation(c)
        total = TruncSeries.zero(N)
        for p, shift, coeff in eq:
            h = h_series_from_oracle(p, N)
            total = total + h.subs_z(shift).mul_poly(coeff)
        assert total.is_zero(), c


def test_h_initial_conditions_from_oracle():
    # H_c(z,0) = 1 and H_c(0,q) = 1/(q;q)_oo, checked from the enumerator
    from cylq.qseries import inv_euler
    N = 8
    h = h_series_from_oracle((2, 0, 2), N)
    assert h.coeff(0, 0) == 1
    pf = inv_euler(N)
    for n in range(N + 1):
        assert h.coeff(n, 0) == pf.coeff(n)


def test_oracle_json_shape():
    c = (1, 1, 0)
    t = enumerate_oracle(c, 4)
    doc = oracle_to_json(c, 4, t)
    assert doc["profile"] == [1, 1, 0]
    assert doc["max_total"] == 4
    assert {"max_part": 0, "total": 0, "count": 1} in doc["entries"]
    assert sum(e["count"] for e in doc["entries"]) == sum(t.values())
