"""Cylindric partitions: profiles, the subset transform, Borodin's product
formula, the coupled q-difference system, and an exhaustive enumerator.

A profile is a tuple of nonnegative integers c = (c_1, ..., c_r); its level
is sum(c) and its modulus is r + sum(c).  Cyclic rotations of a profile
give bijective families, so the lexicographically greatest rotation is used
as the canonical representative.

A cylindric partition with profile c is an r-tuple of ordinary partitions
pi^(1), ..., pi^(r) satisfying, with indices read cyclically,

    pi^(i)_j >= pi^(i+1)_{j + c_{i+1}}   (absent entries are 0).

The generating function F_c(z, q) marks the overall largest part with z and
the total size with q.  Everything downstream works with the normalisation
H_c = (zq;q)_oo / (q;q)_oo * F_c, which satisfies

    H_c(z,q) = sum over nonempty J subset I_c of
               (-1)^{|J|-1} (zq;q)_{|J|-1} H_{c(J)}(z q^{|J|}, q).
"""

from __future__ import annotations

from itertools import combinations

from .exactalg import Poly, TruncSeries
from .qseries import euler_product, inv_euler, poch_finite, poch_infinite


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

def check_profile(c) -> tuple[int, ...]:
    c = tuple(c)
    if not c or any(x < 0 for x in c):
        raise ValueError(f"bad profile {c!r}")
    return c


def rotations(c):
    c = check_profile(c)
    return [c[i:] + c[:i] for i in range(len(c))]


def cyclic_normalize(c) -> tuple[int, ...]:
    """Lexicographically greatest rotation, the canonical representative."""
    return max(rotations(c))


def level(c) -> int:
    return sum(check_profile(c))


def modulus(c) -> int:
    c = check_profile(c)
    return len(c) + sum(c)


def index_set(c) -> tuple[int, ...]:
    """1-based positions of the nonzero entries."""
    c = check_profile(c)
    return tuple(i for i in range(1, len(c) + 1) if c[i - 1] > 0)


def c_of_J(c, J) -> tuple[int, ...]:
    """The transformed profile c(J) for a nonempty J inside the index set.

    Entry i drops by one when i is in J but i-1 is not, and grows by one
    when i is not in J but i-1 is, with the wraparound convention that
    index 0 means index r.
    """
    c = check_profile(c)
    r = len(c)
    J = frozenset(J)
    if not J:
        raise ValueError("J must be nonempty")
    if not J <= set(index_set(c)):
        raise ValueError(f"J={sorted(J)} not inside the index set of {c}")
    out = []
    for i in range(1, r + 1):
        prev = i - 1 if i > 1 else r
        ini, inprev = i in J, prev in J
        if ini and not inprev:
            out.append(c[i - 1] - 1)
        elif not ini and inprev:
            out.append(c[i - 1] + 1)
        else:
            out.append(c[i - 1])
    return tuple(out)


def all_profiles(r: int, lvl: int):
    """All canonical profiles with r parts and the given level."""
    seen = set()
    def rec(i, rem, cur):
        if i == r - 1:
            seen.add(cyclic_normalize(cur + [rem]))
            return
        for x in range(rem + 1):
            rec(i + 1, rem - x, cur + [x])
    rec(0, lvl, [])
    return sorted(seen, reverse=True)


# ---------------------------------------------------------------------------
# the coupled functional-equation system
# ---------------------------------------------------------------------------

def cw_equation(c):
    """The H-normalised equation of the profile, as a zero-sum of terms.

    Returns a list of (profile, z_shift, coeff) with the meaning

        sum_t coeff_t(z, q) * H_{profile_t}(z q^{shift_t}, q) = 0,

    profiles cyclically normalised and like terms merged.  The first term
    is always (normalize(c), 0, 1).
    """
    c = cyclic_normalize(c)
    I = index_set(c)
    acc: dict[tuple, Poly] = {(c, 0): Poly.one()}
    for size in range(1, len(I) + 1):
        zq = Poly.mono(1, 1, 1)
        for J in combinations(I, size):
            cj = cyclic_normalize(c_of_J(c, J))
            coeff = Poly.const((-1) ** size) * poch_finite(zq, size - 1)
            key = (cj, size)
            cur = acc.get(key, Poly.zero()) + coeff
            if cur:
                acc[key] = cur
            else:
                acc.pop(key, None)
    first = ((c, 0, acc.pop((c, 0))),) if (c, 0) in acc else ()
    rest = tuple((p, s, co) for (p, s), co in sorted(acc.items()))
    return list(first + rest)


# ---------------------------------------------------------------------------
# Borodin's product formula
# ---------------------------------------------------------------------------

def borodin_exponents(c):
    """(modulus m, sorted exponent list e) with F_c(1,q) equal to the
    product of 1/(q^e; q^m)_oo over the list times 1/(q^m; q^m)_oo."""
    c = check_profile(c)
    r = len(c)
    m = modulus(c)

    def s(i, j):
        return sum(c[i - 1:j]) if i <= j else 0

    exps = []
    for i in range(1, r + 1):
        for j in range(i, r + 1):
            for k in range(1, c[i - 1] + 1):
                exps.append(k + j - i + s(i + 1, j))
    for i in range(2, r + 1):
        for j in range(2, i + 1):
            for k in range(1, c[i - 1] + 1):
                exps.append(m - k + j - i - s(j, i - 1))
    if any(e <= 0 for e in exps):
        raise ValueError(f"nonpositive exponent in product for {c}")
    return m, sorted(exps)


def borodin_product(c, order: int) -> TruncSeries:
    """F_c(1, q) via the product formula, truncated at `order`."""
    m, exps = borodin_exponents(c)
    den = poch_infinite(Poly.q(m), order, base=m)
    for e in exps:
        den = den * poch_infinite(Poly.q(e), order, base=m)
    return den.invert()


# ---------------------------------------------------------------------------
# exhaustive oracle
# ---------------------------------------------------------------------------

def partitions_up_to(n: int):
    """All partitions (as weakly decreasing tuples) of total at most n,
    grouped by total: list of lists, index = total."""
    by_total = [[] for _ in range(n + 1)]

    def rec(rem, maxpart, cur):
        by_total[n - rem].append(tuple(cur))
        for p in range(min(rem, maxpart), 0, -1):
            cur.append(p)
            rec(rem - p, p, cur)
            cur.pop()

    rec(n, n, [])
    return by_total


def _pair_ok(upper, lower, shift) -> bool:
    # upper_j >= lower_{j + shift} for all j (1-based), absentees are 0
    for j in range(1, len(lower) - shift + 1):
        u = upper[j - 1] if j <= len(upper) else 0
        if u < lower[j + shift - 1]:
            return False
    return True


def is_cylindric(components, c) -> bool:
    """Do the r partitions satisfy the cyclic inequalities for profile c?"""
    c = check_profile(c)
    r = len(c)
    if len(components) != r:
        raise ValueError("component count must match profile length")
    comps = [tuple(p) for p in components]
    for p in comps:
        if any(p[t] < p[t + 1] for t in range(len(p) - 1)) or any(x <= 0 for x in p):
            raise ValueError(f"not a partition: {p!r}")
    for i in range(r):
        if not _pair_ok(comps[i], comps[(i + 1) % r], c[(i + 1) % r]):
            return False
    return True


def enumerate_oracle(c, max_total: int) -> dict[tuple[int, int], int]:
    """Exhaustive joint distribution {(largest part, total): count} over all
    cylindric partitions of profile c with total at most max_total."""
    c = check_profile(c)
    r = len(c)
    pool = partitions_up_to(max_total)
    table: dict[tuple[int, int], int] = {}

    def rec(i, used, chosen):
        if i == r:
            if _pair_ok(chosen[-1], chosen[0], c[0]):
                mp = max((p[0] for p in chosen if p), default=0)
                key = (mp, used)
                table[key] = table.get(key, 0) + 1
            return
        for tot in range(max_total - used + 1):
            for p in pool[tot]:
                if i == 0 or _pair_ok(chosen[-1], p, c[i]):
                    chosen.append(p)
                    rec(i + 1, used + tot, chosen)
                    chosen.pop()

    rec(0, 0, [])
    return table


def oracle_series(table, order: int) -> TruncSeries:
    """Bivariate F_c(z, q) from an oracle table, exact through `order`
    (which must not exceed the table's max_total)."""
    d = {}
    for (mp, tot), cnt in table.items():
        if tot <= order:
            d[(tot, mp)] = d.get((tot, mp), 0) + cnt
    return TruncSeries(order, d)


def oracle_to_json(c, max_total, table) -> dict:
    return {
        "profile": list(check_profile(c)),
        "max_total": max_total,
        "entries": [
            {"max_part": mp, "total": tot, "count": cnt}
            for (mp, tot), cnt in sorted(table.items())
        ],
    }


# ---------------------------------------------------------------------------
# H-normalisation helpers
# ---------------------------------------------------------------------------

def h_series_from_oracle(c, order: int, table=None) -> TruncSeries:
    """H_c(z, q) computed from the enumerator: (zq;q)_oo/(q;q)_oo * F_c."""
    if table is None:
        table = enumerate_oracle(c, order)
    f = oracle_series(table, order)
    zq_poch = poch_infinite(Poly.mono(1, 1, 1), order)
    return f * zq_poch * inv_euler(order)


def f_from_h(h: TruncSeries, order: int) -> TruncSeries:
    """Inverse normalisation: F = (q;q)_oo/(zq;q)_oo * H."""
    zq_poch = poch_infinite(Poly.mono(1, 1, 1), order)
    return h * euler_product(order) * zq_poch.invert()
