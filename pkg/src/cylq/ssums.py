"""Double-sum families S_m(z; rho | sigma) and their exact evaluation.

For a modulus m >= 5 write m = 3k + e with e in {-1, 0, 1}; the family is
indexed by two integer vectors rho, sigma of length k-1.  Each member is a
sum over pairs of weakly decreasing nonnegative chains r, s of length k-1:

    z^{r_1} * q^{ sum_i (r_i^2 - r_i s_i + s_i^2 + rho_i r_i + sigma_i s_i) }
    / prod_{i<k-1} (q;q)_{r_i - r_{i+1}} (q;q)_{s_i - s_{i+1}}  *  LAST

where LAST depends on e (writing a = r_{k-1}, b = s_{k-1}):

    e = -1:  q^{2ab} / ( (q;q)_a (q;q)_b (q;q)_{a+b+1} )
    e =  0:  [a+b choose a]_{q^3} / ( (q;q)_{a+b} (q;q)_{a+b+1} )
    e = +1:  1 / ( (q;q)_a (q;q)_b (q;q)_{a+b+1} )

(The 1/(q;q)_n = 0 convention for n < 0 is what restricts the sum to
decreasing chains.)

An SExpr is a finite Z[q,z,z^-1,q^-1]-linear combination of such sums with
a fixed modulus.  The evaluator enumerates chains with quadratic-form
pruning and accumulates dense coefficient arrays, giving a TruncSeries
whose validity window is exact: every chain that could contribute a
monomial inside the window is visited.
"""

from __future__ import annotations

from math import isqrt
from typing import NamedTuple

from .exactalg import Poly, TruncSeries
from .qseries import qbinom


def family(m: int) -> tuple[int, int]:
    """Return (k, e) with m = 3k + e, e in {-1, 0, 1}."""
    if m < 5:
        raise ValueError("modulus must be at least 5")
    k = (m + 1) // 3
    e = m - 3 * k
    return k, e


def e_vec(i: int, k: int) -> tuple[int, ...]:
    """i zeros followed by ones, length k-1."""
    if not 0 <= i <= k - 1:
        raise ValueError(f"e_{i} undefined for k={k}")
    return (0,) * i + (1,) * (k - 1 - i)


def delta(i: int, k: int) -> tuple[int, ...]:
    """Indicator vector of position i (1-based), length k-1."""
    if not 1 <= i <= k - 1:
        raise ValueError(f"delta_{i} undefined for k={k}")
    return tuple(1 if j == i else 0 for j in range(1, k))


def vadd(u, v, mult=1):
    return tuple(a + mult * b for a, b in zip(u, v))


class SIndex(NamedTuple):
    m: int
    rho: tuple
    sigma: tuple

    def render(self) -> str:
        r = ",".join(str(x) for x in self.rho)
        s = ",".join(str(x) for x in self.sigma)
        return f"S{self.m}[{{{r}}},{{{s}}}]"


def sindex(m, rho, sigma) -> SIndex:
    k, _ = family(m)
    rho, sigma = tuple(rho), tuple(sigma)
    if len(rho) != k - 1 or len(sigma) != k - 1:
        raise ValueError(f"index vectors must have length {k - 1} for modulus {m}")
    return SIndex(m, rho, sigma)


class SExpr:
    """Linear combination of S_m sums with Poly coefficients, fixed m."""

    __slots__ = ("m", "terms")

    def __init__(self, m, terms=None):
        self.m = m
        d = {}
        if terms:
            it = terms.items() if isinstance(terms, dict) else terms
            for idx, c in it:
                if idx.m != m:
                    raise ValueError("mixed moduli in one expression")
                if c:
                    nc = d.get(idx, Poly.zero()) + c
                    if nc:
                        d[idx] = nc
                    else:
                        d.pop(idx, None)
        self.terms = d

    @classmethod
    def single(cls, idx: SIndex, coeff=None):
        return cls(idx.m, {idx: Poly.one() if coeff is None else coeff})

    def __add__(self, other):
        if self.m != other.m:
            raise ValueError("mixed moduli")
        d = dict(self.terms)
        for idx, c in other.terms.items():
            nc = d.get(idx, Poly.zero()) + c
            if nc:
                d[idx] = nc
            else:
                d.pop(idx, None)
        e = SExpr.__new__(SExpr)
        e.m, e.terms = self.m, d
        return e

    def __neg__(self):
        e = SExpr.__new__(SExpr)
        e.m = self.m
        e.terms = {idx: -c for idx, c in self.terms.items()}
        return e

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        """Multiply by an integer or a Poly."""
        if isinstance(c, int):
            c = Poly.const(c)
        if c.is_zero():
            return SExpr(self.m)
        e = SExpr.__new__(SExpr)
        e.m = self.m
        e.terms = {idx: co * c for idx, co in self.terms.items()}
        return e

    def z_shift(self, n: int):
        """Substitute z -> z q^n using S_m(zq^n; rho|sigma) = S_m(z; rho + n d_1|sigma)."""
        if n == 0:
            return self
        d = {}
        for idx, c in self.terms.items():
            rho = (idx.rho[0] + n,) + idx.rho[1:]
            nidx = SIndex(idx.m, rho, idx.sigma)
            nc = d.get(nidx, Poly.zero()) + c.z_shift(n)
            if nc:
                d[nidx] = nc
            else:
                d.pop(nidx, None)
        e = SExpr.__new__(SExpr)
        e.m, e.terms = self.m, d
        return e

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, SExpr):
            return NotImplemented
        return self.m == other.m and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def render(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for idx in sorted(self.terms):
            c = self.terms[idx]
            bits.append(f"({c.render()}) * {idx.render()}")
        return " + ".join(bits)

    def __repr__(self):
        return f"SExpr({self.render()})"


def combine(m, parts) -> SExpr:
    """Build an SExpr from (coeff, SIndex-or-SExpr) pairs."""
    out = SExpr(m)
    for coeff, item in parts:
        if isinstance(item, SIndex):
            item = SExpr.single(item)
        out = out + item.scale(coeff)
    return out


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

_invpoch_cache: dict[int, list[int]] = {}


def inv_poch_list(n: int, length: int) -> list[int]:
    """Dense coefficients of 1/(q;q)_n through q^(length-1), cached."""
    arr = _invpoch_cache.get(n)
    if arr is None or len(arr) < length:
        arr = [0] * max(length, 1)
        arr[0] = 1
        for j in range(1, n + 1):
            for t in range(j, len(arr)):
                arr[t] += arr[t - j]
        _invpoch_cache[n] = arr
    return arr


_qbinom3_cache: dict[tuple[int, int], list[int]] = {}


def _qbinom3_list(n: int, k: int) -> list[int]:
    got = _qbinom3_cache.get((n, k))
    if got is None:
        p = qbinom(n, k, base=3)
        deg = p.max_q()
        got = [0] * (deg + 1)
        for (a, _), c in p.terms.items():
            got[a] = c
        _qbinom3_cache[(n, k)] = got
    return got


def _conv(A, B, n):
    """Truncated product of dense lists through index n."""
    out = [0] * (n + 1)
    for i in range(min(len(A) - 1, n) + 1):
        a = A[i]
        if a:
            lim = min(len(B) - 1, n - i)
            for j in range(lim + 1):
                b = B[j]
                if b:
                    out[i + j] += a * b
    return out


def eval_terms(m, terms, order, zcap=None, z_one=False) -> TruncSeries:
    """Evaluate sum(coeff_t * S_m(rho_t | sigma_t)) as a TruncSeries.

    `terms` is an iterable of (rho, sigma, coeff: Poly).  With z_one=True
    the substitution z = 1 is applied (the result is a pure q-series); with
    a zcap only z-exponents up to the cap are tracked.
    """
    k, fam = family(m)
    L = k - 1
    terms = [(tuple(r), tuple(s), c) for (r, s, c) in terms if c]
    if not terms:
        return TruncSeries.zero(order, zcap=None if z_one else zcap)

    tinfo = []
    for rho, sigma, coeff in terms:
        monos = sorted(coeff.terms.items())
        tinfo.append((rho, sigma, monos, coeff.min_q(), coeff.min_z()))
    Qe = max(order - mq for (_, _, _, mq, _) in tinfo)
    if Qe < 0:
        return TruncSeries.zero(order, zcap=None if z_one else zcap)

    rho_min = [min(t[0][i] for t in tinfo) for i in range(L)]
    sigma_min = [min(t[1][i] for t in tinfo) for i in range(L)]
    M = max(1, *(abs(x) for x in rho_min + sigma_min))
    # analytic cap on any chain entry: each level contributes at least
    # (r+s)^2/4 - M(r+s), and every other level at least -M^2
    slack = Qe + (L - 1) * M * M + M * M
    U = 2 * M + 2 * (isqrt(max(slack, 0)) + 1)

    if z_one:
        r1_cap = U
    elif zcap is not None:
        r1_cap = max(0, zcap - min(t[4] for t in tinfo))
    else:
        r1_cap = U

    last = L - 1

    def lvl(i, r, s):
        v = r * r - r * s + s * s + rho_min[i] * r + sigma_min[i] * s
        if fam == -1 and i == last:
            v += 2 * r * s
        return v

    g_memo = {}

    def g(i, r):
        got = g_memo.get((i, r))
        if got is None:
            s_hi = max(0, (r - sigma_min[i]) // 2, (-(r + sigma_min[i])) // 2) + 2
            got = min(lvl(i, r, s) for s in range(s_hi + 1))
            g_memo[(i, r)] = got
        return got

    gmin = [min(g(i, r) for r in range(U + 1)) for i in range(L)]
    grest = [0] * (L + 1)
    for i in range(L - 1, -1, -1):
        grest[i] = grest[i + 1] + gmin[i]

    # global floor for any produced exponent, and the dense length that
    # suffices for every convolution (exponents as low as OFF may need
    # factor coefficients out to order - OFF)
    min_cq = min(t[3] for t in tinfo)
    OFF = min(0, grest[0] + min_cq)
    width = order - OFF + 1
    LEN = order - OFF

    acc: dict[int, list[int]] = {}

    def h_level(i, r_i, s):
        v = s * s - r_i * s + sigma_min[i] * s
        if fam == -1 and i == last:
            v += 2 * r_i * s
        return v

    pr_cache: dict[tuple, list[int]] = {}
    ps_cache: dict[tuple, list[int]] = {}
    last_cache: dict[tuple, list[int]] = {}

    def chain_key(ch):
        return tuple(ch[i] - ch[i + 1] for i in range(L - 1))

    def side_product(ch, cache):
        """Product of 1/(q;q) over consecutive differences (and the tail
        entry for the e = +-1 families)."""
        key = chain_key(ch) + ((ch[-1],) if fam != 0 else ())
        got = cache.get(key)
        if got is None:
            got = [1]
            for d in key:
                if d:
                    got = _conv(got, inv_poch_list(d, LEN + 1), LEN)
                    while got and got[-1] == 0:
                        got.pop()
            cache[key] = got
        return got

    def last_block(a, b):
        key = (a, b)
        got = last_cache.get(key)
        if got is None:
            if fam == 0:
                got = _conv(inv_poch_list(a + b, LEN + 1),
                            inv_poch_list(a + b + 1, LEN + 1), LEN)
                got = _conv(got, _qbinom3_list(a + b, a), LEN)
            else:
                got = inv_poch_list(a + b + 1, LEN + 1)
            last_cache[key] = got
        return got

    def emit(rch, sch):
        r1 = rch[0]
        extra = 2 * rch[-1] * sch[-1] if fam == -1 else 0
        quad = extra
        for i in range(L):
            quad += rch[i] * rch[i] - rch[i] * sch[i] + sch[i] * sch[i]
        hits = []
        need = -1
        for rho, sigma, monos, mq, mz in tinfo:
            E = quad
            for i in range(L):
                E += rho[i] * rch[i] + sigma[i] * sch[i]
            if E + mq > order:
                continue
            hits.append((E, monos))
            need = max(need, order - E - mq)
        if not hits:
            return
        need = min(need, LEN)
        base = _conv(side_product(rch, pr_cache), side_product(sch, ps_cache), need)
        prod = _conv(base, last_block(rch[-1], sch[-1]), need)
        for E, monos in hits:
            for (qe, ze), cm in monos:
                hi = order - E - qe
                if hi < 0:
                    continue
                if z_one:
                    zkey = 0
                else:
                    zkey = r1 + ze
                    if zcap is not None and zkey > zcap:
                        continue
                row = acc.get(zkey)
                if row is None:
                    row = acc[zkey] = [0] * width
                offs = E + qe - OFF
                lim = min(len(prod) - 1, hi)
                for j in range(lim + 1):
                    v = prod[j]
                    if v:
                        row[offs + j] += cm * v

    rch = [0] * L
    sch = [0] * L

    def rec_s(i, cap, partial, srest):
        if partial + srest[i] > Qe:
            return
        if i == L:
            emit(rch, sch)
            return
        for s in range(cap + 1):
            p2 = partial + h_level(i, rch[i], s)
            if p2 + srest[i + 1] <= Qe:
                sch[i] = s
                rec_s(i + 1, s, p2, srest)
        sch[i] = 0

    def rec_r(i, cap, acc_g):
        if i == L:
            # r-chain fixed: exact r-part with minimal linear coefs
            a_part = sum(rch[j] * rch[j] + rho_min[j] * rch[j] for j in range(L))
            smin = [0] * (L + 1)
            for j in range(L - 1, -1, -1):
                s_hi = max(0, (rch[j] - sigma_min[j]) // 2,
                           (-(rch[j] + sigma_min[j])) // 2) + 2
                smin[j] = smin[j + 1] + min(h_level(j, rch[j], s)
                                            for s in range(s_hi + 1))
            rec_s(0, U, a_part, smin)
            return
        hi = min(cap, U)
        for r in range(hi + 1):
            gi = g(i, r)
            if acc_g + gi + grest[i + 1] <= Qe:
                rch[i] = r
                rec_r(i + 1, r, acc_g + gi)
        rch[i] = 0

    rec_r(0, r1_cap, 0)

    data = {}
    for zkey, row in acc.items():
        for idx, c in enumerate(row):
            if c:
                data[(idx + OFF, zkey)] = c
    out_zcap = None if z_one else zcap
    return TruncSeries(order, data, low=OFF, zcap=out_zcap)


def eval_s(idx: SIndex, order, zcap=None, z_one=False) -> TruncSeries:
    return eval_terms(idx.m, [(idx.rho, idx.sigma, Poly.one())], order,
                      zcap=zcap, z_one=z_one)


def eval_sexpr(expr: SExpr, order, zcap=None, z_one=False) -> TruncSeries:
    return eval_terms(expr.m,
                      [(i.rho, i.sigma, c) for i, c in expr.terms.items()],
                      order, zcap=zcap, z_one=z_one)
