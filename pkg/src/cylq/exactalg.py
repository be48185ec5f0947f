"""Sparse Laurent polynomials in q, z and truncated q-series, over Z.

A polynomial is a map from exponent pairs (a, b), standing for q^a * z^b,
to nonzero integer coefficients.  Exponents may be negative.  Python ints
give exact arbitrary-precision arithmetic for free.

A TruncSeries is the same map plus a validity window.  The contract is:

* the series has no terms with q-exponent below `low` (a proven floor),
* coefficients are exact for every q-exponent from `low` through `order`
  inclusive (a missing key means the coefficient is zero there),
* nothing is claimed above `order`,
* if `zcap` is not None, coefficients are only tracked for z-exponents
  up to `zcap`; if it is None the z-direction is exact.

Arithmetic propagates the window honestly.  In particular the product of
two series known through orders Qa and Qb with q-valuations va and vb is
valid through min(Qa + vb, Qb + va), not merely min(Qa, Qb).
"""

from __future__ import annotations

import re
from math import gcd


class Poly:
    """Immutable-by-convention sparse Laurent polynomial in q and z."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        d = {}
        if terms:
            it = terms.items() if isinstance(terms, dict) else terms
            for ab, c in it:
                if c:
                    nc = d.get(ab, 0) + c
                    if nc:
                        d[ab] = nc
                    elif ab in d:
                        del d[ab]
        self.terms = d

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({(0, 0): 1})

    @classmethod
    def const(cls, n):
        return cls({(0, 0): n}) if n else cls()

    @classmethod
    def mono(cls, coef, qe=0, ze=0):
        return cls({(qe, ze): coef}) if coef else cls()

    @classmethod
    def q(cls, e=1):
        return cls({(e, 0): 1})

    @classmethod
    def z(cls, e=1):
        return cls({(0, e): 1})

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = Poly.const(other)
        d = dict(self.terms)
        for ab, c in other.terms.items():
            nc = d.get(ab, 0) + c
            if nc:
                d[ab] = nc
            else:
                d.pop(ab, None)
        p = Poly.__new__(Poly)
        p.terms = d
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Poly.__new__(Poly)
        p.terms = {ab: -c for ab, c in self.terms.items()}
        return p

    def __sub__(self, other):
        if isinstance(other, int):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return Poly()
            p = Poly.__new__(Poly)
            p.terms = {ab: c * other for ab, c in self.terms.items()}
            return p
        d = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                ab = (a1 + a2, b1 + b2)
                nc = d.get(ab, 0) + c1 * c2
                if nc:
                    d[ab] = nc
                else:
                    del d[ab]
        p = Poly.__new__(Poly)
        p.terms = d
        return p

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        return f"Poly({self.render()})"

    # -- inspection ----------------------------------------------------

    def min_q(self):
        return min(a for a, _ in self.terms) if self.terms else 0

    def max_q(self):
        return max(a for a, _ in self.terms) if self.terms else 0

    def min_z(self):
        return min(b for _, b in self.terms) if self.terms else 0

    def max_z(self):
        return max(b for _, b in self.terms) if self.terms else 0

    def total_degree(self):
        return max((a + b for a, b in self.terms), default=0)

    def coeff(self, qe, ze=0):
        return self.terms.get((qe, ze), 0)

    def is_monomial(self):
        return len(self.terms) == 1

    # -- normal forms ---------------------------------------------------

    def content(self):
        """Return (g, a0, b0): positive gcd of coefficients and the minimal
        exponents.  The zero polynomial reports (0, 0, 0)."""
        if not self.terms:
            return 0, 0, 0
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        a0 = min(a for a, _ in self.terms)
        b0 = min(b for _, b in self.terms)
        return g, a0, b0

    def primitive(self):
        """Divide out the content.  Returns ((g, a0, b0), reduced_poly)."""
        g, a0, b0 = self.content()
        if not g:
            return (0, 0, 0), Poly()
        p = Poly.__new__(Poly)
        p.terms = {(a - a0, b - b0): c // g for (a, b), c in self.terms.items()}
        return (g, a0, b0), p

    def leading_term(self):
        """Term with the lexicographically largest (q-exp, z-exp)."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        ab = max(self.terms)
        return ab, self.terms[ab]

    def divexact(self, other):
        """Exact division; raises ValueError when `other` does not divide."""
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        if not self.terms:
            return Poly()
        rem = dict(self.terms)
        (la, lb), lc = other.leading_term()
        # In any exact factorisation the minimal exponents add up per
        # variable, so every quotient monomial is bounded below by the
        # componentwise difference of minimal exponents; checking against
        # that box guarantees termination (a lex bound does not: the second
        # coordinate could then decrease forever at fixed first coordinate).
        fa = min(a for a, _ in self.terms) - min(a for a, _ in other.terms)
        fb = min(b for _, b in self.terms) - min(b for _, b in other.terms)
        out = {}
        while rem:
            (a, b) = max(rem)
            c = rem[(a, b)]
            if c % lc:
                raise ValueError("not exactly divisible (coefficient)")
            qa, qb, qc = a - la, b - lb, c // lc
            if qa < fa or qb < fb:
                raise ValueError("not exactly divisible")
            out[(qa, qb)] = qc
            for (a2, b2), c2 in other.terms.items():
                ab = (qa + a2, qb + b2)
                nc = rem.get(ab, 0) - qc * c2
                if nc:
                    rem[ab] = nc
                else:
                    rem.pop(ab, None)
        p = Poly.__new__(Poly)
        p.terms = out
        return p

    # -- substitutions ---------------------------------------------------

    def z_shift(self, n):
        """Substitute z -> z * q^n."""
        if not n:
            return self
        p = Poly.__new__(Poly)
        p.terms = {(a + n * b, b): c for (a, b), c in self.terms.items()}
        return p

    def subs_z0(self):
        """Set z = 0.  Terms with negative z-exponent make this ill-defined."""
        if any(b < 0 for _, b in self.terms):
            raise ValueError("pole at z = 0")
        p = Poly.__new__(Poly)
        p.terms = {(a, 0): c for (a, b), c in self.terms.items() if b == 0}
        return p

    def subs_z1(self):
        """Set z = 1, collapsing onto the q-line."""
        d = {}
        for (a, b), c in self.terms.items():
            nc = d.get((a, 0), 0) + c
            if nc:
                d[(a, 0)] = nc
            else:
                d.pop((a, 0), None)
        p = Poly.__new__(Poly)
        p.terms = d
        return p

    # -- text form --------------------------------------------------------

    def render(self):
        """Canonical text form, terms in ascending (q-exp, z-exp) order."""
        if not self.terms:
            return "0"
        pieces = []
        for (a, b) in sorted(self.terms):
            c = self.terms[(a, b)]
            mono = []
            if a:
                mono.append("q" if a == 1 else f"q^{a}")
            if b:
                mono.append("z" if b == 1 else f"z^{b}")
            mag = abs(c)
            if mono:
                body = "*".join(mono)
                if mag != 1:
                    body = f"{mag}*{body}"
            else:
                body = str(mag)
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)

    _FACTOR_RE = re.compile(r"^([qz])(?:\^(-?\d+))?$")

    @classmethod
    def parse(cls, text):
        """Inverse of render().  Accepts any sign/space arrangement of the
        same term grammar."""
        s = text.strip()
        if s == "0":
            return cls()
        s = s.replace("^-", "^~")          # shield exponent signs
        s = s.replace("-", "+-").replace("^~", "^-")
        chunks = [c.strip() for c in s.split("+") if c.strip()]
        terms = []
        for chunk in chunks:
            sign = 1
            while chunk.startswith("-"):
                sign = -sign
                chunk = chunk[1:].strip()
            coef = sign
            a = b = 0
            for factor in chunk.split("*"):
                factor = factor.strip()
                if not factor:
                    raise ValueError(f"bad term in {text!r}")
                if factor.isdigit():
                    coef *= int(factor)
                    continue
                m = cls._FACTOR_RE.match(factor)
                if not m:
                    raise ValueError(f"bad factor {factor!r} in {text!r}")
                e = int(m.group(2)) if m.group(2) is not None else 1
                if m.group(1) == "q":
                    a += e
                else:
                    b += e
            terms.append(((a, b), coef))
        return cls(terms)


# -- polynomial gcd ---------------------------------------------------------
#
# Primitive PRS, treating q as the main variable with coefficients in Z[z].
# Laurent inputs are normalised by stripping the monomial part first; the
# result is primitive with minimal exponents zero and a positive leading
# coefficient, so gcd(a, b) is a canonical representative of the gcd up to
# units q^i * z^j.

def _zc_content(f):
    """Integer content of a dense int-list polynomial."""
    g = 0
    for c in f:
        g = gcd(g, c)
    return g


def _zc_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _zc_mul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _zc_trim(out)


def _zc_scale(f, n):
    return _zc_trim([c * n for c in f]) if n else []


def _zc_sub(f, g):
    out = [0] * max(len(f), len(g))
    for i, c in enumerate(f):
        out[i] = c
    for i, c in enumerate(g):
        out[i] -= c
    return _zc_trim(out)


def _zc_divexact_int(f, n):
    return [c // n for c in f]


def _zc_prem(a, b):
    """Pseudo-remainder of dense int-list polynomials over Z."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        head = a[-1]
        a = _zc_scale(a, lb)
        for i, c in enumerate(b):
            a[i + shift] -= head * c
        a = _zc_trim(a)
    return a


def _zc_gcd(a, b):
    """Gcd of univariate integer polynomials, primitive with positive lead."""
    a, b = _zc_trim(list(a)), _zc_trim(list(b))
    ca, cb = _zc_content(a), _zc_content(b)
    cg = gcd(ca, cb)
    if not a or not b:
        f = a or b
        return _zc_divexact_int(f, _zc_content(f)) if f else []
    a = _zc_divexact_int(a, ca)
    b = _zc_divexact_int(b, cb)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _zc_prem(a, b)
        if r:
            r = _zc_divexact_int(r, _zc_content(r))
        a, b = b, r
    if a[-1] < 0:
        a = [-c for c in a]
    return _zc_scale(a, cg) if cg > 1 else a


def _zq_split(p):
    """Poly -> (int content, dict q-degree -> dense z-coefficient list),
    with minimal exponents shifted to zero."""
    (g, a0, b0), prim = p.primitive()
    rows = {}
    for (a, b), c in prim.terms.items():
        row = rows.setdefault(a, {})
        row[b] = c
    out = {}
    for a, row in rows.items():
        lst = [0] * (max(row) + 1)
        for b, c in row.items():
            lst[b] = c
        out[a] = lst
    return g, out


def _zq_content(rows):
    """Z[z]-content of a q-polynomial given as q-degree -> z-list."""
    it = iter(rows.values())
    acc = list(next(it))
    for f in it:
        acc = _zc_gcd(acc, f)
        if acc == [1]:
            break
    return acc


def _zq_divexact_z(rows, d):
    """Divide every z-coefficient exactly by the z-polynomial d."""
    if d == [1]:
        return rows
    out = {}
    for a, f in rows.items():
        q, r = _zc_divmod_exact(f, d)
        out[a] = q
    return out


def _zc_divmod_exact(f, d):
    """Exact division of int-list polynomials; remainder must be zero."""
    f = list(f)
    q = [0] * max(1, len(f) - len(d) + 1)
    while f and len(f) >= len(d):
        shift = len(f) - len(d)
        c = f[-1]
        if c % d[-1]:
            raise ValueError("inexact z-coefficient division")
        k = c // d[-1]
        q[shift] = k
        for i, cc in enumerate(d):
            f[i + shift] -= k * cc
        f = _zc_trim(f)
    if f:
        raise ValueError("inexact z-coefficient division")
    return _zc_trim(q), []


def _zq_prem(A, B):
    """Pseudo-remainder in q of dicts q-degree -> z-list over Z[z]."""
    A = {a: list(f) for a, f in A.items()}
    db = max(B)
    lb = B[db]
    da = max(A) if A else -1
    while A and max(A) >= db:
        daA = max(A)
        head = A.pop(daA)
        shift = daA - db
        # A = lb * A - head * q^shift * B
        A = {a: _zc_mul(f, lb) for a, f in A.items()}
        for a, f in B.items():
            if a == db:
                continue
            key = a + shift
            cur = A.get(key, [])
            nf = _zc_sub(cur, _zc_mul(head, f))
            if nf:
                A[key] = nf
            else:
                A.pop(key, None)
        A = {a: f for a, f in A.items() if f}
    return A


def _zq_join(g, rows):
    terms = {}
    for a, f in rows.items():
        for b, c in enumerate(f):
            if c:
                terms[(a, b)] = c * g
    return Poly(terms)


def poly_gcd(p, q_):
    """Gcd of two Laurent polynomials, canonical primitive representative."""
    if not p.terms:
        return q_.primitive()[1] if q_.terms else Poly()
    if not q_.terms:
        return p.primitive()[1]
    gp, A = _zq_split(p)
    gq, B = _zq_split(q_)
    gint = gcd(gp, gq)
    ca, cb = _zq_content(A), _zq_content(B)
    cg = _zc_gcd(ca, cb)
    A = _zq_divexact_z(A, ca)
    B = _zq_divexact_z(B, cb)
    if max(A) < max(B):
        A, B = B, A
    while B:
        R = _zq_prem(A, B)
        if R:
            R = _zq_divexact_z(R, _zq_content(R))
        A, B = B, R
    rows = _zq_divexact_z(A, _zq_content(A))
    out = {}
    for a, f in rows.items():
        g = _zc_mul(f, cg)
        out[a] = g
    res = _zq_join(1, out)
    if res.terms:
        _, lc = res.leading_term()
        if lc < 0:
            res = -res
    return res * gint if gint != 1 else res


class TruncSeries:
    """Laurent series in q (coefficients Laurent polynomials in z) known
    exactly on the window low <= q-exponent <= order."""

    __slots__ = ("order", "low", "zcap", "terms")

    def __init__(self, order, terms=None, low=0, zcap=None):
        if low > order + 1:
            low = order + 1
        self.order = order
        self.low = low
        self.zcap = zcap
        d = {}
        if terms:
            it = terms.items() if isinstance(terms, dict) else terms
            for (a, b), c in it:
                if c and low <= a <= order and (zcap is None or b <= zcap):
                    nc = d.get((a, b), 0) + c
                    if nc:
                        d[(a, b)] = nc
                    else:
                        del d[(a, b)]
        self.terms = d

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, order, zcap=None):
        return cls(order, None, low=0, zcap=zcap)

    @classmethod
    def one(cls, order, zcap=None):
        return cls(order, {(0, 0): 1}, low=0, zcap=zcap)

    @classmethod
    def from_poly(cls, p, order, zcap=None):
        low = min(0, p.min_q())
        return cls(order, p.terms, low=low, zcap=zcap)

    # -- window helpers --------------------------------------------------

    def valuation(self):
        """Actual q-valuation: min stored exponent, or order + 1 if empty
        (all that is known is that there is nothing through `order`)."""
        return min((a for a, _ in self.terms), default=self.order + 1)

    def z_val(self):
        """Conservative floor for z-exponents: min stored, capped at 0."""
        return min(0, min((b for _, b in self.terms), default=0))

    def truncate(self, new_order):
        if new_order >= self.order:
            return self
        return TruncSeries(new_order, self.terms, low=self.low, zcap=self.zcap)

    # -- arithmetic --------------------------------------------------------

    def _windows_meet(self, other):
        order = min(self.order, other.order)
        low = max(self.low, other.low)
        if self.zcap is None:
            zcap = other.zcap
        elif other.zcap is None:
            zcap = self.zcap
        else:
            zcap = min(self.zcap, other.zcap)
        return order, low, zcap

    def __add__(self, other):
        if isinstance(other, (int, Poly)):
            other = TruncSeries.from_poly(
                other if isinstance(other, Poly) else Poly.const(other),
                self.order, zcap=self.zcap)
        order, low, zcap = self._windows_meet(other)
        d = dict(self.terms)
        for ab, c in other.terms.items():
            nc = d.get(ab, 0) + c
            if nc:
                d[ab] = nc
            else:
                del d[ab]
        return TruncSeries(order, d, low=min(low, self.valuation(), other.valuation()), zcap=zcap)

    __radd__ = __add__

    def __neg__(self):
        s = TruncSeries.__new__(TruncSeries)
        s.order, s.low, s.zcap = self.order, self.low, self.zcap
        s.terms = {ab: -c for ab, c in self.terms.items()}
        return s

    def __sub__(self, other):
        if isinstance(other, (int, Poly)):
            other = TruncSeries.from_poly(
                other if isinstance(other, Poly) else Poly.const(other),
                self.order, zcap=self.zcap)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, n):
        if not n:
            return TruncSeries.zero(self.order, zcap=self.zcap)
        s = TruncSeries.__new__(TruncSeries)
        s.order, s.low, s.zcap = self.order, self.low, self.zcap
        s.terms = {ab: n * c for ab, c in self.terms.items()}
        return s

    def mul_poly(self, p):
        """Multiply by an exact polynomial."""
        if not p.terms:
            return TruncSeries.zero(self.order, zcap=self.zcap)
        order = self.order + p.min_q()
        low = self.low + p.min_q()
        zcap = self.zcap if self.zcap is None else self.zcap + p.min_z()
        d = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in p.terms.items():
                ab = (a1 + a2, b1 + b2)
                nc = d.get(ab, 0) + c1 * c2
                if nc:
                    d[ab] = nc
                else:
                    del d[ab]
        return TruncSeries(order, d, low=low, zcap=zcap)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, Poly):
            return self.mul_poly(other)
        va, vb = self.valuation(), other.valuation()
        order = min(self.order + vb, other.order + va)
        low = va + vb
        if self.zcap is None and other.zcap is None:
            zcap = None
        else:
            cands = []
            if self.zcap is not None:
                cands.append(self.zcap + other.z_val())
            if other.zcap is not None:
                cands.append(other.zcap + self.z_val())
            zcap = min(cands)
        d = {}
        for (a1, b1), c1 in self.terms.items():
            if a1 + vb > order:
                continue
            for (a2, b2), c2 in other.terms.items():
                a = a1 + a2
                if a > order:
                    continue
                ab = (a, b1 + b2)
                nc = d.get(ab, 0) + c1 * c2
                if nc:
                    d[ab] = nc
                else:
                    del d[ab]
        return TruncSeries(order, d, low=low, zcap=zcap)

    __rmul__ = __mul__

    def invert(self):
        """Multiplicative inverse.

        Requires the lowest q-slice to be a single monomial u*q^v*z^w with
        u = +-1 and w = 0 (true for every series we ever invert: the lowest
        slice is a constant).  Valid through order - 2*v.
        """
        v = self.valuation()
        if v > self.order:
            raise ZeroDivisionError("cannot invert a series that is zero through its order")
        slice0 = [(b, c) for (a, b), c in self.terms.items() if a == v]
        if len(slice0) != 1 or slice0[0][0] != 0 or slice0[0][1] not in (1, -1):
            raise ValueError("inverse requires a unit monomial lowest slice")
        u = slice0[0][1]
        n = self.order - v          # relative orders available
        out_order = self.order - 2 * v
        # relative-exponent views; rel[t] is a dict z-exp -> coeff
        rel = {}
        for (a, b), c in self.terms.items():
            rel.setdefault(a - v, {})[b] = c
        inv = {0: {0: u}}           # u^{-1} == u for u = +-1
        for t in range(1, n + 1):
            acc = {}
            for j in range(1, t + 1):
                sj = rel.get(j)
                if not sj:
                    continue
                ij = inv.get(t - j)
                if not ij:
                    continue
                for b1, c1 in sj.items():
                    for b2, c2 in ij.items():
                        b = b1 + b2
                        nc = acc.get(b, 0) + c1 * c2
                        if nc:
                            acc[b] = nc
                        else:
                            del acc[b]
            slot = {}
            for b, c in acc.items():
                if self.zcap is None or b <= self.zcap:
                    slot[b] = -u * c
            if slot:
                inv[t] = slot
        d = {}
        for t, zs in inv.items():
            a = t - v
            if a <= out_order:
                for b, c in zs.items():
                    d[(a, b)] = c
        return TruncSeries(out_order, d, low=-v, zcap=self.zcap)

    def subs_z(self, n):
        """Substitute z -> z * q^n for n >= 0."""
        if n < 0:
            raise ValueError("only nonnegative z-shifts are supported on series")
        if n == 0:
            return self
        order = self.order + n * self.z_val()
        low = self.low + n * self.z_val()
        d = {}
        for (a, b), c in self.terms.items():
            d[(a + n * b, b)] = c
        return TruncSeries(order, d, low=low, zcap=self.zcap)

    # -- queries ------------------------------------------------------------

    def coeff(self, qe, ze=0):
        if qe > self.order:
            raise ValueError(f"coefficient q^{qe} outside validity window")
        if self.zcap is not None and ze > self.zcap:
            raise ValueError(f"coefficient z^{ze} outside z window")
        return self.terms.get((qe, ze), 0)

    def q_slice(self, qe):
        """Map z-exp -> coeff at the given q-exponent."""
        if qe > self.order:
            raise ValueError(f"slice q^{qe} outside validity window")
        return {b: c for (a, b), c in self.terms.items() if a == qe}

    def z_slice(self, ze):
        """Map q-exp -> coeff at the given z-exponent."""
        return {a: c for (a, b), c in self.terms.items() if b == ze}

    def collapse_z(self):
        """Set z = 1.  Only sound when the z-direction is exact."""
        if self.zcap is not None:
            raise ValueError("cannot set z = 1 on a z-truncated series")
        d = {}
        for (a, b), c in self.terms.items():
            nc = d.get((a, 0), 0) + c
            if nc:
                d[(a, 0)] = nc
            else:
                del d[(a, 0)]
        return TruncSeries(self.order, d, low=self.low, zcap=None)

    def is_zero(self, through=None):
        hi = self.order if through is None else min(through, self.order)
        return all(c == 0 for (a, _), c in self.terms.items() if a <= hi)

    def agree(self, other, through=None):
        """Exact agreement on the overlap of the validity windows."""
        hi = min(self.order, other.order)
        if through is not None:
            hi = min(hi, through)
        zc = None
        if self.zcap is not None or other.zcap is not None:
            zc = min(c for c in (self.zcap, other.zcap) if c is not None)
        keys = set(self.terms) | set(other.terms)
        for (a, b) in keys:
            if a > hi:
                continue
            if zc is not None and b > zc:
                continue
            if self.terms.get((a, b), 0) != other.terms.get((a, b), 0):
                return False
        return True

    def to_poly(self):
        return Poly(self.terms)

    def render(self):
        body = Poly(self.terms).render()
        return f"{body} + O(q^{self.order + 1})"

    def __repr__(self):
        return f"TruncSeries(order={self.order}, low={self.low}, zcap={self.zcap}, {len(self.terms)} terms)"

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self.order == other.order and self.terms == other.terms)


def divide(num: TruncSeries, den: TruncSeries) -> TruncSeries:
    """Series division via invert(); same unit-lowest-slice requirement."""
    return num * den.invert()
