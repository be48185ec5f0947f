"""Ideal-membership prover over the relation lattice.

A candidate identity is an SExpr that should be a Z[q,z]-linear combination
of contiguous relations.  We decide membership by sparse fraction-free
Gaussian elimination where matrix columns are S-term indices and each row
remembers, in a provenance map, which named relations it is built from.
Eliminations never leave the polynomial ring: row' = lc(pivot) * row -
lc(row) * pivot, followed by removal of the row content (integer gcd and
common q^a z^b factor).  Provenance coefficients pick up those divisions,
so they live in the fraction field and are the only rational objects here.

A successful reduction of a target row to zero yields a certificate: the
list of (relation name, coefficient), which an independent checker replays
by pure series-free algebra (expand bodies, accumulate column by column,
compare).  Certificates needing hundreds of relations are found by a
scalar search modulo a prime followed by rational-function interpolation
of the coefficients; the exact replay is what makes them trustworthy.

Column order: S-indices compared by (max |entry|, entry sum, raw tuple) on
the concatenated (rho, sigma); the leading column of a row is its largest
index, so elimination walks from extreme indices inward, matching the way
the relations connect far-out lattice points to near ones.
"""

from __future__ import annotations

from itertools import product as iproduct
from math import gcd, isqrt
from typing import NamedTuple

from .exactalg import Poly, poly_gcd
from .relations import RelName, Relation, instantiate, relations_touching
from .ssums import SExpr, SIndex, sindex

TARGET = "target"   # provenance key reserved for the row being reduced

_GCD_TERM_LIMIT = 80   # skip fraction gcd reduction above this many terms


def column_key(idx: SIndex):
    cat = idx.rho + idx.sigma
    return (max(abs(x) for x in cat), sum(cat), cat)


class PolyFrac:
    """Quotient of two integer Laurent polynomials, kept reduced.

    Normalisation strips the common integer content and monomial factor,
    points the denominator's leading coefficient positive, collapses exact
    quotients, and falls back to a full polynomial gcd when neither side
    divides the other.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        den = Poly.one() if den is None else den
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = Poly.zero(), Poly.one()
            return
        gn, an, bn = num.content()
        gd, ad, bd = den.content()
        mon = Poly.mono(gcd(gn, gd), min(an, ad), min(bn, bd))
        num = num.divexact(mon)
        den = den.divexact(mon)
        try:
            num, den = num.divexact(den), Poly.one()
        except ValueError:
            try:
                den = den.divexact(num)
                num = Poly.one()
            except ValueError:
                # full gcd pays off only while both sides stay small; the
                # huge transient fractions of fraction-free provenance are
                # left unreduced exactly as before
                if len(num.terms) + len(den.terms) <= _GCD_TERM_LIMIT:
                    g = poly_gcd(num, den)
                    if len(g.terms) > 1:
                        num = num.divexact(g)
                        den = den.divexact(g)
        # denominator: monomial-free (min exponents zero) with positive
        # trailing coefficient; the numerator absorbs units
        _, ad, bd = den.content()
        if (ad, bd) != (0, 0):
            den = den.divexact(Poly.mono(1, ad, bd))
            num = num * Poly.mono(1, -ad, -bd)
        if den.terms[min(den.terms)] < 0:
            num, den = -num, -den
        self.num, self.den = num, den

    @classmethod
    def one(cls):
        return cls(Poly.one())

    @classmethod
    def zero(cls):
        return cls(Poly.zero())

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, Poly):
            other = PolyFrac(other)
        if not isinstance(other, PolyFrac):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("PolyFrac is unhashable")

    def __add__(self, other):
        if self.den == other.den:
            return PolyFrac(self.num + other.num, self.den)
        return PolyFrac(self.num * other.den + other.num * self.den,
                        self.den * other.den)

    def __sub__(self, other):
        if self.den == other.den:
            return PolyFrac(self.num - other.num, self.den)
        return PolyFrac(self.num * other.den - other.num * self.den,
                        self.den * other.den)

    def __neg__(self):
        return PolyFrac(-self.num, self.den)

    def __mul__(self, other):
        if isinstance(other, Poly):
            other = PolyFrac(other)
        return PolyFrac(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if isinstance(other, Poly):
            other = PolyFrac(other)
        if not other.num:
            raise ZeroDivisionError("division by zero fraction")
        return PolyFrac(self.num * other.den, self.den * other.num)

    def is_one(self):
        return self.num == self.den

    def render(self) -> str:
        return f"{self.num.render()} / {self.den.render()}"

    @classmethod
    def parse(cls, text: str) -> "PolyFrac":
        num, sep, den = text.partition(" / ")
        if not sep:
            raise ValueError(f"missing ' / ' in fraction {text!r}")
        return cls(Poly.parse(num), Poly.parse(den))

    def __repr__(self):
        return f"PolyFrac({self.render()})"


class Row:
    """Sparse matrix row: S-index -> Poly entries plus provenance.

    Provenance maps RelName (or the TARGET sentinel) to the PolyFrac factor
    with which that source row participates; expanding it always reproduces
    the entries exactly.
    """

    __slots__ = ("entries", "prov")

    def __init__(self, entries, prov):
        self.entries = entries
        self.prov = prov

    @classmethod
    def from_relation(cls, rel: Relation) -> "Row":
        return cls(dict(rel.body.terms), {rel.name: PolyFrac.one()})

    @classmethod
    def from_target(cls, h: SExpr) -> "Row":
        return cls(dict(h.terms), {TARGET: PolyFrac.one()})

    def __bool__(self):
        return bool(self.entries)

    def leading(self) -> SIndex:
        return max(self.entries, key=column_key)

    def support_size(self) -> int:
        return len(self.entries)

    def normalized(self) -> "Row":
        """Strip the common integer/monomial content and point the leading
        entry's leading coefficient positive."""
        if not self.entries:
            return self
        g, a0, b0 = 0, None, None
        for p in self.entries.values():
            pg, pa, pb = p.content()
            g = gcd(g, pg)
            a0 = pa if a0 is None else min(a0, pa)
            b0 = pb if b0 is None else min(b0, pb)
        lead = self.entries[self.leading()]
        if lead.leading_term()[1] < 0:
            g = -g
        mon = Poly.mono(g, a0, b0)
        if mon == Poly.one():
            return self
        entries = {t: p.divexact(mon) for t, p in self.entries.items()}
        prov = {n: f / mon for n, f in self.prov.items()}
        return Row(entries, prov)


class CoefficientSwell(Exception):
    """Elimination work estimate exceeded the optional budget; the caller
    should abandon the exact echelon route and fall back to witness search."""


def eliminate(row: Row, pivot: Row, budget=None) -> Row:
    """Fraction-free elimination of row's leading column against a pivot
    sharing that leading column.

    The optional budget caps the work estimate (total row terms times total
    pivot terms) of a single step.  Deep elimination chains can swell the
    polynomial entries multiplicatively, and one oversized step here is the
    cheapest reliable signal that the whole chain is doomed; healthy proofs
    stay three orders of magnitude below the default prover budget."""
    c = pivot.leading()
    a = pivot.entries[c]
    b = row.entries[c]
    if budget is not None:
        w = sum(len(p.terms) for p in row.entries.values())
        w *= sum(len(p.terms) for p in pivot.entries.values())
        if w > budget:
            raise CoefficientSwell(f"elimination step needs ~{w} term "
                                   f"products, budget {budget}")
    entries = {t: p * a for t, p in row.entries.items()}
    for t, p in pivot.entries.items():
        e = entries.get(t, Poly.zero()) - p * b
        if e:
            entries[t] = e
        else:
            entries.pop(t, None)
    prov = {n: f * a for n, f in row.prov.items()}
    for n, f in pivot.prov.items():
        nf = prov.get(n, PolyFrac.zero()) - f * b
        if nf:
            prov[n] = nf
        else:
            prov.pop(n, None)
    return Row(entries, prov).normalized()


def expand_provenance(m: int, prov: dict, target: SExpr | None = None) -> SExpr:
    """Rebuild the SExpr a provenance map describes, clearing the common
    denominator first; returns den * Sigma f_x * x_body.  Used by the
    integrity self-checks."""
    den = Poly.one()
    for f in prov.values():
        den = den * f.den
    out = SExpr(m)
    for name, f in prov.items():
        body = target if name == TARGET else instantiate(m, name).body
        out = out + body.scale(f.num * den.divexact(f.den))
    return out, den


# ---------------------------------------------------------------------------
# static matrices
# ---------------------------------------------------------------------------

class RelMatrix:
    """A batch of relation rows, echelonizable in place.

    After echelonize(): `echelon` maps each leading column to its row,
    leading columns are all distinct, and `redundant` collects the
    provenance of rows that reduced to zero (dependency witnesses).
    """

    def __init__(self, modulus, rows):
        self.modulus = modulus
        self.rows = list(rows)
        self.echelon: dict[SIndex, Row] | None = None
        self.redundant: list[dict] = []

    def columns(self) -> dict[SIndex, int]:
        """Deterministic column numbering over the union of supports,
        extreme indices first."""
        cols = set()
        for row in self.rows:
            cols.update(row.entries)
        ordered = sorted(cols, key=column_key, reverse=True)
        return {c: i for i, c in enumerate(ordered)}

    def echelon_rows(self) -> list[Row]:
        if self.echelon is None:
            raise ValueError("matrix not echelonized")
        return [self.echelon[c]
                for c in sorted(self.echelon, key=column_key, reverse=True)]


def build_matrix(relations) -> RelMatrix:
    relations = list(relations)
    if not relations:
        raise ValueError("empty relation list")
    m = relations[0].body.m
    if any(rel.body.m != m for rel in relations):
        raise ValueError("relations mix moduli")
    return RelMatrix(m, (Row.from_relation(rel) for rel in relations))


def _reduce_against(echelon: dict, row: Row, budget=None) -> Row:
    while row.entries:
        c = row.leading()
        pivot = echelon.get(c)
        if pivot is None:
            break
        row = eliminate(row, pivot, budget)
    return row


def echelonize(mat: RelMatrix) -> RelMatrix:
    if mat.echelon is not None:
        return mat
    ech: dict[SIndex, Row] = {}
    for row in mat.rows:
        row = row.normalized()
        row = _reduce_against(ech, row)
        if row.entries:
            ech[row.leading()] = row
        else:
            mat.redundant.append(row.prov)
    mat.echelon = ech
    return mat


def reduce(mat: RelMatrix, h: SExpr) -> tuple[SExpr, dict]:
    """Reduce a target against the echelonized matrix.

    Returns (remainder, combination).  The remainder is the reduced row as
    an SExpr, scaled by the nonzero fraction-free multiplier that
    accumulated on the target (membership is scale-invariant).  The
    combination maps RelName -> PolyFrac such that, when the remainder is
    empty, h = Sigma coeff * body exactly.
    """
    if mat.modulus != h.m:
        raise ValueError("modulus mismatch between matrix and target")
    echelonize(mat)
    row = _reduce_against(mat.echelon, Row.from_target(h))
    alpha = row.prov[TARGET]
    comb = {n: -(f / alpha) for n, f in row.prov.items() if n != TARGET}
    return SExpr(h.m, dict(row.entries)), comb


class Certificate(NamedTuple):
    modulus: int
    target: str
    entries: tuple   # ((RelName, PolyFrac), ...) sorted by name

    def max_entry_magnitude(self) -> int:
        return max((abs(x) for name, _ in self.entries
                    for x in name.rho + name.sigma), default=0)


class NotAMember(ValueError):
    def __init__(self, remainder: SExpr):
        super().__init__("target is not in the row space "
                         f"(remainder has {len(remainder.terms)} terms)")
        self.remainder = remainder


def _certificate(m, target_desc, comb) -> Certificate:
    entries = tuple(sorted(((n, f) for n, f in comb.items() if f),
                           key=lambda e: e[0]))
    return Certificate(m, target_desc, entries)


def extract_certificate(mat: RelMatrix, h: SExpr, target="") -> Certificate:
    remainder, comb = reduce(mat, h)
    if not remainder.is_zero():
        raise NotAMember(remainder)
    return _certificate(mat.modulus, target, comb)


def verify_certificate(cert: Certificate, h: SExpr) -> bool:
    """Independent replay: no matrices, just relation bodies and exact
    fraction arithmetic.

    h minus the claimed combination is accumulated column by column.  Terms
    are first bucketed by denominator inside each column, so the fraction
    additions only ever combine the few distinct denominators a column
    actually sees (a single cleared global denominator would blow up on
    certificates with hundreds of entries).
    """
    if cert.modulus != h.m:
        raise ValueError("modulus mismatch between certificate and target")
    per_col: dict[SIndex, dict] = {}

    def add(idx, num, den):
        bucket = per_col.setdefault(idx, {})
        key = tuple(sorted(den.terms.items()))
        cur = bucket.get(key)
        s = num if cur is None else cur[0] + num
        if s:
            bucket[key] = (s, den)
        else:
            bucket.pop(key, None)

    for idx, poly in h.terms.items():
        add(idx, poly, Poly.one())
    for name, f in cert.entries:
        body = instantiate(cert.modulus, name).body
        for idx, poly in body.terms.items():
            add(idx, -(poly * f.num), f.den)
    for bucket in per_col.values():
        total = PolyFrac.zero()
        for num, den in bucket.values():
            total = total + PolyFrac(num, den)
        if total:
            return False
    return True


def render_certificate(cert: Certificate, status="proved") -> str:
    lines = [f"modulus: {cert.modulus}",
             f"target: {cert.target}",
             f"status: {status}"]
    for name, f in cert.entries:
        lines.append(f"{name.render()} : {f.render()}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> Certificate:
    numbered = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1)
                if ln.strip()]
    if len(numbered) < 3:
        raise ValueError("certificate too short")
    fields = {}
    for i, ln in numbered[:3]:
        key, sep, val = ln.partition(": ")
        if not sep:
            raise ValueError(f"line {i}: bad certificate header {ln!r}")
        fields[key] = (i, val)
    if "modulus" not in fields or not fields["modulus"][1].isdigit():
        raise ValueError("line %d: modulus must be an integer"
                         % fields.get("modulus", (1,))[0])
    if "target" not in fields:
        raise ValueError("certificate lacks a target header")
    if fields.get("status", (0, None))[1] != "proved":
        raise ValueError(f"unexpected status {fields.get('status')!r}")
    entries = []
    for i, ln in numbered[3:]:
        name_text, sep, frac_text = ln.partition(" : ")
        if not sep:
            raise ValueError(f"line {i}: bad certificate entry {ln!r}")
        try:
            entries.append((RelName.parse(name_text),
                            PolyFrac.parse(frac_text)))
        except ValueError as exc:
            raise ValueError(f"line {i}: {exc}") from None
    return Certificate(int(fields["modulus"][1]), fields["target"][1],
                       tuple(entries))


# ---------------------------------------------------------------------------
# scalar witness search
# ---------------------------------------------------------------------------
#
# Exact elimination with provenance bogs down once a proof needs hundreds of
# relations: fraction-free minors grow without bound even though the final
# combination has tiny coefficients.  The workaround is a two-stage scheme.
# Stage one decides WHICH relations matter by plain linear algebra over a
# word-sized prime field at a fixed (q, z) evaluation point; stage two
# recovers the exact coefficient of each surviving relation by sampling the
# support-restricted system at many points and reconstructing every
# coefficient as a rational function, one Cauchy interpolation per variable.
# Soundness never rests on the modular work: an assembled certificate is
# replayed exactly by verify_certificate before it is accepted.

MOD = (1 << 61) - 1
_LIFT_BOUND = isqrt(MOD // 2)

# evaluation points tried for the witness search, in order
WITNESS_POINTS = ((48271, 16807), (69621, 40692), (40014, 2531011))

# (numerator, denominator) degree bounds tried during reconstruction
DEGREE_LADDER = ((6, 6), (13, 13), (26, 26))


def _poly_at(poly: Poly, qv: int, zv: int, p: int = MOD) -> int:
    """Evaluate an integer Laurent polynomial at a point of F_p x F_p."""
    total = 0
    for (a, b), c in poly.terms.items():
        total = (total + c * pow(qv, a, p) * pow(zv, b, p)) % p
    return total


def _axpy(dst: dict, src: dict, f: int, p: int):
    """dst -= f * src over F_p, dropping zeros."""
    for k, v in src.items():
        nv = (dst.get(k, 0) - f * v) % p
        if nv:
            dst[k] = nv
        else:
            dst.pop(k, None)


class _ScalarRow:
    __slots__ = ("entries", "src", "log")

    def __init__(self, entries, src):
        self.entries = entries
        self.src = src
        self.log = []   # (column, factor) eliminations applied to this row


class WitnessSearch:
    """Find the relations a membership proof needs, modulo a prime.

    Rows are relation bodies evaluated at one (q, z) point; reduction is
    demand-driven like the exact prover, with an extra escalation that folds
    in every relation touching an origin-centered box of S-indices (shell by
    shell).  When the target row dies, back-substitution through per-row
    elimination logs recovers the set of source relations carrying nonzero
    weight.  Everything runs in fixed order, so the support is reproducible.
    """

    def __init__(self, m, cap, qv, zv, p=MOD, max_rows=400_000):
        self.m = m
        self.cap = cap
        self.qv = qv % p
        self.zv = zv % p
        self.p = p
        self.max_rows = max_rows
        self.pivots: dict[SIndex, _ScalarRow] = {}
        self.order: list[_ScalarRow] = []   # pivot rows in creation order
        self.used: set[RelName] = set()
        self.built = 0

    def _row(self, name: RelName) -> _ScalarRow:
        body = instantiate(self.m, name).body
        entries = {}
        for idx, poly in body.terms.items():
            v = _poly_at(poly, self.qv, self.zv, self.p)
            if v:
                entries[idx] = v
        return _ScalarRow(entries, name)

    def _reduce(self, row: _ScalarRow) -> _ScalarRow:
        while row.entries:
            c = max(row.entries, key=column_key)
            piv = self.pivots.get(c)
            if piv is None:
                break
            f = row.entries[c] * pow(piv.entries[c], -1, self.p) % self.p
            row.log.append((c, f))
            _axpy(row.entries, piv.entries, f, self.p)
        return row

    def _insert(self, name: RelName):
        if name in self.used:
            return
        self.used.add(name)
        self.built += 1
        row = self._reduce(self._row(name))
        if row.entries:
            self.pivots[max(row.entries, key=column_key)] = row
            self.order.append(row)

    def _fold_column(self, c: SIndex):
        for name in relations_touching(self.m, c, self.cap):
            self._insert(name)

    def _demand(self, target: dict) -> _ScalarRow:
        row = self._reduce(_ScalarRow(dict(target), None))
        while row.entries:
            before = self.built
            for c in sorted(row.entries, key=column_key, reverse=True):
                self._fold_column(c)
            if self.built == before or self.built > self.max_rows:
                break
            row = self._reduce(_ScalarRow(dict(target), None))
        return row

    def search(self, h: SExpr, max_shell: int) -> list[RelName] | None:
        target = {}
        for idx, poly in h.terms.items():
            v = _poly_at(poly, self.qv, self.zv, self.p)
            if v:
                target[idx] = v
        row = self._demand(target)
        k1 = (self.m + 1) // 3 - 1
        shell = 0
        while row.entries and shell < max_shell and self.built <= self.max_rows:
            shell += 1
            for vals in iproduct(range(-shell, shell + 1), repeat=2 * k1):
                c = sindex(self.m, vals[:k1], vals[k1:])
                self._fold_column(c)
            row = self._demand(target)
        if row.entries:
            return None
        # walk the elimination logs backwards to find which sources carry
        # nonzero weight in the combination that killed the target
        weight: dict[RelName, int] = {}
        pending: dict[int, int] = {}
        for c, f in row.log:
            r = self.pivots[c]
            pending[id(r)] = (pending.get(id(r), 0) + f) % self.p
        for r in reversed(self.order):
            w = pending.pop(id(r), 0)
            if not w:
                continue
            weight[r.src] = (weight.get(r.src, 0) + w) % self.p
            for c, f in r.log:
                rr = self.pivots[c]
                pending[id(rr)] = (pending.get(id(rr), 0) - w * f) % self.p
        return sorted(n for n, v in weight.items() if v)


# ---------------------------------------------------------------------------
# coefficient reconstruction over the support
# ---------------------------------------------------------------------------

class _SupportSolver:
    """Solve the support-restricted system at scalar evaluation points.

    The support rows, processed in fixed order, are echelonized at one
    (q, z) point with eager provenance (cheap at this size), then the target
    is reduced.  If the support is linearly independent the combination
    expressing the target is unique, so the per-point solutions are the
    evaluations of a single vector of rational functions in (q, z).
    """

    __slots__ = ("p", "rows", "h_terms")

    def __init__(self, m, h: SExpr, names, p=MOD):
        self.p = p
        self.rows = [(n, list(instantiate(m, n).body.terms.items()))
                     for n in names]
        self.h_terms = list(h.terms.items())

    def run(self, qv, zv, active=None):
        """Returns (combination, pivoted_names), or None when the target
        does not vanish or (with `active` fixed) the rank drops."""
        p = self.p
        pivots = {}
        pivoted = []
        for name, body in self.rows:
            if active is not None and name not in active:
                continue
            ent = {}
            for idx, poly in body:
                v = _poly_at(poly, qv, zv, p)
                if v:
                    ent[idx] = v
            prov = {name: 1}
            while ent:
                c = max(ent, key=column_key)
                piv = pivots.get(c)
                if piv is None:
                    pivots[c] = (ent, prov)
                    pivoted.append(name)
                    break
                f = ent[c] * pow(piv[0][c], -1, p) % p
                _axpy(ent, piv[0], f, p)
                _axpy(prov, piv[1], f, p)
            if not ent and active is not None:
                return None
        ent = {}
        for idx, poly in self.h_terms:
            v = _poly_at(poly, qv, zv, p)
            if v:
                ent[idx] = v
        comb: dict[RelName, int] = {}
        while ent:
            c = max(ent, key=column_key)
            piv = pivots.get(c)
            if piv is None:
                return None
            f = ent[c] * pow(piv[0][c], -1, p) % p
            _axpy(ent, piv[0], f, p)
            for n, v in piv[1].items():
                nv = (comb.get(n, 0) + f * v) % p
                if nv:
                    comb[n] = nv
                else:
                    comb.pop(n, None)
        return comb, pivoted


def _calibrate(solver: _SupportSolver):
    """Fix the independent subset of the support.

    The subset must be read off at a point free of accidental cancellation,
    so take the largest pivot set among the first few clean solves."""
    best = None
    hits = 0
    for i in range(60):
        res = solver.run(5 + 3 * i, 3 + 2 * i)
        if res is None:
            continue
        pivoted = res[1]
        if best is None or len(pivoted) > len(best):
            best = pivoted
        hits += 1
        if hits == 3:
            break
    return best


# --- dense univariate arithmetic over F_p (ascending coefficient lists) ---

def _pp_trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def _pp_sub(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _pp_trim(out)


def _pp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pp_trim(out)


def _pp_divmod(a, b, p):
    a = list(a)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [0] * max(0, len(a) - len(b) + 1)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        f = a[-1] * inv % p
        d = len(a) - len(b)
        if f:
            q[d] = f
            for i, y in enumerate(b):
                a[i + d] = (a[i + d] - f * y) % p
        a.pop()
        _pp_trim(a)
    return _pp_trim(q), a


def _pp_monic(a, p):
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _pp_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pp_divmod(a, b, p)[1]
    return _pp_monic(a, p)


def _pp_lcm(a, b, p):
    g = _pp_gcd(a, b, p)
    return _pp_monic(_pp_mul(a, _pp_divmod(b, g, p)[0], p), p)


def _pp_eval(a, x, p):
    total = 0
    for c in reversed(a):
        total = (total * x + c) % p
    return total


def _pp_interp(points, values, p):
    """Newton interpolation; ascending coefficients of the unique
    polynomial through the (point, value) pairs."""
    n = len(points)
    coef = list(values)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            num = (coef[i] - coef[i - 1]) % p
            den = (points[i] - points[i - j]) % p
            coef[i] = num * pow(den, -1, p) % p
    poly = [coef[n - 1] % p]
    for i in range(n - 2, -1, -1):
        # poly = poly * (x - points[i]) + coef[i]
        new = [0] * (len(poly) + 1)
        for d, c in enumerate(poly):
            new[d + 1] = (new[d + 1] + c) % p
            new[d] = (new[d] - c * points[i]) % p
        new[0] = (new[0] + coef[i]) % p
        poly = new
    return _pp_trim(poly)


def _pp_cauchy(points, values, dnum, dden, p):
    """Cauchy interpolation: a rational function N/D with deg N <= dnum and
    deg D <= dden matching the samples, D monic; None when no fit exists."""
    M = [1]
    for a in points:
        M = _pp_mul(M, [(-a) % p, 1], p)
    I = _pp_interp(points, values, p)
    r0, r1 = M, I
    t0, t1 = [], [1]
    while len(r1) - 1 > dnum:
        qq, r = _pp_divmod(r0, r1, p)
        r0, r1 = r1, r
        t0, t1 = t1, _pp_sub(t0, _pp_mul(qq, t1, p), p)
    N, D = r1, t1
    if not D or len(D) - 1 > dden:
        return None
    inv = pow(D[-1], -1, p)
    return ([c * inv % p for c in N], [c * inv % p for c in D])


def _rat_lift(c, p=MOD):
    """Smallest rational a/b congruent to c mod p, |a|, b <= sqrt(p/2);
    None when no such fraction exists (degree bounds were wrong)."""
    if c == 0:
        return 0, 1
    r0, r1 = p, c % p
    t0, t1 = 0, 1
    while r1 > _LIFT_BOUND:
        qq = r0 // r1
        r0, r1 = r1, r0 - qq * r1
        t0, t1 = t1, t0 - qq * t1
    if t1 == 0 or abs(t1) > _LIFT_BOUND or gcd(r1, abs(t1)) != 1:
        return None
    return (r1, t1) if t1 > 0 else (-r1, -t1)


def _qpass(solver, active, zv, bq, need, p=MOD):
    """At fixed z, reconstruct every active coefficient as a univariate
    rational function of q with monic denominator.  The last two sample
    points are held out to check each fit."""
    pts, tabs = [], []
    qv = 2
    while len(pts) < need and qv < 2 + 40 * need:
        res = solver.run(qv, zv, active)
        if res is not None:
            pts.append(qv)
            tabs.append(res[0])
        qv += 1
    if len(pts) < need:
        return None
    base = pts[:-2]
    recon = {}
    for name in active:
        vals = [t.get(name, 0) for t in tabs[:-2]]
        nd = _pp_cauchy(base, vals, bq, bq, p)
        if nd is None:
            return None
        N, D = nd
        for a, tab in zip(pts[-2:], tabs[-2:]):
            v = tab.get(name, 0)
            if (_pp_eval(N, a, p) - v * _pp_eval(D, a, p)) % p:
                return None
        recon[name] = nd
    return recon


def _assemble(per_z, zvals, name, bz, p=MOD):
    """Second interpolation pass: from per-z univariate fits of one
    coefficient, rebuild it as an exact PolyFrac.

    With denominators monic in q, the sample at z_j is the true pair
    (num, den) divided by lc_q(den)(z_j); each q-coefficient is therefore a
    rational function of z with common denominator lc_q(den).  Keeping only
    the z values where deg_q den is maximal makes the normalizer consistent,
    and the final PolyFrac normalisation absorbs the leftover scalar."""
    samples = [(z, rec[name]) for z, rec in zip(zvals, per_z)]
    dD = max(len(d) - 1 for _, (_, d) in samples)
    keep = [(z, n_, d_) for z, (n_, d_) in samples if len(d_) - 1 == dD]
    need = 2 * bz + 4
    if len(keep) < need:
        return None
    keep = keep[:need]
    dN = max(len(n_) - 1 for _, n_, _ in keep)
    if dN < 0:
        return PolyFrac.zero()
    base_z = [z for z, _, _ in keep[:-2]]
    rec = {}
    for part, top in ((0, dN), (1, dD)):
        for d in range(top + 1):
            vals = [(row[1 + part][d] if d < len(row[1 + part]) else 0)
                    for row in keep[:-2]]
            nd = _pp_cauchy(base_z, vals, bz, bz, p)
            if nd is None:
                return None
            N, D = nd
            for z, n_, d_ in keep[-2:]:
                src = (n_, d_)[part]
                v = src[d] if d < len(src) else 0
                if (_pp_eval(N, z, p) - v * _pp_eval(D, z, p)) % p:
                    return None
            rec[(part, d)] = nd
    lcm = [1]
    for _, d_ in rec.values():
        lcm = _pp_lcm(lcm, d_, p)
    num_terms, den_terms = {}, {}
    for (part, d), (n_, d_) in rec.items():
        mult, r = _pp_divmod(lcm, d_, p)
        if r:
            return None
        zpoly = _pp_mul(n_, mult, p)
        tgt = num_terms if part == 0 else den_terms
        for e, c in enumerate(zpoly):
            if c:
                tgt[(d, e)] = c
    if not den_terms:
        return None
    # rescale so one reference coefficient is 1, making every coefficient a
    # small rational, then lift them all
    inv = pow(den_terms[max(den_terms)], -1, p)
    lifted = []
    for tgt in (num_terms, den_terms):
        out = {}
        for key, c in tgt.items():
            ab = _rat_lift(c * inv % p, p)
            if ab is None:
                return None
            out[key] = ab
        lifted.append(out)
    scale = 1
    for out in lifted:
        for _, b in out.values():
            scale = scale // gcd(scale, b) * b
    num = Poly({k: a * (scale // b) for k, (a, b) in lifted[0].items()})
    den = Poly({k: a * (scale // b) for k, (a, b) in lifted[1].items()})
    if not den:
        return None
    return PolyFrac(num, den)


def _reconstruct(solver, active, bq, bz, p=MOD):
    """Sample the support system on a (q, z) grid and rebuild the whole
    combination at one (numerator, denominator) degree bound."""
    need_q = 2 * bq + 4
    need_z = 2 * bz + 8   # slack for z values dropped by degree filtering
    aset = set(active)
    zvals, per_z = [], []
    zv = 2
    while len(zvals) < need_z and zv < 2 + 25 * need_z:
        rec = _qpass(solver, aset, zv, bq, need_q, p)
        if rec is not None:
            zvals.append(zv)
            per_z.append(rec)
        zv += 1
    if len(zvals) < need_z:
        return None
    comb = {}
    for name in active:
        pf = _assemble(per_z, zvals, name, bz, p)
        if pf is None:
            return None
        if pf:
            comb[name] = pf
    return comb


# ---------------------------------------------------------------------------
# demand-driven proving
# ---------------------------------------------------------------------------

class ProveResult(NamedTuple):
    certificate: Certificate | None
    remainder: SExpr
    stats: dict


class Prover:
    """Incremental membership engine for one modulus and index cap.

    Rather than echelonizing a whole spanning box, pivots are acquired on
    demand: when the target row is stuck on a column with no pivot, the
    relations touching that column (entries within the cap) are
    instantiated, reduced, and installed.  If the target is still stuck,
    escalation widens to the relations touching every remaining term, but
    only while those batches stay small; past that point exact provenance
    arithmetic is hopeless and the prover switches to the scalar witness
    search plus coefficient reconstruction, whose result is replayed
    exactly before being trusted.  All candidate scans run in a fixed
    order, so proofs are reproducible.
    """

    def __init__(self, m, cap=6, max_rows=200_000, widen_limit=150,
                 elim_budget=100_000):
        self.m = m
        self.cap = cap
        self.max_rows = max_rows
        self.widen_limit = widen_limit
        self.elim_budget = elim_budget
        self.pivots: dict[SIndex, Row] = {}
        self.used: set[RelName] = set()
        self.redundant = 0
        self.rows_built = 0
        self.scalar_rows = 0

    def _check_budget(self):
        if self.rows_built > self.max_rows:
            raise RuntimeError(
                f"relation budget exceeded ({self.max_rows} rows); "
                "raise max_rows or the cap")

    def _insert(self, row: Row):
        """Echelon insertion against the current pivot set."""
        row = _reduce_against(self.pivots, row, self.elim_budget)
        if row.entries:
            self.pivots[row.leading()] = row
        else:
            self.redundant += 1

    def _new_rows(self, c: SIndex) -> list[Row]:
        rows = []
        for name in relations_touching(self.m, c, self.cap):
            if name in self.used:
                continue
            self.used.add(name)
            self.rows_built += 1
            rows.append(Row.from_relation(instantiate(self.m, name)).normalized())
        self._check_budget()
        return rows

    @staticmethod
    def _pivot_quality(row: Row, c: SIndex):
        lead = row.entries[c]
        name = min(row.prov)   # rows fresh from _new_rows carry one name
        return (row.support_size(), lead.total_degree(), name)

    def _acquire(self, c: SIndex) -> bool:
        """Try to install a pivot at column c from its capped neighborhood.
        Every instantiated candidate lands somewhere (pivot at c, pivot at
        its own stuck column, or redundancy log): discarding a marked-used
        row would silently shrink the searched span."""
        fresh = self._new_rows(c)
        fresh.sort(key=lambda r: (r.leading() != c, self._pivot_quality(r, r.leading())))
        stopped = []
        for row in fresh:
            row = self._reduce_stop(row, c)
            if not row.entries:
                self.redundant += 1
            elif row.leading() == c:
                stopped.append(row)
            else:
                self.pivots[row.leading()] = row
        if not stopped:
            return False
        stopped.sort(key=lambda r: self._pivot_quality(r, c))
        self.pivots[c] = stopped[0]
        for row in stopped[1:]:
            self._insert(row)
        return True

    def _reduce_stop(self, row: Row, stop: SIndex) -> Row:
        """Reduce using existing pivots only, never eliminating `stop`."""
        while row.entries:
            c = row.leading()
            if c == stop or c not in self.pivots:
                break
            row = eliminate(row, self.pivots[c], self.elim_budget)
        return row

    def _reduce_acquiring(self, row: Row) -> Row:
        while row.entries:
            c = row.leading()
            if c in self.pivots:
                row = eliminate(row, self.pivots[c], self.elim_budget)
            elif not self._acquire(c):
                break
        return row

    def _widening_names(self, row: Row) -> list[RelName]:
        names, seen = [], set()
        for c in sorted(row.entries, key=column_key, reverse=True):
            for name in relations_touching(self.m, c, self.cap):
                if name not in self.used and name not in seen:
                    seen.add(name)
                    names.append(name)
        return names

    def _reconstructed(self, h: SExpr) -> dict | None:
        """Witness search over F_p, then exact coefficients by rational
        interpolation.  Only a combination that replays exactly is
        returned; anything else is treated as a failed attempt."""
        k1 = (self.m + 1) // 3 - 1
        max_shell = self.cap if k1 == 1 else min(self.cap, 2)
        for qv, zv in WITNESS_POINTS:
            finder = WitnessSearch(self.m, self.cap, qv, zv)
            support = finder.search(h, max_shell)
            self.scalar_rows += finder.built
            if not support:
                continue
            solver = _SupportSolver(self.m, h, support)
            active = _calibrate(solver)
            if active is None:
                continue
            comb = None
            for bq, bz in DEGREE_LADDER:
                comb = _reconstruct(solver, active, bq, bz)
                if comb is not None:
                    break
            if comb is None:
                continue
            if verify_certificate(_certificate(self.m, "", comb), h):
                return comb
        return None

    def prove(self, h: SExpr, target="") -> ProveResult:
        if h.m != self.m:
            raise ValueError("modulus mismatch between prover and target")
        row = Row.from_target(h)
        passes = 0
        swelled = False
        try:
            row = self._reduce_acquiring(row)
            while row.entries:
                # stuck: widen to the neighborhood of every remaining term,
                # then re-run from the original target for clean provenance
                names = self._widening_names(row)
                if not names or len(names) > self.widen_limit:
                    break
                passes += 1
                for name in names:
                    self.used.add(name)
                    self.rows_built += 1
                    self._insert(
                        Row.from_relation(instantiate(self.m, name)).normalized())
                self._check_budget()
                row = self._reduce_acquiring(Row.from_target(h))
        except CoefficientSwell:
            # row keeps its value from before the oversized step, so the
            # honest-remainder path below stays intact
            swelled = True
        method = "echelon"
        comb = None
        if row.entries:
            comb = self._reconstructed(h)
            if comb is not None:
                method = "reconstructed"
        if comb is None:
            alpha = row.prov[TARGET]
            comb = {n: -(f / alpha) for n, f in row.prov.items() if n != TARGET}
            remainder = SExpr(self.m, dict(row.entries))
        else:
            remainder = SExpr(self.m)
        stats = {
            "relations_used": len(self.used),
            "pivots": len(self.pivots),
            "redundant": self.redundant,
            "widening_passes": passes,
            "swell_abort": swelled,
            "scalar_rows": self.scalar_rows,
            "method": method,
            "max_entry": max((abs(x) for n in comb for x in n.rho + n.sigma),
                             default=0),
        }
        cert = None
        if not remainder.terms:
            cert = _certificate(self.m, target, comb)
        return ProveResult(cert, remainder, stats)


def prove_target(m, h: SExpr, cap=6, target="", max_rows=200_000) -> ProveResult:
    """One-shot demand-driven proof with a fresh prover (deterministic
    regardless of what else has been proved)."""
    return Prover(m, cap=cap, max_rows=max_rows).prove(h, target=target)
