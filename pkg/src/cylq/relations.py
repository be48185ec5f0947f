"""Contiguous relations between neighbouring members of a sum family.

Four kinds of relations hold identically in z, q; each instance is a small
SExpr asserted to be zero.  Writing d_i for the i-th unit vector, P_i for
d_1 + ... + d_i, and D for d_{k-1}:

  R1^(i), 1 <= i <= k-2:
      S(rho|sigma) - S(rho + d_i - d_{i+1}|sigma)
                   - z q^{i + rho_1 + ... + rho_i} S(rho + 2 P_i | sigma - P_i)

  R2^(i), 1 <= i <= k-2:
      S(rho|sigma) - S(rho|sigma + d_i - d_{i+1})
                   - q^{i + sigma_1 + ... + sigma_i} S(rho - P_i | sigma + 2 P_i)

  and a residue-dependent pair R3, R4 acting on the last coordinate (see
  the generator bodies; for m = 3k - 1 they carry side conditions
  sigma_{k-1} = 0 resp. rho_{k-1} = 0).

Two of the commonly printed forms are typo-suspect and ship here in a
corrected default with the printed variant behind a flag:

  * R2 is sometimes printed with a stray z in the third coefficient; the
    z-free form is the one that actually vanishes (see tests for numeric
    witnesses; the printed form fails already at order 6).
  * the m = 3k + 1 form of R3 is sometimes printed with a cancelling
    +-q S(rho + D | sigma + 2D) pair; the corrected form replaces the
    first of the pair by -q S(rho + D | sigma + D), mirroring R4.

verify-by-evaluation is cheap, so every generated relation can be
witnessed with relation_is_zero before it is trusted in a proof.
"""

from __future__ import annotations

import re
from itertools import product as iproduct
from typing import NamedTuple

from .exactalg import Poly
from .ssums import SExpr, SIndex, combine, delta, eval_sexpr, family, sindex, vadd


class RelName(NamedTuple):
    kind: int   # 1..4
    i: int      # superscript for R1/R2, 0 for R3/R4
    rho: tuple
    sigma: tuple

    def render(self) -> str:
        r = ",".join(str(x) for x in self.rho)
        s = ",".join(str(x) for x in self.sigma)
        if self.kind in (1, 2):
            return f"R{self.kind}[{{{self.i}}},{{{{{r}}},{{{s}}}}}]"
        return f"R{self.kind}[{{{{{r}}},{{{s}}}}}]"

    _RE12 = re.compile(r"^R([12])\[\{(\d+)\},\{\{([-\d,]*)\},\{([-\d,]*)\}\}\]$")
    _RE34 = re.compile(r"^R([34])\[\{\{([-\d,]*)\},\{([-\d,]*)\}\}\]$")

    @classmethod
    def parse(cls, text: str) -> "RelName":
        text = text.strip()
        m = cls._RE12.match(text)
        if m:
            vec = lambda s: tuple(int(x) for x in s.split(",")) if s else ()
            return cls(int(m.group(1)), int(m.group(2)), vec(m.group(3)), vec(m.group(4)))
        m = cls._RE34.match(text)
        if m:
            vec = lambda s: tuple(int(x) for x in s.split(",")) if s else ()
            return cls(int(m.group(1)), 0, vec(m.group(2)), vec(m.group(3)))
        raise ValueError(f"unparseable relation name {text!r}")


class Relation(NamedTuple):
    name: RelName
    body: SExpr


def _prefix(i, k):
    """d_1 + ... + d_i (the empty sum for i = 0)."""
    return tuple(1 if 1 <= j <= i else 0 for j in range(1, k))


def gen_R1(m, i, rho, sigma) -> Relation:
    k, _ = family(m)
    if not 1 <= i <= k - 2:
        raise ValueError(f"R1 superscript must lie in 1..{k - 2}, got {i}")
    idx = sindex(m, rho, sigma)
    rho, sigma = idx.rho, idx.sigma
    P = _prefix(i, k)
    mid_rho = vadd(vadd(rho, delta(i, k)), delta(i + 1, k), -1)
    exp = i + sum(rho[:i])
    body = combine(m, [
        (Poly.one(), sindex(m, rho, sigma)),
        (Poly.const(-1), sindex(m, mid_rho, sigma)),
        (Poly.mono(-1, exp, 1), sindex(m, vadd(rho, P, 2), vadd(sigma, P, -1))),
    ])
    return Relation(RelName(1, i, rho, sigma), body)


def gen_R2(m, i, rho, sigma, printed=False) -> Relation:
    k, _ = family(m)
    if not 1 <= i <= k - 2:
        raise ValueError(f"R2 superscript must lie in 1..{k - 2}, got {i}")
    idx = sindex(m, rho, sigma)
    rho, sigma = idx.rho, idx.sigma
    P = _prefix(i, k)
    mid_sigma = vadd(vadd(sigma, delta(i, k)), delta(i + 1, k), -1)
    exp = i + sum(sigma[:i])
    body = combine(m, [
        (Poly.one(), sindex(m, rho, sigma)),
        (Poly.const(-1), sindex(m, rho, mid_sigma)),
        (Poly.mono(-1, exp, 1 if printed else 0),
         sindex(m, vadd(rho, P, -1), vadd(sigma, P, 2))),
    ])
    return Relation(RelName(2, i, rho, sigma), body)


def gen_R3(m, rho, sigma, printed=False) -> Relation:
    k, fam = family(m)
    idx = sindex(m, rho, sigma)
    rho, sigma = idx.rho, idx.sigma
    D = delta(k - 1, k)
    if fam == -1:
        if k < 3:
            raise ValueError("this residue class needs k >= 3")
        if sigma[k - 2] != 0:
            raise ValueError(f"R3 side condition sigma_{k - 1} = 0 violated by {sigma}")
        D2 = delta(k - 2, k)
        body = combine(m, [
            (Poly.one(), sindex(m, rho, sigma)),
            (Poly.const(-1), sindex(m, rho, vadd(sigma, D))),
            (Poly.mono(-1, 1), sindex(m, vadd(rho, D), vadd(sigma, D))),
            (Poly.mono(1, 1), sindex(m, vadd(rho, D), vadd(vadd(sigma, D2), D))),
        ])
    elif fam == 0:
        P = _prefix(k - 1, k)
        P2 = _prefix(k - 2, k)
        body = combine(m, [
            (Poly.one(), sindex(m, rho, sigma)),
            (Poly.const(-1) - Poly.q(), sindex(m, vadd(rho, D), vadd(sigma, D))),
            (Poly.q(), sindex(m, vadd(rho, D, 2), vadd(sigma, D, 2))),
            (Poly.mono(-1, k - 1 + sum(rho), 1), sindex(m, vadd(rho, P, 2), vadd(sigma, P, -1))),
            (Poly.mono(-1, k - 1 + sum(sigma)),
             sindex(m, vadd(vadd(rho, P2, -1), D, 2), vadd(sigma, P, 2))),
        ])
    else:
        P = _prefix(k - 1, k)
        second = vadd(sigma, D, 2) if printed else vadd(sigma, D)
        body = combine(m, [
            (Poly.one(), sindex(m, rho, sigma)),
            (Poly.const(-1), sindex(m, rho, vadd(sigma, D))),
            (Poly.mono(-1, 1), sindex(m, vadd(rho, D), second)),
            (Poly.mono(1, 1), sindex(m, vadd(rho, D), vadd(sigma, D, 2))),
            (Poly.mono(-1, k - 1 + sum(sigma)), sindex(m, vadd(rho, P, -1), vadd(sigma, P, 2))),
        ])
    return Relation(RelName(3, 0, rho, sigma), body)


def gen_R4(m, rho, sigma) -> Relation:
    k, fam = family(m)
    idx = sindex(m, rho, sigma)
    rho, sigma = idx.rho, idx.sigma
    D = delta(k - 1, k)
    if fam == -1:
        if k < 3:
            raise ValueError("this residue class needs k >= 3")
        if rho[k - 2] != 0:
            raise ValueError(f"R4 side condition rho_{k - 1} = 0 violated by {rho}")
        D2 = delta(k - 2, k)
        body = combine(m, [
            (Poly.one(), sindex(m, rho, sigma)),
            (Poly.const(-1), sindex(m, vadd(rho, D), sigma)),
            (Poly.mono(-1, 1), sindex(m, vadd(rho, D), vadd(sigma, D))),
            (Poly.mono(1, 1), sindex(m, vadd(vadd(rho, D2), D), vadd(sigma, D))),
        ])
    elif fam == 0:
        P = _prefix(k - 1, k)
        P2 = _prefix(k - 2, k)
        body = combine(m, [
            (Poly.one(), sindex(m, rho, sigma)),
            (Poly.const(-1) - Poly.q(), sindex(m, vadd(rho, D), vadd(sigma, D))),
            (Poly.q(), sindex(m, vadd(rho, D, 2), vadd(sigma, D, 2))),
            (Poly.mono(-1, k - 1 + sum(rho), 1),
             sindex(m, vadd(rho, P, 2), vadd(vadd(sigma, P2, -1), D, 2))),
            (Poly.mono(-1, k - 1 + sum(sigma)), sindex(m, vadd(rho, P, -1), vadd(sigma, P, 2))),
        ])
    else:
        P = _prefix(k - 1, k)
        body = combine(m, [
            (Poly.one(), sindex(m, rho, sigma)),
            (Poly.const(-1), sindex(m, vadd(rho, D), sigma)),
            (Poly.mono(-1, 1), sindex(m, vadd(rho, D), vadd(sigma, D))),
            (Poly.mono(1, 1), sindex(m, vadd(rho, D, 2), vadd(sigma, D))),
            (Poly.mono(-1, k - 1 + sum(rho), 1), sindex(m, vadd(rho, P, 2), vadd(sigma, P, -1))),
        ])
    return Relation(RelName(4, 0, rho, sigma), body)


def instantiate(m, name: RelName) -> Relation:
    if name.kind == 1:
        return gen_R1(m, name.i, name.rho, name.sigma)
    if name.kind == 2:
        return gen_R2(m, name.i, name.rho, name.sigma)
    if name.kind == 3:
        return gen_R3(m, name.rho, name.sigma)
    if name.kind == 4:
        return gen_R4(m, name.rho, name.sigma)
    raise ValueError(f"unknown relation kind {name.kind}")


def relation_is_zero(rel: Relation, order=25, zcap=6) -> bool:
    return eval_sexpr(rel.body, order, zcap=zcap).is_zero()


# ---------------------------------------------------------------------------
# instance enumeration
# ---------------------------------------------------------------------------

def valid_name(m, name: RelName) -> bool:
    """Is this a well-formed instance for modulus m (ranges and side
    conditions)?"""
    k, fam = family(m)
    if len(name.rho) != k - 1 or len(name.sigma) != k - 1:
        return False
    if name.kind in (1, 2):
        return 1 <= name.i <= k - 2
    if name.i != 0:
        return False
    if fam == -1:
        if k < 3:
            return False
        if name.kind == 3:
            return name.sigma[k - 2] == 0
        return name.rho[k - 2] == 0
    return True


def spanning_set(m, N) -> list[Relation]:
    """Every valid instance with all index entries in [-N, N], in a fixed
    order (kind, superscript, rho, sigma).  Grows like (2N+1)^(2k-2); meant
    for small N."""
    k, fam = family(m)
    L = k - 1
    rng = range(-N, N + 1)
    out = []
    for kind in (1, 2):
        for i in range(1, k - 1):
            for rho in iproduct(rng, repeat=L):
                for sigma in iproduct(rng, repeat=L):
                    gen = gen_R1 if kind == 1 else gen_R2
                    out.append(gen(m, i, rho, sigma))
    for kind in (3, 4):
        for rho in iproduct(rng, repeat=L):
            for sigma in iproduct(rng, repeat=L):
                name = RelName(kind, 0, rho, sigma)
                if valid_name(m, name):
                    out.append(instantiate(m, name))
    return out


# term-shift templates: for each kind (and family) the list of
# (rho_shift_fn, sigma_shift_fn) per body position, used to solve for the
# instance containing a given S-term at that position

def _templates(m, kind):
    k, fam = family(m)
    D = delta(k - 1, k)
    Z = tuple(0 for _ in range(k - 1))
    P = _prefix(k - 1, k)
    P2 = _prefix(k - 2, k)
    if kind in (1, 2):
        outs = []
        for i in range(1, k - 1):
            Pi = _prefix(i, k)
            di = delta(i, k)
            di1 = delta(i + 1, k)
            mid = vadd(di, di1, -1)
            if kind == 1:
                shifts = [(Z, Z), (mid, Z), (tuple(2 * x for x in Pi), tuple(-x for x in Pi))]
            else:
                shifts = [(Z, Z), (Z, mid), (tuple(-x for x in Pi), tuple(2 * x for x in Pi))]
            outs.append((i, shifts))
        return outs
    if fam == -1:
        if k < 3:
            return []
        D2 = delta(k - 2, k)
        if kind == 3:
            return [(0, [(Z, Z), (Z, D), (D, D), (D, vadd(D2, D))])]
        return [(0, [(Z, Z), (D, Z), (D, D), (vadd(D2, D), D)])]
    if fam == 0:
        twoD = tuple(2 * x for x in D)
        twoP = tuple(2 * x for x in P)
        negP = tuple(-x for x in P)
        if kind == 3:
            return [(0, [(Z, Z), (D, D), (twoD, twoD), (twoP, negP),
                         (vadd(tuple(-x for x in P2), D, 2), twoP)])]
        return [(0, [(Z, Z), (D, D), (twoD, twoD),
                     (twoP, vadd(tuple(-x for x in P2), D, 2)), (negP, twoP)])]
    twoD = tuple(2 * x for x in D)
    twoP = tuple(2 * x for x in P)
    negP = tuple(-x for x in P)
    if kind == 3:
        return [(0, [(Z, Z), (Z, D), (D, D), (D, twoD), (negP, twoP)])]
    return [(0, [(Z, Z), (D, Z), (D, D), (twoD, D), (twoP, negP)])]


def relations_touching(m, idx: SIndex, cap) -> list[RelName]:
    """All valid relation instances, entries within [-cap, cap], one of
    whose S-terms equals `idx`.  Sorted deterministically."""
    found = set()
    for kind in (1, 2, 3, 4):
        for i, shifts in _templates(m, kind):
            for (dr, ds) in shifts:
                rho = vadd(idx.rho, dr, -1)
                sigma = vadd(idx.sigma, ds, -1)
                if any(abs(x) > cap for x in rho + sigma):
                    continue
                name = RelName(kind, i, rho, sigma)
                if valid_name(m, name):
                    found.add(name)
    return sorted(found)


def frontier_set(m, seeds, cap) -> list[Relation]:
    """Closure of the seed terms under relations_touching: keep adjoining
    every capped relation that touches a known term until nothing new
    appears."""
    seen = set(seeds)
    chosen: dict[RelName, Relation] = {}
    frontier = set(seeds)
    while frontier:
        new_terms = set()
        for idx in sorted(frontier):
            for name in relations_touching(m, idx, cap):
                if name not in chosen:
                    rel = instantiate(m, name)
                    chosen[name] = rel
                    for t in rel.body.terms:
                        if t not in seen:
                            new_terms.add(t)
        seen |= new_terms
        frontier = new_terms
    return [chosen[n] for n in sorted(chosen)]
