"""Standard q-series building blocks: Pochhammer symbols, theta products,
Gaussian binomials, and partition counting oracles.

Conventions match the classical ones:

* (a; Q)_L   = prod_{t=0}^{L-1} (1 - a Q^t), a finite exact polynomial,
* (a; Q)_oo  = prod_{t>=0} (1 - a Q^t), truncated to a requested order,
* theta(a; Q) = (a; Q)_oo (Q/a; Q)_oo, used here with a = q^j, Q = q^m,
* [n choose k]_Q = (Q; Q)_n / ((Q; Q)_k (Q; Q)_{n-k}), zero outside 0<=k<=n.

The partition counting oracle works from first principles (dynamic
programming over allowed part sizes) so it can act as an independent
cross-check on any product formula.
"""

from __future__ import annotations

from .exactalg import Poly, TruncSeries


def poch_finite(a: Poly, L: int, base: int = 1) -> Poly:
    """(a; q^base)_L as an exact polynomial.  `a` must be a monomial."""
    if L < 0:
        raise ValueError("finite Pochhammer needs L >= 0")
    if base < 1:
        raise ValueError("base must be a positive integer")
    if not a.is_monomial():
        raise ValueError("argument must be a monomial")
    ((qe, ze),) = a.terms.keys()
    c = a.terms[(qe, ze)]
    out = Poly.one()
    for t in range(L):
        out = out * (Poly.one() - Poly.mono(c, qe + base * t, ze))
    return out


def poch_infinite(a: Poly, order: int, base: int = 1) -> TruncSeries:
    """(a; q^base)_oo truncated at the given order.  `a` must be a monomial
    whose q-exponent is positive when its z-exponent is zero (otherwise the
    product would not converge coefficientwise)."""
    if base < 1:
        raise ValueError("base must be a positive integer")
    if not a.is_monomial():
        raise ValueError("argument must be a monomial")
    ((qe, ze),) = a.terms.keys()
    c = a.terms[(qe, ze)]
    if ze == 0 and qe < 1:
        raise ValueError("infinite Pochhammer diverges for q-exponent < 1")
    out = TruncSeries.one(order)
    t = 0
    while qe + base * t <= order:
        out = out.mul_poly(Poly.one() - Poly.mono(c, qe + base * t, ze))
        out = out.truncate(order)
        t += 1
    return out.truncate(order)


_euler_cache: dict[int, TruncSeries] = {}
_inv_euler_cache: dict[int, TruncSeries] = {}


def euler_product(order: int) -> TruncSeries:
    """(q; q)_oo."""
    best = _euler_cache.get(0)
    if best is None or best.order < order:
        best = poch_infinite(Poly.q(), order)
        _euler_cache[0] = best
    return best.truncate(order)


def inv_euler(order: int) -> TruncSeries:
    """1 / (q; q)_oo, the partition generating function."""
    best = _inv_euler_cache.get(0)
    if best is None or best.order < order:
        best = euler_product(order).invert()
        _inv_euler_cache[0] = best
    return best.truncate(order)


def pentagonal_series(order: int) -> TruncSeries:
    """Sum_{k in Z} (-1)^k q^{k(3k-1)/2}, the pentagonal number expansion."""
    d = {}
    k = 0
    while True:
        hit = False
        for kk in ((k, -k) if k else (0,)):
            e = kk * (3 * kk - 1) // 2
            if e <= order:
                d[(e, 0)] = d.get((e, 0), 0) + (-1) ** (kk % 2)
                hit = True
        if not hit and k > 0:
            break
        k += 1
    return TruncSeries(order, d)


def theta(exponents, modulus: int, order: int) -> TruncSeries:
    """theta(q^{j_1}, ..., q^{j_t}; q^modulus) truncated at `order`.

    Each factor is (q^j; q^m)_oo (q^{m-j}; q^m)_oo; the multi-argument form
    is the plain product of the single-argument ones.
    """
    out = TruncSeries.one(order)
    for j in exponents:
        jj = j % modulus
        if jj == 0:
            raise ValueError("theta argument must not be 0 mod the base")
        out = out * poch_infinite(Poly.q(jj), order, base=modulus)
        out = out * poch_infinite(Poly.q(modulus - jj), order, base=modulus)
    return out


_poch_q_cache: dict[tuple[int, int], Poly] = {}


def poch_q(n: int, base: int = 1) -> Poly:
    """(Q; Q)_n with Q = q^base, cached."""
    key = (n, base)
    got = _poch_q_cache.get(key)
    if got is None:
        got = poch_finite(Poly.q(base), n, base=base)
        _poch_q_cache[key] = got
    return got


_qbinom_cache: dict[tuple[int, int, int], Poly] = {}


def qbinom(n: int, k: int, base: int = 1) -> Poly:
    """Gaussian binomial [n choose k] in the variable q^base, exact.

    Zero (by convention) unless 0 <= k <= n.
    """
    if k < 0 or k > n:
        return Poly.zero()
    k = min(k, n - k)
    key = (n, k, base)
    got = _qbinom_cache.get(key)
    if got is None:
        got = poch_q(n, base).divexact(poch_q(k, base) * poch_q(n - k, base))
        _qbinom_cache[key] = got
    return got


def partition_count_oracle(residues, modulus: int, nmax: int) -> list[int]:
    """Count partitions of 0..nmax into parts from given residue classes.

    `residues` is an iterable of residues mod `modulus`; repeating a residue
    gives that class an extra colour (its generating factor is squared, and
    so on).  Residue 0 means parts divisible by `modulus`.  Returns the list
    of counts indexed by the number being partitioned.
    """
    counts = [1] + [0] * nmax
    for r in residues:
        r = r % modulus
        part = r if r else modulus
        while part <= nmax:
            for i in range(part, nmax + 1):
                counts[i] += counts[i - part]
            part += modulus
    return counts


def product_from_residues(residues, modulus: int, order: int) -> TruncSeries:
    """prod 1/(q^r; q^m)_oo over the residue multiset (0 meaning q^m)."""
    out = TruncSeries.one(order)
    for r in residues:
        rr = r % modulus
        if rr == 0:
            rr = modulus
        out = out * poch_infinite(Poly.q(rr), order, base=modulus)
    return out.invert()
