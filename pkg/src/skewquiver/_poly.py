"""Dense univariate polynomials over a finite field.

A polynomial is a little-endian list of encoded field elements with no
trailing zeros; the zero polynomial is ``[]``.  ``F`` is any object with the
scalar interface of :class:`skewquiver.exactfield.FieldSpec` (``add``,
``sub``, ``neg``, ``mul``, ``inv``, ``pow``, ``p``, ``e``, ``q``).  Nothing
here imports the field module, so the field module can use these routines to
search for its own moduli.
"""

from __future__ import annotations

import random
from math import gcd as igcd
from typing import List, Sequence, Tuple

Poly = List[int]


def trim(a: Sequence[int]) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a: Sequence[int]) -> int:
    return len(a) - 1


def add(F, a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return trim(out)


def sub(F, a: Poly, b: Poly) -> Poly:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = F.sub(out[i], c)
    return trim(out)


def scale(F, a: Poly, c: int) -> Poly:
    if c == 0:
        return []
    return trim([F.mul(x, c) for x in a])


def mul(F, a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out)


def divmod_(F, a: Poly, b: Poly) -> Tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], trim(r)
    inv_lead = F.inv(b[-1])
    quo = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db]
        if c == 0:
            continue
        c = F.mul(c, inv_lead)
        quo[k] = c
        for j, y in enumerate(b):
            if y:
                r[k + j] = F.sub(r[k + j], F.mul(c, y))
    return trim(quo), trim(r[:db])


def mod(F, a: Poly, b: Poly) -> Poly:
    return divmod_(F, a, b)[1]


def monic(F, a: Poly) -> Poly:
    if not a:
        return []
    return scale(F, a, F.inv(a[-1]))


def gcd(F, a: Poly, b: Poly) -> Poly:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, mod(F, a, b)
    return monic(F, a)


def xgcd(F, a: Poly, b: Poly) -> Tuple[Poly, Poly, Poly]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        t0, t1 = t1, sub(F, t0, mul(F, q, t1))
    if not r0:
        return [], s0, t0
    c = F.inv(r0[-1])
    return scale(F, r0, c), scale(F, s0, c), scale(F, t0, c)


def invmod(F, a: Poly, m: Poly) -> Poly:
    g, s, _ = xgcd(F, mod(F, a, m), m)
    if g != [1]:
        raise ZeroDivisionError("polynomial is not a unit modulo m")
    return mod(F, s, m)


def mulmod(F, a: Poly, b: Poly, m: Poly) -> Poly:
    return mod(F, mul(F, a, b), m)


def powmod(F, a: Poly, k: int, m: Poly) -> Poly:
    result: Poly = mod(F, [1], m)
    base = mod(F, a, m)
    while k > 0:
        if k & 1:
            result = mulmod(F, result, base, m)
        k >>= 1
        if k:
            base = mulmod(F, base, base, m)
    return result


def power(F, a: Poly, k: int) -> Poly:
    result: Poly = [1]
    for _ in range(k):
        result = mul(F, result, a)
    return result


def deriv(F, a: Poly) -> Poly:
    # i mod p encodes the prime-field constant i in every extension
    return trim([F.mul(a[i], i % F.p) for i in range(1, len(a))])


def evaluate(F, a: Poly, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def _pth_root_coeff(F, c: int) -> int:
    # Frobenius is a bijection on F_q; its inverse is x -> x^(p^(e-1)).
    return F.pow(c, F.p ** (F.e - 1))


def _pth_root_poly(F, f: Poly) -> Poly:
    p = F.p
    return trim([_pth_root_coeff(F, f[k]) for k in range(0, len(f), p)])


def squarefree(F, f: Poly) -> List[Tuple[Poly, int]]:
    """Squarefree factorization of a monic polynomial: ``[(g_i, i), ...]``."""
    f = monic(F, f)
    if len(f) <= 1:
        return []
    out: List[Tuple[Poly, int]] = []
    fp = deriv(F, f)
    if fp:
        c = gcd(F, f, fp)
        w = divmod_(F, f, c)[0]
        i = 1
        while w != [1]:
            y = gcd(F, w, c)
            z = divmod_(F, w, y)[0]
            if z != [1]:
                out.append((monic(F, z), i))
            i += 1
            w = y
            c = divmod_(F, c, y)[0]
        if c != [1]:
            c = _pth_root_poly(F, c)
            out.extend((g, m * F.p) for g, m in squarefree(F, c))
    else:
        f = _pth_root_poly(F, f)
        out.extend((g, m * F.p) for g, m in squarefree(F, f))
    return out


def distinct_degree(F, f: Poly) -> List[Tuple[Poly, int]]:
    """Split a squarefree monic ``f`` into products of equal-degree irreducibles."""
    out: List[Tuple[Poly, int]] = []
    x = [0, 1]
    h = mod(F, x, f)
    i = 1
    rest = f
    while deg(rest) >= 2 * i:
        h = powmod(F, h, F.q, rest)
        g = gcd(F, sub(F, h, x), rest)
        if g != [1]:
            out.append((g, i))
            rest = divmod_(F, rest, g)[0]
            h = mod(F, h, rest)
        i += 1
    if deg(rest) > 0:
        out.append((rest, deg(rest)))
    return out


def _random_poly(F, n: int, rng: random.Random) -> Poly:
    return trim([rng.randrange(F.q) for _ in range(n)])


def equal_degree(F, f: Poly, d: int, rng: random.Random | None = None) -> List[Poly]:
    """Cantor-Zassenhaus split of ``f`` (product of distinct degree-``d`` irreducibles)."""
    n = deg(f)
    if n == d:
        return [f]
    rng = rng or random.Random(n * 7919 + d)
    while True:
        a = _random_poly(F, n, rng)
        if deg(a) < 1:
            continue
        if F.p == 2:
            # absolute trace from F_{q^d} down to F_2
            t = mod(F, a, f)
            acc = t
            for _ in range(F.e * d - 1):
                t = mulmod(F, t, t, f)
                acc = add(F, acc, t)
            b = acc
        else:
            b = sub(F, powmod(F, a, (F.q ** d - 1) // 2, f), [1])
        g = gcd(F, b, f)
        if 0 < deg(g) < n:
            h = divmod_(F, f, g)[0]
            return equal_degree(F, g, d, rng) + equal_degree(F, h, d, rng)


def factor(F, f: Poly) -> List[Tuple[Poly, int]]:
    """Complete factorization into monic irreducibles with multiplicities.

    Output is sorted by (degree, coefficient list), so it is deterministic.
    """
    f = trim(f)
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    out: List[Tuple[Poly, int]] = []
    for g, m in squarefree(F, f):
        for h, d in distinct_degree(F, g):
            for irr in equal_degree(F, h, d):
                out.append((monic(F, irr), m))
    merged: dict = {}
    for g, m in out:
        merged[tuple(g)] = merged.get(tuple(g), 0) + m
    return sorted(((list(g), m) for g, m in merged.items()), key=lambda t: (len(t[0]), t[0][::-1]))


def roots(F, f: Poly) -> List[int]:
    """Distinct roots of ``f`` in the field, ascending by encoding."""
    f = monic(F, f)
    if len(f) <= 1:
        return []
    if F.q <= 64:
        return [x for x in range(F.q) if evaluate(F, f, x) == 0]
    g = gcd(F, sub(F, powmod(F, [0, 1], F.q, f), [0, 1]), f)
    if deg(g) < 1:
        return []
    lin = equal_degree(F, g, 1)
    return sorted(F.neg(h[0]) for h in lin)


def is_irreducible(F, f: Poly) -> bool:
    """Rabin's test for a monic ``f`` over ``F``."""
    n = deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    if powmod(F, x, F.q ** n, f) != mod(F, x, f):
        return False
    for r in _prime_factors(n):
        h = sub(F, powmod(F, x, F.q ** (n // r), f), x)
        if gcd(F, h, f) != [1]:
            return False
    return True


def _prime_factors(n: int) -> List[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def lcm(a: int, b: int) -> int:
    return a * b // igcd(a, b)


def prime_factors(n: int) -> List[int]:
    return _prime_factors(n)
