"""Exact arithmetic in F_p and F_{p^e}.

Elements are encoded as plain integers: the element with little-endian
coefficient vector ``(c_0, ..., c_{e-1})`` is ``sum(c_k * p**k)``.  The
encoding doubles as the canonical ordering used whenever a deterministic
choice among several roots is needed.  Matrices store encoded elements in
``int64`` arrays, and the vectorized ``v*`` methods below operate on them.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import _poly
from .errors import CharacteristicError, DomainError, ExtensionRequired, ParseError

# Extension fields up to this order get exp/log tables.
TABLE_LIMIT = 1 << 18


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The finite field F_{p^e} = F_p[x]/(modulus).

    ``modulus`` is the full little-endian coefficient tuple of a monic
    irreducible polynomial of degree ``e`` (``None`` for prime fields).  When
    omitted for ``e > 1`` the first irreducible in canonical order is used.
    """

    p: int
    e: int = 1
    modulus: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not is_prime(int(self.p)):
            raise DomainError(f"field characteristic must be prime, got {self.p!r}")
        if self.e < 1:
            raise DomainError(f"extension degree must be >= 1, got {self.e}")
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "e", int(self.e))
        if self.e == 1:
            if self.modulus is not None and tuple(self.modulus) not in ((0, 1),):
                raise DomainError("prime fields carry no modulus")
            object.__setattr__(self, "modulus", None)
            return
        if self.modulus is None:
            object.__setattr__(self, "modulus", find_irreducible(self.p, self.e))
            return
        mod = tuple(int(c) % self.p for c in self.modulus)
        if len(mod) != self.e + 1 or mod[-1] != 1:
            raise DomainError(f"modulus must be monic of degree {self.e}")
        if not _poly.is_irreducible(FieldSpec(self.p), list(mod)):
            raise DomainError(f"modulus {list(mod)} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", mod)

    # ------------------------------------------------------------------
    @property
    def q(self) -> int:
        return self.p ** self.e

    @property
    def characteristic(self) -> int:
        return self.p

    def __str__(self) -> str:
        if self.e == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.e}"

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, e={self.e}, modulus={list(self.modulus) if self.modulus else None})"

    # ---------------------------------------------------------- encoding
    def encode(self, coeffs: Sequence[int]) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.e:
            raise DomainError(f"element of {self} needs at most {self.e} coefficients")
        out = 0
        for k, c in enumerate(coeffs):
            out += (int(c) % self.p) * self.p ** k
        return out

    def decode(self, a: int) -> Tuple[int, ...]:
        a = int(a)
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def element(self, x: Union[int, Sequence[int], "FieldElement"]) -> "FieldElement":
        return FieldElement(self, self.coerce(x))

    def coerce(self, x) -> int:
        """Encoded value of ``x`` (an int taken mod p, a coefficient list, or an element)."""
        if isinstance(x, FieldElement):
            if x.field != self:
                raise DomainError(f"element of {x.field} used in {self}")
            return x.value
        if isinstance(x, (list, tuple)):
            return self.encode(x)
        return int(x) % self.p

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self) -> Iterator["FieldElement"]:
        for a in range(self.q):
            yield FieldElement(self, a)

    # ------------------------------------------------------ scalar ops
    @cached_property
    def _tables(self):
        if self.e == 1 or self.q > TABLE_LIMIT:
            return None
        q, p, e = self.q, self.p, self.e
        digits = np.array([self.decode(a) for a in range(q)], dtype=np.int64)
        powers = np.array([p ** k for k in range(e)], dtype=np.int64)
        g = self._generator()
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        cur = 1
        for k in range(q - 1):
            exp[k] = cur
            log[cur] = k
            cur = self._polymul(cur, g)
        return digits, powers, exp, log

    def _generator(self) -> int:
        order = self.q - 1
        primes = _poly.prime_factors(order)
        for g in range(2, self.q):
            if all(self._slowpow(g, order // r) != 1 for r in primes):
                return g
        return 1  # q == 2

    def _polymul(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        da, db = self.decode(a), self.decode(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if c:
                for j in range(e + 1):
                    prod[k - e + j] = (prod[k - e + j] - c * mod[j]) % p
        return self.encode(prod[:e])

    def _slowpow(self, a: int, k: int) -> int:
        result, base = 1, a
        while k:
            if k & 1:
                result = self._polymul(result, base)
            base = self._polymul(base, base)
            k >>= 1
        return result

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        da, db = self.decode(a), self.decode(b)
        return self.encode([x + y for x, y in zip(da, db)])

    def sub(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a - b) % self.p
        da, db = self.decode(a), self.decode(b)
        return self.encode([x - y for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        return self.encode([-x for x in self.decode(a)])

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        t = self._tables
        if t is None:
            return self._polymul(a, b)
        _, _, exp, log = t
        return int(exp[(log[a] + log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if int(a) % self.q == 0:
            raise ZeroDivisionError(f"division by zero in {self}")
        if self.e == 1:
            return pow(int(a), -1, self.p)
        t = self._tables
        if t is None:
            return self._slowpow(a, self.q - 2)
        _, _, exp, log = t
        return int(exp[(-log[a]) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        if k == 0:
            return 1
        if a == 0:
            return 0
        if self.e == 1:
            return pow(int(a), k, self.p)
        t = self._tables
        if t is None:
            return self._slowpow(a, k % (self.q - 1) or (self.q - 1))
        _, _, exp, log = t
        return int(exp[(int(log[a]) * k) % (self.q - 1)])

    def order_of(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        n = self.q - 1
        for r in _poly.prime_factors(self.q - 1):
            while n % r == 0 and self.pow(a, n // r) == 1:
                n //= r
        return n

    # ------------------------------------------------------ vector ops
    def vadd(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a + b) % self.p
        t = self._tables
        if t is None:
            return _pyvec(self.add, a, b)
        d, pw = t[0], t[1]
        return ((d[a] + d[b]) % self.p) @ pw

    def vsub(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a - b) % self.p
        t = self._tables
        if t is None:
            return _pyvec(self.sub, a, b)
        d, pw = t[0], t[1]
        return ((d[a] - d[b]) % self.p) @ pw

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.e == 1:
            return (-a) % self.p
        t = self._tables
        if t is None:
            return _pyvec(self.neg, a)
        d, pw = t[0], t[1]
        return ((-d[a]) % self.p) @ pw

    def vmul(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a * b) % self.p
        t = self._tables
        if t is None:
            return _pyvec(self.mul, a, b)
        exp, log = t[2], t[3]
        out = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError(f"division by zero in {self}")
        if self.e == 1:
            return _pyvec(self.inv, a)
        t = self._tables
        if t is None:
            return _pyvec(self.inv, a)
        exp, log = t[2], t[3]
        return exp[(-log[a]) % (self.q - 1)]

    def vsum(self, a, axis: int):
        """Field sum of ``a`` along ``axis``."""
        a = np.asarray(a, dtype=np.int64)
        if self.e == 1:
            if a.shape[axis] * self.p < (1 << 62):
                return a.sum(axis=axis) % self.p
            return np.apply_along_axis(lambda v: sum(int(x) for x in v) % self.p, axis, a).astype(np.int64)
        t = self._tables
        if t is None:
            return np.apply_along_axis(lambda v: functools.reduce(self.add, (int(x) for x in v), 0), axis, a).astype(np.int64)
        d, pw = t[0], t[1]
        return (d[a].sum(axis=axis) % self.p) @ pw

    def random(self, rng: np.random.Generator, size=None):
        return rng.integers(0, self.q, size=size, dtype=np.int64)

    # ---------------------------------------------------------- json
    def to_json(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus) if self.modulus else None}

    @classmethod
    def from_json(cls, obj) -> "FieldSpec":
        try:
            return cls(int(obj["p"]), int(obj.get("e", 1)), tuple(obj["modulus"]) if obj.get("modulus") else None)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad field spec {obj!r}: {exc}") from exc

    def element_to_json(self, a: int):
        return int(a) if self.e == 1 else list(self.decode(a))

    def element_from_json(self, obj) -> int:
        if isinstance(obj, list):
            if self.e == 1 and len(obj) == 1:
                return int(obj[0]) % self.p
            return self.encode(obj)
        if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
            return int(obj) % self.p if self.e == 1 else self.encode([obj])
        raise ParseError(f"bad field element {obj!r} for {self}")


def _pyvec(fn, *arrays):
    shape = np.broadcast(*arrays).shape
    b = [np.broadcast_to(x, shape).ravel() for x in arrays]
    out = np.fromiter((fn(*(int(v[i]) for v in b)) for i in range(b[0].size)), dtype=np.int64, count=b[0].size)
    return out.reshape(shape)


@dataclass(frozen=True)
class FieldElement:
    """A value in a :class:`FieldSpec`; supports the usual operators."""

    field: FieldSpec
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value))
        if not 0 <= self.value < self.field.q:
            raise DomainError(f"encoded value {self.value} out of range for {self.field}")

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self.field.decode(self.value)

    def _other(self, b) -> int:
        if isinstance(b, FieldElement):
            if b.field != self.field:
                raise DomainError(f"mixing elements of {self.field} and {b.field}")
            return b.value
        return self.field.coerce(b)

    def __add__(self, b):
        return FieldElement(self.field, self.field.add(self.value, self._other(b)))

    __radd__ = __add__

    def __sub__(self, b):
        return FieldElement(self.field, self.field.sub(self.value, self._other(b)))

    def __rsub__(self, b):
        return FieldElement(self.field, self.field.sub(self._other(b), self.value))

    def __mul__(self, b):
        return FieldElement(self.field, self.field.mul(self.value, self._other(b)))

    __rmul__ = __mul__

    def __truediv__(self, b):
        return FieldElement(self.field, self.field.div(self.value, self._other(b)))

    def __rtruediv__(self, b):
        return FieldElement(self.field, self.field.div(self._other(b), self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.value, int(k)))

    def __eq__(self, b):
        if isinstance(b, FieldElement):
            return self.field == b.field and self.value == b.value
        if isinstance(b, (int, np.integer, list, tuple)):
            return self.value == self.field.coerce(b)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def order(self) -> int:
        return self.field.order_of(self.value)

    def to_json(self):
        return self.field.element_to_json(self.value)

    def __repr__(self):
        if self.field.e == 1:
            return f"{self.value} (mod {self.field.p})"
        return f"{list(self.coeffs)} in {self.field}"


# ----------------------------------------------------------------------
@functools.lru_cache(maxsize=None)
def find_irreducible(p: int, e: int) -> Tuple[int, ...]:
    """First monic irreducible of degree ``e`` over F_p in canonical order.

    Candidates ``x^e + c_{e-1}x^{e-1} + ... + c_0`` are visited in increasing
    order of ``sum(c_k p^k)``.
    """
    if e == 1:
        return (0, 1)
    base = FieldSpec(p)
    for code in range(1, p ** e):
        low = []
        c = code
        for _ in range(e):
            c, r = divmod(c, p)
            low.append(r)
        if low[0] == 0:
            continue
        cand = low + [1]
        if _poly.is_irreducible(base, cand):
            return tuple(cand)
    raise DomainError(f"no irreducible polynomial of degree {e} over F_{p}")  # unreachable


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Apply ``op`` in {'add', 'sub', 'mul', 'div'} to two elements of one field."""
    if a.field != b.field:
        raise DomainError(f"operands live in {a.field} and {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.value == 0:
            raise ZeroDivisionError("division by zero")
        return a / b
    raise DomainError(f"unknown field operation {op!r}")


def multiplicative_order_mod(q: int, n: int) -> int:
    """Smallest t >= 1 with n | q^t - 1 (requires gcd(q, n) = 1)."""
    if n == 1:
        return 1
    if gcd(q, n) != 1:
        raise CharacteristicError(f"gcd({q}, {n}) != 1")
    t, cur = 1, q % n
    while cur != 1:
        cur = (cur * q) % n
        t += 1
    return t


def _check_char(spec: FieldSpec, n: int) -> None:
    if n < 1:
        raise DomainError(f"root degree must be positive, got {n}")
    if n % spec.p == 0:
        raise CharacteristicError(f"characteristic {spec.p} divides n = {n}")


def primitive_root_of_unity(spec: FieldSpec, n: int) -> FieldElement:
    """Least element (in encoding order) of exact multiplicative order ``n``.

    Raises :class:`ExtensionRequired` with the smallest ``e'`` such that
    ``n | |F|^{e'} - 1`` when the root is not in ``spec``.
    """
    _check_char(spec, n)
    if (spec.q - 1) % n:
        raise ExtensionRequired(multiplicative_order_mod(spec.q, n))
    return FieldElement(spec, _primitive_root_cached(spec, n))


@functools.lru_cache(maxsize=None)
def _primitive_root_cached(spec: FieldSpec, n: int) -> int:
    if n == 1:
        return 1
    primes = _poly.prime_factors(n)
    cands = nth_root_values(spec, 1, n)
    good = [x for x in cands if all(spec.pow(x, n // r) != 1 for r in primes)]
    return min(good)


def nth_root_values(spec: FieldSpec, c: int, n: int) -> List[int]:
    """All roots of y^n = c in ``spec`` (encoded, ascending)."""
    _check_char(spec, n)
    if c == 0:
        return [0]
    f = [spec.neg(c)] + [0] * (n - 1) + [1]
    return _poly.roots(spec, f)


def root_extension_degree(spec: FieldSpec, c: int, n: int) -> int:
    """Smallest d such that y^n = c has a root in the degree-d extension."""
    _check_char(spec, n)
    if c == 0:
        return 1
    f = [spec.neg(c)] + [0] * (n - 1) + [1]
    return min(len(g) - 1 for g, _ in _poly.factor(spec, f))


def nth_roots(spec: FieldSpec, c: FieldElement, n: int) -> List[FieldElement]:
    return [FieldElement(spec, v) for v in nth_root_values(spec, spec.coerce(c), n)]


def nth_root(spec: FieldSpec, c: Union[FieldElement, int], n: int) -> FieldElement:
    """Least n-th root of ``c`` in ``spec``.

    Raises :class:`ExtensionRequired` carrying the minimal extension degree
    when no root exists in ``spec``; ``CharacteristicError`` when p | n.
    """
    cv = spec.coerce(c)
    roots = nth_root_values(spec, cv, n)
    if not roots:
        raise ExtensionRequired(root_extension_degree(spec, cv, n))
    return FieldElement(spec, roots[0])


# ------------------------------------------------------------- extensions
def extend(spec: FieldSpec, degree: int) -> FieldSpec:
    """The degree-``degree`` extension of ``spec`` with its canonical modulus."""
    if degree < 1:
        raise DomainError("extension degree must be positive")
    if degree == 1:
        return spec
    return FieldSpec(spec.p, spec.e * degree)


def is_subfield(small: FieldSpec, big: FieldSpec) -> bool:
    return small.p == big.p and big.e % small.e == 0


@functools.lru_cache(maxsize=None)
def _embedding_table(small: FieldSpec, big: FieldSpec):
    if small.e == 1:
        return None
    beta_roots = _poly.roots(big, list(small.modulus))
    if not beta_roots:
        raise DomainError(f"{small} does not embed in {big}")
    beta = beta_roots[0]
    powers = [1]
    for _ in range(small.e - 1):
        powers.append(big.mul(powers[-1], beta))

    def image(a: int) -> int:
        acc = 0
        for c, bp in zip(small.decode(a), powers):
            if c:
                acc = big.add(acc, big.mul(c, bp))
        return acc

    if small.q <= TABLE_LIMIT:
        return np.array([image(a) for a in range(small.q)], dtype=np.int64)
    return image


def embed_values(small: FieldSpec, big: FieldSpec, values):
    """Map encoded elements of ``small`` into ``big`` (vectorized)."""
    if small == big:
        return np.asarray(values, dtype=np.int64)
    if not is_subfield(small, big):
        raise DomainError(f"{small} is not a subfield of {big}")
    values = np.asarray(values, dtype=np.int64)
    table = _embedding_table(small, big)
    if table is None:
        return values.copy()
    if isinstance(table, np.ndarray):
        return table[values]
    return _pyvec(table, values)


def embed(x: FieldElement, big: FieldSpec) -> FieldElement:
    return FieldElement(big, int(embed_values(x.field, big, np.array(x.value))))


def common_field(*specs: FieldSpec) -> FieldSpec:
    """Smallest field (in this package's tower) containing every argument."""
    specs = [s for s in specs if s is not None]
    p = {s.p for s in specs}
    if len(p) != 1:
        raise DomainError(f"fields of different characteristic: {sorted(p)}")
    best = max(specs, key=lambda s: s.e)
    e = best.e
    for s in specs:
        e = _poly.lcm(e, s.e)
    if e == best.e:
        return best
    return FieldSpec(best.p, e)


def default_field(n: int) -> FieldSpec:
    """Smallest prime p >= 101 with p = 1 (mod n)."""
    p = 101
    while not (is_prime(p) and (p - 1) % n == 0):
        p += 1
    return FieldSpec(p)
