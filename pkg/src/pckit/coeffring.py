"""Exact arithmetic in finite coefficient rings.

Three families are supported:

* ``GF(p, f)``: the finite field with ``q = p**f`` elements,
* ``Zmod(p, r)``: the truncation ``Z/p^r``,
* ``dual_numbers(p, f)``: ``F_q[eps]/(eps^2)``.

Every element is encoded by a canonical non-negative integer *code*.  For
``GF(p, f)`` the code of ``c_0 + c_1 x + ... + c_{f-1} x^{f-1}`` is
``sum(c_i * p**i)`` where ``x`` is the class of the variable modulo the
defining polynomial (see :func:`defining_polynomial`).  For ``Zmod`` the code is
the residue in ``[0, p**r)``.  A dual number ``a + b*eps`` has code
``a + q*b``.

All arithmetic is vectorised over numpy integer arrays of codes; the
:class:`RingElem` wrapper gives scalar operator syntax on top of it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidRingSpec, NonUnit, RingMismatch, ZeroResidue

FINITE_FIELD = "Fq"
ZMOD = "ZmodPr"
DUAL = "Dual"

_KINDS = (FINITE_FIELD, ZMOD, DUAL)

# largest ring we are willing to build exp/log tables for
MAX_RING_SIZE = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
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


# -- polynomials over F_p as coefficient lists, lowest degree first ----------


def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a, b, mod, p):
    """Product of a and b reduced modulo the monic polynomial ``mod``."""
    f = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, f - 1, -1):
        c = prod[k]
        if c:
            for j in range(f + 1):
                prod[k - f + j] = (prod[k - f + j] - c * mod[j]) % p
    prod = prod[:f] + [0] * (f - len(prod))
    return prod


def _poly_rem(a, b, p):
    a = _poly_trim(a)
    b = _poly_trim(b)
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for j, y in enumerate(b):
            a[shift + j] = (a[shift + j] - c * y) % p
        a = _poly_trim(a)
    return a


def _is_irreducible(poly, p):
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_rem(poly, list(low) + [1], p):
                return False
    return True


@lru_cache(maxsize=None)
def defining_polynomial(p: int, f: int) -> tuple[int, ...]:
    """Monic irreducible polynomial of degree ``f`` over F_p fixing ``GF(p, f)``.

    Coefficients are returned lowest degree first, leading 1 included.  The
    choice is the least irreducible candidate when the non-leading
    coefficients are compared lexicographically from ``c_{f-1}`` down to
    ``c_0``; e.g. ``x^2+x+1`` for F_4, ``x^2+1`` for F_9 and ``x^2+2`` for F_25.
    """
    if f == 1:
        return (0, 1)
    for high_first in itertools.product(range(p), repeat=f):
        poly = list(reversed(high_first)) + [1]
        if poly[0] == 0:
            continue
        if _is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True)
class RingSpec:
    """A finite coefficient ring.

    Use the constructors :func:`GF`, :func:`Zmod` and :func:`dual_numbers`
    rather than instantiating directly.
    """

    kind: str
    p: int
    f: int = 1
    r: int = 1

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidRingSpec(f"unknown ring kind {self.kind!r}")
        if not is_prime(self.p):
            raise InvalidRingSpec(f"p = {self.p} is not prime")
        if self.f < 1 or self.r < 1:
            raise InvalidRingSpec("f and r must be >= 1")
        if self.kind == ZMOD and self.f != 1:
            raise InvalidRingSpec("Z/p^r has no extension degree")
        if self.kind != ZMOD and self.r != 1:
            raise InvalidRingSpec("truncation exponent only applies to Z/p^r")
        if self.size > MAX_RING_SIZE:
            raise InvalidRingSpec(f"ring of size {self.size} is too large")

    # -- basic data -------------------------------------------------------

    @property
    def q(self) -> int:
        """Size of the residue field."""
        return self.p**self.f

    @property
    def size(self) -> int:
        if self.kind == FINITE_FIELD:
            return self.q
        if self.kind == ZMOD:
            return self.p**self.r
        return self.q**2

    @property
    def characteristic(self) -> int:
        return self.p**self.r if self.kind == ZMOD else self.p

    @property
    def is_field(self) -> bool:
        return self.kind == FINITE_FIELD or (self.kind == ZMOD and self.r == 1)

    @property
    def base(self) -> RingSpec:
        """Base field of a dual-number ring (the ring itself otherwise)."""
        if self.kind == DUAL:
            return RingSpec(FINITE_FIELD, self.p, self.f)
        return self

    @property
    def residue_field(self) -> RingSpec:
        return RingSpec(FINITE_FIELD, self.p, self.f)

    @property
    def _cyclic(self) -> bool:
        # additive group cyclic: plain modular arithmetic on codes
        return self.kind == ZMOD or (self.kind == FINITE_FIELD and self.f == 1)

    @property
    def modulus(self) -> int:
        """Modulus for plain integer arithmetic (cyclic rings only)."""
        return self.characteristic if self.kind == ZMOD else self.p

    def __repr__(self):
        if self.kind == FINITE_FIELD:
            return f"GF({self.p}^{self.f})" if self.f > 1 else f"GF({self.p})"
        if self.kind == ZMOD:
            return f"Z/{self.p}^{self.r}"
        return f"GF({self.q})[eps]"

    # -- vectorised arithmetic on codes -----------------------------------

    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return 1

    def elements(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int64)

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._cyclic:
            return (a + b) % self.modulus
        if self.kind == FINITE_FIELD:
            return _digit_add(a, b, self.p, self.f)
        q = self.q
        base = self.base
        return base.add(a % q, b % q) + q * base.add(a // q, b // q)

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self._cyclic:
            return (-a) % self.modulus
        if self.kind == FINITE_FIELD:
            return _digit_neg(a, self.p, self.f)
        q = self.q
        base = self.base
        return base.neg(a % q) + q * base.neg(a // q)

    def sub(self, a, b):
        if self._cyclic:
            return (np.asarray(a, dtype=np.int64) - np.asarray(b, dtype=np.int64)) % self.modulus
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._cyclic:
            return (a * b) % self.modulus
        if self.kind == FINITE_FIELD:
            t = _field_tables(self.p, self.f)
            out = t.exp[(t.log[a] + t.log[b]) % (self.q - 1)]
            return np.where((a == 0) | (b == 0), 0, out)
        q = self.q
        base = self.base
        a0, a1 = a % q, a // q
        b0, b1 = b % q, b // q
        return base.mul(a0, b0) + q * base.add(base.mul(a0, b1), base.mul(a1, b0))

    def is_unit(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.kind == DUAL:
            return (a % self.q) != 0
        if self.kind == ZMOD:
            return (a % self.p) != 0
        return a != 0

    def inv(self, a):
        """Multiplicative inverse; raises :class:`NonUnit` if any entry is not a unit."""
        a = np.asarray(a, dtype=np.int64)
        if not np.all(self.is_unit(a)):
            raise NonUnit(f"non-invertible element in {self!r}")
        return self._inv_unchecked(a)

    def _inv_unchecked(self, a):
        if self.kind == FINITE_FIELD:
            t = _field_tables(self.p, self.f)
            if self.f == 1:
                return t.inv[a]
            return t.exp[(-t.log[a]) % (self.q - 1)]
        if self.kind == ZMOD:
            return _zmod_inverse_table(self.p, self.r)[a]
        q = self.q
        base = self.base
        a0, a1 = a % q, a // q
        i0 = base._inv_unchecked(a0)
        # (a0 + a1 eps)^-1 = a0^-1 - a1 a0^-2 eps
        return i0 + q * base.neg(base.mul(a1, base.mul(i0, i0)))

    def power(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e < 0:
            a = self.inv(a)
            e = -e
        result = np.ones_like(a)
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def from_int(self, n):
        """Image of the integer(s) ``n`` under Z -> ring."""
        n = np.asarray(n, dtype=np.int64)
        return n % self.characteristic

    def sum(self, a, axis=0):
        """Ring sum along an axis."""
        a = np.asarray(a, dtype=np.int64)
        if self._cyclic:
            return a.sum(axis=axis) % self.modulus
        a = np.moveaxis(a, axis, 0)
        out = np.zeros(a.shape[1:], dtype=np.int64)
        for x in a:
            out = self.add(out, x)
        return out

    # -- element construction ---------------------------------------------

    def __call__(self, value) -> RingElem:
        return self.elem(value)

    def elem(self, value) -> RingElem:
        """Build an element from an integer or a serialised payload."""
        return RingElem(self, self.code_from_payload(value))

    def code_from_payload(self, value) -> int:
        if isinstance(value, RingElem):
            if value.spec != self:
                raise RingMismatch(f"{value.spec!r} element used in {self!r}")
            return value.code
        if isinstance(value, (int, np.integer)):
            return int(self.from_int(int(value)))
        value = list(value)
        if self.kind == FINITE_FIELD:
            if len(value) > self.f:
                raise InvalidRingSpec(f"too many coefficients for {self!r}")
            return sum((int(c) % self.p) * self.p**i for i, c in enumerate(value))
        if self.kind == DUAL and len(value) == 2:
            base = self.base
            return base.code_from_payload(value[0]) + self.q * base.code_from_payload(value[1])
        raise InvalidRingSpec(f"cannot read {value!r} as element of {self!r}")

    def payload(self, code: int):
        code = int(code)
        if self.kind == ZMOD or (self.kind == FINITE_FIELD and self.f == 1):
            return code
        if self.kind == FINITE_FIELD:
            return [(code // self.p**i) % self.p for i in range(self.f)]
        base = self.base
        return [base.payload(code % self.q), base.payload(code // self.q)]

    def dual(self, a, b) -> RingElem:
        """The dual number ``a + b*eps`` (only for dual-number rings)."""
        if self.kind != DUAL:
            raise InvalidRingSpec("eps only exists in dual-number rings")
        base = self.base
        return RingElem(self, base.code_from_payload(a) + self.q * base.code_from_payload(b))

    # -- serialisation ------------------------------------------------------

    def to_json(self) -> dict:
        if self.kind == ZMOD:
            return {"kind": ZMOD, "p": self.p, "r": self.r}
        return {"kind": self.kind, "p": self.p, "f": self.f}

    @classmethod
    def from_json(cls, data: dict) -> RingSpec:
        try:
            kind = data["kind"]
            p = int(data["p"])
        except (KeyError, TypeError) as exc:
            raise InvalidRingSpec(f"bad ring description {data!r}") from exc
        if kind == ZMOD:
            return cls(ZMOD, p, 1, int(data.get("r", 1)))
        return cls(kind, p, int(data.get("f", 1)))


def GF(p: int, f: int = 1) -> RingSpec:
    return RingSpec(FINITE_FIELD, p, f)


def Zmod(p: int, r: int = 1) -> RingSpec:
    return RingSpec(ZMOD, p, 1, r)


def dual_numbers(p: int, f: int = 1) -> RingSpec:
    return RingSpec(DUAL, p, f)


# -- helpers for the non-prime finite fields -------------------------------


def _digits(a, p, f):
    return [(a // p**i) % p for i in range(f)]


def _digit_add(a, b, p, f):
    out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    for i in range(f):
        w = p**i
        out += (((a // w) % p + (b // w) % p) % p) * w
    return out


def _digit_neg(a, p, f):
    out = np.zeros(a.shape, dtype=np.int64)
    for i in range(f):
        w = p**i
        out += ((-((a // w) % p)) % p) * w
    return out


class _FieldTables:
    __slots__ = ("exp", "log", "inv", "generator")


@lru_cache(maxsize=None)
def _field_tables(p: int, f: int) -> _FieldTables:
    q = p**f
    t = _FieldTables()
    if f == 1:
        t.inv = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64)
        t.exp = t.log = None
        t.generator = None
        return t
    mod = list(defining_polynomial(p, f))

    def to_code(c):
        return sum(x * p**i for i, x in enumerate(c))

    def from_code(n):
        return [(n // p**i) % p for i in range(f)]

    order = q - 1
    factors = prime_factors(order)

    def pow_poly(c, e):
        result = [1] + [0] * (f - 1)
        while e:
            if e & 1:
                result = _poly_mulmod(result, c, mod, p)
            c = _poly_mulmod(c, c, mod, p)
            e >>= 1
        return result

    one = [1] + [0] * (f - 1)
    for g in range(2, q):
        c = from_code(g)
        if all(pow_poly(c, order // ell) != one for ell in factors):
            break
    exp = np.zeros(order, dtype=np.int64)
    log = np.zeros(q, dtype=np.int64)
    cur = one
    for k in range(order):
        code = to_code(cur)
        exp[k] = code
        log[code] = k
        cur = _poly_mulmod(cur, c, mod, p)
    t.exp = exp
    t.log = log
    t.inv = None
    t.generator = g
    return t


@lru_cache(maxsize=None)
def _zmod_inverse_table(p: int, r: int) -> np.ndarray:
    n = p**r
    return np.array([pow(x, -1, n) if x % p else 0 for x in range(n)], dtype=np.int64)


class RingElem:
    """A single element of a :class:`RingSpec`, stored by its canonical code."""

    __slots__ = ("spec", "code")

    def __init__(self, spec: RingSpec, code: int):
        code = int(code)
        if not 0 <= code < spec.size:
            raise InvalidRingSpec(f"code {code} out of range for {spec!r}")
        self.spec = spec
        self.code = code

    def _coerce(self, other) -> int:
        if isinstance(other, RingElem):
            if other.spec != self.spec:
                raise RingMismatch(f"cannot combine {self.spec!r} and {other.spec!r}")
            return other.code
        if isinstance(other, (int, np.integer)):
            return int(self.spec.from_int(int(other)))
        return NotImplemented

    def _wrap(self, code) -> RingElem:
        return RingElem(self.spec, int(code))

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.spec.add(self.code, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.spec.sub(self.code, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.spec.sub(o, self.code))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.spec.mul(self.code, o))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(self.spec.neg(self.code))

    def __pow__(self, e: int):
        return self._wrap(self.spec.power(self.code, e))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.spec.mul(self.code, self.spec.inv(o)))

    def inverse(self) -> RingElem:
        return invert(self)

    def is_unit(self) -> bool:
        return bool(self.spec.is_unit(self.code))

    def __eq__(self, other):
        if isinstance(other, RingElem):
            return self.spec == other.spec and self.code == other.code
        if isinstance(other, (int, np.integer)):
            return self.code == int(self.spec.from_int(int(other)))
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.code))

    @property
    def payload(self):
        return self.spec.payload(self.code)

    def __repr__(self):
        return f"{self.spec!r}({self.payload})"


def invert(x: RingElem) -> RingElem:
    """Return ``y`` with ``x*y = 1``; raises :class:`NonUnit` otherwise."""
    if not x.is_unit():
        raise NonUnit(f"{x!r} is not a unit")
    return RingElem(x.spec, x.spec.inv(x.code))


def reduce_mod_p(x: RingElem) -> RingElem:
    """Image of an element of ``Z/p^r`` in the residue field ``F_p``."""
    if x.spec.kind != ZMOD:
        raise InvalidRingSpec("reduction is only defined for Z/p^r here")
    return RingElem(GF(x.spec.p), x.code % x.spec.p)


def teichmueller(spec: RingSpec, residue) -> RingElem:
    """The Teichmueller lift of a nonzero residue into ``Z/p^r``.

    The lift is the unique ``(p-1)``-th root of unity reducing to ``residue``.
    It is found by iterating ``a -> a^p`` from any lift until the value is
    stable, which happens after at most ``r`` steps.
    """
    if spec.kind != ZMOD:
        raise InvalidRingSpec("Teichmueller lifts are computed in Z/p^r")
    if isinstance(residue, RingElem):
        if residue.spec != GF(spec.p):
            raise RingMismatch(f"residue must lie in GF({spec.p})")
        a = residue.code
    else:
        a = int(residue) % spec.p
    if a % spec.p == 0:
        raise ZeroResidue("0 has no Teichmueller lift")
    n = spec.size
    while True:
        b = pow(a, spec.p, n)
        if b == a:
            return RingElem(spec, a)
        a = b


@lru_cache(maxsize=None)
def _embedding_table(p: int, f: int, k: int) -> np.ndarray:
    src = GF(p, f)
    dst = GF(p, f * k)
    if f == 1:
        return np.arange(p, dtype=np.int64)
    # least root of the source's defining polynomial inside the target
    mod = defining_polynomial(p, f)
    xs = dst.elements()
    val = np.zeros_like(xs)
    for c in reversed(mod):
        val = dst.add(dst.mul(val, xs), c)
    roots = np.flatnonzero(val == 0)
    theta = int(roots[0])
    table = np.zeros(src.size, dtype=np.int64)
    powers = [1]
    for _ in range(f - 1):
        powers.append(int(dst.mul(powers[-1], theta)))
    for code in range(src.size):
        acc = 0
        for i, c in enumerate(_digits(code, p, f)):
            if c:
                acc = int(dst.add(acc, dst.mul(c, powers[i])))
        table[code] = acc
    return table


def extension_spec(spec: RingSpec, k: int) -> RingSpec:
    if spec.kind == FINITE_FIELD:
        return GF(spec.p, spec.f * k)
    if spec.kind == DUAL:
        return dual_numbers(spec.p, spec.f * k)
    raise InvalidRingSpec(f"{spec!r} has no field extensions")


def embed_codes(spec: RingSpec, codes, k: int):
    """Vectorised :func:`embed_extension` on an array of codes."""
    if k < 1:
        raise InvalidRingSpec("extension degree must be >= 1")
    codes = np.asarray(codes, dtype=np.int64)
    if spec.kind == FINITE_FIELD:
        return _embedding_table(spec.p, spec.f, k)[codes]
    if spec.kind == DUAL:
        table = _embedding_table(spec.p, spec.f, k)
        q_new = spec.q**k
        return table[codes % spec.q] + q_new * table[codes // spec.q]
    raise InvalidRingSpec(f"{spec!r} has no field extensions")


def embed_extension(x: RingElem, k: int) -> RingElem:
    """Embed an element of ``F_q`` into ``F_{q^k}``.

    The image of the generator of ``F_q`` is the least (by code) root of its
    defining polynomial in ``F_{q^k}``, so the embedding is a fixed ring
    homomorphism.
    """
    target = extension_spec(x.spec, k)
    return RingElem(target, int(embed_codes(x.spec, x.code, k)))
