"""Computable principal ideal rings.

Every supported ring is presented as ``E/(g)`` where ``E`` is a Euclidean
domain (integers, rationals, a prime field, or univariate polynomials over a
prime field) and ``g`` is the modulus (zero for the domains themselves).
Element payloads are canonical representatives in ``E``: reduced residues,
reduced fractions, or trimmed coefficient tuples (lowest degree first).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd
from fractions import Fraction
from functools import cached_property
from typing import Any

from .errors import InvalidInput, UnsupportedInstance


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factor_int(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------
# Euclidean domains


class EuclideanDomain:
    """Arithmetic on canonical payloads of a Euclidean domain."""

    name = "?"

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def divmod(self, a, b):
        raise NotImplementedError

    def norm(self, a) -> int:
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def is_unit(self, a) -> bool:
        return not self.is_zero(a) and self.norm(a) == self.norm(self.one())

    def unit_inverse(self, u):
        raise NotImplementedError

    def normalize(self, a):
        """Return ``(u, b)`` with ``u`` a unit and ``b = u*a`` the canonical associate."""
        raise NotImplementedError

    def divides(self, a, b) -> bool:
        """Does ``a`` divide ``b``?"""
        if self.is_zero(a):
            return self.is_zero(b)
        return self.is_zero(self.divmod(b, a)[1])

    def exact_div(self, b, a):
        q, r = self.divmod(b, a)
        if not self.is_zero(r):
            raise ArithmeticError("inexact division")
        return q

    def gcd(self, a, b):
        while not self.is_zero(b):
            a, b = b, self.divmod(a, b)[1]
        return self.normalize(a)[1]

    def xgcd(self, a, b):
        """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` normalised."""
        r0, r1 = a, b
        s0, s1 = self.one(), self.zero()
        t0, t1 = self.zero(), self.one()
        while not self.is_zero(r1):
            q, r = self.divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, self.sub(s0, self.mul(q, s1))
            t0, t1 = t1, self.sub(t0, self.mul(q, t1))
        u, g = self.normalize(r0)
        return g, self.mul(u, s0), self.mul(u, t0)

    def pow(self, a, k: int):
        out = self.one()
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def primes_dividing(self, a) -> list:
        """Normalised prime elements dividing a nonzero non-unit ``a``."""
        raise NotImplementedError

    def valuation(self, q, a) -> int:
        v = 0
        while not self.is_zero(a) and self.divides(q, a):
            a = self.exact_div(a, q)
            v += 1
        return v

    def to_str(self, a) -> str:
        return str(a)


class IntegerDomain(EuclideanDomain):
    name = "ZZ"

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return int(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def divmod(self, a, b):
        return divmod(a, b)

    def norm(self, a):
        return abs(a)

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a in (1, -1)

    def unit_inverse(self, u):
        return u

    def normalize(self, a):
        return (-1, -a) if a < 0 else (1, a)

    def divides(self, a, b):
        return b == 0 if a == 0 else b % a == 0

    def gcd(self, a, b):

        return gcd(a, b)

    def primes_dividing(self, a):
        return sorted(factor_int(a))


class RationalField(EuclideanDomain):
    name = "QQ"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def divmod(self, a, b):
        return a / b, Fraction(0)

    def norm(self, a):
        return 0 if a == 0 else 1

    def unit_inverse(self, u):
        return 1 / u

    def normalize(self, a):
        return (Fraction(1), a) if a == 0 else (1 / a, Fraction(1))

    def primes_dividing(self, a):
        return []


class PrimeFieldDomain(EuclideanDomain):
    def __init__(self, p: int):
        self.p = p
        self.name = f"GF({p})"

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return int(n) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def divmod(self, a, b):
        return a * pow(b, -1, self.p) % self.p, 0

    def norm(self, a):
        return 0 if a == 0 else 1

    def unit_inverse(self, u):
        return pow(u, -1, self.p)

    def normalize(self, a):
        return (1, 0) if a == 0 else (pow(a, -1, self.p), 1)

    def primes_dividing(self, a):
        return []


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class PolynomialDomain(EuclideanDomain):
    """F_p[x]; payloads are trimmed coefficient tuples, lowest degree first."""

    def __init__(self, p: int):
        self.p = p
        self.name = f"GF({p})[x]"

    def zero(self):
        return ()

    def one(self):
        return (1,)

    def from_int(self, n):
        return _trim([int(n) % self.p])

    def coerce(self, coeffs):
        return _trim([int(c) % self.p for c in coeffs])

    def add(self, a, b):
        n = max(len(a), len(b))
        p = self.p
        return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])

    def neg(self, a):
        return tuple(-c % self.p for c in a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return _trim([c % self.p for c in out])

    def divmod(self, a, b):
        if not b:
            raise ZeroDivisionError
        p = self.p
        r = list(a)
        q = [0] * max(len(a) - len(b) + 1, 0)
        inv = pow(b[-1], -1, p)
        while len(r) >= len(b) and r:
            shift = len(r) - len(b)
            c = r[-1] * inv % p
            q[shift] = c
            for i, y in enumerate(b):
                r[shift + i] = (r[shift + i] - c * y) % p
            r = list(_trim(r))
        return _trim(q), tuple(r)

    def norm(self, a):
        return len(a)

    def is_zero(self, a):
        return not a

    def is_unit(self, a):
        return len(a) == 1

    def unit_inverse(self, u):
        return (pow(u[0], -1, self.p),)

    def normalize(self, a):
        if not a:
            return (1,), ()
        u = (pow(a[-1], -1, self.p),)
        return u, self.mul(u, a)

    def primes_dividing(self, a):
        out = []
        rest = self.normalize(a)[1]
        deg = 1
        while 2 * deg <= len(rest) - 1:
            for cand in self._monic(deg):
                if self.divides(cand, rest):
                    out.append(cand)
                    while self.divides(cand, rest):
                        rest = self.exact_div(rest, cand)
            deg += 1
        if len(rest) > 1:
            out.append(rest)
        return sorted(set(out))

    def _monic(self, deg):

        for tail in product(range(self.p), repeat=deg):
            yield tuple(tail) + (1,)

    def to_str(self, a):
        if not a:
            return "0"
        terms = []
        for i, c in enumerate(a):
            if c:
                terms.append(str(c) if i == 0 else f"{'' if c == 1 else c}x{'' if i == 1 else '^' + str(i)}")
        return "+".join(reversed(terms))


ZZ_DOMAIN = IntegerDomain()
QQ_DOMAIN = RationalField()


# ---------------------------------------------------------------------------
# Ring specifications


@dataclass(frozen=True)
class RingSpec:
    """One of the supported rings.

    ``kind`` is ``"ZZ"``, ``"Zmod"`` (uses ``n``), ``"GF"`` (uses ``p``),
    ``"QQ"`` or ``"Fpx"`` (uses ``p`` and the monic modulus ``f``, given as a
    coefficient tuple, lowest degree first).
    """

    kind: str
    n: int = 0
    p: int = 0
    f: tuple = ()

    def __post_init__(self):
        if self.kind == "Zmod":
            if self.n < 2:
                raise InvalidInput("Z/n needs n >= 2")
        elif self.kind == "GF":
            if not is_prime(self.p):
                raise InvalidInput(f"{self.p} is not prime")
        elif self.kind == "Fpx":
            if not is_prime(self.p):
                raise InvalidInput(f"{self.p} is not prime")
            f = tuple(int(c) % self.p for c in self.f)
            if len(f) < 2 or f[-1] != 1:
                raise InvalidInput("f must be monic of degree >= 1")
            object.__setattr__(self, "f", f)
        elif self.kind not in ("ZZ", "QQ"):
            raise InvalidInput(f"unknown ring kind {self.kind!r}")

    # -- structure -------------------------------------------------------

    @cached_property
    def cover(self) -> EuclideanDomain:
        if self.kind in ("ZZ", "Zmod"):
            return ZZ_DOMAIN
        if self.kind == "QQ":
            return QQ_DOMAIN
        if self.kind == "GF":
            return PrimeFieldDomain(self.p)
        return PolynomialDomain(self.p)

    @cached_property
    def modulus(self):
        if self.kind == "Zmod":
            return self.n
        if self.kind == "Fpx":
            return self.f
        return self.cover.zero()

    @property
    def is_domain_cover(self) -> bool:
        """True when the ring equals its covering Euclidean domain."""
        return self.cover.is_zero(self.modulus)

    @property
    def is_field(self) -> bool:
        if self.kind in ("GF", "QQ"):
            return True
        if self.kind == "Zmod":
            return is_prime(self.n)
        if self.kind == "Fpx":
            return self.cover.primes_dividing(self.f) == [self.f]
        return False

    @property
    def is_artinian(self) -> bool:
        return self.kind != "ZZ"

    # -- elements --------------------------------------------------------

    def reduce(self, x):
        """Canonical representative of a cover element."""
        if self.kind == "Zmod":
            return x % self.n
        if self.kind == "Fpx":
            return self.cover.divmod(x, self.f)[1]
        return x

    def __call__(self, value) -> Any:
        """Coerce an int, string, fraction or coefficient list."""
        E = self.cover
        if self.kind == "Fpx":
            if isinstance(value, (list, tuple)):
                return self.reduce(E.coerce(int(c) for c in value))
            return self.reduce(E.from_int(int(value)))
        if self.kind == "QQ":
            return Fraction(value)
        if isinstance(value, str):
            value = int(value)
        return self.reduce(E.from_int(value))

    def zero(self):
        return self.reduce(self.cover.zero())

    def one(self):
        return self.reduce(self.cover.one())

    def add(self, a, b):
        return self.reduce(self.cover.add(a, b))

    def sub(self, a, b):
        return self.reduce(self.cover.sub(a, b))

    def neg(self, a):
        return self.reduce(self.cover.neg(a))

    def mul(self, a, b):
        return self.reduce(self.cover.mul(a, b))

    def is_zero(self, a) -> bool:
        return self.cover.is_zero(a)

    def is_unit(self, a) -> bool:
        E = self.cover
        if self.is_domain_cover:
            return E.is_unit(a)
        return E.is_unit(E.gcd(a, self.modulus))

    def inverse(self, a):
        E = self.cover
        if self.is_domain_cover:
            if not E.is_unit(a):
                raise ZeroDivisionError(f"{a} is not a unit")
            return E.unit_inverse(a)
        g, s, _ = E.xgcd(a, self.modulus)
        if not E.is_unit(g):
            raise ZeroDivisionError(f"{a} is not a unit")
        return self.reduce(E.mul(s, E.unit_inverse(g)))

    def pow(self, a, k: int):
        out = self.one()
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def is_nilpotent(self, a) -> bool:
        if self.is_domain_cover:
            return self.is_zero(a)
        E = self.cover
        return all(E.divides(q, a) for q in E.primes_dividing(self.modulus))

    # -- serialisation -----------------------------------------------------

    def elem_to_json(self, a):
        if self.kind == "Fpx":
            return [str(c) for c in a]
        if self.kind == "QQ":
            return str(a)
        return str(a)

    def elem_from_json(self, data):
        return self(data)

    def to_json(self) -> dict:
        if self.kind == "Zmod":
            return {"kind": "Zmod", "n": str(self.n)}
        if self.kind == "GF":
            return {"kind": "GF", "p": str(self.p)}
        if self.kind == "Fpx":
            return {"kind": "Fpx", "p": str(self.p), "f": [str(c) for c in self.f]}
        return {"kind": self.kind}

    @classmethod
    def from_json(cls, data) -> "RingSpec":
        kind = data["kind"]
        if kind == "Zmod":
            return Zmod(int(data["n"]))
        if kind == "GF":
            return GF(int(data["p"]))
        if kind == "Fpx":
            return FpxQuotient(int(data["p"]), [int(c) for c in data["f"]])
        return cls(kind)

    def __str__(self):
        if self.kind == "Zmod":
            return f"Z/{self.n}"
        if self.kind == "GF":
            return f"F{self.p}"
        if self.kind == "Fpx":
            return f"F{self.p}[x]/({self.cover.to_str(self.f)})"
        return self.kind

    # -- quotient by an ideal of the cover ---------------------------------

    def quotient(self, c) -> "RingSpec":
        """The ring ``E/(gcd(g, c))`` for a cover element ``c``.

        Raises :class:`UnsupportedInstance` when the quotient is the zero
        ring or not representable by a supported kind.
        """
        E = self.cover
        d = E.gcd(self.modulus, c)
        if E.is_zero(d):
            return self
        if E.is_unit(d):
            raise UnsupportedInstance(f"quotient of {self} by {E.to_str(c)} is the zero ring")
        if self.kind in ("ZZ", "Zmod"):
            return Zmod(d)
        if self.kind == "Fpx" or self.kind == "GF":
            return FpxQuotient(self.p, d)
        raise UnsupportedInstance(f"cannot form a proper quotient of {self}")


def Zmod(n: int) -> RingSpec:
    return RingSpec("Zmod", n=int(n))


def GF(p: int) -> RingSpec:
    return RingSpec("GF", p=int(p))


def FpxQuotient(p: int, f) -> RingSpec:
    return RingSpec("Fpx", p=int(p), f=tuple(int(c) for c in f))


ZZ = RingSpec("ZZ")
QQ = RingSpec("QQ")


# ---------------------------------------------------------------------------
# Ring maps


def ring_map(source: RingSpec, target: RingSpec):
    """Return the canonical map ``source -> target`` as a Python callable.

    Supported: identity, quotient maps inside the integer family
    (``Z -> Z/m``, ``Z/n -> Z/m`` with ``m | n``, ``Z/n -> F_p`` with
    ``p | n``), quotient maps ``F_p[x]/(f) -> F_p[x]/(h)`` with ``h | f``, and
    the constant inclusion ``F_p -> F_p[x]/(f)``.
    """
    if source == target:
        return lambda a: a
    ints = ("ZZ", "Zmod")
    if source.kind in ints and target.kind in ints + ("GF",):
        m = target.n if target.kind == "Zmod" else (0 if target.kind == "ZZ" else target.p)
        n = source.n if source.kind == "Zmod" else 0
        if m and (n % m == 0):
            return lambda a: a % m
    if source.kind == "GF" and target.kind in ("Zmod", "GF") and (target.n or target.p) == source.p:
        return lambda a: a
    if source.kind == "GF" and target.kind == "Fpx" and target.p == source.p:
        return lambda a: target.reduce((a,) if a else ())
    if source.kind == "Fpx" and target.kind == "Fpx" and source.p == target.p:
        if source.cover.divides(target.f, source.f):
            return target.reduce
    raise InvalidInput(f"no supported ring map {source} -> {target}")
