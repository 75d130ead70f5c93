"""Arithmetic in GF(p^r) with dense discrete-log tables.

Elements are encoded as integers ``sum(c[i] * p**i)`` where ``c`` are the
coefficients of the polynomial representative (degree < r).  The encoding is
the array key used by every other module.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np
from sympy import factorint, isprime, totient

from .errors import ValidationError

Q_CAP = 2**31


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^r) presented as GF(p)[x] / (modulus).

    ``modulus`` holds the r low-order coefficients of a monic polynomial of
    degree r; for r = 1 it is ``(0,)`` (the x - 0 convention).
    """

    p: int
    r: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.r

    def to_json(self) -> dict:
        return {"p": self.p, "r": self.r, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, data: dict) -> "FieldSpec":
        f = cls(int(data["p"]), int(data["r"]), tuple(int(c) for c in data["modulus"]))
        if f.r > 1 and not is_irreducible(f.p, list(f.modulus) + [1]):
            raise ValidationError(f"modulus {f.modulus} is reducible over GF({f.p})")
        return f


@dataclass(frozen=True)
class FieldElement:
    coeffs: tuple[int, ...]

    def encode(self, p: int) -> int:
        return sum(c * p**i for i, c in enumerate(self.coeffs))

    @classmethod
    def decode(cls, f: FieldSpec, x: int) -> "FieldElement":
        out = []
        for _ in range(f.r):
            x, c = divmod(x, f.p)
            out.append(c)
        return cls(tuple(out))

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(c) if (c != 1 or i == 0) else ""
            terms.append(coef + mono)
        return "+".join(reversed(terms)) or "0"


@dataclass(frozen=True, eq=False)
class DlogTable:
    """Powers and logarithms of a primitive element ``alpha``.

    ``pow[k]`` is the encoding of alpha^k for 0 <= k < q-1 and ``log[x]`` the
    exponent of the nonzero element with encoding x (``log[0] == -1``).
    """

    field: FieldSpec
    alpha: int
    pow: np.ndarray
    log: np.ndarray

    @property
    def q(self) -> int:
        return self.field.q


# -- polynomial helpers over GF(p), coefficient lists low degree first -------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    b = _trim(list(b))
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        _trim(a)
    return a


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_powmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(base, mod, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), mod, p)
        base = _poly_mod(_poly_mul(base, base, p), mod, p)
        e >>= 1
    return result


def is_irreducible(p: int, poly: list[int]) -> bool:
    """Irreducibility of a monic polynomial over GF(p) (coefficients low first)."""
    poly = _trim(list(poly))
    r = len(poly) - 1
    if r <= 0:
        return False
    if r == 1:
        return True
    if r <= 3:
        # a reducible cubic or quadratic has a linear factor
        return all(sum(c * pow(x, i, p) for i, c in enumerate(poly)) % p for x in range(p))
    xpk = [0, 1]
    for _ in range(1, r // 2 + 1):
        xpk = _poly_powmod(xpk, p, poly, p)
        diff = list(xpk) + [0] * max(0, 2 - len(xpk))
        diff[1] = (diff[1] - 1) % p
        if len(_poly_gcd(poly, diff, p)) > 1:
            return False
    return True


@functools.lru_cache(maxsize=None)
def build_field(p: int, r: int = 1) -> FieldSpec:
    """GF(p^r) with the lexicographically smallest irreducible monic modulus.

    Moduli are compared as tuples ``(c0, c1, ..., c_{r-1})``.
    """
    if not isinstance(p, int) or not isprime(p):
        raise ValidationError(f"{p} is not prime")
    if r < 1:
        raise ValidationError(f"degree r must be positive, got {r}")
    if p**r > Q_CAP:
        raise ValidationError(f"q = {p}^{r} exceeds the cap 2^31")
    if r == 1:
        return FieldSpec(p, 1, (0,))
    for low in itertools.product(range(p), repeat=r):
        if low[0] == 0:
            continue
        if is_irreducible(p, list(low) + [1]):
            return FieldSpec(p, r, tuple(low))
    raise AssertionError("no irreducible polynomial found")  # unreachable


def field_for_order(q: int) -> FieldSpec:
    fac = factorint(q)
    if len(fac) != 1:
        raise ValidationError(f"{q} is not a prime power")
    ((p, r),) = fac.items()
    return build_field(int(p), int(r))


def _coerce(f: FieldSpec, a) -> int:
    if isinstance(a, FieldElement):
        if len(a.coeffs) != f.r or any(not 0 <= c < f.p for c in a.coeffs):
            raise ValidationError(f"{a} is not an element of GF({f.q})")
        return a.encode(f.p)
    a = int(a)
    if not 0 <= a < f.q:
        raise ValidationError(f"{a} is not an element encoding of GF({f.q})")
    return a


def _digits(f: FieldSpec, x: int) -> list[int]:
    out = []
    for _ in range(f.r):
        x, c = divmod(x, f.p)
        out.append(c)
    return out


def _undigits(f: FieldSpec, c: list[int]) -> int:
    return sum(v * f.p**i for i, v in enumerate(c))


def field_add(f: FieldSpec, a, b) -> int:
    a, b = _coerce(f, a), _coerce(f, b)
    if f.r == 1:
        return (a + b) % f.p
    return _undigits(f, [(x + y) % f.p for x, y in zip(_digits(f, a), _digits(f, b))])


def field_neg(f: FieldSpec, a) -> int:
    a = _coerce(f, a)
    return _undigits(f, [(-x) % f.p for x in _digits(f, a)])


def field_mul(f: FieldSpec, a, b) -> int:
    """Product of two elements, returned as an encoding."""
    a, b = _coerce(f, a), _coerce(f, b)
    if f.r == 1:
        return a * b % f.p
    prod = _poly_mul(_trim(_digits(f, a)), _trim(_digits(f, b)), f.p)
    red = _poly_mod(prod, list(f.modulus) + [1], f.p)
    return _undigits(f, red + [0] * (f.r - len(red)))


def field_pow(f: FieldSpec, a, e: int) -> int:
    a = _coerce(f, a)
    result = 1
    while e:
        if e & 1:
            result = field_mul(f, result, a)
        a = field_mul(f, a, a)
        e >>= 1
    return result


def is_primitive(f: FieldSpec, a) -> bool:
    a = _coerce(f, a)
    if a == 0:
        return False
    n = f.q - 1
    return all(field_pow(f, a, n // ell) != 1 for ell in factorint(n)) if n > 1 else a == 1


@functools.lru_cache(maxsize=None)
def _smallest_primitive(f: FieldSpec) -> int:
    for a in range(1, f.q):
        if is_primitive(f, a):
            return a
    raise AssertionError("multiplicative group has no generator")  # unreachable


def _power_sequence(f: FieldSpec, alpha: int) -> np.ndarray:
    n = f.q - 1
    out = np.empty(n, dtype=np.int64)
    x = 1
    if f.r == 1:
        for k in range(n):
            out[k] = x
            x = x * alpha % f.p
    else:
        for k in range(n):
            out[k] = x
            x = field_mul(f, x, alpha)
    return out


@functools.lru_cache(maxsize=None)
def primitive_elements(f: FieldSpec) -> tuple[int, ...]:
    """All phi(q-1) generators of GF(q)^*, ascending by encoding."""
    n = f.q - 1
    pw = _power_sequence(f, _smallest_primitive(f))
    gens = sorted(int(pw[k]) for k in range(n) if np.gcd(k, n) == 1)
    assert len(gens) == totient(n)
    return tuple(gens)


@functools.lru_cache(maxsize=4096)
def dlog_table(f: FieldSpec, alpha: int) -> DlogTable:
    alpha = _coerce(f, alpha)
    if not is_primitive(f, alpha):
        raise ValidationError(f"{FieldElement.decode(f, alpha)} is not primitive in GF({f.q})")
    pw = _power_sequence(f, alpha)
    log = np.full(f.q, -1, dtype=np.int64)
    log[pw] = np.arange(f.q - 1)
    if np.count_nonzero(log >= 0) != f.q - 1:
        raise AssertionError("power sequence of a primitive element repeated")
    pw.setflags(write=False)
    log.setflags(write=False)
    return DlogTable(f, alpha, pw, log)


def default_dlog(f: FieldSpec, alpha_index: int = 0) -> DlogTable:
    """Discrete-log table for the ``alpha_index``-th primitive element."""
    gens = primitive_elements(f)
    if not 0 <= alpha_index < len(gens):
        raise ValidationError(f"alpha index {alpha_index} out of range [0, {len(gens)})")
    return dlog_table(f, gens[alpha_index])


def add_one(f: FieldSpec, x: np.ndarray) -> np.ndarray:
    """Encodings of x + 1 (vectorised)."""
    c0 = x % f.p
    return x - c0 + (c0 + 1) % f.p
