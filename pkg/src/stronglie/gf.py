"""Prime fields F_p and multiplication tables for finite extensions F_{p^d}."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

MAX_MODULUS = 2**31


class FieldError(ValueError):
    pass


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_modulus(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
        raise FieldError(f"modulus must be an integer, got {p!r}")
    p = int(p)
    if p > MAX_MODULUS or not is_prime(p):
        raise FieldError(f"modulus {p} is not a prime <= 2^31")
    return p


def inverse_mod(x: int, p: int) -> int:
    x %= p
    if x == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(x, p - 2, p)


def signed(x: int, p: int) -> int:
    """Representative of x mod p in (-p/2, p/2]."""
    x %= p
    return x - p if x > p // 2 else x


@dataclass(frozen=True)
class FpElem:
    value: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, FpElem):
            if other.modulus != self.modulus:
                raise FieldError(f"modulus mismatch: {self.modulus} vs {other.modulus}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpElem(self.value + v, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpElem(self.value - v, self.modulus)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpElem(v - self.value, self.modulus)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpElem(self.value * v, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.value, self.modulus)

    def inverse(self) -> FpElem:
        return FpElem(inverse_mod(self.value, self.modulus), self.modulus)

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return self * inverse_mod(v, self.modulus)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return FpElem(pow(self.value, n, self.modulus), self.modulus)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.modulus})"


class GF:
    """The prime field F_p; calling it coerces integers into FpElem."""

    def __init__(self, p: int):
        self.p = check_modulus(p)

    def __call__(self, x) -> FpElem:
        if isinstance(x, FpElem):
            if x.modulus != self.p:
                raise FieldError(f"modulus mismatch: {x.modulus} vs {self.p}")
            return x
        return FpElem(int(x), self.p)

    def elements(self):
        return [FpElem(i, self.p) for i in range(self.p)]

    def __eq__(self, other):
        return isinstance(other, GF) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


def fp_arith(x: FpElem, y: FpElem | None, op: str) -> FpElem:
    """Apply one of add, sub, mul, inv, neg. ``y`` is ignored for the unary ops."""
    if op == "neg":
        return -x
    if op == "inv":
        return x.inverse()
    if y is None:
        raise FieldError(f"operation {op!r} needs two operands")
    if x.modulus != y.modulus:
        raise FieldError(f"modulus mismatch: {x.modulus} vs {y.modulus}")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise FieldError(f"unknown operation {op!r}")


# -- univariate polynomials over F_p, coefficient lists low degree first ------


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _polymod(num: list[int], den: list[int], p: int) -> list[int]:
    num = _trim([x % p for x in num])
    den = _trim([x % p for x in den])
    inv_lead = inverse_mod(den[-1], p)
    while len(num) >= len(den):
        shift = len(num) - len(den)
        q = num[-1] * inv_lead % p
        for i, d in enumerate(den):
            num[shift + i] = (num[shift + i] - q * d) % p
        _trim(num)
    return num


def find_factor(coeffs: list[int], p: int) -> list[int] | None:
    """A monic factor of degree 1..d//2 of the polynomial, or None if irreducible."""
    d = len(coeffs) - 1
    for deg in range(1, d // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            cand = list(low) + [1]
            if not _polymod(coeffs, cand, p):
                return cand
    return None


@dataclass(frozen=True)
class ExtFieldTable:
    """F_p[t]/(f) in the basis 1, t, ..., t^(d-1).

    ``mult[i, j, k]`` is the coefficient of e_k in e_i * e_j.
    """

    p: int
    d: int
    modulus_poly: tuple[int, ...]
    mult: np.ndarray = field(compare=False, repr=False)

    @property
    def size(self) -> int:
        return self.p**self.d

    def multiply(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        return np.einsum("i,j,ijk->k", x, y, self.mult) % self.p

    def one(self) -> np.ndarray:
        e = np.zeros(self.d, dtype=np.int64)
        e[0] = 1
        return e

    def elements(self):
        for v in itertools.product(range(self.p), repeat=self.d):
            yield np.array(v, dtype=np.int64)

    def check_field_axioms(self) -> None:
        """Raise FieldError unless the table defines a field.

        Commutativity, associativity and the unit are bilinear conditions, so
        checking them on basis elements covers every element; invertibility is
        checked element by element.
        """
        if self.size > 10**4:
            raise FieldError("exhaustive field check limited to p^d <= 10^4")
        p, d, m = self.p, self.d, self.mult
        if not np.array_equal(m, m.transpose(1, 0, 2)):
            raise FieldError("multiplication is not commutative")
        # (e_i e_j) e_l  vs  e_i (e_j e_l)
        left = np.einsum("ijk,klm->ijlm", m, m) % p
        right = np.einsum("jlk,ikm->ijlm", m, m) % p
        if not np.array_equal(left, right):
            raise FieldError("multiplication is not associative")
        one = self.one()
        for i in range(d):
            e = np.zeros(d, dtype=np.int64)
            e[i] = 1
            if not np.array_equal(self.multiply(one, e), e):
                raise FieldError("e_1 is not a unit")
        from .linalg import rank_mod_p

        for x in self.elements():
            if not x.any():
                continue
            # matrix of y -> x*y
            mx = np.einsum("i,ijk->jk", x, m) % p
            if rank_mod_p(mx, p) < d:
                raise FieldError(f"element {x.tolist()} is a zero divisor")


def ext_field_gf(p: int, d: int, irreducible_coeffs) -> ExtFieldTable:
    """Build F_{p^d} = F_p[t]/(f).

    ``irreducible_coeffs`` lists f low degree first, either all d+1
    coefficients (the last must be 1) or just the d lower ones.
    """
    p = check_modulus(p)
    coeffs = [int(c) % p for c in irreducible_coeffs]
    if len(coeffs) == d:
        coeffs.append(1)
    if len(coeffs) != d + 1 or coeffs[-1] != 1:
        raise FieldError(f"expected a monic polynomial of degree {d}, got {list(irreducible_coeffs)}")
    factor = find_factor(coeffs, p)
    if factor is not None:
        raise FieldError(f"polynomial {coeffs} is reducible over F_{p}: factor {factor}")
    mult = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            prod = [0] * (i + j) + [1]
            rem = _polymod(prod, coeffs, p)
            for k, c in enumerate(rem):
                mult[i, j, k] = c
    mult.setflags(write=False)
    return ExtFieldTable(p, d, tuple(coeffs), mult)
