"""Arithmetic in Z/p for an odd prime p."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


class ModulusError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Prime:
    value: int
    inv2: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        v = self.value
        if not isinstance(v, int) or v < 3 or not _is_prime(v):
            raise ModulusError(f"p must be an odd prime, got {v!r}")
        # cached: half() is the inner loop of every enumeration
        object.__setattr__(self, "inv2", (v + 1) // 2)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Prime({self.value})"

    def inverse(self, a: int) -> int:
        a %= self.value
        if a == 0:
            raise ZeroDivisionError("0 has no inverse mod p")
        return pow(a, -1, self.value)

    def half(self, a: int, b: int) -> int:
        """Plain-int version of :func:`half`."""
        return (a + b) * self.inv2 % self.value

    def residues(self) -> range:
        return range(self.value)

    def log2_bound(self) -> int:
        """The smallest size a connected palette graph with >1 vertex can have."""
        return self.value.bit_length() - 1 + 2


def as_prime(p) -> Prime:
    return p if isinstance(p, Prime) else Prime(int(p))


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: Prime

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus.value)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.modulus.value})"

    def _check(self, other: "Residue"):
        if other.modulus != self.modulus:
            raise ModulusError(
                f"modulus mismatch: {self.modulus.value} vs {other.modulus.value}")

    def __add__(self, other):
        if isinstance(other, int):
            return Residue(self.value + other, self.modulus)
        self._check(other)
        return Residue(self.value + other.value, self.modulus)

    def __sub__(self, other):
        if isinstance(other, int):
            return Residue(self.value - other, self.modulus)
        self._check(other)
        return Residue(self.value - other.value, self.modulus)

    def __mul__(self, other):
        if isinstance(other, int):
            return Residue(self.value * other, self.modulus)
        self._check(other)
        return Residue(self.value * other.value, self.modulus)

    __radd__ = __add__
    __rmul__ = __mul__


def half(a: Residue, b: Residue) -> Residue:
    """The unique r with 2r = a + b (mod p)."""
    a._check(b)
    return Residue(a.modulus.half(a.value, b.value), a.modulus)


@dataclass(frozen=True)
class AffineMap:
    """x -> alpha*x + beta over Z/p, alpha nonzero."""

    alpha: int
    beta: int
    modulus: Prime

    def __post_init__(self):
        p = self.modulus.value
        object.__setattr__(self, "alpha", self.alpha % p)
        object.__setattr__(self, "beta", self.beta % p)
        if self.alpha == 0:
            raise ModulusError("affine map needs alpha != 0")

    @classmethod
    def identity(cls, p) -> "AffineMap":
        return cls(1, 0, as_prime(p))

    def __call__(self, x: int) -> int:
        return (self.alpha * int(x) + self.beta) % self.modulus.value

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other."""
        if other.modulus != self.modulus:
            raise ModulusError("modulus mismatch")
        return AffineMap(self.alpha * other.alpha,
                         self.alpha * other.beta + self.beta, self.modulus)

    def inverse(self) -> "AffineMap":
        ai = self.modulus.inverse(self.alpha)
        return AffineMap(ai, -ai * self.beta, self.modulus)

    def image(self, S: Iterable[int]) -> frozenset:
        return frozenset(self(x) for x in S)

    def __str__(self):
        return f"{self.alpha}x+{self.beta}"


def affine_apply(f: AffineMap, x: Residue) -> Residue:
    if x.modulus != f.modulus:
        raise ModulusError("modulus mismatch")
    return Residue(f(x.value), f.modulus)


def affine_image(f: AffineMap, S: Iterable) -> frozenset:
    return f.image(int(x) for x in S)


def all_affine_maps(p):
    p = as_prime(p)
    for a in range(1, p.value):
        for b in range(p.value):
            yield AffineMap(a, b, p)
