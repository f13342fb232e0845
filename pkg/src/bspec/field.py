"""Prime fields F_q and the canonical additive character."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DivisionByZero, NonPrimeModulus


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for p in range(3, math.isqrt(n) + 1, 2):
        if n % p == 0:
            return False
    return True


@dataclass(frozen=True)
class Field:
    """The prime field with ``q`` elements.

    Elements are plain ints kept as canonical residues in ``[0, q-1]``.
    """

    q: int

    def __post_init__(self):
        if not isinstance(self.q, (int, np.integer)) or not is_prime(int(self.q)):
            raise NonPrimeModulus(f"q={self.q!r} is not prime (prime powers are unsupported)")
        object.__setattr__(self, "q", int(self.q))

    def __repr__(self):
        return f"Field(q={self.q})"

    def elements(self) -> range:
        return range(self.q)

    def canon(self, a: int) -> int:
        return int(a) % self.q

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.q

    def neg(self, a: int) -> int:
        return (-a) % self.q

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.q}")
        return pow(a, -1, self.q)

    def arith(self, a: int, b: int | None, kind: str) -> int:
        """Dispatch one of ``add``, ``mul``, ``neg``, ``inv``; unary kinds ignore ``b``."""
        if kind == "add":
            return self.add(a, b)
        if kind == "mul":
            return self.mul(a, b)
        if kind == "neg":
            return self.neg(a)
        if kind == "inv":
            return self.inv(a)
        raise ValueError(f"unknown arithmetic kind {kind!r}")

    def char(self, t: int) -> complex:
        return char_eval(self.q, t)

    @cached_property
    def char_table(self) -> np.ndarray:
        """``char_table[t] = exp(2*pi*i*t/q)`` for every residue ``t``."""
        return np.exp(2j * np.pi * np.arange(self.q) / self.q)


def field_new(q: int) -> Field:
    return Field(q)


def char_eval(p: int, t: int) -> complex:
    """Canonical additive character ``t -> exp(2*pi*i*t/p)`` on F_p."""
    t = int(t) % p
    if t == 0:
        return 1 + 0j
    return cmath.exp(2j * math.pi * t / p)
