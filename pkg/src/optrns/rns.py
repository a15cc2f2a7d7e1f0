"""Residue number system arithmetic.

A number ``x`` in ``[0, prod(moduli))`` is held as its residues modulo a set of
pairwise-coprime moduli. Addition, subtraction and multiplication act on each
digit independently with no carries between digits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    DigitOutOfRange,
    MalformedOneHot,
    ModuliMismatch,
    NonCoprime,
    OperandOutOfRange,
    OutOfRange,
    TooSmall,
)


@dataclass(frozen=True)
class ModuliSet:
    moduli: tuple[int, ...]

    @property
    def range(self) -> int:
        return math.prod(self.moduli)

    def __len__(self) -> int:
        return len(self.moduli)

    def __iter__(self):
        return iter(self.moduli)


@dataclass(frozen=True)
class ResidueVector:
    digits: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)


@dataclass(frozen=True)
class OneHot:
    """A width-``M`` signal with exactly one active lane."""

    width: int
    lane: int

    def __post_init__(self):
        if self.width < 2:
            raise MalformedOneHot(f"width must be >= 2, got {self.width}")
        if not 0 <= self.lane < self.width:
            raise MalformedOneHot(f"lane {self.lane} outside [0, {self.width})")

    def bits(self) -> list[int]:
        return [int(i == self.lane) for i in range(self.width)]

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "OneHot":
        active = [i for i, v in enumerate(bits) if v]
        if len(active) != 1:
            raise MalformedOneHot(f"expected exactly one active lane, found {len(active)}")
        if any(v not in (0, 1) for v in bits):
            raise MalformedOneHot("lanes must be 0 or 1")
        return cls(len(bits), active[0])


def validate_moduli(moduli: Iterable[int]) -> ModuliSet:
    """Check a moduli list and wrap it in a :class:`ModuliSet`.

    Raises:
        TooSmall: the list is empty or an element is below 2.
        NonCoprime: two moduli share a factor; ``i`` and ``j`` locate the pair.
    """
    moduli = tuple(int(m) for m in moduli)
    if not moduli:
        raise TooSmall("moduli list is empty")
    for m in moduli:
        if m < 2:
            raise TooSmall(f"modulus {m} is below 2")
    for i in range(len(moduli)):
        for j in range(i + 1, len(moduli)):
            if math.gcd(moduli[i], moduli[j]) != 1:
                raise NonCoprime(i, j)
    return ModuliSet(moduli)


def _check_vector(r: ResidueVector, m: ModuliSet) -> None:
    if len(r.digits) != len(m.moduli):
        raise ModuliMismatch(f"{len(r.digits)} digits for {len(m.moduli)} moduli")
    for d, mod in zip(r.digits, m.moduli):
        if not 0 <= d < mod:
            raise DigitOutOfRange(f"digit {d} outside [0, {mod})")


def encode(x: int, m: ModuliSet) -> ResidueVector:
    if not 0 <= x < m.range:
        raise OutOfRange(f"{x} outside [0, {m.range})")
    return ResidueVector(tuple(x % mod for mod in m.moduli))


def decode(r: ResidueVector, m: ModuliSet) -> int:
    """Reconstruct the integer from its residues (Garner's mixed-radix form)."""
    if len(r.digits) != len(m.moduli):
        raise DigitOutOfRange(f"{len(r.digits)} digits for {len(m.moduli)} moduli")
    for d, mod in zip(r.digits, m.moduli):
        if not 0 <= d < mod:
            raise DigitOutOfRange(f"digit {d} outside [0, {mod})")
    x = 0
    radix = 1
    for d, mod in zip(r.digits, m.moduli):
        # next mixed-radix digit: solve x + radix*v = d (mod mod)
        v = ((d - x) * pow(radix, -1, mod)) % mod
        x += radix * v
        radix *= mod
    return x


def _check_operands(a: int, b: int, M: int) -> None:
    if M < 2:
        raise OperandOutOfRange(f"modulus {M} is below 2")
    if not (0 <= a < M and 0 <= b < M):
        raise OperandOutOfRange(f"operands ({a}, {b}) outside [0, {M})")


def digit_add(a: int, b: int, M: int) -> int:
    _check_operands(a, b, M)
    return (a + b) % M


def digit_sub(a: int, b: int, M: int) -> int:
    _check_operands(a, b, M)
    return (a - b) % M


def digit_mul(a: int, b: int, M: int) -> int:
    _check_operands(a, b, M)
    return (a * b) % M


def _digitwise(op, x: ResidueVector, y: ResidueVector, m: ModuliSet) -> ResidueVector:
    if len(x.digits) != len(m.moduli) or len(y.digits) != len(m.moduli):
        raise ModuliMismatch("residue vectors do not match the moduli set")
    return ResidueVector(tuple(op(a, b, mod) for a, b, mod in zip(x.digits, y.digits, m.moduli)))


def rns_add(x: ResidueVector, y: ResidueVector, m: ModuliSet) -> ResidueVector:
    return _digitwise(digit_add, x, y, m)


def rns_sub(x: ResidueVector, y: ResidueVector, m: ModuliSet) -> ResidueVector:
    return _digitwise(digit_sub, x, y, m)


def rns_mul(x: ResidueVector, y: ResidueVector, m: ModuliSet) -> ResidueVector:
    return _digitwise(digit_mul, x, y, m)


def to_onehot(r: int, M: int) -> OneHot:
    if M < 2 or not 0 <= r < M:
        raise OutOfRange(f"{r} outside [0, {M})")
    return OneHot(M, r)


def from_onehot(v: OneHot) -> int:
    if not isinstance(v, OneHot):
        return OneHot.from_bits(v).lane
    return v.lane


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, math.isqrt(n) + 1))
