"""Multiply-accumulate and 1-D convolution executed on RNS fabrics.

Every digit-wise product and sum goes through the simulated multiplier and
adder fabrics; the integer result is recovered by CRT decoding. RNS wraparound
is silent, so results are range-checked up front with exact integer arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import LengthMismatch, OutOfRange, RangeOverflow
from .fabric import eval_add, fabric, route, route_operand
from .rns import ModuliSet, ResidueVector, decode, to_onehot, validate_moduli


@dataclass(frozen=True)
class ConvSpec:
    signal: tuple[int, ...]
    kernel: tuple[int, ...]
    moduli: ModuliSet

    def __post_init__(self):
        if not self.signal or not self.kernel:
            raise LengthMismatch("signal and kernel must be non-empty")
        if any(v < 0 for v in self.signal + self.kernel):
            raise OutOfRange("signal and kernel values must be nonnegative")

    @classmethod
    def from_dict(cls, doc: dict, moduli: Sequence[int] | None = None) -> "ConvSpec":
        m = moduli if moduli is not None else doc["moduli"]
        return cls(tuple(int(v) for v in doc["signal"]), tuple(int(v) for v in doc["kernel"]), validate_moduli(m))


def _check_nonnegative(values: Sequence[int], what: str) -> None:
    if any(v < 0 for v in values):
        raise OutOfRange(f"{what} must be nonnegative")


def _check_range(total: int, m: ModuliSet, index: int | None = None) -> None:
    if total >= m.range:
        where = "" if index is None else f" at output {index}"
        raise RangeOverflow(f"result {total}{where} exceeds the RNS range {m.range}", index)


def _digit_mac(M: int, weights: Sequence[int], inputs: Sequence[int], schematic: str) -> int:
    topology, lut = fabric(schematic, "mul", M)
    acc = 0
    for w, x in zip(weights, inputs):
        # weight is the control operand, input travels as light
        p = route_operand(topology, lut, w % M, to_onehot(x % M, M)).lane
        acc = eval_add(M, acc, p, schematic)
    return acc


def mac_rns(weights: Sequence[int], inputs: Sequence[int], m: ModuliSet, schematic: str = "asd") -> int:
    """Dot product of ``weights`` and ``inputs`` computed in RNS on the fabrics."""
    if len(weights) != len(inputs):
        raise LengthMismatch(f"{len(weights)} weights for {len(inputs)} inputs")
    _check_nonnegative(weights, "weights")
    _check_nonnegative(inputs, "inputs")
    _check_range(sum(w * x for w, x in zip(weights, inputs)), m)
    digits = tuple(_digit_mac(M, weights, inputs, schematic) for M in m.moduli)
    return decode(ResidueVector(digits), m)


def conv1d_rns(spec: ConvSpec, schematic: str = "asd") -> list[int]:
    """Full (non-circular) convolution; output length ``len(signal) + len(kernel) - 1``."""
    signal, kernel, m = spec.signal, spec.kernel, spec.moduli
    n = len(signal) + len(kernel) - 1
    taps = []
    for k in range(n):
        js = range(max(0, k - len(kernel) + 1), min(k, len(signal) - 1) + 1)
        taps.append(([kernel[k - j] for j in js], [signal[j] for j in js]))
    for k, (w, x) in enumerate(taps):
        _check_range(sum(a * b for a, b in zip(w, x)), m, k)
    return [mac_rns(w, x, m, schematic) for w, x in taps]


class FixedWeightMAC:
    """MAC evaluator with the weights loaded into the multiplier LUTs once.

    The configuration selected for each distinct (modulus, weight digit) pair
    is looked up at construction and reused on every call.
    """

    def __init__(self, weights: Sequence[int], m: ModuliSet, schematic: str = "asd"):
        _check_nonnegative(weights, "weights")
        self.weights = tuple(weights)
        self.moduli = m
        self.schematic = schematic
        self._selected = {}
        for M in m.moduli:
            topology, lut = fabric(schematic, "mul", M)
            for w in self.weights:
                key = (M, w % M)
                if key not in self._selected:
                    self._selected[key] = lut.lookup(w % M)

    @property
    def n_selections(self) -> int:
        return len(self._selected)

    def __call__(self, inputs: Sequence[int]) -> int:
        if len(inputs) != len(self.weights):
            raise LengthMismatch(f"{len(self.weights)} weights for {len(inputs)} inputs")
        _check_nonnegative(inputs, "inputs")
        m = self.moduli
        _check_range(sum(w * x for w, x in zip(self.weights, inputs)), m)
        digits = []
        for M in m.moduli:
            topology, _ = fabric(self.schematic, "mul", M)
            acc = 0
            for w, x in zip(self.weights, inputs):
                config = self._selected[(M, w % M)]
                if config is None:
                    p = 0
                else:
                    p = route(topology, config, to_onehot(x % M, M)).lane
                acc = eval_add(M, acc, p, self.schematic)
            digits.append(acc)
        return decode(ResidueVector(tuple(digits)), m)


def fixed_weight_mac(weights: Sequence[int], m: ModuliSet, schematic: str = "asd") -> FixedWeightMAC:
    return FixedWeightMAC(weights, m, schematic)

