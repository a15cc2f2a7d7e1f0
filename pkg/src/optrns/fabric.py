"""2x2 switch fabrics that carry out modular arithmetic on one-hot signals.

Two schematics are modelled:

* ``asd`` -- a planar brick-wall of adjacent-pair switches, ``M`` stages deep,
  which can realise any lane permutation. Per-operand switch states come from
  an odd-even transposition sort of the target permutation.
* ``mesh`` -- ``M - 1`` cascaded rotation rows. An active row shifts every lane
  by one position (with wraparound); the summand ``b`` activates the first
  ``b`` rows. It is simulated at row granularity: a row holds one cell per
  lane and all of its cells share one state.

A mesh multiplier uses index (discrete-log) wiring so that multiplication by
``b`` becomes a rotation by ``log_g(b)`` over the ``M - 1`` nonzero lanes.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    ConfigMismatch,
    InvalidModulus,
    NonPrimeModulus,
    OperandOutOfRange,
    SchemaError,
    Unroutable,
)
from .rns import OneHot, from_onehot, is_prime, to_onehot

SCHEMATICS = ("mesh", "asd")
SCHEMA_VERSION = 1


class SwitchState(enum.Enum):
    BAR = "bar"
    CROSS = "cross"


@dataclass(frozen=True)
class FabricTopology:
    """Switch layout over ``waveguides`` parallel lanes.

    For ``asd`` each stage lists the top lane ``t`` of every switch, which
    couples lanes ``t`` and ``t + 1``. For ``mesh`` each stage lists the lanes
    of one rotation row, in rotation order.

    ``in_wiring`` / ``out_wiring`` are fixed passive crossings applied before
    and after the stages (lane -> position and position -> lane). They are
    only used by the mesh multiplier.
    """

    schematic: str
    waveguides: int
    stages: tuple[tuple[int, ...], ...]
    in_wiring: tuple[int, ...] | None = None
    out_wiring: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.schematic not in SCHEMATICS:
            raise SchemaError(f"unknown schematic {self.schematic!r}")
        M = self.waveguides
        if M < 2:
            raise InvalidModulus(f"need at least 2 waveguides, got {M}")
        for stage in self.stages:
            if self.schematic == "asd":
                used: set[int] = set()
                for t in stage:
                    if not 0 <= t < M - 1:
                        raise SchemaError(f"switch top index {t} outside [0, {M - 1})")
                    if t in used or t + 1 in used:
                        raise SchemaError(f"switches in one stage overlap at lane {t}")
                    used.update((t, t + 1))
            elif len(set(stage)) != len(stage) or any(not 0 <= c < M for c in stage):
                raise SchemaError("rotation row lanes must be distinct and in range")
        for wiring in (self.in_wiring, self.out_wiring):
            if wiring is not None and sorted(wiring) != list(range(M)):
                raise SchemaError("wiring must be a permutation of the lanes")

    @property
    def n_switches(self) -> int:
        return sum(len(s) for s in self.stages)

    def switches(self) -> list[tuple[int, int]]:
        """(stage index, top index) for every switch, in topology order."""
        return [(s, t) for s, stage in enumerate(self.stages) for t in stage]


@dataclass(frozen=True)
class Configuration:
    states: tuple[SwitchState, ...]

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class Lut:
    """Per-operand switch configurations for one fabric.

    A multiplier LUT has no entry for ``b = 0``; ``zero_bypass`` routes every
    input straight to lane 0 in that case.
    """

    kind: str
    modulus: int
    entries: dict[int, Configuration] = field(hash=False)
    zero_bypass: bool = False

    def lookup(self, b: int) -> Configuration | None:
        """Configuration for operand ``b``; ``None`` means zero bypass."""
        if not 0 <= b < self.modulus:
            raise OperandOutOfRange(f"operand {b} outside [0, {self.modulus})")
        if self.zero_bypass and b == 0:
            return None
        return self.entries[b]


def _check_modulus(M: int) -> None:
    if not isinstance(M, int) or M < 2:
        raise InvalidModulus(f"modulus must be an integer >= 2, got {M!r}")


def build_asd(M: int) -> FabricTopology:
    _check_modulus(M)
    stages = tuple(tuple(range(s % 2, M - 1, 2)) for s in range(M))
    return FabricTopology("asd", M, stages)


def primitive_root(p: int) -> int:
    if not is_prime(p):
        raise NonPrimeModulus(f"{p} is not prime")
    if p == 2:
        return 1
    factors = {q for q in range(2, p) if (p - 1) % q == 0 and is_prime(q)}
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


def build_mesh(M: int, kind: str = "add") -> FabricTopology:
    """Mesh-grid fabric; ``kind='mul'`` adds the index wiring for multiplication."""
    _check_modulus(M)
    if kind == "add":
        row = tuple(range(M))
        return FabricTopology("mesh", M, tuple(row for _ in range(M - 1)))
    if kind != "mul":
        raise ValueError(f"kind must be 'add' or 'mul', got {kind!r}")
    g = primitive_root(M)
    # position 1 + e carries the value g**e; lane 0 stays on position 0
    out_wiring = [0] + [pow(g, e, M) for e in range(M - 1)]
    in_wiring = [0] * M
    for pos, lane in enumerate(out_wiring):
        in_wiring[lane] = pos
    row = tuple(range(1, M))
    stages = tuple(row for _ in range(M - 2))
    return FabricTopology("mesh", M, stages, tuple(in_wiring), tuple(out_wiring))


def _check_config(topology: FabricTopology, config: Configuration) -> None:
    if len(config.states) != topology.n_switches:
        raise ConfigMismatch(
            f"configuration has {len(config.states)} states, topology has {topology.n_switches} switches"
        )


def _stage_states(topology: FabricTopology, config: Configuration):
    i = 0
    for stage in topology.stages:
        yield stage, config.states[i:i + len(stage)]
        i += len(stage)


def _step(schematic: str, stage: tuple[int, ...], states, pos: int) -> int:
    if schematic == "asd":
        for t, st in zip(stage, states):
            if st is SwitchState.CROSS:
                if pos == t:
                    return t + 1
                if pos == t + 1:
                    return t
        return pos
    if not stage:
        return pos
    if len(set(states)) != 1:
        raise ConfigMismatch("cells of one rotation row must share a state")
    if states[0] is SwitchState.BAR or pos not in stage:
        return pos
    k = stage.index(pos)
    return stage[(k + 1) % len(stage)]


def route_trace(topology: FabricTopology, config: Configuration, x: OneHot) -> list[int]:
    """Lane positions of the signal after each stage (one entry per stage)."""
    _check_config(topology, config)
    if x.width != topology.waveguides:
        raise ConfigMismatch(f"input width {x.width} != {topology.waveguides} waveguides")
    pos = x.lane if topology.in_wiring is None else topology.in_wiring[x.lane]
    path = []
    for stage, states in _stage_states(topology, config):
        pos = _step(topology.schematic, stage, states, pos)
        path.append(pos)
    return path


def route(topology: FabricTopology, config: Configuration, x: OneHot) -> OneHot:
    """Propagate a one-hot input through a configured fabric."""
    path = route_trace(topology, config, x)
    if path:
        pos = path[-1]
    else:
        pos = x.lane if topology.in_wiring is None else topology.in_wiring[x.lane]
    if topology.out_wiring is not None:
        pos = topology.out_wiring[pos]
    return OneHot(topology.waveguides, pos)


def route_all(topology: FabricTopology, config: Configuration) -> list[int]:
    """Output lane for every input lane; a permutation for any valid config."""
    M = topology.waveguides
    return [route(topology, config, OneHot(M, a)).lane for a in range(M)]


def _position_perm(topology: FabricTopology, perm: Sequence[int]) -> list[int]:
    if topology.in_wiring is None:
        return list(perm)
    M = topology.waveguides
    out_inv = [0] * M
    for pos, lane in enumerate(topology.out_wiring):
        out_inv[lane] = pos
    result = [0] * M
    for lane in range(M):
        result[topology.in_wiring[lane]] = out_inv[perm[lane]]
    return result


def permutation_to_states(topology: FabricTopology, perm: Sequence[int]) -> Configuration:
    """Switch states that send input lane ``a`` to output lane ``perm[a]``.

    ASD fabrics are configured by odd-even transposition sort: the token at
    each position is its destination lane, and every swap the sort performs
    in a stage becomes a Cross. Mesh fabrics accept only rotations by up to
    the number of rows.

    Raises:
        Unroutable: the fabric cannot realise ``perm``.
    """
    M = topology.waveguides
    perm = list(perm)
    if sorted(perm) != list(range(M)):
        raise Unroutable(f"{perm} is not a permutation of {M} lanes")
    pos_perm = _position_perm(topology, perm)

    if topology.schematic == "asd":
        tokens = pos_perm
        states: list[SwitchState] = []
        for stage in topology.stages:
            for t in stage:
                if tokens[t] > tokens[t + 1]:
                    tokens[t], tokens[t + 1] = tokens[t + 1], tokens[t]
                    states.append(SwitchState.CROSS)
                else:
                    states.append(SwitchState.BAR)
        if tokens != list(range(M)):
            raise Unroutable("fabric too shallow to realise permutation")
        return Configuration(tuple(states))

    # mesh: find k with pos_perm == rotate-by-k over the row lanes
    row = topology.stages[0] if topology.stages else ()
    fixed = [p for p in range(M) if p not in row]
    if any(pos_perm[p] != p for p in fixed):
        raise Unroutable("mesh fabric cannot move lanes outside its rotation rows")
    n = len(row)
    for k in range(len(topology.stages) + 1):
        if all(pos_perm[row[i]] == row[(i + k) % n] for i in range(n)):
            states = []
            for s, stage in enumerate(topology.stages):
                st = SwitchState.CROSS if s < k else SwitchState.BAR
                states.extend([st] * len(stage))
            return Configuration(tuple(states))
    raise Unroutable("permutation is not a rotation realisable by this mesh")


def make_adder_lut(topology: FabricTopology, M: int) -> Lut:
    if topology.waveguides != M:
        raise ConfigMismatch(f"topology has {topology.waveguides} waveguides, modulus is {M}")
    entries = {b: permutation_to_states(topology, [(a + b) % M for a in range(M)]) for b in range(M)}
    return Lut("add", M, entries)


def make_multiplier_lut(topology: FabricTopology, M: int) -> Lut:
    if topology.waveguides != M:
        raise ConfigMismatch(f"topology has {topology.waveguides} waveguides, modulus is {M}")
    entries = {}
    for b in range(1, M):
        perm = [(a * b) % M for a in range(M)]
        if len(set(perm)) != M:
            raise NonPrimeModulus(f"multiplication by {b} is not bijective modulo {M}")
        if topology.schematic == "mesh" and topology.in_wiring is None:
            raise ConfigMismatch("mesh multiplier needs index wiring; use build_mesh(M, kind='mul')")
        entries[b] = permutation_to_states(topology, perm)
    return Lut("mul", M, entries, zero_bypass=True)


def route_operand(topology: FabricTopology, lut: Lut, b: int, x: OneHot) -> OneHot:
    """Route ``x`` with the fabric configured for operand ``b`` (bypass aware)."""
    config = lut.lookup(b)
    if config is None:
        if x.width != topology.waveguides:
            raise ConfigMismatch(f"input width {x.width} != {topology.waveguides} waveguides")
        return OneHot(topology.waveguides, 0)
    return route(topology, config, x)


def build(schematic: str, M: int, kind: str = "add") -> FabricTopology:
    if schematic == "asd":
        return build_asd(M)
    if schematic == "mesh":
        return build_mesh(M, kind)
    raise ValueError(f"schematic must be one of {SCHEMATICS}, got {schematic!r}")


@functools.lru_cache(maxsize=None)
def fabric(schematic: str, kind: str, M: int) -> tuple[FabricTopology, Lut]:
    """Cached (topology, LUT) pair for one arithmetic unit."""
    topology = build(schematic, M, kind)
    make = make_adder_lut if kind == "add" else make_multiplier_lut
    return topology, make(topology, M)


def _eval(kind: str, M: int, a: int, b: int, schematic: str) -> int:
    _check_modulus(M)
    if not (0 <= a < M and 0 <= b < M):
        raise OperandOutOfRange(f"operands ({a}, {b}) outside [0, {M})")
    topology, lut = fabric(schematic, kind, M)
    return from_onehot(route_operand(topology, lut, b, to_onehot(a, M)))


def eval_add(M: int, a: int, b: int, schematic: str = "asd") -> int:
    """``(a + b) mod M`` computed by routing ``a`` through a fabric set for ``b``."""
    return _eval("add", M, a, b, schematic)


def eval_mul(M: int, a: int, b: int, schematic: str = "asd") -> int:
    """``(a * b) mod M`` computed on the multiplier fabric; ``M`` must be prime."""
    return _eval("mul", M, a, b, schematic)


def paper_switch_count(schematic: str, M: int) -> int:
    """Switch count from the published scaling formulas.

    ASD uses ``(M-1)**2/2 + 2`` for ``M > 2`` (rounded up for even ``M``) and
    the constructed single switch at ``M = 2``; mesh uses ``M(M-1)``.
    """
    _check_modulus(M)
    if schematic == "mesh":
        return M * (M - 1)
    if schematic == "asd":
        if M == 2:
            return 1
        return math.ceil((M - 1) ** 2 / 2) + 2
    raise ValueError(f"schematic must be one of {SCHEMATICS}, got {schematic!r}")


def count_switches(target: FabricTopology | str, M: int | None = None, mode: str = "constructed") -> int:
    """Switch count of a topology, or of ``(schematic, M)`` in the given mode."""
    if isinstance(target, FabricTopology):
        return target.n_switches
    if M is None:
        raise InvalidModulus("modulus required when counting by schematic")
    if mode == "paper_formula":
        return paper_switch_count(target, M)
    if mode == "constructed":
        return build(target, M).n_switches
    raise ValueError(f"mode must be 'paper_formula' or 'constructed', got {mode!r}")


# -- JSON documents -----------------------------------------------------------

def topology_to_dict(topology: FabricTopology) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "topology",
        "schematic": topology.schematic,
        "modulus": topology.waveguides,
        "stages": [list(s) for s in topology.stages],
    }
    if topology.in_wiring is not None:
        doc["wiring"] = {"in": list(topology.in_wiring), "out": list(topology.out_wiring)}
    return doc


def lut_to_dict(topology: FabricTopology, lut: Lut) -> dict:
    doc = topology_to_dict(topology)
    doc["kind"] = lut.kind
    doc["zero_bypass"] = lut.zero_bypass
    doc["lut"] = {str(b): [s.value for s in cfg.states] for b, cfg in sorted(lut.entries.items())}
    return doc


def _require(doc: dict, key: str):
    if key not in doc:
        raise SchemaError(f"missing key {key!r}")
    return doc[key]


def load_document(doc: dict) -> tuple[FabricTopology, Lut | None]:
    """Parse a topology or LUT document back into objects."""
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object")
    if _require(doc, "schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {doc['schema_version']!r}")
    kind = _require(doc, "kind")
    wiring = doc.get("wiring")
    try:
        topology = FabricTopology(
            _require(doc, "schematic"),
            int(_require(doc, "modulus")),
            tuple(tuple(int(t) for t in s) for s in _require(doc, "stages")),
            tuple(wiring["in"]) if wiring else None,
            tuple(wiring["out"]) if wiring else None,
        )
    except (TypeError, KeyError) as exc:
        raise SchemaError(f"malformed topology: {exc}") from exc
    if kind == "topology":
        return topology, None
    if kind not in ("add", "mul"):
        raise SchemaError(f"unknown kind {kind!r}")
    try:
        entries = {
            int(b): Configuration(tuple(SwitchState(s) for s in states))
            for b, states in _require(doc, "lut").items()
        }
    except (ValueError, AttributeError) as exc:
        raise SchemaError(f"malformed lut: {exc}") from exc
    for cfg in entries.values():
        _check_config(topology, cfg)
    return topology, Lut(kind, topology.waveguides, entries, bool(doc.get("zero_bypass", False)))

