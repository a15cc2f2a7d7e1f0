"""Wavelength-multiplexed operation of one configured fabric.

Each channel carries its own one-hot input on a distinct wavelength. All
channels share the fabric configuration (one control operand per frame) and
are separated again at the outputs by per-wavelength detectors. Channels are
ideal: no crosstalk and no wavelength-dependent routing.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from .errors import DuplicateChannel, MalformedOneHot, SchemaError, WidthMismatch
from .fabric import Configuration, FabricTopology, Lut, route, route_operand
from .rns import OneHot, from_onehot, to_onehot

DEFAULT_MAX_CHANNELS = 64


@dataclass(frozen=True)
class WdmFrame:
    channels: tuple[tuple[Hashable, OneHot], ...]

    def __post_init__(self):
        ids = [cid for cid, _ in self.channels]
        if len(set(ids)) != len(ids):
            dup = next(cid for cid in ids if ids.count(cid) > 1)
            raise DuplicateChannel(f"channel {dup!r} appears more than once")
        widths = {x.width for _, x in self.channels}
        if len(widths) > 1:
            raise WidthMismatch(f"channel widths differ: {sorted(widths)}")

    @classmethod
    def of(cls, pairs, max_channels: int = DEFAULT_MAX_CHANNELS) -> "WdmFrame":
        pairs = tuple((cid, x) for cid, x in pairs)
        if len(pairs) > max_channels:
            raise WidthMismatch(f"{len(pairs)} channels exceeds the cap of {max_channels}")
        return cls(pairs)


def _check_widths(topology: FabricTopology, frame: WdmFrame) -> None:
    for cid, x in frame.channels:
        if x.width != topology.waveguides:
            raise WidthMismatch(f"channel {cid!r} has width {x.width}, fabric has {topology.waveguides} lanes")


def route_wdm(topology: FabricTopology, config: Configuration, frame: WdmFrame) -> list[tuple[Hashable, OneHot]]:
    """Route every channel through the same configuration, preserving order."""
    _check_widths(topology, frame)
    return [(cid, route(topology, config, x)) for cid, x in frame.channels]


def run_frame(topology: FabricTopology, lut: Lut, b: int, frame: WdmFrame) -> list[tuple[Hashable, OneHot]]:
    """Like :func:`route_wdm` but configures the fabric from ``lut`` for operand ``b``."""
    _check_widths(topology, frame)
    return [(cid, route_operand(topology, lut, b, x)) for cid, x in frame.channels]


def detect(outputs: Sequence[tuple[Hashable, OneHot]], M: int) -> dict[Hashable, int]:
    result = {}
    for cid, x in outputs:
        if isinstance(x, OneHot) and x.width != M:
            raise MalformedOneHot(f"channel {cid!r} has width {x.width}, expected {M}")
        result[cid] = from_onehot(x)
    return result


def frame_from_dict(doc: Mapping, M: int, max_channels: int = DEFAULT_MAX_CHANNELS) -> tuple[str, int, WdmFrame]:
    """Parse ``{"b", "kind", "channels": [{"id", "input"}]}`` into (kind, b, frame)."""
    try:
        kind = doc["kind"]
        b = int(doc["b"])
        pairs = [(str(ch["id"]), to_onehot(int(ch["input"]), M)) for ch in doc["channels"]]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed frame: {exc}") from exc
    if kind not in ("add", "mul"):
        raise SchemaError(f"frame kind must be 'add' or 'mul', got {kind!r}")
    return kind, b, WdmFrame.of(pairs, max_channels)
