"""Energy, area and delay of RNS adder fabrics, and the SEAP figure of merit.

Device constants are per 2x2 switch technology. Counts scale with the modulus
``M`` as follows (``S = (M-1)**2/2 + 2``):

=========  ==========  =========  ========
schematic  components  control    LUT
=========  ==========  =========  ========
mesh       M(M-1)      M-1        0
asd        S           S          M*S
=========  ==========  =========  ========

SEAP = speed x energy efficiency x area efficiency = 1 / (time * energy * area).
"""
from __future__ import annotations

import csv
import dataclasses
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidModulus, InvalidParam, MissingParam, UnknownTech
from .fabric import SCHEMATICS, paper_switch_count

DEFAULT_LUT_ENTRY_AREA_UM2 = 0.1

CSV_HEADER = (
    "schematic", "tech", "M", "n_components", "n_control", "n_lut",
    "energy_fj", "area_um2", "time_ps", "seap",
)

# technology -> schematic it is evaluated on when pairing as published
PAPER_PAIRING = {"MRR": "mesh", "MZI": "mesh", "AOS": "mesh", "HPP": "asd"}

_OPTIONAL_ENERGY = ("thermal_energy_fj_per_bit", "switching_energy_fj_per_bit")


@dataclass(frozen=True)
class TechParams:
    name: str
    thermal_energy_fj_per_bit: float | None
    switching_energy_fj_per_bit: float | None
    control_energy_fj_per_bit: float
    device_area_um2: float
    control_area_um2: float
    response_time_ps: float
    per_device_prop_time_ps: float
    lut_entry_area_um2: float = DEFAULT_LUT_ENTRY_AREA_UM2

    def __post_init__(self):
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if f.name == "name":
                continue
            if v is None:
                if f.name not in _OPTIONAL_ENERGY:
                    raise MissingParam(f"{f.name} is required")
            elif not v >= 0:
                raise InvalidParam(f"{f.name} must be >= 0, got {v}")

    def replace(self, **overrides) -> "TechParams":
        return dataclasses.replace(self, **overrides)


@dataclass(frozen=True)
class CostReport:
    schematic: str
    tech: str
    M: int
    n_components: int
    n_control: int
    n_lut_entries: int
    energy_fj_per_op: float
    area_um2: float
    time_ps: float
    seap: float

    def csv_row(self) -> list[str]:
        return [
            self.schematic, self.tech, str(self.M), str(self.n_components),
            str(self.n_control), str(self.n_lut_entries), repr(self.energy_fj_per_op),
            repr(self.area_um2), repr(self.time_ps), repr(self.seap),
        ]


# AOS/MZI control cells are blank in the source table; 0.8 is the group value.
_BUILTIN = {
    "MRR": TechParams("MRR", 13.8, None, 0.8, 3200.0, 0.8, 40.0, 0.754),
    "MZI": TechParams("MZI", None, 500.0, 0.8, 200.0, 0.8, 14.3, 0.1),
    "AOS": TechParams("AOS", None, 12000.0, 0.8, 10.0, 0.8, 0.2, 0.01),
    "HPP": TechParams("HPP", None, 5.2, 2.0, 200.0, 2.0, 5.1, 0.1),
}
TECHS = tuple(_BUILTIN)


def builtin_tech(name: str) -> TechParams:
    try:
        return _BUILTIN[name.upper()]
    except KeyError:
        raise UnknownTech(f"unknown technology {name!r}; choose from {', '.join(TECHS)}") from None


def counts(schematic: str, M: int) -> tuple[int, int, int]:
    """(components, control circuits, LUT entries) for one modulo-``M`` adder."""
    if not isinstance(M, int) or M < 2:
        raise InvalidModulus(f"modulus must be an integer >= 2, got {M!r}")
    if schematic == "mesh":
        return M * (M - 1), M - 1, 0
    if schematic == "asd":
        s = paper_switch_count("asd", M)
        return s, s, M * s
    raise ValueError(f"schematic must be one of {SCHEMATICS}, got {schematic!r}")


def seap(time_ps: float, energy_fj: float, area_um2: float) -> float:
    return 1.0 / (time_ps * energy_fj * area_um2)


def cost_report(schematic: str, tech: TechParams, M: int) -> CostReport:
    n_comp, n_ctrl, n_lut = counts(schematic, M)
    device_terms = [e for e in (tech.thermal_energy_fj_per_bit, tech.switching_energy_fj_per_bit) if e is not None]
    if not device_terms:
        raise MissingParam(f"{tech.name}: needs a thermal or switching energy for {schematic}")
    energy = sum(device_terms) * n_comp + tech.control_energy_fj_per_bit * n_ctrl
    if schematic == "mesh":
        area = n_comp * tech.device_area_um2 + n_ctrl * tech.control_area_um2
        time = tech.response_time_ps + tech.per_device_prop_time_ps * (M - 1)
    else:
        area = n_comp * (tech.device_area_um2 + tech.control_area_um2) + n_lut * tech.lut_entry_area_um2
        time = tech.response_time_ps + tech.per_device_prop_time_ps * M
    return CostReport(schematic, tech.name, M, n_comp, n_ctrl, n_lut, energy, area, time, seap(time, energy, area))


def sweep(
    schematics: Iterable[str],
    techs: Iterable[TechParams],
    M_list: Sequence[int],
    all_pairs: bool = False,
) -> list[CostReport]:
    """One report per (schematic, tech, M).

    By default a built-in technology is only evaluated on the schematic it is
    published with (see ``PAPER_PAIRING``); ``all_pairs`` lifts that filter.
    Technologies with unknown names are always kept.
    """
    M_list = list(M_list)
    if not M_list:
        raise InvalidModulus("M_list is empty")
    if any(b <= a for a, b in zip(M_list, M_list[1:])):
        raise InvalidModulus("M_list must be strictly ascending")
    schematics = list(schematics)
    techs = list(techs)
    rows = []
    for schematic in schematics:
        for tech in techs:
            paired = PAPER_PAIRING.get(tech.name, schematic)
            if not all_pairs and paired != schematic:
                continue
            rows.extend(cost_report(schematic, tech, M) for M in M_list)
    return rows


def to_csv(reports: Iterable[CostReport], header: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(CSV_HEADER)
    for r in reports:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def apply_overrides(tech: TechParams, assignments: Iterable[str]) -> TechParams:
    """Apply ``key=value`` strings; ``value`` may be ``none`` for optional terms."""
    names = {f.name for f in dataclasses.fields(TechParams)} - {"name"}
    changes = {}
    for item in assignments:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in names:
            raise InvalidParam(f"cannot set {item!r}; known keys: {', '.join(sorted(names))}")
        if value.strip().lower() == "none":
            changes[key] = None
        else:
            try:
                v = float(value)
            except ValueError:
                raise InvalidParam(f"{key}: {value!r} is not a number") from None
            if not math.isfinite(v):
                raise InvalidParam(f"{key} must be finite")
            changes[key] = v
    return tech.replace(**changes)
