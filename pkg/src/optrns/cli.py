"""Command-line entry point: ``optrns <subcommand> ...``.

Exit status is 0 on success, 1 on a domain error (reported as
``ErrorName: message`` on stderr) and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import cost as cost_mod
from .apps import ConvSpec, conv1d_rns
from .errors import ConfigMismatch, RnsError, SchemaError
from .fabric import (
    SCHEMATICS,
    fabric,
    build,
    load_document,
    lut_to_dict,
    make_adder_lut,
    make_multiplier_lut,
    route_operand,
    route_trace,
    topology_to_dict,
)
from .rns import ResidueVector, decode, encode, to_onehot, validate_moduli
from .wdm import detect, frame_from_dict, run_frame


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _load_fabric(args, kind: str, M: int | None = None):
    """Topology and LUT from ``--topo``/``--lut`` files, or built in-process."""
    if args.topo or args.lut:
        if not (args.topo and args.lut):
            raise ConfigMismatch("--topo and --lut must be given together")
        topology, _ = load_document(_read_json(args.topo))
        lut_topology, lut = load_document(_read_json(args.lut))
        if lut is None:
            raise SchemaError(f"{args.lut} is a topology, not a LUT")
        if lut_topology != topology:
            raise ConfigMismatch("LUT was generated for a different topology")
        if lut.kind != kind:
            raise ConfigMismatch(f"LUT kind is {lut.kind!r}, operation needs {kind!r}")
        if M is not None and topology.waveguides != M:
            raise ConfigMismatch(f"topology modulus {topology.waveguides} != --modulus {M}")
        return topology, lut
    if M is None:
        raise ConfigMismatch("give --modulus, or --topo and --lut")
    return fabric(args.schematic, kind, M)


def cmd_encode(args) -> None:
    r = encode(args.x, validate_moduli(args.moduli))
    print(",".join(map(str, r.digits)))


def cmd_decode(args) -> None:
    print(decode(ResidueVector(tuple(args.residues)), validate_moduli(args.moduli)))


def cmd_arith(args) -> None:
    topology, lut = _load_fabric(args, args.command, args.modulus)
    M = topology.waveguides
    x = to_onehot(args.a, M)
    out = route_operand(topology, lut, args.b, x)
    if args.trace:
        config = lut.lookup(args.b)
        if config is None:
            for i in range(len(topology.stages)):
                print(f"stage {i}: bypass")
        else:
            for i, pos in enumerate(route_trace(topology, config, x)):
                print(f"stage {i}: lane {pos}")
    print(out.lane)


def cmd_build(args) -> None:
    _write(_dump(topology_to_dict(build(args.schematic, args.modulus, args.kind))), args.out)


def cmd_lut(args) -> None:
    topology = build(args.schematic, args.modulus, args.kind)
    make = make_adder_lut if args.kind == "add" else make_multiplier_lut
    _write(_dump(lut_to_dict(topology, make(topology, args.modulus))), args.out)


def _tech(name: str, overrides) -> cost_mod.TechParams:
    return cost_mod.apply_overrides(cost_mod.builtin_tech(name), overrides or [])


def cmd_cost(args) -> None:
    report = cost_mod.cost_report(args.schematic, _tech(args.tech, args.set), args.modulus)
    _write(cost_mod.to_csv([report], header=args.header), None)


def cmd_sweep(args) -> None:
    techs = [_tech(t, args.set) for t in (args.tech or cost_mod.TECHS)]
    schematics = args.schematic or list(SCHEMATICS)
    rows = cost_mod.sweep(schematics, techs, args.moduli, all_pairs=args.all_pairs)
    _write(cost_mod.to_csv(rows), args.out)


def cmd_wdm(args) -> None:
    doc = _read_json(args.frame)
    if not isinstance(doc, dict) or "kind" not in doc:
        raise SchemaError("frame must be an object with a 'kind' key")
    topology, lut = _load_fabric(args, doc["kind"], args.modulus)
    kind, b, frame = frame_from_dict(doc, topology.waveguides, args.max_channels)
    if args.b is not None:
        b = args.b
    result = detect(run_frame(topology, lut, b, frame), topology.waveguides)
    print(json.dumps(result))


def cmd_conv(args) -> None:
    doc = _read_json(args.spec)
    if not isinstance(doc, dict):
        raise SchemaError("conv spec must be a JSON object")
    try:
        spec = ConvSpec.from_dict(doc, args.moduli)
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed conv spec: {exc}") from exc
    print(json.dumps(conv1d_rns(spec, args.schematic)))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="optrns", description="Optical RNS arithmetic fabric simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def schematic_opt(p, required=False):
        p.add_argument("--schematic", choices=SCHEMATICS, default=None if required else "asd", required=required)

    p = sub.add_parser("encode", help="integer -> residues")
    p.add_argument("x", type=int)
    p.add_argument("--moduli", type=_int_list, required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="residues -> integer")
    p.add_argument("residues", type=_int_list)
    p.add_argument("--moduli", type=_int_list, required=True)
    p.set_defaults(func=cmd_decode)

    for name in ("add", "mul"):
        p = sub.add_parser(name, help=f"modular {name} on a simulated fabric")
        p.add_argument("a", type=int)
        p.add_argument("b", type=int)
        p.add_argument("--modulus", type=int)
        schematic_opt(p)
        p.add_argument("--trace", action="store_true", help="print the lane after each stage")
        p.add_argument("--topo", help="topology JSON from 'build'")
        p.add_argument("--lut", help="LUT JSON from 'lut'")
        p.set_defaults(func=cmd_arith)

    p = sub.add_parser("build", help="write a fabric topology as JSON")
    p.add_argument("--modulus", type=int, required=True)
    schematic_opt(p, required=True)
    p.add_argument("--kind", choices=("add", "mul"), default="add")
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("lut", help="write an adder or multiplier LUT as JSON")
    p.add_argument("--kind", choices=("add", "mul"), required=True)
    p.add_argument("--modulus", type=int, required=True)
    schematic_opt(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lut)

    p = sub.add_parser("cost", help="one CSV cost row")
    p.add_argument("--modulus", type=int, required=True)
    schematic_opt(p, required=True)
    p.add_argument("--tech", required=True)
    p.add_argument("--set", action="append", metavar="KEY=VAL")
    p.add_argument("--header", action="store_true")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("sweep", help="SEAP sweep over moduli as CSV")
    p.add_argument("--moduli", type=_int_list, required=True)
    p.add_argument("--schematic", choices=SCHEMATICS, action="append")
    p.add_argument("--tech", action="append")
    p.add_argument("--all-pairs", action="store_true", help="evaluate every tech on every schematic")
    p.add_argument("--set", action="append", metavar="KEY=VAL")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("wdm", help="route a multi-wavelength frame")
    p.add_argument("--frame", required=True)
    p.add_argument("--topo")
    p.add_argument("--lut")
    p.add_argument("--b", type=int, help="control operand; overrides the frame's 'b'")
    p.add_argument("--modulus", type=int)
    schematic_opt(p)
    p.add_argument("--max-channels", type=int, default=64)
    p.set_defaults(func=cmd_wdm)

    p = sub.add_parser("conv", help="1-D convolution in RNS")
    p.add_argument("--spec", required=True)
    p.add_argument("--moduli", type=_int_list)
    schematic_opt(p)
    p.set_defaults(func=cmd_conv)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except RnsError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"IOError: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
