"""Residue number system arithmetic on simulated 2x2 optical switch fabrics."""

from .apps import ConvSpec, FixedWeightMAC, conv1d_rns, fixed_weight_mac, mac_rns
from .cost import CostReport, TechParams, builtin_tech, cost_report, counts, seap, sweep
from .errors import RnsError
from .fabric import (
    Configuration,
    FabricTopology,
    Lut,
    SwitchState,
    build_asd,
    build_mesh,
    count_switches,
    eval_add,
    eval_mul,
    make_adder_lut,
    make_multiplier_lut,
    permutation_to_states,
    route,
)
from .rns import (
    ModuliSet,
    OneHot,
    ResidueVector,
    decode,
    digit_add,
    digit_mul,
    digit_sub,
    encode,
    from_onehot,
    rns_add,
    rns_mul,
    rns_sub,
    to_onehot,
    validate_moduli,
)
from .wdm import WdmFrame, detect, route_wdm, run_frame

__version__ = "0.1.0"
