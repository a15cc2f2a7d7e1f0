"""Exit criteria. Each test prints one PASS/FAIL line per criterion."""
import itertools
import math
import random
import time
from contextlib import contextmanager

import pytest

from optrns.apps import ConvSpec, conv1d_rns
from optrns.cost import TECHS, builtin_tech, cost_report, counts
from optrns.errors import RangeOverflow, Unroutable
from optrns.fabric import build_asd, count_switches, eval_add, eval_mul, fabric, permutation_to_states, route_all
from optrns.rns import decode, encode, rns_add, rns_mul, rns_sub, to_onehot, validate_moduli
from optrns.wdm import WdmFrame, detect, route_wdm

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23)

# Hand oracle at M = 5, computed before the implementation from the table
# constants: energy, area, time, seap = 1/(energy*area*time).
#   mesh: 20 components, 4 control;  asd: 10 components, 10 control, 50 LUT.
COST_ORACLE_M5 = {
    ("mesh", "MRR"): (13.8 * 20 + 0.8 * 4, 20 * 3200 + 4 * 0.8, 40 + 0.754 * 4, 1.3009268415301247e-09),
    ("mesh", "MZI"): (500 * 20 + 0.8 * 4, 20 * 200 + 4 * 0.8, 14.3 + 0.1 * 4, 1.698777206750318e-09),
    ("mesh", "AOS"): (12000 * 20 + 0.8 * 4, 20 * 10 + 4 * 0.8, 0.2 + 0.01 * 4, 8.543739976730318e-08),
    ("mesh", "HPP"): (5.2 * 20 + 2 * 4, 20 * 200 + 4 * 2, 5.1 + 0.1 * 4, 4.050340876688182e-07),
    ("asd", "MRR"): (13.8 * 10 + 0.8 * 10, 10 * (3200 + 0.8) + 50 * 0.1, 40 + 0.754 * 5, 4.888146607402382e-09),
    ("asd", "MZI"): (500 * 10 + 0.8 * 10, 10 * (200 + 0.8) + 50 * 0.1, 14.3 + 0.1 * 5, 6.702397631010211e-09),
    ("asd", "AOS"): (12000 * 10 + 0.8 * 10, 10 * (10 + 0.8) + 50 * 0.1, 0.2 + 0.01 * 5, 2.949655863650388e-07),
    ("asd", "HPP"): (5.2 * 10 + 2 * 10, 10 * (200 + 2) + 50 * 0.1, 5.1 + 0.1 * 5, 1.2247697432882618e-06),
}


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def _criterion(number, title):
        try:
            yield
        except BaseException as exc:
            with capsys.disabled():
                print(f"\nCRITERION {number} FAIL: {title} ({type(exc).__name__}: {exc})")
            raise
        with capsys.disabled():
            print(f"\nCRITERION {number} PASS: {title}")
    return _criterion


def test_c1_paper_worked_examples(criterion):
    with criterion(1, "paper worked examples, exact, < 1 s"):
        t0 = time.perf_counter()
        m = validate_moduli([11, 19, 23])
        x, y = encode(96, m), encode(32, m)
        assert x.digits == (8, 1, 4)
        assert y.digits == (10, 13, 9)
        assert rns_add(x, y, m).digits == (7, 14, 13)
        assert eval_add(5, 2, 4, "asd") == 1
        assert eval_mul(5, 2, 4, "asd") == 3
        topo, lut = fabric("asd", "add", 5)
        frame = WdmFrame.of([("l1", to_onehot(1, 5)), ("l2", to_onehot(1, 5)), ("l3", to_onehot(0, 5))])
        assert detect(route_wdm(topo, lut.lookup(4), frame), 5) == {"l1": 0, "l2": 0, "l3": 4}
        assert time.perf_counter() - t0 < 1.0


def test_c2_exhaustive_oracle(criterion):
    with criterion(2, "exhaustive add/mul oracle, primes <= 23, both schematics, < 30 s"):
        fabric.cache_clear()
        t0 = time.perf_counter()
        mismatches = 0
        for M in PRIMES:
            for schematic in ("mesh", "asd"):
                for a in range(M):
                    for b in range(M):
                        mismatches += eval_add(M, a, b, schematic) != (a + b) % M
                        mismatches += eval_mul(M, a, b, schematic) != (a * b) % M
        assert mismatches == 0
        assert time.perf_counter() - t0 < 30.0


def test_c3_routability(criterion):
    with criterion(3, "ASD realises all M! perms (M <= 6), cyclic + 1000 random (M = 23)"):
        failures = 0
        for M in range(2, 7):
            topo = build_asd(M)
            for perm in itertools.permutations(range(M)):
                try:
                    failures += route_all(topo, permutation_to_states(topo, perm)) != list(perm)
                except Unroutable:
                    failures += 1
        topo = build_asd(23)
        rng = random.Random(2023)
        perms = [[(a + k) % 23 for a in range(23)] for k in range(23)]
        for _ in range(1000):
            p = list(range(23))
            rng.shuffle(p)
            perms.append(p)
        for p in perms:
            try:
                failures += route_all(topo, permutation_to_states(topo, p)) != p
            except Unroutable:
                failures += 1
        assert failures == 0


def test_c4_table_counts(criterion):
    with criterion(4, "switch/control/LUT counts at M = 5"):
        assert counts("mesh", 5)[:2] == (20, 4)
        assert counts("asd", 5) == (10, 10, 50)
        assert count_switches("asd", 5, "constructed") == 10


def test_c5_cost_oracle(criterion):
    with criterion(5, "energy/area/time/seap for 8 pairs at M = 5 match hand oracle to 1e-9 rel"):
        for (schematic, tech), (energy, area, t, s) in COST_ORACLE_M5.items():
            r = cost_report(schematic, builtin_tech(tech), 5)
            assert math.isclose(r.energy_fj_per_op, energy, rel_tol=1e-9), (schematic, tech)
            assert math.isclose(r.area_um2, area, rel_tol=1e-9), (schematic, tech)
            assert math.isclose(r.time_ps, t, rel_tol=1e-9), (schematic, tech)
            assert math.isclose(r.seap, s, rel_tol=1e-9), (schematic, tech)
            assert math.isclose(r.seap, 1 / (energy * area * t), rel_tol=1e-9)


def test_c6_seap_claim(criterion, capsys):
    with criterion(6, "seap(HPP,asd,5)/seap(MZI,mesh,5) in [10, 1000]; seap nonincreasing in M"):
        hpp = cost_report("asd", builtin_tech("HPP"), 5)
        mzi = cost_report("mesh", builtin_tech("MZI"), 5)
        ratio = hpp.seap / mzi.seap
        with capsys.disabled():
            print(f"\n  seap = 1/(time_ps * energy_fj * area_um2); ratio HPP-asd / MZI-mesh at M=5 = {ratio:.4f}")
        assert 10 <= ratio <= 1000
        for schematic in ("mesh", "asd"):
            for tech in TECHS:
                values = [cost_report(schematic, builtin_tech(tech), M).seap for M in PRIMES[1:]]
                assert all(b <= a for a, b in zip(values, values[1:])), (schematic, tech)


def test_c7_crt_round_trip(criterion):
    with criterion(7, "CRT round trip on [0, 4807) and 10^4 random homomorphism checks"):
        m = validate_moduli([11, 19, 23])
        failures = sum(decode(encode(x, m), m) != x for x in range(4807))
        rng = random.Random(7)
        for _ in range(10_000):
            x, y = rng.randrange(4807), rng.randrange(4807)
            ex, ey = encode(x, m), encode(y, m)
            failures += decode(rns_add(ex, ey, m), m) != (x + y) % 4807
            failures += decode(rns_sub(ex, ey, m), m) != (x - y) % 4807
            failures += decode(rns_mul(ex, ey, m), m) != (x * y) % 4807
        assert failures == 0


def _conv_oracle(signal, kernel):
    out = [0] * (len(signal) + len(kernel) - 1)
    for i, s in enumerate(signal):
        for j, k in enumerate(kernel):
            out[i + j] += s * k
    return out


def test_c8_convolution(criterion):
    with criterion(8, "conv1d_rns matches integer convolution on 1000 specs; overflow detected"):
        m = validate_moduli([11, 19, 23])
        rng = random.Random(8)
        mismatches = 0
        for i in range(1000):
            signal = tuple(rng.randint(0, 20) for _ in range(rng.randint(1, 8)))
            kernel = tuple(rng.randint(0, 20) for _ in range(rng.randint(1, 8)))
            schematic = "asd" if i % 2 else "mesh"
            mismatches += conv1d_rns(ConvSpec(signal, kernel, m), schematic) != _conv_oracle(signal, kernel)
        assert mismatches == 0
        # 4807 = 11*19*23 is the first unrepresentable value
        assert conv1d_rns(ConvSpec((4806,), (1,), m)) == [4806]
        with pytest.raises(RangeOverflow) as info:
            conv1d_rns(ConvSpec((1, 4807), (1,), m))
        assert info.value.index == 1


def test_c9_parameter_plumbing(criterion):
    with criterion(9, "table constants reach the cost model unchanged"):
        expected = {
            "MRR": dict(thermal_energy_fj_per_bit=13.8, control_energy_fj_per_bit=0.8, device_area_um2=3200,
                        control_area_um2=0.8, response_time_ps=40, per_device_prop_time_ps=0.754),
            "MZI": dict(switching_energy_fj_per_bit=500, control_energy_fj_per_bit=0.8, device_area_um2=200,
                        response_time_ps=14.3, per_device_prop_time_ps=0.1),
            "AOS": dict(switching_energy_fj_per_bit=12000, device_area_um2=10, response_time_ps=0.2,
                        per_device_prop_time_ps=0.01),
            "HPP": dict(switching_energy_fj_per_bit=5.2, control_energy_fj_per_bit=2, device_area_um2=200,
                        control_area_um2=2, response_time_ps=5.1, per_device_prop_time_ps=0.1),
        }
        for name, fields in expected.items():
            tech = builtin_tech(name)
            for key, value in fields.items():
                assert getattr(tech, key) == value, (name, key)
