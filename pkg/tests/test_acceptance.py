"""The ten acceptance criteria, each with its runtime budget."""

import io
import json
import random
import time
from itertools import combinations
from math import gcd

import pytest

from dyncoprime.cli import main
from dyncoprime.evolution import classify_boundedness, graph_period, verify_modular_period, verify_run
from dyncoprime.graphs import build_family, from_edge_list
from dyncoprime.labelings import Labeling, solve_coprime_labeling, verify_coprime
from dyncoprime.numtheory import carmichael_lambda, generates_full_group, is_prime, korselt_check
from dyncoprime.transforms import (
    additive_shift,
    affine,
    affine_edge_hypothesis,
    apply,
    modular_power,
    power,
    prime_index,
    sample_coprime_preservation,
)

from golden_cases import CASES, GOLDEN_DIR, render
from oracles import brute_coprime_labeling, fermat_carmichael_oracle

pytestmark = pytest.mark.acceptance


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_01_carmichael_example():
    with Clock() as clock:
        lam = carmichael_lambda(561)
        cert = korselt_check(561)
    assert lam == 80
    assert cert.is_carmichael
    assert clock.elapsed < 1e-3


def _generating_unit_set(n, pool):
    for size in range(1, len(pool) + 1):
        for labels in combinations(pool, size):
            if generates_full_group(labels, n):
                return labels
    return None


def test_criterion_02_graph_period():
    with Clock() as clock:
        pool = [p for p in range(2, 40) if is_prime(p) and 561 % p]
        labels = _generating_unit_set(561, pool)
        assert labels is not None
        f0 = Labeling(labels)
        g = build_family("path", len(f0))
        report = graph_period(f0, 561)
        at_80 = verify_modular_period(g, f0, 561, 80)
        at_40 = verify_modular_period(g, f0, 561, 40)
        at_16 = verify_modular_period(g, f0, 561, 16)
    assert report.graph_period == 80 == report.lambda_n
    assert at_80 and not at_40 and not at_16
    assert clock.elapsed < 1.0


EXPECTED_LABELS = {
    "path4_construct.json": [{"0": "1", "1": "2", "2": "3", "3": "4"}],
    "path4_square.json": [
        {"0": "1", "1": "2", "2": "3", "3": "4"},
        {"0": "1", "1": "4", "2": "9", "3": "16"},
    ],
    "wheel5_square.json": [
        {"0": "1", "1": "2", "2": "3", "3": "5", "4": "7", "5": "11"},
        {"0": "1", "1": "4", "2": "9", "3": "25", "4": "49", "5": "121"},
    ],
}


def test_criterion_03_golden_outputs():
    with Clock() as clock:
        outputs = {name: render(argv) for name, argv in CASES.items()}
    for name, (code, text) in outputs.items():
        assert code == 0, name
        assert text == (GOLDEN_DIR / name).read_text(), name
    for name, frames in EXPECTED_LABELS.items():
        data = json.loads(outputs[name][1])
        got = [data["labels"]] if "labels" in data else [f["labels"] for f in data["frames"]]
        assert got == frames, name
    q3 = json.loads(outputs["q3_square.json"][1])["frames"]
    even = [v for v in range(8) if bin(v).count("1") % 2 == 0]
    odd = [v for v in range(8) if v not in even]
    for frame, e in zip(q3, (1, 2)):
        labels = {int(v): int(x) for v, x in frame["labels"].items()}
        assert sorted(labels[v] for v in even) == [p**e for p in (2, 3, 5, 7)]
        assert sorted(labels[v] for v in odd) == [p**e for p in (11, 13, 17, 19)]
    assert clock.elapsed < 1.0


def test_criterion_04_power_identity():
    with Clock() as clock:
        for k in range(1, 6):
            powers = [a**k for a in range(201)]
            for a in range(1, 201):
                for b in range(1, 201):
                    assert gcd(powers[a], powers[b]) == gcd(a, b) ** k
    assert clock.elapsed < 10.0


def _random_coprime_labeling(rng, g, k):
    while True:
        labels = [0] * g.n
        used = set()
        for v in rng.sample(range(g.n), g.n):
            options = [
                x for x in range(1, k + 1)
                if x not in used and all(labels[u] == 0 or gcd(x, labels[u]) == 1 for u in g.neighbors(v))
            ]
            if not options:
                break
            labels[v] = rng.choice(options)
            used.add(labels[v])
        else:
            return Labeling(tuple(labels))


def test_criterion_05_persistence():
    rng = random.Random(20261016)
    with Clock() as clock:
        for _ in range(100):
            n = rng.randrange(1, 17)
            density = rng.uniform(0.1, 0.7)
            g = from_edge_list(n, [e for e in combinations(range(n), 2) if rng.random() < density])
            f0 = _random_coprime_labeling(rng, g, 4 * n + 8)
            assert verify_coprime(g, f0).ok
            for spec in (power(2), power(3), prime_index()):
                run = verify_run(g, f0, spec, 12)
                assert run.verified and not run.violations, (g, f0, spec)
    assert clock.elapsed < 30.0


def _check_existence(g):
    k = g.n + 2
    res = solve_coprime_labeling(g, k)
    brute = brute_coprime_labeling(g.n, g.edges, k)
    assert res.status == ("feasible" if brute is not None else "infeasible"), g
    if res.labeling is not None:
        assert verify_coprime(g, res.labeling).ok
        assert verify_run(g, res.labeling, power(2), 8).verified


def test_criterion_06_existence_equivalence():
    with Clock() as clock:
        for n in range(1, 6):
            pairs = list(combinations(range(n), 2))
            for mask in range(1 << len(pairs)):
                _check_existence(from_edge_list(n, [e for i, e in enumerate(pairs) if mask >> i & 1]))
        rng = random.Random(6)
        pairs = list(combinations(range(6), 2))
        for _ in range(400):
            _check_existence(from_edge_list(6, [e for e in pairs if rng.random() < rng.uniform(0.1, 0.9)]))
    assert clock.elapsed < 300.0


def test_criterion_07_alternate_map():
    k2 = from_edge_list(2, [(0, 1)])
    with Clock() as clock:
        run = verify_run(k2, Labeling((3, 8)), affine(2), 64)
        report = affine_edge_hypothesis(k2, Labeling((3, 8)), 2)
        for p in (2, 3, 5):
            for a in range(1, 101):
                f0 = Labeling((a, a + 1))
                hyp = affine_edge_hypothesis(k2, f0, p)
                assert hyp.guaranteed and hyp.edges[0].tests == ()
                assert verify_run(k2, f0, affine(p), 64).verified
    v = run.first_violation
    assert (v.t, v.gcd) == (2, 5)
    assert not report.overall
    (test,) = report.edges[0].tests
    assert (test.q, test.residue, test.member_of_subgroup) == (5, 4, True)
    assert clock.elapsed < 1.0


def test_criterion_08_additive_shift_non_example():
    with Clock() as clock:
        verdict = sample_coprime_preservation(additive_shift(1), 10)
    assert not verdict.preserved
    a, b = verdict.counterexample
    assert gcd(apply(additive_shift(1), a), apply(additive_shift(1), b)) > 1
    assert clock.elapsed < 1e-3
    assert verdict.counterexample == (3, 5)
    assert gcd(4, 6) == 2


def test_criterion_09_carmichael_scan():
    expected = fermat_carmichael_oracle(100_000)
    buf = io.StringIO()
    with Clock() as clock:
        code = main(["carmichael", "--scan-upto", "100000"], out=buf)
    assert code == 0
    found = json.loads(buf.getvalue())["carmichael"]
    assert len(found) == 16
    assert found == expected
    assert clock.elapsed < 30.0


def _direct_period(labels, k, n, preperiod, period):
    """Confirm by plain iteration that frames repeat with exactly this period."""
    frame = list(labels)
    union = set(labels)
    for _ in range(preperiod):
        frame = [pow(x, k, n) for x in frame]
        union.update(frame)
    start = frame
    for step in range(1, period + 1):
        frame = [pow(x, k, n) for x in frame]
        union.update(frame)
        if step < period:
            assert frame != start
    assert frame == start
    return union


def test_criterion_10_boundedness_dichotomy():
    rng = random.Random(10)
    with Clock() as clock:
        for n in (7, 15, 561):
            units = [a for a in range(1, n) if gcd(a, n) == 1]
            for _ in range(50):
                labels = tuple(rng.sample(units, rng.randrange(1, min(6, len(units)) + 1)))
                b = classify_boundedness(Labeling(labels), modular_power(2, n))
                assert b.kind == "bounded"
                union = _direct_period(labels, 2, n, b.preperiod, b.period)
                assert set(b.label_set) == union
        for spec in (power(2), affine(2)):
            b = classify_boundedness(Labeling((1, 2, 3)), spec)
            assert b.kind == "unbounded"
            assert len(b.witness) >= 2
            assert all(x < y for x, y in zip(b.witness, b.witness[1:]))
    assert clock.elapsed < 5.0
