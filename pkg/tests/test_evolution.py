import random
from math import gcd

import pytest

from dyncoprime.errors import NotAUnitError, OverflowPolicyError, ParameterError
from dyncoprime.evolution import (
    DclRun,
    Frame,
    IndexFormLabel,
    PeriodReport,
    PowerFormLabel,
    classify_boundedness,
    evolve,
    frame_violations,
    graph_period,
    verify_modular_period,
    verify_run,
    vertex_order_profile,
)
from dyncoprime.graphs import build_family, from_edge_list
from dyncoprime.labelings import Labeling, canonical_initial_labeling, solve_coprime_labeling
from dyncoprime.numtheory import generating_primes
from dyncoprime.transforms import additive_shift, affine, modular_power, power, prime_index

from oracles import brute_order

K2 = from_edge_list(2, [(0, 1)])
P4 = build_family("path", 4)


def test_evolve_examples():
    assert evolve(P4, Labeling((1, 2, 3, 4)), power(2), 1).labels == (1, 4, 9, 16)
    q3 = build_family("hypercube", 3)
    frame = evolve(q3, canonical_initial_labeling("hypercube", 3), power(2), 1, "power-form")
    assert sorted(x.base for x in frame.labels) == [2, 3, 5, 7, 11, 13, 17, 19]
    assert {x.exponent for x in frame.labels} == {2}
    f0 = Labeling((5, 2, 9, 4))
    for spec in (power(3), prime_index(), affine(2), additive_shift(2), modular_power(2, 11)):
        assert evolve(P4, f0, spec, 0).labels == f0.values


def test_evolve_representations_agree():
    f0 = Labeling((3, 4, 5, 7))
    exact = evolve(P4, f0, power(2), 3)
    pf = evolve(P4, f0, power(2), 3, "power-form")
    assert tuple(x.materialize() for x in pf.labels) == exact.labels
    mod = evolve(P4, f0, power(2), 3, "modular", modulus=561)
    assert mod.labels == tuple(x % 561 for x in exact.labels)
    assert evolve(P4, f0, affine(3), 4, "modular", modulus=100).labels == tuple(
        x % 100 for x in evolve(P4, f0, affine(3), 4).labels
    )
    assert evolve(P4, f0, prime_index(), 1).labels == (5, 7, 11, 17)
    assert evolve(P4, f0, prime_index(), 2).labels == (11, 17, 31, 59)


def test_evolve_errors():
    f0 = Labeling((3, 4, 5, 7))
    with pytest.raises(OverflowPolicyError):
        evolve(P4, f0, power(2), 30)
    with pytest.raises(ParameterError):
        evolve(P4, f0, affine(2), 1, "power-form")
    with pytest.raises(ParameterError):
        evolve(P4, f0, prime_index(), 1, "modular", modulus=7)
    with pytest.raises(NotAUnitError) as err:
        evolve(P4, f0, power(2), 1, "modular", modulus=6, require_units=True)
    assert err.value.vertex == 0


def test_power_form_gcd_equivalence_exhaustive():
    for a in range(1, 11):
        for b in range(1, 11):
            for t in range(5):
                e = 2**t
                frame = Frame(t, (PowerFormLabel(a, e), PowerFormLabel(b, e)), "power-form")
                violations, _ = frame_violations(K2, frame)
                assert (not violations) == (gcd(a**e, b**e) == 1)


def test_verify_run_examples():
    run = verify_run(P4, Labeling((1, 2, 3, 4)), power(2), 8)
    assert run.verified and run.guarantee == "coprime-preserving-map"

    run = verify_run(K2, Labeling((3, 8)), affine(2), 4)
    assert run.status == "violation"
    assert (run.first_violation.t, run.first_violation.edge, run.first_violation.gcd) == (2, (0, 1), 5)
    assert gcd(15, 35) == 5

    run = verify_run(K2, Labeling((3, 5)), additive_shift(1), 1)
    assert run.status == "violation" and run.first_violation.t == 1 and run.first_violation.gcd == 2


def test_verify_run_injectivity_violation():
    run = verify_run(K2, Labeling((2, 2)), power(2), 3)
    assert run.status == "violation"  # gcd(2, 2) = 2 on the edge as well
    g = from_edge_list(3, [(0, 1)])
    run = verify_run(g, Labeling((1, 2, 2)), power(2), 3)
    assert run.status == "injectivity-violation" and run.duplicate == (0, 1, 2)


def test_verify_run_switches_to_power_form():
    run = verify_run(P4, Labeling((1, 2, 3, 4)), power(2), 64)
    assert run.verified
    assert [r for _, r in run.representations] == ["exact", "power-form"]


def test_verify_run_switches_to_index_form():
    run = verify_run(P4, Labeling((1, 2, 3, 4)), prime_index(), 12)
    assert run.verified
    assert [r for _, r in run.representations] == ["exact", "index-form"]


def test_index_form_detects_collisions():
    frame = Frame(3, (IndexFormLabel(4, 3), IndexFormLabel(4, 3)), "index-form")
    violations, dup = frame_violations(K2, frame)
    assert violations and dup == (0, 1)


def test_modular_collision_policy():
    f0 = Labeling((2, 5))  # 2^2 and 5^2 are both 4 mod 7
    run = verify_run(from_edge_list(2, []), f0, modular_power(2, 7), 2)
    assert run.status == "injectivity-violation" and run.duplicate[0] == 1
    run = verify_run(from_edge_list(2, []), f0, modular_power(2, 7), 2, allow_modular_collisions=True)
    assert run.verified and run.warnings


def test_verify_run_json_round_trip():
    run = verify_run(K2, Labeling((3, 8)), affine(2), 4)
    again = DclRun.from_json(run.to_json())
    assert again.to_json() == run.to_json()
    run = verify_run(K2, Labeling((4, 8)), power(2), 40, representation="power-form")
    assert DclRun.from_json(run.to_json()).to_json() == run.to_json()


def _random_graph(rng, n):
    p = rng.uniform(0.1, 0.6)
    return from_edge_list(n, [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p])


def test_persistence_from_solver_labelings():
    rng = random.Random(5)
    for _ in range(30):
        g = _random_graph(rng, rng.randrange(2, 17))
        f0 = solve_coprime_labeling(g, 2 * g.n + 4).labeling
        for spec in (power(2), power(3), prime_index()):
            assert verify_run(g, f0, spec, 12).verified


def test_classify_boundedness_examples():
    b = classify_boundedness(Labeling((2,)), modular_power(2, 7))
    assert (b.kind, b.period, b.label_set) == ("bounded", 2, {2, 4})
    b = classify_boundedness(Labeling((1, 2, 3, 4)), power(2))
    assert b.kind == "unbounded" and b.witness_vertex == 1 and b.witness[:3] == (2, 4, 16)
    b = classify_boundedness(Labeling((5, 9)), power(1))
    assert (b.kind, b.period) == ("bounded", 1)
    for spec in (affine(2), additive_shift(3), prime_index()):
        b = classify_boundedness(Labeling((1, 2)), spec)
        assert b.kind == "unbounded"
        assert all(x < y for x, y in zip(b.witness, b.witness[1:]))


def test_classify_boundedness_tail():
    b = classify_boundedness(Labeling((3,)), modular_power(2, 7))  # 3 -> 2 -> 4 -> 2
    assert (b.period, b.preperiod, b.periodic) == (2, 1, False)


def test_vertex_order_profile_examples():
    assert vertex_order_profile(Labeling((1, 2, 3)), 7) == (1, 3, 6)
    assert vertex_order_profile(Labeling((2, 10, 5)), 561) == tuple(brute_order(a, 561) for a in (2, 10, 5))
    assert vertex_order_profile(Labeling((2, 10, 5)), 561) == (40, 16, 80)
    with pytest.raises(NotAUnitError) as err:
        vertex_order_profile(Labeling((2, 33)), 561)
    assert err.value.vertex == 1


def test_graph_period_examples():
    r = graph_period(Labeling((1, 2, 3)), 7)
    assert (r.graph_period, r.lambda_n, r.equality) == (6, 6, True)
    r = graph_period(Labeling((4,)), 5)
    assert (r.graph_period, r.lambda_n, r.divides, r.equality, r.generates) == (2, 4, True, False, False)
    r = graph_period(Labeling(tuple(generating_primes(561))), 561)
    assert r.graph_period == r.lambda_n == 80 and r.divides and r.generates and r.equality and r.certified
    assert PeriodReport.from_json(r.to_json()) == r


def test_graph_period_properties_random():
    rng = random.Random(2)
    for _ in range(500):
        n = rng.randrange(2, 5001)
        units = [a for a in rng.sample(range(1, n), min(n - 1, 6)) if gcd(a, n) == 1]
        if not units:
            continue
        r = graph_period(Labeling(tuple(units)), n)
        assert r.divides and r.certified
        if r.generates:
            assert r.equality


def test_verify_modular_period_minimality():
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randrange(3, 400)
        units = sorted({a for a in rng.sample(range(1, n), min(n - 1, 4)) if gcd(a, n) == 1})
        if not units:
            continue
        f0 = Labeling(tuple(units))
        g = from_edge_list(len(units), [])
        lam_g = graph_period(f0, n).graph_period
        assert verify_modular_period(g, f0, n, lam_g)
        for d in range(1, lam_g):
            if lam_g % d == 0:
                assert not verify_modular_period(g, f0, n, d)


def test_verify_modular_period_examples():
    f0 = Labeling(tuple(generating_primes(561)))
    g = build_family("path", len(f0))
    assert verify_modular_period(g, f0, 561, 80)
    assert not verify_modular_period(g, f0, 561, 40)
    assert verify_modular_period(g, Labeling((2, 5, 7)), 561, 80)
