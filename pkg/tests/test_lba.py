import random

import pytest
from hypothesis import given, settings, strategies as st

from lclpaths.codec import decode, encode
from lclpaths.core import PATH, Instance, LclError
from lclpaths.lba import (CORRUPTIONS, EMPTY, LbaMachine, canonical_pi_solver, compile_pi, corrupt,
                          decode_good_input, encode_good_input, fmt, global_pi_solution,
                          halting_steps, lba_run, looping_machine, one_step, parse,
                          pi_lower_bound_probe, solve_pi, solver_radius, binary_counter,
                          unary_counter)
from lclpaths.local import run

MACHINES = {"unary": unary_counter, "binary": binary_counter}


def simulate(m):
    """Plain reference interpreter: list of (state, tape string, head)."""
    tape = ["L"] + ["0"] * (m.B - 2) + ["R"]
    state, head, trace = m.q0, 0, []
    while True:
        trace.append((state, "".join(tape), head + 1))
        if state == m.qf or len(trace) > 10 ** 5:
            return trace
        state, tape[head], mv = m.delta[(state, tape[head])]
        head += {"L": -1, "S": 0, "R": 1}[mv]


def deviation_exists(pi, ins, target):
    """Backtracking search for an accepted labeling that leaves Start somewhere off Empty."""
    def go(i, pred_out, dev):
        if i == len(ins):
            return dev
        pred = None if i == 0 else (ins[i - 1], pred_out)
        for o in pi._outs:
            if pi.node_ok(pred, (ins[i], o)):
                if go(i + 1, o, dev or (ins[i] != EMPTY and o != target)):
                    return True
        return False
    return go(0, None, False)


@pytest.mark.parametrize("kind", sorted(MACHINES))
@pytest.mark.parametrize("B", [2, 3, 4])
def test_run_matches_reference(kind, B):
    m = MACHINES[kind](B)
    steps = halting_steps(m)
    assert [(s.state, "".join(s.tape), s.head) for s in steps] == simulate(m)


def test_step_counts():
    assert [lba_run(unary_counter(B)).T for B in (2, 3, 4)] == [3, 4, 5]
    assert [lba_run(binary_counter(B)).T for B in (2, 3, 4)] == [4, 8, 16]
    for B in (2, 3, 4):
        assert lba_run(binary_counter(B + 1)).T >= 1.5 * lba_run(binary_counter(B)).T


@pytest.mark.parametrize("kind", sorted(MACHINES))
@pytest.mark.parametrize("B", [2, 3, 4])
def test_solver_radius_formula(kind, B):
    m = MACHINES[kind](B)
    T = lba_run(m).T
    alg = canonical_pi_solver(m)
    assert solver_radius(m) == alg.radius(100) == 2 + (B + 1) * T


@pytest.mark.parametrize("kind", sorted(MACHINES))
@pytest.mark.parametrize("B", [2, 3, 4])
def test_good_inputs_accepted(kind, B):
    m = MACHINES[kind](B)
    pi = compile_pi(m)
    alg = canonical_pi_solver(m)
    E = len(encode_good_input(m))
    for phi in "ab":
        for n in (E, E + 1, E + 7):
            inst = Instance(PATH, encode_good_input(m, phi=phi, n=n))
            for mode in ("batch", "view"):
                res = run(alg, pi, inst, mode)
                assert res.violations == []
            assert set(res.labeling.outputs[:E]) == {fmt(("Start", phi))}


@pytest.mark.parametrize("kind", sorted(MACHINES))
@pytest.mark.parametrize("B", [2, 3, 4])
@pytest.mark.parametrize("defect", CORRUPTIONS)
def test_corruptions_accepted(kind, B, defect):
    m = MACHINES[kind](B)
    pi = compile_pi(m)
    ins = corrupt(m, defect)
    inst = Instance(PATH, ins)
    res = run(canonical_pi_solver(m), pi, inst, "view")
    assert res.violations == []
    assert any(o.startswith("Error") for o in res.labeling.outputs)
    assert list(canonical_pi_solver(m).batch(inst)) == list(res.labeling.outputs)


@settings(max_examples=40)
@given(kind=st.sampled_from(sorted(MACHINES)), B=st.integers(2, 4), seed=st.integers(0, 10 ** 6))
def test_random_damage_accepted(kind, B, seed):
    rng = random.Random(seed)
    m = MACHINES[kind](B)
    pi = compile_pi(m)
    ins = encode_good_input(m, n=len(encode_good_input(m)) + rng.randint(0, 5))
    for _ in range(rng.randint(1, 3)):
        op = rng.random()
        p = rng.randrange(1, len(ins))
        if op < .5:
            ins[p] = rng.choice(pi.sigma_in)
        elif op < .75:
            ins.insert(p, rng.choice(pi.sigma_in))
        elif len(ins) > 2:
            del ins[p]
    inst = Instance(PATH, ins)
    out = canonical_pi_solver(m).batch(inst)
    assert pi.violations(ins, out) == []


def test_probe_true_on_good_inputs():
    for make in (unary_counter, binary_counter):
        for B in (2, 3, 4):
            m = make(B)
            E = len(encode_good_input(m))
            for n in range(E + 1, max(E + 2, 15)):
                assert pi_lower_bound_probe(m, n=n)


def test_probe_false_cases():
    m = unary_counter(2)
    assert not pi_lower_bound_probe(m, closure=False)
    for defect in CORRUPTIONS:
        assert not pi_lower_bound_probe(m, inputs=corrupt(m, defect))
    with pytest.raises(LclError):
        pi_lower_bound_probe(m, n=len(encode_good_input(m)))
    assert not pi_lower_bound_probe(m, inputs=encode_good_input(m))  # no Empty padding


@pytest.mark.parametrize("closure", [True, False])
@pytest.mark.parametrize("defect", [None, "copy", "state", "too-short"])
@pytest.mark.parametrize("make,B", [(unary_counter, 2), (unary_counter, 3), (binary_counter, 2)])
def test_probe_matches_backtracking(make, B, closure, defect):
    m = make(B)
    E = len(encode_good_input(m))
    inputs = encode_good_input(m, n=E + 1) if defect is None else corrupt(m, defect, pad=1)
    pi = compile_pi(m, closure=closure)
    ins = [parse(x) for x in inputs]
    expect = not deviation_exists(pi, ins, ("Start", "a"))
    assert expect == (closure and defect is None)
    assert pi_lower_bound_probe(m, inputs=inputs, closure=closure) == expect


def test_good_input_round_trip():
    for make in (unary_counter, binary_counter):
        m = make(3)
        assert decode_good_input(m, encode_good_input(m, n=60)) == halting_steps(m)
    with pytest.raises(LclError):
        decode_good_input(m, corrupt(m, "double-head"))


def test_initial_final_machine():
    m = LbaMachine(("q",), "q", "q", ("0", "1", "L", "R"), {}, 3, "idle")
    assert lba_run(m).T == 1
    assert encode_good_input(m) == ["Start(a)", "Separator", "Tape(L,q,T)", "Tape(0,q,F)", "Tape(R,q,F)"]
    inst = Instance(PATH, encode_good_input(m, n=8))
    assert run(canonical_pi_solver(m), compile_pi(m), inst, "view").violations == []


def test_looping_machine():
    m = looping_machine(3)
    ex = lba_run(m)
    assert ex.status == "LOOPING"
    with pytest.raises(LclError):
        encode_good_input(m)
    pi = compile_pi(m)
    rng = random.Random(0)
    for _ in range(50):
        ins = ["Start(b)"] + [rng.choice(pi.sigma_in) for _ in range(rng.randint(0, 20))]
        out = solve_pi(m, ins)
        assert out == global_pi_solution(pi, ins)
        assert pi.violations(ins, out) == []


def test_boundary_safety():
    gamma = ("0", "1", "L", "R")
    walks_off = LbaMachine(("q0", "qf"), "q0", "qf", gamma, {(("q0", c)): ("q0", c, "L") for c in gamma}, 3)
    with pytest.raises(LclError, match="boundary"):
        lba_run(walks_off)
    erases = LbaMachine(("q0", "qf"), "q0", "qf", gamma, {(("q0", c)): ("qf", "0", "S") for c in gamma}, 3)
    with pytest.raises(LclError, match="boundary"):
        lba_run(erases)


def test_machine_validation():
    gamma = ("0", "1", "L", "R")
    with pytest.raises(LclError):
        LbaMachine(("q0", "qf"), "q0", "qf", gamma, {}, 3)  # missing transitions
    with pytest.raises(LclError):
        LbaMachine(("q0", "qf"), "q0", "qf", ("0", "1"), {}, 3)
    with pytest.raises(LclError):
        unary_counter(1)


@given(B=st.integers(2, 6), kind=st.sampled_from(sorted(MACHINES)))
def test_machine_json_round_trip(B, kind):
    m = MACHINES[kind](B)
    assert decode(encode(m), "lba") == m


def test_label_round_trip():
    pi = compile_pi(binary_counter(3))
    for lab in pi.sigma_in + pi.sigma_out:
        assert fmt(parse(lab)) == lab
    for junk in ("Tape(0,q0)", "Error1(x)", "Start(c)", "Foo(", ""):
        with pytest.raises(LclError):
            parse(junk)


def test_label_counts():
    m = binary_counter(3)
    pi = compile_pi(m)
    Q, G, B = len(m.states), len(m.gamma), 3
    assert len(pi.sigma_in) == 4 + 2 * Q * G
    assert len(pi.sigma_out) == 4 + (B + 2) + (B + 1) + G * (B + 2) + 1 + Q * G * (B + 3) + 2


def test_cycles_rejected():
    m = unary_counter(2)
    with pytest.raises(LclError):
        canonical_pi_solver(m).batch(Instance("cycle", encode_good_input(m)))
