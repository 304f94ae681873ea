import itertools
import random

import pytest
from hypothesis import given, strategies as st

from lclpaths.core import CYCLE, PATH, Instance, LclError, solve_instance, verify_labeling
from lclpaths.fixtures import all_allowed, coloring, copy_input
from lclpaths.pathtypes import (build_type_automaton, extendible, periodic_pump_params,
                                pump_decomposition, pump_to_length, relabel_after_replace,
                                tripartition, type_bound, type_of)

from oracles import boundary_positions, brute_extendible, brute_type

ELL_PUMP = {"copy": 47, "2col": 7, "3col": 6, "allowed": 6, "mis": 8}


@pytest.fixture(scope="module")
def automata(problems):
    return {k: build_type_automaton(p) for k, p in problems.items()}


def test_ell_pump_frozen(automata, problems):
    for name, aut in automata.items():
        assert aut.ell_pump == ELL_PUMP[name]
        assert aut.ell_pump <= type_bound(problems[name])


@pytest.mark.parametrize("name", sorted(ELL_PUMP))
def test_type_count_matches_brute_force(problems, name):
    p = problems[name]
    max_len = 9 if len(p.sigma_in) > 1 else 14
    seen = {brute_type(p, w) for L in range(max_len + 1) for w in itertools.product(p.sigma_in, repeat=L)}
    assert len(seen) == ELL_PUMP[name]


@pytest.mark.parametrize("name", ["copy", "2col", "mis"])
def test_equal_types_iff_equal_brute_types(problems, automata, name):
    p, aut = problems[name], automata[name]
    words = [w for L in range(9) for w in itertools.product(p.sigma_in, repeat=L)]
    by_state, by_brute = {}, {}
    for w in words:
        by_state.setdefault(aut.run_labels(w), set()).add(w)
        by_brute.setdefault(brute_type(p, w), set()).add(w)
    assert sorted(map(sorted, by_state.values())) == sorted(map(sorted, by_brute.values()))


def test_tripartition_against_distance_rule():
    for r in (1, 2):
        for k in range(1, 14):
            t = tripartition(k, r)
            fixed, checked = boundary_positions(k, r)
            assert sorted(i - 1 for i in t.d1 | t.d2) == fixed
            assert sorted(i - 1 for i in t.d2 | t.d3) == checked
            assert not (t.d1 & t.d2 or t.d1 & t.d3 or t.d2 & t.d3)


@given(data=st.data())
def test_extendible_matches_brute(problems, data):
    name = data.draw(st.sampled_from(["copy", "2col", "3col", "mis"]))
    p = problems[name]
    k = data.draw(st.integers(1, 9))
    ins = data.draw(st.lists(st.sampled_from(p.sigma_in), min_size=k, max_size=k))
    fixed, _ = boundary_positions(k, p.radius)
    b = data.draw(st.lists(st.sampled_from(p.sigma_out), min_size=len(fixed), max_size=len(fixed)))
    assert extendible(p, ins, b) == brute_extendible(p, ins, b)


def test_extendible_rejects_wrong_boundary(problems):
    p = problems["3col"]
    with pytest.raises(LclError):
        extendible(p, "aaaaaa", ["0"])
    with pytest.raises(LclError):
        extendible(p, "aaaaaa", {0: "0"})


@given(w=st.lists(st.sampled_from("01"), max_size=8))
def test_automaton_agrees_with_direct_type(automata, problems, w):
    aut, p = automata["copy"], problems["copy"]
    assert aut.signature(aut.run_labels(w)) == type_of(p, w)


@given(w=st.lists(st.sampled_from("01"), min_size=47, max_size=80), i=st.integers(0, 4))
def test_pumping_keeps_type(automata, w, i):
    aut = automata["copy"]
    x, y, z = pump_decomposition(aut, w)
    assert len(x) + len(y) <= aut.ell_pump and len(y) >= 1
    assert x + y + z == tuple(w)
    assert aut.run_labels(x + y * i + z) == aut.run_labels(w)


@given(w=st.lists(st.sampled_from("01"), min_size=47, max_size=60), extra=st.integers(0, 30))
def test_pump_to_length(automata, w, extra):
    aut = automata["copy"]
    u = pump_to_length(aut, w, len(w) + extra)
    assert len(u) >= len(w) + extra
    assert aut.run_labels(u) == aut.run_labels(w)


def test_short_strings_cannot_be_pumped(automata):
    with pytest.raises(LclError):
        pump_decomposition(automata["copy"], "0101")


def test_periodic_pump_params_frozen(automata):
    # short types of a, aa, aaa, aaaa are all distinct; the first repeat is at a^5
    assert periodic_pump_params(automata["allowed"], "a") == (1, 5)
    assert periodic_pump_params(automata["2col"], "a") == (2, 5)
    assert periodic_pump_params(automata["mis"], "a") == (1, 7)
    assert periodic_pump_params(automata["copy"], "01") == (1, 3)


@given(name=st.sampled_from(["copy", "2col", "allowed", "mis"]), w=st.lists(st.integers(0, 1), min_size=1, max_size=4),
       i=st.integers(0, 5))
def test_periodic_params_are_sound(automata, name, w, i):
    aut = automata[name]
    w = [aut.problem.sigma_in[c % len(aut.problem.sigma_in)] for c in w]
    a, b = periodic_pump_params(aut, w)
    assert a + b <= aut.ell_pump
    assert aut.run_labels(w * (a * i + b)) == aut.run_labels(w * b)


def test_reversal_map(automata, problems):
    for name, aut in automata.items():
        for s, rep in enumerate(aut.reps):
            rev = [aut.problem.sigma_in[a] for a in reversed(rep)]
            assert aut.reverse(s) == aut.run_labels(rev)


@given(seed=st.integers(0, 10 ** 6))
def test_relabel_after_replace(problems, automata, seed):
    rng = random.Random(seed)
    p, aut = problems["copy"], automata["copy"]
    n = rng.randint(60, 90)
    inst = Instance(CYCLE, [rng.choice("01") for _ in range(n)])
    lab = solve_instance(p, inst)
    a = rng.randrange(0, n - 55)
    seg = range(a, a + 50)
    x, y, z = pump_decomposition(aut, inst.inputs[a:a + 50])
    new = x + y * rng.randint(0, 4) + z
    res = relabel_after_replace(p, inst, lab, seg, new)
    assert res.instance.inputs[res.segment.start:res.segment.stop] == new
    assert verify_labeling(p, res.instance, res.labeling) == []
    assert len(set(res.instance.ids)) == res.instance.n


def test_relabel_keeps_old_violations_only(problems):
    p = coloring(3)
    inst = Instance(PATH, "a" * 30)
    outs = list(solve_instance(p, inst).outputs)
    outs[25] = outs[26]  # damage outside the segment
    before = set(verify_labeling(p, inst, outs))
    res = relabel_after_replace(p, inst, outs, range(3, 15), "a" * 17)
    after = set(verify_labeling(p, res.instance, res.labeling))
    shift = 17 - 12
    assert after == {v + shift for v in before}


def test_relabel_rejects_other_type(problems):
    p = coloring(2)
    inst = Instance(PATH, "a" * 20)
    lab = solve_instance(p, inst)
    with pytest.raises(LclError):
        relabel_after_replace(p, inst, lab, range(2, 12), "a" * 11)


def test_verify_mode_build():
    assert build_type_automaton(copy_input(), verify=True).ell_pump == 47
    assert build_type_automaton(all_allowed(), verify=True).ell_pump == 6
