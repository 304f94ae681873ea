import itertools
import math
import random

import pytest
from hypothesis import given, strategies as st

from lclpaths.core import PATH, Instance, LclError, verify_normalized
from lclpaths.lba import canonical_pi_solver, compile_pi, encode_good_input, one_step, unary_counter
from lclpaths.normalize import (E, E_L, E_R, ERROR_MARKS, PredecessorLcl, Stage1, Stage2, ceil_log2,
                                fmt_label, from_pi, normalize, normalize_stage1, summary)


def toy_check(pred, cur):
    # input 1 forces A; input 0 must differ from the predecessor's output
    i, o = cur
    if i == "1":
        return o == "A"
    return pred is None or o != pred[1]


def toy_solve(ins):
    out = []
    for k, i in enumerate(ins):
        out.append("A" if i == "1" or k == 0 or out[-1] == "B" else "B")
    return out


def wide_toy(alpha):
    labels = tuple(f"x{k}" for k in range(alpha))
    return PredecessorLcl("wide", labels, ("A", "B"), lambda p, c: c[1] == ("A" if c[0] == "x0" else "B"))


TOY = PredecessorLcl("toy", ("0", "1"), ("A", "B"), toy_check)


@pytest.fixture(scope="module")
def st2():
    return normalize(TOY)


def solve_toy(st2, bits):
    return st2.solve(bits, lambda xs: st2.inner.lift(xs, toy_solve(xs)))


@given(alpha=st.integers(1, 300), beta=st.integers(1, 5))
def test_formulas(alpha, beta):
    base = PredecessorLcl("p", tuple(range(alpha)), tuple(range(beta)), lambda p, c: True)
    s1 = normalize_stage1(base)
    s2 = Stage2(s1)
    assert s1.beta == alpha * beta
    a = math.ceil(math.log2(alpha)) if alpha > 1 else 0
    assert s2.gamma == 2 * a + 3
    assert s2.beta_prime == 2 ** s2.gamma * (alpha * beta + 3)
    assert ceil_log2(alpha) == a


def test_toy_summary(st2):
    assert summary(st2) == {"alpha": 2, "beta": 2, "stage1_outputs": 4, "a": 1, "gamma": 5,
                            "beta_prime": 224}


def test_lba_summary_frozen():
    s = summary(normalize(from_pi(compile_pi(one_step(2)))))
    assert s == {"alpha": 20, "beta": 70, "stage1_outputs": 1400, "a": 5, "gamma": 13,
                 "beta_prime": 2 ** 13 * 1403}


@given(seed=st.integers(0, 10 ** 6), n=st.integers(1, 12))
def test_stage1_preserves_solutions(seed, n):
    rng = random.Random(seed)
    s1 = Stage1(TOY)
    ins = [rng.choice("01") for _ in range(n)]
    for outs in itertools.product("AB", repeat=min(n, 6)):
        outs = list(outs) + toy_solve(ins)[len(outs):]
        lifted = s1.lift(ins, outs)
        assert (s1.violations(ins, lifted) == []) == (TOY.violations(ins, outs) == [])


def test_stage1_rejects_wrong_copied_input():
    s1 = Stage1(TOY)
    assert s1.v_in_out("0", ("0", "B"))
    assert not s1.v_in_out("0", ("1", "B"))


@given(labels=st.lists(st.integers(0, 4), min_size=1, max_size=10))
def test_encoding_round_trip(labels):
    s2 = normalize(wide_toy(5))
    xs = [f"x{k}" for k in labels]
    bits = s2.encode(xs)
    assert len(bits) == s2.gamma * len(xs)
    assert s2.decode(bits) == xs
    assert not any(s2.local_error(w) for w in s2.windows(bits))


def test_decode_rejects_malformed():
    s2 = normalize(wide_toy(5))
    bits = s2.encode(["x1", "x2"])
    with pytest.raises(LclError):
        s2.decode(bits[:-1])
    bad = list(bits)
    bad[s2.a + 1] = 1
    with pytest.raises(LclError):
        s2.decode(bad)
    undecodable = [1] * (s2.a + 1) + [0] + [1] * s2.a + [0]  # index 7 >= alpha
    with pytest.raises(LclError):
        s2.decode(undecodable)
    assert s2.local_error(tuple(undecodable))


def test_tiny_instance_passes_both_verifiers(st2):
    ins = list("01101001")
    bits = st2.encode(ins)
    assert len(bits) == 8 * st2.gamma
    outs = solve_toy(st2, bits)
    for i, (bit, o) in enumerate(zip(bits, outs)):
        assert st2.v_in_out(bit, o)
        assert st2.v_out_out(outs[i - 1] if i else None, o)
    assert st2.violations(bits, outs) == []
    # same check through the explicit pair tables
    N = st2.to_normalized()
    inst = Instance(PATH, [str(b) for b in bits])
    assert verify_normalized(N, inst, [fmt_label(o) for o in outs]) == []


def test_explicit_table_sizes(st2):
    N = st2.to_normalized()
    assert len(N.sigma_out) == st2.beta_prime == 224
    with pytest.raises(LclError):
        normalize(from_pi(compile_pi(one_step(2)))).to_normalized()


@given(seed=st.integers(0, 10 ** 6))
def test_corrupted_encodings_get_error_labels(st2, seed):
    rng = random.Random(seed)
    bits = st2.encode([rng.choice("01") for _ in range(8)])
    for _ in range(rng.randint(1, 3)):
        bits[rng.randrange(len(bits))] ^= 1
    try:
        st2.decode(bits)
        return  # still a valid encoding
    except LclError:
        pass
    outs = st2.solve(bits, None)
    assert {o for _, o in outs} <= set(ERROR_MARKS) and any(o == E for _, o in outs)
    assert st2.violations(bits, outs) == []


def test_injected_error_rejected(st2):
    bits = st2.encode(list("01101001"))
    outs = solve_toy(st2, bits)
    for i in range(len(bits) - st2.gamma + 1):
        for mark in ERROR_MARKS:
            fake = list(outs)
            fake[i] = (fake[i][0], mark)
            assert st2.violations(bits, fake), (i, mark)


def test_forward_window_tail_gap(st2):
    # windows reaching past the path end are unchecked there; zero padding fakes a local error
    bits = st2.encode(list("0110"))
    n, g = len(bits), st2.gamma
    wins = [tuple(bits[i:i + g]) + (0,) * max(0, i + g - n) for i in range(n)]
    assert st2.local_error(wins[-1])
    assert not any(st2.local_error(w) for w in wins[:n - g + 1])
    outs = [(w, E_R) for w in wins[:-1]] + [(wins[-1], E)]
    assert st2.violations(bits, outs) == []


def test_error_marks_need_neighbors(st2):
    bits = st2.encode(list("01"))
    outs = solve_toy(st2, bits)
    last = list(outs)
    last[-1] = (last[-1][0], E_R)
    assert len(bits) - 1 in st2.violations(bits, last)
    first = list(outs)
    first[0] = (first[0][0], E_L)
    assert 0 in st2.violations(bits, first)


def test_original_output_must_match_decoded_input(st2):
    bits = st2.encode(list("0110"))
    outs = solve_toy(st2, bits)
    k = st2.gamma  # header node of the second block, which encodes input 1
    i, o = outs[k][1]
    fake = list(outs)
    fake[k] = (outs[k][0], ("0", o))
    assert k in st2.violations(bits, fake)


@pytest.mark.parametrize("make", [one_step, unary_counter])
def test_lba_problem_normalizes(make):
    m = make(2)
    pi = compile_pi(m)
    s2 = normalize(from_pi(pi))
    alg = canonical_pi_solver(m)
    good = encode_good_input(m, n=len(encode_good_input(m)) + 1)
    bits = s2.encode(good)
    outs = s2.solve(bits, lambda xs: s2.inner.lift(xs, alg.batch(Instance(PATH, xs))))
    assert s2.violations(bits, outs) == []
    assert s2.radius(alg.radius(0)) == (s2.gamma + 1) * alg.radius(0)
    bits[3] ^= 1
    outs = s2.solve(bits, None)
    assert s2.violations(bits, outs) == []
