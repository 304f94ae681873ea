import pytest

from lclpaths.core import LclProblem
from lclpaths.decider import (CONSTANT, EXIT_CODES, GLOBAL, LOGSTAR, UNKNOWN, Budget, BudgetExhausted,
                              classify, find_feasible_function_const, find_feasible_function_logstar,
                              verify_feasible_const, verify_feasible_logstar)
from lclpaths.fixtures import coloring, from_predicate
from lclpaths.pathtypes import build_type_automaton

EXPECTED = {"copy": CONSTANT, "allowed": CONSTANT, "3col": LOGSTAR, "mis": LOGSTAR, "2col": GLOBAL}


@pytest.fixture(scope="module")
def verdicts(problems):
    return {k: classify(p) for k, p in problems.items()}


def test_fixture_classes(verdicts):
    assert {k: c.cls for k, c in verdicts.items()} == EXPECTED


def test_certificates_reverify(problems, verdicts):
    for name, c in verdicts.items():
        aut = build_type_automaton(problems[name])
        if c.cls == CONSTANT:
            assert verify_feasible_const(problems[name], aut, c.certificate) == (True, None)
        elif c.cls == LOGSTAR:
            assert verify_feasible_logstar(problems[name], aut, c.certificate) == (True, None)
        else:
            assert c.certificate is None and c.to_json()["certificate"]["kind"] == "exhaustion"


def test_report_is_deterministic(problems, verdicts):
    for name in ("copy", "3col"):
        again = classify(problems[name]).to_json()
        assert again == verdicts[name].to_json()
        assert again["certificate"]["digest"] == verdicts[name].to_json()["certificate"]["digest"]


def test_descriptors(verdicts):
    assert verdicts["3col"].synthesized == {"algorithm": "logstar", "s": 2, "k": 12}
    assert verdicts["copy"].synthesized["algorithm"] == "const"
    assert verdicts["2col"].synthesized == {"algorithm": "global"}


def test_caveat_lists_odd_cycles(verdicts):
    bad = {u["n"] for u in verdicts["2col"].solvability_caveat["unsolvable"]}
    assert bad == {3, 5, 7}
    assert verdicts["3col"].solvability_caveat["unsolvable"] == []


def test_tampered_logstar_function_fails(problems, verdicts):
    p = problems["3col"]
    f = verdicts["3col"].certificate
    key = sorted(f.table)[0]
    f2 = type(f)(f.problem, f.ell, dict(f.table), f.reps)
    f2.table[key] = tuple(0 for _ in f.table[key])
    ok, cex = verify_feasible_logstar(p, build_type_automaton(p), f2)
    assert not ok and "S1" in cex


def test_tampered_const_function_fails(problems, verdicts):
    p = problems["copy"]
    aut = build_type_automaton(p)
    f = verdicts["copy"].certificate
    assert f((0,)) == (0,)
    f._cache[(0,)] = (1,)
    try:
        ok, cex = verify_feasible_const(p, aut, f)
    finally:
        f._cache.pop((0,))
    assert not ok and cex["condition"] == "i"


def test_no_const_function_for_three_coloring(problems):
    p = problems["3col"]
    assert find_feasible_function_const(p, build_type_automaton(p)) is None


def test_logstar_not_found_for_two_coloring(problems):
    p = problems["2col"]
    assert find_feasible_function_logstar(p) is None


def test_budget_gives_unknown(problems):
    c = classify(problems["copy"], Budget(max_nodes=50))
    assert c.cls == UNKNOWN and "budget" in c.transcript
    assert EXIT_CODES[c.cls] == 3
    with pytest.raises(BudgetExhausted):
        Budget(max_nodes=1).tick(2)


def test_unsolvable_problem_is_global():
    p = LclProblem("empty", ("a",), ("0",), 1, frozenset())
    c = classify(p)
    assert c.cls == GLOBAL
    assert c.solvability_caveat["unsolvable"]


def test_oriented_problem():
    # directed "next differs" on a cycle: same as 2-coloring, still global
    def ok(cells, c):
        return c + 1 >= len(cells) or cells[c][1] != cells[c + 1][1]
    p = from_predicate("succ-differs", ("a",), ("0", "1"), 1, ok, oriented=True)
    assert classify(p).cls == GLOBAL
    q = from_predicate("succ-differs3", ("a",), ("0", "1", "2"), 1, ok, oriented=True)
    assert classify(q).cls == LOGSTAR


def test_radius_zero_problems():
    trivial = from_predicate("free", ("a", "b"), ("x",), 0, lambda cells, c: True)
    assert classify(trivial).cls == CONSTANT
