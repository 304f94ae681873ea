"""LCL problems on labeled paths and cycles.

A problem is a set of allowed centered windows over (input, output) pairs.
Paths see truncated windows at their endpoints; cycles wrap around and must
have at least 2r+1 nodes. All values here are immutable.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

Cells = tuple  # tuple of (input, output) pairs
Window = tuple  # (cells, center)

PATH = "path"
CYCLE = "cycle"
ID_BOUND = 4


class LclError(ValueError):
    pass


def mirror(window: Window) -> Window:
    cells, center = window
    return tuple(reversed(cells)), len(cells) - 1 - center


@dataclass(frozen=True)
class LclProblem:
    name: str
    sigma_in: tuple
    sigma_out: tuple
    radius: int
    windows: frozenset
    oriented: bool = False

    def __post_init__(self):
        object.__setattr__(self, "sigma_in", tuple(self.sigma_in))
        object.__setattr__(self, "sigma_out", tuple(self.sigma_out))
        object.__setattr__(self, "windows", frozenset(
            (tuple(tuple(c) for c in cells), center) for cells, center in self.windows))
        if self.radius < 0:
            raise LclError("radius must be non-negative")
        if len(set(self.sigma_in)) != len(self.sigma_in) or len(set(self.sigma_out)) != len(self.sigma_out):
            raise LclError("duplicate labels")
        ins, outs = set(self.sigma_in), set(self.sigma_out)
        for cells, center in self.windows:
            if not 1 <= len(cells) <= 2 * self.radius + 1:
                raise LclError(f"window length {len(cells)} outside [1, {2 * self.radius + 1}]")
            if not 0 <= center < len(cells):
                raise LclError("window center out of range")
            for a, b in cells:
                if a not in ins:
                    raise LclError(f"unknown input label {a!r}")
                if b not in outs:
                    raise LclError(f"unknown output label {b!r}")
        if not self.oriented:
            for w in self.windows:
                if mirror(w) not in self.windows:
                    raise LclError("windows not closed under reversal")

    @cached_property
    def checker(self) -> "Checker":
        return Checker(self)


@dataclass(frozen=True)
class NormalizedLcl:
    """Binary inputs; a node checks (input, output) and (output, predecessor output)."""
    sigma_out: tuple
    c_in_out: frozenset
    c_out_out: frozenset
    sigma_in: tuple = ("0", "1")

    def __post_init__(self):
        object.__setattr__(self, "sigma_out", tuple(self.sigma_out))
        object.__setattr__(self, "sigma_in", tuple(self.sigma_in))
        object.__setattr__(self, "c_in_out", frozenset(tuple(p) for p in self.c_in_out))
        object.__setattr__(self, "c_out_out", frozenset(tuple(p) for p in self.c_out_out))
        if len(self.sigma_in) != 2:
            raise LclError("normalized problems have exactly two input labels")
        outs = set(self.sigma_out)
        for i, o in self.c_in_out:
            if i not in self.sigma_in:
                raise LclError(f"unknown input label {i!r}")
            if o not in outs:
                raise LclError(f"unknown output label {o!r}")
        for a, b in self.c_out_out:
            if a not in outs or b not in outs:
                raise LclError(f"unknown output label in pair {(a, b)!r}")

    def node_ok(self, inp, out, pred_out=None) -> bool:
        if (inp, out) not in self.c_in_out:
            return False
        return pred_out is None or (out, pred_out) in self.c_out_out

    def to_problem(self, name: str = "normalized") -> LclProblem:
        """Equivalent oriented radius-1 problem (the successor is visible but ignored)."""
        pairs = [(i, o) for i in self.sigma_in for o in self.sigma_out]
        windows = set()
        for k, centers in ((1, (0,)), (2, (0, 1)), (3, (1,))):
            for cells in itertools.product(pairs, repeat=k):
                for center in centers:
                    pred = cells[center - 1][1] if center > 0 else None
                    if self.node_ok(*cells[center], pred):
                        windows.add((cells, center))
        return LclProblem(name, self.sigma_in, self.sigma_out, 1, frozenset(windows), oriented=True)


@dataclass(frozen=True)
class Instance:
    topology: str
    inputs: tuple
    ids: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        if self.topology not in (PATH, CYCLE):
            raise LclError(f"unknown topology {self.topology!r}")
        if self.ids is None:
            object.__setattr__(self, "ids", tuple(random_ids(len(self.inputs), random.Random(0))))
        else:
            object.__setattr__(self, "ids", tuple(self.ids))
        if len(self.ids) != len(self.inputs):
            raise LclError("ids and inputs differ in length")
        if len(set(self.ids)) != len(self.ids) or any(i < 1 for i in self.ids):
            raise LclError("ids must be distinct positive integers")

    @property
    def n(self) -> int:
        return len(self.inputs)

    @property
    def cyclic(self) -> bool:
        return self.topology == CYCLE

    def reversed(self) -> "Instance":
        return Instance(self.topology, self.inputs[::-1], self.ids[::-1])


@dataclass(frozen=True)
class Labeling:
    outputs: tuple

    def __post_init__(self):
        object.__setattr__(self, "outputs", tuple(self.outputs))

    def __len__(self):
        return len(self.outputs)


UNSAT = None


def random_ids(n: int, rng: random.Random, id_bound: int = ID_BOUND) -> list:
    return rng.sample(range(1, id_bound * max(n, 1) + 1), n)


def random_instance(problem: LclProblem, n: int, rng: random.Random, topology: str = CYCLE,
                    id_bound: int = ID_BOUND) -> Instance:
    inputs = [rng.choice(problem.sigma_in) for _ in range(n)]
    return Instance(topology, inputs, random_ids(n, rng, id_bound))


class Checker:
    """Integer-coded window membership; a cell is input_index * |out| + output_index."""

    def __init__(self, problem: LclProblem):
        self.r = problem.radius
        self.nin = len(problem.sigma_in)
        self.nout = len(problem.sigma_out)
        self.in_index = {a: i for i, a in enumerate(problem.sigma_in)}
        self.out_index = {b: i for i, b in enumerate(problem.sigma_out)}
        self.allowed = set()
        for cells, center in problem.windows:
            codes = tuple(self.in_index[a] * self.nout + self.out_index[b] for a, b in cells)
            self.allowed.add((codes, center))

    def ok(self, ins: Sequence[int], outs: Sequence[int], center: int) -> bool:
        m = self.nout
        return (tuple(i * m + o for i, o in zip(ins, outs)), center) in self.allowed

    def encode_inputs(self, labels: Iterable) -> list:
        try:
            return [self.in_index[a] for a in labels]
        except KeyError as e:
            raise LclError(f"unknown input label {e.args[0]!r}") from None

    def encode_outputs(self, labels: Iterable) -> list:
        try:
            return [self.out_index[b] for b in labels]
        except KeyError as e:
            raise LclError(f"unknown output label {e.args[0]!r}") from None


def check_window(problem: LclProblem, cells: Sequence, center: int) -> bool:
    cells = tuple(tuple(c) for c in cells)
    if not 1 <= len(cells) <= 2 * problem.radius + 1 or not 0 <= center < len(cells):
        raise LclError("malformed window")
    for a, b in cells:
        if a not in problem.sigma_in or b not in problem.sigma_out:
            raise LclError(f"labels outside alphabets: {(a, b)!r}")
    w = (cells, center)
    if w in problem.windows:
        return True
    return not problem.oriented and mirror(w) in problem.windows


def window_at(instance: Instance, outputs: Sequence, v: int, r: int) -> Window:
    n = instance.n
    if instance.cyclic:
        idx = [(v + d) % n for d in range(-r, r + 1)]
        center = r
    else:
        lo, hi = max(0, v - r), min(n - 1, v + r)
        idx = range(lo, hi + 1)
        center = v - lo
    return tuple((instance.inputs[i], outputs[i]) for i in idx), center


def _require_cycle_length(instance: Instance, r: int):
    if instance.cyclic and instance.n < 2 * r + 1:
        raise LclError("cycle too short for radius")


def verify_labeling(problem: LclProblem, instance: Instance, labeling) -> list:
    outputs = labeling.outputs if isinstance(labeling, Labeling) else tuple(labeling)
    if len(outputs) != instance.n:
        raise LclError("labeling length differs from instance")
    _require_cycle_length(instance, problem.radius)
    return [v for v in range(instance.n)
            if not check_window(problem, *window_at(instance, outputs, v, problem.radius))]


def verify_normalized(problem: NormalizedLcl, instance: Instance, labeling) -> list:
    if instance.topology != PATH:
        raise LclError("normalized problems are checked on directed paths")
    outs = labeling.outputs if isinstance(labeling, Labeling) else tuple(labeling)
    if len(outs) != instance.n:
        raise LclError("labeling length differs from instance")
    bad = []
    for i, (a, b) in enumerate(zip(instance.inputs, outs)):
        if not problem.node_ok(a, b, outs[i - 1] if i > 0 else None):
            bad.append(i)
    return bad


# ---------------------------------------------------------------------------
# exact completion of partially labeled paths

def complete_path(ck: Checker, ins: Sequence[int], fixed: Sequence[int] = None,
                  check: Sequence[bool] = None):
    """Lexicographically least completion of a partially labeled path, or None.

    `fixed[j]` is an output index or -1; node j must be locally consistent
    iff `check[j]`, with windows truncated at the path ends.
    """
    L = len(ins)
    r, m = ck.r, 2 * ck.r
    if L == 0:
        return []
    fixed = fixed if fixed is not None else [-1] * L
    check = check if check is not None else [True] * L
    allowed, nout = ck.allowed, ck.nout
    choices = [range(nout) if fixed[j] < 0 else (fixed[j],) for j in range(L)]

    def step_ok(state, j, o):
        c = j - r
        if c < 0 or not check[c]:
            return True
        lo = max(0, c - r)
        outs = state[len(state) - (j - lo):] + (o,)
        codes = tuple(ins[lo + t] * nout + outs[t] for t in range(j - lo + 1))
        return (codes, c - lo) in allowed

    def final_ok(state):
        for c in range(max(0, L - r), L):
            if not check[c]:
                continue
            lo = max(0, c - r)
            outs = state[len(state) - (L - lo):]
            codes = tuple(ins[lo + t] * nout + outs[t] for t in range(L - lo))
            if (codes, c - lo) not in allowed:
                return False
        return True

    def nxt(state, o):
        return (state + (o,))[-m:] if m else ()

    reach = []
    layer = {()}
    for j in range(L):
        new = set()
        for s in layer:
            for o in choices[j]:
                if step_ok(s, j, o):
                    new.add(nxt(s, o))
        if not new:
            return None
        reach.append(new)
        layer = new
    good = [None] * L
    good[L - 1] = {s for s in reach[L - 1] if final_ok(s)}
    if not good[L - 1]:
        return None
    for j in range(L - 1, 0, -1):
        g = good[j]
        good[j - 1] = {s for s in reach[j - 1]
                       if any(step_ok(s, j, o) and nxt(s, o) in g for o in choices[j])}
    out, s = [], ()
    for j in range(L):
        for o in choices[j]:
            if step_ok(s, j, o) and nxt(s, o) in good[j]:
                out.append(o)
                s = nxt(s, o)
                break
        else:  # pragma: no cover - good sets guarantee progress
            raise AssertionError("completion lost")
    return out


def complete_cycle(ck: Checker, ins: Sequence[int], fixed: Sequence[int] = None,
                   check: Sequence[bool] = None):
    """Cyclic version of complete_path; requires len(ins) >= 2r+1."""
    n, r = len(ins), ck.r
    if n < 2 * r + 1:
        raise LclError("cycle too short for radius")
    fixed = list(fixed) if fixed is not None else [-1] * n
    check = list(check) if check is not None else [True] * n
    m = 2 * r
    # unroll: positions n..n+2r-1 repeat 0..2r-1, node c<r is checked at position n+c
    uins = list(ins) + list(ins[:m])
    ucheck = [False] * r + check[r:] + check[:r] + [False] * r
    heads = itertools.product(*[range(ck.nout) if fixed[j] < 0 else (fixed[j],) for j in range(m)])
    for head in heads:
        ufixed = list(head) + fixed[m:] + list(head)
        res = complete_path(ck, uins, ufixed, ucheck)
        if res is not None:
            return res[:n]
    return None


def solve_instance(problem: LclProblem, instance: Instance):
    """Lexicographically least legal labeling (declared output order), or UNSAT."""
    ck = problem.checker
    ins = ck.encode_inputs(instance.inputs)
    if instance.cyclic:
        res = complete_cycle(ck, ins)
    else:
        res = complete_path(ck, ins)
    if res is None:
        return UNSAT
    return Labeling(tuple(problem.sigma_out[o] for o in res))


@dataclass
class SolvabilityReport:
    max_n: int
    unsolvable: list = field(default_factory=list)  # (topology, n, inputs)

    def to_json(self):
        return {"max_n": self.max_n,
                "unsolvable": [{"topology": t, "n": n, "inputs": list(w)} for t, n, w in self.unsolvable]}


def check_solvable_up_to(problem: LclProblem, max_n: int, topologies=(PATH, CYCLE)) -> SolvabilityReport:
    """Exhaustive over input strings; IDs play no role in existence."""
    rep = SolvabilityReport(max_n)
    for topo in topologies:
        for n in range(1, max_n + 1):
            if topo == CYCLE and n < 2 * problem.radius + 1:
                continue
            for w in itertools.product(problem.sigma_in, repeat=n):
                inst = Instance(topo, w, tuple(range(1, n + 1)))
                if solve_instance(problem, inst) is UNSAT:
                    rep.unsolvable.append((topo, n, w))
    return rep
