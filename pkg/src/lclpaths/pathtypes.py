"""Path types, the type automaton, pumping and same-type segment replacement.

A path of length at most 4r is its own type. Longer paths are summarized by
their first and last 2r input labels together with the extendibility table:
for every output labeling of the first 2r and last 2r nodes, whether it can
be completed so that every node at distance >= r from both ends is locally
consistent. Two paths with equal signatures can be exchanged inside any
labeled graph without affecting solvability.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .core import Checker, Instance, Labeling, LclError, LclProblem, complete_path, verify_labeling


@dataclass(frozen=True)
class Tripartition:
    d1: frozenset
    d2: frozenset
    d3: frozenset


def tripartition(k: int, r: int) -> Tripartition:
    """1-based index sets of the boundary, near-boundary and interior nodes."""
    if k < 1:
        raise LclError("path length must be positive")
    d1 = {i for i in range(1, k + 1) if i <= r or i >= k - r + 1}
    d2 = {i for i in range(1, k + 1)
          if (r + 1 <= i <= 2 * r or k - 2 * r + 1 <= i <= k - r) and i not in d1}
    d3 = set(range(1, k + 1)) - d1 - d2
    return Tripartition(frozenset(d1), frozenset(d2), frozenset(d3))


def _boundary_positions(k, r):
    t = tripartition(k, r)
    return sorted(i - 1 for i in t.d1 | t.d2), sorted(i - 1 for i in t.d2 | t.d3)


def extendible(problem: LclProblem, path_inputs: Sequence, boundary_outputs) -> bool:
    """Can the D1 u D2 labeling be completed consistently on D2 u D3?

    `boundary_outputs` is a sequence aligned with the sorted positions of
    D1 u D2, or a dict from 0-based position to output label.
    """
    ck = problem.checker
    k = len(path_inputs)
    fixed_pos, checked = _boundary_positions(k, ck.r)
    if isinstance(boundary_outputs, dict):
        if sorted(boundary_outputs) != fixed_pos:
            raise LclError("boundary assignment must cover exactly D1 and D2")
        values = [boundary_outputs[p] for p in fixed_pos]
    else:
        values = list(boundary_outputs)
        if len(values) != len(fixed_pos):
            raise LclError(f"boundary assignment has {len(values)} labels, expected {len(fixed_pos)}")
    fixed = [-1] * k
    for p, o in zip(fixed_pos, ck.encode_outputs(values)):
        fixed[p] = o
    check = [False] * k
    for c in checked:
        check[c] = True
    return complete_path(ck, ck.encode_inputs(path_inputs), fixed, check) is not None


# ---------------------------------------------------------------------------
# signatures

@dataclass(frozen=True)
class TypeSignature:
    kind: str  # "empty", "short" or "long"
    word: tuple = ()  # short: the input indices
    head: tuple = ()  # long: first 2r input indices
    tail: tuple = ()  # long: last 2r input indices
    table: int = 0  # long: bit (left * nout^2r + right) set iff extendible

    def summary(self, problem: LclProblem) -> dict:
        lab = problem.sigma_in
        if self.kind != "long":
            return {"kind": self.kind, "word": [lab[i] for i in self.word]}
        return {"kind": "long", "head": [lab[i] for i in self.head],
                "tail": [lab[i] for i in self.tail], "table": format(self.table, "x")}


EMPTY = TypeSignature("empty")


class _Engine:
    """Per-problem helpers over integer codes."""

    def __init__(self, problem: LclProblem):
        self.problem = problem
        self.ck = ck = problem.checker
        self.r, self.m = ck.r, 2 * ck.r
        self.nout = ck.nout
        self.width = ck.nout ** self.m
        self.states = list(itertools.product(range(ck.nout), repeat=self.m))
        self.code = {s: i for i, s in enumerate(self.states)}
        self._succ = {}

    def successors(self, state_code: int, ins: tuple):
        """Outputs o such that the node r back is consistent; ins covers 2r+1 nodes."""
        key = (state_code, ins)
        res = self._succ.get(key)
        if res is None:
            s = self.states[state_code]
            res = []
            for o in range(self.nout):
                outs = s + (o,)
                if self.ck.ok(ins, outs, self.r):
                    res.append(self.code[(s + (o,))[1:]] if self.m else 0)
            self._succ[key] = res = tuple(res)
        return res

    def long_type(self, w: tuple) -> TypeSignature:
        k, m = len(w), self.m
        table = 0
        for left in range(self.width):
            layer = {left}
            for j in range(m, k):
                ins = w[j - m:j + 1]
                nxt = set()
                for s in layer:
                    nxt.update(self.successors(s, ins))
                layer = nxt
                if not layer:
                    break
            for right in layer:
                table |= 1 << (left * self.width + right)
        return TypeSignature("long", head=w[:m], tail=w[k - m:], table=table)

    def type_of(self, w: tuple) -> TypeSignature:
        if not w:
            return EMPTY
        if len(w) <= 2 * self.m:
            return TypeSignature("short", word=tuple(w))
        return self.long_type(tuple(w))

    def extend(self, t: TypeSignature, a: int) -> TypeSignature:
        """Type of (any path of type t) followed by one node with input a."""
        if t.kind != "long":
            return self.type_of(t.word + (a,))
        ins = t.tail + (a,)
        table, W = 0, self.width
        bits = t.table
        for left in range(W):
            row = (bits >> (left * W)) & ((1 << W) - 1)
            if not row:
                continue
            seen = set()
            for right in range(W):
                if row >> right & 1:
                    seen.update(self.successors(right, ins))
            for nr in seen:
                table |= 1 << (left * W + nr)
        return TypeSignature("long", head=t.head, tail=ins[1:], table=table)


def type_of(problem: LclProblem, path_inputs: Sequence) -> TypeSignature:
    eng = _Engine(problem)
    return eng.type_of(tuple(problem.checker.encode_inputs(path_inputs)))


# ---------------------------------------------------------------------------
# automaton

@dataclass
class TypeAutomaton:
    problem: LclProblem
    states: list  # index 0 is the empty path
    reps: list  # shortest representative (input indices) per state
    delta: dict  # (state, input index) -> state
    reversal_map: dict = field(default_factory=dict)
    _per_length: dict = field(default_factory=dict, repr=False)

    @property
    def ell_pump(self) -> int:
        """Number of types, the empty path included."""
        return len(self.states)

    @property
    def nin(self) -> int:
        return len(self.problem.sigma_in)

    def run(self, w: Sequence[int], start: int = 0) -> int:
        s = start
        for a in w:
            s = self.delta[(s, a)]
        return s

    def run_labels(self, w: Sequence) -> int:
        return self.run(self.problem.checker.encode_inputs(w))

    def signature(self, state: int) -> TypeSignature:
        return self.states[state]

    def concat(self, s1: int, s2: int) -> int:
        return self.run(self.reps[s2], s1)

    def reverse(self, state: int) -> int:
        return self.reversal_map[state]

    def per_length_reachable(self, length: int) -> frozenset:
        if length not in self._per_length:
            layer = {0}
            for _ in range(length):
                layer = {self.delta[(s, a)] for s in layer for a in range(self.nin)}
            self._per_length[length] = frozenset(layer)
        return self._per_length[length]

    def summaries(self) -> list:
        return [dict(self.states[i].summary(self.problem), id=i,
                     representative=[self.problem.sigma_in[a] for a in self.reps[i]])
                for i in range(len(self.states))]


def build_type_automaton(problem: LclProblem, verify: bool = False) -> TypeAutomaton:
    """Breadth-first closure from the empty path; `verify` recomputes every transition directly."""
    eng = _Engine(problem)
    nin = len(problem.sigma_in)
    states, reps, index, delta = [EMPTY], [()], {EMPTY: 0}, {}
    queue = [0]
    while queue:
        s = queue.pop(0)
        for a in range(nin):
            t = eng.extend(states[s], a)
            if verify:
                direct = eng.type_of(reps[s] + (a,))
                if direct != t:
                    raise AssertionError(f"transition mismatch at state {s} input {a}")
            if t not in index:
                index[t] = len(states)
                states.append(t)
                reps.append(reps[s] + (a,))
                queue.append(index[t])
            delta[(s, a)] = index[t]
    aut = TypeAutomaton(problem, states, reps, delta)
    for i, w in enumerate(reps):
        t = eng.type_of(tuple(reversed(w)))
        aut.reversal_map[i] = index[t]
    aut._engine = eng
    return aut


def type_bound(problem: LclProblem) -> int:
    """Worst-case number of types: nin^4r * 2^(nout^4r)."""
    r = problem.radius
    return len(problem.sigma_in) ** (4 * r) * 2 ** (len(problem.sigma_out) ** (4 * r))


# ---------------------------------------------------------------------------
# pumping

def _as_codes(aut: TypeAutomaton, w):
    return tuple(aut.problem.checker.encode_inputs(w))


def pump_decomposition(aut: TypeAutomaton, w: Sequence) -> tuple:
    """(x, y, z) with |xy| <= ell_pump, |y| >= 1, Type(x y^i z) constant in i."""
    codes = _as_codes(aut, w)
    if len(codes) < aut.ell_pump:
        raise LclError("below pumping length")
    seen = {0: 0}
    s = 0
    for j, a in enumerate(codes, start=1):
        s = aut.delta[(s, a)]
        if s in seen:
            i = seen[s]
            lab = aut.problem.sigma_in
            dec = lambda c: tuple(lab[x] for x in c)
            return dec(codes[:i]), dec(codes[i:j]), dec(codes[j:])
        seen[s] = j
    raise AssertionError("no repeated state within the pumping length")


def pump_to_length(aut: TypeAutomaton, w: Sequence, target_length: int) -> tuple:
    x, y, z = pump_decomposition(aut, w)
    w = tuple(w)
    if target_length <= len(w):
        return w
    extra = -(-(target_length - len(w)) // len(y))
    return x + y * (1 + extra) + z


def periodic_pump_params(aut: TypeAutomaton, w: Sequence) -> tuple:
    """(a, b) with Type(w^(a*i+b)) fixed for all i >= 0 and a + b <= ell_pump."""
    codes = _as_codes(aut, w)
    if not codes:
        raise LclError("word must be nonempty")
    seen, s, i = {}, 0, 0
    while True:
        s = aut.run(codes, s)
        i += 1
        if s in seen:
            b = seen[s]
            return i - b, b
        seen[s] = i


# ---------------------------------------------------------------------------
# replacement

@dataclass(frozen=True)
class Replaced:
    instance: Instance
    labeling: Labeling
    segment: range  # positions of the new segment in the new instance


def relabel_after_replace(problem: LclProblem, instance: Instance, labeling, segment: range,
                          replacement_inputs: Sequence) -> Replaced:
    """Swap the inputs on `segment` for a same-type string and relabel it.

    Outputs outside the segment are kept. The first and last 2r nodes of the
    new segment copy the old boundary outputs; the interior is refilled.
    """
    ck = problem.checker
    n, r = instance.n, ck.r
    outs = labeling.outputs if isinstance(labeling, Labeling) else tuple(labeling)
    seg = range(segment.start, segment.stop)
    if len(seg) == 0 or seg.start < 0 or seg.stop > n or (instance.cyclic and len(seg) >= n):
        raise LclError("segment must be a nonempty proper subpath")
    old = tuple(instance.inputs[i] for i in seg)
    new = tuple(replacement_inputs)
    if type_of(problem, old) != type_of(problem, new):
        raise LclError("replacement has a different type")
    bad = set(verify_labeling(problem, instance, outs))
    if bad & set(seg):
        raise LclError("host labeling is inconsistent inside the segment")
    k_old, k_new = len(old), len(new)
    seg_outs = list(outs[seg.start:seg.stop])
    if k_new == k_old and new == old:
        new_seg = seg_outs
    else:
        m = 2 * r
        fixed_new, checked = _boundary_positions(k_new, r)
        fixed = [-1] * k_new
        old_codes = ck.encode_outputs(seg_outs)
        for p in fixed_new:
            fixed[p] = old_codes[p] if p < m else old_codes[k_old - (k_new - p)]
        check = [False] * k_new
        for c in checked:
            check[c] = True
        fill = complete_path(ck, ck.encode_inputs(new), fixed, check)
        if fill is None:  # pragma: no cover - equal types guarantee a fill
            raise AssertionError("same-type replacement is not extendible")
        new_seg = [problem.sigma_out[o] for o in fill]
    inputs = instance.inputs[:seg.start] + new + instance.inputs[seg.stop:]
    outputs = outs[:seg.start] + tuple(new_seg) + outs[seg.stop:]
    kept = instance.ids[:seg.start] + instance.ids[seg.stop:]
    old_ids = instance.ids[seg.start:seg.stop]
    fresh = iter(range(max(instance.ids) + 1, max(instance.ids) + 1 + k_new))
    seg_ids = tuple(old_ids[i] if i < k_old else next(fresh) for i in range(k_new))
    ids = kept[:seg.start] + seg_ids + kept[seg.start:]
    return Replaced(Instance(instance.topology, inputs, ids), Labeling(outputs),
                    range(seg.start, seg.start + k_new))
