"""Linear bounded automata and the path LCL that encodes their executions.

Labels are strings on the outside ("Tape(L,q0,T)", "Error4(q0,1,3)") and
tuples inside. The compiled verifier looks only at a node and its
predecessor; the canonical solver is a view rule of radius 2+(B+1)T.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

from .core import PATH, Instance, LclError
from .local import ViewAlgorithm

MOVES = {"L": -1, "S": 0, "R": 1}
ENDPOINTS = ("L", "R")
_NAME = re.compile(r"^[A-Za-z0-9_]+$")


@dataclass(frozen=True)
class LbaMachine:
    states: tuple
    q0: str
    qf: str
    gamma: tuple
    delta: dict  # (state, read) -> (next, write, move)
    B: int
    name: str = "lba"

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "gamma", tuple(self.gamma))
        object.__setattr__(self, "delta", {tuple(k): tuple(v) for k, v in dict(self.delta).items()})
        if self.B < 2:
            raise LclError("tape bound B must be at least 2")
        for s in self.states + self.gamma:
            if not _NAME.match(s):
                raise LclError(f"label {s!r} must be alphanumeric")
        if len(set(self.states)) != len(self.states) or len(set(self.gamma)) != len(self.gamma):
            raise LclError("duplicate states or symbols")
        for q in (self.q0, self.qf):
            if q not in self.states:
                raise LclError(f"unknown state {q!r}")
        missing = {"0", "1", "L", "R"} - set(self.gamma)
        if missing:
            raise LclError(f"tape alphabet lacks {sorted(missing)}")
        for (s, c), (t, w, mv) in self.delta.items():
            if s == self.qf:
                raise LclError("the final state has no transitions")
            if s not in self.states or t not in self.states:
                raise LclError(f"unknown state in transition {(s, c)}")
            if c not in self.gamma or w not in self.gamma:
                raise LclError(f"unknown symbol in transition {(s, c)}")
            if mv not in MOVES:
                raise LclError(f"move must be one of L, S, R, got {mv!r}")
        for s in self.states:
            if s == self.qf:
                continue
            for c in self.gamma:
                if (s, c) not in self.delta:
                    raise LclError(f"transition for ({s}, {c}) is missing")

    def with_bound(self, B: int) -> "LbaMachine":
        return LbaMachine(self.states, self.q0, self.qf, self.gamma, self.delta, B, self.name)


def lba_to_json(m: LbaMachine) -> dict:
    return {"name": m.name, "states": list(m.states), "q0": m.q0, "qf": m.qf, "gamma": list(m.gamma),
            "delta": [{"state": s, "read": c, "next": t, "write": w, "move": mv}
                      for (s, c), (t, w, mv) in sorted(m.delta.items())],
            "B": m.B}


def lba_from_json(doc) -> LbaMachine:
    from .codec import CodecError, _load, _validate
    doc = _load(doc)
    _validate(doc, "lba")
    delta = {}
    for k, d in enumerate(doc["delta"]):
        key = (d["state"], d["read"])
        if key in delta:
            raise CodecError(f"duplicate transition {key}", ("delta", k))
        delta[key] = (d["next"], d["write"], d["move"])
    try:
        return LbaMachine(doc["states"], doc["q0"], doc["qf"], doc["gamma"], delta, doc["B"],
                          doc.get("name", "lba"))
    except LclError as e:
        raise CodecError(str(e)) from None


# ---------------------------------------------------------------- execution

@dataclass(frozen=True)
class Step:
    state: str
    tape: tuple  # cells 1..B stored at indices 0..B-1
    head: int    # 1-based


@dataclass
class Execution:
    status: str  # "HALTED" or "LOOPING"
    steps: list
    reason: str = ""

    @property
    def T(self) -> int:
        return len(self.steps)


def initial_step(m: LbaMachine) -> Step:
    return Step(m.q0, ("L",) + ("0",) * (m.B - 2) + ("R",), 1)


def lba_run(m: LbaMachine, max_steps: int = 1_000_000) -> Execution:
    cur = initial_step(m)
    steps, seen = [cur], {cur}
    while cur.state != m.qf:
        if len(steps) >= max_steps:
            return Execution("LOOPING", steps, f"budget of {max_steps} steps exceeded")
        nxt, write, move = m.delta[(cur.state, cur.tape[cur.head - 1])]
        head = cur.head + MOVES[move]
        if write in ENDPOINTS and write != cur.tape[cur.head - 1]:
            raise LclError("machine not boundary-safe: endpoint symbol written inside the tape")
        if cur.tape[cur.head - 1] in ENDPOINTS and write != cur.tape[cur.head - 1]:
            raise LclError("machine not boundary-safe: endpoint symbol overwritten")
        if not 1 <= head <= m.B:
            raise LclError("machine not boundary-safe: head moved past the tape end")
        tape = cur.tape[:cur.head - 1] + (write,) + cur.tape[cur.head:]
        cur = Step(nxt, tape, head)
        if cur in seen:
            steps.append(cur)
            return Execution("LOOPING", steps, "configuration repeated")
        seen.add(cur)
        steps.append(cur)
    return Execution("HALTED", steps)


def halting_steps(m: LbaMachine) -> list:
    ex = lba_run(m)
    if ex.status != "HALTED":
        raise LclError(f"machine loops ({ex.reason}); there is no finite good input")
    return ex.steps


# ---------------------------------------------------------------- labels

START_A, START_B = ("Start", "a"), ("Start", "b")
SEP, EMPTY, ERROR = ("Separator",), ("Empty",), ("Error",)
ERROR3 = ("Error3",)


def fmt(label: tuple) -> str:
    head, *args = label
    if head in ("Separator", "Empty", "Error", "Error3"):
        return head
    if head == "Tape":
        c, s, h = args
        return f"Tape({c},{s},{'T' if h else 'F'})"
    return f"{head}({','.join(str(a) for a in args)})"


_LABEL = re.compile(r"^([A-Za-z0-9]+)(?:\(([^()]*)\))?$")


@lru_cache(maxsize=None)
def parse(text: str) -> tuple:
    mt = _LABEL.match(text)
    if not mt:
        raise LclError(f"cannot parse label {text!r}")
    head, args = mt.group(1), mt.group(2)
    parts = [] if args is None else args.split(",")
    try:
        if head in ("Separator", "Empty", "Error", "Error3") and args is None:
            return (head,)
        if head == "Start" and len(parts) == 1 and parts[0] in ("a", "b"):
            return (head, parts[0])
        if head == "Tape" and len(parts) == 3 and parts[2] in ("T", "F"):
            return (head, parts[0], parts[1], parts[2] == "T")
        if head in ("Error0", "Error1", "Error5") and len(parts) == 1:
            return (head, int(parts[0]))
        if head == "Error2" and len(parts) == 2:
            return (head, parts[0], int(parts[1]))
        if head == "Error4" and len(parts) == 3:
            return (head, parts[0], parts[1], int(parts[2]))
    except ValueError:
        pass
    raise LclError(f"cannot parse label {text!r}")


def _tape(lab):
    return lab[0] == "Tape"


def _etype(lab):
    """Index x of a specific error label Error^x, else None."""
    h = lab[0]
    if len(h) == 6 and h.startswith("Error") and h[5].isdigit():
        return int(h[5])
    return None


# ---------------------------------------------------------------- good input

def encode_good_input(m: LbaMachine, B: int = None, phi: str = "a", n: int = None) -> list:
    """Label strings of the good input; padded with Empty up to n nodes."""
    if phi not in ("a", "b"):
        raise LclError("phi must be 'a' or 'b'")
    if B is not None and B != m.B:
        m = m.with_bound(B)
    out = [("Start", phi)]
    for st in halting_steps(m):
        out.append(SEP)
        for j, c in enumerate(st.tape, start=1):
            out.append(("Tape", c, st.state, j == st.head))
    if n is not None:
        if n < len(out):
            raise LclError(f"good input needs {len(out)} nodes, got n={n}")
        out += [EMPTY] * (n - len(out))
    return [fmt(x) for x in out]


def decode_good_input(m: LbaMachine, labels) -> list:
    """Inverse of encode_good_input on the encoded prefix: list of steps."""
    labs = [parse(x) if isinstance(x, str) else x for x in labels]
    B = m.B
    if not labs or labs[0][0] != "Start":
        raise LclError("first node is not Start")
    steps, i = [], 1
    while i < len(labs) and labs[i] == SEP:
        cells = labs[i + 1:i + 1 + B]
        if len(cells) != B or not all(_tape(c) for c in cells):
            raise LclError(f"malformed step at node {i}")
        states = {c[2] for c in cells}
        heads = [j for j, c in enumerate(cells, start=1) if c[3]]
        if len(states) != 1 or len(heads) != 1:
            raise LclError(f"malformed step at node {i}")
        steps.append(Step(states.pop(), tuple(c[1] for c in cells), heads[0]))
        i += B + 1
    if any(x != EMPTY for x in labs[i:]):
        raise LclError(f"trailing non-Empty labels from node {i}")
    return steps


# ---------------------------------------------------------------- compiled problem

@dataclass
class PiProblem:
    """The LCL of an LBA with tape bound B, checked on (predecessor, node) pairs.

    Besides the listed constraints the verifier enforces closure clauses
    (F1..F7) that pin the start and the end of every error chain; see
    `node_ok` for the exact rules.
    """
    machine: LbaMachine
    B: int
    closure: bool = True
    sigma_in: tuple = field(init=False)
    sigma_out: tuple = field(init=False)

    def __post_init__(self):
        m, B = self.machine, self.B
        ins = [START_A, START_B, SEP, EMPTY]
        ins += [("Tape", c, s, h) for c in m.gamma for s in m.states for h in (True, False)]
        outs = [START_A, START_B, EMPTY, ERROR]
        outs += [("Error0", j) for j in range(B + 2)]
        outs += [("Error1", j) for j in range(B + 1)]
        outs += [("Error2", x, j) for x in m.gamma for j in range(B + 2)]
        outs += [ERROR3]
        outs += [("Error4", s, c, j) for s in m.states for c in m.gamma for j in range(B + 3)]
        outs += [("Error5", 0), ("Error5", 1)]
        self._ins, self._outs = ins, outs
        self.sigma_in = tuple(fmt(x) for x in ins)
        self.sigma_out = tuple(fmt(x) for x in outs)
        self._in_set, self._out_set = set(ins), set(outs)

    @property
    def name(self):
        return f"pi[{self.machine.name},B={self.B}]"

    # Error4 helpers; a chain from a final-state head ends at the next Separator
    def final_distance(self, cs, tc):
        return self.B + 1 + MOVES[self.machine.delta[(cs, tc)][2]]

    def _is_e4_final(self, inp, out):
        if out[0] != "Error4":
            return False
        if out[1] == self.machine.qf:
            return inp == SEP if self.closure else out[3] >= self.B
        return out[3] == self.final_distance(out[1], out[2])

    def node_ok(self, pred, cur) -> bool:
        """pred is (input, output) of the predecessor or None; labels as tuples.

        With closure off only the listed constraints are checked; a final-state
        Error4 chain then counts as final at distances B..B+2.
        """
        m, B, cl = self.machine, self.B, self.closure
        inp, out = cur
        if inp not in self._in_set or out not in self._out_set:
            return False
        pin, pout = pred if pred is not None else (None, None)
        head = out[0]
        x = _etype(out)
        # 2
        if out == EMPTY and inp != EMPTY:
            return False
        # 3
        if pred is None and head == "Start" and inp != out:
            return False
        # 4
        if pout is not None and pout[0] == "Start" and head == "Start" and pout != out:
            return False
        if x is not None:
            # F4: specific errors only on encoding nodes
            if cl and inp == EMPTY:
                return False
            # 12
            y = _etype(pout) if pout is not None else None
            if y is not None and y != x:
                return False
        elif cl and pout is not None and _etype(pout) is not None and out != ERROR:
            # F5: a chain ends only where an Error would be witnessed
            return out == EMPTY and self._error_witness(pred, inp)
        if head == "Error0":
            j = out[1]
            if j == 0:
                return pred is None
            return pout == ("Error0", j - 1)
        if head == "Error1":
            j = out[1]
            if j == 0:
                return inp == SEP
            return inp != SEP and pout == ("Error1", j - 1)
        if head == "Error2":
            xx, j = out[1], out[2]
            if j == 0:
                if not _tape(inp):
                    return False
                if not inp[3]:
                    return inp[1] == xx
                # F7: a head cell may start a chain carrying the symbol it writes
                return cl and inp[2] != m.qf and m.delta[(inp[2], inp[1])][1] == xx
            if j == B + 1:
                # F1: the mismatch end belongs to a chain
                return _tape(inp) and inp[1] != xx and (not cl or pout == ("Error2", xx, B))
            return pout == ("Error2", xx, j - 1)
        if head == "Error3":
            return _tape(inp) and pin is not None and _tape(pin) and inp[2] != pin[2]
        if head == "Error4":
            cs, tc, j = out[1], out[2], out[3]
            if j == 0:
                return _tape(inp) and inp[1] == tc and inp[2] == cs and inp[3]
            if cs == m.qf:
                if cl:
                    return pout == ("Error4", cs, tc, j - 1) and (_tape(inp) or inp == SEP)
                return j >= B or pout == ("Error4", cs, tc, j - 1)
            if j == self.final_distance(cs, tc):
                if cl and pout != ("Error4", cs, tc, j - 1):  # F2
                    return False
                ts = m.delta[(cs, tc)][0]
                return _tape(inp) and (inp[2] != ts or not inp[3])
            return pout == ("Error4", cs, tc, j - 1)
        if head == "Error5":
            if pout is not None and pout[0] == "Error5":
                return _tape(inp) or not cl  # F3: the chain stays inside one tape
            return _tape(inp) and inp[3] and out[1] == 0
        if out == ERROR:
            return self._error_witness(pred, inp)
        return True

    def _error_witness(self, pred, inp) -> bool:
        m, B = self.machine, self.B
        if pred is None:
            return inp[0] != "Start"
        pin, pout = pred
        if inp[0] == "Start":
            return True
        if pin == EMPTY or pout == EMPTY or pout == ERROR:
            return True
        h = pout[0]
        if h == "Error0" and pout[1] > 0:
            j = pout[1]
            if j == 1:
                return pin != SEP
            if not _tape(pin):
                return True
            c, s, hd = pin[1], pin[2], pin[3]
            if j == 2:
                return c != "L" or s != m.q0 or not hd
            if j <= B:
                return c != "0" or s != m.q0 or hd
            if j == B + 1:
                return c != "R" or s != m.q0 or hd
            return False
        if h == "Error1":
            if inp == SEP and pout[1] != B:
                return True
            if inp != SEP and pout[1] == B:
                # F6: the last step of a halted run may be followed by Empty
                return not (self.closure and inp == EMPTY and _tape(pin) and pin[2] == m.qf)
            return False
        if h == "Error2":
            return pout[2] == B + 1
        if h == "Error3":
            return True
        if h == "Error4":
            return self._is_e4_final(pin, pout)
        if h == "Error5":
            return _tape(pin) and pin[3] and pout[1] == 1
        return False

    def violations(self, inputs, outputs) -> list:
        ins = [parse(x) for x in inputs]
        outs = [parse(x) for x in outputs]
        bad = []
        for i in range(len(ins)):
            pred = (ins[i - 1], outs[i - 1]) if i > 0 else None
            if not self.node_ok(pred, (ins[i], outs[i])):
                bad.append(i)
        return bad

    def verify(self, instance: Instance, labeling) -> list:
        if instance.cyclic:
            raise LclError("the LBA problem is defined on directed paths")
        outs = labeling.outputs if hasattr(labeling, "outputs") else labeling
        return self.violations(instance.inputs, outs)

    def summary(self) -> dict:
        return {"name": self.name, "B": self.B, "machine": lba_to_json(self.machine),
                "checks": "predecessor", "sigma_in": list(self.sigma_in),
                "sigma_out": list(self.sigma_out)}


def compile_pi(m: LbaMachine, B: int = None, closure: bool = True) -> PiProblem:
    return PiProblem(m if B is None or B == m.B else m.with_bound(B), m.B if B is None else B, closure)


# ---------------------------------------------------------------- canonical solver

def solver_radius(m: LbaMachine) -> int:
    return 2 + (m.B + 1) * len(halting_steps(m))


@dataclass
class Proof:
    case: str
    start: int           # first node that leaves Start(phi)
    labels: dict         # node -> specific error label
    end: int             # last chain node; Error from end+1 on


def _first_proof(pi: PiProblem, good: list, ins: list):
    """Locate the first deviation from the good input and a local proof of it."""
    m, B = pi.machine, pi.B
    E = len(good)
    n = len(ins)
    exp = lambda p: good[p] if p < E else EMPTY  # noqa: E731
    j = next((p for p in range(n) if ins[p] != exp(p)), None)
    if j is None:
        return None
    cur = ins[j]
    if cur == EMPTY:
        return Proof("truncated", j, {}, j)
    if j > E:
        return Proof("after-empty", j, {}, j - 1)
    if cur[0] == "Start":
        return Proof("start", j, {}, j - 1)
    if j <= B + 1:
        return Proof("init", 0, {i: ("Error0", i) for i in range(j + 1)}, j)
    back = ins[j - B - 1]
    if back == SEP and cur != SEP:
        s0 = j - B - 1
        return Proof("too-long", s0, {i: ("Error1", i - s0) for i in range(s0, j)}, j - 1)
    if cur == SEP:
        k = next((k for k in range(j - 1, j - B - 1, -1) if ins[k] == SEP), None)
        if k is not None:
            return Proof("too-short", k, {i: ("Error1", i - k) for i in range(k, j)}, j - 1)
    if _tape(back) and _tape(cur):
        x = None
        if not back[3]:
            x = back[1]
        elif back[2] != m.qf:
            x = m.delta[(back[2], back[1])][1]
        if x is not None and cur[1] != x:
            s0 = j - B - 1
            return Proof("copy", s0, {i: ("Error2", x, i - s0) for i in range(s0, j + 1)}, j)
    if _tape(cur) and _tape(ins[j - 1]) and cur[2] != ins[j - 1][2]:
        return Proof("state", j, {j: ERROR3}, j)
    if _tape(cur) and ins[j - 1] == SEP:
        for k in range(j + 1, min(n, j + B)):
            if not _tape(ins[k]):
                break
            if ins[k][2] != cur[2]:
                return Proof("state", k, {k: ERROR3}, k)
    # transition: the head of the previous step against its successor
    step = (j - 1) // (B + 1)  # 0-based index of the step holding j
    if step >= 1:
        base = (step - 1) * (B + 1) + 1
        k = next(base + t for t in range(1, B + 1) if good[base + t][3])
        s, c = good[k][2], good[k][1]
        if s == m.qf:
            f = next((p for p in range(k + 1, n) if not _tape(ins[p])), n)
        else:
            f = k + pi.final_distance(s, c)
        if j <= f < n and all(ins[p] != EMPTY for p in range(k, f + 1)):
            lab = ("Error4", s, c, f - k)
            if pi.node_ok((ins[f - 1], ("Error4", s, c, f - k - 1)), (ins[f], lab)):
                return Proof("transition", k, {i: ("Error4", s, c, i - k) for i in range(k, f + 1)}, f)
    if _tape(cur) and cur[3]:
        lo = j
        while lo - 1 > j - B and _tape(ins[lo - 1]):
            lo -= 1
        hi = j
        while hi + 1 < min(n, j + B) and _tape(ins[hi + 1]):
            hi += 1
        others = [k for k in range(lo, hi + 1) if k != j and ins[k][3]]
        if others:
            k = min(others, key=lambda k: (abs(k - j), k))
            a, b = min(j, k), max(j, k)
            labels = {a: ("Error5", 0)}
            labels.update({i: ("Error5", 1) for i in range(a + 1, b + 1)})
            return Proof("double-head", a, labels, b)
    # nothing fits at j itself: look a little further for a structural defect
    for q in range(j + 1, min(n, j + 2 * B + 4)):
        if ins[q] == EMPTY:
            return Proof("truncated", q, {}, q)
        pr = _structural_proof(pi, ins, q)
        if pr is not None:
            return pr
    return Proof("unproved", n, {}, n - 1)


def _structural_proof(pi: PiProblem, ins: list, q: int):
    """A defect visible at q without reference to the run; checked by the verifier."""
    m, B = pi.machine, pi.B
    cur = ins[q]
    cands = []
    if q >= B + 1:
        s0 = q - B - 1
        back = ins[s0]
        if back == SEP and cur not in (SEP, EMPTY):
            cands.append(Proof("too-long", s0, {i: ("Error1", i - s0) for i in range(s0, q)}, q - 1))
        if _tape(back) and _tape(cur):
            x = back[1] if not back[3] else (None if back[2] == m.qf else m.delta[(back[2], back[1])][1])
            if x is not None and cur[1] != x:
                cands.append(Proof("copy", s0, {i: ("Error2", x, i - s0) for i in range(s0, q + 1)}, q))
    if cur == SEP:
        k = next((k for k in range(q - 1, max(q - B - 1, -1), -1) if ins[k] == SEP), None)
        if k is not None:
            cands.append(Proof("too-short", k, {i: ("Error1", i - k) for i in range(k, q)}, q - 1))
    if _tape(cur) and q > 0 and _tape(ins[q - 1]) and cur[2] != ins[q - 1][2]:
        cands.append(Proof("state", q, {q: ERROR3}, q))
    for pr in cands:
        if _chain_ok(pi, ins, pr):
            return pr
    return None


def _chain_ok(pi: PiProblem, ins: list, pr: Proof) -> bool:
    lo, hi = pr.start, min(len(ins) - 1, pr.end + 1)
    if lo == 0:
        return False
    prev = EMPTY if ins[lo - 1] == EMPTY else START_A
    for i in range(lo, hi + 1):
        out = pr.labels.get(i, ERROR)
        if not pi.node_ok((ins[i - 1], prev), (ins[i], out)):
            return False
        prev = out
    return True


def pi_view_outputs(pi: PiProblem, ins: list, T: int, phi: str, good: list) -> list:
    """Outputs of the radius-T rule for every node of a path starting at p0."""
    n = len(ins)
    full = _first_proof(pi, good, ins)
    horizon = None if full is None else (full.end if full.case == "unproved" else
                                         max(full.end, full.start) + 2 * pi.B + 4)
    out = []
    memo = {}
    for i in range(n):
        if i > T:
            out.append(EMPTY if ins[i] == EMPTY else ERROR)
            continue
        cut = min(n, i + T + 1)
        if horizon is not None and cut > horizon:
            pr = full
        else:
            if cut not in memo:
                memo[cut] = _first_proof(pi, good, ins[:cut])
            pr = memo[cut]
        out.append(_output_at(pr, i, ins[i], phi))
    return out


def _output_at(pr, i, inp, phi):
    if pr is None or pr.case == "unproved" or i < pr.start:
        return EMPTY if inp == EMPTY else ("Start", phi)
    if i in pr.labels:
        return pr.labels[i]
    return EMPTY if inp == EMPTY else ERROR


def canonical_pi_solver(m: LbaMachine, B: int = None) -> ViewAlgorithm:
    """View rule of radius 2+(B+1)T for a halting machine."""
    pi = compile_pi(m, B)
    m = pi.machine
    T_run = len(halting_steps(m))
    T = 2 + (pi.B + 1) * T_run
    goods = {phi: [parse(x) for x in encode_good_input(m, phi=phi)] for phi in "ab"}

    def batch(instance: Instance, truncated=(False, False)):
        if instance.cyclic:
            raise LclError("the LBA problem is defined on directed paths")
        ins = [parse(x) for x in instance.inputs]
        if truncated[0]:
            # p0 is outside the view: only the center's rule matters
            return [fmt(EMPTY if x == EMPTY else ERROR) for x in ins]
        if not ins or ins[0][0] != "Start":
            return [fmt(EMPTY if x == EMPTY else ERROR) for x in ins]
        phi = ins[0][1]
        return [fmt(o) for o in pi_view_outputs(pi, ins, T, phi, goods[phi])]

    return ViewAlgorithm(f"canonical[{m.name},B={pi.B}]", lambda n: T, batch, path_views=True,
                         params={"T": T_run, "B": pi.B})


def global_pi_solution(pi: PiProblem, inputs) -> list:
    """Labeling used when the machine loops: all Start(phi), or all Error."""
    ins = [parse(x) for x in inputs]
    if ins and ins[0][0] == "Start":
        return [fmt(EMPTY if x == EMPTY else ins[0]) for x in ins]
    return [fmt(EMPTY if x == EMPTY else ERROR) for x in ins]


def solve_pi(m: LbaMachine, inputs, B: int = None) -> list:
    """Canonical solution when the machine halts, the global one when it loops."""
    pi = compile_pi(m, B)
    if lba_run(pi.machine).status != "HALTED":
        return global_pi_solution(pi, inputs)
    alg = canonical_pi_solver(pi.machine)
    return alg.batch(Instance(PATH, list(inputs)))


# ---------------------------------------------------------------- lower bound probe

def pi_lower_bound_probe(m: LbaMachine, B: int = None, n: int = None, phi: str = "a",
                         inputs=None, closure: bool = True) -> bool:
    """True iff every accepted labeling gives Start(phi) to all non-Empty nodes.

    The default input is the good input padded with Empty to n nodes (at
    least one Empty, so chains cannot run off the end of the path).
    """
    pi = compile_pi(m, B, closure)
    if inputs is None:
        E = 1 + (pi.B + 1) * len(halting_steps(pi.machine))
        n = E + 1 if n is None else n
        if n < E + 1:
            raise LclError(f"the good input needs n >= {E + 1}")
        inputs = encode_good_input(pi.machine, phi=phi, n=n)
    ins = [parse(x) for x in inputs]
    target = ("Start", ins[0][1]) if ins and ins[0][0] == "Start" else None
    outs = pi._outs
    states = {}
    for o in outs:
        if pi.node_ok(None, (ins[0], o)):
            dev = ins[0] != EMPTY and o != target
            states[(o, dev)] = True
    for i in range(1, len(ins)):
        new = {}
        for (po, dev) in states:
            pred = (ins[i - 1], po)
            for o in outs:
                if pi.node_ok(pred, (ins[i], o)):
                    new[(o, dev or (ins[i] != EMPTY and o != target))] = True
        states = new
        if not states:
            break
    return not any(dev for _, dev in states)


# ---------------------------------------------------------------- fixture machines

def _machine(name, states, gamma, rules, B, q0="q0", qf="qf"):
    delta = {}
    for s in states:
        if s == qf:
            continue
        for c in gamma:
            delta[(s, c)] = rules(s, c)
    return LbaMachine(states, q0, qf, gamma, delta, B, name)


def unary_counter(B: int) -> LbaMachine:
    """Sweeps right turning every 0 into 1, halts on R."""
    def rules(s, c):
        if c == "R":
            return ("qf", "R", "S")
        return ("q0", "1" if c == "0" else c, "R")
    return _machine("unary_counter", ("q0", "qf"), ("0", "1", "L", "R"), rules, B)


def binary_counter(B: int) -> LbaMachine:
    """Counts through all values of the B-2 inner cells, halts on overflow."""
    def rules(s, c):
        if s in ("q0", "back"):
            if c == "R":
                return ("inc", "R", "L")
            if c == "L":
                return ("q0", "L", "R") if s == "q0" else ("qf", "L", "S")
            return (s, c, "R")
        # inc: add one moving left
        if c == "1":
            return ("inc", "0", "L")
        if c == "0":
            return ("back", "1", "R")
        if c == "L":
            return ("qf", "L", "S")
        return ("qf", "R", "S")
    return _machine("binary_counter", ("q0", "inc", "back", "qf"), ("0", "1", "L", "R"), rules, B)


def one_step(B: int) -> LbaMachine:
    """Halts after one stay move."""
    return _machine("one_step", ("q0", "qf"), ("0", "1", "L", "R"), lambda s, c: ("qf", c, "S"), B)


def looping_machine(B: int) -> LbaMachine:
    """Bounces between cells 1 and 2 forever."""
    def rules(s, c):
        if s == "q0":
            return ("q1", c, "R")
        return ("q0", c, "L")
    return _machine("looping", ("q0", "q1", "qf"), ("0", "1", "L", "R"), rules, B)


FIXTURE_MACHINES = {"unary_counter": unary_counter, "binary_counter": binary_counter,
                    "one_step": one_step, "looping": looping_machine}


# ---------------------------------------------------------------- corruption fixtures

CORRUPTIONS = ("start", "init", "too-long", "too-short", "copy", "state", "transition", "double-head")


def corrupt(m: LbaMachine, kind: str, phi: str = "a", pad: int = 2) -> list:
    """A good input with one defect of the given class, as label strings."""
    B = m.B
    good = [parse(x) for x in encode_good_input(m, phi=phi)]
    steps = halting_steps(m)
    if len(steps) < 3:
        raise LclError("corruption fixtures need a run of at least three steps")
    labs = list(good)
    cell = lambda step, c: (step - 1) * (B + 1) + 1 + c  # noqa: E731
    other = lambda s: next(q for q in m.states if q != s)  # noqa: E731
    if kind == "start":
        labs[cell(2, 1)] = ("Start", "b" if phi == "a" else "a")
    elif kind == "init":
        t = labs[2]
        labs[2] = ("Tape", t[1], t[2], not t[3])
    elif kind == "too-long":
        labs.insert(cell(2, B) + 1, labs[cell(2, B)])
    elif kind == "too-short":
        del labs[cell(2, B)]
    elif kind == "copy":
        h2 = steps[1].head
        c = next(c for c in range(1, B + 1) if c != h2)
        t = labs[cell(3, c)]
        sym = next(x for x in m.gamma if x != t[1])
        labs[cell(3, c)] = ("Tape", sym, t[2], t[3])
    elif kind == "state":
        t = labs[cell(2, 2)]
        labs[cell(2, 2)] = ("Tape", t[1], other(t[2]), t[3])
    elif kind == "transition":
        for c in range(1, B + 1):
            t = labs[cell(3, c)]
            labs[cell(3, c)] = ("Tape", t[1], other(steps[2].state), t[3])
    elif kind == "double-head":
        h3 = steps[2].head
        c = h3 + 1 if h3 < B else h3 - 1
        t = labs[cell(3, c)]
        labs[cell(3, c)] = ("Tape", t[1], t[2], True)
    else:
        raise LclError(f"unknown corruption {kind!r}")
    return [fmt(x) for x in labs + [EMPTY] * pad]
