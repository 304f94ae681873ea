"""Searching for feasible functions and classifying problems.

Two finite certificates decide the complexity on cycles:

* a log* function labels a 2r-window S from the types of the two
  pumping-length paths around it; any two labeled windows must admit a
  consistent fill of the gap, in every orientation;
* a constant function labels every short pattern w periodically; periodic
  labelings must be consistent on their own, and any two of them (with any
  string between) must be joinable.

Both searches work on finite quotients: the log* keys are type triples, and
the constant search groups patterns by a class state that determines
everything the conditions can observe (the pumped context types and the
achievable boundary labels). The verifiers re-check the chosen functions on
concrete strings with a plain path DP.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import time
from dataclasses import dataclass, field

from .core import CYCLE, LclProblem, check_solvable_up_to, complete_path
from .pathtypes import TypeAutomaton, build_type_automaton

CONSTANT, LOGSTAR, GLOBAL, UNKNOWN = "CONSTANT", "LOGSTAR", "GLOBAL", "UNKNOWN"
EXIT_CODES = {CONSTANT: 0, LOGSTAR: 1, GLOBAL: 2, UNKNOWN: 3}


class BudgetExhausted(Exception):
    """Search budget exhausted; distinct from a negative answer."""


@dataclass
class Budget:
    max_nodes: int = 10 ** 7
    max_secs: float = 300.0
    nodes: int = 0
    started: float = field(default_factory=time.monotonic)

    def tick(self, k: int = 1):
        self.nodes += k
        if self.nodes > self.max_nodes:
            raise BudgetExhausted(f"node budget {self.max_nodes} exhausted")
        if self.nodes % 1024 == 0 and time.monotonic() - self.started > self.max_secs:
            raise BudgetExhausted(f"time budget {self.max_secs}s exhausted")


def _digest(doc) -> str:
    return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()[:16]


class _Tables:
    """Shared integer helpers: boundary codes, reversal of codes, type tables."""

    def __init__(self, aut: TypeAutomaton):
        self.aut = aut
        self.problem = aut.problem
        self.ck = aut.problem.checker
        self.r = self.ck.r
        self.m = 2 * self.r
        self.nout = self.ck.nout
        self.nin = self.ck.nin
        self.W = self.nout ** self.m
        self.oriented = aut.problem.oriented
        self._concat = {}

    def code(self, outs) -> int:
        c = 0
        for o in outs:
            c = c * self.nout + o
        return c

    def decode(self, c: int) -> tuple:
        out = []
        for _ in range(self.m):
            c, o = divmod(c, self.nout)
            out.append(o)
        return tuple(reversed(out))

    def rev_code(self, c: int) -> int:
        return self.code(tuple(reversed(self.decode(c))))

    def concat(self, *states) -> int:
        key = states
        if key not in self._concat:
            s = states[0]
            for t in states[1:]:
                s = self.aut.concat(s, t)
            self._concat[key] = s
        return self._concat[key]

    def word_state(self, word) -> int:
        return self.aut.run(word)

    def bit(self, state: int, left: int, right: int) -> bool:
        sig = self.aut.signature(state)
        return bool(sig.table >> (left * self.W + right) & 1)


def representatives_at(aut: TypeAutomaton, length: int) -> dict:
    """Lexicographically least input string of exactly `length` per reachable type."""
    layer = {0: ()}
    for _ in range(length):
        nxt = {}
        for s, w in sorted(layer.items(), key=lambda kv: kv[1]):
            for a in range(aut.nin):
                t = aut.delta[(s, a)]
                if t not in nxt or w + (a,) < nxt[t]:
                    nxt[t] = w + (a,)
        layer = nxt
    return layer


# ---------------------------------------------------------------------------
# log* gap

@dataclass
class FeasibleFunctionLogstar:
    problem: LclProblem
    ell: int
    table: dict  # (type, S input codes, type) -> output codes
    reps: dict  # type -> input codes of length ell or ell + 1

    def labels(self, t1, s, t2) -> tuple:
        return self.table[(t1, tuple(s), t2)]

    def to_json(self) -> dict:
        p = self.problem
        entries = [{"left": t1, "S": [p.sigma_in[a] for a in s], "right": t2,
                    "out": [p.sigma_out[o] for o in v]}
                   for (t1, s, t2), v in sorted(self.table.items())]
        reps = {str(t): "".join(p.sigma_in[a] + "," for a in w).rstrip(",")
                for t, w in sorted(self.reps.items())}
        doc = {"kind": "logstar", "ell_pump": self.ell, "entries": entries, "representatives": reps}
        doc["digest"] = _digest(doc)
        return doc


class _LogstarSpace:
    def __init__(self, aut: TypeAutomaton):
        self.T = T = _Tables(aut)
        self.aut = aut
        ell = aut.ell_pump
        self.reps = {}
        for L in (ell, ell + 1):
            for t, w in representatives_at(aut, L).items():
                self.reps.setdefault(t, w)
        self.R = sorted(self.reps)
        self.windows = list(itertools.product(range(T.nin), repeat=T.m))
        self.values = list(itertools.product(range(T.nout), repeat=T.m))
        self.keys = [(a, s, b) for a in self.R for s in self.windows for b in self.R]
        self._compat = {}

    def left_elems(self, key, v):
        x, s, y = key
        T = self.T
        out = [(s, y, T.code(v))]
        if not T.oriented:
            out.append((tuple(reversed(s)), self.aut.reverse(x), T.code(tuple(reversed(v)))))
        return out

    def right_elems(self, key, v):
        x, s, y = key
        T = self.T
        out = [(x, s, T.code(v))]
        if not T.oriented:
            out.append((self.aut.reverse(y), tuple(reversed(s)), T.code(tuple(reversed(v)))))
        return out

    def compat(self, L, R) -> bool:
        k = (L, R)
        res = self._compat.get(k)
        if res is None:
            s1, tb, l1 = L
            tc, s2, l2 = R
            T = self.T
            st = T.concat(T.word_state(s1), tb, tc, T.word_state(s2))
            res = self._compat[k] = T.bit(st, l1, l2)
        return res

    def pair_ok(self, k1, v1, k2, v2) -> bool:
        for L in self.left_elems(k1, v1):
            for R in self.right_elems(k2, v2):
                if not self.compat(L, R):
                    return False
        for L in self.left_elems(k2, v2):
            for R in self.right_elems(k1, v1):
                if not self.compat(L, R):
                    return False
        return True


def find_feasible_function_logstar(problem: LclProblem, aut: TypeAutomaton = None,
                                   budget: Budget = None, stats: dict = None):
    """Backtracking with forward checking; None when no feasible function exists."""
    aut = aut or build_type_automaton(problem)
    budget = budget or Budget()
    sp = _LogstarSpace(aut)
    keys = sp.keys
    domains = []
    for k in keys:
        dom = [v for v in sp.values if sp.pair_ok(k, v, k, v)]
        budget.tick(len(sp.values))
        domains.append(dom)
    if stats is not None:
        stats.update(logstar_keys=len(keys), logstar_values=len(sp.values))
    if any(not d for d in domains):
        return None

    assignment = [None] * len(keys)

    def search(i, doms):
        if i == len(keys):
            return True
        for v in doms[i]:
            budget.tick()
            assignment[i] = v
            new = doms[:i + 1]
            dead = False
            for j in range(i + 1, len(keys)):
                d = [u for u in doms[j] if sp.pair_ok(keys[i], v, keys[j], u)]
                budget.tick(len(doms[j]))
                if not d:
                    dead = True
                    break
                new.append(d)
            if not dead and search(i + 1, new):
                return True
        assignment[i] = None
        return False

    import sys
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * len(keys) + 1000))
    if not search(0, domains):
        return None
    f = FeasibleFunctionLogstar(problem, aut.ell_pump, dict(zip(keys, assignment)),
                                {t: sp.reps[t] for t in sp.R})
    if stats is not None:
        stats["logstar_nodes"] = budget.nodes
    return f


def verify_feasible_logstar(problem: LclProblem, aut: TypeAutomaton, f: FeasibleFunctionLogstar):
    """Check every window pair on concrete strings S1 w_b w_c S2 with a path DP.

    Returns (True, None) or (False, counterexample dict).
    """
    ck = problem.checker
    r, m = ck.r, 2 * ck.r
    ell = aut.ell_pump
    reps = {}
    for L in (ell, ell + 1):
        for t, w in representatives_at(aut, L).items():
            reps.setdefault(t, w)
    R = sorted(reps)
    windows = list(itertools.product(range(ck.nin), repeat=m))
    keys = [(a, s, b) for a in R for s in windows for b in R]
    missing = [k for k in keys if k not in f.table]
    if missing:
        raise ValueError(f"function is partial: no entry for {missing[0]}")
    rev = aut.reverse
    # concrete left ends (S1, w_b, labels) and right ends (w_c, S2, labels)
    lefts, rights = set(), set()
    for (x, s, y) in keys:
        v = f.table[(x, s, y)]
        lefts.add((s, y, v))
        rights.add((x, s, v))
        if not problem.oriented:
            lefts.add((tuple(reversed(s)), rev(x), tuple(reversed(v))))
            rights.add((rev(y), tuple(reversed(s)), tuple(reversed(v))))
    for (s1, tb, l1) in sorted(lefts):
        for (tc, s2, l2) in sorted(rights):
            word = s1 + f.reps.get(tb, reps[tb]) + f.reps.get(tc, reps[tc]) + s2
            L = len(word)
            fixed = list(l1) + [-1] * (L - 2 * m) + list(l2)
            check = [False] * r + [True] * (L - 2 * r) + [False] * r
            if complete_path(ck, word, fixed, check) is None:
                lab = problem.sigma_in
                return False, {"S1": [lab[a] for a in s1], "w_b_type": tb, "w_c_type": tc,
                               "S2": [lab[a] for a in s2],
                               "S1_out": [problem.sigma_out[o] for o in l1],
                               "S2_out": [problem.sigma_out[o] for o in l2]}
    return True, None


# ---------------------------------------------------------------------------
# constant gap

class _ConstSpace:
    """Class states of patterns w with 1 <= |w| <= ell_pump.

    A class state holds the action of w on type states, the first and last
    2r input labels of w (or w itself when short), and the set of reachable
    summaries of labelings x of w: first/last 2r (input, output) cells (or
    the whole pair string when short), keeping only x whose windows inside
    the pair string are consistent.
    """

    def __init__(self, aut: TypeAutomaton):
        self.T = T = _Tables(aut)
        self.aut = aut
        self.ell = aut.ell_pump
        self.n_states = aut.ell_pump
        self.ck = T.ck
        self.r, self.m = T.r, T.m

    # -- pattern part
    def _wpart_step(self, wp, a):
        act, short, head, tail = wp
        act = tuple(self.aut.delta[(s, a)] for s in act)
        if short is not None:
            short = short + (a,)
            if len(short) > self.m:
                head, tail, short = short[:self.m], short[-self.m:], None
            return act, short, head, tail
        return act, None, head, (tail + (a,))[-self.m:] if self.m else ()

    # -- labeling part
    def _x_step(self, xs, p):
        """xs: ('s', cells) exact or ('h', head, tail); p: pair code."""
        ck, m, r = self.ck, self.m, self.r
        nout = ck.nout
        if xs[0] == "s":
            cells = xs[1] + (p,)
            if len(cells) <= m:
                return ("s", cells)
            ins = tuple(c // nout for c in cells)
            outs = tuple(c % nout for c in cells)
            if not ck.ok(ins, outs, r):
                return None
            return ("h", cells[:m], cells[1:])
        _, head, tail = xs
        cells = tail + (p,)
        ins = tuple(c // nout for c in cells)
        outs = tuple(c % nout for c in cells)
        if not ck.ok(ins, outs, r):
            return None
        return ("h", head, cells[1:])

    def _wrap(self, xs):
        """Periodic consistency check; returns (lambda, rho) codes or None."""
        ck, m, r, nout = self.ck, self.m, self.r, self.ck.nout
        if xs[0] == "s":
            cells = xs[1]
            L = len(cells)
            for c in range(L):
                win = [cells[(c + d) % L] for d in range(-r, r + 1)]
                if not ck.ok([x // nout for x in win], [x % nout for x in win], r):
                    return None
            per = [cells[i % L] % nout for i in range(m * L)]
            lam, rho = per[len(per) - m:], per[:m]
        else:
            _, head, tail = xs
            ring = tail + head
            for c in list(range(r, m)) + list(range(m, m + r)):
                win = ring[c - r:c + r + 1]
                if not ck.ok([x // nout for x in win], [x % nout for x in win], r):
                    return None
            lam, rho = [x % nout for x in tail], [x % nout for x in head]
        T = self.T
        return T.code(lam), T.code(rho)

    def initial(self):
        wp = (tuple(range(self.n_states)), (), (), ())
        return wp, frozenset({("s", ())})

    def step(self, cs, a):
        wp, xset = cs
        nout = self.ck.nout
        new = set()
        for xs in xset:
            for o in range(nout):
                y = self._x_step(xs, a * nout + o)
                if y is not None:
                    new.add(y)
        return self._wpart_step(wp, a), frozenset(new)

    def profile(self, cs):
        """(TL, TR, options) of a class state."""
        (act, short, head, tail), xset = cs
        aut, m = self.aut, self.m
        if short is not None:
            per = [short[i % len(short)] for i in range(m * len(short))]
            suf, pre = tuple(per[len(per) - m:]), tuple(per[:m])
        else:
            suf, pre = tail, head
        tl = aut.run(suf)
        for _ in range(self.ell):
            tl = act[tl]
        tr = 0
        for _ in range(self.ell):
            tr = act[tr]
        tr = aut.run(pre, tr)
        opts = set()
        for xs in xset:
            lr = self._wrap(xs)
            if lr is not None:
                opts.add(lr)
        return tl, tr, frozenset(opts)

    def realize(self, w, option):
        """Some x with w (x) x periodically consistent and boundary labels `option`."""
        nout = self.ck.nout
        layer = {("s", ()): ()}
        for a in w:
            nxt = {}
            for xs, x in sorted(layer.items(), key=lambda kv: kv[1]):
                for o in range(nout):
                    y = self._x_step(xs, a * nout + o)
                    if y is not None and y not in nxt:
                        nxt[y] = x + (o,)
            layer = nxt
        for xs, x in sorted(layer.items(), key=lambda kv: kv[1]):
            if self._wrap(xs) == option:
                return x
        return None


@dataclass
class FeasibleFunctionConst:
    """f(w) for every pattern 1 <= |w| <= ell_pump, realized on demand from the chosen options."""
    problem: LclProblem
    ell: int
    profiles: list  # (TL, TR, options) per profile id
    choice: dict  # profile id -> (lambda code, rho code)
    reps: dict  # profile id -> representative pattern (input codes)
    _space: _ConstSpace = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {p: i for i, p in enumerate(self.profiles)}

    def profile_of(self, w) -> int:
        sp = self._space
        cs = sp.initial()
        for a in w:
            cs = sp.step(cs, a)
        return self._index[sp.profile(cs)]

    def __call__(self, w) -> tuple:
        """w and the result are tuples of integer codes."""
        w = tuple(w)
        if not 1 <= len(w) <= self.ell:
            raise ValueError(f"pattern length {len(w)} outside [1, {self.ell}]")
        if w not in self._cache:
            x = self._space.realize(w, self.choice[self.profile_of(w)])
            if x is None:  # pragma: no cover - options are realizable by construction
                raise AssertionError("chosen option not realizable")
            self._cache[w] = x
        return self._cache[w]

    def labels(self, w) -> list:
        p = self.problem
        codes = p.checker.encode_inputs(w)
        return [p.sigma_out[o] for o in self(codes)]

    def to_json(self) -> dict:
        p = self.problem
        T = self._space.T
        items = []
        for i, (tl, tr, opts) in enumerate(self.profiles):
            lam, rho = self.choice[i]
            rep = self.reps[i]
            items.append({"id": i, "left_type": tl, "right_type": tr, "options": len(opts),
                          "lambda": [p.sigma_out[o] for o in T.decode(lam)],
                          "rho": [p.sigma_out[o] for o in T.decode(rho)],
                          "pattern": [p.sigma_in[a] for a in rep],
                          "f": [p.sigma_out[o] for o in self(rep)]})
        doc = {"kind": "constant", "ell_pump": self.ell, "classes": items}
        doc["digest"] = _digest(doc)
        return doc


def _const_classes(sp: _ConstSpace, budget: Budget):
    """Profiles of all patterns of length 1..ell, with a shortest lexicographic representative."""
    layer = {sp.initial(): ()}
    profiles, reps = {}, {}
    for _ in range(sp.ell):
        nxt = {}
        for cs, w in sorted(layer.items(), key=lambda kv: kv[1]):
            for a in range(sp.ck.nin):
                budget.tick()
                c2 = sp.step(cs, a)
                if c2 not in nxt:
                    nxt[c2] = w + (a,)
        layer = nxt
        for cs, w in sorted(layer.items(), key=lambda kv: kv[1]):
            pr = sp.profile(cs)
            if pr not in profiles:
                profiles[pr] = len(profiles)
                reps[pr] = w
    return profiles, reps


def find_feasible_function_const(problem: LclProblem, aut: TypeAutomaton = None,
                                 budget: Budget = None, stats: dict = None):
    aut = aut or build_type_automaton(problem)
    budget = budget or Budget()
    sp = _ConstSpace(aut)
    T = sp.T
    profiles, reps = _const_classes(sp, budget)
    order = sorted(profiles, key=lambda p: (len(reps[p]), reps[p]))
    if stats is not None:
        stats.update(const_classes=len(order))
    if any(not p[2] for p in order):
        return None
    n_types = aut.ell_pump
    okbits = {}

    def ok(tl, tr, lam, rho):
        key = (tl, tr)
        bits = okbits.get(key)
        if bits is None:
            bits = -1
            for s in range(n_types):
                st = T.concat(tl, s, tr)
                bits &= aut.signature(st).table
                budget.tick()
            okbits[key] = bits
        return bool(bits >> (lam * T.W + rho) & 1)

    rev = aut.reverse

    def lefts(p, opt):
        tl, tr, _ = p
        lam, rho = opt
        out = [(tl, lam)]
        if not problem.oriented:
            out.append((rev(tr), T.rev_code(rho)))
        return out

    def rights(p, opt):
        tl, tr, _ = p
        lam, rho = opt
        out = [(tr, rho)]
        if not problem.oriented:
            out.append((rev(tl), T.rev_code(lam)))
        return out

    def pair_ok(p, o, q, u):
        for a, lam in lefts(p, o):
            for b, rho in rights(q, u):
                if not ok(a, b, lam, rho):
                    return False
        for a, lam in lefts(q, u):
            for b, rho in rights(p, o):
                if not ok(a, b, lam, rho):
                    return False
        return True

    domains = []
    for p in order:
        domains.append([o for o in sorted(p[2]) if pair_ok(p, o, p, o)])
        if not domains[-1]:
            return None
    assignment = [None] * len(order)

    def search(i, doms):
        if i == len(order):
            return True
        for v in doms[i]:
            budget.tick()
            assignment[i] = v
            new = doms[:i + 1]
            dead = False
            for j in range(i + 1, len(order)):
                d = [u for u in doms[j] if pair_ok(order[i], v, order[j], u)]
                if not d:
                    dead = True
                    break
                new.append(d)
            if not dead and search(i + 1, new):
                return True
        return False

    import sys
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * len(order) + 1000))
    if not search(0, domains):
        return None
    plist = order
    f = FeasibleFunctionConst(problem, aut.ell_pump, plist,
                              {i: assignment[i] for i in range(len(plist))},
                              {i: reps[p] for i, p in enumerate(plist)}, sp)
    return f


def _const_domain(aut: TypeAutomaton, f: FeasibleFunctionConst, cap: int):
    """Every pattern when there are at most `cap`, else one per class state."""
    nin, ell = aut.nin, aut.ell_pump
    total = sum(nin ** k for k in range(1, ell + 1))
    if total <= cap:
        return [w for k in range(1, ell + 1) for w in itertools.product(range(nin), repeat=k)]
    sp = f._space
    layer = {sp.initial(): ()}
    out = []
    for _ in range(ell):
        nxt = {}
        for cs, w in sorted(layer.items(), key=lambda kv: kv[1]):
            for a in range(nin):
                c2 = sp.step(cs, a)
                if c2 not in nxt:
                    nxt[c2] = w + (a,)
        layer = nxt
        out.extend(sorted(layer.values()))
    return out


def verify_feasible_const(problem: LclProblem, aut: TypeAutomaton, f: FeasibleFunctionConst,
                          domain_cap: int = 4000):
    """Conditions (i) and (ii) on concrete strings.

    (i): f(w) repeated 2r+1 times is consistent on the middle copy.
    (ii): w1^(l+2r) S w2^(l+2r) with both outer 2r copies fixed is completable
    on the middle part, for S empty or a representative of each type. The
    path DP is split at the two periodic ends and joined through S.
    """
    ck = problem.checker
    r, m, nout = ck.r, 2 * ck.r, ck.nout
    ell = aut.ell_pump
    domain = _const_domain(aut, f, domain_cap)
    labels = {}
    for w in domain:
        x = f(w)
        if len(x) != len(w):
            return False, {"pattern": list(w), "reason": "length"}
        k = len(w)
        ins, outs = list(w) * (2 * r + 1), list(x) * (2 * r + 1)
        for c in range(r * k, (r + 1) * k):
            if not ck.ok(ins[c - r:c + r + 1], outs[c - r:c + r + 1], r):
                return False, {"pattern": [problem.sigma_in[a] for a in w], "condition": "i"}
        labels[w] = x
    ends = []
    for w, x in labels.items():
        ends.append((w, x))
        if not problem.oriented:
            ends.append((tuple(reversed(w)), tuple(reversed(x))))
    ends = sorted(set(ends))
    s_reps = [()] + [aut.reps[s] for s in range(1, aut.ell_pump)]
    states = list(itertools.product(range(nout), repeat=m))
    allowed = ck.allowed

    def window_ok(ins, outs, c):
        return (tuple(i * nout + o for i, o in zip(ins, outs)), c) in allowed

    def fwd_step(layer, ins, j, check):
        nxt = set()
        for s in layer:
            for o in range(nout):
                if not check or window_ok(ins[j - 2 * r:j + 1], s + (o,), r):
                    nxt.add((s + (o,))[1:])
        return frozenset(nxt)

    def bwd_step(good, ins, j, check, choices):
        prev = set()
        for s in states:
            for o in choices:
                if check and not window_ok(ins[j - 2 * r:j + 1], s + (o,), r):
                    continue
                if (s + (o,))[1:] in good:
                    prev.add(s)
                    break
        return frozenset(prev)

    copies = ell + 2 * r
    # forward over the left end; unfixed copies are identical, so one copy's map is memoized
    fwd = {}
    for w, x in ends:
        k = len(w)
        ins = list(w) * copies
        per = list(w) * (2 + -(-2 * r // k))
        base = len(per) - k
        layer = frozenset({tuple((list(x) * (2 * r))[-m:])}) if m else frozenset({()})
        memo = {}
        for _ in range(2 * r, copies):
            if layer not in memo:
                cur = layer
                for t in range(k):
                    cur = fwd_step(cur, per, base + t, True)
                memo[layer] = cur
            layer = memo[layer]
        fwd[(w, x)] = (layer, tuple(ins[len(ins) - m:]))

    # backward over the right end, down to the copy whose windows reach into the preceding inputs
    tail_cache = {}

    def bwd_tail(w, x):
        """Good sets before each of the first few positions, independent of the preceding inputs."""
        if (w, x) in tail_cache:
            return tail_cache[(w, x)]
        k = len(w)
        L = copies * k
        fixed_from = L - 2 * r * k
        last_checked = L - r * k - 1
        ins = list(w) * copies
        good = frozenset(states)
        lead = min(copies, -(-2 * r // k) + 1)  # copies processed position by position at the front
        j = L - 1
        # fixed and partially checked copies at the end
        while j >= fixed_from:
            good = bwd_step(good, ins, j, j - r <= last_checked, (x[j % k],))
            j -= 1
        memo = {}
        while j >= lead * k:
            if good not in memo:
                cur = good
                for t in range(j, j - k, -1):
                    cur = bwd_step(cur, ins, t, True, range(nout))
                memo[good] = cur
            good = memo[good]
            j -= k
        tail_cache[(w, x)] = (good, j)
        return good, j

    bwd_cache = {}

    def bwd(w, x, before):
        key = (w, x, before)
        if key not in bwd_cache:
            good, j = bwd_tail(w, x)
            ins = list(before) + list(w) * copies
            for t in range(j + m, m - 1, -1):
                good = bwd_step(good, ins, t, True, range(nout))
            bwd_cache[key] = good
        return bwd_cache[key]

    rights = {}
    for before in itertools.product(range(ck.nin), repeat=m):
        for (w2, x2) in ends:
            rights.setdefault(before, {}).setdefault(bwd(w2, x2, before), w2)
    lefts = {}
    for (w1, x1) in ends:
        left_states, left_tail = fwd[(w1, x1)]
        for S in s_reps:
            # carry the forward set through S; nodes whose window closes inside S are checked here
            ins = list(left_tail) + list(S)
            layer = set(left_states)
            for j in range(m, len(ins)):
                c = j - r
                nxt = set()
                for s in layer:
                    for o in range(nout):
                        if window_ok(ins[c - r:j + 1], s + (o,), r):
                            nxt.add((s + (o,))[1:])
                layer = nxt
            lefts.setdefault((frozenset(layer), tuple(ins[len(ins) - m:])), (w1, S))
    for (layer, before), (w1, S) in lefts.items():
        for good, w2 in rights[before].items():
            if not layer & good:
                lab = problem.sigma_in
                return False, {"condition": "ii", "w1": [lab[a] for a in w1],
                               "w2": [lab[a] for a in w2], "S": [lab[a] for a in S]}
    return True, None


# ---------------------------------------------------------------------------
# classification

@dataclass
class Classification:
    cls: str
    ell_pump: int
    certificate: object = None
    search_stats: dict = field(default_factory=dict)
    solvability_caveat: dict = None
    synthesized: dict = None
    transcript: str = ""

    def to_json(self) -> dict:
        cert = self.certificate.to_json() if self.certificate is not None else {
            "kind": "exhaustion" if self.cls == GLOBAL else "partial", "transcript": self.transcript}
        return {"class": self.cls, "ell_pump": self.ell_pump, "certificate": cert,
                "search_stats": self.search_stats, "solvability_caveat": self.solvability_caveat,
                "synthesized": self.synthesized}


def synthesized_descriptor(cls: str, problem: LclProblem, ell: int) -> dict:
    r = problem.radius
    if cls == CONSTANT:
        return {"algorithm": "const", "ell_width": ell, "ell_pattern": ell, "ell_count": 2 * ell + 2 * r}
    if cls == LOGSTAR:
        return {"algorithm": "logstar", "s": 2 * r, "k": 2 * ell}
    return {"algorithm": "global"}


def classify(problem: LclProblem, budget: Budget = None, caveat_n: int = 8) -> Classification:
    budget = budget or Budget()
    stats = {}
    aut = build_type_automaton(problem)
    ell = aut.ell_pump
    stats["types"] = ell
    nin = len(problem.sigma_in)
    max_n = caveat_n
    while max_n > 2 * problem.radius + 1 and nin ** max_n > 4096:
        max_n -= 1
    caveat = check_solvable_up_to(problem, max_n, topologies=(CYCLE,)).to_json()
    try:
        f = find_feasible_function_const(problem, aut, budget, stats)
        if f is not None:
            ok, _ = verify_feasible_const(problem, aut, f)
            if not ok:  # pragma: no cover - search and verifier agree
                raise AssertionError("constant certificate failed verification")
            cls, cert = CONSTANT, f
        else:
            g = find_feasible_function_logstar(problem, aut, budget, stats)
            if g is not None:
                ok, _ = verify_feasible_logstar(problem, aut, g)
                if not ok:  # pragma: no cover
                    raise AssertionError("log* certificate failed verification")
                cls, cert = LOGSTAR, g
            else:
                cls, cert = GLOBAL, None
    except BudgetExhausted as e:
        stats["nodes"] = budget.nodes
        return Classification(UNKNOWN, ell, None, stats, caveat, None, transcript=str(e))
    stats["nodes"] = budget.nodes
    transcript = ""
    if cls == GLOBAL:
        transcript = (f"no constant function over {stats.get('const_classes', 0)} classes; "
                      f"no log* function over {stats.get('logstar_keys', 0)} keys")
    return Classification(cls, ell, cert, stats, caveat, synthesized_descriptor(cls, problem, ell),
                          transcript)
