"""LOCAL-model harness and symmetry-breaking subroutines on paths and cycles.

An algorithm is a pipeline of stages that are each local with a declared
radius; the harness either runs the pipeline on the whole instance (batch)
or on every node's own radius-T view (view) and reports T as the measured
radius. Stages only look at node data through neighbor relations, never at
array positions, and every tie is broken by identifiers so that results do
not depend on how a cycle is written down.
"""
from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass, field
from typing import Callable

from .core import CYCLE, PATH, Instance, Labeling, LclError, LclProblem, verify_labeling


# ---------------------------------------------------------------------------
# harness

@dataclass
class ViewAlgorithm:
    """`batch(instance)` returns all outputs; `radius(n)` is the declared locality.

    `path_views` says whether the batch function accepts truncated path views
    (ends marked by `truncated`) and is correct at the view center.
    """
    name: str
    radius: Callable[[int], int]
    batch: Callable[..., list]
    path_views: bool = False
    params: dict = field(default_factory=dict)


@dataclass
class RunResult:
    labeling: Labeling
    measured_radius: int
    violations: list = None


def view_of(instance: Instance, v: int, t: int):
    """The radius-t view of v: (sub-instance, index of v, truncated ends)."""
    n = instance.n
    if instance.cyclic and 2 * t + 1 >= n:
        return instance, v, (False, False)
    if instance.cyclic:
        idx = [(v + d) % n for d in range(-t, t + 1)]
        trunc = (True, True)
        center = t
    else:
        lo, hi = max(0, v - t), min(n - 1, v + t)
        idx = list(range(lo, hi + 1))
        trunc = (lo > 0, hi < n - 1)
        center = v - lo
    sub = Instance(PATH, [instance.inputs[i] for i in idx], [instance.ids[i] for i in idx])
    return sub, center, trunc


def run(algorithm: ViewAlgorithm, problem: LclProblem, instance: Instance, mode: str = "batch") -> RunResult:
    t = algorithm.radius(instance.n)
    if mode == "batch":
        outs = list(algorithm.batch(instance))
    elif mode == "view":
        outs = []
        cache = {}
        for v in range(instance.n):
            sub, c, trunc = view_of(instance, v, t)
            if trunc != (False, False) and not algorithm.path_views:
                raise LclError(f"{algorithm.name} cannot run on truncated views")
            key = id(sub) if sub is instance else None
            if key is not None and key in cache:
                outs.append(cache[key][c])
                continue
            res = algorithm.batch(sub, truncated=trunc) if trunc != (False, False) else algorithm.batch(sub)
            if key is not None:
                cache[key] = res
            outs.append(res[c])
    else:
        raise ValueError(f"unknown mode {mode!r}")
    lab = Labeling(outs)
    if problem is None:
        viol = None
    elif hasattr(problem, "verify"):
        viol = problem.verify(instance, lab)
    else:
        viol = verify_labeling(problem, instance, lab)
    return RunResult(lab, t, viol)


def fuzz_locality(algorithm: ViewAlgorithm, instance: Instance, sigma_in, trials: int = 20,
                  rng: random.Random = None) -> list:
    """Randomize everything outside a node's declared view and compare its output.

    Returns the list of nodes whose output changed (empty when local).
    """
    rng = rng or random.Random(0)
    n = instance.n
    t = algorithm.radius(n)
    base = list(algorithm.batch(instance))
    bad = []
    for _ in range(trials):
        v = rng.randrange(n)
        inside = {(v + d) % n for d in range(-t, t + 1)} if instance.cyclic else \
            set(range(max(0, v - t), min(n, v + t + 1)))
        if len(inside) >= n:
            continue
        inputs = list(instance.inputs)
        ids = list(instance.ids)
        used = {ids[i] for i in inside}
        pool = [x for x in range(1, max(ids) + n + 1) if x not in used]
        rng.shuffle(pool)
        it = iter(pool)
        for i in range(n):
            if i not in inside:
                inputs[i] = rng.choice(sigma_in)
                ids[i] = next(it)
        other = Instance(instance.topology, inputs, ids)
        if algorithm.batch(other)[v] != base[v]:
            bad.append(v)
    return bad


# ---------------------------------------------------------------------------
# neighborhoods

class Ring:
    """Nodes of a path or cycle with neighbor lookups; node order is internal only."""

    def __init__(self, n: int, cyclic: bool):
        self.n, self.cyclic = n, cyclic

    def nbrs(self, v: int, dist: int = 1) -> list:
        out = []
        for d in range(1, dist + 1):
            for u in (v - d, v + d):
                if self.cyclic:
                    u %= self.n
                elif not 0 <= u < self.n:
                    continue
                if u != v and u not in out:
                    out.append(u)
        return out


# ---------------------------------------------------------------------------
# color reduction and MIS

def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    for p in range(2, math.isqrt(q) + 1):
        if q % p == 0:
            return False
    return True


def _next_prime(q: int) -> int:
    while not _is_prime(q):
        q += 1
    return q


def _iroot_ceil(c: int, k: int) -> int:
    """Smallest x with x**k >= c."""
    e = math.log2(c) / k
    if e < 1000:
        est = 2.0 ** e
        lo, hi = max(1, int(est * (1 - 1e-9)) - 1), int(est * (1 + 1e-9)) + 2
        if (lo == 1 or (lo - 1) ** k < c) and hi ** k >= c:
            return _bisect_root(c, k, lo, hi)
    return _bisect_root(c, k, 1, 1 << (-(-c.bit_length() // k) + 1))


def _bisect_root(c, k, lo, hi):
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** k >= c:
            hi = mid
        else:
            lo = mid + 1
    return lo


def linial_schedule(c0: int, delta: int) -> list:
    """Sequence of (q, d) steps; each maps a proper c-coloring to a q^2-coloring.

    Colors are read as degree-d polynomials over GF(q); q > delta*d leaves a
    point where a node's polynomial differs from all its neighbors'.
    """
    return list(_schedule(c0, max(delta, 1)))


@functools.lru_cache(maxsize=None)
def _schedule(c0: int, delta: int) -> tuple:
    steps, c = [], c0
    while True:
        lc = math.log2(c)
        d_max = max(2, int(lc) + 2)
        approx = min(range(1, d_max), key=lambda d: max(math.log2(delta * d + 1), lc / (d + 1)))
        best = None
        for d in range(max(1, approx - 2), approx + 3):
            low = max(delta * d + 1, _iroot_ceil(c, d + 1))
            if best is None or low < best[0]:
                best = (low, d)
        q = _next_prime(best[0])
        if q * q >= c:
            return tuple(steps)
        steps.append((q, best[1]))
        c = q * q


def _digits(x: int, q: int, d: int) -> list:
    out = []
    for _ in range(d + 1):
        x, r = divmod(x, q)
        out.append(r)
    return out


def _horner(digits: list, q: int, a: int) -> int:
    acc = 0
    for coef in reversed(digits):
        acc = (acc * a + coef) % q
    return acc


def linial_step(colors: list, nbrs: list, q: int, d: int) -> list:
    digs = {}
    memo = {}

    def ev(v, a):
        if a == 0:
            return colors[v] % q
        key = (v, a)
        if key not in memo:
            if v not in digs:
                digs[v] = _digits(colors[v], q, d)
            memo[key] = _horner(digs[v], q, a)
        return memo[key]

    new = []
    for v in range(len(colors)):
        for a in range(q):
            px = ev(v, a)
            if all(ev(u, a) != px for u in nbrs[v] if colors[u] != colors[v]):
                new.append(a * q + px)
                break
        else:  # pragma: no cover - q > delta * d guarantees a free point
            raise AssertionError("no free evaluation point")
    return new


def greedy_mis(colors: list, nbrs: list, candidates=None) -> set:
    """Join in increasing color order unless a neighbor already joined (one round per color)."""
    nodes = range(len(colors)) if candidates is None else candidates
    chosen = set()
    for v in sorted(nodes, key=lambda v: colors[v]):
        if not any(u in chosen for u in nbrs[v]):
            chosen.add(v)
    return chosen


@dataclass(frozen=True)
class MisPlan:
    steps: tuple
    palette: int

    @property
    def rounds(self) -> int:
        return len(self.steps) + self.palette


@functools.lru_cache(maxsize=None)
def mis_plan(color_bound: int, delta: int) -> MisPlan:
    steps = linial_schedule(color_bound, delta)
    palette = steps[-1][0] ** 2 if steps else color_bound
    return MisPlan(tuple(steps), palette)


def mis_from_colors(colors: list, nbrs: list, plan: MisPlan, candidates=None) -> set:
    for q, d in plan.steps:
        colors = linial_step(colors, nbrs, q, d)
    return greedy_mis(colors, nbrs, candidates)


def color_bound(instance: Instance, id_bound: int = 4) -> int:
    return max(id_bound * instance.n, max(instance.ids)) + 1


@dataclass
class MisResult:
    members: frozenset
    radius: int


def color_reduce_logstar(instance: Instance, id_bound: int = 4) -> MisResult:
    """MIS of a path or cycle: Linial reduction from the IDs, then one round per color."""
    n = instance.n
    ring = Ring(n, instance.cyclic)
    nbrs = [ring.nbrs(v) for v in range(n)]
    plan = mis_plan(color_bound(instance, id_bound), 2)
    return MisResult(frozenset(mis_from_colors(list(instance.ids), nbrs, plan)), plan.rounds)


def logstar(x: float) -> int:
    k = 0
    while x > 1:
        x = math.log2(x)
        k += 1
    return k


# ---------------------------------------------------------------------------
# spaced independent sets and the ruling decomposition

def _split_sizes(z: int, lo: int, hi: int):
    """Pieces in [lo, hi] separated by single nodes, or None."""
    p = max(1, -(-(z + 1) // (hi + 1)))
    while p * lo + (p - 1) <= z:
        rest = z - (p - 1)
        if rest <= p * hi:
            base, extra = divmod(rest, p)
            return [base + 1] * extra + [base] * (p - extra)
        p += 1
    return None


def spaced_radius(n: int, L: int, id_bound: int = 4, max_id: int = 0) -> int:
    rounds = mis_plan(max(id_bound * n, max_id) + 1, 2).rounds
    if L == 1:
        return rounds
    half = L // 2
    return spaced_radius(n, half, id_bound, max_id) + rounds * (2 * half + 1) + 6 * half + 3


def spaced_independent_set(n: int, ids: list, L: int, id_bound: int = 4, order: list = None):
    """Independent set on a cycle whose complement components have sizes in [L, 2L].

    `order` lists the cycle's nodes (defaults to 0..n-1). Returns (set, radius).
    """
    order = list(range(n)) if order is None else order
    m = len(order)
    if m < L + 1:
        raise LclError(f"cycle of {m} nodes too short for spacing {L}")
    cb = max(id_bound * n, max(ids)) + 1
    plan = mis_plan(cb, 2)
    if L == 1:
        ring = Ring(m, True)
        nbrs = [ring.nbrs(i) for i in range(m)]
        chosen = mis_from_colors([ids[v] for v in order], nbrs, plan)
        return {order[i] for i in chosen}, spaced_radius(n, 1, id_bound, max(ids))
    half = L // 2
    inner, _ = spaced_independent_set(n, ids, half, id_bound, order)
    pos = {v: i for i, v in enumerate(order)}
    marks = sorted(pos[v] for v in inner)
    k = len(marks)
    ring = Ring(k, True)
    nbrs = [ring.nbrs(i) for i in range(k)]
    chosen = mis_from_colors([ids[order[i]] for i in marks], nbrs, plan)
    sel = sorted(marks[i] for i in chosen)
    result = set(order[i] for i in sel)
    for j, a in enumerate(sel):
        b = sel[(j + 1) % len(sel)]
        z = (b - a - 1) % m if len(sel) > 1 else m - 1
        if z <= 2 * L:
            continue
        sizes = _split_sizes(z, L, 2 * L)
        gap = [order[(a + 1 + t) % m] for t in range(z)]
        # cut from the end next to the larger identifier
        if ids[order[b]] > ids[order[a]]:
            gap.reverse()
        t = 0
        for s in sizes[:-1]:
            t += s
            result.add(gap[t])
            t += 1
    return result, spaced_radius(n, L, id_bound, max(ids))


def ruling_spacing(s: int, k: int) -> int:
    return 2 * (s - 1) + max(k * (s + k + 1), (k + s) * (k + s - 1) - s)


def ruling_radius(n: int, s: int, k: int, id_bound: int = 4) -> int:
    L = ruling_spacing(s, k)
    return spaced_radius(n, L, id_bound) + s + 2 * L + 2


def _ab_split(z: int, s: int, k: int):
    """B sizes for a path of z nodes cut into B, A, B, ..., B with |A| = s and |B| in [k, k+1]."""
    p = max(1, -(-(z + s) // (k + s + 1)))
    while p * (k + s) <= z + s:
        extra = z + s - p * (k + s)
        if extra <= p:
            return [k + 1] * extra + [k] * (p - extra)
        p += 1
    return None


@dataclass
class Decomposition:
    in_a: list  # per node
    a_components: list  # node lists in cycle order
    b_components: list
    radius: int


def ruling_decomposition(instance: Instance, s: int, k: int, id_bound: int = 4) -> Decomposition:
    """V = A u B with A components of exactly s nodes and B components of k or k+1 nodes."""
    n, ids = instance.n, list(instance.ids)
    if not instance.cyclic:
        raise LclError("ruling decomposition is defined on cycles")
    if not 1 <= s <= k or s + k > n:
        raise LclError("need 1 <= s <= k and s + k <= n")
    L = ruling_spacing(s, k)
    in_a = [False] * n
    if n >= L + 1:
        ind, _ = spaced_independent_set(n, ids, L, id_bound)
        rad = ruling_radius(n, s, k, id_bound)
        starts = []
        for v in sorted(ind):
            # S_v runs from v towards its neighbor with the larger identifier
            step = 1 if ids[(v + 1) % n] > ids[(v - 1) % n] else -1
            block = [(v + step * t) % n for t in range(s)]
            starts.append(block)
            for u in block:
                in_a[u] = True
    else:
        sizes = _ab_split(n - s, s, k)
        if sizes is None:
            raise LclError(f"no decomposition of a {n}-cycle into A={s}, B in [{k},{k + 1}]")
        v = max(range(n), key=lambda i: ids[i])
        step = 1 if ids[(v + 1) % n] > ids[(v - 1) % n] else -1
        for t in range(s):
            in_a[(v + step * t) % n] = True
        rad = n
    # cut the remaining gaps into alternating B and A pieces
    gaps = _components(n, [not a for a in in_a])
    for gap in gaps:
        z = len(gap)
        left, right = (gap[0] - 1) % n, (gap[-1] + 1) % n
        if ids[left] > ids[right]:
            gap = gap[::-1]
        sizes = _ab_split(z, s, k)
        if sizes is None:  # pragma: no cover - spacing guarantees a split
            raise AssertionError(f"gap of {z} nodes cannot be split")
        t = 0
        for b in sizes[:-1]:
            t += b
            for u in gap[t:t + s]:
                in_a[u] = True
            t += s
    a_comp = _components(n, in_a)
    b_comp = _components(n, [not a for a in in_a])
    return Decomposition(in_a, a_comp, b_comp, rad)


def _components(n: int, member: list) -> list:
    """Maximal runs of members on the cycle 0..n-1, each in increasing cycle order."""
    if all(member):
        return [list(range(n))]
    start = next(i for i in range(n) if not member[i])
    comps, cur = [], []
    for t in range(1, n + 1):
        v = (start + t) % n
        if member[v]:
            cur.append(v)
        elif cur:
            comps.append(cur)
            cur = []
    if cur:
        comps.append(cur)
    return comps


# ---------------------------------------------------------------------------
# orientation

@dataclass
class Orientation:
    direction: list  # +1 points to index v+1, -1 to v-1 (array frame, for reporting only)
    radius: int


def _runs(direction: list, cyclic: bool) -> list:
    """Maximal same-direction runs as lists of consecutive indices."""
    n = len(direction)
    if cyclic and len(set(direction)) == 1:
        return [list(range(n))]
    if cyclic:
        start = next(i for i in range(n) if direction[i] != direction[i - 1])
    else:
        start = 0
    runs, cur = [], [start]
    for t in range(1, n):
        v = (start + t) % n if cyclic else start + t
        if direction[v] == direction[cur[-1]]:
            cur.append(v)
        else:
            runs.append(cur)
            cur = [v]
    runs.append(cur)
    return runs


def ell_orientation(instance: Instance, ell: int) -> Orientation:
    """Every maximal consistently oriented run has at least `ell` nodes, or there is one run.

    Start by pointing at the larger-ID neighbor. In each phase, for every pair
    of runs whose heads face each other and one of which is shorter than ell,
    the weaker run (shorter, then smaller head ID) turns around and joins the
    other. A short run facing a path end turns around unless the run behind it
    turns as well. The shortest run at least doubles per phase.
    """
    n, ids, cyc = instance.n, instance.ids, instance.cyclic
    if n == 1:
        return Orientation([1], 0)
    d = []
    for v in range(n):
        left = ids[(v - 1) % n] if (cyc or v > 0) else -1
        right = ids[(v + 1) % n] if (cyc or v < n - 1) else -1
        d.append(1 if right > left else -1)
    phases = max(1, math.ceil(math.log2(max(ell, 2)))) + 1
    for _ in range(phases):
        runs = _runs(d, cyc)
        m = len(runs)
        if m == 1:
            break
        flip = set()
        pending_ends = []
        for i, R in enumerate(runs):
            if d[R[0]] == 1:
                j = i + 1 if i + 1 < m else (0 if cyc else None)
            else:
                if i == 0 and not cyc:
                    pending_ends.append((i, 1))
                continue
            if j is None:
                pending_ends.append((i, -1))
                continue
            S = runs[j]
            if len(R) >= ell and len(S) >= ell:
                continue
            kr = (min(len(R), ell), ids[R[-1]])
            ks = (min(len(S), ell), ids[S[0]])
            flip.add(i if kr < ks else j)
        for i, behind in pending_ends:
            if len(runs[i]) < ell and (i + behind) not in flip:
                flip.add(i)
        if not flip:
            break
        for i in flip:
            for v in runs[i]:
                d[v] = -d[v]
    return Orientation(d, ell_orientation_radius(ell))


def ell_orientation_radius(ell: int) -> int:
    phases = max(1, math.ceil(math.log2(max(ell, 2)))) + 1
    return phases * (3 * ell + 3) + 1


# ---------------------------------------------------------------------------
# irregular independent sets and the partition

def independent_set_irregular(word, gamma: int, ell: int, cyclic: bool = False, alphabet=None):
    """(gamma, 2*gamma)-independent set of a directed path (or cycle) in its own order.

    A node's color is the string of the next `ell` input labels; on a segment
    without a factor u^x (|u| <= gamma, |u^x| >= ell) it is unique within
    distance gamma. Nodes too close to the path end to have a color are
    handled by position. Returns (set of positions, radius).
    """
    n = len(word)
    if ell < gamma:
        raise LclError("need ell >= gamma")
    plan_radius = ell + 4 * gamma + 2
    if n <= 2 * gamma:
        return set(), plan_radius
    alpha = list(alphabet) if alphabet is not None else sorted(set(word))
    base = len(alpha) + 1
    idx = {a: i + 1 for i, a in enumerate(alpha)}
    cand = list(range(n)) if cyclic else list(range(0, n - ell + 1))
    colors = {}
    if cand:
        top = base ** (ell - 1)
        c = 0
        for t in range(ell):
            c = c * base + idx[word[t % n]]
        for v in cand:
            colors[v] = c
            c = (c - idx[word[v]] * top) * base + idx[word[(v + ell) % n]] if (cyclic or v + ell < n) else 0
    ring = Ring(n, cyclic)
    sub = {v: i for i, v in enumerate(cand)}
    sub_nbrs = []
    for v in cand:
        row = []
        for u in ring.nbrs(v, gamma):
            if u in sub:
                if colors[u] == colors[v]:
                    raise LclError("segment contains a periodic factor")
                row.append(sub[u])
        sub_nbrs.append(row)
    plan = mis_plan(base ** ell, 2 * gamma)
    chosen = {cand[i] for i in mis_from_colors([colors[v] for v in cand], sub_nbrs, plan)}
    if not cyclic:
        chosen = _fill_path_gaps(n, chosen, gamma)
    return chosen, gamma * plan.rounds + plan_radius


def _fill_path_gaps(n: int, chosen: set, gamma: int) -> set:
    """Repair a path's set so every gap (ends included) has size in [gamma, 2*gamma]."""
    chosen = set(chosen)
    pts = sorted(chosen)
    # drop points that leave an end gap shorter than gamma
    while pts and pts[0] < gamma:
        chosen.discard(pts.pop(0))
    while pts and pts[-1] > n - 1 - gamma:
        chosen.discard(pts.pop())
    bounds = [-1] + pts + [n]
    for a, b in zip(bounds, bounds[1:]):
        z = b - a - 1
        if z > 2 * gamma:
            sizes = _split_sizes(z, gamma, 2 * gamma)
            t = a + 1
            for s in sizes[:-1]:
                t += s
                chosen.add(t)
                t += 1
    return chosen


@dataclass
class Segment:
    nodes: list  # instance positions in the segment's own direction
    direction: int  # +1 if nodes run with increasing positions
    kind: str  # "short" or "long"
    pattern: tuple = ()  # long: primitive w with inputs w^k in segment direction
    cyclic: bool = False

    @property
    def ranks(self) -> dict:
        return {v: i + 1 for i, v in enumerate(self.nodes)}


@dataclass
class PartitionResult:
    segments: list
    radius: int


def is_primitive(w) -> bool:
    w = tuple(w)
    k = len(w)
    return k > 0 and all(w != w[p:] + w[:p] for p in range(1, k) if k % p == 0)


def _long_pieces(word, ell_width, ell_count, ell_pattern):
    """Ordered primitive-string sweep; returns (start, length, w) of trimmed long pieces."""
    n = len(word)
    xmin = ell_count + 2 * ell_width
    cands = set()
    for p in range(1, ell_pattern + 1):
        run = 0
        for i in range(p, n):
            run = run + 1 if word[i] == word[i - p] else 0
            if run + p >= xmin * p:
                w = tuple(word[i - p + 1:i + 1])
                if is_primitive(w):
                    for t in range(p):
                        cands.add(w[t:] + w[:t])
    free = [True] * n
    pieces = []
    for w in sorted(cands, key=lambda u: (len(u), u)):
        p = len(w)
        i = 0
        while i + p <= n:
            if not free[i] or tuple(word[i:i + p]) != w:
                i += 1
                continue
            j = i
            while j + p <= n and all(free[j:j + p]) and tuple(word[j:j + p]) == w:
                j += p
            x = (j - i) // p
            if x >= xmin:
                for t in range(i, j):
                    free[t] = False
                cut = ell_width * p
                pieces.append((i + cut, j - i - 2 * cut, w))
                i = j
            else:
                i += 1
    return sorted(pieces)


def partition_radius(ell_width: int, ell_count: int, ell_pattern: int, nin: int) -> int:
    gamma = ell_width
    ell_irr = irregular_length(ell_width, ell_count, ell_pattern)
    detect = (ell_count + 2 * ell_width) * ell_pattern + ell_pattern
    plan = mis_plan((nin + 1) ** ell_irr, 2 * gamma)
    orient = ell_orientation_radius(2 * ell_width + 1)
    return orient + detect + ell_irr + 2 * gamma * (plan.rounds + 2)


def irregular_length(ell_width: int, ell_count: int, ell_pattern: int) -> int:
    return max((ell_pattern + 2 * ell_width) * ell_count, (ell_count + 2 * ell_width + 1) * ell_pattern)


def partition(instance: Instance, ell_width: int, ell_count: int, ell_pattern: int,
              alphabet=None) -> PartitionResult:
    """(ell_width, ell_count, ell_pattern)-partition of a cycle (or path).

    Segments are directed paths that are either short (ell_width to
    2*ell_width nodes) or long (a primitive pattern repeated at least
    ell_count times); a fully periodic cycle may be a single long segment.
    """
    n = instance.n
    if ell_pattern < ell_width or ell_width < 1 or ell_count < ell_width:
        raise LclError("need ell_pattern >= ell_width >= 1 and ell_count >= ell_width")
    if n <= 2 * ell_width:
        raise LclError("instance too small for the partition")
    word = list(instance.inputs)
    ids = list(instance.ids)
    alphabet = sorted(set(word)) if alphabet is None else list(alphabet)
    gamma = ell_width
    ell_irr = irregular_length(ell_width, ell_count, ell_pattern)
    ori = ell_orientation(instance, 2 * ell_width + 1)
    radius = partition_radius(ell_width, ell_count, ell_pattern, len(alphabet))
    runs = _runs(ori.direction, instance.cyclic)
    uniform_cycle = instance.cyclic and len(runs) == 1
    if instance.cyclic:
        root = _primitive_root(word)
        if len(root) <= ell_pattern and n // len(root) >= ell_count and \
                (uniform_cycle or n <= 2 * radius + 1):
            dirn = ori.direction[0] if uniform_cycle else 1
            nodes = list(range(n)) if dirn == 1 else [(-i) % n for i in range(n)]
            w = _primitive_root([word[v] for v in nodes])
            return PartitionResult([Segment(nodes, dirn, "long", w, cyclic=True)], radius)
    segs = []
    for run_nodes in runs:
        dirn = ori.direction[run_nodes[0]]
        nodes = run_nodes if dirn == 1 else run_nodes[::-1]
        if uniform_cycle:
            cut = _cycle_cut([word[v] for v in nodes], [ids[v] for v in nodes],
                             ell_count + 2 * ell_width, ell_pattern)
            nodes = nodes[cut:] + nodes[:cut]
        rw = [word[v] for v in nodes]
        pieces = _long_pieces(rw, ell_width, ell_count, ell_pattern)
        covered = [False] * len(nodes)
        for st, ln, w in pieces:
            segs.append(Segment([nodes[t] for t in range(st, st + ln)], dirn, "long", w))
            for t in range(st, st + ln):
                covered[t] = True
        # irregular stretches of this run
        stretches = []
        cur = []
        for t in range(len(nodes)):
            if covered[t]:
                if cur:
                    stretches.append(cur)
                    cur = []
            else:
                cur.append(t)
        if cur:
            stretches.append(cur)
        whole = uniform_cycle and not pieces
        if whole:
            stretches = [list(range(n))]
        for st in stretches:
            sw = [rw[t] for t in st]
            if whole:
                try:
                    chosen, _ = independent_set_irregular(sw, gamma, ell_irr, cyclic=True, alphabet=alphabet)
                except LclError:
                    if n > 2 * radius + 1:
                        raise
                    chosen = _global_cuts(n, gamma, st.index(max(st, key=lambda t: ids[nodes[t]])))
                cut_pts = sorted(chosen)
                pieces_idx = []
                for a, b in zip(cut_pts, cut_pts[1:] + [cut_pts[0] + len(st)]):
                    pieces_idx.append([(a + t) % len(st) for t in range(b - a)])
            else:
                chosen, _ = independent_set_irregular(sw, gamma, ell_irr, alphabet=alphabet)
                cut_pts = sorted(chosen)
                bounds = [0] + cut_pts + [len(st)]
                pieces_idx = [list(range(a, b)) for a, b in zip(bounds, bounds[1:]) if b > a]
            for piece in pieces_idx:
                if len(piece) > 2 * gamma:
                    h = gamma
                    parts = [piece[:h], piece[h:]]
                else:
                    parts = [piece]
                for part in parts:
                    segs.append(Segment([nodes[st[t]] for t in part], dirn, "short"))
    return PartitionResult(segs, radius)


def _global_cuts(n: int, gamma: int, start: int) -> set:
    """Cut points with gaps in [gamma, 2*gamma] for a cycle seen as a whole."""
    p = -(-n // (2 * gamma))
    base, extra = divmod(n, p)
    cuts, t = set(), start
    for i in range(p):
        cuts.add(t % n)
        t += base + (1 if i < extra else 0)
    return cuts


def _primitive_root(word) -> tuple:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and all(word[i] == word[i % p] for i in range(n)):
            return tuple(word[:p])
    return tuple(word)


def _cycle_cut(word, ids, xmin: int, ell_pattern: int) -> int:
    """Start for a directed cycle: the largest-ID node outside every long periodic stretch."""
    n = len(word)
    covered = [False] * n
    ext = list(word) * 3
    for p in range(1, ell_pattern + 1):
        run = 0
        for i in range(p, 3 * n):
            run = run + 1 if ext[i] == ext[i - p] else 0
            if run + p >= xmin * p:
                for t in range(i - run - p + 1, i + 1):
                    covered[t % n] = True
    free = [v for v in range(n) if not covered[v]] or list(range(n))
    return max(free, key=lambda v: ids[v])
