"""Brute-force references shared by the tests; none of them call the engines they check."""
import itertools


def window_ok(problem, cells, center):
    w = (tuple(cells), center)
    if w in problem.windows:
        return True
    return not problem.oriented and (tuple(cells[::-1]), len(cells) - 1 - center) in problem.windows


def path_node_ok(problem, ins, outs, v):
    r = problem.radius
    lo, hi = max(0, v - r), min(len(ins) - 1, v + r)
    return window_ok(problem, [(ins[i], outs[i]) for i in range(lo, hi + 1)], v - lo)


def boundary_positions(k, r):
    """0-based D1 u D2 and D2 u D3 computed from the distance to the nearer end."""
    dist = [min(i, k - 1 - i) for i in range(k)]
    fixed = [i for i in range(k) if dist[i] < 2 * r]
    checked = [i for i in range(k) if dist[i] >= r]
    return fixed, checked


def brute_extendible(problem, ins, boundary):
    k, r = len(ins), problem.radius
    fixed, checked = boundary_positions(k, r)
    free = [i for i in range(k) if i not in fixed]
    for fill in itertools.product(problem.sigma_out, repeat=len(free)):
        outs = [None] * k
        for p, o in zip(fixed, boundary):
            outs[p] = o
        for p, o in zip(free, fill):
            outs[p] = o
        if all(path_node_ok(problem, ins, outs, v) for v in checked):
            return True
    return False


def brute_type(problem, ins):
    """Identity below 4r+1 nodes, else (head, tail, set of extendible boundary labelings)."""
    r = problem.radius
    ins = tuple(ins)
    if len(ins) <= 4 * r:
        return ("short", ins)
    fixed, _ = boundary_positions(len(ins), r)
    table = frozenset(b for b in itertools.product(problem.sigma_out, repeat=len(fixed))
                      if brute_extendible(problem, ins, b))
    return ("long", ins[:2 * r], ins[-2 * r:], table)
