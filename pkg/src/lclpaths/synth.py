"""Distributed algorithms built from feasible functions."""
from __future__ import annotations

from .core import Instance, LclError, LclProblem, solve_instance
from .decider import FeasibleFunctionConst, FeasibleFunctionLogstar
from .local import (ViewAlgorithm, partition, partition_radius, ruling_decomposition,
                    ruling_radius, ruling_spacing)
from .pathtypes import TypeAutomaton, _boundary_positions, build_type_automaton, pump_decomposition
from .core import complete_path


def _global(problem, instance):
    """Whole-view rule: lex-least solution read from the largest ID towards its larger neighbor."""
    n, ids = instance.n, instance.ids
    if instance.cyclic and n > 1:
        v = max(range(n), key=lambda i: ids[i])
        step = 1 if problem.oriented or ids[(v + 1) % n] > ids[(v - 1) % n] else -1
        perm = [(v + step * t) % n for t in range(n)]
    elif not problem.oriented and n > 1 and ids[0] > ids[-1]:
        perm = list(range(n))[::-1]
    else:
        perm = list(range(n))
    view = Instance(instance.topology, [instance.inputs[i] for i in perm], [ids[i] for i in perm])
    lab = solve_instance(problem, view)
    if lab is None:
        raise LclError("instance has no valid labeling")
    out = [None] * n
    for i, o in zip(perm, lab.outputs):
        out[i] = o
    return out


def _fill(ck, ins, fixed, check, reverse):
    """Lex-least completion read in the given direction."""
    if reverse:
        out = complete_path(ck, ins[::-1], fixed[::-1], check[::-1])
        return None if out is None else out[::-1]
    return complete_path(ck, ins, fixed, check)


def synth_logstar_algorithm(problem: LclProblem, f: FeasibleFunctionLogstar,
                            aut: TypeAutomaton = None, id_bound: int = 4) -> ViewAlgorithm:
    r, ell = problem.radius, f.ell
    aut = aut or build_type_automaton(problem)
    ck = problem.checker
    s, k = 2 * r, 2 * ell
    L = ruling_spacing(max(s, 1), k)

    def radius(n):
        if r == 0:
            return 0
        return ruling_radius(n, s, k, id_bound) + 2 * ell + 2 * r + 2

    def batch(instance: Instance):
        n = instance.n
        if r == 0:
            return _global(problem, instance)
        if not instance.cyclic or n < s + k:
            return _global(problem, instance)
        try:
            dec = ruling_decomposition(instance, s, k, id_bound)
        except LclError:
            if n > L:
                raise
            return _global(problem, instance)
        ids = instance.ids
        codes = ck.encode_inputs(instance.inputs)
        out = [-1] * n
        left_half, right_half = {}, {}
        for comp in dec.b_components:
            a, b = (comp[0] - 1) % n, (comp[-1] + 1) % n
            h = len(comp) // 2
            cut = h if (len(comp) % 2 == 0 or ids[b] > ids[a]) else h + 1
            first, second = comp[:cut], comp[cut:]
            right_half[a] = first  # follows the A block ending at a
            left_half[b] = second  # precedes the A block starting at b
        for S in dec.a_components:
            w1 = [codes[v] for v in left_half[S[0]]]
            w2 = [codes[v] for v in right_half[S[-1]]]
            sc = [codes[v] for v in S]
            if problem.oriented or ids[S[-1]] > ids[S[0]]:
                lab = f.labels(aut.run(w1), sc, aut.run(w2))
            else:
                lab = f.labels(aut.run(w2[::-1]), sc[::-1], aut.run(w1[::-1]))[::-1]
            for v, o in zip(S, lab):
                out[v] = o
        for comp in dec.b_components:
            a, b = (comp[0] - 1) % n, (comp[-1] + 1) % n
            span = [(comp[0] - s + t) % n for t in range(s)] + comp + [(b + t) % n for t in range(s)]
            ins = [codes[v] for v in span]
            fixed = [out[v] if i < s or i >= s + len(comp) else -1 for i, v in enumerate(span)]
            check = [s - r <= i < s + len(comp) + r for i in range(len(span))]
            rev = not problem.oriented and ids[a] > ids[b]
            fill = _fill(ck, ins, fixed, check, rev)
            if fill is None:
                raise AssertionError("feasible function left a gap unfillable")
            for i, v in enumerate(comp):
                out[v] = fill[s + i]
        return [problem.sigma_out[o] for o in out]

    return ViewAlgorithm(f"logstar[{problem.name}]", radius, batch,
                         params={"s": s, "k": k, "spacing": L, "ell_pump": ell})


def synth_const_algorithm(problem: LclProblem, f: FeasibleFunctionConst,
                          aut: TypeAutomaton = None) -> ViewAlgorithm:
    r, ell = problem.radius, f.ell
    aut = aut or build_type_automaton(problem)
    ck = problem.checker
    lw, lc, lp = ell, 2 * ell + 2 * r, ell
    base = partition_radius(lw, lc, lp, len(problem.sigma_in))
    T = base + 4 * ell * lp + 4 * lw + 2 * r

    def radius(n):
        return 0 if r == 0 else T

    def batch(instance: Instance):
        n = instance.n
        if r == 0:
            return _global(problem, instance)  # lex-least per node, reads only its own input
        if not instance.cyclic or n <= 2 * lw:
            return _global(problem, instance)
        try:
            part = partition(instance, lw, lc, lp, alphabet=problem.sigma_in)
        except LclError:
            if n > 2 * T + 1:
                raise
            return _global(problem, instance)
        codes = ck.encode_inputs(instance.inputs)
        segs = part.segments
        if len(segs) == 1 and segs[0].cyclic:
            sg = segs[0]
            pat = ck.encode_inputs(sg.pattern)
            lab = list(f(pat)) * (n // len(pat))
            out = [-1] * n
            for v, o in zip(sg.nodes, lab):
                out[v] = o
            return [problem.sigma_out[o] for o in out]
        owner = {}
        for i, sg in enumerate(segs):
            for v in sg.nodes:
                owner[v] = i
        # walk the cycle in index order starting at a segment boundary
        start = next(v for v in range(n) if owner[v] != owner[(v - 1) % n])
        order, seen = [], set()
        for t in range(n):
            i = owner[(start + t) % n]
            if i not in seen:
                seen.add(i)
                order.append(i)
        def instance_labels(sg):
            return [instance.inputs[v] for v in sg.nodes]

        lead = [max(instance.ids[v] for v in sg.nodes) for sg in segs]
        # virtual cycle: per segment a list of (input, fixed output), in index order
        vin, vfix, vseg = [], [], []
        for i in order:
            sg = segs[i]
            u = [codes[v] for v in sg.nodes]
            if sg.kind == "long":
                w = ck.encode_inputs(sg.pattern)
                reps = len(u) // len(w)
                fw = f(w)
                lab = [-1] * len(u)
                for c in range(ell, reps - ell):
                    lab[c * len(w):(c + 1) * len(w)] = fw
                vi = u
            else:
                x, y, z = (ck.encode_inputs(t) for t in pump_decomposition(aut, instance_labels(sg)))
                vi = list(x) + list(y) * lc + list(z)
                lab = [-1] * len(vi)
                fy = f(tuple(y))
                off = len(x) + ell * len(y)
                for c in range(2 * r):
                    lab[off + c * len(y):off + (c + 1) * len(y)] = fy
            if sg.direction == -1:
                vi, lab = vi[::-1], lab[::-1]
            vin += vi
            vfix += lab
            vseg += [i] * len(vi)
        m = len(vin)
        vout = list(vfix)
        first = next(j for j in range(m) if vfix[j] >= 0)
        j = 0
        while j < m:
            p = (first + j) % m
            if vout[p] >= 0:
                j += 1
                continue
            st = j
            while j < m and vout[(first + j) % m] < 0:
                j += 1
            gap = [(first + t) % m for t in range(st, j)]
            lo = [(gap[0] - s_) % m for s_ in range(2 * r, 0, -1)]
            hi = [(gap[-1] + s_) % m for s_ in range(1, 2 * r + 1)]
            span = lo + gap + hi
            ins = [vin[q] for q in span]
            fixed = [vout[q] if t < 2 * r or t >= 2 * r + len(gap) else -1 for t, q in enumerate(span)]
            check = [r <= t < len(span) - r for t in range(len(span))]
            a_seg, b_seg = vseg[lo[-1]], vseg[hi[0]]
            rev = not problem.oriented and lead[a_seg] > lead[b_seg]
            fill = _fill(ck, ins, fixed, check, rev)
            if fill is None:
                raise AssertionError("feasible function left a gap unfillable")
            for t, q in enumerate(gap):
                vout[q] = fill[2 * r + t]
        # map back to the real cycle
        out = [-1] * n
        pos = 0
        for i in order:
            sg = segs[i]
            length = 0
            while pos + length < m and vseg[pos + length] == i:
                length += 1
            block = vout[pos:pos + length]
            pos += length
            own = block if sg.direction == 1 else block[::-1]
            if sg.kind == "long":
                for v, o in zip(sg.nodes, own):
                    out[v] = o
                continue
            u = [codes[v] for v in sg.nodes]
            K = len(u)
            fixed_pos, checked = _boundary_positions(K, r)
            fixed = [-1] * K
            for q in fixed_pos:
                fixed[q] = own[q] if q < 2 * r else own[len(own) - (K - q)]
            check = [False] * K
            for c in checked:
                check[c] = True
            fill = complete_path(ck, u, fixed, check)
            if fill is None:
                raise AssertionError("pumped segment does not map back")
            for v, o in zip(sg.nodes, fill):
                out[v] = o
        return [problem.sigma_out[o] for o in out]

    return ViewAlgorithm(f"constant[{problem.name}]", radius, batch,
                         params={"ell_width": lw, "ell_count": lc, "ell_pattern": lp})


def global_algorithm(problem: LclProblem) -> ViewAlgorithm:
    """Whole-instance rule; its radius is the instance size."""
    return ViewAlgorithm(f"global[{problem.name}]", lambda n: n,
                         lambda instance: _global(problem, instance))


def synthesize(problem: LclProblem, classification, aut: TypeAutomaton = None) -> ViewAlgorithm:
    from .decider import CONSTANT, LOGSTAR
    if classification.cls == CONSTANT:
        return synth_const_algorithm(problem, classification.certificate, aut)
    if classification.cls == LOGSTAR:
        return synth_logstar_algorithm(problem, classification.certificate, aut)
    return global_algorithm(problem)
