"""Command line entry point.

Every subcommand prints one JSON report on stdout (or to --json-out) and a
short human summary on stderr. Reports are deterministic for fixed inputs and
seed; wall-clock timings are only added with --timings.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import __version__
from .codec import CodecError, decode, dumps, instance_to_json, problem_to_json
from .core import CYCLE, PATH, ID_BOUND, Instance, LclError, random_ids, random_instance
from .decider import EXIT_CODES, Budget, _digest, classify
from .local import run
from .pathtypes import build_type_automaton, periodic_pump_params, pump_decomposition, type_of

EX_USAGE, EX_DATAERR, EX_SOFTWARE = 64, 65, 70
REPORT_VERSION = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str, kind: str):
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as e:
        raise CodecError(f"cannot read {path}: {e.strerror}") from None
    return decode(data, kind)


def _read_any(path: str):
    """A problem file or an LBA file, told apart by the delta table."""
    try:
        with open(path, "rb") as fh:
            doc = json.loads(fh.read().decode("utf-8"))
    except OSError as e:
        raise CodecError(f"cannot read {path}: {e.strerror}") from None
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CodecError(f"{path}: invalid JSON: {e}") from None
    kind = "lba" if isinstance(doc, dict) and "delta" in doc else "problem"
    return kind, decode(doc, kind)


def _budget(args) -> Budget:
    return Budget(max_nodes=args.budget_nodes, max_secs=args.budget_secs)


def _words(text: str) -> list:
    """'a,b,a' or 'aba' (single-character labels)."""
    if text is None:
        return None
    return text.split(",") if "," in text else list(text)


# ---------------------------------------------------------------- commands

def cmd_classify(args):
    problem = _read(args.problem, "problem")
    c = classify(problem, _budget(args))
    doc = c.to_json()
    doc["problem_digest"] = _digest(problem_to_json(problem))
    summary = f"{problem.name}: {c.cls} (ell_pump={c.ell_pump})"
    return doc, EXIT_CODES[c.cls], summary


def _solve_problem(args, problem, instance):
    from .synth import synthesize
    c = classify(problem, _budget(args))
    aut = build_type_automaton(problem)
    alg = synthesize(problem, c, aut)
    res = run(alg, problem, instance, mode=args.mode)
    doc = {"class": c.cls, "algorithm": alg.name, "params": alg.params,
           "outputs": list(res.labeling.outputs), "measured_radius": res.measured_radius,
           "violations": res.violations}
    if c.certificate is not None:
        doc["certificate_digest"] = c.to_json()["certificate"]["digest"]
    code = EX_SOFTWARE if res.violations else EXIT_CODES[c.cls]
    return doc, code


def _solve_lba(args, m, instance):
    from .lba import canonical_pi_solver, compile_pi, global_pi_solution, lba_run
    pi = compile_pi(m, args.B)
    ex = lba_run(pi.machine)
    if ex.status == "HALTED":
        alg = canonical_pi_solver(pi.machine)
        res = run(alg, pi, instance, mode=args.mode)
        outs, radius, viol, name = list(res.labeling.outputs), res.measured_radius, res.violations, alg.name
    else:
        outs = global_pi_solution(pi, instance.inputs)
        radius, name = instance.n, f"global[{pi.name}]"
        viol = pi.violations(instance.inputs, outs)
    doc = {"machine": pi.machine.name, "B": pi.B, "status": ex.status, "algorithm": name,
           "outputs": outs, "measured_radius": radius, "violations": viol}
    return doc, (EX_SOFTWARE if viol else 0)


def cmd_solve(args):
    kind, obj = _read_any(args.problem)
    instance = _read(args.instance, "instance")
    if kind == "lba":
        doc, code = _solve_lba(args, obj, instance)
    else:
        for j, a in enumerate(instance.inputs):
            if a not in obj.sigma_in:
                raise CodecError(f"unknown input label {a!r}", ("inputs", j))
        doc, code = _solve_problem(args, obj, instance)
    summary = f"n={instance.n}: radius {doc['measured_radius']}, {len(doc['violations'])} violations"
    return doc, code, summary


def cmd_simulate(args):
    problem = _read(args.problem, "problem")
    if args.instance:
        instance = _read(args.instance, "instance")
    else:
        if args.n is None:
            raise UsageError("simulate needs --instance or --n")
        rng = random.Random(args.seed)
        instance = random_instance(problem, args.n, rng, args.topology, args.id_bound)
    if args.cert:
        try:
            with open(args.cert, "rb") as fh:
                cert = json.loads(fh.read())
        except OSError as e:
            raise CodecError(f"cannot read {args.cert}: {e.strerror}") from None
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            raise CodecError(f"{args.cert}: invalid JSON: {e}") from None
    doc, code = _solve_problem(args, problem, instance)
    if args.cert:
        want = (cert.get("certificate") or {}).get("digest")
        if want != doc.get("certificate_digest"):
            raise CodecError(f"{args.cert}: certificate digest does not match the classification")
    doc["instance"] = instance_to_json(instance)
    doc["seed"] = args.seed
    summary = (f"{problem.name} n={instance.n}: {doc['class']}, radius {doc['measured_radius']}, "
               f"{len(doc['violations'])} violations")
    return doc, code, summary


def cmd_types(args):
    problem = _read(args.problem, "problem")
    aut = build_type_automaton(problem)
    doc = {"ell_pump": aut.ell_pump}
    w = _words(args.string)
    if w is not None:
        _check_labels(problem, w)
        doc["string"] = w
        doc["state"] = aut.run_labels(w)
        doc["type"] = type_of(problem, w).summary(problem)
    else:
        doc["states"] = aut.summaries()
    return doc, 0, f"{problem.name}: {aut.ell_pump} types"


def _check_labels(problem, w):
    for j, a in enumerate(w):
        if a not in problem.sigma_in:
            raise CodecError(f"unknown input label {a!r}", ("string", j))


def cmd_pump(args):
    problem = _read(args.problem, "problem")
    aut = build_type_automaton(problem)
    w = _words(args.string)
    _check_labels(problem, w)
    doc = {"ell_pump": aut.ell_pump, "string": w}
    if len(w) >= aut.ell_pump:
        x, y, z = pump_decomposition(aut, w)
        doc.update(x=list(x), y=list(y), z=list(z))
        doc["type_state"] = aut.run_labels(w)
    else:
        doc["note"] = "shorter than the pumping length"
    if w:
        a, b = periodic_pump_params(aut, w)
        doc["periodic"] = {"a": a, "b": b}
    return doc, 0, f"{problem.name}: |w|={len(w)}, ell_pump={aut.ell_pump}"


def cmd_compile_lba(args):
    from .lba import compile_pi, halting_steps, lba_run
    m = _read(args.lba, "lba")
    pi = compile_pi(m, args.B, closure=not args.literal)
    doc = pi.summary()
    doc["closure"] = pi.closure
    ex = lba_run(pi.machine)
    doc["status"] = ex.status
    if ex.status == "HALTED":
        T = len(halting_steps(pi.machine))
        doc["T"] = T
        doc["solver_radius"] = 2 + (pi.B + 1) * T
    doc["digest"] = _digest(doc)
    return doc, 0, f"{pi.name}: |in|={len(pi.sigma_in)}, |out|={len(pi.sigma_out)}, {ex.status}"


def cmd_encode_good_input(args):
    from .lba import corrupt, encode_good_input
    m = _read(args.lba, "lba")
    if args.B is not None:
        m = m.with_bound(args.B)
    if args.corrupt:
        labels = corrupt(m, args.corrupt, phi=args.phi)
    else:
        labels = encode_good_input(m, phi=args.phi, n=args.n)
    rng = random.Random(args.seed)
    inst = Instance(PATH, labels, random_ids(len(labels), rng, args.id_bound))
    doc = instance_to_json(inst)
    return doc, 0, f"{m.name} B={m.B}: {len(labels)} nodes"


def cmd_normalize(args):
    from .lba import compile_pi, encode_good_input, halting_steps, lba_run, solve_pi
    from .normalize import ERROR_MARKS, from_pi, normalize, summary
    m = _read(args.lba, "lba")
    pi = compile_pi(m, args.B)
    st2 = normalize(from_pi(pi))
    doc = summary(st2)
    doc["machine"] = pi.machine.name
    doc["B"] = pi.B
    if lba_run(pi.machine).status == "HALTED":
        doc["stage2_radius"] = st2.radius(2 + (pi.B + 1) * len(halting_steps(pi.machine)))
    if args.encode:
        labels = encode_good_input(pi.machine, phi=args.phi, n=args.n)
        bits = st2.encode(labels)
        if args.flip is not None:
            if not 0 <= args.flip < len(bits):
                raise UsageError(f"--flip must lie in [0, {len(bits)})")
            bits[args.flip] ^= 1

        def inner(xs):
            return st2.inner.lift(xs, solve_pi(pi.machine, xs))
        outs = st2.solve(bits, inner)
        viol = st2.violations(bits, outs)
        marks = {k: sum(1 for _, o in outs if o == k) for k in ERROR_MARKS}
        doc["instance"] = {"n": len(bits), "bits": "".join(map(str, bits)),
                           "error_marks": marks, "violations": viol}
        code = EX_SOFTWARE if viol else 0
    else:
        code = 0
    return doc, code, f"alpha={doc['alpha']} gamma={doc['gamma']} beta'={doc['beta_prime']}"


RAW_COMMANDS = ("encode-good-input",)

COMMANDS = {
    "classify": cmd_classify, "solve": cmd_solve, "simulate": cmd_simulate, "types": cmd_types,
    "pump": cmd_pump, "compile-lba": cmd_compile_lba, "encode-good-input": cmd_encode_good_input,
    "normalize": cmd_normalize,
}


def build_parser() -> argparse.ArgumentParser:
    from .lba import CORRUPTIONS
    def globals_(suppress):
        g = _Parser(add_help=False)
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g.add_argument("--seed", type=int, default=d(0))
        g.add_argument("--threads", type=int, default=d(1), help="accepted; all work runs on one thread")
        g.add_argument("--budget-nodes", type=int, default=d(10 ** 7))
        g.add_argument("--budget-secs", type=float, default=d(300.0))
        g.add_argument("--id-bound", type=int, default=d(ID_BOUND), help="ids are drawn from [1, id_bound*n]")
        g.add_argument("--json-out", metavar="PATH", default=d(None))
        g.add_argument("--timings", action="store_true", default=d(False),
                       help="add wall-clock timings to the report")
        return g

    # global flags may appear before or after the subcommand
    g = globals_(True)
    p = _Parser(prog="lclpaths", parents=[globals_(False)], description="LCL problems on paths and cycles")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, parents=[g], help=help_)

    s = add("classify", "decide the deterministic complexity class")
    s.add_argument("problem")
    for name in ("solve", "simulate"):
        s = add(name, "run the synthesized algorithm" if name == "solve" else "run on seeded instances")
        s.add_argument("problem")
        if name == "solve":
            s.add_argument("instance")
            s.add_argument("--B", type=int)
        else:
            s.add_argument("--instance")
            s.add_argument("--cert", help="classification report to check against")
            s.add_argument("--n", type=int)
            s.add_argument("--topology", choices=(CYCLE, PATH), default=CYCLE)
        s.add_argument("--mode", choices=("batch", "view"), default="batch")
    s = add("types", "type automaton summary, or the type of --string")
    s.add_argument("problem")
    s.add_argument("--string")
    s = add("pump", "pumping decomposition of a string")
    s.add_argument("problem")
    s.add_argument("--string", required=True)
    s = add("compile-lba", "compile an LBA file into its path problem")
    s.add_argument("lba")
    s.add_argument("--B", type=int)
    s.add_argument("--literal", action="store_true", help="omit the closure clauses")
    s = add("encode-good-input", "instance holding the execution of an LBA")
    s.add_argument("lba")
    s.add_argument("--B", type=int)
    s.add_argument("--phi", choices=("a", "b"), default="a")
    s.add_argument("--n", type=int)
    s.add_argument("--corrupt", choices=CORRUPTIONS)
    s = add("normalize", "normalize the compiled problem of an LBA")
    s.add_argument("lba")
    s.add_argument("--B", type=int)
    s.add_argument("--encode", action="store_true", help="also encode and solve a good input")
    s.add_argument("--phi", choices=("a", "b"), default="a")
    s.add_argument("--n", type=int)
    s.add_argument("--flip", type=int, help="flip this bit of the encoding")
    return p


def _report(args, doc: dict, elapsed: float) -> dict:
    meta = {"tool": "lclpaths", "version": __version__, "report_version": REPORT_VERSION,
            "command": args.command, "seed": args.seed,
            "budget": {"nodes": args.budget_nodes, "secs": args.budget_secs}}
    out = dict(doc)
    out["digest"] = _digest(doc)
    if args.timings:
        meta["timings"] = {"wall_secs": round(elapsed, 6)}
    out["meta"] = meta
    return out


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        for flag in ("budget_nodes", "budget_secs", "threads", "id_bound"):
            if getattr(args, flag) <= 0:
                raise UsageError(f"--{flag.replace('_', '-')} must be positive")
        if args.seed < 0:
            raise UsageError("--seed must be non-negative")
    except UsageError as e:
        print(f"lclpaths: usage error: {e}", file=stderr)
        return EX_USAGE
    t0 = time.monotonic()
    try:
        doc, code, summary = COMMANDS[args.command](args)
    except UsageError as e:
        print(f"lclpaths: usage error: {e}", file=stderr)
        return EX_USAGE
    except LclError as e:  # includes CodecError
        print(f"lclpaths: {e}", file=stderr)
        return EX_DATAERR
    if args.command in RAW_COMMANDS:
        report = dumps(doc)  # a plain data file, readable by the other subcommands
    else:
        report = dumps(_report(args, doc, time.monotonic() - t0))
    if args.json_out:
        try:
            with open(args.json_out, "wb") as fh:
                fh.write(report)
        except OSError as e:
            print(f"lclpaths: cannot write {args.json_out}: {e.strerror}", file=stderr)
            return EX_DATAERR
    else:
        out = getattr(stdout, "buffer", None)
        if out is not None:
            out.write(report)
            out.flush()
        else:
            stdout.write(report.decode("utf-8"))
    print(summary, file=stderr)
    return code


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
