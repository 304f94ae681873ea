"""JSON codecs for problems, normalized problems, instances and LBA machines."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema

from .core import Instance, LclError, LclProblem, NormalizedLcl


class CodecError(LclError):
    def __init__(self, message, path=()):
        self.path = tuple(path)
        where = "/".join(str(p) for p in self.path)
        super().__init__(f"{where}: {message}" if where else message)


@lru_cache(maxsize=None)
def schema(name: str) -> dict:
    text = resources.files("lclpaths").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def _validate(doc, name):
    v = jsonschema.Draft202012Validator(schema(name))
    errs = sorted(v.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errs:
        e = errs[0]
        raise CodecError(e.message, e.absolute_path)


def _load(data):
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    if isinstance(data, str):
        try:
            return json.loads(data)
        except json.JSONDecodeError as e:
            raise CodecError(f"invalid JSON: {e}") from None
    return data


def dumps(doc) -> bytes:
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")


def problem_to_json(p: LclProblem) -> dict:
    windows = sorted(p.windows, key=lambda w: (len(w[0]), w[1], w[0]))
    return {"name": p.name, "sigma_in": list(p.sigma_in), "sigma_out": list(p.sigma_out),
            "radius": p.radius, "oriented": p.oriented,
            "windows": [{"cells": [list(c) for c in cells], "center": center}
                        for cells, center in windows]}


def problem_from_json(doc) -> LclProblem:
    doc = _load(doc)
    _validate(doc, "problem")
    ins, outs = set(doc["sigma_in"]), set(doc["sigma_out"])
    for k, w in enumerate(doc["windows"]):
        for j, (a, b) in enumerate(w["cells"]):
            if a not in ins:
                raise CodecError(f"unknown input label {a!r}", ("windows", k, "cells", j, 0))
            if b not in outs:
                raise CodecError(f"unknown output label {b!r}", ("windows", k, "cells", j, 1))
    try:
        return LclProblem(doc["name"], doc["sigma_in"], doc["sigma_out"], doc["radius"],
                          frozenset((tuple(map(tuple, w["cells"])), w["center"]) for w in doc["windows"]),
                          doc["oriented"])
    except LclError as e:
        raise CodecError(str(e), ("windows",)) from None


def normalized_to_json(p: NormalizedLcl) -> dict:
    return {"sigma_in": list(p.sigma_in), "sigma_out": list(p.sigma_out),
            "c_in_out": [list(x) for x in sorted(p.c_in_out)],
            "c_out_out": [list(x) for x in sorted(p.c_out_out)]}


def normalized_from_json(doc) -> NormalizedLcl:
    doc = _load(doc)
    _validate(doc, "normalized")
    outs = set(doc["sigma_out"])
    for key in ("c_in_out", "c_out_out"):
        for k, pair in enumerate(doc[key]):
            for j, lab in enumerate(pair):
                if (key == "c_out_out" or j == 1) and lab not in outs:
                    raise CodecError(f"unknown output label {lab!r}", (key, k, j))
                if key == "c_in_out" and j == 0 and lab not in ("0", "1"):
                    raise CodecError(f"unknown input label {lab!r}", (key, k, j))
    return NormalizedLcl(doc["sigma_out"], doc["c_in_out"], doc["c_out_out"])


def instance_to_json(inst: Instance) -> dict:
    return {"topology": inst.topology, "inputs": list(inst.inputs), "ids": list(inst.ids)}


def instance_from_json(doc, problem: LclProblem = None) -> Instance:
    doc = _load(doc)
    _validate(doc, "instance")
    if problem is not None:
        for j, a in enumerate(doc["inputs"]):
            if a not in problem.sigma_in:
                raise CodecError(f"unknown input label {a!r}", ("inputs", j))
    try:
        return Instance(doc["topology"], doc["inputs"], doc.get("ids"))
    except LclError as e:
        raise CodecError(str(e), ("ids",)) from None


def encode(obj) -> bytes:
    from .lba import LbaMachine, lba_to_json
    if isinstance(obj, LclProblem):
        return dumps(problem_to_json(obj))
    if isinstance(obj, NormalizedLcl):
        return dumps(normalized_to_json(obj))
    if isinstance(obj, Instance):
        return dumps(instance_to_json(obj))
    if isinstance(obj, LbaMachine):
        return dumps(lba_to_json(obj))
    raise TypeError(f"cannot encode {type(obj).__name__}")


def decode(data, kind: str):
    """kind is one of problem, normalized, instance, lba."""
    from .lba import lba_from_json
    readers = {"problem": problem_from_json, "normalized": normalized_from_json,
               "instance": instance_from_json, "lba": lba_from_json}
    if kind not in readers:
        raise ValueError(f"unknown kind {kind!r}")
    return readers[kind](data)


def validate_report(doc, command: str):
    """Check a CLI report against the published schema of its subcommand."""
    if command == "encode-good-input":
        _validate(_load(doc), "instance")
        return
    full = schema("report")
    if command not in full["$defs"]:
        raise ValueError(f"no report schema for {command!r}")
    sub = {"$defs": full["$defs"], "$ref": f"#/$defs/{command}"}
    errs = sorted(jsonschema.Draft202012Validator(sub).iter_errors(_load(doc)),
                  key=lambda e: list(e.absolute_path))
    if errs:
        raise CodecError(errs[0].message, errs[0].absolute_path)
