"""Normalization of predecessor-checked path LCLs.

Stage 1 moves the predecessor's input into the output, so that one check
looks at (input, output) and one at (output, predecessor output). Stage 2
encodes every input label in a block of gamma = 2a+3 bits (a = ceil(log2
alpha)) and lets nodes output a window of gamma bits together with the
original output or one of the error markers E_r, E, E_l.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .core import LclError, NormalizedLcl

E_R, E, E_L = "E_r", "E", "E_l"
ERROR_MARKS = (E_R, E, E_L)


@dataclass
class PredecessorLcl:
    """A path LCL whose check sees a node and its predecessor (None at p0)."""
    name: str
    sigma_in: tuple
    sigma_out: tuple
    check: Callable  # check(pred, cur) with pred = (in, out) or None, cur = (in, out)

    def violations(self, inputs, outputs) -> list:
        bad = []
        for i in range(len(inputs)):
            pred = (inputs[i - 1], outputs[i - 1]) if i else None
            if not self.check(pred, (inputs[i], outputs[i])):
                bad.append(i)
        return bad


def from_pi(pi) -> PredecessorLcl:
    """View a compiled LBA problem as a PredecessorLcl on label strings."""
    from .lba import parse

    def check(pred, cur):
        p = None if pred is None else (parse(pred[0]), parse(pred[1]))
        return pi.node_ok(p, (parse(cur[0]), parse(cur[1])))
    return PredecessorLcl(pi.name, tuple(pi.sigma_in), tuple(pi.sigma_out), check)


# ---------------------------------------------------------------- stage 1

@dataclass
class Stage1:
    """Outputs are (input, output) pairs of the base problem."""
    base: PredecessorLcl
    sigma_out: tuple = field(init=False)

    def __post_init__(self):
        self.sigma_out = tuple((i, o) for i in self.base.sigma_in for o in self.base.sigma_out)

    @property
    def sigma_in(self):
        return self.base.sigma_in

    @property
    def alpha(self):
        return len(self.base.sigma_in)

    @property
    def beta(self):
        return len(self.sigma_out)

    def v_in_out(self, inp, out) -> bool:
        return out[0] == inp

    def v_out_out(self, pred_out, out) -> bool:
        return self.base.check(None if pred_out is None else tuple(pred_out), tuple(out))

    def violations(self, inputs, outputs) -> list:
        bad = []
        for i, (x, o) in enumerate(zip(inputs, outputs)):
            if not (self.v_in_out(x, o) and self.v_out_out(outputs[i - 1] if i else None, o)):
                bad.append(i)
        return bad

    def lift(self, inputs, base_outputs) -> list:
        return [(x, o) for x, o in zip(inputs, base_outputs)]


def normalize_stage1(problem: PredecessorLcl) -> Stage1:
    return Stage1(problem)


# ---------------------------------------------------------------- stage 2

def ceil_log2(x: int) -> int:
    return max(0, (x - 1).bit_length())


@dataclass
class Stage2:
    """Binary-input problem built from a stage-1 problem."""
    inner: Stage1

    def __post_init__(self):
        self.a = ceil_log2(self.inner.alpha)
        self.gamma = 2 * self.a + 3
        self._index = {x: k for k, x in enumerate(self.inner.sigma_in)}
        self._outs = set(self.inner.sigma_out)

    @property
    def beta_prime(self) -> int:
        return 2 ** self.gamma * (self.inner.beta + 3)

    # encoding ----------------------------------------------------------
    def block(self, label) -> list:
        a = self.a
        k = self._index[label]
        return [1] * (a + 1) + [0] + [(k >> (a - 1 - t)) & 1 for t in range(a)] + [0]

    def encode(self, labels) -> list:
        bits = []
        for x in labels:
            bits += self.block(x)
        return bits

    def decode(self, bits) -> list:
        g, a = self.gamma, self.a
        if len(bits) % g:
            raise LclError("bit string length is not a multiple of gamma")
        out = []
        for s in range(0, len(bits), g):
            b = bits[s:s + g]
            if b[:a + 1] != [1] * (a + 1) or b[a + 1] != 0 or b[2 * a + 2] != 0:
                raise LclError(f"malformed block at bit {s}")
            k = self._code(b)
            if k >= self.inner.alpha:
                raise LclError(f"block at bit {s} encodes no input label")
            out.append(self.inner.sigma_in[k])
        return out

    def _code(self, b) -> int:
        k = 0
        for t in range(self.a):
            k = 2 * k + b[self.a + 2 + t]
        return k

    # verifiers -----------------------------------------------------------
    def _header(self, b) -> bool:
        return all(b[:self.a + 1])

    def local_error(self, b) -> bool:
        """The window itself shows that the encoding is broken."""
        a, g = self.a, self.gamma
        if self._header(b):
            if b[a + 1] != 0 or b[2 * a + 2] != 0:
                return True
            return self._code(b) >= self.inner.alpha  # N1: undecodable block
        run = best = 0
        for bit in b:
            run = run + 1 if bit else 0
            best = max(best, run)
        if best >= a + 1:
            return False
        x = next(t for t in range(g) if b[t] == 0)
        y = next(t for t in range(g) if b[g - 1 - t] == 0)
        return x + y <= a

    def v_in_out(self, bit, out) -> bool:
        b, o = out
        if len(b) != self.gamma or b[0] != bit:
            return False
        if o in ERROR_MARKS:
            return o != E or self.local_error(b)
        if o not in self._outs:
            return False
        if self._header(b):
            k = self._code(b)
            if k >= self.inner.alpha:
                return False
            return self.inner.v_in_out(self.inner.sigma_in[k], o)
        return True

    def v_out_out(self, pred_out, out) -> bool:
        b, o = out
        if pred_out is None:
            if o == E_L:
                return False
            if o in self._outs and self._header(b):
                return self.inner.v_out_out(None, o)
            return True
        pb, po = pred_out
        if any(b[k] != pb[k + 1] for k in range(self.gamma - 1)):
            return False
        if o == E_L:
            return po in (E, E_L)
        if o in self._outs:
            if po == E_R:
                return False
            if po in self._outs:
                if not self._header(b):
                    return o == po
                return self.inner.v_out_out(po, o)
        return True

    def violations(self, bits, outputs) -> list:
        bad = []
        n = len(bits)
        for i in range(n):
            o = outputs[i]
            ok = self.v_in_out(bits[i], o) and self.v_out_out(outputs[i - 1] if i else None, o)
            if o[1] == E_R and i == n - 1:
                ok = False  # E_r points at a successor
            if not ok:
                bad.append(i)
        return bad

    # solver --------------------------------------------------------------
    def windows(self, bits) -> list:
        """Each node's next gamma input bits; past the end the pattern of block 0 repeats."""
        pad = self.block(self.inner.sigma_in[0])
        ext = list(bits) + pad * (self.gamma // len(pad) + 1)
        return [tuple(ext[i:i + self.gamma]) for i in range(len(bits))]

    def solve(self, bits, inner_solver: Callable) -> list:
        """inner_solver maps stage-1 inputs to stage-1 outputs of the virtual path."""
        wins = self.windows(bits)
        try:
            labels = self.decode(list(bits))
        except LclError:
            labels = None
        if labels is not None:
            outs = inner_solver(labels)
            return [(wins[i], outs[i // self.gamma]) for i in range(len(bits))]
        err = [self.local_error(w) for w in wins]
        if not any(err):
            raise LclError("encoding error is not witnessed by any window")
        res, seen = [], False
        for i, w in enumerate(wins):
            if err[i]:
                seen = True
                res.append((w, E))
            else:
                res.append((w, E_L if seen else E_R))
        return res

    def radius(self, T: int) -> int:
        return (self.gamma + 1) * T

    # explicit form ---------------------------------------------------------
    def labels(self) -> list:
        import itertools
        outs = list(self.inner.sigma_out) + list(ERROR_MARKS)
        return [(b, o) for b in itertools.product((0, 1), repeat=self.gamma) for o in outs]

    def to_normalized(self, limit: int = 2000) -> NormalizedLcl:
        """Explicit pair tables; endpoint clauses (no predecessor, no successor) are not representable."""
        labs = self.labels()
        if len(labs) > limit:
            raise LclError(f"{len(labs)} output labels exceed the explicit-table limit {limit}")
        names = {lab: fmt_label(lab) for lab in labs}
        c_in = [(str(bit), names[lab]) for lab in labs for bit in (0, 1) if self.v_in_out(bit, lab)]
        c_oo = [(names[lab], names[p]) for lab in labs for p in labs
                if lab[0][:-1] == p[0][1:] and self.v_out_out(p, lab)]
        return NormalizedLcl([names[lab] for lab in labs], c_in, c_oo)


def fmt_label(lab) -> str:
    b, o = lab
    o = o if isinstance(o, str) else f"{o[0]}/{o[1]}"
    return "".join(map(str, b)) + ":" + o


def normalize_stage2(problem: Stage1) -> Stage2:
    return Stage2(problem)


def normalize(problem: PredecessorLcl) -> Stage2:
    return Stage2(Stage1(problem))


def summary(st2: Stage2) -> dict:
    inner = st2.inner
    return {"alpha": inner.alpha, "beta": len(inner.base.sigma_out), "stage1_outputs": inner.beta,
            "a": st2.a, "gamma": st2.gamma, "beta_prime": st2.beta_prime}

