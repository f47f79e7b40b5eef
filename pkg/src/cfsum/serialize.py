"""JSON and plain-text forms of sequences, problems and closed forms.

Rationals are always strings such as ``"-3/2"`` so nothing passes through a
float.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .closer import (
    Atom,
    ClosedForm,
    ProblemError,
    SumProblem,
    TargetMonomial,
    TermFactor,
)
from .exact import UniPoly
from .sequence import CFiniteSequence, builtin, builtin_names


def rat(x) -> str:
    return str(Fraction(x))


def parse_rat(s) -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise ProblemError(f"rationals must be ints or 'p/q' strings, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError, TypeError):
        raise ProblemError(f"not a rational: {s!r}") from None


# sequences

def sequence_from_json(d: Mapping) -> CFiniteSequence:
    if not isinstance(d, Mapping):
        raise ProblemError("a sequence descriptor must be an object")
    name = d.get("name")
    if name == "n":
        raise ProblemError("'n' is reserved for the summation bound")
    if "builtin" in d:
        params = [parse_rat(x) for x in d.get("params", [])]
        return builtin(d["builtin"], *params, name=name)
    try:
        rec = [parse_rat(x) for x in d["recurrence"]]
        init = [parse_rat(x) for x in d["initials"]]
    except KeyError as e:
        raise ProblemError(f"sequence descriptor lacks {e.args[0]!r}") from None
    return CFiniteSequence(rec, init, name=name or "F")


def sequence_to_json(seq: CFiniteSequence) -> dict:
    return {
        "name": seq.name,
        "recurrence": [rat(c) for c in seq.recurrence],
        "initials": [rat(v) for v in seq.initials],
    }


def parse_builtin_ref(ref: str) -> CFiniteSequence:
    """``fibonacci``, ``subword(3)``, ``subword:3`` or ``geometric(1/2)``."""
    m = re.fullmatch(r"\s*([a-z_0-9]+)\s*(?:[(:]\s*([^)]*?)\s*\)?)?\s*", ref)
    if not m or m.group(1) not in builtin_names():
        raise ProblemError(f"unknown sequence {ref!r}; builtins are {', '.join(builtin_names())}")
    params = [parse_rat(x) for x in m.group(2).split(",")] if m.group(2) else []
    return builtin(m.group(1), *params)


def load_sequences(decls) -> dict:
    """Map from reference name to sequence; names must be unique."""
    out: dict = {}
    for d in decls or []:
        seq = sequence_from_json(d)
        if seq.name in out:
            raise ProblemError(f"sequence {seq.name!r} declared twice")
        out[seq.name] = seq
    return out


def resolve(ref: str, registry: dict) -> CFiniteSequence:
    if ref in registry:
        return registry[ref]
    seq = parse_builtin_ref(ref)
    clash = registry.get(seq.name)
    if clash is not None and not clash.same_values(seq):
        raise ProblemError(f"builtin {ref!r} would reuse the name {seq.name!r}")
    registry[ref] = seq
    return seq


# problems

@dataclass
class ProblemFile:
    problem: SumProblem
    sequences: dict
    basis: str = "shifted"
    extra_checks: int = 20
    anchor: int = 1
    conservative_psi: bool = False
    uniqueness: bool = False
    variants: list = field(default_factory=list)


def _int(v, what: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ProblemError(f"{what} must be an integer, got {v!r}")
    return v


def problem_from_json(d: Mapping) -> ProblemFile:
    if not isinstance(d, Mapping):
        raise ProblemError("a problem file must be a JSON object")
    registry = load_sequences(d.get("sequences"))
    if "sum" in d:
        # flat layout: {"sum": [...], "basis": ..., "extra_checks": ...}
        factors = d["sum"]
        opts = {k: d[k] for k in ("basis", "extra_checks", "anchor", "conservative_psi",
                                   "uniqueness") if k in d}
    else:
        spec = d.get("problem", {})
        factors = spec.get("factors") if isinstance(spec, Mapping) else None
        opts = d.get("options", {})
    if not factors:
        raise ProblemError("problem.factors must be a non-empty list")
    terms = []
    for f in factors:
        if not isinstance(f, Mapping) or "seq" not in f:
            raise ProblemError("each factor needs a 'seq' reference")
        seq = resolve(f["seq"], registry)
        terms.append(TermFactor(seq, _int(f.get("a", 0), "a"), _int(f.get("b", 0), "b"),
                                _int(f.get("c", 0), "c")))
    if not isinstance(opts, Mapping):
        raise ProblemError("options must be an object")
    basis = opts.get("basis", "shifted")
    if basis not in ("shifted", "fundamental"):
        raise ProblemError(f"unknown basis {basis!r}")
    variants = []
    for v in d.get("variants", []):
        if isinstance(v, Mapping):
            variants.append({k: [parse_rat(x) for x in vals] for k, vals in v.items()})
        else:
            variants.append([parse_rat(x) for x in v])
    problem = SumProblem(terms)
    return ProblemFile(
        problem=problem,
        sequences={s.name: s for s in registry.values()},
        basis=basis,
        extra_checks=_int(opts.get("extra_checks", 20), "extra_checks"),
        anchor=_int(opts.get("anchor", 1), "anchor"),
        conservative_psi=bool(opts.get("conservative_psi", False)),
        uniqueness=bool(opts.get("uniqueness", False)),
        variants=variants,
    )


def problem_to_json(p: SumProblem) -> dict:
    return {
        "sequences": [sequence_to_json(s) for s in p.sequences.values()],
        "problem": {"factors": [{"seq": f.seq.name, "a": f.a, "b": f.b, "c": f.c}
                                for f in p.factors]},
    }


# closed forms

def closed_form_to_json(cf: ClosedForm) -> dict:
    return {"terms": [
        {"poly": [rat(c) for c in poly.coeffs],
         "constant": "1",
         "factors": [{"seq": a.name, "alpha": a.alpha, "shift": a.shift} for a in mono.factors]}
        for poly, mono in cf.terms
    ]}


def closed_form_from_json(d: Mapping, sequences: Mapping) -> ClosedForm:
    if not isinstance(d, Mapping) or not isinstance(d.get("terms"), list):
        raise ProblemError("a closed form needs a 'terms' list")
    pairs = []
    for t in d["terms"]:
        atoms = []
        for f in t.get("factors", []):
            name = f["seq"]
            if name not in sequences:
                raise ProblemError(f"closed form uses undeclared sequence {name!r}")
            seq = sequences[name]
            atoms.append(Atom(seq.name, _int(f["alpha"], "alpha"), _int(f["shift"], "shift"), seq))
        poly = UniPoly(parse_rat(c) for c in t.get("poly", []))
        const = parse_rat(t.get("constant", 1))
        pairs.append((poly, TargetMonomial.make(atoms, constant=const)))
    return ClosedForm.from_pairs(pairs)


def _atom_text(at: Atom) -> str:
    lin = "n" if at.alpha == 1 else f"{at.alpha}n"
    if at.shift > 0:
        lin += f"+{at.shift}"
    elif at.shift < 0:
        lin += f"-{-at.shift}"
    return f"{at.name}({lin})"


def _monomial_text(mono: TargetMonomial) -> str:
    parts = []
    i = 0
    fs = mono.factors
    while i < len(fs):
        j = i
        while j < len(fs) and fs[j] == fs[i]:
            j += 1
        body = _atom_text(fs[i])
        parts.append(body if j - i == 1 else f"{body}^{j - i}")
        i = j
    return "*".join(parts)


def render(cf: ClosedForm) -> str:
    """Plain text such as ``1/2*F(2n) - 1/2*F(2n+1) + n*F(n)^2``."""
    chunks = []
    for poly, mono in cf.terms:
        mtext = _monomial_text(mono)
        for h in range(len(poly.coeffs) - 1, -1, -1):
            c = poly.coeffs[h]
            if c == 0:
                continue
            factors = []
            if h:
                factors.append("n" if h == 1 else f"n^{h}")
            if mtext:
                factors.append(mtext)
            mag = abs(c)
            if mag != 1 or not factors:
                factors.insert(0, str(mag))
            chunks.append(("-" if c < 0 else "+", "*".join(factors)))
    if not chunks:
        return "0"
    out = ("-" if chunks[0][0] == "-" else "") + chunks[0][1]
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*^()]))")


def _tokens(text: str) -> list:
    pos, out = 0, []
    text = text.replace("−", "-")
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ProblemError(f"cannot parse closed form near {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, sequences: Mapping):
        self.toks = _tokens(text)
        self.i = 0
        self.seqs = sequences

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ProblemError(f"unexpected token {tok[1]!r} in closed form")
        self.i += 1
        return tok[1]

    def exponent(self) -> int:
        if self.peek() == ("op", "^"):
            self.take()
            return int(self.take("num"))
        return 1

    def linear(self) -> tuple[int, int]:
        # alpha n + shift, with the forms n, 2n, n+1, 2n-3, 1
        alpha = shift = 0
        sign = 1
        while self.peek() != ("op", ")"):
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                sign = 1 if self.take() == "+" else -1
                continue
            if kind == "num":
                k = int(self.take())
                if self.peek() == ("name", "n"):
                    self.take()
                    alpha += sign * k
                else:
                    shift += sign * k
            else:
                self.take("name", "n")
                alpha += sign
            sign = 1
        return alpha, shift

    def term(self):
        coef = Fraction(1)
        h = 0
        atoms = []
        while True:
            kind, val = self.peek()
            if kind == "num":
                coef *= Fraction(self.take())
            elif kind == "name" and val == "n":
                self.take()
                h += self.exponent()
            elif kind == "name" and val not in self.seqs and val[0] == "n" and val[1:] in self.seqs:
                # "nF(n)" arrives as a single name token
                self.take()
                h += 1
                self.toks.insert(self.i, ("name", val[1:]))
            elif kind == "name":
                self.take()
                if val not in self.seqs:
                    raise ProblemError(f"closed form uses undeclared sequence {val!r}")
                self.take("op", "(")
                alpha, shift = self.linear()
                self.take("op", ")")
                atoms.extend([Atom(val, alpha, shift, self.seqs[val])] * self.exponent())
            else:
                raise ProblemError(f"unexpected token {val!r} in closed form")
            if self.peek() == ("op", "*"):
                self.take()
                continue
            if self.peek()[0] in ("num", "name"):
                continue  # implicit product, as in 18G(n+1) or nF(n)
            return coef, h, atoms

    def parse(self) -> ClosedForm:
        pairs = []
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        while True:
            coef, h, atoms = self.term()
            pairs.append((UniPoly([0] * h + [sign * coef]), TargetMonomial.make(atoms)))
            tok = self.peek()
            if tok[0] is None:
                break
            if tok not in (("op", "+"), ("op", "-")):
                raise ProblemError(f"unexpected token {tok[1]!r} in closed form")
            sign = 1 if self.take() == "+" else -1
        return ClosedForm.from_pairs(pairs)


def parse_closed_form(text: str, sequences: Mapping) -> ClosedForm:
    """Inverse of :func:`render`; also accepts implicit products like ``nF(n)``."""
    if text.strip() == "0":
        return ClosedForm()
    return _Parser(text, sequences).parse()

