"""Text syntax for polynomials, forms, vector fields and parameter documents.

    poly   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := INT ['/' INT] | NAME ['^' INT] | 'xi' '[' [INT (',' INT)*] ']'
            | '(' poly ')' ['^' INT]
    field  := '[' poly (',' poly)* ']'

Forms are polys that use ``xi[...]`` factors (1-based indices, wedge
product).  The printers in :mod:`omegadef.algebra` and
:mod:`omegadef.exterior` emit exactly this grammar.
"""
from __future__ import annotations

import json
import re
from typing import Mapping

from gmpy2 import mpq

from .algebra import Poly, VarEnv
from .deformation import FAMILIES, ParamAssignment, family_lengths
from .exterior import Form
from .liecalc import VectorField

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()\[\],]))")
_SPATIAL = re.compile(r"x([0-9]+)\Z")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int, where: str | None = None):
        self.message = message
        self.text = text
        self.pos = pos
        self.where = where
        prefix = f"{where}: " if where else ""
        super().__init__(f"{prefix}{message} at column {pos + 1}\n  {text}\n  {' ' * pos}^")


def tokenize(text: str, where: str | None = None):
    out = []
    pos = 0
    text_len = len(text.rstrip())
    while pos < text_len:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", text, bad, where)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, env: VarEnv, where: str | None = None):
        self.text = text
        self.env = env
        self.where = where
        self.toks = tokenize(text, where)
        self.i = 0

    def error(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        return ParseError(msg, self.text, tok[2], self.where)

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None, kind=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}")
        if kind is not None and tok[0] != kind:
            raise self.error(f"expected {kind}, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def at(self, value):
        return self.toks[self.i][1] == value and self.toks[self.i][0] == "op"

    def done(self):
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")

    # grammar

    def expr(self) -> Form:
        sign = 1
        if self.at("+"):
            self.take()
        elif self.at("-"):
            self.take()
            sign = -1
        out = self.term() * sign
        while self.at("+") or self.at("-"):
            op = self.take()[1]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> Form:
        out = self.factor()
        while self.at("*"):
            self.take()
            out = out.wedge(self.factor())
        return out

    def _power(self, base: Form, tok) -> Form:
        if not self.at("^"):
            return base
        self.take()
        e = int(self.take(kind="int")[1])
        if e and base.degrees() - {0}:
            raise self.error("odd factors cannot be raised to a power", tok)
        out = Form.function(Poly.const(self.env, 1))
        for _ in range(e):
            out = out.wedge(base)
        return out

    def factor(self) -> Form:
        tok = self.peek()
        env = self.env
        if tok[0] == "int":
            self.take()
            num = int(tok[1])
            if self.at("/"):
                self.take()
                dtok = self.take(kind="int")
                den = int(dtok[1])
                if den == 0:
                    raise self.error("zero denominator", dtok)
                return Form.function(Poly.const(env, mpq(num, den)))
            return Form.function(Poly.const(env, num))
        if tok[0] == "name":
            self.take()
            if tok[1] == "xi":
                return self._xi(tok)
            name = tok[1]
            if name not in env.index:
                m = _SPATIAL.match(name)
                if m:
                    raise self.error(f"spatial variable {name!r} does not exist for n={env.n}", tok)
                raise self.error(f"unknown parameter name {name!r}", tok)
            return self._power(Form.function(Poly.var(env, name)), tok)
        if tok[1] == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return self._power(inner, tok)
        raise self.error(f"unexpected {tok[1] or 'end of input'!r}")

    def _xi(self, tok) -> Form:
        self.take("[")
        idx = []
        if not self.at("]"):
            while True:
                itok = self.take(kind="int")
                i = int(itok[1])
                if not 1 <= i <= self.env.n:
                    raise self.error(f"xi index {i} outside 1..{self.env.n}", itok)
                idx.append(i - 1)
                if self.at(","):
                    self.take()
                    continue
                break
        self.take("]")
        return Form.monomial(self.env, idx)


def parse_form(text: str, env: VarEnv, where: str | None = None) -> Form:
    p = _Parser(text, env, where)
    out = p.expr()
    p.done()
    return out


def parse_poly(text: str, env: VarEnv, where: str | None = None) -> Poly:
    p = _Parser(text, env, where)
    start = p.peek()
    out = p.expr()
    p.done()
    if out.degrees() - {0}:
        raise ParseError("expected a polynomial, found odd variables", text, start[2], where)
    return out.terms.get((), Poly.zero(env))


def parse_field(text: str, env: VarEnv, where: str | None = None) -> VectorField:
    p = _Parser(text, env, where)
    p.take("[")
    comps = []
    while True:
        tok = p.peek()
        w = p.expr()
        if w.degrees() - {0}:
            raise p.error("vector field components must be functions", tok)
        comps.append(w.terms.get((), Poly.zero(env)))
        if p.at(","):
            p.take()
            continue
        break
    close = p.peek()
    p.take("]")
    p.done()
    if len(comps) != env.n:
        raise ParseError(f"expected {env.n} components, got {len(comps)}", text, close[2], where)
    try:
        return VectorField(comps, label=text.strip())
    except ValueError as exc:
        raise ParseError(str(exc), text, 0, where) from None


def format_field(x: VectorField) -> str:
    return "[" + ", ".join(str(c) for c in x.components) + "]"


# ---------------------------------------------------------------------------
# parameter documents


def _names_in(text: str) -> list[str]:
    return [tok[1] for tok in tokenize(text) if tok[0] == "name" and tok[1] != "xi"]


def params_from_mapping(doc: Mapping, source: str = "<params>") -> ParamAssignment:
    """Build an assignment from ``{"n", "t0", "t1", "t1tilde", "t2"[, "params"]}``.

    Parameter names are taken from ``params`` when given, else collected
    from the entries in order of first appearance.
    """
    if not isinstance(doc, Mapping):
        raise ValueError(f"{source}: top level must be an object")
    if "n" not in doc:
        raise ValueError(f"{source}: missing field 'n'")
    n = doc["n"]
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"{source}: n must be an integer >= 2, got {n!r}")
    lens = family_lengths(n)
    unknown_keys = set(doc) - {"n", "params", *FAMILIES}
    if unknown_keys:
        raise ValueError(f"{source}: unknown fields {sorted(unknown_keys)}")
    entries = {}
    for fam in FAMILIES:
        vals = doc.get(fam)
        if not isinstance(vals, list):
            raise ValueError(f"{source}: field {fam!r} must be a list of {lens[fam]} strings")
        if len(vals) != lens[fam]:
            raise ValueError(f"{source}: {fam} needs {lens[fam]} entries for n={n} "
                             f"(4n = {4 * n} in total), got {len(vals)}")
        entries[fam] = [str(v) for v in vals]
    declared = doc.get("params")
    found: list[str] = []
    for fam in FAMILIES:
        for k, text in enumerate(entries[fam]):
            for name in _names_in(text):
                if _SPATIAL.match(name):
                    raise ParseError(f"parameter entries may not use spatial variable {name!r}",
                                     text, text.index(name), f"{source}: {fam}[{k}]")
                if name not in found:
                    found.append(name)
    if declared is not None:
        declared = [str(p) for p in declared]
        env = VarEnv(n, tuple(declared))
    else:
        env = VarEnv(n, tuple(found))
    vals = {fam: [parse_poly(text, env, f"{source}: {fam}[{k}]")
                  for k, text in enumerate(entries[fam])] for fam in FAMILIES}
    return ParamAssignment.from_lists(env, vals["t0"], vals["t1"], vals["t1tilde"], vals["t2"])


def parse_params_document(text: str, source: str = "<params>") -> ParamAssignment:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{source}: invalid JSON at line {exc.lineno} column {exc.colno}: "
                         f"{exc.msg}") from None
    return params_from_mapping(doc, source)


def format_params_document(t: ParamAssignment) -> str:
    doc = {"n": t.env.n, "params": list(t.env.params)}
    doc.update(t.as_dict())
    return json.dumps(doc, indent=2)
