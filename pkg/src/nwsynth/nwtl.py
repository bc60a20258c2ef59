"""NWTL formulas: syntax tree, concrete syntax, finite-word semantics."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from .nested_word import NestedWord, PositionError, summary_path

UNARY = ("not", "next", "next_mu", "prev", "prev_mu")
BINARY = ("or", "and", "until", "since")
ATOMIC = ("true", "call", "ret", "in", "out")


@dataclass(frozen=True)
class Formula:
    kind: str
    args: tuple = ()
    symbol: str | None = None

    def __post_init__(self):
        want = 1 if self.kind in UNARY else 2 if self.kind in BINARY else 0
        if self.kind not in UNARY + BINARY + ATOMIC:
            raise ValueError(f"unknown formula kind {self.kind!r}")
        if len(self.args) != want:
            raise ValueError(f"{self.kind} takes {want} subformulas")
        if (self.kind in ("in", "out")) != (self.symbol is not None):
            raise ValueError("only in/out atoms carry a symbol")

    def __str__(self):
        return pretty(self)

    def subformulas(self):
        """All distinct subformulas, children before parents."""
        seen, order = set(), []

        def visit(f):
            if f in seen:
                return
            for a in f.args:
                visit(a)
            seen.add(f)
            order.append(f)

        visit(self)
        return order


TRUE = Formula("true")
CALL = Formula("call")
RET = Formula("ret")


def In(sym):
    return Formula("in", symbol=sym)


def Out(sym):
    return Formula("out", symbol=sym)


def Not(f):
    return Formula("not", (f,))


def Or(a, b):
    return Formula("or", (a, b))


def And(a, b):
    return Formula("and", (a, b))


def Next(f):
    return Formula("next", (f,))


def NextMu(f):
    return Formula("next_mu", (f,))


def Prev(f):
    return Formula("prev", (f,))


def PrevMu(f):
    return Formula("prev_mu", (f,))


def Until(a, b):
    return Formula("until", (a, b))


def Since(a, b):
    return Formula("since", (a, b))


def Eventually(f):
    return Until(TRUE, f)


def Always(f):
    return Not(Until(TRUE, Not(f)))


# -- concrete syntax ----------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at offset {pos}")
        self.pos = pos


class UnknownAtomError(ValueError):
    pass


_ATOM_RE = re.compile(r"(in|out):([A-Za-z0-9_]+)")
_KEYWORDS = ("Xmu", "Ymu", "Us", "Ss", "Fs", "Gs", "true", "call", "ret", "X", "Y")
_PUNCT = "!&|()"
_UNARY_TOKENS = {"!": Not, "X": Next, "Xmu": NextMu, "Y": Prev, "Ymu": PrevMu,
                 "Fs": Eventually, "Gs": Always}


def tokenize(text: str):
    toks, i = [], 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _ATOM_RE.match(text, i)
        if m:
            toks.append((m.group(1), m.group(2), i))
            i = m.end()
            continue
        if text[i] in _PUNCT:
            toks.append((text[i], None, i))
            i += 1
            continue
        for kw in _KEYWORDS:
            if text.startswith(kw, i):
                toks.append((kw, None, i))
                i += len(kw)
                break
        else:
            raise ParseError(f"unexpected character {text[i]!r}", i)
    toks.append(("EOF", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text, sigma_in, sigma_out):
        self.toks = tokenize(text)
        self.k = 0
        self.sigma_in = sigma_in
        self.sigma_out = sigma_out

    def peek(self):
        return self.toks[self.k][0]

    def take(self, kind=None):
        tok = self.toks[self.k]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        self.k += 1
        return tok

    # f_or := f_and ("|" f_and)*
    def parse_or(self):
        f = self.parse_and()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.parse_and())
        return f

    def parse_and(self):
        f = self.parse_temporal()
        while self.peek() == "&":
            self.take()
            f = And(f, self.parse_temporal())
        return f

    def parse_temporal(self):
        left = self.parse_unary()
        if self.peek() in ("Us", "Ss"):
            op = self.take()[0]
            right = self.parse_temporal()
            return Until(left, right) if op == "Us" else Since(left, right)
        return left

    def parse_unary(self):
        kind, sym, pos = self.toks[self.k]
        if kind in _UNARY_TOKENS:
            self.take()
            return _UNARY_TOKENS[kind](self.parse_unary())
        if kind == "(":
            self.take()
            f = self.parse_or()
            self.take(")")
            return f
        if kind == "true":
            self.take()
            return TRUE
        if kind == "call":
            self.take()
            return CALL
        if kind == "ret":
            self.take()
            return RET
        if kind in ("in", "out"):
            self.take()
            alphabet = self.sigma_in if kind == "in" else self.sigma_out
            if alphabet is not None and sym not in alphabet:
                raise UnknownAtomError(f"unknown {kind} symbol {sym!r} at offset {pos}")
            return In(sym) if kind == "in" else Out(sym)
        raise ParseError(f"unexpected token {kind!r}", pos)


def parse(text: str, sigma_in=None, sigma_out=None) -> Formula:
    """Parse concrete syntax; atoms are checked against the alphabets when given."""
    p = _Parser(text, sigma_in, sigma_out)
    f = p.parse_or()
    if p.peek() != "EOF":
        raise ParseError(f"trailing input {p.peek()!r}", p.toks[p.k][2])
    return f


_PRETTY_UNARY = {"not": "!", "next": "X ", "next_mu": "Xmu ", "prev": "Y ", "prev_mu": "Ymu "}
_PRETTY_BINARY = {"or": "|", "and": "&", "until": "Us", "since": "Ss"}


def pretty(f: Formula) -> str:
    if f.kind in ("true", "call", "ret"):
        return f.kind
    if f.kind in ("in", "out"):
        return f"{f.kind}:{f.symbol}"
    if f.kind in UNARY:
        return _PRETTY_UNARY[f.kind] + _wrap(f.args[0])
    a, b = f.args
    return f"({pretty(a)} {_PRETTY_BINARY[f.kind]} {pretty(b)})"


def _wrap(f):
    s = pretty(f)
    return s if f.kind not in UNARY else f"({s})"


def size(f: Formula) -> int:
    return 1 + sum(size(a) for a in f.args)


# -- semantics ----------------------------------------------------------------


def evaluate(w: NestedWord, i: int, phi: Formula) -> bool:
    """Truth of phi at position i of the finite nested word w."""
    if not 1 <= i <= len(w):
        raise PositionError(f"position {i} outside 1..{len(w)}")

    @lru_cache(maxsize=None)
    def sat(f: Formula, i: int) -> bool:
        k = f.kind
        if k == "true":
            return True
        if k == "call":
            return i in w.calls
        if k == "ret":
            return i in w.rets
        if k == "in":
            return w.letter(i).inp == f.symbol
        if k == "out":
            return w.letter(i).out == f.symbol
        if k == "not":
            return not sat(f.args[0], i)
        if k == "or":
            return sat(f.args[0], i) or sat(f.args[1], i)
        if k == "and":
            return sat(f.args[0], i) and sat(f.args[1], i)
        if k == "next":
            return i < len(w) and sat(f.args[0], i + 1)
        if k == "prev":
            return i > 1 and sat(f.args[0], i - 1)
        if k == "next_mu":
            j = w.matching_return(i)
            return j is not None and sat(f.args[0], j)
        if k == "prev_mu":
            j = w.matching_call(i)
            return j is not None and sat(f.args[0], j)
        a, b = f.args
        if k == "until":
            for j in range(i, len(w) + 1):
                if sat(b, j) and all(sat(a, p) for p in summary_path(w, i, j)[:-1]):
                    return True
            return False
        # since: phi2 strictly before i, phi1 on the path after j (i included)
        for j in range(1, i):
            if sat(b, j) and all(sat(a, p) for p in summary_path(w, j, i)[1:]):
                return True
        return False

    return sat(phi, i)


def negate(f: Formula) -> Formula:
    return f.args[0] if f.kind == "not" else Not(f)


def closure(phi: Formula) -> frozenset:
    """Subformulas of phi plus call/ret, closed under single negation."""
    base = set(phi.subformulas()) | {CALL, RET}
    return frozenset(base | {negate(f) for f in base})
