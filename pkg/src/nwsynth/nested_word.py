"""Finite nested words: letters, matching relations, summary paths.

Positions are 1-based throughout.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence


class Letter(NamedTuple):
    inp: str
    out: str


class PositionError(ValueError):
    pass


@dataclass(frozen=True)
class Valid:
    def __bool__(self):
        return True


@dataclass(frozen=True)
class Violation:
    rule: str  # "cond-1" | "cond-2" | "cond-3"
    witness: tuple

    def __bool__(self):
        return False


VALID = Valid()

CALL, RET, INT = "call", "ret", "int"


def validate_matching(n: int, calls, rets, mu) -> Valid | Violation:
    """Check the three matching conditions on positions 1..n.

    Returns the first violated condition (in order 1, 2, 3) together with
    the positions that witness it.
    """
    for p in list(calls) + list(rets) + [x for pair in mu for x in pair]:
        if not 1 <= p <= n:
            raise PositionError(f"position {p} outside 1..{n}")
    calls, rets = set(calls), set(rets)
    pairs = sorted(mu)
    for i, j in pairs:
        if not (i in calls and j in rets and i < j):
            return Violation("cond-1", (i, j))
    by_call, by_ret = {}, {}
    for i, j in pairs:
        if i in by_call:
            return Violation("cond-2", (i, by_call[i], j))
        if j in by_ret:
            return Violation("cond-2", (by_ret[j], i, j))
        by_call[i] = j
        by_ret[j] = i
    for i in sorted(calls):
        for j in sorted(rets):
            if j < i:
                continue
            # some k in [i, j] with mu(i, k) or mu(k, j)
            k = by_call.get(i)
            if k is not None and k <= j:
                continue
            k = by_ret.get(j)
            if k is not None and k >= i:
                continue
            return Violation("cond-3", (i, j))
    return VALID


@dataclass(frozen=True)
class NestedWord:
    letters: tuple = ()
    calls: frozenset = frozenset()
    rets: frozenset = frozenset()
    mu: frozenset = frozenset()
    _ret_of: dict = field(default=None, compare=False, repr=False, hash=False)
    _call_of: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(Letter(*l) for l in self.letters))
        object.__setattr__(self, "calls", frozenset(self.calls))
        object.__setattr__(self, "rets", frozenset(self.rets))
        object.__setattr__(self, "mu", frozenset(self.mu))
        object.__setattr__(self, "_ret_of", {i: j for i, j in self.mu})
        object.__setattr__(self, "_call_of", {j: i for i, j in self.mu})

    def __len__(self):
        return len(self.letters)

    def letter(self, i: int) -> Letter:
        return self.letters[i - 1]

    def tag(self, i: int) -> str:
        if i in self.calls:
            return CALL
        if i in self.rets:
            return RET
        return INT

    @property
    def tags(self) -> list[str]:
        return [self.tag(i) for i in range(1, len(self) + 1)]

    def matching_return(self, i: int):
        """r(i), or None for internal positions and pending calls."""
        return self._ret_of.get(i)

    def matching_call(self, j: int):
        """c(j), or None when j is not a matched return."""
        return self._call_of.get(j)

    def pending_calls(self) -> list[int]:
        return sorted(i for i in self.calls if i not in self._ret_of)

    def validate(self) -> Valid | Violation:
        return validate_matching(len(self), self.calls, self.rets, self.mu)

    def _check(self, *positions):
        for p in positions:
            if not 1 <= p <= len(self):
                raise PositionError(f"position {p} outside 1..{len(self)}")


def build_nested_word(tagged: Iterable[tuple]) -> NestedWord:
    """Match each return with the most recent unmatched call.

    Returns with nothing on the stack stay unmatched.
    """
    letters, calls, rets, mu, stack = [], set(), set(), set(), []
    for pos, (letter, tag) in enumerate(tagged, start=1):
        letters.append(Letter(*letter))
        if tag == CALL:
            calls.add(pos)
            stack.append(pos)
        elif tag == RET:
            rets.add(pos)
            if stack:
                mu.add((stack.pop(), pos))
        elif tag != INT:
            raise ValueError(f"unknown tag {tag!r}")
    return NestedWord(tuple(letters), calls, rets, mu)


def summary_path(w: NestedWord, i: int, j: int) -> list[int]:
    if i > j:
        raise PositionError(f"summary path needs i <= j, got {i} > {j}")
    w._check(i, j)
    path = [i]
    while path[-1] != j:
        cur = path[-1]
        r = w.matching_return(cur)
        path.append(r if r is not None and r <= j else cur + 1)
    return path


def substructure(w: NestedWord, i: int, j: int) -> NestedWord:
    if j < i:
        return NestedWord()
    w._check(i, j)
    shift = i - 1
    inside = range(i, j + 1)
    return NestedWord(
        w.letters[i - 1 : j],
        {p - shift for p in w.calls if p in inside},
        {p - shift for p in w.rets if p in inside},
        {(a - shift, b - shift) for a, b in w.mu if a in inside and b in inside},
    )


# -- trace files -----------------------------------------------------------


def to_trace(w: NestedWord) -> dict:
    positions = []
    for p in range(1, len(w) + 1):
        match = w.matching_return(p) if p in w.calls else w.matching_call(p)
        l = w.letter(p)
        positions.append({"in": l.inp, "out": l.out, "tag": w.tag(p), "match": match})
    return {"positions": positions}


def from_trace(data: dict) -> NestedWord:
    entries: Sequence[dict] = data["positions"]
    calls, rets, mu = set(), set(), set()
    for p, e in enumerate(entries, start=1):
        tag, match = e["tag"], e.get("match")
        if tag == CALL:
            calls.add(p)
            if match is not None:
                mu.add((p, match))
        elif tag == RET:
            rets.add(p)
            if match is not None:
                mu.add((match, p))
        elif tag != INT:
            raise ValueError(f"position {p}: unknown tag {tag!r}")
        elif match is not None:
            raise ValueError(f"position {p}: internal position with a match")
    # every pair must be declared from both ends
    for i, j in mu:
        if not (1 <= i <= len(entries) and 1 <= j <= len(entries)):
            raise ValueError(f"match ({i}, {j}) out of range")
        if entries[i - 1].get("match") != j or entries[j - 1].get("match") != i:
            raise ValueError(f"match ({i}, {j}) is not declared symmetrically")
    w = NestedWord(tuple(Letter(e["in"], e["out"]) for e in entries), calls, rets, mu)
    v = w.validate()
    if not v:
        raise ValueError(f"invalid matching: {v.rule} at {v.witness}")
    return w


def dumps_trace(w: NestedWord) -> str:
    return json.dumps(to_trace(w), indent=2, sort_keys=True)
