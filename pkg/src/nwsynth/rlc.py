"""Recursive library components and their compositions, with the induced transducer."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple

from .nested_word import CALL, INT, RET, Letter, NestedWord, build_nested_word


@dataclass(frozen=True)
class RlcComponent:
    name: str
    states: tuple
    initial: str
    reentry: tuple  # s_e^1 .. s_e^{n_R}
    calls: tuple  # s_C^1 .. s_C^{n_C}
    returns: tuple  # s_R^1 .. s_R^{n_R}
    delta: dict  # (state, input) -> state
    labels: dict  # state -> output

    def __hash__(self):
        return hash(self.name)

    def call_index(self, s):
        """1-based j with s = s_C^j, or None."""
        return self.calls.index(s) + 1 if s in self.calls else None

    def return_index(self, s):
        return self.returns.index(s) + 1 if s in self.returns else None

    def is_exit(self, s):
        return s in self.calls or s in self.returns


@dataclass(frozen=True)
class Library:
    sigma_in: tuple
    sigma_out: tuple
    n_c: int
    n_r: int
    components: tuple

    def component(self, name) -> RlcComponent:
        for c in self.components:
            if c.name == name:
                return c
        raise KeyError(f"no component named {name!r}")

    @property
    def names(self):
        return [c.name for c in self.components]


class Element(NamedTuple):
    component: str
    interface: tuple  # f(j) for j = 1..n_C, 1-based element indices


@dataclass(frozen=True)
class Composition:
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(Element(e[0], tuple(e[1])) for e in self.elements))

    def __len__(self):
        return len(self.elements)

    def element(self, i) -> Element:
        return self.elements[i - 1]


def validate_library(lib: Library) -> list[str]:
    defects = []
    if not lib.components:
        defects.append("library has no components")
    names = [c.name for c in lib.components]
    if len(set(names)) != len(names):
        defects.append("duplicate component names")
    for c in lib.components:
        where = f"component {c.name!r}"
        S = set(c.states)
        if len(c.calls) != lib.n_c:
            defects.append(f"{where}: call arity mismatch ({len(c.calls)} != {lib.n_c})")
        if len(c.returns) != lib.n_r:
            defects.append(f"{where}: return arity mismatch ({len(c.returns)} != {lib.n_r})")
        if len(c.reentry) != lib.n_r:
            defects.append(f"{where}: reentry arity mismatch ({len(c.reentry)} != {lib.n_r})")
        listed = [c.initial, *c.reentry, *c.calls, *c.returns]
        for s in listed:
            if s not in S:
                defects.append(f"{where}: undeclared state {s!r}")
        exits = set(c.calls) | set(c.returns)
        if len(set(c.calls)) != len(c.calls) or len(set(c.returns)) != len(c.returns) \
                or set(c.calls) & set(c.returns):
            defects.append(f"{where}: exit states must be distinct")
        if c.initial in exits:
            defects.append(f"{where}: initial state is an exit state")
        for s in c.reentry:
            if s in exits:
                defects.append(f"{where}: reentry state {s!r} is an exit state")
        for s in c.states:
            if c.labels.get(s) not in lib.sigma_out:
                defects.append(f"{where}: state {s!r} has no valid output label")
            for a in lib.sigma_in:
                t = c.delta.get((s, a))
                if t is None:
                    defects.append(f"{where}: delta undefined on ({s!r}, {a!r})")
                elif t not in S:
                    defects.append(f"{where}: delta ({s!r}, {a!r}) leads to undeclared {t!r}")
    return defects


def validate_composition(comp: Composition, lib: Library) -> list[str]:
    defects = []
    k = len(comp)
    if k == 0:
        defects.append("composition has no elements")
    for i, e in enumerate(comp.elements, start=1):
        if e.component not in lib.names:
            defects.append(f"element {i}: unknown component {e.component!r}")
        if len(e.interface) != lib.n_c:
            defects.append(f"element {i}: interface has {len(e.interface)} entries, need {lib.n_c}")
        for t in e.interface:
            if not (isinstance(t, int) and 1 <= t <= k):
                defects.append(f"element {i}: dangling interface target {t!r}")
    return defects


# -- induced transducer ------------------------------------------------------------


class StackState(NamedTuple):
    frames: tuple  # element indices, root first
    top_state: str


class TerminatedError(RuntimeError):
    pass


def initial_state(comp: Composition, lib: Library) -> StackState:
    return StackState((1,), lib.component(comp.element(1).component).initial)


def step(comp: Composition, lib: Library, s: StackState, sigma: str):
    """One input letter: returns (next state, letter, tag, terminated)."""
    if s is None:
        raise TerminatedError("cannot step a terminated computation")
    top = s.frames[-1]
    C = lib.component(comp.element(top).component)
    t = C.delta[s.top_state, sigma]
    j = C.call_index(t)
    if j is not None:
        callee = comp.element(top).interface[j - 1]
        D = lib.component(comp.element(callee).component)
        return (StackState(s.frames + (callee,), D.initial),
                Letter(sigma, D.labels[D.initial]), CALL, False)
    i = C.return_index(t)
    if i is not None:
        if len(s.frames) == 1:
            return None, Letter(sigma, C.labels[t]), RET, True
        caller = s.frames[-2]
        E = lib.component(comp.element(caller).component)
        back = E.reentry[i - 1]
        return StackState(s.frames[:-1], back), Letter(sigma, E.labels[back]), RET, False
    return StackState(s.frames, t), Letter(sigma, C.labels[t]), INT, False


def simulate(comp: Composition, lib: Library, inputs) -> tuple[NestedWord, bool]:
    s = initial_state(comp, lib)
    tagged = []
    for sigma in inputs:
        s, letter, tag, done = step(comp, lib, s, sigma)
        tagged.append((letter, tag))
        if done:
            return build_nested_word(tagged), True
    return build_nested_word(tagged), False


# -- composition trees --------------------------------------------------------------


def composition_tree(comp: Composition, lib: Library, depth: int) -> dict:
    """Nodes (tuples over 1..n_C) up to ``depth`` mapped to component names."""
    tree = {}
    kappa = {(): 1}
    for d in range(depth + 1):
        for v in [v for v in kappa if len(v) == d]:
            e = comp.element(kappa[v])
            tree[v] = e.component
            if d < depth:
                for j in range(1, lib.n_c + 1):
                    kappa[v + (j,)] = e.interface[j - 1]
    return tree


@dataclass(frozen=True)
class TreeTransducer:
    """Deterministic generator of a regular [n_C]-tree; state 1 is initial."""

    n_dirs: int
    delta: dict  # (state, direction) -> state
    labels: dict  # state -> component name
    initial: int = 1

    @property
    def states(self):
        return sorted(self.labels)

    def unfold(self, depth: int) -> dict:
        tree, at = {}, {(): self.initial}
        for v in sorted(itertools.chain.from_iterable(
                itertools.product(range(1, self.n_dirs + 1), repeat=d) for d in range(depth + 1)),
                key=len):
            if v:
                at[v] = self.delta[at[v[:-1]], v[-1]]
            tree[v] = self.labels[at[v]]
        return tree

    def minimize(self) -> "TreeTransducer":
        """Merge states generating the same tree (Moore partition refinement)."""
        block = {q: self.labels[q] for q in self.states}
        while True:
            sig = {q: (block[q],) + tuple(block[self.delta[q, j]]
                                          for j in range(1, self.n_dirs + 1))
                   for q in self.states}
            ids = {}
            new = {q: ids.setdefault(sig[q], len(ids)) for q in self.states}
            if len(ids) == len(set(block.values())):
                break
            block = new
        # renumber blocks in breadth-first order from the initial state
        rep = {}
        for q in self.states:
            rep.setdefault(block[q], q)
        order, index = [block[self.initial]], {block[self.initial]: 1}
        for b in order:
            for j in range(1, self.n_dirs + 1):
                t = block[self.delta[rep[b], j]]
                if t not in index:
                    index[t] = len(order) + 1
                    order.append(t)
        return TreeTransducer(
            self.n_dirs,
            {(index[b], j): index[block[self.delta[rep[b], j]]]
             for b in order for j in range(1, self.n_dirs + 1)},
            {index[b]: self.labels[rep[b]] for b in order})

    def to_json(self):
        return {"initial": self.initial,
                "labels": {str(q): self.labels[q] for q in self.states},
                "delta": {str(q): [self.delta[q, j] for j in range(1, self.n_dirs + 1)]
                          for q in self.states}}

    @classmethod
    def from_json(cls, data, n_dirs):
        labels = {int(q): c for q, c in data["labels"].items()}
        delta = {(int(q), j + 1): t for q, ts in data["delta"].items() for j, t in enumerate(ts)}
        return cls(n_dirs, delta, labels, data.get("initial", 1))


def composition_of_regular_tree(T: TreeTransducer) -> Composition:
    """One element per reachable transducer state; the initial state is element 1."""
    order, seen = [T.initial], {T.initial}
    for q in order:
        for j in range(1, T.n_dirs + 1):
            t = T.delta[q, j]
            if t not in seen:
                seen.add(t)
                order.append(t)
    index = {q: n for n, q in enumerate(order, start=1)}
    return Composition(tuple(
        Element(T.labels[q], tuple(index[T.delta[q, j]] for j in range(1, T.n_dirs + 1)))
        for q in order))


# -- files ----------------------------------------------------------------------------


def library_from_json(data: dict) -> Library:
    try:
        comps = []
        for c in data["components"]:
            delta = {(s, a): t for s, row in c["delta"].items() for a, t in row.items()}
            comps.append(RlcComponent(
                name=c["name"], states=tuple(c["states"]), initial=c["initial"],
                reentry=tuple(c["reentry"]), calls=tuple(c["calls"]),
                returns=tuple(c["returns"]), delta=delta, labels=dict(c["labels"])))
        return Library(tuple(data["sigma_in"]), tuple(data["sigma_out"]),
                       int(data["n_c"]), int(data["n_r"]), tuple(comps))
    except KeyError as e:
        raise ValueError(f"library file: missing field {e.args[0]!r}") from None


def library_to_json(lib: Library) -> dict:
    comps = []
    for c in lib.components:
        delta = {}
        for (s, a), t in sorted(c.delta.items()):
            delta.setdefault(s, {})[a] = t
        comps.append({"name": c.name, "states": list(c.states), "initial": c.initial,
                      "reentry": list(c.reentry), "calls": list(c.calls),
                      "returns": list(c.returns), "delta": delta, "labels": dict(c.labels)})
    return {"sigma_in": list(lib.sigma_in), "sigma_out": list(lib.sigma_out),
            "n_c": lib.n_c, "n_r": lib.n_r, "components": comps}


def composition_from_json(data: dict) -> Composition:
    try:
        return Composition(tuple(Element(e["component"], tuple(e["interface"]))
                                 for e in data["elements"]))
    except KeyError as e:
        raise ValueError(f"composition file: missing field {e.args[0]!r}") from None


def composition_to_json(comp: Composition) -> dict:
    return {"elements": [{"component": e.component, "interface": list(e.interface)}
                         for e in comp.elements]}
