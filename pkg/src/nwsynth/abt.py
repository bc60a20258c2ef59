"""Alternating Büchi tree automaton over composition trees.

A tree is accepted iff the composition it describes has a computation whose
nested word the automaton ``A`` accepts.  Transitions are monotone formulas
(:mod:`nwsynth.boolform`) over atoms ``(direction, state)``.
"""
from __future__ import annotations

import itertools
from typing import NamedTuple

from . import boolform as bf
from .nested_word import Letter
from .nwba import Nwba
from .rlc import Library, RlcComponent
from .summary_graph import ConfigGraph, ExitV, Entry, build_graph


class Root(NamedTuple):
    kind: str = "root"


class CallCheck(NamedTuple):
    """Called with automaton state q on input sigma; must return via the i-th
    return state so that the return letter (., o) leads the automaton to q2.
    With b = 1 the segment must also visit a Büchi state."""

    q: object
    sigma: str
    q2: object
    i: int
    o: str
    b: int


class PendingCheck(NamedTuple):
    """Called with automaton state q on input sigma and never returning."""

    q: object
    sigma: str
    b: int


ROOT = Root()


class DepthExhausted(RuntimeError):
    pass


class Abt:
    def __init__(self, lib: Library, A: Nwba):
        self.lib, self.A = lib, A
        self.B = A.buchi_states
        self.graphs = {C.name: build_graph(C, A, lib.sigma_in) for C in lib.components}
        self._cache = {}
        self.initial = ROOT

    # -- bookkeeping ---------------------------------------------------------------

    def is_accepting(self, s) -> bool:
        return isinstance(s, PendingCheck) and s.b == 1

    def size_bound(self) -> int:
        Q, L = len(self.A.states), self.lib
        return (1 + 2 * Q * Q * L.n_r * len(L.sigma_in) * len(L.sigma_out)
                + 2 * Q * len(L.sigma_in))

    def declared_states(self):
        Q = sorted(self.A.states, key=repr)
        L = self.lib
        yield ROOT
        for q, s, q2, i, o, b in itertools.product(
                Q, L.sigma_in, Q, range(1, L.n_r + 1), L.sigma_out, (0, 1)):
            yield CallCheck(q, s, q2, i, o, b)
        for q, s, b in itertools.product(Q, L.sigma_in, (0, 1)):
            yield PendingCheck(q, s, b)

    def reachable_states(self):
        seen, todo = {ROOT}, [ROOT]
        while todo:
            s = todo.pop()
            for C in self.lib.components:
                for _, t in self.transition(s, C.name).atoms:
                    if t not in seen:
                        seen.add(t)
                        todo.append(t)
        return seen

    def dead_states(self) -> frozenset:
        """Reachable states accepting no tree, even with acceptance ignored."""
        if getattr(self, "_dead", None) is None:
            names = [C.name for C in self.lib.components]
            dirs = range(1, self.lib.n_c + 1)
            reach = self.reachable_states()
            alive = set(reach)
            while True:
                atoms = {(d, t) for t in alive for d in dirs}
                keep = {s for s in alive
                        if any(self.transition(s, n).satisfied_by(atoms) for n in names)}
                if keep == alive:
                    break
                alive = keep
            self._dead = frozenset(reach - alive)
        return self._dead

    def models(self, s, name, limit=None):
        return bf.minimal_models(self.transition(s, name), limit=limit)

    # -- transitions -------------------------------------------------------------

    def transition(self, s, name) -> bf.Monotone:
        key = (s, name)
        if key not in self._cache:
            C = self.lib.component(name)
            if isinstance(s, Root):
                f = self._root(C)
            elif isinstance(s, CallCheck):
                f = self._call_check(C, s)
            else:
                f = self._pending_check(C, s)
            self._cache[key] = f
        return self._cache[key]

    def _edges(self, C: RlcComponent, G: ConfigGraph, marking: bool, pending_goal=False):
        """Edge function over (vertex, layer); layer 1 = a marked edge was used."""

        def edges(node):
            v, layer = node
            if v == "goal":
                return
            if v[0] in ("entry", "reentry"):
                for t, acc in G.successors(v):
                    yield (t, layer), None
                    if marking and acc and layer == 0:
                        yield (t, 1), None
            elif v[0] == "call":
                _, j, sigma, q = v
                for t in G.call_targets(v):
                    _, m, q2 = t
                    o = C.labels[C.reentry[m - 1]]
                    yield (t, layer), (j, CallCheck(q, sigma, q2, m, o, 0))
                    if marking and layer == 0:
                        yield (t, 1), (j, CallCheck(q, sigma, q2, m, o, 1))
                if pending_goal and (layer == 1 or not marking):
                    for b in (0, 1):
                        yield ("goal", layer), (j, PendingCheck(q, sigma, b))

        return edges

    def _call_check(self, C, s: CallCheck):
        A, G = self.A, self.graphs[C.name]
        parts = []
        for q1, p in A.call_succ(s.q, Letter(s.sigma, C.labels[C.initial])):
            need = s.b == 1 and q1 not in self.B and s.q2 not in self.B

            def accept(node, p=p, need=need):
                v, layer = node
                if v[0] != "exit" or v[1] != s.i or (need and layer == 0):
                    return False
                return s.q2 in A.ret_succ(v[3], p, Letter(v[2], s.o))

            parts.append(bf.Reach([(Entry(q1), 0)], self._edges(C, G, need), accept))
        return _disj(parts)

    def _pending_check(self, C, s: PendingCheck):
        A = self.A
        parts = []
        for q1, p in A.call_succ(s.q, Letter(s.sigma, C.labels[C.initial])):
            if p in A.hier_final:
                parts.append(self._body(C, q1, s.b == 1 and q1 not in self.B))
        return _disj(parts)

    def _body(self, C, q1, need):
        G = self.graphs[C.name]
        src = [(Entry(q1), 0)]
        bottom = bf.Reach(src, self._edges(C, G, False),
                          lambda n: n[0][0] in ("entry", "reentry") and G.has_bottom(n[0]))
        descend = bf.Reach(src, self._edges(C, G, need, pending_goal=True),
                           lambda n: n[0] == "goal")
        cycle = bf.Reach(src, self._edges(C, G, True), lasso=True)
        return _disj([bottom, descend, cycle])

    def _root(self, C):
        A, G = self.A, self.graphs[C.name]
        parts = []
        for q0 in sorted(A.initial, key=repr):
            parts.append(self._body(C, q0, False))

            def accept(node):
                v = node[0]
                if v[0] != "exit":
                    return False
                _, i, sigma, q2 = v
                a = Letter(sigma, C.labels[C.returns[i - 1]])
                return any(q3 in A.accepting for p in A.hier_initial
                           for q3 in A.ret_succ(q2, p, a))

            parts.append(bf.Reach([(Entry(q0), 0)], self._edges(C, G, False), accept))
        return _disj(parts)

    # -- finite runs ----------------------------------------------------------------

    def run_finite_check(self, tree: dict, state, node=()) -> bool:
        """Existence of a finite accepting run from ``state`` at ``node``.

        Raises DepthExhausted when the answer depends on nodes below the
        tree's leaves.
        """
        verdict = self._finite(tree, state, node, {})
        if verdict is None:
            raise DepthExhausted(f"tree too shallow to decide {state}")
        return verdict

    def _finite(self, tree, state, node, memo):
        key = (state, node)
        if key in memo:
            return memo[key]
        memo[key] = False  # a finite run never revisits (state, node)
        f = self.transition(state, tree[node])
        yes, unknown = set(), set()
        for atom in f.atoms:
            j, t = atom
            child = node + (j,)
            r = self._finite(tree, t, child, memo) if child in tree else None
            if r:
                yes.add(atom)
            elif r is None:
                unknown.add(atom)
        if f.satisfied_by(yes):
            out = True
        elif not f.satisfied_by(yes | unknown):
            out = False
        else:
            out = None
        memo[key] = out
        return out


def _disj(parts):
    return bf.FALSE if not parts else parts[0] if len(parts) == 1 else bf.Disj(parts)


def build_abt(lib: Library, A: Nwba) -> Abt:
    letters = {Letter(a, o) for a in lib.sigma_in for o in lib.sigma_out}
    if set(A.letters) != letters:
        raise ValueError("automaton alphabet does not match the library alphabets")
    return Abt(lib, A)


def dump_abt(abt: Abt) -> str:
    states = abt.reachable_states()
    by_kind = {"root": 0, "call-check": 0, "pending-check": 0}
    for s in states:
        by_kind["root" if isinstance(s, Root) else
                "call-check" if isinstance(s, CallCheck) else "pending-check"] += 1
    lines = [f"reachable states: {len(states)} (bound {abt.size_bound()})"]
    lines += [f"  {k}: {v}" for k, v in by_kind.items()]
    for C in abt.lib.components:
        sat = sum(1 for s in states if abt.transition(s, C.name).satisfied_by(
            abt.transition(s, C.name).atoms))
        lines.append(f"component {C.name}: {sat} satisfiable transitions")
    return "\n".join(lines)
