"""Per-component configuration graphs (entry/call/reentry/exit/bottom vertices).

Vertices are plain tuples:

* ``("entry", q)``            component at s0, automaton at q
* ``("reentry", m, q)``       component at s_e^m, automaton at q
* ``("call", j, sigma, q)``   reading ``sigma`` leads into the j-th call state
* ``("exit", i, sigma, q)``   reading ``sigma`` leads into the i-th return state
* ``("bottom",)``             the frame runs forever without leaving

``q`` in call/exit vertices is the automaton state *before* the boundary
letter; the boundary transitions themselves are resolved by the child
check (see :mod:`nwsynth.abt`).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import networkx as nx

from .nested_word import Letter
from .nwba import Nwba
from .rlc import RlcComponent

BOTTOM_V = ("bottom",)


def Entry(q):
    return ("entry", q)


def Reentry(m, q):
    return ("reentry", m, q)


def CallV(j, sigma, q):
    return ("call", j, sigma, q)


def ExitV(i, sigma, q):
    return ("exit", i, sigma, q)


@dataclass(frozen=True)
class Witness:
    """A concrete internal run: inputs read and automaton states entered."""

    inputs: tuple
    states: tuple  # automaton states, states[0] is the source state


class ConfigGraph:
    """Lazily built graph G_C for one component and one automaton."""

    def __init__(self, C: RlcComponent, A: Nwba, sigma_in):
        self.C, self.A = C, A
        self.sigma_in = tuple(sigma_in)
        self.B = A.buchi_states
        self._out = {}
        self._good = None
        # a reentry vertex is only useful if some return transition enters it
        self.reentry_states = {}
        for m, s in enumerate(C.reentry, start=1):
            o = C.labels[s]
            self.reentry_states[m] = sorted(
                {q2 for _, _, a, q2 in A.delta_ret if a.out == o}, key=repr)
        self._callable = {q for q, _, _, _ in A.delta_call}

    def sources(self):
        yield from (Entry(q) for q in sorted(self.A.states, key=repr))
        for m, qs in self.reentry_states.items():
            yield from (Reentry(m, q) for q in qs)

    def _start(self, v):
        if v[0] == "entry":
            return self.C.initial, v[1]
        if v[0] == "reentry":
            return self.C.reentry[v[1] - 1], v[2]
        raise ValueError(f"{v!r} has no component edges")

    def component_edges_from(self, v):
        """{(target, accepting): Witness} for one entry/reentry source."""
        if v in self._out:
            return self._out[v]
        C, A = self.C, self.A
        s0, q0 = self._start(v)
        start = (s0, q0, False)
        parent = {start: None}
        queue = deque([start])
        found = {}
        while queue:
            node = queue.popleft()
            s, q, acc = node
            for sigma in self.sigma_in:
                t = C.delta[s, sigma]
                j, i = C.call_index(t), C.return_index(t)
                if j is not None or i is not None:
                    if j is not None and q not in self._callable:
                        continue
                    tgt = CallV(j, sigma, q) if j is not None else ExitV(i, sigma, q)
                    if (tgt, acc) not in found:
                        found[tgt, acc] = (node, sigma)
                    continue
                for q2 in A.int_succ(q, Letter(sigma, C.labels[t])):
                    nxt = (t, q2, acc or q2 in self.B)
                    if nxt not in parent:
                        parent[nxt] = (node, sigma)
                        queue.append(nxt)
        edges = {}
        for key, (node, sigma) in sorted(found.items(), key=repr):
            inputs, states = [sigma], []
            while node is not None:
                states.append(node[1])
                back = parent[node]
                if back is None:
                    break
                node, a = back
                inputs.append(a)
            edges[key] = Witness(tuple(reversed(inputs)), tuple(reversed(states)))
        self._out[v] = edges
        return edges

    def successors(self, v):
        """(target, accepting) pairs of component edges; accepting implies plain."""
        keys = set(self.component_edges_from(v))
        return sorted(keys | {(t, False) for t, _ in keys}, key=repr)

    def call_targets(self, v):
        """Reentry vertices a call vertex connects to."""
        return [Reentry(m, q) for m, qs in self.reentry_states.items() for q in qs]

    def _good_nodes(self):
        """Product nodes (s, q) with an infinite internal run visiting B infinitely often."""
        if self._good is None:
            C, A = self.C, self.A
            g = nx.DiGraph()
            for s in C.states:
                if C.is_exit(s):
                    continue
                for q in A.states:
                    g.add_node((s, q))
                    for sigma in self.sigma_in:
                        t = C.delta[s, sigma]
                        if C.is_exit(t):
                            continue
                        for q2 in A.int_succ(q, Letter(sigma, C.labels[t])):
                            g.add_edge((s, q), (t, q2))
            good = set()
            for scc in nx.strongly_connected_components(g):
                cyclic = len(scc) > 1 or any(g.has_edge(n, n) for n in scc)
                if cyclic and any(q in self.B for _, q in scc):
                    good |= scc
            for n in list(good):
                good |= nx.ancestors(g, n)
            self._good = good
        return self._good

    def has_bottom(self, v) -> bool:
        return self._start(v) in self._good_nodes()

    # -- eager views (tests, dumps) -------------------------------------------

    def reachable(self, roots=None):
        """Vertices reachable from ``roots`` (default: every source)."""
        todo = list(self.sources() if roots is None else roots)
        seen = set(todo)
        while todo:
            v = todo.pop()
            if v[0] in ("entry", "reentry"):
                nxt = [t for t, _ in self.successors(v)]
                if self.has_bottom(v):
                    nxt.append(BOTTOM_V)
            elif v[0] == "call":
                nxt = self.call_targets(v)
            else:
                nxt = []
            for t in nxt:
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        return seen

    @property
    def vertices(self):
        return self.reachable()

    @property
    def component_edges(self):
        return {(v, t, acc) for v in self.vertices if v[0] in ("entry", "reentry")
                for t, acc in self.successors(v)}

    @property
    def call_edges(self):
        return {(v, t) for v in self.vertices if v[0] == "call" for t in self.call_targets(v)}

    @property
    def bottom_edges(self):
        return {(v, BOTTOM_V) for v in self.vertices
                if v[0] in ("entry", "reentry") and self.has_bottom(v)}

    def dump(self) -> str:
        lines = [f"graph for component {self.C.name}"]
        for v in sorted(self.vertices, key=repr):
            if v[0] in ("entry", "reentry"):
                for t, acc in self.successors(v):
                    lines.append(f"  {v} -> {t}{' [acc]' if acc else ''}")
                if self.has_bottom(v):
                    lines.append(f"  {v} -> {BOTTOM_V}")
            elif v[0] == "call":
                for t in self.call_targets(v):
                    lines.append(f"  {v} => {t}")
        return "\n".join(lines)


def build_graph(C: RlcComponent, A: Nwba, sigma_in=None) -> ConfigGraph:
    if sigma_in is None:
        sigma_in = sorted({a.inp for a in A.letters})
    return ConfigGraph(C, A, sigma_in)


# -- bounded path enumeration ----------------------------------------------------


def _edges_out(G: ConfigGraph, v):
    if v[0] in ("entry", "reentry"):
        for t, acc in G.successors(v):
            yield ("comp", v, t, acc)
        if G.has_bottom(v):
            yield ("bottom", v, BOTTOM_V, False)
    elif v[0] == "call":
        for t in G.call_targets(v):
            yield ("call", v, t, False)


def _markable(edge):
    kind, _, _, acc = edge
    return kind == "call" or (kind == "comp" and acc)


def enum_paths(G: ConfigGraph, source, targets, bound: int, mark_accepting: bool = False):
    """Lazily yield ``(edges, marking)`` pairs.

    ``marking`` is None without marking, else the index of the one edge
    mapped to 1.  With ``targets`` empty the stream holds rho-paths: the
    last vertex repeats an earlier one and the marked edge lies on the cycle.
    Parallel plain/accepting component edges count as distinct edges.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    targets = set(targets)
    rho = not targets

    def emit(path, start_of_cycle):
        if not mark_accepting:
            yield list(path), None
            return
        for k in range(start_of_cycle, len(path)):
            if _markable(path[k]):
                yield list(path), k

    def dfs(v, path, on_path):
        if len(path) >= bound:
            return
        for e in _edges_out(G, v):
            if mark_accepting is False and e[0] == "comp" and e[3]:
                continue  # plain mode uses the plain copy of each edge
            t = e[2]
            path.append(e)
            if rho:
                if t in on_path:
                    yield from emit(path, on_path[t])
                else:
                    on_path[t] = len(path)
                    yield from dfs(t, path, on_path)
                    del on_path[t]
            elif t not in on_path:
                if t in targets:
                    yield from emit(path, 0)
                on_path[t] = len(path)
                yield from dfs(t, path, on_path)
                del on_path[t]
            path.pop()

    yield from dfs(source, [], {source: 0})
