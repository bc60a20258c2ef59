"""Independent checker for compositions against nested-word automata.

Works directly on the recursive product of composition and automaton,
using procedure summaries; it shares nothing with the tree-automaton
pipeline except the model types.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

import networkx as nx

from .nested_word import Letter
from .nwba import Nwba, spec_automaton
from .rlc import Composition, Element, Library


@dataclass(frozen=True)
class Empty:
    def __bool__(self):
        return False


@dataclass(frozen=True)
class Counterexample:
    kind: str  # finite | internal-lasso | summary-lasso | pending-descent
    sketch: object  # finite: the input word; otherwise a lasso description

    def __bool__(self):
        return True


EMPTY = Empty()


class _Product:
    def __init__(self, comp: Composition, lib: Library, A: Nwba):
        self.comp, self.lib, self.A = comp, lib, A
        self.B = A.buchi_states
        self.C = {e: lib.component(comp.element(e).component) for e in range(1, len(comp) + 1)}
        # summ[e][q1] = {(i, sigma, q2, flag): witness inputs}
        self.summ = {e: {} for e in self.C}
        self.entered = sorted({q1 for _, _, q1, _ in A.delta_call}, key=repr)

    def local_moves(self, e, s, q):
        """Frame-local moves: (kind, label, s2, q2, flag, inputs).

        kind is "int", "sum" (a call that returns), or "exit".
        """
        C = self.C[e]
        A = self.A
        for sigma in self.lib.sigma_in:
            t = C.delta[s, sigma]
            j, i = C.call_index(t), C.return_index(t)
            if i is not None:
                yield "exit", (i, sigma), None, q, False, (sigma,)
            elif j is not None:
                callee = self.comp.element(e).interface[j - 1]
                D = self.C[callee]
                for q1, p in A.call_succ(q, Letter(sigma, D.labels[D.initial])):
                    for (i2, sig2, q2, fl), word in list(self.summ[callee].get(q1, {}).items()):
                        back = C.reentry[i2 - 1]
                        for q3 in A.ret_succ(q2, p, Letter(sig2, C.labels[back])):
                            yield ("sum", (j, q1, p), back, q3,
                                   fl or q1 in self.B or q3 in self.B, (sigma,) + word)
            else:
                for q2 in A.int_succ(q, Letter(sigma, C.labels[t])):
                    yield "int", None, t, q2, q2 in self.B, (sigma,)

    def _frame_exits(self, e, q1):
        """Exits reachable from a fresh frame of e entered with state q1."""
        C = self.C[e]
        start = (C.initial, q1, False)
        word = {start: ()}
        queue = deque([start])
        exits = {}
        while queue:
            s, q, fl = node = queue.popleft()
            for kind, label, s2, q2, f2, inputs in self.local_moves(e, s, q):
                if kind == "exit":
                    key = (label[0], label[1], q, fl)
                    exits.setdefault(key, word[node] + inputs)
                    continue
                nxt = (s2, q2, fl or f2)
                if nxt not in word:
                    word[nxt] = word[node] + inputs
                    queue.append(nxt)
        return exits

    def saturate(self):
        changed = True
        while changed:
            changed = False
            for e in self.C:
                for q1 in self.entered:
                    cur = self.summ[e].setdefault(q1, {})
                    for key, w in self._frame_exits(e, q1).items():
                        if key not in cur:
                            cur[key] = w
                            changed = True

    def finite_counterexample(self):
        C, A = self.C[1], self.A
        for q0 in sorted(A.initial, key=repr):
            start = (C.initial, q0)
            word = {start: ()}
            queue = deque([start])
            while queue:
                s, q = node = queue.popleft()
                for kind, label, s2, q2, _, inputs in self.local_moves(1, s, q):
                    if kind == "exit":
                        i, sigma = label
                        a = Letter(sigma, C.labels[C.returns[i - 1]])
                        if any(q3 in A.accepting for p in A.hier_initial
                               for q3 in A.ret_succ(q, p, a)):
                            return word[node] + inputs
                        continue
                    if (s2, q2) not in word:
                        word[s2, q2] = word[node] + inputs
                        queue.append((s2, q2))
        return None

    def infinite_counterexample(self):
        A = self.A
        g = nx.MultiDiGraph()
        roots = [(1, self.C[1].initial, q0) for q0 in A.initial]
        seen, todo = set(roots), list(roots)
        while todo:
            e, s, q = node = todo.pop()
            C = self.C[e]
            nxt = []
            for kind, label, s2, q2, fl, _ in self.local_moves(e, s, q):
                if kind != "exit":
                    nxt.append(((e, s2, q2), kind, fl))
            for sigma in self.lib.sigma_in:
                j = C.call_index(C.delta[s, sigma])
                if j is None:
                    continue
                callee = self.comp.element(e).interface[j - 1]
                D = self.C[callee]
                for q1, p in A.call_succ(q, Letter(sigma, D.labels[D.initial])):
                    if p in A.hier_final:
                        nxt.append(((callee, D.initial, q1), "descend", q1 in self.B))
            for t, kind, fl in nxt:
                g.add_edge(node, t, kind=kind, flag=fl)
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        for scc in nx.strongly_connected_components(g):
            for u, v, data in g.subgraph(scc).edges(data=True):
                if data["flag"]:
                    return self._classify(g, scc, u, v, data["kind"])
        return None

    def _classify(self, g, scc, u, v, kind):
        sub = g.subgraph(scc)
        path = nx.shortest_path(sub, v, u) if v != u else [u]
        kinds = {kind}
        for a, b in zip(path, path[1:]):
            kinds.add(min((d["kind"] for d in sub.get_edge_data(a, b).values()), key=_RANK.get))
        name = ("pending-descent" if "descend" in kinds else
                "summary-lasso" if "sum" in kinds else "internal-lasso")
        return Counterexample(name, {"cycle": [list(map(str, n)) for n in path + [path[0]]]})


_RANK = {"int": 0, "sum": 1, "descend": 2}


def model_check(comp: Composition, lib: Library, A: Nwba):
    """EMPTY iff no maximal computation of comp induces a word of L(A)."""
    P = _Product(comp, lib, A)
    P.saturate()
    w = P.finite_counterexample()
    if w is not None:
        return Counterexample("finite", list(w))
    cx = P.infinite_counterexample()
    return EMPTY if cx is None else cx


# -- brute-force realizability ------------------------------------------------------


@dataclass(frozen=True)
class RealizableWitness:
    composition: Composition


@dataclass(frozen=True)
class NoneUpTo:
    k: int


def used_calls(C) -> list[int]:
    """Call indices whose call state is reachable from s0 or a reentry state."""
    todo = [C.initial, *C.reentry]
    seen = set(todo)
    used = set()
    while todo:
        s = todo.pop()
        if C.is_exit(s):
            j = C.call_index(s)
            if j is not None:
                used.add(j)
            continue
        for (s1, _), t in C.delta.items():
            if s1 == s and t not in seen:
                seen.add(t)
                todo.append(t)
    return sorted(used)


def enumerate_compositions(lib: Library, k: int):
    """Compositions with exactly k elements, all reachable from element 1,
    numbered in breadth-first discovery order.  Interface entries of call
    states that can never be entered are fixed to 1."""
    names = [C.name for C in lib.components]
    used = {C.name: used_calls(C) for C in lib.components}
    for labels in itertools.product(names, repeat=k):
        slots = [(e, j) for e in range(k) for j in used[labels[e]]]
        for targets in itertools.product(range(1, k + 1), repeat=len(slots)):
            iface = [[1] * lib.n_c for _ in range(k)]
            for (e, j), t in zip(slots, targets):
                iface[e][j - 1] = t
            if _canonical(iface, used, labels, k):
                yield Composition(tuple(Element(labels[e], tuple(iface[e])) for e in range(k)))


def _canonical(iface, used, labels, k):
    nxt = 2
    order = [1]
    for e in order:
        for j in used[labels[e - 1]]:
            t = iface[e - 1][j - 1]
            if t >= nxt:
                if t != nxt:
                    return False
                order.append(t)
                nxt += 1
    return nxt == k + 1


def brute_force_realizable(lib: Library, spec, max_elements: int = 4):
    A = spec_automaton(spec, lib.sigma_in, lib.sigma_out)
    for k in range(1, max_elements + 1):
        for comp in enumerate_compositions(lib, k):
            if not model_check(comp, lib, A):
                return RealizableWitness(comp)
    return NoneUpTo(max_elements)
