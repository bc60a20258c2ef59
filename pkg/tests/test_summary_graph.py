import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_nwba
from nwsynth import fixtures
from nwsynth.nested_word import Letter
from nwsynth.nwba import Nwba
from nwsynth.summary_graph import (BOTTOM_V, CallV, Entry, ExitV, Reentry, build_graph,
                                   enum_paths)
from test_rlc import random_library

LET = [Letter("a", "x"), Letter("a", "y")]


def universal(letters=LET, final=True):
    return Nwba(letters, ["q"], ["q"], ["q"] if final else [], ["p"], ["p"], ["p"],
                [("q", a, "q", "p") for a in letters], [("q", a, "q") for a in letters],
                [("q", "p", a, "q") for a in letters])


def brute_edges(C, A, s0, q0, sigma_in):
    """Internal runs by explicit bounded search: {(target, accepting)}."""
    limit = 2 * len(C.states) * len(A.states) + 2
    callable_ = {q for q, _, _, _ in A.delta_call}
    found = set()
    frontier = {(s0, q0, False)}
    for _ in range(limit):
        nxt = set()
        for s, q, acc in frontier:
            for a in sigma_in:
                t = C.delta[s, a]
                if t in C.calls:
                    if q in callable_:
                        found.add((CallV(C.calls.index(t) + 1, a, q), acc))
                elif t in C.returns:
                    found.add((ExitV(C.returns.index(t) + 1, a, q), acc))
                else:
                    for q2 in A.int_succ(q, Letter(a, C.labels[t])):
                        nxt.add((t, q2, acc or q2 in A.buchi_states))
        frontier = nxt
    # every accepting edge also exists as a plain edge
    return found | {(t, False) for t, _ in found}


def brute_bottom(C, A, s0, q0, sigma_in):
    """Lasso through a Buchi state inside the internal product, by plain DFS."""
    def succ(n):
        s, q = n
        for a in sigma_in:
            t = C.delta[s, a]
            if not C.is_exit(t):
                for q2 in A.int_succ(q, Letter(a, C.labels[t])):
                    yield (t, q2)

    def reach(src):
        seen, todo = {src}, [src]
        while todo:
            for m in succ(todo.pop()):
                if m not in seen:
                    seen.add(m)
                    todo.append(m)
        return seen

    R = reach((s0, q0))
    return any(n[1] in A.buchi_states and any(n in reach(m) for m in succ(n)) for n in R)


def test_loop_has_bottom():
    G = build_graph(fixtures.loop_component(), universal(), ["a"])
    assert G.has_bottom(Entry("q"))
    assert (Entry("q"), BOTTOM_V) in G.bottom_edges


def test_callee_exit_edge():
    G = build_graph(fixtures.callee_component(), universal(), ["a"])
    assert [t for t, _ in G.successors(Entry("q"))] == [ExitV(1, "a", "q")]
    assert not G.has_bottom(Entry("q"))


def test_no_final_states_no_accepting_edges():
    A = universal(final=False)
    for C in fixtures.library_one().components:
        G = build_graph(C, Nwba([Letter(s, o) for s in "ab" for o in "xy"], A.states,
                                A.initial, [], A.hier, A.hier_initial, A.hier_final,
                                [("q", Letter(s, o), "q", "p") for s in "ab" for o in "xy"],
                                [("q", Letter(s, o), "q") for s in "ab" for o in "xy"]))
        assert not G.bottom_edges
        assert not any(acc for _, _, acc in G.component_edges)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_edges_match_bounded_search(seed):
    rng = random.Random(seed)
    lib = random_library(rng, n_comp=1, n_states=rng.randint(1, 3), sigma_in=("a", "b"))
    letters = [Letter(s, o) for s in "ab" for o in "xy"]
    A = random_nwba(rng, rng.randint(1, 3), letters)
    C = lib.components[0]
    G = build_graph(C, A, lib.sigma_in)
    for q in A.states:
        v = Entry(q)
        got = set(G.successors(v))
        assert got == brute_edges(C, A, C.initial, q, lib.sigma_in)
        assert G.has_bottom(v) == brute_bottom(C, A, C.initial, q, lib.sigma_in)
        # witnesses replay through the component and the automaton
        for (t, acc), wit in G.component_edges_from(v).items():
            s, qs = C.initial, list(wit.states)
            assert qs[0] == q
            for k, a in enumerate(wit.inputs[:-1]):
                s = C.delta[s, a]
                assert qs[k + 1] in A.int_succ(qs[k], Letter(a, C.labels[s]))
            assert t[2] == wit.inputs[-1] and t[3] == qs[-1]
            assert not acc or any(x in A.buchi_states for x in qs[1:])
    assert {(v, t) for v, t, acc in G.component_edges if acc} <= \
        {(v, t) for v, t, acc in G.component_edges if not acc}


# -- bounded paths ---------------------------------------------------------------------

def test_single_edge_path():
    G = build_graph(fixtures.callee_component(), universal(), ["a"])
    paths = list(enum_paths(G, Entry("q"), {ExitV(1, "a", "q")}, 4))
    assert len(paths) == 1 and len(paths[0][0]) == 1 and paths[0][1] is None


def test_no_path():
    G = build_graph(fixtures.callee_component(), universal(), ["a"])
    assert list(enum_paths(G, Entry("q"), {CallV(1, "a", "q")}, 4)) == []


def test_bound_must_be_positive():
    G = build_graph(fixtures.callee_component(), universal(), ["a"])
    with pytest.raises(ValueError):
        list(enum_paths(G, Entry("q"), {ExitV(1, "a", "q")}, 0))


def test_rho_paths_mark_the_cycle():
    # caller: s0 -a-> c1, e1 -a-> c1 gives Call <-> Reentry cycle
    C = fixtures.component("CYC", ("a",), {("s0", "a"): "c1", ("e1", "a"): "c1"},
                           {"s0": "x", "e1": "x", "c1": "x", "r1": "x"},
                           calls=("c1",), returns=("r1",), reentry=("e1",))
    G = build_graph(C, universal(), ["a"])
    out = list(enum_paths(G, Entry("q"), set(), 12, mark_accepting=True))
    assert out
    for edges, k in out:
        last = edges[-1][2]
        start = next(n for n, e in enumerate(edges) if e[1] == last)
        assert start <= k < len(edges)
        assert edges[k][0] == "call" or edges[k][3]


def test_dump_lists_edges():
    G = build_graph(fixtures.loop_component(), universal(), ["a"])
    assert "bottom" in G.dump()
