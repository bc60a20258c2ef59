import itertools
import random

import pytest

from conftest import random_nwba
from test_abt import letters_of, universal
from test_rlc import random_composition, random_library
from nwsynth import fixtures
from nwsynth.nwba import Nwba, accepts_finite, translate_nwtl
from nwsynth.nwtl import parse
from nwsynth.oracle import (Counterexample, NoneUpTo, RealizableWitness, brute_force_realizable,
                            enumerate_compositions, model_check, used_calls)
from nwsynth.rlc import Composition, Element, simulate

LOOP = Composition((Element("LOOP", (1,)),))
CALLS = Composition((Element("CALLER", (2,)), Element("CALLEE", (1,))))


def first_is_call(lib):
    """Accepts exactly the words whose first position is a call."""
    L = letters_of(lib)
    return Nwba(letters=L, states=["s", "t"], initial=["s"], accepting=["t"],
                hier=["p"], hier_initial=["p"], hier_final=["p"],
                delta_call=[(q, a, "t", "p") for q in "st" for a in L],
                delta_int=[("t", a, "t") for a in L],
                delta_ret=[("t", "p", a, "t") for a in L])


def terminating_inputs(comp, lib, max_len):
    for n in range(1, max_len + 1):
        for word in itertools.product(lib.sigma_in, repeat=n):
            w, done = simulate(comp, lib, word)
            if done and len(w) == n:
                yield word, w


# -- model_check examples -----------------------------------------------------------

def test_loop_satisfies_always_x():
    lib = fixtures.loop_library()
    A = translate_nwtl(parse("!Gs out:x"), lib.sigma_in, lib.sigma_out)
    assert not model_check(LOOP, lib, A)


def test_loop_prefixes_rejected():
    from nwsynth.nested_word import substructure
    lib = fixtures.loop_library()
    A = translate_nwtl(parse("!Gs out:x"), lib.sigma_in, lib.sigma_out)
    w, _ = simulate(LOOP, lib, "a" * 10)
    assert not any(accepts_finite(A, substructure(w, 1, k)) for k in range(1, 11))


def test_loop_against_universal_is_internal_lasso():
    lib = fixtures.loop_library()
    cx = model_check(LOOP, lib, universal(lib))
    assert isinstance(cx, Counterexample) and cx.kind == "internal-lasso"


def test_caller_callee_first_call():
    lib = fixtures.caller_callee_library()
    A = first_is_call(lib)
    w, _ = simulate(CALLS, lib, "aaa")
    assert 1 in w.calls and accepts_finite(A, w)
    cx = model_check(CALLS, lib, A)
    assert cx and cx.kind in ("finite", "pending-descent")


def test_caller_callee_loop_is_summary_lasso():
    # a CALLER that calls itself descends forever
    lib = fixtures.caller_callee_library()
    comp = Composition((Element("CALLER", (1,)), Element("CALLEE", (1,))))
    cx = model_check(comp, lib, universal(lib))
    assert cx.kind == "pending-descent"


def test_kinds_under_universal_automaton():
    lib = fixtures.library_one()
    kinds = {model_check(c, lib, universal(lib)).kind
             for k in (1, 2) for c in enumerate_compositions(lib, k)}
    assert kinds <= {"finite", "internal-lasso", "summary-lasso", "pending-descent"}
    assert len(kinds) >= 2


# -- finite counterexamples against simulation ---------------------------------------

@pytest.mark.parametrize("seed", range(12))
def test_finite_behaviour_matches_simulation(seed):
    rng = random.Random(seed)
    lib = random_library(rng, n_comp=2, n_states=3, n_r=rng.randint(1, 2))
    comp = random_composition(rng, lib, rng.randint(1, 2))
    A = random_nwba(rng, 2, letters_of(lib), density=0.5)
    cx = model_check(comp, lib, A)
    if any(accepts_finite(A, w) for _, w in terminating_inputs(comp, lib, 6)):
        assert cx
    if cx and cx.kind == "finite":
        w, done = simulate(comp, lib, cx.sketch)
        assert done and accepts_finite(A, w)


# -- brute-force realizability -------------------------------------------------------

def test_loop_realizable_with_one_element():
    lib = fixtures.loop_library()
    res = brute_force_realizable(lib, parse("Gs out:x"), 1)
    assert isinstance(res, RealizableWitness) and res.composition == LOOP


def test_false_never_realizable():
    res = brute_force_realizable(fixtures.library_one(), parse("!true"), 3)
    assert res == NoneUpTo(3)


def canonical_form(comp, lib):
    """Relabel elements in breadth-first order over used calls; None if some
    element is unreachable."""
    used = {C.name: used_calls(C) for C in lib.components}
    order, pos = [1], {1: 1}
    for e in order:
        el = comp.element(e)
        for j in used[el.component]:
            t = el.interface[j - 1]
            if t not in pos:
                pos[t] = len(order) + 1
                order.append(t)
    if len(order) != len(comp):
        return None
    out = []
    for e in order:
        el = comp.element(e)
        out.append((el.component, tuple(pos[el.interface[j - 1]] if j in used[el.component] else 1
                                        for j in range(1, lib.n_c + 1))))
    return tuple(out)


@pytest.mark.parametrize("factory", [fixtures.library_one, fixtures.library_two,
                                     fixtures.library_three])
def test_enumeration_covers_every_shape_once(factory):
    lib = factory()
    for k in (1, 2, 3):
        got = [canonical_form(c, lib) for c in enumerate_compositions(lib, k)]
        assert len(got) == len(set(got)) and None not in got
        every = {canonical_form(Composition(tuple(Element(n, f) for n, f in zip(names, ifs))), lib)
                 for names in itertools.product(lib.names, repeat=k)
                 for ifs in itertools.product(
                     itertools.product(range(1, k + 1), repeat=lib.n_c), repeat=k)}
        every.discard(None)
        assert set(got) == every


def calls_and_returns_only(lib):
    """Büchi-accepts words with no internal positions; no finite word is accepted."""
    L = letters_of(lib)
    return Nwba(letters=L, states=[0], initial=[0], accepting=[], buchi=[0],
                hier=["p"], hier_initial=["p"], hier_final=["p"],
                delta_call=[(0, a, 0, "p") for a in L], delta_ret=[(0, "p", a, 0) for a in L])


def test_infinite_kinds_without_internal_steps():
    lib = fixtures.library_three()
    A = calls_and_returns_only(lib)
    kinds = {model_check(c, lib, A).kind for k in (1, 2)
             for c in enumerate_compositions(lib, k) if model_check(c, lib, A)}
    assert kinds == {"summary-lasso", "pending-descent"}
