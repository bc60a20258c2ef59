import pytest
from hypothesis import given, settings, strategies as st

from conftest import formulas, nested_words
from nwsynth import nwtl
from nwsynth.nested_word import CALL, INT, RET, build_nested_word
from nwsynth.nwtl import (And, Always, Eventually, Formula, Next, NextMu, Not,
                          Out, ParseError, Prev, PrevMu, Since, UnknownAtomError, Until,
                          closure, evaluate, negate, parse, pretty)


def reference(w, i, f):
    """Naive evaluator: summary paths rebuilt from scratch, no memoisation."""
    def spath(a, b):
        out, cur = [a], a
        while cur != b:
            nxt = next((j for (c, j) in w.mu if c == cur), None)
            cur = nxt if nxt is not None and nxt <= b else cur + 1
            out.append(cur)
        return out

    n, k = len(w), f.kind
    if k == "true":
        return True
    if k in ("call", "ret"):
        return i in (w.calls if k == "call" else w.rets)
    if k == "in":
        return w.letters[i - 1][0] == f.symbol
    if k == "out":
        return w.letters[i - 1][1] == f.symbol
    if k == "not":
        return not reference(w, i, f.args[0])
    if k in ("or", "and"):
        vals = [reference(w, i, a) for a in f.args]
        return any(vals) if k == "or" else all(vals)
    if k == "next":
        return i + 1 <= n and reference(w, i + 1, f.args[0])
    if k == "prev":
        return i - 1 >= 1 and reference(w, i - 1, f.args[0])
    if k == "next_mu":
        return any(c == i and reference(w, j, f.args[0]) for c, j in w.mu)
    if k == "prev_mu":
        return any(j == i and reference(w, c, f.args[0]) for c, j in w.mu)
    a, b = f.args
    if k == "until":
        return any(reference(w, j, b) and all(reference(w, p, a) for p in spath(i, j)[:-1])
                   for j in range(i, n + 1))
    return any(reference(w, j, b) and all(reference(w, p, a) for p in spath(j, i)[1:])
               for j in range(1, i))


def w_of(tags, outs):
    return build_nested_word((("a", o), t) for o, t in zip(outs, tags))


# -- parsing ---------------------------------------------------------------------------

def test_parse_until():
    assert parse("true Us out:x") == Until(nwtl.TRUE, Out("x"))


def test_parse_derived_always():
    assert parse("!(true Us !out:x)") == Not(Until(nwtl.TRUE, Not(Out("x"))))
    assert parse("Gs out:x") == Always(Out("x"))


def test_parse_precedence():
    assert parse("call & Xmu ret") == And(nwtl.CALL, NextMu(nwtl.RET))


def test_parse_errors():
    with pytest.raises(ParseError):
        parse("out:x &")
    with pytest.raises(ParseError):
        parse("(call")
    with pytest.raises(UnknownAtomError):
        parse("out:z", ["a"], ["x", "y"])


@given(formulas())
def test_pretty_parse_round_trip(f):
    assert parse(pretty(f)) == f


def test_bad_arity():
    with pytest.raises(ValueError):
        Formula("until", (nwtl.TRUE,))


# -- semantics -------------------------------------------------------------------------

def test_true_everywhere():
    w = w_of([CALL, INT, RET], "xxx")
    assert all(evaluate(w, i, nwtl.TRUE) for i in (1, 2, 3))


def test_next_mu_sees_matching_return():
    assert evaluate(w_of([CALL, INT, RET], "xxx"), 1, NextMu(nwtl.RET))


def test_until_skips_inner_positions():
    w = w_of([CALL, INT, RET, INT], ["p", "z", "p", "q"])
    assert evaluate(w, 1, Until(Out("p"), Out("q")))
    # the linear until would fail at position 2
    assert not evaluate(w, 2, Until(Out("p"), Out("q")))


def test_since_literal_reading():
    # phi2 strictly before, phi1 at every later path position including i
    w = w_of([INT, INT, INT], ["q", "p", "p"])
    assert evaluate(w, 3, Since(Out("p"), Out("q")))
    assert not evaluate(w, 1, Since(Out("p"), Out("q")))
    w2 = w_of([INT, INT], ["q", "z"])
    assert not evaluate(w2, 2, Since(Out("p"), Out("q")))


def test_boundaries_are_false():
    w = w_of([INT], "x")
    for op in (Next, Prev, NextMu, PrevMu):
        assert not evaluate(w, 1, op(nwtl.TRUE))


def test_position_out_of_range():
    with pytest.raises(ValueError):
        evaluate(w_of([INT], "x"), 2, nwtl.TRUE)


@settings(max_examples=300, deadline=None)
@given(nested_words(max_size=7), formulas(), st.data())
def test_agrees_with_reference(w, f, data):
    i = data.draw(st.integers(1, len(w)))
    assert evaluate(w, i, f) == reference(w, i, f)


@given(nested_words(), formulas(4), formulas(4), st.data())
def test_until_holds_when_goal_holds(w, a, b, data):
    i = data.draw(st.integers(1, len(w)))
    if evaluate(w, i, b):
        assert evaluate(w, i, Until(a, b))


@given(nested_words(), formulas(4), st.data())
def test_eventually_always_duality(w, f, data):
    i = data.draw(st.integers(1, len(w)))
    assert evaluate(w, i, Always(f)) == (not evaluate(w, i, Eventually(Not(f))))


# -- closure ---------------------------------------------------------------------------

def test_closure_of_true():
    c = closure(nwtl.TRUE)
    assert c == {nwtl.TRUE, Not(nwtl.TRUE), nwtl.CALL, Not(nwtl.CALL), nwtl.RET, Not(nwtl.RET)}


def test_closure_of_until():
    p, q = Out("x"), Out("y")
    c = closure(Until(p, q))
    assert {p, q, Until(p, q), Not(p), Not(q), Not(Until(p, q))} <= c


@given(formulas())
def test_closure_closed_under_negation(f):
    c = closure(f)
    assert all(negate(g) in c for g in c)
    assert closure(Not(Not(f))) >= closure(f)


def test_negate_collapses():
    assert negate(Not(nwtl.CALL)) == nwtl.CALL
