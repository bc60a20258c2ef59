import itertools

from hypothesis import given, settings, strategies as st

from nwsynth import boolform as bf

U = ["a", "b", "c", "d", "e"]


def subsets(xs):
    xs = sorted(xs)
    for r in range(len(xs) + 1):
        yield from (frozenset(c) for c in itertools.combinations(xs, r))


def brute_minimal(f, universe):
    models = [S for S in subsets(universe) if f.satisfied_by(S)]
    return {m for m in models if not any(o < m for o in models)}


@st.composite
def reach_formulas(draw):
    n = draw(st.integers(2, 5))
    lasso = draw(st.booleans())
    raw = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1),
                                  st.sampled_from(U + [None]), st.booleans()), max_size=10))
    goal = draw(st.integers(0, n - 1))

    def edges(v):
        base, layer = v
        for s, t, a, up in raw:
            if s == base:
                if lasso:
                    yield (t, max(layer, 1 if up else 0)), a
                else:
                    yield (t, 0), a
    return bf.Reach([(0, 0)], edges, accept=lambda v: v[0] == goal, lasso=lasso)


leaves = st.one_of(
    st.just(bf.TRUE), st.just(bf.FALSE),
    st.lists(st.sets(st.sampled_from(U), max_size=3), min_size=1, max_size=3).map(bf.Explicit),
    reach_formulas())
monotone = st.recursive(leaves, lambda sub: st.one_of(
    st.lists(sub, min_size=1, max_size=3).map(bf.Conj),
    st.lists(sub, min_size=1, max_size=3).map(bf.Disj),
    sub.map(bf.dual)), max_leaves=5)


def test_constants():
    assert bf.TRUE.satisfied_by(set()) and not bf.FALSE.satisfied_by(set(U))
    assert bf.minimal_models(bf.FALSE) == [] and bf.minimal_models(bf.TRUE) == [frozenset()]


def test_explicit_models():
    f = bf.Explicit([{"a", "b"}, {"c"}, {"a", "b", "c"}])
    assert set(bf.minimal_models(f)) == {frozenset("ab"), frozenset("c")}


def test_reach_needs_labelled_edge():
    f = bf.Reach([(0, 0)], lambda v: [((1, 0), "a")] if v[0] == 0 else [],
                 accept=lambda v: v[0] == 1)
    assert not f.satisfied_by(set()) and f.satisfied_by({"a"})


def test_lasso_needs_a_raising_cycle():
    def edges(v):
        if v[0] == 0:
            yield (1, v[1]), "a"
        else:
            yield (0, 1), "b"
    f = bf.Reach([(0, 0)], edges, lasso=True)
    assert f.satisfied_by({"a", "b"}) and not f.satisfied_by({"a"})


@settings(max_examples=150, deadline=None)
@given(monotone)
def test_monotone(f):
    for S in subsets(U):
        if f.satisfied_by(S):
            assert all(f.satisfied_by(S | {x}) for x in U)


@settings(max_examples=150, deadline=None)
@given(monotone)
def test_minimal_models_match_brute_force(f):
    assert set(bf.minimal_models(f)) == brute_minimal(f, f.atoms)


@settings(max_examples=100, deadline=None)
@given(monotone, st.sets(st.sampled_from(U)))
def test_minimal_models_respect_allowed(f, allowed):
    got = bf.minimal_models(f, allowed=allowed)
    assert set(got) == brute_minimal(f, f.atoms & allowed)


@settings(max_examples=150, deadline=None)
@given(monotone)
def test_dual_is_complement_reading(f):
    g = bf.dual(f)
    for S in subsets(U):
        assert g.satisfied_by(S) == (not f.satisfied_by(frozenset(U) - S))


@given(monotone)
def test_dual_involution(f):
    for S in subsets(U):
        assert bf.dual(bf.dual(f)).satisfied_by(S) == f.satisfied_by(S)


@settings(max_examples=150, deadline=None)
@given(monotone, st.sets(st.sampled_from(U)))
def test_fix_makes_atoms_true(f, T):
    g = bf.fix(f, T)
    assert g.atoms <= f.atoms
    for S in subsets(U):
        assert g.satisfied_by(S) == f.satisfied_by(S | T)


@settings(max_examples=150, deadline=None)
@given(monotone, st.permutations(U))
def test_rename_transports_models(f, perm):
    m = dict(zip(U, [p.upper() for p in perm]))
    g = bf.rename(f, m)
    for S in subsets(U):
        assert g.satisfied_by({m[a] for a in S}) == f.satisfied_by(S)


@settings(max_examples=100, deadline=None)
@given(monotone)
def test_witness_is_minimal(f):
    w = f.witness()
    if w is None:
        assert not f.satisfied_by(f.atoms)
    else:
        assert f.satisfied_by(w) and w in brute_minimal(f, f.atoms)


def test_transversals_are_minimal_hitting_sets():
    sets = [frozenset("ab"), frozenset("bc"), frozenset("cd")]
    t = bf.Transversals()
    for s in sets:
        t.add(s)
    hitting = [h for h in subsets("abcd") if all(h & s for s in sets)]
    assert set(t.sets) == {h for h in hitting if not any(o < h for o in hitting)}
