import sys
from pathlib import Path

from hypothesis import strategies as st

from nwsynth import nwtl
from nwsynth.nested_word import CALL, INT, RET, build_nested_word

sys.path.insert(0, str(Path(__file__).resolve().parent))

ATOMS = [nwtl.TRUE, nwtl.CALL, nwtl.RET, nwtl.Out("x"), nwtl.Out("y"), nwtl.In("a")]


def formulas(max_leaves=6):
    return st.recursive(
        st.sampled_from(ATOMS),
        lambda sub: st.one_of(
            st.builds(nwtl.Not, sub), st.builds(nwtl.Next, sub), st.builds(nwtl.NextMu, sub),
            st.builds(nwtl.Prev, sub), st.builds(nwtl.PrevMu, sub),
            st.builds(nwtl.Or, sub, sub), st.builds(nwtl.And, sub, sub),
            st.builds(nwtl.Until, sub, sub), st.builds(nwtl.Since, sub, sub)),
        max_leaves=max_leaves)


def nested_words(min_size=1, max_size=8):
    item = st.tuples(st.sampled_from("x y".split()), st.sampled_from((CALL, RET, INT)))
    return st.lists(item, min_size=min_size, max_size=max_size).map(
        lambda xs: build_nested_word((("a", o), t) for o, t in xs))


def random_nwba(rng, n_states, letters, n_hier=2, density=0.4):
    """A random automaton over ``letters`` (a list of Letter)."""
    from nwsynth.nwba import Nwba
    Q = list(range(n_states))
    P = [f"p{k}" for k in range(n_hier)]
    pick = lambda xs: [x for x in xs if rng.random() < density]
    return Nwba(
        letters=letters, states=Q,
        initial=pick(Q) or [0], accepting=pick(Q), hier=P,
        hier_initial=pick(P) or [P[0]], hier_final=pick(P),
        delta_call=[(q, a, q2, p) for q in Q for a in letters for q2 in Q for p in P
                    if rng.random() < density / n_hier],
        delta_int=[(q, a, q2) for q in Q for a in letters for q2 in Q if rng.random() < density],
        delta_ret=[(q, p, a, q2) for q in Q for p in P for a in letters for q2 in Q
                   if rng.random() < density],
    )


def all_words(length, letters):
    """Every nested word of exactly this length over the letters."""
    import itertools
    for ls in itertools.product(letters, repeat=length):
        for tags in itertools.product((CALL, RET, INT), repeat=length):
            yield build_nested_word(zip(ls, tags))
