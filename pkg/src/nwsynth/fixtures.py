"""Small hand-built libraries for the tests and the CLI examples."""
from __future__ import annotations

from .rlc import Composition, Element, Library, RlcComponent


def component(name, sigma_in, edges, labels, initial="s0", calls=(), returns=(), reentry=()):
    """Build a component; missing transitions default to a self-loop."""
    states = []
    for s in [initial, *reentry, *calls, *returns, *labels]:
        if s not in states:
            states.append(s)
    delta = {(s, a): edges.get((s, a), s) for s in states for a in sigma_in}
    return RlcComponent(name, tuple(states), initial, tuple(reentry), tuple(calls),
                        tuple(returns), delta, dict(labels))


def loop_component(name="LOOP", out="x", sigma_in=("a",)):
    """s0 loops on every input; its call and return states are unreachable."""
    return component(name, sigma_in, {}, {"s0": out, "c1": out, "r1": out},
                     calls=("c1",), returns=("r1",), reentry=("s0",))


def loop_library(out="x") -> Library:
    return Library(("a",), ("x", "y"), 1, 1, (loop_component(out=out),))


LOOP_COMPOSITION = Composition((Element("LOOP", (1,)),))


def caller_component():
    # s0 -a-> c1 (call); after the callee returns: e1 -a-> r1 (return)
    return component("CALLER", ("a",), {("s0", "a"): "c1", ("e1", "a"): "r1"},
                     {"s0": "x", "e1": "y", "c1": "x", "r1": "x"},
                     calls=("c1",), returns=("r1",), reentry=("e1",))


def callee_component():
    return component("CALLEE", ("a",), {("s0", "a"): "r1"},
                     {"s0": "x", "e1": "x", "c1": "x", "r1": "y"},
                     calls=("c1",), returns=("r1",), reentry=("e1",))


def caller_callee_library() -> Library:
    return Library(("a",), ("x", "y"), 1, 1, (caller_component(), callee_component()))


CALLER_CALLEE_COMPOSITION = Composition((Element("CALLER", (2,)), Element("CALLEE", (1,))))


# -- realizability cross-check suite ---------------------------------------------------

AB = ("a", "b")
XY = ("x", "y")


def _const(name, out, n_c=1, n_r=1):
    return component(name, AB, {}, {"s0": out, **{f"c{j}": out for j in range(1, n_c + 1)},
                                    **{f"r{i}": out for i in range(1, n_r + 1)},
                                    **{f"e{i}": out for i in range(1, n_r + 1)}},
                     calls=tuple(f"c{j}" for j in range(1, n_c + 1)),
                     returns=tuple(f"r{i}" for i in range(1, n_r + 1)),
                     reentry=tuple(f"e{i}" for i in range(1, n_r + 1)))


def library_one() -> Library:
    """n_C = n_R = 1 over inputs {a, b}."""
    caller = component("CALLER", AB, {("s0", "a"): "c1", ("e1", "a"): "r1"},
                       {"s0": "x", "e1": "y", "c1": "x", "r1": "y"},
                       calls=("c1",), returns=("r1",), reentry=("e1",))
    ret = component("RET", AB, {("s0", "a"): "r1", ("s0", "b"): "r1"},
                    {"s0": "x", "e1": "x", "c1": "x", "r1": "y"},
                    calls=("c1",), returns=("r1",), reentry=("e1",))
    return Library(AB, XY, 1, 1, (_const("LOOPX", "x"), caller, ret))


def library_two() -> Library:
    """n_C = 2: a dispatcher choosing the callee by input."""
    disp = component("DISP", AB, {("s0", "a"): "c1", ("s0", "b"): "c2",
                                  ("e1", "a"): "r1", ("e1", "b"): "r1"},
                     {"s0": "x", "e1": "y", "c1": "x", "c2": "x", "r1": "x"},
                     calls=("c1", "c2"), returns=("r1",), reentry=("e1",))
    ret = component("RETY", AB, {("s0", "a"): "r1", ("s0", "b"): "r1"},
                    {"s0": "y", "e1": "y", "c1": "y", "c2": "y", "r1": "x"},
                    calls=("c1", "c2"), returns=("r1",), reentry=("e1",))
    return Library(AB, XY, 2, 1, (disp, ret, _const("LOOPY", "y", n_c=2)))


def library_three() -> Library:
    """n_R = 2: the callee decides where the caller resumes."""
    fork = component("FORK", AB, {("s0", "a"): "r1", ("s0", "b"): "r2"},
                     {"s0": "y", "e1": "y", "e2": "y", "c1": "y", "r1": "x", "r2": "x"},
                     calls=("c1",), returns=("r1", "r2"), reentry=("e1", "e2"))
    main = component("MAIN", AB, {("s0", "a"): "c1", ("s0", "b"): "c1",
                                  ("e1", "a"): "s0", ("e1", "b"): "s0",
                                  ("e2", "a"): "c1", ("e2", "b"): "c1"},
                     {"s0": "x", "e1": "x", "e2": "y", "c1": "x", "r1": "x", "r2": "x"},
                     calls=("c1",), returns=("r1", "r2"), reentry=("e1", "e2"))
    return Library(AB, XY, 1, 2, (main, fork, _const("LOOPX", "x", n_r=2)))


# (name, library factory, formula text, expected realizability)
CROSSCHECK = [
    ("loop-safety", library_one, "Gs out:x", True),
    ("never-y-call", library_one, "Gs(call -> out:x)".replace("call -> ", "!call | "), True),
    ("no-returns", library_one, "Gs !ret", True),
    ("all-calls-return", library_one, "Gs(!call | Xmu true)", True),
    ("some-call", library_one, "Fs call", False),
    ("eventually-y", library_one, "Fs out:y", True),
    ("false-spec", library_one, "!true", False),
    ("returns-to-y", library_one, "Gs(!call | Xmu out:y)", True),
    ("first-internal", library_one, "!call & !ret", True),
    ("dispatch-matched", library_two, "Gs(!call | Xmu out:y)", True),
    ("dispatch-no-ret", library_two, "Gs !ret", True),
    ("dispatch-x-only", library_two, "Gs out:x", True),
    ("dispatch-pending", library_two, "Gs(!call | !Xmu true)", True),
    ("fork-nonempty", library_three, "Gs(!ret | out:x)", True),
    ("fork-no-y", library_three, "Gs out:x", True),
    ("fork-call-first", library_three, "call & Gs(!ret | Y call)", True),
    ("fork-must-call", library_three, "Gs Fs call", True),
]


# formulas of operator depth <= 3 covering every connective and modality
NWTL_CORPUS = [
    "true", "call", "ret", "in:a", "out:y", "!call",
    "call | ret", "out:x & !ret",
    "X out:y", "X Y call", "Xmu ret", "Fs Ymu out:x",
    "out:x Us out:y", "Fs(out:x Ss call)",
    "Fs ret", "Gs out:x", "Gs !ret",
    "X(out:y Us ret)", "!(call Us out:y)", "Xmu out:y & call",
    "Fs(ret & Y out:y)", "Fs(Ymu call | ret)", "(call | out:y) Us Xmu true",
    "X X call", "X(out:x Ss call)", "Xmu(ret & out:y)", "Fs((out:x Us ret) Ss in:a)",
    "!(Xmu true) & call",
]
