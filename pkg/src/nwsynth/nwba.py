"""Nested-word Büchi automata and the NWTL -> NWBA tableau."""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field

from .nested_word import CALL, RET, Letter, NestedWord
from .nwtl import Formula, negate


@dataclass(frozen=True)
class Nwba:
    """Nondeterministic nested-word Büchi automaton.

    ``accepting`` is the final-state set used for finite words.  ``buchi`` is
    the set that must be visited infinitely often on infinite words; it
    defaults to ``accepting``.  The two differ for translated formulas,
    because no single set can serve both readings of e.g. ``Gs X true``.
    """

    letters: frozenset
    states: frozenset
    initial: frozenset
    accepting: frozenset
    hier: frozenset
    hier_initial: frozenset
    hier_final: frozenset
    delta_call: frozenset = frozenset()
    delta_int: frozenset = frozenset()
    delta_ret: frozenset = frozenset()
    buchi: frozenset | None = None
    _idx: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        conv = lambda xs: frozenset(xs)
        for name in ("states", "initial", "accepting", "hier", "hier_initial", "hier_final"):
            object.__setattr__(self, name, conv(getattr(self, name)))
        object.__setattr__(self, "letters", frozenset(Letter(*l) for l in self.letters))
        object.__setattr__(
            self, "delta_call",
            frozenset((q, Letter(*a), q2, p) for q, a, q2, p in self.delta_call))
        object.__setattr__(
            self, "delta_int", frozenset((q, Letter(*a), q2) for q, a, q2 in self.delta_int))
        object.__setattr__(
            self, "delta_ret",
            frozenset((q, p, Letter(*a), q2) for q, p, a, q2 in self.delta_ret))
        if self.buchi is not None:
            object.__setattr__(self, "buchi", frozenset(self.buchi))
        idx = {"int": defaultdict(list), "call": defaultdict(list), "ret": defaultdict(list)}
        for q, a, q2 in self.delta_int:
            idx["int"][q, a].append(q2)
        for q, a, q2, p in self.delta_call:
            idx["call"][q, a].append((q2, p))
        for q, p, a, q2 in self.delta_ret:
            idx["ret"][q, p, a].append(q2)
        object.__setattr__(self, "_idx", idx)

    @property
    def buchi_states(self) -> frozenset:
        return self.accepting if self.buchi is None else self.buchi

    def int_succ(self, q, a):
        return self._idx["int"].get((q, a), ())

    def call_succ(self, q, a):
        return self._idx["call"].get((q, a), ())

    def ret_succ(self, q, p, a):
        return self._idx["ret"].get((q, p, a), ())


@dataclass
class CheckReport:
    defects: list
    warnings: list

    @property
    def valid(self):
        return not self.defects


def check_automaton(A: Nwba) -> CheckReport:
    defects, warnings = [], []

    def need(cond, msg):
        if not cond:
            defects.append(msg)

    for name in ("initial", "accepting"):
        for q in getattr(A, name) - A.states:
            defects.append(f"{name} state {q!r} is not declared")
    if A.buchi is not None:
        for q in A.buchi - A.states:
            defects.append(f"buchi state {q!r} is not declared")
    for name in ("hier_initial", "hier_final"):
        for p in getattr(A, name) - A.hier:
            defects.append(f"{name} symbol {p!r}: unknown hierarchical symbol")
    for q, a, q2, p in A.delta_call:
        need(q in A.states and q2 in A.states, f"delta_call {q!r}->{q2!r}: unknown state")
        need(a in A.letters, f"delta_call letter {tuple(a)}: not in alphabet")
        need(p in A.hier, f"delta_call symbol {p!r}: unknown hierarchical symbol")
    for q, a, q2 in A.delta_int:
        need(q in A.states and q2 in A.states, f"delta_int {q!r}->{q2!r}: unknown state")
        need(a in A.letters, f"delta_int letter {tuple(a)}: not in alphabet")
    for q, p, a, q2 in A.delta_ret:
        need(q in A.states and q2 in A.states, f"delta_ret {q!r}->{q2!r}: unknown state")
        need(a in A.letters, f"delta_ret letter {tuple(a)}: not in alphabet")
        need(p in A.hier, f"delta_ret symbol {p!r}: unknown hierarchical symbol")
    if not A.initial:
        warnings.append("no initial state: language is empty")
    return CheckReport(defects, warnings)


# -- membership ---------------------------------------------------------------


class Runner:
    """Forward simulation over sets of (state, stack) configurations.

    Stacks hold the symbols of calls that are still open; a return on an
    empty stack pops an initial symbol.
    """

    def __init__(self, A: Nwba):
        self.A = A

    def start(self):
        return frozenset((q, ()) for q in self.A.initial)

    def advance(self, configs, letter, tag):
        A, out = self.A, set()
        letter = Letter(*letter)
        if letter not in A.letters:
            raise ValueError(f"letter {tuple(letter)} is outside the automaton alphabet")
        for q, stack in configs:
            if tag == CALL:
                for q2, p in A.call_succ(q, letter):
                    out.add((q2, stack + (p,)))
            elif tag == RET:
                if stack:
                    for q2 in A.ret_succ(q, stack[-1], letter):
                        out.add((q2, stack[:-1]))
                else:
                    for p in A.hier_initial:
                        for q2 in A.ret_succ(q, p, letter):
                            out.add((q2, ()))
            else:
                for q2 in A.int_succ(q, letter):
                    out.add((q2, stack))
        return frozenset(out)

    def accepting(self, configs) -> bool:
        A = self.A
        return any(q in A.accepting and all(p in A.hier_final for p in stack)
                   for q, stack in configs)


def accepts_finite(A: Nwba, w: NestedWord) -> bool:
    """Membership of a finite nested word."""
    r = Runner(A)
    configs = r.start()
    for i in range(1, len(w) + 1):
        configs = r.advance(configs, w.letter(i), w.tag(i))
        if not configs:
            return False
    return r.accepting(configs)


# -- tableau translation -------------------------------------------------------

_ELEMENTARY = ("call", "ret", "in", "out", "next", "next_mu", "prev", "prev_mu",
               "until", "since")

START = "start"
BOTTOM = ("bot",)
PENDING = ("pend",)


def holds(f: Formula, atom: frozenset) -> bool:
    k = f.kind
    if k == "true":
        return True
    if k == "not":
        return not holds(f.args[0], atom)
    if k == "or":
        return holds(f.args[0], atom) or holds(f.args[1], atom)
    if k == "and":
        return holds(f.args[0], atom) and holds(f.args[1], atom)
    return f in atom


def _subsets(xs):
    xs = list(xs)
    for r in range(len(xs) + 1):
        for c in itertools.combinations(xs, r):
            yield frozenset(c)


class _Tableau:
    """State = (atom, seg_until, seg_since, top, mode, counter).

    ``atom`` is the set of elementary subformulas true at the current
    position.  ``seg_until``/``seg_since`` hold the same operators evaluated
    relative to the innermost enclosing matched call (until: witnesses before
    its return; since: witnesses after the call).  ``top`` says the position
    lies in no matched call body.  ``mode`` is "int", "pend" for a call
    guessed pending, or ("call", G) for a call guessed matched, G being the
    segment-untils at the first position of its body.  ``counter`` drives the
    generalized-Büchi condition over top-level positions.
    """

    def __init__(self, phi, sigma_in, sigma_out):
        self.phi = phi
        subs = phi.subformulas()
        self.elem = [f for f in subs if f.kind in _ELEMENTARY]
        self.untils = [f for f in subs if f.kind == "until"]
        self.sinces = [f for f in subs if f.kind == "since"]  # children first
        self.nexts = [f for f in subs if f.kind == "next"]
        self.nexts_mu = [f for f in subs if f.kind == "next_mu"]
        self.prevs = [f for f in subs if f.kind == "prev"]
        self.prevs_mu = [f for f in subs if f.kind == "prev_mu"]
        self.call_f = [f for f in subs if f.kind == "call"]
        self.ret_f = [f for f in subs if f.kind == "ret"]
        self.letter_f = [f for f in subs if f.kind in ("in", "out")]
        self.K = len(self.untils)
        self.letters = [Letter(a, o) for a in sigma_in for o in sigma_out]

    def _letter_atoms(self, letter, tag):
        base = set()
        for f in self.letter_f:
            if (f.kind == "in" and f.symbol == letter.inp) or (
                    f.kind == "out" and f.symbol == letter.out):
                base.add(f)
        if tag == CALL:
            base.update(self.call_f)
        if tag == RET:
            base.update(self.ret_f)
        return base

    def project(self, A):
        """What a matched return needs to know about its call position."""
        facts = set()
        for f in self.sinces:
            if holds(f.args[1], A):
                facts.add(("s2", f))
            if f in A:
                facts.add(("in", f))
        for f in self.untils:
            if f in A:
                facts.add(("in", f))
            if holds(f.args[0], A):
                facts.add(("u1", f))
            if holds(f.args[1], A):
                facts.add(("u2", f))
        facts.update(("in", f) for f in self.nexts_mu if f in A)
        facts.update(("ym", f) for f in self.prevs_mu if holds(f.args[0], A))
        return frozenset(facts)

    def candidates(self, prev_atom, letter, tag, call_facts):
        """Atoms for a new position: guessed X/Xmu/U, derived Y/Ymu."""
        fixed = self._letter_atoms(letter, tag)
        if prev_atom is not None:
            fixed.update(f for f in self.prevs if holds(f.args[0], prev_atom))
        if call_facts is not None:
            fixed.update(f for f in self.prevs_mu if ("ym", f) in call_facts)
        free_mu = self.nexts_mu if tag == CALL else []
        for xs in _subsets(self.nexts):
            for ms in _subsets(free_mu):
                for us in _subsets(self.untils):
                    yield frozenset(fixed | xs | ms | us)

    def with_sinces(self, atom, rule):
        """Add since formulas in dependency order; rule(f, atom) -> bool."""
        atom = set(atom)
        for f in self.sinces:
            if rule(f, frozenset(atom)):
                atom.add(f)
        return frozenset(atom)

    def next_ok(self, A, A2):
        return all((f in A) == holds(f.args[0], A2) for f in self.nexts)

    def until_step(self, A, cur, nxt):
        """cur(u) <-> phi2 | (phi1 & nxt(u)) at a non-call position."""
        return all((u in cur) == (holds(u.args[1], A) or (holds(u.args[0], A) and u in nxt))
                   for u in self.untils)

    def counter(self, cnt, A2, top):
        if not top:
            return cnt
        c = 0 if cnt == self.K else cnt
        while c < self.K and (self.untils[c] not in A2 or holds(self.untils[c].args[1], A2)):
            c += 1
        return c

    def successors(self, q, letter, tag, popped):
        """Yield (next_state, pushed_symbol_or_None)."""
        U = frozenset(self.untils)
        S = frozenset(self.sinces)
        if popped == PENDING:
            return
        matched_ret = tag == RET and popped != BOTTOM
        if q == START:
            if matched_ret:
                return
            A = L = Sb = None
            top, mode, cnt = True, "int", 0
        else:
            A, L, Sb, top, mode, cnt = q
            if mode == "pend" and tag == RET:
                return
            if isinstance(mode, tuple) and tag == RET and not matched_ret:
                return
            if tag == RET and not matched_ret and not top:
                return
        if matched_ret:
            _, Ac, Lc, Sbc, topc, G = popped
            empty_body = isinstance(mode, tuple)
            if empty_body and mode[1]:
                return
        call_atom = popped[1] if matched_ret else None

        for A2 in self.candidates(A, letter, tag, call_atom):
            # since values
            if A is None:
                A2 = self.with_sinces(A2, lambda f, a: False)
                Sb2 = frozenset()
            elif matched_ret:
                def srule(f, a, in_base):
                    p1, p2 = f.args
                    inner = (not empty_body) and (holds(p2, A) or f in Sb)
                    return holds(p1, a) and (("s2", f) in Ac or in_base or inner)
                A2 = self.with_sinces(A2, lambda f, a: srule(f, a, ("in", f) in Ac))
                Sb2 = frozenset(f for f in S if srule(f, A2, f in Sbc))
            else:
                A2 = self.with_sinces(
                    A2, lambda f, a: holds(f.args[0], a) and (holds(f.args[1], A) or f in A))
                if isinstance(mode, tuple):
                    Sb2 = frozenset()
                else:
                    Sb2 = frozenset(f for f in S if holds(f.args[0], A2)
                                    and (holds(f.args[1], A) or f in Sb))
            if A is None and not holds(self.phi, A2):
                continue
            if A is not None and not self.next_ok(A, A2):
                continue
            T2 = A2 & U
            if matched_ret:
                top2 = topc
                if not empty_body:
                    if any((u in L) != holds(u.args[1], A) for u in self.untils):
                        continue
                    if not self.until_step(A, A & U, T2):
                        continue
                if any((("in", f) in Ac) != holds(f.args[0], A2) for f in self.nexts_mu):
                    continue
            elif A is not None and isinstance(mode, tuple):
                top2 = False
            else:
                top2 = top
                if A is not None and not self.until_step(A, A & U, T2):
                    continue
            if top2 and Sb2 != A2 & S:
                continue
            # segment-until guesses for the new position
            if top2:
                l_choices = [T2]
            elif A is not None and isinstance(mode, tuple) and not matched_ret:
                l_choices = [mode[1]]
            else:
                l_choices = list(_subsets(self.untils))
            for L2 in l_choices:
                if matched_ret:
                    ok = all(
                        (("in", u) in Ac) == (("u2", u) in Ac or (("u1", u) in Ac and (u in G or u in T2)))
                        and (u in Lc) == (("u2", u) in Ac or (("u1", u) in Ac and (u in G or u in L2)))
                        for u in self.untils)
                    if not ok:
                        continue
                elif A is not None and not isinstance(mode, tuple):
                    if not self.until_step(A, L, L2):
                        continue
                cnt2 = self.counter(cnt, A2, top2)
                if tag != CALL:
                    yield (A2, L2, Sb2, top2, "int", cnt2), None
                    continue
                if top2 and not any(f in A2 for f in self.nexts_mu):
                    yield (A2, L2, Sb2, top2, "pend", cnt2), PENDING
                for G2 in _subsets(self.untils):
                    yield (A2, L2, Sb2, top2, ("call", G2), cnt2), ("m", self.project(A2), L2, Sb2, top2, G2)

    def final(self, q):
        if q == START:
            return False
        A, L, Sb, top, mode, cnt = q
        return (top and not isinstance(mode, tuple)
                and not any(f in A for f in self.nexts)
                and all((u in A) == holds(u.args[1], A) for u in self.untils))

    def buchi(self, q):
        return q != START and q[3] and q[5] == self.K


def translate_nwtl(phi: Formula, sigma_in, sigma_out, trim: bool = True,
                  reduce: bool = True) -> Nwba:
    """Build an NWBA for phi over letters sigma_in x sigma_out.

    Finite words are accepted iff phi holds at position 1; infinite words
    are read with the separate Büchi set.
    """
    tab = _Tableau(phi, list(sigma_in), list(sigma_out))
    states, symbols = {START}, set()
    d_int, d_call, d_ret = set(), set(), set()
    # explore (stack top, state) pairs; callers[p] = tops under which p was pushed
    seen = {(BOTTOM, START)}
    work = [(BOTTOM, START)]
    callers = defaultdict(set)
    returned = defaultdict(set)  # pushed symbol -> states reached by popping it
    expanded = {}

    def reach(p, q):
        states.add(q)
        if (p, q) not in seen:
            seen.add((p, q))
            work.append((p, q))

    def moves(q):
        if q not in expanded:
            ints, calls = [], []
            for a in tab.letters:
                ints.extend((a, q2) for q2, _ in tab.successors(q, a, "int", None))
                calls.extend((a, q2, p2) for q2, p2 in tab.successors(q, a, CALL, None))
            expanded[q] = ints, calls
        return expanded[q]

    while work:
        p, q = work.pop()
        ints, calls = moves(q)
        for a, q2 in ints:
            d_int.add((q, a, q2))
            reach(p, q2)
        for a, q2, p2 in calls:
            d_call.add((q, a, q2, p2))
            symbols.add(p2)
            reach(p2, q2)
            if p not in callers[p2]:
                callers[p2].add(p)
                for q3 in returned[p2]:
                    reach(p, q3)
        for a in tab.letters:
            for q3, _ in tab.successors(q, a, RET, p):
                d_ret.add((q, p, a, q3))
                if p == BOTTOM:
                    reach(BOTTOM, q3)
                elif q3 not in returned[p]:
                    returned[p].add(q3)
                    for p0 in list(callers[p]):
                        reach(p0, q3)
    final = {q for q in states if tab.final(q)}
    buchi = {q for q in states if tab.buchi(q)}
    if trim:
        states = _coreachable(states, final | buchi, d_int, d_call, d_ret) | {START}
        d_int = {t for t in d_int if t[0] in states and t[2] in states}
        d_call = {t for t in d_call if t[0] in states and t[2] in states}
        d_ret = {t for t in d_ret if t[0] in states and t[3] in states}
        final &= states
        buchi &= states
        symbols = {t[3] for t in d_call}
        d_ret = {t for t in d_ret if t[1] in symbols or t[1] == BOTTOM}
    # integer names, START first
    order = [START] + sorted((q for q in states if q != START), key=repr)
    sid = {q: n for n, q in enumerate(order)}
    hier_order = [BOTTOM, PENDING] + sorted(symbols - {PENDING}, key=repr)
    pid = {p: n for n, p in enumerate(hier_order)}
    A = Nwba(
        letters=frozenset(tab.letters),
        states=frozenset(sid.values()),
        initial=frozenset({0}),
        accepting=frozenset(sid[q] for q in final),
        hier=frozenset(pid.values()),
        hier_initial=frozenset({pid[BOTTOM]}),
        hier_final=frozenset({pid[PENDING]}),
        delta_call=frozenset((sid[q], a, sid[q2], pid[p]) for q, a, q2, p in d_call),
        delta_int=frozenset((sid[q], a, sid[q2]) for q, a, q2 in d_int),
        delta_ret=frozenset((sid[q], pid[p], a, sid[q2]) for q, p, a, q2 in d_ret),
        buchi=frozenset(sid[q] for q in buchi),
    )
    return reduce_automaton(A) if reduce else A


def _coreachable(states, goal, d_int, d_call, d_ret):
    pred = defaultdict(set)
    for q, _, q2 in d_int:
        pred[q2].add(q)
    for q, _, q2, _ in d_call:
        pred[q2].add(q)
    for q, _, _, q2 in d_ret:
        pred[q2].add(q)
    seen, stack = set(goal), list(goal)
    while stack:
        for q in pred[stack.pop()]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return seen & states


def spec_automaton(spec, sigma_in, sigma_out) -> Nwba:
    """Automaton for the bad behaviours of a specification.

    A formula is negated and translated; an automaton is taken to describe
    the bad behaviours already.
    """
    if isinstance(spec, Nwba):
        want = {Letter(a, o) for a in sigma_in for o in sigma_out}
        if set(spec.letters) != want:
            raise ValueError("automaton alphabet does not match the library alphabets")
        return spec
    return translate_nwtl(negate(spec), sigma_in, sigma_out)


def reduce_automaton(A: Nwba) -> Nwba:
    """Quotient by forward bisimulation, alternating between states and
    hierarchical symbols until neither partition changes."""
    while True:
        B = _merge_states(A)
        B = _merge_symbols(B)
        if len(B.states) == len(A.states) and len(B.hier) == len(A.hier):
            return B
        A = B


def _merge_states(A: Nwba) -> Nwba:
    B = A.buchi_states
    block = {q: (q in A.initial, q in A.accepting, q in B) for q in A.states}
    out_int, out_call, out_ret = defaultdict(set), defaultdict(set), defaultdict(set)
    for q, a, q2 in A.delta_int:
        out_int[q].add((a, q2))
    for q, a, q2, p in A.delta_call:
        out_call[q].add((a, q2, p))
    for q, p, a, q2 in A.delta_ret:
        out_ret[q].add((p, a, q2))
    while True:
        sig = {q: (block[q],
                   frozenset((a, block[t]) for a, t in out_int[q]),
                   frozenset((a, block[t], p) for a, t, p in out_call[q]),
                   frozenset((p, a, block[t]) for p, a, t in out_ret[q]))
               for q in A.states}
        ids = {}
        new = {q: ids.setdefault(sig[q], len(ids)) for q in sorted(A.states, key=repr)}
        if len(ids) == len(set(block.values())):
            break
        block = new
    return _quotient(A, new, {p: p for p in A.hier})


def _merge_symbols(A: Nwba) -> Nwba:
    rets = defaultdict(set)
    for q, p, a, q2 in A.delta_ret:
        rets[p].add((q, a, q2))
    sig = {p: (p in A.hier_initial, p in A.hier_final, frozenset(rets[p])) for p in A.hier}
    ids = {}
    sym = {p: ids.setdefault(sig[p], len(ids)) for p in sorted(A.hier, key=repr)}
    return _quotient(A, {q: q for q in A.states}, sym)


def _quotient(A: Nwba, st: dict, sym: dict) -> Nwba:
    return Nwba(
        letters=A.letters,
        states=frozenset(st.values()),
        initial=frozenset(st[q] for q in A.initial),
        accepting=frozenset(st[q] for q in A.accepting),
        hier=frozenset(sym.values()),
        hier_initial=frozenset(sym[p] for p in A.hier_initial),
        hier_final=frozenset(sym[p] for p in A.hier_final),
        delta_call=frozenset((st[q], a, st[q2], sym[p]) for q, a, q2, p in A.delta_call),
        delta_int=frozenset((st[q], a, st[q2]) for q, a, q2 in A.delta_int),
        delta_ret=frozenset((st[q], sym[p], a, st[q2]) for q, p, a, q2 in A.delta_ret),
        buchi=None if A.buchi is None else frozenset(st[q] for q in A.buchi),
    )


def simulation(A: Nwba):
    """A direct simulation: pairs (q, r) on states, (p, p2) on symbols.

    r matches every move of q step by step with acceptance preserved;
    pushes are matched by simulating symbols, and (p, p2) simulate when
    for every simulating state pair the returns popping p are matched by
    returns popping p2.  The state relation only shrinks, so the loop ends
    in a sound (not necessarily greatest) simulation.
    """
    B = A.buchi_states
    S = {(q, r) for q in A.states for r in A.states
         if (q not in A.accepting or r in A.accepting) and (q not in B or r in B)}
    ints, calls, rets = defaultdict(set), defaultdict(set), defaultdict(set)
    for q, a, t in A.delta_int:
        ints[q, a].add(t)
    for q, a, t, p in A.delta_call:
        calls[q, a].add((t, p))
    for q, p, a, t in A.delta_ret:
        rets[q, p, a].add(t)
    letters = list(A.letters)
    ident = {(p, p) for p in A.hier}

    def symbols(S):
        return ident | {
            (p, p2) for p in A.hier for p2 in A.hier
            if (p not in A.hier_final or p2 in A.hier_final)
            and (p not in A.hier_initial or p2 in A.hier_initial)
            and all(any((t, u) in S for u in rets[r, p2, a])
                    for q, r in S for a in letters for t in rets[q, p, a])}

    while True:
        P = symbols(S)
        S2 = {(q, r) for q, r in S
              if all(any((t, u) in S for u in ints[r, a]) for a in letters for t in ints[q, a])
              and all(any((t, u) in S and (p, p2) in P for u, p2 in calls[r, a])
                      for a in letters for t, p in calls[q, a])
              and all(any((t, u) in S for u in rets[r, p, a])
                      for p in A.hier for a in letters for t in rets[q, p, a])}
        if S2 == S:
            return S, P
        S = S2


def simulation_reduce(A: Nwba) -> Nwba:
    """Merge simulation-equivalent states and symbols, then drop moves to
    strictly simulated targets."""
    S, P = simulation(A)
    st = {q: min((r for r in A.states if (q, r) in S and (r, q) in S), key=repr)
          for q in A.states}
    sym = {p: min((r for r in A.hier if (p, r) in P and (r, p) in P), key=repr)
           for p in A.hier}
    Q = _quotient(A, st, sym)
    S = {(st[a], st[b]) for a, b in S}
    P = {(sym[a], sym[b]) for a, b in P}
    less = lambda x, y, R: (x, y) in R and (y, x) not in R

    def keep_int(tr):
        q, a, t = tr
        return not any(less(t, u, S) for q2, a2, u in Q.delta_int if q2 == q and a2 == a)

    def keep_call(tr):
        q, a, t, p = tr
        return not any((t, u) in S and (p, p2) in P and (less(t, u, S) or less(p, p2, P))
                       for q2, a2, u, p2 in Q.delta_call if q2 == q and a2 == a)

    def keep_ret(tr):
        q, p, a, t = tr
        return not any(less(t, u, S) for q2, p2, a2, u in Q.delta_ret
                       if q2 == q and p2 == p and a2 == a)

    initial = {q for q in Q.initial if not any(less(q, r, S) for r in Q.initial)}
    return Nwba(Q.letters, Q.states, initial, Q.accepting, Q.hier, Q.hier_initial,
                Q.hier_final, frozenset(filter(keep_call, Q.delta_call)),
                frozenset(filter(keep_int, Q.delta_int)),
                frozenset(filter(keep_ret, Q.delta_ret)), Q.buchi)


# -- automaton files --------------------------------------------------------------


def _key(x):
    return (type(x).__name__, repr(x))


def _hashable(x):
    return tuple(_hashable(y) for y in x) if isinstance(x, list) else x


def nwba_to_json(A: Nwba) -> dict:
    let = lambda a: {"in": a.inp, "out": a.out}
    srt = lambda xs: sorted(xs, key=_key)
    data = {
        "letters": [let(a) for a in sorted(A.letters)],
        "states": srt(A.states), "initial": srt(A.initial), "accepting": srt(A.accepting),
        "hier": srt(A.hier), "hier_initial": srt(A.hier_initial), "hier_final": srt(A.hier_final),
        "delta_call": [[q, let(a), q2, p] for q, a, q2, p in srt(A.delta_call)],
        "delta_int": [[q, let(a), q2] for q, a, q2 in srt(A.delta_int)],
        "delta_ret": [[q, p, let(a), q2] for q, p, a, q2 in srt(A.delta_ret)],
    }
    if A.buchi is not None:
        data["buchi"] = srt(A.buchi)
    return data


def nwba_from_json(data: dict) -> Nwba:
    """Inverse of nwba_to_json; list-valued identifiers come back as tuples."""
    required = ("letters", "states", "initial", "accepting", "hier", "hier_initial",
                "hier_final", "delta_call", "delta_int", "delta_ret")
    for k in required:
        if k not in data:
            raise ValueError(f"automaton file: missing field {k!r}")
    h = lambda xs: [_hashable(x) for x in xs]

    def let(d):
        try:
            return Letter(d["in"], d["out"])
        except (KeyError, TypeError):
            raise ValueError(f"automaton file: bad letter {d!r}") from None

    try:
        return Nwba(
            letters=[let(d) for d in data["letters"]],
            states=h(data["states"]), initial=h(data["initial"]),
            accepting=h(data["accepting"]), hier=h(data["hier"]),
            hier_initial=h(data["hier_initial"]), hier_final=h(data["hier_final"]),
            delta_call=[(_hashable(q), let(a), _hashable(q2), _hashable(p))
                        for q, a, q2, p in data["delta_call"]],
            delta_int=[(_hashable(q), let(a), _hashable(q2)) for q, a, q2 in data["delta_int"]],
            delta_ret=[(_hashable(q), _hashable(p), let(a), _hashable(q2))
                       for q, p, a, q2 in data["delta_ret"]],
            buchi=h(data["buchi"]) if data.get("buchi") is not None else None,
        )
    except (TypeError, ValueError) as e:
        raise ValueError(f"automaton file: {e}") from None
