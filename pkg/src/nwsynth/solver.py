"""From specification to composition: complement, de-alternate, solve a game, extract."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from . import boolform as bf
from .abt import Abt, build_abt
from .nwba import Nwba, spec_automaton
from .oracle import model_check
from .rlc import Composition, Library, TreeTransducer, composition_from_json, \
    composition_of_regular_tree, composition_to_json


class Act:
    """Dual view of an alternating automaton: formulas dualized, the Büchi
    set read as a co-Büchi (rejecting) set."""

    def __init__(self, base):
        self.base = base
        self.lib = base.lib
        self.initial = base.initial

    def transition(self, s, name):
        return bf.dual(self.base.transition(s, name))

    def is_rejecting(self, s) -> bool:
        return self.base.is_accepting(s)

    # an Act dualized again reads its rejecting set as accepting
    is_accepting = is_rejecting


def dualize(aut) -> Act:
    return Act(aut)


class Nbt:
    """Nondeterministic tree automaton obtained from an Act.

    A state is a frozenset of ``(act_state, visits)`` pairs: the obligations
    still to be met on the current branch, each with the number of rejecting
    states seen on the worst run path leading to it.  With a rank bound k a
    pair may never exceed k visits, so every state is accepting and the
    acceptance is a safety condition.  ``k=None`` drops the counters, which
    over-approximates the Act language (acceptance is ignored).
    """

    def __init__(self, act: Act, k):
        self.act, self.k = act, k
        self.lib = act.lib
        self.initial = frozenset({(act.initial, 0)})
        self._cache = {}
        # obligations the dual meets on every tree never need to be tracked
        dead = getattr(act.base, "dead_states", None)
        self.free = dead() if dead else frozenset()
        self.hopeless = self._hopeless()

    def _hopeless(self) -> frozenset:
        """Act states accepting no tree even with acceptance ignored."""
        reach = getattr(self.act.base, "reachable_states", None)
        if reach is None:
            return frozenset()
        names = [C.name for C in self.lib.components]
        dirs = range(1, self.lib.n_c + 1)
        alive = set(reach()) - self.free
        while True:
            atoms = {(d, t) for t in alive | self.free for d in dirs}
            keep = {s for s in alive
                    if any(self.act.transition(s, n).satisfied_by(atoms) for n in names)}
            if keep == alive:
                return frozenset(set(reach()) - self.free - alive)
            alive = keep

    def is_accepting(self, state) -> bool:
        return True

    def transitions(self, state, name):
        """Moves for one label: tuples of child states, one per direction."""
        key = (state, name)
        if key in self._cache:
            return self._cache[key]
        parts, allowed = [], set()
        for s, c in sorted(state, key=repr):
            f = self.act.transition(s, name)
            if self.free:
                f = bf.fix(f, {(d, t) for d, t in f.atoms if t in self.free})
            mapping = {}
            for d, t in f.atoms:
                c2 = 0 if self.k is None else c + self.act.is_rejecting(t)
                mapping[d, t] = (d, t, c2)
                if (self.k is None or c2 <= self.k) and t not in self.hopeless:
                    allowed.add((d, t, c2))
            parts.append(bf.rename(f, mapping))
        n = self.lib.n_c
        moves = []
        for m in bf.minimal_models(bf.Conj(parts), allowed):
            kids = [dict() for _ in range(n)]
            for d, t, c2 in m:
                kids[d - 1][t] = max(c2, kids[d - 1].get(t, 0))
            moves.append(tuple(frozenset(kid.items()) for kid in kids))
        self._cache[key] = moves
        return moves


def remove_alternation(act: Act, k) -> Nbt:
    if k is not None and k < 1:
        raise ValueError("rank bound must be at least 1")
    return Nbt(act, k)


# -- games -----------------------------------------------------------------------------


def _attractor(player, target, arena, owner, succ, pred):
    """Nodes of ``arena`` from which ``player`` forces a visit to ``target``.

    Opponent nodes without moves inside the arena count as reached.
    Returns {node: rank}, rank 0 on the target.
    """
    rank, count = {}, {}
    for v in arena:
        if v in target or (owner[v] != player and not any(w in arena for w in succ[v])):
            rank[v] = 0
    queue = deque(rank)
    while queue:
        v = queue.popleft()
        for u in pred[v]:
            if u not in arena or u in rank:
                continue
            if owner[u] != player:
                if u not in count:
                    count[u] = sum(1 for w in succ[u] if w in arena)
                count[u] -= 1
                if count[u] > 0:
                    continue
            rank[u] = rank[v] + 1
            queue.append(u)
    return rank


def solve_buchi(nodes, owner, succ, accepting):
    """Winning region of player 0 for visiting ``accepting`` infinitely often,
    with a positional strategy {node: successor} on player-0 nodes."""
    pred = {v: [] for v in nodes}
    for v in nodes:
        for w in succ[v]:
            pred[w].append(v)
    arena = set(nodes)
    while True:
        stuck = {v for v in arena if owner[v] == 0 and not any(w in arena for w in succ[v])}
        if stuck:
            arena -= set(_attractor(1, stuck, arena, owner, succ, pred))
            continue
        good = _attractor(0, {v for v in arena if v in accepting}, arena, owner, succ, pred)
        trap = arena - set(good)
        if not trap:
            break
        arena -= set(_attractor(1, trap, arena, owner, succ, pred))
    rank = _attractor(0, {v for v in arena if v in accepting}, arena, owner, succ, pred)
    strategy = {}
    for v in arena:
        if owner[v] != 0:
            continue
        options = [w for w in succ[v] if w in arena]
        if rank[v] > 0:
            options = [w for w in options if rank[w] < rank[v]]
        strategy[v] = min(options, key=lambda w: (rank[w], repr(w)))
    return arena, strategy


@dataclass(frozen=True)
class EmptyLanguage:
    nodes: int

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Witness:
    transducer: TreeTransducer
    nodes: int


def nbt_emptiness(nbt: Nbt, lib: Library, max_nodes: int = 200000):
    """Solve the emptiness game: the automaton picks a label and a move, the
    pathfinder picks a direction."""
    names = [C.name for C in lib.components]
    owner, succ = {}, {}
    root = ("n", nbt.initial)
    owner[root] = 0
    todo = [root]
    while todo:
        v = todo.pop()
        if len(owner) > max_nodes:
            raise RuntimeError(f"emptiness game exceeds {max_nodes} nodes")
        if v[0] == "n":
            out = []
            for name in names:
                for idx, kids in enumerate(nbt.transitions(v[1], name)):
                    out.append(("c", v[1], name, idx, kids))
        else:
            out = [("n", kid) for kid in v[4]]
        succ[v] = out
        for w in out:
            if w not in owner:
                owner[w] = 0 if w[0] == "n" else 1
                todo.append(w)
    accepting = {v for v in owner if v[0] == "n" and nbt.is_accepting(v[1])}
    win, strategy = solve_buchi(list(owner), owner, succ, accepting)
    if root not in win:
        return EmptyLanguage(len(owner))
    # one transducer state per automaton node visited under the strategy
    index, order = {root: 1}, [root]
    for v in order:
        for kid in strategy[v][4]:
            w = ("n", kid)
            if w not in index:
                index[w] = len(order) + 1
                order.append(w)
    labels = {index[v]: strategy[v][2] for v in order}
    delta = {(index[v], d): index[("n", kid)]
             for v in order for d, kid in enumerate(strategy[v][4], start=1)}
    return Witness(TreeTransducer(lib.n_c, delta, labels).minimize(), len(owner))


# -- pipeline ----------------------------------------------------------------------


@dataclass(frozen=True)
class Realizable:
    composition: Composition
    certificate: TreeTransducer
    rank: int
    status: str = field(default="realizable", init=False)


@dataclass(frozen=True)
class UnrealizableUpToRank:
    rank: int
    theoretical_bound: int
    status: str = field(default="unknown_up_to_rank", init=False)


@dataclass(frozen=True)
class Unrealizable:
    reason: str
    status: str = field(default="unrealizable", init=False)


class UnsoundWitness(AssertionError):
    pass


def rank_schedule(max_rank):
    k, out = 1, []
    while k < max_rank:
        out.append(k)
        k *= 2
    return out + [max_rank]


def synthesize(lib: Library, spec, max_rank: int = 8, abt: Abt | None = None):
    """Find a composition all of whose computations satisfy ``spec``.

    A formula is negated before translation; an automaton is read as the
    bad behaviours directly.
    """
    A = spec_automaton(spec, lib.sigma_in, lib.sigma_out)
    abt = abt or build_abt(lib, A)
    act = dualize(abt)
    for k in rank_schedule(max_rank):
        res = nbt_emptiness(remove_alternation(act, k), lib)
        if res:
            comp = composition_of_regular_tree(res.transducer)
            if model_check(comp, lib, A):
                raise UnsoundWitness("extracted composition has a bad computation")
            return Realizable(comp, res.transducer, k)
        if k == 1 and not nbt_emptiness(remove_alternation(act, None), lib):
            # the over-approximation is empty too, so no rank can help
            return Unrealizable("no composition tree admits a run of the complement, "
                                "even ignoring its acceptance condition")
    return UnrealizableUpToRank(max_rank, theoretical_rank_bound(abt))


def theoretical_rank_bound(abt: Abt) -> int:
    """Visits needed in the worst case: one per (witness state, automaton state)
    pair, with witnesses as large as the subset construction."""
    n = len(list(abt.declared_states()))
    return n * 2 ** min(n, 64)


def outcome_to_json(out) -> dict:
    data = {"status": out.status, "rank": getattr(out, "rank", None)}
    if isinstance(out, Realizable):
        data["composition"] = composition_to_json(out.composition)
        data["certificate"] = {"transducer": out.certificate.to_json()}
    elif isinstance(out, UnrealizableUpToRank):
        data["theoretical_rank_bound"] = str(out.theoretical_bound)
    else:
        data["reason"] = out.reason
    return data


def outcome_from_json(data: dict, n_c: int):
    """Parse an outcome file, checking that the certificate extracts to the
    stored composition."""
    status = data.get("status")
    if status == "realizable":
        try:
            comp = composition_from_json(data["composition"])
            cert = TreeTransducer.from_json(data["certificate"]["transducer"], n_c)
        except (KeyError, TypeError) as e:
            raise ValueError(f"outcome file: missing field {e}") from None
        if composition_of_regular_tree(cert) != comp:
            raise ValueError("outcome file: composition does not match certificate")
        return Realizable(comp, cert, int(data["rank"]))
    if status == "unknown_up_to_rank":
        return UnrealizableUpToRank(int(data["rank"]), int(data["theoretical_rank_bound"]))
    if status == "unrealizable":
        return Unrealizable(str(data.get("reason", "")))
    raise ValueError(f"outcome file: unknown status {status!r}")
