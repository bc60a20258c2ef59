"""Positive Boolean formulas given by their satisfaction test.

Transition formulas of the tree automata are never expanded into syntax
trees.  A formula only needs a finite atom universe and a monotone
``satisfied_by(set_of_atoms)``; minimal models are then enumerated with the
incremental hypergraph-transversal method.
"""
from __future__ import annotations



class Monotone:
    atoms: frozenset

    def satisfied_by(self, S) -> bool:
        raise NotImplementedError

    def witness(self, allowed=None):
        """A minimal model inside ``allowed`` (default: every atom), or None."""
        S = self.atoms if allowed is None else self.atoms & frozenset(allowed)
        if not self.satisfied_by(S):
            return None
        return minimize(self, S)


def minimize(f: Monotone, S) -> frozenset:
    cur = set(S)
    touching = {}
    for p in conjuncts(f):
        for a in p.atoms:
            touching.setdefault(a, []).append(p)
    for a in sorted(S, key=repr):
        cur.discard(a)
        # only conjuncts mentioning a can turn false
        if not all(p.satisfied_by(cur) for p in touching.get(a, ())):
            cur.add(a)
    return frozenset(cur)


def conjuncts(f: Monotone) -> list:
    if isinstance(f, Conj):
        return [q for p in f.parts for q in conjuncts(p)]
    return [f]


class Const(Monotone):
    def __init__(self, value: bool):
        self.value = value
        self.atoms = frozenset()

    def satisfied_by(self, S):
        return self.value

    def __repr__(self):
        return f"Const({self.value})"


TRUE = Const(True)
FALSE = Const(False)


class Explicit(Monotone):
    """Disjunction of conjunctions, given as a collection of atom sets."""

    def __init__(self, models):
        self.models = [frozenset(m) for m in models]
        self.atoms = frozenset().union(*self.models) if self.models else frozenset()

    def satisfied_by(self, S):
        return any(m <= S for m in self.models) if isinstance(S, (set, frozenset)) \
            else any(m <= set(S) for m in self.models)


class Conj(Monotone):
    def __init__(self, parts):
        self.parts = list(parts)
        self.atoms = frozenset().union(*(p.atoms for p in self.parts)) if self.parts else frozenset()

    def satisfied_by(self, S):
        return all(p.satisfied_by(S) for p in self.parts)


class Disj(Monotone):
    def __init__(self, parts):
        self.parts = list(parts)
        self.atoms = frozenset().union(*(p.atoms for p in self.parts)) if self.parts else frozenset()

    def satisfied_by(self, S):
        return any(p.satisfied_by(S) for p in self.parts)


class Dual(Monotone):
    """Swap conjunction and disjunction: S satisfies the dual iff its complement fails f."""

    def __init__(self, f: Monotone):
        self.f = f
        self.atoms = f.atoms

    def satisfied_by(self, S):
        if isinstance(self.f, Reach):
            return not self.f.satisfied_by(S, blocked=True)
        return not self.f.satisfied_by(self.atoms - frozenset(S))


def dual(f: Monotone) -> Monotone:
    if isinstance(f, Dual):
        return f.f
    if isinstance(f, Const):
        return FALSE if f.value else TRUE
    if isinstance(f, Conj):
        return Disj([dual(p) for p in f.parts])
    if isinstance(f, Disj):
        return Conj([dual(p) for p in f.parts])
    return Dual(f)


def rename(f: Monotone, mapping: dict) -> Monotone:
    if isinstance(f, Conj):
        return Conj([rename(p, mapping) for p in f.parts])
    if isinstance(f, Const):
        return f
    if isinstance(f, Reach):
        return f.relabel(mapping)
    if isinstance(f, Dual) and isinstance(f.f, Reach):
        return Dual(f.f.relabel(mapping))
    return Rename(f, mapping)


def fix(f: Monotone, true_atoms) -> Monotone:
    if isinstance(f, Conj):
        return Conj([fix(p, true_atoms) for p in f.parts])
    if f.atoms.isdisjoint(true_atoms):
        return f
    if isinstance(f, Reach):
        return f.relabel({a: None for a in true_atoms if a in f.atoms})
    if isinstance(f, Dual) and isinstance(f.f, Reach):
        # a permanently true atom blocks its edge in the complement reading
        return Dual(f.f.relabel({}, drop=true_atoms))
    return Fix(f, true_atoms)


class Rename(Monotone):
    """f with atoms renamed by an injective map."""

    def __init__(self, f: Monotone, mapping: dict):
        self.f, self.mapping = f, dict(mapping)
        self.inverse = {self.mapping[a]: a for a in f.atoms}
        self.atoms = frozenset(self.inverse)

    def satisfied_by(self, S):
        return self.f.satisfied_by({self.inverse[a] for a in S if a in self.inverse})


class Fix(Monotone):
    """f with some atoms permanently true."""

    def __init__(self, f: Monotone, true_atoms):
        self.f = f
        self.fixed = frozenset(true_atoms) & f.atoms
        self.atoms = f.atoms - self.fixed

    def satisfied_by(self, S):
        return self.f.satisfied_by(self.fixed.union(S))


class Reach(Monotone):
    """Graph reachability where some edges need an atom to be usable.

    ``edges(v)`` yields ``(target, atom_or_None)``.  Vertices are
    ``(base, layer)`` pairs with layer 0 or 1; edges never lower the layer.
    Plain mode: some vertex with ``accept(v)`` is reachable from a source.
    Lasso mode: some base vertex ``b`` has ``(b, 0)`` reachable and
    ``(b, 0) ->* (b, 1)``, i.e. a reachable cycle through one layer-raising
    edge, the layer-1 part of the graph copying the layer-0 part.
    """

    def __init__(self, sources, edges, accept=None, lasso=False):
        self.lasso = lasso
        index, nodes = {}, []

        def intern(v):
            if v not in index:
                index[v] = len(nodes)
                nodes.append(v)
            return index[v]

        todo = [intern(v) for v in sources]
        self.sources = sorted(set(todo))
        raw = []
        k = 0
        while k < len(nodes):
            v = nodes[k]
            out = []
            for t, a in edges(v):
                out.append((intern(t), a))
            if lasso and v[1] == 1:
                intern((v[0], 0))  # layer 1 copies layer 0
            raw.append(out)
            k += 1
        n = len(nodes)
        if lasso:
            # project onto layer 0: plain edges stay inside a layer, raising edges cross
            base0 = {v[0]: i for i, v in enumerate(nodes) if v[1] == 0}
            plain = [[] for _ in range(n)]
            raise_ = [[] for _ in range(n)]
            for i, v in enumerate(nodes):
                if v[1] != 0:
                    continue
                for j, a in raw[i]:
                    t = nodes[j]
                    if t[1] == 0:
                        plain[i].append((j, a))
                    elif t[0] in base0:
                        raise_[i].append((base0[t[0]], a))
            keep = _coreach(n, [plain[i] + raise_[i] for i in range(n)],
                            _cyclic_targets(n, plain, raise_))
            self.adj = [[(j, a) for j, a in plain[i] if j in keep] for i in range(n)]
            self.raise_ = [[(j, a) for j, a in raise_[i] if j in keep] for i in range(n)]
        else:
            goal = {i for i, v in enumerate(nodes) if accept(v)}
            self.goal = goal
            keep = _coreach(n, raw, goal)
            self.adj = [[(j, a) for j, a in raw[i] if j in keep] for i in range(n)]
            self.raise_ = [[] for _ in range(n)]
        atoms = set()
        for lst in (self.adj, self.raise_):
            for out in lst:
                atoms.update(a for _, a in out if a is not None)
        self.atoms = frozenset(atoms)
        self.n = n

    def relabel(self, mapping, drop=frozenset()):
        """Copy with atoms renamed; atoms mapped to None become unconditional,
        edges on atoms in ``drop`` disappear."""
        def conv(out):
            return [(j, mapping.get(a, a) if a is not None else None)
                    for j, a in out if a not in drop]
        r = object.__new__(Reach)
        r.__dict__.update(self.__dict__)
        r.adj = [conv(out) for out in self.adj]
        r.raise_ = [conv(out) for out in self.raise_]
        r.atoms = frozenset(a for lst in (r.adj, r.raise_) for out in lst
                            for _, a in out if a is not None)
        return r

    def _reach(self, starts, S, blocked=False):
        seen = set(starts)
        stack = list(starts)
        adj = self.adj
        while stack:
            v = stack.pop()
            for t, a in adj[v]:
                if t not in seen and (a is None or (a in S) != blocked):
                    seen.add(t)
                    stack.append(t)
        return seen

    def satisfied_by(self, S, blocked=False):
        """With ``blocked`` an edge is usable when its atom is NOT in S."""
        S = S if isinstance(S, (set, frozenset)) else set(S)
        R = self._reach(self.sources, S, blocked)
        if not self.lasso:
            return not self.goal.isdisjoint(R)
        comp = _scc_ids(R, self.adj, S, blocked)
        for u in R:
            for w, a in self.raise_[u]:
                if a is not None and (a in S) == blocked:
                    continue
                if comp.get(w) == comp[u] or u in self._reach([w], S, blocked):
                    return True
        return False


def _coreach(n, adj, goal):
    pred = [[] for _ in range(n)]
    for i in range(n):
        for j, _ in adj[i]:
            pred[j].append(i)
    seen, stack = set(goal), list(goal)
    while stack:
        for i in pred[stack.pop()]:
            if i not in seen:
                seen.add(i)
                stack.append(i)
    return seen


def _cyclic_targets(n, plain, raise_):
    """Sources of raising edges that could close a cycle (everything enabled)."""
    out = set()
    for i in range(n):
        for j, _ in raise_[i]:
            out.add(i)
            out.add(j)
    return out


def _scc_ids(nodes, adj, S, blocked=False):
    """Tarjan's algorithm restricted to ``nodes`` and enabled edges."""
    index, low, comp = {}, {}, {}
    stack, on = [], set()
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, k = work.pop()
            if k == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on.add(v)
            out = adj[v]
            while k < len(out):
                t, a = out[k]
                k += 1
                if t not in nodes or (a is not None and (a in S) == blocked):
                    continue
                if t not in index:
                    work.append((v, k))
                    work.append((t, 0))
                    break
                if t in on:
                    low[v] = min(low[v], index[t])
            else:
                if low[v] == index[v]:
                    while True:
                        t = stack.pop()
                        on.discard(t)
                        comp[t] = v
                        if t == v:
                            break
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
    return comp


# -- minimal models ----------------------------------------------------------------


class Transversals:
    """Minimal hitting sets of a growing list of atom sets (Berge's method)."""

    def __init__(self):
        self.sets = [frozenset()]

    def add(self, e):
        hit = [t for t in self.sets if t & e]
        by_atom = {}
        for t in hit:
            for a in t:
                by_atom.setdefault(a, []).append(t)
        fresh = set()
        for t in self.sets:
            if t & e:
                continue
            for a in e:
                c = t | {a}
                # only an old transversal containing a can be inside c
                if not any(u <= c for u in by_atom.get(a, ())):
                    fresh.add(c)
        self.sets = hit + list(fresh)


def minimal_models(f: Monotone, allowed=None, limit=None):
    """All minimal models of f using only ``allowed`` atoms, in discovery order."""
    U = f.atoms if allowed is None else f.atoms & frozenset(allowed)
    first = f.witness(U)
    if first is None:
        return []
    found = [first]
    trs = Transversals()
    trs.add(first)
    checked = set()
    while limit is None or len(found) < limit:
        # a new minimal model misses an atom of every known one, so it lies
        # inside U minus some minimal transversal of the known models
        for t in trs.sets:
            if t in checked:
                continue
            m = f.witness(U - t)
            if m is None:
                checked.add(t)
                continue
            found.append(m)
            trs.add(m)
            break
        else:
            break
    return found
