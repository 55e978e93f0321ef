"""Decomposition trees built by repeatedly contracting a maximum circuit.

Each node holds a connected loopless minor ``M_x`` of the root matroid along
with its chosen maximum circuit ``C_x``.  Its children are the connected
components of ``M_x / C_x`` once loops are removed.  All element references
are indices into the root matroid.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .extremal import BudgetExceeded, DEFAULT_BUDGET, max_circuit_exact
from .matroid import LinearMatroid, MatroidError


class DecompError(MatroidError):
    pass


class NotConnected(DecompError):
    pass


class HasLoops(DecompError):
    pass


class TooSmall(DecompError):
    pass


class SearchBudgetExceeded(DecompError):
    def __init__(self, path: tuple, budget: int):
        super().__init__(f"max-circuit search exceeded {budget} nodes at node {list(path)}")
        self.path = path
        self.budget = budget


@dataclass(frozen=True)
class DecompNode:
    path: tuple[int, ...]
    elements: tuple[int, ...]
    contracted: tuple[int, ...]
    deleted: tuple[int, ...]
    circuit: tuple[int, ...]
    rank: int
    loops: tuple[int, ...]  # elements of M_x that become loops in M_x / C_x
    children: tuple["DecompNode", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self):
        yield self
        for ch in self.children:
            yield from ch.walk()


@dataclass(frozen=True)
class DecompositionTree:
    root: DecompNode
    source: LinearMatroid = field(repr=False, compare=False)

    def nodes(self) -> list[DecompNode]:
        return list(self.root.walk())

    @property
    def depth(self) -> int:
        return max(len(x.path) for x in self.root.walk())

    @property
    def size(self) -> int:
        return len(self.nodes())

    def circuit_sum(self) -> int:
        return sum(len(x.circuit) - 1 for x in self.root.walk())

    def to_json(self) -> dict:
        labels = self.source.labels

        def enc(x: DecompNode) -> dict:
            return {
                "path": list(x.path),
                "elements": [labels[i] for i in x.elements],
                "circuit": [labels[i] for i in x.circuit],
                "circuit_size": len(x.circuit),
                "rank": x.rank,
                "contracted": [labels[i] for i in x.contracted],
                "loops": [labels[i] for i in x.loops],
                "children": [enc(c) for c in x.children],
            }

        return enc(self.root)

    def summary(self) -> dict:
        return {
            "nodes": self.size,
            "depth": self.depth,
            "root_circuit_size": len(self.root.circuit),
            "circuit_sizes": [len(x.circuit) for x in self.nodes()],
            "circuit_sum": self.circuit_sum(),
            "rank": self.source.rank_of(self.root.elements),
        }

    def to_dot(self, name: str = "T") -> str:
        lines = [f"digraph {name} {{", "  node [shape=box];"]

        def nid(x: DecompNode) -> str:
            return "n" + "_".join(map(str, x.path)) if x.path else "root"

        for x in self.root.walk():
            lines.append(f'  {nid(x)} [label="|C_x|={len(x.circuit)}, rank={x.rank}"];')
        for x in self.root.walk():
            for c in x.children:
                lines.append(f"  {nid(x)} -> {nid(c)};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _build(N: LinearMatroid, to_root: tuple, contracted: tuple, n_root: int,
           path: tuple, budget: int, known: tuple | None = None) -> DecompNode:
    if known is not None:
        C = sorted(known)
    else:
        try:
            res = max_circuit_exact(N, budget=budget)
        except BudgetExceeded as exc:
            raise SearchBudgetExceeded(path, budget) from exc
        C = sorted(res.circuit)
    quotient, kept = N.minor_with_map(contractions=C)
    qloops = quotient.loops()
    live = [j for j in range(quotient.size) if j not in qloops]
    below = tuple(sorted(contracted + tuple(to_root[i] for i in C)))
    children = []
    if live:
        sub, live_map = quotient.restrict_with_map(live)
        # components are sorted by least element, which is the recursion order
        for k, comp in enumerate(sub.components()):
            child, cmap = sub.restrict_with_map(sorted(comp))
            child_to_root = tuple(to_root[kept[live_map[j]]] for j in cmap)
            children.append(_build(child, child_to_root, below, n_root, path + (k,), budget))
    elements = tuple(to_root)
    outside = set(elements) | set(contracted)
    return DecompNode(
        path=path,
        elements=elements,
        contracted=contracted,
        deleted=tuple(i for i in range(n_root) if i not in outside),
        circuit=tuple(to_root[i] for i in C),
        rank=N.rank,
        loops=tuple(sorted(to_root[kept[j]] for j in qloops)),
        children=tuple(children),
    )


def build_decomposition_tree(M: LinearMatroid, budget: int = DEFAULT_BUDGET,
                             root_circuit=None) -> DecompositionTree:
    """Decomposition tree of a connected loopless matroid with at least two elements.

    Every node's circuit is an exact maximum circuit, lexicographically least
    among maximum circuits of that node's minor.  ``root_circuit`` may pass in
    an already computed exact answer for ``M`` itself.
    """
    if M.size <= 1:
        raise TooSmall(f"need at least 2 elements, got {M.size}")
    if M.loops():
        raise HasLoops(f"loops present: {M.names(sorted(M.loops()))}")
    if not M.is_connected():
        raise NotConnected(f"matroid has {len(M.components())} components")
    known = tuple(sorted(root_circuit)) if root_circuit is not None else None
    root = _build(M, tuple(range(M.size)), (), M.size, (), budget, known)
    return DecompositionTree(root, M)


def decomposition_forest(M: LinearMatroid, budget: int = DEFAULT_BUDGET,
                         max_circuit=None) -> list[DecompositionTree]:
    """One tree per connected component with at least two elements (loops dropped).

    ``max_circuit`` is an optional exact, lexicographically least maximum
    circuit of ``M``; it is reused as the root of its own component.
    """
    loops = M.loops()
    trees = []
    for comp in M.components():
        if len(comp) < 2 or comp & loops:
            continue
        sub, cmap = M.restrict_with_map(sorted(comp))
        known = None
        if max_circuit is not None and set(max_circuit) <= comp:
            pos = {j: k for k, j in enumerate(cmap)}
            known = [pos[i] for i in max_circuit]
        t = build_decomposition_tree(sub, budget, known)
        trees.append(_reindex(t, cmap, M))
    return trees


def _reindex(t: DecompositionTree, cmap: tuple, M: LinearMatroid) -> DecompositionTree:
    inside = set(cmap)
    outside = tuple(i for i in range(M.size) if i not in inside)

    def conv(x: DecompNode) -> DecompNode:
        m = lambda xs: tuple(cmap[i] for i in xs)
        return DecompNode(
            path=x.path, elements=m(x.elements), contracted=m(x.contracted),
            deleted=tuple(sorted(m(x.deleted) + outside)), circuit=m(x.circuit),
            rank=x.rank, loops=m(x.loops), children=tuple(conv(c) for c in x.children),
        )

    return DecompositionTree(conv(t.root), M)


@dataclass
class CheckFailure:
    check: str
    path: tuple[int, ...]
    detail: str

    def to_json(self) -> dict:
        return {"check": self.check, "path": list(self.path), "detail": self.detail}


@dataclass
class ValidationReport:
    checks: dict[str, bool]
    failures: list[CheckFailure]
    depth: int
    circuit_sum: int
    rank: int
    max_circuit: int

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checks": dict(self.checks),
            "depth": self.depth,
            "circuit_sum": self.circuit_sum,
            "rank": self.rank,
            "max_circuit": self.max_circuit,
            "failures": [f.to_json() for f in self.failures],
        }


def node_minor(source: LinearMatroid, x: DecompNode) -> tuple[LinearMatroid, tuple[int, ...]]:
    """Recompute ``M_x`` from the source matroid: contract, then restrict."""
    Q, kept = source.minor_with_map(contractions=x.contracted)
    pos = {j: k for k, j in enumerate(kept)}
    missing = [i for i in x.elements if i not in pos]
    if missing:
        raise DecompError(f"elements {missing} not in minor")
    return Q.restrict_with_map([pos[i] for i in x.elements])[0], x.elements


def validate_tree(T: DecompositionTree, budget: int = DEFAULT_BUDGET) -> ValidationReport:
    """Re-derive every node from the source and check the tree identities.

    Checks: ``max_circuit`` (each C_x is a maximum circuit of M_x),
    ``strict_decrease`` (child circuits are strictly smaller),
    ``depth`` (depth < c(M) - 1), ``rank_sum`` (sum of |C_x| - 1 equals rank),
    plus ``children`` (children are the loopless components of M_x / C_x)
    and ``elimination`` (each root element is used up at exactly one node).
    """
    M = T.source
    failures: list[CheckFailure] = []
    checks = {k: True for k in ("max_circuit", "strict_decrease", "depth", "rank_sum", "children", "elimination")}

    def fail(check: str, path: tuple, detail: str) -> None:
        checks[check] = False
        failures.append(CheckFailure(check, path, detail))

    c_true: dict = {}
    for x in T.root.walk():
        try:
            N, emap = node_minor(M, x)
        except MatroidError as exc:
            fail("children", x.path, str(exc))
            continue
        pos = {e: k for k, e in enumerate(emap)}
        if not set(x.circuit) <= set(pos):
            fail("max_circuit", x.path, "circuit not inside node elements")
            continue
        local = [pos[e] for e in x.circuit]
        chk = N.is_circuit(local)
        if not chk:
            fail("max_circuit", x.path, f"not a circuit: {chk.reason}")
        try:
            best = max_circuit_exact(N, budget=budget)
        except BudgetExceeded as exc:
            fail("max_circuit", x.path, f"re-verification exceeded budget {exc.budget}")
        else:
            if not x.path:
                c_true["c"] = best.size
            if best.size != len(x.circuit):
                fail("max_circuit", x.path,
                     f"|C_x|={len(x.circuit)} but maximum is {best.size}: {M.names(emap[i] for i in sorted(best.circuit))}")
        if N.rank != x.rank:
            fail("children", x.path, f"stored rank {x.rank} != {N.rank}")
        for ch in x.children:
            if not len(ch.circuit) < len(x.circuit):
                fail("strict_decrease", ch.path, f"|C|={len(ch.circuit)} not < parent {len(x.circuit)}")
        # children must be exactly the loopless components of M_x / C_x
        Q, kept = N.minor_with_map(contractions=local)
        qloops = Q.loops()
        comps = [frozenset(emap[kept[j]] for j in c) for c in Q.components() if not (c & qloops)]
        got = [frozenset(ch.elements) for ch in x.children]
        if sorted(map(sorted, comps)) != sorted(map(sorted, got)):
            fail("children", x.path, "children differ from loopless components of the contraction")
        if frozenset(emap[kept[j]] for j in qloops) != frozenset(x.loops):
            fail("children", x.path, "recorded loops differ")
        if (Q.rank == 0) != x.is_leaf:
            fail("children", x.path, "leaf iff contraction has rank 0 violated")

    # per-element accounting: σ is used up where it lies in C_x or becomes a loop
    owner: dict[int, list] = {}
    for x in T.root.walk():
        for e in x.circuit + x.loops:
            owner.setdefault(e, []).append(x.path)
    for e in T.root.elements:
        got = owner.get(e, [])
        if len(got) != 1:
            fail("elimination", (), f"element {M.labels[e]} eliminated at {len(got)} nodes")

    c = c_true.get("c", len(T.root.circuit))
    depth = T.depth
    if not depth < c - 1:
        fail("depth", (), f"depth {depth} not < c - 1 = {c - 1}")
    rank = M.rank_of(T.root.elements)
    s = T.circuit_sum()
    if s != rank:
        fail("rank_sum", (), f"sum(|C_x|-1) = {s} != rank {rank}")
    return ValidationReport(checks, failures, depth, s, rank, c)


def tree_json(trees: list[DecompositionTree]) -> str:
    return json.dumps([t.to_json() for t in trees], indent=2, sort_keys=True)
