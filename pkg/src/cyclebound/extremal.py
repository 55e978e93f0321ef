"""Extremal quantities of a matroid: largest circuit, covering number, size profile.

``c(M)``
    :func:`max_circuit_exact` runs a branch-and-bound over independent
    extensions; :func:`max_circuit_greedy` is a seeded lower-bound probe.
``gamma(M)``
    :func:`gamma_partition` covers the ground set by the fewest
    independent sets (matroid partitioning with shortest exchange paths);
    :func:`gamma_bruteforce` maximises ``ceil(|A| / rank A)`` over all
    subsets and serves as its oracle.
``s_M(i)``
    :func:`s_profile` takes the largest flat of each rank.
"""

from __future__ import annotations

import math
import sys
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .linalg import eliminator, is_zero_vector, tag_support, unit_tag
from .matroid import LinearMatroid, MatroidError, guard

__all__ = [
    "ExtremalError",
    "BudgetExceeded",
    "NoCircuitExists",
    "HasLoops",
    "DEFAULT_BUDGET",
    "BRUTEFORCE_LIMIT",
    "CircuitSearchResult",
    "CoverResult",
    "max_circuit_exact",
    "max_circuit_greedy",
    "gamma_partition",
    "gamma_bruteforce",
    "s_profile",
    "s_value",
    "subset_ranks",
]

DEFAULT_BUDGET = 10_000_000
BRUTEFORCE_LIMIT = 20
# cycle-space enumeration visits 2^nullity codewords
_CYCLE_SPACE_MAX_NULLITY = 22


class ExtremalError(MatroidError):
    pass


class NoCircuitExists(ExtremalError):
    pass


class HasLoops(ExtremalError):
    def __init__(self, loops):
        super().__init__(f"matroid has loops {sorted(loops)}; gamma is infinite")
        self.loops = frozenset(loops)


@dataclass(frozen=True)
class CircuitSearchResult:
    circuit: frozenset
    size: int
    exact: bool
    nodes_explored: int
    method: str = ""


class BudgetExceeded(ExtremalError):
    def __init__(self, best: CircuitSearchResult, budget: int):
        super().__init__(f"search budget of {budget} nodes exhausted; best circuit so far has size {best.size}")
        self.best = best
        self.budget = budget


@dataclass(frozen=True)
class CoverResult:
    gamma: int
    partition: tuple  # tuple of frozensets
    witness: frozenset


# ---------------------------------------------------------------------------
# largest circuit

class _Stop(Exception):
    pass


def _bnb_max_circuit(M: LinearMatroid, budget: int) -> CircuitSearchResult:
    """Depth-first include/exclude search in element order.

    Include-first in index order visits circuits in lexicographic order, so
    a subtree can be cut as soon as its bound does not beat the incumbent.
    At each node with forced set ``IN`` (independent) and candidates
    ``alive``, a circuit ``C`` with ``IN <= C`` must satisfy:

    * ``C`` lies in one component of the restriction to ``IN + alive``;
    * ``C - IN`` is a circuit of the contraction by ``IN``, hence lies in one
      component ``Q`` of it and has at most ``rank(Q) + 1`` elements;
    * every member of ``IN`` occurs in the fundamental circuit of some
      element of ``Q``.
    """
    f = M.field
    cols = M.columns
    n = M.size
    state = {"size": 0, "circuit": (), "nodes": 0}
    unit = [unit_tag(f, i) for i in range(n)]

    comps = M.components()
    ceiling = 0
    for comp in comps:
        if len(comp) == 1:
            (e,) = comp
            if is_zero_vector(cols[e]):
                ceiling = max(ceiling, 1)
        else:
            ceiling = max(ceiling, M.rank_of(comp) + 1)
    if ceiling == 0:
        return CircuitSearchResult(frozenset(), 0, True, 0, "branch-and-bound")

    def record(C: tuple) -> None:
        if len(C) > state["size"]:
            state["size"] = len(C)
            state["circuit"] = C
            if len(C) >= ceiling:
                raise _Stop

    def node(IN: tuple, el_in, alive: list) -> None:
        state["nodes"] += 1
        if state["nodes"] > budget:
            raise _Stop("budget")
        best = state["size"]
        el = el_in.copy()
        inset = set(IN)
        fund: dict[int, list[int]] = {}
        bprime: set[int] = set()
        for u in alive:
            indep, tag = el.insert(cols[u], unit[u])
            if indep:
                bprime.add(u)
            else:
                fund[u] = tag_support(f, tag)

        # component of the restriction that must hold the circuit
        parent = {x: x for x in alive}
        parent.update({x: x for x in IN})

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, sup in fund.items():
            ru = find(u)
            for k in sup:
                rk = find(k)
                if rk != ru:
                    parent[rk] = ru
        if IN:
            root = find(IN[0])
            if any(find(i) != root for i in IN[1:]):
                return
            pool = [u for u in alive if find(u) == root]
        else:
            pool = alive

        # components of the contraction by IN, restricted to pool
        poolset = set(pool)
        par2 = {x: x for x in pool}

        def find2(x):
            while par2[x] != x:
                par2[x] = par2[par2[x]]
                x = par2[x]
            return x

        for u in pool:
            sup = fund.get(u)
            if sup is None:
                continue
            ru = find2(u)
            for k in sup:
                if k in poolset:
                    rk = find2(k)
                    if rk != ru:
                        par2[rk] = ru
        groups: dict[int, list[int]] = {}
        for u in pool:
            groups.setdefault(find2(u), []).append(u)

        need = len(IN)
        bound = 0
        keep: list[int] = []
        for Q in groups.values():
            cover: set[int] = set()
            rq = 0
            for u in Q:
                if u in bprime:
                    rq += 1
                else:
                    cover.update(k for k in fund[u] if k in inset)
            if len(cover) < need:
                continue
            if len(Q) == 1:
                if rq:
                    continue  # a coloop of the contraction
                b = need + 1
            else:
                b = need + min(rq + 1, len(Q))
            if b > best:
                bound = max(bound, b)
                keep.extend(Q)
        if bound <= best:
            return
        keep.sort()
        x, rest = keep[0], keep[1:]
        trial = el_in.copy()
        indep, tag = trial.insert(cols[x], unit[x])
        if indep:
            node(IN + (x,), trial, rest)
        elif len(tag_support(f, tag)) == len(IN) + 1:
            record(tuple(sorted(IN + (x,))))
        if state["size"] < ceiling:
            node(IN, el_in, rest)

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * n + 1000))
    exhausted = False
    try:
        node((), eliminator(f), list(range(n)))
    except _Stop as stop:
        exhausted = bool(stop.args)
    finally:
        sys.setrecursionlimit(old)
    res = CircuitSearchResult(frozenset(state["circuit"]), state["size"], not exhausted,
                              state["nodes"], "branch-and-bound")
    if exhausted:
        raise BudgetExceeded(res, budget)
    return res


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).astype(np.int64)


def _cycle_space_max_circuit(M: LinearMatroid) -> CircuitSearchResult:
    """Exhaustive scan of the binary cycle space, heaviest codewords first.

    Relative to the greedy basis ``B``, every kernel vector is determined by
    its nonbasis support ``T``.  The codeword of ``T`` is a circuit iff the
    fundamental-circuit parts of ``T``, restricted to the basis positions
    where the codeword vanishes, have exactly one linear dependency.
    """
    B = list(M.basis)
    r = len(B)
    pos = {b: i for i, b in enumerate(B)}
    nonbasis = [e for e in range(M.size) if e not in pos]
    k = len(nonbasis)
    if k == 0:
        return CircuitSearchResult(frozenset(), 0, True, 0, "cycle-space")
    fund = []
    for e in nonbasis:
        sup = M.fundamental_circuit(B, e)
        fund.append(sum(1 << pos[b] for b in sup if b != e))
    fund_arr = np.array(fund, dtype=np.uint64)
    full = np.uint64((1 << r) - 1) if r < 64 else np.uint64(0xFFFFFFFFFFFFFFFF)

    bpart = np.zeros(1, dtype=np.uint64)
    for j in range(k):
        bpart = np.concatenate([bpart, bpart ^ fund_arr[j]])
    lam = np.arange(1 << k, dtype=np.uint64)
    weight = _popcount(lam) + _popcount(bpart)
    weight[0] = -1
    order = np.argsort(-weight, kind="stable")
    sorted_w = weight[order]
    start = 0
    total = 1 << k
    while start < total and sorted_w[start] > 0:
        w = sorted_w[start]
        stop = int(np.searchsorted(-sorted_w, -w, side="right"))
        cand = order[start:stop].astype(np.uint64)
        start = stop
        zero = ~bpart[cand] & full
        ok = np.ones(len(cand), dtype=bool)
        size_t = _popcount(cand)
        multi = size_t > 1
        for j in range(k):
            has = ((cand >> np.uint64(j)) & np.uint64(1)).astype(bool)
            ok &= ~(has & multi & ((fund_arr[j] & zero) == 0))
        idx = np.nonzero(ok)[0]
        if len(idx) == 0:
            continue
        lams, zs = cand[idx], zero[idx]
        m = len(lams)
        piv = np.zeros((m, max(r, 1)), dtype=np.uint64)
        rk = np.zeros(m, dtype=np.int64)
        for j in range(k):
            has = ((lams >> np.uint64(j)) & np.uint64(1)).astype(bool)
            v = np.where(has, fund_arr[j] & zs, np.uint64(0))
            for bit in range(r - 1, -1, -1):
                hb = ((v >> np.uint64(bit)) & np.uint64(1)).astype(bool)
                if not hb.any():
                    continue
                cur = piv[:, bit]
                use = hb & (cur != 0)
                v[use] ^= cur[use]
                new = hb & (cur == 0)
                piv[new, bit] = v[new]
                rk += new
                v[new] = 0
        minimal = rk == _popcount(lams) - 1
        if not minimal.any():
            continue
        best = None
        for lam_v in lams[minimal]:
            lv = int(lam_v)
            members = [nonbasis[j] for j in range(k) if lv >> j & 1]
            bp = int(bpart[lv])
            members += [B[i] for i in range(r) if bp >> i & 1]
            t = tuple(sorted(members))
            if best is None or t < best:
                best = t
        return CircuitSearchResult(frozenset(best), len(best), True, total - 1, "cycle-space")
    return CircuitSearchResult(frozenset(), 0, True, total - 1, "cycle-space")


def max_circuit_exact(M: LinearMatroid, budget: int = DEFAULT_BUDGET, method: str = "auto") -> CircuitSearchResult:
    """A largest circuit, lexicographically least among the largest.

    ``method`` is ``"branch-and-bound"``, ``"cycle-space"`` (GF(2) only,
    small nullity) or ``"auto"``.  Raises :class:`BudgetExceeded` carrying
    the best circuit found when the node budget runs out.
    """
    nullity = M.size - M.rank
    cycle_space_ok = M.field.is_binary and nullity <= _CYCLE_SPACE_MAX_NULLITY and M.rank <= 63
    if method == "auto":
        method = "cycle-space" if cycle_space_ok and (1 << nullity) <= budget else "branch-and-bound"
    if method == "cycle-space":
        if not cycle_space_ok:
            raise ExtremalError("cycle-space search needs GF(2), rank <= 63 and small nullity")
        return _cycle_space_max_circuit(M)
    if method != "branch-and-bound":
        raise ExtremalError(f"unknown method {method!r}")
    return _bnb_max_circuit(M, budget)


def max_circuit_greedy(M: LinearMatroid, restarts: int = 8, seed: int = 0) -> CircuitSearchResult:
    """Largest fundamental circuit over ``restarts`` random greedy bases."""
    if M.rank == M.size:
        raise NoCircuitExists("matroid is independent")
    rng = np.random.Generator(np.random.PCG64(seed & (2 ** 64 - 1)))
    f = M.field
    best: tuple = ()
    tried = 0
    for _ in range(max(1, restarts)):
        order = [int(e) for e in rng.permutation(M.size)]
        el = eliminator(f)
        for e in order:
            indep, tag = el.insert(M.columns[e], unit_tag(f, e))
            tried += 1
            if not indep:
                C = tuple(sorted(tag_support(f, tag)))
                if len(C) > len(best) or (len(C) == len(best) and C < best):
                    best = C
    return CircuitSearchResult(frozenset(best), len(best), False, tried, "greedy")


# ---------------------------------------------------------------------------
# covering number

def _require_loopless(M: LinearMatroid) -> None:
    loops = M.loops()
    if loops:
        raise HasLoops(loops)


def gamma_partition(M: LinearMatroid) -> CoverResult:
    """Fewest independent sets covering ``M`` (matroid partitioning).

    Elements are inserted one at a time along shortest exchange paths.
    When no path exists for ``k`` sets, the elements reached by the search
    form a set ``R`` with ``|R| = k * rank(R) + 1``, which certifies that
    ``k + 1`` sets are needed; that ``R`` is returned as the witness.
    """
    _require_loopless(M)
    n = M.size
    if n == 0:
        return CoverResult(0, (), frozenset())
    f = M.field
    cols = M.columns
    k = -(-n // M.rank)
    sets: list[set[int]] = [set() for _ in range(k)]
    owner = [-1] * n
    witness = frozenset(range(n))

    for s in range(n):
        els = []
        for I in sets:
            el = eliminator(f)
            for i in sorted(I):
                el.insert(cols[i], unit_tag(f, i))
            els.append(el)
        parent: dict[int, tuple[int, int] | None] = {s: None}
        queue = deque([s])
        sink = None
        while queue and sink is None:
            y = queue.popleft()
            for j in range(len(sets)):
                if owner[y] == j:
                    continue
                vec, tag = els[j].reduce(cols[y], unit_tag(f, y))
                indep = bool(vec) if f.is_binary else any(vec)
                if indep:
                    sink = (y, j)
                    break
                for z in sorted(set(tag_support(f, tag)) - {y}):
                    if z not in parent:
                        parent[z] = (y, j)
                        queue.append(z)
        if sink is None:
            witness = frozenset(parent)
            sets.append({s})
            owner[s] = len(sets) - 1
            continue
        cur, target = sink
        while cur is not None:
            old = owner[cur]
            if old >= 0:
                sets[old].discard(cur)
            sets[target].add(cur)
            owner[cur] = target
            link = parent[cur]
            if link is None:
                break
            cur, target = link[0], old
        for I in sets:
            if not M.is_independent(I):
                raise ExtremalError("exchange produced a dependent block")
    partition = tuple(frozenset(I) for I in sets)
    return CoverResult(len(sets), partition, witness)


def subset_ranks(M: LinearMatroid, force: bool = False, limit: int = BRUTEFORCE_LIMIT):
    """Yield ``(subset, rank)`` for every nonempty subset, in lexicographic order."""
    guard(M.size, limit, force)
    f = M.field
    cols = M.columns
    n = M.size

    def walk(prefix: tuple, el, start: int):
        for e in range(start, n):
            nxt = el.copy()
            nxt.insert(cols[e])
            sub = prefix + (e,)
            yield sub, nxt.rank
            yield from walk(sub, nxt, e + 1)

    yield from walk((), eliminator(f), 0)


def gamma_bruteforce(M: LinearMatroid, force: bool = False) -> tuple[int, Fraction, frozenset]:
    """``(gamma, max density, argmax)`` by exhausting all subsets."""
    guard(M.size, BRUTEFORCE_LIMIT, force)
    _require_loopless(M)
    best_ceil, best_density, arg = 0, Fraction(0), ()
    for sub, rk in subset_ranks(M, force=True):
        if rk == 0:
            continue
        size = len(sub)
        c = -(-size // rk)
        if c > best_ceil:
            best_ceil, arg = c, sub
        d = Fraction(size, rk)
        if d > best_density:
            best_density = d
    return best_ceil, best_density, frozenset(arg)


# ---------------------------------------------------------------------------
# size profile

def s_profile(M: LinearMatroid, i_max: int | None = None, force: bool = False) -> list[int]:
    """``[s_M(0), ..., s_M(i_max)]``: the largest set of rank at most ``i``.

    Computed level by level over flats, since closing a set never lowers
    its size nor raises its rank.
    """
    r = M.rank
    n = M.size
    if i_max is None:
        i_max = r
    if min(i_max, r - 1) >= 1:
        guard(n, BRUTEFORCE_LIMIT, force)
    level = {M.closure_of(())}
    out = [len(next(iter(level)))]
    for i in range(1, min(i_max, r - 1) + 1):
        nxt: set[frozenset] = set()
        for F in level:
            covered = set(F)
            for e in range(n):
                if e in covered:
                    continue
                G = M.closure_of(F | {e})
                covered |= G
                nxt.add(G)
        level = nxt
        out.append(max(len(F) for F in level))
    out.extend([n] * (i_max + 1 - len(out)))
    return out


def s_value(M: LinearMatroid, i: int, force: bool = False) -> int:
    if i >= M.rank:
        return M.size
    return s_profile(M, i, force=force)[i]
