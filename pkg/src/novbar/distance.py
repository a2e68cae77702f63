"""Bar metric, delta-matchings and exact bottleneck distance.

Distances take values in ``QuadReal`` or ``INF``.  Every candidate value
of the optimal delta is one of finitely many exact numbers (pairwise bar
distances, half-lengths, zero), so the bottleneck distance is found by
binary search over the sorted candidates with a perfect-matching test.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from .barcode import Bar, Barcode
from .exactnum import INF, QuadReal, ValueGroup

__all__ = [
    "MatchingResult",
    "bar_distance",
    "bottleneck_degree",
    "bottleneck_all",
    "matching_oracle",
    "witness_problems",
]

_HALF = QuadReal(1) / 2


def _abs(x: QuadReal) -> QuadReal:
    return -x if x.sign() < 0 else x


def _max(a, b):
    return a if a >= b else b


def _coset_distance(G: ValueGroup, a: QuadReal, b: QuadReal) -> QuadReal:
    """Distance from ``a`` to ``b`` in ``R / G``."""
    if G.kind == "trivial":
        return _abs(a - b)
    if G.kind == "dense":
        return QuadReal(0)
    r = G.coset_key(a - b)  # in [0, g)
    g = G.unit
    other = g - r
    return r if r <= other else other


def bar_distance(G: ValueGroup, s: Bar, t: Bar):
    """``inf over g in G of max(|a + g - a'|, |a + g + L - a' - L'|)``."""
    if s.infinite and t.infinite:
        return _coset_distance(G, s.a, t.a)
    if s.infinite or t.infinite:
        return INF
    a, L, b, M = s.a, s.L, t.a, t.L
    if G.kind == "dense":
        return _abs(L - M) * _HALF

    def cost(h):
        return _max(_abs(a + h - b), _abs(a + h + L - b - M))

    if G.kind == "trivial":
        return cost(QuadReal(0))
    g = G.unit
    hstar = -(a - b + (L - M) * _HALF)
    k = (hstar / g).floor()
    c1 = cost(g * k)
    c2 = cost(g * (k + 1))
    return c1 if c1 <= c2 else c2


@dataclass
class MatchingResult:
    delta: object
    pairs: List[Tuple[Bar, Bar]] = field(default_factory=list)
    unmatched_S: List[Bar] = field(default_factory=list)
    unmatched_T: List[Bar] = field(default_factory=list)


def _half(L):
    return INF if L is INF else L * _HALF


def _feasible(G, S, T, D, delta):
    """Perfect matching in the doubled graph, or None."""
    graph = nx.Graph()
    nS, nT = len(S), len(T)
    left = [("s", i) for i in range(nS)] + [("tb", j) for j in range(nT)]
    right = [("t", j) for j in range(nT)] + [("sb", i) for i in range(nS)]
    graph.add_nodes_from(left, bipartite=0)
    graph.add_nodes_from(right, bipartite=1)
    for i in range(nS):
        for j in range(nT):
            if D[i][j] is not INF and D[i][j] <= delta:
                graph.add_edge(("s", i), ("t", j))
        if S[i].L is not INF and S[i].L <= delta + delta:
            graph.add_edge(("s", i), ("sb", i))
    for j in range(nT):
        if T[j].L is not INF and T[j].L <= delta + delta:
            graph.add_edge(("tb", j), ("t", j))
        for i in range(nS):
            graph.add_edge(("tb", j), ("sb", i))
    if not left:
        return {}
    m = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=left)
    if sum(1 for u in left if u in m) != len(left):
        return None
    return m


def bottleneck_degree(G: ValueGroup, S: Sequence[Bar], T: Sequence[Bar]):
    """Exact ``d_B(S, T)`` for finite multisets of concise bars, with a witness."""
    S, T = list(S), list(T)
    D = [[bar_distance(G, s, t) for t in T] for s in S]
    cands = {QuadReal(0)}
    for row in D:
        for d in row:
            if d is not INF:
                cands.add(d)
    for b in S + T:
        if b.L is not INF:
            cands.add(b.L * _HALF)
    cands = sorted(cands)
    lo, hi = 0, len(cands) - 1
    if _feasible(G, S, T, D, cands[hi]) is None:
        return INF, MatchingResult(INF)
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(G, S, T, D, cands[mid]) is not None:
            hi = mid
        else:
            lo = mid + 1
    delta = cands[lo]
    m = _feasible(G, S, T, D, delta)
    res = MatchingResult(delta)
    for i in range(len(S)):
        partner = m[("s", i)]
        if partner[0] == "t":
            res.pairs.append((S[i], T[partner[1]]))
        else:
            res.unmatched_S.append(S[i])
    matched_t = {p[1] for p in (m[("s", i)] for i in range(len(S))) if p[0] == "t"}
    res.unmatched_T = [T[j] for j in range(len(T)) if j not in matched_t]
    return delta, res


def witness_problems(G: ValueGroup, S: Sequence[Bar], T: Sequence[Bar], res: MatchingResult) -> List[str]:
    """Check that a matching is a genuine delta-matching between S and T."""
    out = []
    delta = res.delta
    if delta is INF:
        return out
    used_S = _bar_counter([p[0] for p in res.pairs] + list(res.unmatched_S))
    used_T = _bar_counter([p[1] for p in res.pairs] + list(res.unmatched_T))
    if used_S != _bar_counter(S):
        out.append("pairs and unmatched bars do not partition S")
    if used_T != _bar_counter(T):
        out.append("pairs and unmatched bars do not partition T")
    for s, t in res.pairs:
        d = bar_distance(G, s, t)
        if d is INF or d > delta:
            out.append(f"pair {s} ~ {t} is {d} apart, more than {delta}")
    for b in list(res.unmatched_S) + list(res.unmatched_T):
        if b.L is INF or b.L > delta + delta:
            out.append(f"unmatched bar {b} is longer than 2 delta")
    return out


def _bar_counter(bars) -> Counter:
    return Counter(b.key() for b in bars)


def bottleneck_all(G: ValueGroup, A: Barcode, B: Barcode, per_degree: Optional[Dict] = None):
    """Supremum of the degree-wise bottleneck distances (concise bars only)."""
    A, B = A.concise(), B.concise()
    best = QuadReal(0)
    for k in sorted(set(A.degrees()) | set(B.degrees())):
        d, res = bottleneck_degree(G, A.in_degree(k), B.in_degree(k))
        if per_degree is not None:
            per_degree[k] = (d, res)
        if d is INF:
            best = INF
        elif best is not INF and d > best:
            best = d
    return best


def matching_oracle(G: ValueGroup, S: Sequence[Bar], T: Sequence[Bar], limit: int = 8):
    """Minimal defect over every partial matching, by brute force (test use)."""
    S, T = list(S), list(T)
    if len(S) + len(T) > limit:
        raise ValueError(f"matching_oracle refuses more than {limit} bars")
    best = INF
    nS, nT = len(S), len(T)
    for k in range(min(nS, nT) + 1):
        for si in itertools.combinations(range(nS), k):
            for tj in itertools.permutations(range(nT), k):
                cost = QuadReal(0)
                for i, j in zip(si, tj):
                    d = bar_distance(G, S[i], T[j])
                    if d is INF:
                        cost = INF
                        break
                    cost = _max(cost, d)
                if cost is INF:
                    continue
                ms, mt = set(si), set(tj)
                for i in range(nS):
                    if i not in ms:
                        h = _half(S[i].L)
                        cost = INF if h is INF else _max(cost, h)
                        if cost is INF:
                            break
                if cost is INF:
                    continue
                for j in range(nT):
                    if j not in mt:
                        h = _half(T[j].L)
                        cost = INF if h is INF else _max(cost, h)
                        if cost is INF:
                            break
                if cost is INF:
                    continue
                if best is INF or cost < best:
                    best = cost
    return best
