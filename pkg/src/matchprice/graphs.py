"""Graphs, bipartite graphs, matchings, vertex orders, and exhaustive oracles.

Everything downstream (solvers, reductions, the verification suite) treats
the brute-force routines here as ground truth, so they favour clarity and
determinism over speed: witnesses are always the lexicographically least
among the optima, and every enumeration refuses inputs above its cap
instead of truncating.

Matching notions used throughout:

* induced matching: a matching M such that no graph edge joins endpoints of
  two distinct edges of M.
* order-respecting (semi-induced) matching for an order sigma: only edges
  "from earlier to later" are forbidden.  For a bipartite graph, sigma ranks
  the left side and a pair uv, u'v' in M with rank(u) < rank(u') must not
  have the edge uv'.  For a general graph each matching edge is anchored at
  its lower-ranked endpoint, and for two edges e, f whose anchors satisfy
  rank(anchor(e)) < rank(anchor(f)) the graph must contain no edge from
  anchor(e) to either endpoint of f.  Every induced matching qualifies
  under every sigma.
"""

from __future__ import annotations

import random
from itertools import combinations

from . import caps
from .errors import CapExceeded, InputError

ALL_ORDERS = "all"


class Graph:
    """Undirected simple graph on vertices 0..n-1.  Immutable once built."""

    __slots__ = ("vertex_count", "edges", "_adj")

    def __init__(self, vertex_count: int, edges):
        if vertex_count < 0:
            raise InputError("vertex_count must be nonnegative")
        self.vertex_count = vertex_count
        adj = [0] * vertex_count
        seen = set()
        for edge in edges:
            u, w = edge
            if not (0 <= u < vertex_count and 0 <= w < vertex_count):
                raise InputError(f"edge {edge} out of range for n={vertex_count}")
            if u == w:
                raise InputError(f"loop at vertex {u}")
            seen.add((min(u, w), max(u, w)))
            adj[u] |= 1 << w
            adj[w] |= 1 << u
        self.edges = frozenset(seen)
        self._adj = tuple(adj)

    def has_edge(self, u: int, w: int) -> bool:
        return (self._adj[u] >> w) & 1 == 1

    def adjacency_mask(self, u: int) -> int:
        return self._adj[u]

    def degree(self, u: int) -> int:
        return self._adj[u].bit_count()

    def max_degree(self) -> int:
        return max((m.bit_count() for m in self._adj), default=0)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.vertex_count == other.vertex_count
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.vertex_count, self.edges))

    def __repr__(self):
        return f"Graph(n={self.vertex_count}, m={len(self.edges)})"

    def to_json(self) -> dict:
        return {"n": self.vertex_count, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_json(cls, obj: dict) -> "Graph":
        try:
            return cls(obj["n"], [tuple(e) for e in obj["edges"]])
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad graph json: {exc}") from None


class BipartiteGraph:
    """Bipartite graph with sides 0..left-1 and 0..right-1; edges are (left, right)."""

    __slots__ = ("left_count", "right_count", "edges", "_left_adj", "_right_adj")

    def __init__(self, left_count: int, right_count: int, edges):
        if left_count < 0 or right_count < 0:
            raise InputError("side sizes must be nonnegative")
        self.left_count = left_count
        self.right_count = right_count
        left_adj = [0] * left_count
        right_adj = [0] * right_count
        seen = set()
        for edge in edges:
            u, w = edge
            if not (0 <= u < left_count and 0 <= w < right_count):
                raise InputError(f"edge {edge} out of range for sides {left_count}x{right_count}")
            seen.add((u, w))
            left_adj[u] |= 1 << w
            right_adj[w] |= 1 << u
        self.edges = frozenset(seen)
        self._left_adj = tuple(left_adj)
        self._right_adj = tuple(right_adj)

    def has_edge(self, u: int, w: int) -> bool:
        return (self._left_adj[u] >> w) & 1 == 1

    def left_mask(self, u: int) -> int:
        """Bitmask of right neighbours of left vertex u."""
        return self._left_adj[u]

    def right_mask(self, w: int) -> int:
        """Bitmask of left neighbours of right vertex w."""
        return self._right_adj[w]

    def degree_left(self, u: int) -> int:
        return self._left_adj[u].bit_count()

    def degree_right(self, w: int) -> int:
        return self._right_adj[w].bit_count()

    def max_degree(self) -> int:
        left = max((m.bit_count() for m in self._left_adj), default=0)
        right = max((m.bit_count() for m in self._right_adj), default=0)
        return max(left, right)

    def transpose(self) -> "BipartiteGraph":
        return BipartiteGraph(self.right_count, self.left_count, [(w, u) for u, w in self.edges])

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __eq__(self, other):
        return (
            isinstance(other, BipartiteGraph)
            and self.left_count == other.left_count
            and self.right_count == other.right_count
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.left_count, self.right_count, self.edges))

    def __repr__(self):
        return f"BipartiteGraph({self.left_count}x{self.right_count}, m={len(self.edges)})"

    def to_json(self) -> dict:
        return {
            "left": self.left_count,
            "right": self.right_count,
            "edges": [list(e) for e in self.sorted_edges()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BipartiteGraph":
        try:
            return cls(obj["left"], obj["right"], [tuple(e) for e in obj["edges"]])
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad bipartite graph json: {exc}") from None


def load_graph_json(obj: dict):
    """Dispatch on the json shape: {"n", ...} or {"left", "right", ...}."""
    if "n" in obj:
        return Graph.from_json(obj)
    if "left" in obj:
        if "target_degree" in obj:
            from .disperser import DisperserGraph

            return DisperserGraph.from_json(obj)
        return BipartiteGraph.from_json(obj)
    raise InputError("json object is neither a graph nor a bipartite graph")


class Matching:
    """A list of vertex pairs.  Validity is checked against a host graph."""

    __slots__ = ("edges",)

    def __init__(self, edges):
        self.edges = tuple(tuple(e) for e in edges)
        for e in self.edges:
            if len(e) != 2:
                raise InputError(f"matching edge {e} is not a pair")

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __eq__(self, other):
        return isinstance(other, Matching) and self.edges == other.edges

    def __hash__(self):
        return hash(self.edges)

    def __repr__(self):
        return f"Matching({list(self.edges)})"


class VertexOrder:
    """Bijection vertex -> rank in [0, n).

    For a bipartite graph the order ranks the left side only; for a general
    graph it ranks every vertex.
    """

    __slots__ = ("ranks",)

    def __init__(self, ranks):
        self.ranks = tuple(ranks)
        if sorted(self.ranks) != list(range(len(self.ranks))):
            raise InputError("ranks must be a bijection onto [0, n)")

    @classmethod
    def from_sequence(cls, seq) -> "VertexOrder":
        """Build from a list of vertices in rank order."""
        seq = list(seq)
        ranks = [0] * len(seq)
        for position, v in enumerate(seq):
            ranks[v] = position
        return cls(ranks)

    @classmethod
    def identity(cls, n: int) -> "VertexOrder":
        return cls(range(n))

    def rank(self, v: int) -> int:
        return self.ranks[v]

    def sequence(self) -> list[int]:
        return sorted(range(len(self.ranks)), key=lambda v: self.ranks[v])

    def __len__(self):
        return len(self.ranks)

    def __eq__(self, other):
        return isinstance(other, VertexOrder) and self.ranks == other.ranks

    def __hash__(self):
        return hash(self.ranks)

    def __repr__(self):
        return f"VertexOrder({list(self.ranks)})"


# ---------------------------------------------------------------------------
# matching validity


def _checked_pairs(g, m: Matching) -> list[tuple[int, int]]:
    """Range-check matching endpoints against g; raises InputError."""
    pairs = []
    if isinstance(g, BipartiteGraph):
        for u, w in m:
            if not (0 <= u < g.left_count and 0 <= w < g.right_count):
                raise InputError(f"matching edge ({u}, {w}) out of range")
            pairs.append((u, w))
    else:
        for u, w in m:
            if not (0 <= u < g.vertex_count and 0 <= w < g.vertex_count) or u == w:
                raise InputError(f"matching edge ({u}, {w}) out of range")
            pairs.append((u, w))
    return pairs


def _is_matching_in(g, pairs) -> bool:
    used = set()
    for u, w in pairs:
        if not g.has_edge(u, w):
            return False
    if isinstance(g, BipartiteGraph):
        for u, w in pairs:
            if ("L", u) in used or ("R", w) in used:
                return False
            used.add(("L", u))
            used.add(("R", w))
    else:
        for u, w in pairs:
            if u in used or w in used:
                return False
            used.add(u)
            used.add(w)
    return True


def is_induced_matching(g, m: Matching) -> bool:
    """True iff m is a matching in g and no g-edge joins two distinct m-edges."""
    pairs = _checked_pairs(g, m)
    if not _is_matching_in(g, pairs):
        return False
    bip = isinstance(g, BipartiteGraph)
    for i in range(len(pairs)):
        for j in range(len(pairs)):
            if i == j:
                continue
            u_i, w_i = pairs[i]
            u_j, w_j = pairs[j]
            if bip:
                if g.has_edge(u_i, w_j):
                    return False
            else:
                if g.has_edge(u_i, u_j) or g.has_edge(u_i, w_j) or g.has_edge(w_i, w_j):
                    return False
    return True


def is_semi_induced_matching(g, order: VertexOrder, m: Matching) -> bool:
    """True iff m is a matching in g respecting the order as described above."""
    pairs = _checked_pairs(g, m)
    if isinstance(g, BipartiteGraph):
        if len(order) != g.left_count:
            raise InputError("order must rank the left side of a bipartite graph")
        if not _is_matching_in(g, pairs):
            return False
        rank = order.ranks
        for (u, v), (a, b) in combinations(pairs, 2):
            if rank[u] < rank[a]:
                if g.has_edge(u, b):
                    return False
            else:
                if g.has_edge(a, v):
                    return False
        return True
    if len(order) != g.vertex_count:
        raise InputError("order must rank every vertex of a general graph")
    if not _is_matching_in(g, pairs):
        return False
    rank = order.ranks
    anchored = []
    for x, y in pairs:
        if rank[x] < rank[y]:
            anchored.append((x, y))
        else:
            anchored.append((y, x))
    for (m1, o1), (m2, o2) in combinations(anchored, 2):
        if rank[m1] < rank[m2]:
            lo, f_anchor, f_other = m1, m2, o2
        else:
            lo, f_anchor, f_other = m2, m1, o1
        if g.has_edge(lo, f_anchor) or g.has_edge(lo, f_other):
            return False
    return True


# ---------------------------------------------------------------------------
# maximum independent set engine (bitmask branch and bound)


def _mis_size(adj, cand: int) -> int:
    best = 0

    def grow(cand: int, depth: int) -> None:
        nonlocal best
        if depth > best:
            best = depth
        while cand:
            if depth + cand.bit_count() <= best:
                return
            pivot, pivot_deg = -1, -1
            m = cand
            while m:
                low = m & -m
                u = low.bit_length() - 1
                deg = (adj[u] & cand).bit_count()
                if deg > pivot_deg:
                    pivot, pivot_deg = u, deg
                m ^= low
            if pivot_deg == 0:
                # all remaining vertices are pairwise nonadjacent
                best = max(best, depth + cand.bit_count())
                return
            grow(cand & ~adj[pivot] & ~(1 << pivot), depth + 1)
            cand &= ~(1 << pivot)

    grow(cand, 0)
    return best


def _mis_lex_witness(adj, n: int) -> tuple[int, tuple[int, ...]]:
    """Size and the lexicographically least maximum independent set."""
    cand = (1 << n) - 1
    size = _mis_size(adj, cand)
    chosen: list[int] = []
    remaining = size
    while remaining:
        m = cand
        while m:
            low = m & -m
            u = low.bit_length() - 1
            rest = cand & ~adj[u] & ~low
            if _mis_size(adj, rest) == remaining - 1:
                chosen.append(u)
                cand = rest
                remaining -= 1
                break
            m ^= low
    return size, tuple(chosen)


def max_independent_set_bruteforce(g) -> tuple[int, frozenset]:
    """Exact maximum independent set with a deterministic witness.

    Accepts a Graph or a BipartiteGraph (the latter is flattened first).
    Refuses graphs with more than caps.MAX_IS_VERTICES vertices.
    """
    if isinstance(g, BipartiteGraph):
        g = bipartite_to_graph(g)
    if g.vertex_count > caps.MAX_IS_VERTICES:
        raise CapExceeded(
            f"independent-set oracle limited to {caps.MAX_IS_VERTICES} vertices, "
            f"got {g.vertex_count}",
            bound="MAX_IS_VERTICES",
        )
    size, witness = _mis_lex_witness(g._adj, g.vertex_count)
    return size, frozenset(witness)


# ---------------------------------------------------------------------------
# induced / semi-induced matching oracles


def _edge_conflicts_induced(g, edge_list):
    """Conflict masks over edge indices: shared endpoint or a joining g-edge."""
    k = len(edge_list)
    masks = [0] * k
    bip = isinstance(g, BipartiteGraph)
    for i in range(k):
        for j in range(i + 1, k):
            (u_i, w_i), (u_j, w_j) = edge_list[i], edge_list[j]
            if bip:
                clash = u_i == u_j or w_i == w_j or g.has_edge(u_i, w_j) or g.has_edge(u_j, w_i)
            else:
                shared = len({u_i, w_i} & {u_j, w_j}) > 0
                clash = shared or any(
                    g.has_edge(x, y) for x in (u_i, w_i) for y in (u_j, w_j)
                )
            if clash:
                masks[i] |= 1 << j
                masks[j] |= 1 << i
    return masks


def _edge_cap_check(edge_list):
    if len(edge_list) > caps.MAX_IM_EDGES:
        raise CapExceeded(
            f"edge-subset enumeration limited to {caps.MAX_IM_EDGES} edges, "
            f"got {len(edge_list)}",
            bound="MAX_IM_EDGES",
        )


def _im_cap_check(g, edge_list):
    n = g.left_count + g.right_count if isinstance(g, BipartiteGraph) else g.vertex_count
    if n > caps.MAX_IS_VERTICES:
        raise CapExceeded(
            f"induced-matching oracle limited to {caps.MAX_IS_VERTICES} vertices, got {n}",
            bound="MAX_IS_VERTICES",
        )
    _edge_cap_check(edge_list)


def max_induced_matching_bruteforce(g) -> tuple[int, Matching]:
    """Exact maximum induced matching with a lexicographically least witness."""
    edge_list = g.sorted_edges()
    _im_cap_check(g, edge_list)
    masks = _edge_conflicts_induced(g, edge_list)
    size, witness = _mis_lex_witness(masks, len(edge_list))
    m = Matching(edge_list[i] for i in witness)
    assert is_induced_matching(g, m)
    return size, m


def _edge_conflicts_semi(g, edge_list, order: VertexOrder):
    """Conflict masks for a fixed order, per the reading in the module docstring."""
    k = len(edge_list)
    rank = order.ranks
    masks = [0] * k
    bip = isinstance(g, BipartiteGraph)
    for i in range(k):
        for j in range(i + 1, k):
            (u_i, w_i), (u_j, w_j) = edge_list[i], edge_list[j]
            if bip:
                if u_i == u_j or w_i == w_j:
                    clash = True
                elif rank[u_i] < rank[u_j]:
                    clash = g.has_edge(u_i, w_j)
                else:
                    clash = g.has_edge(u_j, w_i)
            else:
                if {u_i, w_i} & {u_j, w_j}:
                    clash = True
                else:
                    m_i = u_i if rank[u_i] < rank[w_i] else w_i
                    m_j = u_j if rank[u_j] < rank[w_j] else w_j
                    if rank[m_i] < rank[m_j]:
                        clash = g.has_edge(m_i, u_j) or g.has_edge(m_i, w_j)
                    else:
                        clash = g.has_edge(m_j, u_i) or g.has_edge(m_j, w_i)
            if clash:
                masks[i] |= 1 << j
                masks[j] |= 1 << i
    return masks


def _order_exists_bipartite(g, chosen_pairs):
    """Is there a left order making chosen_pairs semi-induced?  Returns the
    precedence arcs (a, b) meaning "left a must precede left b", or None."""
    arcs = set()
    for (u, v), (a, b) in combinations(chosen_pairs, 2):
        if g.has_edge(u, b):
            # u may not precede a, so a must come first
            arcs.add((a, u))
        if g.has_edge(a, v):
            arcs.add((u, a))
    return arcs if _acyclic(arcs) else None


def _order_exists_general(g, chosen_pairs):
    """Try every anchoring of the matching edges; return (arcs, anchors) for
    the first acyclic one in canonical order, or None."""
    k = len(chosen_pairs)
    for code in range(1 << k):
        anchored = []
        for idx, (x, y) in enumerate(chosen_pairs):
            lo, hi = (min(x, y), max(x, y))
            if (code >> idx) & 1:
                lo, hi = hi, lo
            anchored.append((lo, hi))
        arcs = set()
        ok = True
        for e_idx in range(k):
            m_e, o_e = anchored[e_idx]
            arcs.add((m_e, o_e))
        for i in range(k):
            for j in range(i + 1, k):
                m_i, o_i = anchored[i]
                m_j, o_j = anchored[j]
                hit_ij = g.has_edge(m_i, m_j) or g.has_edge(m_i, o_j)
                hit_ji = g.has_edge(m_j, m_i) or g.has_edge(m_j, o_i)
                if hit_ij and hit_ji:
                    ok = False
                    break
                if hit_ij:
                    arcs.add((m_j, m_i))
                if hit_ji:
                    arcs.add((m_i, m_j))
            if not ok:
                break
        if ok and _acyclic(arcs):
            return arcs, anchored
    return None


def _acyclic(arcs) -> bool:
    nodes = {x for arc in arcs for x in arc}
    out = {v: set() for v in nodes}
    indeg = {v: 0 for v in nodes}
    for a, b in arcs:
        if b not in out[a]:
            out[a].add(b)
            indeg[b] += 1
    queue = sorted(v for v in nodes if indeg[v] == 0)
    seen = 0
    while queue:
        v = queue.pop(0)
        seen += 1
        for w in sorted(out[v]):
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == len(nodes)


def _topo_order(arcs, all_vertices) -> list[int]:
    """Kahn with min-index tie break, then remaining vertices ascending."""
    nodes = {x for arc in arcs for x in arc}
    out = {v: set() for v in nodes}
    indeg = {v: 0 for v in nodes}
    for a, b in arcs:
        if b not in out[a]:
            out[a].add(b)
            indeg[b] += 1
    import heapq

    heap = [v for v in nodes if indeg[v] == 0]
    heapq.heapify(heap)
    seq = []
    while heap:
        v = heapq.heappop(heap)
        seq.append(v)
        for w in sorted(out[v]):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    placed = set(seq)
    seq.extend(v for v in sorted(all_vertices) if v not in placed)
    return seq


def max_semi_induced_matching_bruteforce(g, order) -> tuple[int, Matching, VertexOrder]:
    """Exact semi-induced matching oracle.

    With a VertexOrder, maximises over matchings for that fixed order.  With
    order=ALL_ORDERS ("all"), maximises over every order as well; this mode
    is capped at caps.MAX_ALL_ORDER_VERTICES vertices.  Returns
    (size, matching, order); in "all" mode the returned order is a witness
    achieving the maximum.
    """
    edge_list = g.sorted_edges()
    if isinstance(order, VertexOrder):
        # Fixed-order mode enumerates edge subsets, so only the edge cap
        # applies; vertex count is irrelevant to the search space.
        _edge_cap_check(edge_list)
        masks = _edge_conflicts_semi(g, edge_list, order)
        size, witness = _mis_lex_witness(masks, len(edge_list))
        m = Matching(edge_list[i] for i in witness)
        assert is_semi_induced_matching(g, order, m)
        return size, m, order
    if order != ALL_ORDERS:
        raise InputError("order must be a VertexOrder or the string 'all'")
    n = g.left_count + g.right_count if isinstance(g, BipartiteGraph) else g.vertex_count
    if n > caps.MAX_ALL_ORDER_VERTICES:
        raise CapExceeded(
            f"all-orders mode limited to {caps.MAX_ALL_ORDER_VERTICES} vertices, got {n}",
            bound="MAX_ALL_ORDER_VERTICES",
        )
    bip = isinstance(g, BipartiteGraph)

    best_pairs: list[tuple[int, int]] = []

    def feasible(pairs) -> bool:
        if bip:
            return _order_exists_bipartite(g, pairs) is not None
        return _order_exists_general(g, pairs) is not None

    # Straightforward recursive enumeration in lexicographic edge order.
    # Adding an edge only adds order constraints, so an infeasible prefix
    # can be pruned: none of its extensions can become feasible.
    def enumerate_from(start: int, pairs: list, used_left: set, used_right: set) -> None:
        nonlocal best_pairs
        if len(pairs) > len(best_pairs):
            best_pairs = list(pairs)
        for i in range(start, len(edge_list)):
            u, w = edge_list[i]
            if bip:
                if u in used_left or w in used_right:
                    continue
            else:
                if u in used_left or w in used_left:
                    continue
            pairs.append((u, w))
            if feasible(pairs):
                if bip:
                    used_left.add(u)
                    used_right.add(w)
                    enumerate_from(i + 1, pairs, used_left, used_right)
                    used_left.discard(u)
                    used_right.discard(w)
                else:
                    used_left.add(u)
                    used_left.add(w)
                    enumerate_from(i + 1, pairs, used_left, used_right)
                    used_left.discard(u)
                    used_left.discard(w)
            pairs.pop()

    enumerate_from(0, [], set(), set())

    m = Matching(best_pairs)
    if bip:
        arcs = _order_exists_bipartite(g, best_pairs)
        seq = _topo_order(arcs, range(g.left_count))
        witness_order = VertexOrder.from_sequence(seq)
    else:
        found = _order_exists_general(g, best_pairs)
        arcs, _anchored = found
        seq = _topo_order(arcs, range(g.vertex_count))
        witness_order = VertexOrder.from_sequence(seq)
    assert is_semi_induced_matching(g, witness_order, m)
    return len(best_pairs), m, witness_order


def max_expanding_sequence(bg: BipartiteGraph, cutoff: int) -> int:
    """Largest k (capped at cutoff) such that bg has disjoint edges
    (u_1, v_1), ..., (u_k, v_k) with u_i nonadjacent to v_j whenever i < j.

    This equals the maximum over every left order of the semi-induced
    matching number, truncated at cutoff: ordering the matching by the rank
    of the left endpoints turns the order condition into exactly the
    sequence condition.  Memoised on (used lefts, available rights).
    """
    edge_list = bg.sorted_edges()
    if cutoff <= 0:
        return 0
    full_right = (1 << bg.right_count) - 1
    best = 0
    memo: dict[tuple[int, int], int] = {}

    def rec(used_left: int, avail_right: int, depth: int) -> None:
        nonlocal best
        if depth > best:
            best = depth
        if best >= cutoff:
            return
        key = (used_left, avail_right)
        prior = memo.get(key)
        if prior is not None and prior >= depth:
            return
        memo[key] = depth
        for u, v in edge_list:
            if (used_left >> u) & 1:
                continue
            if not (avail_right >> v) & 1:
                continue
            rec(
                used_left | (1 << u),
                avail_right & ~bg.left_mask(u) & ~(1 << v),
                depth + 1,
            )
            if best >= cutoff:
                return

    rec(0, full_right, 0)
    return best


def max_expanding_sequence_fixed(bg: BipartiteGraph, order: VertexOrder, cutoff: int) -> int:
    """Semi-induced matching number of bg for one fixed left order.

    Matches max_semi_induced_matching_bruteforce(bg, order)[0] but runs a
    memoised scan of the lefts in rank order instead of enumerating edge
    subsets.  Picking left u constrains every later right to avoid N(u)
    regardless of which right u is matched to, so the state is just
    (position, still-allowed rights) and values can be truncated at cutoff.
    """
    if len(order) != bg.left_count:
        raise InputError(
            f"order ranks {len(order)} vertices, graph has {bg.left_count} lefts"
        )
    if cutoff <= 0:
        return 0
    seq = order.sequence()
    total = len(seq)
    memo: dict[tuple[int, int], int] = {}

    def best(i: int, avail: int) -> int:
        if i == total or not avail:
            return 0
        key = (i, avail)
        cached = memo.get(key)
        if cached is not None:
            return cached
        value = best(i + 1, avail)
        if value < cutoff:
            options = bg.left_mask(seq[i]) & avail
            if options:
                take = 1 + best(i + 1, avail & ~bg.left_mask(seq[i]))
                value = max(value, min(take, cutoff))
        memo[key] = value
        return value

    return best(0, (1 << bg.right_count) - 1)


# ---------------------------------------------------------------------------
# double covers and balanced independence


def bipartite_double_cover(g: Graph, include_same_vertex_edges: bool = False) -> BipartiteGraph:
    """Two copies of V(g); (u, 1)(w, 2) is an edge iff uw is an edge of g.

    With include_same_vertex_edges=True the pairs (u, 1)(u, 2) are added as
    well; they are what lets an independent set reappear as a matching of
    the cover.
    """
    edges = []
    for u, w in g.edges:
        edges.append((u, w))
        edges.append((w, u))
    if include_same_vertex_edges:
        edges.extend((u, u) for u in range(g.vertex_count))
    return BipartiteGraph(g.vertex_count, g.vertex_count, edges)


def bipartite_to_graph(bg: BipartiteGraph) -> Graph:
    """Flatten: lefts keep their ids, right w becomes left_count + w."""
    off = bg.left_count
    return Graph(bg.left_count + bg.right_count, [(u, off + w) for u, w in bg.edges])


def balanced_bipartite_independence_bruteforce(bg: BipartiteGraph) -> int:
    """Largest k with k lefts and k rights spanning no edge at all."""
    n = bg.left_count + bg.right_count
    if n > caps.MAX_BBIS_VERTICES:
        raise CapExceeded(
            f"balanced-independence oracle limited to {caps.MAX_BBIS_VERTICES} vertices, got {n}",
            bound="MAX_BBIS_VERTICES",
        )
    full_right = (1 << bg.right_count) - 1
    for k in range(min(bg.left_count, bg.right_count), 0, -1):
        for lefts in combinations(range(bg.left_count), k):
            covered = 0
            for u in lefts:
                covered |= bg.left_mask(u)
            if (full_right & ~covered).bit_count() >= k:
                return k
    return 0


# ---------------------------------------------------------------------------
# seeded generators (used by the CLI and the verification suite)


def random_graph(n: int, edge_probability: float, seed: int) -> Graph:
    rng = random.Random(seed)
    edges = [
        (u, w)
        for u in range(n)
        for w in range(u + 1, n)
        if rng.random() < edge_probability
    ]
    return Graph(n, edges)


def random_bipartite(left: int, right: int, edge_probability: float, seed: int) -> BipartiteGraph:
    rng = random.Random(seed)
    edges = [
        (u, w)
        for u in range(left)
        for w in range(right)
        if rng.random() < edge_probability
    ]
    return BipartiteGraph(left, right, edges)
