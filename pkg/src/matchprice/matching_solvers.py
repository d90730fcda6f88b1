"""Induced matching solvers: an exact bipartite routine that is practical
well past the generic oracle caps, and r-block approximation algorithms for
both graph kinds.

The exact routine rests on a good-neighbour characterisation: a left set U'
is saturated by some induced matching iff every u in U' has a neighbour
adjacent to no other member of U'.  Such sets are downward closed, so a
depth-first scan over subsets of the smaller side can prune the moment a
partial set loses the property.

The approximation algorithms split one side (bipartite: the smaller side;
general: all vertices) into r round-robin residue classes and solve each
class exactly.  Any induced matching spreads its edges over the classes, so
the best class carries at least ceil(opt / r) of them, and the sum of the
class optima is at least opt.
"""

from __future__ import annotations

from . import caps
from .errors import CapExceeded, InputError
from .graphs import BipartiteGraph, Graph, Matching, is_induced_matching


def bit_indices(mask: int):
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def round_robin_blocks(n: int, r: int) -> list[list[int]]:
    """Residue classes {v < n : v mod r == b} for b = 0..r-1."""
    if r < 1:
        raise InputError(f"block count must be at least 1, got {r}")
    return [list(range(b, n, r)) for b in range(r)]


# ---------------------------------------------------------------------------
# exact bipartite solver


def _scan_side_maximum(masks: list[int]) -> list[int]:
    """Largest subset S of indices such that every i in S has a bit of
    masks[i] outside the union of the other chosen masks; among maximum
    subsets, the lexicographically least.  Masks may be arbitrarily wide."""
    n = len(masks)
    best: list[int] = []

    def rec(start: int, chosen: list[int], privates: list[int], union_mask: int) -> None:
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        for i in range(start, n):
            if len(chosen) + (n - i) <= len(best):
                break
            m = masks[i]
            fresh = m & ~union_mask
            if not fresh:
                continue
            shrunk = []
            alive = True
            for p in privates:
                q = p & ~m
                if not q:
                    alive = False
                    break
                shrunk.append(q)
            if not alive:
                continue
            chosen.append(i)
            shrunk.append(fresh)
            rec(i + 1, chosen, shrunk, union_mask | m)
            chosen.pop()

    rec(0, [], [], 0)
    return best


def exact_bipartite_induced_matching(bg: BipartiteGraph) -> tuple[int, Matching]:
    """Maximum induced matching of a bipartite graph.

    Scans subsets of the smaller side; every chosen vertex is then matched
    to its least-index good neighbour (a neighbour no other chosen vertex
    touches), which is exactly the condition for the subset to be saturated
    by an induced matching.  The scanned side must be at most
    caps.MAX_EXACT_SIDE vertices; the other side is unlimited.
    """
    flipped = bg.right_count < bg.left_count
    work = bg.transpose() if flipped else bg
    if work.left_count > caps.MAX_EXACT_SIDE:
        raise CapExceeded(
            f"exact solver scans min(left, right) = {work.left_count} vertices, "
            f"limit is {caps.MAX_EXACT_SIDE}",
            bound="MAX_EXACT_SIDE",
        )
    masks = [work.left_mask(u) for u in range(work.left_count)]
    chosen = _scan_side_maximum(masks)
    pairs = []
    for i in chosen:
        others = 0
        for j in chosen:
            if j != i:
                others |= masks[j]
        private = masks[i] & ~others
        v = (private & -private).bit_length() - 1
        pairs.append((v, i) if flipped else (i, v))
    m = Matching(sorted(pairs))
    assert is_induced_matching(bg, m)
    return len(pairs), m


# ---------------------------------------------------------------------------
# r-block approximations


def block_optima_bipartite(bg: BipartiteGraph, r: int) -> list[tuple[int, Matching]]:
    """Exact induced matching optimum of every residue-class subgraph
    G[U_b + W], U_b over the smaller side, as (size, matching in bg)."""
    flipped = bg.right_count < bg.left_count
    work = bg.transpose() if flipped else bg
    out = []
    for lefts in round_robin_blocks(work.left_count, r):
        sub_edges = [
            (i, w) for i, u in enumerate(lefts) for w in bit_indices(work.left_mask(u))
        ]
        sub = BipartiteGraph(len(lefts), work.right_count, sub_edges)
        size, sub_m = exact_bipartite_induced_matching(sub)
        if flipped:
            mapped = Matching(sorted((w, lefts[i]) for i, w in sub_m))
        else:
            mapped = Matching(sorted((lefts[i], w) for i, w in sub_m))
        assert is_induced_matching(bg, mapped)
        out.append((size, mapped))
    return out


def approx_induced_matching_bipartite(bg: BipartiteGraph, r: int) -> tuple[int, Matching]:
    """Best residue class of block_optima_bipartite: an induced matching of
    size at least ceil(im(bg) / r).  Ties go to the lowest class index."""
    best_size = 0
    best_m = Matching([])
    for size, m in block_optima_bipartite(bg, r):
        if size > best_size:
            best_size, best_m = size, m
    return best_size, best_m


def _pairwise_compatible(g: Graph, e: tuple[int, int], f: tuple[int, int]) -> bool:
    a, b = e
    c, d = f
    if len({a, b, c, d}) < 4:
        return False
    return not (
        g.has_edge(a, c) or g.has_edge(a, d) or g.has_edge(b, c) or g.has_edge(b, d)
    )


def _solve_block_general(g: Graph, block: list[int]) -> tuple[int, list[tuple[int, int]]]:
    """Largest induced matching selectable as "one incident edge or nothing"
    per block vertex.  Work bound: product of (choices + 1) per vertex."""
    in_block = set(block)
    choices: list[list[tuple[int, int]]] = []
    work = 1
    for v in block:
        opts = []
        for w in bit_indices(g.adjacency_mask(v)):
            if w in in_block and w < v:
                continue  # an edge inside the class belongs to its smaller endpoint
            opts.append((min(v, w), max(v, w)))
        opts.sort()
        choices.append(opts)
        work *= len(opts) + 1
    if work > caps.MAX_BLOCK_WORK:
        raise CapExceeded(
            f"class search space {work} exceeds {caps.MAX_BLOCK_WORK}",
            bound="MAX_BLOCK_WORK",
        )

    best_size = 0
    best_edges: list[tuple[int, int]] = []
    chosen: list[tuple[int, int]] = []

    def rec(idx: int) -> None:
        nonlocal best_size, best_edges
        if len(chosen) > best_size:
            best_size = len(chosen)
            best_edges = list(chosen)
        if idx == len(choices) or len(chosen) + (len(choices) - idx) <= best_size:
            return
        for e in choices[idx]:
            if all(_pairwise_compatible(g, e, f) for f in chosen):
                chosen.append(e)
                rec(idx + 1)
                chosen.pop()
        rec(idx + 1)

    rec(0)
    return best_size, best_edges


def block_optima_general(g: Graph, r: int) -> list[tuple[int, Matching]]:
    """Per-residue-class optimum of the one-incident-edge search, each
    validated as an induced matching of g."""
    out = []
    for block in round_robin_blocks(g.vertex_count, r):
        size, edges = _solve_block_general(g, block)
        m = Matching(sorted(edges))
        assert is_induced_matching(g, m)
        out.append((size, m))
    return out


def approx_induced_matching_general(g: Graph, r: int) -> tuple[int, Matching]:
    """Best residue class of block_optima_general: an induced matching of
    size at least ceil(im(g) / r).  Ties go to the lowest class index."""
    best_size = 0
    best_m = Matching([])
    for size, m in block_optima_general(g, r):
        if size > best_size:
            best_size, best_m = size, m
    return best_size, best_m
