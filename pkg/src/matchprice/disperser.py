"""Randomized (d, gamma)-dispersers: construction, verification, property checks.

A (d, gamma)-disperser is an n x n bipartite graph of maximum degree at most
d in which every pair of subsets X (left) and Y (right), each of size
ceil(gamma*n), spans at least one edge.  Equivalently: for every X of that
size, fewer than ceil(gamma*n) right vertices are uncovered by X; that is the
form verify_disperser checks, enumerating only single subsets.

Two structural consequences are checked by check_disperser_lemma: every
independent set S of a verified disperser has min(|S cap left|, |S cap right|)
at most gamma*n, and the bipartite double cover of the disperser (viewed as a
plain graph) has no semi-induced matching larger than 4*gamma*n under any
left order.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
import math
import random

from . import caps
from .errors import CapExceeded, InputError
from .graphs import (
    BipartiteGraph,
    VertexOrder,
    balanced_bipartite_independence_bruteforce,
    bipartite_double_cover,
    bipartite_to_graph,
    max_expanding_sequence,
    max_expanding_sequence_fixed,
)


def _as_gamma(gamma) -> Fraction:
    try:
        value = Fraction(gamma)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"gamma must be a rational number, got {gamma!r}") from None
    if not 0 < value < 1:
        raise InputError(f"gamma must lie strictly between 0 and 1, got {value}")
    return value


@dataclass(frozen=True)
class DisperserParams:
    """Side size n, degree d, and density parameter gamma in (0, 1)."""

    n: int
    d: int
    gamma: Fraction

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"side size must be positive, got {self.n}")
        if not 1 <= self.d <= self.n:
            raise InputError(f"degree must satisfy 1 <= d <= n, got d={self.d}, n={self.n}")
        object.__setattr__(self, "gamma", _as_gamma(self.gamma))

    @property
    def subset_size(self) -> int:
        """ceil(gamma * n); the subset size the disperser property quantifies over."""
        return math.ceil(self.gamma * self.n)


class DisperserGraph(BipartiteGraph):
    """Bipartite graph that remembers the degree it was sampled for.

    Parallel edges of the d sampled matchings merge, so actual degrees can
    fall below the target; target_degree records the d that was requested.
    """

    __slots__ = ("target_degree",)

    def __init__(self, left_count, right_count, edges, target_degree):
        super().__init__(left_count, right_count, edges)
        self.target_degree = int(target_degree)

    def to_json(self) -> dict:
        obj = super().to_json()
        obj["target_degree"] = self.target_degree
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "DisperserGraph":
        try:
            return cls(
                obj["left"],
                obj["right"],
                [tuple(e) for e in obj["edges"]],
                obj["target_degree"],
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad disperser json: {exc}") from None

    def __repr__(self):
        return (
            f"DisperserGraph({self.left_count}x{self.right_count}, "
            f"m={len(self.edges)}, d={self.target_degree})"
        )


def suggest_degree(gamma, base: float = math.e) -> int:
    """Degree ceil((3/gamma) * log(1/gamma)) for a target gamma.

    The logarithm base defaults to e; pass base=2 for the binary reading.
    """
    gamma = _as_gamma(gamma)
    return math.ceil((3 / gamma) * math.log(1 / gamma, base))


def random_disperser(n: int, d: int, seed: int) -> DisperserGraph:
    """Union of d uniform random perfect matchings on sides of size n.

    Parallel edges merge, so every vertex ends with degree <= d.  The same
    seed reproduces the identical edge set.
    """
    if n < 1:
        raise InputError(f"side size must be positive, got {n}")
    if not 1 <= d <= n:
        raise InputError(f"degree must satisfy 1 <= d <= n, got d={d}, n={n}")
    rng = random.Random(seed)
    edges = []
    for _ in range(d):
        partner = list(range(n))
        rng.shuffle(partner)
        edges.extend((u, partner[u]) for u in range(n))
    return DisperserGraph(n, n, edges, target_degree=d)


def verify_disperser(g: BipartiteGraph, gamma):
    """Check the disperser property by enumerating left subsets.

    Returns (True, None) or (False, (X, Y)) where X is the lexicographically
    first subset of size k = ceil(gamma*n) whose uncovered right set has size
    >= k, and Y lists the first k uncovered right vertices.
    """
    gamma = _as_gamma(gamma)
    if g.left_count != g.right_count:
        raise InputError(
            f"disperser must have equal sides, got {g.left_count}x{g.right_count}"
        )
    n = g.left_count
    k = math.ceil(gamma * n)
    budget = math.comb(n, k)
    if budget > caps.MAX_VERIFY_SUBSETS:
        raise CapExceeded(
            f"verification would enumerate C({n},{k}) = {budget} subsets, "
            f"limit is {caps.MAX_VERIFY_SUBSETS}",
            bound="MAX_VERIFY_SUBSETS",
        )
    full_right = (1 << n) - 1
    for lefts in combinations(range(n), k):
        covered = 0
        for u in lefts:
            covered |= g.left_mask(u)
        uncovered = full_right & ~covered
        if uncovered.bit_count() >= k:
            rights = [w for w in range(n) if (uncovered >> w) & 1][:k]
            return False, (lefts, tuple(rights))
    return True, None


def check_disperser_lemma(g: BipartiteGraph, gamma, seed: int = 0, samples: int = 50) -> dict:
    """Brute-force the two structural consequences of the disperser property.

    (a) Every independent set has at most gamma*n vertices on its smaller
        side (the balanced-independence number is <= gamma*n).
    (b) The double cover of the disperser-as-graph admits no semi-induced
        matching larger than 4*gamma*n.  Exact over all left orders when
        n <= caps.MAX_LEMMA_EXACT_SIDE, otherwise the maximum over `samples`
        random orders drawn from random.Random(seed).

    The input must pass verify_disperser first; a failing graph is refused.
    Returns a report dict with both values, bounds, and ok flags.
    """
    gamma = _as_gamma(gamma)
    n = g.left_count
    total = g.left_count + g.right_count
    if total > caps.MAX_LEMMA_VERTICES:
        raise CapExceeded(
            f"lemma check limited to {caps.MAX_LEMMA_VERTICES} vertices, got {total}",
            bound="MAX_LEMMA_VERTICES",
        )
    ok, violation = verify_disperser(g, gamma)
    if not ok:
        raise InputError(
            f"graph is not a disperser for gamma={gamma}: "
            f"left subset {violation[0]} misses right vertices {violation[1]}"
        )

    bbis = balanced_bipartite_independence_bruteforce(g)
    independence_bound = gamma * n
    independence_ok = bbis <= independence_bound

    cover = bipartite_double_cover(bipartite_to_graph(g))
    sim_bound = 4 * gamma * n
    sim_cutoff = math.floor(sim_bound) + 1
    if n <= caps.MAX_LEMMA_EXACT_SIDE:
        sim_mode = "exact"
        sim_samples = None
        sim_value = max_expanding_sequence(cover, cutoff=sim_cutoff)
    else:
        sim_mode = "sampled"
        sim_samples = samples
        rng = random.Random(seed)
        sim_value = 0
        for _ in range(samples):
            perm = list(range(cover.left_count))
            rng.shuffle(perm)
            order = VertexOrder.from_sequence(perm)
            size = max_expanding_sequence_fixed(cover, order, cutoff=sim_cutoff)
            sim_value = max(sim_value, size)
    sim_ok = sim_value <= sim_bound

    return {
        "n": n,
        "gamma": gamma,
        "max_degree": g.max_degree(),
        "target_degree": getattr(g, "target_degree", None),
        "balanced_independence": bbis,
        "independence_bound": independence_bound,
        "independence_ok": independence_ok,
        "sim_value": sim_value,
        "sim_bound": sim_bound,
        "sim_cutoff": sim_cutoff,
        "sim_mode": sim_mode,
        "sim_samples": sim_samples,
        "sim_ok": sim_ok,
        "ok": independence_ok and sim_ok,
    }
