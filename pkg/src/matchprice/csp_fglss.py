"""Boolean CSP instances, exhaustive satisfaction counting, clause-product
amplification, the FGLSS conflict graph, and disperser-based sparsification
of conflict edges.

A clause is an ordered tuple of distinct variables plus the set of local
assignments (pattern strings over that order) that satisfy it.  The FGLSS
graph has one vertex per (clause, satisfying pattern) pair; vertices of the
same clause are pairwise adjacent (two patterns of one clause are mutually
exclusive choices even when they conflict on no variable), and vertices of
different clauses are adjacent iff they disagree on a shared variable.
Independent sets of this graph are consistent ways of satisfying a clause
set, so the independence number equals the maximum number of simultaneously
satisfiable clauses.

Sparsification replaces, per variable, the complete disagreement pattern
between the vertices setting it to 1 and those setting it to 0 with the
edges of a supplied bipartite graph (intended: a disperser).  The replaced
edge set is a subset of the original one, so independence numbers never
decrease.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

from . import caps
from .errors import CapExceeded, InputError
from .graphs import BipartiteGraph, Graph


@dataclass(frozen=True)
class Clause:
    variables: tuple[int, ...]
    satisfying: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "satisfying", frozenset(self.satisfying))
        if len(set(self.variables)) != len(self.variables):
            raise InputError(f"clause variables {self.variables} are not distinct")
        for v in self.variables:
            if not isinstance(v, int) or v < 0:
                raise InputError(f"bad variable {v!r}")
        a = len(self.variables)
        for pat in self.satisfying:
            if len(pat) != a or any(ch not in "01" for ch in pat):
                raise InputError(f"pattern {pat!r} does not fit arity {a}")

    @property
    def arity(self) -> int:
        return len(self.variables)

    def sorted_patterns(self) -> list[str]:
        return sorted(self.satisfying)

    def is_satisfied_by(self, assignment) -> bool:
        pat = "".join(str(assignment[v]) for v in self.variables)
        return pat in self.satisfying


class CspInstance:
    __slots__ = ("num_vars", "clauses")

    def __init__(self, num_vars: int, clauses):
        if num_vars < 0:
            raise InputError("num_vars must be nonnegative")
        self.num_vars = num_vars
        self.clauses = tuple(clauses)
        for c in self.clauses:
            if not isinstance(c, Clause):
                raise InputError("clauses must be Clause objects")
            for v in c.variables:
                if v >= num_vars:
                    raise InputError(f"variable {v} out of range for num_vars={num_vars}")

    def __eq__(self, other):
        return (
            isinstance(other, CspInstance)
            and self.num_vars == other.num_vars
            and self.clauses == other.clauses
        )

    def __repr__(self):
        return f"CspInstance(num_vars={self.num_vars}, clauses={len(self.clauses)})"

    def max_arity(self) -> int:
        return max((c.arity for c in self.clauses), default=0)

    def occurrences(self, variable: int) -> int:
        return sum(1 for c in self.clauses if variable in c.variables)

    def to_json(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "clauses": [
                {"vars": list(c.variables), "satisfying": c.sorted_patterns()}
                for c in self.clauses
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CspInstance":
        try:
            clauses = [
                Clause(tuple(c["vars"]), frozenset(c["satisfying"])) for c in obj["clauses"]
            ]
            return cls(obj["num_vars"], clauses)
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad csp json: {exc}") from None


def check_assignment(instance: CspInstance, assignment) -> tuple[int, ...]:
    assignment = tuple(assignment)
    if len(assignment) != instance.num_vars:
        raise InputError(
            f"assignment length {len(assignment)} != num_vars {instance.num_vars}"
        )
    if any(b not in (0, 1) for b in assignment):
        raise InputError("assignment entries must be 0 or 1")
    return assignment


def evaluate(instance: CspInstance, assignment) -> int:
    """Number of clauses the assignment satisfies."""
    assignment = check_assignment(instance, assignment)
    return sum(1 for c in instance.clauses if c.is_satisfied_by(assignment))


def max_sat_bruteforce(instance: CspInstance) -> tuple[int, tuple[int, ...]]:
    """Exact maximum satisfiable clause count and the lexicographically
    least optimal assignment.  Capped at caps.MAX_SAT_VARS variables."""
    if instance.num_vars > caps.MAX_SAT_VARS:
        raise CapExceeded(
            f"assignment enumeration limited to {caps.MAX_SAT_VARS} variables, "
            f"got {instance.num_vars}",
            bound="MAX_SAT_VARS",
        )
    best = -1
    best_assignment: tuple[int, ...] = ()
    for bits in product((0, 1), repeat=instance.num_vars):
        score = sum(1 for c in instance.clauses if c.is_satisfied_by(bits))
        if score > best:
            best = score
            best_assignment = bits
    return best, best_assignment


def is_balanced(instance: CspInstance) -> bool:
    """True iff for every variable, the (clause, pattern) pairs setting it
    to 1 are exactly as many as those setting it to 0."""
    for variable in range(instance.num_vars):
        ones = zeros = 0
        for c in instance.clauses:
            if variable not in c.variables:
                continue
            pos = c.variables.index(variable)
            for pat in c.satisfying:
                if pat[pos] == "1":
                    ones += 1
                else:
                    zeros += 1
        if ones != zeros:
            return False
    return True


# ---------------------------------------------------------------------------
# generators and transformations


def random_csp(num_vars: int, num_clauses: int, arity: int, seed: int) -> CspInstance:
    """Clauses over sorted random variable tuples with a uniformly random
    nonempty satisfying set."""
    if not (1 <= arity <= num_vars):
        raise InputError(f"arity {arity} out of range for {num_vars} variables")
    rng = random.Random(seed)
    patterns = ["".join(bits) for bits in product("01", repeat=arity)]
    clauses = []
    for _ in range(num_clauses):
        variables = tuple(sorted(rng.sample(range(num_vars), arity)))
        while True:
            chosen = frozenset(p for p in patterns if rng.random() < 0.5)
            if chosen:
                break
        clauses.append(Clause(variables, chosen))
    return CspInstance(num_vars, clauses)


def random_balanced_csp(num_vars: int, num_clauses: int, arity: int, seed: int) -> CspInstance:
    """Random parity constraints: each clause fixes the XOR of its variables
    to a random bit, so every variable is set to 1 by exactly half of each
    clause's satisfying patterns.

    Arity must be even: products of even-size parity constraints can never
    pin a single variable to a constant, so instances built here stay
    balanced through gap_amplify as well.
    """
    if not (2 <= arity <= num_vars):
        raise InputError(f"arity {arity} out of range for {num_vars} variables")
    if arity % 2 != 0:
        raise InputError(f"arity must be even for balanced generation, got {arity}")
    rng = random.Random(seed)
    clauses = []
    for _ in range(num_clauses):
        variables = tuple(sorted(rng.sample(range(num_vars), arity)))
        target = rng.randrange(2)
        satisfying = frozenset(
            "".join(bits)
            for bits in product("01", repeat=arity)
            if sum(b == "1" for b in bits) % 2 == target
        )
        clauses.append(Clause(variables, satisfying))
    return CspInstance(num_vars, clauses)


def duplicate_clauses(instance: CspInstance, copies: int) -> CspInstance:
    """Each clause repeated `copies` times, copies adjacent."""
    if copies < 1:
        raise InputError(f"copy count must be at least 1, got {copies}")
    clauses = [c for c in instance.clauses for _ in range(copies)]
    return CspInstance(instance.num_vars, clauses)


def gap_amplify(instance: CspInstance, t: int, m_out: int, seed: int) -> CspInstance:
    """Clause products: every output clause is the AND of t input clauses
    sampled independently, uniformly, with replacement.

    Output clause j uses its own generator Random(seed ^ j), so clauses are
    reproducible individually and construction order does not matter.
    Merged variables keep first-occurrence order; the satisfying set is
    every assignment of the merged variables satisfying all t constituents
    (possibly empty, if the constituents contradict).
    """
    if t < 1:
        raise InputError(f"product width t must be at least 1, got {t}")
    if m_out < 1:
        raise InputError(f"output clause count must be at least 1, got {m_out}")
    if not instance.clauses:
        raise InputError("cannot amplify an instance with no clauses")
    out = []
    for j in range(m_out):
        rng = random.Random(seed ^ j)
        parts = [instance.clauses[rng.randrange(len(instance.clauses))] for _ in range(t)]
        merged: list[int] = []
        for c in parts:
            for v in c.variables:
                if v not in merged:
                    merged.append(v)
        if len(merged) > caps.MAX_SAT_VARS:
            raise CapExceeded(
                f"merged clause has {len(merged)} variables, "
                f"pattern enumeration limited to {caps.MAX_SAT_VARS}",
                bound="MAX_SAT_VARS",
            )
        position = {v: i for i, v in enumerate(merged)}
        satisfying = []
        for bits in product("01", repeat=len(merged)):
            ok = True
            for c in parts:
                local = "".join(bits[position[v]] for v in c.variables)
                if local not in c.satisfying:
                    ok = False
                    break
            if ok:
                satisfying.append("".join(bits))
        out.append(Clause(tuple(merged), frozenset(satisfying)))
    return CspInstance(instance.num_vars, out)


# ---------------------------------------------------------------------------
# FGLSS conflict graph


def fglss_build(instance: CspInstance) -> tuple[Graph, tuple[tuple[int, str], ...]]:
    """Conflict graph plus vertex labels (clause_index, pattern), sorted by
    that pair.  Vertex count = sum of satisfying-set sizes, capped at
    caps.MAX_FGLSS_VERTICES."""
    labels = []
    for ci, clause in enumerate(instance.clauses):
        for pat in clause.sorted_patterns():
            labels.append((ci, pat))
    if len(labels) > caps.MAX_FGLSS_VERTICES:
        raise CapExceeded(
            f"conflict graph would have {len(labels)} vertices, "
            f"limit is {caps.MAX_FGLSS_VERTICES}",
            bound="MAX_FGLSS_VERTICES",
        )
    edges = []
    for a in range(len(labels)):
        ca, pa = labels[a]
        for b in range(a + 1, len(labels)):
            cb, pb = labels[b]
            if ca == cb:
                edges.append((a, b))
            elif _conflict(instance.clauses[ca], pa, instance.clauses[cb], pb):
                edges.append((a, b))
    return Graph(len(labels), edges), tuple(labels)


def _conflict(clause_a: Clause, pat_a: str, clause_b: Clause, pat_b: str) -> bool:
    for i, v in enumerate(clause_a.variables):
        if v in clause_b.variables:
            if pat_a[i] != pat_b[clause_b.variables.index(v)]:
                return True
    return False


def vertex_value(labels, instance: CspInstance, vertex: int, variable: int) -> int | None:
    """The value the vertex's pattern gives the variable, or None if the
    vertex's clause does not contain it."""
    ci, pat = labels[vertex]
    clause = instance.clauses[ci]
    if variable not in clause.variables:
        return None
    return int(pat[clause.variables.index(variable)])


def variable_sides(labels, instance: CspInstance, variable: int) -> tuple[list[int], list[int]]:
    """(ones, zeros): vertices whose pattern sets the variable to 1 / 0,
    each list ascending."""
    ones, zeros = [], []
    for v in range(len(labels)):
        val = vertex_value(labels, instance, v, variable)
        if val == 1:
            ones.append(v)
        elif val == 0:
            zeros.append(v)
    return ones, zeros


def cross_clause_degrees(graph: Graph, labels) -> list[int]:
    """Per-vertex count of edges whose endpoints lie in different clauses."""
    labels = list(labels)
    out = [0] * graph.vertex_count
    for u, w in graph.edges:
        if labels[u][0] != labels[w][0]:
            out[u] += 1
            out[w] += 1
    return out


def disperser_replace(g: Graph, labels, instance: CspInstance, disperser_supplier) -> Graph:
    """Sparsify disagreement edges variable by variable.

    For every variable that occurs in some satisfying pattern, the vertices
    setting it to 1 (ascending) form a left side and those setting it to 0
    (ascending) a right side; both sides must have equal size, else an input
    error names the variable.  disperser_supplier(size) is called once per
    such variable, in ascending variable order, and must return a
    BipartiteGraph with both sides of that size; its edges are the
    disagreement edges kept for that variable.  Same-clause edges always
    stay.

    The output is computed from the instance's disagreement structure, so
    pass the graph and labels exactly as produced by fglss_build.  Every
    kept edge is an edge of the full conflict graph, hence the independence
    number never decreases.
    """
    labels = tuple(labels)
    if len(labels) != g.vertex_count:
        raise InputError("label count does not match vertex count")
    n = g.vertex_count
    edges = set()
    for u in range(n):
        for w in range(u + 1, n):
            if labels[u][0] == labels[w][0]:
                edges.add((u, w))

    kept_pairs: dict[int, set[tuple[int, int]]] = {}
    for variable in range(instance.num_vars):
        ones, zeros = variable_sides(labels, instance, variable)
        if not ones and not zeros:
            continue
        if len(ones) != len(zeros):
            raise InputError(
                f"variable {variable} is unbalanced: {len(ones)} ones vs {len(zeros)} zeros"
            )
        disp = disperser_supplier(len(ones))
        if not isinstance(disp, BipartiteGraph):
            raise InputError(
                f"supplier returned {type(disp).__name__} for variable {variable}"
            )
        if disp.left_count != len(ones) or disp.right_count != len(zeros):
            raise InputError(
                f"variable {variable}: sides {len(ones)}x{len(zeros)} do not match "
                f"supplied graph {disp.left_count}x{disp.right_count}"
            )
        pairs = set()
        for i, j in disp.edges:
            a, b = ones[i], zeros[j]
            pairs.add((min(a, b), max(a, b)))
        kept_pairs[variable] = pairs

    for u in range(n):
        cu, pu = labels[u]
        vars_u = instance.clauses[cu].variables
        for w in range(u + 1, n):
            cw, pw = labels[w]
            if cu == cw:
                continue
            vars_w = instance.clauses[cw].variables
            for i, v in enumerate(vars_u):
                if v not in vars_w:
                    continue
                if pu[i] == pw[vars_w.index(v)]:
                    continue
                # u and w disagree on v; kept only if the supplied graph says so
                if (u, w) in kept_pairs[v]:
                    edges.add((u, w))
                    break
    return Graph(n, sorted(edges))
