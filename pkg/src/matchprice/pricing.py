"""Item pricing with weighted consumer groups: evaluation, oracles, algorithms.

Two buying rules share one instance model.  Under UDP a group buys the
cheapest item of its bundle when that price fits the budget; under SMP it
buys the whole bundle when the bundle sum fits.  A group stands for
`multiplicity` identical consumers, so payments scale by multiplicity; this
keeps instances small even when a construction wants astronomically many
duplicate consumers.

All money is fractions.Fraction.  The INF sentinel ("never sold") is legal
only under UDP.  Every algorithm returns (revenue, PriceFunction) with the
revenue exactly equal to evaluate_revenue of the returned prices.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
import math

from . import caps, ratlp
from .errors import CapExceeded, InputError
from .rationals import INF, format_price, format_rational, is_infinite, parse_price, parse_rational

UDP = "udp"
SMP = "smp"
RULES = (UDP, SMP)

ZERO = Fraction(0)


def check_rule(rule) -> str:
    if rule not in RULES:
        raise InputError(f"rule must be one of {RULES}, got {rule!r}")
    return rule


@dataclass(frozen=True)
class Group:
    """A bundle of item indices, a budget, and a consumer multiplicity."""

    bundle: frozenset
    budget: Fraction
    multiplicity: int

    def __post_init__(self):
        object.__setattr__(self, "bundle", frozenset(self.bundle))
        object.__setattr__(self, "budget", Fraction(self.budget))
        if not self.bundle:
            raise InputError("group bundle must be nonempty")
        if any(not isinstance(i, int) or isinstance(i, bool) for i in self.bundle):
            raise InputError("bundle entries must be item indices")
        if self.budget < 0:
            raise InputError(f"budget must be nonnegative, got {self.budget}")
        if not isinstance(self.multiplicity, int) or self.multiplicity < 1:
            raise InputError(f"multiplicity must be a positive integer, got {self.multiplicity}")

    def sorted_bundle(self) -> list:
        return sorted(self.bundle)


class PricingInstance:
    """Items 0..item_count-1 plus a tuple of weighted groups."""

    __slots__ = ("item_count", "groups", "k")

    def __init__(self, item_count: int, groups):
        if not isinstance(item_count, int) or item_count < 1:
            raise InputError(f"item_count must be a positive integer, got {item_count}")
        self.item_count = item_count
        self.groups = tuple(groups)
        for g in self.groups:
            if not isinstance(g, Group):
                raise InputError("groups must be Group values")
            if any(not 0 <= i < item_count for i in g.bundle):
                raise InputError(f"bundle {sorted(g.bundle)} out of range for {item_count} items")
        self.k = max((len(g.bundle) for g in self.groups), default=0)

    @property
    def total_multiplicity(self) -> int:
        return sum(g.multiplicity for g in self.groups)

    def distinct_budgets(self) -> list:
        return sorted({g.budget for g in self.groups})

    def __eq__(self, other):
        return (
            isinstance(other, PricingInstance)
            and self.item_count == other.item_count
            and self.groups == other.groups
        )

    def __hash__(self):
        return hash((self.item_count, self.groups))

    def __repr__(self):
        return f"PricingInstance(items={self.item_count}, groups={len(self.groups)}, k={self.k})"


def instance_to_json(inst: PricingInstance, rule: str) -> dict:
    check_rule(rule)
    return {
        "items": inst.item_count,
        "rule": rule,
        "groups": [
            {
                "bundle": g.sorted_bundle(),
                "budget": format_rational(g.budget),
                "multiplicity": str(g.multiplicity),
            }
            for g in inst.groups
        ],
    }


def instance_from_json(obj: dict) -> tuple[PricingInstance, str]:
    try:
        items = obj["items"]
        rule = check_rule(obj["rule"])
        groups = [
            Group(
                frozenset(g["bundle"]),
                parse_rational(g["budget"]),
                int(g["multiplicity"]),
            )
            for g in obj["groups"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad pricing instance json: {exc}") from None
    return PricingInstance(items, groups), rule


class PriceFunction:
    """One price per item: a nonnegative Fraction or INF."""

    __slots__ = ("prices",)

    def __init__(self, prices):
        entries = []
        for value in prices:
            if is_infinite(value):
                entries.append(INF)
                continue
            value = Fraction(value)
            if value < 0:
                raise InputError(f"prices must be nonnegative, got {value}")
            entries.append(value)
        self.prices = tuple(entries)

    @classmethod
    def uniform(cls, item_count: int, value) -> "PriceFunction":
        return cls([value] * item_count)

    def __len__(self):
        return len(self.prices)

    def __getitem__(self, item: int):
        return self.prices[item]

    def __iter__(self):
        return iter(self.prices)

    def __eq__(self, other):
        return isinstance(other, PriceFunction) and self.prices == other.prices

    def __hash__(self):
        return hash(self.prices)

    def __repr__(self):
        return "PriceFunction([" + ", ".join(format_price(p) for p in self.prices) + "])"

    def lex_key(self):
        """Sort key with INF greater than every finite price."""
        return tuple((1, ZERO) if is_infinite(p) else (0, p) for p in self.prices)

    def to_json(self) -> dict:
        return {"prices": [format_price(p) for p in self.prices]}

    @classmethod
    def from_json(cls, obj: dict) -> "PriceFunction":
        try:
            return cls([parse_price(p) for p in obj["prices"]])
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad price function json: {exc}") from None


@dataclass(frozen=True)
class GroupSale:
    """Outcome for one group: multiplicity-scaled payment and what happened."""

    payment: Fraction
    bought: bool
    chosen_item: int | None  # least-index cheapest bundle item under UDP


@dataclass(frozen=True)
class SaleReport:
    sales: tuple
    revenue: Fraction

    def to_json(self) -> dict:
        return {
            "revenue": format_rational(self.revenue),
            "sales": [
                {
                    "payment": format_rational(s.payment),
                    "bought": s.bought,
                    "chosen_item": s.chosen_item,
                }
                for s in self.sales
            ],
        }


def evaluate_revenue(inst: PricingInstance, rule: str, p: PriceFunction) -> SaleReport:
    """Exact payments per group and the total revenue."""
    check_rule(rule)
    if len(p) != inst.item_count:
        raise InputError(f"price function covers {len(p)} items, instance has {inst.item_count}")
    if rule == SMP and any(is_infinite(v) for v in p):
        raise InputError("INF prices are not allowed under SMP; use 0 to give items away")

    sales = []
    revenue = ZERO
    for g in inst.groups:
        if rule == UDP:
            cheapest = None
            chosen = None
            for i in g.sorted_bundle():
                value = p[i]
                if is_infinite(value):
                    continue
                if cheapest is None or value < cheapest:
                    cheapest = value
                    chosen = i
            if cheapest is not None and cheapest <= g.budget:
                payment = g.multiplicity * cheapest
                sales.append(GroupSale(payment, True, chosen))
            else:
                payment = ZERO
                sales.append(GroupSale(ZERO, False, None))
        else:
            total = sum((p[i] for i in g.bundle), ZERO)
            if total <= g.budget:
                payment = g.multiplicity * total
                sales.append(GroupSale(payment, True, None))
            else:
                payment = ZERO
                sales.append(GroupSale(ZERO, False, None))
        revenue += payment
    return SaleReport(tuple(sales), revenue)


# ---------------------------------------------------------------------------
# exact oracles


def opt_udp_bruteforce(inst: PricingInstance) -> tuple[Fraction, PriceFunction]:
    """Exhaustive UDP optimum over per-item prices in {budgets} + {INF}.

    Restricting to budget values loses nothing: raising any price to the
    next budget at or above it never changes who can afford their cheapest
    item, and never lowers a payment.
    """
    if inst.item_count > caps.MAX_UDP_ITEMS:
        raise CapExceeded(
            f"UDP oracle limited to {caps.MAX_UDP_ITEMS} items, got {inst.item_count}",
            bound="MAX_UDP_ITEMS",
        )
    budgets = inst.distinct_budgets()
    if len(budgets) > caps.MAX_UDP_BUDGETS:
        raise CapExceeded(
            f"UDP oracle limited to {caps.MAX_UDP_BUDGETS} distinct budgets, got {len(budgets)}",
            bound="MAX_UDP_BUDGETS",
        )
    candidates = budgets + [INF]
    best_revenue = None
    best_prices = None
    for combo in product(candidates, repeat=inst.item_count):
        p = PriceFunction(combo)
        revenue = evaluate_revenue(inst, UDP, p).revenue
        if best_revenue is None or revenue > best_revenue:
            best_revenue = revenue
            best_prices = p
    return best_revenue, best_prices


def opt_smp_bruteforce(inst: PricingInstance) -> tuple[Fraction, PriceFunction]:
    """Exact SMP optimum via winner-subset enumeration.

    For each candidate buyer set W, exact linear maximization of the W
    payments subject to W's budget constraints gives the best prices that
    let all of W buy; the true optimum is attained at W = its own buyer
    set, so the maximum over W of the realized revenue is exact.  Realized
    revenue can exceed a subset's LP value when outsiders happen to afford
    their bundles, which only helps.
    """
    if len(inst.groups) > caps.MAX_SMP_GROUPS:
        raise CapExceeded(
            f"SMP oracle limited to {caps.MAX_SMP_GROUPS} groups, got {len(inst.groups)}",
            bound="MAX_SMP_GROUPS",
        )
    if inst.item_count > caps.MAX_SMP_ITEMS:
        raise CapExceeded(
            f"SMP oracle limited to {caps.MAX_SMP_ITEMS} items, got {inst.item_count}",
            bound="MAX_SMP_ITEMS",
        )
    n = inst.item_count
    best_prices = PriceFunction.uniform(n, ZERO)
    best_revenue = evaluate_revenue(inst, SMP, best_prices).revenue
    best_key = best_prices.lex_key()
    for mask in range(1, 1 << len(inst.groups)):
        winners = [g for j, g in enumerate(inst.groups) if (mask >> j) & 1]
        objective = [ZERO] * n
        for g in winners:
            for i in g.bundle:
                objective[i] += g.multiplicity
        rows = []
        bounds = []
        for g in winners:
            row = [ZERO] * n
            for i in g.bundle:
                row[i] = Fraction(1)
            rows.append(row)
            bounds.append(g.budget)
        _, x = ratlp.maximize(objective, rows, bounds)
        p = PriceFunction(x)
        revenue = evaluate_revenue(inst, SMP, p).revenue
        key = p.lex_key()
        if revenue > best_revenue or (revenue == best_revenue and key < best_key):
            best_revenue = revenue
            best_prices = p
            best_key = key
    return best_revenue, best_prices


# ---------------------------------------------------------------------------
# approximation algorithms


def uniform_price_approx(inst: PricingInstance, rule: str) -> tuple[Fraction, PriceFunction]:
    """Best single price from {budgets} + {budget / bundle size}."""
    check_rule(rule)
    candidates = {g.budget for g in inst.groups}
    candidates.update(g.budget / len(g.bundle) for g in inst.groups)
    best_prices = PriceFunction.uniform(inst.item_count, ZERO)
    best_revenue = evaluate_revenue(inst, rule, best_prices).revenue
    for value in sorted(candidates):
        if value == 0:
            continue
        p = PriceFunction.uniform(inst.item_count, value)
        revenue = evaluate_revenue(inst, rule, p).revenue
        if revenue > best_revenue:
            best_revenue = revenue
            best_prices = p
    return best_revenue, best_prices


def geometric_price_set(inst: PricingInstance, alpha: Fraction) -> list:
    """The ladder {W, W/alpha, ..., W/alpha^L, 0}, ascending.

    W is the largest budget and L the least integer with alpha^L >= alpha
    * item_count * total multiplicity, so the bottom finite rung is below
    W / (n*m) and rounding any price down to a rung costs at most a factor
    alpha plus the negligible tail.
    """
    budgets = [g.budget for g in inst.groups]
    top = max(budgets, default=ZERO)
    if not budgets or top == 0:
        return [ZERO]
    target = alpha * inst.item_count * inst.total_multiplicity
    rungs = 0
    power = Fraction(1)
    while power < target:
        power *= alpha
        rungs += 1
    values = {ZERO}
    current = top
    for _ in range(rungs + 1):
        values.add(current)
        current /= alpha
    return sorted(values)


def geometric_enum_approx(inst: PricingInstance, rule: str, alpha) -> tuple[Fraction, PriceFunction]:
    """Exhaustive maximum over price functions valued in the geometric ladder.

    Guarantee: revenue >= opt * (alpha-1) / alpha^2, because rounding an
    optimal price vector down to the ladder keeps every buyer and costs at
    most alpha per payment, minus the tail below the bottom rung.
    """
    check_rule(rule)
    alpha = Fraction(alpha)
    if alpha <= 1:
        raise InputError(f"alpha must exceed 1, got {alpha}")
    ladder = geometric_price_set(inst, alpha)
    work = len(ladder) ** inst.item_count
    if work > caps.MAX_GEOMETRIC_WORK:
        raise CapExceeded(
            f"geometric enumeration needs {len(ladder)}^{inst.item_count} = {work} "
            f"evaluations, limit {caps.MAX_GEOMETRIC_WORK}; use a larger alpha or "
            f"approximation_scheme",
            bound="MAX_GEOMETRIC_WORK",
        )
    best_revenue = None
    best_prices = None
    for combo in product(ladder, repeat=inst.item_count):
        p = PriceFunction(combo)
        revenue = evaluate_revenue(inst, rule, p).revenue
        if best_revenue is None or revenue > best_revenue:
            best_revenue = revenue
            best_prices = p
    return best_revenue, best_prices


@dataclass(frozen=True)
class SubInstance:
    """A contiguous item block with bundles restricted to it.

    instance item j corresponds to original item items[j].
    """

    items: tuple
    instance: PricingInstance


def partition_items(inst: PricingInstance, q: int) -> list:
    """Split items into q near-equal contiguous blocks; restrict bundles.

    Groups whose bundle misses a block entirely are dropped from that
    block's subinstance.
    """
    if not isinstance(q, int) or not 1 <= q <= inst.item_count:
        raise InputError(f"q must satisfy 1 <= q <= {inst.item_count}, got {q}")
    n = inst.item_count
    base, extra = divmod(n, q)
    subs = []
    start = 0
    for j in range(q):
        size = base + (1 if j < extra else 0)
        block = tuple(range(start, start + size))
        start += size
        position = {item: idx for idx, item in enumerate(block)}
        groups = []
        for g in inst.groups:
            restricted = frozenset(position[i] for i in g.bundle if i in position)
            if restricted:
                groups.append(Group(restricted, g.budget, g.multiplicity))
        subs.append(SubInstance(block, PricingInstance(size, groups)))
    return subs


def extend_prices(inst: PricingInstance, sub_item_set, p_sub: PriceFunction, rule: str) -> PriceFunction:
    """Fill prices outside the sub-item set: INF under UDP, 0 under SMP.

    Neither fill can price a sub-instance buyer out, so full-instance
    revenue is at least the sub-instance revenue of p_sub.
    """
    check_rule(rule)
    items = sorted(sub_item_set)
    if len(set(items)) != len(items):
        raise InputError("sub_item_set has repeated items")
    if any(not 0 <= i < inst.item_count for i in items):
        raise InputError(f"sub_item_set out of range for {inst.item_count} items")
    if len(p_sub) != len(items):
        raise InputError(f"p_sub covers {len(p_sub)} items, sub_item_set has {len(items)}")
    fill = INF if rule == UDP else ZERO
    full = [fill] * inst.item_count
    for position, item in enumerate(items):
        full[item] = p_sub[position]
    return PriceFunction(full)


def scheme_breakpoints(inst: PricingInstance, delta: Fraction) -> tuple[int, bool]:
    """(block count ceil(n^delta), whether the uniform branch is taken).

    The block count is computed in exact integer arithmetic; the branch
    test n^delta > log m follows the analysis and uses the natural log
    (float evaluation, fine at desk scale where ties do not occur).
    """
    n = inst.item_count
    a, b = delta.numerator, delta.denominator
    q = next(q for q in range(1, n + 1) if q**b >= n**a)
    m = inst.total_multiplicity
    uniform_branch = m == 0 or float(n) ** float(delta) > math.log(m)
    return q, uniform_branch


def approximation_scheme(inst: PricingInstance, rule: str, delta, alpha) -> tuple[Fraction, PriceFunction]:
    """Either one uniform price, or the best geometric solve over n^delta blocks.

    When n^delta > log m the single uniform price already achieves the
    target ratio; otherwise items are split into ceil(n^delta) blocks, each
    block is solved by geometric enumeration on the restricted instance,
    and the best block's prices are extended by the fill rule.  Guarantee:
    revenue >= opt * (alpha-1) / (alpha^2 * ceil(n^delta)).
    """
    check_rule(rule)
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise InputError(f"delta must lie strictly between 0 and 1, got {delta}")
    alpha = Fraction(alpha)
    if alpha <= 1:
        raise InputError(f"alpha must exceed 1, got {alpha}")
    q, uniform_branch = scheme_breakpoints(inst, delta)
    if uniform_branch:
        return uniform_price_approx(inst, rule)
    best = None
    for sub in partition_items(inst, q):
        revenue, p_sub = geometric_enum_approx(sub.instance, rule, alpha)
        if best is None or revenue > best[0]:
            best = (revenue, sub, p_sub)
    _, sub, p_sub = best
    extension = extend_prices(inst, sub.items, p_sub, rule)
    revenue = evaluate_revenue(inst, rule, extension).revenue
    return revenue, extension
