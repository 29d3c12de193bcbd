"""Value sets and verbal subgroups on tuples of subsets or normal subgroups.

Value sets are computed exactly.  Where a word is an outer commutator (or the
argument words are disjoint) the set of values over a product of subsets
factorises through the value sets of the subwords, which keeps exhaustive
computations far below the nominal tuple-space size; enumeration only falls
back to the raw assignment space when variables repeat inside a subtree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from .enumeration import DEFAULT_BLOCK, DEFAULT_BUDGET, ProductSpace
from .errors import (
    ArityMismatch,
    BudgetExceeded,
    NotNormal,
    PowerConditionFailed,
    PreconditionFailed,
)
from .groups import (
    ElementSubset,
    FiniteGroup,
    SubgroupHandle,
    closure,
    commutator_subgroup,
    congruent_mod,
    evaluate,
    evaluate_arrays,
    star_power,
    subgroup_product,
)
from .words import (
    Commutator,
    Inverse,
    OcwTree,
    Power,
    Product,
    Var,
    WordExpr,
    extension_degree,
    render,
    substitute,
    variables,
)

DEFAULT_SAMPLES = 100_000

Subsetish = Union[ElementSubset, SubgroupHandle]


def _as_subset(s: Subsetish) -> ElementSubset:
    if isinstance(s, SubgroupHandle):
        return s.as_subset()
    return s


def _as_word(w: WordExpr | OcwTree) -> WordExpr:
    return w.to_word() if isinstance(w, OcwTree) else w


# ---------------------------------------------------------------------------
# value sets
# ---------------------------------------------------------------------------


@dataclass
class ValueSet:
    """Exact set of word values over a tuple of subsets.

    `witnesses` maps each value to one preimage, the first found in the
    deterministic enumeration order; witness tuples follow `variables`
    (x-family first, each family by index).
    """

    word: WordExpr
    variables: tuple[Var, ...]
    subsets: tuple[ElementSubset, ...]
    values: np.ndarray  # sorted ascending
    members: ElementSubset
    witnesses: dict[int, tuple[int, ...]]

    @property
    def size(self) -> int:
        return int(self.values.shape[0])

    def witness_assignment(self, value: int) -> dict[Var, int]:
        return dict(zip(self.variables, self.witnesses[int(value)]))


def value_set(
    w: WordExpr | OcwTree,
    subsets: Sequence[Subsetish],
    budget: int | None = None,
) -> ValueSet:
    """Values of `w` as its variables range over `subsets` positionally.

    Positions follow the canonical variable order of the word (x-family by
    index, then y-family by index).
    """
    expr = _as_word(w)
    vars_ = variables(expr)
    if len(subsets) != len(vars_):
        raise ArityMismatch(
            f"word {render(expr)} has {len(vars_)} variables, got {len(subsets)} subsets"
        )
    return value_set_over(expr, dict(zip(vars_, subsets)), budget)


def value_set_over(
    w: WordExpr | OcwTree,
    env: Mapping[Var, Subsetish],
    budget: int | None = None,
) -> ValueSet:
    expr = _as_word(w)
    vars_ = variables(expr)
    missing = [v for v in vars_ if v not in env]
    if missing:
        raise ArityMismatch(f"no subset assigned to variable {missing[0]}")
    sets = {v: _as_subset(env[v]) for v in vars_}
    if not vars_:
        raise ArityMismatch(f"word {render(expr)} has no variables")
    group = next(iter(sets.values())).group
    vals, rows = _values(expr, sets, group, budget)
    order = np.argsort(vals, kind="stable")
    sorted_vals = vals[order]
    mask = np.zeros(group.order, dtype=bool)
    mask[sorted_vals] = True
    witnesses = {int(v): tuple(int(e) for e in row) for v, row in zip(vals, rows)}
    return ValueSet(
        word=expr,
        variables=vars_,
        subsets=tuple(sets[v] for v in vars_),
        values=sorted_vals,
        members=ElementSubset(group, mask),
        witnesses=witnesses,
    )


def _values(
    expr: WordExpr,
    sets: Mapping[Var, ElementSubset],
    group: FiniteGroup,
    budget: int | None,
) -> tuple[np.ndarray, np.ndarray]:
    """Distinct values of `expr` plus witness rows, in discovery order.

    Witness row columns follow the canonical variable order of `expr`.
    """
    key = (render(expr), tuple(sets[v].key for v in variables(expr)))
    cached = group._value_cache.get(key)
    if cached is not None:
        return cached

    if isinstance(expr, Var):
        elems = sets[expr].elements.astype(np.int64)
        out = (elems, elems[:, None].copy())
    elif isinstance(expr, (Inverse, Power)):
        child_vals, child_rows = _values(expr.child, sets, group, budget)
        if isinstance(expr, Inverse):
            transformed = group.inverse_table[child_vals]
        else:
            transformed = group.pow_arr(child_vals, expr.exponent)
        _, first = np.unique(transformed, return_index=True)
        keep = np.sort(first)
        out = (transformed[keep].astype(np.int64), child_rows[keep])
    elif isinstance(expr, (Commutator, Product)) and _children_disjoint(expr):
        children = (
            list(expr.factors)
            if isinstance(expr, Product)
            else [expr.left, expr.right]
        )
        if not children:
            out = (np.array([0], dtype=np.int64), np.zeros((1, 0), dtype=np.int64))
        else:
            acc_vals, acc_rows, acc_vars = None, None, ()
            for child in children:
                c_vals, c_rows = _values(child, sets, group, budget)
                c_vars = variables(child)
                if acc_vals is None:
                    acc_vals, acc_rows, acc_vars = c_vals, c_rows, c_vars
                    continue
                op = group.mul_arr if isinstance(expr, Product) else group.comm_arr
                acc_vals, acc_rows, acc_vars = _combine(
                    group, op, acc_vals, acc_rows, acc_vars, c_vals, c_rows, c_vars, budget
                )
            # witness columns back into canonical variable order
            cols = [acc_vars.index(v) for v in sorted(acc_vars)]
            out = (acc_vals, acc_rows[:, cols])
    else:
        out = _values_by_enumeration(expr, sets, group, budget)

    group._value_cache[key] = out
    return out


def _children_disjoint(expr: Commutator | Product) -> bool:
    children = expr.factors if isinstance(expr, Product) else (expr.left, expr.right)
    seen: set[Var] = set()
    for c in children:
        cv = set(variables(c))
        if seen & cv:
            return False
        seen |= cv
    return True


def _combine(group, op, a_vals, a_rows, a_vars, b_vals, b_rows, b_vars, budget):
    size = a_vals.shape[0] * b_vals.shape[0]
    limit = DEFAULT_BUDGET if budget is None else budget
    if size > limit:
        raise BudgetExceeded(size, limit, "value-set combination")
    mesh = op(a_vals[:, None], b_vals[None, :]).ravel()
    _, first = np.unique(mesh, return_index=True)
    keep = np.sort(first)  # discovery order = row-major = witness-lex order
    ia, ib = keep // b_vals.shape[0], keep % b_vals.shape[0]
    rows = np.hstack([a_rows[ia], b_rows[ib]])
    return mesh[keep].astype(np.int64), rows, a_vars + b_vars


def _values_by_enumeration(expr, sets, group, budget):
    vars_ = variables(expr)
    space = ProductSpace([sets[v].elements.astype(np.int64) for v in vars_])
    space.require_within(budget, f"value set of {render(expr)}")
    best: dict[int, int] = {}
    for start, cols in space.blocks(DEFAULT_BLOCK):
        env = dict(zip(vars_, cols))
        vals = evaluate_arrays(expr, group, env)
        uq, first = np.unique(vals, return_index=True)
        for v, f in zip(uq, first):
            if int(v) not in best:
                best[int(v)] = start + int(f)
    order = sorted(best.items(), key=lambda kv: kv[1])
    vals = np.array([v for v, _ in order], dtype=np.int64)
    rows = np.array(
        [space.tuple_at(f) for _, f in order], dtype=np.int64
    ).reshape(len(order), len(vars_))
    return vals, rows


# ---------------------------------------------------------------------------
# normal tuples
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TupleEntry:
    """One component: a normal subgroup, optionally with a generating normal
    subset and a power-closure exponent."""

    subgroup: SubgroupHandle
    subset: ElementSubset | None = None
    exponent: int | None = None


class NormalTuple:
    """Ordered tuple of normal subgroups; all stated side conditions are
    checked eagerly on construction."""

    def __init__(
        self,
        group: FiniteGroup,
        entries: Sequence[TupleEntry | SubgroupHandle],
        labels: Sequence[str] | None = None,
    ):
        self.group = group
        norm: list[TupleEntry] = []
        for e in entries:
            if isinstance(e, SubgroupHandle):
                e = TupleEntry(subgroup=e)
            norm.append(e)
        for pos, entry in enumerate(norm, start=1):
            sub = entry.subgroup
            if sub.group is not group:
                raise PreconditionFailed(f"entry {pos} belongs to a different group")
            if not sub.is_normal:
                raise NotNormal(f"entry {pos} (order {sub.order}) is not normal")
            if entry.subset is not None:
                entry.subset.require_normal_subset()
                if closure(group, entry.subset) != sub:
                    raise PreconditionFailed(
                        f"entry {pos}: generating subset does not generate the subgroup"
                    )
            if entry.exponent is not None:
                if entry.subset is None:
                    raise PreconditionFailed(
                        f"entry {pos}: power exponent given without a subset"
                    )
                if not check_power_condition(entry):
                    raise PowerConditionFailed(
                        f"entry {pos}: some {entry.exponent}-th power escapes the subset"
                    )
        self.entries = tuple(norm)
        self.labels = tuple(labels) if labels is not None else None

    @property
    def arity(self) -> int:
        return len(self.entries)

    @property
    def subgroups(self) -> tuple[SubgroupHandle, ...]:
        return tuple(e.subgroup for e in self.entries)

    def chosen_sets(self, use_subsets: bool = True) -> tuple[ElementSubset, ...]:
        return tuple(
            e.subset if (use_subsets and e.subset is not None) else e.subgroup.as_subset()
            for e in self.entries
        )

    def sub_tuple(self, start: int, stop: int) -> "NormalTuple":
        return NormalTuple(self.group, self.entries[start:stop])

    def __len__(self) -> int:
        return len(self.entries)


def check_power_condition(entry: TupleEntry) -> bool:
    """All exponent-th powers of subgroup elements lie in the subset."""
    if entry.subset is None or entry.exponent is None:
        raise PreconditionFailed("entry needs both a subset and an exponent")
    G = entry.subgroup.group
    powers = G.pow_arr(entry.subgroup.elements, entry.exponent)
    return bool(entry.subset.mask[powers].all())


def class_generating_subset(N: SubgroupHandle) -> tuple[ElementSubset, int]:
    """A proper normal generating subset of N: a union of G-conjugacy classes
    plus the identity, greedily chosen, with the least exponent n such that
    all n-th powers of N land inside it."""
    G = N.group
    N.require_normal()
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    have = closure(G, [])
    all_g = np.arange(G.order, dtype=np.int32)
    for e in N.elements:
        e = int(e)
        if have.mask[e]:
            continue
        cls = np.unique(G.table[G.table[G.inverse_table[all_g], e], all_g])
        mask[cls] = True
        have = closure(G, np.flatnonzero(mask))
        if have == N:
            break
    subset = ElementSubset(G, mask)
    n = 1
    while True:
        powers = G.pow_arr(N.elements, n)
        if subset.mask[powers].all():
            break
        n += 1
    return subset, n


# ---------------------------------------------------------------------------
# verbal subgroups
# ---------------------------------------------------------------------------


def verbal_subgroup(
    w: WordExpr | OcwTree,
    tup: NormalTuple | Sequence[Subsetish],
    budget: int | None = None,
    use_subsets: bool = True,
) -> SubgroupHandle:
    """Subgroup generated by the values of `w` over the tuple.

    For a NormalTuple the values are taken over the generating subsets where
    given, otherwise over the subgroups; for outer commutator words on normal
    subgroups the result is the same either way (checkable via
    `check_generator_independence`).
    """
    if isinstance(tup, NormalTuple):
        sets: Sequence[Subsetish] = tup.chosen_sets(use_subsets)
    else:
        sets = tup
    vs = value_set(w, sets, budget)
    out = closure(vs.members.group, vs.members)
    return out


def verbal_subgroup_of_word(
    w: WordExpr, G: FiniteGroup, budget: int | None = None
) -> SubgroupHandle:
    """w(G): values over full-group tuples; valid for arbitrary words."""
    env = {v: G.full_subset() for v in variables(w)}
    vs = value_set_over(w, env, budget)
    return closure(G, vs.members)


def check_generator_independence(
    w: WordExpr | OcwTree, tup: NormalTuple, budget: int | None = None
) -> tuple[bool, int, int]:
    via_subsets = verbal_subgroup(w, tup, budget, use_subsets=True)
    via_groups = verbal_subgroup(w, tup, budget, use_subsets=False)
    return via_subsets == via_groups, via_subsets.order, via_groups.order


# ---------------------------------------------------------------------------
# split / substitution checks
# ---------------------------------------------------------------------------


@dataclass
class SplitReport:
    equal: bool
    whole: SubgroupHandle
    left: SubgroupHandle
    right: SubgroupHandle
    split_at: int


def check_disjoint_split(
    w: OcwTree, tup: NormalTuple | Sequence[SubgroupHandle], budget: int | None = None
) -> SplitReport:
    """Both sides of w(N1..Nr) = [alpha(N1..Nq), beta(N(q+1)..Nr)]."""
    if w.is_leaf:
        raise PreconditionFailed("word must have at least two leaves")
    subgroups = tup.subgroups if isinstance(tup, NormalTuple) else tuple(tup)
    leaves = w.leaves()
    if len(subgroups) != len(leaves):
        raise ArityMismatch(f"{len(leaves)} leaves vs {len(subgroups)} subgroups")
    q = len(w.left.leaves())  # type: ignore[union-attr]
    whole = verbal_subgroup(w, subgroups, budget)
    left = verbal_subgroup(w.left, subgroups[:q], budget)  # type: ignore[arg-type]
    right = verbal_subgroup(w.right, subgroups[q:], budget)  # type: ignore[arg-type]
    bracket = commutator_subgroup(left, right)
    return SplitReport(
        equal=(whole == bracket), whole=whole, left=left, right=right, split_at=q
    )


@dataclass
class SubstitutionReport:
    equal: bool
    direct_order: int
    composed_order: int
    argument_orders: tuple[int, ...]


def check_substitution(
    w: OcwTree, args: Sequence[WordExpr], G: FiniteGroup, budget: int | None = None
) -> SubstitutionReport:
    """Compare w(u1,...,ur)(G) with w(u1(G),...,ur(G))."""
    composed_word = substitute(w, args)
    direct = verbal_subgroup_of_word(composed_word, G, budget)
    arg_groups = []
    for u in args:
        sub = verbal_subgroup_of_word(u, G, budget)
        arg_groups.append(sub)
    composed = verbal_subgroup(w, arg_groups, budget)
    return SubstitutionReport(
        equal=(direct == composed),
        direct_order=direct.order,
        composed_order=composed.order,
        argument_orders=tuple(s.order for s in arg_groups),
    )


# ---------------------------------------------------------------------------
# star membership and width checks (single instances)
# ---------------------------------------------------------------------------


def check_star_membership(
    w: OcwTree,
    S: ElementSubset,
    t: Sequence[int],
    position: int,
    budget: int | None = None,
) -> bool:
    """w(t) lies in the 2^(r-1) star power of S when t[position] does in S."""
    S.require_normal_subset()
    leaves = w.leaves()
    if len(t) != len(leaves):
        raise ArityMismatch(f"{len(leaves)} leaves vs {len(t)} entries")
    if not 1 <= position <= len(leaves):
        raise PreconditionFailed("position out of range")
    if t[position - 1] not in S:
        raise PreconditionFailed("the distinguished component does not lie in S")
    G = S.group
    val = evaluate(w.to_word(), G, dict(zip(leaves, t)))
    star = star_power(G, S, 2 ** (len(leaves) - 1))
    return val in star


def check_width(
    w: OcwTree,
    subsets: Sequence[ElementSubset],
    multiplicities: Sequence[int],
    t: Sequence[int],
    budget: int | None = None,
) -> bool:
    """w(t) lies in the product star power of the value set."""
    leaves = w.leaves()
    if not (len(subsets) == len(multiplicities) == len(t) == len(leaves)):
        raise ArityMismatch("subsets, multiplicities and tuple must match the leaves")
    G = subsets[0].group
    total = 1
    for S, m, ti in zip(subsets, multiplicities, t):
        S.require_normal_subset()
        if ti not in star_power(G, S, m):
            raise PreconditionFailed(f"component {ti} is not in the m-star power")
        total *= m
    vs = value_set(w, list(subsets), budget)
    star = star_power(G, vs.members, total)
    val = evaluate(w.to_word(), G, dict(zip(leaves, t)))
    return val in star


def check_extended_width(
    v: OcwTree,
    w: OcwTree,
    subsets: Sequence[ElementSubset],
    multiplicities: Sequence[int],
    assignment: Mapping[Var, int],
    budget: int | None = None,
    degree: int | None = None,
) -> bool:
    """Width membership for a degree-k extension of w, y-entries free.

    The degree recorded at enumeration time may be passed in; it must not
    undercut the recognised minimal degree.  By default the minimal degree is
    used, which gives the tightest star power.
    """
    minimal = extension_degree(v, w)
    if minimal is None:
        raise PreconditionFailed("first word is not an extension of the second")
    if degree is not None and degree < minimal:
        raise PreconditionFailed(f"recorded degree {degree} undercuts minimal {minimal}")
    k = minimal if degree is None else degree
    base_leaves = w.leaves()
    if len(subsets) != len(base_leaves) or len(multiplicities) != len(base_leaves):
        raise ArityMismatch("need one subset and multiplicity per base leaf")
    G = subsets[0].group
    total = 1
    for leaf, S, m in zip(base_leaves, subsets, multiplicities):
        S.require_normal_subset()
        if assignment[leaf] not in star_power(G, S, m):
            raise PreconditionFailed(f"entry for {leaf} is not in the m-star power")
        total *= m
    vs = value_set(w, list(subsets), budget)
    star = star_power(G, vs.members, total * 2**k)
    val = evaluate(v.to_word(), G, dict(assignment))
    return val in star


# ---------------------------------------------------------------------------
# linearity
# ---------------------------------------------------------------------------


@dataclass
class LinearityReport:
    word: str
    position: int
    entry_orders: tuple[int, ...]
    modulus_order: int
    mode: str
    seed: int | None
    samples: int | None
    space: int
    holds: bool
    counterexample: dict[str, int] | None = None

    @property
    def verdict(self) -> str:
        if self.holds:
            return "holds" if self.mode == "exhaustive" else "holds-sampled"
        return "fails"


def spine_decompose(w: OcwTree, pivot: Var) -> list[tuple[OcwTree, bool]]:
    """Siblings along the root-to-pivot path; flag says pivot is on the left."""
    path: list[tuple[OcwTree, bool]] = []
    node = w
    while not node.is_leaf:
        assert node.left is not None and node.right is not None
        if pivot in node.left.leaves():
            path.append((node.right, True))
            node = node.left
        else:
            path.append((node.left, False))
            node = node.right
    if node.var != pivot:
        raise PreconditionFailed(f"variable {pivot} does not occur in the word")
    return path


def spine_eval(
    G: FiniteGroup, path: list[tuple[OcwTree, bool]], pivot_vals: np.ndarray, sib_vals: list[np.ndarray]
) -> np.ndarray:
    out = pivot_vals
    for (_, pivot_left), vals in zip(reversed(path), reversed(sib_vals)):
        out = G.comm_arr(out, vals) if pivot_left else G.comm_arr(vals, out)
    return out


def check_linearity(
    w: OcwTree,
    tup: NormalTuple | Sequence[SubgroupHandle],
    position: int,
    modulus: SubgroupHandle,
    mode: str = "exhaustive",
    seed: int | None = None,
    samples: int = DEFAULT_SAMPLES,
    budget: int | None = None,
) -> LinearityReport:
    """Test multiplicativity of `w` in one component modulo a normal subgroup.

    Exhaustive mode covers the full tuple space exactly: whenever a subtree
    does not contain the tested component, only its set of values matters,
    so those subtrees are enumerated through their value sets, with witness
    tuples used to reconstruct a counterexample assignment.
    """
    modulus.require_normal()
    subgroups = tup.subgroups if isinstance(tup, NormalTuple) else tuple(tup)
    vars_ = variables(w.to_word())
    if len(subgroups) != len(vars_):
        raise ArityMismatch(f"{len(vars_)} variables vs {len(subgroups)} subgroups")
    if not 1 <= position <= len(vars_):
        raise PreconditionFailed("position out of range")
    pivot = vars_[position - 1]
    env = dict(zip(vars_, subgroups))
    G = modulus.group
    entry_orders = tuple(s.order for s in subgroups)
    lin_set = env[pivot].elements.astype(np.int64)

    if mode == "sampled":
        if seed is None:
            raise PreconditionFailed("sampled mode requires a seed")
        return _linearity_sampled(
            w, env, pivot, modulus, G, seed, samples, entry_orders, position
        )
    if mode != "exhaustive":
        raise PreconditionFailed(f"unknown mode {mode!r}")

    path = spine_decompose(w, pivot)
    sib_sets = [value_set_over(sub.to_word(), env, budget) for sub, _ in path]
    axes = [vs.values.astype(np.int64) for vs in sib_sets] + [lin_set, lin_set]
    space = ProductSpace(axes)
    space.require_within(budget, f"linearity of {w.render()} in position {position}")

    for start, cols in space.blocks(DEFAULT_BLOCK):
        sib_vals, xv, yv = cols[:-2], cols[-2], cols[-1]
        lhs = spine_eval(G, path, G.mul_arr(xv, yv), sib_vals)
        rhs = G.mul_arr(
            spine_eval(G, path, xv, sib_vals), spine_eval(G, path, yv, sib_vals)
        )
        ok = modulus.mask[G.mul_arr(lhs, G.inverse_table[rhs])]
        if not ok.all():
            flat = start + int(np.flatnonzero(~ok)[0])
            point = space.tuple_at(flat)
            assignment: dict[str, int] = {}
            for vs, val in zip(sib_sets, point[:-2]):
                assignment.update(
                    {str(var): e for var, e in vs.witness_assignment(int(val)).items()}
                )
            assignment[str(pivot)] = int(point[-2])
            assignment["y"] = int(point[-1])
            return LinearityReport(
                word=w.render(),
                position=position,
                entry_orders=entry_orders,
                modulus_order=modulus.order,
                mode="exhaustive",
                seed=None,
                samples=None,
                space=space.size,
                holds=False,
                counterexample=assignment,
            )
    return LinearityReport(
        word=w.render(),
        position=position,
        entry_orders=entry_orders,
        modulus_order=modulus.order,
        mode="exhaustive",
        seed=None,
        samples=None,
        space=space.size,
        holds=True,
    )


def _linearity_sampled(
    w: OcwTree,
    env: Mapping[Var, SubgroupHandle],
    pivot: Var,
    modulus: SubgroupHandle,
    G: FiniteGroup,
    seed: int,
    samples: int,
    entry_orders: tuple[int, ...],
    position: int,
) -> LinearityReport:
    rng = np.random.default_rng(seed)
    vars_ = list(env.keys())
    expr = w.to_word()
    remaining = samples
    while remaining > 0:
        block = min(remaining, DEFAULT_BLOCK)
        draw = {
            v: env[v].elements[rng.integers(0, env[v].order, block)].astype(np.int64)
            for v in vars_
        }
        yv = env[pivot].elements[rng.integers(0, env[pivot].order, block)].astype(np.int64)
        xv = draw[pivot]
        lhs = evaluate_arrays(expr, G, {**draw, pivot: G.mul_arr(xv, yv)})
        rhs = G.mul_arr(
            evaluate_arrays(expr, G, draw), evaluate_arrays(expr, G, {**draw, pivot: yv})
        )
        ok = modulus.mask[G.mul_arr(lhs, G.inverse_table[rhs])]
        if not ok.all():
            i = int(np.flatnonzero(~ok)[0])
            assignment = {str(v): int(draw[v][i]) for v in vars_}
            assignment["y"] = int(yv[i])
            return LinearityReport(
                word=w.render(),
                position=position,
                entry_orders=entry_orders,
                modulus_order=modulus.order,
                mode="sampled",
                seed=seed,
                samples=samples,
                space=samples,
                holds=False,
                counterexample=assignment,
            )
        remaining -= block
    return LinearityReport(
        word=w.render(),
        position=position,
        entry_orders=entry_orders,
        modulus_order=modulus.order,
        mode="sampled",
        seed=seed,
        samples=samples,
        space=samples,
        holds=True,
    )


# ---------------------------------------------------------------------------
# commutator congruence
# ---------------------------------------------------------------------------


def comm_congruence_modulus(
    K: SubgroupHandle, L: SubgroupHandle, N: SubgroupHandle
) -> SubgroupHandle:
    """The subgroup [K,N,K][L,N]."""
    knk = commutator_subgroup(commutator_subgroup(K, N), K)
    ln = commutator_subgroup(L, N)
    return subgroup_product(knk, ln)


def check_comm_congruence(
    G: FiniteGroup,
    K: SubgroupHandle,
    L: SubgroupHandle,
    N: SubgroupHandle,
    x: int,
    y: int,
    z: int,
    n: int,
) -> bool:
    """[x,n] == [y,n][z,n] modulo [K,N,K][L,N], given x == yz modulo L."""
    for sub in (K, L, N):
        sub.require_normal()
    if not (x in K and y in K and z in K):
        raise PreconditionFailed("x, y, z must lie in K")
    if n not in N:
        raise PreconditionFailed("n must lie in N")
    yz = G.mul(y, z)
    if not L.mask[G.mul(x, G.inv(yz))]:
        raise PreconditionFailed("x is not congruent to yz modulo L")
    modulus = comm_congruence_modulus(K, L, N)
    lhs = G.comm(x, n)
    rhs = G.mul(G.comm(y, n), G.comm(z, n))
    return congruent_mod(lhs, rhs, modulus)
