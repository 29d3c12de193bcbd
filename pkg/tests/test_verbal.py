"""Value sets, verbal subgroups, linearity and the membership checkers."""

from __future__ import annotations

import numpy as np
import pytest

from verba.enumeration import ProductSpace
from verba.errors import (
    ArityMismatch,
    BudgetExceeded,
    NotNormal,
    PowerConditionFailed,
    PreconditionFailed,
)
from verba.groups import (
    builtin_group,
    closure,
    evaluate,
    evaluate_arrays,
    normal_closure,
    star_power,
)
from verba.verbal import (
    NormalTuple,
    TupleEntry,
    check_comm_congruence,
    check_disjoint_split,
    check_generator_independence,
    check_linearity,
    check_power_condition,
    check_star_membership,
    check_substitution,
    check_extended_width,
    check_width,
    class_generating_subset,
    value_set,
    value_set_over,
    verbal_subgroup,
    verbal_subgroup_of_word,
)
from verba.words import (
    OcwTree,
    classify_outer_commutator,
    delta,
    gamma,
    parse_word,
    variables,
    xvar,
    yvar,
)


def full_tuple(G, r):
    return [G.full_subgroup()] * r


# ---------------------------------------------------------------------------
# value sets
# ---------------------------------------------------------------------------


def test_value_set_quat_commutators(quat8):
    vs = value_set(gamma(2), full_tuple(quat8, 2))
    assert vs.size == 2
    assert sorted(quat8.element_name(int(v)) for v in vs.values) == ["-1", "1"]


def test_value_set_with_identity_entry(sym4):
    vs = value_set(delta(2), full_tuple(sym4, 3) + [sym4.trivial_subgroup()])
    assert vs.size == 1 and int(vs.values[0]) == 0


def test_value_set_delta2_sym4(sym4):
    vs = value_set(delta(2), full_tuple(sym4, 4))
    assert vs.size == 4
    assert closure(sym4, vs.members).order == 4


def test_value_set_witnesses_are_preimages(sym4):
    vs = value_set(gamma(3), full_tuple(sym4, 3))
    for val, wit in vs.witnesses.items():
        assert evaluate(gamma(3).to_word(), sym4, dict(zip(vs.variables, wit))) == val


def test_value_set_normal_when_inputs_normal(sym4):
    vs = value_set(gamma(2), full_tuple(sym4, 2))
    assert vs.members.is_normal_subset


def test_value_set_arity_mismatch(sym3):
    with pytest.raises(ArityMismatch):
        value_set(gamma(2), full_tuple(sym3, 3))


def test_value_set_budget_literal(sym4):
    with pytest.raises(BudgetExceeded):
        value_set_over(
            parse_word("x1*x2*x1"),
            {xvar(1): sym4.full_subgroup(), xvar(2): sym4.full_subgroup()},
            budget=10,
        )


@pytest.mark.parametrize("word", [gamma(2), gamma(3), delta(2)])
@pytest.mark.parametrize("spec", ["sym:3", "quat:8", "dih:4", "cyc:2 x sym:3"])
def test_value_set_matches_direct_enumeration(word, spec):
    G = builtin_group(spec)
    tup = full_tuple(G, len(word.leaves()))
    vs = value_set(word, tup)
    space = ProductSpace([s.elements.astype(np.int64) for s in tup])
    seen = np.zeros(G.order, dtype=bool)
    expr = word.to_word()
    vars_ = variables(expr)
    for _, cols in space.blocks():
        seen[evaluate_arrays(expr, G, dict(zip(vars_, cols)))] = True
    assert np.array_equal(np.flatnonzero(seen), vs.values)


# ---------------------------------------------------------------------------
# verbal subgroups
# ---------------------------------------------------------------------------


def test_verbal_subgroup_examples(sym3, sym4, quat8):
    assert verbal_subgroup(gamma(2), full_tuple(sym3, 2)).order == 3
    assert verbal_subgroup(delta(2), full_tuple(sym4, 4)).order == 4
    trivial = [quat8.full_subgroup(), quat8.trivial_subgroup()]
    assert verbal_subgroup(gamma(2), trivial).order == 1


def test_verbal_subgroup_of_substituted_word(sym4):
    word = parse_word("[x1^2,x2^3]")
    sub = verbal_subgroup_of_word(word, sym4)
    assert sub.order == 12


def test_generator_independence_exhaustive():
    words = [gamma(2), gamma(3), delta(2), classify_outer_commutator(parse_word("[x1,[x2,x3]]"))]
    for spec in ("sym:4", "quat:8", "dih:6", "heis:3"):
        G = builtin_group(spec)
        for word in words:
            r = len(word.leaves())
            entries = []
            for _ in range(r):
                sub = G.full_subgroup()
                subset, n = class_generating_subset(sub)
                entries.append(TupleEntry(sub, subset, n))
            tup = NormalTuple(G, entries)
            ok, via_s, via_n = check_generator_independence(word, tup)
            assert ok, (spec, word.render(), via_s, via_n)


# ---------------------------------------------------------------------------
# normal tuples
# ---------------------------------------------------------------------------


def test_normal_tuple_rejects_non_normal(sym3):
    swap = closure(sym3, [sym3.element_names.index("(1 2)")])
    with pytest.raises(NotNormal):
        NormalTuple(sym3, [swap])


def test_normal_tuple_rejects_non_generating_subset(sym3):
    subset = sym3.subset([0]).require_normal_subset()
    with pytest.raises(PreconditionFailed):
        NormalTuple(sym3, [TupleEntry(sym3.full_subgroup(), subset)])


def test_power_condition():
    c8 = builtin_group("cyc:8")
    n = closure(c8, [2])  # the subgroup {0,2,4,6}
    assert n.order == 4
    subset = c8.subset([0, 2, 4, 6])
    assert check_power_condition(TupleEntry(n, subset, 2))
    squares_only = c8.subset([0, 4])
    assert not check_power_condition(TupleEntry(n, squares_only, 1))
    entry = TupleEntry(n, subset, None)
    with pytest.raises(PreconditionFailed):
        check_power_condition(entry)
    with pytest.raises(PowerConditionFailed):
        NormalTuple(c8, [TupleEntry(n, c8.subset([0, 2, 6]), 1)])


def test_noncommutator_power_values(sym4):
    # a multi-variable non-commutator evaluated with all but one entry at the
    # identity returns the exponent-sum power of the remaining entry
    u = parse_word("x1*x2*x1")
    for g in range(sym4.order):
        val = evaluate(u, sym4, {xvar(1): g, xvar(2): 0})
        assert val == sym4.power(g, 2)


def test_class_generating_subset_sym3(sym3):
    subset, n = class_generating_subset(sym3.full_subgroup())
    names = sorted(sym3.element_name(int(e)) for e in subset.elements)
    assert names == ["()", "(1 2)", "(1 3)", "(2 3)"]
    assert n == 3  # cubes land back on transpositions or the identity


# ---------------------------------------------------------------------------
# split and substitution
# ---------------------------------------------------------------------------


def test_disjoint_split_examples(sym4, sym3, quat8):
    rep = check_disjoint_split(delta(2), full_tuple(sym4, 4))
    assert rep.equal and rep.whole.order == 4
    rep = check_disjoint_split(gamma(2), [quat8.full_subgroup(), quat8.trivial_subgroup()])
    assert rep.equal and rep.whole.order == 1
    rep = check_disjoint_split(gamma(3), full_tuple(sym3, 3))
    assert rep.equal and rep.whole.order == 3


def test_substitution_examples(sym3, sym4, quat8):
    rep = check_substitution(gamma(2), [xvar(1), xvar(2)], sym3)
    assert rep.equal and rep.direct_order == 3
    rep = check_substitution(gamma(2), [parse_word("x1^2"), parse_word("x2^3")], sym4)
    assert rep.equal
    rep = check_substitution(gamma(2), [parse_word("x1^2"), parse_word("x2^2")], quat8)
    assert rep.equal and rep.direct_order == 1 and rep.argument_orders == (2, 2)


# ---------------------------------------------------------------------------
# star membership and width
# ---------------------------------------------------------------------------


def test_star_membership_base_case(sym3):
    s = class_generating_subset(sym3.full_subgroup())[0]
    leaf = OcwTree.leaf(xvar(1))
    el = int(s.elements[1])
    assert check_star_membership(leaf, s, (el,), 1)


def test_star_membership_quat(quat8):
    s = quat8.subset([quat8.element_names.index("i"), quat8.element_names.index("-i")])
    t = (quat8.element_names.index("i"), quat8.element_names.index("j"))
    assert check_star_membership(gamma(2), s, t, 1)


def test_star_membership_sweep_gamma3(sym4):
    s = sym4.subset([i for i in range(24) if sym4.element_order(i) == 3])
    s.require_normal_subset()
    star = star_power(sym4, s, 4)
    rng = np.random.default_rng(5)
    for _ in range(30):
        t = [int(rng.integers(0, 24)) for _ in range(3)]
        t[1] = int(s.elements[rng.integers(0, s.size)])
        val = evaluate(gamma(3).to_word(), sym4, dict(zip(gamma(3).leaves(), t)))
        assert star.mask[val]
        assert check_star_membership(gamma(3), s, tuple(t), 2)


def test_star_membership_precondition(sym3):
    s = sym3.derived_subgroup().as_subset()
    with pytest.raises(PreconditionFailed):
        check_star_membership(gamma(2), s, (sym3.element_names.index("(1 2)"), 0), 1)


def test_width_examples(sym4):
    transpositions = sym4.subset(
        [i for i in range(24) if sum(1 for a, b in enumerate(sym4.perm_images[i]) if a != b) == 2]
    )
    transpositions.require_normal_subset()
    sets = [transpositions, transpositions]
    double = star_power(sym4, transpositions, 2)
    t1 = next(int(e) for e in double.elements if e not in transpositions and e != 0)
    t2 = int(transpositions.elements[0])
    assert check_width(gamma(2), sets, [2, 1], (t1, t2))
    assert check_width(gamma(2), sets, [1, 1], (t2, t2))
    # identity component: trivially inside any star power
    assert check_width(gamma(2), sets, [1, 3], (t2, 0))


def test_width_precondition(sym4):
    s = sym4.derived_subgroup().as_subset()
    outside = next(i for i in range(24) if not s.mask[i])
    with pytest.raises(PreconditionFailed):
        check_width(gamma(2), [s, s], [1, 1], (outside, 0))


def test_extended_width(sym4):
    s = class_generating_subset(sym4.full_subgroup())[0]
    v = classify_outer_commutator(parse_word("[[y1,y2],[x1,x2]]"))
    rng = np.random.default_rng(6)
    for _ in range(20):
        assignment = {
            xvar(1): int(s.elements[rng.integers(0, s.size)]),
            xvar(2): int(s.elements[rng.integers(0, s.size)]),
            yvar(1): int(rng.integers(0, 24)),
            yvar(2): int(rng.integers(0, 24)),
        }
        assert check_extended_width(v, gamma(2), [s, s], [1, 1], assignment)


def test_extended_width_identity_y_collapses(sym4):
    s = class_generating_subset(sym4.full_subgroup())[0]
    v = classify_outer_commutator(parse_word("[[y1,y2],[x1,x2]]"))
    assignment = {xvar(1): int(s.elements[1]), xvar(2): int(s.elements[2]), yvar(1): 0, yvar(2): 0}
    assert check_extended_width(v, gamma(2), [s, s], [1, 1], assignment)


def test_extended_width_rejects_non_extension(sym4):
    s = class_generating_subset(sym4.full_subgroup())[0]
    with pytest.raises(PreconditionFailed):
        check_extended_width(gamma(3), gamma(2), [s, s], [1, 1], {})


# ---------------------------------------------------------------------------
# linearity
# ---------------------------------------------------------------------------


def test_linearity_modulo_whole_group(sym3):
    rep = check_linearity(gamma(2), full_tuple(sym3, 2), 1, sym3.full_subgroup())
    assert rep.holds and rep.mode == "exhaustive"


def test_linearity_quat_central(quat8):
    center = quat8.center()
    rep = check_linearity(
        gamma(2), [quat8.full_subgroup(), center], 2, quat8.trivial_subgroup()
    )
    assert rep.holds


def test_linearity_sym3_fails_with_counterexample(sym3):
    rep = check_linearity(gamma(2), full_tuple(sym3, 2), 2, sym3.trivial_subgroup())
    assert not rep.holds
    ce = rep.counterexample
    word = gamma(2).to_word()
    lhs = evaluate(word, sym3, {xvar(1): ce["x1"], xvar(2): sym3.mul(ce["x2"], ce["y"])})
    rhs = sym3.mul(
        evaluate(word, sym3, {xvar(1): ce["x1"], xvar(2): ce["x2"]}),
        evaluate(word, sym3, {xvar(1): ce["x1"], xvar(2): ce["y"]}),
    )
    assert lhs != rhs


def test_linearity_sampled_agrees_with_exhaustive(sym3, quat8):
    rep = check_linearity(
        gamma(2), full_tuple(sym3, 2), 2, sym3.trivial_subgroup(),
        mode="sampled", seed=11, samples=3000,
    )
    assert not rep.holds  # dense failure set, 3000 samples cannot miss it
    rep2 = check_linearity(
        gamma(2), [quat8.full_subgroup(), quat8.center()], 2, quat8.trivial_subgroup(),
        mode="sampled", seed=11, samples=3000,
    )
    assert rep2.holds and rep2.verdict == "holds-sampled"


def test_linearity_sampled_requires_seed(sym3):
    with pytest.raises(PreconditionFailed):
        check_linearity(gamma(2), full_tuple(sym3, 2), 1, sym3.trivial_subgroup(), mode="sampled")


def test_linearity_budget(sym4):
    with pytest.raises(BudgetExceeded):
        check_linearity(gamma(3), full_tuple(sym4, 3), 1, sym4.trivial_subgroup(), budget=100)


def test_linearity_requires_normal_modulus(sym3):
    swap = closure(sym3, [sym3.element_names.index("(1 2)")])
    with pytest.raises(NotNormal):
        check_linearity(gamma(2), full_tuple(sym3, 2), 1, swap)


# ---------------------------------------------------------------------------
# collapse versus raw enumeration oracles
# ---------------------------------------------------------------------------


def _raw_linearity(G, tree, subgroups, position, modulus):
    """Plain nested-loop sweep of the full tuple space, no projection."""
    import itertools

    vars_ = variables(tree.to_word())
    sets = dict(zip(vars_, subgroups))
    pivot = vars_[position - 1]
    expr = tree.to_word()
    spaces = [list(map(int, sets[v].elements)) for v in vars_]
    for combo in itertools.product(*spaces):
        env = dict(zip(vars_, combo))
        for y in map(int, sets[pivot].elements):
            lhs = evaluate(expr, G, {**env, pivot: G.mul(env[pivot], y)})
            rhs = G.mul(
                evaluate(expr, G, env), evaluate(expr, G, {**env, pivot: y})
            )
            if not modulus.mask[G.mul(lhs, G.inv(rhs))]:
                return False
    return True


def test_linearity_collapse_matches_raw_enumeration(sym3, quat8):
    d3 = builtin_group("dih:3")
    cases = [
        (sym3, gamma(2), [sym3.full_subgroup()] * 2, 2, sym3.trivial_subgroup()),
        (sym3, gamma(2), [sym3.full_subgroup()] * 2, 2, sym3.derived_subgroup()),
        (sym3, gamma(2), [sym3.full_subgroup()] * 2, 1, sym3.trivial_subgroup()),
        (sym3, gamma(3), [sym3.full_subgroup(), sym3.derived_subgroup(), sym3.full_subgroup()], 2, sym3.trivial_subgroup()),
        (sym3, gamma(3), [sym3.full_subgroup()] * 3, 3, sym3.derived_subgroup()),
        (quat8, gamma(2), [quat8.full_subgroup(), quat8.center()], 2, quat8.trivial_subgroup()),
        (quat8, delta(2), [quat8.full_subgroup(), quat8.center(), quat8.derived_subgroup(), quat8.full_subgroup()], 1, quat8.trivial_subgroup()),
        (d3, gamma(2), [d3.full_subgroup(), d3.derived_subgroup()], 2, d3.trivial_subgroup()),
    ]
    for G, tree, subs, pos, modulus in cases:
        rep = check_linearity(tree, subs, pos, modulus)
        raw = _raw_linearity(G, tree, subs, pos, modulus)
        assert rep.holds == raw, (G.label, tree.render(), pos, rep.holds, raw)


def test_star_membership_collapse_matches_raw(sym3):
    # the swept form used by the harness versus scalar over the whole space
    import itertools

    s = class_generating_subset(sym3.full_subgroup())[0]
    tree = gamma(3)
    leaves = tree.leaves()
    star = star_power(sym3, s, 4)
    for pos in (1, 2, 3):
        raw_all = True
        for combo in itertools.product(range(6), repeat=2):
            for sv in map(int, s.elements):
                t = list(combo)
                t.insert(pos - 1, sv)
                val = evaluate(tree.to_word(), sym3, dict(zip(leaves, t)))
                raw_all &= bool(star.mask[val])
                assert check_star_membership(tree, s, tuple(t), pos) == bool(
                    star.mask[val]
                )
        assert raw_all


def test_value_set_witness_is_first_in_leaf_order(sym3):
    import itertools

    vs = value_set(gamma(2), [sym3.full_subgroup()] * 2)
    first: dict[int, tuple[int, int]] = {}
    for a, b in itertools.product(range(6), range(6)):
        val = sym3.comm(a, b)
        first.setdefault(val, (a, b))
    assert {v: w for v, w in vs.witnesses.items()} == first


# ---------------------------------------------------------------------------
# commutator congruence
# ---------------------------------------------------------------------------


def test_comm_congruence_exact_product(sym4):
    k = sym4.derived_subgroup()
    trivial = sym4.trivial_subgroup()
    y, z = int(k.elements[2]), int(k.elements[5])
    x = sym4.mul(y, z)
    n = int(k.elements[3])
    assert check_comm_congruence(sym4, k, trivial, k, x, y, z, n)


def test_comm_congruence_identity_n(sym4):
    k = sym4.derived_subgroup()
    y, z = int(k.elements[1]), int(k.elements[2])
    assert check_comm_congruence(sym4, k, k, k, sym4.mul(y, z), y, z, 0)


def test_comm_congruence_sym4_sweep(sym4):
    k = sym4.derived_subgroup()
    v4 = normal_closure(sym4, [next(i for i in range(24) if sym4.element_order(i) == 2 and k.mask[i])])
    rng = np.random.default_rng(7)
    for _ in range(40):
        y = int(k.elements[rng.integers(0, k.order)])
        z = int(k.elements[rng.integers(0, k.order)])
        ell = int(v4.elements[rng.integers(0, v4.order)])
        x = sym4.mul(sym4.mul(y, z), ell)
        n = int(k.elements[rng.integers(0, k.order)])
        assert check_comm_congruence(sym4, k, v4, k, x, y, z, n)


def test_comm_congruence_preconditions(sym4):
    k = sym4.derived_subgroup()
    with pytest.raises(PreconditionFailed):
        check_comm_congruence(sym4, k, k, k, 1, 0, 0, 0)  # 1 is odd, not in K
    y, z = int(k.elements[1]), int(k.elements[2])
    bad_x = sym4.mul(sym4.mul(y, z), next(i for i in range(24) if not k.mask[i]))
    with pytest.raises(PreconditionFailed):
        check_comm_congruence(sym4, k, sym4.trivial_subgroup(), k, bad_x, y, z, 0)
