"""Batch verification suites over a group catalog, plus survey and probe.

Every check id names one verification routine.  A suite row is one
(id, group, word, tuple) instance; its status is "pass" only when the
underlying sweep ran exhaustively.  Sampled runs report "sampled-pass" and
never count as full passes.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .enumeration import DEFAULT_BLOCK, DEFAULT_BUDGET, ProductSpace
from .errors import (
    ArityMismatch,
    BadIndex,
    BudgetExceeded,
    PreconditionFailed,
    UnknownCheckId,
    UnknownSpec,
    VerbaError,
)
from .groups import (
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    builtin_group,
    closure,
    load_group_file,
    normal_closure,
    star_power,
)
from .series import (
    build_delta_series,
    build_gamma_series,
    generator_bound_report,
    verify_series,
)
from .verbal import (
    NormalTuple,
    TupleEntry,
    check_generator_independence,
    check_disjoint_split,
    check_substitution,
    class_generating_subset,
    comm_congruence_modulus,
    spine_decompose,
    spine_eval,
    value_set,
    value_set_over,
    verbal_subgroup,
)
from .words import (
    OcwTree,
    Power,
    WordExpr,
    classify_outer_commutator,
    delta,
    enumerate_extended,
    gamma,
    parse_word,
    render,
    variables,
)

# One entry per verified statement; descriptions say what is checked, ids are
# the stable tokens used on the command line and in reports.
CHECK_IDS: tuple[tuple[str, str], ...] = (
    ("L2.1", "commutator word on disjoint halves equals the bracket of the half verbal subgroups"),
    ("L2.2", "substituted word has w*(G) = w(u1(G),...,ur(G))"),
    ("L2.3", "normal generating subsets generate the same verbal subgroup as the full subgroups"),
    ("L2.5", "value with one entry in a normal subset lies in its 2^(r-1) star power"),
    ("L2.6", "value with entries in m_i-star powers lies in the m1...mr star power of the value set"),
    ("L2.8", "commutator congruence [x,n] = [y,n][z,n] modulo [K,N,K][L,N]"),
    ("T2.10", "lower central linear series: containments, generation, linearity"),
    ("T2.11-bound", "lower central factor generating sets within m^(2^(r-1))"),
    ("C2.12", "value set over normal subgroups generates exactly the verbal subgroup (gamma)"),
    ("C2.13", "power words: g^n values, and gamma of powers equals the composed verbal subgroup"),
    ("L3.2", "extended-word values stay within the widened star power"),
    ("T3.6", "derived linear series: containments, generation, degree bounds, linearity"),
    ("T3.7-bound", "derived factor generating sets within m^(h^(2^k) 2^(k-1))"),
    ("C3.8", "value set over normal subgroups generates exactly the verbal subgroup (delta)"),
    ("C3.9", "power words: g^n values, and delta of powers equals the composed verbal subgroup"),
    ("CONJ", "arbitrary outer commutator: value set closure versus verbal subgroup"),
)

CHECK_ID_SET = tuple(i for i, _ in CHECK_IDS)

DEFAULT_CATALOG: tuple[str, ...] = tuple(
    [f"cyc:{n}" for n in range(1, 13)]
    + [f"dih:{n}" for n in range(2, 9)]
    + ["sym:3", "sym:4", "alt:4", "quat:8", "heis:3", "cyc:2 x sym:3", "cyc:3 x quat:8"]
)

PROBE_WORDS: tuple[str, ...] = ("[[x1,x2],x3,x4]", "[[x1,x2,x3],[[x4,x5],[x6,x7]]]")

_SUBSTITUTION_EXPONENTS = (2, 3)


@dataclass(frozen=True)
class CheckSpec:
    check_id: str
    group: str
    word: str
    tuple_spec: str
    mode: str = "exhaustive"
    seed: int = 0


@dataclass
class CheckResult:
    check_id: str
    group: str
    word: str
    tuple_spec: str
    mode: str
    status: str  # pass | fail | sampled-pass | skip-budget
    detail: str = ""

    @property
    def failed(self) -> bool:
        return self.status == "fail"

    def as_dict(self) -> dict:
        return {
            "check": self.check_id,
            "group": self.group,
            "word": self.word,
            "tuple": self.tuple_spec,
            "mode": self.mode,
            "status": self.status,
            "detail": self.detail,
        }


# ---------------------------------------------------------------------------
# spec resolution
# ---------------------------------------------------------------------------


def resolve_group(spec: str, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    import os

    if os.path.exists(spec):
        return load_group_file(spec, cap=cap)
    return builtin_group(spec, cap=cap)


def resolve_word(text: str) -> tuple[OcwTree | WordExpr, str]:
    """Word spec: gamma:r, delta:k, or literal word text."""
    m = re.fullmatch(r"gamma:(\d+)", text.strip())
    if m:
        return gamma(int(m.group(1))), text.strip()
    m = re.fullmatch(r"delta:(\d+)", text.strip())
    if m:
        return delta(int(m.group(1))), text.strip()
    expr = parse_word(text)
    tree = classify_outer_commutator(expr)
    return (tree if tree is not None else expr), render(expr)


def _require_ocw(word: OcwTree | WordExpr, what: str) -> OcwTree:
    if isinstance(word, OcwTree):
        return word
    tree = classify_outer_commutator(word)
    if tree is None:
        raise PreconditionFailed(f"{what} needs an outer commutator word")
    return tree


def parse_tuple_spec(text: str, G: FiniteGroup) -> NormalTuple:
    """Comma-separated entries: G, derived, center, ncl(i,...), set:(i,...);n=k."""
    entries: list[TupleEntry] = []
    labels: list[str] = []
    for part in _split_entries(text):
        part = part.strip()
        labels.append(part)
        if part == "G":
            entries.append(TupleEntry(G.full_subgroup()))
        elif part == "derived":
            entries.append(TupleEntry(G.derived_subgroup()))
        elif part == "center":
            entries.append(TupleEntry(G.center()))
        elif part.startswith("ncl(") and part.endswith(")"):
            idxs = _int_list(part[4:-1])
            entries.append(TupleEntry(normal_closure(G, idxs)))
        elif part.startswith("set:"):
            m = re.fullmatch(r"set:\(?([\d,\s]*)\)?;n=(\d+)", part)
            if not m:
                raise UnknownSpec(f"cannot parse tuple entry {part!r}")
            subset = G.subset(_int_list(m.group(1))).require_normal_subset()
            sub = closure(G, subset)
            entries.append(TupleEntry(sub, subset, int(m.group(2))))
        else:
            raise UnknownSpec(f"unknown tuple entry {part!r}")
    return NormalTuple(G, entries, labels=labels)


def _split_entries(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur:
        parts.append("".join(cur))
    if not parts:
        raise UnknownSpec("empty tuple spec")
    return parts


def _int_list(text: str) -> list[int]:
    out = []
    for tok in re.split(r"[,\s]+", text.strip()):
        if tok:
            if not tok.isdigit():
                raise BadIndex(f"element index {tok!r} is not a number")
            out.append(int(tok))
    return out


def default_tuple_specs(G: FiniteGroup, r: int, seed: int) -> list[str]:
    """Deterministic tuple specs exercising proper normal subgroups too."""
    specs = [",".join(["G"] * r)]
    specs.append(",".join(["derived"] * r))
    specs.append(",".join(["center"] * r))
    cycle = ["G", "derived", "center"]
    specs.append(",".join(cycle[i % 3] for i in range(r)))
    if G.order > 1:
        rng = np.random.default_rng([seed, G.order, *G.label.encode()])
        picks = [int(rng.integers(1, G.order)) for _ in range(r)]
        specs.append(",".join(f"ncl({p})" for p in picks))
    seen: dict[tuple[bytes, ...], str] = {}
    out = []
    for spec in specs:
        tup = parse_tuple_spec(spec, G)
        key = tuple(e.subgroup.key for e in tup.entries)
        if key not in seen:
            seen[key] = spec
            out.append(spec)
    return out


def _with_class_subsets(tup: NormalTuple) -> NormalTuple:
    entries = []
    for e in tup.entries:
        subset, n = class_generating_subset(e.subgroup)
        entries.append(TupleEntry(e.subgroup, subset, n))
    return NormalTuple(tup.group, entries, labels=tup.labels)


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------


def _result(spec: CheckSpec, status: str, detail: str = "") -> CheckResult:
    if status == "pass" and spec.mode == "sampled":
        status = "sampled-pass"  # a sampled run never counts as a full pass
    return CheckResult(
        check_id=spec.check_id,
        group=spec.group,
        word=spec.word,
        tuple_spec=spec.tuple_spec,
        mode=spec.mode,
        status=status,
        detail=detail,
    )


def _check_disjoint(spec, G, word, tup, budget) -> CheckResult:
    tree = _require_ocw(word, "L2.1")
    if tree.is_leaf:
        return _result(spec, "pass", "single variable, nothing to split")
    rep = check_disjoint_split(tree, tup, budget)
    detail = f"|w(N)|={rep.whole.order} |[alpha,beta]|={rep.left.order}x{rep.right.order}"
    return _result(spec, "pass" if rep.equal else "fail", detail)


def _check_substitution(spec, G, word, tup, budget) -> CheckResult:
    tree = _require_ocw(word, "L2.2")
    leaves = tree.leaves()
    worst = ""
    for combo in range(2 ** len(leaves)):
        exps = [
            _SUBSTITUTION_EXPONENTS[(combo >> i) & 1] for i in range(len(leaves))
        ]
        args = [Power(v, e) for v, e in zip(leaves, exps)]
        rep = check_substitution(tree, args, G, budget)
        if not rep.equal:
            return _result(
                spec,
                "fail",
                f"exponents {tuple(exps)}: {rep.direct_order} != {rep.composed_order}",
            )
        worst = f"last orders {rep.direct_order}={rep.composed_order}"
    return _result(spec, "pass", f"{2 ** len(leaves)} exponent patterns; {worst}")


def _check_generators(spec, G, word, tup, budget) -> CheckResult:
    tree = _require_ocw(word, "L2.3")
    rich = _with_class_subsets(tup)
    ok, via_s, via_n = check_generator_independence(tree, rich, budget)
    return _result(spec, "pass" if ok else "fail", f"|<w{{S}}>|={via_s} |<w{{N}}>|={via_n}")


def _check_star_membership_sweep(spec, G, word, tup, budget) -> CheckResult:
    tree = _require_ocw(word, "L2.5")
    leaves = tree.leaves()
    full = G.full_subgroup()
    checked = 0
    for pos, leaf in enumerate(leaves, start=1):
        subset, _ = class_generating_subset(tup.subgroups[pos - 1])
        star = star_power(G, subset, 2 ** (len(leaves) - 1))
        env = {v: full for v in leaves}
        path = spine_decompose(tree, leaf)
        sib_sets = [value_set_over(sub.to_word(), env, budget) for sub, _ in path]
        axes = [vs.values.astype(np.int64) for vs in sib_sets] + [
            subset.elements.astype(np.int64)
        ]
        space = ProductSpace(axes).require_within(budget, "star membership sweep")
        for start, cols in space.blocks(DEFAULT_BLOCK):
            vals = spine_eval(G, path, cols[-1], cols[:-1])
            ok = star.mask[vals]
            if not ok.all():
                flat = start + int(np.flatnonzero(~ok)[0])
                return _result(
                    spec, "fail", f"position {pos}, point {space.tuple_at(flat)}"
                )
        checked += space.size
    return _result(spec, "pass", f"{checked} collapsed tuples over {len(leaves)} positions")


_WIDTH_VECTORS = ((1,), (2,))


def _width_vectors(r: int) -> list[tuple[int, ...]]:
    out = [tuple([1] * r), tuple([2] + [1] * (r - 1))]
    if r > 1:
        out.append(tuple([1] * (r - 1) + [2]))
    out.append(tuple([2] * r))
    return out


def _check_width_sweep(spec, G, word, tup, budget) -> CheckResult:
    tree = _require_ocw(word, "L2.6")
    leaves = tree.leaves()
    subsets = [class_generating_subset(s)[0] for s in tup.subgroups]
    base = value_set(tree, subsets, budget)
    checked = 0
    for mvec in _width_vectors(len(leaves)):
        starred = [star_power(G, s, m) for s, m in zip(subsets, mvec)]
        vs = value_set(tree, starred, budget)
        total = 1
        for m in mvec:
            total *= m
        star = star_power(G, base.members, total)
        bad = vs.values[~star.mask[vs.values]]
        if bad.size:
            wit = vs.witnesses[int(bad[0])]
            return _result(spec, "fail", f"m={mvec}, value {int(bad[0])} from {wit}")
        checked += vs.size
    return _result(spec, "pass", f"{len(_width_vectors(len(leaves)))} multiplicity vectors")


def _check_comm_congruence_sweep(spec, G, word, tup, budget) -> CheckResult:
    subs = tup.subgroups
    K = subs[0]
    L = subs[1 % len(subs)]
    N = subs[2 % len(subs)]
    modulus = comm_congruence_modulus(K, L, N)
    lk = G.subset_from_mask(K.mask & L.mask)
    space = ProductSpace(
        [
            K.elements.astype(np.int64),
            K.elements.astype(np.int64),
            lk.elements.astype(np.int64),
            N.elements.astype(np.int64),
        ]
    ).require_within(budget, "commutator congruence sweep")
    for start, (yv, zv, lv, nv) in space.blocks(DEFAULT_BLOCK):
        xv = G.mul_arr(G.mul_arr(yv, zv), lv)
        lhs = G.comm_arr(xv, nv)
        rhs = G.mul_arr(G.comm_arr(yv, nv), G.comm_arr(zv, nv))
        ok = modulus.mask[G.mul_arr(lhs, G.inverse_table[rhs])]
        if not ok.all():
            flat = start + int(np.flatnonzero(~ok)[0])
            return _result(spec, "fail", f"(y,z,l,n)={space.tuple_at(flat)}")
    return _result(
        spec,
        "pass",
        f"|K|={K.order} |L|={L.order} |N|={N.order} modulus={modulus.order} ({space.size} tuples)",
    )


def _check_gamma_series(spec, G, word, tup, budget) -> CheckResult:
    r = tup.arity
    series = build_gamma_series(tup, budget, audit=G.order <= 48)
    rep = verify_series(series, mode=spec.mode, seed=spec.seed, budget=budget)
    status = "pass" if rep.all_ok else "fail"
    detail = f"{rep.factor_count} factors, orders {[t.order for t in series.terms]}"
    if not rep.all_ok:
        bad = [f.index for f in rep.factors if not f.ok]
        detail += f"; failing factors {bad}"
    return _result(spec, status, detail)


def _check_delta_series(spec, G, word, tup, budget) -> CheckResult:
    tree = _require_ocw(word, "T3.6")
    k = max(1, len(tree.leaves()).bit_length() - 1)
    series = build_delta_series(tup, k, budget)
    rep = verify_series(series, mode=spec.mode, seed=spec.seed, budget=budget)
    status = "pass" if rep.all_ok else "fail"
    detail = f"t={rep.factor_count}, orders {[t.order for t in series.terms]}"
    if not rep.all_ok:
        bad = [f.index for f in rep.factors if not f.ok]
        detail += f"; failing factors {bad}"
    return _result(spec, status, detail)


def _check_gamma_bound(spec, G, word, tup, budget) -> CheckResult:
    series = build_gamma_series(_with_class_subsets(tup), budget)
    rep = generator_bound_report(series, budget)
    detail = f"m={rep.base_values}, observed {[r.observed for r in rep.rows]}"
    return _result(spec, "pass" if rep.all_ok else "fail", detail)


def _check_delta_bound(spec, G, word, tup, budget) -> CheckResult:
    tree = _require_ocw(word, "T3.7-bound")
    k = max(1, len(tree.leaves()).bit_length() - 1)
    series = build_delta_series(_with_class_subsets(tup), k, budget)
    rep = generator_bound_report(series, budget)
    detail = f"m={rep.base_values}, observed {[r.observed for r in rep.rows]}"
    return _result(spec, "pass" if rep.all_ok else "fail", detail)


def _check_concise_on_normal(spec, G, word, tup, budget) -> CheckResult:
    """Value set computed two independent ways; its closure is the verbal subgroup."""
    tree = _require_ocw(word, spec.check_id)
    sets = [s.as_subset() for s in tup.subgroups]
    vs = value_set(tree, sets, budget)
    direct = _value_set_by_direct_enumeration(tree, sets, G, budget)
    if direct is not None and (
        direct.shape != vs.values.shape or not np.array_equal(direct, vs.values)
    ):
        return _result(spec, "fail", "factorised and direct value sets differ")
    sub = closure(G, vs.members)
    verbal = verbal_subgroup(tree, tup, budget)
    ok = sub == verbal and G.order % sub.order == 0 and bool(sub.mask[vs.values].all())
    return _result(
        spec,
        "pass" if ok else "fail",
        f"m={vs.size} |w(N)|={sub.order}",
    )


def _value_set_by_direct_enumeration(tree, sets, G, budget) -> np.ndarray | None:
    """Raw assignment-space enumeration, as an independent cross-check."""
    from .groups import evaluate_arrays

    vars_ = variables(tree.to_word())
    space = ProductSpace([s.elements.astype(np.int64) for s in sets])
    limit = DEFAULT_BUDGET if budget is None else budget
    if space.size > min(limit, 2_000_000):  # keep the oracle cheap
        return None
    seen = np.zeros(G.order, dtype=bool)
    expr = tree.to_word()
    for _, cols in space.blocks(DEFAULT_BLOCK):
        seen[evaluate_arrays(expr, G, dict(zip(vars_, cols)))] = True
    return np.flatnonzero(seen).astype(np.int64)


def _check_power_words(spec, G, word, tup, budget) -> CheckResult:
    """Non-commutator argument words: their value sets absorb n-th powers and
    composition matches substitution."""
    tree = _require_ocw(word, spec.check_id)
    leaves = tree.leaves()
    exps = [_SUBSTITUTION_EXPONENTS[i % 2] for i in range(len(leaves))]
    args = [Power(v, e) for v, e in zip(leaves, exps)]
    everyone = np.arange(G.order, dtype=np.int64)
    for u, e in zip(args, exps):
        # u evaluated at a single non-identity entry returns the e-th power
        from .groups import evaluate_arrays

        if not np.array_equal(
            evaluate_arrays(u, G, {u.child: everyone}), G.pow_arr(everyone, e)
        ):
            return _result(spec, "fail", f"u = x^{e} does not evaluate to powers")
        uv = value_set_over(u, {u.child: G.full_subgroup()}, budget)
        if not uv.members.mask[G.pow_arr(everyone, e)].all():
            return _result(spec, "fail", f"some g^{e} lies outside the value set")
    rep = check_substitution(tree, args, G, budget)
    detail = f"exponents {tuple(exps)}, orders {rep.direct_order}={rep.composed_order}"
    return _result(spec, "pass" if rep.equal else "fail", detail)


def _check_extended_width_sweep(spec, G, word, tup, budget) -> CheckResult:
    tree = _require_ocw(word, "L3.2")
    leaves = tree.leaves()
    subsets = [class_generating_subset(s)[0] for s in tup.subgroups]
    base = value_set(tree, subsets, budget)
    full = G.full_subgroup()
    degree = 1
    ext = enumerate_extended(tree, degree, 2)
    checked = 0
    for mvec in (tuple([1] * len(leaves)), tuple([2] + [1] * (len(leaves) - 1))):
        total = 2**degree
        for m in mvec:
            total *= m
        star = star_power(G, base.members, total)
        starred = {
            leaf: star_power(G, s, m) for leaf, s, m in zip(leaves, subsets, mvec)
        }
        for member in ext:
            env = {}
            for v in member.leaves():
                env[v] = starred[v] if v in starred else full
            vs = value_set_over(member.to_word(), env, budget)
            bad = vs.values[~star.mask[vs.values]]
            if bad.size:
                return _result(
                    spec,
                    "fail",
                    f"{member.render()} with m={mvec}: value {int(bad[0])} escapes",
                )
            checked += 1
    return _result(spec, "pass", f"{len(ext)} extended words x 2 multiplicity vectors")


def _check_probe(spec, G, word, tup, budget) -> CheckResult:
    tree = _require_ocw(word, "CONJ")
    if len(tree.leaves()) > 7:
        raise PreconditionFailed("probe words are capped at 7 leaves")
    sets = [s.as_subset() for s in tup.subgroups]
    vs = value_set(tree, sets, budget)
    sub = closure(G, vs.members)
    verbal = verbal_subgroup(tree, tup, budget)
    ok = sub == verbal and G.order % sub.order == 0
    return _result(spec, "pass" if ok else "fail", f"m={vs.size} |w(N)|={sub.order}")


_CHECK_TABLE: dict[str, Callable] = {
    "L2.1": _check_disjoint,
    "L2.2": _check_substitution,
    "L2.3": _check_generators,
    "L2.5": _check_star_membership_sweep,
    "L2.6": _check_width_sweep,
    "L2.8": _check_comm_congruence_sweep,
    "T2.10": _check_gamma_series,
    "T2.11-bound": _check_gamma_bound,
    "C2.12": _check_concise_on_normal,
    "C2.13": _check_power_words,
    "L3.2": _check_extended_width_sweep,
    "T3.6": _check_delta_series,
    "T3.7-bound": _check_delta_bound,
    "C3.8": _check_concise_on_normal,
    "C3.9": _check_power_words,
    "CONJ": _check_probe,
}


def run_check(
    spec: CheckSpec,
    G: FiniteGroup | None = None,
    budget: int | None = None,
    cap: int = DEFAULT_ORDER_CAP,
) -> CheckResult:
    """Dispatch one check; resolution errors become failed results upstream."""
    if spec.check_id not in _CHECK_TABLE:
        raise UnknownCheckId(f"unknown check id {spec.check_id!r}")
    group = G if G is not None else resolve_group(spec.group, cap)
    word, _ = resolve_word(spec.word) if spec.word != "-" else (gamma(1), "-")
    if spec.word == "-":
        arity = 3
        word = None
    else:
        arity = len(variables(word.to_word() if isinstance(word, OcwTree) else word))
    tup = parse_tuple_spec(spec.tuple_spec, group)
    if tup.arity != arity and spec.word != "-":
        raise ArityMismatch(
            f"word {spec.word} needs {arity} tuple entries, got {tup.arity}"
        )
    try:
        return _CHECK_TABLE[spec.check_id](spec, group, word, tup, budget)
    except BudgetExceeded as exc:
        return _result(spec, "skip-budget", str(exc))


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------


@dataclass
class SuiteReport:
    rows: list[CheckResult]
    seed: int

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.rows if r.failed]

    @property
    def skipped(self) -> list[CheckResult]:
        return [r for r in self.rows if r.status == "skip-budget"]

    @property
    def all_pass(self) -> bool:
        return all(r.status == "pass" for r in self.rows)

    def summary(self) -> str:
        counts: dict[str, int] = {}
        for r in self.rows:
            counts[r.status] = counts.get(r.status, 0) + 1
        parts = [f"{k}={v}" for k, v in sorted(counts.items())]
        return f"{len(self.rows)} checks: " + ", ".join(parts)


def _words_for(check_id: str, G: FiniteGroup) -> list[str]:
    small = G.order <= 24
    if check_id in ("L2.1", "L2.3", "L2.5", "L2.6", "L2.2"):
        return ["gamma:2", "gamma:3", "delta:2"]
    if check_id == "L2.8":
        return ["-"]
    if check_id == "T2.10":
        words = ["gamma:1", "gamma:2", "gamma:3"]
        if G.order <= 16:
            words.append("gamma:4")
        return words
    if check_id in ("T2.11-bound", "C2.12"):
        return ["gamma:2", "gamma:3"]
    if check_id == "C2.13":
        return ["gamma:2", "gamma:3"]
    if check_id == "L3.2":
        return ["gamma:2", "delta:2"]
    if check_id == "T3.6":
        return ["delta:1"] + (["delta:2"] if small else [])
    if check_id == "T3.7-bound":
        return ["delta:1"] + (["delta:2"] if small else [])
    if check_id in ("C3.8", "C3.9"):
        return ["delta:2"] if small else ["delta:1"]
    if check_id == "CONJ":
        return list(PROBE_WORDS)
    raise UnknownCheckId(check_id)


def _tuples_for(check_id: str, G: FiniteGroup, arity: int, seed: int) -> list[str]:
    if check_id in ("T3.6", "T3.7-bound"):
        specs = [",".join(["G"] * arity), ",".join(["derived"] * arity)]
        seen, out = set(), []
        for s in specs:
            key = tuple(e.subgroup.key for e in parse_tuple_spec(s, G).entries)
            if key not in seen:
                seen.add(key)
                out.append(s)
        return out
    return default_tuple_specs(G, arity, seed)


def build_suite_specs(
    catalog: Sequence[str],
    ids: Sequence[str],
    seed: int = 0,
    mode: str = "exhaustive",
    cap: int = DEFAULT_ORDER_CAP,
) -> tuple[list[CheckSpec], dict[str, FiniteGroup]]:
    for check_id in ids:
        if check_id not in _CHECK_TABLE:
            raise UnknownCheckId(f"unknown check id {check_id!r}")
    groups: dict[str, FiniteGroup] = {}
    specs: list[CheckSpec] = []
    for gspec in catalog:
        if gspec not in groups:
            groups[gspec] = resolve_group(gspec, cap)
        G = groups[gspec]
        for check_id in CHECK_ID_SET:
            if check_id not in ids:
                continue
            for wspec in _words_for(check_id, G):
                if wspec == "-":
                    arity = 3
                else:
                    word, _ = resolve_word(wspec)
                    arity = len(
                        variables(word.to_word() if isinstance(word, OcwTree) else word)
                    )
                for tspec in _tuples_for(check_id, G, arity, seed):
                    specs.append(
                        CheckSpec(
                            check_id=check_id,
                            group=gspec,
                            word=wspec,
                            tuple_spec=tspec,
                            mode=mode,
                            seed=seed,
                        )
                    )
    return specs, groups


def run_suite(
    catalog: Sequence[str],
    ids: Sequence[str] | None = None,
    seed: int = 0,
    mode: str = "exhaustive",
    budget: int | None = None,
    workers: int = 1,
    cap: int = DEFAULT_ORDER_CAP,
) -> SuiteReport:
    """Cartesian sweep of checks over the catalog; deterministic row order."""
    ids = list(ids) if ids is not None else list(CHECK_ID_SET)
    specs, groups = build_suite_specs(catalog, ids, seed=seed, mode=mode, cap=cap)

    def job(spec: CheckSpec) -> CheckResult:
        try:
            return run_check(spec, G=groups[spec.group], budget=budget, cap=cap)
        except VerbaError as exc:
            return _result(spec, "fail", f"{type(exc).__name__}: {exc}")

    if workers <= 1:
        rows = [job(s) for s in specs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(job, specs))
    return SuiteReport(rows=rows, seed=seed)


# ---------------------------------------------------------------------------
# survey and probe
# ---------------------------------------------------------------------------


@dataclass
class SurveyRow:
    group: str
    order: int
    word: str
    tuple_spec: str
    m: int
    verbal_order: int
    factor_orders: tuple[int, ...]
    mode: str
    seed: int

    def as_dict(self) -> dict:
        return {
            "group": self.group,
            "order": self.order,
            "word": self.word,
            "tuple": self.tuple_spec,
            "m": self.m,
            "verbal_order": self.verbal_order,
            "mode": self.mode,
            "seed": self.seed,
        }


def survey(
    catalog: Sequence[str],
    word_spec: str,
    seed: int = 0,
    budget: int | None = None,
    cap: int = DEFAULT_ORDER_CAP,
) -> list[SurveyRow]:
    """One row per (group, tuple): m = |w{N}| against |w(N)|, plus the factor
    orders of the linear series when the word is a gamma or delta word."""
    word, label = resolve_word(word_spec)
    tree = _require_ocw(word, "survey")
    arity = len(tree.leaves())
    rows: list[SurveyRow] = []
    for gspec in catalog:
        G = resolve_group(gspec, cap)
        for tspec in default_tuple_specs(G, arity, seed):
            tup = parse_tuple_spec(tspec, G)
            try:
                vs = value_set(tree, [s.as_subset() for s in tup.subgroups], budget)
                sub = closure(G, vs.members)
                factors: tuple[int, ...] = ()
                if re.fullmatch(r"gamma:\d+", label):
                    series = build_gamma_series(tup, budget)
                    factors = tuple(
                        f.upper.order // f.lower.order for f in series.factors
                    )
                elif re.fullmatch(r"delta:\d+", label):
                    k = max(1, arity.bit_length() - 1)
                    series = build_delta_series(tup, k, budget)
                    factors = tuple(
                        f.upper.order // f.lower.order for f in series.factors
                    )
                rows.append(
                    SurveyRow(
                        group=gspec,
                        order=G.order,
                        word=label,
                        tuple_spec=tspec,
                        m=vs.size,
                        verbal_order=sub.order,
                        factor_orders=factors,
                        mode="exhaustive",
                        seed=seed,
                    )
                )
            except BudgetExceeded:
                rows.append(
                    SurveyRow(
                        group=gspec,
                        order=G.order,
                        word=label,
                        tuple_spec=tspec,
                        m=0,
                        verbal_order=0,
                        factor_orders=(),
                        mode="skipped",
                        seed=seed,
                    )
                )
    rows.sort(key=lambda r: (r.m, r.order, r.group, r.tuple_spec))
    return rows


def conjecture_probe(
    catalog: Sequence[str],
    word_spec: str,
    seed: int = 0,
    budget: int | None = None,
    cap: int = DEFAULT_ORDER_CAP,
) -> list[SurveyRow]:
    """Survey rows for arbitrary outer commutator words (<= 7 leaves); the
    closure of the value set is checked to equal the verbal subgroup."""
    word, label = resolve_word(word_spec)
    tree = _require_ocw(word, "probe")
    if len(tree.leaves()) > 7:
        raise PreconditionFailed("probe words are capped at 7 leaves")
    rows = []
    for gspec in catalog:
        G = resolve_group(gspec, cap)
        for tspec in default_tuple_specs(G, len(tree.leaves()), seed):
            tup = parse_tuple_spec(tspec, G)
            try:
                vs = value_set(tree, [s.as_subset() for s in tup.subgroups], budget)
                sub = closure(G, vs.members)
                verbal = verbal_subgroup(tree, tup, budget)
                if sub != verbal:
                    raise VerbaError("value-set closure differs from verbal subgroup")
                rows.append(
                    SurveyRow(
                        group=gspec,
                        order=G.order,
                        word=label,
                        tuple_spec=tspec,
                        m=vs.size,
                        verbal_order=sub.order,
                        factor_orders=(),
                        mode="exhaustive",
                        seed=seed,
                    )
                )
            except BudgetExceeded:
                rows.append(
                    SurveyRow(
                        group=gspec,
                        order=G.order,
                        word=label,
                        tuple_spec=tspec,
                        m=0,
                        verbal_order=0,
                        factor_orders=(),
                        mode="skipped",
                        seed=seed,
                    )
                )
    rows.sort(key=lambda r: (r.m, r.order, r.group, r.tuple_spec))
    return rows
