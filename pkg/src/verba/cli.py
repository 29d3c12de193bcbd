"""Command-line surface: parsing, evaluation, series, suites, surveys.

Exit codes: 0 all pass, 1 verification failure, 2 usage or input error,
3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from .enumeration import DEFAULT_BUDGET
from .errors import (
    BudgetExceeded,
    InternalInvariantViolation,
    VerbaError,
)
from .groups import DEFAULT_ORDER_CAP, evaluate
from .harness import (
    CHECK_ID_SET,
    CheckSpec,
    DEFAULT_CATALOG,
    SurveyRow,
    conjecture_probe,
    parse_tuple_spec,
    resolve_group,
    resolve_word,
    run_check,
    run_suite,
    survey,
)
from .series import build_delta_series, build_gamma_series, verify_series
from .verbal import value_set, verbal_subgroup
from .words import (
    OcwTree,
    classify_outer_commutator,
    exponent_sum,
    is_non_commutator,
    parse_word,
    reduce_word,
    render,
    variables,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

SURVEY_HEADER = ["group", "order", "word", "tuple", "m", "verbal_order", "mode", "seed"]
SUITE_HEADER = ["check", "group", "word", "tuple", "mode", "status", "detail"]


@dataclass
class RunConfig:
    """Validated run parameters shared by the subcommands."""

    command: str
    group: str | None = None
    word: str | None = None
    tuple_spec: str | None = None
    mode: str = "exhaustive"
    seed: int | None = None
    budget: int = DEFAULT_BUDGET
    fmt: str = "table"
    out: str | None = None
    workers: int = 1
    cap: int = DEFAULT_ORDER_CAP

    def validate(self) -> "RunConfig":
        if self.budget < 1:
            raise VerbaError("budget must be at least 1")
        if self.mode == "sampled" and self.seed is None:
            raise VerbaError("sampled mode requires --seed")
        if self.workers < 1:
            raise VerbaError("workers must be at least 1")
        return self

    @property
    def effective_seed(self) -> int:
        return 0 if self.seed is None else self.seed


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="verba",
        description="Word values and verbal subgroups on normal subgroups of finite groups.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, group=True, word=True, tup=True):
        if group:
            p.add_argument("--group", required=True, help="builtin spec (e.g. sym:4) or group file path")
        if word:
            p.add_argument("--word", required=True, help="word text, gamma:r, or delta:k")
        if tup:
            p.add_argument("--tuple", dest="tuple_spec", help="tuple spec, e.g. G,derived,ncl(3)")
        p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--budget", type=int, default=None, help="enumeration budget (default 10^8 or VERBA_BUDGET)")
        p.add_argument("--format", dest="fmt", choices=["table", "csv", "jsonl"], default="table")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--cap", type=int, default=DEFAULT_ORDER_CAP, help="group order cap")

    p = sub.add_parser("parse", help="echo canonical form and classification of a word")
    p.add_argument("word")

    p = sub.add_parser("eval", help="evaluate a word at an assignment")
    common(p, tup=False)
    p.add_argument("--assign", required=True, help="comma list var=element-index, e.g. x1=2,x2=5")

    p = sub.add_parser("values", help="value set of a word over a tuple")
    common(p)

    p = sub.add_parser("verbal", help="verbal subgroup order and generators")
    common(p)

    p = sub.add_parser("series", help="build and verify a linear series")
    p.add_argument("kind", choices=["gamma", "delta"])
    common(p, word=False)
    p.add_argument("--r", type=int, default=None, help="gamma length (default: tuple arity)")
    p.add_argument("--k", type=int, default=None, help="delta depth (default: log2 of tuple arity)")
    p.add_argument("--audit", action="store_true", help="check construction-internal containments")

    p = sub.add_parser("check", help="run a single named check")
    p.add_argument("check_id", choices=list(CHECK_ID_SET))
    common(p)

    p = sub.add_parser("suite", help="run checks over a group catalog")
    common(p, group=False, word=False, tup=False)
    p.add_argument("--catalog", default=None, help="file with one group spec per line (default: builtin catalog)")
    p.add_argument("--ids", default=None, help="comma list of check ids (default: all)")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("survey", help="value-set size versus verbal subgroup order")
    common(p, group=False, tup=False)
    p.add_argument("--catalog", default=None)

    p = sub.add_parser("probe", help="survey for arbitrary outer commutator words")
    common(p, group=False, tup=False)
    p.add_argument("--catalog", default=None)

    return top


def _read_catalog(path: str | None) -> list[str]:
    if path is None:
        return list(DEFAULT_CATALOG)
    with open(path, "r", encoding="utf-8") as fh:
        return [ln.strip() for ln in fh if ln.strip() and not ln.strip().startswith("#")]


def _budget(args) -> int:
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get("VERBA_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _emit(lines: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(lines)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(lines)


def _format_rows(rows: list[dict], header: list[str], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([row[h] for h in header])
        return buf.getvalue()
    if fmt == "jsonl":
        return "".join(json.dumps(row, sort_keys=True) + "\n" for row in rows)
    widths = {h: max(len(h), *(len(str(r[h])) for r in rows)) if rows else len(h) for h in header}
    out = ["  ".join(h.ljust(widths[h]) for h in header)]
    for row in rows:
        out.append("  ".join(str(row[h]).ljust(widths[h]) for h in header))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_parse(args, cfg: RunConfig) -> int:
    expr = parse_word(args.word)
    tree = classify_outer_commutator(expr)
    non_comm, witness, esum = is_non_commutator(expr)
    lines = [f"canonical: {render(expr)}"]
    lines.append(f"outer-commutator: {'yes' if tree is not None else 'no'}")
    if non_comm:
        lines.append(f"non-commutator: yes ({witness} has exponent sum {esum})")
    else:
        lines.append("non-commutator: no")
    sums = ", ".join(f"{v}:{exponent_sum(expr, v)}" for v in variables(expr))
    lines.append(f"exponent sums: {sums}")
    lines.append(f"reduced: {reduce_word(expr)}")
    _emit("\n".join(lines) + "\n", None)
    return EXIT_OK


def _cmd_eval(args, cfg: RunConfig) -> int:
    G = resolve_group(args.group, cfg.cap)
    word, _ = resolve_word(args.word)
    expr = word.to_word() if isinstance(word, OcwTree) else word
    assignment = {}
    for part in args.assign.split(","):
        name, _, idx = part.strip().partition("=")
        var = parse_word(name)
        assignment[var] = G.check_index(int(idx))
    val = evaluate(expr, G, assignment)
    _emit(f"{val} ({G.element_name(val)})\n", cfg.out)
    return EXIT_OK


def _resolved(args, cfg: RunConfig, need_tuple=True):
    G = resolve_group(args.group, cfg.cap)
    word, label = resolve_word(args.word)
    arity = len(variables(word.to_word() if isinstance(word, OcwTree) else word))
    if getattr(args, "tuple_spec", None):
        tup = parse_tuple_spec(args.tuple_spec, G)
    elif need_tuple:
        tup = parse_tuple_spec(",".join(["G"] * arity), G)
    else:
        tup = None
    return G, word, label, tup


def _cmd_values(args, cfg: RunConfig) -> int:
    G, word, label, tup = _resolved(args, cfg)
    vs = value_set(word, [e.subgroup for e in tup.entries], cfg.budget)
    names = [G.element_name(int(v)) for v in vs.values]
    rows = [{"word": label, "tuple": ",".join(tup.labels or []), "m": vs.size,
             "values": " ".join(names)}]
    _emit(_format_rows(rows, ["word", "tuple", "m", "values"], cfg.fmt), cfg.out)
    return EXIT_OK


def _cmd_verbal(args, cfg: RunConfig) -> int:
    G, word, label, tup = _resolved(args, cfg)
    sub = verbal_subgroup(word, tup, cfg.budget)
    gens = [G.element_name(int(g)) for g in sub.generators[:12]]
    rows = [{"word": label, "tuple": ",".join(tup.labels or []), "order": sub.order,
             "generators": " ".join(gens) + (" ..." if len(sub.generators) > 12 else "")}]
    _emit(_format_rows(rows, ["word", "tuple", "order", "generators"], cfg.fmt), cfg.out)
    return EXIT_OK


def _cmd_series(args, cfg: RunConfig) -> int:
    G = resolve_group(args.group, cfg.cap)
    budget = cfg.budget
    if args.tuple_spec:
        tup = parse_tuple_spec(args.tuple_spec, G)
    else:
        if args.kind == "gamma":
            arity = args.r or 2
        else:
            arity = 2 ** (args.k or 1)
        tup = parse_tuple_spec(",".join(["G"] * arity), G)
    if args.kind == "gamma":
        series = build_gamma_series(tup, budget, audit=args.audit)
    else:
        k = args.k if args.k is not None else max(1, tup.arity.bit_length() - 1)
        series = build_delta_series(tup, k, budget)
    report = verify_series(series, mode=cfg.mode, seed=cfg.effective_seed, budget=budget)
    lines = [
        f"{args.kind} series on {G.label}, parameter {series.parameter}: "
        f"{len(series.factors)} factors"
    ]
    lines.append("terms (ascending): " + " <= ".join(str(t.order) for t in series.terms))
    rows = []
    for f, fr in zip(series.factors, report.factors):
        rows.append(
            {
                "factor": f.index,
                "provenance": f.provenance,
                "word": f.word.render(),
                "entries": ",".join(str(e.subgroup.order) for e in f.entries),
                "linear@": f.linear_position,
                "degree": f.degree,
                "section": f"{fr.upper_order}/{fr.lower_order}",
                "checks": "ok" if fr.ok else "FAIL",
                "linearity": fr.linearity.verdict,
            }
        )
    body = _format_rows(
        rows,
        ["factor", "provenance", "word", "entries", "linear@", "degree", "section", "checks", "linearity"],
        cfg.fmt,
    )
    _emit("\n".join(lines) + "\n" + body, cfg.out)
    return EXIT_OK if report.all_ok else EXIT_FAIL


def _cmd_check(args, cfg: RunConfig) -> int:
    spec = CheckSpec(
        check_id=args.check_id,
        group=args.group,
        word=args.word,
        tuple_spec=args.tuple_spec or "",
        mode=cfg.mode,
        seed=cfg.effective_seed,
    )
    if not spec.tuple_spec:
        word, _ = resolve_word(args.word)
        arity = len(variables(word.to_word() if isinstance(word, OcwTree) else word))
        spec = CheckSpec(args.check_id, args.group, args.word, ",".join(["G"] * arity), cfg.mode, cfg.effective_seed)
    res = run_check(spec, budget=cfg.budget, cap=cfg.cap)
    _emit(_format_rows([res.as_dict()], SUITE_HEADER, cfg.fmt), cfg.out)
    if res.status == "fail":
        return EXIT_FAIL
    if res.status == "skip-budget":
        return EXIT_BUDGET
    return EXIT_OK


def _cmd_suite(args, cfg: RunConfig) -> int:
    catalog = _read_catalog(args.catalog)
    ids = args.ids.split(",") if args.ids else None
    report = run_suite(
        catalog,
        ids=ids,
        seed=cfg.effective_seed,
        mode=cfg.mode,
        budget=cfg.budget,
        workers=cfg.workers,
        cap=cfg.cap,
    )
    rows = [r.as_dict() for r in report.rows]
    body = _format_rows(rows, SUITE_HEADER, cfg.fmt)
    _emit(body + report.summary() + "\n", cfg.out)
    if report.failures:
        return EXIT_FAIL
    if report.skipped:
        return EXIT_BUDGET
    return EXIT_OK


def _survey_rows(rows: list[SurveyRow]) -> list[dict]:
    return [r.as_dict() for r in rows]


def _cmd_survey(args, cfg: RunConfig) -> int:
    catalog = _read_catalog(args.catalog)
    rows = survey(catalog, args.word, seed=cfg.effective_seed, budget=cfg.budget, cap=cfg.cap)
    _emit(_format_rows(_survey_rows(rows), SURVEY_HEADER, cfg.fmt), cfg.out)
    return EXIT_OK if all(r.mode != "skipped" for r in rows) else EXIT_BUDGET


def _cmd_probe(args, cfg: RunConfig) -> int:
    catalog = _read_catalog(args.catalog)
    rows = conjecture_probe(catalog, args.word, seed=cfg.effective_seed, budget=cfg.budget, cap=cfg.cap)
    _emit(_format_rows(_survey_rows(rows), SURVEY_HEADER, cfg.fmt), cfg.out)
    return EXIT_OK if all(r.mode != "skipped" for r in rows) else EXIT_BUDGET


_COMMANDS = {
    "parse": _cmd_parse,
    "eval": _cmd_eval,
    "values": _cmd_values,
    "verbal": _cmd_verbal,
    "series": _cmd_series,
    "check": _cmd_check,
    "suite": _cmd_suite,
    "survey": _cmd_survey,
    "probe": _cmd_probe,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        cfg = RunConfig(
            command=args.command,
            group=getattr(args, "group", None),
            word=getattr(args, "word", None),
            tuple_spec=getattr(args, "tuple_spec", None),
            mode=getattr(args, "mode", "exhaustive"),
            seed=getattr(args, "seed", None),
            budget=_budget(args),
            fmt=getattr(args, "fmt", "table"),
            out=getattr(args, "out", None),
            workers=getattr(args, "workers", 1),
            cap=getattr(args, "cap", DEFAULT_ORDER_CAP),
        ).validate()
        return _COMMANDS[args.command](args, cfg)
    except BudgetExceeded as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except InternalInvariantViolation as exc:
        sys.stderr.write(f"internal invariant violated: {exc}\n")
        return EXIT_FAIL
    except VerbaError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"io error: {exc}\n")
        return EXIT_USAGE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
