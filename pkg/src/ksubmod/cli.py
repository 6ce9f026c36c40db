"""Command line: ``ksubmod solve | generate | validate | bench``.

Exit codes: 0 success, 2 usage, 3 parse error, 4 validation failure,
5 budget exceeded, 6 guarantee violation.

Budgets can be raised through KSUBMOD_TABLE_BUDGET, KSUBMOD_PAIR_BUDGET,
KSUBMOD_MATROID_BUDGET and KSUBMOD_EXACT_BUDGET.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .core import BudgetExceeded, LabeledSet, budget, format_value
from .exact import CSV_COLUMNS, GuaranteeViolation, brute_force_opt, lemma1_check, ratio, ratio_harness
from .functions import Check, is_k_submodular, is_monotone
from .greedy import greedy_maximize
from .instance import MATROID_TYPES, Instance, InstanceError, parse_instance, random_instance
from .matroids import rank, validate_axioms

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_INVALID = 4
EXIT_BUDGET = 5
EXIT_GUARANTEE = 6


def _jsonable(obj):
    from fractions import Fraction

    if isinstance(obj, Fraction):
        return format_value(obj)
    if isinstance(obj, LabeledSet):
        return obj.as_dict()
    if isinstance(obj, (frozenset, set)):
        return sorted(obj)
    if isinstance(obj, (tuple, list)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    return obj


def _check_entry(check: Check) -> dict:
    out = {"ok": check.ok}
    if not check.ok:
        out["witness"] = _jsonable(check.witness)
        out["detail"] = check.detail
    return out


def validation_report(inst: Instance) -> dict:
    f, m = inst.build()
    return {
        "monotone": _check_entry(is_monotone(f)),
        "k_submodular": _check_entry(is_k_submodular(f)),
        "matroid_axioms": _check_entry(validate_axioms(m)),
    }


def _validation_passed(v: dict) -> bool:
    return all(entry["ok"] for entry in v.values())


def solve_report(inst: Instance, *, exact=False, validate=False, trace=False, lazy=False) -> tuple[dict, int]:
    """Run the greedy (and optional extras) and return (report, exit code)."""
    code = EXIT_OK
    report: dict = {
        "instance": {
            "name": inst.name,
            "digest": inst.digest(),
            "n": inst.ground.n,
            "k": inst.k,
            "function": inst.function_spec["type"],
            "matroid": inst.matroid_spec["type"],
        }
    }
    validation = None
    if validate or inst.matroid_spec["type"] == "explicit":
        validation = validation_report(inst) if validate else {
            "matroid_axioms": _check_entry(validate_axioms(inst.build()[1]))
        }
        report["validation"] = validation
        if not _validation_passed(validation):
            code = EXIT_INVALID
            if not validation["matroid_axioms"]["ok"]:
                report["verdict"] = "FAIL"
                return report, code

    f, m = inst.build()
    solution, tr = greedy_maximize(f, m, lazy=lazy)
    M = rank(inst.build()[1])
    n, k = inst.ground.n, inst.k
    greedy = {
        "mode": "lazy" if lazy else "plain",
        "objective": format_value(tr.value),
        "offset": format_value(tr.offset),
        "solution": solution.as_dict(),
        "support_size": len(solution.support_positions()),
        "iterations": tr.iterations,
        "notes": list(tr.notes),
    }
    if trace:
        greedy["trace"] = [
            {
                "j": s.j,
                "element": s.element,
                "label": s.label,
                "gain": format_value(s.gain),
                "value": format_value(s.value),
                "membership_calls": s.membership_calls,
                "eval_calls": s.eval_calls,
            }
            for s in tr.steps
        ]
        greedy["final_membership_calls"] = tr.final_membership_calls
    report["greedy"] = greedy
    calls = {
        "rank": M,
        "membership": tr.membership_calls,
        "membership_budget": M * n,
        "evaluation": tr.eval_calls,
        "evaluation_budget": k * M * n + 1,
    }
    calls["within_budget"] = calls["membership"] <= calls["membership_budget"] and calls["evaluation"] <= calls["evaluation_budget"]
    if M == 0 and n:
        calls["note"] = "rank 0: confirming that nothing fits needs one query per element"
    report["oracle_calls"] = calls

    if exact:
        f2, m2 = inst.build()
        res = brute_force_opt(f2, m2)
        r = ratio(tr.value, res.opt_value)
        applicable = not tr.guarantee_void
        if (k + 1) ** n <= budget("pairs"):
            applicable = applicable and bool(is_monotone(f2)) and bool(is_k_submodular(f2))
        if 2 * tr.value >= res.opt_value:
            verdict = "PASS"
        else:
            verdict = "FAIL" if applicable else "N/A"
        report["exact"] = {
            "opt_value": format_value(res.opt_value),
            "optimal_solution": res.solution.as_dict(),
            "count_optima": res.count_optima,
            "max_opt_support_size": res.max_opt_support_size,
            "ratio": format_value(r),
            "ratio_float": round(float(r), 6),
            "guarantee": verdict,
            "lemma1": lemma1_check(f2, m2, result=res) if applicable else None,
        }
        if verdict == "FAIL":
            report["failing_instance"] = inst.to_dict()
            code = EXIT_GUARANTEE
    report["verdict"] = "FAIL" if code else "PASS"
    return report, code


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    lines: list[tuple[str, str]] = []

    def walk(prefix, obj):
        if isinstance(obj, dict) and obj and not prefix.endswith("solution"):
            for key, value in obj.items():
                walk(f"{prefix}.{key}" if prefix else key, value)
        elif isinstance(obj, list) and obj and isinstance(obj[0], dict):
            for idx, value in enumerate(obj):
                walk(f"{prefix}[{idx}]", value)
        else:
            lines.append((prefix, json.dumps(obj, ensure_ascii=False) if not isinstance(obj, str) else obj))

    walk("", report)
    width = max((len(key) for key, _ in lines), default=0)
    return "".join(f"{key.ljust(width)}  {value}\n" for key, value in lines)


# ---------------------------------------------------------------- commands


def cmd_solve(args) -> int:
    inst = parse_instance(Path(args.instance))
    report, code = solve_report(inst, exact=args.exact, validate=args.validate, trace=args.trace, lazy=args.lazy)
    if args.timestamp:
        report["generated_at"] = datetime.now(timezone.utc).isoformat()
    sys.stdout.write(render(report, args.format))
    return code


def generate_instances(*, n, k, matroid, function, seed, count) -> list[Instance]:
    rng = np.random.default_rng(seed)
    out = []
    for idx in range(count):
        name = f"{function}-{matroid}-n{n}-k{k}-seed{seed}-{idx:03d}"
        out.append(random_instance(rng, n=n, k=k, matroid=matroid, function=function, name=name))
    return out


def cmd_generate(args) -> int:
    if args.function == "table" and (args.k + 1) ** args.n > budget("table"):
        raise BudgetExceeded(f"(k+1)^n = {(args.k + 1) ** args.n} exceeds the table budget {budget('table')}")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for inst in generate_instances(n=args.n, k=args.k, matroid=args.matroid, function=args.function,
                                   seed=args.seed, count=args.count):
        path = out_dir / f"{inst.name}.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(inst.dumps(), encoding="utf-8")
        tmp.replace(path)
        print(path)
    return EXIT_OK


def cmd_validate(args) -> int:
    inst = parse_instance(Path(args.instance))
    v = validation_report(inst)
    report = {"instance": {"name": inst.name, "digest": inst.digest()}, "validation": v,
              "verdict": "PASS" if _validation_passed(v) else "FAIL"}
    sys.stdout.write(render(report, args.format))
    return EXIT_OK if _validation_passed(v) else EXIT_INVALID


def cmd_bench(args) -> int:
    paths = sorted(Path(args.dir).glob("*.json"))
    instances = (parse_instance(p) for p in paths)
    try:
        report = ratio_harness(instances, lazy=args.lazy)
    except GuaranteeViolation as exc:
        dump = Path(f"violation-{exc.instance.digest()[:12]}.json")
        dump.write_text(exc.instance.dumps(), encoding="utf-8")
        print(f"guarantee violated: {exc}; instance written to {dump}", file=sys.stderr)
        return EXIT_GUARANTEE
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in report.rows:
        writer.writerow(row.csv_row())
    if args.csv:
        Path(args.csv).write_text(buf.getvalue(), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())
    over = [r.instance for r in report.rows if not r.within_budget]
    summary = {
        "instances": len(report.rows),
        "min_ratio": format_value(report.min_ratio) if report.rows else None,
        "mean_ratio": round(float(report.mean_ratio), 6) if report.rows else None,
        "membership_calls": report.membership_calls,
        "eval_calls": report.eval_calls,
        "over_budget": over,
    }
    print(json.dumps(summary), file=sys.stderr if not args.csv else sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ksubmod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the greedy on an instance file")
    p.add_argument("instance")
    p.add_argument("--exact", action="store_true", help="also brute-force the optimum and check the 1/2 bound")
    p.add_argument("--validate", action="store_true", help="run the function and matroid validators first")
    p.add_argument("--trace", action="store_true", help="include per-iteration records")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--lazy", action="store_true", help="lazy (priority queue) candidate scan")
    p.add_argument("--timestamp", action="store_true", help="add a generated_at field")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("generate", help="write random instances")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--matroid", choices=[t for t in MATROID_TYPES if t != "explicit"], required=True)
    p.add_argument("--function", choices=("modular", "coverage", "table"), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("validate", help="check the function and matroid axioms")
    p.add_argument("instance")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="greedy vs brute force over a directory of instances")
    p.add_argument("--dir", required=True)
    p.add_argument("--csv", help="write the per-instance table here instead of stdout")
    p.add_argument("--lazy", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InstanceError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
