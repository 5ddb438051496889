"""Command line: ``omegadef <command> [options]``.

Every command builds a :class:`Report`.  A short summary goes to stdout and
``--out`` writes the full report as JSON.  Exit status is 0 for pass, 1 for
fail or flagged and 2 for usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import VarEnv
from .checks import cocycle_suite, mc2_survey
from .config import AnsatzBounds, MC2Config, SweepConfig
from .deformation import (EXAMPLE_NAMES, ParamAssignment, defect, examples_for, relations,
                          solve_uniform, verify_example)
from .exterior import format_op, graded_block
from .obstruction import NOT_A_COBOUNDARY, TARGETS, probe_cell, probe_independence
from .syntax import format_field, parse_field, parse_params_document

PASS, FAIL, FLAGGED = "pass", "fail", "flagged"
EXIT = {PASS: 0, FAIL: 1, FLAGGED: 1}


class UsageError(ValueError):
    pass


@dataclass
class Report:
    command: str
    n: int
    config: dict
    status: str = PASS
    summary: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def as_dict(self):
        return {"command": self.command, "n": self.n, "config": self.config,
                "status": self.status, "summary": self.summary, "details": self.details}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False) + "\n"

    @property
    def exit_code(self) -> int:
        return EXIT[self.status]


def _check_n(n: int):
    if n < 2:
        raise UsageError(f"n must be at least 2 (got {n}); the deformation problem needs "
                         "two or more spatial dimensions")


def _echo(name: str, **opts) -> str:
    parts = [f"omegadef {name}"]
    for k, v in opts.items():
        if v is not None:
            parts.append(f"--{k.replace('_', '-')} {v}")
    return " ".join(parts)


def _load_params(path: str | None, n: int) -> ParamAssignment:
    if path is None:
        raise UsageError("--params is required")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read parameter document: {exc}") from None
    t = parse_params_document(text, source=path)
    if t.env.n != n:
        raise UsageError(f"{path}: document has n={t.env.n} but --n {n} was given")
    return t


# ---------------------------------------------------------------------------
# commands


def cmd_verify_cocycles(n: int, max_degree: int = 3, trials: int = 50, seed: int = 0) -> Report:
    _check_n(n)
    cfg = SweepConfig(max_degree=max_degree, trials=trials, seed=seed, random_degree=max_degree)
    results = cocycle_suite(n, cfg)
    rep = Report(_echo("verify-cocycles", n=n, max_degree=max_degree, trials=trials, seed=seed),
                 n, cfg.as_dict())
    rep.details = {"identities": [r.as_dict() for r in results]}
    bad = [r for r in results if not r.ok]
    rep.status = FAIL if bad else PASS
    total = sum(r.checked for r in results)
    rep.summary = [f"{len(results)} identities, {total} evaluations, {len(bad)} failing"]
    rep.summary += [f"FAILED {r.name}: {r.failure_count} of {r.checked}" for r in bad]
    return rep


def cmd_mc2(n: int, seed: int = 0, pairs: int = 10, max_degree: int = 3) -> Report:
    _check_n(n)
    cfg = MC2Config(pairs=pairs, seed=seed, max_degree=max_degree)
    survey = mc2_survey(n, cfg)
    rep = Report(_echo("mc2", n=n, seed=seed, trials=pairs, max_degree=max_degree), n,
                 cfg.as_dict())
    rep.details = survey.as_dict()
    verdicts = survey.verdicts()
    flags = []
    if len(survey.pairs) < cfg.pairs:
        rep.status = FAIL
        flags.append(f"only {len(survey.pairs)} non-degenerate pairs in {cfg.max_attempts} attempts")
    elif not survey.residual_zero or not survey.pair_independent:
        rep.status = FAIL
    elif any(v == "non-diagonal" for v in verdicts.values()):
        rep.status = FLAGGED
        flags += [f"DISCREPANCY: shift {i} coefficients are not a signed copy of the relations"
                  for i, v in verdicts.items() if v == "non-diagonal"]
        # gamma2~ = d o gamma1 + gamma2, so this table means a swapped diagonal there
        if survey.as_dict()["sign_table"].get("2") == [["-1", "1"], ["1", "0"]]:
            flags.append("shift 2 against (gamma1 o d, d o gamma1) carries (R2~, R2) exactly")
    if any(v == "signed-diagonal" for v in verdicts.values()):
        flags.append("convention delta: some shift carries a -1 sign")
    rep.details["flags"] = flags
    table = rep.details["sign_table"]
    rep.summary = [f"pairs used {len(survey.pairs)}, degenerate skipped {survey.degenerate_skipped}",
                   f"residual zero: {survey.residual_zero}, "
                   f"pair independent: {survey.pair_independent}"]
    if table is not None:
        rep.summary += [f"shift {i}: {m} ({verdicts.get(int(i), '?')})" for i, m in table.items()]
    rep.summary += flags
    return rep


def cmd_relations(n: int, params_file: str) -> Report:
    _check_n(n)
    t = _load_params(params_file, n)
    rels = relations(t)
    rep = Report(_echo("relations", n=n, params=params_file), n,
                 {"params_file": params_file, "params": t.as_dict()})
    listed = [{"name": f"{name}^{k}", "value": str(v)} for name, k, v in rels.labelled()]
    rep.details = {"count": len(rels), "relations": listed, "all_zero": rels.is_zero()}
    rep.status = PASS if rels.is_zero() else FLAGGED
    rep.summary = [f"{r['name']} = {r['value']}" for r in listed]
    rep.summary.append("integrable: relations vanish" if rels.is_zero()
                       else "obstructed: some relation is nonzero")
    return rep


DEFAULT_X = "[x1^2, 0]"
DEFAULT_Y = "[0, x2^2]"


def _default_field(text: str, n: int) -> str:
    comps = [c.strip() for c in text.strip("[]").split(",")]
    return "[" + ", ".join(comps + ["0"] * (n - len(comps))) + "]"


def cmd_defect(n: int, params_file: str, x_expr: str | None = None,
               y_expr: str | None = None) -> Report:
    _check_n(n)
    t = _load_params(params_file, n)
    x_expr = x_expr or _default_field(DEFAULT_X, n)
    y_expr = y_expr or _default_field(DEFAULT_Y, n)
    env = VarEnv(n)
    x = parse_field(x_expr, env, "--x")
    y = parse_field(y_expr, env, "--y")
    op = defect(x, y, t, check=False)
    blocks = {}
    for k in range(n + 1):
        for l in range(n + 1):
            b = graded_block(op, k, l)
            if b:
                blocks[f"{k}->{l}"] = format_op(b)
    rep = Report(_echo("defect", n=n, params=params_file, x=repr(x_expr), y=repr(y_expr)), n,
                 {"params_file": params_file, "params": t.as_dict(),
                  "x": format_field(x), "y": format_field(y)})
    rep.details = {"defect": format_op(op), "zero": not op, "blocks": blocks}
    rep.status = PASS if not op else FLAGGED
    rep.summary = [f"X = {format_field(x)}", f"Y = {format_field(y)}",
                   "defect = 0" if not op else f"defect = {format_op(op)}"]
    return rep


def valid_cells_table(n: int) -> str:
    rows = []
    for shift in (1, 2, 3):
        names = [g for g, c in TARGETS.items() if c.shift == shift]
        ks = f"k in 0..{n - shift}" if n - shift >= 0 else "none"
        rows.append(f"  shift {shift} ({', '.join(names)}): {ks}")
    return "valid (k, shift) cells for n={}:\n{}".format(n, "\n".join(rows))


def cmd_obstruction(n: int, k: int, shift: int, jet_bound: int = 3, order_bound: int = 2) -> Report:
    _check_n(n)
    if shift not in (1, 2, 3) or not 0 <= k <= n - shift:
        raise UsageError(f"no obstruction cell (k={k}, shift={shift}) for n={n}\n"
                         + valid_cells_table(n))
    bounds = AnsatzBounds(jet=jet_bound, order=order_bound)
    targets = [g for g, c in TARGETS.items() if c.shift == shift]
    verdicts = [probe_cell(g, n, k, bounds.jet, bounds.order) for g in targets]
    rep = Report(_echo("obstruction", n=n, k=k, shift=shift, jet=jet_bound, order=order_bound),
                 n, {"k": k, "shift": shift, **bounds.as_dict()})
    rep.details = {"cells": [v.as_dict() for v in verdicts]}
    ok = all(v.verdict == NOT_A_COBOUNDARY and v.certificate_checked for v in verdicts)
    rep.summary = [f"{v.target}^{k}: {v.verdict} ({v.unknowns} unknowns, {v.pairs_used} pairs, "
                   f"certificate of {len(v.certificate)} rows"
                   f"{', checked' if v.certificate_checked else ''})" for v in verdicts]
    if shift == 2:
        ind = probe_independence(n, k, bounds.jet, bounds.order)
        rep.details["independence"] = ind.as_dict()
        ok = ok and ind.independent
        rep.summary.append(f"gamma2^{k}, gamma2~^{k} independent modulo coboundaries: "
                           f"{ind.independent}")
    rep.status = PASS if ok else FLAGGED
    return rep


def cmd_examples(which: str = "all", n: int = 2, max_degree: int = 3, trials: int = 10,
                 seed: int = 0) -> Report:
    _check_n(n)
    try:
        exs = examples_for(which, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not exs:
        raise UsageError(f"example {which!r} is only defined for n=2")
    cfg = SweepConfig(max_degree=max_degree, trials=trials, seed=seed, random_degree=4)
    verdicts = [verify_example(ex, cfg.max_degree, cfg.trials, cfg.seed, cfg.random_degree)
                for ex in exs]
    rep = Report(_echo("examples", which=which, n=n, max_degree=max_degree, trials=trials,
                       seed=seed), n, {"which": which, **cfg.as_dict()})
    rep.details = {"examples": [
        {"name": ex.name, "description": ex.description, "params": ex.t.as_dict(),
         "relations_zero": v.relations_zero, "defect_zero": v.defect_zero,
         "pairs_checked": v.pairs_checked, "witness": v.witness, "passed": v.passed}
        for ex, v in zip(exs, verdicts)]}
    rep.status = PASS if all(v.passed for v in verdicts) else FAIL
    rep.summary = [f"{v.name}: {'pass' if v.passed else 'FAIL'} "
                   f"(relations zero {v.relations_zero}, defect zero on {v.pairs_checked} pairs "
                   f"{v.defect_zero})" for v in verdicts]
    return rep


def cmd_uniform(n: int) -> Report:
    _check_n(n)
    sol = solve_uniform(n)
    rep = Report(_echo("uniform", n=n), n, {})
    rep.details = {
        "reduced_system": [str(r) for r in sol.reduced_system],
        "components": [c.as_dict() for c in sol.components],
        "flagged": [c.name for c in sol.flagged],
    }
    rep.status = FLAGGED if sol.flagged else PASS
    rep.summary = [f"{len(sol.reduced_system)} distinct relations after the uniform ansatz"]
    for c in sol.components:
        alphas = ", ".join(str(a) for a in c.alphas)
        tag = " (known example)" if c.known_example else ""
        flag = "  DISCREPANCY" if c.flagged else ""
        rep.summary.append(f"{c.name}{tag}: (alpha0, alpha1, alpha1~, alpha2) = ({alphas}) "
                           f"[{c.conditions}]{flag}")
    return rep


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="omegadef",
                                description="Deformations of the vect(n)-module of forms.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the full JSON report here")
    common.add_argument("--json", action="store_true",
                        help="print the JSON report instead of a summary")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-cocycles", parents=[common], help="delta vanishing of all 1- and 2-cocycles")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--max-degree", type=int, default=3)
    s.add_argument("--trials", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("mc2", parents=[common], help="second-order defect against the obstruction cocycles")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=10, help="non-degenerate pairs to use")
    s.add_argument("--max-degree", type=int, default=3)

    s = sub.add_parser("relations", parents=[common], help="integrability relations of a parameter document")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--params", required=True)

    s = sub.add_parser("defect", parents=[common], help="second-order defect on one pair of fields")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--params", required=True)
    s.add_argument("--x", help=f"first field, default {DEFAULT_X}")
    s.add_argument("--y", help=f"second field, default {DEFAULT_Y}")

    s = sub.add_parser("obstruction", parents=[common], help="bounded coboundary probe for one cell")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--shift", type=int, required=True)
    s.add_argument("--jet", type=int, default=3)
    s.add_argument("--order", type=int, default=2)

    s = sub.add_parser("examples", parents=[common], help="check the closed-form integrable families")
    s.add_argument("--which", default="all", choices=EXAMPLE_NAMES + ("all",))
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--max-degree", type=int, default=3)
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("uniform", parents=[common], help="solve the one-parameter uniform system")
    s.add_argument("--n", type=int, default=3)
    return p


def run(args: argparse.Namespace) -> Report:
    c = args.command
    if c == "verify-cocycles":
        return cmd_verify_cocycles(args.n, args.max_degree, args.trials, args.seed)
    if c == "mc2":
        return cmd_mc2(args.n, args.seed, args.trials, args.max_degree)
    if c == "relations":
        return cmd_relations(args.n, args.params)
    if c == "defect":
        return cmd_defect(args.n, args.params, args.x, args.y)
    if c == "obstruction":
        return cmd_obstruction(args.n, args.k, args.shift, args.jet, args.order)
    if c == "examples":
        return cmd_examples(args.which, args.n, args.max_degree, args.trials, args.seed)
    if c == "uniform":
        return cmd_uniform(args.n)
    raise UsageError(f"unknown command {c!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep = run(args)
    except ValueError as exc:
        # UsageError, ParseError and validation errors alike
        print(f"omegadef {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(rep.to_json())
    if args.json:
        sys.stdout.write(rep.to_json())
    else:
        print(f"{rep.command}\nstatus: {rep.status}")
        for line in rep.summary:
            print(f"  {line}")
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
