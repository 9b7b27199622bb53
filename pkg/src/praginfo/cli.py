"""Command-line interface: ``praginfo {kl,ensemble,joint,bandit,simulate,verify}``.

Exit codes: 0 success, 1 property violation, 2 parse/schema/usage error,
3 zero prior entry, 4 message source does not match the ensemble.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import bandit, ergodic
from .dist import Prior, kl_divergence
from .errors import (
    DimensionMismatchError,
    DistributionError,
    ParseError,
    SchemaError,
    StationaryMismatchError,
    ZeroPriorError,
)
from .formats import digest, load_dist, load_ensemble, load_joint, read_json
from .pragmatic import (
    IDENTITY_ATOL,
    chain_rule_residual,
    check_pragmatic_independence,
    conditional_pragmatic_info,
    decompose,
    definitive_upper_bound,
    delta_responds_to_own_message,
    is_pragmatically_definitive,
    joint_pragmatic_info,
    partition_pragmatic_info,
)
from .verify import run_suite

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_ZERO_PRIOR = 3
EXIT_SOURCE = 4


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


@dataclass
class RunReport:
    """Named quantities plus identity checks (residual, tolerance, pass flag)."""

    command: str
    inputs: dict = field(default_factory=dict)
    quantities: list = field(default_factory=list)  # (name, value, gloss)
    checks: list = field(default_factory=list)  # (name, residual, tol, passed)

    def add(self, name, value, gloss=""):
        self.quantities.append((name, value, gloss))

    def check(self, name, residual, tol, passed=None):
        if passed is None:
            passed = abs(residual) < tol
        self.checks.append((name, residual, tol, bool(passed)))

    @property
    def ok(self) -> bool:
        return all(c[3] for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "quantities": {n: v for n, v, _ in self.quantities},
            "checks": [
                {"name": n, "residual": r, "tolerance": t, "passed": p} for n, r, t, p in self.checks
            ],
            "ok": self.ok,
        }

    def render(self, form: str) -> str:
        if form == "json":
            return json.dumps(self.to_dict(), indent=2) + "\n"
        lines = ["quantity,value,description"]
        for n, v, g in self.quantities:
            if isinstance(v, (list, tuple)):
                v = " ".join(fmt(x) for x in v)
            lines.append(f"{n},{fmt(v)},{g}")
        for n, r, t, p in self.checks:
            lines.append(f"check:{n},{fmt(r)},tolerance {t:g} {'pass' if p else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _summary(text: str, out: Optional[str]) -> None:
    # keep stdout clean when it carries the data itself
    stream = sys.stderr if out in (None, "-") else sys.stdout
    print(text, file=stream)


# ---------------------------------------------------------------- commands


def cmd_kl(args) -> int:
    p = load_dist(args.p)
    q = Prior(load_dist(args.q).probs)
    d = kl_divergence(p, q)
    if args.format == "json":
        _emit(json.dumps({"D_bits": d}) + "\n", args.out)
    else:
        _emit(fmt(d) + "\n", args.out)
    return EXIT_OK


def cmd_ensemble(args) -> int:
    e, usefulness = load_ensemble(args.file)
    rep = RunReport("ensemble", {args.file: digest(args.file)})
    r = decompose(e)
    rep.add("Phi", r.phi, "pragmatic information of the ensemble (bits)")
    rep.add("I", r.mutual_info, "mutual information between message and outcome (bits)")
    rep.add("D_prior_update", r.prior_update, "divergence of the average posterior from the prior (bits)")
    rep.add("p_bar", r.marginal_posterior.tolist(), "average posterior")
    rep.add("bound", definitive_upper_bound(e.prior), "max_i -log2 q_i (bits)")
    defin = is_pragmatically_definitive(e)
    rep.add("definitive", defin.ensemble, "every message makes some outcome certain")
    rep.add("definitive_messages", [fmt(x) for x in defin.messages], "per message")
    if usefulness is not None:
        parts = partition_pragmatic_info(e, usefulness)
        rep.add("Phi_irrelevant", parts.irrelevant, "")
        rep.add("Phi_disinformative", parts.disinformative, "")
        rep.add("Phi_useful", parts.useful, "")
        rep.check("partition_sum", parts.total - r.phi, 1e-12)
    rep.check("Phi = I + D", r.residual, IDENTITY_ATOL)
    rep.check("Phi <= bound", max(0.0, r.phi - definitive_upper_bound(e.prior)), 1e-12)
    _emit(rep.render(args.format), args.out)
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_joint(args) -> int:
    j = load_joint(args.file)
    rep = RunReport("joint", {args.file: digest(args.file)})
    ind = check_pragmatic_independence(j)
    cond = conditional_pragmatic_info(j)
    rep.add("Phi_joint", ind.phi_joint, "joint pragmatic information (bits)")
    rep.add("Phi_delta", ind.phi_delta, "first decision maker's own pragmatic information (bits)")
    rep.add("Phi_delta_prime", ind.phi_delta_prime, "second decision maker's own pragmatic information (bits)")
    rep.add("Phi_cond", cond, "second given first: conditional pragmatic information (bits)")
    rep.add("chain_residual", chain_rule_residual(j), "Phi_joint - Phi_delta - Phi_cond")
    rep.add("additivity_gap", ind.additivity_gap, "Phi_joint - Phi_delta - Phi_delta_prime")
    rep.add("sufficient_condition", ind.sufficient, "independent priors and factorizing joint law")
    rep.add("additive", ind.additive, "Phi_joint == Phi_delta + Phi_delta_prime")
    rep.add("independence", ind.verdict.value, "")
    own = delta_responds_to_own_message(j)
    rep.add("delta_uses_own_message_only", own, "precondition of the chain rule")
    if own:
        rep.check("chain_rule", chain_rule_residual(j), IDENTITY_ATOL)
    rep.check("sufficient => additive", ind.additivity_gap if ind.sufficient else 0.0,
              IDENTITY_ATOL, passed=ind.sound)
    _emit(rep.render(args.format), args.out)
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_bandit(args) -> int:
    if not 0.0 < args.pi < 1.0:
        raise UsageError(f"--pi must lie strictly between 0 and 1, got {args.pi}")
    if args.t_max < 0:
        raise UsageError("--t-max must be non-negative")
    rows = bandit.sweep(args.pi, args.t_max, args.mode)
    if args.format == "json":
        text = json.dumps([r.__dict__ for r in rows]) + "\n"
    else:
        text = bandit.sweep_csv(rows)
    _emit(text, args.out)
    mono = bandit.is_strictly_decreasing(rows)
    _summary(
        f"phi(T=0)={fmt(rows[0].phi)} phi(T={args.t_max})={fmt(rows[-1].phi)} "
        f"strictly_decreasing={fmt(mono)}",
        args.out,
    )
    return EXIT_OK if mono or len(rows) < 2 else EXIT_VIOLATION


def cmd_simulate(args) -> int:
    e, _ = load_ensemble(args.file)
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    if args.source == "markov":
        if args.transition is None:
            raise UsageError("--source markov requires --transition")
        matrix = read_json(args.transition)
        try:
            src = ergodic.MessageSource.markov(matrix, args.seed, args.initial)
        except (ValueError, TypeError) as exc:
            raise SchemaError(f"{args.transition}: {exc}") from None
    else:
        src = ergodic.MessageSource.iid(e.message_probs, args.seed)
    try:
        traj = ergodic.sample_trajectory(e, src, args.n)
    except DimensionMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOURCE
    if args.format == "json":
        pts = ergodic.log_checkpoints(traj.n)
        text = json.dumps({
            "seed": traj.seed, "source": traj.source_kind, "generator": traj.generator,
            "N": pts, "phi_running_bits": [traj.at(N) for N in pts],
        }) + "\n"
    else:
        text = ergodic.trajectory_csv(traj)
    _emit(text, args.out)
    target = decompose(e).phi
    _summary(
        f"Phi_N={fmt(traj.final)} Phi={fmt(target)} gap={fmt(abs(traj.final - target))}",
        args.out,
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    suite = run_suite(args.trials, args.seed, args.max_dim)
    lines = []
    for r in suite.results:
        tag = "info" if r.informational else ("pass" if r.ok else "FAIL")
        lines.append(f"{r.name}: {r.passed}/{r.passed + r.failed} {tag}")
    bad = suite.first_failure()
    if args.format == "json":
        doc = {
            "seed": args.seed, "trials": args.trials, "ok": suite.ok,
            "results": [
                {"name": r.name, "passed": r.passed, "failed": r.failed,
                 "informational": r.informational} for r in suite.results
            ],
        }
        if bad is not None:
            doc["counterexample"] = {"property": bad.name, "detail": bad.detail, "instance": bad.counterexample}
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        text = "\n".join(lines) + "\n"
        if bad is not None:
            text += f"counterexample for {bad.name} ({bad.detail}):\n"
            text += json.dumps(bad.counterexample) + "\n"
        _emit(text, args.out)
    return EXIT_OK if suite.ok else EXIT_VIOLATION


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="praginfo", description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=None, help="output path (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    # repeated on each subcommand; SUPPRESS keeps a value given before the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS, help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("kl", parents=[common], help="D(p || q) in bits for two distribution files")
    p.add_argument("p")
    p.add_argument("q")
    p.set_defaults(func=cmd_kl)

    p = sub.add_parser("ensemble", parents=[common], help="Phi, I and D(pbar || q) for an ensemble file")
    p.add_argument("file")
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("joint", parents=[common], help="joint / conditional report and chain-rule check")
    p.add_argument("file")
    p.set_defaults(func=cmd_joint)

    p = sub.add_parser("bandit", parents=[common], help="one-armed-bandit sweep as CSV")
    p.add_argument("--pi", type=float, required=True)
    p.add_argument("--t-max", type=int, required=True)
    p.add_argument("--mode", choices=bandit.SWEEP_MODES, default="continuous")
    p.set_defaults(func=cmd_bandit)

    p = sub.add_parser("simulate", parents=[common], help="running average Phi_N along sampled messages")
    p.add_argument("file")
    p.add_argument("--source", choices=("iid", "markov"), default="iid")
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--transition", default=None, help="JSON transition matrix for --source markov")
    p.add_argument("--initial", type=int, default=0, help="initial message for --source markov")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", parents=[common], help="randomized property suite")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-dim", type=int, default=4)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ZeroPriorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ZERO_PRIOR
    except StationaryMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"stationary: {exc.stationary}", file=sys.stderr)
        print(f"expected:   {exc.expected}", file=sys.stderr)
        return EXIT_SOURCE
    except (SchemaError, DistributionError, DimensionMismatchError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
