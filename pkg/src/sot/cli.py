"""Command line entry point: ``sot <command> --config <path> [--seed N] [--out <path>]``."""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from sot.config import COMMANDS, ConfigError, ExperimentConfig, parse_config
from sot.records import emit_csv, make_record, now_iso, to_jsonl

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_GOLDEN = 2

log = logging.getLogger("sot")


def _solver_options(cfg: ExperimentConfig):
    from sot.solvers import SolverOptions

    o = cfg.options
    return SolverOptions(
        residual_tol=o["residual_tol"], max_sweeps=o["max_sweeps"], multistart=o["multistart"],
        rng_seed=cfg.seed, direct_search_budget=o["direct_search_budget"], maxima_tol=o["maxima_tol"],
    )


def execute(cfg: ExperimentConfig) -> tuple[list[dict], int]:
    """Run a validated config; returns (payloads, exit code)."""
    from sot import intertwining, solvers, translates

    inst = cfg.instance
    o = cfg.options
    cmd = cfg.command

    if cmd == "eval":
        ts = o["t"] if isinstance(o["t"], list) else [o["t"]]
        y = inst.check_nodes(o["nodes"])
        return [{"command": cmd, "nodes": list(y), "t": [float(t) for t in ts],
                 "F": [translates.F_weighted(inst, y, float(t)) for t in ts],
                 "f": [translates.f_pure(inst, y, float(t)) for t in ts]}], EXIT_OK

    if cmd == "maxima":
        y = inst.check_nodes(o["nodes"])
        mv = translates.interval_maxima(inst, y, o["tol"])
        return [{"command": cmd, "nodes": list(y), "m": list(mv.m), "argmax": list(mv.argmax),
                 "regular": mv.regular, "symbolic_regular": translates.is_regular(inst, y),
                 "m_bar": mv.m_bar, "m_under": mv.m_under}], EXIT_OK

    if cmd in ("equioscillate", "minimax", "maximin"):
        opts = _solver_options(cfg)
        if cmd == "equioscillate":
            res = solvers.find_equioscillation(inst, opts, start=o.get("start"))
        elif cmd == "minimax":
            res = solvers.minimize_max(inst, opts)
        else:
            res = solvers.maximize_min(inst, opts)
        payload = {"command": cmd, **res.to_dict()}
        payload["m"] = list(translates.interval_maxima(inst, res.nodes, opts.maxima_tol).m)
        return [payload], EXIT_OK

    if cmd == "compare":
        c = intertwining.compare_maxima(inst, o["x"], o["y"], o["value_tol"], o["tol"])
        return [{"command": cmd, "x": list(o["x"]), "y": list(o["y"]), **c.to_dict()}], EXIT_OK

    if cmd == "search":
        rep = intertwining.search_majorization(
            inst, o["budget"], cfg.seed, o["strategy"], o["value_tol"], o["mode"],
            o["admit_singular"], [tuple(p) for p in o["initial_pairs"]], o["workers"],
            tol=o["tol"], log_all=o["log_all"],
        )
        return [*rep.records, rep.summary()], EXIT_OK

    if cmd == "lemma-check":
        return [_lemma_check(cfg)], EXIT_OK

    if cmd == "golden":
        from sot.golden import run_golden

        checks = run_golden()
        ok = all(c.passed for c in checks)
        payloads = [{"command": cmd, **c.to_dict()} for c in checks]
        payloads.append({"command": cmd, "event": "summary", "passed": ok,
                         "checks": len(checks), "failures": sum(not c.passed for c in checks)})
        return payloads, EXIT_OK if ok else EXIT_GOLDEN

    raise ConfigError(f"unknown command {cmd!r}")


def _lemma_check(cfg: ExperimentConfig) -> dict:
    from sot import lemmas

    o = cfg.options
    kernel = cfg.instance.kernel
    if o["params"] is not None:
        P = lemmas.WideningParams(**o["params"])
        out = {}
        for part in o["parts"]:
            try:
                r = lemmas.check_widening_part(kernel, P, part, o["grid"])
            except lemmas.HypothesisError as e:
                out[part] = {"skipped": str(e)}
                continue
            out[part] = {"violations": len(r.violations), "strict_failures": len(r.strict_failures),
                         "min_margin": r.min_margin, "midpoint_margin": r.midpoint_margin}
        return {"command": "lemma-check", "kernel": str(kernel), "kappa": lemmas.kappa(P), "parts": out}

    rng = np.random.default_rng(cfg.seed)
    out = {}
    for part in o["parts"]:
        if part != "c" and not kernel.monotone:
            out[part] = {"skipped": "kernel is not monotone"}
            continue
        viol = strict = 0
        min_mid = math.inf
        for _ in range(o["draws"]):
            P = lemmas.random_params(rng, part, o["min_gap"])
            r = lemmas.check_widening_part(kernel, P, part, o["grid"])
            viol += len(r.violations)
            strict += len(r.strict_failures)
            min_mid = min(min_mid, r.midpoint_margin)
        out[part] = {"draws": o["draws"], "violations": viol, "strict_failures": strict,
                     "min_midpoint_margin": min_mid}
    return {"command": "lemma-check", "kernel": str(kernel), "parts": out}


CSV_COLUMNS = {
    "maxima": ["j", "m", "argmax"],
    "eval": ["t", "F", "f"],
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sot", description="Interval maxima of sum-of-translates functions.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON experiment config (optional for golden)")
    p.add_argument("--seed", type=int, default=None, help="overrides SOT_SEED and the config seed")
    p.add_argument("--out", help="JSONL output path (default: config output, else stdout)")
    p.add_argument("--csv", help="also write plot-ready CSV (maxima, eval, search)")
    p.add_argument("--timestamp", action="store_true",
                   help="stamp records with wall-clock time (makes output non-reproducible)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def load_config(command: str, path: Optional[str]) -> ExperimentConfig:
    if path is None:
        if command != "golden":
            raise ConfigError(f"{command} needs --config")
        return parse_config('{"command": "golden"}', command)
    text = Path(path).read_text(encoding="utf-8")
    return parse_config(text, command)


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.command, args.config)
        seed = cfg.seed
        if os.environ.get("SOT_SEED"):
            seed = int(os.environ["SOT_SEED"])
        if args.seed is not None:
            seed = args.seed
        cfg = cfg.with_seed(seed)
        payloads, code = execute(cfg)
    except (ConfigError, OSError, ValueError) as e:
        print(f"sot: error: {e}", file=sys.stderr)
        return EXIT_ERROR

    stamp = now_iso() if args.timestamp else None
    cfg_dict = cfg.to_dict()
    records = [make_record(cfg_dict, cfg.seed, p, stamp) for p in payloads]
    text = to_jsonl(records)
    out = args.out or cfg.output
    try:
        if out:
            Path(out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        if args.csv:
            Path(args.csv).write_text(_csv_for(cfg.command, payloads), encoding="utf-8")
    except OSError as e:
        print(f"sot: error: {e}", file=sys.stderr)
        return EXIT_ERROR

    if cfg.command == "golden":
        failed = [p["name"] for p in payloads if p.get("passed") is False and "name" in p]
        for name in failed:
            print(f"golden mismatch: {name}", file=sys.stderr)
    return code


def _csv_for(command: str, payloads: list[dict]) -> str:
    if command == "search":
        rows = [p for p in payloads if p.get("event") != "summary"]
        return emit_csv(rows, ["worker", "pair_index", "margin", "event"])
    if command not in CSV_COLUMNS:
        raise ValueError(f"no CSV layout for {command}")
    return emit_csv(payloads, CSV_COLUMNS[command])


if __name__ == "__main__":
    sys.exit(main())
