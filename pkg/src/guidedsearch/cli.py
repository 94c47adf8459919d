"""Batch front end: run scenarios, dump trace columns, serve, benchmark.

Subcommands::

    plan  SCENARIO [--script FILE] [--no-guidance] [flags]   run one session
    trace LOG --metric {delay,hmin} [--queue N]              columnar plot data
    serve [--host H] [--port P] [--sessions-dir DIR]         run the service
    bench DIR --trials N [--workers W] [--jitter R]          detector A/B table

SCENARIO is a JSON document path or ``builtin:<name>``. The environment
variable ``GUIDEDSEARCH_CONFIG`` may point at a JSON file of default
planner-parameter overrides; command-line flags win over it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from guidedsearch import events as ev
from guidedsearch import guidance as guidance_mod
from guidedsearch import scenarios
from guidedsearch.controller import PlannerSession, ScriptedProvider, run_session
from guidedsearch.search import PlannerConfig

CONFIG_FLAGS = ("detector", "w1", "w2", "omega", "tau", "omega1", "omega2",
                "epsilon", "budget")

EXIT_SOLVED = 0
EXIT_ERROR = 1
EXIT_EXHAUSTED = 2
EXIT_DECLINED = 3


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--detector", choices=["vacillation", "heuristic_based"])
    parser.add_argument("--w1", type=float)
    parser.add_argument("--w2", type=float)
    parser.add_argument("--omega", type=int)
    parser.add_argument("--tau", type=float)
    parser.add_argument("--omega1", type=int)
    parser.add_argument("--omega2", type=int)
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--budget", type=int)
    parser.add_argument("--seed", type=int, default=0)


def _config_overrides(args: argparse.Namespace) -> dict:
    env = {}
    path = os.environ.get("GUIDEDSEARCH_CONFIG")
    if path:
        with open(path) as fh:
            env = json.load(fh)
    rename = {"detector": "detector_kind", "budget": "expansion_budget"}
    for flag in CONFIG_FLAGS:
        value = getattr(args, flag, None)
        if value is not None:
            env[rename.get(flag, flag)] = value
    return env


def _load_scenario(ref: str) -> dict:
    if ref.startswith("builtin:"):
        return scenarios.builtin(ref[len("builtin:"):])
    return scenarios.load(ref)


# --------------------------------------------------------------------- plan

def cmd_plan(args: argparse.Namespace) -> int:
    try:
        doc = _load_scenario(args.scenario)
        overrides = _config_overrides(args)
        built = scenarios.build(doc, overrides or None)
    except scenarios.ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    script = built.script
    if args.script:
        with open(args.script) as fh:
            script = [tuple(entry) for entry in json.load(fh)]

    session = PlannerSession(built.make_planner(), no_guidance=args.no_guidance)
    provider = ScriptedProvider(script)
    while not session.finished:
        if session.awaiting_guidance:
            session.submit_guidance(provider.request(session.guidance_prompt()))
        else:
            session.step()
    result = session.result()

    report = {
        "scenario": doc.get("name") or args.scenario,
        "seed": args.seed,
        "outcome": result.outcome,
        "cost": result.cost,
        "expansions": result.expansions,
        "guidance_requests": result.guidance_requests,
        "guidances_used": result.guidances_used,
        "guidances_discarded_unhelpful": result.guidances_discarded_unhelpful,
        "events": len(result.events),
    }
    if not args.quiet:
        width = max(len(k) for k in report)
        for key, value in report.items():
            print(f"{key:<{width}}  {value}")
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    if args.log:
        header = {"scenario": doc, "config_overrides": overrides or None,
                  "no_guidance": args.no_guidance, "seed": args.seed}
        ev.write_log(args.log, header, result.events)
    if result.outcome == "solved":
        return EXIT_SOLVED
    if result.outcome == "declined":
        return EXIT_DECLINED
    return EXIT_EXHAUSTED


# -------------------------------------------------------------------- trace

def _effective_config(header: dict | None) -> PlannerConfig:
    merged = {}
    if header:
        merged.update((header.get("scenario") or {}).get("config") or {})
        merged.update(header.get("config_overrides") or {})
    try:
        return PlannerConfig(**merged)
    except Exception:
        return PlannerConfig()


def cmd_trace(args: argparse.Namespace) -> int:
    try:
        header, logged = ev.read_log(args.log)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: malformed log: {exc}", file=sys.stderr)
        return EXIT_ERROR
    config = _effective_config(header)
    windows: dict[int, deque] = {}
    print("# queue\texpansion\tvalue\tstagnating")
    for event in logged:
        if event.kind != ev.EXPANSION:
            continue
        p = event.payload
        qid = p["queue"]
        if args.queue is not None and qid != args.queue:
            continue
        if args.metric == "delay":
            value = p["delta_e"]
        else:
            window = windows.setdefault(qid, deque(maxlen=config.omega1 + 1))
            window.append(p["h"])
            value = min(window)
        flag = 1 if p.get("stagnating") else 0
        print(f"{qid}\t{p['expansion']}\t{value}\t{flag}")
    return EXIT_SOLVED


# -------------------------------------------------------------------- serve

def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from guidedsearch.service import create_app

    default_config = {}
    path = os.environ.get("GUIDEDSEARCH_CONFIG")
    if path:
        with open(path) as fh:
            default_config = json.load(fh)
    if args.config:
        with open(args.config) as fh:
            default_config.update(json.load(fh))
    app = create_app(sessions_dir=args.sessions_dir, default_config=default_config,
                     ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_SOLVED


# -------------------------------------------------------------------- bench

def _jitter_script(built, script, rng, radius):
    if radius <= 0:
        return list(script)
    out = []
    for entry in script:
        jittered = tuple(v + rng.uniform(-radius, radius) for v in entry)
        try:
            guidance_mod.snap_guidance(built.domain, jittered,
                                       built.config.snap_tolerance + radius)
            out.append(jittered)
        except guidance_mod.GuidanceError:
            out.append(tuple(entry))
    return out


def bench_trial(doc: dict, detector: str, seed: int, jitter: float,
                budget: int | None) -> dict:
    overrides: dict = {"detector_kind": detector}
    if budget:
        overrides["expansion_budget"] = budget
    built = scenarios.build(doc, overrides)
    rng = np.random.default_rng(seed)
    script = _jitter_script(built, built.script, rng, jitter)
    result = run_session(built.make_planner(), ScriptedProvider(script))
    return {
        "outcome": result.outcome,
        "expansions": result.expansions,
        "guidances": result.guidances_used,
    }


def _bench_scenario(doc, name, detectors, args):
    rows = []
    jobs = [(detector, trial) for detector in detectors
            for trial in range(args.trials)]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            futures = {
                (detector, trial): pool.submit(bench_trial, doc, detector,
                                               args.seed + trial, args.jitter,
                                               args.budget)
                for detector, trial in jobs
            }
            outcomes = {key: fut.result() for key, fut in futures.items()}
    else:
        outcomes = {(detector, trial): bench_trial(doc, detector,
                                                   args.seed + trial,
                                                   args.jitter, args.budget)
                    for detector, trial in jobs}
    for detector in detectors:
        trials = [outcomes[(detector, t)] for t in range(args.trials)]
        exp = np.array([t["expansions"] for t in trials], dtype=float)
        gui = np.array([t["guidances"] for t in trials], dtype=float)
        solved = sum(1 for t in trials if t["outcome"] == "solved")
        rows.append({
            "scenario": name,
            "detector": detector,
            "solved": f"{solved}/{args.trials}",
            "expansions": f"{exp.mean():.1f} ± {exp.std():.1f}",
            "guidances": f"{gui.mean():.2f} ± {gui.std():.2f}",
            "_mean_expansions": exp.mean(),
        })
    return rows


def cmd_bench(args: argparse.Namespace) -> int:
    directory = Path(args.directory)
    docs = []
    for path in sorted(directory.glob("*.json")):
        if path.name.endswith(".script.json"):
            continue
        doc = scenarios.load(path)
        script_path = path.with_suffix(".script.json")
        if script_path.exists():
            with open(script_path) as fh:
                doc["guidance_script"] = json.load(fh)
        docs.append((path.stem, doc))
    if not docs:
        print(f"error: no scenario documents in {directory}", file=sys.stderr)
        return EXIT_ERROR

    detectors = ["vacillation", "heuristic_based"]
    rows = []
    for name, doc in docs:
        rows.extend(_bench_scenario(doc, name, detectors, args))

    cols = ["scenario", "detector", "solved", "expansions", "guidances"]
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in cols}
    print("  ".join(c.ljust(widths[c]) for c in cols))
    for row in rows:
        print("  ".join(str(row[c]).ljust(widths[c]) for c in cols))

    by_detector: dict[str, list[float]] = {}
    for row in rows:
        by_detector.setdefault(row["detector"], []).append(row["_mean_expansions"])
    means = {d: float(np.mean(v)) for d, v in by_detector.items()}
    if len(means) == 2:
        lo = min(means, key=means.get)
        print(f"\n{lo} detection used fewer expansions on average "
              f"({means[lo]:.1f} vs {max(means.values()):.1f})")
    return EXIT_SOLVED


# --------------------------------------------------------------------- main

def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="guidedsearch", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_plan = sub.add_parser("plan", help="run one scenario with a scripted provider")
    p_plan.add_argument("scenario", help="scenario JSON path or builtin:<name>")
    p_plan.add_argument("--script", help="guidance script JSON (list of configurations)")
    p_plan.add_argument("--no-guidance", action="store_true",
                        help="never ask for guidance (ablation arm)")
    p_plan.add_argument("--report", help="write a JSON report here")
    p_plan.add_argument("--log", help="write the event log here (ndjson)")
    p_plan.add_argument("--quiet", action="store_true")
    _add_config_flags(p_plan)
    p_plan.set_defaults(func=cmd_plan)

    p_trace = sub.add_parser("trace", help="emit plot columns from an event log")
    p_trace.add_argument("log")
    p_trace.add_argument("--metric", choices=["delay", "hmin"], required=True)
    p_trace.add_argument("--queue", type=int)
    p_trace.set_defaults(func=cmd_trace)

    p_serve = sub.add_parser("serve", help="run the HTTP session service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument("--sessions-dir", default="sessions")
    p_serve.add_argument("--config", help="JSON file of default config overrides")
    p_serve.add_argument("--ui-dir", help="serve the browser UI from this directory at /ui")
    p_serve.set_defaults(func=cmd_serve)

    p_bench = sub.add_parser("bench", help="detector A/B over a scenario directory")
    p_bench.add_argument("directory")
    p_bench.add_argument("--trials", type=int, default=10)
    p_bench.add_argument("--workers", type=int, default=1)
    p_bench.add_argument("--jitter", type=float, default=2.0,
                         help="guidance jitter radius per trial (domain units)")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--budget", type=int)
    p_bench.set_defaults(func=cmd_bench)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
