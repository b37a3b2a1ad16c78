"""Command-line scenario runner.

Exit status: 0 when every scenario meets its expectation, 1 when some do
not, 2 on configuration or parse errors, 3 on numeric failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import ConfigurationError, FHarmonicError, NumericError, ParameterError
from .scenario import load_suite, run_scenario

log = logging.getLogger("fharmonic")

EXIT_OK, EXIT_UNMET, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fharmonic",
                                description="Run Liouville audit scenarios and write JSON/CSV reports.")
    p.add_argument("--suite", required=True, help="YAML scenario file")
    p.add_argument("--scenario", action="append", default=None,
                   help="run only this scenario id (repeatable)")
    p.add_argument("--out", default="fharmonic_out", help="output directory")
    p.add_argument("--tolerance-scale", type=float, default=1.0,
                   help="uniform multiplier on decision tolerances")
    p.add_argument("--emit-curves", choices=("on", "off"), default="on")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _clean(obj):
    """Make a report JSON-safe: non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj


def _run_one(args):
    sc, tol_scale, emit, out = args
    try:
        return sc.id, run_scenario(sc, tol_scale=tol_scale, emit_curves=emit, out_dir=out), None
    except NumericError as exc:
        return sc.id, None, ("numeric", str(exc))
    except (ConfigurationError, ParameterError) as exc:
        return sc.id, None, ("config", str(exc))


def run(argv=None) -> int:
    ns = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        scenarios = load_suite(ns.suite)
    except FHarmonicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if ns.scenario:
        known = {s.id for s in scenarios}
        missing = [s for s in ns.scenario if s not in known]
        if missing:
            print(f"error: unknown scenario id(s) {missing}", file=sys.stderr)
            return EXIT_CONFIG
        scenarios = [s for s in scenarios if s.id in set(ns.scenario)]
    out = Path(ns.out)
    out.mkdir(parents=True, exist_ok=True)
    jobs = [(s, ns.tolerance_scale, ns.emit_curves == "on", str(out)) for s in scenarios]
    if ns.workers > 1:
        with ProcessPoolExecutor(max_workers=ns.workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]

    report, status = {}, EXIT_OK
    for sid, entry, err in results:
        if err is not None:
            kind, msg = err
            print(f"error in scenario {sid}: {msg}", file=sys.stderr)
            report[sid] = {"error": kind, "message": msg}
            status = max(status, EXIT_NUMERIC if kind == "numeric" else EXIT_CONFIG)
            continue
        report[sid] = entry
        mark = "ok  " if entry["expectation_met"] else "FAIL"
        print(f"{mark} {sid}: {entry['verdict']} {list(entry['failing'])} ({entry['expectation']})")
        if not entry["expectation_met"] and status == EXIT_OK:
            status = EXIT_UNMET
    with (out / "report.json").open("w") as fh:
        json.dump(_clean(report), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
