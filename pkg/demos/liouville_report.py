"""Run two bundled scenarios and print their Liouville verdicts."""
from pathlib import Path

from fharmonic.scenario import load_suite, run_scenario

suite = Path(__file__).resolve().parents[1] / "scenarios" / "liouville_suite.yaml"
wanted = {"bernstein_minimal_graph_m3", "catenoid_annulus_m3", "hyperbolic_harmonic_m3"}
for sc in load_suite(suite):
    if sc.id in wanted:
        rep = run_scenario(sc, emit_curves=False)
        print(f"{sc.id}: {rep['verdict']} failing={rep['failing']}")
