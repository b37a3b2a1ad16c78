"""Scenario files: YAML documents describing audits to run and the verdicts expected."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np
import yaml

from . import manifold as mf
from . import profiles, target as tg
from .audit import (THEOREMS, LiouvilleScenario, energy_profile, liouville_verdict,
                    upper_bound_machinery)
from .errors import ConfigurationError, FHarmonicError
from .expr import load_table, parse_expression
from .radial import limit_at_infinity, solve_flux
from .stress import annulus_identity_residual, eigen_inequality_check, trace_bounds_check

__all__ = ["Scenario", "load_suite", "build", "run_scenario", "write_curves"]

_KNOWN_KEYS = {"id", "profile", "manifold", "factor", "target", "theorem", "solver", "grids",
               "granted", "case", "expect", "curves", "output_dir", "bound_C", "description"}


@dataclass
class Scenario:
    id: str
    profile: Mapping[str, Any]
    manifold: Mapping[str, Any]
    theorem: str
    factor: Mapping[str, Any] = field(default_factory=lambda: {"kind": "unit"})
    target: Mapping[str, Any] = field(default_factory=lambda: {"kind": "scalar"})
    solver: Mapping[str, Any] = field(default_factory=dict)
    grids: Mapping[str, Any] = field(default_factory=dict)
    granted: tuple = ()
    case: Mapping[str, Any] | None = None
    expect: Mapping[str, Any] = field(default_factory=dict)
    curves: Mapping[str, Any] | None = None
    output_dir: str | None = None
    bound_C: float | None = None
    base_dir: str = "."


def _float(x) -> float:
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity"):
            return math.inf
        if s in ("-inf", "-infinity"):
            return -math.inf
    try:
        return float(x)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"expected a number, got {x!r}") from exc


def load_suite(path) -> list[Scenario]:
    """Parse a suite file. Errors carry the file name and scenario position."""
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f":{mark.line + 1}:{mark.column + 1}" if mark else ""
        raise ConfigurationError(f"{path}{where}: {exc}") from exc
    except OSError as exc:
        raise ConfigurationError(f"{path}: {exc.strerror}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("scenarios"), list):
        raise ConfigurationError(f"{path}: top level needs a 'scenarios' list")
    defaults = doc.get("defaults") or {}
    out, seen = [], set()
    for i, raw in enumerate(doc["scenarios"]):
        where = f"{path}: scenarios[{i}]"
        if not isinstance(raw, dict):
            raise ConfigurationError(f"{where}: expected a mapping")
        merged = {**defaults, **raw}
        unknown = set(merged) - _KNOWN_KEYS
        if unknown:
            raise ConfigurationError(f"{where}: unknown keys {sorted(unknown)}")
        for key in ("id", "profile", "manifold", "theorem"):
            if key not in merged:
                raise ConfigurationError(f"{where}: missing '{key}'")
        sid = str(merged["id"])
        if sid in seen:
            raise ConfigurationError(f"{where}: duplicate id {sid!r}")
        seen.add(sid)
        merged.pop("description", None)
        merged["granted"] = tuple(merged.get("granted") or ())
        sc = Scenario(**merged, base_dir=str(path.parent))
        try:
            build(sc)
        except FHarmonicError as exc:
            raise ConfigurationError(f"{where} ({sid}): {exc}") from exc
        out.append(sc)
    return out


def _profile(cfg):
    cfg = dict(cfg)
    name = cfg.pop("name", None)
    if name is None:
        raise ConfigurationError("profile needs a 'name'")
    return profiles.make_builtin(name, **{k: _float(v) for k, v in cfg.items()})


def _manifold(cfg, base_dir):
    cfg = dict(cfg)
    kind = cfg.get("kind")
    m = int(cfg.get("m", 3))
    if kind == "euclidean":
        return mf.euclidean(m)
    if kind == "hyperbolic":
        return mf.hyperbolic(m, _float(cfg.get("alpha", 1.0)))
    if kind == "pinched":
        if "curvature" in cfg:
            K = parse_expression(str(cfg["curvature"]))
        elif "table" in cfg:
            K = load_table(Path(base_dir) / cfg["table"])
        else:
            raise ConfigurationError("pinched manifold needs 'curvature' or 'table'")
        return mf.build_pinched(K, _float(cfg.get("r_max", 50.0)), m=m,
                                params={k: _float(v) for k, v in (cfg.get("params") or {}).items()})
    raise ConfigurationError(f"unknown manifold kind {kind!r}")


def _factor(cfg):
    cfg = dict(cfg or {"kind": "unit"})
    kind = cfg.get("kind", "unit")
    if kind == "unit":
        return mf.unit_factor()
    if kind == "power":
        return mf.power_factor(_float(cfg["s"]))
    if kind == "linear":
        return mf.linear_factor(_float(cfg["c"]))
    if kind == "exp":
        return mf.exp_factor(_float(cfg["c"]))
    raise ConfigurationError(f"unknown factor kind {kind!r}")


def _target(cfg):
    cfg = dict(cfg or {"kind": "scalar"})
    kind = cfg.get("kind", "scalar")
    if kind == "scalar":
        return tg.scalar()
    if kind == "flat":
        return tg.flat(int(cfg.get("n", 1)))
    if kind == "power":
        return tg.power(_float(cfg.get("k1", 1.0)), _float(cfg["k"]), int(cfg.get("n", 1)))
    raise ConfigurationError(f"unknown target kind {kind!r}")


def _grid(cfg, default):
    if cfg is None:
        return default
    if isinstance(cfg, list):
        return np.asarray([_float(x) for x in cfg])
    return np.geomspace(_float(cfg["lo"]), _float(cfg["hi"]), int(cfg.get("num", 64)))


def build(sc: Scenario, tol_scale: float = 1.0) -> LiouvilleScenario:
    """Resolve named configs into a :class:`LiouvilleScenario`."""
    if sc.theorem not in THEOREMS:
        raise ConfigurationError(f"unknown theorem {sc.theorem!r}")
    prof = _profile(sc.profile)
    man = _manifold(sc.manifold, sc.base_dir)
    fac = _factor(sc.factor)
    tgt = _target(sc.target)
    solver = dict(sc.solver or {})
    fluxes = tuple(_float(q) for q in solver.get("Q", ()))
    intervals = tuple((_float(a), _float(b)) for a, b in solver.get("intervals", ()))
    grids = dict(sc.grids or {})
    sigma_grid = _grid(grids.get("sigma"), None)
    R_samples = _grid(grids.get("R_samples"), None)
    case = params = None
    if sc.case:
        case = str(sc.case.get("name"))
        params = {k: _float(v) for k, v in sc.case.items() if k != "name"}
    return LiouvilleScenario(profile=prof, manifold=man, theorem=sc.theorem, factor=fac,
                             target=tgt, fluxes=fluxes, intervals=intervals,
                             granted=frozenset(sc.granted), case=case, case_params=params or {},
                             sigma_grid=sigma_grid, R_samples=R_samples,
                             bound_C=None if sc.bound_C is None else _float(sc.bound_C),
                             tol_scale=tol_scale)


def _curve_data(sc: Scenario, ls: LiouvilleScenario, sigma: float | None):
    cfg = dict(sc.curves)
    Q = _float(cfg["Q"])
    iv = tuple(_float(x) for x in cfg.get("interval", (0.0, math.inf)))
    rmap = solve_flux(ls.profile, ls.manifold, ls.factor, Q, iv)
    if cfg.get("shift_to_limit", True) and math.isinf(rmap.r_hi) and ls.manifold.m > 2:
        lim = limit_at_infinity(rmap)
        if lim.status == "finite":
            rmap = rmap.shifted(-lim.value)
    R = _grid(cfg.get("R_samples"), None)
    if R is None:
        lo = max(rmap.r_lo * (1.05 if rmap.edge_singular else 1.0), 1e-3)
        hi = rmap.r_hi if math.isfinite(rmap.r_hi) else 50.0 * max(lo, 1.0)
        R = np.geomspace(lo, hi, 48)
    R2 = _float(cfg.get("R2", R[0]))
    s = float(sigma) if sigma is not None and math.isfinite(sigma) else 0.0
    growth = energy_profile(rmap, R, s, R0=R[0] if not rmap.reaches_pole else None)
    upper = upper_bound_machinery(rmap, ls.target, R2, R[R >= R2])
    audits = {
        "annulus_identity_residual": annulus_identity_residual(rmap, float(R[0]), float(R[-1])),
        "trace_bounds": trace_bounds_check(rmap, R).worst(),
        "eigen_inequality": eigen_inequality_check(rmap, R).worst(),
    }
    return rmap, growth, upper, audits


def write_curves(path, growth, upper) -> None:
    """CSV with columns R,E,Z,M,K,eta; blanks where the upper machinery starts later."""
    Rz = {float(r): i for i, r in enumerate(upper.R)}
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["R", "E", "Z", "M", "K", "eta"])
        for R, E in zip(growth.R_samples, growth.E_samples):
            j = Rz.get(float(R))
            row = [repr(float(R)), repr(float(E))]
            if j is None:
                row += [""] * 4
            else:
                row += [repr(float(upper.Z[j])), repr(float(upper.M[j])),
                        repr(float(upper.K[j])), repr(float(upper.eta[j]))]
            w.writerow(row)


def _expectation_met(expect: Mapping, verdict) -> tuple[bool, str]:
    if not expect:
        return True, "no expectation declared"
    want = expect.get("verdict")
    if want is not None and want != verdict.kind:
        return False, f"expected {want}, got {verdict.kind}"
    want_fail = expect.get("failing")
    if want_fail is not None:
        if sorted(want_fail) != sorted(verdict.failing):
            return False, f"expected failing {sorted(want_fail)}, got {sorted(verdict.failing)}"
    return True, "met"


def run_scenario(sc: Scenario, *, tol_scale: float = 1.0, emit_curves: bool = True,
                 out_dir: str | Path | None = None) -> dict:
    """Evaluate one scenario and return its JSON-ready report entry.

    When ``out_dir`` is given and curves are enabled, ``<id>_curves.csv`` is written there.
    """
    ls = build(sc, tol_scale)
    verdict = liouville_verdict(ls)
    met, why = _expectation_met(sc.expect, verdict)
    entry = {**verdict.as_dict(), "expectation_met": met, "expectation": why,
             "theorem": sc.theorem}
    if sc.curves:
        rmap, growth, upper, audits = _curve_data(sc, ls, verdict.sigma)
        entry["growth"] = growth.as_dict()
        entry["upper_bound"] = upper.as_dict()
        entry["audits"] = audits
        if emit_curves and out_dir is not None:
            target_dir = Path(sc.output_dir) if sc.output_dir else Path(out_dir)
            target_dir.mkdir(parents=True, exist_ok=True)
            name = f"{sc.id}_curves.csv"
            write_curves(target_dir / name, growth, upper)
            entry["curves_file"] = name
    return entry
