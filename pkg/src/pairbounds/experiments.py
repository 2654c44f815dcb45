"""Config-driven experiments and byte-stable reporting.

Each experiment is a pure function of its configuration. Trials draw from
streams derived from ``(seed, trial)``, and every artifact carries a
provenance block (config hash, seed, generator id, versions), so a rerun
with the same config reproduces the same bytes.

Defect-study CSV columns, in order, are listed in :data:`DEFECT_COLUMNS`;
the CSV starts with a single ``# provenance {...}`` comment line.
"""
from __future__ import annotations

import copy
import csv
import hashlib
import io
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bounds import (
    chromatic_bound,
    er_max_degree_bound,
    er_rad_kernel_bound,
    kernel_rademacher_trace_bound,
    rad_generic_bound,
    rad_kernel_bound,
    stab_generic_bound,
    stab_ramp_bound,
    stab_svm_bound,
)
from .errors import ConfigError, PairBoundsError
from .labeler import LabelerSpec, er_sample, regular_sample, sample_pairs, star_sample
from .learner import HINGE, ZERO_ONE, empirical_risk, ramp, train_svm, true_risk_mc
from .pair_graph import (
    TrainingGraph,
    degree_sequence,
    edge_coloring,
    effective_training_size,
    format_edge_list,
    line_graph,
    max_instance_frequency,
    read_edge_list,
)
from .relations import InstanceDistribution, RelationSpec, build_dataset
from .rng import RNG_ALGORITHM, derive_seed, make_rng

KINDS = ("analyze-graph", "sample-labeler", "compute-bounds", "defect-study", "verify-maxdeg")

DEFECT_COLUMNS = (
    "regime", "trial", "seed", "n", "m", "rho", "effective_size",
    "remp", "remp_ramp", "remp_hinge", "risk_mc", "risk_se", "defect",
    "bound_rademacher", "bound_stability", "bound_uniform_labeler",
)

DEFECT_DEFAULTS = {
    "regime": "er",
    "n": 200,
    "m": 2000,
    "k": 2,
    "trials": 100,
    "delta": 0.1,
    "gamma": 1.0,
    "lam": 0.1,
    "feature_mode": "product",
    "distribution": {"kind": "gaussian-mixture", "c": 2, "d": 2, "spread": 0.2},
    "relation": None,  # None: equivalence on the mixture centers
    "mc_samples": 20000,
    "seed": 0,
    "solver": {"tol": 1e-8},
}


# --- formatting -----------------------------------------------------------

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.10g}"
    return str(x)


def _round_floats(obj):
    if isinstance(obj, dict):
        return {str(k): _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return float(f"{x:.10g}") if math.isfinite(x) else str(x)
    if isinstance(obj, np.ndarray):
        return _round_floats(obj.tolist())
    return obj


def emit_report(results, fmt: str = "json", path: str | os.PathLike | None = None,
                columns=None) -> str:
    """Render results as CSV (list of row dicts) or JSON and optionally write them.

    Floats carry 10 significant digits, JSON keys are sorted and CSV columns
    follow ``columns`` (default: keys of the first row), so identical inputs
    give identical bytes.
    """
    if not results:
        raise ValueError("nothing to report")
    if fmt == "csv":
        rows = list(results)
        cols = list(columns) if columns is not None else list(rows[0])
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in rows:
            w.writerow([_fmt(row.get(c)) for c in cols])
        text = buf.getvalue()
    elif fmt == "json":
        text = json.dumps(_round_floats(results), sort_keys=True, indent=2) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def config_hash(config: dict) -> str:
    canon = json.dumps(_round_floats(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def provenance(config: dict) -> dict:
    return {
        "config_hash": config_hash(config),
        "seed": config.get("seed", (config.get("spec") or {}).get("seed")),
        "rng": RNG_ALGORITHM,
        "versions": {"pairbounds": __version__, "numpy": np.__version__},
    }


# --- configuration --------------------------------------------------------

def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(config: dict, overrides) -> dict:
    """Apply ``key=value`` strings; dotted keys reach into nested dicts."""
    out = copy.deepcopy(config)
    for item in overrides or ():
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, value = item.split("=", 1)
        node = out
        parts = key.strip().split(".")
        for p in parts[:-1]:
            if not isinstance(node.get(p), dict):
                node[p] = {}
            node = node[p]
        node[parts[-1]] = _parse_value(value)
    return out


@dataclass
class ExperimentConfig:
    kind: str
    params: dict = field(default_factory=dict)
    output_dir: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment {self.kind!r}; expected one of {KINDS}")

    @classmethod
    def from_json(cls, obj: dict, overrides=()) -> "ExperimentConfig":
        obj = apply_overrides(obj, overrides)
        if "experiment" not in obj:
            raise ConfigError("config needs an 'experiment' field")
        params = {k: v for k, v in obj.items() if k not in ("experiment", "output_dir")}
        return cls(obj["experiment"], params, obj.get("output_dir"))

    @classmethod
    def load(cls, path, overrides=()) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                obj = json.load(fh)
        except FileNotFoundError as exc:
            raise ConfigError(f"config file {path} not found") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        return cls.from_json(obj, overrides)


# --- experiments ----------------------------------------------------------

def analyze_graph(g: TrainingGraph) -> dict:
    deg = degree_sequence(g)
    out = {
        "n": g.n,
        "m": g.m,
        "degree_sum": int(deg.sum()),
        "rho": max_instance_frequency(g),
        "mean_degree": 2.0 * g.m / g.n,
        "regular": bool(g.m and np.all(deg == deg[0])),
        "chromatic_bound": chromatic_bound(max_instance_frequency(g)),
    }
    if g.m:
        part = edge_coloring(g)
        eff = effective_training_size(g)
        out.update({
            "colors_used": part.num_colors,
            "class_sizes": part.class_sizes(),
            "line_graph_edges": line_graph(g).edge_count(),
            "effective_training_size": float(eff.ratio),
            "effective_training_size_exact": str(eff.ratio),
        })
    else:
        out.update({"colors_used": 0, "class_sizes": [], "line_graph_edges": 0,
                    "effective_training_size": None, "effective_training_size_exact": None})
    return out


def analyze_graph_invariants(report: dict) -> list[str]:
    problems = []
    if report["degree_sum"] != 2 * report["m"]:
        problems.append("degree sum differs from 2m")
    if report["m"] and not (report["rho"] <= report["colors_used"] <= report["rho"] + 1):
        problems.append("edge coloring outside [rho, rho + 1] colors")
    return problems


_BOUNDS = {
    "chromatic": (chromatic_bound, ("rho",)),
    "rad_generic": (rad_generic_bound, ("remp", "rad", "rho", "m", "delta")),
    "rad_kernel": (rad_kernel_bound, ("remp_gamma", "B", "gamma", "rho", "m", "delta")),
    "stab_generic": (stab_generic_bound, ("remp", "beta", "rho", "m", "M", "delta")),
    "stab_ramp": (stab_ramp_bound, ("remp_gamma", "beta", "gamma", "rho", "m", "delta")),
    "stab_svm": (stab_svm_bound, ("remp_hinge", "B", "lam", "rho", "m", "delta")),
    "er_max_degree": (er_max_degree_bound, ("n", "m", "delta")),
    "er_rad_kernel": (er_rad_kernel_bound, ("remp_gamma", "B", "gamma", "n", "m", "delta")),
    "trace": (kernel_rademacher_trace_bound, ("gram_trace", "m", "gamma", "B")),
}


def compute_bound(spec: dict) -> dict:
    """Evaluate one bound from a flat dict naming it under ``bound``.

    ``log_delta`` may replace ``delta`` (``delta = exp(log_delta)``).
    """
    spec = dict(spec)
    name = spec.pop("bound", None)
    if name not in _BOUNDS:
        raise ConfigError(f"unknown bound {name!r}; expected one of {sorted(_BOUNDS)}")
    if "log_delta" in spec:
        spec["delta"] = math.exp(spec.pop("log_delta"))
    fn, args = _BOUNDS[name]
    missing = [a for a in args if a not in spec]
    extra = sorted(set(spec) - set(args))
    if missing or extra:
        raise ConfigError(f"bound {name!r}: missing {missing}, unexpected {extra}")
    value = fn(*(spec[a] for a in args))
    if name == "chromatic":
        return {"name": name, "inputs": spec, "total": value}
    if name == "er_max_degree":
        return {"name": name, "inputs": spec, "total": value}
    if name == "trace":
        return {"name": name, "inputs": spec, "trace_term": value.trace_term, "relaxed": value.relaxed}
    return value.to_dict()


def compute_bounds(inputs) -> list[dict]:
    items = inputs.get("bounds", [inputs]) if isinstance(inputs, dict) else inputs
    return [compute_bound(item) for item in items]


def verify_maxdeg(n: int, m: int, delta: float, trials: int, seed: int = 0) -> dict:
    """Monte-Carlo check of the G(n, m) max-degree cap.

    Counts draws whose maximum degree reaches the cap; the cap fails with
    probability at most ``delta``. Also reports the mean per-vertex degree
    against ``2m/n``.
    """
    cap = er_max_degree_bound(n, m, delta)
    maxdeg = np.empty(trials, dtype=np.int64)
    deg_sum = np.zeros(n, dtype=np.float64)
    for t in range(trials):
        g = er_sample(n, m, derive_seed(seed, t))
        deg = degree_sequence(g)
        maxdeg[t] = deg.max() if g.m else 0
        deg_sum += deg
    exceed = int(np.count_nonzero(maxdeg >= cap))
    return {
        "n": n, "m": m, "delta": delta, "trials": trials, "seed": seed,
        "bound": cap,
        "exceedances": exceed,
        "exceedance_fraction": exceed / trials,
        "max_degree_mean": float(maxdeg.mean()),
        "max_degree_max": int(maxdeg.max()),
        "expected_degree": 2.0 * m / n,
        "mean_vertex_degree": float(deg_sum.mean() / trials),
        "ok": exceed / trials <= delta,
    }


def _defect_config(params: dict) -> dict:
    cfg = copy.deepcopy(DEFECT_DEFAULTS)
    unknown = set(params) - set(cfg)
    if unknown:
        raise ConfigError(f"unknown defect-study fields {sorted(unknown)}")
    cfg.update(copy.deepcopy(params))
    if cfg["regime"] not in ("er", "star", "regular"):
        raise ConfigError(f"regime must be er, star or regular, got {cfg['regime']!r}")
    return cfg


def _regime_graph(cfg: dict, rng) -> TrainingGraph:
    n = int(cfg["n"])
    if cfg["regime"] == "er":
        return er_sample(n, int(cfg["m"]), rng)
    if cfg["regime"] == "star":
        return star_sample(n, int(cfg["m"]))
    return regular_sample(n, int(cfg["k"]))


def defect_study(params: dict) -> list[dict]:
    """Train on one labeler regime per trial and compare risk with each bound.

    ``risk_mc`` is the Monte-Carlo 0-1 risk on fresh pairs; ``defect`` is
    ``risk_mc - remp`` (0-1 losses). The uniform-labeler bound is filled in
    only for the ``er`` regime with ``m >= n/2``.
    """
    cfg = _defect_config(params)
    try:
        dist = InstanceDistribution.from_json(cfg["distribution"])
        rel = (RelationSpec.equivalence(dist.centers) if cfg["relation"] is None
               else RelationSpec.from_json(cfg["relation"]))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad distribution/relation: {exc}") from exc
    n, delta, gamma, lam = int(cfg["n"]), float(cfg["delta"]), float(cfg["gamma"]), float(cfg["lam"])
    rows = []
    for t in range(int(cfg["trials"])):
        seed = derive_seed(int(cfg["seed"]), t)
        rng = make_rng(seed)
        X = dist.sample(n, rng)
        g = _regime_graph(cfg, rng)
        data = build_dataset(X, g, rel, cfg["feature_mode"])
        h = train_svm(data, lam, seed=seed, **cfg["solver"])
        B, m, rho = data.norm_bound, g.m, max_instance_frequency(g)
        remp = empirical_risk(h, data, ZERO_ONE).value
        remp_ramp = empirical_risk(h, data, ramp(gamma)).value
        remp_hinge = empirical_risk(h, data, HINGE).value
        risk = true_risk_mc(h, dist, rel, N=int(cfg["mc_samples"]), seed=rng)
        uniform_bound = None
        if cfg["regime"] == "er" and 2 * m >= n:
            uniform_bound = er_rad_kernel_bound(remp_ramp, B, gamma, n, m, delta).total
        rows.append({
            "regime": cfg["regime"], "trial": t, "seed": seed, "n": n, "m": m, "rho": rho,
            "effective_size": m / rho,
            "remp": remp, "remp_ramp": remp_ramp, "remp_hinge": remp_hinge,
            "risk_mc": risk.value, "risk_se": risk.stderr, "defect": risk.value - remp,
            "bound_rademacher": rad_kernel_bound(remp_ramp, B, gamma, rho, m, delta).total,
            "bound_stability": stab_svm_bound(remp_hinge, B, lam, rho, m, delta).total,
            "bound_uniform_labeler": uniform_bound,
        })
    return rows


def defect_study_invariants(rows: list[dict], delta: float) -> list[str]:
    """Range checks plus the coverage guarantee (with 3 standard errors of MC slack)."""
    problems = []
    for r in rows:
        if not (0 <= r["remp"] <= 1 and 0 <= r["risk_mc"] <= 1):
            problems.append(f"trial {r['trial']}: risk outside [0, 1]")
    for col in ("bound_rademacher", "bound_stability", "bound_uniform_labeler"):
        vals = [r for r in rows if r[col] is not None]
        if not vals:
            continue
        covered = sum(r["risk_mc"] <= r[col] + 3 * r["risk_se"] for r in vals)
        if covered < (1 - delta) * len(vals):
            problems.append(f"{col}: covered {covered}/{len(vals)} trials, below 1 - delta")
    return problems


# --- dispatcher ------------------------------------------------------------

@dataclass
class RunResult:
    status: int
    artifacts: dict
    problems: list = field(default_factory=list)


def run(config: ExperimentConfig) -> RunResult:
    """Run one experiment; status is 0 (ok) or 1 (invariant violated).

    Bad configurations raise :class:`ConfigError`.
    """
    p = dict(config.params)
    out_dir = config.output_dir
    prov = provenance({"experiment": config.kind, **p})
    try:
        if config.kind == "analyze-graph":
            try:
                g, _ = read_edge_list(p["edges"], p.get("n"))
            except FileNotFoundError as exc:
                raise ConfigError(f"edge list {p['edges']} not found") from exc
            report = analyze_graph(g)
            problems = analyze_graph_invariants(report)
            payload = {"provenance": prov, "report": report}
            artifacts = {"report.json": emit_report(payload, "json")}
        elif config.kind == "sample-labeler":
            spec = LabelerSpec.from_json(p["spec"])
            g = sample_pairs(spec)
            header = (f"# labeler {json.dumps(spec.to_json(), sort_keys=True)}\n"
                      f"# provenance {json.dumps(_round_floats(prov), sort_keys=True)}\n")
            problems = []
            artifacts = {"edges.txt": header + format_edge_list(g)}
        elif config.kind == "compute-bounds":
            reports = compute_bounds(p["inputs"])
            problems = [f"{r['name']}: preconditions not met" for r in reports if r.get("valid") is False]
            artifacts = {"bounds.json": emit_report({"provenance": prov, "reports": reports}, "json")}
        elif config.kind == "verify-maxdeg":
            res = verify_maxdeg(int(p["n"]), int(p["m"]), float(p["delta"]), int(p["trials"]), int(p.get("seed", 0)))
            problems = [] if res["ok"] else [f"exceedance fraction {res['exceedance_fraction']} > delta"]
            artifacts = {"maxdeg.json": emit_report({"provenance": prov, "result": res}, "json")}
        else:
            rows = defect_study(p)
            cfg = _defect_config(p)
            problems = defect_study_invariants(rows, float(cfg["delta"]))
            prov = provenance({"experiment": config.kind, **cfg})
            header = f"# provenance {json.dumps(_round_floats(prov), sort_keys=True)}\n"
            artifacts = {
                "defect_study.csv": header + emit_report(rows, "csv", columns=DEFECT_COLUMNS),
                "defect_study.json": emit_report({"provenance": prov, "config": cfg}, "json"),
            }
    except KeyError as exc:
        raise ConfigError(f"missing config field {exc}") from exc
    except ConfigError:
        raise
    except PairBoundsError as exc:
        raise ConfigError(str(exc)) from exc

    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        for name, text in artifacts.items():
            with open(os.path.join(out_dir, name), "w", newline="") as fh:
                fh.write(text)
    return RunResult(1 if problems else 0, artifacts, problems)
