"""Experiment runner: multi-instance optimization runs, resource sweeps,
the evaluation-time benchmark, and shadow-set file utilities.

Verbs:

- ``also run``      one experiment (several seeded instances), emitting
                    per-instance trace CSVs, a summary JSON and a
                    mean/std band CSV
- ``also sweep``    copies needed to reach target cost levels, per backend
- ``also bench``    wall time of a single shadow evaluation vs qubit count
- ``also shadows``  sample shadow sets to disk / inspect saved sets

Exit codes: 0 success, 2 configuration error, 3 numerical abort.
Worker count for instance parallelism comes from --workers or the
ALSO_WORKERS environment variable.

Trace CSV columns: iter, backend_value, exact_value, copies, wall_ms,
and infidelity for dense state-preparation runs.  backend_value is what
the optimizer saw (for SPSA, the mean of the two perturbed costs);
exact_value is the infinite-copy cost recomputed at the logged iterate;
copies is the cumulative ledger.  Curve CSV columns: iter, copies,
cost_mean, cost_lo, cost_hi (+ infid_mean, infid_lo, infid_hi when
infidelity is available); lo/hi are mean -/+ one standard deviation
(population) across instances.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import dataclasses
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from also.ansatz import TEMPLATES, random_params
from also.estimator import (
    CostFunction,
    ResourceLedger,
    eval_exact,
    eval_shadow,
    eval_shots,
)
from also.optimizer import (
    NonFiniteObjectiveError,
    OptTrace,
    PowellConfig,
    SpsaConfig,
    powell_minimize,
    spsa_minimize,
)
from also.qsim import DENSE_QUBIT_LIMIT, SimulationError
from also.shadow import ShadowSet, sample_shadows
from also.tasks import (
    gen_basis_target,
    gen_compatible_target,
    gen_ensemble,
    make_autoencoder,
    make_state_prep,
    true_infidelity,
)

WORKERS_ENV = "ALSO_WORKERS"


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the bad field."""


@dataclass
class ExperimentConfig:
    task: str = "state-prep"          # state-prep | autoencoder
    n: int = 8
    d: int = 2
    n_b: int = 0                      # trash register size (autoencoder)
    target_kind: str = "auto"         # compatible | basis | auto
    template: str = "ry-cnot-ry"
    backend: str = "exact"            # exact | shots:K | shadow:T
    optimizer: str = "spsa:iterations=3000,exponent=0.5"
    instances: int = 5
    seed: int = 0
    out_dir: str = "runs/out"
    log_every: int = 0                # 0 = auto cadence
    precision: str = "double"         # double | single (shadow objective only)
    workers: int = 0                  # 0 = ALSO_WORKERS env or cpu count

    def validate(self) -> "ExperimentConfig":
        if self.task not in ("state-prep", "autoencoder"):
            raise ConfigError(f"task: unknown task {self.task!r}")
        if self.n < 2 or self.n % 2:
            raise ConfigError(f"n: qubit count must be even and >= 2, got {self.n}")
        if self.d < 1:
            raise ConfigError(f"d: depth must be >= 1, got {self.d}")
        if self.task == "autoencoder" and not 0 < self.n_b < self.n:
            raise ConfigError(f"n_b: trash size must lie in 1..{self.n - 1}, got {self.n_b}")
        if self.target_kind not in ("auto", "compatible", "basis"):
            raise ConfigError(f"target_kind: unknown kind {self.target_kind!r}")
        if self.target_kind == "compatible" and self.n > DENSE_QUBIT_LIMIT:
            raise ConfigError(
                f"target_kind: compatible targets need n <= {DENSE_QUBIT_LIMIT}")
        if self.template not in TEMPLATES:
            raise ConfigError(
                f"template: unknown template {self.template!r}; have {sorted(TEMPLATES)}")
        if self.instances < 1:
            raise ConfigError(f"instances: must be >= 1, got {self.instances}")
        if self.precision not in ("double", "single"):
            raise ConfigError(f"precision: must be double or single, got {self.precision!r}")
        if self.log_every < 0 or self.workers < 0:
            raise ConfigError("log_every/workers: must be >= 0")
        parse_backend(self.backend)
        parse_optimizer(self.optimizer, self.backend)
        return self

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                payload = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from None
        return cls.from_dict(payload)

    @classmethod
    def from_dict(cls, payload: dict) -> "ExperimentConfig":
        known = {f.name: f for f in dataclasses.fields(cls)}
        cfg = cls()
        for key, value in payload.items():
            if key not in known:
                raise ConfigError(f"{key}: unknown config field")
            cfg = dataclasses.replace(cfg, **{key: _coerce(known[key], key, value)})
        return cfg

    def apply_overrides(self, pairs) -> "ExperimentConfig":
        cfg = self
        known = {f.name: f for f in dataclasses.fields(self)}
        for pair in pairs:
            if "=" not in pair:
                raise ConfigError(f"override {pair!r} is not key=value")
            key, value = pair.split("=", 1)
            if key not in known:
                raise ConfigError(f"{key}: unknown config field")
            cfg = dataclasses.replace(cfg, **{key: _coerce(known[key], key, value)})
        return cfg


def _coerce(field_def, key: str, value):
    want = field_def.type if isinstance(field_def.type, type) else {
        "str": str, "int": int}.get(field_def.type, str)
    if want is int and not isinstance(value, int):
        try:
            value = int(float(value))
        except (TypeError, ValueError):
            raise ConfigError(f"{key}: expected an integer, got {value!r}") from None
    if want is str:
        value = str(value)
    return value


PRESETS = {
    # defaults mirror the study design: 8-qubit runs log every iteration,
    # 30-qubit runs use depth 4 and a thinned log
    "sp8": dict(task="state-prep", n=8, d=2, target_kind="compatible",
                optimizer="spsa:iterations=3000,exponent=0.5",
                backend="shadow:500000", out_dir="runs/sp8"),
    "sp30": dict(task="state-prep", n=30, d=4, target_kind="basis",
                 optimizer="spsa:iterations=9000,exponent=0.5",
                 backend="shadow:500000", precision="single",
                 out_dir="runs/sp30"),
    "ae8": dict(task="autoencoder", n=8, d=2, n_b=4,
                optimizer="spsa:iterations=3000,exponent=0.3",
                backend="shadow:500000", out_dir="runs/ae8"),
    "ae30": dict(task="autoencoder", n=30, d=4, n_b=10,
                 optimizer="spsa:iterations=9000,exponent=0.3",
                 backend="shadow:500000", precision="single",
                 out_dir="runs/ae30"),
}


def parse_backend(spec: str) -> tuple:
    """'exact' | 'shots:K' | 'shadow:T' -> (kind, amount)."""
    parts = spec.split(":")
    if parts[0] == "exact" and len(parts) == 1:
        return ("exact", 0)
    if parts[0] in ("shots", "shadow") and len(parts) == 2:
        try:
            amount = int(float(parts[1]))
        except ValueError:
            raise ConfigError(f"backend: bad amount in {spec!r}") from None
        if amount < 1:
            raise ConfigError(f"backend: amount must be >= 1 in {spec!r}")
        return (parts[0], amount)
    raise ConfigError(f"backend: cannot parse {spec!r}")


def parse_optimizer(spec: str, backend: str) -> dict:
    """'spsa:iterations=3000,exponent=0.5' | 'powell:cap=50000,...'."""
    head, _, rest = spec.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            if "=" not in item:
                raise ConfigError(f"optimizer: bad key=value {item!r}")
            key, value = item.split("=", 1)
            params[key.strip()] = value.strip()
    if head == "spsa":
        return dict(kind="spsa",
                    iterations=int(float(params.pop("iterations", 3000))),
                    exponent=float(params.pop("exponent", 0.5)),
                    **_no_extra(params))
    if head == "powell":
        cap = params.pop("cap", None)
        if cap is None:
            # deterministic shadow objectives may run to convergence
            cap_val = None if parse_backend(backend)[0] == "shadow" else 50_000
        else:
            cap_val = None if cap in ("none", "0") else int(float(cap))
        return dict(kind="powell", cap=cap_val,
                    line_tol=float(params.pop("line_tol", 1e-4)),
                    cost_tol=float(params.pop("cost_tol", 1e-8)),
                    **_no_extra(params))
    raise ConfigError(f"optimizer: unknown kind {head!r}")


def _no_extra(params: dict) -> dict:
    if params:
        raise ConfigError(f"optimizer: unknown option(s) {sorted(params)}")
    return {}


def _auto_log_every(cfg: ExperimentConfig, opt: dict) -> int:
    if cfg.log_every:
        return cfg.log_every
    span = opt["iterations"] if opt["kind"] == "spsa" else (opt["cap"] or 10 ** 6)
    return 1 if span <= 3000 else 1000


# --- single instance ------------------------------------------------------

def _instance_seeds(seed: int, instance: int) -> list:
    return [int(s) for s in
            np.random.SeedSequence([seed, instance]).generate_state(4, np.uint64)]


def run_instance(cfg: ExperimentConfig, instance: int) -> dict:
    """Run one seeded instance; returns plain-python trace data."""
    s_gen, s_init, s_backend, s_opt = _instance_seeds(cfg.seed, instance)
    rng_gen = np.random.default_rng(s_gen)
    template = TEMPLATES[cfg.template]
    dense_ok = cfg.n <= DENSE_QUBIT_LIMIT

    if cfg.task == "state-prep":
        kind = cfg.target_kind
        if kind == "auto":
            kind = "compatible" if dense_ok else "basis"
        if kind == "compatible":
            target, _ = gen_compatible_target(cfg.n, cfg.d, template, rng_gen)
        else:
            target = gen_basis_target(cfg.n, rng_gen)
        problem = make_state_prep(target, cfg.d, template)
    else:
        ensemble, _ = gen_ensemble(cfg.n, cfg.n_b, cfg.d, template, rng_gen)
        problem = make_autoencoder(ensemble, cfg.n_b, cfg.d, template)

    dtype = "complex64" if cfg.precision == "single" else "complex128"
    cf = problem.cost_function(eval_dtype=dtype)
    shape = (cfg.n // 2, cfg.d, template.n_params)
    theta0 = random_params(cfg.n, cfg.d, template,
                           np.random.default_rng(s_init)).ravel()
    ledger = ResourceLedger()
    backend_kind, amount = parse_backend(cfg.backend)

    if backend_kind == "shadow":
        shadows = sample_shadows(cf.source, amount,
                                 np.random.default_rng(s_backend))
        ledger.charge_copies(amount)

        def objective(flat):
            ledger.count_evaluation()
            return 1.0 - eval_shadow(cf, flat.reshape(shape), shadows)
    elif backend_kind == "shots":
        rng_backend = np.random.default_rng(s_backend)

        def objective(flat):
            return 1.0 - eval_shots(cf, flat.reshape(shape), amount,
                                    rng_backend, ledger)
    else:
        def objective(flat):
            ledger.count_evaluation()
            return 1.0 - eval_exact(cf, flat.reshape(shape))

    def exact_fn(flat):
        return 1.0 - eval_exact(cf, flat.reshape(shape))

    opt = parse_optimizer(cfg.optimizer, cfg.backend)
    log_every = _auto_log_every(cfg, opt)
    start = time.perf_counter()
    if opt["kind"] == "spsa":
        spsa_cfg = SpsaConfig(iterations=opt["iterations"],
                              exponent=opt["exponent"], seed=s_opt,
                              log_every=log_every)
        theta_best, trace = spsa_minimize(objective, theta0, spsa_cfg,
                                          exact_fn=exact_fn,
                                          copies_fn=lambda: ledger.copies_consumed)
    else:
        powell_cfg = PowellConfig(max_evaluations=opt["cap"],
                                  line_tol=opt["line_tol"],
                                  cost_tol=opt["cost_tol"], log_every=log_every)
        theta_best, trace = powell_minimize(objective, theta0, powell_cfg,
                                            exact_fn=exact_fn,
                                            copies_fn=lambda: ledger.copies_consumed)
    wall_s = time.perf_counter() - start

    infidelities = None
    if cfg.task == "state-prep" and dense_ok:
        infidelities = [true_infidelity(problem, th.reshape(shape))
                        for th in trace.thetas]

    exact_vals = np.array(trace.exact_values)
    best_row = int(np.nanargmin(exact_vals))
    result = {
        "instance": instance,
        "seeds": [s_gen, s_init, s_backend, s_opt],
        "iters": list(trace.iters),
        "backend_values": list(trace.backend_values),
        "exact_values": list(trace.exact_values),
        "copies": list(trace.copies),
        "wall_ms": list(trace.wall_ms),
        "infidelities": infidelities,
        "best_exact_cost": float(exact_vals[best_row]),
        "final_exact_cost": float(exact_vals[-1]),
        "best_infidelity": (float(np.nanmin(infidelities))
                            if infidelities else None),
        "final_infidelity": (float(infidelities[-1]) if infidelities else None),
        "copies_total": int(ledger.copies_consumed),
        "evaluations": int(trace.evaluations),
        "cap_hit": bool(trace.cap_hit),
        "wall_s": wall_s,
    }
    return result


def _run_instance_job(args) -> dict:
    payload, instance = args
    return run_instance(ExperimentConfig.from_dict(payload), instance)


# --- experiment orchestration ---------------------------------------------

def _worker_count(cfg: ExperimentConfig) -> int:
    if cfg.workers:
        return cfg.workers
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV}: not an integer: {env!r}") from None
    return min(os.cpu_count() or 1, cfg.instances)


def run_experiment(cfg: ExperimentConfig) -> dict:
    """Run all instances, write trace CSVs, curve CSV and summary JSON."""
    cfg.validate()
    os.makedirs(cfg.out_dir, exist_ok=True)
    workers = _worker_count(cfg)
    payload = dataclasses.asdict(cfg)
    jobs = [(payload, i) for i in range(cfg.instances)]
    t0 = time.perf_counter()
    if workers > 1 and cfg.instances > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_instance_job, jobs))
    else:
        results = [_run_instance_job(job) for job in jobs]
    results.sort(key=lambda r: r["instance"])
    total_wall = time.perf_counter() - t0

    trace_files = []
    for res in results:
        path = os.path.join(cfg.out_dir, f"instance_{res['instance']:02d}.csv")
        _write_trace_csv(path, res)
        trace_files.append(os.path.basename(path))

    backend_kind, _ = parse_backend(cfg.backend)
    summary = {
        "config": payload,
        "copies_label": "infinite" if backend_kind == "exact" else "measured",
        "instances": [
            {k: res[k] for k in
             ("instance", "seeds", "best_exact_cost", "final_exact_cost",
              "best_infidelity", "final_infidelity", "copies_total",
              "evaluations", "cap_hit")}
            for res in results
        ],
        "trace_files": trace_files,
        "aggregate": _aggregate(results),
        "timing": {"total_wall_s": total_wall,
                   "per_instance_wall_s": [res["wall_s"] for res in results]},
    }
    with open(os.path.join(cfg.out_dir, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=1)
    _write_curve_csv(os.path.join(cfg.out_dir, "curve.csv"), results)
    return summary


def _aggregate(results: list) -> dict:
    agg = {}
    for key in ("best_exact_cost", "final_exact_cost", "best_infidelity",
                "final_infidelity", "copies_total"):
        vals = [res[key] for res in results]
        if any(v is None for v in vals):
            agg[key] = None
            continue
        arr = np.array(vals, dtype=float)
        agg[key] = {"mean": float(arr.mean()), "std": float(arr.std())}
    return agg


def _write_trace_csv(path: str, res: dict) -> None:
    infid = res["infidelities"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["iter", "backend_value", "exact_value", "copies", "wall_ms"]
        if infid is not None:
            header.append("infidelity")
        writer.writerow(header)
        for i in range(len(res["iters"])):
            row = [res["iters"][i], repr(res["backend_values"][i]),
                   repr(res["exact_values"][i]), res["copies"][i],
                   f"{res['wall_ms'][i]:.3f}"]
            if infid is not None:
                row.append(repr(infid[i]))
            writer.writerow(row)


def _write_curve_csv(path: str, results: list) -> None:
    """Band data across instances on the common logged iterations."""
    common = set(results[0]["iters"])
    for res in results[1:]:
        common &= set(res["iters"])
    iters = sorted(common)
    lookup = [dict(zip(res["iters"], range(len(res["iters"])))) for res in results]
    has_infid = all(res["infidelities"] is not None for res in results)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["iter", "copies", "cost_mean", "cost_lo", "cost_hi"]
        if has_infid:
            header += ["infid_mean", "infid_lo", "infid_hi"]
        writer.writerow(header)
        for it in iters:
            rows = [lookup[j][it] for j in range(len(results))]
            costs = np.array([results[j]["exact_values"][rows[j]]
                              for j in range(len(results))])
            copies = int(np.mean([results[j]["copies"][rows[j]]
                                  for j in range(len(results))]))
            line = [it, copies, repr(float(costs.mean())),
                    repr(float(costs.mean() - costs.std())),
                    repr(float(costs.mean() + costs.std()))]
            if has_infid:
                infs = np.array([results[j]["infidelities"][rows[j]]
                                 for j in range(len(results))])
                line += [repr(float(infs.mean())),
                         repr(float(infs.mean() - infs.std())),
                         repr(float(infs.mean() + infs.std()))]
            writer.writerow(line)


# --- resource sweep ---------------------------------------------------------

def sweep_experiment(cfg: ExperimentConfig, objectives, backends=None) -> list:
    """First ledger value at which the running-best exact cost crosses each
    objective, averaged over instances; 'not reached' stays empty."""
    cfg.validate()
    rows = []
    for backend in backends or [cfg.backend]:
        run_cfg = dataclasses.replace(
            cfg, backend=backend,
            out_dir=os.path.join(cfg.out_dir, backend.replace(":", "-")))
        summary = run_experiment(run_cfg)
        traces = []
        for name in summary["trace_files"]:
            with open(os.path.join(run_cfg.out_dir, name)) as fh:
                traces.append(list(csv.DictReader(fh)))
        for objective in objectives:
            crossings = []
            for trace in traces:
                best = math.inf
                hit = None
                for line in trace:
                    best = min(best, float(line["exact_value"]))
                    if best <= objective:
                        hit = int(line["copies"])
                        break
                crossings.append(hit)
            if any(c is None for c in crossings):
                rows.append({"backend": backend, "objective": objective,
                             "copies": None, "reached": False})
            else:
                rows.append({"backend": backend, "objective": objective,
                             "copies": float(np.mean(crossings)), "reached": True})
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, "sweep.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["backend", "objective", "copies", "reached"])
        for row in rows:
            writer.writerow([row["backend"], row["objective"],
                             "" if row["copies"] is None else repr(row["copies"]),
                             int(row["reached"])])
    return rows


# --- timing benchmark -------------------------------------------------------

def bench_eval_time(n_list, repeats: int = 5, shadow_count: int = 20_000,
                    depth=None, seed: int = 0, out_path=None) -> list:
    """Time one shadow evaluation per qubit count, d = floor(log2 n) unless
    given.  One 1-local observable, as in the reference timing protocol,
    so fixed depth means flat cost in n.  The shadow reduction is warmed
    first and the rows measure the per-evaluation contraction only."""
    from also.estimator import CostFunction
    from also.lightcone import LocalObservable, ObservableSum

    rows = []
    for n in n_list:
        if n % 2:
            raise ConfigError(f"bench: qubit counts must be even, got {n}")
        d = depth or max(1, int(math.log2(n)))
        rng = np.random.default_rng(seed)
        template = TEMPLATES["ry-cnot-ry"]
        target = gen_basis_target(n, rng)
        proj0 = np.array([[1, 0], [0, 0]], dtype=complex)
        obs = ObservableSum((LocalObservable((n // 2,), proj0),))
        cf = CostFunction("custom", target, obs, n, d, template)
        shadows = sample_shadows(target, shadow_count, rng)
        theta = random_params(n, d, template, rng)
        eval_shadow(cf, theta, shadows)  # warm reductions and caches
        times = []
        for _ in range(repeats):
            theta = random_params(n, d, template, rng)
            t0 = time.perf_counter()
            eval_shadow(cf, theta, shadows)
            times.append(time.perf_counter() - t0)
        rows.append({"n": n, "d": d, "seconds_mean": float(np.mean(times)),
                     "seconds_std": float(np.std(times))})
    if out_path:
        with open(out_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "d", "seconds_mean", "seconds_std"])
            for row in rows:
                writer.writerow([row["n"], row["d"], repr(row["seconds_mean"]),
                                 repr(row["seconds_std"])])
    return rows


# --- shadow file utilities --------------------------------------------------

def shadows_sample(n: int, count: int, seed: int, out_path: str,
                   target: str = "basis") -> None:
    from also.qsim import ProductState

    rng = np.random.default_rng(seed)
    if target == "basis":
        state = gen_basis_target(n, rng)
    elif target == "zeros":
        state = ProductState.basis([0] * n)
    else:
        raise ConfigError(f"shadows: unknown target {target!r}")
    shadow_set = sample_shadows(state, count, rng)
    shadow_set.seed = seed
    shadow_set.save(out_path)


def shadows_inspect(path: str, json_path=None) -> dict:
    shadow_set = ShadowSet.load(path)
    freq = np.stack([(shadow_set.bases == b).mean(axis=0) for b in range(3)])
    info = {
        "n": shadow_set.n,
        "T": shadow_set.T,
        "seed": shadow_set.seed,
        "basis_frequency_range": [float(freq.min()), float(freq.max())],
        "outcome_mean_per_qubit": shadow_set.outcomes.mean(axis=0).round(4).tolist(),
    }
    if json_path:
        shadow_set.to_json(json_path)
        info["json_export"] = json_path
    return info


# --- argument parsing -------------------------------------------------------

def _config_from_args(args) -> ExperimentConfig:
    if args.preset:
        if args.preset not in PRESETS:
            raise ConfigError(f"preset: unknown preset {args.preset!r}")
        cfg = ExperimentConfig.from_dict(PRESETS[args.preset])
    elif args.config:
        cfg = ExperimentConfig.from_file(args.config)
    else:
        cfg = ExperimentConfig()
    overrides = list(args.set or [])
    for key in ("backend", "optimizer", "out_dir", "instances", "seed", "workers"):
        value = getattr(args, key, None)
        if value is not None:
            overrides.append(f"{key}={value}")
    return cfg.apply_overrides(overrides).validate()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="also",
        description="Shadow-based training of alternating layered circuits")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_common(p):
        p.add_argument("--preset", choices=sorted(PRESETS))
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config field")
        p.add_argument("--backend")
        p.add_argument("--optimizer")
        p.add_argument("--out-dir", dest="out_dir")
        p.add_argument("--instances", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int)

    run_p = sub.add_parser("run", help="run one experiment")
    add_common(run_p)

    sweep_p = sub.add_parser("sweep", help="copies needed per objective level")
    add_common(sweep_p)
    sweep_p.add_argument("--objectives", required=True,
                         help="comma-separated target cost levels")
    sweep_p.add_argument("--backends",
                         help="comma-separated backends (default: config backend)")

    bench_p = sub.add_parser("bench", help="shadow evaluation timing")
    bench_p.add_argument("--n-list", required=True,
                         help="comma-separated even qubit counts")
    bench_p.add_argument("--repeats", type=int, default=5)
    bench_p.add_argument("--shadows", type=int, default=20_000)
    bench_p.add_argument("--depth", type=int)
    bench_p.add_argument("--seed", type=int, default=0)
    bench_p.add_argument("--out", default="bench.csv")

    sh_p = sub.add_parser("shadows", help="shadow set files")
    sh_sub = sh_p.add_subparsers(dest="shadow_verb", required=True)
    samp = sh_sub.add_parser("sample")
    samp.add_argument("--n", type=int, required=True)
    samp.add_argument("--count", type=int, required=True)
    samp.add_argument("--seed", type=int, default=0)
    samp.add_argument("--target", default="basis", choices=("basis", "zeros"))
    samp.add_argument("--out", required=True)
    insp = sh_sub.add_parser("inspect")
    insp.add_argument("path")
    insp.add_argument("--json", dest="json_path")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.verb == "run":
            summary = run_experiment(_config_from_args(args))
            agg = summary["aggregate"]["best_exact_cost"]
            print(f"wrote {summary['config']['out_dir']}: best cost "
                  f"{agg['mean']:.6f} +- {agg['std']:.6f}")
        elif args.verb == "sweep":
            cfg = _config_from_args(args)
            objectives = [float(x) for x in args.objectives.split(",")]
            backends = args.backends.split(",") if args.backends else None
            rows = sweep_experiment(cfg, objectives, backends)
            for row in rows:
                copies = "not reached" if row["copies"] is None else f"{row['copies']:.0f}"
                print(f"{row['backend']:>16}  objective {row['objective']:<8} {copies}")
        elif args.verb == "bench":
            n_list = [int(x) for x in args.n_list.split(",")]
            rows = bench_eval_time(n_list, args.repeats, args.shadows,
                                   args.depth, args.seed, args.out)
            for row in rows:
                print(f"n={row['n']:<3} d={row['d']}  {row['seconds_mean']:.4f} s")
        elif args.verb == "shadows":
            if args.shadow_verb == "sample":
                shadows_sample(args.n, args.count, args.seed, args.out, args.target)
                print(f"wrote {args.out}")
            else:
                info = shadows_inspect(args.path, args.json_path)
                print(json.dumps(info, indent=1))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NonFiniteObjectiveError as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
