"""Batch experiment runner: generate instances, run a rule, audit the outcome
against the applicable worst-case bound, and emit a certification table.

Output is deterministic for a fixed config: rows appear in config order no
matter how many worker processes computed them, and floats are serialized via
repr.  The exit contract is CI-style: any failed pass flag makes the batch
fail.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from . import bounds
from .audits import beta_plurality_value, min_alpha_proportional, min_alpha_q_core
from .capture import greedy_capture
from .costs import distortion
from .generators import GenSpec, generate, spec_from_dict
from .instances import resolve_quota
from .ordinal import check_rank_pjr, derive_profile, ear, plurality_veto

RULES = ("greedy_capture", "ear", "plurality_veto", "candidates")
AUDITS = ("alpha", "beta", "distortion", "core")

CSV_COLUMNS = (
    "family",
    "n",
    "m",
    "k",
    "ell",
    "seed",
    "rule",
    "audit",
    "factor",
    "bound",
    "pass",
    "witness_json",
)


@dataclass(frozen=True)
class RunSpec:
    gen: GenSpec
    k: int


@dataclass(frozen=True)
class ExperimentConfig:
    runs: tuple[RunSpec, ...]
    rule: str
    quota: str | int = "droop"
    audits: tuple[str, ...] = ("alpha",)
    core_q: int = 1
    veto_order: str = "index"
    fmt: str = "csv"


@dataclass
class Row:
    family: str
    n: int | None
    m: int | None
    k: int | None
    ell: int | None
    seed: int | None
    rule: str
    audit: str
    factor: float | None
    bound: float | None
    passed: bool
    witness: dict | None

    # beta bounds are lower bounds; everything else is an upper bound
    @staticmethod
    def judge(kind: str, factor: float, bound: float | None) -> bool:
        if bound is None:
            return True
        if kind == "beta":
            return factor >= bound - bounds.EPS_CMP
        return factor <= bound + bounds.EPS_CMP


def config_from_dict(data: dict) -> ExperimentConfig:
    rule = data.get("rule", "greedy_capture")
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}; expected one of {RULES}")
    audits = tuple(data.get("audits", ["alpha"]))
    for a in audits:
        if a not in AUDITS:
            raise ValueError(f"unknown audit {a!r}; expected one of {AUDITS}")

    runs: list[RunSpec] = []
    if "runs" in data:
        for entry in data["runs"]:
            runs.append(RunSpec(spec_from_dict(entry), int(entry.get("k", 1))))
    elif "sweep" in data:
        sweep = dict(data["sweep"])
        lists = {
            key: list(sweep.pop(key)) if isinstance(sweep.get(key), (list, tuple)) else [sweep.pop(key)]
            for key in ("n", "m", "k", "seed")
            if key in sweep
        }
        lists.setdefault("n", [1])
        lists.setdefault("m", [None])
        lists.setdefault("k", [1])
        lists.setdefault("seed", [0])
        for n, m, k, seed in itertools.product(lists["n"], lists["m"], lists["k"], lists["seed"]):
            entry = {**sweep, "n": n, "seed": seed}
            if m is not None:
                entry["m"] = m
            runs.append(RunSpec(spec_from_dict(entry), int(k)))
    else:
        raise ValueError("config needs a 'runs' list or a 'sweep' block")

    return ExperimentConfig(
        runs=tuple(runs),
        rule=rule,
        quota=data.get("quota", "droop"),
        audits=audits,
        core_q=int(data.get("core_q", 1)),
        veto_order=data.get("veto_order", "index"),
        fmt=data.get("format", "csv"),
    )


def _veto_order_ids(policy: str, profile) -> list[int]:
    if policy == "index":
        return list(profile.agent_ids)
    if policy.startswith("seed:"):
        rng = np.random.default_rng(int(policy.split(":", 1)[1]))
        return [profile.agent_ids[i] for i in rng.permutation(profile.n_agents)]
    raise ValueError(f"unknown veto order policy {policy!r}")


def _alpha_bound(instance) -> float:
    if instance.kind == "euclidean" and instance.norm == "l2":
        return bounds.GREEDY_CAPTURE_EUCLIDEAN_BOUND
    return bounds.GREEDY_CAPTURE_METRIC_BOUND


def compute_rows(run: RunSpec, config: ExperimentConfig) -> list[Row]:
    """All audit rows for one instance; sub-operation errors become failed
    rows and the batch carries on."""
    gen = run.gen
    base = dict(
        family=gen.family,
        n=gen.n,
        m=gen.m if gen.m is not None else gen.n,
        k=run.k,
        seed=gen.seed,
        rule=config.rule,
    )
    try:
        instance = generate(gen)
    except Exception as exc:  # noqa: BLE001 - per-row error capture is the contract
        return [
            Row(**base, ell=None, audit=a, factor=None, bound=None, passed=False,
                witness={"error": str(exc)})
            for a in config.audits
        ]
    base["m"] = instance.n_candidates
    base["n"] = instance.n_agents

    rows: list[Row] = []
    for audit in config.audits:
        try:
            rows.extend(_audit_rows(instance, audit, run, config, base))
        except Exception as exc:  # noqa: BLE001
            rows.append(
                Row(**base, ell=None, audit=audit, factor=None, bound=None,
                    passed=False, witness={"error": str(exc)})
            )
    return rows


def _audit_rows(instance, audit, run, config, base) -> list[Row]:
    rule = config.rule

    if rule == "candidates":
        if audit not in ("beta", "distortion"):
            raise ValueError(f"audit {audit!r} needs a rule that selects an outcome")
        rows = []
        for p in instance.candidates:
            if audit == "beta":
                rep = beta_plurality_value(instance, p)
                factor, witness = rep.factor, rep.witness
            else:
                factor, witness = distortion(instance, p), None
            rows.append(
                Row(**base, ell=None, audit=f"{audit}:{p}", factor=factor, bound=None,
                    passed=True, witness=witness.to_dict() if hasattr(witness, "to_dict") else None)
            )
        return rows

    n, k = instance.n_agents, run.k
    quota = resolve_quota(config.quota, n, k)
    ell = quota.ell

    if rule == "plurality_veto":
        profile = derive_profile(instance)
        transcript = plurality_veto(profile, _veto_order_ids(config.veto_order, profile))
        winner = transcript.winner
        if audit == "beta":
            rep = beta_plurality_value(instance, winner)
            bound = bounds.VETO_PLURALITY_BOUND
            passed = Row.judge("beta", rep.factor, bound)
            witness = rep.witness.to_dict() if (not passed and rep.witness) else None
            return [Row(**base, ell=None, audit=audit, factor=rep.factor, bound=bound,
                        passed=passed, witness=witness)]
        if audit == "distortion":
            factor = distortion(instance, winner)
            bound = bounds.VETO_DISTORTION_BOUND
            passed = Row.judge("distortion", factor, bound)
            witness = {"winner": winner} if not passed else None
            return [Row(**base, ell=None, audit=audit, factor=factor, bound=bound,
                        passed=passed, witness=witness)]
        if audit == "alpha":
            rep = min_alpha_proportional(instance, [winner], ell)
            return [Row(**base, ell=ell, audit=audit, factor=rep.factor, bound=None,
                        passed=True, witness=None)]
        raise ValueError(f"audit {audit!r} not available for plurality_veto")

    if rule == "greedy_capture":
        winners = greedy_capture(instance, k, quota).centers
        alpha_bound = _alpha_bound(instance)
    elif rule == "ear":
        winners = ear(derive_profile(instance), k, quota)
        alpha_bound = bounds.RANK_JR_PROPORTIONALITY_BOUND
    else:
        raise ValueError(f"unknown rule {rule!r}")

    if audit == "alpha":
        rep = min_alpha_proportional(instance, winners, ell)
        passed = Row.judge("alpha", rep.factor, alpha_bound)
        witness = rep.witness.to_dict() if (not passed and rep.witness) else None
        return [Row(**base, ell=ell, audit=audit, factor=rep.factor, bound=alpha_bound,
                    passed=passed, witness=witness)]
    if audit == "core":
        q = min(config.core_q, len(winners))
        rep = min_alpha_q_core(instance, winners, ell, q)
        # the core bound is promised only for committees passing rank-PJR
        profile = derive_profile(instance)
        if check_rank_pjr(profile, winners, ell) is None:
            bound = bounds.RANK_PJR_CORE_BOUND
            passed = Row.judge("core", rep.factor, bound)
        else:
            bound, passed = None, True
        witness = rep.witness.to_dict() if (not passed and rep.witness) else None
        return [Row(**base, ell=ell, audit=audit, factor=rep.factor, bound=bound,
                    passed=passed, witness=witness)]
    if audit == "beta":
        if len(winners) != 1:
            raise ValueError("beta audit needs a single winner")
        rep = beta_plurality_value(instance, winners[0])
        return [Row(**base, ell=ell, audit=audit, factor=rep.factor, bound=None,
                    passed=True, witness=None)]
    if audit == "distortion":
        factors = [distortion(instance, w) for w in winners]
        worst = max(factors) if factors else None
        return [Row(**base, ell=ell, audit=audit, factor=worst, bound=None,
                    passed=True, witness=None)]
    raise ValueError(f"unknown audit {audit!r}")


def _worker(payload: tuple[dict, int, dict]) -> list[Row]:
    gen_dict, k, config_dict = payload
    config = ExperimentConfig(
        runs=(),
        rule=config_dict["rule"],
        quota=config_dict["quota"],
        audits=tuple(config_dict["audits"]),
        core_q=config_dict["core_q"],
        veto_order=config_dict["veto_order"],
        fmt=config_dict["fmt"],
    )
    return compute_rows(RunSpec(spec_from_dict(gen_dict), k), config)


@dataclass
class ExperimentResult:
    rows: list[Row]
    summary: list[Row]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.rows + self.summary)


def run_experiment(config: ExperimentConfig, jobs: int = 1) -> ExperimentResult:
    if jobs < 1:
        raise ValueError("jobs must be at least 1")
    if jobs == 1 or len(config.runs) <= 1:
        nested = [compute_rows(run, config) for run in config.runs]
    else:
        config_dict = dict(
            rule=config.rule, quota=config.quota, audits=list(config.audits),
            core_q=config.core_q, veto_order=config.veto_order, fmt=config.fmt,
        )
        payloads = [(run.gen.to_dict(), run.k, config_dict) for run in config.runs]
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            nested = list(pool.map(_worker, payloads))
    rows = [row for group in nested for row in group]
    return ExperimentResult(rows=rows, summary=_summarize(rows, config.rule))


def _summarize(rows: list[Row], rule: str) -> list[Row]:
    """One row per bounded audit kind with the worst observed factor."""
    kinds: dict[tuple[str, float], list[Row]] = {}
    for row in rows:
        if row.bound is None or row.factor is None:
            continue
        kind = row.audit.split(":", 1)[0]
        kinds.setdefault((kind, row.bound), []).append(row)
    summary = []
    for (kind, bound), group in sorted(kinds.items()):
        factors = [r.factor for r in group]
        worst = min(factors) if kind == "beta" else max(factors)
        summary.append(
            Row(family="summary", n=None, m=None, k=None, ell=None, seed=None,
                rule=rule, audit=kind, factor=worst, bound=bound,
                passed=all(r.passed for r in group), witness=None)
        )
    return summary


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return repr(value)
    return str(value)


def result_to_csv(result: ExperimentResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in result.rows + result.summary:
        witness = "" if row.witness is None else json.dumps(row.witness, sort_keys=True, separators=(",", ":"))
        writer.writerow([
            _cell(row.family), _cell(row.n), _cell(row.m), _cell(row.k),
            _cell(row.ell), _cell(row.seed), _cell(row.rule), _cell(row.audit),
            _cell(row.factor), _cell(row.bound), _cell(row.passed), witness,
        ])
    return buf.getvalue()


def result_to_json(result: ExperimentResult) -> str:
    def encode(row: Row) -> dict:
        return {
            "family": row.family, "n": row.n, "m": row.m, "k": row.k,
            "ell": row.ell, "seed": row.seed, "rule": row.rule, "audit": row.audit,
            "factor": _cell(row.factor) if row.factor is not None and math.isinf(row.factor) else row.factor,
            "bound": row.bound, "pass": row.passed, "witness": row.witness,
        }

    payload = {
        "rows": [encode(r) for r in result.rows],
        "summary": [encode(r) for r in result.summary],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
