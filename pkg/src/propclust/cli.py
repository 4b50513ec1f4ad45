"""Command-line interface.

Instance files follow the JSON schema in instances.py; ordinal subcommands
(veto, ear, check-jr, check-pjr) also accept a bare profile file of the form
{"ranks": [[0-based rank per candidate] per agent]}.
"""

from __future__ import annotations

import argparse
import dataclasses
import itertools
import json
import math
import sys

import numpy as np

from .audits import (
    beta_plurality_value,
    is_beta_plurality,
    min_alpha_proportional,
    min_alpha_q_core,
    verify_equivalence,
)
from .capture import greedy_capture
from .costs import cost_profile, distortion
from .experiment import config_from_dict, result_to_csv, result_to_json, run_experiment
from .generators import GenSpec, generate
from .instances import load_instance, resolve_quota, save_instance
from .ordinal import check_rank_jr, check_rank_pjr, derive_profile, ear, plurality_veto, profile_from_dict


def _emit(data, path=None) -> None:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_profile_or_instance(path):
    """Returns (profile, instance-or-None)."""
    with open(path) as fh:
        data = json.load(fh)
    if "ranks" in data:
        return profile_from_dict(data), None
    from .instances import instance_from_dict

    instance = instance_from_dict(data)
    return derive_profile(instance), instance


def _centers(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip() != ""]


def _add_quota_args(sub) -> None:
    sub.add_argument("--quota", required=True, help="hare | droop | explicit integer")
    sub.add_argument("--k", type=int, default=1, help="committee size for quota computation")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="propclust")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("generate", help="write a seeded instance file")
    p.add_argument("--family", required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--norm", default="l2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--blobs", type=int, default=3)
    p.add_argument("--spread", type=float, default=0.08)
    p.add_argument("-o", "--output", default=None)

    p = commands.add_parser("capture", help="greedy capture clustering")
    p.add_argument("--instance", required=True)
    _add_quota_args(p)
    p.add_argument("--tiebreak", default="index")
    p.add_argument("-o", "--output", default=None)

    p = commands.add_parser("audit", help="proportionality / core factor of a center set")
    p.add_argument("--instance", required=True)
    p.add_argument("--centers", required=True, help="comma-separated candidate ids")
    _add_quota_args(p)
    p.add_argument("--core-q", type=int, default=None)
    p.add_argument("--max-group-size", type=int, default=None)
    p.add_argument("-o", "--output", default=None)

    p = commands.add_parser("plurality", help="beta-plurality value or test of a point")
    p.add_argument("--instance", required=True)
    p.add_argument("--point", type=int, required=True)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--verify-grid", default=None,
                   help="comma-separated betas for the majority-deviation equivalence check")
    p.add_argument("-o", "--output", default=None)

    p = commands.add_parser("veto", help="plurality veto winner")
    p.add_argument("--instance", required=True)
    p.add_argument("--order", default="index", help="index | seed:S | all")
    p.add_argument("-o", "--output", default=None)

    p = commands.add_parser("ear", help="expanding approvals committee")
    p.add_argument("--instance", required=True)
    _add_quota_args(p)
    p.add_argument("-o", "--output", default=None)

    p = commands.add_parser("check-jr", help="rank-JR check of a committee")
    p.add_argument("--instance", required=True)
    p.add_argument("--centers", required=True)
    _add_quota_args(p)
    p.add_argument("-o", "--output", default=None)

    p = commands.add_parser("check-pjr", help="rank-PJR check of a committee")
    p.add_argument("--instance", required=True)
    p.add_argument("--centers", required=True)
    _add_quota_args(p)
    p.add_argument("--max-mu", type=int, default=None)
    p.add_argument("-o", "--output", default=None)

    p = commands.add_parser("distortion", help="social costs and distortion")
    p.add_argument("--instance", required=True)
    p.add_argument("--point", type=int, default=None)
    p.add_argument("-o", "--output", default=None)

    p = commands.add_parser("experiment", help="batch certification table")
    p.add_argument("--config", required=True)
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--format", default=None, choices=("csv", "json"))
    p.add_argument("--jobs", type=int, default=1)

    args = parser.parse_args(argv)
    return _dispatch(args)


def _dispatch(args) -> int:
    cmd = args.command

    if cmd == "generate":
        spec = GenSpec(family=args.family, n=args.n, m=args.m, dim=args.dim,
                       norm=args.norm, seed=args.seed, blobs=args.blobs, spread=args.spread)
        instance = generate(spec)
        if args.output:
            save_instance(instance, args.output)
        else:
            from .instances import instance_to_dict

            _emit(instance_to_dict(instance))
        return 0

    if cmd == "capture":
        instance = load_instance(args.instance)
        quota = resolve_quota(args.quota, instance.n_agents, args.k)
        clustering = greedy_capture(instance, args.k, quota, tiebreak=args.tiebreak)
        _emit(clustering.to_dict(), args.output)
        return 0

    if cmd == "audit":
        instance = load_instance(args.instance)
        quota = resolve_quota(args.quota, instance.n_agents, args.k)
        centers = _centers(args.centers)
        if args.core_q is None:
            report = min_alpha_proportional(instance, centers, quota.ell)
        else:
            report = min_alpha_q_core(instance, centers, quota.ell, args.core_q,
                                      max_group_size=args.max_group_size)
        _emit(report.to_dict(), args.output)
        return 0

    if cmd == "plurality":
        instance = load_instance(args.instance)
        if args.verify_grid is not None:
            grid = [float(tok) for tok in args.verify_grid.split(",") if tok.strip()]
            bad = verify_equivalence(instance, args.point, grid)
            _emit({"ok": bad is None,
                   "counterexample": None if bad is None else vars(bad)}, args.output)
            return 0 if bad is None else 1
        if args.beta is not None:
            holds = is_beta_plurality(instance, args.point, args.beta)
            _emit({"point": args.point, "beta": args.beta, "is_plurality_point": holds},
                  args.output)
            return 0
        _emit(beta_plurality_value(instance, args.point).to_dict(), args.output)
        return 0

    if cmd == "veto":
        profile, _ = _load_profile_or_instance(args.instance)
        if args.order == "all":
            if profile.n_agents > 7:
                raise SystemExit("--order all is limited to n <= 7")
            counts: dict[int, int] = {}
            for order in itertools.permutations(profile.agent_ids):
                w = plurality_veto(profile, order).winner
                counts[w] = counts.get(w, 0) + 1
            _emit({"orders": math.factorial(profile.n_agents),
                   "winner_counts": {str(w): c for w, c in sorted(counts.items())}},
                  args.output)
            return 0
        if args.order == "index":
            order = list(profile.agent_ids)
        elif args.order.startswith("seed:"):
            rng = np.random.default_rng(int(args.order.split(":", 1)[1]))
            order = [profile.agent_ids[i] for i in rng.permutation(profile.n_agents)]
        else:
            raise SystemExit(f"unknown order {args.order!r}")
        _emit(plurality_veto(profile, order).to_dict(), args.output)
        return 0

    if cmd == "ear":
        profile, _ = _load_profile_or_instance(args.instance)
        quota = resolve_quota(args.quota, profile.n_agents, args.k)
        winners = ear(profile, args.k, quota)
        _emit({"winners": list(winners), "ell": quota.ell}, args.output)
        return 0

    if cmd in ("check-jr", "check-pjr"):
        profile, _ = _load_profile_or_instance(args.instance)
        quota = resolve_quota(args.quota, profile.n_agents, args.k)
        centers = _centers(args.centers)
        if cmd == "check-jr":
            witness = check_rank_jr(profile, centers, quota.ell)
        else:
            witness = check_rank_pjr(profile, centers, quota.ell, max_mu=args.max_mu)
        _emit({"ok": witness is None,
               "ell": quota.ell,
               "witness": None if witness is None else witness.to_dict()}, args.output)
        return 0

    if cmd == "distortion":
        instance = load_instance(args.instance)
        data = cost_profile(instance).to_dict()
        if args.point is not None:
            value = distortion(instance, args.point)
            data["point"] = args.point
            data["distortion"] = "inf" if math.isinf(value) else value
        _emit(data, args.output)
        return 0

    if cmd == "experiment":
        with open(args.config) as fh:
            config = config_from_dict(json.load(fh))
        if args.format is not None:
            config = dataclasses.replace(config, fmt=args.format)
        result = run_experiment(config, jobs=args.jobs)
        text = result_to_json(result) if config.fmt == "json" else result_to_csv(result)
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0 if result.all_passed else 1

    raise SystemExit(f"unknown command {cmd!r}")


if __name__ == "__main__":
    sys.exit(main())
