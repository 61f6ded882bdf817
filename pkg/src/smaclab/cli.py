"""Batch front-end: compute regions, project rate systems, run simulations,
compare frontiers, and regenerate derived fixtures.

All commands read a JSON config and write artifacts atomically.  Exit codes:
0 success, 1 validation/usage error, 2 resource-limit error.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys

import numpy as np

from . import __version__, kernels
from .errors import ResourceLimitError, SmaclabError
from .fme import (
    capacity_system,
    eliminate_all,
    format_system,
    instantiate,
    parse_system,
    polytope_equal,
    simplify_with_identities,
    sum_rate_identities,
    systems_equal,
    theorem2_system,
)
from .information import eval_atoms
from .io import atomic_write, channel_fixture_json, dump_json, load_channel_fixture
from .oracle import GridSpec, direct_info_terms, direct_pair_bounds, exhaustive_region
from .probability import Alphabet, ConditionalKernel, FinitePmf, build_joint
from .region import (
    RegionFrontier,
    SearchConfig,
    compute_region,
    compute_region_constrained,
    region_distance,
)
from .sim import ResourceLimits, SchemeRates, SimConfig, SimResult, run_monte_carlo


def _metadata(seed) -> dict:
    return {
        "seed": seed,
        "versions": {"smaclab": __version__, "numpy": np.__version__},
        "kernel_backend": kernels.BACKEND,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise SmaclabError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise SmaclabError(
            f"malformed config {path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        )


def _factors_from_config(obj: dict, channel, q_s):
    ns = q_s.alphabet.size
    nx2 = channel.input_alphabets[1].size
    p_x2 = np.asarray(obj["p_x2"], dtype=np.float64)
    pv = np.asarray(obj["p_v_given_sx2"], dtype=np.float64)
    pu = np.asarray(obj["p_ux1_given_svx2"], dtype=np.float64)
    nv = pv.shape[-1]
    nu = pu.shape[-3] if pu.ndim >= 5 else pu.shape[-2]
    nx1 = channel.input_alphabets[0].size
    pv = pv.reshape(ns, nx2, nv)
    pu = pu.reshape(ns, nv, nx2, -1, nx1)
    nu = pu.shape[3]
    return (
        FinitePmf(Alphabet(nx2), p_x2),
        ConditionalKernel((Alphabet(ns), Alphabet(nx2)), (Alphabet(nv),), pv),
        ConditionalKernel(
            (Alphabet(ns), Alphabet(nv), Alphabet(nx2)),
            (Alphabet(nu), Alphabet(nx1)),
            pu,
        ),
    )


def _search_config(obj: dict, seed, threads) -> SearchConfig:
    kwargs = dict(obj or {})
    if seed is not None:
        kwargs["seed"] = seed
    if threads:
        kwargs["threads"] = threads
    return SearchConfig(**kwargs)


def _write_frontier(frontier: RegionFrontier, out: str, seed) -> None:
    payload = frontier.to_json()
    payload["metadata"].update(_metadata(seed))
    atomic_write(out, dump_json(payload))
    atomic_write(os.path.splitext(out)[0] + ".csv", frontier.to_csv())


def cmd_region(cfg: dict, args, constrained: bool) -> int:
    channel, q_s, _name = load_channel_fixture(cfg["channel"])
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    scfg = _search_config(cfg.get("search"), seed, args.threads)
    fn = compute_region_constrained if constrained else compute_region
    frontier = fn(channel, q_s, scfg)
    out = args.out or cfg.get("out") or "frontier.json"
    _write_frontier(frontier, out, scfg.seed)
    print(f"frontier: {len(frontier.points)} points -> {out}")
    return 0


def cmd_fme(cfg: dict, args) -> int:
    system = theorem2_system() if "system" not in cfg else parse_system(cfg["system"])
    identities = cfg.get("identities", sum_rate_identities())
    eliminate = cfg.get("eliminate", ["R0", "Rhat"])
    print("input system:")
    print(format_system(system))
    projected = eliminate_all(system, eliminate)
    print("after projection:")
    print(format_system(projected))
    simplified = simplify_with_identities(projected, identities)
    print("after identity rewriting and redundancy removal:")
    print(format_system(simplified))
    target = capacity_system()
    symbolic = systems_equal(simplified, target, identities)
    print(f"matches the two-bound capacity form: {symbolic}")
    report = {
        "projected": format_system(projected),
        "simplified": format_system(simplified),
        "symbolic_match": symbolic,
    }
    if "atom_values" in cfg:
        poly_a = instantiate(simplified, cfg["atom_values"])
        poly_b = instantiate(target, cfg["atom_values"])
        equal, witness = polytope_equal(poly_a, poly_b, tol=float(cfg.get("tol", 1e-9)))
        report["numeric_match"] = equal
        report["witness"] = witness
        print(f"numeric polytope match: {equal}" + (f" (witness {witness})" if witness else ""))
    if args.out:
        report["metadata"] = _metadata(args.seed)
        atomic_write(args.out, dump_json(report))
    return 0 if symbolic else 1


def cmd_sim(cfg: dict, args) -> int:
    channel, q_s, _ = load_channel_fixture(cfg["channel"])
    p_x2, pv, pu = _factors_from_config(cfg["factors"], channel, q_s)
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    limits = ResourceLimits(**cfg.get("limits", {}))
    sim = SimConfig(
        channel=channel,
        q_s=q_s,
        p_x2=p_x2,
        p_v_given_sx2=pv,
        p_ux1_given_svx2=pu,
        rates=SchemeRates(**cfg["rates"]),
        scheme=cfg["scheme"],
        n=int(cfg["n"]),
        blocks=int(cfg["blocks"]),
        trials=int(cfg["trials"]),
        seed=int(seed),
        epsilon=float(cfg.get("epsilon", 0.15)),
        reuse_codebook=bool(cfg.get("reuse_codebook", True)),
        random_cells=bool(cfg.get("random_cells", False)),
        limits=limits,
    )
    result = run_monte_carlo(sim)
    payload = result.to_json()
    payload["metadata"].update(_metadata(seed))
    out = args.out or cfg.get("out") or "sim_result.json"
    atomic_write(out, dump_json(payload))
    atomic_write(
        os.path.splitext(out)[0] + ".csv",
        SimResult.csv_header() + "\n" + result.csv_row() + "\n",
    )
    print(
        f"scheme {sim.scheme}: error {result.error_rate:.4g} "
        f"[{result.ci_low:.4g}, {result.ci_high:.4g}] over {result.trials} trials -> {out}"
    )
    return 0


def cmd_compare(cfg: dict, args) -> int:
    with open(cfg["region_a"]) as fh:
        fr_a = RegionFrontier.from_json(json.load(fh))
    with open(cfg["region_b"]) as fh:
        fr_b = RegionFrontier.from_json(json.load(fh))
    tol = float(cfg.get("tol", 0.05))
    dist = region_distance(fr_a, fr_b)
    passed = dist <= tol
    report = {
        "distance_bits": dist,
        "tolerance_bits": tol,
        "pass": passed,
        "channel_id": fr_a.channel_id,
    }
    if args.out:
        report["metadata"] = _metadata(args.seed)
        atomic_write(args.out, dump_json(report))
    print(f"distance {dist:.6g} bits vs tolerance {tol:.6g}: {'PASS' if passed else 'FAIL'}")
    return 0


def _derive_case(case: dict) -> dict:
    kind = case["kind"]
    if kind == "info_atoms":
        channel, q_s, _ = load_channel_fixture(case["channel"])
        p_x2, pv, pu = _factors_from_config(case["factors"], channel, q_s)
        joint = build_joint(q_s, p_x2, pv, pu, channel)
        values = direct_info_terms(joint)
        return {"oracle": "direct_info_terms", "values": values}
    if kind == "pair_bounds":
        channel, q_s, _ = load_channel_fixture(case["channel"])
        p_x2, pv, pu = _factors_from_config(case["factors"], channel, q_s)
        joint = build_joint(q_s, p_x2, pv, pu, channel)
        r1b, sumb = direct_pair_bounds(joint)
        return {"oracle": "direct_pair_bounds", "values": {"r1_bound": r1b, "sum_bound": sumb}}
    if kind == "exhaustive_frontier":
        channel, q_s, _ = load_channel_fixture(case["channel"])
        grid = GridSpec(**case.get("grid", {}))
        frontier = exhaustive_region(channel, q_s, grid)
        return {
            "oracle": "exhaustive_region",
            "values": [{"r_c": p.r_c, "r_1": p.r_1} for p in frontier.points],
        }
    raise SmaclabError(f"unknown derivation kind {kind!r}")


def cmd_derive_examples(cfg: dict, args) -> int:
    corpus = cfg["corpus_dir"]
    if not os.path.isdir(corpus):
        raise SmaclabError(f"corpus directory not found: {corpus}")
    cases = sorted(f for f in os.listdir(corpus) if f.endswith(".case.json"))
    for fname in cases:
        with open(os.path.join(corpus, fname)) as fh:
            case = json.load(fh)
        derived = _derive_case(case)
        out = {
            "name": case.get("name", fname.replace(".case.json", "")),
            "kind": case["kind"],
            "provenance": {
                "oracle": derived["oracle"],
                "seed": case.get("seed", 0),
                "case_file": fname,
            },
            "values": derived["values"],
        }
        out_path = os.path.join(corpus, fname.replace(".case.json", ".fixture.json"))
        atomic_write(out_path, dump_json(out))
        print(f"derived {fname} -> {os.path.basename(out_path)}")
    if not cases:
        print("no cases found; nothing to derive")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="smaclab",
        description="State-dependent MAC laboratory: regions, projections, simulations",
    )
    parser.add_argument("command", choices=[
        "region", "region-constrained", "fme", "sim", "compare", "derive-examples",
    ])
    parser.add_argument("--config", required=True, help="JSON config path")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--out", default=None, help="output artifact path")
    parser.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("SMACLAB_THREADS", "0") or 0),
        help="worker count for the region search (env SMACLAB_THREADS)",
    )
    args = parser.parse_args(argv)

    try:
        cfg = _load_config(args.config)
        if args.command == "region":
            return cmd_region(cfg, args, constrained=False)
        if args.command == "region-constrained":
            return cmd_region(cfg, args, constrained=True)
        if args.command == "fme":
            return cmd_fme(cfg, args)
        if args.command == "sim":
            return cmd_sim(cfg, args)
        if args.command == "compare":
            return cmd_compare(cfg, args)
        if args.command == "derive-examples":
            return cmd_derive_examples(cfg, args)
        raise SmaclabError(f"unknown command {args.command}")
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 2
    except SmaclabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
