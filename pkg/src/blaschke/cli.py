"""Command-line entry point.

Subcommands:

    compose         materialize composites, dump zeros/rotations
    diagnose        partial sums, Blaschke sum, interior gauges, verdicts
    boundary        orbit series, psi L1 distances, measure-preservation tests
    counterexample  interior-vs-boundary contrast report
    verify          run the acceptance suite and emit its artifacts

Experiments are declared in a JSON config file (complex numbers as {"re", "im"}
pairs, angles in radians); see README for the schema.  Outputs are
deterministic for a fixed config and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .composition import DEFAULT_DEGREE_CAP, CompositionSequence
from .core import BlaschkeProduct, derivative_at_origin
from .counterexample import RadiiSpec, build_sequence, divergence_report
from .diagnostics import build_report
from .errors import BlaschkeError, CapacityError
from .families import constant_sequence, geometric_sequence, random_degree2_sequence
from .reporting import write_csv, write_kv
from . import boundary as boundary_mod

FAMILIES = ("geometric", "constant", "counterexample-default", "random-degree2", "explicit")

DEFAULT_RUN = {
    "seed": 7,
    "degree_cap": DEFAULT_DEGREE_CAP,
    "threads": 1,
    "n_steps": 1000,
    "window": 100,
    "angles": 100,
    "radius": 0.5,
    "grid_radii": 16,
    "grid_angles": 64,
    "nodes": 4096,
    "pairs": [[2, 2], [4, 4]],
    "samples": 100000,
    "orbit_theta": 1.0,
    "materialize": 0,
}


class ConfigError(Exception):
    """Validation failure; message lists every violation."""


def _as_complex(node, where, violations):
    if isinstance(node, dict) and set(node) <= {"re", "im"}:
        return complex(float(node.get("re", 0.0)), float(node.get("im", 0.0)))
    violations.append(f"{where}: expected a {{re, im}} pair")
    return 0.0j


def parse_config(raw: dict):
    """Validate a raw config dict; returns (sequence factory, run options, resolved dict)."""
    violations = []
    seq_spec = raw.get("sequence")
    if not isinstance(seq_spec, dict):
        violations.append("sequence: missing section")
        seq_spec = {}
    family = seq_spec.get("family", "explicit")
    if family not in FAMILIES:
        violations.append(f"sequence.family: unknown family {family!r} (choose from {FAMILIES})")
    n = int(seq_spec.get("n", 0) or 0)
    params = seq_spec.get("params", {}) or {}
    gens_spec = seq_spec.get("generators", [])
    if family == "explicit":
        if not gens_spec:
            violations.append("sequence.generators: explicit family needs at least one generator")
    elif n < 1:
        violations.append("sequence.n: named families need n >= 1")

    generators = []
    for idx, g in enumerate(gens_spec):
        where = f"sequence.generators[{idx}]"
        rot = _as_complex(g.get("rotation", {"re": 1.0, "im": 0.0}), f"{where}.rotation", violations)
        if abs(abs(rot) - 1.0) > 1e-12:
            violations.append(f"{where}: |rotation| must be 1, got {abs(rot):.17g}")
        mult = int(g.get("origin_multiplicity", 1))
        if mult < 1:
            violations.append(f"{where}: generator must fix the origin (origin_multiplicity >= 1)")
        zeros = []
        for jdx, znode in enumerate(g.get("zeros", [])):
            z = _as_complex(znode, f"{where}.zeros[{jdx}]", violations)
            if not 0.0 < abs(z) < 1.0:
                violations.append(
                    f"{where}.zeros[{jdx}]: zero modulus must lie in (0, 1), got {abs(z):.17g}"
                )
            zeros.append(z)
        generators.append((rot, mult, tuple(zeros)))

    run = dict(DEFAULT_RUN)
    for key, val in (raw.get("run") or {}).items():
        if key not in DEFAULT_RUN:
            violations.append(f"run.{key}: unknown option")
        else:
            run[key] = val
    if violations:
        raise ConfigError("invalid config:\n  " + "\n  ".join(violations))

    def make_sequence():
        cap = int(run["degree_cap"])
        if family == "geometric":
            return geometric_sequence(n, ratio=float(params.get("ratio", 0.5)), degree_cap=cap)
        if family == "constant":
            return constant_sequence(
                n, radius=float(params.get("radius", 0.6)), angle=float(params.get("angle", 0.9)),
                degree_cap=cap,
            )
        if family == "counterexample-default":
            return build_sequence(RadiiSpec(), n=n, degree_cap=cap)
        if family == "random-degree2":
            return random_degree2_sequence(n, seed=int(run["seed"]), degree_cap=cap)
        return CompositionSequence(
            tuple(BlaschkeProduct(rot, mult, zeros) for rot, mult, zeros in generators),
            degree_cap=cap,
        )

    resolved = {"sequence": {"family": family, "n": n, "params": params,
                             "generators": gens_spec}, "run": run}
    return make_sequence, run, resolved


def load_config(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def cmd_compose(make_seq, run, resolved, out):
    seq = make_seq()
    limit = int(run["materialize"]) or len(seq.generators)
    rows = []
    done = 0
    for n in range(1, limit + 1):
        try:
            B = seq.composite(n)
        except CapacityError:
            break  # materialization stops at the degree cap; nested paths continue past it
        done = n
        for z in B.zeros:
            rows.append((n, B.degree, z.real, z.imag, B.rotation.real, B.rotation.imag))
        if not B.zeros:
            rows.append((n, B.degree, 0.0, 0.0, B.rotation.real, B.rotation.imag))
    write_csv(
        os.path.join(out, "composites.csv"),
        ["n", "degree", "zero_re", "zero_im", "rotation_re", "rotation_im"],
        rows,
        config=resolved,
    )
    summary = [("materialized", done), ("final_degree", seq.composite(done).degree if done else 1)]
    write_kv(os.path.join(out, "compose_summary.txt"), summary, config=resolved)
    return 0


def cmd_diagnose(make_seq, run, resolved, out):
    seq = make_seq()
    pairs = [tuple(p) for p in run["pairs"] if sum(p) <= len(seq.generators)]
    report = build_report(
        seq,
        gauge_pairs=pairs,
        radius=float(run["radius"]),
        grid=(int(run["grid_radii"]), int(run["grid_angles"])),
    )
    rows = []
    for idx in range(len(report.classification_partials)):
        frost = (
            report.frostman_partials[idx]
            if report.frostman_partials is not None
            else float("nan")
        )
        rows.append((idx + 1, report.classification_partials[idx], frost))
    write_csv(
        os.path.join(out, "partial_sums.csv"),
        ["n", "classification_partial", "frostman_partial"],
        rows,
        config=resolved,
    )
    write_kv(os.path.join(out, "diagnostics.txt"), report.to_kv(), config=resolved)
    return 0


def cmd_boundary(make_seq, run, resolved, out):
    seq = make_seq()
    n_steps = min(int(run["n_steps"]), len(seq.generators))
    rows = boundary_mod.orbit_series(seq, float(run["orbit_theta"]), n_steps)
    write_csv(
        os.path.join(out, "orbit.csv"),
        ["n", "theta", "psi_arg", "shift"],
        rows,
        config=resolved,
    )
    l1_rows = []
    for pn, pm in (tuple(p) for p in run["pairs"]):
        if pn + pm <= len(seq.generators):
            dist = boundary_mod.psi_l1_distance(seq, pn, pm, nodes=int(run["nodes"]))
            bound = boundary_mod.rybkin_bound_span(seq, pn, pm)
            l1_rows.append((pn, pm, dist, bound))
    write_csv(
        os.path.join(out, "psi_l1.csv"),
        ["n", "m", "l1_distance", "per_zero_bound"],
        l1_rows,
        config=resolved,
    )
    ks_rows = []
    for idx, g in enumerate(seq.generators[: min(5, len(seq.generators))], start=1):
        stat = boundary_mod.measure_preservation_test(
            g, sample_count=max(int(run["samples"]), 10**4), seed=int(run["seed"]) + idx
        )
        ks_rows.append((idx, g.degree, stat))
    write_csv(
        os.path.join(out, "measure_preservation.csv"),
        ["generator", "degree", "ks_statistic"],
        ks_rows,
        config=resolved,
    )
    return 0


def cmd_counterexample(make_seq, run, resolved, out):
    seq = make_seq()
    n_steps = min(int(run["n_steps"]), len(seq.generators))
    window = min(int(run["window"]), n_steps)
    angles = (np.arange(int(run["angles"])) + 0.5) * (2.0 * np.pi / int(run["angles"]))
    report = divergence_report(
        seq,
        angles,
        n_steps,
        window,
        radius=float(run["radius"]),
        grid=(int(run["grid_radii"]), int(run["grid_angles"])),
    )
    write_csv(
        os.path.join(out, "divergence.csv"),
        ["n", "theta", "interior_gauge", "boundary_osc"],
        report.rows(),
        config=resolved,
    )
    summary = [
        ("final_interior_gauge", float(report.interior_gauge[-1])),
        ("min_final_boundary_osc", float(report.boundary_osc[-1].min())),
        ("median_final_boundary_osc", float(np.median(report.boundary_osc[-1]))),
    ]
    write_kv(os.path.join(out, "counterexample_summary.txt"), summary, config=resolved)
    return 0


def cmd_verify(out, seed):
    from .acceptance import run_all

    results = run_all(out, seed=seed)
    return 0 if all(r.passed for r in results) else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="blaschke", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("compose", "diagnose", "boundary", "counterexample"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON experiment config")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override run.seed")
        p.add_argument("--threads", type=int, default=None,
                       help="reserved; kernels are sequential and deterministic")
        p.add_argument("--degree-cap", type=int, default=None, help="override run.degree_cap")
    v = sub.add_parser("verify")
    v.add_argument("--out", default="out", help="output directory")
    v.add_argument("--seed", type=int, default=7, help="seed recorded in artifacts")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args.out, args.seed)
        raw = load_config(args.config)
        make_seq, run, resolved = parse_config(raw)
        for key, flag in (("seed", args.seed), ("threads", args.threads),
                          ("degree_cap", args.degree_cap)):
            if flag is not None:
                run[key] = flag
                resolved["run"][key] = flag
        handler = {
            "compose": cmd_compose,
            "diagnose": cmd_diagnose,
            "boundary": cmd_boundary,
            "counterexample": cmd_counterexample,
        }[args.command]
        return handler(make_seq, run, resolved, args.out)
    except ConfigError as exc:
        print(exc, file=sys.stderr)
        return 2
    except BlaschkeError as exc:
        print(f"error in {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
