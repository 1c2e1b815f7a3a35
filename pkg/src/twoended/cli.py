"""Command-line entry point: ``twoended <subcommand> ...``.

Exit codes: 0 success, 1 a verification or tolerance check failed, 2 bad
usage or input (unknown subcommand, malformed or invalid spec, window too
small).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import color, electric, graph, harmonic, saw, symmetry
from .errors import (
    ColouringError,
    ConvergenceError,
    InsufficientTruncationError,
    InvalidSpecError,
    KCLViolationError,
    PreconditionError,
    TwoEndedError,
    VerificationError,
)
from .report import format_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    subcommand: str
    spec: str | None = None
    mode: electric.NumericMode = electric.NumericMode.EXACT
    fmt: str = "text"
    params: dict = field(default_factory=dict)
    seed: int | None = None  # reserved; every operation is deterministic


def _vertex(text: str):
    try:
        n, k = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected n,k but got {text!r}")
    return n, k


def _window(text: str):
    try:
        lo, hi = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo,hi but got {text!r}")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["exact", "float"], default=None,
                        help=f"numeric mode (default: ${electric.MODE_ENV} or exact)")
    common.add_argument("--format", dest="fmt", choices=["text", "structured", "dot", "csv"], default="text")

    p = argparse.ArgumentParser(prog="twoended", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)

    b = sub.add_parser("build", parents=[common], help="expand a spec to a finite window")
    b.add_argument("--spec", required=True)
    b.add_argument("--window", type=_window, default=None, help="lo,hi (write --window=-3,3)")
    b.add_argument("--radius", type=int, default=3, help="shorthand for --window=-R,R")
    b.add_argument("--origin", type=int, default=0)

    c = sub.add_parser("current", parents=[common], help="unit current between two vertices")
    c.add_argument("--spec", required=True)
    c.add_argument("--window", type=_window, default=None, help="lo,hi (write --window=-3,3)")
    c.add_argument("--radius", type=int, default=3, help="shorthand for --window=-R,R")
    c.add_argument("--p", type=_vertex, required=True)
    c.add_argument("--q", type=_vertex, required=True)

    h = sub.add_parser("harmonic", parents=[common], help="limit Lipschitz harmonic function")
    h.add_argument("--spec", required=True)
    h.add_argument("--probe", type=int, default=3)
    h.add_argument("--eps", type=float, default=1e-8)
    h.add_argument("--max-radius", type=int, default=64)
    h.add_argument("--origin", type=int, default=0)
    h.add_argument("--tie-break", choices=["min", "max"], default="min")

    k = sub.add_parser("color3", parents=[common], help="3-edge-colouring of a cubic spec")
    k.add_argument("--spec", required=True)
    k.add_argument("--radius", type=int, default=4)

    gm = sub.add_parser("gamma", parents=[common], help="verify the claims about Gamma")
    gm.add_argument("--check", default="all",
                    choices=["all", "claim1", "claim2", "claim3", "claim4", "claim5", "claim6", "relators", "skew"])
    gm.add_argument("--radius", type=int, default=2, help="window radius for --format dot")

    s = sub.add_parser("saw", parents=[common], help="self-avoiding walk counts")
    s.add_argument("--spec", required=True)
    s.add_argument("--origin", type=_vertex, default=(0, 0))
    s.add_argument("--max", type=int, default=16)

    sub.add_parser("verify", parents=[common], help="invariant suite over the shipped specs")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    mode = electric.NumericMode.parse(ns.mode) if ns.mode else electric.default_mode()
    skip = {"subcommand", "spec", "mode", "fmt"}
    params = {k: v for k, v in vars(ns).items() if k not in skip}
    return RunConfig(ns.subcommand, getattr(ns, "spec", None), mode, ns.fmt, params)


def _window_of(params):
    if params["window"] is not None:
        return params["window"]
    return -params["radius"], params["radius"]


def _cmd_build(cfg):
    spec = graph.load_spec(cfg.spec)
    g = graph.expand(spec, *_window_of(cfg.params), cfg.params["origin"])
    if cfg.fmt == "dot":
        return EXIT_OK, g.to_dot(layer_colours=True)
    if cfg.fmt == "structured":
        return EXIT_OK, g.to_structured() + "\n"
    return EXIT_OK, format_report("build", [
        ("spec", spec.dumps()),
        ("window", list(g.window)),
        ("vertices", len(g)),
        ("edges", len(g.edges())),
        ("interior_degrees", sorted({g.degree(v) for v in g.interior()})),
    ])


def _cmd_current(cfg):
    spec = graph.load_spec(cfg.spec)
    g = graph.expand(spec, *_window_of(cfg.params))
    p, q = cfg.params["p"], cfg.params["q"]
    f = electric.unit_current(g, p, q, cfg.mode)
    if cfg.fmt == "structured":
        return EXIT_OK, f.dumps() + "\n"
    return EXIT_OK, format_report("current", [
        ("p", p), ("q", q), ("mode", cfg.mode.value),
        ("intensity", electric.net_out(f, p)),
        ("knl_residual", electric.knl_residual(f, {p, q})),
        ("kcl_residual", electric.kcl_residual(f)),
        ("max_abs", f.max_abs()),
        ("solver_residual", f.meta["solver_residual"]),
    ])


def _cmd_harmonic(cfg):
    spec = graph.load_spec(cfg.spec)
    P = cfg.params
    run = harmonic.limit_harmonic(spec, P["origin"], P["probe"], P["eps"], max_radius=P["max_radius"],
                                  mode=cfg.mode, tie_break=P["tie_break"])
    if cfg.fmt == "structured":
        return EXIT_OK, json.dumps(run.h.rows()) + "\n"
    ok = run.lipschitz <= 1 + 1e-12 and abs(abs(run.cut_flow) - 1) <= 1e-10
    return (EXIT_OK if ok else EXIT_FAIL), run.report()


def _cmd_color3(cfg):
    spec = graph.load_spec(cfg.spec)
    R = cfg.params["radius"]
    window = graph.expand(spec, -R, R)
    g = harmonic.periodic_harmonic(spec, window)
    if cfg.mode is electric.NumericMode.FLOAT:
        g = electric.VertexField(window, {v: float(x) for v, x in g.values.items()})
    cases = color.interior_cases(g, window.interior())
    case = color.classify_case(g, window.origin)
    col = color.three_edge_colour(window, g, case)
    rep = color.verify_colouring(col)
    code = EXIT_OK if rep.passed and len(cases) == 1 else EXIT_FAIL
    if cfg.fmt == "dot":
        return code, window.to_dot(edge_colours=col.colours)
    if cfg.fmt in ("structured", "csv"):
        return code, "\n".join(",".join(str(x) for x in row) for row in col.rows()) + "\n"
    return code, format_report("color3", [
        ("spec", spec.name or spec.dumps()),
        ("radius", R),
        ("mode", cfg.mode.value),
        ("case", case.kind),
        ("pattern", [case.a, case.b, case.c]),
        ("case_uniform", len(cases) == 1),
        ("h_cycle_lengths", sorted(set(col.h_cycles))),
        ("h_paths", len(col.h_paths)),
        ("proper", rep.proper),
        ("perfect_matchings", rep.perfect),
        ("violations", len(rep.violations)),
        ("verdict", "PASS" if code == EXIT_OK else "FAIL"),
    ])


def _cmd_gamma(cfg):
    if cfg.fmt == "dot":
        R = cfg.params["radius"]
        return EXIT_OK, graph.expand(symmetry.GAMMA, -R, R).to_dot(name="Gamma", layer_colours=True)
    reports = symmetry.run_checks(cfg.params["check"])
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
    return code, "\n".join(r.render() for r in reports)


def _cmd_saw(cfg):
    spec = graph.load_spec(cfg.spec)
    origin = cfg.params["origin"]
    if origin[0] != 0:
        raise PreconditionError("SAW origin must lie in layer 0 (layers are translates of each other)")
    counts = saw.count_saws(spec, origin, cfg.params["max"])
    if cfg.fmt in ("csv", "structured"):
        return EXIT_OK, saw.to_csv(counts)
    gold = saw.golden_check(counts)
    return EXIT_OK, format_report("saw", [
        ("spec", spec.name or spec.dumps()),
        ("origin", origin),
        ("max", counts.max_length),
        ("counts", list(counts.counts)),
        ("phi", gold.phi),
        ("min_root", gold.min_root),
        ("below_phi", list(gold.violations)),
        ("consistent_with_mu_ge_phi", gold.passed),
        ("submultiplicative", saw.submultiplicative(counts)),
    ])


def _cmd_verify(cfg):
    from .verify import invariant_matrix

    rows = invariant_matrix(cfg.mode)
    lines = [f"{spec:<8} {check:<28} {verdict}" for spec, check, verdict in rows]
    code = EXIT_OK if all(v != "FAIL" for _, _, v in rows) else EXIT_FAIL
    return code, "\n".join(lines) + "\n"


COMMANDS = {
    "build": _cmd_build,
    "current": _cmd_current,
    "harmonic": _cmd_harmonic,
    "color3": _cmd_color3,
    "gamma": _cmd_gamma,
    "saw": _cmd_saw,
    "verify": _cmd_verify,
}


def run(cfg: RunConfig) -> tuple[int, str]:
    if cfg.subcommand not in COMMANDS:
        return EXIT_USAGE, f"unknown subcommand {cfg.subcommand!r}\n"
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except (InvalidSpecError, InsufficientTruncationError, PreconditionError, KeyError) as exc:
        return EXIT_USAGE, f"error: {exc}\n"
    except ConvergenceError as exc:
        trace = " ".join(f"{r}:{d}" for r, d in exc.trace)
        return EXIT_FAIL, f"error: {exc}\ntrace: {trace}\n"
    except (VerificationError, ColouringError, KCLViolationError, TwoEndedError) as exc:
        return EXIT_FAIL, f"error: {exc}\n"


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    code, text = run(config_from_args(ns))
    stream = sys.stdout if code != EXIT_USAGE else sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
