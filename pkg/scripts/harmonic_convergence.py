"""Trace how fast the unit-current potentials settle on the probe ball.

One row per radius n: the potential of the unit current between the far
layers L_n and L_-n, normalised at the origin and compared on B_probe with the
previous radius and with the closed-form periodic solution.
"""

import argparse
import time
from dataclasses import dataclass

from twoended import load_spec
from twoended.electric import NumericMode, ohm_dual_vertex, unit_current
from twoended.harmonic import (
    ball_in_truncation,
    default_schedule,
    periodic_harmonic,
    pick_terminal,
    separation_radius,
)


@dataclass
class Config:
    spec: str = "gamma"
    probe: int = 3
    max_radius: int = 64
    mode: str = "float"


def step(spec, n, probe, mode):
    g, bv = ball_in_truncation(spec, (0, 0), n)
    ball = g.subgraph(bv.ball)
    f = unit_current(ball, pick_terminal(bv.upper, "min"), pick_terminal(bv.lower, "min"), mode)
    u = ohm_dual_vertex(f, (0, 0))
    dist = g.distances()
    return u.restrict([v for v in ball.vertices if dist[v] <= probe])


def main(cfg: Config):
    spec = load_spec(cfg.spec)
    mode = NumericMode.parse(cfg.mode)
    n0 = separation_radius(spec)
    radii = default_schedule(n0, cfg.probe, cfg.max_radius)
    print(f"# spec={cfg.spec} n0={n0} probe={cfg.probe} mode={cfg.mode}")
    print("radius  sup_change  dist_to_periodic  seconds")
    prev = None
    for n in radii:
        t = time.perf_counter()
        h = step(spec, n, cfg.probe, mode)
        dt = time.perf_counter() - t
        oracle = periodic_harmonic(spec, h.carrier)
        dist = max(abs(float(h[v] - oracle[v])) for v in h.values)
        change = "-" if prev is None else f"{max(abs(float(h[v] - prev[v])) for v in h.values):.3e}"
        print(f"{n:6d}  {change:>10}  {dist:16.3e}  {dt:7.3f}")
        prev = h


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--spec", default="gamma")
    p.add_argument("--probe", type=int, default=3)
    p.add_argument("--max-radius", type=int, default=64)
    p.add_argument("--mode", default="float", choices=["exact", "float"])
    a = p.parse_args()
    main(Config(a.spec, a.probe, a.max_radius, a.mode))
