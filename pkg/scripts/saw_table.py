"""Self-avoiding walk counts and growth estimates against the golden ratio."""

import argparse
import time
from dataclasses import dataclass

from twoended import load_spec
from twoended.saw import PHI, at_least_phi_power, count_saws, mu_estimates


@dataclass
class Config:
    specs: tuple = ("path", "ladder", "gamma")
    max_length: int = 16
    workers: int = 1


def main(cfg: Config):
    for name in cfg.specs:
        t = time.perf_counter()
        counts = count_saws(load_spec(name), 0, cfg.max_length, workers=cfg.workers)
        dt = time.perf_counter() - t
        print(f"# {name}: N={cfg.max_length}, {dt:.2f}s, phi={PHI:.15f}")
        print(f"{'n':>3} {'c_n':>12} {'c_n^(1/n)':>10} {'ratio':>8}  c_n>=phi^n")
        for n, root, ratio in mu_estimates(counts):
            r = "" if ratio is None else f"{ratio:8.4f}"
            print(f"{n:3d} {counts.c(n):12d} {root:10.4f} {r:>8}  {at_least_phi_power(counts.c(n), n)}")
        print()


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--spec", action="append", help="repeatable; default: all shipped specs")
    p.add_argument("--max", type=int, default=16)
    p.add_argument("--workers", type=int, default=1)
    a = p.parse_args()
    main(Config(tuple(a.spec or Config.specs), a.max, a.workers))
