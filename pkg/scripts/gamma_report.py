"""Full symmetry report for Gamma plus DOT renderings of a window and its colouring."""

import argparse
from dataclasses import dataclass
from pathlib import Path

from twoended import color, symmetry
from twoended.graph import expand
from twoended.harmonic import periodic_harmonic


@dataclass
class Config:
    out: Path = Path("gamma_out")
    radius: int = 2


def main(cfg: Config):
    cfg.out.mkdir(parents=True, exist_ok=True)
    reports = symmetry.run_checks("all")
    text = "\n".join(r.render() for r in reports)
    (cfg.out / "claims.txt").write_text(text)
    w = expand(symmetry.GAMMA, -cfg.radius, cfg.radius)
    (cfg.out / "gamma.dot").write_text(w.to_dot(name="Gamma", layer_colours=True))
    g = periodic_harmonic(symmetry.GAMMA, w)
    col = color.three_edge_colour(w, g, color.classify_case(g, w.origin))
    (cfg.out / "gamma_colouring.dot").write_text(w.to_dot(name="Gamma", edge_colours=col.colours))
    for r in reports:
        print(f"{r.claim:<10} {r.verdict}")
    print(f"wrote {cfg.out}/claims.txt, gamma.dot, gamma_colouring.dot")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", type=Path, default=Config.out)
    p.add_argument("--radius", type=int, default=2)
    a = p.parse_args()
    main(Config(a.out, a.radius))
