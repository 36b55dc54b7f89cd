"""Seeded random arrangements for property tests and corpus runs."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .snc_complex import SncComplex, Vertex, validate


@dataclass(frozen=True)
class RandomArrangementConfig:
    n: int
    num_vertices: int
    edge_probability: float = 0.4
    # chance that a sampled clique is kept as a higher face
    face_probability: float = 0.6
    max_attempts: int = 100


def random_complex(cfg: RandomArrangementConfig, rng: random.Random) -> SncComplex:
    """Erdos-Renyi style sampling of an SNC dual complex.

    Edges are drawn independently; each higher face (up to size ``n``) whose
    boundary is already present is kept with ``face_probability``.  The
    result is downward closed by construction and re-validated; invalid
    draws are rejected.
    """
    names = [f"d{k}" for k in range(1, cfg.num_vertices + 1)]
    for _ in range(cfg.max_attempts):
        faces: set[frozenset[str]] = {frozenset([v]) for v in names}
        if cfg.n >= 2:
            for a in range(len(names)):
                for b in range(a + 1, len(names)):
                    if rng.random() < cfg.edge_probability:
                        faces.add(frozenset((names[a], names[b])))
        level = [f for f in faces if len(f) == 2]
        for size in range(3, cfg.n + 1):
            nxt: set[frozenset[str]] = set()
            for f in sorted(level, key=sorted):
                for w in names:
                    if w in f or max(f) >= w:
                        continue
                    g = f | {w}
                    if all(g - {u} in faces for u in g) and rng.random() < cfg.face_probability:
                        nxt.add(g)
            faces |= nxt
            level = list(nxt)
        c = SncComplex(cfg.n, tuple(Vertex(v) for v in names), frozenset(faces))
        if not validate(c):
            return c
    raise RuntimeError("could not draw a valid complex")


def corpus(
    size: int,
    dims: tuple[int, ...] = (2, 3, 4, 5),
    max_vertices: int = 12,
    seed: int = 0,
    min_vertices: int = 1,
) -> list[SncComplex]:
    """A reproducible list of random complexes cycling through ``dims``."""
    out = []
    for k in range(size):
        rng = random.Random(seed * 1_000_003 + k)
        n = dims[k % len(dims)]
        cfg = RandomArrangementConfig(
            n=n,
            num_vertices=rng.randint(min_vertices, max_vertices),
            edge_probability=rng.uniform(0.2, 0.85),
        )
        out.append(random_complex(cfg, rng))
    return out
