"""Global cohomology tables assembled from local pieces and topological input."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import cohomology_table, hilbert_function


@dataclass(frozen=True)
class BettiVector:
    b: Tuple[int, int, int, int, int]

    def __post_init__(self):
        b = tuple(int(x) for x in self.b)
        if len(b) != 5:
            raise ValueError("a Betti vector has five entries b0..b4")
        if any(x < 0 for x in b):
            raise ValueError("Betti numbers are non-negative")
        if b[0] < 1:
            raise ValueError("b0 >= 1 for a nonempty connected manifold")
        object.__setattr__(self, "b", b)

    def __getitem__(self, k: int) -> int:
        return self.b[k]


@dataclass
class GlobalTable:
    kind: str
    dims: Dict[int, object]  # k -> int, or k -> {i: int} for graded tables
    contributions: Dict[str, Dict[int, object]] = field(default_factory=dict)
    generators: Dict[int, List[str]] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def vector(self) -> Tuple[int, ...]:
        return tuple(self.dims[k] for k in sorted(self.dims))


def near_positive_global(b, n: int) -> GlobalTable:
    """Poisson cohomology of a closed near-positive 4-manifold with n singular circles.

    H0 = 1, H1 = 2n + b1, H2 = n + b2, H3 = b3, H4 = b4.  With n = 0 the
    structure is symplectic and the table is the Betti vector itself.
    """
    b = b if isinstance(b, BettiVector) else BettiVector(tuple(b))
    if n < 0:
        raise ValueError("circle count must be non-negative")
    if n == 0:
        return GlobalTable(
            "near-positive", {k: b[k] for k in range(5)},
            {"de Rham": {k: b[k] for k in range(5)}},
            notes=["n = 0: symplectic case, Poisson cohomology is de Rham cohomology"])
    dims = {0: 1, 1: 2 * n + b[1], 2: n + b[2], 3: b[3], 4: b[4]}
    contributions = {
        "de Rham": {0: 1, 1: b[1], 2: b[2], 3: b[3], 4: b[4]},
        "singular circles": {0: 0, 1: 2 * n, 2: n, 3: 0, 4: 0},
    }
    gens = {
        1: [f"Y_{k} (modular field near circle {k})" for k in range(1, n + 1)]
        + [f"d_{k} (normal line-bundle field near circle {k})" for k in range(1, n + 1)],
        2: [f"d0^d2 class near circle {k}" for k in range(1, n + 1)],
    }
    return GlobalTable("near-positive", dims, contributions, gens)


@lru_cache(maxsize=4)
def _point_table(i_max: int) -> Dict[int, Tuple[int, ...]]:
    from .models import blf_point
    report = cohomology_table(blf_point(), i_max=i_max)
    return {k: tuple(report.dims(k)) for k in report.k_range}


def _circle_dims(i_max: int) -> Dict[int, Tuple[int, ...]]:
    h = hilbert_function((1, 2), i_max)
    return {0: tuple(h), 1: tuple(h), 2: (0,) * (i_max + 1), 3: tuple(h), 4: tuple(h)}


def blf_global_formal(n: int, m: int, i_max: int) -> GlobalTable:
    """Formal cohomology near the singular set of a broken Lefschetz fibration.

    n fold circles contribute the Hilbert function of R[Q1, Q2] (degrees 1, 2)
    to H0, H1, H3, H4 and nothing to H2; each of the m Lefschetz points
    contributes the slice dimensions computed for the quadratic point model.
    The result is reported per component and per coefficient degree.
    """
    if n < 0 or m < 0 or i_max < 0:
        raise ValueError("counts and degree bound must be non-negative")
    circle = _circle_dims(i_max)
    point = _point_table(i_max) if m else {k: (0,) * (i_max + 1) for k in range(5)}
    dims = {k: {i: n * circle[k][i] + m * point[k][i] for i in range(i_max + 1)} for k in range(5)}
    contributions: Dict[str, Dict[int, object]] = {}
    for c in range(1, n + 1):
        contributions[f"circle {c}"] = {k: dict(enumerate(circle[k])) for k in range(5)}
    for c in range(1, m + 1):
        contributions[f"point {c}"] = {k: dict(enumerate(point[k])) for k in range(5)}
    gens = {
        0: ["Casimirs Q1, Q2 per circle; P1, P2 per point (reported per component)"],
        1: [f"d/dtheta_{c}" for c in range(1, n + 1)] + [f"Euler field E_{c}" for c in range(1, m + 1)],
    }
    notes = ["H0 is listed per component; no global Casimir algebra is formed",
             "point contributions are the engine's own slice dimensions"]
    return GlobalTable("blf-formal", dims, contributions, gens, notes)
