"""Catalog of ready-made Poisson structures and their published reference values."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .algebra import Polynomial, variables
from .multivec import AffinePointMap, Multivector, Offset
from .poisson import PoissonStructure

MODEL_NAMES = (
    "near-positive",
    "near-symplectic-2n",
    "log-2n",
    "blf-circle",
    "blf-point",
    "sl2-dual",
    "symplectic-std",
    "phase-space-example",
)

# models taking a half-dimension parameter n, with its minimum and default
_PARAM_MODELS = {"near-symplectic-2n": (2, 3), "log-2n": (1, 2), "symplectic-std": (1, 2)}


@dataclass(frozen=True)
class ModelSpec:
    name: str
    n: Optional[int] = None
    factor: Optional[Polynomial] = None  # conformal factor, blf models only


def _canonical_name(name: str) -> str:
    key = name.strip().lower().replace("_", "-")
    aliases = {"near-positive4": "near-positive", "symplectic": "symplectic-std",
               "phase-space": "phase-space-example", "log": "log-2n",
               "near-symplectic": "near-symplectic-2n"}
    key = aliases.get(key, key)
    if key not in MODEL_NAMES:
        raise ValueError(f"unknown model {name!r}; choose from {', '.join(MODEL_NAMES)}")
    return key


def _bivector(n: int, entries: Dict[Tuple[int, int], Polynomial]) -> Multivector:
    return Multivector(2, entries, n)


def _near_positive_block(x) -> Dict[Tuple[int, int], Polynomial]:
    x1, x3 = x[1], x[3]
    return {(0, 1): x1, (2, 3): x1, (0, 3): x3, (1, 2): x3}


def near_positive4() -> PoissonStructure:
    """x1 (d0^d1 + d2^d3) + x3 (d0^d3 + d1^d2) on R^4."""
    x = variables(4)
    return PoissonStructure(("x0", "x1", "x2", "x3"), _bivector(4, _near_positive_block(x)),
                            name="near-positive")


def near_symplectic_2n(n: int) -> PoissonStructure:
    """Near-positive block plus sum_{i=1}^{n-2} d/dp_i ^ d/dq_i in 2n coordinates.

    Coordinates are (x0, x1, x2, x3, p1, q1, ..., p_{n-2}, q_{n-2}); the
    symplectic block keeps the displayed d/dp ^ d/dq ordering.
    """
    if n < 2:
        raise ValueError("near-symplectic-2n needs n >= 2")
    dim = 2 * n
    x = variables(dim)
    entries = _near_positive_block(x)
    coords = ["x0", "x1", "x2", "x3"]
    one = Polynomial.constant(1, dim)
    for i in range(1, n - 1):
        p = len(coords)
        coords += [f"p{i}", f"q{i}"]
        entries[(p, p + 1)] = one
    return PoissonStructure(tuple(coords), _bivector(dim, entries), name="near-symplectic-2n",
                            extras=(("n", n),))


def log_2n(n: int) -> PoissonStructure:
    """Log-symplectic local model sum d/dp_i ^ d/dq_i + x1 d0^d1 in 2n coordinates."""
    if n < 1:
        raise ValueError("log-2n needs n >= 1")
    dim = 2 * n
    x = variables(dim)
    coords = ["x0", "x1"]
    entries = {(0, 1): x[1]}
    one = Polynomial.constant(1, dim)
    for i in range(1, n):
        p = len(coords)
        coords += [f"p{i}", f"q{i}"]
        entries[(p, p + 1)] = one
    return PoissonStructure(tuple(coords), _bivector(dim, entries), name="log-2n", extras=(("n", n),))


def blf_circle(factor: Optional[Polynomial] = None) -> PoissonStructure:
    """k (x1 d2^d3 + x2 d1^d3 - x3 d1^d2) in coordinates (theta, x1, x2, x3); k = 1 by default."""
    x = variables(4)
    entries = {(2, 3): x[1], (1, 3): x[2], (1, 2): -x[3]}
    extras: Tuple = ()
    if factor is not None:
        if factor.nvars != 4:
            raise ValueError("conformal factor must be a polynomial in 4 coordinates")
        entries = {k: v * factor for k, v in entries.items()}
        extras = (("factor", str(factor)),)
    return PoissonStructure(("theta", "x1", "x2", "x3"), _bivector(4, entries), name="blf-circle",
                            extras=extras)


def blf_point(factor: Optional[Polynomial] = None) -> PoissonStructure:
    """Quadratic model around a Lefschetz singularity in coordinates (x1, x2, x3, x4)."""
    x1, x2, x3, x4 = variables(4)
    entries = {
        (0, 1): x3 * x3 + x4 * x4,
        (0, 2): -x1 * x4 + x2 * x3,
        (0, 3): -x2 * x4 - x1 * x3,
        (1, 2): x1 * x3 + x2 * x4,
        (1, 3): -x1 * x4 + x2 * x3,
        (2, 3): x1 * x1 + x2 * x2,
    }
    extras: Tuple = (("casimir_weights", (2, 2)),)
    if factor is not None:
        if factor.nvars != 4:
            raise ValueError("conformal factor must be a polynomial in 4 coordinates")
        entries = {k: v * factor for k, v in entries.items()}
        extras += (("factor", str(factor)),)
    return PoissonStructure(("x1", "x2", "x3", "x4"), _bivector(4, entries), name="blf-point",
                            extras=extras)


def sl2_dual() -> PoissonStructure:
    """The circle model without its theta coordinate: x1 d2^d3 + x2 d1^d3 - x3 d1^d2 on R^3."""
    x1, x2, x3 = variables(3)
    entries = {(1, 2): x1, (0, 2): x2, (0, 1): -x3}
    return PoissonStructure(("x1", "x2", "x3"), _bivector(3, entries), name="sl2-dual")


def symplectic_std(n: int) -> PoissonStructure:
    """Darboux bivector d0^d1 + d2^d3 + ... on R^{2n}."""
    if n < 1:
        raise ValueError("symplectic-std needs n >= 1")
    dim = 2 * n
    one = Polynomial.constant(1, dim)
    entries = {(2 * i, 2 * i + 1): one for i in range(n)}
    return PoissonStructure(tuple(f"x{i}" for i in range(dim)), _bivector(dim, entries),
                            name="symplectic-std", extras=(("n", n),))


def phase_space_example() -> PoissonStructure:
    """p1 (d_q1^d_p1 + d_q2^d_p2) + p2 (d_q1^d_p2 + d_p1^d_q2) in coordinates (q1, p1, q2, p2)."""
    q1, p1, q2, p2 = variables(4)
    entries = {(0, 1): p1, (2, 3): p1, (0, 3): p2, (1, 2): p2}
    return PoissonStructure(("q1", "p1", "q2", "p2"), _bivector(4, entries), name="phase-space-example")


def model(spec, n: Optional[int] = None, factor: Optional[Polynomial] = None) -> PoissonStructure:
    """Instantiate a catalog model from a ModelSpec or a name plus parameters."""
    if isinstance(spec, ModelSpec):
        name, n, factor = spec.name, spec.n, spec.factor
    else:
        name = spec
    key = _canonical_name(name)
    if factor is not None and key not in ("blf-circle", "blf-point"):
        raise ValueError(f"model {key} does not take a conformal factor")
    if key in _PARAM_MODELS:
        lo, default = _PARAM_MODELS[key]
        n = default if n is None else int(n)
        if n < lo:
            raise ValueError(f"model {key} needs n >= {lo}")
    elif n is not None:
        raise ValueError(f"model {key} takes no parameter n")
    if key == "near-positive":
        return near_positive4()
    if key == "near-symplectic-2n":
        return near_symplectic_2n(n)
    if key == "log-2n":
        return log_2n(n)
    if key == "blf-circle":
        return blf_circle(factor)
    if key == "blf-point":
        return blf_point(factor)
    if key == "sl2-dual":
        return sl2_dual()
    if key == "symplectic-std":
        return symplectic_std(n)
    return phase_space_example()


def catalog() -> List[PoissonStructure]:
    """The nine catalog instances used by the Jacobi suite (default parameters)."""
    theta, x1, x2, x3 = variables(4)
    k = 1 + theta * theta + x1 * x2
    circle_k = blf_circle(k)
    return [near_positive4(), near_symplectic_2n(3), log_2n(2), blf_circle(), circle_k,
            blf_point(), sl2_dual(), symplectic_std(2), phase_space_example()]


def involution_map() -> AffinePointMap:
    """(x0, x1, x2, x3) -> (x0 + tau, -x1, x2, -x3) with tau a formal shift (a half turn)."""
    return AffinePointMap(
        ((1, 0, 0, 0), (0, -1, 0, 0), (0, 0, 1, 0), (0, 0, 0, -1)),
        (Offset.symbol("tau"), Offset(), Offset(), Offset()),
    )


def circle_casimirs() -> Tuple[Polynomial, Polynomial]:
    """Q1 = theta and Q2 = -x1^2 + x2^2 + x3^2."""
    theta, x1, x2, x3 = variables(4)
    return theta, -x1 * x1 + x2 * x2 + x3 * x3


def point_casimirs() -> Tuple[Polynomial, Polynomial]:
    """P1 = x1^2 - x2^2 + x3^2 - x4^2 and P2 = 2 (x1 x2 + x3 x4)."""
    x1, x2, x3, x4 = variables(4)
    return x1 * x1 - x2 * x2 + x3 * x3 - x4 * x4, 2 * (x1 * x2 + x3 * x4)


# Published values, embedded in reports next to computed ones.
REFERENCE: Dict[str, Dict[str, object]] = {
    "near-positive": {
        "H0": "R (constants only)",
        "H1": "R^2 spanned by d0 and d2; 2 d0 is the modular field",
        "H2": "R spanned by d0^d2",
        "H3": "0",
        "H4": "0",
        "modular_field": "2*dx0",
        "slice_dims": {"H0": [1], "H1": [2], "H2": [1], "H3": [0], "H4": [0], "higher_degrees": 0},
    },
    "blf-circle": {
        "H0": "R[Q1, Q2]",
        "H1": "R[Q1, Q2] d/dtheta",
        "H2": "0",
        "H3": "R[Q1, Q2] dx1^dx2^dx3",
        "H4": "R[Q1, Q2] dtheta^dx1^dx2^dx3",
        "modular_field": "0",
        "slice_dims": "H0, H1, H3, H4: floor(i/2)+1 in degree i; H2: 0",
        "exact": "[pi, E] = pi for the Euler field E",
    },
    "blf-point": {
        "H0": "R[P1, P2]",
        "H1": "R[P1, P2] E (free of rank 1)",
        "H2": "free R[P1, P2]-module of rank 6",
        "H3": "free R[P1, P2]-module of rank 13",
        "H4": "free R[P1, P2]-module of rank 7",
        "modular_field": "0",
        "module_ranks": {"H0": 1, "H1": 1, "H2": 6, "H3": 13, "H4": 7},
    },
    "sl2-dual": {"H0": "R[Q2]"},
    "symplectic-std": {"H0": "R", "higher": "0 (Poincare lemma)"},
    "phase-space-example": {"note": "same bivector as near-positive in coordinates (q1, p1, q2, p2)",
                            "pi^pi": "(p1^2 + p2^2) vol, up to the wedge normalization"},
}


def reference(name: str) -> Optional[Dict[str, object]]:
    return REFERENCE.get(_canonical_name(name))


def expected_slice_dim(name: str, k: int, i: int) -> Optional[int]:
    """Published per-slice dimension where the source states one, else None."""
    key = _canonical_name(name)
    if key == "near-positive":
        return {0: 1, 1: 2, 2: 1, 3: 0, 4: 0}[k] if i == 0 else 0
    if key == "blf-circle":
        return 0 if k == 2 else i // 2 + 1
    if key == "blf-point" and k == 0:
        return i // 2 + 1 if i % 2 == 0 else 0
    return None
