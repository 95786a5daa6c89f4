"""Command-line driver: ``poissoncoh <operation> [--model NAME | --input FILE.poisson] ...``.

Exit codes: 0 success, 1 the input is not Poisson, 2 usage or parse error.
Diagnostics go to stderr; the report goes to stdout or ``--output``.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from . import __version__
from .assembly import GlobalTable, blf_global_formal, near_positive_global
from .complexes import cohomology_table, euler_defect, fit_free_module
from .dsl import ParseError, format_structure, parse_poisson
from .models import MODEL_NAMES, model, reference
from .multivec import schouten
from .poisson import (
    PoissonStructure,
    casimir_basis,
    exactness_witness,
    intrinsic_gradient,
    jacobi_check,
    modular_field,
    near_positivity_sample,
    rank_at,
)

OPERATIONS = ("validate", "casimirs", "cohomology", "modular", "rank", "assemble", "report", "models")


class UsageError(Exception):
    pass


@dataclass
class ReportConfig:
    operation: str
    model: Optional[str] = None
    n: Optional[int] = None
    input: Optional[str] = None
    max_degree: int = 4
    k_range: Optional[List[int]] = None
    fmt: str = "json"
    output: Optional[str] = None
    samples: Optional[int] = None
    points: Optional[List[List[Fraction]]] = None
    kind: str = "near-positive"
    betti: Optional[List[int]] = None
    circles: int = 1
    lefschetz_points: int = 0
    casimir_degrees: Optional[List[int]] = None
    representatives: int = 200
    workers: int = 1

    def __post_init__(self):
        if self.max_degree < 0:
            raise UsageError("--max-degree must be non-negative")


# ------------------------------------------------------------------ parsing helpers

def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}")


def _k_range(text: str) -> List[int]:
    if "-" in text and "," not in text:
        lo, _, hi = text.partition("-")
        try:
            return list(range(int(lo), int(hi) + 1))
        except ValueError:
            raise UsageError(f"bad --k-range {text!r}")
    return _int_list(text)


def _point(text: str) -> List[Fraction]:
    try:
        return [Fraction(x.strip()) for x in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad --point {text!r}; use integers or p/q separated by commas")


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


# ------------------------------------------------------------------ structure loading

def load_structure(cfg: ReportConfig) -> PoissonStructure:
    if (cfg.model is None) == (cfg.input is None):
        raise UsageError("give exactly one of --model or --input")
    if cfg.model is not None:
        try:
            return model(cfg.model, cfg.n)
        except ValueError as e:
            raise UsageError(str(e))
    try:
        with open(cfg.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {cfg.input}: {e.strerror}")
    return parse_poisson(text, name=cfg.input)


def _structure_block(pi: PoissonStructure) -> Dict[str, object]:
    return {
        "name": pi.name,
        "coords": list(pi.coords),
        "weights": list(pi.weights),
        "bivector": pi.bivector.to_string(pi.coords),
        "dsl": format_structure(pi),
    }


def _reference(cfg: ReportConfig) -> Optional[Dict[str, object]]:
    return reference(cfg.model) if cfg.model is not None else None


# ------------------------------------------------------------------ operations

def op_validate(pi: PoissonStructure, cfg: ReportConfig):
    res = jacobi_check(pi)
    out = {"jacobi": res.ok, "witness": None if res.ok else res.witness.to_string(pi.coords)}
    return out, (0 if res.ok else 1)


def op_casimirs(pi: PoissonStructure, cfg: ReportConfig):
    table = {}
    for i in range(cfg.max_degree + 1):
        table[i] = [p.to_string(pi.coords) for p in casimir_basis(pi, i)]
    return {"casimirs": table, "dims": [len(table[i]) for i in range(cfg.max_degree + 1)]}, 0


def _casimir_degrees(pi: PoissonStructure, cfg: ReportConfig) -> Optional[List[int]]:
    if cfg.casimir_degrees is not None:
        return cfg.casimir_degrees
    cw = pi.extra("casimir_weights")
    return list(cw) if cw else None


def op_cohomology(pi: PoissonStructure, cfg: ReportConfig):
    if not pi.is_weight_homogeneous():
        raise UsageError("cohomology needs a weight-homogeneous bivector; declare weights(...)")
    ks = cfg.k_range if cfg.k_range is not None else list(range(pi.n + 1))
    try:
        report = cohomology_table(pi, ks, cfg.max_degree, representatives_up_to=cfg.representatives,
                                  workers=cfg.workers)
    except ValueError as e:
        raise UsageError(str(e))
    dims = {f"H{k}": report.dims(k) for k in report.k_range}
    reps = {}
    for (k, i), s in sorted(report.slices.items()):
        if s.representatives is not None and s.dim:
            reps[f"H{k}_{i}"] = [r.to_string(pi.coords) for r in s.representatives]
    out: Dict[str, object] = {
        "dims": dims,
        "totals": {f"H{k}": t for k, t in report.totals().items()},
        "representatives": reps,
        "euler_defect": euler_defect(pi, report),
        "homogeneity_shift": pi.homogeneity_shift(),
    }
    cas = _casimir_degrees(pi, cfg)
    if cas:
        fits = {}
        for k in report.k_range:
            f = fit_free_module(list(enumerate(report.dims(k))), cas)
            fits[f"H{k}"] = {"rank": f.rank, "generator_degrees": list(f.generator_degrees),
                             "exact": f.exact, "residual": list(f.residual),
                             "range_sufficient": f.range_sufficient}
        out["free_module_fits"] = {"casimir_degrees": list(cas), "fits": fits}
    return out, 0


def op_modular(pi: PoissonStructure, cfg: ReportConfig):
    Y = modular_field(pi, pi.volume)
    return {"modular_field": Y.to_string(pi.coords),
            "is_cocycle": schouten(pi.bivector, Y).is_zero(),
            "is_zero": Y.is_zero()}, 0


def _sample_points(pi: PoissonStructure, cfg: ReportConfig) -> List[List[Fraction]]:
    pts = list(cfg.points or [])
    if cfg.samples is not None:
        if cfg.samples < 0:
            raise UsageError("--samples must be non-negative")
        rng = range(-cfg.samples, cfg.samples + 1)
        pts += [list(p) for p in itertools.product(rng, repeat=pi.n)]
    if not pts:
        pts = [[0] * pi.n]
    for p in pts:
        if len(p) != pi.n:
            raise UsageError(f"point {p} has {len(p)} entries, expected {pi.n}")
    return pts


def op_rank(pi: PoissonStructure, cfg: ReportConfig):
    pts = _sample_points(pi, cfg)
    ranks = [rank_at(pi, p) for p in pts]
    hist: Dict[int, int] = {}
    for r in ranks:
        hist[r] = hist.get(r, 0) + 1
    out: Dict[str, object] = {"points": len(pts), "rank_histogram": hist}
    zeros = [p for p, r in zip(pts, ranks) if r == 0]
    out["zero_locus_gradient_ranks"] = sorted({intrinsic_gradient(pi, p).rank for p in zeros})
    if len(pts) <= 50:
        out["ranks"] = [{"point": list(p), "rank": r} for p, r in zip(pts, ranks)]
    if pi.n == 4:
        rep = near_positivity_sample(pi, pts)
        out["near_positivity"] = {"all_nonnegative": rep.all_nonnegative,
                                  "counterexample": None if rep.counterexample is None
                                  else list(rep.counterexample),
                                  "note": rep.note}
    return out, 0


def _table_dict(t: GlobalTable) -> Dict[str, object]:
    return {"kind": t.kind, "dims": {f"H{k}": v for k, v in t.dims.items()},
            "contributions": {name: {f"H{k}": v for k, v in c.items()}
                              for name, c in t.contributions.items()},
            "generators": {f"H{k}": g for k, g in t.generators.items()},
            "notes": t.notes}


def op_assemble(cfg: ReportConfig):
    try:
        if cfg.kind == "near-positive":
            if cfg.betti is None:
                raise UsageError("assemble --kind near-positive needs --betti b0,b1,b2,b3,b4")
            t = near_positive_global(cfg.betti, cfg.circles)
        elif cfg.kind == "blf":
            t = blf_global_formal(cfg.circles, cfg.lefschetz_points, cfg.max_degree)
        else:
            raise UsageError(f"unknown --kind {cfg.kind!r}")
    except ValueError as e:
        raise UsageError(str(e))
    return _table_dict(t), 0


def op_models(cfg: ReportConfig):
    out = {}
    for name in MODEL_NAMES:
        pi = model(name)
        out[name] = {"coords": list(pi.coords), "bivector": pi.bivector.to_string(pi.coords),
                     "dsl": format_structure(pi)}
    return {"models": out}, 0


def op_report(pi: PoissonStructure, cfg: ReportConfig):
    val, code = op_validate(pi, cfg)
    out: Dict[str, object] = {"validate": val}
    if code:
        return out, code
    out["modular"] = op_modular(pi, cfg)[0]
    out["casimirs"] = op_casimirs(pi, cfg)[0]
    if pi.is_weight_homogeneous():
        out["cohomology"] = op_cohomology(pi, cfg)[0]
        w = exactness_witness(pi)
        out["exactness_witness"] = None if w is None else w.to_string(pi.coords)
    return out, 0


# ------------------------------------------------------------------ rendering

def _md_value(v) -> str:
    if isinstance(v, (list, tuple)):
        return ", ".join(_md_value(x) for x in v) if v else "(none)"
    if v is None:
        return "-"
    return str(v).replace("|", "\\|").replace("\n", " ")


def _md_block(key: str, value, level: int, lines: List[str]) -> None:
    head = "#" * min(level, 6)
    if isinstance(value, dict) and value and all(isinstance(v, list) and all(
            isinstance(x, int) and not isinstance(x, bool) for x in v) for v in value.values()):
        width = max(len(v) for v in value.values())
        lines.append(f"{head} {key}")
        lines.append("")
        lines.append("| | " + " | ".join(f"i={i}" for i in range(width)) + " |")
        lines.append("|---" * (width + 1) + "|")
        for k, v in value.items():
            lines.append(f"| {k} | " + " | ".join(str(x) for x in v) + " |")
        lines.append("")
    elif isinstance(value, dict):
        lines.append(f"{head} {key}")
        lines.append("")
        scalars = [(k, v) for k, v in value.items() if not isinstance(v, dict)]
        if scalars:
            lines.append("| key | value |")
            lines.append("|---|---|")
            for k, v in scalars:
                lines.append(f"| {k} | {_md_value(v)} |")
            lines.append("")
        for k, v in value.items():
            if isinstance(v, dict):
                _md_block(str(k), v, level + 1, lines)
    else:
        lines.append(f"- **{key}**: {_md_value(value)}")


def render_markdown(doc: Dict[str, object]) -> str:
    lines = [f"# {doc['operation']}", "", f"engine version {doc['engine_version']}", ""]
    if doc.get("structure"):
        s = doc["structure"]
        lines += [f"- **structure**: {_md_value(s.get('name'))}",
                  f"- **coords**: {_md_value(s.get('coords'))}",
                  f"- **bivector**: `{s.get('bivector')}`", ""]
    _md_block("parameters", doc["parameters"], 2, lines)
    _md_block("results", doc["results"], 2, lines)
    return "\n".join(lines).rstrip() + "\n"


def render(doc: Dict[str, object], fmt: str) -> str:
    if fmt == "markdown":
        return render_markdown(doc)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# ------------------------------------------------------------------ driver

def run(cfg: ReportConfig):
    """Execute cfg; return (exit code, report document)."""
    params: Dict[str, object] = {"max_degree": cfg.max_degree}
    if cfg.operation == "models":
        results, code = op_models(cfg)
        pi = None
    elif cfg.operation == "assemble":
        params.update({"kind": cfg.kind, "betti": cfg.betti, "circles": cfg.circles,
                       "points": cfg.lefschetz_points})
        results, code = op_assemble(cfg)
        pi = None
    else:
        pi = load_structure(cfg)
        params.update({"model": cfg.model, "n": cfg.n, "input": cfg.input,
                       "k_range": cfg.k_range})
        if cfg.operation == "rank":
            params.update({"samples": cfg.samples, "points": cfg.points})
        ops = {"validate": op_validate, "casimirs": op_casimirs, "cohomology": op_cohomology,
               "modular": op_modular, "rank": op_rank, "report": op_report}
        if cfg.operation != "validate":
            res = jacobi_check(pi)
            if not res.ok:
                results = {"jacobi": False, "witness": res.witness.to_string(pi.coords)}
                code = 1
            else:
                results, code = ops[cfg.operation](pi, cfg)
        else:
            results, code = ops[cfg.operation](pi, cfg)
        ref = _reference(cfg)
        if ref is not None:
            results["reference"] = ref
    doc = {
        "structure": None if pi is None else _structure_block(pi),
        "operation": cfg.operation,
        "parameters": params,
        "results": results,
        "engine_version": __version__,
    }
    return code, _jsonable(doc)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="poissoncoh", description="Exact formal Poisson cohomology engine.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("operation", choices=OPERATIONS)
    p.add_argument("--model", help="catalog model name (see the 'models' operation)")
    p.add_argument("--n", type=int, help="half-dimension parameter for parametric models")
    p.add_argument("--input", help="structure file in the .poisson text format")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--k-range", help="multivector degrees, e.g. '0-4' or '0,2'")
    p.add_argument("--format", dest="fmt", choices=("json", "markdown"), default="json")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--samples", type=int, help="integer grid -K..K per coordinate for 'rank'")
    p.add_argument("--point", action="append", help="evaluation point 'a,b,...' (repeatable)")
    p.add_argument("--kind", default="near-positive", choices=("near-positive", "blf"))
    p.add_argument("--betti", help="Betti numbers b0,b1,b2,b3,b4")
    p.add_argument("--circles", type=int, default=1, help="number of singular circles")
    p.add_argument("--points", type=int, default=0, help="number of Lefschetz points")
    p.add_argument("--casimir-degrees", help="degrees of the Casimir generators for module fits")
    p.add_argument("--representatives", type=int, default=200,
                   help="compute representatives on slices of at most this many basis elements")
    p.add_argument("--workers", type=int, default=1)
    return p


def config_from_args(ns: argparse.Namespace) -> ReportConfig:
    return ReportConfig(
        operation=ns.operation,
        model=ns.model,
        n=ns.n,
        input=ns.input,
        max_degree=ns.max_degree,
        k_range=_k_range(ns.k_range) if ns.k_range else None,
        fmt=ns.fmt,
        output=ns.output,
        samples=ns.samples,
        points=[_point(p) for p in ns.point] if ns.point else None,
        kind=ns.kind,
        betti=_int_list(ns.betti) if ns.betti else None,
        circles=ns.circles,
        lefschetz_points=ns.points,
        casimir_degrees=_int_list(ns.casimir_degrees) if ns.casimir_degrees else None,
        representatives=ns.representatives,
        workers=ns.workers,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = config_from_args(ns)
        code, doc = run(cfg)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    if code == 1:
        res = doc["results"]
        witness = res.get("witness") or res.get("validate", {}).get("witness")
        print(f"not a Poisson bivector: [pi, pi] = {witness}", file=sys.stderr)
    text = render(doc, cfg.fmt)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
