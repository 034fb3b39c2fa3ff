"""The four published merge examples, pinned to their printed recipes, and their goldens."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .construction import RELAXED, STRICT, PipelineResult, run_pipeline
from .finite_field import FieldCtx, named_field
from .functions import FpFunction, monomial, trace_form
from .poly_repr import UnivariatePoly, algebraic_degree, interpolate

EXAMPLES = ("ex1", "ex2", "ex3a", "ex3b")


@dataclass
class ExampleRecipe:
    ctx: FieldCtx
    fks: list[FpFunction]
    beta1: int
    beta2: int
    mode: str
    delta: int
    gammas: list[int]


def example_recipe(name: str) -> ExampleRecipe:
    if name == "ex1":
        c = named_field("gf2_6")
        fks = [monomial(c, c.elem(1), 5), monomial(c, c.elem(22), 5)]
        return ExampleRecipe(c, fks, c.elem(25), c.elem(46), STRICT, 1, [0, c.elem(3)])
    if name == "ex2":
        c = named_field("gf3_4")
        f0 = monomial(c, c.elem(4), 28)
        return ExampleRecipe(c, [f0, 2 * f0, f0], c.elem(2), c.from_coords([1, 2, 0, 1]), STRICT, 1, [0, 1, 2])
    if name in ("ex3a", "ex3b"):
        c = named_field("gf3_3")
        f0 = trace_form(c, [(2, 2), (1, 10)])
        f1 = trace_form(c, [(2, 2), (1, 4)])
        f2 = f1 if name == "ex3a" else 2 * f1
        g2 = c.elem(2)
        return ExampleRecipe(c, [f0, f1, f2], c.elem(1), 1, RELAXED, 1, [0, c.scale(2, g2), g2])
    raise KeyError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")


def run_example(name: str) -> PipelineResult:
    r = example_recipe(name)
    return run_pipeline(r.fks, r.beta1, r.beta2, mode=r.mode, delta=r.delta, gammas=r.gammas)


def load_golden(name: str) -> dict:
    if name not in EXAMPLES:
        raise KeyError(f"unknown example {name!r}")
    text = resources.files("bentforge").joinpath("data", "goldens", f"{name}.json").read_text()
    return json.loads(text)


def golden_poly(ctx: FieldCtx, golden: dict) -> UnivariatePoly | None:
    if "polynomial" not in golden:
        return None
    return UnivariatePoly(ctx, {int(t["exp"]): ctx.elem(int(t["coef_log"])) for t in golden["polynomial"]["terms"]})


def example_report(name: str, result: PipelineResult | None = None) -> dict:
    """Measured quantities next to the golden ones, with a per-field diff."""
    result = result or run_example(name)
    golden = load_golden(name)
    cl = result.classification
    poly = interpolate(result.F)
    measured = {
        "multiset": [list(t) for t in cl.spectrum.multiset()],
        "kind": cl.kind.value,
        "sign_counts": cl.sign_counts(),
        "algebraic_degree": algebraic_degree(poly),
        "polynomial": poly.to_json(),
        "num_terms": len(poly),
    }
    diff = {}
    for key, want in golden.items():
        if key in ("name", "field"):
            continue
        got = measured.get(key)
        if got != want:
            entry = {"expected": want, "got": got}
            if key == "polynomial":
                entry = _poly_diff(result.F.ctx, want, got)
            diff[key] = entry
    return {
        "name": name,
        "measured": measured,
        "render": poly.render(),
        "checks": result.checks,
        "recipe": result.recipe.to_json(),
        "match": not diff,
        "diff": diff,
    }


def _poly_diff(ctx: FieldCtx, want: dict, got: dict) -> dict:
    w = {t["exp"]: t["coef_log"] for t in want["terms"]}
    g = {t["exp"]: t["coef_log"] for t in got["terms"]}
    return {
        "expected_terms": len(w),
        "got_terms": len(g),
        "differing_exponents": [
            {"exp": e, "expected_coef_log": w.get(e), "got_coef_log": g.get(e)}
            for e in sorted(set(w) | set(g), reverse=True)
            if w.get(e) != g.get(e)
        ],
    }
