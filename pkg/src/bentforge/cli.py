"""bentforge command line: reproduce, analyze, construct, search."""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

import numpy as np

from .analysis import classify, is_partially_bent, linear_space, plateau_order_of_spectrum
from .construction import (
    RELAXED,
    STRICT,
    ConstructionError,
    MergedNotBent,
    NwrParams,
    binomial_build,
    monomial_function,
    monomial_is_2plateaued,
    nwr_build,
    nwr_default_setup,
    run_pipeline,
)
from .finite_field import (
    DomainTooLarge,
    FieldCtx,
    FieldError,
    InnerProduct,
    default_field,
    elem_from_json,
    elem_to_json,
    field_from_json,
    field_to_json,
)
from .fixtures import EXAMPLES, example_report
from .functions import FpFunction, linear_function, trace_form
from .poly_repr import INTERPOLATE_LIMIT, algebraic_degree, interpolate
from .walsh import walsh_fast

MAX_CELLS = 200_000

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INVALID = 2
EXIT_BREACH = 3


class ParseError(ValueError):
    pass


class RangeTooLarge(ValueError):
    pass


class GoldenMismatch(Exception):
    def __init__(self, report: dict):
        super().__init__(f"{report['name']}: golden mismatch in {sorted(report['diff'])}")
        self.report = report


# -- input parsing ------------------------------------------------------------

def parse_element(ctx: FieldCtx, text_or_obj) -> int:
    """``log:k``, ``coords:c0,c1,...``, a bare F_p integer, or the JSON forms."""
    obj = text_or_obj
    try:
        if isinstance(obj, str):
            kind, _, rest = obj.partition(":")
            if kind == "log":
                return ctx.elem(int(rest))
            if kind == "coords":
                cs = [int(v) for v in rest.split(",")]
                if len(cs) != ctx.n:
                    raise ParseError(f"need {ctx.n} coordinates, got {len(cs)}")
                return ctx.from_coords(cs)
            return ctx.from_int(int(obj))
        if isinstance(obj, dict) and "coords" in obj and len(obj["coords"]) != ctx.n:
            raise ParseError(f"need {ctx.n} coordinates, got {len(obj['coords'])}")
        return elem_from_json(ctx, obj)
    except ParseError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise ParseError(f"bad field element {obj!r}: {exc}") from exc


def parse_function(ctx: FieldCtx, spec: dict) -> FpFunction:
    """A trace form ``{"terms": [{"coef", "exp"}]}`` or a raw ``{"table": [...]}``,
    plus an optional ``"linear"`` coefficient c adding Tr(c x)."""
    if not isinstance(spec, dict):
        raise ParseError("function spec must be an object")
    if "table" in spec:
        table = spec["table"]
        if len(table) != ctx.q:
            raise ParseError(f"table must have {ctx.q} entries, got {len(table)}")
        if any(not isinstance(v, int) or not 0 <= v < ctx.p for v in table):
            raise ParseError(f"table entries must be integers in [0, {ctx.p})")
        f = FpFunction(ctx, np.array(table, dtype=np.int64))
    elif "terms" in spec:
        terms = []
        for t in spec["terms"]:
            e = int(t["exp"])
            if not 0 <= e <= ctx.q - 1:
                raise ParseError(f"exponent {e} outside [0, {ctx.q - 1}]")
            terms.append((parse_element(ctx, t.get("coef", 1)), e))
        f = trace_form(ctx, terms)
    else:
        raise ParseError("function spec needs 'terms' or 'table'")
    if spec.get("linear") is not None:
        f = f + linear_function(InnerProduct(ctx, 1), parse_element(ctx, spec["linear"]))
    return f


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _field(obj) -> FieldCtx:
    if obj is None:
        raise ParseError("missing 'field'")
    try:
        return field_from_json(obj)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad field descriptor {obj!r}") from exc


# -- commands -----------------------------------------------------------------

def cmd_reproduce(name: str) -> dict:
    report = example_report(name)
    if not report["match"]:
        raise GoldenMismatch(report)
    return report


def cmd_analyze(spec: dict, delta: str | None = None) -> dict:
    ctx = _field(spec.get("field"))
    f = parse_function(ctx, spec)
    ip = InnerProduct(ctx, parse_element(ctx, delta) if delta is not None else 1)
    s = walsh_fast(f, ip)
    ls = linear_space(f)
    cl = classify(f, ip)
    degree = algebraic_degree(interpolate(f)) if ctx.q <= INTERPOLATE_LIMIT else None
    return {
        "field": field_to_json(ctx),
        "delta": elem_to_json(ctx, ip.delta),
        "plateau_s": plateau_order_of_spectrum(s),
        "linear_space": {
            "dim": ls.dim,
            "basis": [elem_to_json(ctx, b) for b in ls.space.basis],
            "restricted_linear": ls.restricted_linear,
        },
        "partially_bent": is_partially_bent(f),
        "multiset": [list(t) for t in s.multiset()],
        "classification": cl.to_json(),
        "algebraic_degree": degree,
    }


def load_recipe(obj: dict) -> dict:
    """Parse a recipe file into run_pipeline keyword arguments."""
    ctx = _field(obj.get("field"))
    if "functions" not in obj:
        raise ParseError("recipe needs 'functions'")
    mode = obj.get("mode", STRICT)
    if mode not in (STRICT, RELAXED):
        raise ParseError(f"mode must be {STRICT!r} or {RELAXED!r}")
    el = lambda key: None if obj.get(key) is None else parse_element(ctx, obj[key])  # noqa: E731
    for key in ("beta1", "beta2"):
        if obj.get(key) is None:
            raise ParseError(f"recipe needs {key!r}")
    gammas = obj.get("gammas")
    return {
        "fks": [parse_function(ctx, fs) for fs in obj["functions"]],
        "beta1": el("beta1"),
        "beta2": el("beta2"),
        "mode": mode,
        "delta": el("delta"),
        "gammas": None if gammas is None else [parse_element(ctx, g) for g in gammas],
        "Gamma": el("Gamma"),
    }


def cmd_construct(recipe: dict, out_dir: str | None = None) -> dict:
    result = run_pipeline(**load_recipe(recipe))
    report = result.report()
    if result.F.ctx.q <= INTERPOLATE_LIMIT:
        poly = interpolate(result.F)
        report["polynomial"] = poly.to_json()
        report["render"] = poly.render()
        report["algebraic_degree"] = algebraic_degree(poly)
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(dumps(report) + "\n")
        (out / "recipe.json").write_text(dumps(result.recipe.to_json()) + "\n")
        (out / "function.json").write_text(
            dumps({"field": field_to_json(result.F.ctx), "table": [int(v) for v in result.F.values]}) + "\n"
        )
    return report


def _check_cells(count: int) -> None:
    if count > MAX_CELLS:
        raise RangeTooLarge(f"{count} parameter cells exceeds the limit of {MAX_CELLS}")


def search_monomial(p: int, ns: list[int]) -> list[dict]:
    _check_cells(sum((n - 1) * (p**n - 1) for n in ns))
    rows = []
    for n in ns:
        ctx = default_field(p, n)
        ip = InnerProduct(ctx, 1)
        for r in range(1, n):
            for c in range(ctx.q - 1):
                s = plateau_order_of_spectrum(walsh_fast(monomial_function(ctx, r, c), ip))
                pred = monomial_is_2plateaued(p, n, r, c)
                rows.append({"family": "monomial", "p": p, "n": n, "r": r, "c": c,
                             "predicted": pred, "plateau_s": s, "agree": pred == (s == 2)})
    return rows


def search_binomial(p: int, ns: list[int], kappas: list[int]) -> list[dict]:
    _check_cells(len(ns) * len(kappas))
    rows = []
    for n in ns:
        ctx = default_field(p, n)
        for kappa in kappas:
            b = binomial_build(ctx, kappa)
            dim = linear_space(b.function).dim
            rows.append({"family": "binomial", "p": p, "n": n, "kappa": kappa,
                         "predicted": b.predicts_dim2, "kernel_dim": b.kernel.dim,
                         "linear_space_dim": dim, "agree": b.predicts_dim2 == (dim == 2)})
    return rows


def nwr_a_vectors(p: int, samples: int | None, seed: int) -> list[list[int]]:
    total = (p - 1) ** (p - 1)
    if samples is None or samples >= total:
        _check_cells(total)
        return [[1, *rest] for rest in itertools.product(range(1, p), repeat=p - 1)]
    rng = np.random.default_rng(seed)
    picked = sorted(rng.choice(total, size=samples, replace=False).tolist())
    out = []
    for k in picked:
        rest = []
        for _ in range(p - 1):
            rest.append(k % (p - 1) + 1)
            k //= p - 1
        out.append([1, *reversed(rest)])
    return out


def search_nwr(p: int, ns: list[int], kappas: list[int], samples: int | None = None, seed: int = 0) -> list[dict]:
    rows = []
    a_list = nwr_a_vectors(p, samples, seed)
    _check_cells(len(a_list) * len(ns) * len(kappas))
    for n in ns:
        ctx = default_field(p, n)
        b1, b2, delta, Gamma = nwr_default_setup(ctx)
        ip = InnerProduct(ctx, delta)
        for kappa in kappas:
            for a in a_list:
                res = nwr_build(ctx, NwrParams(kappa, a), b1, b2, delta, Gamma)
                cl = classify(res.function, ip)
                nwr = cl.kind.value == "NotWeaklyRegular"
                rows.append({"family": "nwr", "p": p, "n": n, "kappa": kappa, "a": a,
                             "c": res.params.c, "kind": cl.kind.value, "bent": cl.is_bent,
                             "predicted_nwr": res.has_nonsquare,
                             "agree": cl.is_bent and nwr == res.has_nonsquare})
    return rows


def cmd_search(args) -> dict:
    ns = args.n
    if args.family == "monomial":
        rows = search_monomial(args.p, ns)
    elif args.family == "binomial":
        rows = search_binomial(args.p, ns, args.kappa or [0, 1, 2])
    else:
        rows = search_nwr(args.p, ns, args.kappa or [1], args.samples, args.seed)
    if args.output:
        with open(args.output, "w") as fh:
            for row in rows:
                fh.write(dumps(row) + "\n")
    agree = sum(r["agree"] for r in rows)
    return {"family": args.family, "cells": len(rows), "agree": agree, "disagree": len(rows) - agree,
            "catalog": args.output}


# -- output -------------------------------------------------------------------

def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def multiset_text(ms) -> str:
    return "{" + ", ".join(f"({v})^{c}" for v, c in ms) + "}"


def to_text(command: str, report: dict) -> str:
    lines = []
    if command == "search":
        return (f"{report['family']}: {report['cells']} cells, {report['agree']} agree, "
                f"{report['disagree']} disagree")
    if command == "reproduce":
        m = report["measured"]
        lines += [
            f"example   {report['name']}",
            f"spectrum  {multiset_text(m['multiset'])}",
            f"kind      {m['kind']}  signs {m['sign_counts']}",
            f"degree    {m['algebraic_degree']}",
            f"terms     {m['num_terms']}",
            f"F(x) =    {report['render']}",
            f"golden    {'match' if report['match'] else 'MISMATCH ' + ', '.join(sorted(report['diff']))}",
        ]
        return "\n".join(lines)
    if command == "analyze":
        cl = report["classification"]
        lines += [
            f"plateau s        {report['plateau_s']}",
            f"linear space     dim {report['linear_space']['dim']}",
            f"partially bent   {report['partially_bent']}",
            f"spectrum         {multiset_text(report['multiset'])}",
            f"kind             {cl['kind']}  unit {cl['unit']}",
            f"algebraic degree {report['algebraic_degree']}",
        ]
        return "\n".join(lines)
    cl = report["classification"]
    lines += [
        f"kind      {cl['kind']}  unit {cl['unit']}",
        f"spectrum  {multiset_text(report['multiset'])}",
        f"checks    {', '.join(k for k, v in sorted(report['checks'].items()) if v)}",
    ]
    if "render" in report:
        lines += [f"degree    {report['algebraic_degree']}", f"F(x) =    {report['render']}"]
    return "\n".join(lines)


def emit(command: str, report: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    stream.write((dumps(report) if fmt == "json" else to_text(command, report)) + "\n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bentforge", description="Bent functions from partially bent pieces.")
    sub = ap.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("json", "text"), default="text")

    rp = sub.add_parser("reproduce", help="rerun a published example and compare with its golden")
    rp.add_argument("name", choices=EXAMPLES)
    fmt(rp)

    an = sub.add_parser("analyze", help="spectrum, linear space and classification of one function")
    an.add_argument("-f", "--function", required=True, help="function spec JSON file")
    an.add_argument("--delta", help="inner product twist, e.g. log:3 or coords:1,0,2")
    fmt(an)

    co = sub.add_parser("construct", help="run the merge pipeline on a recipe file")
    co.add_argument("-r", "--recipe", required=True)
    co.add_argument("-o", "--out", help="directory for report.json, recipe.json, function.json")
    fmt(co)

    se = sub.add_parser("search", help="sweep a family and compare predictions with measurements")
    se.add_argument("--family", choices=("monomial", "binomial", "nwr"), required=True)
    se.add_argument("--p", type=int, required=True)
    se.add_argument("--n", type=int, nargs="+", required=True)
    se.add_argument("--kappa", type=int, nargs="+")
    se.add_argument("--samples", type=int, help="nwr: number of sampled a-vectors (default: all)")
    se.add_argument("--seed", type=int, default=0)
    se.add_argument("-o", "--output", help="JSON-lines catalog")
    fmt(se)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "reproduce":
            report = cmd_reproduce(args.name)
        elif args.command == "analyze":
            report = cmd_analyze(_load_json(args.function), args.delta)
        elif args.command == "construct":
            report = cmd_construct(_load_json(args.recipe), args.out)
        else:
            report = cmd_search(args)
    except GoldenMismatch as exc:
        emit(args.command, exc.report, args.format)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except MergedNotBent as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return EXIT_BREACH
    except (ParseError, RangeTooLarge, ConstructionError, FieldError, DomainTooLarge, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except AssertionError as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return EXIT_BREACH
    emit(args.command, report, args.format)
    if args.command == "search" and report["disagree"]:
        return EXIT_MISMATCH
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
