"""Univariate polynomial of degree <= p^n - 1 representing a function table."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .finite_field import FieldCtx, check_domain
from .functions import FpFunction

INTERPOLATE_LIMIT = 2**16


@dataclass(frozen=True)
class UnivariatePoly:
    ctx: FieldCtx
    coeffs: dict[int, int]  # exponent -> nonzero field element

    def __len__(self):
        return len(self.coeffs)

    def terms(self) -> list[tuple[int, int]]:
        """(exponent, coefficient), descending exponent."""
        return sorted(self.coeffs.items(), reverse=True)

    def log_terms(self) -> dict[int, int]:
        """exponent -> discrete log of the coefficient."""
        return {e: self.ctx.log(c) for e, c in self.coeffs.items()}

    def to_json(self) -> dict:
        return {"terms": [{"coef_log": self.ctx.log(c), "exp": e} for e, c in self.terms()]}

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(_term_text(self.ctx, c, e) for e, c in self.terms())

    def __str__(self):
        return self.render()


def _coef_text(ctx: FieldCtx, c: int) -> str:
    if ctx.is_prime_field_elem(c):
        return "" if c == 1 else str(c)
    k = ctx.log(c)
    return "g" if k == 1 else f"g^{k}"


def _term_text(ctx: FieldCtx, c: int, e: int) -> str:
    coef = _coef_text(ctx, c)
    if e == 0:
        return coef or "1"
    mono = "x" if e == 1 else f"x^{e}"
    if not coef:
        return mono
    if coef.isdigit():
        return f"{coef}{mono}"
    return f"{coef}*{mono}"


def interpolate(f: FpFunction) -> UnivariatePoly:
    """c_0 = f(0), c_j = -sum_{x != 0} f(x) x^-j (0 < j < q-1), c_{q-1} = -sum_x f(x)."""
    ctx = f.ctx
    q, p = ctx.q, ctx.p
    check_domain(q, INTERPOLATE_LIMIT, "interpolation")
    nz = np.arange(1, q, dtype=np.int64)
    logs = ctx.log_table[nz]
    fv = f.values[nz]
    sel = fv != 0
    logs, fv = logs[sel], fv[sel]
    coeffs: dict[int, int] = {}
    if f(0):
        coeffs[0] = ctx.from_int(f(0))
    chunk = max(1, (1 << 22) // max(len(logs) * ctx.n, 1))
    js = np.arange(1, q - 1, dtype=np.int64)
    for lo in range(0, len(js), chunk):
        j = js[lo : lo + chunk]
        pts = ctx.exp_table[(-j[:, None] * logs[None, :]) % (q - 1)]
        acc = np.einsum("jxk,x->jk", ctx.coord_array[pts], fv) % p
        vals = ctx.to_ints((-acc) % p)
        for jj, v in zip(j, vals):
            if v:
                coeffs[int(jj)] = int(v)
    top = (-int(f.values.sum())) % p
    if top:
        coeffs[q - 1] = top
    return UnivariatePoly(ctx, coeffs)


def evaluate(poly: UnivariatePoly, x: int) -> int:
    """Horner evaluation over the sorted exponents."""
    ctx = poly.ctx
    terms = poly.terms()
    if not terms:
        return 0
    acc = 0
    prev = terms[0][0]
    for e, c in terms:
        acc = ctx.mul(acc, ctx.pow(x, prev - e)) if acc else acc
        acc = ctx.add(acc, c)
        prev = e
    return ctx.mul(acc, ctx.pow(x, prev)) if prev else acc


def evaluate_all(poly: UnivariatePoly) -> np.ndarray:
    ctx = poly.ctx
    xs = ctx.elements()
    acc = np.zeros(ctx.q, dtype=np.int64)
    for e, c in poly.coeffs.items():
        acc = ctx.v_add(acc, ctx.v_mul(c, ctx.v_pow(xs, e)))
    return acc


def to_function(poly: UnivariatePoly) -> FpFunction:
    vals = evaluate_all(poly)
    if np.any(vals >= poly.ctx.p):
        raise ValueError("polynomial does not map into the prime field")
    return FpFunction(poly.ctx, vals)


def digit_sum(e: int, p: int) -> int:
    s = 0
    while e:
        s += e % p
        e //= p
    return s


def algebraic_degree(poly: UnivariatePoly) -> int:
    return max((digit_sum(e, poly.ctx.p) for e in poly.coeffs), default=0)
