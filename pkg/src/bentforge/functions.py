"""Functions GF(p^n) -> GF(p) stored as value tables indexed by element int."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .finite_field import FieldCtx, InnerProduct


@dataclass(eq=False)
class FpFunction:
    ctx: FieldCtx
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.int64)
        if v.shape != (self.ctx.q,):
            raise ValueError(f"table must have length {self.ctx.q}, got {v.shape}")
        self.values = v % self.ctx.p

    def __call__(self, x: int) -> int:
        return int(self.values[x])

    def __eq__(self, other):
        return (
            isinstance(other, FpFunction)
            and self.ctx == other.ctx
            and np.array_equal(self.values, other.values)
        )

    def __add__(self, other: "FpFunction") -> "FpFunction":
        return FpFunction(self.ctx, self.values + other.values)

    def __sub__(self, other: "FpFunction") -> "FpFunction":
        return FpFunction(self.ctx, self.values - other.values)

    def __rmul__(self, c: int) -> "FpFunction":
        return FpFunction(self.ctx, int(c) * self.values)

    def __neg__(self):
        return FpFunction(self.ctx, -self.values)

    def normalized(self) -> "FpFunction":
        """f - f(0)."""
        return FpFunction(self.ctx, self.values - self.values[0])

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "FpFunction":
        return cls(ctx, np.zeros(ctx.q, dtype=np.int64))


def trace_form(ctx: FieldCtx, terms: Sequence[tuple[int, int]]) -> FpFunction:
    """x -> Tr(sum coef * x^exp) for ``terms = [(coef, exp), ...]``."""
    xs = ctx.elements()
    vals = np.zeros(ctx.q, dtype=np.int64)
    for coef, e in terms:
        vals += ctx.v_trace(ctx.v_mul(coef, ctx.v_pow(xs, e)))
    return FpFunction(ctx, vals)


def monomial(ctx: FieldCtx, coef: int, e: int) -> FpFunction:
    return trace_form(ctx, [(coef, e)])


def linear_function(ip: InnerProduct, c: int) -> FpFunction:
    """x -> <c, x>."""
    return FpFunction(ip.ctx, ip.pair_all(c))
