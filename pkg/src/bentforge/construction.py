"""Merging p partially bent functions with a common 2-dimensional linear space into a bent function."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

import numpy as np

from .analysis import (
    BentClassification,
    Kind,
    classify,
    is_partially_bent,
    linear_space,
    plateau_order_of_spectrum,
)
from .finite_field import (
    FieldCtx,
    InnerProduct,
    Subspace,
    elem_from_json,
    elem_to_json,
    field_from_json,
    field_to_json,
    is_square_mod_p,
    kernel_of_linearized,
    orthogonal_complement,
    rank_mod_p,
)
from .functions import FpFunction, linear_function, trace_form
from .walsh import walsh_on_subspace

STRICT = "strict"
RELAXED = "relaxed"


class ConstructionError(ValueError):
    pass


class NotFound(ConstructionError):
    pass


class NoGammaCandidate(ConstructionError):
    pass


class InvalidRecipe(ConstructionError):
    pass


class IngredientNotPartiallyBent(ConstructionError):
    pass


class WrongLinearSpace(ConstructionError):
    pass


class PreconditionViolated(ConstructionError):
    pass


class BadN(ConstructionError):
    pass


class MergedNotBent(RuntimeError):
    """Invariant breach: the merged function failed the bentness check."""


@dataclass
class ConstructionRecipe:
    ctx: FieldCtx
    fks: list[FpFunction]
    beta1: int
    beta2: int
    delta: int
    ell: int
    t: int
    gammas: list[int]
    gamma_merge: int
    mode: str = STRICT
    Gamma: int | None = None

    @property
    def ip(self) -> InnerProduct:
        return InnerProduct(self.ctx, self.delta)

    def to_json(self) -> dict:
        c = self.ctx
        return {
            "field": field_to_json(c),
            "mode": self.mode,
            "fks": [{"table": [int(v) for v in f.values]} for f in self.fks],
            "beta1": elem_to_json(c, self.beta1),
            "beta2": elem_to_json(c, self.beta2),
            "delta": elem_to_json(c, self.delta),
            "ell": self.ell,
            "t": self.t,
            "gammas": [elem_to_json(c, g) for g in self.gammas],
            "gamma_merge": elem_to_json(c, self.gamma_merge),
            "Gamma": None if self.Gamma is None else elem_to_json(c, self.Gamma),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ConstructionRecipe":
        c = field_from_json(obj["field"])
        el = lambda o: elem_from_json(c, o)  # noqa: E731
        return cls(
            ctx=c,
            fks=[FpFunction(c, np.array(f["table"])) for f in obj["fks"]],
            beta1=el(obj["beta1"]),
            beta2=el(obj["beta2"]),
            delta=el(obj["delta"]),
            ell=int(obj["ell"]),
            t=int(obj["t"]),
            gammas=[el(g) for g in obj["gammas"]],
            gamma_merge=el(obj["gamma_merge"]),
            mode=obj.get("mode", STRICT),
            Gamma=None if obj.get("Gamma") is None else el(obj["Gamma"]),
        )


def _independent(ctx: FieldCtx, *vs: int) -> bool:
    return rank_mod_p(np.array([ctx.coords(v) for v in vs]), ctx.p) == len(vs)


def _delta_conditions(ip: InnerProduct, beta1: int, beta2: int, mode: str) -> str | None:
    """None if delta is admissible, else the first failed condition."""
    if ip(beta1, beta2) != 0:
        return "Tr(delta*beta1*beta2) != 0"
    if ip(beta1, beta1) == 0:
        return "Tr(delta*beta1^2) == 0"
    if mode == STRICT and ip(beta2, beta2) == 0:
        return "Tr(delta*beta2^2) == 0"
    return None


def find_delta(ctx: FieldCtx, beta1: int, beta2: int, mode: str = STRICT, limit: int | None = None) -> InnerProduct:
    """First delta = g^k (ascending k) making <u,v> = Tr(delta u v) admissible."""
    if mode not in (STRICT, RELAXED):
        raise ValueError(f"unknown mode {mode!r}")
    if not _independent(ctx, beta1, beta2):
        raise InvalidRecipe("beta1 and beta2 must be linearly independent")
    for k in range(min(limit or ctx.q - 1, ctx.q - 1)):
        ip = InnerProduct(ctx, ctx.elem(k))
        if _delta_conditions(ip, beta1, beta2, mode) is None:
            return ip
    raise NotFound(f"no admissible delta ({mode})")


def check_gammas(
    ip: InnerProduct,
    fks: Sequence[FpFunction],
    beta1: int,
    beta2: int,
    gammas: Sequence[int],
    require_perp: bool = True,
) -> None:
    p = ip.ctx.p
    f0b2 = fks[0](beta2)
    for k, (fk, gk) in enumerate(zip(fks, gammas)):
        if require_perp and ip(gk, beta1) != 0:
            raise InvalidRecipe(f"gamma_{k} is not orthogonal to beta1")
        if (fk(beta2) + ip(gk, beta2) - f0b2 - k) % p:
            raise InvalidRecipe(f"gamma_{k} violates f_k(b2) + <gamma_k, b2> = f_0(b2) + k")


def _first_gamma(ip: InnerProduct, beta1: int, beta2: int) -> int:
    ctx = ip.ctx
    powers = ctx.exp_table
    ok = (ip.pair_all(beta1, powers) == 0) & (ip.pair_all(beta2, powers) != 0)
    hits = np.nonzero(ok)[0]
    if hits.size == 0:
        raise NoGammaCandidate("<beta1>-perp pairs trivially with beta2")
    return int(powers[hits[0]])


def select_gammas(
    ip: InnerProduct,
    fks: Sequence[FpFunction],
    beta1: int,
    beta2: int,
    mode: str = STRICT,
    Gamma: int | None = None,
) -> tuple[list[int], int, int]:
    """gamma_k = m_k * Gamma solving the support-separation equation.

    Returns (gammas, Gamma, t) with t = <Gamma, beta2>.  Strict mode uses
    Gamma = beta2; relaxed mode scans <beta1>-perp by discrete log.
    """
    ctx = ip.ctx
    p = ctx.p
    if Gamma is None:
        if mode == STRICT:
            if ip(beta2, beta2) == 0:
                raise NoGammaCandidate("<beta2, beta2> = 0; use relaxed mode")
            Gamma = beta2
        else:
            Gamma = _first_gamma(ip, beta1, beta2)
    if ip(Gamma, beta1) != 0:
        raise InvalidRecipe("Gamma must be orthogonal to beta1")
    t = ip(Gamma, beta2)
    if t == 0:
        raise NoGammaCandidate("<Gamma, beta2> = 0")
    t_inv = pow(t, -1, p)
    f0b2 = fks[0](beta2)
    gammas = [ctx.scale(t_inv * (k - fk(beta2) + f0b2), Gamma) for k, fk in enumerate(fks)]
    check_gammas(ip, fks, beta1, beta2, gammas)
    return gammas, Gamma, t


def build_gk(fk: FpFunction, gamma_k: int, ip: InnerProduct) -> FpFunction:
    """g_k(x) = f_k(x) + <gamma_k, x>."""
    return fk + linear_function(ip, gamma_k)


def merge_indicator(g_list: Sequence[FpFunction], gamma: int, ip: InnerProduct) -> FpFunction:
    """F(x) = -sum_k prod_{j != k} (<gamma, x> - j) g_k(x)."""
    ctx = ip.ctx
    p = ctx.p
    if len(g_list) != p:
        raise ValueError(f"need exactly {p} functions")
    s = ip.pair_all(gamma)
    total = np.zeros(ctx.q, dtype=np.int64)
    for k, gk in enumerate(g_list):
        prod = np.ones(ctx.q, dtype=np.int64)
        for j in range(p):
            if j != k:
                prod = prod * (s - j) % p
        total += prod * gk.values
    return FpFunction(ctx, -total)


def merge_branch(g_list: Sequence[FpFunction], gamma: int, ip: InnerProduct) -> FpFunction:
    """F(x) = g_c(x) with c = <gamma, x>."""
    ctx = ip.ctx
    if len(g_list) != ctx.p:
        raise ValueError(f"need exactly {ctx.p} functions")
    s = ip.pair_all(gamma)
    stacked = np.stack([g.values for g in g_list])
    return FpFunction(ctx, stacked[s, np.arange(ctx.q)])


# -- ingredient families ------------------------------------------------------

def monomial_is_2plateaued(p: int, n: int, r: int, c: int, literal: bool = False) -> bool:
    """Predicted 2-plateauedness of x -> Tr(g^c x^(p^r + 1)).

    For odd p the exponent condition y(p^2-1) + c(p^r-1) = (p^n-1)/2 is read
    modulo p^n - 1.

    When 2r = 0 mod n, x^(p^r+1) is the norm to the half field, so f is
    Tr_half((a + a^(p^r)) N(x)): bent, or zero when a + a^(p^r) = 0.  It is
    then 2-plateaued only for n = 2 and a + a^(p^r) = 0.  ``literal=True``
    skips this case and applies the dichotomy as usually stated, which is
    wrong there (e.g. p = 2, n = 6, r = 3).
    """
    N = p**n - 1
    if not literal and (2 * r) % n == 0:
        if n != 2:
            return False
        # a + a^(p^r) = 0  <=>  a^(p^r - 1) = -1
        half = 0 if p == 2 else N // 2
        return (c * (p ** (r % n) - 1) - half) % N == 0
    if p == 2:
        if n % 4 == 0:
            return r % 2 == 1 and c % 3 == 0
        if n % 4 == 2:
            return r % 2 == 0 or c % 3 == 0
        return False
    if n % 2 or r % 2 == 0:
        return False
    return (N // 2 - c * (p**r - 1)) % gcd(p * p - 1, N) == 0


def monomial_function(ctx: FieldCtx, r: int, c: int) -> FpFunction:
    return trace_form(ctx, [(ctx.elem(c), ctx.p ** (r % ctx.n) + 1)])


def binomial_function(ctx: FieldCtx, kappa: int) -> FpFunction:
    """x -> Tr((p+1)/2 x^2 + x^(p^r + 1)) with r = 2^kappa."""
    p, n = ctx.p, ctx.n
    if p == 2:
        raise ValueError("the binomial family needs odd p")
    r = 2**kappa
    return trace_form(ctx, [((p + 1) // 2 % p, 2), (1, p ** (r % n) + 1)])


def binomial_kernel(ctx: FieldCtx, kappa: int) -> Subspace:
    """Kernel of x^(p^r) + x^(p^2r) + x (its linear space)."""
    r = 2**kappa
    return kernel_of_linearized(ctx, [(1, r % ctx.n), (1, (2 * r) % ctx.n), (1, 0)])


@dataclass
class BinomialBuild:
    function: FpFunction
    predicts_dim2: bool
    kernel: Subspace


def binomial_build(ctx: FieldCtx, kappa: int) -> BinomialBuild:
    if ctx.n % 3:
        raise BadN(f"n = {ctx.n} is not divisible by 3")
    predicted = kappa == 0 or (kappa >= 1 and ctx.n % 2 == 1)
    return BinomialBuild(binomial_function(ctx, kappa), predicted, binomial_kernel(ctx, kappa))


@dataclass
class NwrParams:
    kappa: int
    a: list[int]
    c: list[int] = field(default_factory=list)
    Delta: int | None = None

    @classmethod
    def derive(cls, ctx: FieldCtx, kappa: int, a: Sequence[int], beta2: int, t: int) -> "NwrParams":
        """c_k = t^-1 [(1 - a_k) Delta + k] with Delta = f(beta2) for the binomial f."""
        p = ctx.p
        Delta = binomial_function(ctx, kappa)(beta2)
        t_inv = pow(t, -1, p)
        c = [0] + [t_inv * ((1 - a[k]) * Delta + k) % p for k in range(1, p)]
        return cls(kappa, [int(x) % p for x in a], c, Delta)


@dataclass
class NwrResult:
    function: FpFunction
    params: NwrParams
    has_nonsquare: bool
    gamma_merge: int


def nwr_build(
    ctx: FieldCtx,
    params: NwrParams,
    beta1: int,
    beta2: int,
    delta: int,
    Gamma: int,
) -> NwrResult:
    """Binomial merge F(x) = a_k f(x) + c_k <Gamma, x> on the branch k = <gamma, x>.

    The branch index must be <gamma, x> with gamma = ell^-1 beta1.  Indexing
    by <Gamma, x> instead never gives a bent function (the c_k term then
    vanishes on every branch hyperplane).
    """
    p, n = ctx.p, ctx.n
    if p == 2:
        raise PreconditionViolated("p must be odd")
    if n % 2 == 0 or n % 3:
        raise PreconditionViolated(f"n = {n} must be odd and divisible by 3")
    if params.kappa < 1:
        raise PreconditionViolated("kappa must be >= 1")
    a = params.a
    if len(a) != p or a[0] % p != 1 or any(x % p == 0 for x in a):
        raise PreconditionViolated("a must have p nonzero entries with a_0 = 1")
    kernel = kernel_of_linearized(ctx, [(1, 2 % n), (1, 1 % n), (1, 0)])
    if not (kernel.contains(beta1) and kernel.contains(beta2) and _independent(ctx, beta1, beta2)):
        raise PreconditionViolated("beta1, beta2 must be independent roots of x^(p^2) + x^p + x")
    ip = InnerProduct(ctx, delta)
    ell = ip(beta1, beta1)
    if ell == 0:
        raise PreconditionViolated("Tr(delta*beta1^2) = 0")
    if ip(beta1, beta2) != 0:
        raise PreconditionViolated("Tr(delta*beta1*beta2) != 0")
    t = ip(Gamma, beta2)
    if t == 0:
        raise PreconditionViolated("Tr(delta*Gamma*beta2) = 0")
    if not params.c:
        params = NwrParams.derive(ctx, params.kappa, a, beta2, t)
    expected = NwrParams.derive(ctx, params.kappa, a, beta2, t)
    if list(params.c) != expected.c:
        raise PreconditionViolated(f"c must be {expected.c} for these a, t, Delta")
    f = binomial_function(ctx, params.kappa)
    gamma = ctx.scale(pow(ell, -1, p), beta1)
    sel = ip.pair_all(gamma)
    lin = ip.pair_all(Gamma)
    F = FpFunction(ctx, np.array(a)[sel] * f.values + np.array(params.c)[sel] * lin)
    nonsquare = any(not is_square_mod_p(p, x) for x in a[1:])
    return NwrResult(F, params, nonsquare, gamma)


def nwr_default_setup(ctx: FieldCtx) -> tuple[int, int, int, int]:
    """(beta1, beta2, delta, Gamma) chosen by the deterministic scans."""
    n = ctx.n
    kernel = kernel_of_linearized(ctx, [(1, 2 % n), (1, 1 % n), (1, 0)])
    if kernel.dim != 2:
        raise PreconditionViolated(f"kernel has dimension {kernel.dim}, expected 2")
    b1, b2 = kernel.basis
    for x, y in ((b1, b2), (b2, b1)):
        try:
            ip = find_delta(ctx, x, y, RELAXED)
        except NotFound:
            continue
        return x, y, ip.delta, _first_gamma(ip, x, y)
    raise NotFound("no admissible delta for the kernel basis")


# -- pipeline -----------------------------------------------------------------

@dataclass
class PipelineResult:
    recipe: ConstructionRecipe
    F: FpFunction
    g_list: list[FpFunction]
    classification: BentClassification
    checks: dict
    gammas_in_perp: bool = True

    def report(self) -> dict:
        return {
            "recipe": self.recipe.to_json(),
            "classification": self.classification.to_json(),
            "multiset": [list(t) for t in self.classification.spectrum.multiset()],
            "checks": self.checks,
            "gammas_in_perp": self.gammas_in_perp,
        }


def run_pipeline(
    fks: Sequence[FpFunction],
    beta1: int,
    beta2: int,
    mode: str = STRICT,
    delta: int | None = None,
    gammas: Sequence[int] | None = None,
    Gamma: int | None = None,
) -> PipelineResult:
    """find delta -> choose gamma_k -> build g_k -> merge, then re-verify everything.

    ``delta``, ``gammas`` and ``Gamma`` override the deterministic choices
    (used to pin a published recipe); overrides are validated, not trusted.
    """
    if not fks:
        raise InvalidRecipe("no ingredient functions")
    ctx = fks[0].ctx
    p = ctx.p
    if len(fks) != p:
        raise InvalidRecipe(f"need exactly p = {p} ingredient functions, got {len(fks)}")
    if not _independent(ctx, beta1, beta2):
        raise InvalidRecipe("beta1 and beta2 must be linearly independent")
    target = Subspace.span(ctx, [beta1, beta2])
    for k, fk in enumerate(fks):
        if fk.ctx != ctx:
            raise InvalidRecipe("ingredients live in different fields")
        if fk(0) != 0:
            raise InvalidRecipe(f"f_{k}(0) != 0")
        if not is_partially_bent(fk):
            raise IngredientNotPartiallyBent(f"f_{k} is not partially bent")
        space = linear_space(fk).space
        if space != target:
            raise WrongLinearSpace(f"f_{k} has linear space of dim {space.dim}, not <beta1, beta2>")

    if delta is None:
        ip = find_delta(ctx, beta1, beta2, mode)
    else:
        ip = InnerProduct(ctx, delta)
        bad = _delta_conditions(ip, beta1, beta2, mode)
        if bad:
            raise InvalidRecipe(f"delta rejected: {bad}")
    ell = ip(beta1, beta1)

    if gammas is None:
        gammas, Gamma, t = select_gammas(ip, fks, beta1, beta2, mode, Gamma)
    else:
        gammas = list(gammas)
        if len(gammas) != p:
            raise InvalidRecipe(f"need {p} gammas")
        # pinned gammas need not lie in <beta1>-perp: only their pairing
        # with beta2 matters, and the merge is re-verified below
        check_gammas(ip, fks, beta1, beta2, gammas, require_perp=False)
        t = ip(Gamma, beta2) if Gamma is not None else ip(beta2, beta2)

    g_list = [build_gk(fk, gk, ip) for fk, gk in zip(fks, gammas)]
    gamma = ctx.scale(pow(ell, -1, p), beta1)
    F = merge_branch(g_list, gamma, ip)

    checks = verify_merge(ip, g_list, beta1, F, gamma)
    cl = classify(F, ip)
    checks["bent"] = cl.is_bent
    if not all(checks.values()):
        failed = sorted(k for k, v in checks.items() if not v)
        raise MergedNotBent(f"verification failed: {failed}")
    recipe = ConstructionRecipe(ctx, list(fks), beta1, beta2, ip.delta, ell, t, list(gammas), gamma, mode, Gamma)
    in_perp = all(ip(g, beta1) == 0 for g in gammas)
    return PipelineResult(recipe, F, g_list, cl, checks, in_perp)


def verify_merge(ip: InnerProduct, g_list, beta1: int, F: FpFunction, gamma: int) -> dict:
    """Near-bent restrictions to <beta1>-perp with disjoint supports covering it."""
    ctx = ip.ctx
    V = orthogonal_complement(ctx, ip, Subspace.span(ctx, [beta1]))
    spectra = [walsh_on_subspace(g, V, ip) for g in g_list]
    near_bent = all(plateau_order_of_spectrum(s) == 1 for s in spectra)
    supports = [set(s.support().tolist()) for s in spectra]
    sizes_ok = all(len(S) == ctx.p ** (ctx.n - 2) for S in supports)
    union = set().union(*supports)
    disjoint = sum(len(S) for S in supports) == len(union) and len(union) == V.size
    formula = F == merge_indicator(g_list, gamma, ip)
    return {
        "near_bent_restrictions": near_bent,
        "support_sizes": sizes_ok,
        "supports_partition": disjoint,
        "indicator_matches_branch": formula,
    }
