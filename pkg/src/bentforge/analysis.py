"""Derivatives, linear structures, plateau order and bent/regularity classification."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .cyclotomic import UNIT_NAMES, global_unit, normalize_array
from .finite_field import FieldCtx, InnerProduct, Subspace, rank_mod_p
from .functions import FpFunction
from .walsh import WalshSpectrum, walsh_fast, walsh_on_subspace

EXHAUSTIVE_LIMIT = 2**14
_CHUNK_CELLS = 1 << 21


def derivative(f: FpFunction, a: int) -> FpFunction:
    """x -> f(x + a) - f(x)."""
    ctx = f.ctx
    xs = ctx.elements()
    return FpFunction(ctx, f.values[ctx.v_add(xs, a)] - f.values)


def is_balanced(h: FpFunction) -> bool:
    p = h.ctx.p
    return bool(np.all(np.bincount(h.values, minlength=p) == h.ctx.q // p))


def _derivative_rows(f: FpFunction, a_chunk: np.ndarray) -> np.ndarray:
    ctx = f.ctx
    xs = ctx.elements()
    shifted = ctx.v_add(a_chunk[:, None], xs[None, :])
    return (f.values[shifted] - f.values[None, :]) % ctx.p


def _iter_derivatives(f: FpFunction):
    q = f.ctx.q
    chunk = max(1, _CHUNK_CELLS // q)
    for lo in range(0, q, chunk):
        a = np.arange(lo, min(lo + chunk, q), dtype=np.int64)
        yield a, _derivative_rows(f, a)


def _constant_rows(D: np.ndarray) -> np.ndarray:
    return np.all(D == D[:, :1], axis=1)


def _balanced_rows(D: np.ndarray, p: int) -> np.ndarray:
    target = D.shape[1] // p
    return np.all(np.stack([(D == j).sum(axis=1) for j in range(p)], axis=1) == target, axis=1)


def linear_structures_exhaustive(f: FpFunction) -> np.ndarray:
    """All a with D_a f constant, by scanning every a."""
    found = [a[_constant_rows(D)] for a, D in _iter_derivatives(f)]
    return np.concatenate(found)


def linear_structures_filtered(f: FpFunction, samples: int = 40, seed: int = 0) -> np.ndarray:
    """Same set as the exhaustive scan, found by sample filtering plus exact verification.

    A linear structure a satisfies h(x + a) - h(a) = h(x) for every x (h = f - f(0)),
    so it survives every sampled x; survivors are then checked exactly.
    """
    ctx = f.ctx
    h = f.normalized().values
    xs = ctx.elements()
    rng = np.random.default_rng(seed)
    probe = np.unique(np.concatenate([ctx.pw, rng.integers(1, ctx.q, size=samples)]))
    alive = np.ones(ctx.q, dtype=bool)
    for x in probe:
        alive &= (h[ctx.v_add(xs, int(x))] - h) % ctx.p == h[x]
    cand = xs[alive]
    span = Subspace.span(ctx, cand)
    basis = np.array(span.basis, dtype=np.int64)
    if basis.size and _constant_rows(_derivative_rows(f, basis)).all() and span.size == len(cand):
        return cand
    keep = [a for a in cand if _constant_rows(_derivative_rows(f, np.array([a])))[0]]
    return np.array(keep, dtype=np.int64)


@dataclass
class LinearSpaceReport:
    space: Subspace
    restricted_linear: bool

    @property
    def dim(self) -> int:
        return self.space.dim


def linear_space(f: FpFunction, exhaustive: bool | None = None) -> LinearSpaceReport:
    """The subspace of linear structures of f (computed on f - f(0))."""
    ctx = f.ctx
    h = f.normalized()
    if exhaustive is None:
        exhaustive = ctx.q <= EXHAUSTIVE_LIMIT
    structs = linear_structures_exhaustive(h) if exhaustive else linear_structures_filtered(h)
    space = Subspace.span(ctx, structs)
    if space.size != len(structs):
        raise AssertionError("linear structures do not form a subspace")
    # h is additive on the space: h(sum a_i b_i) = sum a_i h(b_i)
    pts = space.elements()
    if space.dim:
        A = (np.arange(space.size)[:, None] // (ctx.p ** np.arange(space.dim))[None, :]) % ctx.p
        predicted = (A @ h.values[np.array(space.basis)]) % ctx.p
        restricted_linear = bool(np.array_equal(predicted, h.values[pts]))
    else:
        restricted_linear = True
    return LinearSpaceReport(space, restricted_linear)


def is_partially_bent(f: FpFunction) -> bool:
    """Every derivative is balanced or constant."""
    p = f.ctx.p
    for _, D in _iter_derivatives(f):
        if not np.all(_constant_rows(D) | _balanced_rows(D, p)):
            return False
    return True


def is_bent_by_derivatives(f: FpFunction) -> bool:
    p = f.ctx.p
    for a, D in _iter_derivatives(f):
        ok = _balanced_rows(D, p) | (a == 0)
        if not ok.all():
            return False
    return True


def _log_p(v: int, p: int) -> int | None:
    m = 0
    while v > 1 and v % p == 0:
        v //= p
        m += 1
    return m if v == 1 else None


def plateau_order_of_spectrum(s: WalshSpectrum) -> int | None:
    """s with |f^(b)|^2 in {0, p^(m+s)} where p^m is the group size, else None."""
    p = s.ctx.p
    m = _log_p(s.group_size, p)
    norms = s.norms_int()
    if norms is None:
        return None
    nz = np.unique(norms[norms != 0])
    if len(nz) != 1:
        return None
    e = _log_p(int(nz[0]), p)
    if e is None or e < m or e > 2 * m:
        return None
    return e - m


def plateau_order(f: FpFunction, ip: InnerProduct | None = None) -> int | None:
    ip = ip or InnerProduct(f.ctx, 1)
    return plateau_order_of_spectrum(walsh_fast(f, ip))


class Kind(str, Enum):
    NOT_BENT = "NotBent"
    REGULAR = "Regular"
    WEAKLY_REGULAR = "WeaklyRegular"
    NOT_WEAKLY_REGULAR = "NotWeaklyRegular"


@dataclass
class BentClassification:
    """Outcome of :func:`classify`.

    ``sign_profile`` holds the sign in front of p^(n/2) (or of i*p^(n/2) when
    n is odd and p = 3 mod 4) for each b; ``dual`` holds f*(b).
    """

    kind: Kind
    unit: str | None
    dual: FpFunction | None
    sign_profile: np.ndarray | None
    plateau_s: int | None
    spectrum: WalshSpectrum = field(repr=False)

    @property
    def is_bent(self) -> bool:
        return self.kind != Kind.NOT_BENT

    def sign_counts(self) -> dict[str, int]:
        if self.sign_profile is None:
            return {}
        return {
            "+1": int((self.sign_profile == 1).sum()),
            "-1": int((self.sign_profile == -1).sum()),
        }

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "unit": self.unit,
            "sign_counts": self.sign_counts(),
            "plateau_s": self.plateau_s,
        }


def classify_spectrum(s: WalshSpectrum) -> BentClassification:
    ctx = s.ctx
    p, n = ctx.p, ctx.n
    plateau = plateau_order_of_spectrum(s)
    ok, sigma, t = normalize_array(s.values, p, n)
    if not ok.all():
        return BentClassification(Kind.NOT_BENT, None, None, None, plateau, s)
    if p == 2:
        # f^(b) = 2^(n/2) (-1)^(f*(b)): always regular
        dual = FpFunction(ctx, (sigma < 0).astype(np.int64))
        return BentClassification(Kind.REGULAR, "+1", dual, np.ones(len(sigma), dtype=np.int64), plateau, s)
    u = global_unit(p, n)
    # the displayed sign of the per-point unit sigma * i^u  (i^u in {1, i} -> +)
    sign_profile = sigma * (1 if u in (0, 1) else -1)
    dual = FpFunction(ctx, t)
    if np.all(sigma == sigma[0]):
        zeta = (u + (0 if sigma[0] == 1 else 2)) % 4
        kind = Kind.REGULAR if zeta == 0 else Kind.WEAKLY_REGULAR
        return BentClassification(kind, UNIT_NAMES[zeta], dual, sign_profile, plateau, s)
    return BentClassification(Kind.NOT_WEAKLY_REGULAR, None, dual, sign_profile, plateau, s)


def classify(f: FpFunction, ip: InnerProduct | None = None) -> BentClassification:
    ip = ip or InnerProduct(f.ctx, 1)
    return classify_spectrum(walsh_fast(f, ip))


# -- restrictions -------------------------------------------------------------

def complement(space: Subspace) -> Subspace:
    """A complement spanned by polynomial-basis vectors (first that extend the basis)."""
    ctx = space.ctx
    rows = [ctx.coords(b) for b in space.basis]
    extra = []
    for i in range(ctx.n):
        e = [0] * ctx.n
        e[i] = 1
        if rank_mod_p(np.array(rows + [e]), ctx.p) > len(rows):
            rows.append(e)
            extra.append(int(ctx.pw[i]))
    return Subspace.span(ctx, extra)


def restriction_is_bent(f: FpFunction, W: Subspace, ip: InnerProduct | None = None) -> bool:
    s = walsh_on_subspace(f, W, ip)
    norms = s.norms_int()
    return norms is not None and bool(np.all(norms == W.size))


def is_linear_structure_on(f: FpFunction, a: int, W: Subspace) -> bool:
    """D_a f is constant on W (a in W)."""
    ctx = f.ctx
    pts = W.elements()
    d = (f.values[ctx.v_add(pts, a)] - f.values[pts]) % ctx.p
    return bool(np.all(d == d[0]))


def support_by_linear_space(f: FpFunction, ip: InnerProduct, space: Subspace) -> np.ndarray:
    """b with h(z) - <b, z> = 0 on the whole space (h = f - f(0))."""
    ctx = f.ctx
    h = f.normalized().values
    xs = ctx.elements()
    ok = np.ones(ctx.q, dtype=bool)
    for z in space.basis:
        ok &= (h[z] - ip.pair_all(z, xs)) % ctx.p == 0
    return xs[ok]
