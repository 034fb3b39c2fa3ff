"""Exact Fourier transforms f^(b) = sum_x eps^(f(x) - <b,x>) with values in Z[eps_p]."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .cyclotomic import (
    CycInt,
    NotBentCoefficient,
    norm_arrays,
    normalize_coeff,
    rational_part,
    reduce_group_ring,
    render_value,
)
from .finite_field import (
    FieldCtx,
    InnerProduct,
    Subspace,
    check_domain,
    elem_to_json,
    inverse_mod_p,
    rank_mod_p,
)
from .functions import FpFunction

NAIVE_LIMIT = 4096
SUBSPACE_LIMIT = 2**15
_CHUNK_CELLS = 1 << 21


@dataclass(eq=False)
class WalshSpectrum:
    """Spectrum entries ``values[i]`` (reduced Z[eps] coefficients) at ``points[i]``.

    ``domain`` is None for the whole field, where ``points[i] == i``.  ``ip``
    is None when a subspace transform used the coordinate dot product of the
    subspace basis.
    """

    ctx: FieldCtx
    ip: InnerProduct | None
    points: np.ndarray
    values: np.ndarray
    domain: Subspace | None = None

    def __len__(self):
        return len(self.points)

    @property
    def group_size(self) -> int:
        return len(self.points)

    def index_of(self, b: int) -> int:
        if self.domain is None:
            return int(b)
        hits = np.nonzero(self.points == b)[0]
        if hits.size == 0:
            raise KeyError(f"{b} is not in the transform domain")
        return int(hits[0])

    def entry(self, b: int) -> CycInt:
        return CycInt.from_array(self.ctx.p, self.values[self.index_of(b)])

    def entries(self):
        for i, b in enumerate(self.points):
            yield int(b), CycInt.from_array(self.ctx.p, self.values[i])

    def norms(self) -> np.ndarray:
        """f^(b) * conj(f^(b)) per entry, reduced; real but not always rational."""
        if self.ctx.p == 2:
            return self.values**2
        return norm_arrays(self.values)

    def norms_int(self) -> np.ndarray | None:
        """|f^(b)|^2 as integers, or None if some entry is irrational."""
        return rational_part(self.norms())

    def support(self) -> np.ndarray:
        return self.points[np.any(self.values != 0, axis=1)]

    def parseval_ok(self) -> bool:
        total = self.norms().sum(axis=0)
        return int(total[0]) == self.group_size**2 and not np.any(total[1:])

    def multiset(self) -> list[tuple[str, int]]:
        return spectrum_multiset(self)

    def to_json(self) -> dict:
        p, n = self.ctx.p, self.ctx.n
        m = _render_exponent(self)
        entries = []
        for b, w in self.entries():
            entries.append({"b": elem_to_json(self.ctx, b), "value": w.to_json(), "render": render_value(w, p, m)})
        return {
            "delta": None if self.ip is None else elem_to_json(self.ctx, self.ip.delta),
            "entries": entries,
            "multiset": [list(t) for t in spectrum_multiset(self)],
        }


def _render_exponent(s: WalshSpectrum) -> int:
    # a bent function on a group of size p^m has coefficients of modulus p^(m/2)
    m, size = 0, s.group_size
    while size > 1:
        size //= s.ctx.p
        m += 1
    return m


def _counts_to_values(counts: np.ndarray) -> np.ndarray:
    return reduce_group_ring(counts)


def walsh_naive(f: FpFunction, ip: InnerProduct) -> WalshSpectrum:
    """Direct double sum; the oracle for :func:`walsh_fast`."""
    ctx = f.ctx
    q, p = ctx.q, ctx.p
    check_domain(q, NAIVE_LIMIT, "naive transform")
    xs = ctx.elements()
    counts = np.zeros((q, p), dtype=np.int64)
    chunk = max(1, _CHUNK_CELLS // q)
    dxs = ctx.v_mul(ip.delta, xs)
    for lo in range(0, q, chunk):
        bs = xs[lo : lo + chunk]
        pair = ctx.v_trace(ctx.v_mul(bs[:, None], dxs[None, :]))
        d = (f.values[None, :] - pair) % p
        for j in range(p):
            counts[lo : lo + chunk, j] = (d == j).sum(axis=1)
    return WalshSpectrum(ctx, ip, xs, _counts_to_values(counts))


def dual_basis(ip: InnerProduct) -> np.ndarray:
    """Coordinates (rows) of D_i with <D_i, g^j> = [i == j]."""
    return inverse_mod_p(ip.matrix, ip.ctx.p)


def walsh_fast(f: FpFunction, ip: InnerProduct) -> WalshSpectrum:
    """n passes of a size-p butterfly over the coordinate cube.

    Entries are kept in the group ring Z[C_p] (multiplying by eps^k is a
    cyclic shift) and reduced modulo Phi_p at the end.
    """
    ctx = f.ctx
    q, p, n = ctx.q, ctx.p, ctx.n
    ctx._need_tables()
    A = np.zeros((q, p), dtype=np.int64)
    A[np.arange(q), f.values] = 1
    # element int x = sum c_i p^i, so in C order axis n-1-i carries c_i
    A = A.reshape((p,) * n + (p,))
    for axis in range(n):
        moved = np.moveaxis(A, axis, 0)
        out = np.zeros_like(moved)
        for d in range(p):
            for c in range(p):
                out[d] += np.roll(moved[c], -(d * c) % p, axis=-1)
        A = np.moveaxis(out, 0, axis)
    flat = A.reshape(q, p)
    # flat[k] holds the coefficient at dual coordinates digits(k); map to b
    D = dual_basis(ip)
    b_of_k = ctx.to_ints(ctx.coord_array @ D)
    counts = np.empty_like(flat)
    counts[b_of_k] = flat
    return WalshSpectrum(ctx, ip, np.arange(q, dtype=np.int64), _counts_to_values(counts))


def walsh(f: FpFunction, ip: InnerProduct) -> WalshSpectrum:
    return walsh_fast(f, ip)


def _combo_coords(p: int, d: int) -> np.ndarray:
    k = np.arange(p**d, dtype=np.int64)
    return (k[:, None] // (p ** np.arange(d, dtype=np.int64))[None, :]) % p


def walsh_on_subspace(f: FpFunction, W: Subspace, ip: InnerProduct | None = None) -> WalshSpectrum:
    """Transform of f restricted to W, for b in W.

    With ``ip=None`` the pairing is the dot product of coordinates with
    respect to W's basis, which is always non-degenerate.
    """
    ctx = f.ctx
    p = ctx.p
    check_domain(ctx.q, SUBSPACE_LIMIT, "subspace transform")
    pts = W.elements()
    m = len(pts)
    if ip is not None:
        gram = ip.gram(W.basis)
        if rank_mod_p(gram, p) < W.dim:
            warnings.warn("inner product is degenerate on the subspace", stacklevel=2)
        dpts = ctx.v_mul(ip.delta, pts)
    else:
        A = _combo_coords(p, W.dim)
    fv = f.values[pts]
    counts = np.zeros((m, p), dtype=np.int64)
    chunk = max(1, _CHUNK_CELLS // max(m, 1))
    for lo in range(0, m, chunk):
        if ip is not None:
            pair = ctx.v_trace(ctx.v_mul(pts[lo : lo + chunk, None], dpts[None, :]))
        else:
            pair = (A[lo : lo + chunk] @ A.T) % p
        d = (fv[None, :] - pair) % p
        for j in range(p):
            counts[lo : lo + chunk, j] = (d == j).sum(axis=1)
    return WalshSpectrum(ctx, ip, pts, _counts_to_values(counts), domain=W)


def _sort_key(w: CycInt, text: str, p: int, m: int):
    if w.is_zero():
        return (2, 0, 0, ())
    sign = -1 if text.startswith("-") else 1
    try:
        t = normalize_coeff(w, p, m).eps_exp if p > 2 else 0
    except NotBentCoefficient:
        t = p
    return (0 if sign < 0 else 1, t, 0, w.coeffs)


def spectrum_multiset(s: WalshSpectrum) -> list[tuple[str, int]]:
    """Sorted (rendered value, multiplicity) pairs; zero goes last."""
    p = s.ctx.p
    m = _render_exponent(s)
    uniq, counts = np.unique(s.values, axis=0, return_counts=True)
    items = []
    for row, cnt in zip(uniq, counts):
        w = CycInt.from_array(p, row)
        text = render_value(w, p, m)
        items.append((_sort_key(w, text, p, m), text, int(cnt)))
    items.sort()
    return [(text, cnt) for _, text, cnt in items]


def multiset_dict(s: WalshSpectrum) -> dict[str, int]:
    return dict(spectrum_multiset(s))
