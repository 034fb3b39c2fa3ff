"""Exact arithmetic in Z[eps_p], eps_p = exp(2*pi*i/p).

Elements are kept reduced modulo Phi_p on the basis 1, eps, ..., eps^(p-2).
Array helpers work on stacks of such vectors (last axis of length p-1);
the "group ring" form with p coefficients (eps^0..eps^(p-1)) is used as an
unreduced intermediate and reduced by subtracting the last coefficient.
For p = 2 everything degenerates to plain integers (eps_2 = -1).
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class MixedP(ValueError):
    pass


class NotBentCoefficient(ValueError):
    pass


# -- array helpers ------------------------------------------------------------

def reduce_group_ring(a: np.ndarray) -> np.ndarray:
    """(..., p) coefficients of eps^0..eps^(p-1) -> reduced (..., p-1)."""
    a = np.asarray(a)
    return a[..., :-1] - a[..., -1:]


def lift(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    return np.concatenate([a, np.zeros(a.shape[:-1] + (1,), dtype=a.dtype)], axis=-1)


def mul_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise product of two reduced stacks (broadcasting)."""
    A, B = lift(a), lift(b)
    p = A.shape[-1]
    shape = np.broadcast_shapes(A.shape, B.shape)
    out = np.zeros(shape, dtype=np.result_type(A, B, np.int64))
    for i in range(p):
        # A_i * eps^i * B  ==  A_i * roll(B, i)
        out += A[..., i : i + 1] * np.roll(B, i, axis=-1)
    return reduce_group_ring(out)


def conj_arrays(a: np.ndarray) -> np.ndarray:
    A = lift(a)
    p = A.shape[-1]
    return reduce_group_ring(A[..., (-np.arange(p)) % p])


def norm_arrays(a: np.ndarray) -> np.ndarray:
    """a * conj(a) for each entry (a real element, reduced form)."""
    return mul_arrays(a, conj_arrays(a))


def rational_part(a: np.ndarray) -> np.ndarray | None:
    """The integers an array of reduced elements equals, or None if any is irrational."""
    a = np.asarray(a)
    if a.shape[-1] > 1 and np.any(a[..., 1:] != 0):
        return None
    return a[..., 0]


# -- scalar type --------------------------------------------------------------

@dataclass(frozen=True)
class CycInt:
    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != max(self.p - 1, 1):
            raise ValueError(f"CycInt over p={self.p} needs {self.p - 1} coefficients")

    @classmethod
    def from_int(cls, p: int, c: int) -> "CycInt":
        return cls(p, (int(c),) + (0,) * (max(p - 1, 1) - 1))

    @classmethod
    def eps(cls, p: int, k: int = 1) -> "CycInt":
        g = [0] * p
        g[k % p] = 1
        return cls.from_group_ring(p, g)

    @classmethod
    def from_group_ring(cls, p: int, counts) -> "CycInt":
        red = reduce_group_ring(np.asarray(counts, dtype=object))
        if p == 2:
            return cls(2, (int(red[0]),))
        return cls(p, tuple(int(c) for c in red))

    @classmethod
    def from_array(cls, p: int, arr) -> "CycInt":
        return cls(p, tuple(int(c) for c in arr))

    def _check(self, other):
        if isinstance(other, int):
            return CycInt.from_int(self.p, other)
        if not isinstance(other, CycInt):
            return NotImplemented
        if other.p != self.p:
            raise MixedP(f"cannot combine p={self.p} with p={other.p}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return CycInt(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.p, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if self.p == 2:
            return CycInt(2, (self.coeffs[0] * other.coeffs[0],))
        a = np.array(self.coeffs, dtype=object)
        b = np.array(other.coeffs, dtype=object)
        return CycInt.from_array(self.p, mul_arrays(a, b))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not available in Z[eps]")
        result, base = CycInt.from_int(self.p, 1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> "CycInt":
        if self.p == 2:
            return self
        return CycInt.from_array(self.p, conj_arrays(np.array(self.coeffs, dtype=object)))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def as_int(self) -> int | None:
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def to_complex(self) -> complex:
        if self.p == 2:
            return complex(self.coeffs[0])
        e = cmath.exp(2j * cmath.pi / self.p)
        return sum(c * e**j for j, c in enumerate(self.coeffs))

    def to_json(self) -> dict:
        return {"coeffs": list(self.coeffs), "p": self.p}

    def __repr__(self):
        return f"CycInt(p={self.p}, {list(self.coeffs)})"


def cyc_arith(op: str, a: CycInt, b: CycInt | None = None) -> CycInt:
    """add / sub / mul / neg by name."""
    if op == "neg":
        return -a
    return {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__}[op](b)


def conj(a: CycInt) -> CycInt:
    return a.conj()


@lru_cache(maxsize=None)
def gauss_sum(p: int) -> CycInt:
    """Quadratic Gauss sum sum_{c in F_p} eps^(c^2)."""
    if p == 2:
        raise ValueError("the quadratic Gauss sum is used for odd p only")
    counts = [0] * p
    for c in range(p):
        counts[c * c % p] += 1
    return CycInt.from_group_ring(p, counts)


def global_unit(p: int, n: int) -> int:
    """k with G^n = i^k * p^(n/2); G = sqrt(p) if p = 1 mod 4, i*sqrt(p) if p = 3 mod 4."""
    if p == 2:
        return 0
    return 0 if p % 4 == 1 else n % 4


UNIT_NAMES = {0: "+1", 1: "+i", 2: "-1", 3: "-i"}


@dataclass(frozen=True)
class NormalizedCoeff:
    """w = sign * u(p,n) * p^(n/2) * eps^eps_exp, with u(p,n) from :func:`global_unit`."""

    sign: int
    eps_exp: int
    magnitude_ok: bool = True

    def unit(self, p: int, n: int) -> int:
        """Per-point unit as a power of i."""
        return (global_unit(p, n) + (0 if self.sign == 1 else 2)) % 4


@lru_cache(maxsize=None)
def _conj_gauss_power(p: int, n: int) -> tuple[int, ...]:
    return (gauss_sum(p).conj() ** n).coeffs


@lru_cache(maxsize=None)
def _candidates(p: int, n: int) -> tuple[np.ndarray, list[tuple[int, int]]]:
    rows, labels = [], []
    pn = p**n
    for sign in (1, -1):
        for t in range(p):
            g = [0] * p
            g[t] = sign * pn
            rows.append(reduce_group_ring(np.array(g, dtype=np.int64)))
            labels.append((sign, t))
    return np.array(rows), labels


def normalize_array(w: np.ndarray, p: int, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised normalisation of reduced coefficients ``w`` of shape (m, p-1).

    Returns (ok, sign, t) arrays; ok[i] is False where w[i] does not have
    modulus p^(n/2).
    """
    w = np.asarray(w, dtype=np.int64)
    if p == 2:
        v = w[:, 0]
        ok = (n % 2 == 0) & (np.abs(v) == 2 ** (n // 2))
        return ok, np.where(v < 0, -1, 1), np.zeros(len(v), dtype=np.int64)
    U = mul_arrays(w, np.array(_conj_gauss_power(p, n), dtype=np.int64))
    cands, labels = _candidates(p, n)
    match = np.all(U[:, None, :] == cands[None, :, :], axis=-1)
    ok = match.any(axis=1)
    idx = match.argmax(axis=1)
    lab = np.array(labels)
    return ok, np.where(ok, lab[idx, 0], 0), np.where(ok, lab[idx, 1], 0)


def normalize_coeff(w: CycInt, p: int, n: int) -> NormalizedCoeff:
    """Find sign and t with w * conj(G)^n = sign * p^n * eps^t (exact)."""
    if w.p != p:
        raise MixedP(f"value over p={w.p}, asked to normalise over p={p}")
    ok, sign, t = normalize_array(np.array([w.coeffs], dtype=np.int64), p, n)
    if not ok[0]:
        raise NotBentCoefficient(f"{w} does not have modulus {p}^({n}/2)")
    return NormalizedCoeff(int(sign[0]), int(t[0]))


def _magnitude_text(p: int, m: int) -> str:
    if m % 2 == 0:
        return str(p ** (m // 2))
    return f"{p}^{{{m}/2}}"


def render_value(w: CycInt, p: int, n: int) -> str:
    """Canonical display, e.g. ``-8``, ``-9*eps^1``, ``-3^{3/2}*i*eps^2``.

    Values whose modulus is not p^(n/2) are shown with their own modulus
    p^(m/2) when that is a power of p, else as the raw coefficient vector.
    """
    if w.is_zero():
        return "0"
    if p == 2:
        return str(w.coeffs[0])
    m = n
    try:
        nc = normalize_coeff(w, p, n)
    except NotBentCoefficient:
        nrm = (w * w.conj()).as_int()
        m = _log_exact(nrm, p) if nrm else None
        if m is None:
            return str(list(w.coeffs))
        try:
            nc = normalize_coeff(w, p, m)
        except NotBentCoefficient:
            return str(list(w.coeffs))
    u = nc.unit(p, m)
    sign = "-" if u in (2, 3) else ""
    text = sign + _magnitude_text(p, m)
    if u % 2 == 1:
        text += "*i"
    if nc.eps_exp:
        text += f"*eps^{nc.eps_exp}"
    return text


def _log_exact(v: int, p: int) -> int | None:
    m = 0
    while v > 1 and v % p == 0:
        v //= p
        m += 1
    return m if v == 1 else None
