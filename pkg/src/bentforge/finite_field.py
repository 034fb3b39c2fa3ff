"""Arithmetic in GF(p) and GF(p^n), trace forms, and F_p-linear algebra.

A field element is a plain ``int``: the element with coordinates
``(c_0, ..., c_{n-1})`` in the polynomial basis ``1, g, ..., g^{n-1}`` is
stored as ``sum(c_i * p**i)``.  Zero is ``0`` and one is ``1``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

TABLE_LIMIT = 2**20


class FieldError(ValueError):
    pass


class NotPrime(FieldError):
    pass


class NotIrreducible(FieldError):
    pass


class NotPrimitive(FieldError):
    pass


class DomainTooLarge(ValueError):
    pass


def domain_limit(default: int) -> int:
    """Size guard for exhaustive computations; ``BENTFORGE_MAX_DOMAIN`` overrides it."""
    env = os.environ.get("BENTFORGE_MAX_DOMAIN")
    return int(env) if env else default


def check_domain(size: int, default: int, what: str = "domain") -> None:
    limit = domain_limit(default)
    if size > limit:
        raise DomainTooLarge(f"{what} of size {size} exceeds guard {limit}")


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


def prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out.append(m)
    return out


# ---------------------------------------------------------------------------
# Polynomials over F_p: coefficient lists, constant term first, no trailing 0s.

def _trim(a: Sequence[int]) -> list[int]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_sub(a, b, p):
    m = max(len(a), len(b))
    a = list(a) + [0] * (m - len(a))
    b = list(b) + [0] * (m - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def poly_divmod(a, b, p):
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b):
        shift = len(r) - len(b)
        c = r[-1] * inv_lead % p
        q[shift] = c
        for i, y in enumerate(b):
            r[i + shift] = (r[i + shift] - c * y) % p
        r = _trim(r)
    return _trim(q), r


def poly_monic(a, p):
    a = _trim([x % p for x in a])
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def poly_gcd_mod_p(p: int, A: Sequence[int], B: Sequence[int]) -> list[int]:
    """Monic gcd of two polynomials over F_p (ascending coefficient lists)."""
    a = _trim([x % p for x in A])
    b = _trim([x % p for x in B])
    if not a and not b:
        raise ValueError("gcd(0, 0) is undefined")
    while b:
        a, b = b, poly_divmod(a, b, p)[1]
    return poly_monic(a, p)


def poly_powmod(base, e: int, mod, p):
    result = [1]
    base = poly_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = poly_divmod(poly_mul(result, base, p), mod, p)[1]
        base = poly_divmod(poly_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _is_irreducible(f, p):
    # Rabin: x^(p^n) = x mod f, and gcd(x^(p^(n/r)) - x, f) = 1 for primes r | n.
    n = len(f) - 1
    x = [0, 1]
    if poly_sub(poly_powmod(x, p**n, f, p), x, p):
        return False
    for r in prime_factors(n):
        h = poly_sub(poly_powmod(x, p ** (n // r), f, p), x, p)
        if len(poly_gcd_mod_p(p, h, f)) != 1:
            return False
    return True


def _is_primitive(f, p):
    n = len(f) - 1
    order = p**n - 1
    return all(poly_powmod([0, 1], order // r, f, p) != [1] for r in prime_factors(order))


# ---------------------------------------------------------------------------
# Linear algebra mod p on small integer matrices.

def rref_mod_p(M, p: int) -> tuple[np.ndarray, list[int]]:
    R = np.array(M, dtype=np.int64) % p
    if R.ndim != 2:
        R = R.reshape(-1, R.shape[-1] if R.size else 0)
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        R[[r, k]] = R[[k, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        for i in range(rows):
            if i != r and R[i, c]:
                R[i] = (R[i] - R[i, c] * R[r]) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank_mod_p(M, p: int) -> int:
    return len(rref_mod_p(M, p)[1])


def nullspace_mod_p(M, p: int) -> np.ndarray:
    """Basis of {v : M v = 0} as rows, itself in reduced echelon form."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    R, pivots = rref_mod_p(M, p)
    free = [c for c in range(cols) if c not in pivots]
    vecs = []
    for fc in free:
        v = np.zeros(cols, dtype=np.int64)
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -R[i, fc] % p
        vecs.append(v)
    if not vecs:
        return np.zeros((0, cols), dtype=np.int64)
    basis, piv = rref_mod_p(np.array(vecs), p)
    return basis[: len(piv)]


def inverse_mod_p(M, p: int) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64) % p
    k = M.shape[0]
    R, pivots = rref_mod_p(np.hstack([M, np.eye(k, dtype=np.int64)]), p)
    if pivots[:k] != list(range(k)):
        raise ValueError("matrix is singular mod p")
    return R[:, k:]


# ---------------------------------------------------------------------------


class FieldCtx:
    """GF(p^n) defined by a primitive polynomial; ``g`` is the class of ``x``.

    Build through :func:`make_field`, which validates the polynomial.  The
    context is immutable after construction.
    """

    def __init__(self, p: int, n: int, prim_poly: Sequence[int]):
        self.p = p
        self.n = n
        self.prim_poly = tuple(int(c) % p for c in prim_poly)
        self.q = p**n
        self.pw = p ** np.arange(n, dtype=np.int64)
        self.gen = p if n > 1 else (-self.prim_poly[0]) % p
        self.has_tables = self.q <= TABLE_LIMIT
        self.exp_table: np.ndarray | None = None
        self.log_table: np.ndarray | None = None
        if self.has_tables:
            self._build_tables()

    def __repr__(self):
        return f"FieldCtx(p={self.p}, n={self.n}, prim_poly={list(self.prim_poly)})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.n, self.prim_poly) == (
            other.p,
            other.n,
            other.prim_poly,
        )

    def __hash__(self):
        return hash((self.p, self.n, self.prim_poly))

    def _build_tables(self):
        p, n = self.p, self.n
        red = [(-c) % p for c in self.prim_poly[:n]]
        rows = np.zeros((self.q - 1, n), dtype=np.int64)
        c = [1] + [0] * (n - 1)
        for k in range(self.q - 1):
            rows[k] = c
            top = c[-1]
            c = [0] + c[:-1]
            if top:
                c = [(ci + top * ri) % p for ci, ri in zip(c, red)]
        self.exp_table = rows @ self.pw
        log = np.full(self.q, -1, dtype=np.int64)
        log[self.exp_table] = np.arange(self.q - 1)
        self.log_table = log
        self.coord_array = (np.arange(self.q)[:, None] // self.pw[None, :]) % p
        basis_tr = np.array([self._trace_slow(int(self.pw[i])) for i in range(n)])
        self.trace_table = (self.coord_array @ basis_tr) % p

    # -- coordinates --------------------------------------------------------
    def coords(self, x: int) -> tuple[int, ...]:
        return tuple((x // self.p**i) % self.p for i in range(self.n))

    def from_coords(self, cs: Iterable[int]) -> int:
        cs = list(cs)
        if len(cs) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(cs)}")
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(cs))

    def from_int(self, c: int) -> int:
        """Embed c in F_p as a field element."""
        return int(c) % self.p

    def is_prime_field_elem(self, x: int) -> bool:
        return 0 <= x < self.p

    # -- scalar arithmetic ----------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p, r, m = self.p, 0, 1
        while a or b:
            r += ((a + b) % p) * m
            a //= p
            b //= p
            m *= p
        return r

    def neg(self, a: int) -> int:
        return self.scale(self.p - 1, a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def scale(self, c: int, a: int) -> int:
        c %= self.p
        if c == 1 or a == 0:
            return a
        p, r, m = self.p, 0, 1
        while a:
            r += (c * (a % p) % p) * m
            a //= p
            m *= p
        return r

    def _mul_schoolbook(self, a: int, b: int) -> int:
        prod = poly_mul(list(self.coords(a)), list(self.coords(b)), self.p)
        rem = poly_divmod(prod, list(self.prim_poly), self.p)[1]
        return self.from_coords(rem + [0] * (self.n - len(rem)))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.has_tables:
            k = (self.log_table[a] + self.log_table[b]) % (self.q - 1)
            return int(self.exp_table[k])
        return self._mul_schoolbook(a, b)

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 0
        if self.has_tables:
            return int(self.exp_table[(int(self.log_table[a]) * e) % (self.q - 1)])
        e %= self.q - 1
        result = 1
        while e:
            if e & 1:
                result = self._mul_schoolbook(result, a)
            a = self._mul_schoolbook(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, -1)

    def elem(self, k: int) -> int:
        """g^k."""
        if self.has_tables:
            return int(self.exp_table[k % (self.q - 1)])
        return self.pow(self.gen, k)

    def log(self, x: int) -> int:
        if x == 0:
            raise ValueError("0 has no discrete logarithm")
        if self.has_tables:
            return int(self.log_table[x])
        k, y = 0, 1
        while y != x:
            y = self._mul_schoolbook(y, self.gen)
            k += 1
        return k

    def frob(self, a: int, i: int = 1) -> int:
        return self.pow(a, self.p ** (i % self.n))

    def _trace_slow(self, x: int) -> int:
        acc, y = 0, x
        for _ in range(self.n):
            acc = self.add(acc, y)
            y = self.pow(y, self.p)
        if acc >= self.p:
            raise AssertionError("trace left the prime field")
        return acc

    def trace(self, x: int) -> int:
        if self.has_tables:
            return int(self.trace_table[x])
        return self._trace_slow(x)

    # -- vectorised helpers (tables required) ---------------------------------
    def _need_tables(self):
        if not self.has_tables:
            raise DomainTooLarge(f"GF({self.p}^{self.n}) has no log tables")

    def elements(self) -> np.ndarray:
        self._need_tables()
        return np.arange(self.q, dtype=np.int64)

    def to_ints(self, coords: np.ndarray) -> np.ndarray:
        return (np.asarray(coords) % self.p) @ self.pw

    def v_add(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self.pw:
            out += ((a // w + b // w) % self.p) * w
        return out

    def v_scale(self, c, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        c = np.asarray(c, dtype=np.int64) % self.p
        out = np.zeros(np.broadcast(a, c).shape, dtype=np.int64)
        for w in self.pw:
            out += ((a // w) % self.p * c % self.p) * w
        return out

    def v_mul(self, a, b) -> np.ndarray:
        self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        k = (self.log_table[a] + self.log_table[b]) % (self.q - 1)
        return np.where((a == 0) | (b == 0), 0, self.exp_table[k])

    def v_pow(self, a, e: int) -> np.ndarray:
        self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        k = (self.log_table[a] * e) % (self.q - 1)
        return np.where(a == 0, 0, self.exp_table[k])

    def v_trace(self, a) -> np.ndarray:
        self._need_tables()
        return self.trace_table[np.asarray(a, dtype=np.int64)]


def make_field(p: int, n: int, prim_poly: Sequence[int]) -> FieldCtx:
    """Validate ``prim_poly`` (monic, degree n, ascending) and build the field."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if n < 1:
        raise FieldError("extension degree must be positive")
    f = [int(c) % p for c in prim_poly]
    if len(f) != n + 1 or f[-1] != 1:
        raise FieldError(f"prim_poly must be monic of degree {n}")
    if p**n > 2**32:
        raise DomainTooLarge("fields larger than 2^32 are not supported")
    if n > 1 and not _is_irreducible(f, p):
        raise NotIrreducible(f"{f} is reducible over F_{p}")
    if not _is_primitive(f, p):
        raise NotPrimitive(f"{f} is irreducible but not primitive over F_{p}")
    return FieldCtx(p, n, f)


# x^6+x^4+x^3+x+1, x^4+2x^3+2, x^3+2x+1
NAMED_FIELDS = {
    "gf2_6": (2, 6, (1, 1, 0, 1, 1, 0, 1)),
    "gf3_4": (3, 4, (2, 0, 0, 2, 1)),
    "gf3_3": (3, 3, (1, 2, 0, 1)),
}


@lru_cache(maxsize=None)
def named_field(name: str) -> FieldCtx:
    try:
        return make_field(*NAMED_FIELDS[name])
    except KeyError:
        raise KeyError(f"unknown field {name!r}; known: {sorted(NAMED_FIELDS)}") from None


@lru_cache(maxsize=None)
def default_field(p: int, n: int) -> FieldCtx:
    """First primitive polynomial of degree n over F_p in lexicographic order."""
    for k in range(p**n):
        tail = [(k // p**i) % p for i in range(n)]
        if tail[0] == 0:
            continue
        try:
            return make_field(p, n, tail + [1])
        except FieldError:
            continue
    raise FieldError(f"no primitive polynomial found for GF({p}^{n})")


def is_square_mod_p(p: int, a: int) -> bool:
    if p == 2:
        raise ValueError("quadratic character is only defined for odd p")
    if a % p == 0:
        raise ValueError("a must be nonzero mod p")
    return pow(a, (p - 1) // 2, p) == 1


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InnerProduct:
    """The form (u, v) -> Tr(delta * u * v)."""

    ctx: FieldCtx
    delta: int = 1

    def __post_init__(self):
        if self.delta == 0:
            raise ValueError("delta must be nonzero")

    def __call__(self, u: int, v: int) -> int:
        c = self.ctx
        return c.trace(c.mul(self.delta, c.mul(u, v)))

    @property
    def matrix(self) -> np.ndarray:
        """Gram matrix on the polynomial basis: M[i, j] = Tr(delta g^(i+j))."""
        c = self.ctx
        return np.array(
            [[self(c.elem(i), c.elem(j)) for j in range(c.n)] for i in range(c.n)],
            dtype=np.int64,
        )

    def gram(self, basis: Sequence[int]) -> np.ndarray:
        return np.array([[self(u, v) for v in basis] for u in basis], dtype=np.int64)

    def pair_all(self, u: int, points=None) -> np.ndarray:
        """<u, x> for every x in ``points`` (default: the whole field)."""
        c = self.ctx
        if points is None:
            points = c.elements()
        return c.v_trace(c.v_mul(c.mul(self.delta, u), points))


def inner(ctx: FieldCtx, ip: InnerProduct, u: int, v: int) -> int:
    return ip(u, v)


def trace(ctx: FieldCtx, x: int) -> int:
    return ctx.trace(x)


@dataclass(frozen=True)
class Subspace:
    """F_p-subspace with a canonical (reduced echelon) basis."""

    ctx: FieldCtx
    basis: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.ctx.p**self.dim

    @classmethod
    def span(cls, ctx: FieldCtx, vectors: Iterable[int]) -> "Subspace":
        vecs = [ctx.coords(int(v)) for v in vectors]
        if not vecs:
            return cls(ctx, ())
        R, piv = rref_mod_p(np.array(vecs), ctx.p)
        return cls(ctx, tuple(int(ctx.to_ints(R[i])) for i in range(len(piv))))

    @classmethod
    def whole(cls, ctx: FieldCtx) -> "Subspace":
        return cls(ctx, tuple(int(w) for w in ctx.pw))

    def coord_matrix(self) -> np.ndarray:
        return np.array([self.ctx.coords(b) for b in self.basis], dtype=np.int64).reshape(
            self.dim, self.ctx.n
        )

    def elements(self) -> np.ndarray:
        """All elements; index k = sum a_i p^i is the combination sum a_i basis[i]."""
        p, d = self.ctx.p, self.dim
        k = np.arange(p**d, dtype=np.int64)
        A = (k[:, None] // (p ** np.arange(d, dtype=np.int64))[None, :]) % p
        return self.ctx.to_ints(A @ self.coord_matrix())

    def contains(self, x: int) -> bool:
        return rank_mod_p(
            np.vstack([self.coord_matrix(), [self.ctx.coords(x)]]), self.ctx.p
        ) == self.dim

    def __contains__(self, x: int) -> bool:
        return self.contains(x)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.ctx, self.basis + other.basis)


def kernel_of_linearized(ctx: FieldCtx, coeffs: Sequence[tuple[int, int]]) -> Subspace:
    """Kernel of x -> sum a_i x^(p^i) for ``coeffs = [(a_i, i), ...]``."""

    def L(x):
        acc = 0
        for a, i in coeffs:
            acc = ctx.add(acc, ctx.mul(a, ctx.frob(x, i)))
        return acc

    cols = [ctx.coords(L(ctx.elem(j))) for j in range(ctx.n)]
    mat = np.array(cols, dtype=np.int64).T
    null = nullspace_mod_p(mat, ctx.p)
    return Subspace(ctx, tuple(int(ctx.to_ints(v)) for v in null))


def linearized_matrix_rank(ctx: FieldCtx, coeffs) -> int:
    cols = []
    for j in range(ctx.n):
        acc = 0
        for a, i in coeffs:
            acc = ctx.add(acc, ctx.mul(a, ctx.frob(ctx.elem(j), i)))
        cols.append(ctx.coords(acc))
    return rank_mod_p(np.array(cols).T, ctx.p)


def orthogonal_complement(ctx: FieldCtx, ip: InnerProduct, span: Subspace) -> Subspace:
    if span.dim == 0:
        return Subspace.whole(ctx)
    rows = (span.coord_matrix() @ ip.matrix) % ctx.p
    null = nullspace_mod_p(rows, ctx.p)
    return Subspace(ctx, tuple(int(ctx.to_ints(v)) for v in null))


# -- JSON ---------------------------------------------------------------------

def field_to_json(ctx: FieldCtx) -> dict:
    return {"p": ctx.p, "n": ctx.n, "prim_poly": list(ctx.prim_poly)}


def field_from_json(obj) -> FieldCtx:
    if isinstance(obj, str):
        return named_field(obj)
    if obj.get("prim_poly") is None:
        return default_field(int(obj["p"]), int(obj["n"]))
    return make_field(int(obj["p"]), int(obj["n"]), obj["prim_poly"])


def elem_to_json(ctx: FieldCtx, x: int) -> dict:
    if x == 0:
        return {"coords": [0] * ctx.n}
    return {"log": ctx.log(x)}


def elem_from_json(ctx: FieldCtx, obj) -> int:
    """Accepts {"log": k}, {"coords": [...]}, or a bare int meaning an F_p element."""
    if isinstance(obj, bool):
        raise ValueError("booleans are not field elements")
    if isinstance(obj, int):
        return ctx.from_int(obj)
    if "log" in obj:
        return ctx.elem(int(obj["log"]))
    if "coords" in obj:
        return ctx.from_coords(obj["coords"])
    raise ValueError(f"cannot parse field element {obj!r}")
