"""Acceptance criteria 1-8, exact, at their stated runtimes."""
import time

import numpy as np
import pytest

from bentforge.analysis import (
    Kind,
    classify,
    complement,
    is_linear_structure_on,
    linear_space,
    plateau_order_of_spectrum,
    restriction_is_bent,
)
from bentforge.cli import search_binomial, search_monomial, search_nwr
from bentforge.construction import (
    binomial_function,
    monomial_function,
    monomial_is_2plateaued,
)
from bentforge.finite_field import InnerProduct, Subspace, default_field, named_field
from bentforge.fixtures import golden_poly, load_golden, run_example
from bentforge.functions import FpFunction
from bentforge.poly_repr import algebraic_degree, interpolate
from bentforge.walsh import walsh_fast, walsh_naive, walsh_on_subspace


def spectrum_arrays(s):
    """Multiset of exact Z[eps] coefficient vectors."""
    rows, counts = np.unique(s.values, axis=0, return_counts=True)
    return {tuple(int(v) for v in r): int(c) for r, c in zip(rows, counts)}


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def report(n, ok, detail=""):
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())


# -- 1 ------------------------------------------------------------------------

@pytest.mark.criterion(1)
def test_criterion1_example1():
    def go():
        r = run_example("ex1")
        return r, interpolate(r.F)

    (r, P), dt = timed(go)
    cl = r.classification
    golden = load_golden("ex1")
    want_poly = golden_poly(r.F.ctx, golden)
    ok = (
        spectrum_arrays(cl.spectrum) == {(-8,): 28, (8,): 36}
        and cl.kind == Kind.REGULAR
        and algebraic_degree(P) == 3
        and P.coeffs == want_poly.coeffs
        and dt < 1.0
    )
    report(1, ok, f"({len(P)} terms, {dt:.3f} s)")
    assert spectrum_arrays(cl.spectrum) == {(-8,): 28, (8,): 36}
    assert [list(t) for t in cl.spectrum.multiset()] == golden["multiset"]
    assert cl.kind == Kind.REGULAR
    assert algebraic_degree(P) == 3
    assert P.coeffs == want_poly.coeffs
    assert dt < 1.0


# -- 2 ------------------------------------------------------------------------

@pytest.mark.criterion(2)
def test_criterion2_example2():
    r, dt = timed(lambda: run_example("ex2"))
    cl = r.classification
    # -9, -9 eps, -9 eps^2 = 9 + 9 eps on the basis (1, eps)
    want = {(-9, 0): 21, (0, -9): 30, (9, 9): 30}
    ok = (
        spectrum_arrays(cl.spectrum) == want
        and cl.kind == Kind.WEAKLY_REGULAR
        and cl.sign_counts() == {"+1": 0, "-1": 81}
        and dt < 2.0
    )
    report(2, ok, f"({dt:.3f} s)")
    assert spectrum_arrays(cl.spectrum) == want
    assert [list(t) for t in cl.spectrum.multiset()] == load_golden("ex2")["multiset"]
    assert cl.kind == Kind.WEAKLY_REGULAR
    assert cl.sign_counts() == {"+1": 0, "-1": 81}
    assert dt < 2.0


# -- 3 ------------------------------------------------------------------------

@pytest.mark.criterion(3)
def test_criterion3_example3a():
    r, dt = timed(lambda: run_example("ex3a"))
    cl = r.classification
    # 3^(3/2) i = 3(1 + 2 eps): -3(1+2eps) eps^t for t = 0, 1, 2
    want = {(-3, -6): 9, (6, 3): 12, (-3, 3): 6}
    ok = spectrum_arrays(cl.spectrum) == want and cl.kind == Kind.WEAKLY_REGULAR and dt < 1.0
    report(3, ok, f"({dt:.3f} s)")
    assert spectrum_arrays(cl.spectrum) == want
    assert [list(t) for t in cl.spectrum.multiset()] == load_golden("ex3a")["multiset"]
    assert cl.kind == Kind.WEAKLY_REGULAR
    assert dt < 1.0


# -- 4 ------------------------------------------------------------------------

EX3B_SPECTRUM = {(-3, -6): 6, (6, 3): 9, (-3, 3): 3, (3, 6): 3, (-6, -3): 3, (3, -3): 3}


@pytest.mark.criterion(4)
def test_criterion4_example3b_spectrum_class_degree():
    def go():
        r = run_example("ex3b")
        return r, interpolate(r.F)

    (r, P), dt = timed(go)
    cl = r.classification
    assert spectrum_arrays(cl.spectrum) == EX3B_SPECTRUM
    assert [list(t) for t in cl.spectrum.multiset()] == load_golden("ex3b")["multiset"]
    assert cl.kind == Kind.NOT_WEAKLY_REGULAR
    assert algebraic_degree(P) == 4
    assert dt < 1.0


@pytest.mark.criterion(4)
def test_criterion4_example3b_polynomial():
    r = run_example("ex3b")
    P = interpolate(r.F)
    want = golden_poly(r.F.ctx, load_golden("ex3b"))
    ok = P.coeffs == want.coeffs
    report(4, ok, f"(polynomial: {len(P)} terms measured, {len(want)} expected)")
    assert P.coeffs == want.coeffs


# -- 5 ------------------------------------------------------------------------

@pytest.mark.criterion(5)
@pytest.mark.parametrize("p,n", [(2, 8), (3, 4), (5, 3)])
def test_criterion5_fast_equals_naive(p, n):
    ctx = default_field(p, n)
    rng = np.random.default_rng(1000 * p + n)
    t0 = time.perf_counter()
    for i in range(100):
        f = FpFunction(ctx, rng.integers(0, p, size=ctx.q))
        ip = InnerProduct(ctx, 1 + (i % (ctx.q - 1)))
        fast, naive = walsh_fast(f, ip), walsh_naive(f, ip)
        assert np.array_equal(fast.values, naive.values)
        assert fast.parseval_ok() and naive.parseval_ok()
    dt = time.perf_counter() - t0
    report(5, dt < 20.0, f"(p={p}, n={n}, 100 functions, {dt:.2f} s)")
    assert dt < 20.0


# -- 6 ------------------------------------------------------------------------

def _structure_fixtures():
    out = []
    for p, n in [(3, 2), (3, 3), (3, 4), (3, 5), (3, 6), (3, 7), (3, 8), (5, 2), (5, 3), (5, 4), (5, 5)]:
        for r in range(1, n):
            cs = [c for c in range(p**n - 1) if monomial_is_2plateaued(p, n, r, c)][:2] + [0, 1]
            for c in dict.fromkeys(cs):
                out.append(("monomial", p, n, r, c))
    for p, n in [(3, 3), (3, 6), (5, 3), (5, 6)]:
        if p**n > 3**8:
            continue
        for kappa in (0, 1, 2):
            out.append(("binomial", p, n, kappa, None))
    return out


def _check_structure(f):
    ctx = f.ctx
    ip = InnerProduct(ctx, 1)
    ls = linear_space(f)
    s = plateau_order_of_spectrum(walsh_fast(f, ip))
    assert s == ls.dim
    assert len(walsh_fast(f, ip).support()) == ctx.p ** (ctx.n - s)
    C = complement(ls.space)
    if C.dim:
        assert restriction_is_bent(f, C)
    for beta2 in ls.space.basis:
        W = Subspace.span(ctx, [beta2, *C.basis])
        assert plateau_order_of_spectrum(walsh_on_subspace(f, W)) == 1
        assert is_linear_structure_on(f, beta2, W)


@pytest.mark.criterion(6)
@pytest.mark.parametrize("fixture", _structure_fixtures(), ids=lambda t: "-".join(str(x) for x in t if x is not None))
def test_criterion6_structural_invariants(fixture):
    family, p, n, a, b = fixture
    ctx = default_field(p, n)
    f = monomial_function(ctx, a, b) if family == "monomial" else binomial_function(ctx, a)
    _check_structure(f)


# -- 7 ------------------------------------------------------------------------

@pytest.mark.criterion(7)
def test_criterion7_monomial_agreement():
    total = disagree = literal_disagree = 0
    for p, n in [(2, 4), (2, 6), (3, 4), (5, 4)]:
        for row in search_monomial(p, [n]):
            total += 1
            disagree += not row["agree"]
            literal_disagree += monomial_is_2plateaued(p, n, row["r"], row["c"], literal=True) != (row["plateau_s"] == 2)
    report(7, disagree == 0, f"(monomial: {total - disagree}/{total} agree; literal form disagrees on {literal_disagree})")
    assert disagree == 0
    assert literal_disagree == 21


@pytest.mark.criterion(7)
def test_criterion7_binomial_agreement():
    rows = search_binomial(3, [3, 6, 9], [0, 1, 2])
    bad = [r for r in rows if not r["agree"]]
    report(7, not bad, f"(binomial: {len(rows) - len(bad)}/{len(rows)} agree)")
    assert len(rows) == 9 and not bad
    assert all(r["linear_space_dim"] == r["kernel_dim"] for r in rows)


# -- 8 ------------------------------------------------------------------------

@pytest.mark.criterion(8)
def test_criterion8_nwr_p3():
    rows = search_nwr(3, [3], [1])
    assert sorted(tuple(r["a"]) for r in rows) == [(1, 1, 1), (1, 1, 2), (1, 2, 1), (1, 2, 2)]
    ok = all(r["bent"] and (r["kind"] == "NotWeaklyRegular") == (2 in r["a"][1:]) for r in rows)
    report(8, ok, f"(p=3: {len(rows)} a-vectors)")
    for r in rows:
        assert r["bent"]
        assert (r["kind"] == "NotWeaklyRegular") == (2 in r["a"][1:])


@pytest.mark.criterion(8)
def test_criterion8_nwr_p5():
    rows, dt = timed(lambda: search_nwr(5, [3], [1]))
    assert len(rows) >= 20
    ok = all(r["bent"] and r["agree"] for r in rows) and dt < 120
    report(8, ok, f"(p=5: {len(rows)} a-vectors, {dt:.1f} s)")
    for r in rows:
        assert r["bent"]
        assert (r["kind"] == "NotWeaklyRegular") == r["predicted_nwr"]
        assert r["predicted_nwr"] == any(x in (2, 3) for x in r["a"][1:])
    assert dt < 120
