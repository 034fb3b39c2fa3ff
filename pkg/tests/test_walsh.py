import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bentforge.cyclotomic import CycInt
from bentforge.finite_field import DomainTooLarge, InnerProduct, Subspace, default_field, orthogonal_complement
from bentforge.fixtures import run_example
from bentforge.functions import FpFunction, linear_function, monomial
from bentforge.walsh import dual_basis, spectrum_multiset, walsh_fast, walsh_naive, walsh_on_subspace

SMALL = [(2, 6), (3, 3), (3, 4), (5, 3), (7, 2), (2, 4)]


def random_function(ctx, rng):
    return FpFunction(ctx, rng.integers(0, ctx.p, size=ctx.q))


def float_transform(f, ip):
    ctx = f.ctx
    xs = ctx.elements()
    e = np.exp(2j * np.pi / ctx.p)
    return np.array([np.sum(e ** ((f.values - ip.pair_all(b, xs)) % ctx.p)) for b in xs])


@pytest.mark.parametrize("p,n", SMALL)
def test_fast_matches_naive(p, n, rng):
    c = default_field(p, n)
    for k in range(4):
        ip = InnerProduct(c, c.elem(int(rng.integers(0, c.q - 1))))
        f = random_function(c, rng)
        a, b = walsh_fast(f, ip), walsh_naive(f, ip)
        assert np.array_equal(a.values, b.values)
        assert a.parseval_ok()


@given(st.sampled_from(SMALL), st.data())
def test_fast_matches_naive_property(pn, data):
    c = default_field(*pn)
    vals = data.draw(st.lists(st.integers(0, c.p - 1), min_size=c.q, max_size=c.q))
    d = data.draw(st.integers(1, c.q - 1))
    f = FpFunction(c, np.array(vals))
    ip = InnerProduct(c, d)
    s = walsh_fast(f, ip)
    assert np.array_equal(s.values, walsh_naive(f, ip).values)
    assert s.parseval_ok()


def test_float_oracle_agrees(gf27, rng):
    ip = InnerProduct(gf27, gf27.elem(4))
    f = random_function(gf27, rng)
    s = walsh_fast(f, ip)
    z = float_transform(f, ip)
    got = np.array([w.to_complex() for _, w in s.entries()])
    assert np.allclose(got, z, atol=1e-6)


@pytest.mark.parametrize("p,n", SMALL)
def test_zero_and_constant(p, n):
    c = default_field(p, n)
    ip = InnerProduct(c, 1)
    s = walsh_naive(FpFunction.zero(c), ip)
    assert s.entry(0) == CycInt.from_int(p, c.q)
    assert all(w.is_zero() for b, w in s.entries() if b)
    assert spectrum_multiset(s) == [(str(c.q), 1), ("0", c.q - 1)]
    k = 1 % p
    s = walsh_fast(FpFunction(c, np.full(c.q, k)), ip)
    assert s.entry(0) == CycInt.eps(p, k) * c.q
    assert all(w.is_zero() for b, w in s.entries() if b)


@pytest.mark.parametrize("p,n", SMALL)
def test_linear_function_spike(p, n, rng):
    c = default_field(p, n)
    ip = InnerProduct(c, c.elem(2))
    cc = int(rng.integers(1, c.q))
    f = FpFunction(c, c.v_trace(c.v_mul(cc, c.elements())))
    s = walsh_naive(f, ip)
    # <b, x> = Tr(delta b x) = Tr(cc x)  <=>  b = cc / delta
    b0 = c.mul(cc, c.inv(ip.delta))
    assert s.entry(b0) == CycInt.from_int(p, c.q)
    assert len(s.support()) == 1


def test_dual_basis(gf81):
    ip = InnerProduct(gf81, gf81.elem(7))
    D = dual_basis(ip)
    Ds = gf81.to_ints(D)
    for i, d in enumerate(Ds):
        for j in range(gf81.n):
            assert ip(int(d), int(gf81.pw[j])) == (1 if i == j else 0)


def test_naive_guard():
    c = default_field(2, 13)
    with pytest.raises(DomainTooLarge):
        walsh_naive(FpFunction.zero(c), InnerProduct(c, 1))


def test_example_spectra():
    assert run_example("ex1").classification.spectrum.multiset() == [("-8", 28), ("8", 36)]
    assert run_example("ex2").classification.spectrum.multiset() == [("-9", 21), ("-9*eps^1", 30), ("-9*eps^2", 30)]
    assert run_example("ex3a").classification.spectrum.multiset() == [
        ("-3^{3/2}*i", 9),
        ("-3^{3/2}*i*eps^1", 12),
        ("-3^{3/2}*i*eps^2", 6),
    ]


def test_ex1_naive_spectrum():
    r = run_example("ex1")
    s = walsh_naive(r.F, InnerProduct(r.F.ctx, 1))
    assert s.multiset() == [("-8", 28), ("8", 36)]


def test_subspace_whole_field_equals_naive(gf27, rng):
    ip = InnerProduct(gf27, gf27.elem(3))
    f = random_function(gf27, rng)
    s = walsh_on_subspace(f, Subspace.whole(gf27), ip)
    assert np.array_equal(s.points, gf27.elements())
    assert np.array_equal(s.values, walsh_naive(f, ip).values)


def test_ex1_restricted_supports():
    r = run_example("ex1")
    c = r.F.ctx
    ip = r.recipe.ip
    V = orthogonal_complement(c, ip, Subspace.span(c, [r.recipe.beta1]))
    sups = [set(walsh_on_subspace(g, V, ip).support().tolist()) for g in r.g_list]
    assert [len(S) for S in sups] == [16, 16]
    assert not sups[0] & sups[1]


def test_near_bent_restriction_values():
    r = run_example("ex3a")
    c = r.F.ctx
    ip = r.recipe.ip
    V = orthogonal_complement(c, ip, Subspace.span(c, [r.recipe.beta1]))
    for g in r.g_list:
        s = walsh_on_subspace(g, V, ip)
        assert s.parseval_ok()
        assert set(s.norms_int().tolist()) <= {0, c.q}


def test_subspace_degenerate_warns(gf27):
    ip = InnerProduct(gf27, 1)
    W = Subspace.span(gf27, [1])  # Tr(1) = 0 in F_27
    with pytest.warns(UserWarning):
        walsh_on_subspace(FpFunction.zero(gf27), W, ip)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        walsh_on_subspace(FpFunction.zero(gf27), W)


@pytest.mark.parametrize("p,n", [(2, 6), (3, 4), (5, 3)])
def test_plateaued_support_and_values(p, n):
    from bentforge.analysis import linear_space

    c = default_field(p, n)
    for cexp in range(0, c.q - 1, max(1, (c.q - 1) // 12)):
        f = monomial(c, c.elem(cexp), p + 1)
        s = walsh_fast(f, InnerProduct(c, 1))
        dim = linear_space(f).dim
        norms = s.norms_int()
        assert norms is not None
        assert set(norms.tolist()) <= {0, p ** (n + dim)}
        assert len(s.support()) == p ** (n - dim)


@pytest.mark.parametrize("p,n", [(3, 3), (3, 4), (5, 3), (2, 6)])
def test_norm_multiset_independent_of_delta(p, n, rng):
    c = default_field(p, n)
    for _ in range(3):
        f = random_function(c, rng)
        a = walsh_fast(f, InnerProduct(c, 1)).norms()
        b = walsh_fast(f, InnerProduct(c, c.elem(int(rng.integers(1, c.q - 1))))).norms()
        key = lambda arr: sorted(map(tuple, arr.tolist()))  # noqa: E731
        assert key(a) == key(b)


def test_spectrum_json(gf64):
    r = run_example("ex1")
    js = r.classification.spectrum.to_json()
    assert js["delta"] == {"log": 0}
    assert js["multiset"] == [["-8", 28], ["8", 36]]
    assert len(js["entries"]) == 64
    e = js["entries"][1]
    assert set(e) == {"b", "value", "render"}


def test_linear_function_helper_consistent(gf81):
    ip = InnerProduct(gf81, gf81.elem(5))
    c = gf81.elem(11)
    f = linear_function(ip, c)
    s = walsh_fast(f, ip)
    assert s.entry(c) == CycInt.from_int(3, 81)
