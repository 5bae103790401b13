from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skeletonkit.errors import DomainError
from skeletonkit.exact import INF
from skeletonkit.wild import (fiber_count, fiber_count_oracle, kummer_cover, layout_count, pushforward_step,
                              roots_of_unity_gap, split_annulus_layout)

F = Fraction


@pytest.mark.parametrize("p, gap", [(2, F(-1)), (3, F(-1, 2)), (5, F(-1, 4))])
def test_roots_of_unity_gap(p, gap):
    assert roots_of_unity_gap(p) == gap


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def test_roots_of_unity_gap_by_valuation():
    # the p-1 conjugates 1 - ζ^k share one valuation and multiply to Φ_p(1)
    for p in (2, 3, 5, 7, 11):
        phi_at_1 = sum(1 ** k for k in range(p))
        assert roots_of_unity_gap(p) == F(-_vp(phi_at_1, p), p - 1)


def test_gap_rejects_composite():
    with pytest.raises(DomainError) as exc:
        roots_of_unity_gap(4)
    assert exc.value.code == "not_prime"


@pytest.mark.parametrize("t, s, out", [(0, -1, F(-2)), (0, F(-1, 4), F(-3, 4)), (0, F(-1, 2), F(-3, 2))])
def test_pushforward_examples(t, s, out):
    assert pushforward_step(t, s, 3) == (0, out)


def test_pushforward_threshold_agreement():
    for p in (2, 3, 5):
        for t in (F(0), F(-1), F(3, 2)):
            s = t - F(1, p - 1)
            assert s - 1 + (p - 1) * t == p * s
            assert pushforward_step(t, s, p)[1] == p * s


def test_pushforward_rejects():
    with pytest.raises(DomainError) as exc:
        pushforward_step(0, 0, 3)
    assert exc.value.code == "s_not_below_t"


@pytest.mark.parametrize("S, n", [(-1, 1), (-2, 3), (-4, 9)])
def test_fiber_count_examples(S, n):
    assert fiber_count(0, S, 3, 2) == n
    assert fiber_count_oracle(0, S, 3, 2) == n


def test_fiber_count_errors_and_trivial_height():
    assert fiber_count(0, -100, 5, 0) == 1
    for bad in ((0, 0, 3, 1), (0, 1, 3, 1)):
        with pytest.raises(DomainError) as exc:
            fiber_count(*bad)
        assert exc.value.code == "s_not_below_t"
    with pytest.raises(DomainError):
        fiber_count(0, -1, 3, -1)


def _grid_S(T):
    # 200 rationals below T, dense near every breakpoint
    out = set()
    k = 1
    while len(out) < 200:
        out.add(T - F(k, 12))
        k += 1
    return sorted(out)


def test_fiber_count_matches_oracle_on_grid():
    for p in (2, 3, 5):
        for h in range(4):
            for T in (F(0), F(-1), F(3, 2)):
                for S in _grid_S(T):
                    assert fiber_count(T, S, p, h) == fiber_count_oracle(T, S, p, h), (p, h, T, S)


rats = st.fractions(min_value=-20, max_value=20, max_denominator=60)


@given(rats, rats, rats, st.sampled_from([2, 3, 5, 7]), st.integers(0, 4))
@settings(max_examples=300, deadline=None)
def test_fiber_count_monotone(T, a, b, p, h):
    S1, S2 = sorted((T - abs(a) - F(1, 100), T - abs(b) - F(1, 100)))
    assert fiber_count(T, S1, p, h) >= fiber_count(T, S2, p, h)
    assert fiber_count(T, S1, p, h) == fiber_count_oracle(T, S1, p, h)


@given(rats, rats, rats, st.sampled_from([2, 3, 5]))
@settings(max_examples=200, deadline=None)
def test_pushforward_increasing(t, a, b, p):
    s1, s2 = sorted((t - abs(a) - F(1, 100), t - abs(b) - F(1, 100)))
    if s1 < s2:
        assert pushforward_step(t, s1, p)[1] < pushforward_step(t, s2, p)[1]


def test_layout_examples():
    lay = split_annulus_layout(3, F(1, 2), 3, 2)
    assert lay.segments() == [(0, F(1, 2), 1), (F(1, 2), F(3, 2), 3), (F(3, 2), 3, 9)]
    assert lay.count_at(F(1, 2)) == 1 and lay.count_at(F(2)) == 9
    lay = split_annulus_layout(2, F(1, 2), 2, 1)
    assert lay.segments() == [(0, F(1, 2), 1), (F(1, 2), 2, 2)]
    with pytest.raises(DomainError) as exc:
        split_annulus_layout(1, F(1, 2), 3, 2)
    assert exc.value.code == "length_too_short"


@pytest.mark.parametrize("args, code", [
    ((3, 0, 3, 2), "eps_not_positive"),
    ((3, F(3, 2), 3, 2), "eps_too_large"),
    ((F(3, 2), F(1, 2), 3, 2), "eps_exceeds_room"),
])
def test_layout_hypotheses(args, code):
    with pytest.raises(DomainError) as exc:
        split_annulus_layout(*args)
    assert exc.value.code == code


@given(st.sampled_from([2, 3, 5]), st.integers(0, 4), st.fractions(min_value=0, max_value=1, max_denominator=30),
       st.fractions(min_value=0, max_value=5, max_denominator=30))
@settings(max_examples=200, deadline=None)
def test_layout_matches_pointwise_counts(p, h, u, extra):
    eps = F(p, p - 1) * u
    if eps == 0 or eps == F(p, p - 1):
        return
    L = h - 1 + eps + extra + F(1, 30)
    if L <= 0:
        return
    lay = split_annulus_layout(L, eps, p, h)
    segs = lay.segments()
    assert [c for _, _, c in segs] == [p ** i for i in range(h + 1)]
    if h >= 1:
        assert segs[0][1] - segs[0][0] == eps
    assert all(hi - lo == 1 for lo, hi, _ in segs[1:-1])
    for lo, hi, c in segs:
        for d in (lo + (hi - lo) / 3, (lo + hi) / 2, hi if hi < L else (lo + hi) / 2):
            assert lay.count_at(d) == layout_count(L, eps, p, h, d) == c


def test_layout_renderings():
    lay = split_annulus_layout(3, F(1, 2), 3, 2)
    art = lay.ascii()
    assert art.startswith("y |") and "9" in art and "| x" in art
    dot = lay.dot()
    assert dot.startswith("graph layout") and dot.count("--") == 3
    js = lay.to_json()
    assert js["breakpoints"] == ["1/2", "3/2"] and js["segments"][-1]["count"] == 9


@pytest.mark.parametrize("L, ell, c, comps, length, deg", [
    (6, 3, 1, 1, F(2), 3), (6, 4, 2, 2, F(3), 2), (6, 5, 0, 5, F(6), 1)])
def test_kummer_examples(L, ell, c, comps, length, deg):
    k = kummer_cover(L, ell, c)
    assert (k.components, k.component_length, k.component_degree) == (comps, length, deg)


def test_kummer_infinite_and_errors():
    k = kummer_cover(INF, 6, 4)
    assert k.component_length == INF and k.components == 2
    for args, code in (((1, 1, 0), "bad_modulus"), ((1, 3, 3), "bad_class"), ((0, 3, 1), "bad_length")):
        with pytest.raises(DomainError) as exc:
            kummer_cover(*args)
        assert exc.value.code == code


@given(st.fractions(min_value=F(1, 10), max_value=50, max_denominator=20), st.integers(2, 40), st.data())
@settings(max_examples=200, deadline=None)
def test_kummer_laws(L, ell, data):
    c = data.draw(st.integers(0, ell - 1))
    k = kummer_cover(L, ell, c)
    assert k.components * k.component_degree == ell
    assert k.components == gcd(c, ell)
    assert k.components * k.component_length == L * gcd(c, ell) ** 2 / ell
    # a unit multiple of the class gives the same splitting
    u = data.draw(st.sampled_from([x for x in range(1, ell) if gcd(x, ell) == 1] or [1]))
    assert kummer_cover(L, ell, (u * c) % ell).components == k.components
