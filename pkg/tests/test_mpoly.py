"""Sparse multivariate polynomials, Groebner machinery, Witt carries.

The Groebner results are cross-checked against sympy's implementation and
the dimension function against a Hilbert-growth counting oracle, so the
in-package Buchberger code never certifies itself.
"""

import itertools
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from fwdiff.modarith import (
    GaloisField,
    GaloisRing,
    PrimeField,
    PrimeSquareRing,
    Residue,
)
from fwdiff.mpoly import (
    PolyRing,
    SparsePoly,
    divide,
    frobenius_twist,
    groebner,
    groebner_extended,
    homogenize,
    krull_dim,
    mono_div,
    mono_lcm,
    mono_mul,
    normal_form,
    staircase_dim,
    standard_monomials,
    witt_P_pair,
    witt_Q,
    witt_R,
)


def _random_poly(rng, ring, max_terms=4, max_exp=2):
    k = ring.coeff
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        m = tuple(rng.randint(0, max_exp) for _ in range(ring.nvars))
        terms[m] = k.of_int(rng.randint(0, k.modulus - 1))
    return ring.poly(terms)


def _random_coeff(rng, R):
    if hasattr(R, "degree") and R.degree > 1:
        return Residue(R, tuple(rng.randrange(R.modulus) for _ in range(R.degree)))
    return R.of_int(rng.randrange(R.modulus))


# ---------------------------------------------------------------------------
# monomials and ring arithmetic

def test_mono_helpers():
    assert mono_mul((1, 2), (3, 0)) == (4, 2)
    assert mono_div((4, 2), (1, 2)) == (3, 0)
    assert mono_div((1, 2), (2, 0)) is None
    assert mono_lcm((1, 2), (2, 0)) == (2, 2)


_coeffs = st.integers(min_value=0, max_value=4)
_monos = st.tuples(st.integers(0, 3), st.integers(0, 3))
_polys = st.dictionaries(_monos, _coeffs, max_size=4)


def _mk(d):
    ring = PolyRing(PrimeField(5), ("x", "y"))
    return ring.poly({m: ring.coeff.of_int(c) for m, c in d.items()})


@settings(max_examples=60)
@given(_polys, _polys, _polys)
def test_ring_axioms(df, dg, dh):
    f, g, h = _mk(df), _mk(dg), _mk(dh)
    assert (f + g) + h == f + (g + h)
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == f.ring.zero()
    assert f * f.ring.one() == f


@settings(max_examples=30)
@given(_polys, _polys)
def test_pow_matches_repeated_mul(df, dg):
    f = _mk(df)
    assert f**3 == f * f * f
    assert f**0 == f.ring.one()


def test_lead_monomial_grevlex():
    ring = PolyRing(PrimeField(5), ("x", "y"))
    x, y = ring.gens()
    assert (x + y**2).lead_monomial() == (0, 2)  # degree dominates
    assert (x**2 + x * y).lead_monomial() == (2, 0)
    assert (x * y**2 + x**2 * y).lead_monomial() == (2, 1)


def test_derivative_and_evaluate():
    R = PrimeSquareRing(3)
    ring = PolyRing(R, ("x", "y"))
    x, y = ring.gens()
    f = x**3 * y + 2 * x * y**2
    assert f.derivative(0) == 3 * x**2 * y + 2 * y**2
    assert f.derivative(1) == x**3 + 4 * x * y
    v = f.evaluate((R.of_int(2), R.of_int(5)))
    assert v == R.of_int(2**3 * 5 + 2 * 2 * 5**2)


def test_shift_agrees_with_evaluation():
    k = PrimeField(5)
    ring = PolyRing(k, ("x", "y"))
    rng = random.Random(11)
    for _ in range(10):
        f = _random_poly(rng, ring)
        c = (k.of_int(rng.randrange(5)), k.of_int(rng.randrange(5)))
        g = f.shift(c)
        for a in k.elements():
            for b in k.elements():
                assert g.evaluate((a, b)) == f.evaluate((a + c[0], b + c[1]))


# ---------------------------------------------------------------------------
# division and Groebner bases

def test_divide_is_exact_and_reduced():
    rng = random.Random(7)
    ring = PolyRing(PrimeField(5), ("x", "y", "z"))
    for _ in range(25):
        f = _random_poly(rng, ring, max_terms=5, max_exp=3)
        basis = [_random_poly(rng, ring, max_terms=3, max_exp=2) for _ in range(2)]
        basis = [b for b in basis if not b.is_zero()]
        if not basis:
            continue
        quots, rem = divide(f, basis)
        recomposed = rem
        for q, b in zip(quots, basis):
            recomposed = recomposed + q * b
        assert recomposed == f
        for m in rem.terms:
            assert all(mono_div(m, b.lead_monomial()) is None for b in basis)


def _to_sympy(f, syms):
    expr = sympy.Integer(0)
    for m, c in f.terms.items():
        t = sympy.Integer(c.value)
        for s, e in zip(syms, m):
            t *= s**e
        expr += t
    return expr


def _sympy_gb_dicts(polys, syms, p):
    gb = sympy.groebner([_to_sympy(f, syms) for f in polys], *syms,
                        modulus=p, order="grevlex")
    out = set()
    for g in gb.polys:
        d = frozenset((m, int(c) % p) for m, c in g.terms())
        out.add(d)
    return out


def _our_gb_dicts(gb):
    return {frozenset((m, c.value) for m, c in g.terms.items()) for g in gb.polys}


@pytest.mark.parametrize("p", [2, 3, 5])
def test_groebner_matches_sympy(p):
    """Reduced bases agree with an independent implementation."""
    rng = random.Random(100 + p)
    syms = sympy.symbols("x y z")
    ring = PolyRing(PrimeField(p), ("x", "y", "z"))
    done = 0
    while done < 12:
        gens = [_random_poly(rng, ring, max_terms=3, max_exp=2)
                for _ in range(rng.randint(1, 3))]
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            continue
        ours = groebner(gens, ring=ring, verify=True)
        theirs = _sympy_gb_dicts(gens, syms, p)
        if ours.is_trivial():
            assert theirs == {frozenset({((0, 0, 0), 1)})}
        else:
            assert _our_gb_dicts(ours) == theirs
        done += 1


def test_groebner_known_example():
    # the cusp plus its tangent line section
    ring = PolyRing(PrimeField(5), ("x", "y"))
    x, y = ring.gens()
    gb = groebner([y**2 - x**3, y])
    assert _our_gb_dicts(gb) == {frozenset({((0, 1), 1)}),
                                 frozenset({((3, 0), 1)})}


def test_normal_form_properties():
    ring = PolyRing(PrimeField(3), ("x", "y"))
    x, y = ring.gens()
    gb = groebner([x**2 - y, y**2 - x])
    rng = random.Random(3)
    for _ in range(15):
        f = _random_poly(rng, ring, max_terms=4, max_exp=3)
        g = _random_poly(rng, ring, max_terms=4, max_exp=3)
        nf = gb.normal_form
        assert nf(nf(f)) == nf(f)
        assert nf(f + g) == nf(f) + nf(g)
        assert nf(f - nf(f)).is_zero()
        assert gb.contains(f * (x**2 - y))


def test_groebner_extended_representations():
    rng = random.Random(42)
    ring = PolyRing(PrimeField(5), ("x", "y"))
    for _ in range(10):
        gens = [_random_poly(rng, ring, max_terms=3, max_exp=2)
                for _ in range(rng.randint(1, 3))]
        if all(g.is_zero() for g in gens):
            continue
        basis, reps, syzygies = groebner_extended(gens)
        for b, rep in zip(basis, reps):
            acc = ring.zero()
            for r, g in zip(rep, gens):
                acc = acc + r * g
            assert acc == b
        for syz in syzygies:
            acc = ring.zero()
            for s, g in zip(syz, gens):
                acc = acc + s * g
            assert acc.is_zero()


# ---------------------------------------------------------------------------
# dimension

def _growth_dim(gb, smax=12):
    """Independent Krull dimension: degree of the Hilbert growth of the
    staircase, read off from iterated finite differences."""
    n = gb.ring.nvars
    leads = gb.lead_monomials()

    def count(s):
        c = 0
        for m in itertools.product(range(s + 1), repeat=n):
            if sum(m) > s:
                continue
            if any(mono_div(m, l) is not None for l in leads):
                continue
            c += 1
        return c

    seq = [count(s) for s in range(smax + 1)]
    for k in range(n + 2):
        if all(v == 0 for v in seq[-3:]):
            return k - 1
        seq = [b - a for a, b in zip(seq, seq[1:])]
    return n


@pytest.mark.parametrize("rels,expected", [
    ([], 2),
    (["x", "y"], 0),
    (["x*y"], 1),
    (["y^2-x^3"], 1),
])
def test_krull_dim_frozen_2vars(rels, expected):
    from fwdiff.ringfile import parse_poly
    ring = PolyRing(PrimeField(5), ("x", "y"))
    names = dict(zip(ring.variables, ring.gens()))
    gens = [parse_poly(r, ring, names) for r in rels]
    gb = groebner(gens, ring=ring)
    assert krull_dim(gb) == expected
    assert _growth_dim(gb) == expected


def test_krull_dim_coordinate_cross():
    ring = PolyRing(PrimeField(3), ("x", "y", "z"))
    x, y, z = ring.gens()
    gb = groebner([x * z, y * z])  # plane union line: dimension 2
    assert krull_dim(gb) == 2
    assert _growth_dim(gb) == 2
    gb2 = groebner([x * y, y * z, x * z])  # three axes
    assert krull_dim(gb2) == 1
    assert _growth_dim(gb2) == 1


def test_krull_dim_random_vs_growth():
    rng = random.Random(17)
    ring = PolyRing(PrimeField(3), ("x", "y", "z"))
    done = 0
    while done < 10:
        gens = [_random_poly(rng, ring, max_terms=3, max_exp=2)
                for _ in range(rng.randint(1, 3))]
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            continue
        gb = groebner(gens, ring=ring)
        assert krull_dim(gb) == _growth_dim(gb)
        done += 1


def test_staircase_edges():
    assert staircase_dim([], 3) == 3
    assert staircase_dim([(0, 0)], 2) == -1  # unit ideal
    assert staircase_dim([(1, 0), (0, 1)], 2) == 0


def test_standard_monomials_zero_dim():
    ring = PolyRing(PrimeField(5), ("x", "y"))
    x, y = ring.gens()
    gb = groebner([x**2, x * y, y**3])
    mons = standard_monomials(gb)
    assert set(mons) == {(0, 0), (1, 0), (0, 1), (0, 2)}
    assert mons == sorted(mons, key=ring.key)
    empty = groebner([ring.one()], ring=ring)
    assert standard_monomials(empty) == []


# ---------------------------------------------------------------------------
# Witt carries on polynomials

@pytest.mark.parametrize("p", [2, 3])
def test_twist_carry_identity_prime_square(p):
    """f^p = f^(p) + p*Q(f) over Z/p^2, exactly."""
    rng = random.Random(p)
    ring = PolyRing(PrimeSquareRing(p), ("X", "Y"))
    for _ in range(40):
        f = _random_poly(rng, ring, max_terms=3, max_exp=2)
        assert f**p == frobenius_twist(f) + witt_Q(f) * p


def test_twist_carry_identity_galois_ring():
    rng = random.Random(5)
    R = GaloisRing(2, 2)
    ring = PolyRing(R, ("X", "Y"))
    for _ in range(20):
        f = ring.poly({
            (rng.randint(0, 2), rng.randint(0, 2)): _random_coeff(rng, R)
            for _ in range(rng.randint(1, 3))})
        assert f**2 == frobenius_twist(f) + witt_Q(f) * 2


@pytest.mark.parametrize("p", [2, 3])
def test_carry_addition_rule(p):
    """Q(f+g) = Q(f) + Q(g) + P(f,g) - R(f,g)."""
    rng = random.Random(10 * p)
    ring = PolyRing(PrimeSquareRing(p), ("X", "Y"))
    for _ in range(25):
        f = _random_poly(rng, ring, max_terms=3, max_exp=2)
        g = _random_poly(rng, ring, max_terms=3, max_exp=2)
        lhs = witt_Q(f + g)
        rhs = witt_Q(f) + witt_Q(g) + witt_P_pair(f, g) - witt_R(f, g)
        assert lhs == rhs


@pytest.mark.parametrize("p", [2, 3, 5])
def test_pair_carry_defining_identity(p):
    rng = random.Random(20 + p)
    ring = PolyRing(PrimeSquareRing(p), ("X", "Y"))
    for _ in range(10):
        f = _random_poly(rng, ring, max_terms=2, max_exp=1)
        g = _random_poly(rng, ring, max_terms=2, max_exp=1)
        assert (f + g) ** p == f**p + g**p + witt_P_pair(f, g) * p


def test_matched_carry_single_monomial():
    R = PrimeSquareRing(3)
    ring = PolyRing(R, ("X", "Y"))
    a, b = R.of_int(4), R.of_int(7)
    f = ring.poly({(1, 2): a})
    g = ring.poly({(1, 2): b})
    r = witt_R(f, g)
    from fwdiff.modarith import witt_P_scalars
    assert r == ring.poly({(3, 6): witt_P_scalars(a, b)})
    assert witt_R(f, ring.zero()).is_zero()


@pytest.mark.parametrize("p", [2, 3])
def test_twist_additivity_carry(p):
    """f^(p) is additive up to the matched-monomial carry."""
    rng = random.Random(30 + p)
    ring = PolyRing(PrimeSquareRing(p), ("X", "Y"))
    for _ in range(20):
        f = _random_poly(rng, ring, max_terms=3, max_exp=2)
        g = _random_poly(rng, ring, max_terms=3, max_exp=2)
        assert frobenius_twist(f + g) == \
            frobenius_twist(f) + frobenius_twist(g) + witt_R(f, g) * p


def test_single_term_has_no_carry():
    ring = PolyRing(PrimeSquareRing(3), ("X",))
    f = ring.poly({(2,): ring.coeff.of_int(5)})
    assert witt_Q(f).is_zero()


def test_twist_in_char_p_is_frobenius():
    F = GaloisField(3, 2)
    ring = PolyRing(F, ("x", "y"))
    rng = random.Random(9)
    for _ in range(15):
        f = ring.poly({
            (rng.randint(0, 2), rng.randint(0, 2)): _random_coeff(rng, F)
            for _ in range(rng.randint(1, 3))})
        g = ring.poly({
            (rng.randint(0, 2), rng.randint(0, 2)): _random_coeff(rng, F)
            for _ in range(rng.randint(1, 3))})
        assert frobenius_twist(f) == f**3
        assert frobenius_twist(f * g) == frobenius_twist(f) * frobenius_twist(g)
        assert frobenius_twist(f + g) == frobenius_twist(f) + frobenius_twist(g)


# ---------------------------------------------------------------------------
# homogenization

def test_homogenize_properties():
    k = PrimeField(5)
    ring = PolyRing(k, ("x", "y"))
    target = PolyRing(k, ("_h", "x", "y"), order="homoglocal")
    rng = random.Random(13)
    for _ in range(10):
        f = _random_poly(rng, ring, max_terms=4, max_exp=3)
        if f.is_zero():
            continue
        h = homogenize(f, target)
        d = f.total_degree()
        assert all(sum(m) == d for m in h.terms)
        for a in k.elements():
            for b in k.elements():
                assert h.evaluate((k.one(), a, b)) == f.evaluate((a, b))
