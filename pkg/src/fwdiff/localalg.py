"""Fibers of the differential module, local dimension, regularity.

The rank criterion: a local ring in the supported class is regular
exactly when the fiber dimension of its module of Frobenius-Witt
differentials equals d + r, with d the local Krull dimension and r the
imperfection exponent [k : k^p] = p^r of the residue field.  At closed
points r = 0; at a prime P the residue field is a function field and r
is its transcendence degree.

Local dimension at a point is computed through the tangent cone: the
relations are translated so the point is the origin, homogenized with a
leading extra variable, and a Groebner basis under the homogenized-local
order is taken; the x-parts of its leading monomials generate the lead
ideal of the tangent cone, whose staircase dimension is dim of the local
ring.  A prime cutting out a rational point reuses that route.  Any
other prime P uses dim(carrier) - dim(carrier/P), an upper bound that
is exact when the ambient is equidimensional along P; a Regular verdict
is only issued when equidimensionality is certified (polynomial ring,
hypersurface, or proper complete intersection), since the general value
is the max dimension of the components through the locus and computing
it would need a primary decomposition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    FlatnessRequiredError,
    OffSchemeError,
    PresentationError,
    UnsupportedClassError,
)
from .fwcore import FWPresentation, RingPresentation, present_fw
from .linalg import rank_fraction_free, rank_over_field
from .modarith import (
    GaloisField,
    PrimeField,
    PrimeSquareRing,
    Residue,
    embed,
    lift_to_p2,
    p2_cover_of,
    reduce_mod_p,
)
from .mpoly import (
    PolyRing,
    SparsePoly,
    divide,
    groebner,
    homogenize,
    krull_dim,
    staircase_dim,
)


def _common_field(kbase, kcoord):
    if kbase == kcoord:
        return kbase
    if kbase.p != kcoord.p:
        raise PresentationError("coordinate field has the wrong characteristic")
    if isinstance(kbase, PrimeField) and isinstance(kcoord, GaloisField):
        return kcoord
    if isinstance(kcoord, PrimeField) and isinstance(kbase, GaloisField):
        return kbase
    raise PresentationError(
        f"no embedding between {kbase.tag()} and {kcoord.tag()}; "
        "extension points of extension-field bases must reuse the base field")


@dataclass(frozen=True)
class PointSpec:
    """A rational point of the carrier, coordinates in a finite field."""

    ring: RingPresentation
    coordinates: tuple

    def __post_init__(self):
        if len(self.coordinates) != len(self.ring.variables):
            raise PresentationError("one coordinate per variable required")
        fld = self.field
        for c in self.coordinates:
            if c.ring != fld:
                raise PresentationError("coordinates must share one field")
        for f in self.ring.relations_mod_p():
            if not f.evaluate(self.coordinates, fld).is_zero():
                raise OffSchemeError(
                    f"point {self.describe()} does not satisfy {f}")

    @classmethod
    def of(cls, ring_pres, values):
        k = ring_pres.residue_field
        coords = []
        fld = k
        for v in values:
            if isinstance(v, Residue):
                fld = _common_field(fld, v.ring)
        for v in values:
            if isinstance(v, int):
                coords.append(fld.of_int(v))
            else:
                coords.append(embed(v, fld) if v.ring != fld else v)
        return cls(ring_pres, tuple(coords))

    @property
    def field(self):
        if self.coordinates:
            return self.coordinates[0].ring
        return self.ring.residue_field

    def describe(self):
        return "(" + ",".join(str(c) for c in self.coordinates) + ")"


def _linear_polys(ring, var_idxs):
    """Degree-1 polynomials in the given variables, first coeff 1."""
    k = ring.coeff
    n = ring.nvars
    elems = list(k.elements())
    monos = [tuple(1 if t == i else 0 for t in range(n)) for i in var_idxs]
    monos.append((0,) * n)
    for lead in range(len(monos) - 1):
        # first nonzero coefficient (in variable order) normalized to 1
        for tail in itertools.product(elems, repeat=len(monos) - lead - 1):
            terms = {monos[lead]: k.one()}
            for m, c in zip(monos[lead + 1:], tail):
                terms[m] = c
            f = ring.poly(terms)
            if f.total_degree() == 1:
                yield f


def _has_linear_factor(f):
    # a divisor can only involve variables of f
    var_idxs = sorted({i for m in f.terms for i, e in enumerate(m) if e})
    for lin in _linear_polys(f.ring, var_idxs):
        if divide(f, [lin])[1].is_zero():
            return True
    return False


def _certify_prime(gb):
    """Primality of the reduced basis of carrier ideal + P.

    In a reduced basis the degree-1 members have distinct single-variable
    leads and no other member mentions those variables, so the quotient
    by the linear members is a polynomial ring in the complementary
    variables and any remaining member literally lives there.  The ideal
    is therefore prime when nothing remains (an affine subspace), and
    when exactly one polynomial of degree <= 3 remains it is prime iff
    that polynomial is irreducible, decided by linear trial division (a
    reducible quadratic or cubic always has a degree-1 factor).

    Returns True (certified prime), False (a factor was found, provably
    not prime), or None (outside the decidable class).
    """
    nonlinear = [g for g in gb.polys if g.total_degree() > 1]
    if not nonlinear:
        return True
    if len(nonlinear) > 1:
        return None
    g = nonlinear[0]
    if g.total_degree() > 3:
        return None
    return False if _has_linear_factor(g) else True


@dataclass(frozen=True)
class PrimeSpec:
    """A prime of the carrier, by generators over the carrier ring.

    Primality is a statement about carrier ideal + P together, so the
    certification runs on their combined Groebner basis, kept in
    total_basis.  Outside the decidable class the constructor refuses
    unless assert_prime is set; an asserted non-prime is still caught at
    elimination time as a zero-divisor counterexample.
    """

    ring: RingPresentation
    generators: tuple
    assert_prime: bool = False
    total_basis: object = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        cring = self.ring.carrier_ring
        for g in self.generators:
            if not isinstance(g, SparsePoly) or g.ring != cring:
                raise PresentationError(
                    "prime generators must be polynomials over the carrier")
        gens = self.ring.relations_mod_p() + list(self.generators)
        gb = groebner(gens, ring=cring)
        object.__setattr__(self, "total_basis", gb)
        if gb.is_trivial():
            raise PresentationError("the locus is empty (unit ideal)")
        verdict = _certify_prime(gb)
        if verdict is False:
            raise PresentationError(
                "the ideal is not prime: its nonlinear part factors")
        if verdict is None and not self.assert_prime:
            raise UnsupportedClassError(
                "primality not decidable for this ideal class; construct "
                "with assert_prime=True to take responsibility")

    def describe(self):
        return "(" + "; ".join(str(g) for g in self.generators) + ")"


# ---------------------------------------------------------------------------
# fibers

def fiber_dim_point(M: FWPresentation, x: PointSpec) -> int:
    """dim over k(x) of the module fiber: generators minus matrix rank."""
    assert M.ring == x.ring, "point belongs to a different presentation"
    fld = x.field
    rows = [
        [col[i].evaluate(x.coordinates, fld) for col in M.columns]
        for i in range(M.ngens)
    ]
    return M.ngens - rank_over_field(rows)


def fiber_dim_prime(M: FWPresentation, P: PrimeSpec) -> int:
    """Rank of the module over the residue field of P.

    The relation matrix is read modulo carrier + P and eliminated
    fraction-freely; any zero divisor the elimination trips over is
    reported as a primality counterexample.
    """
    assert M.ring == P.ring, "prime belongs to a different presentation"
    gb = P.total_basis
    rows = [[col[i] for col in M.columns] for i in range(M.ngens)]
    return M.ngens - rank_fraction_free(rows, gb.normal_form)


def residue_p_rank(ring_pres: RingPresentation, locus) -> int:
    """The exponent r with [k : k^p] = p^r for the residue field at the locus.

    Finite fields are perfect (r = 0); the function field at a prime has
    r equal to its transcendence degree, the Krull dimension of the
    quotient by the prime.
    """
    if isinstance(locus, PointSpec):
        return 0
    return krull_dim(locus.total_basis)


# ---------------------------------------------------------------------------
# local dimension

def _tangent_cone_dim(ring_pres, x: PointSpec) -> int:
    k = x.field
    n = len(ring_pres.variables)
    ring = PolyRing(k, ring_pres.variables)
    shifted = []
    for f in ring_pres.relations_mod_p():
        g = f if f.ring == ring else f.map_coeffs(k, lambda c: embed(c, k))
        g = g.shift(x.coordinates)
        if not g.is_zero():
            shifted.append(g)
    if not shifted:
        return n
    hring = PolyRing(k, ("_h",) + tuple(ring_pres.variables), "homoglocal")
    gb = groebner([homogenize(g, hring) for g in shifted], ring=hring)
    xparts = [m[1:] for m in gb.lead_monomials()]
    return staircase_dim(xparts, n)


def _prime_as_rational_point(P: PrimeSpec):
    """The PointSpec a maximal PrimeSpec cuts out, if rational.

    The reduced basis of the maximal ideal of a rational point is
    exactly { x_i - a_i }: n monic members of degree 1 whose constant
    tails are forced because the leads cover every variable.
    """
    gb = P.total_basis
    ring = P.ring.carrier_ring
    n = ring.nvars
    if len(gb.polys) != n:
        return None
    k = ring.coeff
    coords = [None] * n
    for g in gb.polys:
        if g.total_degree() != 1:
            return None
        coords[g.lead_monomial().index(1)] = -g.terms.get((0,) * n, k.zero())
    return PointSpec(P.ring, tuple(coords))


def _ambient_equidimensional(ring_pres: RingPresentation) -> bool:
    """Certified sufficient conditions for an equidimensional carrier.

    A polynomial ring, a hypersurface, or a proper complete intersection
    (as many relations as the codimension: unmixedness) qualifies; other
    presentations may still be equidimensional but are not certified.
    """
    rels = [f for f in ring_pres.relations_mod_p() if not f.is_zero()]
    if len(rels) <= 1:
        return True
    n = len(ring_pres.variables)
    codim = n - krull_dim(ring_pres.carrier_basis())
    return len(rels) == codim


def _carrier_local_dim_certified(ring_pres, locus):
    """(dimension of the carrier's local ring, exactness flag).

    Points and rational-point primes go through the tangent cone, which
    is exact.  Other primes use dim(carrier) - dim(carrier/P): an upper
    bound in general (the true value maximizes over the components
    through the locus only), exact when the carrier is certified
    equidimensional.
    """
    if isinstance(locus, PointSpec):
        return _tangent_cone_dim(ring_pres, locus), True
    x = _prime_as_rational_point(locus)
    if x is not None:
        return _tangent_cone_dim(ring_pres, x), True
    total = krull_dim(ring_pres.carrier_basis())
    d = total - krull_dim(locus.total_basis)
    return d, _ambient_equidimensional(ring_pres)


def carrier_local_dim(ring_pres: RingPresentation, locus) -> int:
    """Dimension of the carrier's local ring at the locus."""
    return _carrier_local_dim_certified(ring_pres, locus)[0]


def local_dim(ring_pres: RingPresentation, locus, flat=False) -> int:
    """Krull dimension of the local ring of the presented ring at the locus.

    Over a Z/p^2 base the presentation only determines the ring modulo
    p^2; the dimension of the mixed-characteristic local ring is carrier
    dimension + 1 only when the user asserts flatness over Z_(p).
    """
    d1 = carrier_local_dim(ring_pres, locus)
    if ring_pres.is_charp:
        return d1
    if not flat:
        raise FlatnessRequiredError(
            "local dimension over a Z/p^2 base needs the flatness assertion "
            "(--flat): it is not determined by the mod-p^2 presentation")
    return d1 + 1


# ---------------------------------------------------------------------------
# cotangent space

def _div_p(val: Residue, k):
    """(val / p) in the residue field, for val divisible by p in the cover."""
    ring = val.ring
    p = ring.p
    if isinstance(ring, PrimeSquareRing):
        assert val.value % p == 0
        return k.of_int(val.value // p)
    assert all(v % p == 0 for v in val.value)
    return Residue(k, tuple((v // p) % p for v in val.value))


def _cotangent_rows(ring_pres, polys, x: PointSpec):
    """One row per polynomial: its class in m/m^2 of the ambient at x.

    Over a characteristic-p base the row is the evaluated (untwisted)
    gradient; over Z/p^2 a leading column f(x~)/p is prepended, the
    coordinate along the generator p of the maximal ideal.  The value
    f(x~)/p is well defined up to the gradient columns, so ranks of row
    collections are lift-independent.
    """
    k = x.field
    n = len(ring_pres.variables)
    rows = []
    charp = ring_pres.is_charp
    cover = None if charp else p2_cover_of(k)
    lifts = None if charp else [lift_to_p2(c) for c in x.coordinates]
    for f in polys:
        fbar = f if charp else f.map_coeffs(ring_pres.residue_field,
                                            reduce_mod_p)
        grad = [fbar.derivative(j).evaluate(x.coordinates, k) for j in range(n)]
        if charp:
            rows.append(grad)
        else:
            val = f.evaluate(lifts, cover)
            rows.append([_div_p(val, k)] + grad)
    return rows


def cotangent_dim(ring_pres: RingPresentation, x: PointSpec) -> int:
    """dim_k m/m^2 of the local ring at x (the embedding dimension)."""
    n = len(ring_pres.variables)
    ambient = n if ring_pres.is_charp else n + 1
    rows = _cotangent_rows(ring_pres, ring_pres.relations, x)
    return ambient - rank_over_field(rows)


def check_prdx(ring_pres: RingPresentation, x: PointSpec) -> dict:
    """Exactness-of-dimensions check at a closed point.

    The cotangent sequence forces dim fiber = dim m/m^2 at points (the
    residue field is finite, hence perfect, so its differential term
    vanishes).  The two sides come from independent matrices: the fiber
    from the twisted relation columns, the cotangent space from the
    untwisted Jacobian with the p-column.
    """
    fw = present_fw(ring_pres)
    fiber = fiber_dim_point(fw, x)
    cot = cotangent_dim(ring_pres, x)
    return {
        "point": x.describe(),
        "fiber_dim": fiber,
        "cotangent_dim": cot,
        "consistent": fiber == cot,
    }


# ---------------------------------------------------------------------------
# regularity

@dataclass(frozen=True)
class RegularityVerdict:
    verdict: str  # Regular | NotRegular | Unknown
    fiber_dim: int
    d: object  # int, or None when undetermined
    r: int
    flatness_mode: object  # "charP" | "flatness-asserted" | None
    certificate: dict
    explanation: str = ""

    def describe(self):
        out = {
            "verdict": self.verdict,
            "fiber_dim": self.fiber_dim,
            "d": self.d,
            "r": self.r,
            "flatness_mode": self.flatness_mode,
            "certificate": self.certificate,
        }
        if self.explanation:
            out["explanation"] = self.explanation
        return out


def _point_certificate(fw, x):
    fld = x.field
    rows = [
        [str(col[i].evaluate(x.coordinates, fld)) for col in fw.columns]
        for i in range(fw.ngens)
    ]
    return {"generators": list(fw.generators), "evaluated_matrix": rows}


def _prime_certificate(fw, P):
    nf = P.total_basis.normal_form
    rows = [[str(nf(col[i])) for col in fw.columns] for i in range(fw.ngens)]
    return {"generators": list(fw.generators), "reduced_matrix": rows}


def regularity(ring_pres: RingPresentation, locus, flat=False) -> RegularityVerdict:
    """The rank criterion: regular iff the fiber has dimension d + r.

    Characteristic-p inputs satisfy the criterion's hypotheses outright
    (finitely presented over a perfect field).  A Z/p^2 base needs the
    user-asserted flatness flag; without it the verdict is Unknown, since
    the mod-p^2 presentation cannot distinguish flat lifts.
    """
    fw = present_fw(ring_pres)
    if isinstance(locus, PointSpec):
        fiber = fiber_dim_point(fw, locus)
        cert = _point_certificate(fw, locus)
    else:
        fiber = fiber_dim_prime(fw, locus)
        cert = _prime_certificate(fw, locus)
    cert["rank"] = fw.ngens - fiber
    r = residue_p_rank(ring_pres, locus)
    if not ring_pres.is_charp and not flat:
        return RegularityVerdict(
            "Unknown", fiber, None, r, None, cert,
            explanation="local dimension over a Z/p^2 base needs the "
                        "flatness assertion (--flat): it is not determined "
                        "by the mod-p^2 presentation")
    d, exact = _carrier_local_dim_certified(ring_pres, locus)
    if not ring_pres.is_charp:
        d += 1
    mode = "charP" if ring_pres.is_charp else "flatness-asserted"
    if fiber == d + r:
        if exact:
            return RegularityVerdict("Regular", fiber, d, r, mode, cert)
        return RegularityVerdict(
            "Unknown", fiber, d, r, mode, cert,
            explanation="fiber matches d + r, but d is only an upper bound "
                        "here: the carrier is not certified equidimensional "
                        "along the prime")
    if fiber > d + r:
        # d never underestimates, so exceeding it is conclusive
        return RegularityVerdict("NotRegular", fiber, d, r, mode, cert)
    return RegularityVerdict(
        "Unknown", fiber, d, r, mode, cert,
        explanation="fiber dimension below d + r: the locus is outside the "
                    "guaranteed class (non-equidimensional ambient at a prime)")


def check_split_sequence(ring_pres: RingPresentation, quotient_rels, x,
                         flat=False) -> dict:
    """Rank additivity for a regular quotient pair at a point.

    For B = A/(g_1..g_s) with A and B both regular at x, the conormal
    classes of the g_i split off: dim fiber_A = s' + dim fiber_B, where
    s' is the dimension of the span of the g_i in m/m^2 of A at x.  The
    left side uses twisted matrices, the right side untwisted ones, so
    agreement is a genuine cross-check.
    """
    quotient_rels = tuple(quotient_rels)
    target = ring_pres.with_extra_relations(quotient_rels)
    xA = x if x.ring == ring_pres else PointSpec(ring_pres, x.coordinates)
    xB = PointSpec(target, xA.coordinates)
    verdict_A = regularity(ring_pres, xA, flat=flat)
    verdict_B = regularity(target, xB, flat=flat)
    base_rows = _cotangent_rows(ring_pres, ring_pres.relations, xA)
    quot_rows = _cotangent_rows(ring_pres, quotient_rels, xA)
    s_prime = rank_over_field(base_rows + quot_rows) - rank_over_field(base_rows)
    fiber_A = fiber_dim_point(present_fw(ring_pres), xA)
    fiber_B = fiber_dim_point(present_fw(target), xB)
    return {
        "point": xA.describe(),
        "regular_A": verdict_A.verdict,
        "regular_B": verdict_B.verdict,
        "hypothesis_ok": verdict_A.verdict == "Regular"
                         and verdict_B.verdict == "Regular",
        "fiber_A": fiber_A,
        "fiber_B": fiber_B,
        "s_prime": s_prime,
        "consistent": fiber_A == s_prime + fiber_B,
    }


# ---------------------------------------------------------------------------
# point enumeration (sweeps and oracles)

def rational_points(ring_pres: RingPresentation, field=None):
    """All points of the carrier with coordinates in the given field."""
    k = field if field is not None else ring_pres.residue_field
    rels = []
    for f in ring_pres.relations_mod_p():
        rels.append(f if f.ring.coeff == k
                    else f.map_coeffs(k, lambda c: embed(c, k)))
    out = []
    for combo in itertools.product(list(k.elements()),
                                   repeat=len(ring_pres.variables)):
        if all(f.evaluate(list(combo), k).is_zero() for f in rels):
            out.append(PointSpec(ring_pres, tuple(combo)))
    return out
