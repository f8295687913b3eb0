"""Presentations of Frobenius-Witt differential modules.

For a ring A presented as base[X_1..X_n]/(f_1..f_m) with base one of
F_p, F_{p^e} or Z/p^2, the module FW(A) of Frobenius-Witt differentials
is p-torsion, hence a module over the carrier B_1 = (base mod p)[X]/(f_i
mod p).  Over Z/p^2[X] the module of the free algebra is free on
w(X_1)..w(X_n), w(p), and dividing by an ideal adds one relation column
w(f) per listed generator f.  The column of a polynomial f is computed
in closed form:

    w(f) = sum_j (df/dX_j)^p e_{w(X_j)}
         + [ sum_m X^(p m) w_base(c_m) - Q(f) mod p ] e_{w(p)}

where Q is the multivariate Witt carry of mpoly.witt_Q.  Bases of
characteristic p are handled by the same formula through the flat cover
Z/p^2 or GR(p^2, e): the relation "p" turns the w(p) coordinate into a
unit column, so it is dropped.  The direct twisted-gradient formula
w_poly_charp is kept as an independent route and compared in the tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import PresentationError
from .modarith import (
    GaloisField,
    GaloisRing,
    PrimeField,
    PrimeSquareRing,
    Residue,
    lift_to_p2,
    p2_cover_of,
    reduce_mod_p,
    residue_field_of,
    w_base,
)
from .mpoly import (
    GroebnerBasis,
    PolyRing,
    SparsePoly,
    frobenius_twist,
    groebner,
    normal_form,
    witt_P_pair,
    witt_Q,
)

BASE_RINGS = (PrimeField, GaloisField, PrimeSquareRing)


@dataclass(frozen=True)
class RingPresentation:
    """base[X_1..X_n]/(f_1..f_m) with the f_i over the base ring."""

    base: object
    variables: tuple
    relations: tuple

    def __post_init__(self):
        if not isinstance(self.base, BASE_RINGS):
            raise PresentationError(
                f"base ring must be Fp, Fq or Zp2, got {self.base!r}")
        ring = self.poly_ring
        for f in self.relations:
            if not isinstance(f, SparsePoly) or f.ring != ring:
                raise PresentationError(
                    "relations must be polynomials over the base in the "
                    "declared variables")

    @property
    def p(self):
        return self.base.p

    @property
    def is_charp(self):
        return self.base.is_field

    @property
    def poly_ring(self):
        return PolyRing(self.base, self.variables)

    @property
    def residue_field(self):
        return residue_field_of(self.base)

    @property
    def carrier_ring(self):
        """Polynomial ring of the carrier B_1 = (base mod p)[X]."""
        return PolyRing(self.residue_field, self.variables)

    def relations_mod_p(self):
        if self.is_charp:
            return list(self.relations)
        k = self.residue_field
        return [f.map_coeffs(k, reduce_mod_p) for f in self.relations]

    def carrier_basis(self):
        return groebner(self.relations_mod_p(), ring=self.carrier_ring)

    def with_extra_relations(self, extra):
        return RingPresentation(self.base, self.variables,
                                self.relations + tuple(extra))

    def describe(self):
        return {
            "base": self.base.tag(),
            "vars": list(self.variables),
            "relations": [str(f) for f in self.relations],
        }


@dataclass(frozen=True)
class FWPresentation:
    """FW(A) as carrier-module: generators and one column per relation."""

    ring: RingPresentation
    carrier_ring: PolyRing
    carrier: GroebnerBasis
    generators: tuple
    columns: tuple
    has_wp: bool

    @property
    def ngens(self):
        return len(self.generators)

    def rows(self):
        """Matrix rows (one per generator) over the carrier."""
        return [
            [col[i] for col in self.columns] for i in range(self.ngens)
        ]

    def describe(self):
        return {
            "carrier": [str(g) for g in self.carrier.polys],
            "generators": list(self.generators),
            "columns": [[str(e) for e in col] for col in self.columns],
        }


def w_poly(f):
    """Coordinates of w(f) in the free module on w(X_1..X_n), w(p).

    f has coefficients in Z/p^2 or GR(p^2, e); the coordinates are
    polynomials over the residue field (the module is p-torsion).
    """
    R = f.ring.coeff
    if not isinstance(R, (PrimeSquareRing, GaloisRing)):
        raise PresentationError("w_poly needs Z/p^2 or GR(p^2,e) coefficients")
    p = R.p
    k = residue_field_of(R)
    kring = f.ring.with_coeff(k)
    out = []
    for j in range(f.ring.nvars):
        dbar = f.derivative(j).map_coeffs(k, reduce_mod_p)
        out.append(frobenius_twist(dbar))
    wp = {}
    for m, c in f.terms.items():
        wb = w_base(c)
        if not wb.is_zero():
            mm = tuple(p * e for e in m)
            prev = wp.get(mm)
            wp[mm] = wb if prev is None else prev + wb
    wp_poly = kring.poly(wp) - witt_Q(f).map_coeffs(k, reduce_mod_p)
    out.append(wp_poly)
    return out


def w_poly_charp(f):
    """Frobenius-twisted gradient: the direct characteristic-p formula."""
    if not f.ring.coeff.is_field:
        raise PresentationError("w_poly_charp needs field coefficients")
    return [frobenius_twist(f.derivative(j)) for j in range(f.ring.nvars)]


def _lift_poly(f):
    """Lift a characteristic-p polynomial into the flat p^2-cover."""
    cover = p2_cover_of(f.ring.coeff)
    return f.map_coeffs(cover, lift_to_p2)


def column_of(ring_pres: RingPresentation, f):
    """The relation column of f, in the generator labels of present_fw.

    For characteristic-p bases the column is computed through the flat
    cover and the w(p) coordinate (killed by the relation p = 0) is
    dropped; entries are returned un-normalized.
    """
    if ring_pres.is_charp:
        return w_poly(_lift_poly(f))[:-1]
    return w_poly(f)


def present_fw(ring_pres: RingPresentation) -> FWPresentation:
    """Present FW(A) over the carrier of A.

    Generators are w of each variable, plus w(p) for a Z/p^2 base; there
    is exactly one column per listed relation, each entry reduced to
    normal form modulo the carrier basis.
    """
    gb = ring_pres.carrier_basis()
    labels = tuple(f"w({v})" for v in ring_pres.variables)
    has_wp = not ring_pres.is_charp
    if has_wp:
        labels = labels + ("w(p)",)
    cols = []
    for f in ring_pres.relations:
        vec = column_of(ring_pres, f)
        cols.append(tuple(gb.normal_form(e) for e in vec))
    return FWPresentation(
        ring=ring_pres,
        carrier_ring=ring_pres.carrier_ring,
        carrier=gb,
        generators=labels,
        columns=tuple(cols),
        has_wp=has_wp,
    )


# ---------------------------------------------------------------------------
# derivation axioms

@dataclass
class AxiomReport:
    p: int
    nvars: int
    trials: int
    seed: int
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def describe(self):
        return {
            "p": self.p,
            "nvars": self.nvars,
            "trials": self.trials,
            "passed": self.trials - len(self.failures),
            "failures": self.failures[:10],
        }


def random_scalar(rng, R):
    if isinstance(R, (GaloisField, GaloisRing)):
        return Residue(R, tuple(rng.randrange(R.modulus) for _ in range(R.degree)))
    if hasattr(R, "modulus"):
        return R.of_int(rng.randrange(R.modulus))
    return R.of_int(rng.randint(-9, 9))


def random_poly(rng, ring, max_terms=3, max_degree=2):
    """A random sparse polynomial with bounded support, for fuzzing."""
    nterms = rng.randint(0, max_terms)
    terms = {}
    for _ in range(nterms):
        m = tuple(rng.randint(0, max_degree) for _ in range(ring.nvars))
        terms[m] = random_scalar(rng, ring.coeff)
    return ring.poly(terms)


def check_axioms(p, nvars, trials=500, seed=0, max_terms=3, max_degree=2):
    """Randomized check of the two derivation axioms on Z/p^2[X].

    For sampled f, g the vectors of w_poly must satisfy, exactly, in the
    free module over F_p[X]:

        w(f+g) = w(f) + w(g) - P(f,g) e_{w(p)}
        w(fg)  = g^p w(f) + f^p w(g)

    with the scalars read mod p.  Any failure is recorded with the pair
    that produced it.
    """
    rng = random.Random(seed)
    base = PrimeSquareRing(p)
    names = tuple(f"x{i+1}" for i in range(nvars))
    ring = PolyRing(base, names)
    k = residue_field_of(base)
    report = AxiomReport(p=p, nvars=nvars, trials=trials, seed=seed)
    for t in range(trials):
        f = random_poly(rng, ring, max_terms, max_degree)
        g = random_poly(rng, ring, max_terms, max_degree)
        wf, wg = w_poly(f), w_poly(g)
        # additivity, with the Witt carry on the w(p) coordinate
        ws = w_poly(f + g)
        expect = [wf[i] + wg[i] for i in range(nvars + 1)]
        expect[nvars] = expect[nvars] - witt_P_pair(f, g).map_coeffs(k, reduce_mod_p)
        ok_add = ws == expect
        # Leibniz with twisted scalars
        wm = w_poly(f * g)
        ftw = frobenius_twist(f.map_coeffs(k, reduce_mod_p))
        gtw = frobenius_twist(g.map_coeffs(k, reduce_mod_p))
        ok_mul = all(
            wm[i] == gtw * wf[i] + ftw * wg[i] for i in range(nvars + 1)
        )
        if not (ok_add and ok_mul):
            report.failures.append({
                "trial": t,
                "f": str(f),
                "g": str(g),
                "additivity": ok_add,
                "leibniz": ok_mul,
            })
    return report


# ---------------------------------------------------------------------------
# base change and relative cokernel

@dataclass(frozen=True)
class PresentationMorphism:
    """A -> B given by images of A's variables as polynomials in B.

    Covers surjections and compositions with localizations (present the
    inverted element of B as an extra variable with relation t*u - 1).
    The morphism must preserve relations; this is enforced on the carrier
    (the mod-p level), and the Z/p^2-level identity is the caller's
    responsibility for mixed bases.
    """

    source: RingPresentation
    target: RingPresentation
    images: tuple

    def __post_init__(self):
        if self.source.p != self.target.p:
            raise PresentationError("morphism must preserve the prime p")
        if self.source.is_charp and not self.target.is_charp:
            raise PresentationError(
                "no ring map from a characteristic-p ring to a Z/p^2 algebra")
        if len(self.images) != len(self.source.variables):
            raise PresentationError("one image per source variable required")
        tring = self.target.poly_ring
        for g in self.images:
            if not isinstance(g, SparsePoly) or g.ring != tring:
                raise PresentationError("images must be polynomials in the target")
        gb = self.target.carrier_basis()
        k = self.target.residue_field
        for f in self.source.relations:
            h = self.push(f).map_coeffs(k, reduce_mod_p) \
                if not self.target.is_charp else self.push(f)
            if not gb.normal_form(h).is_zero():
                raise PresentationError(
                    f"relation {f} is not preserved by the morphism")

    def push(self, f):
        """Image of a source polynomial under the morphism."""
        tring = self.target.poly_ring
        total = tring.zero()
        for m, c in f.terms.items():
            part = tring.constant(self._push_constant(c))
            for img, e in zip(self.images, m):
                if e:
                    part = part * img**e
            total = total + part
        return total

    def _push_constant(self, c: Residue):
        tb = self.target.base
        if c.ring == tb:
            return c
        if isinstance(c.ring, PrimeSquareRing) and tb.is_field:
            return tb.of_int(c.value)
        if isinstance(c.ring, PrimeField):
            return tb.of_int(c.value)
        raise PresentationError(
            f"no coefficient map {c.ring.tag()} -> {tb.tag()}")


@dataclass(frozen=True)
class BaseChangeMap:
    """Matrix of FW(A) tensor B -> FW(B) over B's carrier."""

    morphism: PresentationMorphism
    source_fw: FWPresentation
    target_fw: FWPresentation
    columns: tuple  # one per source generator, entries over target carrier

    def describe(self):
        return {
            "source_generators": list(self.source_fw.generators),
            "target_generators": list(self.target_fw.generators),
            "columns": [[str(e) for e in col] for col in self.columns],
        }


def base_change_map(morph: PresentationMorphism) -> BaseChangeMap:
    """Send each source generator to the column of its image in FW(B).

    w(X_j) goes to w(image_j); w(p) goes to w(p) when the target is a
    Z/p^2 algebra and to zero when the target has characteristic p.
    """
    src_fw = present_fw(morph.source)
    tgt_fw = present_fw(morph.target)
    gb = tgt_fw.carrier
    cols = []
    for img in morph.images:
        vec = column_of(morph.target, img)
        cols.append(tuple(gb.normal_form(e) for e in vec))
    if src_fw.has_wp:
        zero = tgt_fw.carrier_ring.zero()
        unit = [zero] * tgt_fw.ngens
        if tgt_fw.has_wp:
            unit[-1] = tgt_fw.carrier_ring.one()
        cols.append(tuple(unit))
    return BaseChangeMap(morph, src_fw, tgt_fw, tuple(cols))


def relative_cokernel(morph: PresentationMorphism) -> FWPresentation:
    """Coker(FW(A) tensor B -> FW(B)): append the base-change columns."""
    bc = base_change_map(morph)
    tgt = bc.target_fw
    return FWPresentation(
        ring=tgt.ring,
        carrier_ring=tgt.carrier_ring,
        carrier=tgt.carrier,
        generators=tgt.generators,
        columns=tgt.columns + bc.columns,
        has_wp=tgt.has_wp,
    )


def twisted_relative_kahler(morph: PresentationMorphism) -> FWPresentation:
    """Frobenius-twisted relative Kaehler differentials of the carriers.

    Independent route for the cokernel: generators are the twisted dY_k
    of the target carrier, with twisted Jacobian columns of the target
    relations and of the images of the source variables.
    """
    tgt = morph.target
    k = tgt.residue_field
    gb = tgt.carrier_basis()
    cols = []
    for g in tgt.relations_mod_p():
        cols.append(tuple(gb.normal_form(e) for e in w_poly_charp(g)))
    for j in range(len(morph.source.variables)):
        img = morph.push(morph.source.poly_ring.gen(j))
        if not tgt.is_charp:
            img = img.map_coeffs(k, reduce_mod_p)
        cols.append(tuple(gb.normal_form(e) for e in w_poly_charp(img)))
    return FWPresentation(
        ring=tgt,
        carrier_ring=tgt.carrier_ring,
        carrier=gb,
        generators=tuple(f"F*d({v})" for v in tgt.variables),
        columns=tuple(cols),
        has_wp=False,
    )
