"""Brute-force differential modules of small finite rings.

The universal module is the quotient of the free module on one symbol
[a] per ring element by the submodule generated by the two derivation
relations, over all ordered pairs:

    [a+b] - [a] - [b] + P(a,b)[p]      and      [ab] - b^p[a] - a^p[b]

Because p annihilates the universal module, the free module can be taken
over A/pA, and realizing A/pA-coordinates over an F_p-basis turns the
whole computation into one F_p rank: with e = dim_Fp(A/pA), the free
space has e * |A| coordinates, each relation contributes e rows (one per
basis multiplier, products decomposed in the basis), and the dimension
is e * |A| minus the rank.  When A/pA = F_p this is the plain |A| - rank
count.  The result is the ground truth against which the presentation
pipeline is cross-checked.

Finite rings over a Z/p^2 base are enumerated exactly: with I the
relation ideal, U = (I : p) mod p equals I_1 + the sigma-image of the
syzygies of the reduced relations (sigma(h) = (sum h~_i f_i)/p), and an
element has a unique canonical form r + p*h with r supported on the
standard monomials of I_1 and h reduced modulo U.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PresentationError, SizeRefusalError
from .fwcore import RingPresentation, present_fw
from .linalg import ModPSpan
from .modarith import (
    GaloisField,
    PrimeField,
    PrimeSquareRing,
    Residue,
    lift_to_p2,
    reduce_mod_p,
)
from .mpoly import (
    GroebnerBasis,
    SparsePoly,
    divide,
    groebner,
    groebner_extended,
    krull_dim,
    normal_form,
    standard_monomials,
)

# |A| caps keeping the relation matrix at desk scale
DEFAULT_SIZE_CAP = {2: 16, 3: 81, 5: 25}


def _size_cap(p, max_size):
    if max_size is not None:
        return max_size
    cap = DEFAULT_SIZE_CAP.get(p)
    if cap is None:
        raise SizeRefusalError(
            f"no default oracle bound for p = {p}; pass an explicit max size")
    return cap


def _field_digits(c: Residue):
    if isinstance(c.value, tuple):
        return list(c.value)
    return [c.value]


class FiniteRing:
    """A finite ring of p-power order with verified operation tables.

    Elements are canonical-form polynomials; operations go through
    supplied closures and are tabulated by index at construction, then
    every ring axiom is checked exhaustively on the tables.
    """

    def __init__(self, p, elements, add_fn, mul_fn, basis_lifts, reduce_vec,
                 label):
        self.p = p
        self.elements = list(elements)
        self.size = len(self.elements)
        self.label = label
        self._add_fn = add_fn
        self._mul_fn = mul_fn
        self.basis_lifts = list(basis_lifts)
        self._reduce_vec = reduce_vec
        k, n = 1, self.size
        while n % p == 0:
            n //= p
        if n != 1:
            raise PresentationError("finite ring must have p-power order")
        self.index = {}
        for i, a in enumerate(self.elements):
            if a in self.index:
                raise PresentationError("duplicate elements in enumeration")
            self.index[a] = i
        n = self.size
        add = np.zeros((n, n), dtype=np.int64)
        mul = np.zeros((n, n), dtype=np.int64)
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                add[i, j] = self.index[add_fn(a, b)]
                mul[i, j] = self.index[mul_fn(a, b)]
        self.add = add
        self.mul = mul
        self.zero_idx = self._find_identity(add)
        self.one_idx = self._find_identity(mul)
        self._verify_axioms()
        self.neg = np.argmax(add == self.zero_idx, axis=1)
        self.basis_idx = [self.index[b] for b in self.basis_lifts]
        self.p_one_idx = self.int_mult_idx(p, self.one_idx)
        self.frob = np.array([self.pow_idx(i, p) for i in range(n)],
                             dtype=np.int64)
        self.reduce_mat = np.array(
            [list(reduce_vec(a)) for a in self.elements], dtype=np.int64) % p
        ident = self.reduce_mat[self.basis_idx]
        if not (ident == np.eye(self.carrier_dim, dtype=np.int64)).all():
            raise PresentationError("basis lifts do not reduce to unit vectors")

    def _find_identity(self, table):
        n = self.size
        want = np.arange(n)
        for i in range(n):
            if (table[i] == want).all():
                return i
        raise PresentationError("operation table has no identity element")

    def _verify_axioms(self):
        add, mul, n = self.add, self.mul, self.size
        ok = (
            (add == add.T).all()
            and (mul == mul.T).all()
            and (add[add, :] == add[:, add]).all()
            and (mul[mul, :] == mul[:, mul]).all()
            and (mul[:, add] == add[mul[:, :, None], mul[:, None, :]]).all()
            and (add == self.zero_idx).any(axis=1).all()
        )
        if not ok:
            raise PresentationError(
                f"operation tables of {self.label} violate the ring axioms")

    @property
    def carrier_dim(self):
        return len(self.basis_lifts)

    def int_mult_idx(self, c, i):
        """Index of c*a for a nonnegative integer c."""
        total = self.zero_idx
        cur = i
        while c:
            if c & 1:
                total = self.add[total, cur]
            cur = self.add[cur, cur]
            c >>= 1
        return total

    def pow_idx(self, i, k):
        total = self.one_idx
        cur = i
        while k:
            if k & 1:
                total = self.mul[total, cur]
            cur = self.mul[cur, cur]
            k >>= 1
        return total

    def witt_carry_idx(self, i, j):
        """Index of P(a_i, a_j) = sum binom(p,k)/p a_i^k a_j^(p-k)."""
        p = self.p
        total = self.zero_idx
        for k in range(1, p):
            term = self.mul[self.pow_idx(i, k), self.pow_idx(j, p - k)]
            total = self.add[total, self.int_mult_idx(math.comb(p, k) // p, term)]
        return total

    def reordered(self, perm):
        """The same ring with elements listed in a different order."""
        elems = [self.elements[t] for t in perm]
        return FiniteRing(self.p, elems, self._add_fn, self._mul_fn,
                          self.basis_lifts, self._reduce_vec, self.label)

    @classmethod
    def from_presentation(cls, ring_pres: RingPresentation, max_size=None):
        if ring_pres.is_charp:
            return _finite_ring_charp(ring_pres, max_size)
        return _finite_ring_zp2(ring_pres, max_size)

    def __repr__(self):
        return f"FiniteRing({self.label}, size={self.size})"


def _finite_ring_charp(ring_pres, max_size):
    k = ring_pres.base
    cring = ring_pres.carrier_ring
    gb = groebner(ring_pres.relations_mod_p(), ring=cring)
    if gb.is_trivial():
        raise PresentationError("the presented ring is the zero ring")
    if krull_dim(gb) > 0:
        raise SizeRefusalError("the presented ring is infinite")
    S = standard_monomials(gb)
    size = k.order() ** len(S)
    cap = _size_cap(ring_pres.p, max_size)
    if size > cap:
        raise SizeRefusalError(f"ring has {size} elements, over the bound {cap}")
    elems = []
    for combo in itertools.product(list(k.elements()), repeat=len(S)):
        elems.append(cring.poly(dict(zip(S, combo))))
    gens = []
    e = getattr(k, "degree", 1)
    t = k.generator() if isinstance(k, GaloisField) else k.one()
    for m in S:
        c = k.one()
        for _ in range(e):
            gens.append(cring.poly({m: c}))
            c = c * t
    if len(gens) != e * len(S):
        raise AssertionError("basis size mismatch")

    def reduce_vec(a):
        out = []
        for m in S:
            c = a.terms.get(m, k.zero())
            out.extend(_field_digits(c))
        return out

    return FiniteRing(
        ring_pres.p, elems,
        add_fn=lambda a, b: a + b,
        mul_fn=lambda a, b: gb.normal_form(a * b),
        basis_lifts=gens, reduce_vec=reduce_vec,
        label=_label_of(ring_pres),
    )


def _finite_ring_zp2(ring_pres, max_size):
    p = ring_pres.p
    base = ring_pres.base
    zring = ring_pres.poly_ring
    kfield = ring_pres.residue_field
    cring = ring_pres.carrier_ring
    relations = list(ring_pres.relations)
    fbars = ring_pres.relations_mod_p()

    def over_p(g):
        """g with every coefficient divided by p, landing mod p."""
        def div(c):
            assert c.value % p == 0, "expected a p-divisible coefficient"
            return kfield.of_int(c.value // p)
        return g.map_coeffs(kfield, div)

    def lift(g):
        return g.map_coeffs(base, lift_to_p2)

    if relations:
        basis, reps, syzygies = groebner_extended(fbars)
        gb1 = GroebnerBasis(cring, tuple(basis))
        exact = []
        for rep in reps:
            acc = zring.zero()
            for c, f in zip(rep, relations):
                acc = acc + lift(c) * f
            exact.append(acc)
        ugens = list(basis)
        for s in syzygies:
            acc = zring.zero()
            for c, f in zip(s, relations):
                acc = acc + lift(c) * f
            u = over_p(acc)
            if not u.is_zero():
                ugens.append(u)
        gbU = groebner(ugens, ring=cring)
    else:
        gb1 = GroebnerBasis(cring, ())
        exact = []
        gbU = GroebnerBasis(cring, ())
    if gb1.is_trivial():
        raise PresentationError("the presented ring is the zero ring")
    if krull_dim(gb1) > 0:
        raise SizeRefusalError("the presented ring is infinite")
    S = standard_monomials(gb1)
    stairU = [] if gbU.is_trivial() else standard_monomials(gbU)
    size = p ** (len(S) + len(stairU))
    cap = _size_cap(p, max_size)
    if size > cap:
        raise SizeRefusalError(f"ring has {size} elements, over the bound {cap}")

    def canonicalize(g):
        gbar = g.map_coeffs(kfield, reduce_mod_p)
        if gb1.polys:
            quots, r = divide(gbar, list(gb1.polys))
        else:
            quots, r = [], gbar
        acc = g
        for q, bt in zip(quots, exact):
            if not q.is_zero():
                acc = acc - lift(q) * bt
        rlift = lift(r)
        h = over_p(acc - rlift)
        h = normal_form(h, gbU)
        return rlift + lift(h) * p

    elems = []
    hpos = [S.index(m) for m in stairU]
    for rdigits in itertools.product(range(p), repeat=len(S)):
        for hdigits in itertools.product(range(p), repeat=len(stairU)):
            terms = dict(zip(S, rdigits))
            for pos, hd in zip(hpos, hdigits):
                terms[S[pos]] = terms[S[pos]] + p * hd
            elems.append(zring.poly({m: base.of_int(c)
                                     for m, c in terms.items()}))

    def reduce_vec(a):
        return [a.terms.get(m, base.zero()).value % p for m in S]

    return FiniteRing(
        p, elems,
        add_fn=lambda a, b: canonicalize(a + b),
        mul_fn=lambda a, b: canonicalize(a * b),
        basis_lifts=[zring.poly({m: base.one()}) for m in S],
        reduce_vec=reduce_vec,
        label=_label_of(ring_pres),
    )


def _label_of(ring_pres):
    d = ring_pres.describe()
    rel = ", ".join(d["relations"])
    core = f"{d['base']}[{', '.join(d['vars'])}]" if d["vars"] else d["base"]
    return f"{core}/({rel})" if rel else core


# ---------------------------------------------------------------------------
# the universal module

def relation_rows(ring: FiniteRing, families=("add", "mul")):
    """Yield numpy relation rows of the universal module, in batches.

    One block of e coordinates per ring element, e = dim of A/pA.  Each
    relation is instantiated once per A/pA-basis multiplier beta_k: a
    term c*[x] of the relation places the basis decomposition of
    beta_k * c into the block of x.  Both families are symmetric in
    (a, b), so ordered pairs with b >= a suffice.
    """
    p, n, e = ring.p, ring.size, ring.carrier_dim
    red = ring.reduce_mat
    mul = ring.mul
    bidx = ring.basis_idx
    p1 = ring.p_one_idx
    batch = []
    for a in range(n):
        for b in range(a, n):
            if "add" in families:
                s = ring.add[a, b]
                carry = ring.witt_carry_idx(a, b)
                for k in range(e):
                    row = np.zeros(e * n, dtype=np.int64)
                    beta = bidx[k]
                    row[s * e:(s + 1) * e] += red[beta]
                    row[a * e:(a + 1) * e] -= red[beta]
                    row[b * e:(b + 1) * e] -= red[beta]
                    row[p1 * e:(p1 + 1) * e] += red[mul[beta, carry]]
                    batch.append(row % p)
            if "mul" in families:
                m = mul[a, b]
                for k in range(e):
                    row = np.zeros(e * n, dtype=np.int64)
                    beta = bidx[k]
                    row[m * e:(m + 1) * e] += red[beta]
                    row[a * e:(a + 1) * e] -= red[mul[beta, ring.frob[b]]]
                    row[b * e:(b + 1) * e] -= red[mul[beta, ring.frob[a]]]
                    batch.append(row % p)
            if len(batch) >= 1024:
                yield np.array(batch)
                batch = []
    if batch:
        yield np.array(batch)


@dataclass
class UniversalModule:
    """The brute-force differential module of a finite ring."""

    ring: FiniteRing
    dimension: int
    ncols: int
    rank: int
    span: ModPSpan = field(repr=False)

    def free_coords(self):
        """Coordinates (element index, basis index) spanning the quotient."""
        taken = set(self.span.pivots)
        e = self.ring.carrier_dim
        return [(c // e, c % e) for c in range(self.ncols) if c not in taken]

    def basis_certificates(self):
        out = []
        for a, k in self.free_coords():
            beta = self.ring.elements[self.ring.basis_idx[k]]
            out.append(f"({beta}) * w({self.ring.elements[a]})")
        return out

    def action_matrix(self, r_idx):
        """Matrix of multiplication by a ring element on the free coords."""
        free = self.free_coords()
        e = self.ring.carrier_dim
        cols = []
        for a, k in free:
            prod = self.ring.mul[r_idx, self.ring.basis_idx[k]]
            vec = np.zeros(self.ncols, dtype=np.int64)
            vec[a * e:(a + 1) * e] = self.ring.reduce_mat[prod]
            vec = self.span.reduce(vec)[0]
            cols.append([vec[x * e + t] for (x, t) in free])
        return np.array(cols, dtype=np.int64).T

    def describe(self):
        return {
            "ring": self.ring.label,
            "size": self.ring.size,
            "dimension": self.dimension,
            "basis": self.basis_certificates(),
        }


def brute_fw(ring: FiniteRing) -> UniversalModule:
    """The universal module, by one big F_p rank computation."""
    ncols = ring.carrier_dim * ring.size
    span = ModPSpan(ring.p, ncols)
    for batch in relation_rows(ring):
        span.add_rows(batch)
        if span.rank == ncols:
            break
    return UniversalModule(
        ring=ring,
        dimension=ncols - span.rank,
        ncols=ncols,
        rank=span.rank,
        span=span,
    )


# ---------------------------------------------------------------------------
# cross-checking the presentation pipeline

def presented_fp_dimension(ring_pres: RingPresentation) -> int:
    """Total F_p-dimension of the presented module, for finite carriers.

    The carrier is expanded as an F_p-space on (field basis) x (standard
    monomials); the module relations are all basis multiples of the
    presented columns.
    """
    fw = present_fw(ring_pres)
    gb = fw.carrier
    k = fw.carrier_ring.coeff
    if gb.is_trivial():
        raise PresentationError("the presented ring is the zero ring")
    if krull_dim(gb) > 0:
        raise PresentationError("carrier is infinite; no total F_p-dimension")
    S = standard_monomials(gb)
    e = getattr(k, "degree", 1)
    t = k.generator() if isinstance(k, GaloisField) else k.one()
    scalars = []
    c = k.one()
    for _ in range(e):
        scalars.append(c)
        c = c * t

    def digits(poly):
        out = []
        for m in S:
            out.extend(_field_digits(poly.terms.get(m, k.zero())))
        return out

    total = e * len(S) * fw.ngens
    span = ModPSpan(ring_pres.p, total)
    rows = []
    for col in fw.columns:
        for m in S:
            for sc in scalars:
                u = fw.carrier_ring.poly({m: sc})
                row = []
                for entry in col:
                    row.extend(digits(gb.normal_form(u * entry)))
                rows.append(row)
    if rows:
        span.add_rows(np.array(rows, dtype=np.int64))
    return total - span.rank


def cross_check(ring_pres: RingPresentation, max_size=None) -> dict:
    """Compare the brute-force dimension with the presented dimension."""
    fr = FiniteRing.from_presentation(ring_pres, max_size=max_size)
    um = brute_fw(fr)
    pres = presented_fp_dimension(ring_pres)
    return {
        "ring": fr.label,
        "size": fr.size,
        "brute_dim": um.dimension,
        "presented_dim": pres,
        "match": um.dimension == pres,
    }
