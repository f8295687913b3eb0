"""Exact arithmetic for the coefficient rings of the kernel.

Five rings appear: the integers Z (used for exact lifts), the prime field
F_p, the ring Z/p^2, the field F_{p^e} presented as F_p[t]/(m), and the
Galois ring GR(p^2, e) = (Z/p^2)[t]/(m~) obtained by lifting m coefficient
by coefficient.  Elements are stored as canonical least-nonnegative
representatives: plain ints for Z, F_p and Z/p^2, coefficient tuples of
fixed length e for the extensions.  Every operation reduces eagerly.
"""

from __future__ import annotations

import math
from functools import reduce

from .errors import PresentationError


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality check."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _require_prime(p):
    if not isinstance(p, int) or not is_prime(p):
        raise PresentationError(f"{p!r} is not a prime number")


class Residue:
    """An element of one of the coefficient rings: a ring tag plus value."""

    __slots__ = ("ring", "value")

    def __init__(self, ring, value):
        self.ring = ring
        self.value = value

    def __add__(self, other):
        other = self.ring.coerce(other)
        return Residue(self.ring, self.ring._add(self.value, other.value))

    __radd__ = __add__

    def __sub__(self, other):
        other = self.ring.coerce(other)
        return Residue(self.ring, self.ring._sub(self.value, other.value))

    def __rsub__(self, other):
        return self.ring.coerce(other) - self

    def __mul__(self, other):
        other = self.ring.coerce(other)
        return Residue(self.ring, self.ring._mul(self.value, other.value))

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(self.ring, self.ring._neg(self.value))

    def __pow__(self, n):
        assert isinstance(n, int) and n >= 0
        return Residue(self.ring, self.ring._pow(self.value, n))

    def inv(self):
        return Residue(self.ring, self.ring._inv(self.value))

    def frobenius(self):
        """The p-th power of the element."""
        return self ** self.ring.p

    def is_zero(self):
        return self.ring._is_zero(self.value)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.of_int(other)
        if not isinstance(other, Residue):
            return NotImplemented
        return self.ring == other.ring and self.value == other.value

    def __hash__(self):
        return hash((self.ring, self.value))

    def __str__(self):
        return self.ring._to_str(self.value)

    def __repr__(self):
        return f"{self.ring.tag()}:{self.ring._to_str(self.value)}"


class _BaseRing:
    """Common plumbing shared by the concrete coefficient rings."""

    def of_int(self, n: int) -> Residue:
        return Residue(self, self._of_int(n))

    def coerce(self, x) -> Residue:
        if isinstance(x, Residue):
            if x.ring != self:
                raise PresentationError(
                    f"cannot mix elements of {x.ring.tag()} and {self.tag()}"
                )
            return x
        if isinstance(x, int):
            return self.of_int(x)
        raise PresentationError(f"cannot coerce {x!r} into {self.tag()}")

    def zero(self):
        return self.of_int(0)

    def one(self):
        return self.of_int(1)

    def _pow(self, a, n):
        # square and multiply
        r = self._of_int(1)
        b = a
        while n:
            if n & 1:
                r = self._mul(r, b)
            b = self._mul(b, b)
            n >>= 1
        return r

    def _is_zero(self, a):
        return a == self._of_int(0)

    def __repr__(self):
        return self.tag()


class IntegerRing(_BaseRing):
    """Exact integers, used for flat lifts of Z/p^2 data."""

    p = 0
    is_field = False

    def tag(self):
        return "ZZ"

    def _of_int(self, n):
        return n

    def _add(self, a, b):
        return a + b

    def _sub(self, a, b):
        return a - b

    def _mul(self, a, b):
        return a * b

    def _neg(self, a):
        return -a

    def _inv(self, a):
        if a in (1, -1):
            return a
        raise PresentationError(f"{a} is not invertible in ZZ")

    def _to_str(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")


ZZ = IntegerRing()


class _ModRing(_BaseRing):
    """Z/m for m = p or p^2."""

    def __init__(self, p):
        _require_prime(p)
        self.p = p

    def _of_int(self, n):
        return n % self.modulus

    def _add(self, a, b):
        return (a + b) % self.modulus

    def _sub(self, a, b):
        return (a - b) % self.modulus

    def _mul(self, a, b):
        return (a * b) % self.modulus

    def _neg(self, a):
        return (-a) % self.modulus

    def _to_str(self, a):
        return str(a)

    def elements(self):
        for v in range(self.modulus):
            yield Residue(self, v)

    def __eq__(self, other):
        return type(other) is type(self) and other.p == self.p

    def __hash__(self):
        return hash((type(self).__name__, self.p))


class PrimeField(_ModRing):
    """The prime field F_p."""

    is_field = True

    @property
    def modulus(self):
        return self.p

    def tag(self):
        return f"Fp({self.p})"

    def _inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"0 is not invertible in F_{self.p}")
        return pow(a, -1, self.p)

    def order(self):
        return self.p

    @property
    def degree(self):
        return 1


class PrimeSquareRing(_ModRing):
    """The ring Z/p^2; p generates its nilradical."""

    is_field = False

    @property
    def modulus(self):
        return self.p * self.p

    def tag(self):
        return f"Zp2({self.p})"

    def _inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"{a} is not a unit in Z/{self.modulus}")
        return pow(a, -1, self.modulus)

    def residue_field(self):
        return PrimeField(self.p)


# ---------------------------------------------------------------------------
# dense univariate helpers over Z/m, used for extension-ring arithmetic and
# for the irreducibility search; polynomials are coefficient lists, low
# degree first, no trailing zeros

def _upoly_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _upoly_mul(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % m
    return _upoly_trim(out)


def _upoly_rem(a, b, m):
    # remainder of a by b; the leading coefficient of b must be a unit mod m
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    linv = pow(lb, -1, m)
    while len(a) - 1 >= db and a:
        la = a[-1]
        if la:
            q = (la * linv) % m
            shift = len(a) - 1 - db
            for i, bi in enumerate(b):
                a[shift + i] = (a[shift + i] - q * bi) % m
        _upoly_trim(a)
        if not a:
            break
    return a


def _is_irreducible(coeffs, p):
    """Brute-force factor search for a monic polynomial over F_p."""
    e = len(coeffs) - 1
    assert e >= 1 and coeffs[-1] == 1
    if e == 1:
        return True
    for d in range(1, e // 2 + 1):
        for k in range(p**d):
            cand = []
            kk = k
            for _ in range(d):
                cand.append(kk % p)
                kk //= p
            cand.append(1)  # monic
            if not _upoly_rem(coeffs, cand, p):
                return False
    return True


def default_minpoly(p, e):
    """The first monic irreducible of degree e over F_p.

    Candidates are enumerated by the integer whose little-endian base-p
    digits are the non-leading coefficients, so the choice is deterministic
    and documented.
    """
    _require_prime(p)
    assert 1 <= e <= 8, "extension degree limited to 8"
    for k in range(p**e):
        coeffs = []
        kk = k
        for _ in range(e):
            coeffs.append(kk % p)
            kk //= p
        coeffs.append(1)
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class _ExtensionRing(_BaseRing):
    """(Z/m)[t]/(minpoly): common machinery for F_{p^e} and GR(p^2, e)."""

    def __init__(self, p, e, minpoly=None):
        _require_prime(p)
        assert 1 <= e <= 8, "extension degree limited to 8"
        self.p = p
        self.degree = e
        if minpoly is None:
            minpoly = default_minpoly(p, e)
        minpoly = tuple(c % p for c in minpoly)
        if len(minpoly) != e + 1 or minpoly[-1] != 1:
            raise PresentationError(
                f"minimal polynomial must be monic of degree {e}"
            )
        if not _is_irreducible(list(minpoly), p):
            raise PresentationError(
                f"{list(minpoly)} is not irreducible over F_{p}"
            )
        self.minpoly = minpoly
        self._red = [c % self.modulus for c in minpoly]

    def _of_int(self, n):
        return (n % self.modulus,) + (0,) * (self.degree - 1)

    def _add(self, a, b):
        m = self.modulus
        return tuple((x + y) % m for x, y in zip(a, b))

    def _sub(self, a, b):
        m = self.modulus
        return tuple((x - y) % m for x, y in zip(a, b))

    def _neg(self, a):
        m = self.modulus
        return tuple((-x) % m for x in a)

    def _mul(self, a, b):
        prod = _upoly_mul(list(a), list(b), self.modulus)
        rem = _upoly_rem(prod, self._red, self.modulus)
        rem = rem + [0] * (self.degree - len(rem))
        return tuple(rem)

    def _is_zero(self, a):
        return all(x == 0 for x in a)

    def _to_str(self, a):
        parts = []
        for i in range(self.degree - 1, -1, -1):
            c = a[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("t" if c == 1 else f"{c}*t")
            else:
                parts.append(f"t^{i}" if c == 1 else f"{c}*t^{i}")
        return " + ".join(parts) if parts else "0"

    def generator(self):
        return Residue(self, (0, 1) + (0,) * (self.degree - 2)) \
            if self.degree >= 2 else self.one()

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and other.p == self.p
            and other.degree == self.degree
            and other.minpoly == self.minpoly
        )

    def __hash__(self):
        return hash((type(self).__name__, self.p, self.minpoly))


class GaloisField(_ExtensionRing):
    """F_{p^e} = F_p[t]/(m) with m monic irreducible."""

    is_field = True

    @property
    def modulus(self):
        return self.p

    def tag(self):
        return f"Fq({self.p},{self.degree})"

    def order(self):
        return self.p**self.degree

    def _inv(self, a):
        if self._is_zero(a):
            raise ZeroDivisionError("0 is not invertible")
        return self._pow(a, self.order() - 2)

    def elements(self):
        e, p = self.degree, self.p
        for k in range(p**e):
            v, kk = [], k
            for _ in range(e):
                v.append(kk % p)
                kk //= p
            yield Residue(self, tuple(v))


class GaloisRing(_ExtensionRing):
    """GR(p^2, e) = (Z/p^2)[t]/(m~), the unramified degree-e cover of Z/p^2.

    m~ is the coefficient-wise lift of the chosen irreducible over F_p;
    the quotient is local with residue field F_{p^e}.
    """

    is_field = False

    @property
    def modulus(self):
        return self.p * self.p

    def tag(self):
        return f"GR({self.p}^2,{self.degree})"

    def _inv(self, a):
        if all(x % self.p == 0 for x in a):
            raise ZeroDivisionError(f"{a} is not a unit in {self.tag()}")
        # lift the inverse of the residue through one Hensel step
        k = self.residue_field()
        abar = tuple(x % self.p for x in a)
        ibar = k._inv(abar)
        i0 = tuple(ibar) if isinstance(ibar, tuple) else ibar
        x = tuple(c % self.modulus for c in i0)
        # x <- x * (2 - a x)
        t = self._sub(self._of_int(2), self._mul(a, x))
        return self._mul(x, t)

    def residue_field(self):
        return GaloisField(self.p, self.degree, self.minpoly)


def residue_field_of(ring):
    """The residue field of a p^2-torsion base ring (identity on fields)."""
    if isinstance(ring, (PrimeField, GaloisField)):
        return ring
    if isinstance(ring, PrimeSquareRing):
        return PrimeField(ring.p)
    if isinstance(ring, GaloisRing):
        return ring.residue_field()
    raise PresentationError(f"no residue field for {ring!r}")


def p2_cover_of(ring):
    """The flat Z/p^2-cover of a base ring (identity on p^2-torsion rings)."""
    if isinstance(ring, (PrimeSquareRing, GaloisRing)):
        return ring
    if isinstance(ring, PrimeField):
        return PrimeSquareRing(ring.p)
    if isinstance(ring, GaloisField):
        return GaloisRing(ring.p, ring.degree, ring.minpoly)
    raise PresentationError(f"no Z/p^2 cover for {ring!r}")


def reduce_mod_p(a: Residue) -> Residue:
    """Push an element of Z/p^2 or GR(p^2, e) to the residue field."""
    ring = a.ring
    k = residue_field_of(ring)
    if k == ring:
        return a
    if isinstance(ring, PrimeSquareRing):
        return Residue(k, a.value % ring.p)
    return Residue(k, tuple(x % ring.p for x in a.value))


def lift_to_p2(a: Residue) -> Residue:
    """Lift a residue-field element into Z/p^2 or GR(p^2, e) verbatim."""
    ring = a.ring
    cover = p2_cover_of(ring)
    if cover == ring:
        return a
    return Residue(cover, a.value)


def embed(a: Residue, target) -> Residue:
    """Embed a into the target ring, when a canonical embedding exists."""
    if a.ring == target:
        return a
    if isinstance(a.ring, PrimeField):
        if isinstance(target, (GaloisField, PrimeSquareRing, GaloisRing)) \
                and target.p == a.ring.p:
            return target.of_int(a.value)
    if isinstance(a.ring, PrimeSquareRing) and isinstance(target, GaloisRing) \
            and target.p == a.ring.p:
        return target.of_int(a.value)
    raise PresentationError(f"no embedding of {a.ring.tag()} into {target.tag()}")


# ---------------------------------------------------------------------------
# Witt data

def witt_P(p):
    """The carry polynomial of Witt-vector addition.

    P = ((X+Y)^p - X^p - Y^p)/p, an integer polynomial with coefficients
    binom(p, i)/p = (p-1)!/(i!(p-i)!) on X^i Y^(p-i), 0 < i < p.
    """
    from .mpoly import PolyRing  # deferred: mpoly imports this module

    _require_prime(p)
    ring = PolyRing(ZZ, ("X", "Y"))
    terms = {}
    for i in range(1, p):
        terms[(i, p - i)] = ZZ.of_int(math.comb(p, i) // p)
    return ring.poly(terms)


def witt_P_scalars(a: Residue, b: Residue) -> Residue:
    """P(a, b) evaluated on two elements of the same ring."""
    ring = a.ring
    b = ring.coerce(b)
    p = ring.p
    total = ring.zero()
    for i in range(1, p):
        c = math.comb(p, i) // p
        total = total + ring.of_int(c) * a**i * b ** (p - i)
    return total


def w_base(a: Residue) -> Residue:
    """The derivation constant of the base ring: w(a) = w_base(a) * w(p).

    Over Z/p^2 this is (a~ - a~^p)/p mod p for any integer lift a~, a
    quantity independent of the lift.  Over GR(p^2, e) the same element is
    extracted through the Witt coordinates: write a = u^p + p*v and return
    v^p in the residue field.
    """
    ring = a.ring
    if isinstance(ring, PrimeSquareRing):
        p = ring.p
        lift = a.value  # canonical representative in [0, p^2)
        return PrimeField(p).of_int((lift - lift**p) // p)
    if isinstance(ring, GaloisRing):
        p = ring.p
        k = ring.residue_field()
        abar = reduce_mod_p(a)
        # abar^(p^(e-1)) is the inverse of Frobenius on F_{p^e}
        u = abar ** (p ** (k.degree - 1))
        ulift = lift_to_p2(u)
        diff = a - ulift**p
        assert all(x % p == 0 for x in diff.value)
        v = Residue(k, tuple((x // p) % p for x in diff.value))
        return v.frobenius()
    raise PresentationError(f"w_base needs a p^2-torsion ring, got {ring.tag()}")
