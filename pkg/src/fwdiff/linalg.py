"""Exact linear algebra: Gaussian elimination over the small fields,
fraction-free elimination over quotient domains, and a numpy-backed row
space mod p for the brute-force oracle."""

from __future__ import annotations

import numpy as np

from .errors import ZeroDivisorError


def rank_over_field(rows):
    """Rank of a matrix of field Residues by Gaussian elimination."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if not rows[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = rows[rank][col].inv()
        rows[rank] = [inv * x for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and not rows[r][col].is_zero():
                c = rows[r][col]
                rows[r] = [x - c * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def rank_fraction_free(rows, nf):
    """Rank over the fraction field of a quotient domain.

    Entries are polynomials read modulo a Groebner basis through nf; a
    residue is treated as zero exactly when its normal form vanishes, and
    as invertible otherwise.  Elimination is by cross-multiplication, so
    no inverses are ever formed.  If two nonzero residues multiply to
    zero, the quotient was not a domain and ZeroDivisorError names them.
    """
    rows = [[nf(e) for e in r] for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0

    def checked_mul(a, b):
        v = nf(a * b)
        if v.is_zero() and not a.is_zero() and not b.is_zero():
            raise ZeroDivisorError(a, b)
        return v

    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if not rows[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        a = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            b = rows[r][col]
            if b.is_zero():
                continue
            rows[r] = [
                nf(checked_mul(a, rows[r][j]) - checked_mul(b, rows[rank][j]))
                for j in range(ncols)
            ]
            assert rows[r][col].is_zero()
        rank += 1
        if rank == len(rows):
            break
    return rank


class ModPSpan:
    """A growing row space over F_p, kept in reduced row-echelon form.

    Rows are numpy vectors; reduction against the current basis is one
    matrix product in float64, which is exact for the sizes involved
    (p < 256, dimension < 2^40)."""

    def __init__(self, p, ncols):
        self.p = p
        self.ncols = ncols
        self.basis = np.zeros((0, ncols), dtype=np.int64)
        self.pivots = []

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, rows):
        """Reduce rows against the basis; returns the reduced array."""
        rows = np.asarray(rows, dtype=np.int64) % self.p
        if rows.ndim == 1:
            rows = rows[None, :]
        if self.pivots:
            coeff = rows[:, self.pivots].astype(np.float64)
            rows = rows - (coeff @ self.basis.astype(np.float64)).astype(np.int64)
            rows %= self.p
        return rows

    def add_rows(self, rows):
        """Insert rows, growing the echelon basis; returns the new rank."""
        rows = self.reduce(rows)
        for row in rows:
            row = self.reduce(row)[0]  # catch components on pivots added below
            nz = np.flatnonzero(row)
            if nz.size == 0:
                continue
            piv = int(nz[0])
            inv = pow(int(row[piv]), -1, self.p)
            row = (row * inv) % self.p
            # clear the new pivot column in the existing basis
            if self.pivots:
                col = self.basis[:, piv].copy()
                if col.any():
                    self.basis = (self.basis - np.outer(col, row)) % self.p
            self.basis = np.vstack([self.basis, row[None, :]])
            self.pivots.append(piv)
            order = np.argsort(self.pivots)
            self.basis = self.basis[order]
            self.pivots = [self.pivots[i] for i in order]
            if self.rank == self.ncols:
                break
        return self.rank

    def contains(self, row):
        return not self.reduce(row).any()
