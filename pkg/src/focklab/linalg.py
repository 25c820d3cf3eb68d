"""Exact sparse linear algebra over the rationals and GF(p).

Rows are sparse dicts column->coefficient.  Integer rows are kept gcd-stripped
during elimination, so ranks are exact over Q with no coefficient blowup
surprises.  A vectorized GF(p) rank (numpy) provides the fast certificate used
by the structure-algebra sandwich on the largest catalog cases: a mod-p rank
only ever underestimates the rational rank, so it bounds nullity from above
and can never produce a false pass when paired with exactly verified
nullspace elements.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

IntRow = dict[int, int]
FracRow = dict[int, Fraction]


def _strip(row: IntRow) -> IntRow:
    g = 0
    for v in row.values():
        g = gcd(g, abs(v))
        if g == 1:
            return row
    if g > 1:
        return {j: v // g for j, v in row.items()}
    return row


def int_rank(rows: Iterable[IntRow]) -> int:
    """Exact rank over Q of integer sparse rows (fraction-free elimination)."""
    echelon: dict[int, IntRow] = {}  # pivot column -> row
    for row in rows:
        r = _strip({j: v for j, v in row.items() if v})
        while r:
            j = min(r)
            piv = echelon.get(j)
            if piv is None:
                echelon[j] = r
                break
            a, b = piv[j], r[j]
            g = gcd(abs(a), abs(b))
            ca, cb = a // g, b // g
            out: IntRow = {}
            for k, v in r.items():
                out[k] = ca * v
            for k, v in piv.items():
                w = out.get(k, 0) - cb * v
                if w:
                    out[k] = w
                elif k in out:
                    del out[k]
            r = _strip(out)
    return len(echelon)


def int_rank_mod(rows: Sequence[IntRow], ncols: int, p: int = 2147483629) -> int:
    """Rank over GF(p) via vectorized elimination; <= rank over Q, always."""
    import numpy as np

    if not rows:
        return 0
    mat = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, v in row.items():
            mat[i, j] = v % p
    rank = 0
    nrows = mat.shape[0]
    for col in range(ncols):
        if rank == nrows:
            break
        sub = mat[rank:, col]
        nz = np.nonzero(sub)[0]
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            mat[[rank, piv]] = mat[[piv, rank]]
        inv = pow(int(mat[rank, col]), p - 2, p)
        mat[rank] = (mat[rank] * inv) % p
        rest = mat[rank + 1 :, col]
        nzr = np.nonzero(rest)[0]
        if nzr.size:
            idx = rank + 1 + nzr
            mat[idx] = (mat[idx] - np.outer(mat[idx, col], mat[rank])) % p
        rank += 1
    return rank


class FractionSpan:
    """Incrementally built row space over Q with exact membership tests."""

    def __init__(self):
        self.rows: dict[int, FracRow] = {}  # pivot column -> row, pivot coeff 1

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec: FracRow) -> FracRow:
        v = {j: c for j, c in vec.items() if c}
        while v:
            j = min(v)
            row = self.rows.get(j)
            if row is None:
                return v
            c = v[j]
            for k, w in row.items():
                nv = v.get(k, Fraction(0)) - c * w
                if nv:
                    v[k] = nv
                elif k in v:
                    del v[k]
        return v

    def contains(self, vec: FracRow) -> bool:
        return not self.reduce(vec)

    def add(self, vec: FracRow) -> bool:
        """Insert vec; True if the span grew."""
        r = self.reduce(vec)
        if not r:
            return False
        j = min(r)
        c = r[j]
        self.rows[j] = {k: w / c for k, w in r.items()}
        return True


def frac_nullspace(rows: Sequence[FracRow], ncols: int) -> list[FracRow]:
    """Nullspace basis of the homogeneous system rows . x = 0, exactly.

    Gauss-Jordan on sparse Fraction rows; returns one basis vector per free
    column, each with the free coordinate set to 1.
    """
    echelon: dict[int, FracRow] = {}
    for row in rows:
        v = {j: c for j, c in row.items() if c}
        while v:
            j = min(v)
            piv = echelon.get(j)
            if piv is None:
                c = v[j]
                echelon[j] = {k: w / c for k, w in v.items()}
                break
            c = v[j]
            for k, w in piv.items():
                nv = v.get(k, Fraction(0)) - c * w
                if nv:
                    v[k] = nv
                elif k in v:
                    del v[k]
    # back-substitute to reduced form
    for j in sorted(echelon, reverse=True):
        row = echelon[j]
        for j2 in sorted(echelon):
            if j2 <= j:
                continue
            c = row.get(j2)
            if c:
                for k, w in echelon[j2].items():
                    nv = row.get(k, Fraction(0)) - c * w
                    if nv:
                        row[k] = nv
                    elif k in row:
                        del row[k]
    pivots = set(echelon)
    basis: list[FracRow] = []
    for free in range(ncols):
        if free in pivots:
            continue
        vec: FracRow = {free: Fraction(1)}
        for j, row in echelon.items():
            c = row.get(free)
            if c:
                vec[j] = -c
        basis.append(vec)
    return basis
