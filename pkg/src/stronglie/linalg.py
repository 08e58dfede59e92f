"""Dense row reduction over F_p on int64 numpy arrays.

Entries are kept in [0, p). With p <= 2^31 every product of two residues
fits in int64, and every row update is reduced immediately.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import inverse_mod


@dataclass
class Echelon:
    """Reduced row-echelon form of a matrix ``A``.

    ``rows`` holds the nonzero rows of the RREF, ``pivots[i]`` the pivot
    column of ``rows[i]``. When tracked, ``transform`` satisfies
    ``rows == transform @ A  (mod p)``.
    """

    rows: np.ndarray
    pivots: list[int]
    p: int
    transform: np.ndarray | None = None

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Normal form of ``vec`` and the multipliers used on each basis row."""
        vec = np.asarray(vec, dtype=np.int64) % self.p
        mults = np.zeros(self.rank, dtype=np.int64)
        if self.rank:
            mults = vec[self.pivots].copy()
            vec = (vec - mults @ self.rows) % self.p
        return vec, mults


def as_mod_p(a, p: int) -> np.ndarray:
    return np.array(a, dtype=np.int64, ndmin=2) % p


def rref(a, p: int, track: bool = False) -> Echelon:
    m = as_mod_p(a, p)
    nrows, ncols = m.shape
    t = np.eye(nrows, dtype=np.int64) if track else None
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
            if track:
                t[[r, piv]] = t[[piv, r]]
        inv = inverse_mod(int(m[r, c]), p)
        if inv != 1:
            m[r] = m[r] * inv % p
            if track:
                t[r] = t[r] * inv % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
            if track:
                t[hit] = (t[hit] - np.outer(col[hit], t[r])) % p
        pivots.append(c)
        r += 1
    return Echelon(m[:r].copy(), pivots, p, t[:r].copy() if track else None)


def rank_mod_p(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return rref(a, p).rank


def solve_left(a, b, p: int) -> np.ndarray | None:
    """Some x with ``x @ a == b (mod p)``, or None when b is not in the row space."""
    a = as_mod_p(a, p)
    if a.shape[0] == 0:
        return np.zeros(0, dtype=np.int64) if not np.any(np.asarray(b) % p) else None
    ech = rref(a, p, track=True)
    rest, mults = ech.reduce(b)
    if rest.any():
        return None
    return mults @ ech.transform % p


def mat_inverse(a, p: int) -> np.ndarray:
    a = as_mod_p(a, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix is not square")
    ech = rref(a, p, track=True)
    if ech.rank < n:
        raise ZeroDivisionError("matrix is singular mod p")
    return ech.transform
