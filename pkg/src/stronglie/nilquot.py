"""Membership in two-sided ideals of the free algebra, one multiweight at a time.

For multihomogeneous relations the multiweight-mw part of the ideal is
spanned by the products u*r*v whose multiweights add up to mw, so a single
dense row reduction decides membership exactly. Rows remember the triple
(u, r, v) they came from, which gives explicit certificates.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .freealg import Multiweight, Poly, Word, parse_poly, sub_multiweights, word_str, words_of_multiweight
from .linalg import Echelon, rref
from .relations import RelationSet


class MultiweightError(ValueError):
    pass


@dataclass(frozen=True)
class CertTerm:
    coeff: int
    left: Word
    label: str
    right: Word


@dataclass
class Certificate:
    """A combination sum coeff * left * relation * right."""

    terms: list[CertTerm] = field(default_factory=list)

    def __len__(self):
        return len(self.terms)

    def to_json(self, names=None) -> list[dict]:
        def ws(w):
            return word_str(w, names) if w else ""

        return [{"coeff": t.coeff, "left": ws(t.left), "rel": t.label, "right": ws(t.right)} for t in self.terms]

    def dumps(self, names=None) -> str:
        return json.dumps(self.to_json(names))

    @classmethod
    def from_json(cls, data, p: int, names=None) -> Certificate:
        if isinstance(data, str):
            data = json.loads(data)

        def word(s):
            if not s:
                return ()
            f = parse_poly(s, p, names)
            (w, _), = f.terms()
            return w

        return cls([CertTerm(int(d["coeff"]) % p, word(d["left"]), d["rel"], word(d["right"])) for d in data])


@dataclass
class IdealBasis:
    """Row-reduced spanning set of the multiweight-mw part of an ideal."""

    p: int
    mw: Multiweight
    words: tuple[Word, ...]
    echelon: Echelon
    generator_log: list[tuple[Word, str, Word]]
    relset: RelationSet

    def __post_init__(self):
        self.index = {w: i for i, w in enumerate(self.words)}
        self.echelon.rows.setflags(write=False)
        if self.echelon.transform is not None:
            self.echelon.transform.setflags(write=False)

    @property
    def rank(self) -> int:
        return self.echelon.rank

    @property
    def rows(self) -> np.ndarray:
        return self.echelon.rows

    @property
    def pivots(self) -> dict[int, int]:
        return {c: i for i, c in enumerate(self.echelon.pivots)}

    @property
    def quotient_dimension(self) -> int:
        return len(self.words) - self.rank

    def vector(self, f: Poly) -> np.ndarray:
        v = np.zeros(len(self.words), dtype=np.int64)
        for w, c in f.as_dict().items():
            try:
                v[self.index[w]] = c
            except KeyError:
                raise MultiweightError(f"term {word_str(w)} is not of multiweight {self.mw}") from None
        return v

    def poly(self, v: np.ndarray) -> Poly:
        nz = np.flatnonzero(v)
        return Poly({self.words[i]: int(v[i]) for i in nz}, self.p, self.relset.nvars)

    def row_poly(self, i: int) -> Poly:
        return self.poly(self.rows[i])

    def original_row(self, i: int) -> Poly:
        u, label, v = self.generator_log[i]
        return self.relset.get(label).poly.sandwich(u, v)

    def reduce(self, f: Poly) -> Poly:
        nf, _ = self.echelon.reduce(self.vector(f))
        return self.poly(nf)

    def is_member(self, f: Poly) -> bool:
        nf, _ = self.echelon.reduce(self.vector(f))
        return not nf.any()

    def certificate(self, f: Poly) -> Certificate | None:
        nf, mults = self.echelon.reduce(self.vector(f))
        if nf.any():
            return None
        if self.rank == 0:
            return Certificate()
        coeffs = mults @ self.echelon.transform % self.p
        terms = []
        for i in np.flatnonzero(coeffs):
            u, label, v = self.generator_log[i]
            terms.append(CertTerm(int(coeffs[i]), u, label, v))
        return Certificate(terms)


def _build_rows(rs: RelationSet, mw: Multiweight):
    if len(mw) != rs.nvars:
        raise MultiweightError(f"multiweight {mw} does not match {rs.nvars} generators")
    words = words_of_multiweight(mw)
    index = {w: i for i, w in enumerate(words)}
    rows: list[np.ndarray] = []
    log: list[tuple[Word, str, Word]] = []
    for rel in rs.relations:
        if rel.poly.is_zero():
            continue
        diff = tuple(m - q for m, q in zip(mw, rel.multiweight))
        if any(x < 0 for x in diff):
            continue
        terms = list(rel.poly.as_dict().items())
        for mw_u in sub_multiweights(diff):
            mw_v = tuple(d - x for d, x in zip(diff, mw_u))
            for u in words_of_multiweight(mw_u):
                for v in words_of_multiweight(mw_v):
                    row = np.zeros(len(words), dtype=np.int64)
                    for w, c in terms:
                        row[index[u + w + v]] = c
                    rows.append(row)
                    log.append((u, rel.label, v))
    return words, rows, log


@lru_cache(maxsize=512)
def ideal_basis(rs: RelationSet, mw: Multiweight) -> IdealBasis:
    mw = tuple(int(x) for x in mw)
    words, rows, log = _build_rows(rs, mw)
    if rows:
        ech = rref(np.vstack(rows), rs.p, track=True)
    else:
        ech = Echelon(np.zeros((0, len(words)), dtype=np.int64), [], rs.p, np.zeros((0, 0), dtype=np.int64))
    return IdealBasis(rs.p, mw, words, ech, log, rs)


def reduce(f: Poly, basis: IdealBasis) -> Poly:
    if not f.is_zero() and f.multiweights() != {basis.mw}:
        raise MultiweightError(f"polynomial has multiweights {sorted(f.multiweights())}, basis is for {basis.mw}")
    return basis.reduce(f)


def is_member(f: Poly, rs: RelationSet, want_certificate: bool = False) -> tuple[bool, Certificate | None]:
    """Decide f in the ideal; non-homogeneous f is split into components."""
    if f.p != rs.p or f.nvars != rs.nvars:
        raise MultiweightError("polynomial and relation set live over different fields or alphabets")
    cert = Certificate()
    for mw, part in f.components().items():
        basis = ideal_basis(rs, mw)
        if not want_certificate:
            if not basis.is_member(part):
                return False, None
            continue
        c = basis.certificate(part)
        if c is None:
            return False, None
        cert.terms.extend(c.terms)
    return True, (cert if want_certificate else None)


def expand_certificate(c: Certificate, rs: RelationSet) -> Poly:
    total = Poly.zero(rs.p, rs.nvars)
    for t in c.terms:
        r = rs.get(t.label)
        total = total + r.poly.sandwich(t.left, t.right).scale(t.coeff)
    return total


def verify_certificate(c: Certificate, f: Poly, rs: RelationSet) -> bool:
    return expand_certificate(c, rs) == f


def multiweights_of_degree(d: int, r: int):
    def rec(n, parts):
        if parts == 1:
            yield (n,)
            return
        for head in range(n, -1, -1):
            for tail in rec(n - head, parts - 1):
                yield (head,) + tail

    yield from rec(d, r)


def quotient_dimensions(rs: RelationSet, max_degree: int, min_degree: int = 1, jobs: int = 1) -> dict[Multiweight, int]:
    mws = [mw for d in range(min_degree, max_degree + 1) for mw in multiweights_of_degree(d, rs.nvars)]

    def dim(mw):
        return ideal_basis(rs, mw).quotient_dimension

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            dims = list(ex.map(dim, mws))
    else:
        dims = [dim(mw) for mw in mws]
    return dict(zip(mws, dims))
