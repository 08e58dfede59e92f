"""Relation families satisfied by k-strong Lie algebras, and their text format.

The basic object is the slot pattern ``x s_1 x s_2 ... s_{n-1} x``: putting
``x = a + lambda*b`` and collecting the coefficient of ``lambda^j`` gives
``slot_sum(n, j, seps)``, a sum over all ways of placing ``j`` copies of b
and ``n - j`` copies of a in the slots.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import combinations, product
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .freealg import (
    EMPTY,
    Multiweight,
    ParseError,
    Poly,
    Word,
    generator_names,
    multiweight_of,
    parse_poly,
)
from .gf import check_modulus
from .linalg import mat_inverse

SUPPORTED_K = (2, 3, 4, 5)
WHICH = ("short", "long", "all")


class RelationError(ValueError):
    pass


class HomogeneityError(RelationError):
    def __init__(self, label: str, mw1: Multiweight, mw2: Multiweight, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}relation {label!r} has mixed multiweights {mw1} and {mw2}")
        self.label = label
        self.multiweights = (mw1, mw2)
        self.line = line


def _first_two_multiweights(f: Poly):
    seen = []
    for w in f.as_dict():
        mw = multiweight_of(w, f.nvars)
        if mw not in seen:
            seen.append(mw)
            if len(seen) == 2:
                break
    return seen


@dataclass(frozen=True)
class Relation:
    label: str
    poly: Poly
    multiweight: Multiweight


@dataclass(frozen=True)
class RelationSet:
    """Labeled multihomogeneous relations over F_p.

    Equality and hashing ignore ``provenance`` and ``name`` so that a set read
    back from a file compares equal to the one that was written.
    """

    k: int
    p: int
    relations: tuple[Relation, ...]
    nvars: int = 2
    names: tuple[str, ...] = ()
    provenance: str = field(default="generated", compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", generator_names(self.nvars))
        seen = set()
        for r in self.relations:
            if r.label in seen:
                raise RelationError(f"duplicate label {r.label!r}")
            seen.add(r.label)
            if r.poly.p != self.p or r.poly.nvars != self.nvars:
                raise RelationError(f"relation {r.label!r} lives over a different field or alphabet")
            mws = _first_two_multiweights(r.poly)
            if len(mws) > 1:
                raise HomogeneityError(r.label, mws[0], mws[1])

    @classmethod
    def from_polys(cls, k: int, p: int, items, nvars: int = 2, provenance="generated", name="", names=()):
        rels = []
        for label, f in items:
            mws = _first_two_multiweights(f)
            if len(mws) > 1:
                raise HomogeneityError(label, mws[0], mws[1])
            mw = mws[0] if mws else (0,) * nvars
            rels.append(Relation(label, f, mw))
        return cls(k, p, tuple(rels), nvars, tuple(names), provenance, name)

    def __len__(self):
        return len(self.relations)

    def __iter__(self) -> Iterator[Relation]:
        return iter(self.relations)

    @property
    def labels(self) -> list[str]:
        return [r.label for r in self.relations]

    def get(self, label: str) -> Relation:
        for r in self.relations:
            if r.label == label:
                return r
        raise KeyError(f"unknown relation label {label!r}")

    def __contains__(self, label):
        return any(r.label == label for r in self.relations)

    def polys(self) -> list[Poly]:
        return [r.poly for r in self.relations]

    def subset(self, labels: Sequence[str], name: str = "") -> RelationSet:
        wanted = set(labels)
        missing = wanted - set(self.labels)
        if missing:
            raise KeyError(f"unknown relation labels {sorted(missing)}")
        rels = tuple(r for r in self.relations if r.label in wanted)
        return RelationSet(self.k, self.p, rels, self.nvars, self.names, self.provenance, name)

    def union(self, other: RelationSet, name: str = "") -> RelationSet:
        if (other.p, other.nvars) != (self.p, self.nvars):
            raise RelationError("cannot merge relation sets over different fields or alphabets")
        rels = self.relations + tuple(r for r in other.relations if r.label not in self)
        return RelationSet(self.k, self.p, rels, self.nvars, self.names, self.provenance, name)

    def with_swaps(self, name: str = "") -> RelationSet:
        return RelationSet(self.k, self.p, _add_swaps(self.relations, self.nvars), self.nvars,
                           self.names, self.provenance, name or self.name)

    def describe(self) -> str:
        return self.name or f"k{self.k}_{self.provenance}"


def _add_swaps(rels: Sequence[Relation], nvars: int) -> tuple[Relation, ...]:
    """Append the a<->b image of every relation not already present up to scalar."""
    out = list(rels)
    known = {r.poly.monic() for r in rels}
    for r in rels:
        s = r.poly.swap(0, 1)
        key = s.monic()
        if key in known:
            continue
        known.add(key)
        out.append(Relation(r.label + "'", s, multiweight_of(next(iter(s.as_dict())), nvars)))
    return tuple(out)


# -- slot sums --------------------------------------------------------------------


def _assemble(letters: Sequence[int], seps: Sequence[Word]) -> Word:
    w: list[int] = []
    for i, x in enumerate(letters):
        w.append(x)
        if i < len(seps):
            w.extend(seps[i])
    return tuple(w)


def slot_sum(n: int, j: int, seps: Sequence[Sequence[int]] | None = None, p: int = 2, nvars: int = 2) -> Poly:
    """Sum of ``x_1 s_1 x_2 ... s_{n-1} x_n`` over all placements of j b's and n-j a's."""
    seps = [tuple(s) for s in (seps if seps is not None else [EMPTY] * (n - 1))]
    if len(seps) != n - 1:
        raise RelationError(f"expected {n - 1} separators for {n} slots, got {len(seps)}")
    if not 0 <= j <= n:
        raise RelationError(f"b-count {j} out of range 0..{n}")
    terms = {}
    for pos in combinations(range(n), j):
        letters = [1 if i in pos else 0 for i in range(n)]
        w = _assemble(letters, seps)
        terms[w] = terms.get(w, 0) + 1
    return Poly(terms, p, nvars)


def multiset_slot_sum(counts: Sequence[int], seps: Sequence[Sequence[int]], p: int, nvars: int) -> Poly:
    """Slot sum over all arrangements of a letter multiset; counts[g] copies of generator g."""
    n = sum(counts)
    seps = [tuple(s) for s in seps]
    if len(seps) != n - 1:
        raise RelationError(f"expected {n - 1} separators for {n} slots, got {len(seps)}")
    terms: dict[Word, int] = {}
    remaining = list(counts)
    buf: list[int] = []

    def rec():
        if len(buf) == n:
            w = _assemble(buf, seps)
            terms[w] = terms.get(w, 0) + 1
            return
        for g, c in enumerate(remaining):
            if c:
                remaining[g] -= 1
                buf.append(g)
                rec()
                buf.pop()
                remaining[g] += 1

    rec()
    return Poly(terms, p, nvars)


@dataclass
class LambdaExpansion:
    """Expansion of the slot pattern at x = a + lambda*b, kept as lambda-tagged terms.

    ``terms[(j, word)]`` is the coefficient of ``lambda^j * word``.
    """

    n: int
    seps: tuple[Word, ...]
    p: int
    terms: dict[tuple[int, Word], int]


def lambda_expansion(n: int, seps: Sequence[Sequence[int]] | None = None, p: int = 2) -> LambdaExpansion:
    seps = tuple(tuple(s) for s in (seps if seps is not None else [EMPTY] * (n - 1)))
    if len(seps) != n - 1:
        raise RelationError(f"expected {n - 1} separators for {n} slots, got {len(seps)}")
    terms: dict[tuple[int, Word], int] = {}
    for letters in product((0, 1), repeat=n):
        key = (sum(letters), _assemble(letters, seps))
        terms[key] = (terms.get(key, 0) + 1) % p
    return LambdaExpansion(n, seps, p, {k: v for k, v in terms.items() if v})


@dataclass
class LambdaComponents:
    """The lambda^1 .. lambda^(n-1) components of an expansion.

    Their vanishing follows from I(x)^n = 0 only when the field has at least
    n elements, which is what ``min_field_size`` records.
    """

    n: int
    components: list[Poly]
    min_field_size: int

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def field_size_ok(self, q: int) -> bool:
        return q >= self.min_field_size


def vandermonde_extract(expansion: LambdaExpansion, n: int | None = None) -> LambdaComponents:
    n = expansion.n if n is None else n
    comps = []
    for j in range(1, n):
        comps.append(Poly({w: c for (t, w), c in expansion.terms.items() if t == j}, expansion.p, 2))
    return LambdaComponents(n, comps, n)


def vandermonde_solve(values: Sequence[Poly], lambdas: Sequence[int], p: int) -> list[Poly]:
    """Recover A_1..A_m from the evaluations sum_j lambda_i^j A_j, i = 1..m.

    Needs m distinct nonzero scalars in F_p, so p > m.
    """
    m = len(values)
    lam = [x % p for x in lambdas]
    if len(lam) != m or len(set(lam)) != m or 0 in lam:
        raise RelationError(f"need {m} distinct nonzero scalars in F_{p}")
    v = np.array([[pow(x, j, p) for j in range(1, m + 1)] for x in lam], dtype=np.int64)
    inv = mat_inverse(v, p)
    out = []
    for j in range(m):
        acc = Poly.zero(p, values[0].nvars)
        for i in range(m):
            acc = acc + values[i].scale(int(inv[j, i]))
        out.append(acc)
    return out


def evaluate_expansion(expansion: LambdaExpansion, lam: int) -> Poly:
    """The polynomial obtained by fixing lambda to a scalar, dropping the pure terms."""
    p = expansion.p
    terms: dict[Word, int] = {}
    for (t, w), c in expansion.terms.items():
        if 0 < t < expansion.n:
            terms[w] = terms.get(w, 0) + c * pow(lam, t, p)
    return Poly(terms, p, 2)


# -- generated families -------------------------------------------------------------


def _sep_label(s: Word, names) -> str:
    return "".join(names[x] for x in s) if s else "1"


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for head in range(n + 1):
        for tail in _compositions(n - head, parts - 1):
            yield (head,) + tail


def generate_strong_relations(
    n: int,
    separator_pool: Sequence[Sequence[int]],
    max_degree: int,
    p: int = 2,
    nvars: int = 2,
) -> RelationSet:
    """All mixed slot sums of the n-slot pattern over separators from the pool.

    With two generators these are the lambda^j components for 1 <= j <= n-1;
    with more generators, every letter multiset using at least two distinct
    generators. Terms of total degree above ``max_degree`` are skipped and
    duplicates up to a nonzero scalar dropped.
    """
    pool = [tuple(s) for s in separator_pool]
    if not pool:
        raise RelationError("separator pool is empty")
    names = generator_names(nvars)
    p = check_modulus(p)
    seen: set[Poly] = set()
    items = []
    for counts in _compositions(n, nvars):
        if sum(1 for c in counts if c) < 2:
            continue
        for seps in product(pool, repeat=n - 1):
            if n + sum(len(s) for s in seps) > max_degree:
                continue
            if nvars == 2:
                f = slot_sum(n, counts[1], seps, p, nvars)
                tag = str(counts[1])
            else:
                f = multiset_slot_sum(counts, seps, p, nvars)
                tag = "".join(map(str, counts))
            if f.is_zero():
                continue
            key = f.monic()
            if key in seen:
                continue
            seen.add(key)
            label = f"T{tag}_" + "_".join(_sep_label(s, names) for s in seps) if seps else f"T{tag}"
            items.append((label, f))
    return RelationSet.from_polys(n, p, items, nvars, provenance="generated", name=f"k{n}_generated")


# -- text format ----------------------------------------------------------------------

_HEADER = re.compile(r"#\s*([a-z_]+)\s*=\s*(.*?)\s*$")
_LABEL = re.compile(r"\s*([A-Za-z0-9_']+)\s*:")


def serialize_relset(rs: RelationSet) -> str:
    lines = [f"#k={rs.k}", f"#p={rs.p}"]
    if tuple(rs.names) != generator_names(rs.nvars):
        lines.append("#names=" + ",".join(rs.names))
    elif rs.nvars != 2:
        lines.append(f"#generators={rs.nvars}")
    for r in rs.relations:
        lines.append(f"{r.label}: {r.poly.format(rs.names)}")
    return "\n".join(lines) + "\n"


def parse_relset(text: str, p: int | None = None, k: int | None = None, provenance: str = "file", name: str = "") -> RelationSet:
    header: dict[str, str] = {}
    body: list[tuple[int, str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip():
            continue
        if line.lstrip().startswith("#"):
            m = _HEADER.match(line.strip())
            if m:
                header[m.group(1)] = m.group(2)
            continue
        m = _LABEL.match(line)
        if not m:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError("expected 'LABEL: polynomial'", lineno, col)
        body.append((lineno, m.group(1), line[m.end():], m.end()))

    def header_int(key, given):
        if key in header:
            try:
                val = int(header[key])
            except ValueError:
                raise ParseError(f"bad #{key} header {header[key]!r}", 1, 1) from None
            if given is not None and given != val:
                raise RelationError(f"#{key}={val} in file but {given} requested")
            return val
        return given

    p = header_int("p", p)
    k = header_int("k", k)
    if p is None:
        raise RelationError("no modulus: add a #p= header or pass p")
    if k is None:
        raise RelationError("no strongness: add a #k= header or pass k")
    p = check_modulus(p)
    names = tuple(header["names"].split(",")) if "names" in header else None
    nvars = len(names) if names else int(header.get("generators", 2))
    items = []
    labels = set()
    for lineno, label, src, offset in body:
        if label in labels:
            raise ParseError(f"duplicate label {label!r}", lineno, 1)
        labels.add(label)
        f = parse_poly(src, p, names, nvars, line=lineno, column=offset)
        mws = _first_two_multiweights(f)
        if len(mws) > 1:
            raise HomogeneityError(label, mws[0], mws[1], lineno)
        items.append((label, f))
    return RelationSet.from_polys(k, p, items, nvars, provenance, name, names or ())


def relset_io(obj, **kwargs):
    """Serialize a RelationSet, or parse text into one."""
    if isinstance(obj, RelationSet):
        return serialize_relset(obj)
    return parse_relset(obj, **kwargs)


# -- shipped equation sets -------------------------------------------------------------


def data_dir() -> Path:
    env = os.environ.get("STRONGLIE_DATA")
    if env:
        return Path(env)
    return Path(str(resources.files("stronglie") / "data"))


def _files_for(k: int, which: str) -> list[str]:
    if k in (2, 3):
        return [f"k{k}.rel"]
    if which == "short":
        return [f"k{k}_short.rel"]
    if which == "long":
        return [f"k{k}_long.rel"]
    return [f"k{k}_short.rel", f"k{k}_long.rel"]


def read_data_file(fname: str, p: int) -> RelationSet:
    path = data_dir() / fname
    if not path.exists():
        raise RelationError(f"relation file {path} not found")
    return parse_relset(path.read_text(), p=p, provenance="paper_canned")


@lru_cache(maxsize=None)
def paper_relation_set(k: int, p: int, which: str = "all", swaps: bool = True) -> RelationSet:
    """The displayed equation lists for k = 2..5 together with their a<->b images.

    For k = 2 and 3 there is a single list and ``which`` is ignored.
    """
    if k not in SUPPORTED_K:
        raise RelationError(f"no shipped relation set for k={k}; supported: {SUPPORTED_K}")
    if which not in WHICH:
        raise RelationError(f"which must be one of {WHICH}, got {which!r}")
    p = check_modulus(p)
    rels: tuple[Relation, ...] = ()
    for fname in _files_for(k, which):
        rels += read_data_file(fname, p).relations
    if swaps:
        rels = _add_swaps(rels, 2)
    tag = which if k > 3 else "all"
    return RelationSet(k, p, rels, 2, (), "paper_canned", f"k{k}_{tag}")

