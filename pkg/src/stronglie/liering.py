"""Finite-dimensional Lie rings over F_p given by structure constants.

Convention: ad(x) is the map v -> [v, x], and matrices act on row vectors,
so ``v @ ad(x) @ ad(y) == [[v, x], y]``. A word x1 x2 ... xn in the
enveloping algebra therefore evaluates to the left-to-right matrix product.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .gf import ExtFieldTable, check_modulus
from .linalg import rref

EXHAUSTIVE_LIMIT = 10**6
DEFAULT_SAMPLES = 10**4


class LieError(ValueError):
    def __init__(self, message: str, triple: tuple[int, ...] | None = None):
        super().__init__(message)
        self.triple = triple


@dataclass(frozen=True)
class LieRing:
    p: int
    constants: np.ndarray = field(repr=False, compare=False)
    names: tuple[str, ...] = ()
    label: str = ""

    def __post_init__(self):
        p = check_modulus(self.p)
        c = np.asarray(self.constants, dtype=np.int64) % p
        if c.ndim != 3 or c.shape[0] != c.shape[1] or c.shape[1] != c.shape[2]:
            raise LieError(f"constants must be a d x d x d array, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "constants", c)
        d = c.shape[0]
        if not self.names:
            object.__setattr__(self, "names", tuple(f"e{i + 1}" for i in range(d)))
        elif len(self.names) != d:
            raise LieError(f"{len(self.names)} names for dimension {d}")
        _validate(c, p)

    @property
    def dim(self) -> int:
        return self.constants.shape[0]

    def basis(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim, dtype=np.int64)
        e[i] = 1
        return e

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64), self.constants) % self.p

    def ad(self, x) -> np.ndarray:
        """Matrix of v -> [v, x] acting on row vectors."""
        return np.einsum("j,ijk->ik", np.asarray(x, dtype=np.int64), self.constants) % self.p

    def ad_all(self, xs: np.ndarray) -> np.ndarray:
        return np.einsum("nj,ijk->nik", xs, self.constants) % self.p

    def elements(self) -> np.ndarray:
        return np.array(list(itertools.product(range(self.p), repeat=self.dim)), dtype=np.int64).reshape(-1, self.dim)

    def size(self) -> int:
        return self.p**self.dim

    def is_abelian(self) -> bool:
        return not self.constants.any()

    def format(self) -> str:
        lines = [f"p={self.p} dim={self.dim} names={','.join(self.names)}"]
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                v = self.constants[i, j]
                if v.any():
                    terms = " + ".join(f"{int(c)}*{self.names[k]}" for k, c in enumerate(v) if c)
                    lines.append(f"{self.names[i]},{self.names[j]} -> {terms}")
        return "\n".join(lines) + "\n"


def _validate(c: np.ndarray, p: int) -> None:
    d = c.shape[0]
    for i in range(d):
        if c[i, i].any():
            raise LieError(f"[e{i + 1}, e{i + 1}] != 0", (i + 1, i + 1))
        for j in range(i + 1, d):
            if ((c[i, j] + c[j, i]) % p).any():
                raise LieError(f"[e{i + 1}, e{j + 1}] != -[e{j + 1}, e{i + 1}]", (i + 1, j + 1))
    # [[e_i, e_j], e_k] + [[e_j, e_k], e_i] + [[e_k, e_i], e_j]
    t = np.einsum("ijm,mkn->ijkn", c, c)
    jac = (t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)) % p
    bad = np.argwhere(jac.any(axis=3))
    if bad.size:
        i, j, k = (int(x) + 1 for x in bad[0])
        raise LieError(f"Jacobi identity fails for basis triple ({i},{j},{k})", (i, j, k))


def liering_new(p: int, constants, names=(), label: str = "") -> LieRing:
    return LieRing(p, np.asarray(constants), tuple(names), label)


def from_brackets(p: int, dim: int, brackets: dict[tuple[int, int], dict[int, int]], names=(), label="") -> LieRing:
    """Build from {(i, j): {k: c}} with i < j (0-based); antisymmetric completion is automatic."""
    c = np.zeros((dim, dim, dim), dtype=np.int64)
    for (i, j), vec in brackets.items():
        for k, v in vec.items():
            c[i, j, k] += v
            c[j, i, k] -= v
    return LieRing(p, c, tuple(names), label)


# -- subspaces and ideals --------------------------------------------------------------


@dataclass
class Subspace:
    ring: LieRing
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, v) -> bool:
        if not np.any(np.asarray(v) % self.ring.p):
            return True
        if self.dim == 0:
            return False
        return rref(np.vstack([self.basis, v]), self.ring.p).rank == self.dim

    def bracket_with(self, other: Subspace) -> Subspace:
        vecs = [self.ring.bracket(x, y) for x in self.basis for y in other.basis]
        return span(self.ring, vecs)

    def is_abelian(self) -> bool:
        return all(not self.ring.bracket(x, y).any() for x in self.basis for y in self.basis)


def span(ring: LieRing, vecs) -> Subspace:
    vecs = [np.asarray(v, dtype=np.int64) for v in vecs]
    if not vecs:
        return Subspace(ring, np.zeros((0, ring.dim), dtype=np.int64))
    return Subspace(ring, rref(np.vstack(vecs), ring.p).rows)


def principal_ideal(ring: LieRing, x) -> Subspace:
    """Span of x, [x, L], [x, L, L], ... (a fixpoint reached in at most dim steps)."""
    cur = span(ring, [x])
    frontier = list(cur.basis)
    while frontier:
        new = []
        for v in frontier:
            adv = ring.ad(v)  # row i is [e_i, v]; we need [v, e_i] = -row i
            for w in (-adv) % ring.p:
                if w.any() and not cur.contains(w):
                    cur = span(ring, list(cur.basis) + [w])
                    new.append(w)
        frontier = new
    return cur


def lower_central_series(ring: LieRing, sub: Subspace, steps: int) -> list[Subspace]:
    """gamma_1 = sub, gamma_{i+1} = [gamma_i, sub]."""
    series = [sub]
    for _ in range(steps - 1):
        series.append(series[-1].bracket_with(sub))
    return series


# -- predicates -------------------------------------------------------------------------


@dataclass
class OracleResult:
    holds: bool
    exhaustive: bool
    checked: int
    witness: tuple | None = None
    seed: int | None = None

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        w = None if self.witness is None else [np.asarray(x).tolist() for x in self.witness]
        return {"holds": self.holds, "exhaustive": self.exhaustive, "checked": self.checked, "witness": w, "seed": self.seed}


def _sample_elements(ring: LieRing, seed: int, samples: int, projective: bool = False):
    """All elements (or projective representatives), or a seeded random sample when too many."""
    if ring.size() <= EXHAUSTIVE_LIMIT:
        els = ring.elements()
        if projective:
            els = els[[_is_projective_rep(v) for v in els]]
        return els, True
    rng = np.random.default_rng(seed)
    return rng.integers(0, ring.p, size=(samples, ring.dim), dtype=np.int64), False


def _is_projective_rep(v) -> bool:
    nz = np.flatnonzero(v)
    return nz.size > 0 and v[nz[0]] == 1


def is_toastie(ring: LieRing, x) -> bool:
    return principal_ideal(ring, x).is_abelian()


def ideal_is_nilpotent_below(ring: LieRing, x, k: int) -> bool:
    """I(x)^k = 0, i.e. the k-th lower central term of I(x) vanishes."""
    return lower_central_series(ring, principal_ideal(ring, x), k)[-1].dim == 0


def is_k_strong(ring: LieRing, k: int, seed: int = 0, samples: int = DEFAULT_SAMPLES) -> OracleResult:
    # I(cx) = I(x) for c != 0, so projective representatives suffice
    els, exhaustive = _sample_elements(ring, seed, samples, projective=True)
    for x in els:
        if not ideal_is_nilpotent_below(ring, x, k):
            return OracleResult(False, exhaustive, len(els), (x,), None if exhaustive else seed)
    return OracleResult(True, exhaustive, len(els), None, None if exhaustive else seed)


def _mat_pow_batch(m: np.ndarray, n: int, p: int) -> np.ndarray:
    out = np.broadcast_to(np.eye(m.shape[-1], dtype=np.int64), m.shape).copy()
    for _ in range(n):
        out = np.matmul(out, m) % p
    return out


def is_n_engel(ring: LieRing, n: int, seed: int = 0, samples: int = DEFAULT_SAMPLES) -> OracleResult:
    els, exhaustive = _sample_elements(ring, seed, samples)
    powers = _mat_pow_batch(ring.ad_all(els), n, ring.p)
    bad = np.flatnonzero(powers.reshape(len(els), -1).any(axis=1))
    if bad.size:
        return OracleResult(False, exhaustive, len(els), (els[bad[0]],), None if exhaustive else seed)
    return OracleResult(True, exhaustive, len(els), None, None if exhaustive else seed)


def ad_matrix(ring: LieRing, x) -> np.ndarray:
    return ring.ad(x)


def check_identity_I_on_ring(
    ring: LieRing, k: int, seed: int = 0, samples: int = DEFAULT_SAMPLES, chunk: int = 256
) -> OracleResult:
    """ad(x)^(k-1) ad(y)^(k-1) == (-1)^(k-1) ad(y)^(k-1) ad(x)^(k-1) for all pairs."""
    p = ring.p
    n = ring.size()
    if n * n <= EXHAUSTIVE_LIMIT * 100 and n <= EXHAUSTIVE_LIMIT:
        xs = ring.elements()
        ys = xs
        exhaustive = True
    else:
        rng = np.random.default_rng(seed)
        xs = rng.integers(0, p, size=(samples, ring.dim), dtype=np.int64)
        ys = rng.integers(0, p, size=(samples, ring.dim), dtype=np.int64)
        exhaustive = False
    sign = (-1) ** (k - 1) % p
    px = _mat_pow_batch(ring.ad_all(xs), k - 1, p)
    py = _mat_pow_batch(ring.ad_all(ys), k - 1, p) if ys is not xs else px
    checked = 0
    if exhaustive:
        for s in range(0, len(xs), chunk):
            a = px[s: s + chunk]
            lhs = np.einsum("xij,yjk->xyik", a, py) % p
            rhs = np.einsum("yij,xjk->xyik", py, a) % p
            diff = (lhs - sign * rhs) % p
            bad = np.argwhere(diff.reshape(diff.shape[0], diff.shape[1], -1).any(axis=2))
            checked += a.shape[0] * len(ys)
            if bad.size:
                i, j = bad[0]
                return OracleResult(False, True, checked, (xs[s + i], ys[j]))
        return OracleResult(True, True, checked)
    lhs = np.matmul(px, py) % p
    rhs = np.matmul(py, px) % p
    diff = (lhs - sign * rhs) % p
    bad = np.flatnonzero(diff.reshape(len(xs), -1).any(axis=1))
    if bad.size:
        return OracleResult(False, False, len(xs), (xs[bad[0]], ys[bad[0]]), seed)
    return OracleResult(True, False, len(xs), None, seed)


def extend_scalars(ring: LieRing, table: ExtFieldTable) -> LieRing:
    """The ring on L^d with [[(a_s), (b_t)]]_k = sum_{s,t} lambda_k^{s,t} [a_s, b_t].

    Coordinate (s, i) is basis element e_i of L in field slot s, stored at index
    s * dim(L) + i.
    """
    if table.p != ring.p:
        raise LieError(f"field table is over F_{table.p}, ring over F_{ring.p}")
    d, n = table.d, ring.dim
    big = np.einsum("stk,ijl->sitjkl", table.mult, ring.constants) % ring.p
    c = big.reshape(d * n, d * n, d * n)
    names = tuple(f"{nm}@{s}" for s in range(d) for nm in ring.names)
    return LieRing(ring.p, c, names, f"{ring.label or 'L'}(x)F_{ring.p}^{d}")


# -- shipped examples and file format -----------------------------------------------------


def heisenberg(p: int) -> LieRing:
    return from_brackets(p, 3, {(0, 1): {2: 1}}, ("e1", "e2", "e3"), "heisenberg")


def class3_rank2(p: int) -> LieRing:
    """Free nilpotent class-3 Lie ring on x, y: basis x, y, z=[x,y], u=[z,x], w=[z,y]."""
    return from_brackets(p, 5, {(0, 1): {2: 1}, (2, 0): {3: 1}, (2, 1): {4: 1}}, ("x", "y", "z", "u", "w"), "class3")


def abelian(p: int, dim: int = 2) -> LieRing:
    return LieRing(p, np.zeros((dim, dim, dim), dtype=np.int64), (), "abelian")


_HEAD = re.compile(r"p=(\d+)\s+dim=(\d+)(?:\s+names=(\S+))?")
_LINE = re.compile(r"\s*(\w+)\s*,\s*(\w+)\s*->\s*(.+)")


def parse_ring(text: str, label: str = "", p: int | None = None) -> LieRing:
    """Read a ring file; ``p`` overrides the prime in its header."""
    lines = [ln.split("#", 1)[0].rstrip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise LieError("empty ring description")
    m = _HEAD.fullmatch(lines[0].strip())
    if not m:
        raise LieError(f"line 1: expected 'p=.. dim=.. names=..', got {lines[0]!r}")
    dim = int(m.group(2))
    p = int(m.group(1)) if p is None else p
    names = tuple(m.group(3).split(",")) if m.group(3) else tuple(f"e{i + 1}" for i in range(dim))
    idx = {nm: i for i, nm in enumerate(names)}
    brackets: dict[tuple[int, int], dict[int, int]] = {}
    for n, ln in enumerate(lines[1:], start=2):
        lm = _LINE.fullmatch(ln)
        if not lm:
            raise LieError(f"line {n}: expected 'x,y -> c*z + ...', got {ln!r}")
        try:
            i, j = idx[lm.group(1)], idx[lm.group(2)]
        except KeyError as e:
            raise LieError(f"line {n}: unknown basis element {e.args[0]!r}") from None
        vec: dict[int, int] = {}
        for term in re.split(r"\s*\+\s*", lm.group(3).strip()):
            tm = re.fullmatch(r"(-?\d+)\s*\*\s*(\w+)|(-?)(\w+)", term)
            if not tm:
                raise LieError(f"line {n}: bad term {term!r}")
            if tm.group(2):
                coeff, nm = int(tm.group(1)), tm.group(2)
            else:
                coeff, nm = (-1 if tm.group(3) else 1), tm.group(4)
            if nm not in idx:
                raise LieError(f"line {n}: unknown basis element {nm!r}")
            vec[idx[nm]] = vec.get(idx[nm], 0) + coeff
        brackets[(i, j)] = vec
    return from_brackets(p, dim, brackets, names, label)


def rings_dir() -> Path:
    return Path(str(resources.files("stronglie") / "data" / "rings"))


def load_ring(name: str, p: int | None = None) -> LieRing:
    """A shipped ring by name (heisenberg, class3, abelian) or a path to a ring file."""
    path = Path(name)
    if not path.exists():
        path = rings_dir() / f"{name}.lie"
    if not path.exists():
        raise LieError(f"no ring named {name!r}")
    return parse_ring(path.read_text(), path.stem, p)
