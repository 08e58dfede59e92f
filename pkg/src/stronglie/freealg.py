"""Sparse polynomials in the free associative algebra F_p<x_0, ..., x_{r-1}>.

A word is a tuple of generator indices; the empty tuple is the unit
monomial. Generators are displayed as a, b, c1, c2, ... in that order, which
is also the order used for the degree-lexicographic term ordering.
"""

from __future__ import annotations

import re
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from functools import lru_cache
from itertools import groupby

from .gf import FpElem, check_modulus, signed

Word = tuple[int, ...]
Multiweight = tuple[int, ...]

EMPTY: Word = ()


class ArityError(ValueError):
    pass


def generator_names(r: int) -> tuple[str, ...]:
    base = ("a", "b")
    if r <= 2:
        return base[:r]
    return base + tuple(f"c{i}" for i in range(1, r - 1))


def generator_index(name: str, names: Sequence[str] | None = None) -> int:
    if names is not None:
        try:
            return list(names).index(name)
        except ValueError:
            raise KeyError(f"unknown generator {name!r}") from None
    if name == "a":
        return 0
    if name == "b":
        return 1
    m = re.fullmatch(r"c([1-9][0-9]*)", name)
    if m:
        return int(m.group(1)) + 1
    raise KeyError(f"unknown generator {name!r}")


def deglex_key(w: Word):
    return (len(w), w)


def multiweight_of(w: Word, r: int = 2) -> Multiweight:
    counts = [0] * r
    for x in w:
        counts[x] += 1
    return tuple(counts)


@lru_cache(maxsize=None)
def words_of_multiweight(mw: Multiweight) -> tuple[Word, ...]:
    """All words with the given letter counts, in lexicographic order."""
    mw = tuple(mw)
    n = sum(mw)
    out: list[Word] = []
    counts = list(mw)
    buf: list[int] = []

    def rec():
        if len(buf) == n:
            out.append(tuple(buf))
            return
        for g, c in enumerate(counts):
            if c:
                counts[g] -= 1
                buf.append(g)
                rec()
                buf.pop()
                counts[g] += 1

    rec()
    return tuple(out)


def sub_multiweights(mw: Multiweight):
    """All multiweights componentwise <= mw."""
    if not mw:
        yield ()
        return
    for head in range(mw[0] + 1):
        for tail in sub_multiweights(mw[1:]):
            yield (head,) + tail


def word_str(w: Word, names: Sequence[str] | None = None, sep: str = "*") -> str:
    if not w:
        return "1"
    names = names or generator_names(max(w) + 1 if max(w) >= 2 else 2)
    parts = []
    for g, run in groupby(w):
        n = len(list(run))
        parts.append(names[g] if n == 1 else f"{names[g]}^{n}")
    return sep.join(parts)


class Poly:
    """An immutable element of F_p<x_0..x_{r-1}> stored as {word: coefficient}.

    Coefficients are canonical residues in [1, p); zero terms never stored.
    """

    __slots__ = ("p", "nvars", "_terms", "_hash")

    def __init__(self, terms: Mapping[Word, int] | Iterable[tuple[Word, int]] = (), p: int = 2, nvars: int = 2):
        self.p = check_modulus(p)
        self.nvars = int(nvars)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Word, int] = defaultdict(int)
        for w, c in items:
            w = tuple(w)
            for x in w:
                if not 0 <= x < self.nvars:
                    raise ArityError(f"letter {x} out of range for {self.nvars} generators")
            acc[w] += int(c)
        self._terms = {w: c % self.p for w, c in acc.items() if c % self.p}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Word, int], p: int, nvars: int) -> Poly:
        out = object.__new__(cls)
        out.p = p
        out.nvars = nvars
        out._terms = terms
        out._hash = None
        return out

    @classmethod
    def zero(cls, p: int, nvars: int = 2) -> Poly:
        return cls({}, p, nvars)

    @classmethod
    def monomial(cls, word: Sequence[int], p: int, nvars: int = 2, coeff: int = 1) -> Poly:
        return cls({tuple(word): coeff}, p, nvars)

    @classmethod
    def one(cls, p: int, nvars: int = 2) -> Poly:
        return cls.monomial(EMPTY, p, nvars)

    # -- access -------------------------------------------------------------

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self.terms())

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> list[tuple[Word, int]]:
        """Terms in deglex order."""
        return sorted(self._terms.items(), key=lambda t: deglex_key(t[0]))

    def support(self) -> frozenset[Word]:
        return frozenset(self._terms)

    def coeff(self, w: Sequence[int]) -> int:
        return self._terms.get(tuple(w), 0)

    def as_dict(self) -> dict[Word, int]:
        return dict(self._terms)

    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=-1)

    def multiweights(self) -> set[Multiweight]:
        return {multiweight_of(w, self.nvars) for w in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.multiweights()) <= 1

    def multiweight(self) -> Multiweight | None:
        """The unique multiweight of a nonzero multihomogeneous polynomial."""
        mws = self.multiweights()
        if len(mws) != 1:
            return None
        return next(iter(mws))

    def leading_term(self) -> tuple[Word, int] | None:
        if not self._terms:
            return None
        w = min(self._terms, key=deglex_key)
        return w, self._terms[w]

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: Poly):
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.p != self.p:
            raise ArityError(f"modulus mismatch: {self.p} vs {other.p}")
        if other.nvars != self.nvars:
            raise ArityError(f"arity mismatch: {self.nvars} vs {other.nvars} generators")

    def _scalar(self, c) -> int:
        if isinstance(c, FpElem):
            if c.modulus != self.p:
                raise ArityError(f"modulus mismatch: {self.p} vs {c.modulus}")
            return c.value
        return int(c) % self.p

    def __add__(self, other):
        if isinstance(other, (int, FpElem)):
            other = Poly.one(self.p, self.nvars).scale(other)
        self._check(other)
        out = dict(self._terms)
        p = self.p
        for w, c in other._terms.items():
            v = (out.get(w, 0) + c) % p
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return Poly._raw(out, p, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return Poly._raw({w: p - c for w, c in self._terms.items()}, p, self.nvars)

    def __sub__(self, other):
        if isinstance(other, (int, FpElem)):
            other = Poly.one(self.p, self.nvars).scale(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> Poly:
        c = self._scalar(c)
        if c == 0:
            return Poly.zero(self.p, self.nvars)
        p = self.p
        return Poly._raw({w: v * c % p for w, v in self._terms.items()}, p, self.nvars)

    def __mul__(self, other):
        if isinstance(other, (int, FpElem)):
            return self.scale(other)
        self._check(other)
        p = self.p
        acc: dict[Word, int] = defaultdict(int)
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                acc[w1 + w2] += c1 * c2
        return Poly._raw({w: c % p for w, c in acc.items() if c % p}, p, self.nvars)

    def __rmul__(self, other):
        if isinstance(other, (int, FpElem)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> Poly:
        out = Poly.one(self.p, self.nvars)
        for _ in range(n):
            out = out * self
        return out

    def lmul(self, u: Word) -> Poly:
        """u * self for a word u."""
        u = tuple(u)
        return Poly._raw({u + w: c for w, c in self._terms.items()}, self.p, self.nvars)

    def rmul(self, v: Word) -> Poly:
        """self * v for a word v."""
        v = tuple(v)
        return Poly._raw({w + v: c for w, c in self._terms.items()}, self.p, self.nvars)

    def sandwich(self, u: Word, v: Word) -> Poly:
        u, v = tuple(u), tuple(v)
        return Poly._raw({u + w + v: c for w, c in self._terms.items()}, self.p, self.nvars)

    def monic(self) -> Poly:
        """Scalar multiple whose deglex-first coefficient is 1 (zero stays zero)."""
        lt = self.leading_term()
        if lt is None or lt[1] == 1:
            return self
        return self.scale(pow(lt[1], self.p - 2, self.p))

    def with_nvars(self, r: int) -> Poly:
        return Poly(self._terms, self.p, r)

    def with_modulus(self, p: int) -> Poly:
        return Poly(self._terms, p, self.nvars)

    # -- structural operators -----------------------------------------------

    def mirror(self) -> Poly:
        return Poly._raw({w[::-1]: c for w, c in self._terms.items()}, self.p, self.nvars)

    def swap(self, i: int = 0, j: int = 1) -> Poly:
        perm = list(range(self.nvars))
        perm[i], perm[j] = perm[j], perm[i]
        return swap_generators(self, perm)

    def component(self, mw: Multiweight) -> Poly:
        mw = tuple(mw)
        return Poly._raw(
            {w: c for w, c in self._terms.items() if multiweight_of(w, self.nvars) == mw},
            self.p,
            self.nvars,
        )

    def components(self) -> dict[Multiweight, Poly]:
        parts: dict[Multiweight, dict[Word, int]] = defaultdict(dict)
        for w, c in self._terms.items():
            parts[multiweight_of(w, self.nvars)][w] = c
        return {mw: Poly._raw(t, self.p, self.nvars) for mw, t in sorted(parts.items())}

    # -- comparison / display -----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self._terms
        if not isinstance(other, Poly):
            return NotImplemented
        return self.p == other.p and self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.nvars, frozenset(self._terms.items())))
        return self._hash

    def format(self, names: Sequence[str] | None = None) -> str:
        return format_poly(self, names)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, p={self.p})"


def format_poly(f: Poly, names: Sequence[str] | None = None) -> str:
    names = names or generator_names(f.nvars)
    if f.is_zero():
        return "0"
    out = []
    for i, (w, c) in enumerate(f.terms()):
        s = signed(c, f.p)
        neg = s < 0
        mag = -s if neg else s
        body = word_str(w, names)
        if mag != 1:
            body = f"{mag}" if not w else f"{mag}*{body}"
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def mirror(f: Poly) -> Poly:
    return f.mirror()


def swap_generators(f: Poly, perm: Sequence[int] | Mapping[int, int]) -> Poly:
    """Relabel every letter x as perm[x]; perm must be a bijection of the generators."""
    r = f.nvars
    if isinstance(perm, Mapping):
        table = [perm.get(i, i) for i in range(r)]
    else:
        table = list(perm)
    if len(table) != r or sorted(table) != list(range(r)):
        raise ValueError(f"{list(perm) if not isinstance(perm, Mapping) else dict(perm)} is not a permutation of {r} generators")
    return Poly._raw({tuple(table[x] for x in w): c for w, c in f._terms.items()}, f.p, r)


def substitute(f: Poly, images: Mapping[int, Sequence[int] | Poly], nvars: int | None = None) -> Poly:
    """Replace each generator by a word (or a polynomial); unmapped generators stay."""
    r = f.nvars if nvars is None else nvars
    p = f.p
    polys: dict[int, Poly] = {}
    for g, img in images.items():
        if isinstance(img, Poly):
            if img.p != p:
                raise ArityError(f"modulus mismatch: {p} vs {img.p}")
            polys[g] = img.with_nvars(r) if img.nvars != r else img
        else:
            polys[g] = Poly.monomial(tuple(img), p, r)
    for g in range(f.nvars):
        if g not in polys:
            polys[g] = Poly.monomial((g,), p, r)
    total = Poly.zero(p, r)
    for w, c in f._terms.items():
        term = Poly.monomial(EMPTY, p, r, c)
        for x in w:
            term = term * polys[x]
        total = total + term
    return total


def expand_bracket(letters: Sequence[int | str | Poly], p: int, nvars: int = 2) -> Poly:
    """Associative expansion of the left-normed bracket [x1, x2, ..., xn].

    Entries are generator indices, generator names, or Lie polynomials.
    """
    if not letters:
        raise ValueError("empty bracket")

    def elem(x) -> Poly:
        if isinstance(x, Poly):
            return x
        if isinstance(x, str):
            x = generator_index(x)
        return Poly.monomial((x,), p, nvars)

    acc = elem(letters[0])
    for x in letters[1:]:
        g = elem(x)
        acc = acc * g - g * acc
    return acc


# -- text grammar ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>[0-9]+)|(?P<ident>[a-z][a-z0-9]*)|(?P<sym>[-+*^()]))")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class _Parser:
    def __init__(self, text: str, p: int, names, nvars, line: int, col0: int):
        self.text = text
        self.p = p
        self.names = names
        self.nvars = nvars
        self.line = line
        self.col0 = col0
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                bad = len(text[pos:]) - len(text[pos:].lstrip()) + pos
                self.fail(f"unexpected character {text[bad]!r}", bad)
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0
        self.used: set[int] = set()

    def fail(self, msg, pos=None):
        if pos is None:
            pos = self.toks[self.i][2] if self.i < len(self.toks) else len(self.text.rstrip())
        raise ParseError(msg, self.line, self.col0 + pos + 1)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, None)

    def take(self, val=None):
        kind, v, pos = self.peek()
        if kind is None:
            self.fail("unexpected end of input")
        if val is not None and v != val:
            self.fail(f"expected {val!r}, found {v!r}")
        self.i += 1
        return kind, v, pos

    # each parse method returns a dict {word: int}

    def poly(self):
        acc: dict[Word, int] = defaultdict(int)
        sign = 1
        kind, v, _ = self.peek()
        if v in ("+", "-"):
            self.take()
            sign = -1 if v == "-" else 1
        while True:
            for w, c in self.term().items():
                acc[w] += sign * c
            kind, v, _ = self.peek()
            if v in ("+", "-"):
                self.take()
                sign = -1 if v == "-" else 1
                continue
            return acc

    def term(self):
        acc = self.factor()
        while self.peek()[1] == "*":
            self.take()
            acc = _dict_mul(acc, self.factor())
        return acc

    def factor(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, v, pos = self.take()
            if kind != "int":
                self.fail(f"expected exponent, found {v!r}", pos)
            out = {EMPTY: 1}
            for _ in range(int(v)):
                out = _dict_mul(out, base)
            return out
        return base

    def atom(self):
        kind, v, pos = self.take()
        if kind == "int":
            return {EMPTY: int(v)}
        if kind == "ident":
            try:
                g = generator_index(v, self.names)
            except KeyError:
                self.fail(f"unknown generator {v!r}", pos)
            if self.nvars is not None and g >= self.nvars:
                self.fail(f"generator {v!r} out of range for {self.nvars} generators", pos)
            self.used.add(g)
            return {(g,): 1}
        if v == "(":
            inner = self.poly()
            self.take(")")
            return inner
        self.fail(f"unexpected {v!r}", pos)

    def run(self):
        if not self.toks:
            self.fail("empty polynomial")
        out = self.poly()
        if self.i != len(self.toks):
            self.fail(f"unexpected {self.toks[self.i][1]!r}")
        return out


def _dict_mul(x, y):
    out: dict[Word, int] = defaultdict(int)
    for w1, c1 in x.items():
        for w2, c2 in y.items():
            out[w1 + w2] += c1 * c2
    return out


def parse_poly(
    text: str,
    p: int,
    names: Sequence[str] | None = None,
    nvars: int | None = None,
    line: int = 1,
    column: int = 0,
) -> Poly:
    """Parse e.g. ``a^3*b + a^2*b*a - 2*(a*b)^2``.

    Parentheses and a bare integer (a multiple of the unit) are accepted in
    addition to the plain ``coeff*factor*...`` grammar.
    """
    parser = _Parser(text, check_modulus(p), names, nvars, line, column)
    terms = parser.run()
    if nvars is None:
        nvars = len(names) if names is not None else max(2, max(parser.used, default=0) + 1)
    return Poly(terms, p, nvars)
