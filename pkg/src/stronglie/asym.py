"""The Asym calculus for k = 4 and matrices over R = F_p[sigma]/(sigma^2 - 1).

Asym(f) asserts f(a, b) = -f(b, a) modulo the relation ideal, which is the
same as f + swap(f) lying in the ideal. Two rules drive the hand derivation:

    Rule1:  Asym(p + q)  <=>  Asym(p + swap(q))
    Rule2:  Asym(p) and p + q = 0  =>  Asym(q)

Every fact produced here is re-checked by ideal membership; the rule engine
only replays the structure of the derivation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .freealg import Multiweight, Poly, Word, parse_poly, word_str, words_of_multiweight
from .linalg import rref, solve_left
from .nilquot import ideal_basis, is_member, verify_certificate
from .relations import RelationSet, paper_relation_set, read_data_file


class RuleError(ValueError):
    pass


class ReplayError(RuntimeError):
    def __init__(self, step: str, message: str):
        super().__init__(f"step {step}: {message}")
        self.step = step


def _P(text: str, p: int) -> Poly:
    return parse_poly(text, p, nvars=2)


def asym_poly(f: Poly) -> Poly:
    """The ideal element equivalent to Asym(f)."""
    return f + f.swap()


def asym_holds(f: Poly, rs: RelationSet) -> bool:
    return is_member(asym_poly(f), rs)[0]


@dataclass
class AsymFact:
    poly: Poly
    kind: str
    parents: tuple[str, ...] = ()
    label: str = ""
    note: str = ""
    axioms: frozenset[str] = frozenset()

    def __str__(self):
        return f"Asym({self.poly})"


def _check_fact(fact: AsymFact, rs: RelationSet | None) -> AsymFact:
    if rs is not None and not asym_holds(fact.poly, rs):
        raise RuleError(f"derived fact {fact} is not a consequence of {rs.describe()}")
    return fact


def axiom_fact(poly: Poly, label: str, rs: RelationSet | None = None) -> AsymFact:
    return _check_fact(AsymFact(poly, "axiom", (), label, axioms=frozenset({label})), rs)


def rule1(fact: AsymFact, q: Poly, rs: RelationSet | None = None, label: str = "") -> AsymFact:
    """Replace the summand q of the fact by its swap."""
    for w, c in q.as_dict().items():
        if fact.poly.coeff(w) != c:
            raise RuleError(f"{q} is not a summand of {fact.poly}")
    new = fact.poly - q + q.swap()
    return _check_fact(AsymFact(new, "rule1", (fact.label,), label, f"swap {q}", fact.axioms), rs)


def rule2(
    fact: AsymFact,
    eq: Poly | AsymFact,
    rs: RelationSet | None = None,
    label: str = "",
    eq_label: str = "",
    eq_axioms: frozenset[str] = frozenset(),
) -> AsymFact:
    """From Asym(p) and p + q = 0 conclude Asym(q).

    ``eq`` is either an ideal element p + q or a second fact Asym(p + q).
    """
    if isinstance(eq, AsymFact):
        total = eq.poly
        parents = (fact.label, eq.label)
        axioms = fact.axioms | eq.axioms
    else:
        if rs is not None and not is_member(eq, rs)[0]:
            raise RuleError(f"equation {eq_label or eq} is not in the ideal")
        total = eq
        parents = (fact.label, eq_label or str(eq))
        axioms = fact.axioms | eq_axioms
    q = total - fact.poly
    return _check_fact(AsymFact(q, "rule2", parents, label, "", axioms), rs)


def combine(facts: list[AsymFact], rs: RelationSet | None = None, label: str = "") -> AsymFact:
    total = facts[0].poly
    axioms = facts[0].axioms
    for f in facts[1:]:
        total = total + f.poly
        axioms = axioms | f.axioms
    return _check_fact(AsymFact(total, "combine", tuple(f.label for f in facts), label, "", axioms), rs)


# -- appendix replay ---------------------------------------------------------------

# (name, source, left, right): each homogenized equation is a product
HOMOGENIZED = [
    ("S8", "S2", "", "b"),
    ("S9", "S1", "b^2", ""),
    ("S10", "S4", "b", ""),
    ("S11", "S2", "b", ""),
    ("S12", "S1", "b", "b"),
    ("S13", "S3", "", "b"),
    ("S14", "S1", "", "b^2"),
    ("L8", "L1", "a*b", ""),
    ("L9", "L1", "", "a*b"),
    ("L10", "L1", "a", "b"),
]

SWAPPED = ["S5", "S11", "S10"]

# (step, kind, inputs, argument, expected result)
#   lin:     argument unused; solve target + swap(target) from the inputs
#   rule1:   argument is the summand to swap
#   rule2:   inputs are (fact, equation-or-fact)
#   combine: sum of the input facts
CHAIN = [
    ("star1", "lin", ["S5'", "S8", "S9"], None, "a^3*b^3 + a^2*b^2*a*b"),
    ("star2.1", "rule2", ["star1", "S8"], None, "(a*b)^3 + b*a^2*b*a*b"),
    ("star2", "rule1", ["star2.1"], "b*a^2*b*a*b", "(a*b)^3 + a*b^2*a*b*a"),
    ("star3.1", "rule1", ["star2"], "(a*b)^3", "(b*a)^3 + a*b^2*a*b*a"),
    ("star3", "rule2", ["star3.1", "S5"], None, "a^2*b^3*a + a^2*b*a*b^2"),
    ("star4", "lin", ["S8", "S10", "star1", "star2", "S6"], None, "a*b*a^2*b^2 + a*b*a*b^2*a"),
    ("star5.1", "rule2", ["star4", "S6"], None, "a*b^2*a*b*a + b^2*a^2*b*a"),
    ("star5", "rule1", ["star5.1"], "b^2*a^2*b*a", "a^2*b^2*a*b + a*b^2*a*b*a"),
    ("star6.1", "rule1", ["star5"], "a*b^2*a*b*a", "a^2*b^2*a*b + b*a^2*b*a*b"),
    ("star6", "rule2", ["star6.1", "S8"], None, "a^3*b^3 + (a*b)^3"),
    ("pumpkin1", "lin", ["S6", "L8", "S11'"], None, "a^2*b^2*a*b"),
    ("pumpkin2", "rule2", ["pumpkin1", "star1"], None, "a^3*b^3"),
    ("pumpkin3", "rule2", ["pumpkin2", "star6"], None, "(a*b)^3"),
    ("pumpkin4", "rule2", ["pumpkin3", "star2"], None, "a*b^2*a*b*a"),
    ("pumpkin5", "lin", ["S11'", "L9", "S12"], None, "a*b^3*a^2"),
    ("pumpkin6.1", "rule1", ["pumpkin1"], "a^2*b^2*a*b", "b^2*a^2*b*a"),
    ("pumpkin6.2", "rule1", ["pumpkin3"], "(a*b)^3", "(b*a)^3"),
    ("pumpkin6.3", "rule1", ["pumpkin5"], "a*b^3*a^2", "b*a^3*b^2"),
    ("pumpkin6.4", "combine", ["pumpkin6.1", "pumpkin6.2", "pumpkin6.3"], None, "b^2*a^2*b*a + (b*a)^3 + b*a^3*b^2"),
    ("pumpkin6.5", "rule2", ["pumpkin6.4", "S11"], None, "b*a^2*b^2*a"),
    ("pumpkin6", "rule1", ["pumpkin6.5"], "b*a^2*b^2*a", "a*b^2*a^2*b"),
    ("pumpkin7", "lin", ["S10'", "L10", "S13"], None, "a*b*a*b^2*a"),
    ("pumpkin8", "rule2", ["pumpkin7", "star4"], None, "a*b*a^2*b^2"),
    ("pumpkin9.1", "rule1", ["pumpkin5"], "a*b^3*a^2", "b*a^3*b^2"),
    ("pumpkin9.2", "combine", ["pumpkin2", "pumpkin9.1", "pumpkin8"], None, "a^3*b^3 + b*a^3*b^2 + a*b*a^2*b^2"),
    ("pumpkin9", "rule2", ["pumpkin9.2", "S14"], None, "a^2*b*a*b^2"),
    ("pumpkin10", "rule2", ["pumpkin9", "star3"], None, "a^2*b^3*a"),
]

SYMBOLS = {"star": "⋆", "pumpkin": "\U0001f383"}


def display_name(step: str) -> str:
    for prefix, sym in SYMBOLS.items():
        if step.startswith(prefix):
            return sym + step[len(prefix):]
    return step


def is_named_fact(step: str) -> bool:
    return "." not in step and any(step.startswith(s) for s in SYMBOLS)


@dataclass
class StepRecord:
    step: str
    kind: str
    inputs: list[str]
    output_poly: str
    verified: bool
    coefficients: dict[str, int] | None = None
    certificate: list[dict] | None = None

    def to_json(self) -> dict:
        out = {
            "step": self.step,
            "kind": self.kind,
            "inputs": self.inputs,
            "output_poly": self.output_poly,
            "verified": self.verified,
        }
        if self.coefficients is not None:
            out["coefficients"] = self.coefficients
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


@dataclass
class DerivationLog:
    p: int
    records: list[StepRecord] = field(default_factory=list)
    facts: dict[str, AsymFact] = field(default_factory=dict)
    equations: dict[str, Poly] = field(default_factory=dict)
    goals: dict[str, str] = field(default_factory=dict)
    axioms_used: set[str] = field(default_factory=set)
    failures: int = 0

    @property
    def named_facts(self) -> list[str]:
        return [s for s in self.facts if is_named_fact(s)]

    @property
    def homogenized(self) -> list[str]:
        return [r.step for r in self.records if r.kind == "mult"]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "steps": [r.to_json() for r in self.records],
            "facts": len(self.named_facts),
            "homogenized_equations": len(self.homogenized),
            "failures": self.failures,
            "axioms_used": sorted(self.axioms_used, key=_label_key),
            "goals": self.goals,
            "version": 1,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)


def _label_key(label: str):
    return (label[0], int("".join(ch for ch in label if ch.isdigit()) or 0), label)


def _signed_int(c: int, p: int) -> int:
    return c - p if c > p // 2 else c


def replay_appendix(p: int) -> DerivationLog:
    """Replay the k = 4 derivation of Asym for all ten swap-orbit representatives."""
    if p == 2:
        raise ValueError("the Asym replay needs p != 2")
    full = paper_relation_set(4, p, "all")
    base = paper_relation_set(4, p, "all", swaps=False)
    printed = read_data_file("k4_homogenized.rel", p)
    axiom_labels = ["S1", "S2", "S3", "S4", "S5", "S6", "L1"]
    axiom_ideal = base.subset(axiom_labels).with_swaps(name="k4_axioms")
    log = DerivationLog(p)
    eqs: dict[str, Poly] = {r.label: r.poly for r in base}
    deps: dict[str, frozenset[str]] = {r.label: frozenset({r.label}) for r in base}

    for name, src, left, right in HOMOGENIZED:
        u = _P(left, p).terms()[0][0] if left else ()
        v = _P(right, p).terms()[0][0] if right else ()
        prod = eqs[src].sandwich(u, v)
        if prod != printed.get(name).poly:
            raise ReplayError(name, f"{src} multiplied by ({left or '1'}, {right or '1'}) gives {prod}")
        single = base.subset([src])
        ok, cert = is_member(prod, single, True)
        if not ok or not verify_certificate(cert, prod, single):
            raise ReplayError(name, "certificate does not verify")
        eqs[name] = prod
        deps[name] = deps[src]
        log.records.append(StepRecord(name, "mult", [src], str(prod), True, certificate=cert.to_json()))
    for name in SWAPPED:
        sw = eqs[name].swap()
        eqs[name + "'"] = sw
        deps[name + "'"] = deps[name]
        log.records.append(StepRecord(name + "'", "swap", [name], str(sw), is_member(sw, full)[0]))
    log.equations = eqs

    facts = log.facts
    for step, kind, inputs, arg, expected in CHAIN:
        want = _P(expected, p)
        coeffs = None
        try:
            if kind == "lin":
                fact, coeffs = _lin_step(step, inputs, want, eqs, facts, deps, p)
            elif kind == "rule1":
                fact = rule1(facts[inputs[0]], _P(arg, p), full, step)
            elif kind == "rule2":
                other = inputs[1]
                if other in facts:
                    fact = rule2(facts[inputs[0]], facts[other], full, step)
                else:
                    fact = rule2(facts[inputs[0]], eqs[other], full, step, other, deps[other])
            elif kind == "combine":
                fact = combine([facts[i] for i in inputs], full, step)
            else:
                raise ReplayError(step, f"unknown step kind {kind!r}")
        except RuleError as e:
            log.failures += 1
            raise ReplayError(step, str(e)) from e
        if fact.poly != want:
            log.failures += 1
            raise ReplayError(step, f"produced Asym({fact.poly}), expected Asym({want})")
        verified = asym_holds(fact.poly, full) and asym_holds(fact.poly, axiom_ideal)
        if not verified:
            log.failures += 1
            raise ReplayError(step, "fact not confirmed by ideal membership")
        facts[step] = fact
        log.records.append(StepRecord(step, kind, list(inputs), str(fact.poly), True, coefficients=coeffs))

    for w in _orbit_reps(3):
        m = Poly.monomial(w, p)
        hit = next((s for s in log.named_facts if facts[s].poly == m), None)
        if hit is None:
            raise ReplayError("goals", f"no fact establishes Asym({m})")
        log.goals[word_str(w)] = hit
    for s in log.named_facts:
        log.axioms_used |= set(facts[s].axioms)
    return log


def _orbit_reps(n: int) -> list[Word]:
    return [w for w in words_of_multiweight((n, n)) if w <= tuple(1 - x for x in w)]


def _lin_step(step, inputs, want, eqs, facts, deps, p):
    """Write want + swap(want) as a combination of the listed equations and facts."""
    vecs = []
    axioms: frozenset[str] = frozenset()
    for name in inputs:
        if name in facts:
            vecs.append(asym_poly(facts[name].poly))
            axioms |= facts[name].axioms
        else:
            vecs.append(eqs[name])
            axioms |= deps[name]
    target = asym_poly(want)
    words = sorted({w for f in vecs + [target] for w in f.support()})
    idx = {w: i for i, w in enumerate(words)}

    def vec(f):
        v = np.zeros(len(words), dtype=np.int64)
        for w, c in f.as_dict().items():
            v[idx[w]] = c
        return v

    x = solve_left(np.array([vec(f) for f in vecs]), vec(target), p)
    if x is None:
        raise RuleError(f"Asym({want}) is not a combination of {', '.join(inputs)}")
    fact = AsymFact(want, "lin", tuple(inputs), step, "", axioms)
    return fact, {name: _signed_int(int(c), p) for name, c in zip(inputs, x)}


# -- matrices over F_p[sigma] ------------------------------------------------------


class SigmaClosureError(ValueError):
    pass


def r_mul(x, y, p: int) -> tuple[int, int]:
    """(x0 + x1 s)(y0 + y1 s) with s^2 = 1."""
    return ((x[0] * y[0] + x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)


def r_str(x, p: int) -> str:
    c0, c1 = (_signed_int(int(c), p) for c in x)
    if c0 == 0 and c1 == 0:
        return "0"
    parts = []
    if c0:
        parts.append(str(c0))
    if c1:
        s = "s" if abs(c1) == 1 else f"{abs(c1)}s"
        if parts:
            parts.append(("- " if c1 < 0 else "+ ") + s)
        else:
            parts.append(("-" if c1 < 0 else "") + s)
    return " ".join(parts)


OPERATORS = {"swap_negate": -1, "swap": -1, "mirror": 1}


def _apply_op(f: Poly, operator: str) -> Poly:
    return f.swap() if operator in ("swap", "swap_negate") else f.mirror()


def _op_word(w: Word, operator: str) -> Word:
    return tuple(1 - x for x in w) if operator in ("swap", "swap_negate") else w[::-1]


@dataclass
class SigmaMatrix:
    """Rows over R = F_p[s]/(s^2 - 1); ``entries[r, j] = (c0, c1)`` means c0 + c1 s.

    Column j stands for the orbit representative ``columns[j]``; the operator
    acts as s * m = sign * T(m) where T is the word operator.
    """

    p: int
    entries: np.ndarray
    columns: list[Word] = field(default_factory=list)
    operator: str = ""
    mw: Multiweight | None = None

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape[0], self.entries.shape[1]

    @classmethod
    def identity(cls, n: int, p: int) -> SigmaMatrix:
        e = np.zeros((n, n, 2), dtype=np.int64)
        for i in range(n):
            e[i, i, 0] = 1
        return cls(p, e)

    @classmethod
    def empty(cls, p: int, n: int = 0) -> SigmaMatrix:
        return cls(p, np.zeros((0, n, 2), dtype=np.int64))

    @classmethod
    def from_rows(cls, rows, p: int) -> SigmaMatrix:
        return cls(p, np.array(rows, dtype=np.int64).reshape(len(rows), -1, 2) % p)

    def format(self) -> str:
        return "\n".join("[" + ", ".join(r_str(x, self.p) for x in row) + "]" for row in self.entries)


def build_sigma_matrix(rs: RelationSet, mw: Multiweight, operator: str = "swap_negate") -> SigmaMatrix:
    if operator not in OPERATORS:
        raise ValueError(f"operator must be one of {sorted(OPERATORS)}, got {operator!r}")
    sign = OPERATORS[operator]
    p = rs.p
    basis = ideal_basis(rs, tuple(mw))
    # closure: the operator image of every generating row stays in the span
    for i, (u, label, v) in enumerate(basis.generator_log):
        img = _apply_op(basis.original_row(i), operator)
        if img.multiweights() - {basis.mw} or not basis.is_member(img):
            lw = word_str(u) if u else "1"
            rw = word_str(v) if v else "1"
            raise SigmaClosureError(f"row {lw}*{label}*{rw} is not closed under {operator}")
    reps = [w for w in basis.words if w <= _op_word(w, operator)]
    col = {w: j for j, w in enumerate(reps)}
    rows = []
    for r in basis.rows:
        row = np.zeros((len(reps), 2), dtype=np.int64)
        for i in np.flatnonzero(r):
            w = basis.words[i]
            if w in col:
                row[col[w], 0] = (row[col[w], 0] + r[i]) % p
            else:
                # w = T(m) = sign * s * m for the representative m
                j = col[_op_word(w, operator)]
                row[j, 1] = (row[j, 1] + sign * r[i]) % p
        rows.append(row)
    for w in reps:
        if _op_word(w, operator) == w:
            # fixed word: s * m = sign * m
            row = np.zeros((len(reps), 2), dtype=np.int64)
            row[col[w]] = (-sign % p, 1)
            rows.append(row)
    entries = np.array(rows, dtype=np.int64).reshape(len(rows), len(reps), 2)
    return SigmaMatrix(p, entries, reps, operator, basis.mw)


@dataclass
class SigmaReduction:
    triangularized: bool
    strict_form: bool
    pivot_kinds: list[str]
    obstruction: int | None
    transformed: SigmaMatrix | None
    method: str
    rank_plus: int | None = None
    rank_minus: int | None = None
    split_agrees: bool | None = None

    def to_json(self) -> dict:
        return {
            "triangularized": self.triangularized,
            "strict_form": self.strict_form,
            "pivot_kinds": self.pivot_kinds,
            "obstruction": self.obstruction,
            "method": self.method,
            "rank_plus": self.rank_plus,
            "rank_minus": self.rank_minus,
            "split_agrees": self.split_agrees,
        }


def _pivot_kind(block: np.ndarray, p: int) -> str:
    """Name the ideal of R spanned by the (c0, c1) pairs in ``block``."""
    r = rref(block, p).rank if block.size else 0
    if r == 0:
        return "zero"
    if r == 2:
        return "unit"
    one_minus = np.array([1, p - 1])
    if rref(np.vstack([block, one_minus]), p).rank == 1:
        return "1-s"
    return "1+s"


def sigma_reduce(m: SigmaMatrix) -> SigmaReduction:
    """Look for rows (1 - s) e_i + (later columns) in the R-span, for every column i.

    The R-span of the rows is the F_p-span of the rows and their s-multiples,
    viewed in F_p^(2n). After row reduction with coordinates ordered column by
    column, the vectors that vanish before column i are spanned by the rows
    whose pivot lies at column i or later, so the ideal of leading entries at
    column i is read off directly.
    """
    p = m.p
    nrows, n = m.shape
    if nrows == 0 or n == 0:
        return SigmaReduction(False, False, ["zero"] * n, 0 if n else None, None, "empty")
    flat = m.entries.reshape(nrows, 2 * n) % p
    swapped = m.entries[:, :, ::-1].reshape(nrows, 2 * n)
    ech = rref(np.vstack([flat, swapped]), p)
    rows, piv = ech.rows, np.array(ech.pivots)
    target = np.array([1, p - 1], dtype=np.int64)
    kinds: list[str] = []
    out_rows = []
    obstruction = None
    for i in range(n):
        sel = rows[piv >= 2 * i] if len(piv) else rows[:0]
        block = sel[:, 2 * i: 2 * i + 2]
        kinds.append(_pivot_kind(block, p))
        x = solve_left(block, target, p) if len(block) else None
        if x is None:
            if obstruction is None:
                obstruction = i
            continue
        out_rows.append((x @ sel) % p)
    tri = obstruction is None
    strict = tri and all(k == "1-s" for k in kinds)
    transformed = SigmaMatrix(p, np.array(out_rows).reshape(-1, n, 2), m.columns, m.operator, m.mw) if tri else None
    red = SigmaReduction(tri, strict, kinds, obstruction, transformed, "coordinates")
    if p != 2:
        # R = F_p x F_p via s -> +1 and s -> -1
        plus = (m.entries[:, :, 0] + m.entries[:, :, 1]) % p
        minus = (m.entries[:, :, 0] - m.entries[:, :, 1]) % p
        red.rank_plus = rref(plus, p).rank
        red.rank_minus = rref(minus, p).rank
        red.split_agrees = (red.rank_minus == n) == tri
        red.method = "coordinates+idempotent split"
    return red
