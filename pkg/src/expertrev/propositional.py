"""Propositional layer: signatures, formula syntax, model sets.

Valuation ``k`` makes variable ``i`` (in signature order) true iff bit ``i``
of ``k`` is set, so over ``P = (x, y)`` the valuations are ordered
``x̄ȳ, xȳ, x̄y, xy``.  A :class:`ModelSet` is a bitmask over those indices.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, Sequence

from . import config
from .errors import FormulaSyntaxError, UnknownNameError

RELIABLE = "*"

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_RESERVED = {"true", "false"}


@dataclass(frozen=True)
class Signature:
    """Variables, cases and sources of a problem instance."""

    variables: tuple[str, ...]
    cases: tuple[str, ...]
    sources: tuple[str, ...]

    def __init__(self, variables: Sequence[str], cases: Sequence[str], sources: Sequence[str]):
        object.__setattr__(self, "variables", tuple(variables))
        object.__setattr__(self, "cases", tuple(cases))
        object.__setattr__(self, "sources", tuple(sources))
        self._validate()

    def _validate(self) -> None:
        for kind, names in (("variable", self.variables), ("case", self.cases), ("source", self.sources)):
            if not names:
                raise ValueError(f"signature needs at least one {kind}")
            if len(set(names)) != len(names):
                raise ValueError(f"duplicate {kind} names: {names}")
        if self.sources.count(RELIABLE) != 1:
            raise ValueError("sources must contain the reliable source '*' exactly once")
        for name in self.variables:
            if not _IDENT.match(name) or name in _RESERVED:
                raise ValueError(f"invalid variable name {name!r}")
        for name in self.sources:
            if name != RELIABLE and not _IDENT.match(name):
                raise ValueError(f"invalid source name {name!r}")
        if len(self.variables) > config.MAX_VARIABLES:
            raise ValueError(
                f"{len(self.variables)} variables exceeds MAX_VARIABLES={config.MAX_VARIABLES}"
            )

    @property
    def n_valuations(self) -> int:
        return 1 << len(self.variables)

    @property
    def full_mask(self) -> int:
        return (1 << self.n_valuations) - 1

    @property
    def ordinary_sources(self) -> tuple[str, ...]:
        return tuple(s for s in self.sources if s != RELIABLE)

    def variable_index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownNameError("variable", name) from None

    def case_index(self, name: str) -> int:
        try:
            return self.cases.index(name)
        except ValueError:
            raise UnknownNameError("case", name) from None

    def source_index(self, name: str) -> int:
        try:
            return self.sources.index(name)
        except ValueError:
            raise UnknownNameError("source", name) from None

    def variable_mask(self, name: str) -> int:
        """Model mask of the atom ``name``."""
        bit = self.variable_index(name)
        return sum(1 << k for k in range(self.n_valuations) if (k >> bit) & 1)

    def valuation_label(self, k: int) -> str:
        """Bar notation, e.g. ``x̄y`` for valuation 2 over ``(x, y)``."""
        return "".join(
            v if (k >> i) & 1 else v + "̄" for i, v in enumerate(self.variables)
        )

    def to_dict(self) -> dict:
        return {"variables": list(self.variables), "cases": list(self.cases), "sources": list(self.sources)}


# --------------------------------------------------------------------------
# Formula syntax


class Formula:
    """Base class of the formula AST.  Supports ``&``, ``|`` and ``~``."""

    __slots__ = ()

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __invert__(self) -> Formula:
        return Not(self)

    def implies(self, other: Formula) -> Formula:
        return Implies(self, other)

    def iff(self, other: Formula) -> Formula:
        return Iff(self, other)

    def is_propositional(self) -> bool:
        return not any(isinstance(n, (Expert, Sound)) for n in self.walk())

    def walk(self) -> Iterator[Formula]:
        yield self
        for child in self.children():
            yield from child.walk()

    def children(self) -> tuple[Formula, ...]:
        return ()

    def variables(self) -> set[str]:
        return {n.name for n in self.walk() if isinstance(n, Var)}

    def __str__(self) -> str:
        return _render(self, 0)


@dataclass(frozen=True, repr=False)
class Var(Formula):
    name: str

    def __repr__(self) -> str:
        return f"Var({self.name!r})"


@dataclass(frozen=True, repr=False)
class Const(Formula):
    value: bool

    def __repr__(self) -> str:
        return f"Const({self.value})"


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Expert(Formula):
    """``E(source, arg)``: the source has expertise on ``arg``."""

    source: str
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Sound(Formula):
    """``S(source, arg)``: ``arg`` is true up to the source's expertise."""

    source: str
    arg: Formula

    def children(self):
        return (self.arg,)


TRUE = Const(True)
FALSE = Const(False)

# binding strength for rendering; higher binds tighter
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _render(f: Formula, outer: int) -> str:
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        return "!" + _render(f.arg, 5)
    if isinstance(f, (Expert, Sound)):
        tag = "E" if isinstance(f, Expert) else "S"
        return f"{tag}({f.source}, {_render(f.arg, 0)})"
    prec = _PREC[type(f)]
    # implication is right-associative, the others left-associative
    if isinstance(f, Implies):
        text = f"{_render(f.left, prec + 1)} -> {_render(f.right, prec)}"
    else:
        text = f"{_render(f.left, prec)} {_SYMBOL[type(f)]} {_render(f.right, prec + 1)}"
    return f"({text})" if prec < outer else text


def conjoin(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    return reduce(And, parts) if parts else TRUE


def disjoin(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    return reduce(Or, parts) if parts else FALSE


# --------------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(r"<->|->|[!&|(),*]|[A-Za-z_][A-Za-z0-9_]*")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos, n = 0, len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            return tokens
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        tokens.append((m.group(0), pos))
        pos = m.end()


class _Parser:
    def __init__(self, text: str, sig: Signature, modal: bool):
        self.text = text
        self.sig = sig
        self.modal = modal
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            want = repr(expected) if expected else "a token"
            got = "end of input" if tok is None else repr(tok)
            raise FormulaSyntaxError(f"expected {want}, got {got}", self.text, self.pos())
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek() is not None:
            raise FormulaSyntaxError(f"unexpected token {self.peek()!r}", self.text, self.pos())
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.peek() == "<->":
            self.take()
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.peek() == "!":
            self.take()
            return Not(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok, start = self.peek(), self.pos()
        if tok == "(":
            self.take()
            f = self.iff()
            self.take(")")
            return f
        if tok in ("E", "S") and self.i + 1 < len(self.tokens) and self.tokens[self.i + 1][0] == "(":
            if not self.modal:
                raise FormulaSyntaxError(f"{tok}(...) not allowed in a propositional formula", self.text, start)
            self.take()
            self.take("(")
            src_pos = self.pos()
            source = self.take()
            if source not in self.sig.sources:
                if source == "*" or _IDENT.match(source):
                    raise UnknownNameError("source", source)
                raise FormulaSyntaxError(f"expected a source name, got {source!r}", self.text, src_pos)
            self.take(",")
            self.modal = False
            arg = self.iff()
            self.modal = True
            self.take(")")
            return (Expert if tok == "E" else Sound)(source, arg)
        if tok == "true" or tok == "false":
            self.take()
            return Const(tok == "true")
        if tok is not None and _IDENT.match(tok):
            self.take()
            if tok not in self.sig.variables:
                raise UnknownNameError("variable", tok)
            return Var(tok)
        got = "end of input" if tok is None else repr(tok)
        raise FormulaSyntaxError(f"expected a formula, got {got}", self.text, start)


def parse_formula(text: str, sig: Signature) -> Formula:
    """Parse a propositional formula; ``E``/``S`` atoms are rejected."""
    return _Parser(text, sig, modal=False).parse()


def parse_expertise_formula(text: str, sig: Signature) -> Formula:
    """Parse a formula of the expertise language (``E``/``S`` atoms allowed)."""
    return _Parser(text, sig, modal=True).parse()


# --------------------------------------------------------------------------
# Semantics


@dataclass(frozen=True)
class ModelSet:
    """Set of valuation indices stored as a bitmask of width ``size``."""

    mask: int
    size: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.size:
            raise ValueError(f"mask {self.mask:#x} does not fit {self.size} valuations")

    @classmethod
    def full(cls, size: int) -> ModelSet:
        return cls((1 << size) - 1, size)

    @classmethod
    def empty(cls, size: int) -> ModelSet:
        return cls(0, size)

    @classmethod
    def of(cls, valuations: Iterable[int], size: int) -> ModelSet:
        return cls(sum(1 << k for k in set(valuations)), size)

    def _same(self, other: ModelSet) -> None:
        if self.size != other.size:
            raise ValueError("model sets over different valuation spaces")

    def __and__(self, other: ModelSet) -> ModelSet:
        self._same(other)
        return ModelSet(self.mask & other.mask, self.size)

    def __or__(self, other: ModelSet) -> ModelSet:
        self._same(other)
        return ModelSet(self.mask | other.mask, self.size)

    def __sub__(self, other: ModelSet) -> ModelSet:
        self._same(other)
        return ModelSet(self.mask & ~other.mask, self.size)

    def __invert__(self) -> ModelSet:
        return ModelSet(~self.mask & ((1 << self.size) - 1), self.size)

    def __contains__(self, k: int) -> bool:
        return bool((self.mask >> k) & 1)

    def __iter__(self) -> Iterator[int]:
        return (k for k in range(self.size) if (self.mask >> k) & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __bool__(self) -> bool:
        return self.mask != 0

    def issubset(self, other: ModelSet) -> bool:
        self._same(other)
        return self.mask & ~other.mask == 0

    def issuperset(self, other: ModelSet) -> bool:
        return other.issubset(self)

    __le__ = issubset
    __ge__ = issuperset

    def labels(self, sig: Signature) -> list[str]:
        return [sig.valuation_label(k) for k in self]


def formula_mask(f: Formula, sig: Signature) -> int:
    """Bitmask of the valuations satisfying a propositional formula."""
    if isinstance(f, Var):
        return sig.variable_mask(f.name)
    if isinstance(f, Const):
        return sig.full_mask if f.value else 0
    if isinstance(f, Not):
        return sig.full_mask & ~formula_mask(f.arg, sig)
    if isinstance(f, And):
        return formula_mask(f.left, sig) & formula_mask(f.right, sig)
    if isinstance(f, Or):
        return formula_mask(f.left, sig) | formula_mask(f.right, sig)
    if isinstance(f, Implies):
        return (sig.full_mask & ~formula_mask(f.left, sig)) | formula_mask(f.right, sig)
    if isinstance(f, Iff):
        return sig.full_mask & ~(formula_mask(f.left, sig) ^ formula_mask(f.right, sig))
    raise TypeError(f"not a propositional formula: {f}")


def models(f: Formula, sig: Signature) -> ModelSet:
    return ModelSet(formula_mask(f, sig), sig.n_valuations)


def equivalent(f: Formula, g: Formula, sig: Signature) -> bool:
    return formula_mask(f, sig) == formula_mask(g, sig)


def entails0(premises: Iterable[Formula], f: Formula, sig: Signature) -> bool:
    """Classical consequence: every model of all premises satisfies ``f``."""
    common = sig.full_mask
    for p in premises:
        common &= formula_mask(p, sig)
    return common & ~formula_mask(f, sig) == 0


def _minterm(k: int, variables: Sequence[str], positions: Sequence[int]) -> Formula:
    return conjoin(Var(v) if (k >> b) & 1 else Not(Var(v)) for v, b in zip(variables, positions))


def canonical_formula(m: ModelSet | int, sig: Signature) -> Formula:
    """Full DNF with one minterm per model, in valuation order."""
    mask = m.mask if isinstance(m, ModelSet) else m
    if mask == 0:
        return FALSE
    if mask == sig.full_mask:
        return TRUE
    positions = range(len(sig.variables))
    return disjoin(
        _minterm(k, sig.variables, positions) for k in range(sig.n_valuations) if (mask >> k) & 1
    )


def canonical_cnf(m: ModelSet | int, sig: Signature) -> Formula:
    """Conjunction of one clause per countermodel.

    Syntactically distinct from :func:`canonical_formula` for every mask,
    including the full one (rendered as ``x | !x``).
    """
    mask = m.mask if isinstance(m, ModelSet) else m
    if mask == sig.full_mask:
        x = Var(sig.variables[0])
        return Or(x, Not(x))
    clauses = []
    for k in range(sig.n_valuations):
        if not (mask >> k) & 1:
            clauses.append(
                disjoin(Not(Var(v)) if (k >> b) & 1 else Var(v) for b, v in enumerate(sig.variables))
            )
    return conjoin(clauses)


def essential_variables(m: ModelSet | int, sig: Signature) -> list[str]:
    """Variables the mask actually depends on."""
    mask = m.mask if isinstance(m, ModelSet) else m
    out = []
    for b, v in enumerate(sig.variables):
        if any(((mask >> k) & 1) != ((mask >> (k ^ (1 << b))) & 1) for k in range(sig.n_valuations)):
            out.append(v)
    return out


def compact_formula(m: ModelSet | int, sig: Signature) -> Formula:
    """DNF over the essential variables only; used for display."""
    mask = m.mask if isinstance(m, ModelSet) else m
    if mask == 0:
        return FALSE
    if mask == sig.full_mask:
        return TRUE
    names = essential_variables(mask, sig)
    positions = [sig.variable_index(v) for v in names]
    seen: list[int] = []
    terms = []
    for k in range(sig.n_valuations):
        if (mask >> k) & 1:
            key = tuple((k >> b) & 1 for b in positions)
            if key not in seen:
                seen.append(key)
                terms.append(_minterm(k, names, positions))
    return disjoin(terms)
