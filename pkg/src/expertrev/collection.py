"""Case-indexed formula collections and sets of worlds.

Closed collections are never materialised: a collection is identified with
the elementary set of worlds it determines, and equality or consistency of
collections is decided on those sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from .expertise import Universe, World, get_universe
from .propositional import Formula, ModelSet, Signature


@dataclass(frozen=True)
class CaseCollection:
    """One finite set of formulas per case (missing cases are empty)."""

    sig: Signature
    entries: tuple[frozenset, ...]

    def __init__(self, sig: Signature, entries: Mapping[str, Iterable[Formula]] | None = None):
        entries = dict(entries or {})
        for case in entries:
            sig.case_index(case)
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "entries", tuple(frozenset(entries.get(c, ())) for c in sig.cases))

    def __getitem__(self, case: str) -> frozenset:
        return self.entries[self.sig.case_index(case)]

    def items(self) -> Iterator[tuple[str, frozenset]]:
        return zip(self.sig.cases, self.entries)

    def __or__(self, other: CaseCollection) -> CaseCollection:
        return CaseCollection(self.sig, {c: a | b for (c, a), b in zip(self.items(), other.entries)})

    def __le__(self, other: CaseCollection) -> bool:
        return all(a <= b for a, b in zip(self.entries, other.entries))

    def is_empty(self) -> bool:
        return not any(self.entries)


class WorldSet:
    """Subset of a :class:`Universe`, stored as a boolean vector."""

    __slots__ = ("universe", "array", "_key")

    def __init__(self, universe: Universe, array: np.ndarray):
        if array.shape != (universe.size,) or array.dtype != bool:
            raise ValueError("world set array must be a boolean vector over the universe")
        self.universe = universe
        self.array = array
        self._key = None

    @classmethod
    def all(cls, universe: Universe) -> WorldSet:
        return cls(universe, np.ones(universe.size, dtype=bool))

    @classmethod
    def none(cls, universe: Universe) -> WorldSet:
        return cls(universe, np.zeros(universe.size, dtype=bool))

    @classmethod
    def from_indices(cls, universe: Universe, indices: Iterable[int]) -> WorldSet:
        arr = np.zeros(universe.size, dtype=bool)
        arr[list(indices)] = True
        return cls(universe, arr)

    @classmethod
    def from_worlds(cls, universe: Universe, worlds: Iterable[World]) -> WorldSet:
        return cls.from_indices(universe, (universe.index_of(w) for w in worlds))

    @property
    def sig(self) -> Signature:
        return self.universe.sig

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = np.packbits(self.array).tobytes()
        return self._key

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.array)

    def __len__(self) -> int:
        return int(self.array.sum())

    def __bool__(self) -> bool:
        return bool(self.array.any())

    def __iter__(self) -> Iterator[World]:
        return (self.universe.world(int(i)) for i in self.indices())

    def __contains__(self, w: World) -> bool:
        return bool(self.array[self.universe.index_of(w)])

    def _check(self, other: WorldSet) -> None:
        if other.universe is not self.universe and other.universe.sig != self.sig:
            raise ValueError("world sets over different signatures")

    def __and__(self, other: WorldSet) -> WorldSet:
        self._check(other)
        return WorldSet(self.universe, self.array & other.array)

    def __or__(self, other: WorldSet) -> WorldSet:
        self._check(other)
        return WorldSet(self.universe, self.array | other.array)

    def __sub__(self, other: WorldSet) -> WorldSet:
        self._check(other)
        return WorldSet(self.universe, self.array & ~other.array)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WorldSet):
            return NotImplemented
        return self.sig == other.sig and bool(np.array_equal(self.array, other.array))

    def __hash__(self) -> int:
        return hash(self.key)

    def __le__(self, other: WorldSet) -> bool:
        self._check(other)
        return not bool((self.array & ~other.array).any())

    def __ge__(self, other: WorldSet) -> bool:
        return other <= self

    def __repr__(self) -> str:
        return f"WorldSet({len(self)} of {self.universe.size} worlds)"

    def grid(self) -> np.ndarray:
        return self.array.reshape(self.universe.grid_shape)

    def satisfying(self, case: str, f: Formula) -> WorldSet:
        return WorldSet(self.universe, self.array & self.universe.truth(case, f))

    def all_satisfy(self, case: str, f: Formula) -> bool:
        """Every member satisfies ``f`` at ``case`` (vacuous when empty)."""
        return not bool((self.array & ~self.universe.truth(case, f)).any())


def _universe(sig_or_universe) -> Universe:
    return sig_or_universe if isinstance(sig_or_universe, Universe) else get_universe(sig_or_universe)


def mod_of(g: CaseCollection, universe: Universe | None = None) -> WorldSet:
    """Worlds satisfying every formula of ``g`` at its case."""
    u = _universe(g.sig if universe is None else universe)
    arr = np.ones(u.size, dtype=bool)
    for case, formulas in g.items():
        for f in formulas:
            arr &= u.truth(case, f)
    return WorldSet(u, arr)


def is_consequence(g: CaseCollection, case: str, f: Formula, universe: Universe | None = None) -> bool:
    """``f`` is a ``case``-consequence of ``g``."""
    return mod_of(g, universe).all_satisfy(case, f)


def prop_belief_models(ws: WorldSet, case: str) -> ModelSet:
    """Valuations occurring at ``case`` in some member of ``ws``."""
    u = ws.universe
    c = u.sig.case_index(case)
    seen = np.bincount(u.vals[ws.array, c], minlength=u.sig.n_valuations) > 0
    return ModelSet.of(np.flatnonzero(seen).tolist(), u.sig.n_valuations)


def is_valuation_combination(w: World, ws: WorldSet) -> bool:
    """Each case valuation of ``w`` occurs at that case in some member of ``ws``."""
    if not ws:
        return False
    return all(v in prop_belief_models(ws, c) for c, v in zip(w.sig.cases, w.valuations))


def elementary_closure(ws: WorldSet) -> WorldSet:
    """Least superset closed under valuation combinations of partition-equivalent members.

    Within one partition assignment the closure is the product of the
    per-case projections of the member valuation tuples.
    """
    g = ws.grid()
    ncases = g.ndim - 1
    out = np.ones_like(g)
    for c in range(ncases):
        others = tuple(a for a in range(1, ncases + 1) if a != c + 1)
        proj = g.any(axis=others) if others else g
        shape = [g.shape[0]] + [1] * ncases
        shape[c + 1] = g.shape[c + 1]
        out &= proj.reshape(shape)
    return WorldSet(ws.universe, out.reshape(-1))


def is_elementary(ws: WorldSet) -> bool:
    return elementary_closure(ws) == ws
