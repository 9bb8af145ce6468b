"""Factored evaluation of the concrete operators.

For a fixed tuple of case valuations, every soundness constraint and every
rank or score term involves a single source, so possible and plausible
worlds split into product blocks: one valuation tuple times one set of
partitions per source.  This avoids materialising the world space, whose
size grows as ``Bell(|V|) ** (|S| - 1)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import config
from .collection import WorldSet
from .expertise import Universe, partition_table
from .operators import OperatorOutput, ReportSequence
from .propositional import (
    RELIABLE,
    And,
    Expert,
    Formula,
    Iff,
    Implies,
    ModelSet,
    Not,
    Or,
    Sound,
    formula_mask,
)
from .errors import UnknownNameError

_ALIASES = {
    "weak-mb": "weak-mb",
    "var": "var-based-cond",
    "var-based-cond": "var-based-cond",
    "part": "part-based-cond",
    "part-based-cond": "part-based-cond",
    "excess-min": "excess-min",
}


@dataclass(frozen=True)
class Block:
    """Worlds with the given case valuations and any choice of partitions.

    ``partitions[s]`` lists the admissible partition indices of source ``s``
    (signature order, reliable source included).
    """

    valuations: tuple[int, ...]
    partitions: tuple[np.ndarray, ...]

    @property
    def size(self) -> int:
        out = 1
        for p in self.partitions:
            out *= len(p)
        return out


class BlockOutput:
    """Possible and plausible worlds as unions of product blocks."""

    def __init__(self, sig, possible: list[Block], plausible: list[Block]):
        self.sig = sig
        self.possible = possible
        self.plausible = plausible
        self.table = partition_table(sig.n_valuations)

    def _blocks(self, which: str) -> list[Block]:
        if which not in ("possible", "plausible"):
            raise ValueError(f"unknown world set {which!r}")
        return self.plausible if which == "plausible" else self.possible

    @property
    def possible_count(self) -> int:
        return sum(b.size for b in self.possible)

    @property
    def plausible_count(self) -> int:
        return sum(b.size for b in self.plausible)

    def prop_models(self, case: str, which: str = "plausible") -> ModelSet:
        c = self.sig.case_index(case)
        return ModelSet.of((b.valuations[c] for b in self._blocks(which)), self.sig.n_valuations)

    def holds(self, case: str, f: Formula, which: str = "plausible", budget: int | None = None) -> bool:
        """``f`` holds at ``case`` throughout the chosen world set."""
        c = self.sig.case_index(case)
        for b in self._blocks(which):
            config.check_budget("block worlds", b.size, budget, config.WORLD_BUDGET)
            if not np.all(self._truth(b, c, f)):
                return False
        return True

    def _axis(self, b: Block, s: int, values: np.ndarray):
        # one broadcast axis per source
        shape = [1] * len(b.partitions)
        shape[s] = len(b.partitions[s])
        return values[b.partitions[s]].reshape(shape)

    def _truth(self, b: Block, c: int, f: Formula):
        sig, t = self.sig, self.table
        if f.is_propositional():
            return bool((formula_mask(f, sig) >> b.valuations[c]) & 1)
        if isinstance(f, Expert):
            return self._axis(b, sig.source_index(f.source), t.expert(formula_mask(f.arg, sig)))
        if isinstance(f, Sound):
            s = sig.source_index(f.source)
            return self._axis(b, s, t.sound(b.valuations[c], formula_mask(f.arg, sig)))
        if isinstance(f, Not):
            return np.logical_not(self._truth(b, c, f.arg))
        x, y = self._truth(b, c, f.left), self._truth(b, c, f.right)
        if isinstance(f, And):
            return np.logical_and(x, y)
        if isinstance(f, Or):
            return np.logical_or(x, y)
        if isinstance(f, Implies):
            return np.logical_or(np.logical_not(x), y)
        if isinstance(f, Iff):
            return np.equal(x, y)
        raise TypeError(f"unknown formula node {f!r}")

    def world_indices(self, universe: Universe, which: str = "plausible") -> np.ndarray:
        """Indices of the block worlds in the dense enumeration order."""
        nb, nv = len(self.table), self.sig.n_valuations
        out = []
        for b in self._blocks(which):
            a = np.zeros(1, dtype=np.int64)
            for s, name in enumerate(self.sig.sources):
                if name != RELIABLE:
                    a = (a[:, None] * nb + b.partitions[s][None, :]).reshape(-1)
            t = 0
            for v in b.valuations:
                t = t * nv + v
            out.append(a * universe.n_tuples + t)
        return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)

    def to_output(self, universe: Universe) -> OperatorOutput:
        sets = []
        for which in ("possible", "plausible"):
            arr = np.zeros(universe.size, dtype=bool)
            arr[self.world_indices(universe, which)] = True
            sets.append(WorldSet(universe, arr))
        return OperatorOutput(*sets)


def _source_scores(kind: str, sig, table, reports: list[tuple[int, int]]) -> np.ndarray:
    """Per-partition contribution of one source to the rank or score."""
    if kind == "weak-mb":
        return np.zeros(len(table), dtype=np.int64)
    if kind == "var-based-cond":
        out = np.zeros(len(table), dtype=np.int64)
        for v in sig.variables:
            m = sig.variable_mask(v)
            out -= table.image[:, m] == m
        return out
    if kind == "part-based-cond":
        return -table.n_cells
    out = np.zeros(len(table), dtype=np.int64)
    for _, m in reports:
        out += table.popcount[table.image[:, m] & ~m]
    return out


def decomposed_eval(seq: ReportSequence, op: str) -> BlockOutput:
    """Evaluate ``op`` block-wise; agrees exactly with the dense path."""
    try:
        kind = _ALIASES[op]
    except KeyError:
        raise UnknownNameError("operator", op) from None
    sig = seq.sig
    table = partition_table(sig.n_valuations)
    nsrc = len(sig.sources)
    by_source: list[list[tuple[int, int]]] = [[] for _ in range(nsrc)]
    for r in seq:
        by_source[sig.source_index(r.source)].append((sig.case_index(r.case), r.mask))
    star = sig.source_index(RELIABLE)
    candidates = [
        np.array([table.unit_index]) if s == star else np.arange(len(table)) for s in range(nsrc)
    ]
    scores = [_source_scores(kind, sig, table, by_source[s])[candidates[s]] for s in range(nsrc)]
    images = [[table.image[candidates[s], m] for _, m in by_source[s]] for s in range(nsrc)]

    possible: list[Block] = []
    choices: list[tuple[int, Block]] = []
    for t in itertools.product(range(sig.n_valuations), repeat=len(sig.cases)):
        feasible_sets, best_sets, total = [], [], 0
        for s in range(nsrc):
            ok = np.ones(len(candidates[s]), dtype=bool)
            for (c, _), image in zip(by_source[s], images[s]):
                ok &= ((image >> t[c]) & 1).astype(bool)
            if not ok.any():
                break
            best = scores[s][ok].min()
            feasible_sets.append(candidates[s][ok])
            best_sets.append(candidates[s][ok & (scores[s] == best)])
            total += int(best)
        else:
            possible.append(Block(t, tuple(feasible_sets)))
            choices.append((total, Block(t, tuple(best_sets))))
    if not choices:
        return BlockOutput(sig, [], [])
    low = min(total for total, _ in choices)
    return BlockOutput(sig, possible, [b for total, b in choices if total == low])
