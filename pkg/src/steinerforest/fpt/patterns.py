"""Rooted trees on labelled leaves where every internal node has at least two children.

A tree over leaves ``L`` is a list of internal nodes, root first.  Each node
is a tuple of child groups; a child group is the frozenset of leaves below
that child.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from ..core import GuardExceeded

LEAF_LIMIT = 12

Node = tuple[frozenset, ...]


def _partitions(items: Sequence) -> Iterator[list[list]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def hierarchies(leaves: Sequence, budget: int | None = None) -> Iterator[list[Node]]:
    """All such trees over ``leaves`` with at most ``budget`` internal nodes."""
    leaves = tuple(leaves)
    if len(leaves) > LEAF_LIMIT:
        raise GuardExceeded("pattern leaves", LEAF_LIMIT, len(leaves))
    if len(leaves) <= 1:
        yield []
        return
    if budget is not None and budget < 1:
        return
    for part in _partitions(list(leaves)):
        if len(part) < 2:
            continue
        root = tuple(frozenset(b) for b in part)
        big = [b for b in part if len(b) > 1]
        left = None if budget is None else budget - 1
        if left is not None and left < len(big):
            continue
        yield from _combine(root, big, left)


def _combine(root: Node, blocks: list, left: int | None) -> Iterator[list[Node]]:
    def rec(i, left, acc):
        if i == len(blocks):
            yield [root] + acc
            return
        # reserve one node for each later block
        cap = None if left is None else left - (len(blocks) - i - 1)
        for sub in hierarchies(blocks[i], cap):
            rest = None if left is None else left - len(sub)
            yield from rec(i + 1, rest, acc + sub)

    yield from rec(0, left, [])


@dataclass(frozen=True)
class PatternForest:
    """One tree per leaf group; ``trees[j]`` is a list of internal nodes."""

    trees: tuple[tuple[Node, ...], ...]

    @property
    def beta(self) -> int:
        return sum(len(t) for t in self.trees)

    def nodes(self) -> list[Node]:
        return [node for t in self.trees for node in t]


def enumerate_pattern_forests(counts: Sequence[int], budget: int | None = None) -> Iterator[PatternForest]:
    """Forests for groups of ``counts[j]`` leaves labelled ``0..counts[j]-1``."""
    for c in counts:
        if c > LEAF_LIMIT:
            raise GuardExceeded("pattern leaves", LEAF_LIMIT, c)

    def rec(j, left, acc):
        if j == len(counts):
            yield PatternForest(tuple(acc))
            return
        need_later = sum(1 for c in counts[j + 1:] if c > 1)
        cap = None if left is None else left - need_later
        for tree in hierarchies(range(counts[j]), cap):
            rest = None if left is None else left - len(tree)
            yield from rec(j + 1, rest, acc + [tuple(tree)])

    yield from rec(0, budget, [])


def count_hierarchies_bruteforce(k: int) -> int:
    """Independent count via nested set partitions (for testing)."""
    if k <= 1:
        return 1

    def count(s: frozenset) -> int:
        if len(s) == 1:
            return 1
        total = 0
        items = sorted(s)
        for labels in itertools.product(range(len(items)), repeat=len(items)):
            # canonical restricted-growth labels only
            seen, ok = {}, True
            for x in labels:
                if x not in seen:
                    if x != len(seen):
                        ok = False
                        break
                    seen[x] = True
            if not ok or len(seen) < 2:
                continue
            blocks: dict[int, list] = {}
            for item, lab in zip(items, labels):
                blocks.setdefault(lab, []).append(item)
            prod = 1
            for b in blocks.values():
                prod *= count(frozenset(b))
            total += prod
        return total

    return count(frozenset(range(k)))
