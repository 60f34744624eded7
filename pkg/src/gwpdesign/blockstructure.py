"""Point sets P = prod Delta_i, projections, the partitions C_J, and blocks.

Points are tuples of ints in the poset's canonical element order, with
coordinate ``n`` in ``range(sizes[n])``.  A projected tuple over an
ancestral set J is the tuple of the point's coordinates at the members of J,
again in canonical order; the projection to the empty set is ``()``.
"""
from __future__ import annotations

import json
import threading
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import prod
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .poset import DEFAULT_MAX_ELEMENTS, Poset, PosetError, parse_poset_text, poset_from_json

DEFAULT_CLASS_CAP = 10**6

Point = tuple[int, ...]


class StructureError(ValueError):
    pass


class CapExceeded(RuntimeError):
    """A materialization would exceed a configured size cap."""


@dataclass(frozen=True)
class BlockStructure:
    poset: Poset
    sizes: tuple[int, ...]

    def __post_init__(self) -> None:
        sizes = tuple(int(e) for e in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if len(sizes) != len(self.poset):
            raise StructureError(f"{len(sizes)} sizes given for {len(self.poset)} poset elements")
        for el, e in zip(self.poset.elements, sizes):
            if e < 2:
                raise StructureError(f"alphabet size e_{el} = {e} must be at least 2")

    @classmethod
    def from_sizes(cls, poset: Poset, sizes: Mapping[Hashable, int] | Sequence[int]) -> "BlockStructure":
        if isinstance(sizes, Mapping):
            sizes = [sizes[e] for e in poset.elements]
        return cls(poset, tuple(sizes))

    @property
    def v(self) -> int:
        return prod(self.sizes)

    @property
    def dim(self) -> int:
        return len(self.sizes)

    @cached_property
    def up_indices(self) -> tuple[tuple[int, ...], ...]:
        """Canonical indices of A(i), per coordinate."""
        return tuple(self.poset.indices(self.poset.up_mask(n)) for n in range(self.dim))

    def e(self, i: Hashable) -> int:
        return self.sizes[self.poset.index(i)]

    def _ancestral_mask(self, J: Iterable[Hashable]) -> int:
        m = self.poset.mask(J)
        if not self.poset.is_ancestral_mask(m):
            raise PosetError(f"{sorted(J, key=self.poset.index)} is not ancestral")
        return m

    def prod_sizes(self, mask: int) -> int:
        return prod(self.sizes[n] for n in self.poset.indices(mask))

    def class_size(self, J: Iterable[Hashable]) -> int:
        """c_J: the number of points in each C_J-class."""
        m = self._ancestral_mask(J)
        return self.prod_sizes(self.poset.full_mask & ~m)

    def class_count(self, J: Iterable[Hashable]) -> int:
        """d_J: the number of C_J-classes."""
        return self.prod_sizes(self._ancestral_mask(J))

    def validate_point(self, point: Sequence[int]) -> Point:
        point = tuple(point)
        if len(point) != self.dim:
            raise StructureError(f"point {point} has {len(point)} coordinates, expected {self.dim}")
        for el, x, e in zip(self.poset.elements, point, self.sizes):
            if not isinstance(x, int) or not 0 <= x < e:
                raise StructureError(f"coordinate {el} of point {point} is outside [0, {e})")
        return point

    def project(self, point: Sequence[int], J: Iterable[Hashable]) -> tuple[int, ...]:
        m = self._ancestral_mask(J)
        point = self.validate_point(point)
        return tuple(point[n] for n in self.poset.indices(m))

    def points(self) -> Iterator[Point]:
        return product(*(range(e) for e in self.sizes))

    def point_index(self, point: Sequence[int]) -> int:
        idx = 0
        for x, e in zip(point, self.sizes):
            idx = idx * e + x
        return idx

    def partition_classes(
        self, J: Iterable[Hashable], cap: int = DEFAULT_CLASS_CAP
    ) -> Iterator[tuple[tuple[int, ...], list[Point]]]:
        """Yield ``(nu, class)`` for every C_J-class, materializing P."""
        m = self._ancestral_mask(J)
        if self.v > cap:
            raise CapExceeded(f"v = {self.v} exceeds the class materialization cap {cap}")
        idx = self.poset.indices(m)
        classes: dict[tuple[int, ...], list[Point]] = {}
        for nu in product(*(range(self.sizes[n]) for n in idx)):
            classes[nu] = []
        for pt in self.points():
            classes[tuple(pt[n] for n in idx)].append(pt)
        yield from classes.items()

    def to_dict(self) -> dict:
        d = self.poset.to_dict()
        d["sizes"] = list(self.sizes)
        return d


class Block:
    """A nonempty point subset with memoized array function and sum of squares.

    ``chi`` and ``mu`` work sparsely: block points are grouped by projection,
    so Delta_J is never enumerated.
    """

    def __init__(self, structure: BlockStructure, points: Iterable[Sequence[int]]):
        pts = {structure.validate_point(p) for p in points}
        if not pts:
            raise StructureError("a block must contain at least one point")
        self.structure = structure
        self.points: tuple[Point, ...] = tuple(sorted(pts))
        self.pointset = frozenset(pts)
        self._counts: dict[int, Counter] = {}
        self._lock = threading.Lock()

    @property
    def k(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, point) -> bool:
        return tuple(point) in self.pointset

    def __repr__(self) -> str:
        return f"Block(k={self.k}, v={self.structure.v})"

    def counts_mask(self, mask: int) -> Counter:
        cached = self._counts.get(mask)
        if cached is not None:
            return cached
        idx = self.structure.poset.indices(mask)
        c = Counter(tuple(p[n] for n in idx) for p in self.points)
        with self._lock:
            self._counts.setdefault(mask, c)
        return c

    def counts(self, J: Iterable[Hashable]) -> Counter:
        """Nonzero values of chi_B over Delta_J, keyed by projected tuple."""
        return self.counts_mask(self.structure._ancestral_mask(J))

    def chi(self, J: Iterable[Hashable], nu: Sequence[int]) -> int:
        return self.counts(J).get(tuple(nu), 0)

    def mu_mask(self, mask: int) -> int:
        return sum(c * c for c in self.counts_mask(mask).values())

    def mu(self, J: Iterable[Hashable]) -> int:
        return self.mu_mask(self.structure._ancestral_mask(J))

    def to_text(self) -> str:
        return "".join(",".join(str(x) for x in p) + "\n" for p in self.points)


def parse_structure_text(text: str, max_elements: int = DEFAULT_MAX_ELEMENTS) -> BlockStructure:
    poset = parse_poset_text(text, max_elements)
    sizes = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        key, sep, rest = line.partition(":")
        if sep and key.strip().lower() == "sizes":
            try:
                sizes = [int(t) for t in rest.split()]
            except ValueError:
                raise StructureError(f"bad sizes line: {raw!r}") from None
    if sizes is None:
        raise StructureError("missing 'sizes:' line")
    return BlockStructure(poset, tuple(sizes))


def structure_from_json(data: dict | str, max_elements: int = DEFAULT_MAX_ELEMENTS) -> BlockStructure:
    if isinstance(data, str):
        data = json.loads(data)
    poset = poset_from_json(data, max_elements)
    if "sizes" not in data:
        raise StructureError("structure JSON needs a 'sizes' key")
    return BlockStructure(poset, tuple(int(e) for e in data["sizes"]))


def load_structure(text: str) -> BlockStructure:
    """Accept either the line format or JSON."""
    if text.lstrip().startswith("{"):
        try:
            return structure_from_json(text)
        except json.JSONDecodeError as exc:
            raise StructureError(f"invalid JSON: {exc}") from None
    return parse_structure_text(text)


def parse_block_text(text: str) -> list[Point]:
    points = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            points.append(tuple(int(t) for t in line.split(",")))
        except ValueError:
            raise StructureError(f"block line {lineno}: expected comma-separated integers") from None
    return points


def load_block(structure: BlockStructure, text: str) -> Block:
    if text.lstrip().startswith("["):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise StructureError(f"invalid JSON: {exc}") from None
        if not isinstance(raw, list) or not all(isinstance(p, list) for p in raw):
            raise StructureError("block JSON must be an array of coordinate arrays")
        points = [tuple(p) for p in raw]
    else:
        points = parse_block_text(text)
    return Block(structure, points)
