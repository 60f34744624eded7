"""Finite posets, their ancestral (upward-closed) subsets and borders.

Ancestral subsets are returned as ``frozenset`` objects of element ids.
Internally they are handled as bitmasks over the canonical element order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Sequence

DEFAULT_MAX_ELEMENTS = 20


class PosetError(ValueError):
    pass


@dataclass(frozen=True)
class Shape:
    """Result of :meth:`Poset.classify_shape`.

    ``kind`` is one of ``chain``, ``antichain``, ``direct``, ``kronecker``
    or ``general``; ``parts`` holds the witness bipartition ``(I1, I2)``
    for the two decomposable kinds.
    """

    kind: str
    parts: tuple[frozenset, frozenset] | None = None


@dataclass(frozen=True)
class Poset:
    elements: tuple
    strict_order: frozenset = field(repr=False)

    # bitmask helpers, filled in __post_init__
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    _up: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if len(set(self.elements)) != len(self.elements):
            raise PosetError("duplicate element identifiers")
        index = {e: n for n, e in enumerate(self.elements)}
        up = [0] * len(self.elements)
        for a, b in self.strict_order:
            if a not in index or b not in index:
                raise PosetError(f"relation ({a!r}, {b!r}) uses an unknown element")
            if a == b:
                raise PosetError(f"relation {a!r} < {a!r} is reflexive")
            up[index[a]] |= 1 << index[b]
        for n in range(len(up)):
            m = up[n]
            for n2 in range(len(up)):
                if m >> n2 & 1 and up[n2] & ~m:
                    raise PosetError("strict_order is not transitively closed")
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_up", tuple(up))

    @classmethod
    def from_relations(
        cls,
        elements: Iterable[Hashable],
        relations: Iterable[tuple[Hashable, Hashable]] = (),
        max_elements: int = DEFAULT_MAX_ELEMENTS,
    ) -> "Poset":
        """Build a poset from cover relations or any strict pairs ``a < b``.

        The transitive closure is computed here; a cycle raises PosetError.
        """
        elements = tuple(elements)
        if len(elements) > max_elements:
            raise PosetError(f"{len(elements)} elements exceeds the cap of {max_elements}")
        index = {e: n for n, e in enumerate(elements)}
        if len(index) != len(elements):
            raise PosetError("duplicate element identifiers")
        n = len(elements)
        up = [0] * n
        for a, b in relations:
            if a not in index or b not in index:
                raise PosetError(f"relation {a!r} < {b!r} uses an unknown element")
            up[index[a]] |= 1 << index[b]
        changed = True
        while changed:
            changed = False
            for i in range(n):
                m = up[i]
                for j in range(n):
                    if m >> j & 1:
                        m |= up[j]
                if m != up[i]:
                    up[i] = m
                    changed = True
        for i in range(n):
            if up[i] >> i & 1:
                raise PosetError(f"relations contain a cycle through {elements[i]!r}")
        order = frozenset(
            (elements[i], elements[j]) for i in range(n) for j in range(n) if up[i] >> j & 1
        )
        return cls(elements, order)

    @classmethod
    def chain(cls, s: int) -> "Poset":
        """The chain 1 < 2 < ... < s."""
        return cls.from_relations(range(1, s + 1), [(i, i + 1) for i in range(1, s)])

    @classmethod
    def antichain(cls, s: int) -> "Poset":
        return cls.from_relations(range(1, s + 1))

    # -- bitmask plumbing -------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, i: Hashable) -> int:
        try:
            return self._index[i]
        except (KeyError, TypeError):
            raise PosetError(f"unknown element {i!r}") from None

    @property
    def full_mask(self) -> int:
        return (1 << len(self.elements)) - 1

    def mask(self, subset: Iterable[Hashable]) -> int:
        m = 0
        for e in subset:
            m |= 1 << self.index(e)
        return m

    def subset(self, mask: int) -> frozenset:
        return frozenset(e for n, e in enumerate(self.elements) if mask >> n & 1)

    def indices(self, mask: int) -> tuple[int, ...]:
        return tuple(n for n in range(len(self.elements)) if mask >> n & 1)

    def up_mask(self, n: int) -> int:
        """Bitmask of A(i) for the element at canonical position ``n``."""
        return self._up[n]

    def is_ancestral_mask(self, mask: int) -> bool:
        for n in range(len(self.elements)):
            if mask >> n & 1 and self._up[n] & ~mask:
                return False
        return True

    def border_mask(self, mask: int) -> int:
        comp = self.full_mask & ~mask
        out = 0
        for n in range(len(self.elements)):
            if comp >> n & 1 and not self._up[n] & comp:
                out |= 1 << n
        return out

    def ancestral_masks(self) -> list[int]:
        masks = [m for m in range(1 << len(self.elements)) if self.is_ancestral_mask(m)]
        masks.sort(key=self._mask_key)
        return masks

    def _mask_key(self, mask: int) -> tuple:
        return (bin(mask).count("1"), self.indices(mask))

    def sort_key(self, subset: Iterable[Hashable]) -> tuple:
        """Deterministic order: by size, then canonical member order."""
        return self._mask_key(self.mask(subset))

    # -- public operations -------------------------------------------------

    def less(self, a: Hashable, b: Hashable) -> bool:
        return bool(self._up[self.index(a)] >> self.index(b) & 1)

    def up_set_strict(self, i: Hashable) -> frozenset:
        return self.subset(self._up[self.index(i)])

    def up_set_closed(self, i: Hashable) -> frozenset:
        n = self.index(i)
        return self.subset(self._up[n] | 1 << n)

    def is_ancestral(self, subset: Iterable[Hashable]) -> bool:
        return self.is_ancestral_mask(self.mask(subset))

    def ancestral_subsets(self) -> list[frozenset]:
        return [self.subset(m) for m in self.ancestral_masks()]

    def border(self, J: Iterable[Hashable]) -> frozenset:
        m = self.mask(J)
        if not self.is_ancestral_mask(m):
            raise PosetError(f"{sorted(self.subset(m), key=self.index)} is not ancestral")
        return self.subset(self.border_mask(m))

    def restrict(self, subset: Iterable[Hashable]) -> "Poset":
        """Induced subposet, keeping the canonical order."""
        keep = self.mask(subset)
        elements = tuple(e for n, e in enumerate(self.elements) if keep >> n & 1)
        order = frozenset((a, b) for a, b in self.strict_order if a in elements and b in elements)
        return Poset(elements, order)

    def is_chain(self) -> bool:
        n = len(self.elements)
        return len(self.strict_order) == n * (n - 1) // 2

    def is_antichain(self) -> bool:
        return not self.strict_order

    def chain_order(self) -> list:
        """Elements of a chain listed bottom to top (1 < 2 < ... < s)."""
        if not self.is_chain():
            raise PosetError("poset is not a chain")
        return sorted(self.elements, key=lambda e: -bin(self._up[self.index(e)]).count("1"))

    def classify_shape(self) -> Shape:
        n = len(self.elements)
        if n < 2:
            raise PosetError("classify_shape needs at least two elements")
        if self.is_chain():
            return Shape("chain")
        if self.is_antichain():
            return Shape("antichain")
        full = self.full_mask
        candidates = [
            sum(1 << x for x in c) for size in range(1, n) for c in combinations(range(n), size)
        ]
        for m2 in candidates:
            m1 = full & ~m2
            parts = (self.subset(m1), self.subset(m2))
            if all(not (self._up[a] & m2) for a in self.indices(m1)) and all(
                not (self._up[b] & m1) for b in self.indices(m2)
            ):
                return Shape("direct", parts)
            if all(self._up[a] & m2 == m2 for a in self.indices(m1)):
                return Shape("kronecker", parts)
        return Shape("general")

    # -- serialization ------------------------------------------------------

    def cover_relations(self) -> list[tuple]:
        covers = []
        for a, b in self.strict_order:
            if not any((a, c) in self.strict_order and (c, b) in self.strict_order for c in self.elements):
                covers.append((a, b))
        covers.sort(key=lambda r: (self.index(r[0]), self.index(r[1])))
        return covers

    def to_dict(self) -> dict:
        return {"elements": list(self.elements), "relations": [list(r) for r in self.cover_relations()]}


def _token(s: str):
    return int(s) if s.lstrip("-").isdigit() else s


def parse_poset_text(text: str, max_elements: int = DEFAULT_MAX_ELEMENTS) -> Poset:
    """Parse ``elements: 1 2 3`` / ``rel: 1 < 3`` lines (other keys ignored)."""
    elements = None
    relations = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise PosetError(f"line {lineno}: expected 'key: value'")
        key = key.strip().lower()
        if key == "elements":
            elements = [_token(t) for t in rest.split()]
        elif key == "rel":
            parts = rest.split("<")
            if len(parts) < 2:
                raise PosetError(f"line {lineno}: expected 'rel: a < b'")
            chain = [_token(p.strip()) for p in parts]
            relations.extend(zip(chain, chain[1:]))
    if elements is None:
        raise PosetError("missing 'elements:' line")
    return Poset.from_relations(elements, relations, max_elements)


def poset_from_json(data: dict | str, max_elements: int = DEFAULT_MAX_ELEMENTS) -> Poset:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        elements = data["elements"]
        relations = [tuple(r) for r in data.get("relations", [])]
    except (KeyError, TypeError) as exc:
        raise PosetError(f"malformed poset JSON: {exc}") from None
    return Poset.from_relations(elements, relations, max_elements)


def format_set(poset: Poset, subset: Iterable[Hashable]) -> str:
    members = sorted(subset, key=poset.index)
    return "{" + ",".join(str(m) for m in members) + "}"
