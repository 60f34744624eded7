"""Generalised wreath products over a poset block structure.

An element is a tuple ``(f_i)`` where ``f_i`` maps each tuple of Delta_{A(i)}
to a permutation of Delta_i.  A permutation is stored as its image tuple,
``perm[x]`` being the image of ``x``.  Full enumeration is only meant for
tiny structures.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from math import factorial, prod
from typing import Hashable, Iterable, Mapping, Sequence

from .blockstructure import Block, BlockStructure, CapExceeded, Point, StructureError
from .poset import Poset, PosetError

DEFAULT_GROUP_CAP = 10**6
DEFAULT_V_CAP = 10**4

Perm = tuple[int, ...]


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """Apply ``p`` then ``q``."""
    return tuple(q[x] for x in p)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for x, y in enumerate(p):
        inv[y] = x
    return tuple(inv)


def cyclic_perm(n: int, shift: int = 1) -> Perm:
    return tuple((x + shift) % n for x in range(n))


def generate_group(generators: Iterable[Perm], n: int) -> list[Perm]:
    """All elements of the group generated by ``generators`` on range(n), sorted."""
    gens = [tuple(g) for g in generators]
    for g in gens:
        if sorted(g) != list(range(n)):
            raise StructureError(f"{g} is not a permutation of 0..{n - 1}")
    seen = {identity_perm(n)}
    frontier = [identity_perm(n)]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                hg = compose(h, g)
                if hg not in seen:
                    seen.add(hg)
                    nxt.append(hg)
        frontier = nxt
    return sorted(seen)


def orbits_on_points(generators: Sequence[Perm], n: int) -> list[set[int]]:
    seen: set[int] = set()
    out = []
    for start in range(n):
        if start in seen:
            continue
        orb = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for g in generators:
                y = g[x]
                if y not in orb:
                    orb.add(y)
                    stack.append(y)
        seen |= orb
        out.append(orb)
    return out


def count_pair_orbits(generators: Sequence[Perm], n: int) -> int:
    """Number of orbits on ordered pairs of distinct points."""
    seen: set[tuple[int, int]] = set()
    count = 0
    for a in range(n):
        for b in range(n):
            if a == b or (a, b) in seen:
                continue
            count += 1
            seen.add((a, b))
            stack = [(a, b)]
            while stack:
                x, y = stack.pop()
                for g in generators:
                    pair = (g[x], g[y])
                    if pair not in seen:
                        seen.add(pair)
                        stack.append(pair)
    return count


@dataclass
class ComponentGroups:
    """Generators of each G_i <= Sym(Delta_i); missing entries mean Sym(Delta_i)."""

    structure: BlockStructure
    generators: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self) -> None:
        gens = {}
        for el, perms in self.generators.items():
            n = self.structure.poset.index(el)
            e = self.structure.sizes[n]
            checked = []
            for p in perms:
                p = tuple(p)
                if sorted(p) != list(range(e)):
                    raise StructureError(f"generator {p} for element {el} is not a permutation of 0..{e - 1}")
                checked.append(p)
            gens[el] = checked
        self.generators = gens

    def is_symmetric(self, el: Hashable) -> bool:
        return el not in self.generators

    def group(self, el: Hashable) -> list[Perm]:
        if el not in self._cache:
            e = self.structure.e(el)
            if self.is_symmetric(el):
                self._cache[el] = sorted(permutations(range(e)))
            else:
                self._cache[el] = generate_group(self.generators[el], e)
        return self._cache[el]

    def order(self, el: Hashable) -> int:
        if self.is_symmetric(el):
            return factorial(self.structure.e(el))
        return len(self.group(el))

    def is_transitive(self, el: Hashable) -> bool:
        if self.is_symmetric(el):
            return True
        return len(orbits_on_points(self.generators[el], self.structure.e(el))) == 1

    def two_transitive(self, el: Hashable) -> bool:
        if self.is_symmetric(el):
            return True
        return count_pair_orbits(self.generators[el], self.structure.e(el)) == 1

    def all_two_transitive(self) -> bool:
        return all(self.two_transitive(el) for el in self.structure.poset.elements)


def parse_group_text(structure: BlockStructure, text: str) -> ComponentGroups:
    """Lines ``perm i: 1 0 2`` give one generator (image list) for G_i."""
    gens: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        words = head.split()
        if not sep or len(words) != 2 or words[0] != "perm":
            raise StructureError(f"group line {lineno}: expected 'perm <element>: <images>'")
        tok = words[1]
        el = int(tok) if tok.lstrip("-").isdigit() else tok
        try:
            structure.poset.index(el)
            perm = tuple(int(t) for t in rest.split())
        except (PosetError, ValueError) as exc:
            raise StructureError(f"group line {lineno}: {exc}") from None
        gens.setdefault(el, []).append(perm)
    return ComponentGroups(structure, gens)


def _radix_index(point: Sequence[int], idx: Sequence[int], sizes: Sequence[int]) -> int:
    r = 0
    for n in idx:
        r = r * sizes[n] + point[n]
    return r


@dataclass(frozen=True)
class GwpElement:
    structure: BlockStructure
    # maps[n][r] is the permutation of Delta_n used when the projection of the
    # point onto A(n) has mixed-radix index r (members of A(n) in canonical order)
    maps: tuple[tuple[Perm, ...], ...]

    def __post_init__(self) -> None:
        s = self.structure
        if len(self.maps) != s.dim:
            raise StructureError("one map per poset element is required")
        for n, fn in enumerate(self.maps):
            if len(fn) != s.prod_sizes(s.poset.up_mask(n)):
                raise StructureError(f"f_{s.poset.elements[n]} is not total on Delta_A(i)")
            for perm in fn:
                if sorted(perm) != list(range(s.sizes[n])):
                    raise StructureError(f"{perm} is not a permutation of Delta_{s.poset.elements[n]}")

    @classmethod
    def identity(cls, structure: BlockStructure) -> "GwpElement":
        maps = tuple(
            (identity_perm(e),) * structure.prod_sizes(structure.poset.up_mask(n))
            for n, e in enumerate(structure.sizes)
        )
        return cls(structure, maps)

    @classmethod
    def from_functions(cls, structure: BlockStructure, funcs: Mapping[Hashable, object]) -> "GwpElement":
        """Build from ``{i: f_i}`` where ``f_i`` is a fixed permutation or a
        callable taking the projected tuple over A(i) and returning one.
        Elements missing from ``funcs`` get the identity map."""
        poset = structure.poset
        maps = []
        for n, el in enumerate(poset.elements):
            up = poset.indices(poset.up_mask(n))
            e = structure.sizes[n]
            f = funcs.get(el)
            images = []
            for nu in product(*(range(structure.sizes[m]) for m in up)):
                if f is None:
                    images.append(identity_perm(e))
                elif callable(f):
                    images.append(tuple(f(nu)))
                else:
                    images.append(tuple(f))
            maps.append(tuple(images))
        return cls(structure, tuple(maps))

    def act(self, point: Sequence[int]) -> Point:
        s = self.structure
        sizes = s.sizes
        return tuple(
            fn[_radix_index(point, up, sizes)][point[n]]
            for n, (fn, up) in enumerate(zip(self.maps, s.up_indices))
        )

    def permutation(self) -> Perm:
        """The induced permutation of point indices (row-major order of P)."""
        s = self.structure
        return tuple(s.point_index(self.act(pt)) for pt in s.points())

    def is_identity_on(self, mask: int) -> bool:
        for n in self.structure.poset.indices(mask):
            ident = identity_perm(self.structure.sizes[n])
            if any(p != ident for p in self.maps[n]):
                return False
        return True


def predicted_order(structure: BlockStructure, groups: ComponentGroups | None = None) -> int:
    """|F| = prod_i |G_i| ** |Delta_A(i)|."""
    groups = groups or ComponentGroups(structure)
    poset = structure.poset
    return prod(
        groups.order(el) ** structure.prod_sizes(poset.up_mask(n)) for n, el in enumerate(poset.elements)
    )


def enumerate_group(
    structure: BlockStructure, groups: ComponentGroups | None = None, cap: int = DEFAULT_GROUP_CAP
) -> list[GwpElement]:
    groups = groups or ComponentGroups(structure)
    order = predicted_order(structure, groups)
    if order > cap:
        raise CapExceeded(f"|F| = {order} exceeds the group cap {cap}")
    poset = structure.poset
    per_element = []
    for n, el in enumerate(poset.elements):
        d = structure.prod_sizes(poset.up_mask(n))
        per_element.append(list(product(groups.group(el), repeat=d)))
    elements = [GwpElement(structure, maps) for maps in product(*per_element)]
    assert len(elements) == order
    return elements


def kernel_elements(elements: Iterable[GwpElement], J: Iterable[Hashable]) -> list[GwpElement]:
    """Elements with f_j the identity map for every j in J (the C_J kernel)."""
    elements = list(elements)
    if not elements:
        return []
    s = elements[0].structure
    mask = s._ancestral_mask(J)
    return [f for f in elements if f.is_identity_on(mask)]


# -- orbitals ----------------------------------------------------------------


def orbital_mask(poset: Poset, eq_mask: int) -> int:
    """Largest ancestral subset inside the coordinate-agreement set."""
    out = 0
    for n in range(len(poset)):
        closed = poset.up_mask(n) | 1 << n
        if closed & ~eq_mask == 0:
            out |= closed
    return out


def agreement_mask(a: Sequence[int], b: Sequence[int]) -> int:
    m = 0
    for n, (x, y) in enumerate(zip(a, b)):
        if x == y:
            m |= 1 << n
    return m


def orbital_of_pair(structure: BlockStructure, delta: Sequence[int], eps: Sequence[int]) -> frozenset:
    """The ancestral J with (delta, eps) in O_J."""
    delta = structure.validate_point(delta)
    eps = structure.validate_point(eps)
    poset = structure.poset
    eq = agreement_mask(delta, eps)
    J = orbital_mask(poset, eq)
    bd = poset.border_mask(J)
    # defining condition: agree on J, differ everywhere on the border
    assert J & ~eq == 0 and bd & eq == 0
    return poset.subset(J)


def orbital_size_product(structure: BlockStructure, mask: int) -> int:
    poset = structure.poset
    if mask == poset.full_mask:
        return structure.v
    bd = poset.border_mask(mask)
    rest = poset.full_mask & ~(mask | bd)
    return structure.v * prod(structure.sizes[n] - 1 for n in poset.indices(bd)) * structure.prod_sizes(rest)


def orbital_size_alternating(structure: BlockStructure, mask: int) -> int:
    poset = structure.poset
    if mask == poset.full_mask:
        return structure.v
    bd = poset.indices(poset.border_mask(mask))
    total = 0
    for bits in range(1 << len(bd)):
        S = sum(1 << bd[t] for t in range(len(bd)) if bits >> t & 1)
        sign = -1 if bin(bits).count("1") % 2 else 1
        total += sign * structure.prod_sizes(poset.full_mask & ~(mask | S))
    return structure.v * total


def orbital_size(structure: BlockStructure, J: Iterable[Hashable]) -> int:
    """|O_J|; both closed forms are evaluated and must agree."""
    mask = structure._ancestral_mask(J)
    a = orbital_size_product(structure, mask)
    b = orbital_size_alternating(structure, mask)
    if a != b:
        raise AssertionError(f"orbital size forms disagree for J={sorted(J)}: {a} != {b}")
    return a


# -- tiny-scale actions on blocks and pairs ------------------------------------


def _as_perm(f) -> Perm:
    return f.permutation() if isinstance(f, GwpElement) else tuple(f)


def induced_permutations(elements: Iterable) -> list[Perm]:
    return sorted({_as_perm(f) for f in elements})


def orbit_of_block(block: Block, elements: Iterable, v_cap: int = DEFAULT_V_CAP) -> set[frozenset]:
    """The set B^F of distinct images, each as a frozenset of points."""
    s = block.structure
    if s.v > v_cap:
        raise CapExceeded(f"v = {s.v} exceeds the orbit cap {v_cap}")
    pts = list(s.points())
    idx = [s.point_index(p) for p in block.points]
    images = set()
    for perm in induced_permutations(elements):
        images.add(frozenset(pts[perm[x]] for x in idx))
    return images


def verify_partition_invariance(structure: BlockStructure, elements: Iterable, J: Iterable[Hashable]) -> bool:
    """True iff every element maps each C_J-class onto a C_J-class."""
    mask = structure._ancestral_mask(J)
    idx = structure.poset.indices(mask)
    pts = list(structure.points())
    label = [tuple(p[n] for n in idx) for p in pts]
    for perm in induced_permutations(elements):
        image_label: dict = {}
        for x, lab in enumerate(label):
            y = label[perm[x]]
            if image_label.setdefault(lab, y) != y:
                return False
    return True


def pair_orbits(structure: BlockStructure, elements: Iterable, v_cap: int = DEFAULT_V_CAP) -> list[frozenset]:
    """Orbits of the given group on ordered pairs of point indices."""
    v = structure.v
    if v > v_cap:
        raise CapExceeded(f"v = {v} exceeds the orbit cap {v_cap}")
    perms = induced_permutations(elements)
    seen: set = set()
    out = []
    for a in range(v):
        for b in range(v):
            if (a, b) in seen:
                continue
            orb = frozenset((p[a], p[b]) for p in perms)
            seen |= orb
            out.append(orb)
    return out


def orbital_classes(structure: BlockStructure) -> dict[frozenset, frozenset]:
    """The sets O_J on point-index pairs, keyed by J."""
    pts = list(structure.points())
    classes: dict = {}
    for a, pa in enumerate(pts):
        for b, pb in enumerate(pts):
            classes.setdefault(orbital_of_pair(structure, pa, pb), set()).add((a, b))
    return {J: frozenset(c) for J, c in classes.items()}
