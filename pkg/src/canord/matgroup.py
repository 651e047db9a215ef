"""Finite subgroups of GL2 over cyclotomic fields.

Provides exact 2x2 matrices, group closure from generators, conjugacy classes,
quotients by normal subgroups (as abstract multiplication tables), and the
ramification profile of the origin quotient: orbits of lines through the
origin that are fixed pointwise by nontrivial elements, together with the
order of their pointwise stabilizers.
"""

from __future__ import annotations

import os
from math import gcd
from typing import Iterable, Sequence

from .cyclotomic import CycloNumber, one, zero
from .errors import ClosureCapError, NotNormalError, NotSubgroupError

__all__ = [
    "Mat2",
    "FiniteMatrixGroup",
    "GroupTable",
    "generate_group",
    "conjugacy_classes",
    "quotient",
    "fixed_line_ramification",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 10_000


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class Mat2:
    """An exact 2x2 matrix over the cyclotomic numbers (immutable)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: CycloNumber, b: CycloNumber, c: CycloNumber, d: CycloNumber):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Mat2 is immutable")

    @staticmethod
    def identity() -> "Mat2":
        return Mat2(one(), zero(), zero(), one())

    @staticmethod
    def diagonal(x: CycloNumber, y: CycloNumber) -> "Mat2":
        return Mat2(x, zero(), zero(), y)

    def entries(self) -> tuple[CycloNumber, CycloNumber, CycloNumber, CycloNumber]:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def det(self) -> CycloNumber:
        return self.a * self.d - self.b * self.c

    def trace(self) -> CycloNumber:
        return self.a + self.d

    def inverse(self) -> "Mat2":
        det = self.det()
        if det.is_zero():
            raise ZeroDivisionError("matrix is singular")
        inv = det.inverse()
        return Mat2(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv)

    def apply(self, v: tuple[CycloNumber, CycloNumber]) -> tuple[CycloNumber, CycloNumber]:
        return (self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1])

    def embed(self, conductor: int) -> "Mat2":
        return Mat2(*(x.embed(conductor) for x in self.entries()))

    def is_identity(self) -> bool:
        return (
            self.b.is_zero()
            and self.c.is_zero()
            and self.a == one()
            and self.d == one()
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mat2):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self) -> int:
        return hash(tuple(x._key() for x in self.entries()))

    def __repr__(self) -> str:
        return f"Mat2[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


class GroupTable:
    """A finite group given abstractly by its multiplication table.

    Element 0 is the identity.  Used for quotient groups and central
    extensions, and as the common currency for character-table work.
    """

    def __init__(self, mult: Sequence[Sequence[int]]):
        self.mult = tuple(tuple(row) for row in mult)
        self.n = len(self.mult)
        for row in self.mult:
            if len(row) != self.n:
                raise ValueError("multiplication table must be square")
        self._inverse: list[int] | None = None

    def mul(self, i: int, j: int) -> int:
        return self.mult[i][j]

    @property
    def inverse(self) -> list[int]:
        if self._inverse is None:
            inv = [-1] * self.n
            for i in range(self.n):
                for j in range(self.n):
                    if self.mult[i][j] == 0:
                        inv[i] = j
                        break
            self._inverse = inv
        return self._inverse

    def order_of(self, i: int) -> int:
        k, acc = 1, i
        while acc != 0:
            acc = self.mult[acc][i]
            k += 1
        return k

    def element_orders(self) -> list[int]:
        return [self.order_of(i) for i in range(self.n)]

    def exponent(self) -> int:
        e = 1
        for k in self.element_orders():
            e = _lcm(e, k)
        return e

    def is_abelian(self) -> bool:
        return all(
            self.mult[i][j] == self.mult[j][i]
            for i in range(self.n)
            for j in range(i + 1, self.n)
        )

    def conjugacy_classes(self) -> list[list[int]]:
        """Partition of element indices; identity class first, then by min index."""
        inv = self.inverse
        seen = [False] * self.n
        classes: list[list[int]] = []
        for i in range(self.n):
            if seen[i]:
                continue
            orbit = {i}
            frontier = [i]
            while frontier:
                x = frontier.pop()
                for g in range(self.n):
                    y = self.mult[self.mult[inv[g]][x]][g]
                    if y not in orbit:
                        orbit.add(y)
                        frontier.append(y)
            cls = sorted(orbit)
            for x in cls:
                seen[x] = True
            classes.append(cls)
        return classes

    def subgroup_closure(self, seed: Iterable[int]) -> list[int]:
        elems = {0}
        frontier = list(set(seed) | {0})
        elems |= set(frontier)
        gens = [g for g in frontier if g != 0]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self.mult[x][g]
                    if y not in elems:
                        elems.add(y)
                        new.append(y)
            frontier = new
        return sorted(elems)

    def is_cyclic_product(self, a: int, b: int) -> bool:
        """True iff the group is isomorphic to Z/a x Z/b."""
        if self.n != a * b:
            return False
        if not self.is_abelian():
            return False
        orders = self.element_orders()
        cand_a = [i for i in range(self.n) if orders[i] == a]
        cand_b = [i for i in range(self.n) if orders[i] == b]
        for x in cand_a:
            powers_x = set(self.subgroup_closure([x]))
            for y in cand_b:
                powers_y = set(self.subgroup_closure([y]))
                if powers_x & powers_y == {0} and len(powers_x) * len(powers_y) == self.n:
                    return True
        return a * b == 1


class FiniteMatrixGroup:
    """Closure of a set of invertible 2x2 matrices, with identity at index 0."""

    def __init__(self, elements: list[Mat2], generator_indices: list[int], conductor: int):
        self.elements = elements
        self.generator_indices = generator_indices
        self.conductor = conductor
        self._index = {self._key(m): i for i, m in enumerate(elements)}
        self._mul_memo: dict[tuple[int, int], int] = {}
        self._table: GroupTable | None = None
        self._inverse: list[int] | None = None

    @staticmethod
    def _key(m: Mat2) -> tuple:
        return (m.a.coeffs, m.b.coeffs, m.c.coeffs, m.d.coeffs)

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, m: Mat2) -> int:
        return self._index[self._key(m.embed(self.conductor))]

    def mul(self, i: int, j: int) -> int:
        memo = self._mul_memo
        key = (i, j)
        out = memo.get(key)
        if out is None:
            out = self._index[self._key(self.elements[i] * self.elements[j])]
            memo[key] = out
        return out

    @property
    def inverse(self) -> list[int]:
        if self._inverse is None:
            self._inverse = [
                self._index[self._key(m.inverse())] for m in self.elements
            ]
        return self._inverse

    def order_of(self, i: int) -> int:
        k, acc = 1, i
        while acc != 0:
            acc = self.mul(acc, i)
            k += 1
        return k

    def table(self) -> GroupTable:
        """The full multiplication table as an abstract group."""
        if self._table is None:
            n = len(self.elements)
            rows = []
            for i in range(n):
                x = self.elements[i]
                row = [self._index[self._key(x * y)] for y in self.elements]
                rows.append(row)
            self._table = GroupTable(rows)
        return self._table

    def subgroup_closure(self, seed: Iterable[int]) -> list[int]:
        elems = {0} | set(seed)
        gens = [g for g in elems if g != 0]
        frontier = list(elems)
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in elems:
                        elems.add(y)
                        new.append(y)
            frontier = new
        return sorted(elems)


def generate_group(gens: Sequence[Mat2], cap: int | None = None) -> FiniteMatrixGroup:
    """Close a generator list under multiplication.

    Raises :class:`ClosureCapError` if more than ``cap`` distinct elements
    appear, which signals a non-finite or mis-entered generator set.  When
    ``cap`` is omitted the ``CANORD_CAP`` environment variable, if set,
    overrides the built-in default.
    """
    if cap is None:
        cap = int(os.environ.get("CANORD_CAP", DEFAULT_CAP))
    conductor = 1
    for g in gens:
        for x in g.entries():
            conductor = _lcm(conductor, x.conductor)
    identity = Mat2.identity().embed(conductor)
    lifted = []
    for g in gens:
        if g.det().is_zero():
            raise ValueError("generators must be invertible")
        lifted.append(g.embed(conductor))

    elements = [identity]
    index = {FiniteMatrixGroup._key(identity): 0}
    frontier = [identity]
    while frontier:
        new: list[Mat2] = []
        for x in frontier:
            for g in lifted:
                y = x * g
                k = FiniteMatrixGroup._key(y)
                if k not in index:
                    if len(elements) >= cap:
                        raise ClosureCapError(
                            f"group closure exceeded cap of {cap} elements"
                        )
                    index[k] = len(elements)
                    elements.append(y)
                    new.append(y)
        frontier = new
    gen_indices = [index[FiniteMatrixGroup._key(g)] for g in lifted]
    return FiniteMatrixGroup(elements, gen_indices, conductor)


def conjugacy_classes(group: FiniteMatrixGroup) -> list[list[int]]:
    """Conjugacy classes as sorted index lists; identity class first.

    Orbits are computed by conjugating with the generators only, which
    suffices because conjugation by a product is the composite of the
    generator conjugations.
    """
    gens = list(dict.fromkeys(group.generator_indices))
    inv = group.inverse
    n = len(group)
    seen = [False] * n
    classes: list[list[int]] = []
    for i in range(n):
        if seen[i]:
            continue
        orbit = {i}
        frontier = [i]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = group.mul(group.mul(inv[g], x), g)
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        cls = sorted(orbit)
        for x in cls:
            seen[x] = True
        classes.append(cls)
    return classes


def quotient(
    group: FiniteMatrixGroup, h_indices: Iterable[int]
) -> tuple[GroupTable, list[int]]:
    """Coset multiplication table of G/H and the coset index of each element.

    Raises :class:`NotSubgroupError` / :class:`NotNormalError` as appropriate.
    The identity coset has index 0.
    """
    h = sorted(set(h_indices) | {0})
    hset = set(h)
    inv = group.inverse
    for x in h:
        if inv[x] not in hset:
            raise NotSubgroupError("subset is not closed under inversion")
        for y in h:
            if group.mul(x, y) not in hset:
                raise NotSubgroupError("subset is not closed under multiplication")
    n = len(group)
    for g in range(n):
        ginv = inv[g]
        for x in h:
            if group.mul(group.mul(ginv, x), g) not in hset:
                raise NotNormalError("subgroup is not normal")

    coset_of = [-1] * n
    reps: list[int] = []
    for i in range(n):
        if coset_of[i] >= 0:
            continue
        idx = len(reps)
        reps.append(i)
        for x in h:
            coset_of[group.mul(i, x)] = idx
    table = [
        [coset_of[group.mul(reps[i], reps[j])] for j in range(len(reps))]
        for i in range(len(reps))
    ]
    return GroupTable(table), coset_of


# -- fixed lines and inertia ---------------------------------------------------


def _canonical_line(v: tuple[CycloNumber, CycloNumber]) -> tuple[CycloNumber, CycloNumber]:
    x, y = v
    if not x.is_zero():
        return (one(), (y / x).minimize_conductor())
    return (zero(), one())


def _line_key(v: tuple[CycloNumber, CycloNumber]) -> tuple:
    return (v[0]._key(), v[1]._key())


def fixed_line_ramification(group: FiniteMatrixGroup) -> list[dict]:
    """Orbits of lines through the origin fixed pointwise by nontrivial elements.

    Returns one record per orbit:
    ``{"representative_line": (x, y), "orbit_size": int, "inertia_order": int}``
    where the representative is a projective point with first nonzero
    coordinate 1 and inertia_order is the order of the pointwise stabilizer
    (constant along the orbit).  Matches, as a multiset of inertia orders,
    the primary ramification indices of the quotient surface at the origin.
    """
    identity = group.elements[0]
    lines: dict[tuple, tuple[CycloNumber, CycloNumber]] = {}
    for m in group.elements[1:]:
        # pointwise fixed line <=> eigenvector with eigenvalue exactly 1
        r = Mat2(m.a - one(), m.b, m.c, m.d - one())
        if not r.det().is_zero():
            continue
        if not (r.a.is_zero() and r.b.is_zero()):
            v = (-r.b, r.a)
        elif not (r.c.is_zero() and r.d.is_zero()):
            v = (-r.d, r.c)
        else:  # r == 0 would mean m == identity
            continue
        line = _canonical_line(v)
        lines.setdefault(_line_key(line), line)

    def stabilizer_order(line: tuple[CycloNumber, CycloNumber]) -> int:
        count = 0
        for m in group.elements:
            w = m.apply(line)
            if w[0] == line[0] and w[1] == line[1]:
                count += 1
        return count

    orbits: list[dict] = []
    remaining = dict(lines)
    while remaining:
        key = next(iter(remaining))
        rep = remaining.pop(key)
        orbit_keys = {key}
        frontier = [rep]
        while frontier:
            line = frontier.pop()
            for gi in group.generator_indices:
                w = _canonical_line(group.elements[gi].apply(line))
                wk = _line_key(w)
                if wk not in orbit_keys:
                    orbit_keys.add(wk)
                    remaining.pop(wk, None)
                    frontier.append(w)
        orbits.append(
            {
                "representative_line": rep,
                "orbit_size": len(orbit_keys),
                "inertia_order": stabilizer_order(rep),
            }
        )
    orbits.sort(key=lambda o: (o["inertia_order"], o["orbit_size"], str(o["representative_line"])))
    return orbits
