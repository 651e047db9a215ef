"""Central extensions by roots of unity and block counts of twisted group algebras.

A central extension 1 -> mu_e -> G' -> Gbar -> 1 is stored as a base group
table plus a 2-cocycle with values in Z/e; elements of G' are pairs (g, j)
with multiplication (g, i)(h, j) = (gh, i + j + c(g, h)).

The distinguished central element rho = (1, 1) generates mu_e.  For a
primitive e-th root of unity w, ``idempotent_epsilon`` returns the projector

    eps = (1/e) * sum_j w^(-j) rho^j,

the central idempotent on which rho acts by w.  ``block_count`` computes the
number of simple blocks of the corner algebra eps*k[G']*eps over a splitting
cyclotomic field as the dimension of the span of {class_sum * eps}.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable

from .cyclotomic import CycloNumber, one, root_of_unity, zero
from .errors import ParameterError
from .matgroup import GroupTable

__all__ = [
    "CentralExtension",
    "AlgebraElement",
    "build_extension",
    "dihedral_extension",
    "idempotent_epsilon",
    "central_idempotents",
    "block_count",
]


class CentralExtension:
    """G' = base x Z/e with multiplication twisted by a 2-cocycle."""

    def __init__(self, base: GroupTable, e: int, cocycle: list[list[int]]):
        if e < 1:
            raise ParameterError("e must be a positive integer")
        self.base = base
        self.e = e
        self.cocycle = cocycle
        n = base.n
        rows = []
        for g in range(n):
            for i in range(e):
                row = []
                for h in range(n):
                    gh = base.mult[g][h]
                    for j in range(e):
                        row.append(gh * e + (i + j + cocycle[g][h]) % e)
                rows.append(row)
        self.group = GroupTable(rows)

    def index(self, g: int, j: int) -> int:
        return g * self.e + j % self.e

    def rho(self, j: int = 1) -> int:
        """Index of rho^j, the distinguished central mu_e generator's power."""
        return self.index(0, j)

    def project(self, idx: int) -> tuple[int, int]:
        return divmod(idx, self.e)

    def __len__(self) -> int:
        return self.group.n


def _find_cyclic_pair(gbar: GroupTable, ord_t: int, ord_s: int) -> tuple[int, int]:
    orders = gbar.element_orders()
    for t in range(gbar.n):
        if orders[t] != ord_t:
            continue
        pow_t = set(gbar.subgroup_closure([t]))
        for s in range(gbar.n):
            if orders[s] != ord_s:
                continue
            pow_s = set(gbar.subgroup_closure([s]))
            if pow_t & pow_s == {0} and len(pow_t) * len(pow_s) == gbar.n:
                return t, s
    raise ParameterError(
        f"group of order {gbar.n} is not Z/{ord_t} x Z/{ord_s} with the required generators"
    )


def build_extension(
    gbar: GroupTable,
    n: int,
    e: int,
    pullback: tuple[GroupTable, list[int]] | None = None,
    pair: tuple[int, int] | None = None,
) -> CentralExtension:
    """Central extension of Gbar = Z/ne x Z/e by mu_e with the generator cocycle.

    Writing elements as t^a s^b (t of order ne, s of order e), the cocycle is
    c(t^a s^b, t^a' s^b') = b*a' mod e, which realizes the relation
    s t = rho t s among the canonical lifts.

    ``pair`` names the element indices of (t, s) in ``gbar``; when omitted a
    suitable pair is searched for.  Distinct pairs can produce non-isomorphic
    extensions (the cocycle twists the chosen generators only), so callers
    that care about the isomorphism type must pass the intended pair.

    With ``pullback = (G, q)`` for a surjection q: G -> Gbar (element index
    map), the returned extension lives over G with the composed cocycle.
    """
    if not gbar.is_abelian():
        raise ParameterError("base of the extension must be abelian")
    if gbar.n != n * e * e:
        raise ParameterError(
            f"group of order {gbar.n} cannot be Z/{n * e} x Z/{e}"
        )
    if pair is not None:
        t, s = pair
        orders = gbar.element_orders()
        if orders[t] != n * e or orders[s] != e:
            raise ParameterError(
                f"chosen pair has orders ({orders[t]}, {orders[s]}), "
                f"need ({n * e}, {e})"
            )
    else:
        t, s = _find_cyclic_pair(gbar, n * e, e)
    coords: dict[int, tuple[int, int]] = {}
    ta = 0
    for a in range(n * e):
        x = ta
        for b in range(e):
            coords[x] = (a, b)
            x = gbar.mult[x][s]
        ta = gbar.mult[ta][t]
    if len(coords) != gbar.n:
        raise ParameterError("generators do not span the group")

    def c(g: int, h: int) -> int:
        return (coords[g][1] * coords[h][0]) % e

    if pullback is None:
        cocycle = [[c(g, h) for h in range(gbar.n)] for g in range(gbar.n)]
        return CentralExtension(gbar, e, cocycle)

    big, q = pullback
    if len(q) != big.n or set(q) != set(range(gbar.n)):
        raise ParameterError("pullback map is not a surjection onto the base")
    cocycle = [[c(q[x], q[y]) for y in range(big.n)] for x in range(big.n)]
    return CentralExtension(big, e, cocycle)


def dihedral_extension(n: int) -> CentralExtension:
    """The order-(8n+8) dihedral group as a central Z/2 extension.

    Base is the dihedral group of order 4n+4 (generators u of order 2n+2 and a
    reflection r); the extension is by the carry cocycle of lifting u-exponents
    mod 2n+2 to mod 4n+4, so the extension group is dihedral of order 8n+8
    with central mu_2 generated by the lift of u raised to the (2n+2)-nd power.
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    m = 2 * n + 2

    def didx(a: int, b: int) -> int:
        return (a % m) * 2 + (b % 2)

    rows = []
    for a in range(m):
        for b in range(2):
            row = []
            for a2 in range(m):
                for b2 in range(2):
                    aa = a + a2 if b == 0 else a - a2
                    row.append(didx(aa, b + b2))
            rows.append(row)
    base = GroupTable(rows)

    cocycle = [[0] * base.n for _ in range(base.n)]
    for a in range(m):
        for b in range(2):
            for a2 in range(m):
                for b2 in range(2):
                    aa = a + a2 if b == 0 else a - a2
                    cocycle[didx(a, b)][didx(a2, b2)] = (aa % (2 * m)) // m
    return CentralExtension(base, 2, cocycle)


class AlgebraElement:
    """A sparse element of the group algebra of an extension over Q(zeta)."""

    def __init__(self, ext: CentralExtension, coeffs: dict[int, CycloNumber] | None = None):
        self.ext = ext
        self.coeffs = {i: c for i, c in (coeffs or {}).items() if not c.is_zero()}

    @staticmethod
    def unit(ext: CentralExtension) -> "AlgebraElement":
        return AlgebraElement(ext, {0: one()})

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, zero()) + c
        return AlgebraElement(self.ext, out)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, zero()) - c
        return AlgebraElement(self.ext, out)

    def __mul__(self, other: object) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            mult = self.ext.group.mult
            out: dict[int, CycloNumber] = {}
            for i, ci in self.coeffs.items():
                row = mult[i]
                for j, cj in other.coeffs.items():
                    k = row[j]
                    prod = ci * cj
                    out[k] = out.get(k, zero()) + prod
            return AlgebraElement(self.ext, out)
        if isinstance(other, (int, Fraction, CycloNumber)):
            return AlgebraElement(
                self.ext, {i: c * other for i, c in self.coeffs.items()}
            )
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        z = zero()
        return all(self.coeffs.get(k, z) == other.coeffs.get(k, z) for k in keys)

    def __hash__(self) -> int:  # pragma: no cover - not used as dict key
        return hash(frozenset((i, c._key()) for i, c in self.coeffs.items()))

    def is_central(self) -> bool:
        mult = self.ext.group.mult
        n = self.ext.group.n
        for x in range(n):
            left: dict[int, CycloNumber] = {}
            right: dict[int, CycloNumber] = {}
            for i, c in self.coeffs.items():
                left[mult[x][i]] = c
                right[mult[i][x]] = c
            if left != right:
                return False
        return True

    def __repr__(self) -> str:
        terms = ", ".join(f"{i}: {c}" for i, c in sorted(self.coeffs.items()))
        return f"AlgebraElement({{{terms}}})"


def idempotent_epsilon(
    e: int, zeta_n: CycloNumber, ext: CentralExtension
) -> AlgebraElement:
    """The central idempotent of k mu_e on which rho acts by zeta_n.

    ``zeta_n`` must be a *primitive* e-th root of unity.  Satisfies
    eps*eps = eps, eps central, rho*eps = zeta_n*eps, all exactly.
    """
    if e != ext.e:
        raise ParameterError(f"extension has e = {ext.e}, not {e}")
    if not _is_primitive_root(zeta_n, e):
        raise ParameterError(f"{zeta_n} is not a primitive {e}-th root of unity")
    return _character_idempotent(ext, zeta_n)


def _is_primitive_root(z: CycloNumber, e: int) -> bool:
    acc = z
    for k in range(1, e):
        if acc == one():
            return False
        acc = acc * z
    return acc == one()


def _character_idempotent(ext: CentralExtension, w: CycloNumber) -> AlgebraElement:
    e = ext.e
    inv_e = Fraction(1, e)
    winv = w.inverse() if not (w == one()) else one()
    coeffs: dict[int, CycloNumber] = {}
    acc = one() * inv_e
    for j in range(e):
        coeffs[ext.rho(j)] = acc
        acc = acc * winv
    return AlgebraElement(ext, coeffs)


def central_idempotents(ext: CentralExtension) -> list[AlgebraElement]:
    """The e orthogonal idempotents of k mu_e; entry j has rho acting by zeta_e^j."""
    return [
        _character_idempotent(ext, root_of_unity(ext.e, j)) for j in range(ext.e)
    ]


def block_count(ext: CentralExtension, eps: AlgebraElement) -> int:
    """Number of simple blocks of eps * k[G'] (dimension of its centre).

    Requires eps to be a central idempotent; computed as the rank over the
    cyclotomic field of the set of vectors {K * eps} for K the conjugacy class
    sums of G'.
    """
    if not (eps * eps == eps):
        raise ParameterError("element is not idempotent")
    if not eps.is_central():
        raise ParameterError("element is not central")
    group = ext.group
    classes = group.conjugacy_classes()
    vectors: list[dict[int, CycloNumber]] = []
    for cls in classes:
        ksum = AlgebraElement(ext, {i: one() for i in cls})
        vectors.append((ksum * eps).coeffs)
    return _sparse_rank(vectors)


def _sparse_rank(vectors: list[dict[int, CycloNumber]]) -> int:
    """Exact rank of sparse vectors over the cyclotomic field."""
    pivots: dict[int, dict[int, CycloNumber]] = {}
    rank = 0
    for vec in vectors:
        v = dict(vec)
        while v:
            lead = min(v)
            if lead in pivots:
                pivot = pivots[lead]
                factor = v[lead]
                for k, c in pivot.items():
                    newc = v.get(k, zero()) - factor * c
                    if newc.is_zero():
                        v.pop(k, None)
                    else:
                        v[k] = newc
            else:
                inv = v[lead].inverse()
                pivots[lead] = {k: c * inv for k, c in v.items()}
                rank += 1
                break
    return rank
