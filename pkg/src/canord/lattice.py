"""Integer intersection theory on resolution curve configurations.

Exact lattice computations on configurations of exceptional and transverse
curves: Artin fundamental cycles, numerical linear-equivalence solving against
the contracted negative-definite block, divisor-class torsion orders via Smith
normal form, and the exact-rational check that the canonical class of a
ramified resolution is numerically trivial.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import LatticeError, ParameterError

EXCEPTIONAL = "exceptional"
TRANSVERSE = "transverse"


class Curve:
    """A single curve in a configuration: a label, a kind, and (for
    exceptional curves) a self-intersection number."""

    __slots__ = ("label", "kind", "self_int")

    def __init__(self, label: str, kind: str, self_int: int | None = None):
        if kind not in (EXCEPTIONAL, TRANSVERSE):
            raise LatticeError(f"unknown curve kind {kind!r}")
        if kind == EXCEPTIONAL and self_int is None:
            raise LatticeError(f"exceptional curve {label!r} needs a self-intersection")
        self.label = label
        self.kind = kind
        self.self_int = self_int

    def __repr__(self) -> str:
        if self.kind == EXCEPTIONAL:
            return f"Curve({self.label!r}, {self.kind}, {self.self_int})"
        return f"Curve({self.label!r}, {self.kind})"


class IntersectionLattice:
    """An indexed list of curves with a symmetric integer intersection pairing
    and a distinguished subset of contracted exceptional curves.

    The pairing diagonal carries the self-intersections of the exceptional
    curves; transverse curves are modeled purely by their intersection row
    (diagonal entry 0 by convention).
    """

    def __init__(
        self,
        curves: Sequence[Curve],
        pairing: Sequence[Sequence[int]],
        contracted: Iterable[int],
    ):
        self.curves = tuple(curves)
        n = len(self.curves)
        if len(pairing) != n or any(len(row) != n for row in pairing):
            raise LatticeError("pairing matrix shape does not match curve list")
        mat = tuple(tuple(int(x) for x in row) for row in pairing)
        for i in range(n):
            for j in range(i + 1, n):
                if mat[i][j] != mat[j][i]:
                    raise LatticeError("pairing matrix is not symmetric")
        for i, c in enumerate(self.curves):
            if c.kind == EXCEPTIONAL and mat[i][i] != c.self_int:
                raise LatticeError(
                    f"diagonal entry for {c.label!r} disagrees with its self-intersection"
                )
        self.pairing = mat
        self.contracted = tuple(sorted(set(int(i) for i in contracted)))
        for i in self.contracted:
            if not 0 <= i < n:
                raise LatticeError(f"contracted index {i} out of range")
            if self.curves[i].kind != EXCEPTIONAL:
                raise LatticeError(f"contracted curve {self.curves[i].label!r} is not exceptional")
        self._index = {c.label: i for i, c in enumerate(self.curves)}
        if len(self._index) != n:
            raise LatticeError("curve labels are not unique")

    def __len__(self) -> int:
        return len(self.curves)

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise LatticeError(f"no curve labeled {label!r}") from None

    def exceptional_indices(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.curves) if c.kind == EXCEPTIONAL)

    def transverse_indices(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.curves) if c.kind == TRANSVERSE)

    def curve_class(self, label: str) -> "DivisorClass":
        coeffs = [0] * len(self.curves)
        coeffs[self.index_of(label)] = 1
        return DivisorClass(coeffs)

    def divisor(self, entries: Mapping[str, int | Fraction]) -> "DivisorClass":
        coeffs: list[int | Fraction] = [0] * len(self.curves)
        for label, c in entries.items():
            coeffs[self.index_of(label)] = c
        return DivisorClass(coeffs)

    def validate_standard(self) -> None:
        """Check the standard-constructor shape: every transverse curve meets
        exactly one exceptional curve, with multiplicity 1 and no others."""
        for i in self.transverse_indices():
            contacts = [
                (j, self.pairing[i][j])
                for j in range(len(self.curves))
                if j != i and self.pairing[i][j] != 0
            ]
            if len(contacts) != 1:
                raise LatticeError(
                    f"transverse curve {self.curves[i].label!r} meets {len(contacts)} curves"
                )
            j, mult = contacts[0]
            if self.curves[j].kind != EXCEPTIONAL or mult != 1:
                raise LatticeError(
                    f"transverse curve {self.curves[i].label!r} has a nonstandard contact"
                )


class DivisorClass:
    """An exact coefficient vector over the curves of a lattice."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Sequence[int | Fraction]):
        self.coefficients = tuple(
            c if isinstance(c, int) else Fraction(c) for c in coefficients
        )

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass([a + b for a, b in zip(self.coefficients, other.coefficients)])

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass([a - b for a, b in zip(self.coefficients, other.coefficients)])

    def __neg__(self) -> "DivisorClass":
        return DivisorClass([-a for a in self.coefficients])

    def __rmul__(self, k: int | Fraction) -> "DivisorClass":
        return DivisorClass([k * a for a in self.coefficients])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def __repr__(self) -> str:
        return f"DivisorClass({list(self.coefficients)!r})"


def intersect(lat: IntersectionLattice, div: DivisorClass, k: int) -> int | Fraction:
    """Intersection number of a divisor class with the k-th curve."""
    return sum(c * lat.pairing[j][k] for j, c in enumerate(div.coefficients) if c != 0)


# ---------------------------------------------------------------------------
# configuration builders


def _chain_pairs(m: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(m - 1)]


def _assemble(
    self_ints: Sequence[int],
    edges: Iterable[tuple[int, int]],
    contracted: Iterable[int],
    exceptional_prefix: str = "F",
) -> IntersectionLattice:
    """Build a lattice from exceptional-curve data plus one transverse curve
    per exceptional curve (the dual-basis convention)."""
    m = len(self_ints)
    curves = [Curve(f"{exceptional_prefix}{i + 1}", EXCEPTIONAL, s) for i, s in enumerate(self_ints)]
    curves += [Curve(f"C{i + 1}", TRANSVERSE) for i in range(m)]
    n = 2 * m
    pairing = [[0] * n for _ in range(n)]
    for i, s in enumerate(self_ints):
        pairing[i][i] = s
    for a, b in edges:
        pairing[a][b] = pairing[b][a] = 1
    for i in range(m):
        pairing[m + i][i] = pairing[i][m + i] = 1
    lat = IntersectionLattice(curves, pairing, contracted)
    lat.validate_standard()
    return lat


def a_string(m: int, self_ints: Sequence[int] | None = None) -> IntersectionLattice:
    """A chain of m exceptional curves (all (-2) unless overridden), every one
    contracted, with one transverse curve per exceptional curve."""
    if m < 1:
        raise ParameterError("a string needs at least one curve")
    ints = list(self_ints) if self_ints is not None else [-2] * m
    if len(ints) != m:
        raise ParameterError("self-intersection list has the wrong length")
    return _assemble(ints, _chain_pairs(m), range(m))


def d_tree(m: int) -> IntersectionLattice:
    """A D-shaped tree on m >= 3 curves: a chain F1..F(m-2) with both F(m-1)
    and Fm attached to F(m-2); all (-2), all contracted."""
    if m < 3:
        raise ParameterError("a D-shaped tree needs at least three curves")
    edges = _chain_pairs(m - 2) + [(m - 3, m - 2), (m - 3, m - 1)]
    return _assemble([-2] * m, edges, range(m))


def dynkin(letter: str, rank: int) -> IntersectionLattice:
    """A finite ADE Dynkin configuration of (-2)-curves, all contracted."""
    if letter == "A":
        if rank < 1:
            raise ParameterError("A-type rank must be >= 1")
        return a_string(rank)
    if letter == "D":
        if rank < 4:
            raise ParameterError("D-type rank must be >= 4")
        return d_tree(rank)
    if letter == "E":
        if rank not in (6, 7, 8):
            raise ParameterError("E-type rank must be 6, 7, or 8")
        edges = _chain_pairs(rank - 1) + [(2, rank - 1)]
        return _assemble([-2] * rank, edges, range(rank))
    raise ParameterError(f"unknown Dynkin letter {letter!r}")


def family_config(family: str, n: int | None = None, e: int | None = None,
                  letter: str | None = None, rank: int | None = None) -> IntersectionLattice:
    """The contracted curve configuration used in the lattice analysis of one
    family of canonical orders.

    A12(e): chain of 2e-1 (-2)-curves, all contracted except the middle one.
    BL(n), B(n): chain of n curves (-2)...(-2),(-1), all contracted.
    L(n): chain of 2n+1 (-2)-curves with only the middle one contracted.
    DL(n): D-tree on 2n+1 curves, odd-indexed chain curves contracted.
    BD(n): D-tree on 2n curves, odd-indexed curves contracted.
    Anz(n, e): chain of (n+1)e-1 (-2)-curves, those with index not divisible
        by e contracted.
    ADE(letter, rank): the Dynkin configuration, all contracted.
    """
    if family == "A12":
        if e is None or e < 1:
            raise ParameterError("A12 needs e >= 1")
        m = 2 * e - 1
        lat = a_string(m)
        return IntersectionLattice(
            lat.curves, lat.pairing, [i for i in range(m) if i != e - 1]
        )
    if family in ("BL", "B"):
        if n is None or n < 1:
            raise ParameterError(f"{family} needs n >= 1")
        return a_string(n, [-2] * (n - 1) + [-1])
    if family == "L":
        if n is None or n < 1:
            raise ParameterError("L needs n >= 1")
        lat = a_string(2 * n + 1)
        return IntersectionLattice(lat.curves, lat.pairing, [n])
    if family == "DL":
        if n is None or n < 1:
            raise ParameterError("DL needs n >= 1")
        lat = d_tree(2 * n + 1)
        return IntersectionLattice(lat.curves, lat.pairing, range(0, 2 * n - 1, 2))
    if family == "BD":
        if n is None or n < 2:
            raise ParameterError("BD needs n >= 2")
        lat = d_tree(2 * n)
        return IntersectionLattice(lat.curves, lat.pairing, range(0, 2 * n - 1, 2))
    if family == "Anz":
        if n is None or n < 1 or e is None or e < 2:
            raise ParameterError("Anz needs n >= 1 and e >= 2")
        m = (n + 1) * e - 1
        lat = a_string(m)
        return IntersectionLattice(
            lat.curves, lat.pairing, [i for i in range(m) if (i + 1) % e != 0]
        )
    if family == "ADE":
        if letter is None or rank is None:
            raise ParameterError("ADE needs a letter and a rank")
        return dynkin(letter, rank)
    raise ParameterError(f"unknown family {family!r}")


def build_config(kind: str, **params) -> IntersectionLattice:
    """Dispatch on a configuration kind: 'a-string' (m), 'd-tree' (m), or
    'family' (family plus its parameters)."""
    if kind == "a-string":
        return a_string(params["m"], params.get("self_ints"))
    if kind == "d-tree":
        return d_tree(params["m"])
    if kind == "family":
        return family_config(
            params["family"], params.get("n"), params.get("e"),
            params.get("letter"), params.get("rank"),
        )
    raise ParameterError(f"unknown configuration kind {kind!r}")


# ---------------------------------------------------------------------------
# exact integer linear algebra helpers


def _det(matrix: Sequence[Sequence[int]]) -> Fraction:
    """Exact determinant by fraction-based Gaussian elimination."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] * inv
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


def is_negative_definite(matrix: Sequence[Sequence[int]]) -> bool:
    """Sylvester test: the k-th leading principal minor has sign (-1)^k."""
    n = len(matrix)
    for k in range(1, n + 1):
        minor = _det([row[:k] for row in matrix[:k]])
        if (-1) ** k * minor <= 0:
            return False
    return True


def _is_connected(lat: IntersectionLattice, subset: Sequence[int]) -> bool:
    if not subset:
        return False
    subset = list(subset)
    seen = {subset[0]}
    frontier = [subset[0]]
    while frontier:
        i = frontier.pop()
        for j in subset:
            if j not in seen and lat.pairing[i][j] != 0:
                seen.add(j)
                frontier.append(j)
    return len(seen) == len(subset)


def smith_normal_form(
    matrix: Sequence[Sequence[int]],
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form over the integers.

    Returns (S, U, V) with S = U * matrix * V, U and V unimodular, and S
    diagonal with each diagonal entry dividing the next.
    """
    a = [list(map(int, row)) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_op(i, j, f):  # row_i -= f * row_j
        a[i] = [x - f * y for x, y in zip(a[i], a[j])]
        u[i] = [x - f * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, f):  # col_i -= f * col_j
        for r in range(rows):
            a[r][i] -= f * a[r][j]
        for r in range(cols):
            v[r][i] -= f * v[r][j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(rows):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(cols):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    t = 0
    while t < min(rows, cols):
        # move a nonzero pivot of smallest magnitude to (t, t)
        entries = [
            (abs(a[i][j]), i, j)
            for i in range(t, rows)
            for j in range(t, cols)
            if a[i][j] != 0
        ]
        if not entries:
            break
        _, pi, pj = min(entries)
        if pi != t:
            swap_rows(pi, t)
        if pj != t:
            swap_cols(pj, t)
        dirty = False
        for i in range(t + 1, rows):
            if a[i][t] % a[t][t] != 0:
                dirty = True
            row_op(i, t, a[i][t] // a[t][t])
        for j in range(t + 1, cols):
            if a[t][j] % a[t][t] != 0:
                dirty = True
            col_op(j, t, a[t][j] // a[t][t])
        if dirty or any(a[i][t] for i in range(t + 1, rows)) or any(
            a[t][j] for j in range(t + 1, cols)
        ):
            continue
        # enforce divisibility of later entries by the pivot
        bad = next(
            (
                (i, j)
                for i in range(t + 1, rows)
                for j in range(t + 1, cols)
                if a[i][j] % a[t][t] != 0
            ),
            None,
        )
        if bad is not None:
            row_op(t, bad[0], -1)
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return a, u, v


def _integer_solve(matrix: list[list[int]], rhs: list[int]) -> list[int] | None:
    """Solve matrix * x = rhs over the integers, or return None."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if rows == 0 or cols == 0:
        return [] if all(b == 0 for b in rhs) else None
    s, u, v = smith_normal_form(matrix)
    c = [sum(u[i][j] * rhs[j] for j in range(rows)) for i in range(rows)]
    y = [0] * cols
    for i in range(rows):
        d = s[i][i] if i < cols else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d != 0:
                return None
            y[i] = c[i] // d
    return [sum(v[i][j] * y[j] for j in range(cols)) for i in range(cols)]


# ---------------------------------------------------------------------------
# main operations


def fundamental_cycle(
    lat: IntersectionLattice, subset: Sequence[int] | None = None
) -> DivisorClass:
    """Artin's incremental algorithm: the smallest positive cycle Z supported
    on the subset with Z.E <= 0 for every curve E of the subset.

    The subset defaults to the contracted curves; it must be connected with a
    negative-definite pairing block.
    """
    idxs = list(lat.contracted if subset is None else subset)
    if not idxs:
        raise LatticeError("fundamental cycle needs a nonempty support")
    block = [[lat.pairing[i][j] for j in idxs] for i in idxs]
    if not is_negative_definite(block):
        raise LatticeError("support block is not negative definite")
    if not _is_connected(lat, idxs):
        raise LatticeError("support is not connected")
    coeff = {i: 1 for i in idxs}
    for _ in range(100000):
        bad = next(
            (
                k
                for k in idxs
                if sum(coeff[j] * lat.pairing[j][k] for j in idxs) > 0
            ),
            None,
        )
        if bad is None:
            break
        coeff[bad] += 1
    else:  # pragma: no cover - negative definiteness guarantees termination
        raise LatticeError("fundamental-cycle iteration did not terminate")
    out = [0] * len(lat.curves)
    for i, c in coeff.items():
        out[i] = c
    return DivisorClass(out)


def linear_equivalence_solve(
    lat: IntersectionLattice,
    div: DivisorClass,
    support: Sequence[int] | None = None,
) -> DivisorClass | None:
    """Find integers a_j with div.F_k = (sum a_j F_j).F_k for every k in the
    support (defaulting to the contracted curves), or None if no integer
    solution exists.  The result is a full-length divisor class supported on
    the given curves."""
    idxs = list(lat.contracted if support is None else support)
    block = [[lat.pairing[j][k] for j in idxs] for k in idxs]
    rhs = []
    for k in idxs:
        val = intersect(lat, div, k)
        if isinstance(val, Fraction):
            if val.denominator != 1:
                return None
            val = int(val)
        rhs.append(val)
    sol = _integer_solve(block, rhs)
    if sol is None:
        return None
    out = [0] * len(lat.curves)
    for i, a in zip(idxs, sol):
        out[i] = a
    return DivisorClass(out)


def torsion_order(
    lat: IntersectionLattice,
    div: DivisorClass,
    support: Sequence[int] | None = None,
) -> int | None:
    """Smallest k >= 1 such that k*div is numerically a combination of the
    support curves, via the Smith normal form of the pairing block; None if no
    multiple works."""
    idxs = list(lat.contracted if support is None else support)
    if not idxs:
        return 1  # no equations to satisfy
    block = [[lat.pairing[j][k] for j in idxs] for k in idxs]
    rhs = [intersect(lat, div, k) for k in idxs]
    if any(isinstance(v, Fraction) and v.denominator != 1 for v in rhs):
        raise LatticeError("torsion order needs integer intersection numbers")
    rhs = [int(v) for v in rhs]
    s, u, _ = smith_normal_form(block)
    c = [sum(u[i][j] * rhs[j] for j in range(len(idxs))) for i in range(len(idxs))]
    k = 1
    for i in range(len(idxs)):
        d = s[i][i]
        if d == 0:
            if c[i] != 0:
                return None
        else:
            k = k * (d // gcd(d, c[i])) // gcd(k, d // gcd(d, c[i]))
    return k


def canonical_check(res) -> list[Fraction]:
    """Exact values of K.E_i for every exceptional curve E_i of a ramified
    resolution configuration.

    K here is the canonical class of the ramified structure: on a rational
    exceptional curve, K.E_i = (-2 - E_i^2) plus the sum over all ramified
    curves C (including E_i itself when ramified) of (1 - 1/e_C) * (C.E_i).
    `res` carries `.lattice` and `.ram_indices` (curve index -> e_C).
    """
    lat: IntersectionLattice = res.lattice
    ram: Mapping[int, int] = res.ram_indices
    out = []
    for i in lat.exceptional_indices():
        if lat.curves[i].self_int is None:  # pragma: no cover - Curve enforces this
            raise LatticeError(f"curve {lat.curves[i].label!r} has no self-intersection")
        val = Fraction(-2 - lat.pairing[i][i])
        for c, e_c in ram.items():
            if e_c > 1:
                val += Fraction(e_c - 1, e_c) * lat.pairing[c][i]
        out.append(val)
    return out


# ---------------------------------------------------------------------------
# DOT export


def to_dot(lat: IntersectionLattice, ram_indices: Mapping[int, int] | None = None) -> str:
    """Render the configuration as an undirected DOT graph: nodes carry the
    label, self-intersection, and ramification index; edge weights are the
    intersection multiplicities."""
    ram = dict(ram_indices or {})
    lines = ["graph lattice {"]
    for i, c in enumerate(lat.curves):
        bits = [c.label]
        if c.kind == EXCEPTIONAL:
            bits.append(f"({c.self_int})")
        if ram.get(i, 1) > 1:
            bits.append(f"e={ram[i]}")
        shape = "circle" if c.kind == EXCEPTIONAL else "box"
        lines.append(f'  n{i} [label="{" ".join(bits)}", shape={shape}];')
    for i in range(len(lat.curves)):
        for j in range(i + 1, len(lat.curves)):
            m = lat.pairing[i][j]
            if m != 0:
                attr = f' [label="{m}"]' if m != 1 else ""
                lines.append(f"  n{i} -- n{j}{attr};")
    lines.append("}")
    return "\n".join(lines)
