"""Two-sided module counts, character tables, and McKay quivers.

The headline computation compares two independent counts of indecomposable
reflexive modules for each canonical type: a resolution-side count read off
the exceptional curve types, and a group-side count obtained as the number of
matrix blocks of the idempotent slice of a twisted group algebra.  The module
also computes exact character tables for the finite groups involved (via
common eigenvectors of the class-algebra matrices, found modulo a suitable
prime and lifted back to exact cyclotomic values with full orthogonality
certification) and the McKay quiver of a finite SL2 subgroup, with a
recognizer for affine ADE diagrams.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .cyclotomic import CycloNumber, one, root_of_unity, zero
from .errors import CanordError, CurveTypeError, ParameterError
from .families import (
    cover_lattice,
    expected_count,
    extension_params,
    group_side,
    matrix_group,
    torsion_checks,
)
from .lattice import canonical_check, torsion_order
from .matgroup import FiniteMatrixGroup, GroupTable, conjugacy_classes
from .ramdata import (
    CanonicalType,
    ResolutionRamData,
    classify_exceptional,
    resolution_is_terminal,
    resolution_ram,
    skew_constructible,
)
from .twisted import CentralExtension, block_count

__all__ = [
    "CharacterTable",
    "character_table",
    "McKayQuiver",
    "mckay_quiver",
    "identify_affine",
    "ResolutionCount",
    "count_from_resolution",
    "count_from_group",
    "McKayReport",
    "verify",
]


def _as_group_table(g) -> GroupTable:
    if isinstance(g, GroupTable):
        return g
    if isinstance(g, FiniteMatrixGroup):
        return g.table()
    if isinstance(g, CentralExtension):
        return g.group
    raise ParameterError(f"cannot build a character table from {type(g).__name__}")


# ---------------------------------------------------------------------------
# character tables


class CharacterTable:
    """Exact character table: rows are irreducible characters (trivial first),
    columns are conjugacy classes (identity class first)."""

    def __init__(
        self,
        table: GroupTable,
        classes: list[list[int]],
        values: list[list[CycloNumber]],
    ):
        self.table = table
        self.classes = classes
        self.reps = [c[0] for c in classes]
        self.sizes = [len(c) for c in classes]
        self.values = values
        class_of = [0] * table.n
        for idx, cls in enumerate(classes):
            for x in cls:
                class_of[x] = idx
        self.class_of = class_of
        inv = table.inverse
        self.inverse_class = [class_of[inv[rep]] for rep in self.reps]

    @property
    def dims(self) -> list[int]:
        return [int(row[0].as_rational()) for row in self.values]

    def __len__(self) -> int:
        return len(self.values)

    def row_inner(self, a: int, b: int) -> CycloNumber:
        """Sum over classes of |K| chi_a(g) chi_b(g^{-1}), unnormalized."""
        acc = zero()
        for i in range(len(self.classes)):
            term = self.values[a][i] * self.values[b][self.inverse_class[i]]
            acc = acc + term * self.sizes[i]
        return acc

    def check_orthogonality(self) -> bool:
        """Exact first and second orthogonality relations."""
        n = self.table.n
        r = len(self.values)
        for a in range(r):
            for b in range(a, r):
                expected = n if a == b else 0
                if not (self.row_inner(a, b) - expected).is_zero():
                    return False
        for i in range(r):
            for j in range(i, r):
                acc = zero()
                for a in range(r):
                    acc = acc + self.values[a][i] * self.values[a][self.inverse_class[j]]
                expected = Fraction(n, self.sizes[i]) if i == j else Fraction(0)
                if not (acc - expected).is_zero():
                    return False
        return True


def _class_matrices(
    table: GroupTable, classes: list[list[int]], class_of: list[int]
) -> list[list[list[int]]]:
    """Structure-constant matrices A_i with (A_i)[j][k] = #{x in K_i : x^{-1} z_k in K_j}.

    The common right eigenvectors of all A_i are the vectors
    (|K_k| chi(z_k)/chi(1))_k, one per irreducible character chi.
    """
    inv = table.inverse
    reps = [c[0] for c in classes]
    r = len(classes)
    mats = []
    for cls in classes:
        mat = [[0] * r for _ in range(r)]
        for k, zk in enumerate(reps):
            for x in cls:
                mat[class_of[table.mul(inv[x], zk)]][k] += 1
        mats.append(mat)
    return mats


def _reduce_mod(vec: list[int], basis: list[list[int]], pivots: list[int], p: int):
    """Reduce vec against an echelonized basis; return (residual, coords)."""
    coords = [0] * len(basis)
    v = list(vec)
    for idx, (b, piv) in enumerate(zip(basis, pivots)):
        c = v[piv] % p
        if c:
            coords[idx] = c
            for t in range(len(v)):
                v[t] = (v[t] - c * b[t]) % p
    return v, coords


def _echelon_insert(vec: list[int], basis: list[list[int]], pivots: list[int], p: int) -> bool:
    v, _ = _reduce_mod(vec, basis, pivots, p)
    piv = next((t for t, x in enumerate(v) if x % p), None)
    if piv is None:
        return False
    scale = pow(v[piv], p - 2, p)
    v = [(x * scale) % p for x in v]
    for b in basis:
        c = b[piv]
        if c:
            for t in range(len(v)):
                b[t] = (b[t] - c * v[t]) % p
    basis.append(v)
    pivots.append(piv)
    return True


def _kernel_mod(mat: list[list[int]], p: int) -> list[list[int]]:
    """Basis of the right kernel of a square matrix over GF(p)."""
    s = len(mat)
    rows = [list(map(lambda x: x % p, row)) for row in mat]
    where = [-1] * s  # pivot column -> row index
    rank_rows: list[list[int]] = []
    for col in range(s):
        # find a row with nonzero entry in col, not yet used
        pivot_row = None
        for row in rows:
            if row[col] % p and all(row[c] == 0 for c in range(col)):
                pivot_row = row
                break
        if pivot_row is None:
            continue
        scale = pow(pivot_row[col], p - 2, p)
        pivot_row[:] = [(x * scale) % p for x in pivot_row]
        for row in rows:
            if row is not pivot_row and row[col]:
                c = row[col]
                for t in range(s):
                    row[t] = (row[t] - c * pivot_row[t]) % p
        where[col] = 1
        rank_rows.append(pivot_row)
    kernel = []
    for col in range(s):
        if where[col] >= 0:
            continue
        v = [0] * s
        v[col] = 1
        for row in rank_rows:
            piv = next(t for t, x in enumerate(row) if x)
            v[piv] = (-row[col]) % p
        kernel.append(v)
    return kernel


def _mat_vec(mat: list[list[int]], v: list[int], p: int) -> list[int]:
    return [sum(mij * vj for mij, vj in zip(row, v)) % p for row in mat]


def _common_eigenvectors(mats: list[list[list[int]]], p: int) -> list[list[int]]:
    """Split GF(p)^r into common eigenspaces of commuting matrices; requires
    every eigenspace to end up one-dimensional."""
    r = len(mats[0])
    spaces: list[list[list[int]]] = [[[1 if i == j else 0 for j in range(r)] for i in range(r)]]
    for mat in mats:
        next_spaces: list[list[list[int]]] = []
        for basis in spaces:
            s = len(basis)
            if s == 1:
                next_spaces.append(basis)
                continue
            # echelonize the basis for coordinate extraction
            ech: list[list[int]] = []
            pivots: list[int] = []
            for b in basis:
                _echelon_insert(b, ech, pivots, p)
            # restriction C of mat to the subspace: mat * e_l = sum_m C[m][l] e_m
            cols = []
            for b in ech:
                w = _mat_vec(mat, b, p)
                residual, coords = _reduce_mod(w, ech, pivots, p)
                if any(x % p for x in residual):
                    raise CanordError("subspace not invariant; inconsistent split")
                cols.append(coords)
            cmat = [[cols[l][m] for l in range(s)] for m in range(s)]
            found = 0
            for lam in range(p):
                shifted = [
                    [(cmat[i][j] - (lam if i == j else 0)) % p for j in range(s)]
                    for i in range(s)
                ]
                ker = _kernel_mod(shifted, p)
                if not ker:
                    continue
                sub = []
                for kv in ker:
                    v = [0] * r
                    for coeff, b in zip(kv, ech):
                        if coeff:
                            for t in range(r):
                                v[t] = (v[t] + coeff * b[t]) % p
                    sub.append(v)
                next_spaces.append(sub)
                found += len(ker)
                if found == s:
                    break
            if found != s:
                raise CanordError("eigen decomposition incomplete mod p")
        spaces = next_spaces
        if all(len(b) == 1 for b in spaces):
            break
    if not all(len(b) == 1 for b in spaces):
        raise CanordError("class matrices did not split the space")
    out = []
    for basis in spaces:
        v = basis[0]
        piv = next(t for t, x in enumerate(v) if x % p)
        scale = pow(v[piv], p - 2, p)
        out.append([(x * scale) % p for x in v])
    return out


def _character_candidates_mod_p(
    table: GroupTable, classes: list[list[int]], class_of: list[int], p: int
) -> list[tuple[int, list[int]]]:
    """(dimension, values-mod-p per class) for each irreducible character."""
    n = table.n
    r = len(classes)
    sizes = [len(c) for c in classes]
    inv = table.inverse
    reps = [c[0] for c in classes]
    inverse_class = [class_of[inv[rep]] for rep in reps]
    mats = _class_matrices(table, classes, class_of)
    vectors = _common_eigenvectors(mats[1:], p) if r > 1 else [[1]]
    out = []
    for v in vectors:
        k0 = next(t for t, x in enumerate(v) if x % p)
        vk0_inv = pow(v[k0], p - 2, p)
        omegas = []
        for mat in mats:
            w = _mat_vec(mat, v, p)
            omegas.append((w[k0] * vk0_inv) % p)
        s = 0
        for i in range(r):
            s = (s + omegas[i] * omegas[inverse_class[i]] * pow(sizes[i], p - 2, p)) % p
        if s == 0:
            raise CanordError("degenerate eigenvector norm mod p")
        d2 = (n * pow(s, p - 2, p)) % p
        dim = next((d for d in range(1, isqrt(n) + 1) if (d * d) % p == d2), None)
        if dim is None:
            raise CanordError("no integer dimension matches mod p")
        chi = [(dim * omegas[i] * pow(sizes[i], p - 2, p)) % p for i in range(r)]
        out.append((dim, chi))
    return out


def _pick_primes(exponent: int, order: int):
    from sympy import isprime

    k = max(1, (order + 1) // exponent + 1)
    found = 0
    while found < 24:
        p = exponent * k + 1
        if p > order and isprime(p):
            found += 1
            yield p
        k += 1


def _lift_character(
    table: GroupTable,
    classes: list[list[int]],
    class_of: list[int],
    chi_mod: list[int],
    dim: int,
    p: int,
    zeta_img: int,
    exponent: int,
) -> list[CycloNumber]:
    """Lift a mod-p character to exact cyclotomic values via multiplicity
    extraction on each cyclic subgroup generated by a class representative."""
    reps = [c[0] for c in classes]
    values: list[CycloNumber] = []
    for idx, rep in enumerate(reps):
        o = table.order_of(rep)
        if o == 1:
            values.append(one() * dim)
            continue
        z_o = pow(zeta_img, exponent // o, p)
        z_o_inv = pow(z_o, p - 2, p)
        powers = []
        acc = 0  # identity index
        for _ in range(o):
            powers.append(class_of[acc])
            acc = table.mul(acc, rep)
        o_inv = pow(o, p - 2, p)
        mults = []
        for k in range(o):
            m = 0
            for j in range(o):
                m = (m + chi_mod[powers[j]] * pow(z_o_inv, j * k, p)) % p
            m = (m * o_inv) % p
            if m > dim:
                raise CanordError("multiplicity lift out of range")
            mults.append(m)
        if sum(mults) != dim:
            raise CanordError("multiplicities do not sum to the dimension")
        val = zero()
        for k, m in enumerate(mults):
            if m:
                val = val + root_of_unity(o, k) * m
        values.append(val)
    return values


def character_table(g) -> CharacterTable:
    """Exact character table of a finite group (matrix group, central
    extension, or raw multiplication table)."""
    table = _as_group_table(g)
    if isinstance(g, FiniteMatrixGroup):
        classes = conjugacy_classes(g)
    else:
        classes = table.conjugacy_classes()
    class_of = [0] * table.n
    for idx, cls in enumerate(classes):
        for x in cls:
            class_of[x] = idx
    exponent = table.exponent()
    n = table.n
    last_error: Exception | None = None
    for p in _pick_primes(exponent, n):
        try:
            from sympy import primitive_root

            g0 = primitive_root(p)
            zeta_img = pow(g0, (p - 1) // exponent, p)
            cands = _character_candidates_mod_p(table, classes, class_of, p)
            rows = [
                _lift_character(table, classes, class_of, chi, dim, p, zeta_img, exponent)
                for dim, chi in cands
            ]
            if sum(int(r[0].as_rational()) ** 2 for r in rows) != n:
                raise CanordError("squared dimensions do not sum to the group order")
            rows.sort(key=lambda r: (int(r[0].as_rational()), [str(v) for v in r]))
            for i, row in enumerate(rows):
                if all((v - 1).is_zero() for v in row):
                    rows.insert(0, rows.pop(i))
                    break
            else:
                raise CanordError("trivial character missing")
            ct = CharacterTable(table, classes, rows)
            if not ct.check_orthogonality():
                raise CanordError("orthogonality certification failed")
            return ct
        except CanordError as exc:  # retry with the next prime
            last_error = exc
    raise CanordError(f"character table construction failed: {last_error}")


# ---------------------------------------------------------------------------
# McKay quivers


class McKayQuiver:
    """Nodes are irreducible characters (dimension per node, trivial first);
    adjacency counts the multiplicity of chi_j inside std (x) chi_i."""

    def __init__(self, dims: list[int], adjacency: list[list[int]], characters: CharacterTable):
        self.dims = dims
        self.adjacency = adjacency
        self.characters = characters

    def __len__(self) -> int:
        return len(self.dims)

    def is_symmetric(self) -> bool:
        a = self.adjacency
        r = len(a)
        return all(a[i][j] == a[j][i] for i in range(r) for j in range(r))

    def degree_identity_holds(self) -> bool:
        """2 d_i = sum_j a_ij d_j, the eigenvector property of the dims."""
        return all(
            2 * d == sum(aij * dj for aij, dj in zip(row, self.dims))
            for d, row in zip(self.dims, self.adjacency)
        )


def mckay_quiver(group: FiniteMatrixGroup) -> McKayQuiver:
    """McKay quiver of a finite subgroup of SL2 with respect to the standard
    two-dimensional representation."""
    for m in group.elements:
        if not (m.det() - one()).is_zero():
            raise ParameterError(
                "McKay quiver requires every element to have determinant 1"
            )
    ct = character_table(group)
    std = [group.elements[rep].trace() for rep in ct.reps]
    r = len(ct)
    n = len(group)
    adjacency = [[0] * r for _ in range(r)]
    for i in range(r):
        for j in range(r):
            acc = zero()
            for k in range(r):
                term = std[k] * ct.values[i][k] * ct.values[j][ct.inverse_class[k]]
                acc = acc + term * ct.sizes[k]
            val = (acc * Fraction(1, n)).as_rational()
            if val.denominator != 1 or val < 0:
                raise CanordError("quiver multiplicity is not a non-negative integer")
            adjacency[i][j] = int(val)
    return McKayQuiver(ct.dims, adjacency, ct)


def identify_affine(adjacency: list[list[int]]) -> tuple[str, int]:
    """Recognize an affine ADE diagram from its (symmetric, integer)
    adjacency matrix, returning the finite letter and rank it extends."""
    r = len(adjacency)
    for i in range(r):
        if adjacency[i][i] != 0:
            raise CanordError("diagram has a loop")
    # connectivity
    seen = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for y in range(r):
            if adjacency[x][y] and y not in seen:
                seen.add(y)
                frontier.append(y)
    if len(seen) != r:
        raise CanordError("diagram is not connected")
    entries = sorted({adjacency[i][j] for i in range(r) for j in range(r) if i != j and adjacency[i][j]})
    if entries == [2] and r == 2:
        return ("A", 1)
    if entries != [1]:
        raise CanordError("diagram has unexpected edge multiplicities")
    degrees = [sum(1 for j in range(r) if adjacency[i][j]) for i in range(r)]
    if all(d == 2 for d in degrees):
        return ("A", r - 1)
    if degrees.count(4) == 1 and degrees.count(1) == 4 and r == 5:
        return ("D", 4)
    if degrees.count(3) == 2 and all(d <= 3 for d in degrees):
        return ("D", r - 1)
    if degrees.count(3) == 1 and all(d <= 3 for d in degrees):
        center = degrees.index(3)
        arms = []
        for start in (j for j in range(r) if adjacency[center][j]):
            length = 1
            prev, cur = center, start
            while degrees[cur] == 2:
                nxt = next(j for j in range(r) if adjacency[cur][j] and j != prev)
                prev, cur = cur, nxt
                length += 1
            arms.append(length)
        arms.sort()
        if arms == [2, 2, 2]:
            return ("E", 6)
        if arms == [1, 3, 3]:
            return ("E", 7)
        if arms == [1, 2, 5]:
            return ("E", 8)
    raise CanordError("diagram is not an affine ADE shape")


# ---------------------------------------------------------------------------
# the two counts


class ResolutionCount:
    """Resolution-side module count with its per-curve breakdown."""

    def __init__(self, n0: int, entries: list[dict]):
        self.n0 = n0
        self.entries = entries
        self.total = n0 + sum(e["ni"] for e in entries)

    def __int__(self) -> int:
        return self.total


def _ni_for(ct) -> int:
    if ct.tag == "0":
        return 1
    if ct.tag == "C":
        if ct.params == (2,):
            return 1
    elif ct.tag == "X":
        if ct.params == (2,):
            return 1
    elif ct.tag == "I":
        a, _ = ct.params
        if a == 1:
            return 1
        if a == 2:
            return 2
    raise CurveTypeError(f"no module-count rule for curve type {ct}")


def count_from_resolution(res: ResolutionRamData, t: CanonicalType) -> ResolutionCount:
    """Count modules from the resolution: a base contribution (2 when the
    branch data forces a doubled origin chart, else 1) plus one term per
    exceptional curve determined by its type."""
    n0 = 2 if t.family in ("A12", "BL", "B") else 1
    entries = []
    for idx in res.lattice.exceptional_indices():
        ct = classify_exceptional(res, idx)
        entries.append(
            {
                "label": res.lattice.curves[idx].label,
                "curveType": str(ct),
                "ni": _ni_for(ct),
            }
        )
    return ResolutionCount(n0, entries)


def count_from_group(t: CanonicalType, cap: int | None = None) -> int:
    """Count modules from the group side: the number of matrix blocks of the
    idempotent slice of the twisted algebra (for ADE, the number of
    conjugacy classes of the subgroup itself)."""
    if t.family == "ADE":
        return len(conjugacy_classes(matrix_group(t, cap)))
    ext, eps = group_side(t, cap)
    return block_count(ext, eps)


# ---------------------------------------------------------------------------
# the combined verification report


class McKayReport:
    """Everything the two-sided verification of one canonical type produces.

    ``group_count`` is None for the DL family, whose count has no
    group-algebra side; ``agree`` then records whether the resolution count
    matches the classification value instead.
    """

    def __init__(
        self,
        t: CanonicalType,
        resolution_count: ResolutionCount,
        group_count: int | None,
        k_values: list[Fraction],
        torsion: list[dict],
        skew: bool,
        skew_reasons: list[str],
        terminal: bool,
        notes: list[str],
        reference_count: int | None = None,
    ):
        self.type = t
        self.resolution_count = resolution_count
        self.group_count = group_count
        self.k_values = k_values
        self.k_trivial = all(v == 0 for v in k_values)
        self.torsion = torsion
        self.skew = skew
        self.skew_reasons = skew_reasons
        self.terminal = terminal
        self.notes = notes
        if group_count is not None:
            self.agree = resolution_count.total == group_count
        else:
            self.agree = resolution_count.total == reference_count

    def to_json_dict(self) -> dict:
        return {
            "type": self.type.family,
            "params": self.type.params(),
            "countResolution": self.resolution_count.total,
            "countGroup": self.group_count,
            "curves": [dict(e) for e in self.resolution_count.entries],
            "n0": self.resolution_count.n0,
            "kTrivial": self.k_trivial,
            "torsion": [
                {"label": x["label"], "order": x["order"], "expected": x["expected"]}
                for x in self.torsion
            ],
            "agree": self.agree,
        }

    def to_text(self) -> str:
        group_bit = "-" if self.group_count is None else str(self.group_count)
        lines = [
            f"{self.type.label()}: resolution={self.resolution_count.total} "
            f"group={group_bit} agree={'yes' if self.agree else 'NO'}"
        ]
        curve_bits = " ".join(
            f"{e['label']}:{e['curveType']}(n={e['ni']})"
            for e in self.resolution_count.entries
        )
        lines.append(f"  n0={self.resolution_count.n0}  curves: {curve_bits or '(none)'}")
        lines.append(
            "  canonical class: "
            + ("numerically trivial" if self.k_trivial else f"NOT trivial {self.k_values}")
        )
        if self.torsion:
            bits = ", ".join(
                f"{x['label']}: order {x['order']} (expected {x['expected']})"
                for x in self.torsion
            )
            lines.append(f"  torsion: {bits}")
        lines.append(f"  skew-constructible: {'true' if self.skew else 'false'}")
        if not self.terminal:
            lines.append("  WARNING: ramification data is not terminal")
        for note in self.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines)


def verify(t: CanonicalType, cap: int | None = None) -> McKayReport:
    """Run the full two-sided check for one canonical type.

    For DL the group side is undefined; the resolution count is compared
    against the classification value for the family instead, with a note.
    """
    res = resolution_ram(t)
    rc = count_from_resolution(res, t)
    cg = count_from_group(t, cap) if t.family != "DL" else None
    k_values = canonical_check(res)
    lat = cover_lattice(t)
    torsion = []
    for chk in torsion_checks(t, lat):
        torsion.append(
            {
                "label": chk["label"],
                "order": torsion_order(lat, chk["divisor"]),
                "expected": chk["expected"],
            }
        )
    nbar, e = extension_params(t)
    skew, skew_reasons = skew_constructible(res, nbar if nbar is not None else 1, e)
    terminal, _failures = resolution_is_terminal(res)
    notes = []
    expected = expected_count(t)
    if t.family == "DL":
        notes.append(
            "no group-algebra side for DL; resolution count compared to the "
            f"classification value {expected}"
        )
    if rc.total != expected:
        notes.append(f"resolution count {rc.total} differs from closed form {expected}")
    if nbar is not None and t.family != "DL" and nbar != rc.n0:
        notes.append(
            f"origin contribution n0={rc.n0} differs from extension parameter {nbar}"
        )
    bad_torsion = [x for x in torsion if x["order"] != x["expected"]]
    if bad_torsion:
        notes.append("torsion orders off: " + ", ".join(x["label"] for x in bad_torsion))
    return McKayReport(
        t,
        rc,
        cg,
        k_values,
        torsion,
        skew,
        skew_reasons,
        terminal,
        notes,
        reference_count=expected,
    )
