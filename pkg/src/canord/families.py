"""The family catalog: matrix groups, central-extension data, and expected
lattice identities for each canonical-order family.

For every family this module knows the generating matrices of the associated
finite subgroup G < GL2, the central subgroup H with G/H abelian (where that
quotient drives the extension construction), the extension parameters
(nbar, e), the closed-form module count, and the divisor classes whose
torsion orders and linear-equivalence solutions certify the lattice side.
"""
from __future__ import annotations

from fractions import Fraction

from .cyclotomic import CycloNumber, from_rational, one, root_of_unity, zero
from .errors import ParameterError
from .lattice import DivisorClass, IntersectionLattice, family_config
from .matgroup import FiniteMatrixGroup, Mat2, generate_group, quotient
from .ramdata import CanonicalType
from .twisted import (
    AlgebraElement,
    CentralExtension,
    build_extension,
    dihedral_extension,
    idempotent_epsilon,
)


def _c(x: int | Fraction | CycloNumber) -> CycloNumber:
    return x if isinstance(x, CycloNumber) else from_rational(x)


def _mat(a, b, c, d) -> Mat2:
    return Mat2(_c(a), _c(b), _c(c), _c(d))


_SWAP = _mat(0, 1, 1, 0)
_J = _mat(0, 1, -1, 0)
_REFLECT = _mat(-1, 0, 0, 1)


def _binary_dihedral_gens(order_sigma: int) -> list[Mat2]:
    z = root_of_unity(order_sigma)
    return [Mat2.diagonal(z, z.inverse()), _J]


def ade_group(letter: str, rank: int, cap: int | None = None) -> FiniteMatrixGroup:
    """The finite subgroup of SL2 whose Kleinian quotient has the given
    resolution graph: cyclic for A, binary dihedral for D, binary tetrahedral/
    octahedral/icosahedral for E6/E7/E8."""
    kwargs = {} if cap is None else {"cap": cap}
    if letter == "A":
        if rank < 1:
            raise ParameterError("A-type rank must be >= 1")
        z = root_of_unity(rank + 1)
        return generate_group([Mat2.diagonal(z, z.inverse())], **kwargs)
    if letter == "D":
        if rank < 4:
            raise ParameterError("D-type rank must be >= 4")
        return generate_group(_binary_dihedral_gens(2 * (rank - 2)), **kwargs)
    if letter != "E" or rank not in (6, 7, 8):
        raise ParameterError(f"unknown ADE group {letter}{rank}")
    i = root_of_unity(4)
    half = Fraction(1, 2)
    omega = _mat(
        (i - 1) * half, (i + 1) * half, (i - 1) * half, -(i + 1) * half
    )
    tetra = [Mat2.diagonal(i, i.inverse()), _J, omega]
    if rank == 6:
        return generate_group(tetra, **kwargs)
    if rank == 7:
        z8 = root_of_unity(8)
        return generate_group(tetra + [Mat2.diagonal(z8, z8.inverse())], **kwargs)
    z = root_of_unity(5)
    sqrt5 = z - z ** 2 - z ** 3 + z ** 4
    inv5 = sqrt5.inverse()
    s = Mat2.diagonal(z ** 3, z ** 2)
    t = _mat(
        (z - z ** 4) * inv5,
        (z ** 2 - z ** 3) * inv5,
        (z ** 2 - z ** 3) * inv5,
        (z ** 4 - z) * inv5,
    )
    return generate_group([s, t], **kwargs)


def matrix_group(t: CanonicalType, cap: int | None = None) -> FiniteMatrixGroup:
    """The finite subgroup of GL2 attached to a canonical type."""
    kwargs = {} if cap is None else {"cap": cap}
    f = t.family
    if f == "A12":
        z = root_of_unity(2 * t.e)
        return generate_group(
            [Mat2.diagonal(z, one()), Mat2.diagonal(one(), z)], **kwargs
        )
    if f == "BL":
        z = root_of_unity(2 * t.n + 1)
        return generate_group([Mat2.diagonal(z, z.inverse()), _SWAP], **kwargs)
    if f == "B":
        z = root_of_unity(2 * t.n)
        return generate_group([Mat2.diagonal(z, z.inverse()), _SWAP], **kwargs)
    if f == "L":
        z = root_of_unity(2 * t.n + 2)
        return generate_group([Mat2.diagonal(z, z.inverse()), _SWAP], **kwargs)
    if f == "DL":
        z = root_of_unity(4 * t.n - 2)
        return generate_group(
            [Mat2.diagonal(z, z.inverse()), _J, _REFLECT], **kwargs
        )
    if f == "BD":
        z = root_of_unity(4 * t.n - 4)
        return generate_group(
            [Mat2.diagonal(z, z.inverse()), _J, _REFLECT], **kwargs
        )
    if f == "Anz":
        z = root_of_unity((t.n + 1) * t.e)
        return generate_group(
            [
                Mat2.diagonal(z, z.inverse()),
                Mat2.diagonal(one(), z ** (t.n + 1)),
            ],
            **kwargs,
        )
    return ade_group(t.letter, t.rank, cap)


def central_subgroup_mats(t: CanonicalType) -> list[Mat2]:
    """Generators of the subgroup H <= G whose quotient G/H is the abelian
    base of the central-extension construction."""
    f = t.family
    if f == "A12":
        return [_mat(-1, 0, 0, -1)]
    if f in ("BL", "B"):
        z = root_of_unity({"BL": 2 * t.n + 1, "B": 2 * t.n}[f])
        return [Mat2.diagonal(z, z.inverse())]
    if f == "BD":
        z = root_of_unity(4 * t.n - 4)
        return [Mat2.diagonal(z * z, (z * z).inverse()), _J]
    if f == "Anz":
        z = root_of_unity((t.n + 1) * t.e)
        w = z ** t.e
        return [Mat2.diagonal(w, w.inverse())]
    if f == "ADE":
        return []  # H = G, handled by the caller
    raise ParameterError(f"no central-subgroup data for family {f!r}")


def cocycle_pair_mats(t: CanonicalType) -> tuple[Mat2, Mat2]:
    """The two group elements whose images in G/H carry the cocycle twist:
    the first maps to the order-(nbar*e) generator, the second to the
    order-e one.  The twisted commutator of their lifts is the central rho."""
    f = t.family
    identity = Mat2.identity()
    if f == "A12":
        z = root_of_unity(2 * t.e)
        return (Mat2.diagonal(z, one()), Mat2.diagonal(z, z))
    if f in ("BL", "B"):
        return (_SWAP, identity)
    if f == "BD":
        z = root_of_unity(4 * t.n - 4)
        return (Mat2.diagonal(z, z.inverse()), _REFLECT)
    if f == "Anz":
        z = root_of_unity((t.n + 1) * t.e)
        return (Mat2.diagonal(z, z.inverse()), Mat2.diagonal(one(), z ** (t.n + 1)))
    if f == "ADE":
        return (identity, identity)
    raise ParameterError(f"no cocycle pair for family {f!r}")


def extension_params(t: CanonicalType) -> tuple[int | None, int]:
    """(nbar, e) with G/H isomorphic to Z/(nbar*e) x Z/e; nbar is None for the
    L family, whose extension is the dihedral one and not of this shape."""
    f = t.family
    if f == "A12":
        return (2, t.e)
    if f in ("BL", "B"):
        return (2, 1)
    if f == "L":
        return (None, 2)
    if f in ("DL", "BD"):
        return (1, 2)
    if f == "Anz":
        return (1, t.e)
    return (1, 1)  # ADE


def group_side(
    t: CanonicalType, cap: int | None = None
) -> tuple[CentralExtension, AlgebraElement]:
    """The central extension G' and the central idempotent eps used for the
    group-side module count of a canonical type.

    Undefined for the DL family: its commutator subgroup already contains
    the full diagonal generator, so no abelian Z/ne x Z/e quotient carries
    the cocycle, and the family's module count is certified on the
    resolution side only.
    """
    if t.family == "DL":
        raise ParameterError(
            "the DL family has no twisted group-algebra construction; "
            "its module count is certified on the resolution side only"
        )
    if t.family == "L":
        ext = dihedral_extension(t.n)
        eps = idempotent_epsilon(2, root_of_unity(2), ext)
        return ext, eps
    group = matrix_group(t, cap)
    nbar, e = extension_params(t)
    if t.family == "ADE":
        h_indices = list(range(len(group)))
    else:
        h_seed = [group.index_of(m) for m in central_subgroup_mats(t)]
        h_indices = group.subgroup_closure(h_seed)
    gbar, coset_of = quotient(group, h_indices)
    t_mat, s_mat = cocycle_pair_mats(t)
    pair = (coset_of[group.index_of(t_mat)], coset_of[group.index_of(s_mat)])
    ext = build_extension(
        gbar, nbar, e, pullback=(group.table(), coset_of), pair=pair
    )
    eps = idempotent_epsilon(e, root_of_unity(e), ext)
    return ext, eps


def expected_count(t: CanonicalType) -> int:
    """Closed-form number of indecomposable reflexive modules per family."""
    f = t.family
    if f == "A12":
        return 4
    if f == "BL":
        return t.n + 2
    if f == "B":
        return t.n + 3
    if f in ("L", "DL", "Anz"):
        return t.n + 1
    if f == "BD":
        return t.n + 2
    return t.rank + 1  # ADE: one per exceptional curve plus the trivial module


# ---------------------------------------------------------------------------
# cover-lattice data: torsion divisors and linear-equivalence relations


def cover_lattice(t: CanonicalType) -> IntersectionLattice:
    """The contracted configuration on which the family's divisor-class
    identities are checked."""
    return family_config(t.family, t.n, t.e, t.letter, t.rank)


def _alternating(lat: IntersectionLattice, count: int) -> DivisorClass:
    div = lat.divisor({})
    for i in range(1, count + 1):
        term = lat.curve_class(f"C{i}")
        div = div + term if i % 2 == 1 else div - term
    return div


def torsion_checks(
    t: CanonicalType, lat: IntersectionLattice | None = None
) -> list[dict]:
    """Divisor classes with known torsion order against the contracted block:
    a list of {label, divisor, expected}."""
    f = t.family
    if lat is None:
        lat = cover_lattice(t)
    if f == "A12":
        m = 2 * t.e - 1
        div = lat.curve_class("C1") - lat.curve_class(f"C{m}")
        return [{"label": f"C1-C{m}", "divisor": div, "expected": t.e}]
    if f == "L":
        div = lat.curve_class(f"C{t.n + 1}") - lat.curve_class(f"C{t.n}")
        return [{"label": f"C{t.n + 1}-C{t.n}", "divisor": div, "expected": 2}]
    if f == "DL":
        return [
            {
                "label": f"alt(C1..C{2 * t.n})",
                "divisor": _alternating(lat, 2 * t.n),
                "expected": 2,
            }
        ]
    if f == "BD":
        return [
            {
                "label": f"alt(C1..C{2 * t.n - 1})",
                "divisor": _alternating(lat, 2 * t.n - 1),
                "expected": 2,
            }
        ]
    if f == "Anz":
        n, e = t.n, t.e
        div = lat.divisor({})
        for i in range(n + 1):
            div = div + lat.curve_class(f"C{i * e + 1}")
        for i in range(1, n + 1):
            div = div - lat.curve_class(f"C{i * e}")
        return [{"label": "sum C_{ie+1} - sum C_{ie}", "divisor": div, "expected": e}]
    return []


def rho_action(t: CanonicalType, lat: IntersectionLattice, div: DivisorClass) -> DivisorClass:
    """The residual involution on the DL cover: it fixes the chain curves and
    swaps the two fork curves (and their transverse partners)."""
    if t.family != "DL":
        raise ParameterError("the involution is defined for the DL family")
    m = 2 * t.n + 1
    perm = list(range(len(lat.curves)))
    a, b = lat.index_of(f"F{m - 1}"), lat.index_of(f"F{m}")
    ca, cb = lat.index_of(f"C{m - 1}"), lat.index_of(f"C{m}")
    perm[a], perm[b] = perm[b], perm[a]
    perm[ca], perm[cb] = perm[cb], perm[ca]
    out = [0] * len(lat.curves)
    for i, c in enumerate(div.coefficients):
        out[perm[i]] = c
    return DivisorClass(out)


def lattice_relations(t: CanonicalType) -> list[dict]:
    """Known numerical linear equivalences on the cover lattice: a list of
    {label, divisor, support (None = contracted), expected (DivisorClass)}."""
    lat = cover_lattice(t)
    f = t.family
    checks: list[dict] = []
    if f == "A12":
        e = t.e
        m = 2 * e - 1
        div = 2 * e * (lat.curve_class("C1") - lat.curve_class(f"C{m}"))
        expected = lat.divisor({f"F{i}": 2 * i - 2 * e for i in range(1, m + 1)})
        checks.append(
            {"label": f"2e(C1-C{m})", "divisor": div, "support": None, "expected": expected}
        )
    elif f == "BD":
        n = t.n
        checks.append(
            {
                "label": "F1 ~ -2C1+C2",
                "divisor": -2 * lat.curve_class("C1") + lat.curve_class("C2"),
                "support": None,
                "expected": lat.divisor({"F1": 1}),
            }
        )
        for i in range(1, n - 1):
            div = (
                lat.curve_class(f"C{2 * i}")
                - 2 * lat.curve_class(f"C{2 * i + 1}")
                + lat.curve_class(f"C{2 * i + 2}")
            )
            checks.append(
                {
                    "label": f"F{2 * i + 1} ~ C{2 * i}-2C{2 * i + 1}+C{2 * i + 2}",
                    "divisor": div,
                    "support": None,
                    "expected": lat.divisor({f"F{2 * i + 1}": 1}),
                }
            )
        checks.append(
            {
                "label": f"F{2 * n - 1} ~ C{2 * n - 2}-2C{2 * n - 1}",
                "divisor": lat.curve_class(f"C{2 * n - 2}")
                - 2 * lat.curve_class(f"C{2 * n - 1}"),
                "support": None,
                "expected": lat.divisor({f"F{2 * n - 1}": 1}),
            }
        )
        checks.append(
            {
                "label": "2 alt(C) ~ -(odd F)",
                "divisor": 2 * _alternating(lat, 2 * n - 1),
                "support": None,
                "expected": lat.divisor({f"F{j}": -1 for j in range(1, 2 * n, 2)}),
            }
        )
    elif f == "DL":
        n = t.n
        div = _alternating(lat, 2 * n)
        sym = div + rho_action(t, lat, div)
        checks.append(
            {
                "label": "(1+rho) alt(C) ~ -(odd F)",
                "divisor": sym,
                "support": None,
                "expected": lat.divisor({f"F{j}": -1 for j in range(1, 2 * n, 2)}),
            }
        )
    elif f == "Anz":
        n, e = t.n, t.e
        if e >= 2:
            div = lat.curve_class(f"C{e}") - e * lat.curve_class("C1")
            expected = lat.divisor({f"F{j}": e - j for j in range(1, e)})
            checks.append(
                {"label": "first string relation", "divisor": div, "support": None, "expected": expected}
            )
            for i in range(1, n):
                div = (
                    (e - 1) * lat.curve_class(f"C{i * e}")
                    - e * lat.curve_class(f"C{i * e + 1}")
                    + lat.curve_class(f"C{i * e + e}")
                )
                expected = lat.divisor({f"F{i * e + j}": e - j for j in range(1, e)})
                checks.append(
                    {
                        "label": f"string relation at block {i}",
                        "divisor": div,
                        "support": None,
                        "expected": expected,
                    }
                )
            div = (e - 1) * lat.curve_class(f"C{n * e}") - e * lat.curve_class(
                f"C{n * e + 1}"
            )
            expected = lat.divisor({f"F{n * e + j}": e - j for j in range(1, e)})
            checks.append(
                {"label": "last string relation", "divisor": div, "support": None, "expected": expected}
            )
    elif f == "L":
        n = t.n
        full = [lat.index_of(f"F{i}") for i in range(1, 2 * n + 2)]
        for i in range(1, 2 * n + 2):
            div = lat.curve_class(f"C{i}") - i * lat.curve_class("C1")
            expected = lat.divisor({f"F{j}": i - j for j in range(1, i)})
            checks.append(
                {
                    "label": f"C{i} ~ {i}C1 + sum (i-j)F_j",
                    "divisor": div,
                    "support": full,
                    "expected": expected,
                }
            )
        div = (
            -lat.curve_class(f"C{n}")
            + 2 * lat.curve_class(f"C{n + 1}")
            - lat.curve_class(f"C{n + 2}")
        )
        checks.append(
            {
                "label": "(1+tau)(C_{n+1}-C_n) ~ -F_{n+1}",
                "divisor": div,
                "support": None,
                "expected": lat.divisor({f"F{n + 1}": -1}),
            }
        )
    return checks
