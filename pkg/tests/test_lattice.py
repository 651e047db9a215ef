"""Intersection lattices: pairing algebra, Smith form, fundamental cycles,
linear equivalence, torsion orders, and the canonical-class check."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from canord.errors import LatticeError, ParameterError
from canord.families import cover_lattice, torsion_checks
from canord.lattice import (
    Curve,
    DivisorClass,
    IntersectionLattice,
    a_string,
    build_config,
    canonical_check,
    d_tree,
    dynkin,
    family_config,
    fundamental_cycle,
    intersect,
    is_negative_definite,
    linear_equivalence_solve,
    smith_normal_form,
    to_dot,
    torsion_order,
)
from canord.ramdata import CanonicalType, resolution_ram

ALL_TYPES = (
    [CanonicalType("A12", e=e) for e in range(1, 5)]
    + [CanonicalType(f, n=n) for f in ("BL", "B", "L", "DL") for n in range(1, 5)]
    + [CanonicalType("BD", n=n) for n in range(2, 5)]
    + [CanonicalType("Anz", n=n, e=e) for n in range(1, 4) for e in range(2, 5)]
    + [
        CanonicalType("ADE", letter=l, rank=r)
        for l, r in (("A", 3), ("D", 4), ("D", 5), ("E", 6), ("E", 7), ("E", 8))
    ]
)


def contracted_block(lat: IntersectionLattice) -> list[list[int]]:
    idxs = lat.contracted
    return [[lat.pairing[i][j] for j in idxs] for i in idxs]


# -- construction ------------------------------------------------------------------


def test_a_string_shape():
    lat = a_string(4)
    assert len(lat) == 8  # four exceptional plus one transverse curve each
    assert [c.label for c in lat.curves[:4]] == ["F1", "F2", "F3", "F4"]
    assert lat.pairing[0][1] == 1 and lat.pairing[0][2] == 0
    assert all(lat.pairing[i][i] == -2 for i in range(4))
    assert lat.contracted == (0, 1, 2, 3)
    assert lat.exceptional_indices() == (0, 1, 2, 3)
    assert lat.transverse_indices() == (4, 5, 6, 7)
    lat.validate_standard()


def test_a_string_custom_self_intersections():
    lat = a_string(3, [-2, -3, -1])
    assert [lat.pairing[i][i] for i in range(3)] == [-2, -3, -1]
    with pytest.raises(ParameterError):
        a_string(3, [-2, -2])


def test_d_tree_shape():
    lat = d_tree(5)
    deg = [
        sum(1 for j in range(5) if j != i and lat.pairing[i][j]) for i in range(5)
    ]
    assert sorted(deg) == [1, 1, 1, 2, 3]


def test_dynkin_dispatch():
    assert len(dynkin("A", 6).contracted) == 6
    assert len(dynkin("D", 6).contracted) == 6
    assert len(dynkin("E", 8).contracted) == 8
    with pytest.raises(ParameterError):
        dynkin("E", 9)
    with pytest.raises(ParameterError):
        dynkin("D", 3)
    with pytest.raises(ParameterError):
        dynkin("Z", 4)


def test_lattice_validation_errors():
    c = [Curve("E1", "exceptional", -2), Curve("E2", "exceptional", -2)]
    with pytest.raises(LatticeError):
        IntersectionLattice(c, [[-2, 1], [0, -2]], [0, 1])  # asymmetric
    with pytest.raises(LatticeError):
        IntersectionLattice(c, [[-3, 1], [1, -2]], [0, 1])  # diagonal mismatch
    with pytest.raises(LatticeError):
        IntersectionLattice(c, [[-2, 1], [1, -2]], [0, 5])  # bad contracted index


def test_duplicate_labels_rejected():
    c = [Curve("E1", "exceptional", -2), Curve("E1", "exceptional", -2)]
    with pytest.raises(LatticeError):
        IntersectionLattice(c, [[-2, 0], [0, -2]], [0, 1])


def test_resolution_lattices_negative_definite():
    for t in ALL_TYPES:
        lat = resolution_ram(t).lattice
        assert is_negative_definite(contracted_block(lat))


def test_cover_lattices_standard_and_negative_definite():
    for t in ALL_TYPES:
        lat = cover_lattice(t)
        lat.validate_standard()
        assert is_negative_definite(contracted_block(lat))


def test_build_config_matches_family_config():
    lat = family_config("BD", n=3)
    lat2 = build_config("family", family="BD", n=3)
    assert [c.label for c in lat.curves] == [c.label for c in lat2.curves]
    assert lat.pairing == lat2.pairing
    assert len(build_config("a-string", m=3)) == 6
    assert len(build_config("d-tree", m=4)) == 8
    with pytest.raises(ParameterError):
        build_config("mystery")


# -- divisor algebra ---------------------------------------------------------------


def test_divisor_class_algebra():
    a = DivisorClass([1, 2, 0])
    b = DivisorClass([0, -1, 4])
    assert (a + b).coefficients == (1, 1, 4)
    assert (a - b).coefficients == (1, 3, -4)
    assert (-a).coefficients == (-1, -2, 0)
    assert (3 * a).coefficients == (3, 6, 0)
    assert (Fraction(1, 2) * a).coefficients == (Fraction(1, 2), 1, 0)
    assert DivisorClass([0, 0]).is_zero()


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.integers(-5, 5), min_size=6, max_size=6),
    st.lists(st.integers(-5, 5), min_size=6, max_size=6),
    st.integers(-4, 4),
)
def test_divisor_linearity_against_pairing(u, v, k):
    lat = a_string(3)
    du, dv = DivisorClass(u), DivisorClass(v)
    for i in range(6):
        assert intersect(lat, du + dv, i) == intersect(lat, du, i) + intersect(
            lat, dv, i
        )
        assert intersect(lat, k * du, i) == k * intersect(lat, du, i)


# -- Smith normal form ----------------------------------------------------------------


def _matmul(a, b):
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def _det_int(m):
    if len(m) == 1:
        return m[0][0]
    out = 0
    for j in range(len(m)):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        out += (-1) ** j * m[0][j] * _det_int(minor)
    return out


def test_smith_normal_form_randomized():
    rng = random.Random(21)
    for _ in range(15):
        n = rng.randint(1, 4)
        a = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(n)]
        s, u, v = smith_normal_form(a)
        assert _matmul(_matmul(u, a), v) == s
        assert abs(_det_int(u)) == 1 and abs(_det_int(v)) == 1
        diag = [s[i][i] for i in range(n)]
        for i in range(n):
            for j in range(n):
                if i != j:
                    assert s[i][j] == 0
        for i in range(n - 1):
            if diag[i] != 0:
                assert diag[i + 1] % diag[i] == 0
            else:
                assert diag[i + 1] == 0


def test_smith_form_of_dynkin_determinants():
    # the discriminant group orders of the ADE root lattices
    for letter, rank, disc in (("A", 4, 5), ("D", 4, 4), ("E", 6, 3), ("E", 8, 1)):
        lat = dynkin(letter, rank)
        s, _, _ = smith_normal_form(contracted_block(lat))
        prod = 1
        for i in range(rank):
            prod *= abs(s[i][i])
        assert prod == disc


# -- fundamental cycles ----------------------------------------------------------------


def brute_force_is_fundamental(lat, subset, z) -> bool:
    """Exhaustively confirm that no smaller anti-nef cycle sits under z.

    The nonzero effective cycles with Z.E_i <= 0 for all i in the support are
    closed under coordinatewise minimum, so the fundamental cycle is their
    unique minimum and must be the only such cycle inside the box [0, z]."""
    coeffs = [int(z.coefficients[i]) for i in subset]
    for cand in itertools.product(*(range(0, c + 1) for c in coeffs)):
        if not any(cand) or list(cand) == coeffs:
            continue
        full = [0] * len(lat.curves)
        for i, c in zip(subset, cand):
            full[i] = c
        d = DivisorClass(full)
        if all(intersect(lat, d, k) <= 0 for k in subset):
            return False
    return True


def test_fundamental_cycle_brute_force_small_configs():
    checked = 0
    for t in ALL_TYPES:
        lat = resolution_ram(t).lattice
        subset = list(lat.contracted)
        if len(subset) > 8:
            continue
        z = fundamental_cycle(lat)
        for k in subset:
            assert intersect(lat, z, k) <= 0
        assert all(z.coefficients[i] >= 1 for i in subset)
        assert brute_force_is_fundamental(lat, subset, z)
        checked += 1
    assert checked >= 20


def test_fundamental_cycle_e8_highest_root():
    lat = dynkin("E", 8)
    z = fundamental_cycle(lat)
    support = sorted(int(z.coefficients[i]) for i in lat.contracted)
    assert support == [2, 2, 3, 3, 4, 4, 5, 6]
    assert brute_force_is_fundamental(lat, list(lat.contracted), z)


def test_fundamental_cycle_rejects_bad_support():
    lat = a_string(3)
    with pytest.raises(LatticeError):
        fundamental_cycle(lat, [0, 2])  # disconnected
    with pytest.raises(LatticeError):
        fundamental_cycle(lat, [])
    bad = IntersectionLattice([Curve("E1", "exceptional", 1)], [[1]], [0])
    with pytest.raises(LatticeError):
        fundamental_cycle(bad)


# -- linear equivalence and torsion ------------------------------------------------------


def test_linear_equivalence_roundtrip_randomized():
    rng = random.Random(31)
    for t in (CanonicalType("BD", n=3), CanonicalType("Anz", n=2, e=3)):
        lat = resolution_ram(t).lattice
        idxs = list(lat.contracted)
        for _ in range(10):
            target = [0] * len(lat.curves)
            for i in idxs:
                target[i] = rng.randint(-3, 3)
            d = DivisorClass(target)
            sol = linear_equivalence_solve(lat, d, idxs)
            assert sol == d  # negative-definite block: unique solution


def test_linear_equivalence_no_solution():
    lat = a_string(2)  # Gram determinant 3 on the contracted block
    d = lat.curve_class("F1")
    assert linear_equivalence_solve(lat, d, [0, 1]) is not None
    half = lat.divisor({"F1": Fraction(1, 2)})
    assert linear_equivalence_solve(lat, half, [0, 1]) is None


def test_torsion_order_definition():
    # torsion_order k is minimal: k*D solves, no smaller multiple does
    for t in (
        CanonicalType("A12", e=3),
        CanonicalType("BD", n=3),
        CanonicalType("Anz", n=2, e=4),
    ):
        lat = cover_lattice(t)
        for chk in torsion_checks(t, lat):
            k = torsion_order(lat, chk["divisor"])
            assert k == chk["expected"]
            assert linear_equivalence_solve(lat, k * chk["divisor"]) is not None
            for smaller in range(1, k):
                assert (
                    linear_equivalence_solve(lat, smaller * chk["divisor"]) is None
                )


def test_torsion_order_empty_support():
    lat = a_string(2)
    assert torsion_order(lat, lat.curve_class("F1"), []) == 1


# -- canonical class -----------------------------------------------------------------------


def test_canonical_check_zero_on_all_families():
    for t in ALL_TYPES:
        res = resolution_ram(t)
        values = canonical_check(res)
        assert values == [0] * len(values)


def test_canonical_check_detects_unramified_config():
    # stripping the ramification data breaks K-triviality on curves
    t = CanonicalType("BD", n=2)
    res = resolution_ram(t)

    class Bare:
        lattice = res.lattice
        ram_indices = {}

    values = canonical_check(Bare())
    assert any(v != 0 for v in values)


# -- DOT output -----------------------------------------------------------------------------


def test_to_dot_mentions_every_curve():
    t = CanonicalType("L", n=2)
    res = resolution_ram(t)
    out = to_dot(res.lattice, res.ram_indices)
    assert out.startswith("graph")
    for c in res.lattice.curves:
        assert c.label in out
