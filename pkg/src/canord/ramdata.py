"""Ramification data for canonical orders.

The family tables live here: base ramification data of each canonical type
(curves, primary indices e_C, secondary indices e_p at the closed point),
the per-family minimal-resolution configurations, the pointwise terminality
test, the exceptional-curve type classifier, and the skew-group-ring
constructibility test.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .errors import CurveTypeError, ParameterError
from .lattice import (
    EXCEPTIONAL,
    TRANSVERSE,
    Curve,
    IntersectionLattice,
    dynkin,
)

FAMILIES = ("A12", "BL", "B", "L", "DL", "BD", "Anz", "ADE")
ADE_LETTERS = ("A", "D", "E")


class CanonicalType:
    """A family tag plus its parameters.

    Validity ranges: A12 needs e >= 1; BL, B, L, DL need n >= 1; BD needs
    n >= 2 (three distinct ramification curves); Anz needs n >= 1 and e >= 2;
    ADE needs a Dynkin letter and rank (A >= 1, D >= 4, E in {6, 7, 8}).
    """

    __slots__ = ("family", "n", "e", "letter", "rank")

    def __init__(
        self,
        family: str,
        n: int | None = None,
        e: int | None = None,
        letter: str | None = None,
        rank: int | None = None,
    ):
        if family not in FAMILIES:
            raise ParameterError(f"unknown family {family!r}")
        self.family = family
        self.n = n
        self.e = e
        self.letter = letter
        self.rank = rank
        if family == "A12":
            if e is None or e < 1:
                raise ParameterError("A12 needs e >= 1")
        elif family in ("BL", "B", "L", "DL"):
            if n is None or n < 1:
                raise ParameterError(f"{family} needs n >= 1")
        elif family == "BD":
            if n is None or n < 2:
                raise ParameterError("BD needs n >= 2")
        elif family == "Anz":
            if n is None or n < 1:
                raise ParameterError("Anz needs n >= 1")
            if e is None or e < 2:
                raise ParameterError("Anz needs e >= 2")
        else:  # ADE
            if letter not in ADE_LETTERS or rank is None:
                raise ParameterError("ADE needs a letter in A/D/E and a rank")
            if letter == "A" and rank < 1:
                raise ParameterError("A-type rank must be >= 1")
            if letter == "D" and rank < 4:
                raise ParameterError("D-type rank must be >= 4")
            if letter == "E" and rank not in (6, 7, 8):
                raise ParameterError("E-type rank must be 6, 7, or 8")

    def params(self) -> dict:
        if self.family == "A12":
            return {"e": self.e}
        if self.family in ("BL", "B", "L", "DL", "BD"):
            return {"n": self.n}
        if self.family == "Anz":
            return {"n": self.n, "e": self.e}
        return {"letter": self.letter, "rank": self.rank}

    def label(self) -> str:
        if self.family == "ADE":
            return f"{self.letter}{self.rank}"
        inner = ",".join(f"{k}={v}" for k, v in self.params().items())
        return f"{self.family}({inner})"

    def sort_key(self) -> tuple:
        return (
            FAMILIES.index(self.family),
            self.n or 0,
            self.e or 0,
            ADE_LETTERS.index(self.letter) if self.letter else 0,
            self.rank or 0,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CanonicalType):
            return NotImplemented
        return (self.family, self.params()) == (other.family, other.params())

    def __hash__(self) -> int:
        return hash((self.family, tuple(sorted(self.params().items()))))

    def __repr__(self) -> str:
        return f"CanonicalType({self.label()!r})"


BASE_POINT = "o"


class RamData:
    """Ramification data at a closed point: curves with primary indices e_C,
    pairwise intersections, and secondary indices e_p per (curve, point)."""

    __slots__ = ("curves", "intersections", "secondary")

    def __init__(
        self,
        curves: Sequence[tuple[str, int]],
        intersections: Sequence[tuple[str, str, str, int]],
        secondary: Mapping[tuple[str, str], int],
    ):
        self.curves = tuple((str(l), int(e)) for l, e in curves)
        index = {l: e for l, e in self.curves}
        if len(index) != len(self.curves):
            raise ParameterError("curve labels are not unique")
        for _, e in self.curves:
            if e < 1:
                raise ParameterError("ramification index must be >= 1")
        self.intersections = tuple(
            (str(a), str(b), str(p), int(m)) for a, b, p, m in intersections
        )
        for a, b, _, m in self.intersections:
            if a not in index or b not in index or m < 1:
                raise ParameterError("intersection references an unknown curve")
        self.secondary = {
            (str(c), str(p)): int(ep) for (c, p), ep in secondary.items()
        }
        for (c, _), ep in self.secondary.items():
            if c not in index:
                raise ParameterError(f"secondary entry references unknown curve {c!r}")
            if ep < 1 or index[c] % ep != 0:
                raise ParameterError(
                    f"secondary index {ep} does not divide e_C = {index[c]} on {c!r}"
                )

    def e_c(self, label: str) -> int:
        for l, e in self.curves:
            if l == label:
                return e
        raise ParameterError(f"no curve labeled {label!r}")


class ResolutionPoint:
    """A named intersection point on a resolution: the curves through it and
    the pairwise contact multiplicity at the point."""

    __slots__ = ("label", "curves", "mult")

    def __init__(self, label: str, curves: Sequence[int], mult: int = 1):
        self.label = label
        self.curves = tuple(sorted(curves))
        self.mult = mult


class ResolutionRamData:
    """A resolution configuration: the intersection lattice, the ramification
    indices of its curves, the named intersection points, and any recorded
    secondary indices (keyed by (curve label, point label))."""

    __slots__ = ("lattice", "ram_indices", "points", "secondary")

    def __init__(
        self,
        lattice: IntersectionLattice,
        ram_indices: Mapping[int, int],
        points: Sequence[ResolutionPoint],
        secondary: Mapping[tuple[str, str], int] | None = None,
    ):
        self.lattice = lattice
        self.ram_indices = {int(i): int(e) for i, e in ram_indices.items() if e > 1}
        for i, e in self.ram_indices.items():
            if not 0 <= i < len(lattice.curves):
                raise ParameterError(f"ramification index for unknown curve {i}")
            if e < 1:
                raise ParameterError("ramification index must be >= 1")
        self.points = tuple(points)
        self.secondary = dict(secondary or {})

    def e_of(self, index: int) -> int:
        return self.ram_indices.get(index, 1)

    def point_pair_mult(self) -> dict[tuple[int, int], int]:
        """Total pairwise intersection numbers implied by the point data."""
        out: dict[tuple[int, int], int] = {}
        for pt in self.points:
            for x in range(len(pt.curves)):
                for y in range(x + 1, len(pt.curves)):
                    key = (pt.curves[x], pt.curves[y])
                    out[key] = out.get(key, 0) + pt.mult
        return out


def _point_label(labels: Iterable[str]) -> str:
    return "p(" + ",".join(sorted(labels)) + ")"


# ---------------------------------------------------------------------------
# base ramification tables


def canonical_ram(t: CanonicalType) -> RamData:
    """The base ramification data of a canonical type at its closed point."""
    f = t.family
    if f == "A12":
        e = t.e
        return RamData(
            [("u=0", 2 * e), ("v=0", 2 * e)],
            [("u=0", "v=0", BASE_POINT, 1)],
            {("u=0", BASE_POINT): e, ("v=0", BASE_POINT): e},
        )
    if f == "BL":
        c = f"v^2=u^{2 * t.n + 1}"
        return RamData([(c, 2)], [], {(c, BASE_POINT): 1})
    if f == "B":
        u, v = f"v=u^{t.n}", f"v=-u^{t.n}"
        return RamData(
            [(u, 2), (v, 2)],
            [(u, v, BASE_POINT, t.n)],
            {(u, BASE_POINT): 1, (v, BASE_POINT): 1},
        )
    if f == "L":
        u, v = f"v=u^{t.n + 1}", f"v=-u^{t.n + 1}"
        return RamData(
            [(u, 2), (v, 2)],
            [(u, v, BASE_POINT, t.n + 1)],
            {(u, BASE_POINT): 2, (v, BASE_POINT): 2},
        )
    if f == "DL":
        u, v = "u=0", f"v^2=u^{2 * t.n - 1}"
        return RamData(
            [(u, 2), (v, 2)],
            [(u, v, BASE_POINT, 2)],
            {(u, BASE_POINT): 2, (v, BASE_POINT): 2},
        )
    if f == "BD":
        a, b, c = "u=0", f"v=u^{t.n - 1}", f"v=-u^{t.n - 1}"
        return RamData(
            [(a, 2), (b, 2), (c, 2)],
            [
                (a, b, BASE_POINT, 1),
                (a, c, BASE_POINT, 1),
                (b, c, BASE_POINT, t.n - 1),
            ],
            {(a, BASE_POINT): 2, (b, BASE_POINT): 2, (c, BASE_POINT): 1},
        )
    if f == "Anz":
        u, v = "u=w=0", "v=w=0"
        return RamData(
            [(u, t.e), (v, t.e)],
            [(u, v, BASE_POINT, 1)],
            {(u, BASE_POINT): t.e, (v, BASE_POINT): t.e},
        )
    return RamData([], [], {})  # ADE: unramified


# ---------------------------------------------------------------------------
# minimal-resolution configurations


def _resolution_lattice(
    self_ints: Sequence[int],
    chain: bool,
    transverse: Sequence[tuple[str, list[tuple[int, int]]]],
    extra_pairs: Mapping[tuple[str, str], int] | None = None,
) -> IntersectionLattice:
    """Assemble a resolution lattice: a chain of exceptional curves E1..Em
    plus named transverse curves with explicit (exceptional index, mult)
    contacts, plus optional transverse-transverse crossings."""
    m = len(self_ints)
    curves = [Curve(f"E{i + 1}", EXCEPTIONAL, s) for i, s in enumerate(self_ints)]
    curves += [Curve(label, TRANSVERSE) for label, _ in transverse]
    n = len(curves)
    pairing = [[0] * n for _ in range(n)]
    for i, s in enumerate(self_ints):
        pairing[i][i] = s
    if chain:
        for i in range(m - 1):
            pairing[i][i + 1] = pairing[i + 1][i] = 1
    for k, (_, contacts) in enumerate(transverse):
        for exc, mult in contacts:
            pairing[m + k][exc] += mult
            pairing[exc][m + k] += mult
    labels = {c.label: i for i, c in enumerate(curves)}
    for (a, b), mult in (extra_pairs or {}).items():
        i, j = labels[a], labels[b]
        pairing[i][j] += mult
        pairing[j][i] += mult
    return IntersectionLattice(curves, pairing, range(m))


def resolution_ram(t: CanonicalType) -> ResolutionRamData:
    """The minimal-resolution ramification configuration of a canonical type:
    exceptional curves with self-intersections, strict transforms of the base
    ramification curves, intersection points, and ramification indices.

    No secondary indices are recorded on resolutions; they are table data for
    the base ramification only.
    """
    f = t.family
    if f == "A12":
        e = t.e
        lat = _resolution_lattice([-1], True, [("u=0", [(0, 1)]), ("v=0", [(0, 1)])])
        ram = {1: 2 * e, 2: 2 * e}
        if e > 1:
            ram[0] = e
        points = [
            ResolutionPoint(_point_label(["E1", "u=0"]), [0, 1]),
            ResolutionPoint(_point_label(["E1", "v=0"]), [0, 2]),
        ]
        return ResolutionRamData(lat, ram, points)
    if f == "BL":
        n = t.n
        c = f"v^2=u^{2 * n + 1}"
        lat = _resolution_lattice(
            [-2] * (n - 1) + [-1], True, [(c, [(n - 1, 2)])]
        )
        points = _chain_points(n) + [
            ResolutionPoint(_point_label([f"E{n}", c]), [n - 1, n], mult=2)
        ]
        return ResolutionRamData(lat, {n: 2}, points)
    if f == "B":
        n = t.n
        u, v = f"v=u^{n}", f"v=-u^{n}"
        lat = _resolution_lattice(
            [-2] * (n - 1) + [-1], True,
            [(u, [(n - 1, 1)]), (v, [(n - 1, 1)])],
        )
        points = _chain_points(n) + [
            ResolutionPoint(_point_label([f"E{n}", u]), [n - 1, n]),
            ResolutionPoint(_point_label([f"E{n}", v]), [n - 1, n + 1]),
        ]
        return ResolutionRamData(lat, {n: 2, n + 1: 2}, points)
    if f == "L":
        n = t.n
        u, v = f"v=u^{n + 1}", f"v=-u^{n + 1}"
        lat = _resolution_lattice(
            [-2] * (n - 1) + [-1], True,
            [(u, [(n - 1, 1)]), (v, [(n - 1, 1)])],
            extra_pairs={(u, v): 1},
        )
        points = _chain_points(n) + [
            ResolutionPoint(_point_label([f"E{n}", u, v]), [n - 1, n, n + 1])
        ]
        return ResolutionRamData(lat, {n: 2, n + 1: 2}, points)
    if f == "DL":
        n = t.n
        u, v = "u=0", f"v^2=u^{2 * n - 1}"
        if n == 1:
            lat = _resolution_lattice(
                [-1], True, [(u, [(0, 1)]), (v, [(0, 1)])],
                extra_pairs={(u, v): 1},
            )
            points = [ResolutionPoint(_point_label(["E1", u, v]), [0, 1, 2])]
            return ResolutionRamData(lat, {1: 2, 2: 2}, points)
        lat = _resolution_lattice(
            [-2] * (n - 1) + [-1], True,
            [(u, [(0, 1)]), (v, [(n - 2, 1), (n - 1, 1)])],
        )
        ram = {i: 2 for i in range(n - 1)}
        ram[n] = 2  # u=0
        ram[n + 1] = 2  # the curve through the E_{n-1} and E_n crossing
        points = _chain_points(n, skip=n - 2) + [
            ResolutionPoint(_point_label(["E1", u]), [0, n]),
            ResolutionPoint(
                _point_label([f"E{n - 1}", f"E{n}", v]), [n - 2, n - 1, n + 1]
            ),
        ]
        return ResolutionRamData(lat, ram, points)
    if f == "BD":
        n = t.n
        a, b, c = "u=0", f"v=u^{n - 1}", f"v=-u^{n - 1}"
        lat = _resolution_lattice(
            [-2] * (n - 1) + [-1], True,
            [(a, [(0, 1)]), (b, [(n - 2, 1)]), (c, [(n - 1, 1)])],
        )
        ram = {i: 2 for i in range(n - 1)}
        ram.update({n: 2, n + 1: 2, n + 2: 2})
        points = _chain_points(n) + [
            ResolutionPoint(_point_label(["E1", a]), [0, n]),
            ResolutionPoint(_point_label([f"E{n - 1}", b]), [n - 2, n + 1]),
            ResolutionPoint(_point_label([f"E{n}", c]), [n - 1, n + 2]),
        ]
        return ResolutionRamData(lat, ram, points)
    if f == "Anz":
        n, e = t.n, t.e
        u, v = "u=w=0", "v=w=0"
        lat = _resolution_lattice(
            [-2] * n, True, [(u, [(0, 1)]), (v, [(n - 1, 1)])]
        )
        ram = {i: e for i in range(n)}
        ram.update({n: e, n + 1: e})
        points = _chain_points(n) + [
            ResolutionPoint(_point_label(["E1", u]), [0, n]),
            ResolutionPoint(_point_label([f"E{n}", v]), [n - 1, n + 1]),
        ]
        return ResolutionRamData(lat, ram, points)
    # ADE: the Kleinian resolution, no ramification, exceptional curves only
    dyn = dynkin(t.letter, t.rank)
    exc = dyn.exceptional_indices()
    curves = [dyn.curves[i] for i in exc]
    pairing = [[dyn.pairing[i][j] for j in exc] for i in exc]
    lat = IntersectionLattice(curves, pairing, range(len(exc)))
    points = [
        ResolutionPoint(
            _point_label([curves[i].label, curves[j].label]), [i, j]
        )
        for i in range(len(exc))
        for j in range(i + 1, len(exc))
        if pairing[i][j] != 0
    ]
    return ResolutionRamData(lat, {}, points)


def _chain_points(m: int, skip: int | None = None) -> list[ResolutionPoint]:
    """Intersection points E_i/E_{i+1} along a chain, optionally skipping one
    slot (used when that crossing is recorded as a bigger point)."""
    return [
        ResolutionPoint(_point_label([f"E{i + 1}", f"E{i + 2}"]), [i, i + 1])
        for i in range(m - 1)
        if i != skip
    ]


# ---------------------------------------------------------------------------
# terminality


def is_terminal(
    e_values: Sequence[int],
    secondary: Sequence[int] | None = None,
    mult: int = 1,
) -> bool:
    """Pointwise terminality test on the ramification curves through one
    point.

    With two ramification curves: they must cross normally (multiplicity 1),
    the smaller index must divide the larger, and any recorded secondary
    indices at the point must equal the smaller index.  With at most one
    curve, any recorded secondary data must be trivial (secondary
    ramification happens only where ramification curves intersect).
    """
    es = [e for e in e_values if e > 1]
    if len(es) > 2:
        return False
    if len(es) <= 1:
        return secondary is None or all(s == 1 for s in secondary)
    e1, e2 = sorted(es)
    if mult != 1 or e2 % e1 != 0:
        return False
    if secondary is not None and any(s != e1 for s in secondary):
        return False
    return True


def resolution_is_terminal(res: ResolutionRamData) -> tuple[bool, list[str]]:
    """Check every recorded point of a resolution configuration, plus the
    placement of all secondary entries.  Returns (ok, failure messages)."""
    failures: list[str] = []
    label_of = {i: c.label for i, c in enumerate(res.lattice.curves)}
    point_index = {pt.label: pt for pt in res.points}
    for pt in res.points:
        ram_curves = [i for i in pt.curves if res.e_of(i) > 1]
        es = [res.e_of(i) for i in ram_curves]
        sec = [
            res.secondary[(label_of[i], pt.label)]
            for i in ram_curves
            if (label_of[i], pt.label) in res.secondary
        ]
        if not is_terminal(es, sec if sec else None, pt.mult):
            failures.append(f"point {pt.label}: indices {es} (mult {pt.mult})")
    for (curve, point), ep in res.secondary.items():
        pt = point_index.get(point)
        if pt is None:
            failures.append(f"secondary entry at unknown point {point}")
            continue
        idx = next(
            (i for i in pt.curves if label_of[i] == curve), None
        )
        if idx is None:
            failures.append(f"secondary entry for {curve} away from {point}")
        elif ep > 1 and sum(1 for i in pt.curves if res.e_of(i) > 1) < 2:
            failures.append(
                f"nontrivial secondary at {point} without an intersection of "
                "ramification curves"
            )
    return (not failures, failures)


# ---------------------------------------------------------------------------
# exceptional-curve classification


class CurveType:
    """The type of an exceptional curve: '0', 'I' (a, b), 'C' (n) or 'X' (e)."""

    __slots__ = ("tag", "params")

    def __init__(self, tag: str, *params: int):
        if tag not in ("0", "I", "C", "X"):
            raise CurveTypeError(f"unknown curve-type tag {tag!r}")
        if any(p < 1 for p in params):
            raise CurveTypeError("curve-type parameters must be positive")
        self.tag = tag
        self.params = params

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CurveType):
            return NotImplemented
        return (self.tag, self.params) == (other.tag, other.params)

    def __hash__(self) -> int:
        return hash((self.tag, self.params))

    def __str__(self) -> str:
        if self.tag == "0":
            return "0"
        return f"{self.tag}({','.join(str(p) for p in self.params)})"

    def __repr__(self) -> str:
        return f"CurveType({self!s})"


def classify_exceptional(res: ResolutionRamData, index: int) -> CurveType:
    """Classify how the ramification curves meet one exceptional curve.

    '0': no ramification contact and the curve itself unramified.
    'I(a, b)': two disjoint ramification curves of equal index a*b each meet
        the curve once; the curve itself has index b.
    'C(n)': the curve is unramified and one ramification curve of index n
        meets it with total multiplicity 2.
    'X(e)': the curve is unramified and two ramification curves of index e
        meet it once each at a single shared point, crossing each other there.
    """
    lat = res.lattice
    if lat.curves[index].kind != EXCEPTIONAL:
        raise CurveTypeError(f"curve {lat.curves[index].label!r} is not exceptional")
    e_self = res.e_of(index)
    contacts = [
        (j, lat.pairing[index][j])
        for j in range(len(lat.curves))
        if j != index and lat.pairing[index][j] != 0 and res.e_of(j) > 1
    ]
    if not contacts:
        if e_self == 1:
            return CurveType("0")
        raise CurveTypeError(
            f"ramified curve {lat.curves[index].label!r} meets no other "
            "ramification curve"
        )
    if len(contacts) == 1:
        j, mult = contacts[0]
        if e_self == 1 and mult == 2:
            return CurveType("C", res.e_of(j))
        raise CurveTypeError(
            f"single ramification contact on {lat.curves[index].label!r} "
            f"with multiplicity {mult} fits no type"
        )
    if len(contacts) == 2:
        (j1, m1), (j2, m2) = contacts
        e1, e2 = res.e_of(j1), res.e_of(j2)
        if m1 == m2 == 1 and e1 == e2:
            if lat.pairing[j1][j2] == 0:
                if e1 % e_self == 0:
                    return CurveType("I", e1 // e_self, e_self)
            elif e_self == 1 and _share_point(res, index, j1, j2):
                return CurveType("X", e1)
    raise CurveTypeError(
        f"configuration at {lat.curves[index].label!r} fits no curve type"
    )


def _share_point(res: ResolutionRamData, *indices: int) -> bool:
    want = set(indices)
    return any(want <= set(pt.curves) for pt in res.points)


def skew_constructible(
    res: ResolutionRamData, n: int, e: int
) -> tuple[bool, list[str]]:
    """Whether every exceptional curve is compatible with a skew-group-ring
    construction at parameters (n, e): each curve must be of type 0, of type
    I(n, e), of type C(2) with (n, e) = (2, 1), or of type I(e, 1) with n = 1.
    Returns (ok, per-curve failure reasons)."""
    reasons: list[str] = []
    for i in res.lattice.exceptional_indices():
        ct = classify_exceptional(res, i)
        ok = (
            ct.tag == "0"
            or (ct.tag == "I" and ct.params == (n, e))
            or (ct.tag == "C" and ct.params == (2,) and (n, e) == (2, 1))
            or (ct.tag == "I" and ct.params == (e, 1) and n == 1)
        )
        if not ok:
            reasons.append(
                f"{res.lattice.curves[i].label}: type {ct} fails every clause "
                f"at (n, e) = ({n}, {e})"
            )
    return (not reasons, reasons)


# ---------------------------------------------------------------------------
# JSON serialization


def ram_to_json(t: CanonicalType, ram: RamData) -> dict:
    """Stable-schema dictionary for base ramification data."""
    return {
        "type": t.family,
        "params": t.params(),
        "curves": [{"label": l, "eC": e} for l, e in ram.curves],
        "intersections": [
            {"a": a, "b": b, "point": p, "mult": m}
            for a, b, p, m in ram.intersections
        ],
        "secondary": [
            {"curve": c, "point": p, "ep": ep}
            for (c, p), ep in sorted(ram.secondary.items())
        ],
    }


def resolution_to_json(t: CanonicalType, res: ResolutionRamData) -> dict:
    """Stable-schema dictionary for a resolution configuration."""
    lat = res.lattice
    inters = []
    for pt in res.points:
        for x in range(len(pt.curves)):
            for y in range(x + 1, len(pt.curves)):
                inters.append(
                    {
                        "a": lat.curves[pt.curves[x]].label,
                        "b": lat.curves[pt.curves[y]].label,
                        "point": pt.label,
                        "mult": pt.mult,
                    }
                )
    return {
        "type": t.family,
        "params": t.params(),
        "curves": [
            {"label": c.label, "eC": res.e_of(i)} for i, c in enumerate(lat.curves)
        ],
        "intersections": inters,
        "secondary": [
            {"curve": c, "point": p, "ep": ep}
            for (c, p), ep in sorted(res.secondary.items())
        ],
    }
