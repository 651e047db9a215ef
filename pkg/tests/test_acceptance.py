"""Release acceptance gate.

One test per release criterion.  Every test prints exactly one
``CRITERION k: PASS/FAIL`` line directly to the terminal (bypassing pytest
capture) and then asserts, so a plain ``pytest -v`` run shows the verdict for
each criterion even when everything is green.  All comparisons are exact —
integers, rationals, and cyclotomic numbers — with zero tolerance; the only
stated budgets are wall-clock limits, which are asserted too.
"""
from __future__ import annotations

import itertools
import math
import random
import time

from canord.cyclotomic import one, root_of_unity, zero
from canord.families import (
    ade_group,
    cover_lattice,
    expected_count,
    group_side,
    lattice_relations,
    matrix_group,
    torsion_checks,
)
from canord.lattice import (
    DivisorClass,
    canonical_check,
    dynkin,
    fundamental_cycle,
    intersect,
    linear_equivalence_solve,
    torsion_order,
)
from canord.matgroup import Mat2, fixed_line_ramification, generate_group
from canord.mckay import character_table, identify_affine, mckay_quiver, verify
from canord.ramdata import (
    CanonicalType,
    ResolutionPoint,
    ResolutionRamData,
    canonical_ram,
    resolution_is_terminal,
    resolution_ram,
)
from canord.twisted import (
    AlgebraElement,
    CentralExtension,
    block_count,
    build_extension,
    idempotent_epsilon,
)
from canord.cycliccover import cover_structure_check

ADE_CATALOG = (
    [("A", r) for r in range(1, 7)]
    + [("D", r) for r in range(4, 7)]
    + [("E", r) for r in (6, 7, 8)]
)


def sweep_types() -> list[CanonicalType]:
    """The full acceptance sweep: every family at its stated parameter range."""
    ts = [CanonicalType("A12", e=e) for e in range(1, 5)]
    ts += [CanonicalType(f, n=n) for f in ("BL", "B", "L", "DL") for n in range(1, 7)]
    ts += [CanonicalType("BD", n=n) for n in range(2, 7)]
    ts += [CanonicalType("Anz", n=n, e=e) for n in range(1, 5) for e in range(2, 5)]
    ts += [CanonicalType("ADE", letter=l, rank=r) for l, r in ADE_CATALOG]
    return ts


def emit(capsys, k: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"CRITERION {k}: {'PASS' if ok else 'FAIL'} — {detail}", flush=True)


# -------------------------------------------------------------------------
# 1. module counts agree both ways and equal the closed forms


def test_criterion_1_counts_both_ways(capsys):
    types = sweep_types()
    t0 = time.perf_counter()
    failures = []
    for t in types:
        report = verify(t)
        expected = expected_count(t)
        if report.resolution_count.total != expected:
            failures.append(f"{t.label()} resolution {report.resolution_count.total}!={expected}")
        if t.family == "DL":
            if report.group_count is not None:
                failures.append(f"{t.label()} unexpectedly grew a group side")
        elif report.group_count != expected:
            failures.append(f"{t.label()} group {report.group_count}!={expected}")
        if not report.agree:
            failures.append(f"{t.label()} disagrees")
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 60.0
    emit(
        capsys,
        1,
        ok,
        f"{len(types)} types: both counts equal the closed forms exactly "
        f"({elapsed:.1f}s < 60s)" + (f"; failures: {failures[:3]}" if failures else ""),
    )
    assert not failures, failures
    assert elapsed < 60.0


# -------------------------------------------------------------------------
# 2. central idempotent identities for every slice


def test_criterion_2_idempotent_identities(capsys):
    cases = 0
    failures = []
    for e in range(1, 7):
        zt = root_of_unity(2 * e)
        zs = root_of_unity(e) if e > 1 else one()
        tmat, smat = Mat2.diagonal(zt, one()), Mat2.diagonal(one(), zs)
        g = generate_group([tmat, smat])
        ext = build_extension(g.table(), 2, e, pair=(g.index_of(tmat), g.index_of(smat)))
        rho = AlgebraElement(ext, {ext.rho(1): one()})
        for n in range(1, e + 1):
            if math.gcd(n, e) != 1:
                continue
            w = root_of_unity(e, n)
            eps = idempotent_epsilon(e, w, ext)
            cases += 1
            if not (eps * eps == eps):
                failures.append(f"e={e} n={n}: not idempotent")
            if not eps.is_central():
                failures.append(f"e={e} n={n}: not central")
            if not (rho * eps == eps * w):
                failures.append(f"e={e} n={n}: wrong eigenvalue")
    ok = not failures and cases == sum(
        1 for e in range(1, 7) for n in range(1, e + 1) if math.gcd(n, e) == 1
    )
    emit(
        capsys,
        2,
        ok,
        f"{cases} (e, primitive root) cases with e in 1..6: eps^2=eps, central, "
        "rho*eps = zeta^n*eps, all exact"
        + (f"; failures: {failures[:3]}" if failures else ""),
    )
    assert ok, failures


# -------------------------------------------------------------------------
# 3. fixed-line ramification profiles match the classification table


def test_criterion_3_ramification_profiles(capsys):
    types = sweep_types()
    failures = []
    for t in types:
        got = sorted(r["inertia_order"] for r in fixed_line_ramification(matrix_group(t)))
        want = sorted(e for _, e in canonical_ram(t).curves)
        if got != want:
            failures.append(f"{t.label()}: {got} != {want}")
    ok = not failures
    emit(
        capsys,
        3,
        ok,
        f"{len(types)} groups: fixed-line inertia multiset equals the base "
        "ramification indices" + (f"; failures: {failures[:3]}" if failures else ""),
    )
    assert ok, failures


# -------------------------------------------------------------------------
# 4. the canonical class of every generated resolution is numerically trivial


def test_criterion_4_canonical_triviality(capsys):
    types = sweep_types()
    curves = 0
    failures = []
    for t in types:
        for val in canonical_check(resolution_ram(t)):
            curves += 1
            if val != 0:
                failures.append(f"{t.label()}: K.E = {val}")
    ok = not failures
    emit(
        capsys,
        4,
        ok,
        f"K.E_i = 0 exactly on all {curves} exceptional curves across "
        f"{len(types)} resolutions" + (f"; failures: {failures[:3]}" if failures else ""),
    )
    assert ok, failures


# -------------------------------------------------------------------------
# 5. divisor-class relations and torsion orders on the cover lattices


def test_criterion_5_lattice_identities(capsys):
    types = sweep_types()
    t0 = time.perf_counter()
    relations = 0
    torsions = 0
    failures = []
    for t in types:
        lat = cover_lattice(t)
        for chk in lattice_relations(t):
            relations += 1
            sol = linear_equivalence_solve(lat, chk["divisor"], chk["support"])
            if sol is None or not (sol == chk["expected"]):
                failures.append(f"{t.label()} relation {chk['label']}")
        for chk in torsion_checks(t, lat):
            torsions += 1
            got = torsion_order(lat, chk["divisor"])
            if got != chk["expected"]:
                failures.append(
                    f"{t.label()} torsion {chk['label']}: {got} != {chk['expected']}"
                )
            if t.family in ("BD", "DL") and got != 2:
                failures.append(f"{t.label()} torsion should be 2")
            if t.family == "Anz" and got != t.e:
                failures.append(f"{t.label()} torsion should be e")
            if t.family == "A12" and (2 * t.e) % got != 0:
                failures.append(f"{t.label()} torsion {got} does not divide 2e")
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 5.0 and relations > 0 and torsions > 0
    emit(
        capsys,
        5,
        ok,
        f"{relations} linear equivalences solved and {torsions} torsion orders "
        f"confirmed exactly ({elapsed:.2f}s < 5s)"
        + (f"; failures: {failures[:3]}" if failures else ""),
    )
    assert ok, failures


# -------------------------------------------------------------------------
# 6. classical McKay layer for the SL2 subgroups


def test_criterion_6_classical_mckay(capsys):
    t0 = time.perf_counter()
    failures = []
    for letter, rank in ADE_CATALOG:
        g = ade_group(letter, rank)
        ct = character_table(g)
        if not ct.check_orthogonality():
            failures.append(f"{letter}{rank}: orthogonality")
        quiver = mckay_quiver(g)
        if identify_affine(quiver.adjacency) != (letter, rank):
            failures.append(f"{letter}{rank}: quiver not the matching affine diagram")
        if sum(d * d for d in quiver.dims) != len(g):
            failures.append(f"{letter}{rank}: sum of squared dims != |H|")
        r = len(quiver.dims)
        for i in range(r):
            if 2 * quiver.dims[i] != sum(
                quiver.adjacency[i][j] * quiver.dims[j] for j in range(r)
            ):
                failures.append(f"{letter}{rank}: degree identity at node {i}")
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 30.0
    emit(
        capsys,
        6,
        ok,
        f"{len(ADE_CATALOG)} SL2 subgroups: exact orthogonality, affine-diagram "
        f"match, sum d^2 = |H|, 2d = Ad ({elapsed:.1f}s < 30s)"
        + (f"; failures: {failures[:3]}" if failures else ""),
    )
    assert ok, failures


# -------------------------------------------------------------------------
# 7. truncated cyclic-cover structure checks


def test_criterion_7_cover_structure(capsys):
    failures = []
    runs = 0
    for e in range(1, 5):
        for n in range(1, 5):
            runs += 1
            rep = cover_structure_check(e, n, 12)
            if not rep.passed:
                bad = [name for name, ok, _ in rep.record if not ok]
                failures.append(f"e={e} n={n}: {bad}")
    ok = not failures
    emit(
        capsys,
        7,
        ok,
        f"{runs} (e, n) covers at degree cap 12: eigenspace generation, grading, "
        "and twisted associativity all hold"
        + (f"; failures: {failures[:3]}" if failures else ""),
    )
    assert ok, failures


# -------------------------------------------------------------------------
# 8. property suites: brute-force cycles, block counts, mutation rejection


def _brute_force_is_fundamental(lat, subset, z) -> bool:
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


def _mutations(types):
    for t in types:
        res = resolution_ram(t)
        for pt in res.points:
            ram = [i for i in pt.curves if res.e_of(i) > 1]
            if len(ram) != 2:
                continue
            for victim in ram:
                bad = dict(res.ram_indices)
                bad[victim] = max(res.e_of(i) for i in ram) + 1
                yield ResolutionRamData(res.lattice, bad, res.points, res.secondary)
    for t in types:
        res = resolution_ram(t)
        for triple in itertools.combinations(sorted(res.ram_indices), 3):
            pts = list(res.points) + [ResolutionPoint("p(bad)", triple)]
            yield ResolutionRamData(res.lattice, res.ram_indices, pts, res.secondary)


def test_criterion_8_property_suites(capsys):
    failures = []

    # (a) fundamental cycles vs exhaustive search on every small configuration
    cycles = 0
    lattices = [resolution_ram(t).lattice for t in sweep_types()]
    lattices += [dynkin(l, r) for l, r in ADE_CATALOG]
    for lat in lattices:
        subset = list(lat.contracted)
        if not subset or len(subset) > 8:
            continue
        z = fundamental_cycle(lat)
        cycles += 1
        if not all(intersect(lat, z, k) <= 0 for k in subset):
            failures.append("fundamental cycle not anti-nef")
        if not _brute_force_is_fundamental(lat, subset, z):
            failures.append("fundamental cycle not minimal vs brute force")

    # (b) untwisted block count equals the class count on random subgroups
    pool = [
        Mat2.diagonal(root_of_unity(8), root_of_unity(8, 7)),
        Mat2.diagonal(root_of_unity(6), one()),
        Mat2(zero(), one(), -one(), zero()),
        Mat2(zero(), one(), one(), zero()),
        Mat2.diagonal(-one(), one()),
    ]
    rng = random.Random(99)
    groups = 0
    for _ in range(20):
        g = generate_group(rng.sample(pool, rng.randint(1, 2)), cap=512)
        table = g.table()
        ext = CentralExtension(table, 1, [[0] * table.n for _ in range(table.n)])
        groups += 1
        if block_count(ext, AlgebraElement.unit(ext)) != len(table.conjugacy_classes()):
            failures.append(f"block count != class count on random subgroup #{groups}")

    # (c) the terminality checker accepts all generated resolutions and
    # rejects index perturbations and added triple points
    accepted = 0
    for t in sweep_types():
        ok, probs = resolution_is_terminal(resolution_ram(t))
        if ok and not probs:
            accepted += 1
        else:
            failures.append(f"{t.label()} generated resolution rejected")
    flagged = 0
    mutated = list(itertools.islice(_mutations(sweep_types()), 50))
    for res in mutated:
        ok, probs = resolution_is_terminal(res)
        if not ok and probs:
            flagged += 1
    if len(mutated) != 50 or flagged != len(mutated):
        failures.append(f"only {flagged}/{len(mutated)} mutations flagged")

    ok = not failures
    emit(
        capsys,
        8,
        ok,
        f"{cycles} fundamental cycles verified exhaustively; {groups} random "
        f"subgroups match class counts; {accepted} resolutions accepted and "
        f"{flagged}/50 mutations flagged"
        + (f"; failures: {failures[:3]}" if failures else ""),
    )
    assert ok, failures
