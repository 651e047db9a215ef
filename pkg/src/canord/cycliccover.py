"""Truncated weight decomposition of a two-variable polynomial ring under a
diagonal cyclic action, with structural checks of the twisted cover algebra.

Monomials ``s^a t^b`` up to total degree ``d`` are sorted into weight classes
``(a - b) mod e``; the class ``i`` is an eigenspace of the diagonal action
``s -> zeta^n s``, ``t -> zeta^-n t`` with eigenvalue ``zeta^(n*i)``.  The
checks certify, degree by degree, the algebra structure that makes the
weight-one piece a generator: the weight-zero piece is exactly the monomial
span of ``s^e``, ``st``, ``t^e``; the weight-one piece is generated over it
by ``s`` and ``t^(e-1)``; products respect the grading; ``e``-fold products
of the generators fall back into the invariants; and the twisted product
(by the algebra automorphism fixing ``t`` and scaling ``s``) is associative
on generator triples with exact cyclotomic scalars.
"""
from __future__ import annotations

from itertools import product as iter_product

from .cyclotomic import CycloNumber, root_of_unity, zero
from .errors import ParameterError, TruncationError

__all__ = [
    "TruncatedEigenModule",
    "eigenspace_decompose",
    "invariant_monomials",
    "CoverStructureReport",
    "cover_structure_check",
]

Monomial = tuple[int, int]


def _all_monomials(d: int) -> list[Monomial]:
    return [(a, b) for total in range(d + 1) for a in range(total + 1) for b in [total - a]]


class TruncatedEigenModule:
    """Weight decomposition of the monomials of degree <= d."""

    def __init__(self, e: int, n: int, d: int, buckets: list[set[Monomial]]):
        self.e = e
        self.n = n
        self.d = d
        self.buckets = buckets

    def bucket_of(self, m: Monomial) -> int:
        return (m[0] - m[1]) % self.e

    def monomials(self, i: int) -> set[Monomial]:
        return self.buckets[i % self.e]

    def eigenvalue(self, i: int) -> CycloNumber:
        """Eigenvalue of the diagonal action on weight class i."""
        return root_of_unity(self.e, (self.n * i) % self.e)

    def all_monomials(self) -> list[Monomial]:
        return _all_monomials(self.d)


def eigenspace_decompose(e: int, n: int, d: int) -> TruncatedEigenModule:
    """Sort all monomials of degree <= d into weight classes mod e.

    Requires d >= 2e so that the generation statements below are meaningful
    within the truncation window; raises :class:`TruncationError` otherwise.
    """
    if e < 1:
        raise ParameterError("e must be a positive integer")
    if n < 1:
        raise ParameterError("n must be a positive integer")
    if d < 2 * e:
        raise TruncationError(f"degree window d={d} is too small; need d >= {2 * e}")
    buckets: list[set[Monomial]] = [set() for _ in range(e)]
    for a, b in _all_monomials(d):
        buckets[(a - b) % e].add((a, b))
    return TruncatedEigenModule(e, n, d, buckets)


def invariant_monomials(e: int, d: int) -> set[Monomial]:
    """All monomials of degree <= d expressible as products of s^e, st, t^e,
    computed by closure rather than by weight."""
    gens = [(e, 0), (1, 1), (0, e)]
    seen = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        a, b = frontier.pop()
        for ga, gb in gens:
            m = (a + ga, b + gb)
            if m[0] + m[1] <= d and m not in seen:
                seen.add(m)
                frontier.append(m)
    return seen


def _twisted_multiply(
    x: dict[tuple[int, int, int], CycloNumber],
    y: dict[tuple[int, int, int], CycloNumber],
    e: int,
    n: int,
    d: int,
) -> dict[tuple[int, int, int], CycloNumber]:
    """Product in the twisted algebra: (m1 u^i)(m2 u^j) = sigma^i(m2) m1 m2 u^(i+j)
    where u is the twisting symbol and sigma scales s by a primitive e-th root."""
    out: dict[tuple[int, int, int], CycloNumber] = {}
    for (a1, b1, i), c1 in x.items():
        for (a2, b2, j), c2 in y.items():
            a, b = a1 + a2, b1 + b2
            if a + b > d:
                continue  # truncated away; degree only grows, so this is consistent
            scalar = root_of_unity(e, (n * i * a2) % e)
            key = (a, b, (i + j) % e)
            term = c1 * c2 * scalar
            prev = out.get(key)
            out[key] = term if prev is None else prev + term
    return {k: v for k, v in out.items() if not v.is_zero()}


class CoverStructureReport:
    """Named pass/fail results with witnesses for the failures."""

    def __init__(self, e: int, n: int, d: int):
        self.e = e
        self.n = n
        self.d = d
        self.checks: dict[str, bool] = {}
        self.witnesses: dict[str, list] = {}

    def record(self, name: str, ok: bool, witnesses: list | None = None):
        self.checks[name] = ok
        if witnesses:
            self.witnesses[name] = witnesses

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def __repr__(self) -> str:
        state = "ok" if self.passed else "FAILED"
        return f"CoverStructureReport(e={self.e}, n={self.n}, d={self.d}, {state})"


def cover_structure_check(e: int, n: int, d: int) -> CoverStructureReport:
    """Certify the multiplicative structure of the truncated weight
    decomposition; see the module docstring for the list of checks."""
    module = eigenspace_decompose(e, n, d)
    if e * (e - 1) > d:
        raise TruncationError(
            f"cannot certify e-fold products: need d >= {e * (e - 1)}"
        )
    report = CoverStructureReport(e, n, d)

    # the weight classes partition the monomials
    universe = set(_all_monomials(d))
    seen: set[Monomial] = set()
    overlap = []
    for i in range(e):
        overlap.extend(sorted(module.buckets[i] & seen))
        seen |= module.buckets[i]
    report.record("partition", not overlap and seen == universe, overlap)

    # weight zero = monomial closure of {s^e, st, t^e}
    closure = invariant_monomials(e, d)
    diff = sorted(module.buckets[0] ^ closure)
    report.record("invariants-match", not diff, diff)

    # weight one is generated over the invariants by s and t^(e-1),
    # certified up to degree d - e
    gens = [(1, 0), (0, e - 1)]
    generated = set()
    for ga, gb in gens:
        for ia, ib in closure:
            m = (ga + ia, gb + ib)
            if m[0] + m[1] <= d:
                generated.add(m)
    missing = sorted(
        m
        for m in module.buckets[1 % e]
        if m[0] + m[1] <= d - e and m not in generated
    )
    report.record("weight-one-generated", not missing, missing)

    # multiplication respects the grading
    bad_products = []
    monos = _all_monomials(d)
    for a1, b1 in monos:
        for a2, b2 in monos:
            if a1 + b1 + a2 + b2 > d:
                continue
            lhs = module.bucket_of((a1 + a2, b1 + b2))
            rhs = (module.bucket_of((a1, b1)) + module.bucket_of((a2, b2))) % e
            if lhs != rhs:
                bad_products.append(((a1, b1), (a2, b2)))
    report.record("grading-multiplicative", not bad_products, bad_products)

    # e-fold products of the generators are invariant monomials
    escaped = []
    for combo in iter_product(gens, repeat=e):
        total = (sum(g[0] for g in combo), sum(g[1] for g in combo))
        if total[0] + total[1] > d:
            raise TruncationError(
                f"generator product {total} exceeds the degree window"
            )
        if total not in closure:
            escaped.append((combo, total))
    report.record("power-to-invariants", not escaped, escaped)

    # the diagonal action maps each monomial to a scalar multiple of itself,
    # so it preserves every weight class; verify the scalar is the recorded
    # eigenvalue
    bad_eigen = []
    for i in range(e):
        expected = module.eigenvalue(i)
        for a, b in module.buckets[i]:
            scalar = root_of_unity(e, (n * (a - b)) % e)
            if not (scalar - expected).is_zero():
                bad_eigen.append((i, (a, b)))
    report.record("action-eigenvalues", not bad_eigen, bad_eigen)

    # twisted associativity on generator triples
    if 3 * max(1, e - 1) > d:
        raise TruncationError(
            f"cannot certify associativity: need d >= {3 * max(1, e - 1)}"
        )
    one = root_of_unity(1)
    algebra_gens = [
        {(1, 0, 1 % e): one},
        {(0, e - 1, 1 % e): one},
    ]
    bad_triples = []
    for idx, (x, y, z) in enumerate(iter_product(algebra_gens, repeat=3)):
        left = _twisted_multiply(_twisted_multiply(x, y, e, n, d), z, e, n, d)
        right = _twisted_multiply(x, _twisted_multiply(y, z, e, n, d), e, n, d)
        if set(left) != set(right) or any(
            not (left[k] - right[k]).is_zero() for k in left
        ):
            bad_triples.append(idx)
    report.record("twisted-associativity", not bad_triples, bad_triples)
    return report
