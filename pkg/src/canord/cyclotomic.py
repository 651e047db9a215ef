"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are stored in the power basis 1, z, ..., z^(phi(m)-1) of a fixed
primitive m-th root of unity z = zeta_m, reduced modulo the m-th cyclotomic
polynomial.  At a fixed conductor the reduced representation is unique, so
equality at one conductor is coefficient-wise; across conductors elements are
compared through a cached minimal-conductor canonical form.

Conductor convention: canonical conductors are 1 or integers >= 3 not
congruent to 2 mod 4 (for m = 2u with u odd, Q(zeta_m) = Q(zeta_u)).
Rational numbers live at conductor 1.

All coefficients are :class:`fractions.Fraction`; there is no floating point
anywhere in this module.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "CycloNumber",
    "root_of_unity",
    "from_rational",
    "zero",
    "one",
    "multiplicative_order",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@lru_cache(maxsize=None)
def _cyclo_poly(m: int) -> tuple[int, ...]:
    """Integer coefficients of the m-th cyclotomic polynomial, ascending degree."""
    from sympy import Poly, cyclotomic_poly, symbols

    x = symbols("x")
    coeffs = Poly(cyclotomic_poly(m, x), x).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


@lru_cache(maxsize=None)
def _phi(m: int) -> int:
    return len(_cyclo_poly(m)) - 1


# For each conductor m, _POWER_ROWS[m][k] is x^k reduced mod Phi_m as a tuple
# of ints of length phi(m).  Rows are appended on demand.
_POWER_ROWS: dict[int, list[tuple[Fraction, ...]]] = {}


def _power_row(m: int, k: int) -> tuple[Fraction, ...]:
    """x^k mod Phi_m in the power basis (k >= 0)."""
    phi = _phi(m)
    rows = _POWER_ROWS.setdefault(m, [])
    if not rows:
        for i in range(phi):
            rows.append(tuple(_ONE if j == i else _ZERO for j in range(phi)))
    poly = _cyclo_poly(m)
    # x^phi = -(c_0 + c_1 x + ... + c_{phi-1} x^{phi-1})
    top = tuple(Fraction(-c) for c in poly[:phi])
    while len(rows) <= k:
        prev = rows[-1]
        # multiply by x: shift, then reduce the overflow coefficient
        lead = prev[phi - 1]
        shifted = [_ZERO] + list(prev[: phi - 1])
        if lead:
            shifted = [s + lead * t for s, t in zip(shifted, top)]
        rows.append(tuple(shifted))
    return rows[k]


def _reduce_poly(m: int, coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Reduce an arbitrary-degree polynomial in zeta_m to the power basis."""
    phi = _phi(m)
    out = list(coeffs[:phi]) + [_ZERO] * max(0, phi - len(coeffs))
    for k in range(phi, len(coeffs)):
        c = coeffs[k]
        if c:
            row = _power_row(m, k)
            out = [o + c * r for o, r in zip(out, row)]
    return tuple(out)


def _polymul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] += ai * bj
    return out


def _poly_divmod(
    num: list[Fraction], den: list[Fraction]
) -> tuple[list[Fraction], list[Fraction]]:
    num = list(num)
    q = [_ZERO] * max(1, len(num) - len(den) + 1)
    dlead = den[-1]
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1] / dlead
        q[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    rem = num[: len(den) - 1]
    while len(rem) > 1 and not rem[-1]:
        rem.pop()
    return q, rem or [_ZERO]


def _poly_invert(a: Sequence[Fraction], m: int) -> tuple[Fraction, ...]:
    """Inverse of a(x) modulo Phi_m via the extended Euclidean algorithm."""
    r0 = [Fraction(c) for c in _cyclo_poly(m)]
    r1 = list(a)
    while len(r1) > 1 and not r1[-1]:
        r1.pop()
    t0: list[Fraction] = [_ZERO]
    t1: list[Fraction] = [_ONE]
    while len(r1) > 1 or r1[0]:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        qt = _polymul(q, t1)
        new_t = [_ZERO] * max(len(t0), len(qt))
        for i, c in enumerate(t0):
            new_t[i] += c
        for i, c in enumerate(qt):
            new_t[i] -= c
        while len(new_t) > 1 and not new_t[-1]:
            new_t.pop()
        t0, t1 = t1, new_t
        if len(r1) == 1 and not r1[0]:
            break
    # r0 is now a nonzero constant gcd (Phi_m is irreducible over Q)
    if len(r0) != 1 or not r0[0]:
        raise ZeroDivisionError("element is not invertible")
    inv_lead = _ONE / r0[0]
    return _reduce_poly(m, [c * inv_lead for c in t0])


class CycloNumber:
    """An element of the cyclotomic field Q(zeta_m), stored exactly.

    Instances are immutable; arithmetic between different conductors embeds
    both operands into the field of conductor lcm first.
    """

    __slots__ = ("conductor", "coeffs", "_canon")

    def __init__(self, conductor: int, coeffs: Iterable[Fraction | int]):
        if conductor < 1:
            raise ValueError("conductor must be a positive integer")
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != _phi(conductor):
            raise ValueError(
                f"need {_phi(conductor)} coefficients at conductor {conductor},"
                f" got {len(cs)}"
            )
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "_canon", None)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("CycloNumber is immutable")

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def rational(q: Fraction | int) -> "CycloNumber":
        return CycloNumber(1, (Fraction(q),))

    # -- structural queries ---------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return self.minimize_conductor().conductor == 1

    def as_rational(self) -> Fraction:
        min_self = self.minimize_conductor()
        if min_self.conductor != 1:
            raise ValueError(f"{self} is not rational")
        return min_self.coeffs[0]

    # -- conductor handling ----------------------------------------------------

    def embed(self, conductor: int) -> "CycloNumber":
        """Express this element at a larger conductor (self.conductor | conductor)."""
        m, M = self.conductor, conductor
        if M == m:
            return self
        if M % m:
            raise ValueError(f"cannot embed conductor {m} into {M}")
        step = M // m
        phi_M = _phi(M)
        out = [_ZERO] * phi_M
        for k, c in enumerate(self.coeffs):
            if c:
                row = _power_row(M, k * step)
                out = [o + c * r for o, r in zip(out, row)]
        return CycloNumber(M, out)

    def minimize_conductor(self) -> "CycloNumber":
        """The same field element at its smallest canonical conductor."""
        canon = self._canon
        if canon is None:
            canon = _minimize(self)
            object.__setattr__(self, "_canon", canon)
        return canon

    def _key(self) -> tuple[int, tuple[Fraction, ...]]:
        min_self = self.minimize_conductor()
        return (min_self.conductor, min_self.coeffs)

    # -- arithmetic -------------------------------------------------------------

    def _coerce(self, other: object) -> "CycloNumber | None":
        if isinstance(other, CycloNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return CycloNumber.rational(other)
        return None

    def _common(self, other: "CycloNumber") -> tuple["CycloNumber", "CycloNumber", int]:
        m = self.conductor * other.conductor // gcd(self.conductor, other.conductor)
        return self.embed(m), other.embed(m), m

    def __add__(self, other: object) -> "CycloNumber":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, m = self._common(o)
        return CycloNumber(m, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "CycloNumber":
        return CycloNumber(self.conductor, tuple(-c for c in self.coeffs))

    def __sub__(self, other: object) -> "CycloNumber":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "CycloNumber":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> "CycloNumber":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, m = self._common(o)
        return CycloNumber(m, _reduce_poly(m, _polymul(a.coeffs, b.coeffs)))

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if self.is_zero():
            raise ZeroDivisionError("division by zero cyclotomic number")
        return CycloNumber(self.conductor, _poly_invert(self.coeffs, self.conductor))

    def __truediv__(self, other: object) -> "CycloNumber":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> "CycloNumber":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> "CycloNumber":
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloNumber.rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def conjugate(self) -> "CycloNumber":
        """Complex conjugation, zeta -> zeta^(-1)."""
        m = self.conductor
        phi = _phi(m)
        out = [_ZERO] * phi
        for k, c in enumerate(self.coeffs):
            if c:
                row = _power_row(m, (m - k) % m)
                out = [o + c * r for o, r in zip(out, row)]
        return CycloNumber(m, out)

    # -- comparisons --------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.conductor == o.conductor:
            return self.coeffs == o.coeffs
        return self._key() == o._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- display --------------------------------------------------------------------

    def __repr__(self) -> str:
        return f"CycloNumber({self.conductor}, {self.coeffs})"

    def __str__(self) -> str:
        m = self.conductor
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                mono = f"z{m}" if k == 1 else f"z{m}^{k}"
                if c == 1:
                    terms.append(mono)
                elif c == -1:
                    terms.append(f"-{mono}")
                else:
                    terms.append(f"({c})*{mono}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out


def _divisors(m: int) -> list[int]:
    ds = [d for d in range(1, m + 1) if m % d == 0]
    return ds


def _subfield_solve(z: CycloNumber, d: int) -> CycloNumber | None:
    """Express z at conductor d | conductor(z) if possible, else None.

    Solves z = sum_j b_j * zeta_d^j by exact Gaussian elimination in the
    ambient power basis.
    """
    m = z.conductor
    phi_d = _phi(d)
    basis = [_power_row(m, j * (m // d)) for j in range(phi_d)]
    # rows: ambient coordinates; unknowns: b_j
    phi_m = _phi(m)
    aug = [[basis[j][i] for j in range(phi_d)] + [z.coeffs[i]] for i in range(phi_m)]
    sol = _solve_exact(aug, phi_d)
    if sol is None:
        return None
    return CycloNumber(d, sol)


def _solve_exact(aug: list[list[Fraction]], ncols: int) -> list[Fraction] | None:
    """Solve an overdetermined exact linear system; None if inconsistent."""
    rows = [row[:] for row in aug]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pr = rows[r]
        inv = _ONE / pr[c]
        rows[r] = pr = [x * inv for x in pr]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        pivots.append((r, c))
        r += 1
    # inconsistent if any zero row has nonzero rhs
    sol = [_ZERO] * ncols
    for i in range(len(rows)):
        if any(rows[i][:ncols]):
            continue
        if rows[i][ncols]:
            return None
    for r, c in pivots:
        sol[c] = rows[r][ncols]
    # under-determined systems do not occur here (basis vectors are independent)
    return sol


def _minimize(z: CycloNumber) -> CycloNumber:
    m = z.conductor
    for d in _divisors(m):
        if d > 1 and d % 4 == 2:
            continue  # Q(zeta_{2u}) = Q(zeta_u) for odd u; keep conductors canonical
        if d == m:
            return z
        sol = _subfield_solve(z, d)
        if sol is not None:
            return sol
    return z  # pragma: no cover - d == m always succeeds


def root_of_unity(m: int, k: int = 1) -> CycloNumber:
    """zeta_m^k in canonical form (at the minimal conductor)."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    k %= m
    g = gcd(m, k) if k else m
    mm, kk = m // g, k // g if k else 0
    if mm == 1:
        return CycloNumber.rational(1)
    if mm == 2:
        return CycloNumber.rational(-1)
    if mm % 4 == 2:
        # zeta_{2u} = -zeta_u^((u+1)/2) for odd u
        u = mm // 2
        sign = -1 if kk % 2 else 1
        kk = (kk * (u + 1) // 2) % u
        base = CycloNumber(u, _power_row(u, kk))
        return base if sign == 1 else -base
    return CycloNumber(mm, _power_row(mm, kk))


def from_rational(q: Fraction | int) -> CycloNumber:
    return CycloNumber.rational(q)


def zero() -> CycloNumber:
    return CycloNumber.rational(0)


def one() -> CycloNumber:
    return CycloNumber.rational(1)


def multiplicative_order(z: CycloNumber, bound: int = 10_000) -> int:
    """Smallest k >= 1 with z^k = 1; raises if no order <= bound is found."""
    acc = z
    unit = one()
    for k in range(1, bound + 1):
        if acc == unit:
            return k
        acc = acc * z
    raise ValueError(f"no multiplicative order found up to {bound}")
