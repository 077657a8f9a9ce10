"""Linking numbers, the u-polynomial, based matrices of strings, genus bounds and slice obstructions."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .core import (
    TRIVIAL,
    StringError,
    VirtualString,
    in_open_arc,
    lattice_string,
    links,
    opposite,
    product,
)
from .matrices import (
    SIGMA_LIMIT,
    BasedMatrix,
    integer_rank,
    is_hyperbolic,
    primitive_reduce,
    sigma_genus,
    u_of_matrix,
)


class PreconditionError(ValueError):
    pass


# ---------------------------------------------------------------- u-polynomial


@dataclass(frozen=True)
class UPolynomial:
    """Sparse integer polynomial ``sum_k c_k t^k`` with no constant term stored as ``((k, c_k), ...)``."""

    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        acc: dict[int, int] = {}
        for k, c in self.terms:
            acc[int(k)] = acc.get(int(k), 0) + int(c)
        object.__setattr__(self, "terms", tuple(sorted((k, c) for k, c in acc.items() if c)))

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, int]) -> "UPolynomial":
        return cls(tuple(coeffs.items()))

    @classmethod
    def parse(cls, text: str) -> "UPolynomial":
        """Read ``"2t^3 - 3t^2"``, ``"t^3-3t"``, ``"0"`` and similar."""
        s = text.replace(" ", "").replace("−", "-").replace("*", "")
        if s in ("", "0"):
            return cls()
        if not re.fullmatch(r"([+-]?(\d+)?(t(\^\d+)?)?)+", s):
            raise StringError(f"cannot read polynomial {text!r}")
        terms = []
        for sign, coef, var, power in re.findall(r"([+-]?)(\d*)(t?)(?:\^(\d+))?", s):
            if not (coef or var):
                continue
            c = int(coef) if coef else 1
            if sign == "-":
                c = -c
            k = (int(power) if power else 1) if var else 0
            terms.append((k, c))
        return cls(tuple(terms))

    def __getitem__(self, k: int) -> int:
        return dict(self.terms).get(k, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return self.terms[-1][0] if self.terms else -1

    def is_zero(self) -> bool:
        return not self.terms

    def value_at_zero(self) -> int:
        return self[0]

    def derivative_at_one(self) -> int:
        return sum(k * c for k, c in self.terms)

    def __add__(self, other: "UPolynomial") -> "UPolynomial":
        return UPolynomial(self.terms + other.terms)

    def __neg__(self) -> "UPolynomial":
        return UPolynomial(tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: "UPolynomial") -> "UPolynomial":
        return self + (-other)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in reversed(self.terms):
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("t" if k == 1 else f"t^{k}")
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)


# ---------------------------------------------------------------- linking data


def linking_matrix(alpha: VirtualString) -> list[list[int]]:
    """``L[e][f]`` is +1/-1/0 as ``f`` links ``e`` positively/negatively/not at all."""
    m = alpha.rank
    return [[links(alpha, e, f) for f in range(m)] for e in range(m)]


def linking_number(alpha: VirtualString, e: int) -> int:
    """``n(e)``: arrows linking ``e`` positively minus those linking it negatively."""
    if not 0 <= e < alpha.rank:
        raise StringError(f"arrow index {e} out of range")
    return sum(links(alpha, e, f) for f in range(alpha.rank))


def linking_numbers(alpha: VirtualString) -> list[int]:
    return [sum(row) for row in linking_matrix(alpha)]


def u_polynomial(alpha: VirtualString) -> UPolynomial:
    terms = []
    for n in linking_numbers(alpha):
        if n:
            terms.append((abs(n), 1 if n > 0 else -1))
    return UPolynomial(tuple(terms))


# ---------------------------------------------------------------- intersection pairing


def arc_pairing(alpha: VirtualString, arc1: tuple[int, int], arc2: tuple[int, int]) -> int:
    """``ab . cd``: arrows from the interior of ``ab`` into that of ``cd`` minus the reverse."""
    (a, b), (c, d) = arc1, arc2
    n = alpha.size
    total = 0
    for t, h in alpha.arrows:
        if in_open_arc(t, a, b, n) and in_open_arc(h, c, d, n):
            total += 1
        if in_open_arc(t, c, d, n) and in_open_arc(h, a, b, n):
            total -= 1
    return total


def based_matrix(alpha: VirtualString) -> BasedMatrix:
    """``T(alpha)``: basepoint ``s`` then the arrows in order.

    ``b(e, s) = n(e)`` and ``b(e, f) = ab.cd + eps`` where ``eps`` records how ``f`` links ``e``.
    """
    m = alpha.rank
    L = linking_matrix(alpha)
    rows = [[0] * (m + 1) for _ in range(m + 1)]
    for e in range(m):
        ne = sum(L[e])
        rows[e + 1][0] = ne
        rows[0][e + 1] = -ne
        for f in range(m):
            if e != f:
                rows[e + 1][f + 1] = arc_pairing(alpha, alpha.arrows[e], alpha.arrows[f]) + L[e][f]
    labels = ("s",) + tuple(f"e{i + 1}" for i in range(m))
    return BasedMatrix(tuple(map(tuple, rows)), labels)


def primitive_matrix(alpha: VirtualString) -> BasedMatrix:
    """``T0(alpha)``."""
    return primitive_reduce(based_matrix(alpha))


def genus(alpha: VirtualString) -> int:
    """Half the rank of the full ``(m+1) x (m+1)`` matrix of ``T(alpha)``."""
    return integer_rank(based_matrix(alpha).b) // 2


def rho(alpha: VirtualString) -> int:
    return primitive_matrix(alpha).size - 1


def hr_lower_bound(alpha: VirtualString) -> int:
    """Lower bound for the least rank of a homotopic string."""
    return max(rho(alpha), u_polynomial(alpha).degree + 1)


def hg_lower_bound(alpha: VirtualString) -> int:
    """Lower bound for the least genus of a homotopic string."""
    return integer_rank(primitive_matrix(alpha).b) // 2


# ---------------------------------------------------------------- sliceness


NOT_SLICE = "NOT_SLICE"
UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SliceReport:
    u_zero: bool
    matrix_hyperbolic: bool
    sigma: int
    verdict: str

    @property
    def slice_genus_lower_bound(self) -> int:
        return (self.sigma + 1) // 2


def slice_obstructions(alpha: VirtualString, limit: int = SIGMA_LIMIT) -> SliceReport:
    """Check the three slice obstructions; ``UNKNOWN`` means none of them fires."""
    T0 = primitive_matrix(alpha)
    sigma = sigma_genus(T0, limit=limit)
    hyperbolic = sigma == 0
    u_zero = u_polynomial(alpha).is_zero()
    verdict = UNKNOWN if (u_zero and hyperbolic) else NOT_SLICE
    return SliceReport(u_zero, hyperbolic, sigma, verdict)


def matrix_invariants(alpha: VirtualString) -> dict:
    T = based_matrix(alpha)
    T0 = primitive_reduce(T)
    return {
        "T": T,
        "T0": T0,
        "sigma": sigma_genus(T0),
        "hyperbolic": is_hyperbolic(T0),
        "u_T0": u_of_matrix(T0),
    }


# ---------------------------------------------------------------- realization


def check_realizable_u(u: UPolynomial) -> None:
    if u.value_at_zero() != 0:
        raise PreconditionError(f"u(0) = {u.value_at_zero()} must vanish")
    if u.derivative_at_one() != 0:
        raise PreconditionError(f"u'(1) = {u.derivative_at_one()} must vanish")


def realize_u_polynomial(u: UPolynomial | Mapping[int, int] | str) -> VirtualString:
    """A string whose u-polynomial is ``u``; needs ``u(0) = u'(1) = 0``.

    The top term ``a t^m`` is peeled off with ``|a|`` copies of ``alpha_{1,m}``
    (``u = t^m - m t``) or of its opposite, leaving only a linear term, which
    ``u'(1) = 0`` forces to vanish.
    """
    if isinstance(u, str):
        u = UPolynomial.parse(u)
    elif not isinstance(u, UPolynomial):
        u = UPolynomial.from_dict(u)
    check_realizable_u(u)
    result = TRIVIAL
    for k, a in u.terms:
        if k < 2:
            continue
        piece = lattice_string(1, k)
        if a < 0:
            piece = opposite(piece)
        for _ in range(abs(a)):
            result = product(result, piece)
    return result
