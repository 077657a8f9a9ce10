"""The cobracket on homotopy classes of strings, co-Jacobi check and dual bracket."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping

from .core import VirtualString, arrows_inside, restrict, string_from_code
from .core import StringError
from .moves import TRIVIAL_KEY, class_key


class Tensor:
    """Finite formal sum of tuples of class keys with rational coefficients.

    Tuples of length 1 model class vectors, length 2 and 3 model tensors.
    Zero coefficients are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, Fraction | int] | None = None):
        clean = {}
        for k, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(k)] = c
        self.terms = clean

    def add(self, key: tuple, coeff) -> None:
        c = self.terms.get(key, Fraction(0)) + coeff
        if c:
            self.terms[key] = c
        else:
            self.terms.pop(key, None)

    def __add__(self, other: "Tensor") -> "Tensor":
        out = Tensor(self.terms)
        for k, c in other.terms.items():
            out.add(k, c)
        return out

    def __neg__(self) -> "Tensor":
        return Tensor({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, Tensor) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        return sorted(self.terms.items())

    def permuted(self, perm) -> "Tensor":
        """Reorder every tuple: position ``i`` of the result takes entry ``perm[i]``."""
        return Tensor({tuple(k[p] for p in perm): c for k, c in self.terms.items()})

    def __repr__(self):
        return f"Tensor({dict(self.items())!r})"


def split_at_arrow(alpha: VirtualString, e: int) -> tuple[VirtualString, VirtualString]:
    """``(alpha1, alpha2)``: arrows lying inside the arc from tail to head, and inside the complementary arc."""
    if not 0 <= e < alpha.rank:
        raise StringError(f"arrow index {e} out of range")
    a, b = alpha.arrows[e]
    return restrict(alpha, arrows_inside(alpha, a, b)), restrict(alpha, arrows_inside(alpha, b, a))


def cobracket(alpha: VirtualString, key: Callable = class_key) -> Tensor:
    """``nu<alpha> = sum_e <alpha1_e> (x) <alpha2_e> - <alpha2_e> (x) <alpha1_e>``, trivial classes being 0."""
    out = Tensor()
    for e in range(alpha.rank):
        s1, s2 = split_at_arrow(alpha, e)
        k1 = key(s1)
        if k1 == TRIVIAL_KEY:
            continue
        k2 = key(s2)
        if k2 == TRIVIAL_KEY:
            continue
        out.add((k1, k2), 1)
        out.add((k2, k1), -1)
    return out


def class_vector(alpha: VirtualString, key: Callable = class_key) -> Tensor:
    k = key(alpha)
    return Tensor() if k == TRIVIAL_KEY else Tensor({(k,): 1})


def representative(k) -> VirtualString:
    """A string in the class named by a key."""
    return string_from_code(k)


def second_cobracket(alpha: VirtualString, key: Callable = class_key) -> Tensor:
    """``(id (x) nu) nu <alpha>``, with ``nu`` of each right factor taken on its representative."""
    out = Tensor()
    for (x, y), c in cobracket(alpha, key).items():
        for (y1, y2), d in cobracket(representative(y), key).items():
            out.add((x, y1, y2), c * d)
    return out


def co_jacobi_value(alpha: VirtualString, key: Callable = class_key) -> Tensor:
    """``(id + tau + tau^2)(id (x) nu) nu <alpha>`` with ``tau(x (x) y (x) z) = z (x) x (x) y``."""
    t = second_cobracket(alpha, key)
    tau = (2, 0, 1)
    tau2 = (1, 2, 0)
    return t + t.permuted(tau) + t.permuted(tau2)


def co_jacobi_check(alpha: VirtualString, key: Callable = class_key) -> bool:
    return not co_jacobi_value(alpha, key)


def dual_bracket(f: Callable, g: Callable, alpha: VirtualString, key: Callable = class_key) -> Fraction:
    """``[f, g](alpha)``: pair ``f (x) g`` with ``nu<alpha>``; ``f`` and ``g`` take strings."""
    total = Fraction(0)
    for (x, y), c in cobracket(alpha, key).items():
        total += c * Fraction(f(representative(x))) * Fraction(g(representative(y)))
    return total


def u_functional(k: int) -> Callable[[VirtualString], int]:
    """The functional ``alpha -> u_k(alpha)``."""
    from .invariants import u_polynomial

    def u_k(alpha):
        return u_polynomial(alpha)[k]

    u_k.__name__ = f"u_{k}"
    return u_k


def format_tensor(t: Tensor, namer: Callable = None) -> str:
    namer = namer or (lambda k: str(representative(k)).join("<>"))
    if not t:
        return "0"
    parts = []
    for k, c in t.items():
        body = " (x) ".join(namer(x) for x in k)
        coeff = "" if abs(c) == 1 else f"{abs(c)} "
        sign = "-" if c < 0 else "+"
        parts.append(f"{sign} {coeff}{body}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[1:]
