"""Virtual strings, arrow diagrams and their text encodings.

A string of rank ``m`` is stored as ``2m`` endpoint slots ``0..2m-1`` laid
out in the positive direction of the core circle, together with ``m``
arrows ``(tail_slot, head_slot)``.  Arcs become index intervals mod ``2m``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations
from typing import Iterable, Sequence


class StringError(ValueError):
    """Malformed string, diagram or word input."""


class SizeLimitError(RuntimeError):
    """An operation was asked to work beyond its configured size limit."""


TAIL, HEAD = 0, 1


@dataclass(frozen=True)
class VirtualString:
    """An oriented circle with ``m`` ordered arrows on ``2m`` slots."""

    arrows: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        arrows = tuple((int(t), int(h)) for t, h in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        n = 2 * len(arrows)
        seen = [False] * n
        for t, h in arrows:
            if t == h:
                raise StringError(f"arrow ({t},{h}) has equal endpoints")
            for x in (t, h):
                if not 0 <= x < n:
                    raise StringError(f"slot {x} out of range 0..{n - 1}")
                if seen[x]:
                    raise StringError(f"slot {x} used twice")
                seen[x] = True

    @property
    def rank(self) -> int:
        return len(self.arrows)

    @property
    def size(self) -> int:
        """Number of endpoint slots."""
        return 2 * len(self.arrows)

    @cached_property
    def slot_table(self) -> tuple[tuple[int, int], ...]:
        """``slot -> (arrow_index, role)`` with role TAIL or HEAD."""
        table = [None] * self.size
        for i, (t, h) in enumerate(self.arrows):
            table[t] = (i, TAIL)
            table[h] = (i, HEAD)
        return tuple(table)

    def __str__(self):
        return render_string(self)


@dataclass(frozen=True)
class ArrowDiagram:
    """A virtual string whose arrows carry signs ``+1`` / ``-1``."""

    string: VirtualString
    signs: tuple[int, ...] = field(default=())

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if len(signs) != self.string.rank:
            raise StringError("one sign per arrow is required")
        if any(s not in (1, -1) for s in signs):
            raise StringError("signs must be +1 or -1")
        object.__setattr__(self, "signs", signs)

    @property
    def rank(self) -> int:
        return self.string.rank

    @property
    def arrows(self):
        return self.string.arrows

    def __str__(self):
        return render_diagram(self)


TRIVIAL = VirtualString(())


# ---------------------------------------------------------------- arcs


def in_open_arc(x: int, a: int, b: int, n: int) -> bool:
    """True if slot ``x`` lies strictly inside the positive arc from ``a`` to ``b``."""
    return 0 < (x - a) % n < (b - a) % n


def arc_interior(a: int, b: int, n: int) -> list[int]:
    return [(a + k) % n for k in range(1, (b - a) % n)]


def links(alpha: VirtualString, e: int, f: int) -> int:
    """+1 if arrow ``f`` links ``e`` positively, -1 if negatively, 0 if unlinked."""
    if e == f:
        return 0
    a, b = alpha.arrows[e]
    c, d = alpha.arrows[f]
    n = alpha.size
    c_in = in_open_arc(c, a, b, n)
    d_in = in_open_arc(d, a, b, n)
    if c_in and not d_in:
        return 1
    if d_in and not c_in:
        return -1
    return 0


def restrict(alpha: VirtualString, keep: Iterable[int]) -> VirtualString:
    """Substring formed by the arrows with the given indices, in the given order."""
    keep = list(keep)
    slots = sorted(x for i in keep for x in alpha.arrows[i])
    index = {x: k for k, x in enumerate(slots)}
    return VirtualString(tuple((index[alpha.arrows[i][0]], index[alpha.arrows[i][1]]) for i in keep))


def restrict_diagram(diagram: ArrowDiagram, keep: Iterable[int]) -> ArrowDiagram:
    keep = list(keep)
    return ArrowDiagram(restrict(diagram.string, keep), tuple(diagram.signs[i] for i in keep))


def arrows_inside(alpha: VirtualString, a: int, b: int) -> list[int]:
    """Indices of arrows with both endpoints in the interior of the arc ``ab``."""
    n = alpha.size
    return [i for i, (t, h) in enumerate(alpha.arrows) if in_open_arc(t, a, b, n) and in_open_arc(h, a, b, n)]


# ---------------------------------------------------------------- text codec

_NAME = re.compile(r"^([A-Za-z0-9_]+)(')?([+\-−])?$")


def _tokens(text: str) -> list[str]:
    return text.replace(",", " ").split()


def _parse_tokens(text: str, signed: bool):
    tails: dict[str, int] = {}
    heads: dict[str, int] = {}
    signs: dict[str, int] = {}
    order: list[str] = []
    for pos, token in enumerate(_tokens(text)):
        m = _NAME.match(token)
        if not m:
            raise StringError(f"bad token {token!r}")
        name, prime, sign = m.groups()
        if prime:
            if sign:
                raise StringError(f"sign must be attached to the tail token, got {token!r}")
            if name in heads:
                raise StringError(f"duplicate head for {name!r}")
            heads[name] = pos
        else:
            if name in tails:
                raise StringError(f"duplicate tail for {name!r}")
            tails[name] = pos
            order.append(name)
            if sign:
                if not signed:
                    raise StringError(f"signed token {token!r} in an unsigned string")
                signs[name] = 1 if sign == "+" else -1
    missing = set(tails) ^ set(heads)
    if missing:
        raise StringError(f"names without both tail and head: {sorted(missing)}")
    arrows = tuple((tails[name], heads[name]) for name in order)
    return VirtualString(arrows), order, signs


def parse_string(text: str) -> VirtualString:
    """Decode ``"x' y z' x z y'"``-style text: ``NAME`` is a tail, ``NAME'`` a head.

    Arrows are numbered in the order their tails appear.
    """
    return _parse_tokens(text, signed=False)[0]


def parse_diagram(text: str) -> ArrowDiagram:
    """Decode an arrow diagram; signs ride on tail tokens (``a+``, ``a-``), default ``+``."""
    string, order, signs = _parse_tokens(text, signed=True)
    return ArrowDiagram(string, tuple(signs.get(name, 1) for name in order))


def arrow_name(i: int) -> str:
    letters = "abcdefghijklmnopqrstuvwxyz"
    return letters[i] if i < 26 else f"{letters[i % 26]}{i // 26}"


def render_string(alpha: VirtualString) -> str:
    out = []
    for i, role in alpha.slot_table:
        out.append(arrow_name(i) + ("'" if role == HEAD else ""))
    return " ".join(out)


def render_diagram(diagram: ArrowDiagram) -> str:
    out = []
    for i, role in diagram.string.slot_table:
        if role == HEAD:
            out.append(arrow_name(i) + "'")
        else:
            out.append(arrow_name(i) + ("+" if diagram.signs[i] > 0 else "-"))
    return " ".join(out)


def to_json(obj: VirtualString | ArrowDiagram) -> str:
    if isinstance(obj, ArrowDiagram):
        data = {"rank": obj.rank, "arrows": [list(a) for a in obj.arrows], "signs": list(obj.signs)}
    else:
        data = {"rank": obj.rank, "arrows": [list(a) for a in obj.arrows], "signs": []}
    return json.dumps(data)


def from_json(text: str | dict) -> VirtualString | ArrowDiagram:
    data = json.loads(text) if isinstance(text, str) else text
    try:
        alpha = VirtualString(tuple(tuple(a) for a in data["arrows"]))
    except (KeyError, TypeError) as exc:
        raise StringError(f"bad JSON string: {exc}") from None
    if data.get("rank", alpha.rank) != alpha.rank:
        raise StringError("rank does not match the arrow list")
    if data.get("signs"):
        return ArrowDiagram(alpha, tuple(data["signs"]))
    return alpha


# ---------------------------------------------------------------- canonical form

CanonicalCode = tuple


def arrows_code(arrows, n: int) -> tuple[int, ...]:
    """Canonical code straight from an arrow list on ``n`` slots.

    Token ``2k + role`` stands for the ``k``-th arrow met (first-occurrence
    numbering) with role 0 for a tail and 1 for a head; the code is the least
    token sequence over all starting slots.  A least rotation always starts at
    a tail, so only those are tried.
    """
    if n == 0:
        return ()
    table = [0] * n
    for i, (t, h) in enumerate(arrows):
        table[t] = 2 * i
        table[h] = 2 * i + 1
    best = None
    for start, _ in arrows:
        relabel = {}
        out = []
        for k in range(n):
            x = table[(start + k) % n]
            i = x >> 1
            j = relabel.get(i)
            if j is None:
                j = relabel[i] = len(relabel)
            out.append(2 * j + (x & 1))
        out = tuple(out)
        if best is None or out < best:
            best = out
    return best


def code_to_arrows(code) -> tuple[tuple[int, int], ...]:
    arrows = [[0, 0] for _ in range(len(code) // 2)]
    for pos, x in enumerate(code):
        arrows[x >> 1][x & 1] = pos
    return tuple(map(tuple, arrows))


def string_from_code(code) -> VirtualString:
    return VirtualString(code_to_arrows(code))


def _diagram_code(diagram: "ArrowDiagram"):
    alpha = diagram.string
    n = alpha.size
    table = [0] * n
    for i, (t, h) in enumerate(alpha.arrows):
        table[t] = 2 * i
        table[h] = 2 * i + 1
    best = None
    for start, _ in alpha.arrows:
        relabel = {}
        out = []
        signs = []
        for k in range(n):
            x = table[(start + k) % n]
            i = x >> 1
            j = relabel.get(i)
            if j is None:
                j = relabel[i] = len(relabel)
                signs.append(diagram.signs[i])
            out.append(2 * j + (x & 1))
        cand = (tuple(out), tuple(signs))
        if best is None or cand < best:
            best = cand
    return best


def canonical_code(obj: VirtualString | ArrowDiagram) -> CanonicalCode:
    """Complete homeomorphism invariant, see :func:`arrows_code`.

    For an arrow diagram the code is ``(tokens, signs)`` with signs listed in
    first-occurrence order.
    """
    if isinstance(obj, ArrowDiagram):
        if obj.rank == 0:
            return ((), ())
        return _diagram_code(obj)
    return arrows_code(obj.arrows, obj.size)


def canonical_string(alpha: VirtualString) -> VirtualString:
    """The homeomorphic string whose slot order realizes :func:`canonical_code`."""
    return string_from_code(canonical_code(alpha))


def canonical_diagram(diagram: ArrowDiagram) -> ArrowDiagram:
    tokens, signs = canonical_code(diagram)
    return ArrowDiagram(string_from_code(tokens), signs)


def homeomorphic(x, y) -> bool:
    return canonical_code(x) == canonical_code(y)


def rotate(alpha: VirtualString, k: int) -> VirtualString:
    """Shift every slot index by ``k`` (a homeomorphism)."""
    n = alpha.size
    if n == 0:
        return alpha
    return VirtualString(tuple(((t + k) % n, (h + k) % n) for t, h in alpha.arrows))


# ---------------------------------------------------------------- transformations


def opposite(alpha: VirtualString) -> VirtualString:
    """Reverse the orientation of the core circle; arrows keep tail and head."""
    n = alpha.size
    return VirtualString(tuple((n - 1 - t, n - 1 - h) for t, h in alpha.arrows))


def inverse(alpha: VirtualString) -> VirtualString:
    """Reverse every arrow."""
    return VirtualString(tuple((h, t) for t, h in alpha.arrows))


def product(first: VirtualString, second: VirtualString) -> VirtualString:
    """Place ``first`` and then ``second`` on consecutive arcs of one circle."""
    shift = first.size
    return VirtualString(first.arrows + tuple((t + shift, h + shift) for t, h in second.arrows))


def cable(alpha: VirtualString, p: int) -> VirtualString:
    """Replace each arrow by ``p`` parallel, mutually nested copies."""
    if p < 1:
        raise StringError("cable multiplicity must be >= 1")
    arrows = []
    for t, h in alpha.arrows:
        for k in range(p):
            arrows.append((p * t + k, p * h + (p - 1 - k)))
    return VirtualString(tuple(arrows))


def permutation_string(sigma: Sequence[int]) -> VirtualString:
    """String of a permutation given as ``sigma[i-1] = sigma(i)`` on ``{1..m}``.

    Slots run ``a_1..a_m, b_m..b_1`` and arrow ``e_i = (a_i, b_sigma(i))``.
    """
    m = len(sigma)
    if sorted(sigma) != list(range(1, m + 1)):
        raise StringError(f"{list(sigma)} is not a permutation of 1..{m}")
    return VirtualString(tuple((i, 2 * m - s) for i, s in enumerate(sigma)))


def lattice_permutation(p: int, q: int) -> list[int]:
    if p < 1 or q < 1:
        raise StringError("lattice parameters must be >= 1")
    return [i + q if i <= p else i - p for i in range(1, p + q + 1)]


def lattice_string(p: int, q: int) -> VirtualString:
    """``p`` vertical arrows crossed by ``q`` horizontal ones."""
    return permutation_string(lattice_permutation(p, q))


def cycles_permutation(cycles: str, m: int | None = None) -> list[int]:
    """Read cycle notation such as ``"(134)(2)"``; single digits, or commas inside a cycle."""
    groups = re.findall(r"\(([^)]*)\)", cycles)
    if not groups and cycles.strip():
        raise StringError(f"bad cycle notation {cycles!r}")
    parsed = []
    for g in groups:
        parts = g.replace(",", " ").split() if ("," in g or " " in g.strip()) else list(g.strip())
        parsed.append([int(x) for x in parts])
    size = m or max((x for c in parsed for x in c), default=0)
    sigma = list(range(1, size + 1))
    for c in parsed:
        for k, x in enumerate(c):
            sigma[x - 1] = c[(k + 1) % len(c)]
    permutation_string(sigma)
    return sigma


def linked_family_permutation(p: int, q: int, p2: int, q2: int) -> list[int]:
    """Permutation joining two lattice blocks through one fixed middle arrow."""
    m = p + q + p2 + q2 + 1
    sigma = []
    for i in range(1, m + 1):
        if i <= p:
            sigma.append(i + q)
        elif i <= p + q:
            sigma.append(i - p)
        elif i == p + q + 1:
            sigma.append(i)
        elif i <= p + q + 1 + p2:
            sigma.append(i + q2)
        else:
            sigma.append(i - p2)
    return sigma


# ---------------------------------------------------------------- Gauss words, bipartitions


@dataclass(frozen=True)
class Bipartition:
    """Unordered pair of disjoint letter sets, stored with the smallest letter's part first."""

    first: frozenset
    second: frozenset

    def __post_init__(self):
        a, b = frozenset(self.first), frozenset(self.second)
        if a & b:
            raise StringError("bipartition parts overlap")
        if _part_key(b) < _part_key(a):
            a, b = b, a
        object.__setattr__(self, "first", a)
        object.__setattr__(self, "second", b)

    @property
    def letters(self) -> frozenset:
        return self.first | self.second

    def part_of(self, letter) -> int:
        return 0 if letter in self.first else 1

    def __str__(self):
        return "|".join("".join(_letter_text(sorted(p, key=_letter_sort))) or "-" for p in (self.first, self.second))


def _letter_sort(x):
    return (0, int(x), "") if str(x).isdigit() else (1, 0, str(x))


def _part_key(part: frozenset):
    if not part:
        return (1,)
    return (0, min(_letter_sort(x) for x in part))


def _letter_text(letters) -> str:
    letters = [str(x) for x in letters]
    if all(len(x) == 1 for x in letters):
        return "".join(letters)
    return ",".join(letters)


def gauss_word_of(alpha: VirtualString) -> tuple[str, ...]:
    """One letter per endpoint in slot order; arrow ``i`` is written as ``str(i+1)``."""
    return tuple(str(i + 1) for i, _ in alpha.slot_table)


def bipartition_of(alpha: VirtualString) -> Bipartition:
    """Arrows are equivalent when their tails sit at slots of equal parity."""
    even = frozenset(str(i + 1) for i, (t, _) in enumerate(alpha.arrows) if t % 2 == 0)
    odd = frozenset(str(i + 1) for i, (t, _) in enumerate(alpha.arrows) if t % 2 == 1)
    return Bipartition(even, odd)


def q_number(alpha: VirtualString, e: int, f: int) -> int:
    """Heads minus tails on the semi-open arc from the tail of ``e`` to the tail of ``f``."""
    if e == f:
        return 0
    a, c = alpha.arrows[e][0], alpha.arrows[f][0]
    n = alpha.size
    total = 0
    for k in range(1, (c - a) % n + 1):
        _, role = alpha.slot_table[(a + k) % n]
        total += 1 if role == HEAD else -1
    return total


# ---------------------------------------------------------------- diagrams


def underlying_string(diagram: ArrowDiagram) -> VirtualString:
    return diagram.string


def with_signs(alpha: VirtualString, sign: int = 1) -> ArrowDiagram:
    return ArrowDiagram(alpha, (sign,) * alpha.rank)


# ---------------------------------------------------------------- enumeration helpers


def all_strings(m: int):
    """Every labelled rank-``m`` string (all oriented perfect matchings of ``2m`` slots)."""
    n = 2 * m

    def matchings(free):
        if not free:
            yield []
            return
        x = free[0]
        for k in range(1, len(free)):
            y = free[k]
            rest = free[1:k] + free[k + 1 :]
            for tail in matchings(rest):
                yield [(x, y)] + tail
                yield [(y, x)] + tail

    for arrows in matchings(list(range(n))):
        yield VirtualString(tuple(arrows))


def relabelings(alpha: VirtualString):
    """All reorderings of the arrow list (the same string, differently numbered)."""
    for perm in permutations(range(alpha.rank)):
        yield VirtualString(tuple(alpha.arrows[i] for i in perm))
