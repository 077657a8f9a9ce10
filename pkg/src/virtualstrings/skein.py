"""Labelings of arrow diagrams, the skein polynomial nabla, eta on oriented forests, surgeries and zeta."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product as cartesian
from math import factorial
from typing import Callable, Iterable, Sequence

from .core import (
    ArrowDiagram,
    SizeLimitError,
    StringError,
    VirtualString,
    arrows_inside,
    canonical_code,
    links,
    restrict,
    restrict_diagram,
)
from .moves import (
    A_ADD,
    A_REMOVE,
    B_ADD,
    B_REMOVE,
    C_BACKWARD,
    C_FORWARD,
    MoveError,
    MoveInstance,
    TRIVIAL_KEY,
    _c_sites,
    _b_remove_sites,
    _delete,
    _gaps,
    _insert_a,
    _insert_b,
    _swap_pairs,
    class_key,
)

NABLA_LIMIT = 8
ZETA_LIMIT = 8


# ---------------------------------------------------------------- polynomials over string classes


class StringClassPolynomial:
    """Polynomial in ``z`` whose coefficients are monomials in string classes.

    Stored as ``{(z_degree, sorted tuple of class keys): Fraction}``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for k, c in (terms or {}).items():
            self._add(k, Fraction(c))

    @staticmethod
    def _norm(key):
        deg, classes = key
        return (int(deg), tuple(sorted(classes)))

    def _add(self, key, c):
        key = self._norm(key)
        v = self.terms.get(key, Fraction(0)) + c
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    @classmethod
    def monomial(cls, classes: Iterable, z_degree: int = 0, coeff=1) -> "StringClassPolynomial":
        return cls({(z_degree, tuple(classes)): coeff})

    def __add__(self, other):
        out = StringClassPolynomial(self.terms)
        for k, c in other.terms.items():
            out._add(k, c)
        return out

    def __neg__(self):
        return StringClassPolynomial({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, StringClassPolynomial):
            return StringClassPolynomial({k: c * other for k, c in self.terms.items()})
        out = StringClassPolynomial()
        for (d1, m1), c1 in self.terms.items():
            for (d2, m2), c2 in other.terms.items():
                out._add((d1 + d2, m1 + m2), c1 * c2)
        return out

    __rmul__ = __mul__

    def times_z(self, power: int = 1):
        return StringClassPolynomial({(d + power, m): c for (d, m), c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, StringClassPolynomial) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def items(self):
        return sorted(self.terms.items())

    def free_term(self) -> "StringClassPolynomial":
        return StringClassPolynomial({k: c for k, c in self.terms.items() if k[0] == 0})

    def __repr__(self):
        return f"StringClassPolynomial({dict(self.items())!r})"


def format_polynomial(p: StringClassPolynomial, namer: Callable) -> str:
    if not p:
        return "0"
    parts = []
    for (deg, classes), c in p.items():
        factors = []
        if deg:
            factors.append("z" if deg == 1 else f"z^{deg}")
        factors.extend(namer(k) for k in classes)
        body = " ".join(factors) or "1"
        mag = abs(c)
        coeff = "" if mag == 1 else f"{mag} "
        parts.append(("- " if c < 0 else "+ ") + coeff + body)
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[1:]


# ---------------------------------------------------------------- labelings


@dataclass(frozen=True)
class Labeling:
    """Edge ``k`` runs from slot ``k`` to slot ``k+1``; ``f[k]`` is its label."""

    diagram: ArrowDiagram
    f: tuple[int, ...]

    @property
    def cutting_arrows(self) -> tuple[int, ...]:
        n = self.diagram.string.size
        out = []
        for i, (a, b) in enumerate(self.diagram.arrows):
            if self.f[a] != self.f[(a - 1) % n]:
                out.append(i)
        return tuple(out)

    @property
    def negative_cuts(self) -> int:
        return sum(1 for i in self.cutting_arrows if self.diagram.signs[i] < 0)

    def block_string(self, label: int) -> VirtualString:
        """Arrows whose four adjacent edges all carry ``label``, signs dropped."""
        n = self.diagram.string.size
        f = self.f
        keep = []
        for i, (a, b) in enumerate(self.diagram.arrows):
            if f[a] == f[(a - 1) % n] == f[b] == f[(b - 1) % n] == label:
                keep.append(i)
        return restrict(self.diagram.string, keep)


def _arrow_ok(f, a, b, sign, n):
    a_minus, a_plus = f[(a - 1) % n], f[a]
    b_minus, b_plus = f[(b - 1) % n], f[b]
    if a_plus == a_minus and b_plus == b_minus:
        return True
    if a_plus == b_minus and a_minus == b_plus and a_plus != a_minus:
        return (a_minus > a_plus) == (sign > 0)
    return False


def enumerate_labelings(D: ArrowDiagram, n: int) -> list[Labeling]:
    """Every ``n``-labeling, by backtracking over edges with per-arrow checks as soon as all four edges are set."""
    m = D.string.size
    if m == 0:
        return [Labeling(D, (v,)) for v in range(1, n + 1)]
    # arrows become checkable once their largest incident edge is assigned
    ready: list[list[int]] = [[] for _ in range(m)]
    for i, (a, b) in enumerate(D.arrows):
        last = max((a - 1) % m, a, (b - 1) % m, b)
        ready[last].append(i)
    f = [0] * m
    out = []

    def go(k):
        if k == m:
            out.append(Labeling(D, tuple(f)))
            return
        for v in range(1, n + 1):
            f[k] = v
            if all(_arrow_ok(f, *D.arrows[i], D.signs[i], m) for i in ready[k]):
                go(k + 1)
        f[k] = 0

    go(0)
    return out


def lbl_n(D: ArrowDiagram, n: int) -> list[Labeling]:
    """Surjective labelings with exactly ``n - 1`` cutting arrows, pairwise unlinked."""
    out = []
    for lab in enumerate_labelings(D, n):
        if set(lab.f) != set(range(1, n + 1)):
            continue
        cuts = lab.cutting_arrows
        if len(cuts) != n - 1:
            continue
        if any(links(D.string, e, g) for e, g in combinations(cuts, 2)):
            continue
        out.append(lab)
    return out


# ---------------------------------------------------------------- surgery


def _regions(alpha: VirtualString, cut: Sequence[int]):
    """Split the edges into the circles left after surgery along the arrows in ``cut``.

    Arriving at an endpoint of a cut arrow, the walk continues from the
    other endpoint's outgoing edge.  Returns ``(region_of_edge, slot_lists)``
    where each slot list gives the surviving endpoints in circle order.
    """
    n = alpha.size
    partner = {}
    for i in cut:
        a, b = alpha.arrows[i]
        partner[a] = b
        partner[b] = a
    region = [-1] * max(n, 1)
    slots = []
    for start in range(max(n, 1)):
        if region[start] >= 0:
            continue
        r = len(slots)
        seq = []
        k = start
        while region[k] < 0:
            region[k] = r
            if n == 0:
                break
            x = (k + 1) % n
            if x in partner:
                k = partner[x]
            else:
                seq.append(x)
                k = x
        slots.append(seq)
    return region, slots


def _region_string(alpha: VirtualString, slots: list[int], signs=None):
    inside = set(slots)
    keep = [i for i, (t, h) in enumerate(alpha.arrows) if t in inside and h in inside]
    used = {x for i in keep for x in alpha.arrows[i]}
    pos = {x: k for k, x in enumerate(x for x in slots if x in used)}
    arrows = tuple((pos[alpha.arrows[i][0]], pos[alpha.arrows[i][1]]) for i in keep)
    s = VirtualString(arrows)
    if signs is None:
        return s
    return ArrowDiagram(s, tuple(signs[i] for i in keep))


def is_special(alpha: VirtualString, F: Iterable[int]) -> bool:
    F = list(F)
    return not any(links(alpha, e, g) for e, g in combinations(F, 2))


def special_subsets(alpha: VirtualString) -> list[tuple[int, ...]]:
    """All sets of pairwise unlinked arrows, the empty set included."""
    m = alpha.rank
    L = [[links(alpha, e, g) != 0 for g in range(m)] for e in range(m)]
    out = []

    def grow(current, start):
        out.append(tuple(current))
        for g in range(start, m):
            if not any(L[g][e] for e in current):
                current.append(g)
                grow(current, g + 1)
                current.pop()

    grow([], 0)
    return out


def surgery(alpha: VirtualString, e: int) -> tuple[VirtualString, VirtualString]:
    """Cut along ``e = (a, b)``: the circle through the arc from ``a`` to ``b`` first, then the other."""
    if not 0 <= e < alpha.rank:
        raise StringError(f"arrow index {e} out of range")
    a, b = alpha.arrows[e]
    region, slots = _regions(alpha, [e])
    first, second = region[a], region[b]
    return _region_string(alpha, slots[first]), _region_string(alpha, slots[second])


@dataclass(frozen=True)
class OrientedForest:
    vertices: tuple
    edges: tuple[tuple, ...]

    def __post_init__(self):
        vs = tuple(self.vertices)
        es = tuple(tuple(e) for e in self.edges)
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", es)
        vset = set(vs)
        if len(vset) != len(vs):
            raise StringError("repeated vertex")
        for a, b in es:
            if a not in vset or b not in vset:
                raise StringError(f"edge {a}>{b} uses an unknown vertex")
            if a == b:
                raise StringError("loops are not allowed")
        if len(self.components()) != len(vs) - len(es):
            raise StringError("the underlying graph has a cycle")

    def components(self) -> list[set]:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            parent[find(a)] = find(b)
        groups: dict = {}
        for v in self.vertices:
            groups.setdefault(find(v), set()).add(v)
        return list(groups.values())

    def is_tree(self) -> bool:
        return len(self.vertices) >= 1 and len(self.components()) == 1


def parse_forest(text: str) -> OrientedForest:
    """``"a>b b>c d"``: edges ``x>y`` and lone vertices, separated by spaces or commas."""
    verts: list = []
    edges = []
    for tok in text.replace(",", " ").split():
        if ">" in tok:
            a, b = tok.split(">", 1)
            if not a or not b:
                raise StringError(f"bad edge {tok!r}")
            edges.append((a, b))
            names = (a, b)
        else:
            names = (tok,)
        for x in names:
            if x not in verts:
                verts.append(x)
    return OrientedForest(tuple(verts), tuple(edges))


def surgery_tree(alpha: VirtualString, F: Sequence[int], signs=None):
    """Surgery along every arrow of a special set ``F``.

    Returns ``(pieces, tree)``: the ``#F + 1`` resulting strings (diagrams if
    ``signs`` is given) and the oriented tree with one vertex per piece and
    an edge per arrow ``(a, b)`` of ``F``, from the piece through the arc
    leaving ``a`` to the piece through the arc leaving ``b``.
    """
    F = list(F)
    if not is_special(alpha, F):
        raise StringError("surgery set must consist of pairwise unlinked arrows")
    region, slots = _regions(alpha, F)
    pieces = [_region_string(alpha, s, signs) for s in slots]
    edges = tuple((region[alpha.arrows[i][0]], region[alpha.arrows[i][1]]) for i in F)
    tree = OrientedForest(tuple(range(len(slots))), edges)
    if not tree.is_tree():
        raise AssertionError("surgery graph is not a tree")
    return pieces, tree


# ---------------------------------------------------------------- eta


def count_order_maps(F: OrientedForest, n: int) -> int:
    """``#C_n(F)``: surjections ``V -> {1..n}`` increasing along every edge.

    Dynamic programming over the set of vertices already placed: each new
    level is a non-empty set of vertices whose predecessors are all placed
    and which has no internal edge.
    """
    vs = list(F.vertices)
    idx = {v: k for k, v in enumerate(vs)}
    N = len(vs)
    if n > N or n < 1:
        return 0
    pred = [0] * N
    for a, b in F.edges:
        pred[idx[b]] |= 1 << idx[a]
    full = (1 << N) - 1
    counts = {0: 1}
    for _ in range(n):
        nxt: dict = {}
        for placed, ways in counts.items():
            free = full & ~placed
            avail = [k for k in range(N) if free >> k & 1 and pred[k] & ~placed == 0]
            amask = sum(1 << k for k in avail)
            sub = amask
            while sub:
                # vertices of one level need all predecessors strictly earlier
                if all(pred[k] & sub == 0 for k in avail if sub >> k & 1):
                    key = placed | sub
                    nxt[key] = nxt.get(key, 0) + ways
                sub = (sub - 1) & amask
        counts = nxt
    return counts.get(full, 0)


def count_order_maps_naive(F: OrientedForest, n: int) -> int:
    vs = list(F.vertices)
    total = 0
    for vals in cartesian(range(1, n + 1), repeat=len(vs)):
        f = dict(zip(vs, vals))
        if set(vals) == set(range(1, n + 1)) and all(f[a] < f[b] for a, b in F.edges):
            total += 1
    return total


@lru_cache(maxsize=8192)
def eta(F: OrientedForest) -> Fraction:
    """``sum_n (-1)^(n+1)/n * #C_n(F)``."""
    total = Fraction(0)
    for n in range(1, len(F.vertices) + 1):
        c = count_order_maps(F, n)
        if c:
            total += Fraction((-1) ** (n + 1) * c, n)
    return total


def linear_extensions(tree: OrientedForest) -> int:
    """Bijections ``V -> {1..#V}`` increasing along edges."""
    return count_order_maps(tree, len(tree.vertices))


# ---------------------------------------------------------------- nabla


def nabla(D: ArrowDiagram, key: Callable = class_key, limit: int = NABLA_LIMIT) -> StringClassPolynomial:
    """``sum_n sum_{f in lbl_n} (-1)^{|f|_-} z^{n-1} / n! * prod_i <D_{f,i}>``.

    A labeling in ``lbl_n`` is constant on each circle left by surgery along
    its cutting set ``C`` (pairwise unlinked, ``#C = n - 1``), so it is a
    bijection from circles to labels that increases across each positive cut
    arrow from the circle leaving its tail to the circle leaving its head,
    and decreases across negative ones.  Every such bijection contributes
    the same product, hence the count below.
    """
    if D.rank > limit:
        raise SizeLimitError(f"nabla limited to rank <= {limit}, got {D.rank}")
    alpha = D.string
    out = StringClassPolynomial()
    for C in special_subsets(alpha):
        region, slots = _regions(alpha, C)
        edges = []
        for i in C:
            a, b = alpha.arrows[i]
            lo, hi = region[a], region[(a - 1) % alpha.size]
            # f(a+) < f(a-) for a positive arrow
            edges.append((lo, hi) if D.signs[i] > 0 else (hi, lo))
        count = linear_extensions(OrientedForest(tuple(range(len(slots))), tuple(edges)))
        if not count:
            continue
        keys = []
        for s in slots:
            k = key(_region_string(alpha, s))
            if k == TRIVIAL_KEY:
                break
            keys.append(k)
        else:
            neg = sum(1 for i in C if D.signs[i] < 0)
            coeff = Fraction((-1) ** neg * count, factorial(len(C) + 1))
            out._add((len(C), tuple(keys)), coeff)
    return out


def nabla_by_labelings(D: ArrowDiagram, key: Callable = class_key) -> StringClassPolynomial:
    """The same polynomial summed over :func:`lbl_n` directly (slow reference route)."""
    out = StringClassPolynomial()
    edges = max(D.string.size, 1)
    for n in range(1, edges + 1):
        for lab in lbl_n(D, n):
            keys = []
            for i in range(1, n + 1):
                k = key(lab.block_string(i))
                if k == TRIVIAL_KEY:
                    break
                keys.append(k)
            else:
                out._add((n - 1, tuple(keys)), Fraction((-1) ** lab.negative_cuts, factorial(n)))
    return out


def diagram_variants(D: ArrowDiagram, e: int) -> tuple[ArrowDiagram, ArrowDiagram, ArrowDiagram]:
    """``(D^-_e, D'_e, D''_e)`` for a positive arrow ``e = (a, b)``."""
    if not 0 <= e < D.rank:
        raise StringError(f"arrow index {e} out of range")
    if D.signs[e] < 0:
        raise StringError("skein variants need a positive arrow")
    flipped = ArrowDiagram(D.string, D.signs[:e] + (-1,) + D.signs[e + 1 :])
    a, b = D.arrows[e]
    inner = restrict_diagram(D, arrows_inside(D.string, a, b))
    outer = restrict_diagram(D, arrows_inside(D.string, b, a))
    return flipped, inner, outer


def skein_defect(D: ArrowDiagram, e: int, key: Callable = class_key) -> StringClassPolynomial:
    """``nabla(D) - nabla(D^-_e) - z nabla(D'_e) nabla(D''_e)``."""
    minus, inner, outer = diagram_variants(D, e)
    return nabla(D, key) - nabla(minus, key) - (nabla(inner, key) * nabla(outer, key)).times_z()


# ---------------------------------------------------------------- diagram moves


@dataclass(frozen=True)
class DiagramMove:
    """A string move plus the signs of any arrows it adds."""

    move: MoveInstance
    signs: tuple[int, ...] = ()

    def __str__(self):
        if not self.signs:
            return str(self.move)
        return f"{self.move}{''.join('+' if s > 0 else '-' for s in self.signs)}"


def diagram_moves(D: ArrowDiagram) -> list[DiagramMove]:
    """Sites of the moves generating virtual-knot equivalence, with their inverses."""
    arrows, n = D.arrows, D.string.size
    out = []
    for i, (t, h) in enumerate(arrows):
        if (h - t) % n == 1:
            out.append(DiagramMove(MoveInstance(A_REMOVE, (i,))))
    for i, j in _b_remove_sites(arrows, n):
        if D.signs[i] != D.signs[j]:
            out.append(DiagramMove(MoveInstance(B_REMOVE, (i, j))))
    for kind, pairs in _c_sites(arrows, n):
        if kind not in (C_FORWARD, C_BACKWARD):
            continue
        moved = _swap_pairs(arrows, n, pairs)
        involved = [i for i in range(len(arrows)) if moved[i] != arrows[i]]
        if sum(1 for i in involved if D.signs[i] < 0) == 1:
            out.append(DiagramMove(MoveInstance(kind, pairs)))
    for g in _gaps(n):
        for s in (1, -1):
            out.append(DiagramMove(MoveInstance(A_ADD, (g, 0)), (s,)))
    gaps = list(_gaps(n))
    for x, g1 in enumerate(gaps):
        for g2 in gaps[x:]:
            for form in range(4):
                for s in (1, -1):
                    out.append(DiagramMove(MoveInstance(B_ADD, (g1, g2, form)), (s, -s)))
    return out


def apply_diagram_move(D: ArrowDiagram, dm: DiagramMove) -> ArrowDiagram:
    valid = {(m.move, m.signs) for m in diagram_moves(D)}
    if (dm.move, dm.signs) not in valid:
        raise MoveError(f"{dm} does not apply")
    arrows, n = D.arrows, D.string.size
    kind, site = dm.move.kind, dm.move.site
    if kind == A_REMOVE:
        keep = [i for i in range(D.rank) if i != site[0]]
        return ArrowDiagram(VirtualString(_delete(arrows, set(site))), tuple(D.signs[i] for i in keep))
    if kind == B_REMOVE:
        keep = [i for i in range(D.rank) if i not in site]
        return ArrowDiagram(VirtualString(_delete(arrows, set(site))), tuple(D.signs[i] for i in keep))
    if kind == A_ADD:
        return ArrowDiagram(VirtualString(_insert_a(arrows, n, *site)), D.signs + dm.signs)
    if kind == B_ADD:
        return ArrowDiagram(VirtualString(_insert_b(arrows, n, *site)), D.signs + dm.signs)
    return ArrowDiagram(VirtualString(_swap_pairs(arrows, n, site)), D.signs)


# ---------------------------------------------------------------- zeta


class DiagramPolynomial:
    """Polynomial in ``z`` over monomials of homeomorphism classes of arrow diagrams.

    Keys are ``(z_degree, sorted tuple of diagram codes)``; trivial diagrams
    are the unit and never appear as factors.
    """

    __slots__ = ("terms",)

    def __init__(self):
        self.terms: dict = {}

    def add(self, degree, codes, coeff):
        key = (degree, tuple(sorted(codes)))
        v = self.terms.get(key, Fraction(0)) + coeff
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    def items(self):
        return sorted(self.terms.items())

    def __eq__(self, other):
        return isinstance(other, DiagramPolynomial) and self.terms == other.terms


def zeta(alpha: VirtualString, limit: int = ZETA_LIMIT) -> DiagramPolynomial:
    """``sum over special F of eta(Gamma_F) z^#F prod [D^F_i]`` with every arrow signed ``+``."""
    if alpha.rank > limit:
        raise SizeLimitError(f"zeta limited to rank <= {limit}, got {alpha.rank}")
    plus = (1,) * alpha.rank
    out = DiagramPolynomial()
    for F in special_subsets(alpha):
        pieces, tree = surgery_tree(alpha, F, plus)
        weight = eta(tree)
        if not weight:
            continue
        codes = [canonical_code(p) for p in pieces if p.rank]
        out.add(len(F), codes, weight)
    return out
