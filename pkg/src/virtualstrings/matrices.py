"""Based matrices ``(G, s, b)``: skew-symmetric integer pairings with a basepoint at index 0."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .core import SizeLimitError

SIGMA_LIMIT = 13


class MatrixError(ValueError):
    pass


@dataclass(frozen=True)
class BasedMatrix:
    """Skew-symmetric integer matrix; row/column 0 is the basepoint ``s``.

    ``labels`` names the elements (``"s"`` first) and is ignored by equality.
    """

    b: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        b = tuple(tuple(int(x) for x in row) for row in self.b)
        if not b:
            raise MatrixError("a based matrix has at least the basepoint")
        n = len(b)
        for i, row in enumerate(b):
            if len(row) != n:
                raise MatrixError("matrix must be square")
            if row[i] != 0:
                raise MatrixError("diagonal must vanish")
            for j in range(i):
                if row[j] != -b[j][i]:
                    raise MatrixError(f"not skew-symmetric at ({i},{j})")
        object.__setattr__(self, "b", b)
        if self.labels is None:
            object.__setattr__(self, "labels", ("s",) + tuple(f"g{i}" for i in range(1, n)))
        elif len(self.labels) != n:
            raise MatrixError("one label per element")

    def __eq__(self, other):
        return isinstance(other, BasedMatrix) and self.b == other.b

    def __hash__(self):
        return hash(self.b)

    @property
    def size(self) -> int:
        """``#G`` including the basepoint."""
        return len(self.b)

    def row(self, i: int) -> tuple[int, ...]:
        return self.b[i]

    def submatrix(self, keep: Sequence[int]) -> "BasedMatrix":
        keep = [0] + [k for k in keep if k != 0]
        return BasedMatrix(tuple(tuple(self.b[i][j] for j in keep) for i in keep), tuple(self.labels[i] for i in keep))

    def permuted(self, order: Sequence[int]) -> "BasedMatrix":
        """Reorder the non-basepoint elements; ``order`` lists old indices ``1..n-1``."""
        return self.submatrix(list(order))

    @cached_property
    def canonical_key(self):
        return based_matrix_canonical(self)

    def __str__(self):
        return format_matrix(self.b)


def trivial_matrix() -> BasedMatrix:
    return BasedMatrix(((0,),))


def format_matrix(rows) -> str:
    if not rows:
        return "[]"
    width = max(len(str(x)) for row in rows for x in row)
    return "\n".join("[" + " ".join(str(x).rjust(width) for x in row) + "]" for row in rows)


# ---------------------------------------------------------------- exact rank


def integer_rank(rows) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, nrows):
            factor = m[r][col]
            row_r, row_p = m[r], m[rank]
            for c in range(col + 1, ncols):
                row_r[c] = (p * row_r[c] - factor * row_p[c]) // prev
            row_r[col] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def matrix_rank(T: BasedMatrix) -> int:
    return integer_rank(T.b)


# ---------------------------------------------------------------- transformations


def matrix_negate(T: BasedMatrix) -> BasedMatrix:
    return BasedMatrix(tuple(tuple(-x for x in row) for row in T.b), T.labels)


def matrix_minus_transform(T: BasedMatrix) -> BasedMatrix:
    """``T^-``: negate the basepoint row and shear the rest by ``b(s,g) - b(s,h)``."""
    b = T.b
    n = T.size
    out = [[0] * n for _ in range(n)]
    for h in range(1, n):
        out[0][h] = -b[0][h]
        out[h][0] = b[0][h]
    for g in range(1, n):
        for h in range(1, n):
            if g != h:
                out[g][h] = b[g][h] + b[0][g] - b[0][h]
    return BasedMatrix(tuple(map(tuple, out)), T.labels)


def direct_sum(T1: BasedMatrix, T2: BasedMatrix) -> BasedMatrix:
    """Glue at the basepoints; elements of different summands pair to zero."""
    n1, n2 = T1.size, T2.size
    n = n1 + n2 - 1
    out = [[0] * n for _ in range(n)]
    for i in range(n1):
        for j in range(n1):
            out[i][j] = T1.b[i][j]
    index = [0] + list(range(n1, n))
    for i in range(n2):
        for j in range(n2):
            if i or j:
                out[index[i]][index[j]] = T2.b[i][j]
    labels = T1.labels + tuple(f"{x}'" for x in T2.labels[1:])
    return BasedMatrix(tuple(map(tuple, out)), labels)


# ---------------------------------------------------------------- homology moves and reduction


def _annihilating(b, g) -> bool:
    return not any(b[g])


def _core(b, g) -> bool:
    return b[g] == b[0]


def _complementary(b, g1, g2) -> bool:
    return all(x + y == z for x, y, z in zip(b[g1], b[g2], b[0]))


def reducible_elements(T: BasedMatrix) -> list[tuple[int, ...]]:
    """Every single annihilating/core element and every complementary pair."""
    b = T.b
    found = []
    for g in range(1, T.size):
        if _annihilating(b, g) or _core(b, g):
            found.append((g,))
    for g1 in range(1, T.size):
        for g2 in range(g1 + 1, T.size):
            if _complementary(b, g1, g2):
                found.append((g1, g2))
    return found


def is_primitive(T: BasedMatrix) -> bool:
    return not reducible_elements(T)


def primitive_reduce(T: BasedMatrix, choose=None) -> BasedMatrix:
    """Strip annihilating elements, core elements and complementary pairs until none remain.

    ``choose`` picks which removable item to take (default: the first); the
    isomorphism class of the result does not depend on it.
    """
    while True:
        options = reducible_elements(T)
        if not options:
            return T
        drop = set(choose(options) if choose else options[0])
        T = T.submatrix([i for i in range(1, T.size) if i not in drop])


def add_annihilating(T: BasedMatrix) -> BasedMatrix:
    """Move M1: adjoin ``g`` with ``b(g, .) = 0``."""
    rows = [list(r) + [0] for r in T.b] + [[0] * (T.size + 1)]
    return BasedMatrix(tuple(map(tuple, rows)))


def add_core(T: BasedMatrix) -> BasedMatrix:
    """Move M2: adjoin ``g`` with ``b(g, h) = b(s, h)``."""
    n = T.size
    new = list(T.b[0]) + [0]
    rows = [list(T.b[i]) + [-new[i]] for i in range(n)] + [new]
    return BasedMatrix(tuple(map(tuple, rows)))


def add_complementary(T: BasedMatrix, values: Sequence[int]) -> BasedMatrix:
    """Move M3: adjoin ``g1, g2`` with ``b(g1, h) = values[h]`` and ``b(g2, h) = b(s, h) - values[h]``.

    ``values`` covers the old elements, ``values[0]`` being ``b(g1, s)``.  The
    pair entry is then forced: ``b(g1, g2) = b(g1, s)``.
    """
    n = T.size
    if len(values) != n:
        raise MatrixError("need one value per existing element")
    g1 = [int(v) for v in values]
    g2 = [T.b[0][h] - g1[h] for h in range(n)]
    rows = [list(T.b[i]) + [-g1[i], -g2[i]] for i in range(n)]
    rows.append(g1 + [0, g1[0]])
    rows.append(g2 + [-g1[0], 0])
    return BasedMatrix(tuple(map(tuple, rows)))


# ---------------------------------------------------------------- isomorphism


def _signatures(T: BasedMatrix):
    b = T.b
    return [None] + [(b[g][0], tuple(sorted(b[g][1:]))) for g in range(1, T.size)]


def based_matrix_canonical(T: BasedMatrix):
    """Lexicographically least encoding over orderings of ``G - {s}``.

    Elements are placed one at a time; the block appended for a candidate ``g``
    is ``(signature(g), b(g, x_1), ..., b(g, x_{k-1}))``.  Keeping only the
    candidates whose block is minimal at each depth yields the global minimum.
    """
    n = T.size
    sig = _signatures(T)
    b = T.b
    partials: list[tuple[int, ...]] = [()]
    blocks = []
    for _ in range(1, n):
        best = None
        nxt = []
        for order in partials:
            used = set(order)
            for g in range(1, n):
                if g in used:
                    continue
                block = (sig[g], tuple(b[g][x] for x in order))
                if best is None or block < best:
                    best = block
                    nxt = [order + (g,)]
                elif block == best:
                    nxt.append(order + (g,))
        blocks.append(best)
        partials = _dedupe_twins(nxt, b)
    return (n, tuple(blocks))


def _dedupe_twins(partials, b):
    # Orders that differ only by swapping interchangeable elements lead to
    # identical futures, so one of them is enough.
    kept: dict[frozenset, list] = {}
    for order in partials:
        group = kept.setdefault(frozenset(order), [])
        if not any(_twin_orders(other, order, b) for other in group):
            group.append(order)
    return [o for group in kept.values() for o in group]


def _twin_orders(o1, o2, b) -> bool:
    """True when ``o2`` is ``o1`` with some elements swapped for twins of themselves."""
    for x, y in zip(o1, o2):
        if x != y and not _twins(x, y, b):
            return False
    return True


def _twins(x, y, b) -> bool:
    if b[x][y] != 0:
        return False
    return all(b[x][h] == b[y][h] for h in range(len(b)) if h not in (x, y))


def isomorphic(T1: BasedMatrix, T2: BasedMatrix) -> bool:
    if T1.size != T2.size:
        return False
    if Counter(_signatures(T1)[1:]) != Counter(_signatures(T2)[1:]):
        return False
    return T1.canonical_key == T2.canonical_key


def find_isomorphism(T1: BasedMatrix, T2: BasedMatrix):
    """An explicit bijection ``perm`` with ``T2.b[perm[i]][perm[j]] == T1.b[i][j]``, or None."""
    n = T1.size
    if n != T2.size:
        return None
    s1, s2 = _signatures(T1), _signatures(T2)
    perm = [0] * n
    used = [False] * n
    used[0] = True

    def extend(i):
        if i == n:
            return True
        for g in range(1, n):
            if used[g] or s2[g] != s1[i]:
                continue
            if all(T2.b[g][perm[j]] == T1.b[i][j] for j in range(i)):
                perm[i] = g
                used[g] = True
                if extend(i + 1):
                    return True
                used[g] = False
        return False

    return tuple(perm) if extend(1) else None


# ---------------------------------------------------------------- numerical invariants


def u_of_matrix(T: BasedMatrix) -> dict[int, int]:
    """``u_T = sum sign(b(e,s)) t^|b(e,s)|`` as a sparse ``{degree: coefficient}`` map."""
    out: dict[int, int] = {}
    for g in range(1, T.size):
        k = T.b[g][0]
        if k:
            out[abs(k)] = out.get(abs(k), 0) + (1 if k > 0 else -1)
    return {k: c for k, c in sorted(out.items()) if c}


def v_k(T: BasedMatrix, k: int) -> int:
    return sum(1 for g in range(1, T.size) if T.b[g][0] == k)


def v_kA(T: BasedMatrix, k: int, A) -> int:
    target = Counter(A)
    return sum(1 for g in range(1, T.size) if T.b[g][0] == k and Counter(T.b[g][1:]) == target)


# ---------------------------------------------------------------- genus of a based matrix


def _near_perfect_matchings(items):
    """Partitions of ``items`` into pairs plus at most one singleton."""
    if not items:
        yield []
        return
    if len(items) % 2 == 1:
        for k in range(len(items)):
            rest = items[:k] + items[k + 1 :]
            for m in _perfect(rest):
                yield [(items[k],)] + m
    else:
        yield from _perfect(items)


def _perfect(items):
    if not items:
        yield []
        return
    x = items[0]
    for k in range(1, len(items)):
        rest = items[1:k] + items[k + 1 :]
        for m in _perfect(rest):
            yield [(x, items[k])] + m


def _all_partial_matchings(items):
    if not items:
        yield []
        return
    x, rest = items[0], items[1:]
    for m in _all_partial_matchings(rest):
        yield [(x,)] + m
    for k in range(len(rest)):
        others = rest[:k] + rest[k + 1 :]
        for m in _all_partial_matchings(others):
            yield [(x, rest[k])] + m


def partition_matrix(T: BasedMatrix, blocks) -> list[list[int]]:
    blocks = [(0,)] + list(blocks)
    b = T.b
    return [[sum(b[g][h] for g in X for h in Y) for Y in blocks] for X in blocks]


def sigma_genus(T: BasedMatrix, limit: int = SIGMA_LIMIT, exhaustive: bool = False) -> int:
    """Half the least rank of a regular-partition matrix.

    Merging two singleton blocks into one pair replaces the block matrix by
    ``P^T M P`` for a 0/1 matrix ``P``, which cannot raise the rank, so it
    suffices to scan matchings leaving at most one element unpaired.
    ``exhaustive=True`` scans every partial matching instead.
    """
    if T.size > limit:
        raise SizeLimitError(f"sigma needs #G <= {limit}, got {T.size}")
    items = list(range(1, T.size))
    walker = _all_partial_matchings if exhaustive else _near_perfect_matchings
    best = None
    for blocks in walker(items):
        r = integer_rank(partition_matrix(T, blocks))
        if best is None or r < best:
            best = r
            if best == 0:
                break
    return (best or 0) // 2


def is_hyperbolic(T: BasedMatrix, limit: int = SIGMA_LIMIT) -> bool:
    """Some regular partition has an all-zero matrix."""
    if T.size > limit:
        raise SizeLimitError(f"hyperbolicity needs #G <= {limit}, got {T.size}")
    for blocks in _near_perfect_matchings(list(range(1, T.size))):
        if not any(any(row) for row in partition_matrix(T, blocks)):
            return True
    return False
