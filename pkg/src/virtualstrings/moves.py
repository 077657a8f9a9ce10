"""Homotopy moves on virtual strings, bounded normalization and small-rank enumeration."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

from .core import (
    SizeLimitError,
    StringError,
    VirtualString,
    all_strings,
    arrows_code,
    canonical_code,
    code_to_arrows,
    string_from_code,
)

A_ADD = "A_add"
A_REMOVE = "A_remove"
B_ADD = "B_add"
B_REMOVE = "B_remove"
C_FORWARD = "C_forward"
C_BACKWARD = "C_backward"
CPLUS_FORWARD = "Cplus_forward"
CPLUS_BACKWARD = "Cplus_backward"

MOVE_KINDS = (A_ADD, A_REMOVE, B_ADD, B_REMOVE, C_FORWARD, C_BACKWARD, CPLUS_FORWARD, CPLUS_BACKWARD)
C_KINDS = (C_FORWARD, C_BACKWARD, CPLUS_FORWARD, CPLUS_BACKWARD)

ENUMERATION_LIMIT = 5


class MoveError(ValueError):
    """A move instance does not apply to the given string."""


@dataclass(frozen=True)
class MoveInstance:
    """``kind`` plus its ``site``.

    Sites: ``A_remove (arrow,)``; ``A_add (gap, flip)``; ``B_remove (arrow, arrow)``;
    ``B_add (gap1, gap2, form)``; C kinds ``(x1, x2, x3)``, the first slots of the
    three adjacent slot pairs ``(x, x+1 mod 2m)`` whose contents get swapped.
    A gap ``g`` is the place just before slot ``g``.
    """

    kind: str
    site: tuple[int, ...]

    def __str__(self):
        return f"{self.kind}{list(self.site)}"


# ---------------------------------------------------------------- raw helpers on arrow tuples


def _delete(arrows, drop):
    """Remove the arrows with indices in ``drop`` and close up the slot numbering."""
    gone = sorted(x for i in drop for x in arrows[i])
    keep = [a for i, a in enumerate(arrows) if i not in drop]

    def shift(x):
        k = 0
        for g in gone:
            if g < x:
                k += 1
        return x - k

    return tuple((shift(t), shift(h)) for t, h in keep)


def _insert_a(arrows, n, gap, flip):
    moved = tuple((t + 2 * (t >= gap), h + 2 * (h >= gap)) for t, h in arrows)
    new = (gap + 1, gap) if flip else (gap, gap + 1)
    return moved + (new,)


def _insert_b(arrows, n, g1, g2, form):
    def mv(x):
        return x + 2 * (x >= g1) + 2 * (x >= g2)

    moved = tuple((mv(t), mv(h)) for t, h in arrows)
    P = (g1, g1 + 1)
    Q = (g2 + 2, g2 + 3)
    ai, bi = divmod(form, 2)
    a, a2 = P[ai], P[1 - ai]
    b, b2 = Q[bi], Q[1 - bi]
    return moved + ((a, b), (b2, a2))


def _swap_pairs(arrows, n, pairs):
    swap = {}
    for x in pairs:
        y = (x + 1) % n
        swap[x] = y
        swap[y] = x
    return tuple((swap.get(t, t), swap.get(h, h)) for t, h in arrows)


def _table(arrows, n):
    table = [None] * n
    for i, (t, h) in enumerate(arrows):
        table[t] = (i, 0)
        table[h] = (i, 1)
    return table


def _gaps(n):
    return range(max(n, 1))


def _c_sites(arrows, n):
    """Yield ``(kind, pairs)`` for every C-type site (each found once)."""
    if len(arrows) < 3:
        return
    table = _table(arrows, n)
    seen = set()

    def emit(kind, pairs):
        key = (kind, tuple(sorted(pairs)))
        slots = {p for x in pairs for p in (x, (x + 1) % n)}
        if len(slots) == 6 and key not in seen:
            seen.add(key)
            return key
        return None

    for t, h in arrows:
        # C_forward: arrows (a+, b), (b+, c), (c+, a); every pair reads (head, tail).
        a = (t - 1) % n
        if table[a][1] == 1:
            b = h
            i2, r2 = table[(b + 1) % n]
            if r2 == 0:
                c = arrows[i2][1]
                i3, r3 = table[(c + 1) % n]
                if r3 == 0 and arrows[i3][1] == a:
                    k = emit(C_FORWARD, (a, b, c))
                    if k:
                        yield k
        # C_backward: arrows (a, b+), (b, c+), (c, a+); every pair reads (tail, head).
        a = t
        if table[(a + 1) % n][1] == 1:
            b = (h - 1) % n
            i2, r2 = table[b]
            if r2 == 0:
                c = (arrows[i2][1] - 1) % n
                i3, r3 = table[c]
                if r3 == 0 and arrows[i3][1] == (a + 1) % n:
                    k = emit(C_BACKWARD, (a, b, c))
                    if k:
                        yield k
        # Cplus_forward: arrows (a, b), (a+, c), (b+, c+).
        a, b = t, h
        i2, r2 = table[(a + 1) % n]
        i3, r3 = table[(b + 1) % n]
        if r2 == 0 and r3 == 0:
            c = arrows[i2][1]
            if arrows[i3][1] == (c + 1) % n:
                k = emit(CPLUS_FORWARD, (a, b, c))
                if k:
                    yield k
        # Cplus_backward: arrows (a+, b+), (a, c+), (b, c).
        a, b = (t - 1) % n, (h - 1) % n
        i2, r2 = table[a]
        i3, r3 = table[b]
        if r2 == 0 and r3 == 0:
            c = arrows[i3][1]
            if arrows[i2][1] == (c + 1) % n:
                k = emit(CPLUS_BACKWARD, (a, b, c))
                if k:
                    yield k


def _b_remove_sites(arrows, n):
    if len(arrows) < 2:
        return
    table = _table(arrows, n)
    seen = set()
    for i, (t1, h1) in enumerate(arrows):
        for nb in ((h1 - 1) % n, (h1 + 1) % n):
            j, role = table[nb]
            if role != 0 or j == i:
                continue
            h2 = arrows[j][1]
            if (h2 - t1) % n in (1, n - 1):
                key = (min(i, j), max(i, j))
                if key not in seen:
                    seen.add(key)
                    yield key


def _a_remove_sites(arrows, n):
    for i, (t, h) in enumerate(arrows):
        if (h - t) % n in (1, n - 1):
            yield i


def _moves(arrows, n, additions: int = 2) -> Iterator[tuple[MoveInstance, tuple]]:
    """Every applicable move with its result; ``additions`` caps the rank increase."""
    for kind, pairs in _c_sites(arrows, n):
        yield MoveInstance(kind, pairs), _swap_pairs(arrows, n, pairs)
    for i in _a_remove_sites(arrows, n):
        yield MoveInstance(A_REMOVE, (i,)), _delete(arrows, {i})
    for i, j in _b_remove_sites(arrows, n):
        yield MoveInstance(B_REMOVE, (i, j)), _delete(arrows, {i, j})
    if additions >= 1:
        for g in _gaps(n):
            for flip in (0, 1):
                yield MoveInstance(A_ADD, (g, flip)), _insert_a(arrows, n, g, flip)
    if additions >= 2:
        gaps = list(_gaps(n))
        for x, g1 in enumerate(gaps):
            for g2 in gaps[x:]:
                for form in range(4):
                    yield MoveInstance(B_ADD, (g1, g2, form)), _insert_b(arrows, n, g1, g2, form)


# ---------------------------------------------------------------- public move API


def applicable_moves(alpha: VirtualString) -> list[MoveInstance]:
    """All move instances on ``alpha``: removals and C-type sites, plus every additive site."""
    return [mv for mv, _ in _moves(alpha.arrows, alpha.size, additions=2)]


def apply_move(alpha: VirtualString, move: MoveInstance) -> VirtualString:
    arrows, n = alpha.arrows, alpha.size
    kind, site = move.kind, tuple(move.site)
    if kind == A_REMOVE:
        (i,) = site
        if i not in set(_a_remove_sites(arrows, n)):
            raise MoveError(f"{move} does not apply")
        return VirtualString(_delete(arrows, {i}))
    if kind == B_REMOVE:
        if tuple(sorted(site)) not in set(_b_remove_sites(arrows, n)):
            raise MoveError(f"{move} does not apply")
        return VirtualString(_delete(arrows, set(site)))
    if kind == A_ADD:
        g, flip = site
        if not (g in _gaps(n) and flip in (0, 1)):
            raise MoveError(f"{move} does not apply")
        return VirtualString(_insert_a(arrows, n, g, flip))
    if kind == B_ADD:
        g1, g2, form = site
        if not (g1 in _gaps(n) and g2 in _gaps(n) and g1 <= g2 and form in range(4)):
            raise MoveError(f"{move} does not apply")
        return VirtualString(_insert_b(arrows, n, g1, g2, form))
    if kind in C_KINDS:
        if (kind, tuple(sorted(site))) not in set(_c_sites(arrows, n)):
            raise MoveError(f"{move} does not apply")
        return VirtualString(_swap_pairs(arrows, n, site))
    raise MoveError(f"unknown move kind {kind!r}")


def inverse_kind(kind: str) -> str:
    return {
        A_ADD: A_REMOVE,
        A_REMOVE: A_ADD,
        B_ADD: B_REMOVE,
        B_REMOVE: B_ADD,
        C_FORWARD: C_BACKWARD,
        C_BACKWARD: C_FORWARD,
        CPLUS_FORWARD: CPLUS_BACKWARD,
        CPLUS_BACKWARD: CPLUS_FORWARD,
    }[kind]


# ---------------------------------------------------------------- normalization

TRIVIAL_STATUS = "TRIVIAL"
REDUCED = "REDUCED"
BUDGET_EXHAUSTED = "BUDGET_EXHAUSTED"


@dataclass(frozen=True)
class Budget:
    max_states: int = 200_000
    max_rank_increase: int = 2


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class NormalizationResult:
    """``moves_applied`` replays from ``canonical_string(input)``: apply each move,
    then re-canonicalize; the last state is ``normal_form``."""

    normal_form: VirtualString
    status: str
    moves_applied: tuple[MoveInstance, ...] = field(default=())
    states_explored: int = 0
    proven_minimal: bool = False


def _neighbors(code, additions):
    arrows = code_to_arrows(code)
    n = len(code)
    for mv, new in _moves(arrows, n, additions):
        yield mv, arrows_code(new, n + 2 * (len(new) - len(arrows)))


def _trace(parents, code):
    moves = []
    while parents[code] is not None:
        code, mv = parents[code]
        moves.append(mv)
    return moves[::-1]


def _search(start, cap, max_states, stop_rank):
    """Breadth-first search allowing ranks up to ``rank(start) + cap``.

    Returns ``(parents, improved_code_or_None, exhausted)`` and stops at the
    first state of smaller rank.
    """
    base = len(start) // 2
    top = base + cap
    parents = {start: None}
    queue = deque([start])
    while queue:
        code = queue.popleft()
        rank = len(code) // 2
        for mv, nxt in _neighbors(code, min(2, top - rank)):
            if nxt in parents:
                continue
            parents[nxt] = (code, mv)
            if len(nxt) // 2 < base:
                return parents, nxt, False
            if len(parents) >= max_states:
                return parents, None, True
            queue.append(nxt)
    return parents, None, False


def normalize(alpha: VirtualString, budget: Budget = DEFAULT_BUDGET, lower_bound: int | None = None) -> NormalizationResult:
    """Look for a homotopic string of least rank.

    Searches with C-type moves and removals, allowing temporary rank increases
    of ``0, 1, ..., max_rank_increase``; every rank drop restarts the search
    from the smaller string.  The search ends early once the rank equals a
    proven lower bound (``hr_lower_bound`` unless ``lower_bound`` is given).
    """
    if lower_bound is None:
        from .invariants import hr_lower_bound

        lower_bound = hr_lower_bound(alpha)
    start = canonical_code(alpha)
    current = start
    trace: list[MoveInstance] = []
    explored = 0
    exhausted = False
    while len(current) // 2 > lower_bound:
        improved = None
        for cap in range(budget.max_rank_increase + 1):
            remaining = budget.max_states - explored
            if remaining <= 0:
                exhausted = True
                break
            parents, improved, hit = _search(current, cap, remaining, lower_bound)
            explored += len(parents)
            if improved is not None:
                break
            if hit:
                exhausted = True
                break
        if improved is None:
            break
        trace.extend(_trace(parents, improved))
        current = improved
    rank = len(current) // 2
    minimal = rank <= lower_bound
    if rank == 0:
        status = TRIVIAL_STATUS
    elif exhausted and not minimal:
        status = BUDGET_EXHAUSTED
    else:
        status = REDUCED
    return NormalizationResult(string_from_code(current), status, tuple(trace), explored, minimal)


def replay(alpha: VirtualString, moves) -> VirtualString:
    """Follow a normalization trace from ``alpha``."""
    state = string_from_code(canonical_code(alpha))
    for mv in moves:
        state = string_from_code(canonical_code(apply_move(state, mv)))
    return state


def component_codes(alpha: VirtualString, cap: int, max_states: int):
    """Codes reachable from ``alpha`` without exceeding ``rank(alpha) + cap`` or dropping below ``rank(alpha)``.

    Returns ``(codes_at_base_rank, complete)``.
    """
    start = canonical_code(alpha)
    base = len(start) // 2
    top = base + cap
    seen = {start}
    queue = deque([start])
    while queue:
        code = queue.popleft()
        rank = len(code) // 2
        for _, nxt in _neighbors(code, min(2, top - rank)):
            if nxt in seen or len(nxt) // 2 < base:
                continue
            seen.add(nxt)
            if len(seen) >= max_states:
                return {c for c in seen if len(c) // 2 == base}, False
            queue.append(nxt)
    return {c for c in seen if len(c) // 2 == base}, True


# ---------------------------------------------------------------- enumeration


def enumerate_strings(m: int, limit: int = ENUMERATION_LIMIT) -> set:
    """Canonical codes of all rank-``m`` strings up to homeomorphism."""
    if m < 0:
        raise StringError("rank must be non-negative")
    if m > limit:
        raise SizeLimitError(f"enumeration limited to rank <= {limit}, got {m}")
    if m == 0:
        return {()}
    codes = set()
    n = 2 * m
    # Fix slot 0 as a tail of arrow 0: every class has such a representative.
    for alpha in all_strings(m):
        if alpha.arrows[0][0] != 0:
            continue
        codes.add(arrows_code(alpha.arrows, n))
    return codes


# ---------------------------------------------------------------- equivalence heuristic

HOMOTOPIC = "HOMOTOPIC"
DISTINCT = "DISTINCT"
UNKNOWN_EQUIV = "UNKNOWN"


def distinguishing_invariant(alpha: VirtualString, beta: VirtualString):
    """Name of the first implemented invariant separating the two strings, or None."""
    from .invariants import primitive_matrix, u_polynomial
    from .matrices import isomorphic, sigma_genus

    if u_polynomial(alpha) != u_polynomial(beta):
        return "u"
    T0a, T0b = primitive_matrix(alpha), primitive_matrix(beta)
    if not isomorphic(T0a, T0b):
        return "T0"
    try:
        if sigma_genus(T0a) != sigma_genus(T0b):
            return "sigma"
    except SizeLimitError:
        pass
    return None


def homotopic_heuristic(alpha: VirtualString, beta: VirtualString, budget: Budget = DEFAULT_BUDGET) -> tuple[str, str]:
    """``(verdict, reason)``; a definite verdict is always correct."""
    if canonical_code(alpha) == canonical_code(beta):
        return HOMOTOPIC, "homeomorphic"
    inv = distinguishing_invariant(alpha, beta)
    if inv:
        return DISTINCT, inv
    ra, rb = normalize(alpha, budget), normalize(beta, budget)
    if canonical_code(ra.normal_form) == canonical_code(rb.normal_form):
        return HOMOTOPIC, "common normal form"
    fa, ca = component_codes(ra.normal_form, 1, budget.max_states // 4)
    if canonical_code(rb.normal_form) in fa:
        return HOMOTOPIC, "connected by moves"
    return UNKNOWN_EQUIV, "no invariant differs and no connecting path found"


# ---------------------------------------------------------------- homotopy class keys

TRIVIAL_KEY = ()
KEY_BUDGET = Budget(max_states=50_000, max_rank_increase=2)
KEY_EXPLORATION_INCREASE = 2
_key_cache: dict = {}


def class_key(alpha: VirtualString, budget: Budget = KEY_BUDGET):
    """A code standing for the homotopy class of ``alpha``; ``()`` means trivial.

    Strings of rank at most 2 are trivial, and a rank-3 string is trivial
    exactly when its u-polynomial vanishes.  Otherwise the string is
    normalized and the key is the least code among the least-rank strings
    reachable through rank increases of at most
    ``KEY_EXPLORATION_INCREASE``.  Equal keys imply homotopic strings;
    homotopic strings whose least-rank forms are not connected within that
    window would get different keys.
    """
    code = canonical_code(alpha)
    hit = _key_cache.get(code)
    if hit is not None:
        return hit
    key = _compute_key(code, budget)
    _key_cache[code] = key
    return key


def _compute_key(code, budget):
    from .invariants import u_polynomial

    rank = len(code) // 2
    alpha = string_from_code(code)
    if rank <= 2:
        return TRIVIAL_KEY
    if rank == 3:
        return TRIVIAL_KEY if u_polynomial(alpha).is_zero() else code
    result = normalize(alpha, budget)
    nf = result.normal_form
    if nf.rank <= 3:
        return class_key(nf, budget)
    codes, _ = component_codes(nf, KEY_EXPLORATION_INCREASE, budget.max_states)
    return min(codes)


def clear_key_cache() -> None:
    _key_cache.clear()
