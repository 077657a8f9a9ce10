"""Gauss words: realizability on the 2-sphere, compatible bipartitions, irreducibility."""

from __future__ import annotations

from collections import Counter
from itertools import product as cartesian
from typing import Iterable, Sequence

from .core import Bipartition, SizeLimitError, StringError, VirtualString, _letter_sort

BIPARTITION_LIMIT = 20

GaussWord = tuple


class NotRealizableError(ValueError):
    pass


def parse_word(text: str | Sequence) -> GaussWord:
    """``"1231"`` letter by letter, or ``"ab,cd,ab,cd"`` split on commas."""
    if not isinstance(text, str):
        word = tuple(str(x) for x in text)
    elif "," in text:
        word = tuple(x.strip() for x in text.split(",") if x.strip())
    else:
        word = tuple(text.strip())
    counts = Counter(word)
    bad = sorted((x for x, c in counts.items() if c != 2), key=_letter_sort)
    if bad:
        raise StringError(f"letters not occurring exactly twice: {bad}")
    return word


def alphabet(word: GaussWord) -> list:
    return sorted(set(word), key=_letter_sort)


def parse_bipartition(text: str, word: GaussWord | None = None) -> Bipartition:
    """``"12|34"`` or ``"ab,cd|ef"``; an empty side may be left blank or written ``-``."""
    if "|" not in text:
        raise StringError("bipartition needs the form X|Y")
    left, right = text.split("|", 1)

    def part(s):
        s = s.strip()
        if s in ("", "-"):
            return frozenset()
        if "," in s:
            return frozenset(x.strip() for x in s.split(",") if x.strip())
        return frozenset(s)

    bip = Bipartition(part(left), part(right))
    if word is not None:
        _check_bipartition(word, bip)
    return bip


def _check_bipartition(word, bip):
    if bip.letters != frozenset(word):
        raise StringError("bipartition must split exactly the alphabet of the word")


# ---------------------------------------------------------------- interlacement


def _positions(word):
    pos: dict = {}
    for k, x in enumerate(word):
        pos.setdefault(x, []).append(k)
    return pos


def interlacement(word: GaussWord) -> dict:
    """``w_i``: the letters occurring exactly once between the two occurrences of ``i``."""
    word = parse_word(word) if isinstance(word, str) else word
    pos = _positions(word)
    out = {}
    for i, (p, q) in pos.items():
        between = Counter(word[p + 1 : q])
        out[i] = frozenset(x for x, c in between.items() if c == 1)
    return out


def condition_i(word) -> bool:
    w = interlacement(_word(word))
    return all(len(s) % 2 == 0 for s in w.values())


def condition_ii(word) -> bool:
    w = interlacement(_word(word))
    letters = list(w)
    for a in range(len(letters)):
        for b in range(a + 1, len(letters)):
            i, j = letters[a], letters[b]
            if j not in w[i] and len(w[i] & w[j]) % 2:
                return False
    return True


def _word(word):
    return parse_word(word) if isinstance(word, str) else tuple(word)


def compatible(word, bip: Bipartition) -> bool:
    """Interlaced pairs have evenly many common interlaced letters exactly when they lie in different parts."""
    word = _word(word)
    _check_bipartition(word, bip)
    w = interlacement(word)
    for i in w:
        for j in w[i]:
            even = len(w[i] & w[j]) % 2 == 0
            different = bip.part_of(i) != bip.part_of(j)
            if even != different:
                return False
    return True


def _components(w):
    seen = set()
    comps = []
    for start in sorted(w, key=_letter_sort):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        k = 0
        while k < len(comp):
            for y in sorted(w[comp[k]], key=_letter_sort):
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
            k += 1
        comps.append(comp)
    return comps


def compatible_bipartitions(word, limit: int = BIPARTITION_LIMIT) -> list[Bipartition]:
    """Compatible bipartitions via side propagation on each component of the interlacement graph.

    Within a component the side of one letter fixes all others; components
    are then combined freely (up to swapping the two parts) and each
    candidate is checked globally.
    """
    word = _word(word)
    w = interlacement(word)
    if len(w) > limit:
        raise SizeLimitError(f"alphabet limited to {limit} letters, got {len(w)}")
    if not w:
        return [Bipartition(frozenset(), frozenset())]
    comps = _components(w)
    sides = []
    for comp in comps:
        side = {comp[0]: 0}
        for x in comp:
            for y in w[x]:
                want = side[x] ^ (len(w[x] & w[y]) % 2 == 0)
                if y not in side:
                    side[y] = want
                elif side[y] != want:
                    return []
        sides.append(side)
    found = []
    for flips in cartesian((0, 1), repeat=len(comps) - 1):
        flips = (0,) + flips
        first, second = set(), set()
        for side, flip in zip(sides, flips):
            for x, v in side.items():
                (first if v ^ flip == 0 else second).add(x)
        bip = Bipartition(frozenset(first), frozenset(second))
        if compatible(word, bip):
            found.append(bip)
    return sorted(set(found), key=str)


def realizable_on_sphere(word, bip: Bipartition) -> bool:
    word = _word(word)
    return condition_i(word) and condition_ii(word) and compatible(word, bip)


def realizable(word) -> bool:
    word = _word(word)
    return condition_i(word) and condition_ii(word) and bool(compatible_bipartitions(word))


def irreducible(word) -> bool:
    """No circular permutation splits as a concatenation of two non-empty Gauss words."""
    word = _word(word)
    n = len(word)
    if n == 0:
        return False
    for r in range(n):
        rot = word[r:] + word[:r]
        counts: Counter = Counter()
        odd = 0
        for k in range(n - 1):
            counts[rot[k]] += 1
            odd += 1 if counts[rot[k]] == 1 else -1
            if odd == 0:
                return False
    return True


def irreducible_factor_count(word) -> int:
    """Number of connected components of the interlacement graph.

    For a concatenation of ``k`` irreducible words this is ``k``; it also
    counts nested pieces such as the three in ``112332``.
    """
    word = _word(word)
    if not word:
        return 0
    return len(_components(interlacement(word)))


def linear_factors(word) -> list[GaussWord]:
    """Split ``word`` (as written) wherever every letter so far has closed up."""
    word = _word(word)
    out, start = [], 0
    counts: Counter = Counter()
    odd = 0
    for k, x in enumerate(word):
        counts[x] += 1
        odd += 1 if counts[x] == 1 else -1
        if odd == 0:
            out.append(word[start : k + 1])
            start = k + 1
    return out


def string_from_word(word, bip: Bipartition) -> VirtualString:
    """Orient each letter's arrow from its odd position (letters of the first part) or its even one.

    Positions count from 1; arrows are numbered by sorted letter.
    """
    word = _word(word)
    _check_bipartition(word, bip)
    if not condition_i(word):
        raise StringError("condition (i) fails: occurrences cannot be split by parity")
    pos = _positions(word)
    arrows = []
    for letter in alphabet(word):
        p, q = pos[letter]
        odd, even = (p, q) if p % 2 == 0 else (q, p)
        if bip.part_of(letter) == 0:
            arrows.append((odd, even))
        else:
            arrows.append((even, odd))
    return VirtualString(tuple(arrows))


def _canonical_pair(word, bip):
    n = len(word)
    best = None
    for r in range(max(n, 1)):
        rot = word[r:] + word[:r]
        relabel: dict = {}
        for x in rot:
            relabel.setdefault(x, len(relabel))
        parts = sorted(tuple(sorted(relabel[x] for x in part)) for part in (bip.first, bip.second))
        cand = (tuple(relabel[x] for x in rot), tuple(parts))
        if best is None or cand < best:
            best = cand
    return best


def sphere_curves_homeomorphic(pair1, pair2) -> bool:
    """Equality of (word, bipartition) pairs up to rotation and relabeling; both must be realizable."""
    (w1, b1), (w2, b2) = pair1, pair2
    w1, w2 = _word(w1), _word(w2)
    for w, b in ((w1, b1), (w2, b2)):
        if not realizable_on_sphere(w, b):
            raise NotRealizableError(f"{''.join(w)} with {b} is not realizable on the sphere")
    if len(w1) != len(w2):
        return False
    return _canonical_pair(w1, b1) == _canonical_pair(w2, b2)


def all_bipartitions(word) -> Iterable[Bipartition]:
    """Every bipartition of the alphabet (brute force, for cross-checks)."""
    letters = alphabet(_word(word))
    if not letters:
        yield Bipartition(frozenset(), frozenset())
        return
    first, rest = letters[0], letters[1:]
    for bits in cartesian((0, 1), repeat=len(rest)):
        X = {first} | {x for x, bit in zip(rest, bits) if bit == 0}
        Y = {x for x, bit in zip(rest, bits) if bit == 1}
        yield Bipartition(frozenset(X), frozenset(Y))
