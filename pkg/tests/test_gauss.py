import pytest

from virtualstrings.core import (
    Bipartition,
    SizeLimitError,
    StringError,
    all_strings,
    bipartition_of,
    gauss_word_of,
    q_number,
)
from virtualstrings.gauss import (
    NotRealizableError,
    all_bipartitions,
    compatible,
    compatible_bipartitions,
    condition_i,
    condition_ii,
    interlacement,
    irreducible,
    irreducible_factor_count,
    linear_factors,
    parse_bipartition,
    parse_word,
    realizable,
    realizable_on_sphere,
    sphere_curves_homeomorphic,
    string_from_word,
)
from virtualstrings.invariants import genus

from oracles import ribbon_genus


def gauss_words(k):
    """Every Gauss word on letters 1..k up to relabeling (one per pairing of positions)."""

    def pairings(free):
        if not free:
            yield []
            return
        x = free[0]
        for j in range(1, len(free)):
            for rest in pairings(free[1:j] + free[j + 1 :]):
                yield [(x, free[j])] + rest

    for p in pairings(list(range(2 * k))):
        word = [None] * (2 * k)
        for letter, (a, b) in enumerate(p, start=1):
            word[a] = word[b] = str(letter)
        yield tuple(word)


WORDS = [w for k in range(0, 6) for w in gauss_words(k)]


def test_parse_word_forms():
    assert parse_word("1221") == ("1", "2", "2", "1")
    assert parse_word("ab,cd,ab,cd") == ("ab", "cd", "ab", "cd")
    with pytest.raises(StringError):
        parse_word("123")


def test_parse_bipartition():
    b = parse_bipartition("2|1")
    assert str(b) == "1|2"
    assert str(parse_bipartition("12|-")) == "12|-"
    with pytest.raises(StringError):
        parse_bipartition("12", None)
    with pytest.raises(StringError):
        parse_bipartition("1|3", parse_word("1122"))


@pytest.mark.parametrize("word", ["1231245345", "1231435425"])
def test_condition_ii_fails(word):
    assert condition_i(word) and not condition_ii(word)
    assert not realizable(word)


def test_no_compatible_bipartition():
    w = "123456214365"
    assert condition_i(w) and condition_ii(w)
    assert compatible_bipartitions(w) == []
    assert not realizable(w)


def test_two_curls():
    bips = compatible_bipartitions("1122")
    assert len(bips) == 2
    assert realizable("1122")
    assert not sphere_curves_homeomorphic(("1122", bips[0]), ("1122", bips[1]))
    assert sphere_curves_homeomorphic(("1122", bips[0]), ("2211", bips[0]))


def test_small_examples():
    assert not condition_i("1212")
    assert irreducible("1212") and not irreducible("1221")
    assert not irreducible("")
    assert realizable("")
    assert compatible_bipartitions("") == [Bipartition(frozenset(), frozenset())]
    assert string_from_word("", Bipartition(frozenset(), frozenset())).rank == 0


def test_interlacement_symmetric():
    for w in WORDS:
        wi = interlacement(w)
        for i, s in wi.items():
            assert i not in s
            for j in s:
                assert i in wi[j]


def test_bipartitions_match_brute_force():
    for w in WORDS:
        brute = sorted({b for b in all_bipartitions(w) if compatible(w, b)}, key=str)
        assert compatible_bipartitions(w) == brute


def test_bipartition_count_matches_factor_count():
    concatenations = 0
    for w in WORDS:
        if not w:
            continue
        n = len(compatible_bipartitions(w))
        c = irreducible_factor_count(w)
        assert n in (0, 2 ** (c - 1))
        factors = linear_factors(w)
        if all(irreducible(f) for f in factors):
            concatenations += 1
            assert n in (0, 2 ** (len(factors) - 1))
            assert c == len(factors)
    assert concatenations > 100


def test_nested_word_components():
    assert irreducible_factor_count("112332") == 3
    assert len(compatible_bipartitions("112332")) == 4
    assert ["".join(f) for f in linear_factors("112332")] == ["11", "2332"]


def test_irreducible_words_have_connected_interlacement():
    from virtualstrings.gauss import _components

    for w in WORDS:
        if w and irreducible(w):
            assert len(_components(interlacement(w))) == 1
            assert len(compatible_bipartitions(w)) <= 1


def test_realizability_matches_genus_zero():
    for w in WORDS:
        if condition_i(w):
            oracle = any(ribbon_genus(string_from_word(w, b)) == 0 for b in all_bipartitions(w))
        else:
            oracle = False
        assert realizable(w) == oracle, w


def test_string_from_word_round_trip():
    for w in WORDS:
        for b in compatible_bipartitions(w):
            if not condition_i(w):
                continue
            alpha = string_from_word(w, b)
            relabel = {str(i + 1): letter for i, letter in enumerate(sorted(set(w), key=int))}
            assert tuple(relabel[x] for x in gauss_word_of(alpha)) == w
            assert Bipartition(
                frozenset(relabel[x] for x in bipartition_of(alpha).first),
                frozenset(relabel[x] for x in bipartition_of(alpha).second),
            ) == b
            if realizable_on_sphere(w, b):
                assert genus(alpha) == 0


def test_string_from_word_needs_condition_i():
    with pytest.raises(StringError):
        string_from_word("1212", parse_bipartition("1|2"))


def test_sphere_strings_have_compatible_bipartition():
    for m in range(1, 5):
        for alpha in all_strings(m):
            if genus(alpha) == 0:
                assert compatible(gauss_word_of(alpha), bipartition_of(alpha))


def test_q_relations():
    for alpha in all_strings(3):
        m = alpha.rank
        for e in range(m):
            for f in range(m):
                assert q_number(alpha, e, f) + q_number(alpha, f, e) == 0
                for g in range(m):
                    assert q_number(alpha, e, f) + q_number(alpha, f, g) + q_number(alpha, g, e) == 0


def test_homeomorphic_requires_realizable():
    with pytest.raises(NotRealizableError):
        sphere_curves_homeomorphic(("1212", parse_bipartition("1|2")), ("1122", parse_bipartition("1|2")))


def test_irreducible_words_compare_by_word():
    checked = 0
    for w in WORDS:
        if w and irreducible(w) and realizable(w):
            (b,) = compatible_bipartitions(w)
            rot = w[3:] + w[:3]
            (rb,) = compatible_bipartitions(rot)
            assert sphere_curves_homeomorphic((w, b), (rot, rb))
            checked += 1
    assert checked > 0


def test_bipartition_limit():
    w = "".join(chr(ord("a") + i) * 2 for i in range(21))
    with pytest.raises(SizeLimitError):
        compatible_bipartitions(w)
