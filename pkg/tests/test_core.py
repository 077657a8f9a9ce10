import random

import pytest
from hypothesis import given, settings, strategies as st

from virtualstrings.core import (
    TRIVIAL,
    ArrowDiagram,
    StringError,
    VirtualString,
    all_strings,
    cable,
    canonical_code,
    canonical_string,
    code_to_arrows,
    cycles_permutation,
    from_json,
    homeomorphic,
    inverse,
    lattice_string,
    opposite,
    parse_diagram,
    parse_string,
    permutation_string,
    product,
    relabelings,
    render_diagram,
    render_string,
    rotate,
    string_from_code,
    to_json,
)
from virtualstrings.invariants import linking_numbers
from virtualstrings.moves import enumerate_strings

from oracles import brute_canonical, brute_orbit_count, pup_linking, random_string


@st.composite
def strings(draw, max_rank=5):
    m = draw(st.integers(0, max_rank))
    seed = draw(st.integers(0, 10**9))
    return random_string(random.Random(seed), m)


def test_parse_and_render_round_trip():
    alpha = parse_string("a b a' b'")
    assert alpha.arrows == ((0, 2), (1, 3))
    assert parse_string(render_string(alpha)) == alpha


def test_parse_accepts_heads_first():
    alpha = parse_string("x' y x y'")
    assert set(alpha.arrows) == {(2, 0), (1, 3)}


@pytest.mark.parametrize("bad", ["a b", "a a'  a'", "a a", "a' a' a"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(StringError):
        parse_string(bad)


def test_diagram_signs_default_plus():
    D = parse_diagram("a- b a' b'")
    assert D.signs == (-1, 1)
    assert parse_diagram(render_diagram(D)) == D


def test_invalid_arrow_tuples_rejected():
    with pytest.raises(StringError):
        VirtualString(((0, 0),))
    with pytest.raises(StringError):
        VirtualString(((0, 1), (1, 2)))
    with pytest.raises(StringError):
        ArrowDiagram(parse_string("a a'"), (2,))


@given(strings())
def test_json_round_trip(alpha):
    assert from_json(to_json(alpha)) == alpha


def test_json_round_trip_diagram():
    D = parse_diagram("a+ b- a' b'")
    assert from_json(to_json(D)) == D


@given(strings(), st.integers(0, 20))
def test_canonical_code_ignores_rotation(alpha, k):
    assert canonical_code(rotate(alpha, k)) == canonical_code(alpha)


@given(strings(4))
def test_canonical_code_ignores_arrow_order(alpha):
    codes = {canonical_code(b) for b in relabelings(alpha)}
    assert codes == {canonical_code(alpha)}


@given(strings())
def test_code_decodes_to_homeomorphic_string(alpha):
    code = canonical_code(alpha)
    beta = string_from_code(code)
    assert brute_canonical(beta) == brute_canonical(alpha)
    assert canonical_string(alpha) == beta
    assert code_to_arrows(code) == beta.arrows


def test_homeomorphism_agrees_with_brute_force():
    rng = random.Random(7)
    sample = [random_string(rng, 3) for _ in range(60)]
    for a in sample[:30]:
        for b in sample[30:]:
            assert homeomorphic(a, b) == (brute_canonical(a) == brute_canonical(b))


@pytest.mark.parametrize("m,count", [(0, 1), (1, 1), (2, 4), (3, 22), (4, 218)])
def test_enumeration_counts(m, count):
    assert len(enumerate_strings(m)) == count
    if m <= 4:
        assert brute_orbit_count(m) == count


@given(strings())
def test_opposite_and_inverse_are_involutions(alpha):
    assert opposite(opposite(alpha)) == alpha
    assert inverse(inverse(alpha)) == alpha


@given(strings())
def test_opposite_reverses_slot_order(alpha):
    n = alpha.size
    flipped = VirtualString(tuple((n - 1 - t, n - 1 - h) for t, h in alpha.arrows))
    assert homeomorphic(opposite(alpha), flipped)


@given(strings(3), strings(3))
def test_product_concatenates(a, b):
    ab = product(a, b)
    assert ab.rank == a.rank + b.rank
    assert product(TRIVIAL, a) == a


@given(strings(3), st.integers(1, 3))
def test_cable_rank(alpha, p):
    assert cable(alpha, p).rank == p * alpha.rank


@pytest.mark.parametrize("cycles", ["(12)(34)", "(134)(2)", "(124)(3)", "(123)(4)(576)", "(1)"])
def test_permutation_order_matches_linking_formula(cycles):
    sigma = cycles_permutation(cycles)
    alpha = permutation_string(sigma)
    assert linking_numbers(alpha) == [pup_linking(sigma, i) for i in range(1, len(sigma) + 1)]


def test_permutation_linking_formula_exhaustive_small():
    from itertools import permutations

    for m in range(1, 6):
        for sigma in permutations(range(1, m + 1)):
            alpha = permutation_string(sigma)
            assert linking_numbers(alpha) == [pup_linking(sigma, i) for i in range(1, m + 1)]


def test_cycles_parser():
    assert cycles_permutation("(134)(2)") == [3, 2, 4, 1]
    with pytest.raises(StringError):
        cycles_permutation("134")


def test_lattice_is_permutation_string():
    assert lattice_string(1, 1).rank == 2
    with pytest.raises(StringError):
        lattice_string(0, 2)


def test_all_strings_count():
    assert sum(1 for _ in all_strings(3)) == 15 * 8
