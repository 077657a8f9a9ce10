"""Acceptance criteria, one test each, with their time limits.

Each test records a PASS/FAIL line; the lines are printed at the end of the
pytest run (see conftest.py) or directly when this file is run as a script.
"""

import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from virtualstrings.cobracket import cobracket, dual_bracket, u_functional
from virtualstrings.core import (
    ArrowDiagram,
    all_strings,
    cycles_permutation,
    lattice_string,
    linked_family_permutation,
    permutation_string,
    string_from_code,
)
from virtualstrings.gauss import compatible_bipartitions, condition_i, condition_ii, realizable
from virtualstrings.invariants import (
    NOT_SLICE,
    UNKNOWN,
    UPolynomial,
    based_matrix,
    primitive_matrix,
    realize_u_polynomial,
    slice_obstructions,
    u_polynomial,
)
from virtualstrings.matrices import integer_rank, is_primitive, isomorphic, sigma_genus
from virtualstrings.moves import (
    A_ADD,
    B_ADD,
    TRIVIAL_STATUS,
    applicable_moves,
    apply_move,
    class_key,
    enumerate_strings,
    normalize,
)
from virtualstrings.cobracket import Tensor
from virtualstrings.skein import (
    OrientedForest,
    apply_diagram_move,
    diagram_moves,
    eta,
    nabla,
    skein_defect,
)

from oracles import all_oriented_trees, random_string

RESULTS = []


@contextmanager
def criterion(number, title, limit):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        note = "" if within else f" over the {limit:g}s limit"
        RESULTS.append(f"criterion {number:2d} {status}  {title}  ({elapsed:.2f}s{note})")
    assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"


def test_01_u_formula():
    with criterion(1, "u-polynomial of the lattice family", 1):
        for p in range(1, 6):
            for q in range(1, 6):
                expected = UPolynomial.from_dict({q: p}) - UPolynomial.from_dict({p: q})
                assert u_polynomial(lattice_string(p, q)) == expected


@pytest.mark.xfail(strict=True, reason="stated rank 6 for min(p,q) >= 3 disagrees with the stated entries, which give rank 4")
def test_02_genus_table():
    with criterion(2, "rank table of the lattice family", 1):
        for p in range(1, 5):
            for q in range(1, 5):
                expected = 2 if p == q == 1 else 6 if min(p, q) >= 3 else 4
                assert integer_rank(based_matrix(lattice_string(p, q)).b) == expected, (p, q)


PRINTED = {
    "(12)(34)": [[0, -1, 1, -1, 1], [1, 0, 1, -1, 1], [-1, -1, 0, -1, 1], [1, 1, 1, 0, 1], [-1, -1, -1, -1, 0]],
    "(134)(2)": [[0, -2, 0, -1, 3], [2, 0, 1, 0, 3], [0, -1, 0, 0, 2], [1, 0, 0, 0, 1], [-3, -3, -2, -1, 0]],
    "(124)(3)": [[0, -1, -2, 0, 3], [1, 0, -1, 1, 3], [2, 1, 0, 1, 2], [0, -1, -1, 0, 1], [-3, -3, -2, -1, 0]],
}


def test_03_printed_matrices():
    with criterion(3, "printed based matrices", 1):
        Ts = {}
        for cycles, rows in PRINTED.items():
            T = based_matrix(permutation_string(cycles_permutation(cycles)))
            assert [list(r) for r in T.b] == rows
            Ts[cycles] = T
        assert is_primitive(Ts["(134)(2)"]) and is_primitive(Ts["(124)(3)"])
        assert not isomorphic(Ts["(134)(2)"], Ts["(124)(3)"])


def test_04_gauss_corpus():
    with criterion(4, "Gauss word corpus", 1):
        for w in ("1231245345", "1231435425"):
            assert condition_i(w) and not condition_ii(w)
        w = "123456214365"
        assert condition_i(w) and condition_ii(w) and compatible_bipartitions(w) == []
        assert realizable("1122") and len(compatible_bipartitions("1122")) == 2


def test_05_exhaustive_triviality():
    with criterion(5, "rank <= 2 trivial, two rank-3 classes with u != 0", 30):
        for m in range(3):
            for alpha in all_strings(m):
                assert normalize(alpha).status == TRIVIAL_STATUS
        nonzero = set()
        for code in enumerate_strings(3):
            if not u_polynomial(string_from_code(code)).is_zero():
                nonzero.add(code)
        targets = {class_key(lattice_string(1, 2)), class_key(lattice_string(2, 1))}
        assert nonzero == targets
        for code in enumerate_strings(3):
            if code not in nonzero:
                assert normalize(string_from_code(code)).status == TRIVIAL_STATUS


def test_06_cobracket_example():
    with criterion(6, "cobracket of the seven-arrow string", 10):
        alpha = permutation_string(cycles_permutation("(123)(4)(576)"))
        a12, a21 = class_key(lattice_string(1, 2)), class_key(lattice_string(2, 1))
        assert cobracket(alpha) == Tensor({(a12, a21): 1, (a21, a12): -1})


def test_07_dual_bracket():
    with criterion(7, "dual bracket [u1, u3] = -8", 10):
        alpha = permutation_string(linked_family_permutation(1, 2, 3, 4))
        assert dual_bracket(u_functional(1), u_functional(3), alpha) == -8


def _contract(n, edges, k):
    a, b = edges[k]
    keep = [e for i, e in enumerate(edges) if i != k]
    relabel = {v: (a if v == b else v) for v in range(n)}
    verts = sorted(set(relabel.values()))
    idx = {v: i for i, v in enumerate(verts)}
    return OrientedForest(tuple(range(len(verts))), tuple((idx[relabel[x]], idx[relabel[y]]) for x, y in keep))


def _tree(k, edges):
    return OrientedForest(tuple(range(k)), tuple(edges))


def test_08_eta_suite():
    with criterion(8, "eta values and recurrences on trees with <= 5 vertices", 10):
        assert eta(_tree(1, [])) == 1
        assert eta(_tree(2, [])) == 0
        assert eta(_tree(4, [(0, 1), (2, 3)])) == 0
        for k in range(2, 6):
            for edges in all_oriented_trees(k):
                edges = list(edges)
                for i in range(len(edges)):
                    rev = [(b, a) if x == i else (a, b) for x, (a, b) in enumerate(edges)]
                    assert eta(_tree(k, edges)) + eta(_tree(k, rev)) + eta(_contract(k, edges, i)) == 0
                    for j in range(len(edges)):
                        (a, b), (a2, c) = edges[i], edges[j]
                        if i == j or a != a2:
                            continue
                        rest = [e for x, e in enumerate(edges) if x not in (i, j)]
                        merged = [e for x, e in enumerate(edges) if x != j] + [(b, c)]
                        assert eta(_tree(k, edges)) == (
                            eta(_tree(k, rest + [(a, b), (b, c)]))
                            + eta(_tree(k, rest + [(a, c), (c, b)]))
                            + eta(_contract(k, merged, len(merged) - 1))
                        )


def test_09_skein_property():
    with criterion(9, "skein relation on 50 random diagrams", 60):
        rng = random.Random(2024)
        for _ in range(50):
            m = rng.randint(1, 4)
            D = ArrowDiagram(random_string(rng, m), tuple(rng.choice((1, -1)) for _ in range(m)))
            for e in range(m):
                if D.signs[e] > 0:
                    assert not skein_defect(D, e)


def test_10_move_invariance_fuzz():
    with criterion(10, "invariants constant over >= 500 random moves", 120):
        rng = random.Random(10)
        applied = 0

        def snapshot(alpha):
            T0 = primitive_matrix(alpha)
            return u_polynomial(alpha), T0, sigma_genus(T0), cobracket(alpha)

        def same(a, b):
            return a[0] == b[0] and isomorphic(a[1], b[1]) and a[2] == b[2] and a[3] == b[3]

        starts = [random_string(rng, rng.randint(1, 4)) for _ in range(30)]
        starts.append(permutation_string(cycles_permutation("(123)(4)(576)")))
        for alpha in starts:
            ref = snapshot(alpha)
            for _ in range(12):
                moves = applicable_moves(alpha)
                shrink = [m for m in moves if m.kind not in (A_ADD, B_ADD)]
                pool = shrink if (alpha.rank >= alpha_cap(ref) and shrink) else moves
                alpha = apply_move(alpha, rng.choice(pool))
                applied += 1
                assert same(snapshot(alpha), ref)
        for _ in range(25):
            m = rng.randint(1, 3)
            D = ArrowDiagram(random_string(rng, m), tuple(rng.choice((1, -1)) for _ in range(m)))
            ref = nabla(D)
            for _ in range(12):
                moves = diagram_moves(D)
                shrink = [x for x in moves if x.move.kind not in (A_ADD, B_ADD)]
                pool = shrink if (D.rank >= 5 and shrink) else moves
                D = apply_diagram_move(D, rng.choice(pool))
                applied += 1
                assert nabla(D) == ref
        assert applied >= 500


def alpha_cap(ref):
    # keep walks short enough for sigma; the seven-arrow start needs more room
    return 9 if ref[3] else 7


def test_11_slice_obstruction():
    with criterion(11, "slice verdicts for the lattice family", 5):
        for p in range(1, 5):
            for q in range(1, 5):
                if p != q:
                    assert slice_obstructions(lattice_string(p, q)).verdict == NOT_SLICE
        r = slice_obstructions(lattice_string(2, 2))
        assert r.verdict == UNKNOWN and r.matrix_hyperbolic


def test_12_realization_round_trip():
    with criterion(12, "realization of 20 random u-polynomials", 10):
        rng = random.Random(12)
        done = 0
        while done < 20:
            coeffs = {k: rng.randint(-3, 3) for k in range(2, 7)}
            coeffs[1] = -sum(k * c for k, c in coeffs.items())
            if abs(coeffs[1]) > 3:
                continue
            u = UPolynomial.from_dict(coeffs)
            assert u_polynomial(realize_u_polynomial(u)) == u
            done += 1


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        try:
            t()
        except AssertionError:
            pass
    print("\n".join(RESULTS))
    sys.exit(0 if all(" PASS " in line for line in RESULTS) else 1)
