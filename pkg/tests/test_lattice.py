import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_k3.lattice import (
    LatticeError,
    UnimodularMap,
    content,
    det,
    dot,
    elementary_divisors,
    find_unimodular_equivalence,
    is_primitive,
    matmul,
    matrix_with_last_row,
    pairing,
    primitive,
    rank,
    smith_normal_form,
    spans_lattice,
    sublattice_index,
)

small = st.integers(-6, 6)
vec3 = st.tuples(small, small, small)
mat = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
)


@given(mat)
@settings(max_examples=150, deadline=None)
def test_smith_normal_form_is_a_factorisation(a):
    d, u, v = smith_normal_form(a)
    assert matmul(matmul(u, a), v) == d
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    assert all(d[i][j] == 0 for i in range(len(d)) for j in range(len(d[0])) if i != j)
    assert all(x >= 0 for x in diag)
    for x, y in zip(diag, diag[1:]):
        assert (y == 0) if x == 0 else y % x == 0
    assert sum(1 for x in diag if x) == rank(a)


def test_elementary_divisors_known():
    assert elementary_divisors([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]


@given(vec3.filter(lambda v: any(v)))
def test_primitive_and_content(v):
    p = primitive(v)
    assert is_primitive(p)
    assert tuple(content(v) * x for x in p) == v


@given(vec3.filter(lambda v: any(v)).map(primitive))
@settings(deadline=None)
def test_matrix_with_last_row(m):
    g = matrix_with_last_row(m)
    assert g[-1] == m and det(g) == 1


def test_matrix_with_last_row_rejects_non_primitive():
    with pytest.raises(LatticeError):
        matrix_with_last_row((0, 2, 4))


@given(st.lists(vec3, min_size=1, max_size=5))
@settings(deadline=None)
def test_spans_lattice_matches_determinant_gcd(vs):
    g = math.gcd(*(det(c) for c in itertools.combinations(vs, 3)))
    assert spans_lattice(vs) == (g == 1)


def test_sublattice_index():
    assert sublattice_index([(2, 0), (0, 3)]) == 6
    assert sublattice_index([(1, 1), (1, -1)]) == 2
    assert sublattice_index([(1, 2, 3)]) == 1


@given(vec3, vec3)
def test_dot_agrees_with_pairing(m, v):
    assert dot(m, v) == pairing(m, v) == sum(a * b for a, b in zip(m, v))


@given(vec3.filter(lambda v: any(v)).map(primitive), vec3, vec3)
@settings(deadline=None)
def test_dual_map_preserves_pairing(m0, m, v):
    g = UnimodularMap(matrix_with_last_row(m0))
    assert dot(g.dual()(m), g(v)) == dot(m, v)
    assert g.inverse().compose(g) == UnimodularMap.identity(3)


def test_non_unimodular_rejected():
    with pytest.raises(LatticeError):
        UnimodularMap(((2, 0), (0, 1)))


def test_unimodular_equivalence_finds_maps():
    p = [(1, 0), (0, 1), (-1, -1)]
    g = UnimodularMap(((2, 1), (1, 1)))
    q = g.apply_all(p)
    h = find_unimodular_equivalence(p, q)
    assert h is not None and sorted(h.apply_all(p)) == sorted(q)
    assert find_unimodular_equivalence(p, [(2, -1), (-1, 2), (-1, -1)]) is None
