from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rigidcochains.numfield import (ExampleFields, FieldError, NumberField, det,
                                    inverse_matrix, is_irreducible, solve)

X = ExampleFields()
K, F = X.K, X.F
coords = st.lists(st.integers(-6, 6), min_size=4, max_size=4)


def test_defining_relations():
    z, s = X.zeta, X.s_abs
    assert z ** 4 - z ** 2 + 1 == K.zero
    assert s * s == K(3)
    assert z * z == s * z - 1
    assert X.i * X.i == K(-1) and X.i == z ** 3
    assert z ** 12 == K.one and len({(z ** e).coords for e in range(12)}) == 12
    assert z * z ** -1 == K.one


def test_norms_traces_and_units():
    sF = X.s
    assert X.relative_norm(X.zeta - 1) == 2 - sF
    assert (X.zeta - 1).norm() == 1  # absolute norm of a unit that is not a root of unity
    assert K.is_unit(X.zeta) and K.is_unit(X.zeta - 1) and not K.is_unit(K(2))
    assert sF.norm() == -3 and sF.trace() == 0
    assert K.discriminant == 144 and F.discriminant == 12


def test_root_of_unity_exponents():
    z = X.zeta
    assert X.root_of_unity_exponent(K.one) == 0
    assert X.root_of_unity_exponent(z ** 5) == 5
    # (z - 1) / (z^-1 - 1) simplifies to -z
    assert X.root_of_unity_exponent((z - 1) / (z ** -1 - 1)) == 7
    with pytest.raises(FieldError):
        X.root_of_unity_exponent(z - 1)
    with pytest.raises(FieldError):
        X.root_of_unity_exponent(K(2))


def test_relative_and_absolute_models_agree():
    assert X.E.identification_is_homomorphism()
    assert X.relative_sigma(X.zeta) == X.zeta ** 11 == X.conj(X.zeta)
    assert X.in_base(X.s_abs) and not X.in_base(X.zeta)
    assert X.to_base(X.from_base(X.s)) == X.s


@given(coords, coords)
def test_field_axioms(a, b):
    x, y = K.element(a), K.element(b)
    assert x * y == y * x and (x + y) * y == x * y + y * y
    if not x.is_zero():
        assert x * x.inverse() == K.one
        assert (x * y).norm() == x.norm() * y.norm()
    assert (x + y).trace() == x.trace() + y.trace()


@given(coords)
def test_conjugation_is_an_automorphism_matching_sigma(a):
    x = K.element(a)
    assert X.conj(X.conj(x)) == x
    assert X.relative_sigma(x) == X.conj(x)
    assert X.in_base(x * X.conj(x))


@pytest.mark.parametrize("poly,expect", [
    ([1, 0, -1, 0, 1], True), ([-3, 0, 1], True), ([4, 0, 0, 0, 1], False),
    ([1, 0, 2, 0, 1], False), ([-2, 0, 0, 0, 1], True), ([-4, 0, 1], False),
])
def test_irreducibility(poly, expect):
    assert is_irreducible(poly) is expect


def test_reducible_polynomial_rejected():
    with pytest.raises(FieldError):
        NumberField([4, 0, 0, 0, 1])


def test_rational_linear_algebra():
    M = [[2, 1], [1, 1]]
    assert det(M) == 1
    assert inverse_matrix(M) == [[1, -1], [-1, 2]]
    assert solve(M, [3, 2]) == [1, 1]
    assert solve([[1, 1], [1, 1]], [1, 2]) is None
    assert det([[Fraction(1, 2), 0], [0, 4]]) == 2
