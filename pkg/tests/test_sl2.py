import cmath
from fractions import Fraction
from collections import Counter
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rigidcochains.groups import make_group
from rigidcochains.numfield import ExampleFields
from rigidcochains.sl2 import (Setup, UnitGroup, character_report, character_trivial_on_units,
                               congruence_admissible, dicyclic_order, example_report,
                               fincke_pohst, format_table, hecke_character_search,
                               kneser_order, multiplicity_report, multiplicity_table,
                               order_relations, rigid_twist_class, unit_exponents,
                               unit_generators, zbar_value)

S = Setup()
X = S.fields


@pytest.fixture(scope="module")
def unit_groups_by_order():
    return {name: UnitGroup(order(S).norm_one_units(), name)
            for name, order in (("dicyclic", dicyclic_order), ("kneser", kneser_order))}


def histogram(G):
    return Counter(G.element_order(g) for g in G.elements)


def sl2_f3_histogram():
    """Element orders of SL2(F3), from its 24 matrices."""
    mats = [m for m in product(range(3), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % 3 == 1]

    def mul(a, b):
        return ((a[0] * b[0] + a[1] * b[2]) % 3, (a[0] * b[1] + a[1] * b[3]) % 3,
                (a[2] * b[0] + a[3] * b[2]) % 3, (a[2] * b[1] + a[3] * b[3]) % 3)

    def order(m):
        p, k = m, 1
        while p != (1, 0, 0, 1):
            p, k = mul(p, m), k + 1
        return k

    return Counter(order(m) for m in mats)


def test_order_relations():
    rep = order_relations(S)
    assert rep.passed, rep.first_failure()
    assert S.Z ** 12 == S.one and S.I * S.I == -S.one
    assert S.I * S.Z * S.I.inverse() == S.Z.inverse()
    M = S.torus_matrix(X.s, -2)
    assert M * M == -S.one
    assert X.relative_norm(X.zeta - 1) == 2 - X.s


def test_unit_group_sizes(unit_groups_by_order):
    assert {k: len(G) for k, G in unit_groups_by_order.items()} == {"dicyclic": 24, "kneser": 24}


def test_dicyclic_unit_group_matches_abstract_group(unit_groups_by_order):
    G = unit_groups_by_order["dicyclic"]
    assert G.order_of(S.Z) == 12
    assert histogram(G.group) == histogram(make_group("dicyclic", 24))
    assert G.involutions() == 1


def test_kneser_unit_group_is_sl2_f3(unit_groups_by_order):
    G = unit_groups_by_order["kneser"]
    h = G.histogram()
    assert max(h) == 6
    assert G.histogram_tuple(range(1, 7)) == (1, 1, 8, 6, 0, 8)
    assert h == sl2_f3_histogram()
    assert G.quaternion_core_quotient()


def test_orders_verify():
    for order in (dicyclic_order(S), kneser_order(S)):
        rep = order.verify()
        assert rep.passed, rep.first_failure()


def test_fincke_pohst_counts_small_vectors():
    # Z^2 with the identity form: vectors of squared length at most 2, up to sign
    found = {tuple(v) for v in fincke_pohst([[1, 0], [0, 1]], 2)}
    full = found | {tuple(-x for x in v) for v in found}
    assert full - {(0, 0)} == {(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1)}


def embeddings():
    """The two complex places: zeta to exp(2 pi i / 12) and exp(10 pi i / 12)."""
    return [cmath.exp(2j * cmath.pi * e / 12) for e in (1, 5)]


def complex_value(x, w):
    return sum(complex(float(c)) * w ** j for j, c in enumerate(x.coords))


def numeric_trivial(a_plus, a_minus):
    for u in unit_generators(X):
        val = 1
        for w, a in zip(embeddings(), (a_plus, a_minus)):
            z = complex_value(u, w)
            val *= (z / z.conjugate()) ** a
        if abs(val - 1) > 1e-9:
            return False
    return True


def test_character_criterion_against_complex_embeddings():
    exps = unit_exponents(X)
    assert exps == [2, 7]
    for p in range(-24, 25):
        for m in range(-24, 25):
            assert character_trivial_on_units(p, m, exps) == numeric_trivial(p, m)


@given(st.integers(-24, 24), st.integers(-24, 24))
def test_criterion_is_the_congruence(p, m):
    assert character_trivial_on_units(p, m, unit_exponents(X)) == congruence_admissible(p, m)


def test_character_search_and_report():
    found = hecke_character_search(12)
    assert (1, 7) in found and (2, 2) in found and (1, 1) not in found
    assert all((p + 5 * m) % 12 == 0 for p, m in found)
    assert character_report(24).passed


def test_multiplicity_table():
    t = multiplicity_table(20)
    assert len(t) == 21 and all(len(r) == 21 for r in t)
    # the lowest weights: (k_+ + 1) = 5 (k_- + 1) mod 12
    assert t[4][0] == 1 and t[0][4] == 1 and t[0][0] == 0 and t[1][1] == 0
    assert sum(map(sum, t)) == sum(((kp - 5 * km) % 12 == 0)
                                   for kp in range(1, 22) for km in range(1, 22))
    assert multiplicity_report(20).passed
    assert multiplicity_table(0) == [[0]]
    assert format_table(t) == format_table(multiplicity_table(20))


def test_twist_class_is_torus_point():
    rep = rigid_twist_class(S)
    assert rep.passed, rep.first_failure()
    M = zbar_value(S)
    target = S.torus_matrix(X.s, -2)
    assert M == target or M == -target


def test_zero_twist_fails_the_identification():
    rep = rigid_twist_class(S, {"v+": Fraction(0), "v-": Fraction(0)})
    assert rep.first_failure().label == "twist-class-matches-torus-point-s-minus-2"


def test_full_example_report():
    rep = example_report()
    assert rep.passed, rep.first_failure()
    assert len(rep.checks) == 46


def test_example_fields_reused():
    assert isinstance(X, ExampleFields) and np.isclose(abs(complex_value(X.zeta, embeddings()[0])), 1)
