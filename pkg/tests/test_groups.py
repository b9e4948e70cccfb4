from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rigidcochains.groups import (GroupError, GSet, coset_reps, coset_space, make_group,
                                  quotient, small_groups, subgroup, subgroups)

SMALL = small_groups(12)


def order_histogram(G):
    return tuple(sorted(Counter(G.element_order(g) for g in G.elements).items()))


def test_cyclic_table():
    G = make_group("cyclic", 4)
    assert G.mult.tolist() == [[(i + j) % 4 for j in range(4)] for i in range(4)]
    assert make_group("cyclic", 1).order == 1


def test_number_of_classes_per_order():
    # groups of order 1..12 up to isomorphism
    counts = Counter(G.order for G in SMALL)
    assert [counts[n] for n in range(1, 13)] == [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5]


def test_small_groups_pairwise_distinguished():
    seen = {}
    for G in SMALL:
        key = (G.order, order_histogram(G), G.is_abelian())
        assert key not in seen, (G.name, seen.get(key))
        seen[key] = G.name


@pytest.mark.parametrize("kind,order,count", [
    ("symmetric", 3, 6), ("dihedral", 8, 10), ("dicyclic", 8, 6),
    ("cyclic", 12, 6), ("dihedral", 12, 16),
])
def test_subgroup_counts(kind, order, count):
    assert len(subgroups(make_group(kind, order))) == count


def test_a4_subgroups_and_normality():
    A4 = next(G for G in SMALL if G.name == "A4")
    subs = subgroups(A4)
    assert len(subs) == 10
    assert sorted(len(H) for H in subs if A4.is_normal(H)) == [1, 4, 12]


def test_bad_tables_rejected():
    with pytest.raises(GroupError):
        make_group("table", [[0, 1], [0, 1]])
    with pytest.raises(GroupError):
        make_group("dihedral", 7)
    with pytest.raises(GroupError):
        make_group("klein", 4)


group_index = st.integers(0, len(SMALL) - 1)


@given(group_index, st.data())
def test_quotient_is_homomorphism(i, data):
    G = SMALL[i]
    normal = [H for H in subgroups(G) if G.is_normal(H)]
    N = data.draw(st.sampled_from(normal))
    q = quotient(G, N)
    a, b = data.draw(st.integers(0, G.order - 1)), data.draw(st.integers(0, G.order - 1))
    assert q.proj[G.mul(a, b)] == q.group.mul(int(q.proj[a]), int(q.proj[b]))
    assert q.proj[q.section].tolist() == list(range(q.group.order))
    assert q.section[q.group.identity] == G.identity
    assert quotient(G, N) is q


@given(group_index, st.data())
def test_coset_space_is_gset(i, data):
    G = SMALL[i]
    H = data.draw(st.sampled_from(subgroups(G)))
    X = coset_space(G, H)
    GSet(G, X.action)  # validates the action
    assert X.size * len(H) == G.order
    assert len(coset_reps(G, H)) == X.size


@given(group_index, st.data())
def test_subgroup_realization(i, data):
    G = SMALL[i]
    H = data.draw(st.sampled_from(subgroups(G)))
    S = subgroup(G, H)
    emb = S.embed
    m = S.group.mult
    assert np.array_equal(emb[m], G.mult[emb[:, None], emb[None, :]])
