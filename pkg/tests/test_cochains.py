import numpy as np
import pytest
from hypothesis import given, strategies as st

from rigidcochains.cochains import (Cochain, CochainError, NotACocycle, differential,
                                    is_cocycle, normalize, random_cochain, solve_coboundary)
from rigidcochains.groups import identity_quotient, make_group, quotient, small_groups, subgroups
from rigidcochains.modules import (AbGroup, GSet, direct_sum, permutation_module, sign_module,
                                   trivial_module)

SMALL = [G for G in small_groups(8) if G.order > 1]


def sample_module(G, which):
    regular = permutation_module(GSet(G, G.mult, validate=False), [0] * G.order)
    torsion = trivial_module(G, AbGroup(1, (6,)))
    index2 = [H for H in subgroups(G) if 2 * len(H) == G.order]
    parts = [regular, torsion][: which + 1]
    if index2:
        parts.append(sign_module(G, [1 if g in index2[0] else -1 for g in G.elements]))
    return direct_sum(*parts)


def naive_differential(c):
    """Loop evaluation of the inhomogeneous coboundary on a single-slot cochain."""
    M = c.module
    q = c.slots[0]
    G = q.group
    n = c.degree
    out = np.zeros((G.order,) * (n + 1) + (M.dim,), dtype=np.int64)
    for args in np.ndindex(*(G.order,) * (n + 1)):
        val = M.act(int(q.section[args[0]]), c.values[args[1:]])
        for i in range(1, n + 1):
            merged = args[:i - 1] + (G.mul(args[i - 1], args[i]),) + args[i + 1:]
            val = val + (-1) ** i * c.values[merged]
        val = val + (-1) ** (n + 1) * c.values[args[:n]]
        out[args] = val
    return M.reduce(out)


cases = st.tuples(st.integers(0, len(SMALL) - 1), st.integers(0, 1), st.integers(1, 2),
                  st.integers(0, 2**32))


@given(cases)
def test_differential_matches_loop(case):
    i, which, deg, seed = case
    G = SMALL[i]
    M = sample_module(G, which)
    q = identity_quotient(G)
    c = random_cochain(M, (q,) * deg, np.random.default_rng(seed), normalized=False)
    assert np.array_equal(differential(c).values, naive_differential(c))


@given(cases)
def test_d_squared_is_zero(case):
    i, which, deg, seed = case
    G = SMALL[i]
    M = sample_module(G, which)
    q = identity_quotient(G)
    c = random_cochain(M, (q,) * deg, np.random.default_rng(seed), normalized=False)
    assert differential(differential(c)).is_zero()


@given(cases)
def test_coboundaries_are_solved(case):
    i, which, _, seed = case
    G = SMALL[i]
    M = sample_module(G, which)
    q = identity_quotient(G)
    beta = random_cochain(M, (q,), np.random.default_rng(seed))
    z = differential(beta)
    found = solve_coboundary(z)
    assert found is not None and differential(found, q).equals(z)


def test_nontrivial_class_not_a_coboundary():
    # the extension class of Z/4 over Z/2 in Z/2 coefficients
    G = make_group("cyclic", 2)
    M = trivial_module(G, AbGroup(0, (2,)))
    q = identity_quotient(G)
    z = Cochain(M, (q, q), [[[0], [0]], [[0], [1]]])
    assert is_cocycle(z)
    assert solve_coboundary(z) is None


def test_solve_rejects_non_cocycles():
    G = make_group("cyclic", 3)
    M = trivial_module(G, AbGroup(1))
    q = identity_quotient(G)
    z = Cochain(M, (q, q), np.arange(9).reshape(3, 3, 1))
    with pytest.raises(NotACocycle):
        solve_coboundary(z)


def test_normalize_and_slot_checks():
    G = make_group("dihedral", 8)
    M = trivial_module(G, AbGroup(1))
    top, low = identity_quotient(G), quotient(G, G.generated([2]))
    c = normalize(random_cochain(M, (top, low), np.random.default_rng(1), normalized=False))
    assert c.is_normalized()
    with pytest.raises(CochainError):
        differential(Cochain(M, (), [1]))
    other = trivial_module(make_group("cyclic", 8), AbGroup(1))
    with pytest.raises(CochainError):
        Cochain(other, (top,))
