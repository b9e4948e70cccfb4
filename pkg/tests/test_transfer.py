import numpy as np
import pytest
from hypothesis import given, strategies as st

from rigidcochains.cochains import Cochain, differential, random_cochain
from rigidcochains.groups import (coset_reps, identity_quotient, make_group, small_groups,
                                  subgroup, subgroups)
from rigidcochains.modules import AbGroup, induced_module, trivial_module
from rigidcochains.transfer import (AW_CASES, DescentError, aw1, aw1_preimage, aw2,
                                    aw2_preimage, aw_case, aw_coefficients, aw_context,
                                    aw_tilde, es1, es2, es_modules, surjaw_descend, verify_aw,
                                    verify_es, verify_es_pair)

STEPS = [(G, N) for G in small_groups(8) if G.order > 1
         for N in subgroups(G) if G.is_normal(N)]


def naive_aw1(beta, ctx):
    G, out = ctx.G, []
    for sig in range(ctx.quotient_group.order):
        lift = int(ctx.section[sig])
        out.append(sum(beta.values[G.mul(int(n), lift)] - beta.values[int(n)]
                       for n in ctx.kernel))
    return np.array(out)


def naive_aw2(alpha, ctx):
    G = ctx.G
    out = np.zeros((alpha.values.shape[0], ctx.quotient_group.order, alpha.module.dim),
                   dtype=np.int64)
    for s in range(alpha.values.shape[0]):
        for t in range(ctx.quotient_group.order):
            lift = int(ctx.section[t])
            out[s, t] = sum(alpha.values[s, G.mul(int(n), lift)] - alpha.values[s, int(n)]
                            for n in ctx.kernel)
    return out


steps = st.tuples(st.integers(0, len(STEPS) - 1), st.integers(0, 2**32))


@given(steps)
def test_aw_maps_match_loops(case):
    i, seed = case
    G, N = STEPS[i]
    ctx = aw_context(G, N)
    M = aw_coefficients(G)
    rng = np.random.default_rng(seed)
    beta = random_cochain(M, (ctx.upper,), rng, normalized=False)
    alpha = random_cochain(M, (ctx.upper, ctx.upper), rng, normalized=False)
    assert np.array_equal(aw1(beta, ctx).values, M.reduce(naive_aw1(beta, ctx)))
    assert np.array_equal(aw2(alpha, ctx).values, M.reduce(naive_aw2(alpha, ctx)))


@given(steps)
def test_aw_commutes_with_d_on_every_small_step(case):
    i, seed = case
    G, N = STEPS[i]
    ctx = aw_context(G, N)
    M = aw_coefficients(G)
    beta = random_cochain(M, (ctx.upper,), np.random.default_rng(seed), normalized=False)
    assert differential(aw1(beta, ctx), ctx.upper).equals(aw2(differential(beta), ctx))


@given(steps)
def test_preimages_round_trip(case):
    i, seed = case
    G, N = STEPS[i]
    ctx = aw_context(G, N)
    M = aw_coefficients(G)
    rng = np.random.default_rng(seed)
    t1 = random_cochain(M, (ctx.lower,), rng)
    assert aw1(aw1_preimage(t1, ctx), ctx).equals(t1)
    t2 = random_cochain(M, (ctx.upper, ctx.lower), rng)
    assert aw2(aw2_preimage(t2, ctx), ctx).equals(t2)


def test_aw_detects_a_dropped_term():
    # without the correction term the commutation identity breaks
    ctx = aw_case("Z/4 over Z/2")
    M = aw_coefficients(ctx.G)
    rng = np.random.default_rng(7)

    def broken(beta):
        G = ctx.G
        vals = beta.values[G.mult[ctx.kernel[:, None], ctx.section[None, :]]].sum(axis=0)
        return Cochain(M, (ctx.lower,), vals)

    misses = 0
    for _ in range(10):
        beta = random_cochain(M, (ctx.upper,), rng, normalized=False)
        misses += not differential(broken(beta), ctx.upper).equals(aw2(differential(beta), ctx))
    assert misses == 10


@pytest.mark.parametrize("name", sorted(AW_CASES))
def test_verify_aw_cases(name):
    rep = verify_aw(name, 25, seed=3)
    assert rep.passed, rep.first_failure()
    assert rep.checks[0].trials == 25


def test_verify_aw_zero_trials_is_vacuous():
    rep = verify_aw("S3 over A3", 0)
    assert rep.passed and rep.warnings
    assert {c.status for c in rep.checks} == {"VACUOUS"}


def test_descent_rejects_wrong_class():
    G = make_group("cyclic", 4)
    ctx = aw_context(G, G.generated([2]))
    M = trivial_module(G, AbGroup(0, (2,)))
    zero = Cochain(M, (ctx.upper, ctx.upper))
    extension = Cochain(M, (ctx.lower, ctx.lower), [[[0], [0]], [[0], [1]]])
    # the transfer of the zero cocycle is zero, which is not cohomologous to the extension class
    assert aw_tilde(zero, ctx).is_zero()
    with pytest.raises(DescentError):
        surjaw_descend(zero, extension, ctx)


def test_es_restricts_back():
    # evaluating ES1(c) on H at the identity coset recovers c
    G = make_group("symmetric", 3)
    for H in subgroups(G):
        sub = subgroup(G, H)
        reps = coset_reps(G, H)
        qH = identity_quotient(sub.group)
        for _, A, _ in es_modules(sub.group):
            ind = induced_module(A, sub, reps)
            c = random_cochain(A, (qH,), np.random.default_rng(len(H)), normalized=False)
            c2 = random_cochain(A, (qH, qH), np.random.default_rng(len(H) + 1), normalized=False)
            b = reps.index(G.identity)
            d = A.dim
            one = es1(c, ind).values[[int(h) for h in sub.embed], b * d:(b + 1) * d]
            assert np.array_equal(one, c.values)
            emb = [int(h) for h in sub.embed]
            two = es2(c2, ind).values[np.ix_(emb, emb)][..., b * d:(b + 1) * d]
            assert np.array_equal(two, c2.values)


def test_es_pair_dihedral_over_centre():
    G = make_group("dihedral", 8)
    rep = verify_es_pair(G, G.generated([2]), "D8>=2")
    assert rep.passed, rep.first_failure()
    assert any("from G" in c.label for c in rep.checks)


def test_es_suite_small_orders():
    rep = verify_es(max_order=6)
    assert rep.passed, rep.first_failure()
    assert all(c.mode == "exhaustive" for c in rep.checks)
