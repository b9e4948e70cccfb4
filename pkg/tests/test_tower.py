import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rigidcochains.cochains import Cochain, normalize, random_cochain
from rigidcochains.tower import (PRESETS, DenominatorError, TowerError, awes0, awes1,
                                 awes1_preimage, awes2, build_fundamental_family, preset,
                                 random_tower, tower_from_config, verify_family, verify_tower)

TOWERS = {name: preset(name) for name in PRESETS}


def naive_awes1(beta, T, k):
    """Place-by-place evaluation of AWES1 with explicit loops."""
    ctx = T.ctx[k]
    up, lo = ctx.upper, ctx.lower
    f = T.place_function(beta, k + 1)
    act0, act1 = T.place_sets[k].action, T.place_sets[k + 1].action
    z = T.zeta[k]
    d = T.ambient.dim
    out = np.zeros((lo.group.order, T.place_sets[k].size, d), dtype=np.int64)
    for s in range(lo.group.order):
        st_ = int(ctx.section[s])
        for w in range(T.place_sets[k].size):
            sw = act0[lo.section[s], w]
            val = np.zeros(d, dtype=np.int64)
            for n in ctx.kernel:
                ns = up.group.mul(int(n), st_)
                val += f[ns, act1[up.section[ns], z[w]]]
                val -= f[n, act1[up.section[n], z[sw]]]
            out[s, sw] = val
    return T.coeff[k].reduce(out.reshape(lo.group.order, -1))


def naive_awes2(alpha, T, k):
    ctx = T.ctx[k]
    S = alpha.slots[0]
    up, lo = ctx.upper, ctx.lower
    f = T.place_function(alpha, k + 1)
    act0, act1 = T.place_sets[k].action, T.place_sets[k + 1].action
    z = T.zeta[k]
    d = T.ambient.dim
    out = np.zeros((S.group.order, lo.group.order, T.place_sets[k].size, d), dtype=np.int64)
    for s in range(S.group.order):
        gs = S.section[s]
        for t in range(lo.group.order):
            tt = int(ctx.section[t])
            for w in range(T.place_sets[k].size):
                tw = act0[lo.section[t], w]
                val = np.zeros(d, dtype=np.int64)
                for n in ctx.kernel:
                    nt = up.group.mul(int(n), tt)
                    val += f[s, nt, act1[gs, act1[up.section[nt], z[w]]]]
                    val -= f[s, n, act1[gs, act1[up.section[n], z[tw]]]]
                out[s, t, act0[gs, tw]] = val
    return T.coeff[k].reduce(out.reshape(S.group.order, lo.group.order, -1))


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_awes_matches_loops(name):
    T = TOWERS[name]
    rng = np.random.default_rng(11)
    for k in range(T.K):
        up = T.slots[k + 1]
        M = T.coeff[k + 1]
        beta = random_cochain(M, (up,), rng, normalized=False)
        assert np.array_equal(awes1(beta, T, k).values, naive_awes1(beta, T, k))
        alpha = random_cochain(M, (T.top, up), rng, normalized=False)
        assert np.array_equal(awes2(alpha, T, k).values, naive_awes2(alpha, T, k))


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_pass(name):
    rep = verify_tower(TOWERS[name], seed=1, trials=10)
    assert rep.passed, rep.first_failure()


@settings(max_examples=4)
@given(st.integers(0, 10**6))
def test_random_towers_pass(seed):
    T = random_tower(seed)
    assert T.K == 2 and 1 <= len(T.places) <= 3 and T.gamma.order <= 12
    rep = verify_tower(T, seed, trials=5)
    assert rep.passed, (T.name, rep.first_failure())


def test_random_tower_is_seeded():
    a, b = random_tower(42), random_tower(42)
    assert a.name == b.name and [sorted(H) for H in a.kernels] == [sorted(H) for H in b.kernels]


def test_trivial_level_step_relabels_by_zeta():
    cfg = {"group": {"kind": "cyclic", "order": 4}, "kernels": [[1], [1], []],
           "places": [[2]]}
    T = tower_from_config(cfg)
    ctx = T.ctx[0]
    assert len(ctx.kernel) == 1
    rng = np.random.default_rng(5)
    beta = random_cochain(T.coeff[1], (T.slots[1],), rng)
    out = T.place_function(awes1(beta, T, 0), 0)
    f = T.place_function(beta, 1)
    act0, act1 = T.place_sets[0].action, T.place_sets[1].action
    for s in range(T.slots[0].group.order):
        for w in range(T.place_sets[0].size):
            lift = int(ctx.section[s])
            assert np.array_equal(out[s, act0[T.slots[0].section[s], w]],
                                  T.ambient.reduce(f[lift, act1[T.slots[1].section[lift], T.zeta[0][w]]]))
    x = rng.integers(0, 50, size=T.coeff[1].dim)
    assert np.array_equal(awes0(x, T, 0), T.ambient.reduce(
        x.reshape(-1, T.ambient.dim)[T.zeta[0]]).reshape(-1))


def test_one_level_tower():
    T = tower_from_config({"group": {"kind": "cyclic", "order": 2}, "kernels": [[]],
                           "places": [[1]]})
    assert T.K == 0
    rep = verify_tower(T, 0, 5)
    assert rep.passed and rep.checks


def test_trivial_seed_gives_zero_family():
    fam = build_fundamental_family(TOWERS["cyclic6"], trivial=True)
    assert all(b.is_zero() for b in fam.beta) and all(a.is_zero() for a in fam.alpha)
    assert verify_family(fam).passed


def test_unsupported_root_order():
    with pytest.raises(DenominatorError):
        build_fundamental_family(TOWERS["cyclic4"], divisibility=7)


def out_of_fibre(name):
    T = TOWERS[name]
    z = T.zeta[0].copy()
    down = T.below(0)
    z[0] = next(w for w in range(len(down)) if down[w] != 0)
    return dict(PRESETS[name], zeta_override={"0": z.tolist()})


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_out_of_fibre_zeta_is_caught(name):
    T = tower_from_config(out_of_fibre(name), name)
    rep = verify_tower(T, 0, 3)
    assert not rep.passed
    assert rep.first_failure().label == "zeta-section-over-places[k=0]"


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_in_fibre_zeta_change_only_breaks_representative_match(name):
    T = TOWERS[name]
    z = T.zeta[0].copy()
    down = T.below(0)
    w, u = next((w, u) for w in range(len(z)) for u in range(len(down))
                if down[u] == w and u != z[w])
    z[w] = u
    T2 = tower_from_config(dict(PRESETS[name], zeta_override={"0": z.tolist()}), name)
    failed = [c.label for c in verify_tower(T2, 0, 5).checks if not c.passed]
    assert failed == ["zeta-sends-representatives-to-distinguished-lifts[k=0]"]


@pytest.mark.parametrize("cfg,msg", [
    ({"group": {"kind": "cyclic", "order": 4}, "kernels": [[1], []], "places": [[]],
      "colour": 3}, "unknown"),
    ({"group": {"kind": "cyclic", "order": 4}, "kernels": [[7], []], "places": [[]]}, "range"),
    ({"group": {"kind": "symmetric", "order": 3}, "kernels": [[1], []], "places": [[]]},
     "normal"),
    ({"group": {"kind": "cyclic", "order": 4}, "kernels": [[2]], "places": [[]]}, "trivial"),
    ({"group": {"kind": "cyclic", "order": 4}, "kernels": [[2], []], "places": []}, "place"),
    ({"group": {"kind": "cyclic", "order": 4}, "kernels": [[2], []], "places": [[]],
      "zeta_override": {"0": [0]}}, "shape"),
    ({"group": {"kind": "cyclic"}, "kernels": [[]]}, "lacks"),
])
def test_bad_configs(cfg, msg):
    with pytest.raises(TowerError, match=msg):
        tower_from_config(cfg)


def test_awes_preimage_needs_normalized_target():
    T = TOWERS["cyclic4"]
    c = Cochain(T.coeff[0], (T.slots[0],), np.ones((T.slots[0].group.order, T.coeff[0].dim)))
    with pytest.raises(Exception):
        awes1_preimage(c, T, 0)
    assert awes1(awes1_preimage(normalize(c), T, 0), T, 0).equals(normalize(c))
