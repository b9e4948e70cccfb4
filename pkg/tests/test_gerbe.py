import copy

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rigidcochains.gerbe import _mode, localize, regular_lattice, shriek, verify_gerbe
from rigidcochains.reports import EXHAUSTIVE_LIMIT, MIN_SAMPLES
from rigidcochains.tower import (PRESETS, SCALE, build_fundamental_family, build_root_family,
                                 preset, tower_from_config, verify_roots)


@pytest.fixture(scope="module")
def cyclic6_roots():
    T = preset("cyclic6")
    return build_root_family(build_fundamental_family(T, 0), (1, 2, 4), 0)


@pytest.mark.parametrize("name", ["symmetric3", "dihedral8"])
def test_gerbe_suite_on_presets(name):
    T = preset(name)
    roots = build_root_family(build_fundamental_family(T, 2), (1, 2, 4), 2)
    rep = verify_roots(roots)
    rep.extend(verify_gerbe(roots, Ns=(2, 4), seed=2, trials=2))
    assert rep.passed, rep.first_failure()
    labels = {c.label for c in rep.checks}
    assert "gerbe-cocycle[N=4,k=2]" in labels


def test_gerbe_detects_a_perturbed_root(cyclic6_roots):
    bad = copy.deepcopy(cyclic6_roots)
    T = bad.family.tower
    c = bad.alpha[1]
    vals = c.values.copy()
    mu = T.mu  # the mu coordinate at place 0
    vals[1, 1, mu] = (vals[1, 1, mu] + SCALE // 4) % SCALE
    bad.alpha[1] = c.like(vals)
    assert verify_gerbe(cyclic6_roots, Ns=(4,), trials=2).passed
    rep = verify_gerbe(bad, Ns=(4,), trials=2)
    assert not rep.passed
    assert not verify_roots(bad).passed


def test_trivial_family_gives_passing_gerbe():
    T = preset("cyclic4")
    fam = build_fundamental_family(T, trivial=True)
    roots = build_root_family(fam, (2,), trivial=True)
    assert all(a.is_zero() for a in roots.alpha)
    assert verify_gerbe(roots, trials=1).passed


@given(st.sampled_from(sorted(PRESETS)), st.integers(0, 2**32))
def test_shriek_supported_on_zeta_image(name, seed):
    T = preset(name)
    rng = np.random.default_rng(seed)
    for k in range(T.K):
        X = rng.integers(-9, 9, size=(T.place_sets[k].size, 3))
        out = shriek(X, T, k, range(len(T.places)))
        img = T.zeta[k]
        assert np.array_equal(out[img], X)
        off = np.setdiff1d(np.arange(len(out)), img)
        assert not np.any(out[off])
        assert not np.any(shriek(np.zeros_like(X), T, k, range(len(T.places))))


def test_shriek_is_relabeling_for_bijective_zeta():
    T = tower_from_config({"group": {"kind": "cyclic", "order": 4}, "kernels": [[1], [1], []],
                           "places": [[2]]})
    X = np.arange(T.place_sets[0].size * 2).reshape(-1, 2)
    out = shriek(X, T, 0, [0])
    assert sorted(T.zeta[0].tolist()) == list(range(T.place_sets[1].size))
    assert np.array_equal(out[T.zeta[0]], X)


@given(st.sampled_from(sorted(PRESETS)), st.integers(0, 2**32))
def test_localize_is_additive(name, seed):
    T = preset(name)
    rng = np.random.default_rng(seed)
    k = T.K
    Y = regular_lattice(T, k)
    Y.validate()
    X1 = rng.integers(-9, 9, size=(T.place_sets[k].size, Y.rank))
    X2 = rng.integers(-9, 9, size=X1.shape)
    for v in range(len(T.places)):
        assert np.array_equal(localize(X1 + X2, Y, T, k, v),
                              localize(X1, Y, T, k, v) + localize(X2, Y, T, k, v))


def test_check_modes():
    assert _mode(EXHAUSTIVE_LIMIT, 3) == ("exhaustive", EXHAUSTIVE_LIMIT)
    assert _mode(EXHAUSTIVE_LIMIT + 1, 3) == ("sampled", MIN_SAMPLES)
    assert _mode(EXHAUSTIVE_LIMIT + 1, 5000) == ("sampled", 5000)
