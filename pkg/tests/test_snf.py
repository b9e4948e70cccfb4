from itertools import product

import numpy as np
from hypothesis import given, strategies as st

from rigidcochains.snf import (integer_kernel, kernel_mod, kernel_mod_smith, smith,
                               solve_integer, solve_modular)


def matrices(max_rows=4, max_cols=4, bound=9):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda mn: st.lists(st.lists(st.integers(-bound, bound), min_size=mn[1], max_size=mn[1]),
                            min_size=mn[0], max_size=mn[0])).map(
        lambda rows: np.array(rows, dtype=np.int64))


def span_mod(gens, N, n):
    """Every combination of the generator columns, reduced mod N."""
    out = {tuple([0] * n)}
    for col in np.asarray(gens).T:
        out = {tuple((np.array(v) + c * col) % N) for v in out for c in range(N)}
    return out


def brute_kernel(A, N):
    n = A.shape[1]
    return {v for v in product(range(N), repeat=n) if not np.any((A @ np.array(v)) % N)}


def test_smith_known_example():
    diag, _, _, _ = smith([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert diag == [2, 6, 12]


@given(matrices())
def test_smith_reconstructs(A):
    diag, V, _, U = smith(A, want_u=True)
    D = (U.astype(object) @ A.astype(object) @ V.astype(object))
    expect = np.zeros(A.shape, dtype=object)
    for i, d in enumerate(diag):
        expect[i, i] = d
    assert (D == expect).all()
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    assert round(abs(float(np.linalg.det(V.astype(float))))) == 1


@given(matrices())
def test_integer_kernel_is_kernel(A):
    K = integer_kernel(A)
    assert not np.any(A.astype(object) @ K.astype(object))
    assert K.shape[1] == A.shape[1] - np.linalg.matrix_rank(A.astype(float))


@given(matrices(), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_solve_integer_roundtrip(A, x):
    x = np.array(x[:A.shape[1]], dtype=object)
    b = A.astype(object) @ x
    y = solve_integer(A, b)
    assert y is not None and (A.astype(object) @ y == b).all()


def test_solve_integer_detects_no_solution():
    assert solve_integer([[2, 4]], [3]) is None
    assert solve_modular([[2]], [1], [4]) is None
    assert solve_modular([[2]], [3], [5]) is not None


@given(matrices(max_rows=3, max_cols=3, bound=12), st.sampled_from([2, 4, 6, 8, 9, 12]))
def test_kernel_mod_matches_brute_force(A, N):
    n = A.shape[1]
    want = brute_kernel(A, N)
    assert span_mod(kernel_mod(A, N), N, n) == want
    assert span_mod(kernel_mod_smith(A, N), N, n) == want


@given(matrices(max_rows=6, max_cols=6, bound=40), st.sampled_from([4, 6, 12, 36, 720]))
def test_kernel_routes_agree_on_larger_inputs(A, N):
    # the elimination route and the Smith route generate the same subgroup
    K1, K2 = kernel_mod(A, N), kernel_mod_smith(A, N)
    for K in (K1, K2):
        assert not np.any((A @ K) % N)
    both = np.concatenate([K1, K2], axis=1)
    for K in (K1, K2):
        # each route's span contains the other's generators
        assert _contains(K, both, N)


def _contains(K, cols, N):
    n = K.shape[0]
    B = np.concatenate([K, N * np.eye(n, dtype=np.int64)], axis=1)
    return all(solve_integer(B, c) is not None for c in cols.T)
