"""Smith normal form over the integers and the linear solvers built on it.

Row and column operations are applied with vectorized numpy arithmetic on
int64 arrays; if entries grow past a safe bound the computation switches to
Python integers (object arrays) and stays exact.
"""

from __future__ import annotations

from math import gcd

import numpy as np

_SAFE = 1 << 30


def _promote(*arrays):
    return [a.astype(object) for a in arrays]


def _too_big(*arrays) -> bool:
    for a in arrays:
        if a.dtype != object and a.size and int(np.abs(a).max()) > _SAFE:
            return True
    return False


def smith(A, rhs=None, want_u: bool = False):
    """Smith normal form ``U A V = D``.

    Returns ``(diag, V, U_rhs, U)``: the nonzero invariant factors in order
    (each dividing the next), the column transform ``V``, ``U @ rhs`` when a
    right-hand side is given, and ``U`` itself when requested.
    """
    M = np.array(A, dtype=np.int64 if np.asarray(A).dtype != object else object)
    if M.ndim != 2:
        raise ValueError("matrix must be 2-dimensional")
    m, n = M.shape
    V = np.eye(n, dtype=M.dtype)
    R = None if rhs is None else np.array(rhs, dtype=M.dtype).reshape(m, -1)
    U = np.eye(m, dtype=M.dtype) if want_u else None

    def rows(*ops):
        return [x for x in (M, R, U) if x is not None]

    def swap_rows(i, j):
        if i != j:
            for X in rows():
                X[[i, j]] = X[[j, i]]

    def swap_cols(i, j):
        if i != j:
            M[:, [i, j]] = M[:, [j, i]]
            V[:, [i, j]] = V[:, [j, i]]

    diag = []
    t = 0
    while t < min(m, n):
        if _too_big(M, V) or (R is not None and _too_big(R)) or (U is not None and _too_big(U)):
            M, V = _promote(M, V)
            if R is not None:
                R = R.astype(object)
            if U is not None:
                U = U.astype(object)
        sub = M[t:, t:]
        nz = np.argwhere(sub != 0)
        if len(nz) == 0:
            break
        vals = np.abs(sub[nz[:, 0], nz[:, 1]])
        i, j = nz[int(np.argmin(vals))]
        swap_rows(t, t + i)
        swap_cols(t, t + j)
        while True:
            p = M[t, t]
            col = M[t + 1:, t]
            if np.any(col != 0):
                q = col // p
                for X in rows():
                    X[t + 1:] -= q[:, None] * X[t]
                col = M[t + 1:, t]
                if np.any(col != 0):
                    nzr = np.nonzero(col)[0]
                    k = nzr[int(np.argmin(np.abs(col[nzr])))]
                    swap_rows(t, t + 1 + k)
                    continue
            row = M[t, t + 1:]
            if np.any(row != 0):
                q = row // p
                M[:, t + 1:] -= M[:, t:t + 1] * q[None, :]
                V[:, t + 1:] -= V[:, t:t + 1] * q[None, :]
                row = M[t, t + 1:]
                if np.any(row != 0):
                    nzc = np.nonzero(row)[0]
                    k = nzc[int(np.argmin(np.abs(row[nzc])))]
                    swap_cols(t, t + 1 + k)
                    continue
            rest = M[t + 1:, t + 1:]
            bad = np.argwhere(rest % p != 0) if rest.size else []
            if len(bad):
                k = bad[0][0]
                for X in rows():
                    X[t] += X[t + 1 + k]
                continue
            break
        if M[t, t] < 0:
            for X in rows():
                X[t] = -X[t]
        diag.append(int(M[t, t]))
        t += 1
    return diag, V, R, U


def solve_integer(A, b):
    """Some integer ``x`` with ``A x = b``, or ``None``."""
    A = np.asarray(A)
    b = np.asarray(b).reshape(-1)
    m, n = A.shape
    diag, V, Ub, _ = smith(A, rhs=b)
    Ub = Ub.reshape(-1)
    r = len(diag)
    y = np.zeros(n, dtype=object)
    for i, d in enumerate(diag):
        if int(Ub[i]) % d:
            return None
        y[i] = int(Ub[i]) // d
    if any(int(v) != 0 for v in Ub[r:]):
        return None
    x = V.astype(object) @ y
    return np.array([int(v) for v in x], dtype=object)


def solve_modular(A, b, row_moduli):
    """Integer ``x`` with ``(A x)_i = b_i`` modulo ``row_moduli[i]`` (0 means exact)."""
    A = np.asarray(A, dtype=np.int64)
    m, n = A.shape
    mods = [int(x) for x in row_moduli]
    extra = [i for i, md in enumerate(mods) if md > 0]
    B = np.zeros((m, n + len(extra)), dtype=np.int64)
    B[:, :n] = A
    for c, i in enumerate(extra):
        B[i, n + c] = mods[i]
    z = solve_integer(B, b)
    return None if z is None else z[:n]


def integer_kernel(A) -> np.ndarray:
    """Basis of ``{x in Z^n : A x = 0}`` as columns."""
    A = np.asarray(A)
    diag, V, _, _ = smith(A)
    return V[:, len(diag):]


def kernel_mod(A, N: int) -> np.ndarray:
    """Generators (columns) of ``{x in (Z/N)^n : A x = 0 mod N}``.

    Works one prime power of ``N`` at a time by elimination over ``Z/p^k`` and
    glues the pieces with the Chinese remainder theorem.
    """
    A = np.asarray(A)
    m, n = A.shape
    if N == 1:
        return np.zeros((n, 0), dtype=np.int64)
    if m == 0:
        return np.eye(n, dtype=np.int64)
    if A.dtype == object:
        A = np.array([[int(x) % N for x in row] for row in A], dtype=np.int64)
    else:
        A = A % N
    gens = []
    for p, k in _factor(N):
        q = p ** k
        e = (N // q) * pow(N // q, -1, q)  # 1 mod q, 0 mod N/q
        for col in _kernel_prime_power(A % q, p, k).T:
            gens.append((col * e) % N)
    if not gens:
        return np.zeros((n, 0), dtype=np.int64)
    return np.array(gens, dtype=np.int64).T


def _factor(N: int):
    out, p = [], 2
    while p * p <= N:
        if N % p == 0:
            k = 0
            while N % p == 0:
                N //= p
                k += 1
            out.append((p, k))
        p += 1
    if N > 1:
        out.append((N, 1))
    return out


def _kernel_prime_power(A: np.ndarray, p: int, k: int) -> np.ndarray:
    """Kernel generators of ``A`` over the local ring ``Z/p^k``.

    Pivots are taken in order of valuation: a sweep over the columns for units,
    then for entries of valuation 1, and so on.  A pivot of least valuation
    divides every remaining entry, so elimination stays inside ``Z/p^k``, and
    row operations never lower valuations in columns already swept.
    """
    q = p ** k
    M = np.unique(A % q, axis=0)
    M = M[np.any(M, axis=1)]
    alive = np.ones(len(M), dtype=bool)
    n = A.shape[1]
    V = np.eye(n, dtype=np.int64)
    pivots = {}
    for val in range(k):
        pv = p ** val
        for j in range(n):
            if j in pivots:
                continue
            cand = np.nonzero(alive & (M[:, j] % (pv * p) != 0))[0]
            if not len(cand):
                continue
            i = cand[0]
            row = (M[i] * pow(int(M[i, j]) // pv, -1, q)) % q
            others = np.nonzero(alive & (M[:, j] != 0))[0]
            others = others[others != i]
            if len(others):
                M[others] = (M[others] - np.outer(M[others, j] // pv, row)) % q
            # column operations clear the rest of the pivot row
            factors = row // pv
            factors[j] = 0
            touched = np.nonzero(factors)[0]
            if len(touched):
                V[:, touched] = (V[:, touched] - np.outer(V[:, j], factors[touched])) % q
            pivots[j] = val
            alive[i] = False
    gens = [(V[:, j] * p ** (k - v)) % q for j, v in sorted(pivots.items()) if v > 0]
    gens += [V[:, j] for j in range(n) if j not in pivots]
    if not gens:
        return np.zeros((n, 0), dtype=np.int64)
    return np.array(gens, dtype=np.int64).T


def kernel_mod_smith(A, N: int) -> np.ndarray:
    """``kernel_mod`` through the integer Smith form, kept as an independent route."""
    A = np.asarray(A)
    if A.shape[0] == 0:
        return np.eye(A.shape[1], dtype=np.int64)
    return _kernel_mod(A, N)


def _kernel_mod(A, N: int) -> np.ndarray:
    n = A.shape[1]
    diag, V, _, _ = smith(A)
    gens = []
    for i in range(n):
        if i < len(diag):
            scale = N // gcd(diag[i], N)
            if scale % N == 0:
                continue
        else:
            scale = 1
        gens.append([(int(v) * scale) % N for v in V[:, i]])
    if not gens:
        return np.zeros((n, 0), dtype=np.int64)
    return np.array(gens, dtype=np.int64).T
