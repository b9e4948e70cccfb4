"""Finite-level gerbe extensions built from the N-th roots of a compatible family,
and the cocycles ``iota`` attached to lattice-valued place functions.

For a level ``k``, an order ``N`` and a set ``S'`` of place orbits, the finite
module ``P_k`` has the pairs ``(g, v)`` (``g`` in ``G_k``, ``v`` in ``S'``) as
coordinates; a pair stands for the place ``g . vdot`` reached through ``g``.  A
point of ``P_k`` is a vector of ``(Z/N)^pairs`` up to the annihilator of the
character module ``M_k``, so points are compared by evaluating them on the
generators of ``M_k``.  The local module ``P_{k,v}`` is ``(Z/N)^{D_{k,v}}`` up to
constants.

Torus values live in ``Y (x) A`` (global) or ``Y (x) L_v`` (local).  The finite
subgroup ``Z = Y (x) mu_N`` sits in the ``mu`` coordinate, ``1 mod N`` being
stored as ``SCALE / N``.  Place functions with values in ``(1/N) Y`` are stored
multiplied by ``N``.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .cochains import Cochain, differential, slot_map
from .groups import coset_labels, identity_quotient
from .modules import GModule, Lattice, tensor_module
from .reports import EXHAUSTIVE_LIMIT, MIN_SAMPLES, Report, check
from .snf import integer_kernel, kernel_mod
from .tower import RootFamily, Tower


class GerbeError(ValueError):
    pass


# -- lattices and place functions ---------------------------------------------------

def regular_lattice(tower: Tower, k: int) -> Lattice:
    """``Z[G_k]`` with ``Gamma`` permuting the basis through ``G_k``; split at level ``k``."""
    Q = tower.slots[k]
    G = Q.group
    n = G.order
    mats = np.zeros((tower.gamma.order, n, n), dtype=np.int64)
    for gam in tower.gamma.elements:
        p = int(Q.proj[gam])
        mats[gam, G.mult[p], np.arange(n)] = 1
    return Lattice(tower.gamma, mats)


def restrict_lattice(Y: Lattice, sub) -> Lattice:
    return Lattice(sub.group, Y.mats[sub.embed])


def translates(X, Y: Lattice, tower: Tower, k: int) -> np.ndarray:
    """``(gamma X)(w) = gamma . X(gamma^-1 w)`` for every ``gamma``; shape ``(|Gamma|, places, rank)``."""
    act = tower.place_sets[k].action
    src = np.argsort(act, axis=1)
    picked = np.asarray(X, dtype=np.int64)[src]
    return np.einsum("gji,gwi->gwj", Y.mats, picked)


def shriek(X, tower: Tower, k: int, orbits) -> np.ndarray:
    """Move a level-``k`` place function to the places ``zeta(w)`` of level ``k + 1``."""
    X = np.asarray(X, dtype=np.int64)
    out = np.zeros((tower.place_sets[k + 1].size, X.shape[1]), dtype=np.int64)
    for v in orbits:
        W = tower.orbit_places(k, v)
        out[tower.zeta[k][W]] = X[W]
    return out


def localize(X, Y: Lattice, tower: Tower, k: int, v: int) -> np.ndarray:
    """``sum_{r in R'} r^-1 . X(r vdot)``."""
    G = tower.gamma
    X = np.asarray(X, dtype=np.int64)
    out = np.zeros(X.shape[1], dtype=np.int64)
    for r in tower.Rprime[k][v]:
        out += Y.act(G.inverse(r), X[tower.place_of(k, v, r)])
    return out


def _lattice_constraints(tower: Tower, k: int, Y: Lattice) -> np.ndarray:
    """Rows for degree zero and for the ``G_k``-norm, on variables ``(w, j)`` at ``w * r + j``."""
    act = tower.place_sets[k].action
    p, r = act.shape[1], Y.rank
    C = np.zeros((r + p * r, p * r), dtype=np.int64)
    for j in range(r):
        C[j, j::r] = 1
    for g in tower.slots[k].section:
        for u in range(p):
            w = act[g, u]
            C[r + w * r:r + (w + 1) * r, u * r:(u + 1) * r] += Y.mats[g]
    return C


def _cup_values(f, lead_lifts, TL, gamma, section) -> np.ndarray:
    """``sum_t sum_w f(.., t)(w) (x) (a t X)(w)`` with ``a`` the product of the leading
    arguments; ``f`` has shape ``lead + (q, places, d)``, the result ``lead + (rank, d)``."""
    at = gamma.mult[np.asarray(lead_lifts)[..., None], section]
    return np.einsum("...twj,...twi->...ji", TL[at], f)


# -- the global level ---------------------------------------------------------------

class GlobalLevel:
    """``P_k``, ``xi_k`` and the maps attached to level ``k`` for roots of order ``N``."""

    def __init__(self, roots: RootFamily, k: int, N: int, orbits=None):
        T = roots.family.tower
        if N not in roots.Ns:
            raise GerbeError(f"no roots of order {N} in the family")
        self.roots, self.tower, self.k, self.N = roots, T, k, N
        self.step = T.scale // N
        self.Q = Q = T.slots[k]
        G = Q.group
        self.orbits = list(range(len(T.places))) if orbits is None else sorted(set(orbits))
        if not self.orbits or any(not 0 <= v < len(T.places) for v in self.orbits):
            raise GerbeError("orbit set is empty or out of range")
        s, q = len(self.orbits), G.order
        self.npairs = q * s
        self.pair_g = np.repeat(np.arange(q), s)
        self.pair_orbit = np.tile(np.arange(s), q)
        self.pair_place = np.array([T.place_of(k, v, int(Q.section[g]))
                                    for g in range(q) for v in self.orbits], dtype=np.int64)
        self.dotted = np.array([T.base[k][v] for v in self.orbits], dtype=np.int64)
        self.places = np.concatenate([T.orbit_places(k, v) for v in self.orbits])
        rows = []
        for g in range(q):
            rows.append((self.pair_g == g).astype(np.int64))
        for w in self.places:
            rows.append((self.pair_place == w).astype(np.int64))
        self.M = kernel_mod(np.array(rows), N)
        perm = G.mult[Q.proj][:, :, None] * s + np.arange(s)[None, None, :]
        self.module = GModule(T.gamma, [N] * self.npairs, perm=perm.reshape(T.gamma.order, -1),
                              validate=False)

    # points of P_k
    def evaluate(self, y) -> np.ndarray:
        return (np.asarray(y, dtype=np.int64) @ self.M) % self.N

    def same(self, y1, y2) -> bool:
        return not np.any(self.evaluate(np.asarray(y1) - np.asarray(y2)))

    @cached_property
    def annihilator(self) -> np.ndarray:
        """Generators of the vectors that vanish on ``M_k`` (columns)."""
        return kernel_mod(self.M.T, self.N)

    def pair_up(self, b, prefix) -> np.ndarray:
        """``y(g, v) = b(.., prefix^-1 g)(g vdot)``: contract a ``mu_N``-valued cochain whose
        last argument is paired against the translates of ``c_univ``."""
        G = self.Q.group
        b = np.asarray(b)
        lead = np.asarray(prefix).shape
        bf = b.reshape((-1,) + b.shape[-2:])
        pf = np.asarray(prefix).reshape(-1)
        rho = G.mult[G.inv[pf][:, None], self.pair_g[None, :]]
        out = bf[np.arange(len(pf))[:, None], rho, self.pair_place[None, :]]
        return out.reshape(lead + (self.npairs,)) % self.N

    def mu_part(self, c: Cochain):
        """The ``mu`` coordinate of an ``N``-torsion cochain in ``Z/N``, and the first
        argument where the ratio of two places in ``S'`` leaves ``mu`` (or None)."""
        T = self.tower
        f = T.place_function(c, self.k)
        m = f[..., T.mu]
        bad = None
        if np.any(m % self.step):
            bad = tuple(int(i) for i in np.argwhere(m % self.step)[0])
        rest = f[..., self.places, :].copy()
        rest[..., T.mu] = 0
        off = np.argwhere(np.any(rest != rest[..., :1, :], axis=-1))
        if bad is None and len(off):
            bad = tuple(int(i) for i in off[0])
        return (m // self.step) % self.N, bad

    @cached_property
    def root_differential(self) -> Cochain:
        return differential(self.roots.root("alpha", self.k, self.N))

    @cached_property
    def xi(self) -> np.ndarray:
        """``xi_k(s, t)`` on ``G_k x G_k`` as vectors of ``(Z/N)^pairs``."""
        b, _ = self.mu_part(self.root_differential)
        G = self.Q.group
        return self.pair_up(b, G.mult)

    @cached_property
    def xi_top(self) -> np.ndarray:
        p = self.Q.proj
        return self.xi[p[:, None], p[None, :]]

    def xi_cochain(self) -> Cochain:
        return Cochain(self.module, (self.Q, self.Q), self.xi)

    # homomorphisms P_k -> Z and the dual place functions
    def hom_from_values(self, Xbar, Y: Lattice) -> np.ndarray:
        """``Psi^-1``: the matrix ``F`` with ``F e(g, v) = g . Xbar(vdot)``."""
        Xbar = np.asarray(Xbar, dtype=np.int64)
        lifts = self.Q.section[self.pair_g]
        cols = Y.act(lifts, Xbar[self.dotted[self.pair_orbit]])
        return cols.T % self.N

    def values_from_hom(self, F) -> np.ndarray:
        """``Psi``: ``Xbar(vdot) = F e(1, v)``, zero away from the dotted places."""
        F = np.asarray(F, dtype=np.int64)
        out = np.zeros((self.tower.place_sets[self.k].size, F.shape[0]), dtype=np.int64)
        e = self.Q.group.identity
        s = len(self.orbits)
        out[self.dotted] = F[:, e * s + np.arange(s)].T
        return out % self.N

    def hom_well_defined(self, F, Y: Lattice):
        """Where ``F`` fails to kill the annihilator or to commute with ``Gamma``, or None."""
        F = np.asarray(F, dtype=np.int64)
        if np.any((F @ self.annihilator) % self.N):
            return "does not vanish on the annihilator of M"
        for gam in self.tower.gamma.elements:
            x = F[:, self.module.perm[gam]]  # F(gam e_p) = F e_{gam p}
            if np.any((x - Y.mats[gam] @ F) % self.N):
                return f"not equivariant at {gam}"
        return None

    def rho_matrix(self, upper: "GlobalLevel") -> np.ndarray:
        """``rho_k : P_{k+1} -> P_k`` summing the fibres of ``G_{k+1} -> G_k``."""
        if upper.orbits != self.orbits or upper.k != self.k + 1:
            raise GerbeError("levels are not adjacent over the same orbits")
        down = slot_map(upper.Q, self.Q)
        s = len(self.orbits)
        R = np.zeros((self.npairs, upper.npairs), dtype=np.int64)
        R[down[upper.pair_g] * s + upper.pair_orbit, np.arange(upper.npairs)] = 1
        return R

    # random data
    def _constraints(self, Y: Lattice):
        key = id(Y)
        cache = self.__dict__.setdefault("_constraint_cache", {})
        if key not in cache:
            cache[key] = (Y, _lattice_constraints(self.tower, self.k, Y))
        return cache[key][1]

    def random_dual_values(self, rng, Y: Lattice) -> np.ndarray:
        """A random element of ``(Y/NY)[dotted]_0`` killed by the ``G_k``-norm."""
        C = self._constraints(Y)
        r = Y.rank
        cols = (self.dotted[:, None] * r + np.arange(r)[None, :]).reshape(-1)
        gens = self._cached(("dual", id(Y)), lambda: kernel_mod(C[:, cols], self.N))
        x = np.zeros(C.shape[1], dtype=np.int64)
        if gens.shape[1]:
            x[cols] = (gens @ rng.integers(0, self.N, size=gens.shape[1])) % self.N
        return x.reshape(-1, r)

    def random_lambda(self, rng, Y: Lattice, bound: int = 2) -> np.ndarray:
        """``N Lambda`` for a random ``Lambda`` with values in ``(1/N) Y`` at dotted places
        and in ``Y`` elsewhere, of degree zero and killed by the ``G_k``-norm."""
        C = self._constraints(Y)
        r = Y.rank
        cols = (self.places[:, None] * r + np.arange(r)[None, :]).reshape(-1)
        scale = np.where(np.isin(self.places, self.dotted), 1, self.N).repeat(r)

        def basis():
            K = integer_kernel(C[:, cols] * scale[None, :])
            return np.array(K, dtype=np.int64)

        K = self._cached(("lambda", id(Y)), basis)
        x = np.zeros(C.shape[1], dtype=np.int64)
        if K.shape[1]:
            x[cols] = scale * (K @ rng.integers(-bound, bound + 1, size=K.shape[1]))
        return x.reshape(-1, r)

    def _cached(self, key, make):
        cache = self.__dict__.setdefault("_sample_cache", {})
        if key not in cache:
            cache[key] = make()
        return cache[key]

    # torus-valued pieces
    def tensor(self, Y: Lattice) -> GModule:
        return self._cached(("tensor", id(Y)), lambda: tensor_module(Y, self.tower.ambient))

    def cup(self, c: Cochain, X, Y: Lattice) -> np.ndarray:
        """``(c cup X)(a..) = sum_t c(.., t) (x) (a.. t) X``, summed over the places of ``S'``.

        ``c`` takes values in the place-indexed module of level ``k`` and its last
        slot is ``G_k``; the leading slots act through their section lifts."""
        T = self.tower
        if c.slots[-1] is not self.Q:
            raise GerbeError("the last slot must be the level group")
        Xs = np.zeros_like(np.asarray(X, dtype=np.int64))
        Xs[self.places] = np.asarray(X)[self.places]
        TL = translates(Xs, Y, T, self.k)
        f = T.place_function(c, self.k)
        lead = _lead_lifts(c.slots[:-1], T.gamma)
        out = _cup_values(f, lead, TL, T.gamma, self.Q.section)
        return self.tensor(Y).reduce(out.reshape(out.shape[:-2] + (-1,)))

    def cup_mu(self, b, prefix_lifts, Xbar, Y: Lattice) -> np.ndarray:
        """Pair ``mu_N``-valued ``b(.., t)(w)`` with a ``Y/NY``-valued ``Xbar`` into ``Z``."""
        T = self.tower
        TL = translates(Xbar, Y, T, self.k)
        TL[:, np.setdiff1d(np.arange(TL.shape[1]), self.places)] = 0
        b = np.asarray(b)[..., None]
        z = _cup_values(b, prefix_lifts, TL, T.gamma, self.Q.section)[..., 0] % self.N
        return self.to_mu(z, Y)

    def to_mu(self, z, Y: Lattice) -> np.ndarray:
        z = np.asarray(z, dtype=np.int64)
        d = self.tower.ambient.dim
        out = np.zeros(z.shape + (d,), dtype=np.int64)
        out[..., self.tower.mu] = z * self.step
        return self.tensor(Y).reduce(out.reshape(z.shape[:-1] + (-1,)))

    def iota(self, X, Y: Lattice) -> "ExtensionCocycle":
        """``iota_k(Lambda)`` for ``X = N Lambda``."""
        T = self.tower
        F = self.hom_from_values(np.asarray(X) % self.N, Y)
        sq = self.roots.root("alpha", self.k, self.N).inflate((T.top, self.Q))
        return ExtensionCocycle(self, F, self.cup(sq, X, Y), self.tensor(Y), Y)

    def extension(self) -> "Extension":
        return Extension(self.module, self.xi_top, self.same)


def _lead_lifts(slots, gamma):
    """Product in ``Gamma`` of the section lifts of the leading arguments."""
    if not slots:
        return np.asarray(gamma.identity)
    grids = np.indices(tuple(q.group.order for q in slots))
    out = np.full(grids.shape[1:], gamma.identity, dtype=np.int64)
    for q, g in zip(slots, grids):
        out = gamma.mult[out, q.section[g]]
    return out


class Extension:
    """``x [] s`` with ``(x [] s)(y [] t) = (x + s y + xi(s, t)) [] s t``."""

    def __init__(self, module: GModule, xi_top, same):
        self.module = module
        self.xi = xi_top
        self.same = same
        self.N = int(module.moduli[0]) if module.dim else 1

    def mul(self, e1, e2):
        (x, s), (y, t) = e1, e2
        G = self.module.group
        return ((np.asarray(x) + self.module.act(s, y) + self.xi[s, t]) % self.N,
                int(G.mult[s, t]))

    def equal(self, e1, e2) -> bool:
        return e1[1] == e2[1] and self.same(e1[0], e2[0])


class ExtensionCocycle:
    """``x [] s -> F(x) + c(s)`` with values in a torus-type module."""

    def __init__(self, level, F, c, module: GModule, Y: Lattice):
        self.level, self.F, self.c, self.module, self.Y = level, F, c, module, Y

    def __call__(self, x, s) -> np.ndarray:
        z = (self.F @ np.asarray(x, dtype=np.int64)) % self.level.N
        return self.module.reduce(self.level.to_mu(z, self.Y) + self.c[s])


# -- the local level ----------------------------------------------------------------

class LocalLevel:
    """``P_{k,v}``, ``xi_{k,v}`` and ``iota_{k,v}`` over the decomposition group ``D_v``."""

    def __init__(self, roots: RootFamily, k: int, v: int, N: int, Y: Lattice):
        T = roots.family.tower
        self.roots, self.tower, self.k, self.v, self.N = roots, T, k, v, N
        self.step = T.scale // N
        pl = T.places[v]
        self.place = pl
        self.D = pl.sub.group
        self.base = identity_quotient(self.D)
        self.Q = Q = T.local_slots[k][v]
        n = Q.group.order
        self.npts = n
        self.M = kernel_mod(np.ones((1, n), dtype=np.int64), N)
        perm = Q.group.mult[Q.proj]
        self.module = GModule(self.D, [N] * n, perm=perm, validate=False)
        self.Y_global = Y
        self.Y = restrict_lattice(Y, pl.sub)
        self.tensor = tensor_module(self.Y, pl.local)

    def evaluate(self, y) -> np.ndarray:
        return (np.asarray(y, dtype=np.int64) @ self.M) % self.N

    def same(self, y1, y2) -> bool:
        return not np.any(self.evaluate(np.asarray(y1) - np.asarray(y2)))

    @cached_property
    def root_differential(self) -> Cochain:
        return differential(self.roots.root("local", self.k, self.N, self.v))

    def mu_part(self, c: Cochain):
        m = c.values[..., -1]
        bad = None
        if np.any(m % self.step):
            bad = tuple(int(i) for i in np.argwhere(m % self.step)[0])
        elif np.any(c.values[..., :-1]):
            bad = tuple(int(i) for i in np.argwhere(np.any(c.values[..., :-1], axis=-1))[0])
        return (m // self.step) % self.N, bad

    @cached_property
    def xi(self) -> np.ndarray:
        b, _ = self.mu_part(self.root_differential)
        G = self.Q.group
        g = np.arange(self.npts)
        rho = G.mult[G.inv[G.mult][..., None], g]  # (q, q, npts)
        s, t = np.indices((self.npts, self.npts))
        return b[s[..., None], t[..., None], rho] % self.N

    @cached_property
    def xi_top(self) -> np.ndarray:
        p = self.Q.proj
        return self.xi[p[:, None], p[None, :]]

    def xi_cochain(self) -> Cochain:
        return Cochain(self.module, (self.Q, self.Q), self.xi)

    def hom_from_value(self, lam_bar) -> np.ndarray:
        """``Psi^-1``: ``F e(d) = d . lam_bar``."""
        cols = self.Y.act(self.Q.section, np.broadcast_to(lam_bar, (self.npts, self.Y.rank)))
        return cols.T % self.N

    def value_from_hom(self, F) -> np.ndarray:
        return np.asarray(F)[:, self.Q.group.identity] % self.N

    def rho_matrix(self, upper: "LocalLevel") -> np.ndarray:
        down = slot_map(upper.Q, self.Q)
        R = np.zeros((self.npts, upper.npts), dtype=np.int64)
        R[down, np.arange(upper.npts)] = 1
        return R

    def norm_killed(self, y) -> bool:
        y = np.asarray(y, dtype=np.int64)
        return not np.any(sum(self.Y.act(int(d), y) for d in self.Q.section))

    def random_lambda(self, rng, bound: int = 2) -> np.ndarray:
        """``N lambda`` for a random ``lambda`` in ``(1/N) Y`` killed by the ``D_{k,v}``-norm."""
        norm = sum(self.Y.mats[int(d)] for d in self.Q.section)
        K = np.array(integer_kernel(norm), dtype=np.int64)
        if not K.shape[1]:
            return np.zeros(self.Y.rank, dtype=np.int64)
        return K @ rng.integers(-bound, bound + 1, size=K.shape[1])

    def cup(self, c: Cochain, lam) -> np.ndarray:
        """``(c cup lam)(a..) = sum_t c(.., t) (x) (a.. t) lam`` for local cochains."""
        if c.slots[-1] is not self.Q:
            raise GerbeError("the last slot must be the local level group")
        lead = _lead_lifts(c.slots[:-1], self.D)
        at = self.D.mult[np.asarray(lead)[..., None], self.Q.section]
        acted = self.Y.act(at, np.broadcast_to(lam, at.shape + (self.Y.rank,)))
        out = np.einsum("...tj,...ti->...ji", acted, c.values)
        return self.tensor.reduce(out.reshape(out.shape[:-2] + (-1,)))

    def to_mu(self, z, Y=None) -> np.ndarray:
        z = np.asarray(z, dtype=np.int64)
        d = self.place.local.dim
        out = np.zeros(z.shape + (d,), dtype=np.int64)
        out[..., -1] = z * self.step
        return self.tensor.reduce(out.reshape(z.shape[:-1] + (-1,)))

    def iota(self, X) -> ExtensionCocycle:
        """``iota_{k,v}(lambda)`` for ``X = N lambda``."""
        F = self.hom_from_value(np.asarray(X) % self.N)
        sq = self.roots.root("local", self.k, self.N, self.v).inflate((self.base, self.Q))
        return ExtensionCocycle(self, F, self.cup(sq, X), self.tensor, self.Y)

    def extension(self) -> Extension:
        return Extension(self.module, self.xi_top, self.same)


# -- localization -------------------------------------------------------------------

class Localization:
    """``loc_{k,v}``, ``pr_vdot``, ``eta_{k,v}`` and ``kappa`` linking a global and a local level."""

    def __init__(self, glob: GlobalLevel, loc: LocalLevel):
        if glob.k != loc.k or glob.N != loc.N:
            raise GerbeError("levels do not match")
        self.glob, self.loc = glob, loc
        T = glob.tower
        v = loc.v
        pl = loc.place
        self.embed = pl.sub.embed
        s = len(glob.orbits)
        gk = glob.Q.proj[self.embed[loc.Q.section]]  # local level element -> G_k
        self.loc_matrix = np.zeros((glob.npairs, loc.npts), dtype=np.int64)
        if v in glob.orbits:
            i = glob.orbits.index(v)
            self.loc_matrix[gk * s + i, np.arange(loc.npts)] = 1
        d = pl.sub.group.order
        pr = np.zeros((d + 1, T.ambient.dim), dtype=np.int64)
        pr[np.arange(d), T.q_block[v][self.embed]] = 1
        lab = coset_labels(T.gamma, pl.decomposition)
        base_coset = T.t_block[v][lab[T.gamma.identity]]
        pr[d, base_coset] = 1
        pr[d, T.mu] = 1
        self.pr = pr

    def project(self, vals, Y: Lattice) -> np.ndarray:
        """``(1 (x) pr_vdot)`` on ``Y (x) A`` values."""
        T = self.glob.tower
        vals = np.asarray(vals, dtype=np.int64)
        r = Y.rank
        out = vals.reshape(vals.shape[:-1] + (r, T.ambient.dim)) @ self.pr.T
        return self.loc.tensor.reduce(out.reshape(vals.shape[:-1] + (-1,)))

    def project_cochain(self, c: Cochain) -> np.ndarray:
        """``pr_vdot`` applied placewise: shape ``(.., places, dim L_v)``."""
        f = self.glob.tower.place_function(c, self.glob.k)
        return self.loc.place.local.reduce(f @ self.pr.T)

    @cached_property
    def eta(self) -> np.ndarray:
        """``eta_{k,v}(s)`` for ``s`` in ``D_v``, as vectors of ``(Z/N)^pairs``."""
        g = self.glob
        delta = g.roots.delta(g.k, g.N)
        p = self.project_cochain(delta)[self.embed]  # (|D|, q, places, dL)
        m = p[..., -1]
        if np.any(p[..., :-1]) or np.any(m % g.step):
            raise GerbeError("internal: projected discrepancy is not mu_N-valued")
        b = (m // g.step) % g.N
        return g.pair_up(b, g.Q.proj[self.embed])

    def eta_coboundary(self) -> np.ndarray:
        """``(d eta)(s, t) = s eta(t) - eta(s t) + eta(s)`` on ``D_v x D_v``."""
        g = self.glob
        D = self.loc.D
        eta = self.eta
        s, t = np.indices((D.order, D.order))
        acted = g.module.act(self.embed[s], eta[t])
        return (acted - eta[D.mult] + eta[s]) % g.N

    def kappa(self, X, Y: Lattice) -> np.ndarray:
        """``pr_vdot(sqrt beta_k) cup X`` in ``Y (x) L_v``."""
        g = self.glob
        T = g.tower
        beta = g.roots.root("beta", g.k, g.N)
        f = self.project_cochain(beta)
        Xs = np.zeros_like(np.asarray(X, dtype=np.int64))
        Xs[g.places] = np.asarray(X)[g.places]
        TL = translates(Xs, Y, T, g.k)
        out = _cup_values(f, T.gamma.identity, TL, T.gamma, g.Q.section)
        return self.loc.tensor.reduce(out.reshape(-1))

    def localize(self, X, Y: Lattice) -> np.ndarray:
        if self.loc.v not in self.glob.orbits:
            return np.zeros(Y.rank, dtype=np.int64)
        return localize(X, Y, self.glob.tower, self.glob.k, self.loc.v)

    def map_element(self, x, s):
        """``x [] s -> (loc x - eta(s)) [] s`` from the local to the global extension."""
        g = self.glob
        return ((self.loc_matrix @ np.asarray(x) - self.eta[s]) % g.N, int(self.embed[s]))


# -- verification -------------------------------------------------------------------

def _mode(size: int, trials: int):
    """Exhaustive when the domain is small, otherwise at least ``MIN_SAMPLES`` samples."""
    if size <= EXHAUSTIVE_LIMIT:
        return "exhaustive", size
    return "sampled", max(trials, MIN_SAMPLES)


def _pairs_domain(order: int, trials: int, rng):
    mode, n = _mode(order * order, trials)
    if mode == "exhaustive":
        s, t = np.indices((order, order))
        return mode, list(zip(s.reshape(-1).tolist(), t.reshape(-1).tolist()))
    return mode, [tuple(int(x) for x in rng.integers(0, order, size=2)) for _ in range(n)]


class Gerbe:
    """Levels of the gerbe for one root order ``N`` and one orbit set, built lazily."""

    def __init__(self, roots: RootFamily, N: int, orbits=None):
        self.roots, self.N = roots, N
        self.tower = roots.family.tower
        self.orbits = orbits
        self._glob, self._loc, self._lat = {}, {}, {}

    def level(self, k: int) -> GlobalLevel:
        if k not in self._glob:
            self._glob[k] = GlobalLevel(self.roots, k, self.N, self.orbits)
        return self._glob[k]

    def lattice(self, k: int) -> Lattice:
        if k not in self._lat:
            self._lat[k] = regular_lattice(self.tower, k)
        return self._lat[k]

    def local(self, k: int, v: int, split: int) -> LocalLevel:
        key = (k, v, split)
        if key not in self._loc:
            self._loc[key] = LocalLevel(self.roots, k, v, self.N, self.lattice(split))
        return self._loc[key]


def verify_level(gb: Gerbe, k: int, rng, trials: int, seed=None) -> Report:
    """Identities at a single global level: cocycle, universality and ``iota``."""
    rep = Report()
    g = gb.level(k)
    N = g.N
    tag = f"[N={N},k={k}]"
    Y = gb.lattice(k)
    Gam = gb.tower.gamma

    _, bad = g.mu_part(g.root_differential)
    rep.add(check(f"root-differential-pairs-to-mu{tag}", bad is None, bad, seed=seed))
    dxi = differential(g.xi_cochain())
    bad = np.argwhere(np.any(g.evaluate(dxi.values), axis=-1))
    rep.add(check(f"gerbe-cocycle{tag}", len(bad) == 0,
                  None if not len(bad) else tuple(bad[0].tolist()), mode="exhaustive",
                  trials=int(np.prod(dxi.shape)), seed=seed))

    # c_univ is a degree-zero, norm-killed family of functionals on M
    s = len(g.orbits)
    e = g.Q.group.identity
    deg = np.zeros(g.npairs, dtype=np.int64)
    deg[e * s + np.arange(s)] = 1
    ok = not np.any(g.evaluate(deg))
    for w in g.places:
        ok &= not np.any(g.evaluate((g.pair_place == w).astype(np.int64)))
    rep.add(check(f"universal-class-degree-zero-norm-killed{tag}", ok, seed=seed))

    ext = g.extension()
    mode, dom = _pairs_domain(Gam.order, trials, rng)
    fails = []
    for a, b in dom:
        c = int(rng.integers(Gam.order))
        xs = [rng.integers(0, N, size=g.npairs) for _ in range(3)]
        e1, e2, e3 = (xs[0], a), (xs[1], b), (xs[2], c)
        if not ext.equal(ext.mul(ext.mul(e1, e2), e3), ext.mul(e1, ext.mul(e2, e3))):
            fails.append((a, b, c))
    rep.tally(f"extension-associative{tag}", fails, len(dom), seed, mode)

    fails_wd, fails_rt, fails_univ = [], [], []
    q = g.Q.group.order
    d3 = g.root_differential
    b3, _ = g.mu_part(d3)
    lifts = _lead_lifts(d3.slots[:-1], Gam)
    for t in range(trials):
        Xbar = g.random_dual_values(rng, Y)
        F = g.hom_from_values(Xbar, Y)
        why = g.hom_well_defined(F, Y)
        if why:
            fails_wd.append((t, why))
        if not np.array_equal(g.values_from_hom(F), Xbar % N):
            fails_rt.append(t)
        pushed = (g.xi.reshape(q * q, -1) @ F.T) % N
        lhs = g.to_mu(pushed.reshape(q, q, -1), Y)
        rhs = g.cup_mu(b3, lifts, Xbar, Y)
        if not np.array_equal(lhs, rhs):
            fails_univ.append(t)
    rep.tally(f"psi-inverse-well-defined{tag}", fails_wd, trials, seed)
    rep.tally(f"psi-roundtrip{tag}", fails_rt, trials, seed)
    rep.tally(f"universal-pushforward{tag}", fails_univ, trials, seed)

    fails_tz, fails_der, fails_iota = [], [], []
    sq = gb.roots.root("alpha", k, N).inflate((gb.tower.top, g.Q))
    dsq = differential(sq)
    d3_top = g.root_differential.inflate((gb.tower.top, g.Q, g.Q))
    b3_top, _ = g.mu_part(d3_top)
    lifts_top = _lead_lifts(d3_top.slots[:-1], Gam)
    for t in range(trials):
        X = g.random_lambda(rng, Y)
        lhs = g.cup(d3, X, Y)
        rhs = g.cup_mu(b3, lifts, X % N, Y)
        if not np.array_equal(lhs, rhs):
            fails_tz.append(t)
        c1 = Cochain(g.tensor(Y), (gb.tower.top,), g.cup(sq, X, Y))
        if not np.array_equal(differential(c1).values, g.cup(dsq, X, Y)):
            fails_der.append(t)
        if not np.array_equal(g.cup(d3_top, X, Y), g.cup_mu(b3_top, lifts_top, X % N, Y)):
            fails_tz.append((t, "top"))
        io = g.iota(X, Y)
        for a, b in dom[:max(1, len(dom) // max(trials, 1))] if mode == "sampled" else dom:
            x, y = rng.integers(0, N, size=g.npairs), rng.integers(0, N, size=g.npairs)
            prod = ext.mul((x, a), (y, b))
            lhs = io(*prod)
            rhs = io.module.reduce(io(x, a) + io.module.act(a, io(y, b)))
            if not np.array_equal(lhs, rhs):
                fails_iota.append((t, a, b))
                break
    rep.tally(f"cup-torsion-pairings-agree{tag}", fails_tz, trials, seed)
    rep.tally(f"cup-derivation{tag}", fails_der, trials, seed)
    rep.tally(f"iota-cocycle{tag}", fails_iota, trials, seed)
    return rep


def verify_global_step(gb: Gerbe, k: int, rng, trials: int, seed=None) -> Report:
    """Level ``k`` against level ``k + 1``: ``rho`` on the gerbe cocycles, the Psi square,
    the cup-product lemmas and the compatibility of ``iota``."""
    rep = Report()
    lo, up = gb.level(k), gb.level(k + 1)
    N = lo.N
    tag = f"[N={N},k={k}]"
    T = gb.tower
    Y = gb.lattice(k)
    R = lo.rho_matrix(up)
    pushed = up.xi_top @ R.T
    bad = np.argwhere(np.any(lo.evaluate(pushed - lo.xi_top), axis=-1))
    rep.add(check(f"gerbe-rho-compat{tag}", len(bad) == 0,
                  None if not len(bad) else tuple(bad[0].tolist()), mode="exhaustive",
                  trials=T.gamma.order ** 2, seed=seed))

    fails_psi, fails_cons, fails_cup, fails_delta, fails_beta, fails_iota = [], [], [], [], [], []
    sq_lo = gb.roots.root("alpha", k, N).inflate((T.top, lo.Q))
    sq_up = gb.roots.root("alpha", k + 1, N).inflate((T.top, up.Q))
    dl_lo, dl_up = gb.roots.delta(k, N), gb.roots.delta(k + 1, N)
    be_lo, be_up = gb.roots.root("beta", k, N), gb.roots.root("beta", k + 1, N)
    ext_up = up.extension()
    C_up = _lattice_constraints(T, k + 1, Y)
    for t in range(trials):
        Xbar = lo.random_dual_values(rng, Y)
        F = lo.hom_from_values(Xbar, Y)
        if not np.array_equal(up.values_from_hom((F @ R) % N), shriek(Xbar, T, k, lo.orbits) % N):
            fails_psi.append(t)
        X = lo.random_lambda(rng, Y)
        Xs = shriek(X, T, k, lo.orbits)
        if np.any(C_up @ Xs.reshape(-1)) or np.any(np.delete(Xs, np.isin(
                np.arange(len(Xs)), up.dotted).nonzero()[0], axis=0) % N):
            fails_cons.append(t)
        if not np.array_equal(lo.cup(sq_lo, X, Y), up.cup(sq_up, Xs, Y)):
            fails_cup.append(t)
        if not np.array_equal(lo.cup(dl_lo, X, Y), up.cup(dl_up, Xs, Y)):
            fails_delta.append(t)
        if not np.array_equal(lo.cup(be_lo, X, Y), up.cup(be_up, Xs, Y)):
            fails_beta.append(t)
        io_lo, io_up = lo.iota(X, Y), up.iota(Xs, Y)
        for s in range(T.gamma.order):
            x = rng.integers(0, N, size=up.npairs)
            if not np.array_equal(io_lo((R @ x) % N, s), io_up(x, s)):
                fails_iota.append((t, s))
                break
    rep.tally(f"psi-shriek-square{tag}", fails_psi, trials, seed)
    rep.tally(f"shriek-keeps-constraints{tag}", fails_cons, trials, seed)
    rep.tally(f"cup-root-level-independent{tag}", fails_cup, trials, seed)
    rep.tally(f"cup-discrepancy-level-independent{tag}", fails_delta, trials, seed)
    rep.tally(f"cup-beta-level-independent{tag}", fails_beta, trials, seed)
    rep.tally(f"iota-rho-compat{tag}", fails_iota, trials, seed)

    # the morphism of extensions x [] s -> rho(x) [] s
    ext_lo = lo.extension()
    mode, dom = _pairs_domain(T.gamma.order, trials, rng)
    fails = []
    for a, b in dom:
        x, y = rng.integers(0, N, size=up.npairs), rng.integers(0, N, size=up.npairs)
        z, c = ext_up.mul((x, a), (y, b))
        lhs = ((R @ z) % N, c)
        rhs = ext_lo.mul(((R @ x) % N, a), ((R @ y) % N, b))
        if not ext_lo.equal(lhs, rhs):
            fails.append((a, b))
    rep.tally(f"extension-rho-homomorphism{tag}", fails, len(dom), seed, mode)
    return rep


def verify_local_level(gb: Gerbe, k: int, v: int, rng, trials: int, seed=None,
                       split: int | None = None) -> Report:
    rep = Report()
    split = k if split is None else split
    L = gb.local(k, v, split)
    N = L.N
    tag = f"[N={N},k={k},v={v}]"
    _, bad = L.mu_part(L.root_differential)
    rep.add(check(f"local-root-differential-in-mu{tag}", bad is None, bad, seed=seed))
    dxi = differential(L.xi_cochain())
    bad = np.argwhere(np.any(L.evaluate(dxi.values), axis=-1))
    rep.add(check(f"local-gerbe-cocycle{tag}", len(bad) == 0,
                  None if not len(bad) else tuple(bad[0].tolist()), mode="exhaustive",
                  trials=int(np.prod(dxi.shape)), seed=seed))
    ext = L.extension()
    D = L.D
    fails_univ, fails_iota, fails_tz = [], [], []
    q = L.npts
    d3 = L.root_differential
    b3, _ = L.mu_part(d3)
    for t in range(trials):
        X = L.random_lambda(rng)
        F = L.hom_from_value(X % N)
        if np.any(F.sum(axis=1) % N) or not np.array_equal(L.value_from_hom(F), X % N):
            fails_univ.append((t, "psi"))
        pushed = (L.xi.reshape(q * q, -1) @ F.T) % N
        lhs = L.to_mu(pushed.reshape(q, q, -1))
        cup3 = L.cup(d3, X)
        if not np.array_equal(lhs, cup3):
            fails_tz.append(t)
        io = L.iota(X)
        for a in range(D.order):
            b = int(rng.integers(D.order))
            x, y = rng.integers(0, N, size=q), rng.integers(0, N, size=q)
            prod = ext.mul((x, a), (y, b))
            if not np.array_equal(io(*prod), io.module.reduce(io(x, a) + io.module.act(a, io(y, b)))):
                fails_iota.append((t, a, b))
                break
    rep.tally(f"local-psi-roundtrip{tag}", fails_univ, trials, seed)
    rep.tally(f"local-universal-pushforward{tag}", fails_tz, trials, seed)
    rep.tally(f"local-iota-cocycle{tag}", fails_iota, trials, seed)
    return rep


def verify_local_step(gb: Gerbe, k: int, v: int, rng, trials: int, seed=None) -> Report:
    rep = Report()
    lo, up = gb.local(k, v, k), gb.local(k + 1, v, k)
    N = lo.N
    tag = f"[N={N},k={k},v={v}]"
    R = lo.rho_matrix(up)
    pushed = up.xi_top @ R.T
    bad = np.argwhere(np.any(lo.evaluate(pushed - lo.xi_top), axis=-1))
    rep.add(check(f"local-gerbe-rho-compat{tag}", len(bad) == 0,
                  None if not len(bad) else tuple(bad[0].tolist()), mode="exhaustive",
                  trials=lo.D.order ** 2, seed=seed))
    sq_lo = gb.roots.root("local", k, N, v).inflate((lo.base, lo.Q))
    sq_up = gb.roots.root("local", k + 1, N, v).inflate((up.base, up.Q))
    fails_psi, fails_cup, fails_iota = [], [], []
    for t in range(trials):
        X = lo.random_lambda(rng)
        F = lo.hom_from_value(X % N)
        if not np.array_equal(up.value_from_hom((F @ R) % N), X % N):
            fails_psi.append(t)
        if not np.array_equal(lo.cup(sq_lo, X), up.cup(sq_up, X)):
            fails_cup.append(t)
        io_lo, io_up = lo.iota(X), up.iota(X)
        for s in range(lo.D.order):
            x = rng.integers(0, N, size=up.npts)
            if not np.array_equal(io_lo((R @ x) % N, s), io_up(x, s)):
                fails_iota.append((t, s))
                break
    rep.tally(f"local-psi-square{tag}", fails_psi, trials, seed)
    rep.tally(f"local-cup-root-level-independent{tag}", fails_cup, trials, seed)
    rep.tally(f"local-iota-rho-compat{tag}", fails_iota, trials, seed)
    return rep


def verify_localization(gb: Gerbe, k: int, v: int, rng, trials: int, seed=None) -> Report:
    """Global level ``k`` against the local level at ``v``: the localization cup lemma,
    the gerbe comparison through ``eta`` and the localization identity for ``iota``."""
    rep = Report()
    g = gb.level(k)
    Y = gb.lattice(k)
    L = gb.local(k, v, k)
    lz = Localization(g, L)
    N = g.N
    T = gb.tower
    tag = f"[N={N},k={k},v={v}]"
    D = L.D
    emb = lz.embed

    # xi restricted to D_v = loc_* xi_{k,v} + d eta
    lhs = g.xi_top[emb[:, None], emb[None, :]]
    rhs = (L.xi_top @ lz.loc_matrix.T + lz.eta_coboundary()) % N
    bad = np.argwhere(np.any(g.evaluate(lhs - rhs), axis=-1))
    rep.add(check(f"gerbe-localization{tag}", len(bad) == 0,
                  None if not len(bad) else tuple(bad[0].tolist()), mode="exhaustive",
                  trials=D.order ** 2, seed=seed))

    ext_g, ext_l = g.extension(), L.extension()
    fails = []
    for a in range(D.order):
        for b in range(D.order):
            x, y = rng.integers(0, N, size=L.npts), rng.integers(0, N, size=L.npts)
            z, c = ext_l.mul((x, a), (y, b))
            left = lz.map_element(z, c)
            right = ext_g.mul(lz.map_element(x, a), lz.map_element(y, b))
            if not ext_g.equal(left, right):
                fails.append((a, b))
    rep.tally(f"localization-extension-homomorphism{tag}", fails, D.order ** 2, seed, "exhaustive")

    sq = gb.roots.root("alpha", k, N).inflate((T.top, g.Q))
    sq_loc = gb.roots.root("local", k, N, v).inflate((L.base, L.Q))
    dl = gb.roots.delta(k, N)
    fails_lg, fails_psi, fails_iota = [], [], []
    for t in range(trials):
        Xbar = g.random_dual_values(rng, Y)
        F = g.hom_from_values(Xbar, Y)
        lhs = L.value_from_hom((F @ lz.loc_matrix) % N)
        if not np.array_equal(lhs, lz.localize(Xbar, Y) % N):
            fails_psi.append(t)

        X = g.random_lambda(rng, Y)
        lam = lz.localize(X, Y)
        left = lz.project(g.cup(sq, X, Y)[emb], Y)
        kap = lz.kappa(X, Y)
        dkap = L.tensor.act(np.arange(D.order), np.broadcast_to(kap, (D.order, kap.size))) - kap
        pd = lz.project_cochain(dl)[emb]
        TL = translates(_restrict(X, g), Y, T, k)
        dcup = _cup_values(pd, emb, TL, T.gamma, g.Q.section)
        dcup = dcup.reshape(D.order, -1)
        right = L.tensor.reduce(L.cup(sq_loc, lam) + dkap + dcup)
        if not np.array_equal(left, right):
            fails_lg.append(t)

        io_g, io_l = g.iota(X, Y), L.iota(lam)
        for s in range(D.order):
            x = rng.integers(0, N, size=L.npts)
            y, s_g = lz.map_element(x, s)
            lhs = lz.project(io_g(y, s_g), Y)
            rhs = L.tensor.reduce(io_l(x, s) + dkap[s])
            if not np.array_equal(lhs, rhs):
                fails_iota.append((t, s))
                break
    rep.tally(f"psi-localization-square{tag}", fails_psi, trials, seed)
    rep.tally(f"cup-localization{tag}", fails_lg, trials, seed)
    rep.tally(f"iota-localization{tag}", fails_iota, trials, seed)
    return rep


def _restrict(X, level: GlobalLevel) -> np.ndarray:
    out = np.zeros_like(np.asarray(X, dtype=np.int64))
    out[level.places] = np.asarray(X)[level.places]
    return out


def verify_localization_step(gb: Gerbe, k: int, v: int, rng, trials: int, seed=None) -> Report:
    """Localization at levels ``k`` and ``k + 1``: ``eta`` and ``l`` are compatible, the
    square of extensions commutes, and ``kappa`` does not depend on the level."""
    rep = Report()
    T = gb.tower
    Y = gb.lattice(k)
    g0, g1 = gb.level(k), gb.level(k + 1)
    L0, L1 = gb.local(k, v, k), gb.local(k + 1, v, k)
    z0, z1 = Localization(g0, L0), Localization(g1, L1)
    N = g0.N
    tag = f"[N={N},k={k},v={v}]"
    R, Rl = g0.rho_matrix(g1), L0.rho_matrix(L1)

    bad = np.argwhere(np.any(g0.evaluate(z1.eta @ R.T - z0.eta), axis=-1))
    rep.add(check(f"eta-rho-compat{tag}", len(bad) == 0,
                  None if not len(bad) else tuple(bad[0].tolist()), mode="exhaustive",
                  trials=L0.D.order, seed=seed))
    lhs = (z0.loc_matrix @ Rl) % N
    rhs = (R @ z1.loc_matrix) % N
    bad = np.argwhere(g0.evaluate((lhs - rhs).T) != 0)
    rep.add(check(f"localization-rho-square{tag}", len(bad) == 0,
                  None if not len(bad) else tuple(bad[0].tolist()), seed=seed))

    fails_sq, fails_l, fails_kap, fails_face = [], [], [], []
    for s in range(L0.D.order):
        x = rng.integers(0, N, size=L1.npts)
        a = z1.map_element(x, s)
        left = ((R @ a[0]) % N, a[1])
        right = z0.map_element((Rl @ x) % N, s)
        if not g0.extension().equal(left, right):
            fails_sq.append(s)
    for t in range(trials):
        X = g0.random_lambda(rng, Y)
        Xs = shriek(X, T, k, g0.orbits)
        if not np.array_equal(z1.localize(Xs, Y), z0.localize(X, Y)):
            fails_l.append(t)
        if not np.array_equal(z1.kappa(Xs, Y), z0.kappa(X, Y)):
            fails_kap.append(t)
        Xbar = g0.random_dual_values(rng, Y)
        F = g0.hom_from_values(Xbar, Y)
        # the remaining cube face: loc_{k+1}^* rho^* F = rho_loc^* loc_k^* F
        a = L1.value_from_hom((F @ R @ z1.loc_matrix) % N)
        b = L1.value_from_hom((F @ z0.loc_matrix @ Rl) % N)
        if not np.array_equal(a, b):
            fails_face.append(t)
    rep.tally(f"localization-extension-square{tag}", fails_sq, L0.D.order, seed, "exhaustive")
    rep.tally(f"localize-shriek-compat{tag}", fails_l, trials, seed)
    rep.tally(f"kappa-level-independent{tag}", fails_kap, trials, seed)
    rep.tally(f"psi-cube-left-face{tag}", fails_face, trials, seed)
    rep.extend(verify_local_level(gb, k + 1, v, rng, min(trials, 2), seed, split=k))
    return rep


def verify_gerbe(roots: RootFamily, Ns=None, seed: int = 0, trials: int = 3,
                 orbits=None) -> Report:
    """All gerbe identities for every root order and every level."""
    rep = Report()
    T = roots.family.tower
    rng = np.random.default_rng(seed + 104729)
    for N in (roots.Ns if Ns is None else Ns):
        gb = Gerbe(roots, N, orbits)
        for k in range(T.K + 1):
            rep.extend(verify_level(gb, k, rng, trials, seed))
            for v in range(len(T.places)):
                rep.extend(verify_local_level(gb, k, v, rng, trials, seed))
                rep.extend(verify_localization(gb, k, v, rng, trials, seed))
        for k in range(T.K):
            rep.extend(verify_global_step(gb, k, rng, trials, seed))
            for v in range(len(T.places)):
                rep.extend(verify_local_step(gb, k, v, rng, trials, seed))
                rep.extend(verify_localization_step(gb, k, v, rng, trials, seed))
    return rep


__all__ = [
    "Extension", "ExtensionCocycle", "Gerbe", "GerbeError", "GlobalLevel", "LocalLevel",
    "Localization", "localize", "regular_lattice", "restrict_lattice", "shriek",
    "translates", "verify_gerbe", "verify_global_step", "verify_level",
    "verify_local_level", "verify_local_step", "verify_localization",
    "verify_localization_step",
]
