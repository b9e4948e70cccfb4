"""Finitely generated abelian groups with a group action, induced and maps modules,
cocharacter lattices and lattice-valued place functions.

A module element is an int64 vector; coordinate ``i`` lives in ``Z`` when
``moduli[i] == 0`` and in ``Z/moduli[i]`` otherwise.  Group elements act by
integer matrices (column convention, ``act(g) @ x``).  Monomial actions
(signed permutations of coordinates) are stored as index arrays and applied
by gathering, which keeps the large place-indexed modules cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, GSet, Subgroup, coset_labels


class ModuleError(ValueError):
    pass


@dataclass(frozen=True)
class AbGroup:
    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        if self.free_rank < 0 or any(int(d) < 2 for d in self.torsion):
            raise ModuleError("free rank must be >= 0 and torsion orders >= 2")

    @property
    def moduli(self) -> np.ndarray:
        return np.array([0] * self.free_rank + [int(d) for d in self.torsion], dtype=np.int64)

    @property
    def rank(self) -> int:
        return self.free_rank + len(self.torsion)

    def reduce(self, x):
        return reduce_mod(np.asarray(x, dtype=np.int64), self.moduli)


def reduce_mod(x: np.ndarray, moduli: np.ndarray) -> np.ndarray:
    """Reduce the last axis of ``x`` coordinatewise into ``[0, m)`` where ``m > 0``."""
    tor = moduli > 0
    if not tor.any():
        return x
    out = np.array(x, dtype=np.int64, copy=True)
    out[..., tor] %= moduli[tor]
    return out


class GModule:
    """An abelian group ``Z^r + sum Z/d_i`` with an action of ``group``."""

    def __init__(self, group: FiniteGroup, moduli, mats=None, perm=None, sign=None,
                 name: str = "", validate: bool = True):
        self.group = group
        self.moduli = np.asarray(moduli, dtype=np.int64).reshape(-1)
        self.dim = len(self.moduli)
        self.name = name
        d, n = self.dim, group.order
        if perm is not None:
            self.perm = np.asarray(perm, dtype=np.int64).reshape(n, d)
            self.sign = (np.ones((n, d), dtype=np.int64) if sign is None
                         else np.asarray(sign, dtype=np.int64).reshape(n, d))
            # output coordinate j of g.x reads input coordinate src[g, j]
            self.src = np.argsort(self.perm, axis=1)
            self.src_sign = np.take_along_axis(self.sign, self.src, axis=1)
            self._mats = None
        elif mats is not None:
            self._mats = np.asarray(mats, dtype=np.int64).reshape(n, d, d)
            self.perm = None
        else:
            raise ModuleError("either matrices or a monomial action is required")
        if validate:
            self.validate()

    # -- basic structure ------------------------------------------------
    @property
    def monomial(self) -> bool:
        return self.perm is not None

    @property
    def mats(self) -> np.ndarray:
        if self._mats is None:
            n, d = self.group.order, self.dim
            mats = np.zeros((n, d, d), dtype=np.int64)
            g = np.repeat(np.arange(n), d)
            cols = np.tile(np.arange(d), n)
            mats[g, self.perm.reshape(-1), cols] = self.sign.reshape(-1)
            self._mats = mats
        return self._mats

    def reduce(self, x):
        return reduce_mod(np.asarray(x, dtype=np.int64), self.moduli)

    def zero(self, shape=()):
        return np.zeros(tuple(shape) + (self.dim,), dtype=np.int64)

    def equal(self, x, y) -> bool:
        return bool(np.array_equal(self.reduce(x), self.reduce(y)))

    def act(self, g, x):
        """Apply group element(s) ``g`` to value(s) ``x``; ``g`` broadcasts over the
        leading axes of ``x``."""
        x = np.asarray(x, dtype=np.int64)
        g = np.asarray(g, dtype=np.int64)
        if self.monomial:
            src = self.src[g]
            sgn = self.src_sign[g]
            if g.ndim == 0:
                out = x[..., src] * sgn
            else:
                g_b = np.broadcast_to(g, x.shape[:-1])
                src = self.src[g_b]
                sgn = self.src_sign[g_b]
                out = np.take_along_axis(x, src, axis=-1) * sgn
        else:
            mats = self.mats[g]
            if g.ndim == 0:
                out = x @ mats.T
            else:
                g_b = np.broadcast_to(g, x.shape[:-1])
                out = np.einsum("...ij,...j->...i", self.mats[g_b], x)
        return self.reduce(out)

    def validate(self):
        G = self.group
        d = self.dim
        if self.monomial:
            for g in G.elements:
                if sorted(self.perm[g]) != list(range(d)):
                    raise ModuleError(f"element {g} does not permute coordinates")
                if not np.array_equal(self.moduli[self.perm[g]], self.moduli):
                    raise ModuleError("monomial action must preserve coordinate moduli")
            if not (np.array_equal(self.perm[G.identity], np.arange(d))
                    and np.all(self.sign[G.identity] == 1)):
                raise ModuleError("identity must act trivially")
        else:
            mats = self.mats
            eye = np.eye(d, dtype=np.int64)
            if not self.equal(self.act(G.identity, eye), eye):
                raise ModuleError("identity must act trivially")
            mi = self.moduli[:, None]
            mj = self.moduli[None, :]
            for g in G.elements:
                M = mats[g]
                free_from_tor = (mi == 0) & (mj > 0) & (M != 0)
                tor_ok = np.where((mi > 0) & (mj > 0), (M * mj) % np.where(mi > 0, mi, 1), 0)
                if free_from_tor.any() or np.any(tor_ok != 0):
                    raise ModuleError("action matrix does not respect torsion")
        # homomorphism law on basis vectors
        eye = np.eye(d, dtype=np.int64)
        for g in G.elements:
            for h in G.elements:
                lhs = self.act(G.mul(g, h), eye)
                rhs = self.act(g, self.act(h, eye))
                if not np.array_equal(lhs, rhs):
                    raise ModuleError(f"action is not a homomorphism at ({g}, {h})")

    def invariants_basis_orbits(self, elements):
        """Orbits of coordinates under ``elements`` (monomial modules only)."""
        if not self.monomial:
            raise ModuleError("orbit decomposition needs a monomial action")
        parent = list(range(self.dim))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for g in elements:
            for i, j in enumerate(self.perm[g]):
                a, b = find(i), find(int(j))
                if a != b:
                    parent[a] = b
        return np.array([find(i) for i in range(self.dim)])

    def random_invariant(self, rng, elements, bound: int = 5, free_scale: int = 1,
                         tor_step=None, shape=()):
        """Random element(s) fixed by ``elements`` for a monomial action with all
        signs +1: one random value per coordinate orbit."""
        if not self.monomial or np.any(self.sign != 1):
            raise ModuleError("invariant sampling needs a permutation action")
        roots = self.invariants_basis_orbits(elements)
        _, inv = np.unique(roots, return_inverse=True)
        k = int(inv.max()) + 1 if len(inv) else 0
        vals = rng.integers(-bound, bound + 1, size=tuple(shape) + (k,)).astype(np.int64)
        out = vals[..., inv]
        tor = self.moduli > 0
        out[..., ~tor] *= free_scale
        if tor_step is not None:
            out[..., tor] *= tor_step
        else:
            out[..., tor] = rng.integers(0, 1 << 20, size=tuple(shape) + (k,))[..., inv][..., tor]
        return self.reduce(out)

    def restrict(self, sub: Subgroup) -> "GModule":
        if sub.parent is not self.group:
            raise ModuleError("subgroup of a different group")
        if self.monomial:
            return GModule(sub.group, self.moduli, perm=self.perm[sub.embed],
                           sign=self.sign[sub.embed], name=self.name, validate=False)
        return GModule(sub.group, self.moduli, mats=self.mats[sub.embed], name=self.name,
                       validate=False)


def trivial_module(group: FiniteGroup, base: AbGroup, name: str = "") -> GModule:
    d = base.rank
    ident = np.tile(np.arange(d), (group.order, 1))
    return GModule(group, base.moduli, perm=ident, name=name, validate=False)


def sign_module(group: FiniteGroup, character) -> GModule:
    """``Z`` with ``g`` acting by ``character[g]`` in {+1, -1}."""
    sign = np.asarray(character, dtype=np.int64).reshape(group.order, 1)
    return GModule(group, [0], perm=np.zeros((group.order, 1), dtype=np.int64), sign=sign)


def permutation_module(X: GSet, moduli_per_point) -> GModule:
    """Functions on ``X`` with ``(g f)(x) = f(g^-1 x)``, coordinate values in the
    declared moduli (one modulus per point, constant on orbits)."""
    mod = np.asarray(moduli_per_point, dtype=np.int64)
    return GModule(X.group, mod, perm=X.action, validate=False)


def direct_sum(*mods: GModule) -> GModule:
    G = mods[0].group
    if any(m.group is not G for m in mods):
        raise ModuleError("direct sum of modules over different groups")
    moduli = np.concatenate([m.moduli for m in mods])
    if all(m.monomial for m in mods):
        offs = np.cumsum([0] + [m.dim for m in mods])
        perm = np.concatenate([m.perm + o for m, o in zip(mods, offs)], axis=1)
        sign = np.concatenate([m.sign for m in mods], axis=1)
        return GModule(G, moduli, perm=perm, sign=sign, validate=False)
    d = len(moduli)
    mats = np.zeros((G.order, d, d), dtype=np.int64)
    o = 0
    for m in mods:
        mats[:, o:o + m.dim, o:o + m.dim] = m.mats
        o += m.dim
    return GModule(G, moduli, mats=mats, validate=False)


class MapsModule(GModule):
    """``Maps(X, A)`` with ``(s f)(w) = s(f(s^-1 w))``; coordinate ``(w, i)`` sits at
    ``w * dim(A) + i``."""

    def __init__(self, X: GSet, A: GModule):
        if X.group is not A.group:
            raise ModuleError("place set and module must share the acting group")
        self.gset = X
        self.inner = A
        n, p, d = A.group.order, X.size, A.dim
        moduli = np.tile(A.moduli, p)
        if A.monomial:
            perm = (X.action[:, :, None] * d + A.perm[:, None, :]).reshape(n, p * d)
            sign = np.repeat(A.sign[:, None, :], p, axis=1).reshape(n, p * d)
            super().__init__(A.group, moduli, perm=perm, sign=sign, validate=False)
        else:
            mats = np.zeros((n, p * d, p * d), dtype=np.int64)
            for g in range(n):
                for w in range(p):
                    u = X.action[g, w]
                    mats[g, u * d:(u + 1) * d, w * d:(w + 1) * d] = A.mats[g]
            super().__init__(A.group, moduli, mats=mats, validate=False)


def maps_module(X: GSet, A: GModule) -> MapsModule:
    return MapsModule(X, A)


class InducedModule(GModule):
    """``ind_H^G(A) = {f : G -> A | f(h g) = h f(g)}`` with ``(g1 f)(g2) = f(g2 g1)``.

    Coordinates: block ``b`` holds ``f(r_b^-1)`` for the left coset
    representatives ``reps`` of ``G/H``.
    """

    def __init__(self, A: GModule, sub: Subgroup, reps):
        G = sub.parent
        if A.group is not sub.group:
            raise ModuleError("module must be over the subgroup")
        reps = [int(r) for r in reps]
        labels = coset_labels(G, sub.members, "left")
        if sorted(labels[reps]) != list(range(len(set(labels)))) or len(reps) != len(set(labels[reps])):
            raise ModuleError("reps must contain one element per left coset")
        if G.identity not in reps:
            raise ModuleError("representatives must contain the identity")
        self.sub = sub
        self.reps = reps
        self.inner = A
        pos_in_h = {int(x): i for i, x in enumerate(sub.embed)}
        block_of = {int(labels[r]): b for b, r in enumerate(reps)}
        d, k = A.dim, len(reps)
        # (g f)(r^-1) = f(r^-1 g) = h f(r'^-1) with r' the rep of g^-1 r H, h = r^-1 g r'
        self.block_map = np.zeros((G.order, k), dtype=np.int64)
        self.block_h = np.zeros((G.order, k), dtype=np.int64)
        for g in G.elements:
            for b, r in enumerate(reps):
                rp = reps[block_of[int(labels[G.mul(G.inverse(g), r)])]]
                h = G.mul(G.inverse(r), g, rp)
                self.block_map[g, b] = reps.index(rp)
                self.block_h[g, b] = pos_in_h[h]
        moduli = np.tile(A.moduli, k)
        mats = np.zeros((G.order, k * d, k * d), dtype=np.int64)
        for g in G.elements:
            for b in range(k):
                bp = self.block_map[g, b]
                mats[g, b * d:(b + 1) * d, bp * d:(bp + 1) * d] = A.mats[self.block_h[g, b]]
        super().__init__(G, moduli, mats=mats, validate=False)


def induced_module(A: GModule, sub: Subgroup, reps) -> InducedModule:
    return InducedModule(A, sub, reps)


def phi_matrix(ind: InducedModule, A_full: GModule) -> np.ndarray:
    """Matrix of ``f -> (gH -> g f(g^-1))`` from ``ind_H^G(A)`` to ``Maps(G/H, A)``,
    with ``G/H`` ordered like the representatives; needs ``A`` as a ``G``-module."""
    d, k = A_full.dim, len(ind.reps)
    out = np.zeros((k * d, k * d), dtype=np.int64)
    for b, r in enumerate(ind.reps):
        out[b * d:(b + 1) * d, b * d:(b + 1) * d] = A_full.mats[r]
    return out


def coset_gset(G: FiniteGroup, reps, H) -> GSet:
    """``G/H`` as a G-set whose points are ordered like ``reps``."""
    labels = coset_labels(G, H, "left")
    pos = {int(labels[r]): i for i, r in enumerate(reps)}
    act = np.array([[pos[int(labels[G.mul(g, r)])] for r in reps] for g in G.elements],
                   dtype=np.int64)
    return GSet(G, act, validate=False)


class Lattice:
    """A cocharacter lattice ``Y = Z^r`` with an integral action and optionally an
    overlattice ``Ybar = (1/N) B Z^r`` containing ``Y``."""

    def __init__(self, group: FiniteGroup, mats, super_basis=None, index: int = 1):
        self.group = group
        self.mats = np.asarray(mats, dtype=np.int64)
        self.rank = self.mats.shape[1]
        self.index = int(index)
        self.super_basis = (np.eye(self.rank, dtype=np.int64) if super_basis is None
                            else np.asarray(super_basis, dtype=np.int64))
        self.module = GModule(group, [0] * self.rank, mats=self.mats, validate=False)
        self.validate()

    def validate(self):
        G = self.group
        for g in G.elements:
            det = round(float(np.linalg.det(self.mats[g].astype(float))))
            if abs(det) != 1:
                raise ModuleError("lattice action must be unimodular")
        for g in G.elements:
            for h in G.elements:
                if not np.array_equal(self.mats[G.mul(g, h)], self.mats[g] @ self.mats[h]):
                    raise ModuleError("lattice action is not a homomorphism")
        N, B = self.index, self.super_basis
        # Y inside Ybar: N * e_i must lie in B Z^r
        from .snf import solve_integer

        for i in range(self.rank):
            if solve_integer(B, N * np.eye(self.rank, dtype=np.int64)[:, i]) is None:
                raise ModuleError("overlattice must contain the lattice")
        for g in G.elements:
            for i in range(self.rank):
                if solve_integer(B, self.mats[g] @ B[:, i]) is None:
                    raise ModuleError("overlattice must be stable under the action")

    def act(self, g, y):
        y = np.asarray(y, dtype=np.int64)
        g = np.asarray(g, dtype=np.int64)
        if g.ndim == 0:
            return y @ self.mats[g].T
        g_b = np.broadcast_to(g, y.shape[:-1])
        return np.einsum("...ij,...j->...i", self.mats[g_b], y)

    def in_superlattice(self, scaled) -> bool:
        """Whether ``scaled / N`` lies in ``Ybar`` (``scaled`` is an integer vector)."""
        from .snf import solve_integer

        return solve_integer(self.super_basis, np.asarray(scaled, dtype=np.int64)) is not None


def tensor_module(Y: Lattice, A: GModule) -> GModule:
    """``Y (x) A`` on coordinates ``(j, i)`` at ``j * dim(A) + i``."""
    if Y.group is not A.group:
        raise ModuleError("lattice and module must share the acting group")
    r, d = Y.rank, A.dim
    moduli = np.tile(A.moduli, r)
    lat_monomial = all(np.count_nonzero(Y.mats[g], axis=0).max() == 1 for g in Y.group.elements)
    if A.monomial and lat_monomial:
        n = A.group.order
        lat_perm = np.argmax(Y.mats != 0, axis=1)  # image row of each column
        lat_sign = np.take_along_axis(Y.mats, lat_perm[:, None, :], axis=1)[:, 0, :]
        perm = (lat_perm[:, :, None] * d + A.perm[:, None, :]).reshape(n, r * d)
        sign = (lat_sign[:, :, None] * A.sign[:, None, :]).reshape(n, r * d)
        return GModule(A.group, moduli, perm=perm, sign=sign, validate=False)
    mats = np.einsum("gab,gij->gaibj", Y.mats, A.mats).reshape(A.group.order, r * d, r * d)
    return GModule(A.group, moduli, mats=mats, validate=False)


class PlaceFunction:
    """A lattice-valued function on a finite G-set of places.

    ``values`` are integer vectors equal to ``denominator`` times the actual
    values, so ``denominator == 1`` means ``Y``-valued and ``denominator == N``
    means values in ``(1/N) Y``.
    """

    def __init__(self, lattice: Lattice, places: GSet, values, denominator: int = 1):
        self.lattice = lattice
        self.places = places
        self.values = np.asarray(values, dtype=np.int64).reshape(places.size, lattice.rank)
        self.denominator = int(denominator)

    def translate(self, g: int) -> np.ndarray:
        """Values of ``g . Lambda``: ``w -> g(Lambda(g^-1 w))``."""
        src = np.argsort(self.places.action[g])  # src[w] = g^-1 w
        return self.lattice.act(g, self.values[src])

    def all_translates(self) -> np.ndarray:
        return np.stack([self.translate(g) for g in self.places.group.elements])

    def is_degree_zero(self) -> bool:
        return bool(np.all(self.values.sum(axis=0) == 0))

    def is_norm_killed(self, elements=None) -> bool:
        G = self.places.group
        elements = G.elements if elements is None else elements
        return bool(np.all(sum(self.translate(g) for g in elements) == 0))

    def dotted_support_ok(self, dotted) -> bool:
        """Values off ``dotted`` lie in ``Y``; values on it lie in the overlattice."""
        N = self.denominator
        dotted = set(int(w) for w in dotted)
        for w in range(self.places.size):
            v = self.values[w]
            if w in dotted:
                if N != 1 and not self.lattice.in_superlattice(v * (self.lattice.index // N)
                                                                 if self.lattice.index % N == 0 else v):
                    return False
            elif np.any(v % N != 0):
                return False
        return True

    def supported_on(self, places) -> bool:
        places = set(int(w) for w in places)
        return all(w in places or not np.any(self.values[w]) for w in range(self.places.size))

    def scaled(self, factor: int) -> "PlaceFunction":
        """``factor * Lambda``, keeping the denominator."""
        return PlaceFunction(self.lattice, self.places, self.values * factor, self.denominator)

    def numerators(self) -> np.ndarray:
        return self.values
