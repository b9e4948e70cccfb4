"""Finite groups as multiplication tables, quotients, cosets and finite G-sets."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np


class GroupError(ValueError):
    pass


class FiniteGroup:
    """A group on the indices ``0..order-1`` given by its Cayley table.

    The table is validated on construction: closure, associativity on all
    triples, a two-sided identity and two-sided inverses.
    """

    def __init__(self, table, name: str = "", validate: bool = True):
        mult = np.asarray(table, dtype=np.int64)
        if mult.ndim != 2 or mult.shape[0] != mult.shape[1] or mult.shape[0] == 0:
            raise GroupError("multiplication table must be a non-empty square array")
        n = mult.shape[0]
        if mult.min() < 0 or mult.max() >= n:
            raise GroupError("table entries out of range")
        self.mult = mult
        self.mult.setflags(write=False)
        self.order = n
        self.name = name or f"group of order {n}"
        ids = [e for e in range(n) if np.array_equal(mult[e], np.arange(n))
               and np.array_equal(mult[:, e], np.arange(n))]
        if not ids:
            raise GroupError("no two-sided identity")
        self.identity = ids[0]
        inv = np.full(n, -1, dtype=np.int64)
        for g in range(n):
            hits = np.nonzero(mult[g] == self.identity)[0]
            if len(hits) != 1 or mult[hits[0], g] != self.identity:
                raise GroupError(f"element {g} has no two-sided inverse")
            inv[g] = hits[0]
        self.inv = inv
        self.inv.setflags(write=False)
        if validate:
            self._check_associative()

    def _check_associative(self):
        m = self.mult
        # (ab)c against a(bc) for all triples at once
        left = m[m[:, :, None], np.arange(self.order)[None, None, :]]
        right = m[np.arange(self.order)[:, None, None], m[None, :, :]]
        bad = np.argwhere(left != right)
        if len(bad):
            a, b, c = bad[0]
            raise GroupError(f"table is not associative at ({a}, {b}, {c})")

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def __len__(self):
        return self.order

    @property
    def elements(self):
        return range(self.order)

    def mul(self, *gs: int) -> int:
        out = self.identity
        for g in gs:
            out = int(self.mult[out, g])
        return out

    def inverse(self, g: int) -> int:
        return int(self.inv[g])

    def power(self, g: int, e: int) -> int:
        if e < 0:
            g, e = self.inverse(g), -e
        out = self.identity
        for _ in range(e):
            out = int(self.mult[out, g])
        return out

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = int(self.mult[x, g])
            k += 1
        return k

    def generated(self, gens) -> frozenset:
        """Subgroup generated by ``gens``."""
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = int(self.mult[x, g])
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return frozenset(seen)

    def is_subgroup(self, H) -> bool:
        H = set(int(h) for h in H)
        if self.identity not in H:
            return False
        return all(int(self.mult[a, self.inv[b]]) in H for a in H for b in H)

    def is_normal(self, N) -> bool:
        N = set(int(n) for n in N)
        if not self.is_subgroup(N):
            return False
        return all(self.mul(g, n, self.inverse(g)) in N for g in self.elements for n in N)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group needs n >= 1")
    i = np.arange(n)
    return FiniteGroup((i[:, None] + i[None, :]) % n, name=f"Z/{n}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; index ``i + n*j`` stands for r^i f^j."""
    if n < 1:
        raise GroupError("dihedral group needs n >= 1")
    table = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for a, b, c, d in product(range(n), range(2), range(n), range(2)):
        i = (a + (c if b == 0 else -c)) % n
        table[a + n * b, c + n * d] = i + n * ((b + d) % 2)
    return FiniteGroup(table, name=f"D{2 * n}")


def dicyclic(n: int) -> FiniteGroup:
    """Dicyclic group of order 4n: ``a`` of order 2n and ``x`` with ``x^2 = a^n``,
    ``x a x^-1 = a^-1``; index ``i + 2n*j`` stands for a^i x^j."""
    if n < 1:
        raise GroupError("dicyclic group needs n >= 1")
    m = 2 * n
    table = np.zeros((2 * m, 2 * m), dtype=np.int64)
    for a, b, c, d in product(range(m), range(2), range(m), range(2)):
        # a^a x^b a^c x^d = a^(a +- c) x^b x^d, and x^2 = a^n
        i = a + (c if b == 0 else -c)
        j = b + d
        if j == 2:
            i, j = i + n, 0
        table[a + m * b, c + m * d] = i % m + m * j
    return FiniteGroup(table, name=f"Dic{4 * n}")


def symmetric(n: int) -> FiniteGroup:
    from itertools import permutations

    perms = sorted(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = np.zeros((len(perms), len(perms)), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            # (pq)(x) = p(q(x))
            table[i, j] = index[tuple(p[q[x]] for x in range(n))]
    return FiniteGroup(table, name=f"S{n}")


def alternating(n: int) -> FiniteGroup:
    S = symmetric(n)
    from itertools import permutations

    perms = sorted(permutations(range(n)))
    even = [i for i, p in enumerate(perms)
            if sum(p[a] > p[b] for a in range(n) for b in range(a + 1, n)) % 2 == 0]
    A = subgroup(S, even).group
    A.name = f"A{n}"
    return A


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Index ``g * |H| + h`` stands for (g, h)."""
    m = H.order
    table = np.zeros((G.order * m, G.order * m), dtype=np.int64)
    for g1, h1, g2, h2 in product(G.elements, H.elements, G.elements, H.elements):
        table[g1 * m + h1, g2 * m + h2] = G.mult[g1, g2] * m + H.mult[h1, h2]
    return FiniteGroup(table, name=f"{G.name}x{H.name}")


def make_group(kind: str, *params, table=None) -> FiniteGroup:
    """Build a group from a kind name: cyclic, dihedral, symmetric, product or table."""
    if kind == "cyclic":
        return cyclic(int(params[0]))
    if kind == "dihedral":
        order = int(params[0])
        if order % 2:
            raise GroupError("dihedral groups are named by their (even) order")
        return dihedral(order // 2)
    if kind == "symmetric":
        return symmetric(int(params[0]))
    if kind == "dicyclic":
        order = int(params[0])
        if order % 4:
            raise GroupError("dicyclic groups are named by their order, a multiple of 4")
        return dicyclic(order // 4)
    if kind == "product":
        return direct_product(params[0], params[1])
    if kind == "table":
        return FiniteGroup(table if table is not None else params[0])
    raise GroupError(f"unknown group kind {kind!r}")


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup given as its own FiniteGroup together with the embedding."""

    parent: FiniteGroup
    group: FiniteGroup
    embed: np.ndarray  # group index -> parent index

    @property
    def members(self) -> frozenset:
        return frozenset(int(x) for x in self.embed)


def subgroup(G: FiniteGroup, H) -> Subgroup:
    """Realize ``H`` as an abstract group; elements are listed in increasing order."""
    elems = sorted(set(int(h) for h in H))
    if not G.is_subgroup(elems):
        raise GroupError("not a subgroup")
    pos = {g: i for i, g in enumerate(elems)}
    table = np.array([[pos[int(G.mult[a, b])] for b in elems] for a in elems], dtype=np.int64)
    return Subgroup(G, FiniteGroup(table, name=f"subgroup of {G.name}", validate=False),
                    np.array(elems, dtype=np.int64))


def coset_reps(G: FiniteGroup, H, side: str = "left") -> list[int]:
    """One representative per coset (``gH`` for left, ``Hg`` for right).

    The coset of ``H`` itself is represented by the identity, every other
    coset by its least element index.
    """
    H = sorted(set(int(h) for h in H))
    if not G.is_subgroup(H):
        raise GroupError("not a subgroup")
    label = coset_labels(G, H, side)
    reps: dict[int, int] = {}
    for g in G.elements:
        reps.setdefault(int(label[g]), g)
    reps[int(label[G.identity])] = G.identity
    return [reps[c] for c in sorted(reps)]


def coset_labels(G: FiniteGroup, H, side: str = "left") -> np.ndarray:
    """Label every element by the index of its coset; cosets numbered by least element."""
    H = np.array(sorted(set(int(h) for h in H)), dtype=np.int64)
    if side == "left":
        members = G.mult[:, H]  # g*h
    elif side == "right":
        members = G.mult[H, :].T  # h*g
    else:
        raise GroupError("side must be 'left' or 'right'")
    keys = members.min(axis=1)
    _, labels = np.unique(keys, return_inverse=True)
    return labels.astype(np.int64)


@dataclass(frozen=True, eq=False)
class Quotient:
    """A surjection ``parent -> quotient`` with kernel ``normal`` and a section.

    Cosets are numbered by their least element; the section picks that least
    element, except that the identity coset is represented by the identity.
    """

    parent: FiniteGroup
    normal: frozenset
    group: FiniteGroup
    proj: np.ndarray
    section: np.ndarray

    def lift(self, q: int) -> int:
        return int(self.section[q])


def quotient(G: FiniteGroup, N) -> Quotient:
    """The quotient by a normal subgroup; repeated calls return the same object, so
    quotients can be compared by identity."""
    N = frozenset(int(n) for n in N)
    cache = G.__dict__.setdefault("_quotients", {})
    if N in cache:
        return cache[N]
    if not G.is_normal(N):
        raise GroupError("subgroup is not normal")
    labels = coset_labels(G, N, "left")
    k = int(labels.max()) + 1
    section = np.zeros(k, dtype=np.int64)
    for c in range(k):
        section[c] = int(np.nonzero(labels == c)[0].min())
    section[labels[G.identity]] = G.identity
    table = labels[G.mult[section[:, None], section[None, :]]]
    if len(N) == 1:
        Q = G
        labels = np.arange(G.order, dtype=np.int64)
        section = labels
    else:
        Q = FiniteGroup(table, name=f"{G.name}/{len(N)}", validate=False)
    cache[N] = Quotient(G, N, Q, labels, section)
    return cache[N]


def identity_quotient(G: FiniteGroup) -> Quotient:
    return quotient(G, [G.identity])


class GSet:
    """A finite set with a left action; ``action[g, x]`` is ``g . x``."""

    def __init__(self, group: FiniteGroup, action, validate: bool = True):
        act = np.asarray(action, dtype=np.int64)
        if act.ndim != 2 or act.shape[0] != group.order:
            raise GroupError("action table must have one row per group element")
        self.group = group
        self.action = act
        self.size = act.shape[1]
        if validate:
            self._check()

    def _check(self):
        G, act = self.group, self.action
        if not np.array_equal(act[G.identity], np.arange(self.size)):
            raise GroupError("identity does not act trivially")
        for g in G.elements:
            if sorted(act[g]) != list(range(self.size)):
                raise GroupError(f"element {g} does not act bijectively")
        composed = act[G.mult]  # act[gh, x]
        stepwise = act[np.arange(G.order)[:, None, None], act[None, :, :]]  # g.(h.x)
        if not np.array_equal(composed, stepwise):
            raise GroupError("action is not compatible with multiplication")

    def orbit(self, x: int) -> list[int]:
        return sorted(set(int(y) for y in self.action[:, x]))

    def stabilizer(self, x: int) -> list[int]:
        return [g for g in self.group.elements if self.action[g, x] == x]


def coset_space(G: FiniteGroup, H) -> GSet:
    """``G/H`` with left multiplication; cosets numbered by least element."""
    labels = coset_labels(G, H, "left")
    reps = coset_reps(G, H, "left")
    order = np.argsort([labels[r] for r in reps])
    reps = [reps[i] for i in order]
    act = labels[G.mult[:, reps]]
    return GSet(G, act, validate=False)


def subgroups(G: FiniteGroup) -> list[frozenset]:
    """All subgroups, as joins of cyclic subgroups; sorted by order, then elements."""
    found = {G.generated([g]) for g in G.elements}
    frontier = list(found)
    cyclic_gens = sorted({min(c - {G.identity}, default=G.identity) for c in found})
    while frontier:
        nxt = []
        for H in frontier:
            for g in cyclic_gens:
                if g not in H:
                    J = G.generated(list(H) + [g])
                    if J not in found:
                        found.add(J)
                        nxt.append(J)
        frontier = nxt
    return sorted(found, key=lambda H: (len(H), sorted(H)))


def small_groups(max_order: int = 12) -> list[FiniteGroup]:
    """One group from each isomorphism class of order at most 12."""
    Z = cyclic
    out = [Z(n) for n in range(1, max_order + 1)]
    extra = [(4, lambda: direct_product(Z(2), Z(2))),
             (6, lambda: symmetric(3)),
             (8, lambda: direct_product(Z(2), Z(4))),
             (8, lambda: direct_product(direct_product(Z(2), Z(2)), Z(2))),
             (8, lambda: dihedral(4)),
             (8, lambda: dicyclic(2)),
             (9, lambda: direct_product(Z(3), Z(3))),
             (10, lambda: dihedral(5)),
             (12, lambda: direct_product(Z(2), Z(6))),
             (12, lambda: dihedral(6)),
             (12, lambda: alternating(4)),
             (12, lambda: dicyclic(3))]
    out += [make() for order, make in extra if order <= max_order]
    return sorted(out, key=lambda G: G.order)
