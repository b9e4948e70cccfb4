"""Inhomogeneous cochains with values in a module over a finite group ``Gamma``.

Each argument slot of a cochain is a quotient of ``Gamma``.  An ordinary
cochain on ``G`` has every slot equal to ``G``; the mixed cochains of type
``Gamma x G`` or ``Gamma x G x G`` simply have a finer first slot.  Slots are
ordered from fine to coarse: each slot surjects onto the next one, which is
what the inhomogeneous differential needs.  Values are stored densely as an
int64 array of shape ``(|S_1|, ..., |S_n|, dim)``.
"""

from __future__ import annotations

import numpy as np

from .groups import Quotient
from .modules import GModule
from .snf import solve_modular


class CochainError(ValueError):
    pass


class NotACocycle(CochainError):
    pass


def slot_map(fine: Quotient, coarse: Quotient) -> np.ndarray:
    """The induced surjection between two quotients of the same group."""
    if fine.parent is not coarse.parent:
        raise CochainError("slots are quotients of different groups")
    if not coarse.normal >= fine.normal:
        raise CochainError("slot does not map onto the next one")
    return coarse.proj[fine.section]


def _multiply(a: Quotient, b: Quotient, x, y):
    """Product in ``b`` of ``x`` in ``a`` (mapped down) and ``y`` in ``b``."""
    xb = slot_map(a, b)[x]
    return b.group.mult[xb, y]


class Cochain:
    def __init__(self, module: GModule, slots, values=None):
        self.module = module
        self.slots = tuple(slots)
        for q in self.slots:
            if q.parent is not module.group:
                raise CochainError("slot is not a quotient of the acting group")
        for a, b in zip(self.slots, self.slots[1:]):
            slot_map(a, b)
        shape = self.shape + (module.dim,)
        if values is None:
            self.values = np.zeros(shape, dtype=np.int64)
        else:
            vals = np.asarray(values, dtype=np.int64)
            if vals.shape != shape:
                raise CochainError(f"values have shape {vals.shape}, expected {shape}")
            self.values = module.reduce(vals)

    @property
    def degree(self) -> int:
        return len(self.slots)

    @property
    def shape(self) -> tuple:
        return tuple(q.group.order for q in self.slots)

    def __repr__(self):
        return f"Cochain(degree={self.degree}, shape={self.shape}, dim={self.module.dim})"

    def like(self, values) -> "Cochain":
        return Cochain(self.module, self.slots, values)

    def __add__(self, other):
        self._check_compatible(other)
        return self.like(self.values + other.values)

    def __sub__(self, other):
        self._check_compatible(other)
        return self.like(self.values - other.values)

    def __neg__(self):
        return self.like(-self.values)

    def scale(self, k: int) -> "Cochain":
        return self.like(self.values * k)

    def _check_compatible(self, other):
        if self.module is not other.module or self.slots != other.slots:
            raise CochainError("cochains live in different spaces")

    def equals(self, other) -> bool:
        return self.slots == other.slots and np.array_equal(self.values, other.values)

    def first_difference(self, other):
        """Argument tuple of the first disagreement with ``other``, or None."""
        diff = np.argwhere(np.any(self.values != other.values, axis=-1))
        return None if len(diff) == 0 else tuple(int(i) for i in diff[0])

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def is_normalized(self) -> bool:
        """Zero whenever some argument is the identity of its slot."""
        for i, q in enumerate(self.slots):
            if np.any(np.take(self.values, q.group.identity, axis=i)):
                return False
        return True

    def pullback(self, slots, maps) -> "Cochain":
        """Re-index along maps ``new_slot_i -> old_slot_i`` (inflation)."""
        grids = np.ix_(*[np.asarray(m, dtype=np.int64) for m in maps])
        return Cochain(self.module, slots, self.values[grids])

    def inflate(self, slots) -> "Cochain":
        maps = [slot_map(new, old) for new, old in zip(slots, self.slots)]
        return self.pullback(slots, maps)

    def factors_through(self, slots) -> bool:
        """Whether the values only depend on the images in coarser ``slots``."""
        maps = [slot_map(old, new) for old, new in zip(self.slots, slots)]
        grids = np.ix_(*maps)
        lifted = self.values[np.ix_(*[slot_map_section(o, n) for o, n in zip(self.slots, slots)])]
        return bool(np.array_equal(self.values, lifted[grids]))

    def map_values(self, module: GModule, matrix) -> "Cochain":
        """Apply a homomorphism of coefficient modules, given as an integer matrix."""
        M = np.asarray(matrix, dtype=np.int64)
        return Cochain(module, self.slots, self.values @ M.T)


def slot_map_section(fine: Quotient, coarse: Quotient) -> np.ndarray:
    """The least-index lift of each element of ``coarse`` to ``fine``."""
    m = slot_map(fine, coarse)
    out = np.zeros(coarse.group.order, dtype=np.int64)
    for x in range(fine.group.order - 1, -1, -1):
        out[m[x]] = x
    out[coarse.group.identity] = fine.group.identity
    return out


def zero_cochain(module: GModule, slots) -> Cochain:
    return Cochain(module, slots)


def random_cochain(module: GModule, slots, rng, bound: int = 5, normalized: bool = True,
                   free_scale: int = 1, tor_step: int = 1) -> Cochain:
    shape = tuple(q.group.order for q in slots) + (module.dim,)
    vals = rng.integers(-bound, bound + 1, size=shape).astype(np.int64)
    tor = module.moduli > 0
    vals[..., ~tor] *= free_scale
    if tor.any():
        vals[..., tor] = rng.integers(0, 1 << 20, size=shape)[..., tor] * tor_step
    c = Cochain(module, slots, vals)
    if normalized:
        c = normalize(c)
    return c


def normalize(c: Cochain) -> Cochain:
    """Zero out every value with an identity argument."""
    vals = c.values.copy()
    for i, q in enumerate(c.slots):
        idx = [slice(None)] * c.degree
        idx[i] = q.group.identity
        vals[tuple(idx)] = 0
    return c.like(vals)


def differential(c: Cochain, first_slot: Quotient | None = None) -> Cochain:
    """``(df)(a0..an) = a0 f(a1..an) + sum (-1)^i f(.., a_{i-1} a_i, ..) + (-1)^(n+1) f(a0..a_{n-1})``.

    ``a0`` ranges over ``first_slot`` (by default the first slot of ``c``;
    degree 0 needs it explicitly) and acts through its section lift.
    """
    M = c.module
    n = c.degree
    if first_slot is None:
        if n == 0:
            raise CochainError("the differential of a 0-cochain needs an explicit slot")
        first_slot = c.slots[0]
    slots = (first_slot,) + c.slots
    out_shape = tuple(q.group.order for q in slots)
    idx = np.indices(out_shape, dtype=np.int64)
    f = c.values
    a0 = idx[0]
    lift0 = first_slot.section[a0]
    out = M.act(lift0, f[tuple(idx[1:])]) if n else M.act(lift0, np.broadcast_to(f, out_shape + (M.dim,)))
    down = [slot_map(slots[j], slots[j + 1])[idx[j]] for j in range(n)]
    for i in range(1, n + 1):
        args = down[:i - 1] + [_multiply(slots[i - 1], slots[i], idx[i - 1], idx[i])] + list(idx[i + 1:])
        term = f[tuple(args)]
        out = out + term if i % 2 == 0 else out - term
    # last face drops a_n and pushes each remaining argument one slot down
    term = f[tuple(down)] if n else np.broadcast_to(f, out_shape + (M.dim,))
    out = out + term if (n + 1) % 2 == 0 else out - term
    return Cochain(M, slots, out)


def is_cocycle(c: Cochain, first_slot: Quotient | None = None) -> bool:
    return differential(c, first_slot).is_zero()


def coboundary_matrix(module: GModule, slots, first_slot: Quotient):
    """Integer matrix of ``d`` from cochains on ``slots`` to cochains on
    ``(first_slot,) + slots``, flattening values in C order."""
    shape = tuple(q.group.order for q in slots) + (module.dim,)
    ncols = int(np.prod(shape))
    cols = []
    for j in range(ncols):
        basis = np.zeros(ncols, dtype=np.int64)
        basis[j] = 1
        # differential reduces torsion coordinates; lift back to symmetric representatives
        img = differential(Cochain(module, slots, basis.reshape(shape)), first_slot).values
        cols.append(img.reshape(-1))
    return np.array(cols, dtype=np.int64).T


def solve_coboundary(z: Cochain):
    """Some ``beta`` with ``d(beta) = z``, or None if ``z`` is not a coboundary.

    ``z`` has slots ``(T, S_1, ..., S_m)``; ``beta`` lives on ``(S_1, ..., S_m)``
    (a module element when ``m = 0``) and ``T`` is the acting slot.  Raises
    NotACocycle when ``z`` fails the cocycle condition.
    """
    if z.degree == 0:
        raise CochainError("degree-0 cochains are never coboundaries")
    T, rest = z.slots[0], z.slots[1:]
    if not is_cocycle(z, T):
        raise NotACocycle("input is not a cocycle")
    M = z.module
    row_moduli = np.tile(M.moduli, int(np.prod(z.shape)))
    A = _center(coboundary_matrix(M, rest, T), row_moduli)
    x = solve_modular(A, z.values.reshape(-1), row_moduli)
    if x is None:
        return None
    shape = tuple(q.group.order for q in rest) + (M.dim,)
    beta = Cochain(M, rest, np.array([int(v) for v in x], dtype=np.int64).reshape(shape))
    if not differential(beta, T).equals(z):
        raise CochainError("internal: coboundary solution failed verification")
    return beta


def _center(A, row_moduli):
    A = A.copy()
    for i, m in enumerate(row_moduli):
        if m > 0:
            A[i] %= m
            A[i] = np.where(A[i] > m // 2, A[i] - m, A[i])
    return A


__all__ = [
    "Cochain",
    "CochainError",
    "NotACocycle",
    "coboundary_matrix",
    "differential",
    "is_cocycle",
    "normalize",
    "random_cochain",
    "slot_map",
    "solve_coboundary",
    "zero_cochain",
]
