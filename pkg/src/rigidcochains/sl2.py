"""The worked SL2 example over F = Q(sqrt 3) split by E = Q(zeta_12).

Everything is exact: matrices have entries in ``Q(zeta_12)`` and are
compared coordinatewise.  The module covers

* the anisotropic torus ``T = {x + y Z}`` and its adjoint quotient,
* the normalized Tate cocycle on ``Gal(E/F)`` and the cup product giving the
  rigid inner twist class,
* two integral models of the definite quaternion algebra spanned by ``Z`` and
  ``I`` with their norm-one unit groups,
* the Hecke character congruence and the multiplicity table derived from it.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import product
from math import isqrt

from .groups import FiniteGroup
from .numfield import ExampleFields, FieldElement, FieldError, det, solve
from .reports import Report, check


class ExampleError(ValueError):
    pass


# ---- 2x2 matrices over E ------------------------------------------------------

class Mat2:
    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, o):
        if isinstance(o, Mat2):
            return Mat2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                        self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)
        return Mat2(*(e * o for e in self.entries))

    __rmul__ = __mul__

    def __add__(self, o):
        return Mat2(*(x + y for x, y in zip(self.entries, o.entries)))

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, o):
        return self + (-o)

    def __eq__(self, o):
        return isinstance(o, Mat2) and self.entries == o.entries

    def __hash__(self):
        return hash(self.key())

    def key(self):
        return tuple(c for e in self.entries for c in e.coords)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def inverse(self):
        n = self.det()
        if n.is_zero():
            raise ZeroDivisionError("singular matrix")
        inv = n.inverse()
        return Mat2(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv)

    def __pow__(self, e: int):
        base = self if e >= 0 else self.inverse()
        out = identity(self.a.field)
        for _ in range(abs(e)):
            out = out * base
        return out

    def map(self, f):
        return Mat2(*(f(e) for e in self.entries))

    def __repr__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def identity(K) -> Mat2:
    return Mat2(K.one, K.zero, K.zero, K.one)


class Setup:
    """Fields and the matrices ``Z`` and ``I`` of the example."""

    def __init__(self):
        self.fields = X = ExampleFields()
        K = self.K = X.K
        self.s, self.zeta, self.i = X.s_abs, X.zeta, X.i
        self.one = identity(K)
        self.Z = Mat2(K.zero, K(-1), K.one, self.s)
        self.I = Mat2(K.zero, self.i, self.i, K.zero)

    def torus_matrix(self, x, y) -> Mat2:
        """``[[x, -y], [y, x + s y]]``, which is ``x + y Z``."""
        x, y = self.fields.from_base(x), self.fields.from_base(y)
        return Mat2(x, -y, y, x + self.s * y)

    def torus_coordinates(self, M: Mat2):
        """Inverse of ``torus_matrix``, or None when ``M`` is not of that shape over ``F``."""
        X = self.fields
        if not all(X.in_base(e) for e in M.entries):
            return None
        x, y = M.a, M.c
        if M.b != -y or M.d != x + self.s * y:
            return None
        return X.to_base(x), X.to_base(y)

    def on_torus(self, x, y) -> bool:
        s = self.fields.s
        return x * x + s * x * y + y * y == self.fields.F.one


# ---- order relations ------------------------------------------------------------

def order_relations(S: Setup | None = None) -> Report:
    S = S or Setup()
    X = S.fields
    rep = Report()
    Z, I, one = S.Z, S.I, S.one
    rep.add(check("order-relation-Z-power-12-is-one", Z ** 12 == one, Z ** 12))
    rep.add(check("order-relation-Z-has-order-12",
                  all(Z ** k != one for k in range(1, 12)), None))
    rep.add(check("order-relation-I-squared-is-minus-one", I * I == -one, I * I))
    rep.add(check("order-relation-I-conjugates-Z-to-inverse",
                  I * Z * I.inverse() == Z.inverse(), I * Z * I.inverse()))
    rep.add(check("order-relation-reduced-norms-of-Z-and-I",
                  Z.det() == S.K.one and I.det() == S.K.one, (Z.det(), I.det())))
    sF = X.s
    rep.add(check("torus-point-s-minus-2-on-torus", S.on_torus(sF, -2), None))
    M = S.torus_matrix(sF, -2)
    rep.add(check("torus-point-s-minus-2-squares-to-minus-identity", M * M == -one, M * M))
    rep.add(check("relative-norm-zeta-minus-one-is-2-minus-s",
                  X.relative_norm(S.zeta - 1) == 2 - sF, X.relative_norm(S.zeta - 1)))
    return rep


# ---- quaternion orders ---------------------------------------------------------

class QuaternionOrder:
    """The ``O_F``-span of four matrices, as a rank-8 lattice over ``Z``.

    Coordinates are ordered ``(b_0, s b_0, b_1, s b_1, ...)``, so a coordinate
    vector ``x`` stands for ``sum (x[2i] + x[2i+1] s) b_i``.
    """

    def __init__(self, setup: Setup, basis, name: str = ""):
        self.setup = setup
        self.basis = list(basis)
        self.name = name
        s = setup.s
        self.z_basis = [m for b in self.basis for m in (b, b * s)]
        self._columns = [m.key() for m in self.z_basis]
        self._gram = None

    def element(self, x) -> Mat2:
        out = Mat2(*(self.setup.K.zero,) * 4)
        for c, m in zip(x, self.z_basis):
            if c:
                out = out + m * c
        return out

    def coordinates(self, M: Mat2):
        """Rational coordinates of ``M`` in ``z_basis``, or None when ``M`` is outside the span."""
        rows = [[col[r] for col in self._columns] for r in range(16)]
        return solve(rows, list(M.key()))

    def contains(self, M: Mat2) -> bool:
        c = self.coordinates(M)
        return c is not None and all(x.denominator == 1 for x in c)

    def reduced_norm(self, M: Mat2):
        return self.setup.fields.to_base(M.det())

    def trace_form(self, M: Mat2) -> Fraction:
        """``Tr_{F/Q}`` of the reduced norm."""
        return self.reduced_norm(M).trace()

    @property
    def gram(self):
        if self._gram is None:
            n = len(self.z_basis)
            q = [self.trace_form(m) for m in self.z_basis]
            G = [[Fraction(0)] * n for _ in range(n)]
            for i in range(n):
                G[i][i] = q[i]
                for j in range(i + 1, n):
                    both = self.trace_form(self.z_basis[i] + self.z_basis[j])
                    G[i][j] = G[j][i] = (both - q[i] - q[j]) / 2
            self._gram = G
        return self._gram

    def is_positive_definite(self) -> bool:
        G = self.gram
        return all(det([row[:k] for row in G[:k]]) > 0 for k in range(1, len(G) + 1))

    def verify(self) -> Report:
        S, X = self.setup, self.setup.fields
        rep = Report()
        tag = self.name
        ones = self.coordinates(S.one)
        rep.add(check(f"order-contains-one[{tag}]", self.contains(S.one), ones))
        bad = None
        for i, j in product(range(len(self.basis)), repeat=2):
            if not self.contains(self.basis[i] * self.basis[j]):
                bad = (i, j, self.coordinates(self.basis[i] * self.basis[j]))
                break
        rep.add(check(f"order-closed-under-multiplication[{tag}]", bad is None, bad))
        # the E-span is all of M_2(E) and every F-combination has norm and trace in F
        spans = len(self.basis) == 4 and _e_independent(self.basis)
        rep.add(check(f"order-spans-matrix-algebra-over-E[{tag}]", spans, None))
        descent_bad = None
        for i, j in product(range(len(self.basis)), repeat=2):
            m = self.basis[i] + self.basis[j] * S.s if i != j else self.basis[i]
            if not (X.in_base(m.det()) and X.in_base(m.trace())):
                descent_bad = (i, j)
                break
        rep.add(check(f"order-descends-to-F[{tag}]", descent_bad is None, descent_bad))
        a, b = self.basis[1 % len(self.basis)], self.basis[-1]
        rep.add(check(f"reduced-norm-multiplicative[{tag}]",
                      (a * b).det() == a.det() * b.det(), (a, b)))
        rep.add(check(f"order-trace-form-positive-definite[{tag}]", self.is_positive_definite(),
                      None))
        return rep

    def short_vectors(self, bound, gram=None):
        """All integer vectors ``x`` with ``x^T G x <= bound``, found by exact Fincke-Pohst."""
        G = gram or self.gram
        return list(fincke_pohst(G, Fraction(bound)))

    def norm_one_units(self, change_of_basis=None):
        """Matrices of reduced norm 1, via ``Tr_{F/Q} nrd = 2`` and an exact norm filter.

        With ``change_of_basis`` (a unimodular integer matrix ``U``) the search runs
        on the lattice basis ``z_basis @ U`` instead.
        """
        if not self.is_positive_definite():
            raise ExampleError(f"{self.name}: trace form is not positive definite")
        G = self.gram
        n = len(G)
        if change_of_basis is not None:
            U = change_of_basis
            if abs(det(U)) != 1:
                raise ExampleError("change of basis is not unimodular")
            G = [[sum(U[k][i] * G[k][l] * U[l][j] for k in range(n) for l in range(n))
                  for j in range(n)] for i in range(n)]
        units = []
        for v in fincke_pohst(G, Fraction(2)):
            if sum(v[i] * G[i][j] * v[j] for i in range(n) for j in range(n)) != 2:
                continue
            x = v if change_of_basis is None else \
                [sum(change_of_basis[i][j] * v[j] for j in range(n)) for i in range(n)]
            M = self.element(x)
            if M.det() == self.setup.K.one:
                units.append(M)
        return sorted(units, key=Mat2.key)


def _e_independent(mats) -> bool:
    """Whether four matrices over ``Q(zeta_12)`` are linearly independent over that field."""
    K = mats[0].a.field
    # determinant of the 4x4 matrix over K, computed by cofactor expansion
    rows = [list(m.entries) for m in mats]

    def d(rs, cols):
        if len(rs) == 1:
            return rs[0][cols[0]]
        out = K.zero
        for k, c in enumerate(cols):
            minor = d(rs[1:], cols[:k] + cols[k + 1:])
            term = rs[0][c] * minor
            out = out + term if k % 2 == 0 else out - term
        return out

    return not d(rows, [0, 1, 2, 3]).is_zero()


def fincke_pohst(G, bound):
    """Yield the integer vectors with ``x^T G x <= bound`` for positive definite rational ``G``."""
    n = len(G)
    q = [[Fraction(x) for x in row] for row in G]
    for i in range(n):
        if q[i][i] <= 0:
            raise ExampleError("form is not positive definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    # Q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2
    x = [0] * n

    def rec(i, budget):
        if i < 0:
            yield tuple(x)
            return
        c = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        r = isqrt(int(budget / q[i][i])) + 1
        base = c.numerator // c.denominator
        for t in range(base - r, base + r + 2):
            left = budget - q[i][i] * (t - c) ** 2
            if left >= 0:
                x[i] = t
                yield from rec(i - 1, left)
        x[i] = 0

    yield from rec(n - 1, Fraction(bound))


def dicyclic_order(S: Setup | None = None) -> QuaternionOrder:
    S = S or Setup()
    return QuaternionOrder(S, [S.one, S.Z, S.I, S.Z * S.I], name="1,Z,I,ZI")


def kneser_order(S: Setup | None = None) -> QuaternionOrder:
    """The neighbour with basis ``1, Z + sI, (1-s)(s + ZI), (1-s)^-1 (1 + I + s ZI)``."""
    S = S or Setup()
    s, one, Z, I = S.s, S.one, S.Z, S.I
    inv = (1 - s).inverse()
    basis = [one, Z + I * s, (one * s + Z * I) * (1 - s), (one + I + Z * I * s) * inv]
    return QuaternionOrder(S, basis, name="Kneser neighbour")


# ---- unit groups ------------------------------------------------------------------

class UnitGroup:
    """A finite matrix group with its Cayley table."""

    def __init__(self, elements, name: str = ""):
        self.elements = list(elements)
        self.name = name
        index = {m.key(): k for k, m in enumerate(self.elements)}
        n = len(self.elements)
        table = [[-1] * n for _ in range(n)]
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                k = index.get((a * b).key())
                if k is None:
                    raise ExampleError(f"{name}: product of units {i} and {j} is not in the set")
                table[i][j] = k
        self.group = FiniteGroup(table, name=name)
        self.index = index

    def __len__(self):
        return len(self.elements)

    def order_of(self, M: Mat2) -> int:
        return self.group.element_order(self.index[M.key()])

    def histogram(self) -> Counter:
        return Counter(self.group.element_order(g) for g in self.group.elements)

    def histogram_tuple(self, orders) -> tuple:
        h = self.histogram()
        return tuple(h.get(k, 0) for k in orders)

    def involutions(self) -> int:
        return self.histogram().get(2, 0)

    def cyclic_by_inverting(self, rotation_order: int, reflection_square_in_rotations=True):
        """Some ``(r, f)`` with ``r`` of the given order, ``f r f^-1 = r^-1`` and ``<r, f>``
        the whole group; ``f^2`` must be trivial unless ``reflection_square_in_rotations``
        allows any power of ``r``."""
        G = self.group
        for r in G.elements:
            if G.element_order(r) != rotation_order:
                continue
            rot = {G.power(r, k) for k in range(rotation_order)}
            for f in G.elements:
                if f in rot or G.mul(f, r, G.inverse(f)) != G.inverse(r):
                    continue
                sq = G.mul(f, f)
                if not (sq == G.identity or (reflection_square_in_rotations and sq in rot)):
                    continue
                if len(G.generated([r, f])) == G.order:
                    return r, f
        return None

    def quaternion_core_quotient(self):
        """For ``SL2(F3)``: the elements of 2-power order form a normal subgroup of order 8
        whose quotient is cyclic of order 3."""
        G = self.group
        core = [g for g in G.elements if G.element_order(g) in (1, 2, 4, 8)]
        if len(core) != 8 or not G.is_normal(core):
            return False
        outside = [g for g in G.elements if g not in core]
        return all(G.mul(g, g, g) in set(core) for g in outside) and len(outside) == 16


def unit_groups(S: Setup | None = None) -> Report:
    S = S or Setup()
    rep = Report()
    for order, expect in ((dicyclic_order(S), "dicyclic"), (kneser_order(S), "sl2f3")):
        rep.extend(order.verify())
        tag = order.name
        units = order.norm_one_units()
        U = _unimodular(len(order.z_basis))
        again = order.norm_one_units(change_of_basis=U)
        same = [m.key() for m in units] == [m.key() for m in again]
        rep.add(check(f"unit-enumeration-basis-independent[{tag}]", same,
                      (len(units), len(again))))
        G = UnitGroup(units, name=tag)
        inv_ok = all(m.inverse().key() in G.index for m in units)
        rep.add(check(f"unit-group-closed-under-inverse[{tag}]", inv_ok, None))
        rep.add(check(f"unit-group-has-24-elements[{tag}]", len(G) == 24, len(G)))
        if expect == "dicyclic":
            rep.add(check(f"unit-group-contains-Z-of-order-12[{tag}]",
                          S.Z.key() in G.index and G.order_of(S.Z) == 12, None))
            pres = G.cyclic_by_inverting(12)
            rep.add(check(f"unit-group-generated-by-order-12-and-inverting-element[{tag}]",
                          pres is not None, None))
            ok = pres is not None and G.group.mul(pres[1], pres[1]) == G.group.power(pres[0], 6)
            rep.add(check(f"unit-group-dicyclic-relation[{tag}]", ok, pres))
            # a definite quaternion algebra has -1 as its only involution
            rep.add(check(f"unit-group-single-involution[{tag}]", G.involutions() == 1,
                          G.involutions()))
            rep.add(check(f"unit-group-order-histogram[{tag}]",
                          G.histogram_tuple((1, 2, 3, 4, 6, 12)) == (1, 1, 2, 14, 2, 4),
                          G.histogram_tuple((1, 2, 3, 4, 6, 12))))
        else:
            rep.add(check(f"unit-group-max-element-order-6[{tag}]",
                          max(G.histogram()) == 6, max(G.histogram())))
            rep.add(check(f"unit-group-order-histogram[{tag}]",
                          G.histogram_tuple(range(1, 7)) == (1, 1, 8, 6, 0, 8),
                          G.histogram_tuple(range(1, 7))))
            rep.add(check(f"unit-group-quaternion-core-with-cyclic-quotient[{tag}]",
                          G.quaternion_core_quotient(), None))
    return rep


def _unimodular(n: int):
    """A fixed unitriangular matrix used to rerun the enumeration in another basis."""
    return [[1 if i == j else ((i + 2 * j) % 3 - 1 if j > i else 0) for j in range(n)]
            for i in range(n)]


# ---- characters and multiplicities ------------------------------------------

EXPONENT_PLUS = 1   # ζ -> exp(2πi/12)
EXPONENT_MINUS = 5  # ζ -> exp(5 · 2πi/12)


def unit_generators(X: ExampleFields):
    return [X.zeta, X.zeta - 1]


def unit_exponents(X: ExampleFields):
    """For each unit generator ``u``, the ``e`` with ``u / ubar = zeta^e``."""
    out = []
    for u in unit_generators(X):
        if not X.K.is_unit(u):
            raise FieldError(f"{u} is not a unit")
        out.append(X.root_of_unity_exponent(u / X.conj(u)))
    return out


def character_trivial_on_units(a_plus: int, a_minus: int, exponents) -> bool:
    """Whether ``u -> tau_+(u/ubar)^a_+ * tau_-(u/ubar)^a_-`` is trivial on the unit generators.

    Character values are twelfth roots of unity, tracked by their exponents.
    """
    return all((e * EXPONENT_PLUS * a_plus + e * EXPONENT_MINUS * a_minus) % 12 == 0
               for e in exponents)


def congruence_admissible(a_plus: int, a_minus: int) -> bool:
    return (a_plus + 5 * a_minus) % 12 == 0


def hecke_character_search(bound: int, X: ExampleFields | None = None):
    """Pairs ``0 < |a_+|, |a_-| <= bound`` with ``a_+ > 0`` (one per ``±`` class) whose
    character is trivial on the units, by brute force."""
    exps = unit_exponents(X or ExampleFields())
    return [(p, m) for p in range(1, bound + 1)
            for m in list(range(-bound, 0)) + list(range(1, bound + 1))
            if character_trivial_on_units(p, m, exps)]


def character_report(bound: int = 24) -> Report:
    X = ExampleFields()
    rep = Report()
    gens = unit_generators(X)
    rep.add(check("units-generators-are-units", all(X.K.is_unit(u) for u in gens), gens))
    found = hecke_character_search(bound, X)
    expected = [(p, m) for p in range(1, bound + 1)
                for m in list(range(-bound, 0)) + list(range(1, bound + 1))
                if congruence_admissible(p, m)]
    diff = sorted(set(found) ^ set(expected))
    exps = unit_exponents(X)
    rep.add(check(f"character-criterion-matches-congruence[bound={bound}]", not diff,
                  diff[:3], mode="exhaustive", trials=4 * bound * bound))
    asym = [(p, m) for p in range(-bound, bound + 1) for m in range(-bound, bound + 1)
            if p and m and character_trivial_on_units(p, m, exps)
            != character_trivial_on_units(-p, -m, exps)]
    rep.add(check(f"character-criterion-sign-symmetric[bound={bound}]", not asym, asym[:3],
                  mode="exhaustive", trials=4 * bound * bound))
    return rep


def multiplicity_table(kmax: int):
    """``table[k_plus][k_minus]`` is 1 when ``(k_+ + 1) - 5 (k_- + 1) = 0 mod 12``."""
    return [[int(((kp + 1) - 5 * (km + 1)) % 12 == 0) for km in range(kmax + 1)]
            for kp in range(kmax + 1)]


def multiplicity_report(kmax: int = 20) -> Report:
    exps = unit_exponents(ExampleFields())
    rep = Report()
    table = multiplicity_table(kmax)
    bad = [(kp, km) for kp in range(kmax + 1) for km in range(kmax + 1)
           if table[kp][km] != int(character_trivial_on_units(kp + 1, -(km + 1), exps))]
    n = (kmax + 1) ** 2
    rep.add(check(f"multiplicity-table-matches-character-search[kmax={kmax}]", not bad,
                  bad[:3], mode="exhaustive", trials=n))
    return rep


def format_table(table) -> str:
    n = len(table)
    width = max(2, len(str(n - 1)))
    head = "k+\\k- " + " ".join(str(k).rjust(width) for k in range(n))
    rows = [str(kp).rjust(5) + " " + " ".join(str(v).rjust(width) for v in row)
            for kp, row in enumerate(table)]
    return "\n".join([head] + rows)


# ---- the rigid inner twist class ------------------------------------------------

PLACES = ("v+", "v-")
SIGMA = 1  # Gal(E/F) = {0, 1}


def tate_cocycle(X: ExampleFields):
    """Normalized 2-cocycle with ``alpha(sigma, sigma)(v+) = -1`` and ``(v-) = 1``."""
    K = X.K
    alpha = {}
    for a, b in product((0, 1), repeat=2):
        alpha[a, b] = {w: K.one for w in PLACES}
    alpha[SIGMA, SIGMA] = {"v+": K(-1), "v-": K.one}
    return alpha


def _galois(X: ExampleFields, g: int, u: FieldElement) -> FieldElement:
    return X.relative_sigma(u) if g else u


def tate_cocycle_defect(alpha, X: ExampleFields):
    """The first triple where the multiplicative coboundary of ``alpha`` is not 1."""
    K = X.K
    for a, b, c in product((0, 1), repeat=3):
        for w in PLACES:
            # places above v+ and v- are fixed by Gal(E/F)
            val = (_galois(X, a, alpha[b, c][w]) * alpha[a, (b + c) % 2][w]
                   / (alpha[(a + b) % 2, c][w] * alpha[a, b][w]))
            if val != K.one:
                return (a, b, c, w, val)
    return None


def twist_lambda():
    """``Lambda(v+) = 1/2`` and ``Lambda(v-) = -1/2`` in the half-integral cocharacters."""
    return {"v+": Fraction(1, 2), "v-": Fraction(-1, 2)}


def _act_on_cocharacter(g: int, y: Fraction) -> Fraction:
    return -y if g else y


def cup_with_lambda(alpha, lam, X: ExampleFields):
    """``sigma -> prod_tau prod_w alpha(sigma, tau)(w) (x) (sigma tau Lambda)(w)``.

    Values lie in ``Ybar (x) E^x``; with ``1/2`` as the basis of ``Ybar`` an
    element ``u (x) a/2`` is recorded as ``u^a``.
    """
    K = X.K
    out = {}
    for s in (0, 1):
        val = K.one
        for t in (0, 1):
            st = (s + t) % 2
            for w in PLACES:
                y = _act_on_cocharacter(st, lam[w])
                a = y * 2
                if a.denominator != 1:
                    raise ExampleError("Lambda must be half-integral")
                val = val * alpha[s, t][w] ** int(a)
        out[s] = val
    return out


def _act_on_adjoint_torus(X: ExampleFields, g: int, u: FieldElement) -> FieldElement:
    # sigma acts on Ybar by -1 and on E^x by sigma
    return _galois(X, g, u).inverse() if g else u


def square_root(X: ExampleFields, u: FieldElement):
    """A square root of a root of unity ``u`` in ``Q(zeta_12)``, or None."""
    e = X.root_of_unity_exponent(u)
    return X.zeta ** (e // 2) if e % 2 == 0 else None


def diagonalization(S: Setup):
    """Eigenvector matrix ``P`` with ``P^-1 Z P = diag(zeta, zeta^-1)``."""
    z, zb = S.zeta, S.fields.conj(S.zeta)
    K = S.K
    P = Mat2(K.one, K.one, -z, -zb)
    if P.inverse() * S.Z * P != Mat2(z, K.zero, K.zero, zb):
        raise ExampleError("diagonalization of Z failed")
    return P


def cocharacter_image(S: Setup, t: FieldElement) -> Mat2:
    """The torus matrix ``P diag(t, t^-1) P^-1``."""
    P = diagonalization(S)
    K = S.K
    return P * Mat2(t, K.zero, K.zero, t.inverse()) * P.inverse()


def rigid_twist_class(S: Setup | None = None, lam=None) -> Report:
    """Compute the cup product and identify its value at ``sigma`` with the class of ``(s, -2)``."""
    S = S or Setup()
    X = S.fields
    rep = Report()
    alpha = tate_cocycle(X)
    rep.add(check("tate-cocycle-ratio-at-real-places",
                  alpha[SIGMA, SIGMA]["v+"] / alpha[SIGMA, SIGMA]["v-"] == X.K(-1), None))
    rep.add(check("tate-cocycle-normalized", all(alpha[0, g][w] == X.K.one
                                                 and alpha[g, 0][w] == X.K.one
                                                 for g in (0, 1) for w in PLACES), None))
    defect = tate_cocycle_defect(alpha, X)
    rep.add(check("tate-cocycle-condition", defect is None, defect, mode="exhaustive", trials=8))
    lam = lam or twist_lambda()
    rep.add(check("twist-lambda-degree-zero", sum(lam.values()) == 0, lam))
    killed = all(sum(_act_on_cocharacter(g, lam[w]) for g in (0, 1)) == 0 for w in PLACES)
    rep.add(check("twist-lambda-norm-killed", killed, lam))
    zbar = cup_with_lambda(alpha, lam, X)
    one = X.K.one
    cocycle_ok = all(zbar[(a + b) % 2] == zbar[a] * _act_on_adjoint_torus(X, a, zbar[b])
                     for a, b in product((0, 1), repeat=2))
    rep.add(check("twist-class-is-cocycle", cocycle_ok and zbar[0] == one, zbar))
    # lift through T(E) -> Tbar(E), which is u -> u^2 in the E^x coordinates
    t = square_root(X, zbar[SIGMA])
    if t is None:
        rep.add(check("twist-class-matches-torus-point-s-minus-2", False,
                      f"no square root of {zbar[SIGMA]} in E"))
        return rep
    M = cocharacter_image(S, t)
    coords = S.torus_coordinates(M)
    target = S.torus_matrix(X.s, -2)
    ok = coords is not None and (M == target or M == -target)
    rep.add(check("twist-class-matches-torus-point-s-minus-2", ok,
                  f"cup value {M} against {target}"))
    sigma_M = M.map(X.relative_sigma)
    rep.add(check("twist-class-value-defined-over-F-up-to-centre",
                  sigma_M == M or sigma_M == -M, sigma_M))
    return rep


def zbar_value(S: Setup | None = None, lam=None) -> Mat2 | None:
    """The torus matrix representing the twist class at ``sigma``, up to sign."""
    S = S or Setup()
    X = S.fields
    zbar = cup_with_lambda(tate_cocycle(X), lam or twist_lambda(), X)
    t = square_root(X, zbar[SIGMA])
    return None if t is None else cocharacter_image(S, t)


def example_report(bound: int = 24, kmax: int = 20) -> Report:
    S = Setup()
    rep = Report()
    rep.extend(order_relations(S))
    rep.extend(unit_groups(S))
    rep.extend(character_report(bound))
    rep.extend(multiplicity_report(kmax))
    rep.extend(rigid_twist_class(S))
    return rep
