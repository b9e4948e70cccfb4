"""Exact arithmetic in number fields of degree at most 4.

Elements are tuples of Fractions in the power basis of ``Q[x]/(f)``.  A
quadratic extension of a field is modelled separately as pairs ``a + b*z``
over the base, together with a verified identification with an absolute
field, which is how ``Q(zeta_12)`` is seen both over ``Q(sqrt 3)`` and over
``Q``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import isqrt


class FieldError(ValueError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---- rational linear algebra -------------------------------------------------

def det(M) -> Fraction:
    A = [[_frac(x) for x in row] for row in M]
    n, sign, out = len(A), 1, Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            sign = -sign
        out *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return sign * out


def solve(M, b):
    """Some solution of ``M x = b`` over Q, or None when the system is inconsistent."""
    m = len(M)
    n = len(M[0]) if m else 0
    A = [[_frac(x) for x in row] + [_frac(y)] for row, y in zip(M, b)]
    pivots, r = [], 0
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    if any(A[i][n] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = A[i][n]
    return x


def inverse_matrix(M):
    n = len(M)
    cols = [solve(M, [int(i == j) for i in range(n)]) for j in range(n)]
    if any(c is None for c in cols) or det(M) == 0:
        raise FieldError("matrix is singular")
    return [[cols[j][i] for j in range(n)] for i in range(n)]


# ---- polynomials (coefficient lists, lowest degree first) --------------------

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1) if p and q else []
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _poly_eval(p, x):
    out = Fraction(0)
    for c in reversed(p):
        out = out * x + c
    return out


def _divisors(n: int):
    n = abs(n)
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    ds = sorted(set(small + [n // d for d in small]))
    return ds + [-d for d in ds]


def _integer_monic(f):
    """Rescale ``x`` so that a monic rational polynomial gets integer coefficients."""
    n = len(f) - 1
    den = 1
    for c in f:
        den = den * c.denominator // _gcd(den, c.denominator)
    # f(x/den) * den^n is monic with integer coefficients
    return [int(c * den ** (n - i)) for i, c in enumerate(f)]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def is_irreducible(f) -> bool:
    """Exact irreducibility test over Q for monic polynomials of degree at most 4."""
    f = [_frac(c) for c in _trim(f)]
    n = len(f) - 1
    if n < 1 or f[-1] != 1:
        raise FieldError("expected a monic polynomial of positive degree")
    if n > 4:
        raise FieldError("irreducibility is only decided up to degree 4")
    if n == 1:
        return True
    g = _integer_monic(f)
    if g[0] == 0:
        return False
    # a monic integer polynomial with a rational root has an integer root dividing g[0]
    if any(_poly_eval(g, r) == 0 for r in _divisors(g[0])):
        return False
    if n < 4:
        return True
    # x^4 + c3 x^3 + c2 x^2 + c1 x + c0 = (x^2 + a x + b)(x^2 + c x + d) with integers
    c0, c1, c2, c3 = g[0], g[1], g[2], g[3]
    for b in _divisors(c0):
        d = c0 // b
        # a + c = c3 and a d + b c = c1 determine a unless b == d
        if b != d:
            num = c1 - b * c3
            if num % (d - b):
                continue
            candidates = [num // (d - b)]
        else:
            if c1 != b * c3:
                continue
            # a c = c2 - 2b with a + c = c3: a is an integer root of t^2 - c3 t + (c2 - 2b)
            disc = c3 * c3 - 4 * (c2 - b - d)
            if disc < 0 or isqrt(disc) ** 2 != disc:
                continue
            r = isqrt(disc)
            candidates = [(c3 + r) // 2] if (c3 + r) % 2 == 0 else []
        for a in candidates:
            c = c3 - a
            if a * c + b + d == c2 and a * d + b * c == c1:
                return False
    return True


# ---- absolute fields --------------------------------------------------------

class NumberField:
    """``Q[x]/(f)`` for a monic irreducible ``f`` of degree at most 4.

    ``integral_basis`` lists ring generators as power-basis coordinate vectors;
    when ``discriminant`` is given it is checked against ``det Tr(b_i b_j)``.
    """

    def __init__(self, poly, name: str = "K", var: str = "x", integral_basis=None,
                 discriminant: int | None = None):
        f = [_frac(c) for c in _trim(poly)]
        if not is_irreducible(f):
            raise FieldError(f"{name}: defining polynomial is reducible")
        self.poly = tuple(f)
        self.degree = len(f) - 1
        self.name = name
        self.var = var
        n = self.degree
        basis = integral_basis or [[int(i == j) for j in range(n)] for i in range(n)]
        self.integral_basis = [self.element(b) for b in basis]
        self._to_integral = inverse_matrix([[b.coords[i] for b in self.integral_basis]
                                            for i in range(n)])
        self.discriminant = det([[(a * b).trace() for b in self.integral_basis]
                                 for a in self.integral_basis])
        if discriminant is not None and self.discriminant != discriminant:
            raise FieldError(f"{name}: integral basis has discriminant {self.discriminant}, "
                             f"expected {discriminant}")
        self.names: dict[str, FieldElement] = {}

    def __repr__(self):
        return f"NumberField({self.name}, degree {self.degree})"

    def element(self, coords) -> "FieldElement":
        c = [_frac(x) for x in coords]
        if len(c) > self.degree:
            c = self._reduce(c)
        c += [Fraction(0)] * (self.degree - len(c))
        return FieldElement(self, tuple(c))

    def __call__(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.field is not self:
                raise FieldError("element belongs to another field")
            return x
        return self.element([x])

    @property
    def gen(self) -> "FieldElement":
        return self.element([0, 1])

    @property
    def one(self) -> "FieldElement":
        return self.element([1])

    @property
    def zero(self) -> "FieldElement":
        return self.element([])

    def name_element(self, name: str, x) -> "FieldElement":
        self.names[name] = self(x)
        return self.names[name]

    def _reduce(self, c):
        c = list(c)
        n = self.degree
        for top in range(len(c) - 1, n - 1, -1):
            a = c[top]
            if a:
                for i in range(n):
                    c[top - n + i] -= a * self.poly[i]
            c[top] = Fraction(0)
        return c[:n]

    def automorphism(self, image) -> "FieldMap":
        return FieldMap(self, self, self(image))

    def integral_coordinates(self, x: "FieldElement"):
        return [sum(r * c for r, c in zip(row, x.coords)) for row in self._to_integral]

    def is_integral(self, x: "FieldElement") -> bool:
        """Membership in the ring spanned by the declared integral basis."""
        return all(c.denominator == 1 for c in self.integral_coordinates(x))

    def is_unit(self, x: "FieldElement") -> bool:
        x = self(x)
        return not x.is_zero() and self.is_integral(x) and abs(x.norm()) == 1


class FieldElement:
    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: tuple):
        self.field = field
        self.coords = coords

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element([other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a * other for a in self.coords))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.field.element(_poly_mul(self.coords, o.coords))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        n = self.field.degree
        cols = self.multiplication_matrix()
        x = solve(cols, [int(i == 0) for i in range(n)])
        return FieldElement(self.field, tuple(x))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        out = self.field.one
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.coords == o.coords

    def __hash__(self):
        return hash((id(self.field), self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def multiplication_matrix(self):
        """Columns are the coordinates of ``self * x^j``."""
        n = self.field.degree
        cols = [(self * self.field.element([0] * j + [1])).coords for j in range(n)]
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def norm(self) -> Fraction:
        return det(self.multiplication_matrix())

    def trace(self) -> Fraction:
        M = self.multiplication_matrix()
        return sum(M[i][i] for i in range(len(M)))

    def rational(self) -> Fraction:
        if any(self.coords[1:]):
            raise FieldError(f"{self} is not rational")
        return self.coords[0]

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            mono = "" if i == 0 else (self.field.var if i == 1 else f"{self.field.var}^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


class FieldMap:
    """The Q-algebra map ``source -> target`` sending the generator to ``image``."""

    def __init__(self, source: NumberField, target: NumberField, image: FieldElement):
        if _poly_eval_element(source.poly, image) != target.zero:
            raise FieldError("image of the generator does not satisfy the defining polynomial")
        self.source, self.target, self.image = source, target, image
        self._powers = [image ** j for j in range(source.degree)]

    def __call__(self, x: FieldElement) -> FieldElement:
        out = self.target.zero
        for c, p in zip(self.source(x).coords, self._powers):
            if c:
                out = out + p * c
        return out


def _poly_eval_element(poly, x: FieldElement) -> FieldElement:
    out = x.field.zero
    for c in reversed(poly):
        out = out * x + c
    return out


# ---- quadratic relative extensions ------------------------------------------

class RelativeExtension:
    """``E = F[z]/(z^2 + c1 z + c0)`` with elements ``a + b z`` over ``F``.

    ``sigma`` is the non-trivial ``F``-automorphism ``z -> -c1 - z``.  The
    extension comes with an absolute field and the images of the base
    generator and of ``z``; the identification is checked to be bijective.
    """

    def __init__(self, base: NumberField, c1, c0, absolute: NumberField, base_image, gen_image,
                 var: str = "z"):
        self.base = base
        self.c1, self.c0 = base(c1), base(c0)
        self.var = var
        self.absolute = absolute
        self._to_abs_base = FieldMap(base, absolute, base_image)
        z = absolute(gen_image)
        if z * z + self._to_abs_base(self.c1) * z + self._to_abs_base(self.c0) != absolute.zero:
            raise FieldError("image of the relative generator is not a root")
        self._gen_image = z
        if absolute.degree != self.degree:
            raise FieldError("degrees do not match")
        # a bijection onto a field of degree 2 [F:Q] also proves irreducibility over F
        basis = [self.to_absolute(self.element(*ab)) for ab in self._q_basis()]
        M = [[b.coords[i] for b in basis] for i in range(absolute.degree)]
        self._from_abs = inverse_matrix(M)

    def _q_basis(self):
        n = self.base.degree
        unit = [self.base.element([int(i == j) for j in range(n)]) for i in range(n)]
        return [(u, self.base.zero) for u in unit] + [(self.base.zero, u) for u in unit]

    @property
    def degree(self) -> int:
        return 2 * self.base.degree

    def element(self, a, b=0) -> "RelElement":
        return RelElement(self, self.base(a), self.base(b))

    @property
    def gen(self) -> "RelElement":
        return self.element(0, 1)

    @property
    def one(self) -> "RelElement":
        return self.element(1)

    def sigma(self, x: "RelElement") -> "RelElement":
        return RelElement(self, x.a - x.b * self.c1, -x.b)

    def norm(self, x: "RelElement"):
        n = x * self.sigma(x)
        assert n.b.is_zero()
        return n.a

    def trace(self, x: "RelElement"):
        t = x + self.sigma(x)
        assert t.b.is_zero()
        return t.a

    def to_absolute(self, x: "RelElement") -> FieldElement:
        return self._to_abs_base(x.a) + self._to_abs_base(x.b) * self._gen_image

    def from_absolute(self, y: FieldElement) -> "RelElement":
        c = [sum(r * v for r, v in zip(row, self.absolute(y).coords)) for row in self._from_abs]
        n = self.base.degree
        return self.element(self.base.element(c[:n]), self.base.element(c[n:]))

    def identification_is_homomorphism(self) -> bool:
        """Check the identification on all products of the Q-basis."""
        elems = [self.element(*ab) for ab in self._q_basis()]
        return all(self.to_absolute(x * y) == self.to_absolute(x) * self.to_absolute(y)
                   and self.from_absolute(self.to_absolute(x)) == x
                   for x, y in product(elems, repeat=2))


class RelElement:
    __slots__ = ("ext", "a", "b")

    def __init__(self, ext: RelativeExtension, a: FieldElement, b: FieldElement):
        self.ext, self.a, self.b = ext, a, b

    def _coerce(self, other):
        if isinstance(other, RelElement):
            return other
        return self.ext.element(other)

    def __add__(self, other):
        o = self._coerce(other)
        return RelElement(self.ext, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return RelElement(self.ext, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        E = self.ext
        bd = self.b * o.b
        # z^2 = -c1 z - c0
        return RelElement(E, self.a * o.a - bd * E.c0, self.a * o.b + self.b * o.a - bd * E.c1)

    __rmul__ = __mul__

    def inverse(self):
        n = self.ext.norm(self)
        if n.is_zero():
            raise ZeroDivisionError("inverse of zero")
        s = self.ext.sigma(self)
        inv = n.inverse()
        return RelElement(self.ext, s.a * inv, s.b * inv)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, e: int):
        base = self if e >= 0 else self.inverse()
        out = self.ext.one
        for _ in range(abs(e)):
            out = out * base
        return out

    def __eq__(self, other):
        if not isinstance(other, (RelElement, int, Fraction, FieldElement)):
            return False
        o = self._coerce(other)
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"({self.a}) + ({self.b})*{self.ext.var}"


# ---- the fields used by the worked example ----------------------------------

def sqrt3_field() -> NumberField:
    """``F = Q(s)`` with ``s^2 = 3``; the ring of integers is ``Z[s]``."""
    F = NumberField([-3, 0, 1], name="Q(sqrt3)", var="s", discriminant=12)
    F.name_element("s", F.gen)
    return F


def cyclotomic12_field() -> NumberField:
    """``Q(zeta)`` with ``zeta^4 - zeta^2 + 1 = 0``; the ring of integers is ``Z[zeta]``."""
    K = NumberField([1, 0, -1, 0, 1], name="Q(zeta12)", var="zeta", discriminant=144)
    zeta = K.name_element("zeta", K.gen)
    K.name_element("s", zeta * 2 - zeta ** 3)
    return K


class ExampleFields:
    """``F = Q(sqrt 3)`` and ``E = F(zeta)`` with ``zeta^2 - s zeta + 1 = 0``.

    ``E`` is built relatively, for norms and ``sigma``, and absolutely as
    ``Q(zeta_12)``, for roots of unity, with the identification checked.
    """

    def __init__(self):
        self.F = sqrt3_field()
        self.K = cyclotomic12_field()
        self.s = self.F.names["s"]
        self.E = RelativeExtension(self.F, -self.s, 1, self.K, self.K.names["s"], self.K.gen,
                                   var="zeta")
        self.zeta = self.K.gen
        self.s_abs = self.K.names["s"]
        self.i = self.zeta * 2 - self.s_abs  # a square root of -1
        self.conj = self.K.automorphism(self.zeta ** 11)

    def relative_sigma(self, x: FieldElement) -> FieldElement:
        """The non-trivial ``F``-automorphism of ``E``, computed through the relative model."""
        return self.E.to_absolute(self.E.sigma(self.E.from_absolute(x)))

    def relative_norm(self, x: FieldElement) -> FieldElement:
        """``N_{E/F}`` of an absolute element, as an element of ``F``."""
        return self.E.norm(self.E.from_absolute(x))

    def in_base(self, x: FieldElement) -> bool:
        return self.E.from_absolute(x).b.is_zero()

    def to_base(self, x: FieldElement) -> FieldElement:
        r = self.E.from_absolute(x)
        if not r.b.is_zero():
            raise FieldError(f"{x} does not lie in the base field")
        return r.a

    def from_base(self, a) -> FieldElement:
        return self.E.to_absolute(self.E.element(a))

    def root_of_unity_exponent(self, x: FieldElement) -> int:
        """The ``e`` in ``[0, 12)`` with ``x = zeta^e``.

        The absolute-value-one condition is tested algebraically as
        ``x * conj(x) = 1``.
        """
        x = self.K(x)
        if not self.K.is_unit(x) or x * self.conj(x) != self.K.one:
            raise FieldError(f"{x} is not a root of unity")
        p = self.K.one
        for e in range(12):
            if p == x:
                return e
            p = p * self.zeta
        raise FieldError(f"{x} is not a power of zeta")
