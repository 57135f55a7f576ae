"""Exact arithmetic in Q[x] and in the differential field K = Q(x).

:class:`UPoly` is a dense univariate polynomial over any exact field whose
elements support ``+ - * /`` and comparison with ``0`` (``Fraction`` for
Q[x], :class:`RatFunc` for polynomials over a rational function field).
:class:`RatFunc` is a reduced fraction of ``UPoly[Fraction]`` with a monic
denominator, so equal elements have identical representations.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Rational

from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_gcd

from .errors import DivisionByZero, LogarithmicPart, PoleError, ZeroPolynomial

__all__ = [
    "UPoly",
    "RatFunc",
    "as_fraction",
    "field_arith",
    "derive",
    "squarefree_decomposition",
    "rational_antiderivative",
    "evaluate_at",
]


def as_fraction(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def _coerce(c):
    return Fraction(c) if type(c) is int else c


def _one_like(c):
    return RatFunc(1) if isinstance(c, RatFunc) else Fraction(1)


class UPoly:
    """Univariate polynomial, coefficients stored low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [_coerce(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def _raw(cls, coeffs):
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def monomial(cls, degree, c=1):
        c = _coerce(c)
        return cls([c * 0] * degree + [c])

    @classmethod
    def x(cls):
        return cls((0, 1))

    # -- basic queries ------------------------------------------------------

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_constant(self):
        return len(self.coeffs) <= 1

    def low_order(self):
        """Index of the lowest nonzero coefficient."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        raise ZeroPolynomial("zero polynomial")

    def is_monomial(self):
        return bool(self.coeffs) and self.low_order() == self.degree

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if len(self.coeffs) <= 1:
            return (self.coeffs[0] if self.coeffs else 0) == other
        return False

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UPoly({list(self.coeffs)!r})"

    # -- ring operations ----------------------------------------------------

    def __neg__(self):
        return UPoly._raw(tuple(-c for c in self.coeffs))

    def __add__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return UPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            other = _coerce(other)
            if other == 0:
                return UPoly()
            return UPoly._raw(tuple(c * other for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UPoly()
        out = [a[0] * 0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = UPoly.constant(_one_like(self.coeffs[-1]) if self.coeffs else 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c):
        return self * c

    def divmod(self, other):
        """Euclidean division over the coefficient field."""
        if not other.coeffs:
            raise DivisionByZero("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        lcb = other.coeffs[-1]
        if len(r) - 1 < db:
            return UPoly(), self
        q = [r[0] * 0] * (len(r) - db)
        b = other.coeffs
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if c == 0:
                continue
            t = c / lcb
            q[k - db] = t
            for j in range(db + 1):
                r[k - db + j] = r[k - db + j] - t * b[j]
        return UPoly(q), UPoly(r[:db])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other):
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self):
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        if lc == 1:
            return self
        return UPoly._raw(tuple(c / lc for c in self.coeffs))

    def deriv(self):
        return UPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def integrate(self):
        """Termwise antiderivative with zero constant term."""
        if not self.coeffs:
            return self
        return UPoly([self.coeffs[0] * 0] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def __call__(self, value):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return _coerce(acc)

    def compose(self, other):
        """Substitute the polynomial ``other`` for the variable."""
        acc = UPoly()
        for c in reversed(self.coeffs):
            acc = acc * other + UPoly.constant(c)
        return acc

    # -- gcd ----------------------------------------------------------------

    @staticmethod
    def gcd(a, b):
        """Monic gcd; ``gcd(0, 0) = 0``."""
        if not a.coeffs:
            return b.monic()
        if not b.coeffs:
            return a.monic()
        if a.is_monomial() or b.is_monomial():
            k = min(a.low_order(), b.low_order())
            return UPoly.monomial(k, _one_like(a.coeffs[-1]))
        if isinstance(a.coeffs[-1], Fraction) and isinstance(b.coeffs[-1], Fraction):
            return _gcd_q(a, b)
        while b.coeffs:
            a, b = b, a.divmod(b)[1]
        return a.monic()

    @staticmethod
    def gcdex(a, b):
        """Return ``(s, t, g)`` with ``s*a + t*b = g = gcd(a, b)`` monic."""
        one = _one_like((a.coeffs or b.coeffs)[-1])
        r0, r1 = a, b
        s0, s1 = UPoly.constant(one), UPoly()
        t0, t1 = UPoly(), UPoly.constant(one)
        while r1.coeffs:
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if not r0.coeffs:
            return s0, t0, r0
        lc = r0.lc
        inv = one / lc
        return s0 * inv, t0 * inv, r0 * inv

    @staticmethod
    def solve_bezout(a, b, c):
        """Return ``(s, t)`` with ``s*a + t*b = c`` and ``deg s < deg b``."""
        s, t, g = UPoly.gcdex(a, b)
        q, r = c.divmod(g)
        if r:
            raise ArithmeticError("c is not in the ideal generated by a and b")
        s = s * q
        if b.degree > 0:
            s = s.divmod(b)[1]
        t = (c - s * a).exact_div(b)
        return s, t

    def to_str(self, var="x"):
        return _render_poly(self.coeffs, var)

    __str__ = to_str


def _to_zz(p):
    # primitive integer multiple, high degree first
    m = lcm(*(c.denominator for c in p.coeffs))
    return [ZZ(int(c * m)) for c in reversed(p.coeffs)]


def _gcd_q(a, b):
    """Monic gcd over Q through the heuristic integer gcd of sympy."""
    g = dup_gcd(_to_zz(a), _to_zz(b), ZZ)
    lc = int(g[0])
    return UPoly._raw(tuple(Fraction(int(c), lc) for c in reversed(g)))


def _render_coeff(c):
    if isinstance(c, Fraction):
        return str(c)
    return f"({c})"


def _render_poly(coeffs, var):
    if not coeffs:
        return "0"
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        neg = isinstance(c, Fraction) and c < 0
        mag = -c if neg else c
        if k == 0:
            body = _render_coeff(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{_render_coeff(mag)}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("-" if neg else "+") + body)
    return "".join(parts)


def _term_count(p):
    return sum(1 for c in p.coeffs if c != 0)


class RatFunc:
    """Element of Q(x): ``num/den`` with ``gcd(num, den) = 1`` and ``den`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=None):
        if not isinstance(num, UPoly):
            num = UPoly.constant(as_fraction(num))
        if den is None:
            den = UPoly((Fraction(1),))
        elif not isinstance(den, UPoly):
            den = UPoly.constant(as_fraction(den))
        if not den.coeffs:
            raise DivisionByZero("rational function with zero denominator")
        if not num.coeffs:
            self.num, self.den = num, UPoly._raw((Fraction(1),))
            return
        if den.degree > 0:
            g = UPoly.gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        lc = den.coeffs[-1]
        if lc != 1:
            num, den = num * (1 / lc), den.monic()
        self.num, self.den = num, den

    @classmethod
    def _raw(cls, num, den):
        f = object.__new__(cls)
        f.num, f.den = num, den
        return f

    @classmethod
    def x(cls):
        return cls(UPoly.x())

    @classmethod
    def const(cls, c):
        return cls(as_fraction(c))

    @classmethod
    def coerce(cls, value):
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, UPoly):
            return cls(value)
        return cls(as_fraction(value))

    # -- queries ------------------------------------------------------------

    def is_zero(self):
        return not self.num.coeffs

    def __bool__(self):
        return bool(self.num.coeffs)

    def is_constant(self):
        return self.den.degree == 0 and self.num.degree <= 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.coeffs[0] if self.num.coeffs else Fraction(0)

    def is_polynomial(self):
        return self.den.degree == 0

    def value_at_infinity(self):
        """Limit as x -> oo, or ``None`` when the function has a pole there."""
        dn, dd = self.num.degree, self.den.degree
        if dn < dd:
            return Fraction(0)
        if dn == dd:
            return self.num.coeffs[-1]
        return None

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num.coeffs == other.num.coeffs and self.den.coeffs == other.den.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.num.coeffs, self.den.coeffs))

    # -- field operations ---------------------------------------------------

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __add__(self, other):
        if not isinstance(other, RatFunc):
            if isinstance(other, (int, Fraction)):
                return RatFunc._raw(self.num + self.den * _coerce(other), self.den) if other else self
            return NotImplemented
        if not other.num.coeffs:
            return self
        if not self.num.coeffs:
            return other
        if self.den.coeffs == other.den.coeffs:
            if self.den.degree == 0:
                return RatFunc._raw(self.num + other.num, self.den)
            return RatFunc(self.num + other.num, self.den)
        g = UPoly.gcd(self.den, other.den)
        if g.degree == 0:
            return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)
        d1 = self.den.exact_div(g)
        d2 = other.den.exact_div(g)
        return RatFunc(self.num * d2 + other.num * d1, self.den * d2)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (RatFunc, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            if isinstance(other, (int, Fraction)):
                if other == 0:
                    return RatFunc()
                return RatFunc._raw(self.num * _coerce(other), self.den)
            return NotImplemented
        if not self.num.coeffs or not other.num.coeffs:
            return RatFunc()
        if self.den.degree == 0 and other.den.degree == 0:
            return RatFunc._raw(self.num * other.num, self.den)
        if self.is_constant():
            return RatFunc._raw(other.num * self.num.coeffs[0], other.den)
        if other.is_constant():
            return RatFunc._raw(self.num * other.num.coeffs[0], self.den)
        # cross-cancel before multiplying keeps the operands small
        g1 = UPoly.gcd(self.num, other.den)
        g2 = UPoly.gcd(other.num, self.den)
        n1, d2 = (self.num.exact_div(g1), other.den.exact_div(g1)) if g1.degree > 0 else (self.num, other.den)
        n2, d1 = (other.num.exact_div(g2), self.den.exact_div(g2)) if g2.degree > 0 else (other.num, self.den)
        num, den = n1 * n2, d1 * d2
        lc = den.coeffs[-1]
        if lc != 1:
            num, den = num * (1 / lc), den.monic()
        return RatFunc._raw(num, den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num.coeffs:
            raise DivisionByZero("inverse of zero in Q(x)")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, RatFunc):
            if isinstance(other, (int, Fraction)):
                if other == 0:
                    raise DivisionByZero("division by zero in Q(x)")
                return RatFunc._raw(self.num * (1 / _coerce(other)), self.den)
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return RatFunc(1)
        if not self.num.coeffs:
            return RatFunc()
        return RatFunc._raw(self.num ** n, self.den ** n)

    def derive(self):
        if self.den.degree == 0:
            return RatFunc._raw(self.num.deriv(), self.den)
        return RatFunc(self.num.deriv() * self.den - self.num * self.den.deriv(), self.den * self.den)

    def __call__(self, x0):
        return evaluate_at(self, x0)

    # -- rendering ----------------------------------------------------------

    def to_str(self, var="x"):
        num = self.num.to_str(var)
        if self.den.degree == 0:
            return num
        den = self.den.to_str(var)
        if _term_count(self.num) > 1:
            num = f"({num})"
        if _term_count(self.den) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"RatFunc({self.to_str()!r})"


def field_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    """Apply ``op`` in {add, sub, mul, div} to two elements of Q(x)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise DivisionByZero("division by zero in Q(x)")
        return a / b
    raise ValueError(f"unknown field operation {op!r}")


def derive(f: RatFunc) -> RatFunc:
    return f.derive()


def squarefree_decomposition(p: UPoly):
    """Yun's algorithm over a field of characteristic zero.

    Returns ``[(factor, multiplicity), ...]`` with monic, squarefree, pairwise
    coprime factors of positive degree, in increasing multiplicity, such that
    ``p = lc(p) * prod(factor**multiplicity)``.
    """
    if p.is_zero():
        raise ZeroPolynomial("squarefree decomposition of the zero polynomial")
    a = p.monic()
    if a.degree == 0:
        return []
    b = a.deriv()
    c = UPoly.gcd(a, b)
    w = a.exact_div(c)
    y = b.exact_div(c)
    z = y - w.deriv()
    out = []
    i = 1
    while w.degree > 0:
        g = UPoly.gcd(w, z)
        if g.degree > 0:
            out.append((g, i))
        w = w.exact_div(g)
        y = z.exact_div(g)
        z = y - w.deriv()
        i += 1
    return out


def _hermite_reduce(a: UPoly, d: UPoly):
    """Mack's linear Hermite reduction of a proper fraction ``a/d``.

    Returns ``(g, h_num, h_den)`` with ``a/d = g' + h_num/h_den`` and ``h_den``
    squarefree.
    """
    g = RatFunc()
    for v, i in squarefree_decomposition(d):
        if i < 2:
            continue
        u = d.exact_div(v ** i)
        dv = v.deriv()
        for j in range(i - 1, 0, -1):
            b, c = UPoly.solve_bezout(u * dv, v, a * Fraction(-1, j))
            g = g + RatFunc(b, v ** j)
            a = c * (-j) - u * b.deriv()
        d = u * v
    return g, a, d


def rational_antiderivative(f: RatFunc) -> RatFunc:
    """Rational antiderivative with zero constant term in partial-fraction form.

    Raises :class:`LogarithmicPart` when ``f`` has a nonzero residue somewhere.
    """
    if f.is_zero():
        return RatFunc()
    poly, rem = f.num.divmod(f.den)
    result = RatFunc(poly.integrate())
    if rem.is_zero():
        return result
    g, a, d = _hermite_reduce(rem, f.den)
    if a:
        raise LogarithmicPart(f"{f} has no rational antiderivative (nonzero logarithmic part)")
    return result + g


def evaluate_at(f: RatFunc, x0) -> Fraction:
    x0 = as_fraction(x0)
    d = f.den(x0)
    if d == 0:
        raise PoleError(f"{f} has a pole at x = {x0}")
    return f.num(x0) / d
