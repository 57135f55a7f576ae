"""Polynomials in (lambda, mu, gamma) over a coefficient field, and their determinants.

The kernel only uses ``+ - * /`` and ``== 0`` on coefficients. In the
pipeline the coefficients live in K = Q(x) (:class:`RatFunc`); the
squarefree test reuses the univariate kernel of :mod:`exactfield` over
Q(mu).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InexactDivision, NonSquare, PreconditionViolated
from .exactfield import RatFunc, UPoly, as_fraction, squarefree_decomposition

__all__ = [
    "VARS",
    "MPoly3",
    "PolyMatrix",
    "mpoly_arith",
    "mpoly_exact_div",
    "determinant",
    "eval_point",
    "jacobian_row",
    "is_constant_in_x",
    "squarefree_test_const",
]

VARS = ("lambda", "mu", "gamma")
LAMBDA, MU, GAMMA = 0, 1, 2

_ZERO = RatFunc()
_ONE = RatFunc(1)
_UNIT = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def _grlex(e):
    return (e[0] + e[1] + e[2], e[0], e[1], e[2])


class MPoly3:
    """Sparse polynomial: exponent triple ``(i, j, k)`` of lambda^i mu^j gamma^k -> coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for e, c in terms.items():
                c = RatFunc.coerce(c)
                if not c.is_zero():
                    self.terms[tuple(e)] = c

    @classmethod
    def _raw(cls, terms):
        p = object.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def const(cls, c):
        return cls({(0, 0, 0): c})

    @classmethod
    def var(cls, v):
        if isinstance(v, str):
            v = VARS.index(v)
        return cls._raw({_UNIT[v]: _ONE})

    @classmethod
    def lam(cls):
        return cls.var(LAMBDA)

    @classmethod
    def mu(cls):
        return cls.var(MU)

    @classmethod
    def gam(cls):
        return cls.var(GAMMA)

    # -- queries ------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        """True when the polynomial has degree 0 in (lambda, mu, gamma)."""
        return not self.terms or (len(self.terms) == 1 and (0, 0, 0) in self.terms)

    def constant_term(self):
        return self.terms.get((0, 0, 0), _ZERO)

    def degree_in(self, v):
        return max((e[v] for e in self.terms), default=-1)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def variables(self):
        return {VARS[v] for e in self.terms for v in range(3) if e[v]}

    def leading(self):
        e = max(self.terms, key=_grlex)
        return e, self.terms[e]

    def coeff(self, e):
        return self.terms.get(tuple(e), _ZERO)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex(t[0]), reverse=True)

    def __eq__(self, other):
        if isinstance(other, MPoly3):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction, RatFunc)):
            return self == MPoly3.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self):
        return MPoly3._raw({e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        other = _as_mpoly(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v.is_zero():
                    del out[e]
                else:
                    out[e] = v
        return MPoly3._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_mpoly(other))

    def __rsub__(self, other):
        return _as_mpoly(other) - self

    def scale(self, c):
        c = RatFunc.coerce(c)
        if c.is_zero():
            return MPoly3()
        if c == 1:
            return self
        return MPoly3._raw({e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MPoly3):
            return self.scale(other)
        if not self.terms or not other.terms:
            return MPoly3()
        if other.is_constant():
            return self.scale(other.terms[(0, 0, 0)])
        if self.is_constant():
            return other.scale(self.terms[(0, 0, 0)])
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return MPoly3._raw({e: c for e, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, n):
        result = MPoly3.const(_ONE)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def exact_div(self, other):
        """Quotient of an exact division; raises :class:`InexactDivision` otherwise."""
        other = _as_mpoly(other)
        if other.is_zero():
            raise InexactDivision("division by the zero polynomial")
        if other.is_constant():
            return self.scale(other.terms[(0, 0, 0)].inverse())
        lead_b, lc_b = other.leading()
        inv = lc_b.inverse()
        rem = dict(self.terms)
        quo = {}
        b_terms = list(other.terms.items())
        while rem:
            e = max(rem, key=_grlex)
            if any(e[v] < lead_b[v] for v in range(3)):
                raise InexactDivision("polynomial division is not exact")
            shift = (e[0] - lead_b[0], e[1] - lead_b[1], e[2] - lead_b[2])
            t = rem[e] * inv
            quo[shift] = t
            for eb, cb in b_terms:
                key = (eb[0] + shift[0], eb[1] + shift[1], eb[2] + shift[2])
                v = rem.get(key, _ZERO) - t * cb
                if v.is_zero():
                    rem.pop(key, None)
                else:
                    rem[key] = v
        return MPoly3._raw(quo)

    def partial(self, v):
        out = {}
        for e, c in self.terms.items():
            if e[v]:
                ne = list(e)
                ne[v] -= 1
                out[tuple(ne)] = c * e[v]
        return MPoly3._raw(out)

    def map_coeffs(self, fn):
        return MPoly3({e: fn(c) for e, c in self.terms.items()})

    def substitute(self, values):
        """Evaluate at rational coordinates; returns a coefficient (element of K)."""
        lam, mu, gam = (as_fraction(v) for v in values)
        acc = _ZERO
        for (i, j, k), c in self.terms.items():
            acc = acc + c * (lam ** i * mu ** j * gam ** k)
        return acc

    # -- rendering ----------------------------------------------------------

    def to_str(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                VARS[v] if e[v] == 1 else f"{VARS[v]}^{e[v]}" for v in range(3) if e[v]
            )
            if c.is_constant():
                val = c.constant_value()
                neg = val < 0
                coef = str(abs(val))
            else:
                neg = False
                coef = f"({c})"
            if not mono:
                body = coef
            elif coef == "1":
                body = mono
            else:
                body = f"{coef}*{mono}"
            sign = "-" if neg else "+"
            parts.append(body if not parts and not neg else sign + body)
        return "".join(parts)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"MPoly3({self.to_str()!r})"


def _as_mpoly(a):
    return a if isinstance(a, MPoly3) else MPoly3.const(a)


def mpoly_arith(a: MPoly3, b: MPoly3, op: str) -> MPoly3:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown polynomial operation {op!r}")


def mpoly_exact_div(a: MPoly3, b: MPoly3) -> MPoly3:
    return a.exact_div(b)


class PolyMatrix:
    """Rectangular grid of :class:`MPoly3` entries."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows):
        rows = [[_as_mpoly(a) for a in r] for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def drop_column(self, j):
        return PolyMatrix([r[:j] + r[j + 1:] for r in self.rows])

    def __repr__(self):
        return f"PolyMatrix({self.nrows}x{self.ncols})"


def _pivot_cost(p: MPoly3):
    size = sum(c.num.degree + c.den.degree + 2 for c in p.terms.values())
    return (not p.is_constant(), len(p.terms), size)


def determinant(m: PolyMatrix) -> MPoly3:
    """Fraction-free (Bareiss) determinant over K[lambda, mu, gamma].

    Pivots prefer entries of degree 0 in (lambda, mu, gamma). The shifted rows
    of monic operators supply unit pivots for most columns, so the expensive
    polynomial divisions only occur in a small trailing block.
    """
    if m.nrows != m.ncols:
        raise NonSquare(f"determinant of a {m.nrows}x{m.ncols} matrix")
    n = m.nrows
    if n == 0:
        return MPoly3.const(_ONE)
    a = [list(r) for r in m.rows]
    sign = 1
    prev = None
    for k in range(n - 1):
        candidates = [r for r in range(k, n) if not a[r][k].is_zero()]
        if not candidates:
            return MPoly3()
        piv = min(candidates, key=lambda r: _pivot_cost(a[r][k]))
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        p = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                if aik.is_zero():
                    v = p * rowi[j]
                elif rowk[j].is_zero():
                    v = p * rowi[j]
                else:
                    v = p * rowi[j] - aik * rowk[j]
                if prev is not None and not v.is_zero():
                    v = v.exact_div(prev)
                rowi[j] = v
            rowi[k] = MPoly3()
        prev = p
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def eval_point(f: MPoly3, p) -> RatFunc:
    return f.substitute(p)


def jacobian_row(f: MPoly3):
    return (f.partial(LAMBDA), f.partial(MU), f.partial(GAMMA))


def is_constant_in_x(f: MPoly3) -> bool:
    return all(c.is_constant() for c in f.terms.values())


def _content_and_coeffs(f: MPoly3):
    """Write f in Q[mu][gamma]; returns the list of gamma-coefficients as UPoly in mu."""
    deg = f.degree_in(GAMMA)
    cols = [dict() for _ in range(deg + 1)]
    for (i, j, k), c in f.terms.items():
        cols[k][j] = c.constant_value()
    out = []
    for col in cols:
        top = max(col, default=-1)
        out.append(UPoly([col.get(j, 0) for j in range(top + 1)]))
    return out


def _from_mu_gamma(coeffs) -> MPoly3:
    """Inverse of :func:`_content_and_coeffs` for coefficients in Q[mu]."""
    terms = {}
    for k, cp in enumerate(coeffs):
        for j, c in enumerate(cp.coeffs):
            if c != 0:
                terms[(0, j, k)] = RatFunc(c)
    return MPoly3(terms)


def _primitive_from_field(poly: UPoly) -> MPoly3:
    """Clear Q(mu)-denominators of a polynomial in gamma and make it primitive over Q[mu]."""
    den = UPoly([1])
    for c in poly.coeffs:
        if not c.is_zero():
            den = (den * c.den).exact_div(UPoly.gcd(den, c.den))
    coeffs = [(c.num * den).exact_div(c.den) if not c.is_zero() else UPoly() for c in poly.coeffs]
    content = UPoly()
    for c in coeffs:
        content = UPoly.gcd(content, c)
    coeffs = [c.exact_div(content) for c in coeffs]
    lc = coeffs[-1].lc
    return _from_mu_gamma([c * (1 / lc) for c in coeffs])


def squarefree_test_const(f: MPoly3):
    """Decide whether a constant-coefficient polynomial in (mu, gamma) is squarefree.

    Returns ``(squarefree, certificate)``; the certificate is the product of the
    repeated irreducible-free factors (each taken once) when ``f`` is not
    squarefree, otherwise ``None``.
    """
    if not is_constant_in_x(f):
        raise PreconditionViolated("squarefree test needs coefficients constant in x")
    if f.degree_in(LAMBDA) > 0:
        raise PreconditionViolated("squarefree test expects a polynomial in mu and gamma only")
    if f.is_zero():
        raise PreconditionViolated("the zero polynomial is not squarefree")
    coeffs = _content_and_coeffs(f)
    content = UPoly()
    for c in coeffs:
        content = UPoly.gcd(content, c)
    repeated = []
    if content.degree > 0:
        for g, mult in squarefree_decomposition(content):
            if mult > 1:
                repeated.append(_from_mu_gamma([g]))
    prim = [c.exact_div(content) for c in coeffs]
    if len(prim) > 1:
        over_field = UPoly([RatFunc(c) for c in prim])
        for g, mult in squarefree_decomposition(over_field):
            if mult > 1:
                repeated.append(_primitive_from_field(g))
    if not repeated:
        return True, None
    cert = MPoly3.const(_ONE)
    for g in repeated:
        cert = cert * g
    return False, cert
