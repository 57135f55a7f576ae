"""The Ore ring K[D] of linear differential operators over K = Q(x)."""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import DivisionByZeroOperator, NonConstantCoefficient
from .exactfield import RatFunc

__all__ = [
    "DiffOp",
    "op_ring",
    "op_scale",
    "compose",
    "commutator",
    "right_divmod",
    "right_gcd",
    "operator_poly_eval",
]

_ZERO = RatFunc()
_ONE = RatFunc(1)


class DiffOp:
    """``sum(coeffs[k] * D**k)`` with coefficients in Q(x).

    Coefficients are applied on the left, so ``DiffOp([a, b])`` is ``a + b*D``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [RatFunc.coerce(a) for a in coeffs]
        while c and c[-1].is_zero():
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def d(cls, k=1):
        """The operator ``D**k``."""
        return cls([_ZERO] * k + [_ONE])

    @classmethod
    def scalar(cls, c):
        return cls([c])

    @property
    def order(self):
        """Order of the operator; the zero operator has order -1."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def lc(self):
        return self.coeffs[-1]

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else _ZERO

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self):
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        inv = self.coeffs[-1].inverse()
        return DiffOp([c * inv for c in self.coeffs])

    def __eq__(self, other):
        if isinstance(other, DiffOp):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, RatFunc)):
            return self == DiffOp.scalar(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return DiffOp([-c for c in self.coeffs])

    def __add__(self, other):
        other = _as_op(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return DiffOp([self.coeff(k) + other.coeff(k) for k in range(n)])

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_op(other))

    def __rsub__(self, other):
        return _as_op(other) - self

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return compose(self, other)
        return op_scale(self, other)

    def __rmul__(self, other):
        # scalar on the left: c * A
        return op_scale(self, other)

    def __pow__(self, n):
        result = DiffOp([_ONE])
        for _ in range(n):
            result = compose(result, self)
        return result

    def to_str(self, var="x"):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            mono = "" if k == 0 else ("D" if k == 1 else f"D^{k}")
            if k and c == 1:
                parts.append(mono)
            elif k and c == -1:
                parts.append("-" + mono)
            else:
                body = c.to_str(var)
                if k:
                    body = f"({body})*{mono}"
                elif not c.is_constant():
                    body = f"({body})"
                parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"DiffOp({self.to_str()!r})"


def _as_op(a):
    return a if isinstance(a, DiffOp) else DiffOp.scalar(a)


def op_ring(a: DiffOp, b: DiffOp, op: str) -> DiffOp:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    raise ValueError(f"unknown operator ring operation {op!r}")


def op_scale(a: DiffOp, c) -> DiffOp:
    """Left multiplication by an element of K."""
    c = RatFunc.coerce(c)
    if c.is_zero():
        return DiffOp()
    return DiffOp([c * ak for ak in a.coeffs])


def compose(a: DiffOp, b: DiffOp) -> DiffOp:
    """Product ``a*b`` in K[D] via ``D^i f = sum_k C(i,k) f^(k) D^(i-k)``."""
    if not a.coeffs or not b.coeffs:
        return DiffOp()
    top = a.order
    # derivs[j][k] = k-th derivative of b_j
    derivs = []
    for bj in b.coeffs:
        row = [bj]
        for _ in range(top):
            row.append(row[-1].derive())
        derivs.append(row)
    out = [_ZERO] * (a.order + b.order + 1)
    for i, ai in enumerate(a.coeffs):
        if ai.is_zero():
            continue
        for j, row in enumerate(derivs):
            for k in range(i + 1):
                d = row[k]
                if d.is_zero():
                    continue
                out[i - k + j] = out[i - k + j] + ai * d * comb(i, k)
    return DiffOp(out)


def commutator(a: DiffOp, b: DiffOp) -> DiffOp:
    return compose(a, b) - compose(b, a)


def right_divmod(a: DiffOp, b: DiffOp):
    """Return ``(q, r)`` with ``a = q*b + r`` and ``order(r) < order(b)``."""
    if b.is_zero():
        raise DivisionByZeroOperator("right division by the zero operator")
    q = [_ZERO] * max(a.order - b.order + 1, 0)
    r = a
    inv = b.lc.inverse()
    while r.order >= b.order:
        d = r.order - b.order
        t = r.lc * inv
        q[d] = q[d] + t
        r = r - compose(DiffOp([_ZERO] * d + [t]), b)
    return DiffOp(q), r


def right_gcd(a: DiffOp, b: DiffOp) -> DiffOp:
    """Monic greatest common right divisor by the Euclidean algorithm."""
    if a.is_zero() and b.is_zero():
        raise DivisionByZeroOperator("right gcd of two zero operators")
    while not b.is_zero():
        a, b = b, right_divmod(a, b)[1]
    return a.monic()


def operator_poly_eval(f, L: DiffOp, A1: DiffOp, A2: DiffOp) -> DiffOp:
    """Evaluate a constant-coefficient polynomial in (lambda, mu, gamma) at (L, A1, A2).

    The three operators must pairwise commute, so the order of the factors in
    each monomial does not matter.
    """
    powers = ([DiffOp([_ONE])], [DiffOp([_ONE])], [DiffOp([_ONE])])
    gens = (L, A1, A2)

    def power(v, k):
        cache = powers[v]
        while len(cache) <= k:
            cache.append(compose(cache[-1], gens[v]))
        return cache[k]

    total = DiffOp()
    for (i, j, k), c in f.terms.items():
        if not c.is_constant():
            raise NonConstantCoefficient(f"coefficient {c} of lambda^{i} mu^{j} gamma^{k} depends on x")
        term = compose(compose(power(0, i), power(1, j)), power(2, k))
        total = total + op_scale(term, c)
    return total
