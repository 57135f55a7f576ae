"""Sylvester-type matrices, differential resultants and first subresultants.

A pair ``(p - a, q - b)`` with ``a, b`` two of the spectral indeterminates
``lambda, mu, gamma`` is turned into a coefficient matrix whose rows are
left shifts ``D^k * (p - a)`` and ``D^k * (q - b)`` and whose columns are
indexed by descending powers of D.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curvepoly import VARS, MPoly3, PolyMatrix, determinant, is_constant_in_x
from .diffop import DiffOp, compose
from .errors import NotXFree, OrderTooSmall

__all__ = [
    "SpectralPair",
    "sylvester_s0",
    "sylvester_s1",
    "diff_resultant",
    "first_subresultant",
]


def _ind(v):
    if isinstance(v, str):
        return VARS.index(v)
    if v not in (0, 1, 2):
        raise ValueError(f"unknown indeterminate {v!r}")
    return v


@dataclass(frozen=True)
class SpectralPair:
    p: DiffOp
    q: DiffOp
    ind_p: int
    ind_q: int

    def __post_init__(self):
        object.__setattr__(self, "ind_p", _ind(self.ind_p))
        object.__setattr__(self, "ind_q", _ind(self.ind_q))
        if self.p.order < 1 or self.q.order < 1:
            raise OrderTooSmall("both operators of a spectral pair need order at least 1")
        if self.ind_p == self.ind_q:
            raise ValueError("the two operators must be shifted by different indeterminates")

    @property
    def orders(self):
        return self.p.order, self.q.order


def _shift_rows(op: DiffOp, ind: int, shifts, width):
    """Rows of ``D^k * (op - ind)`` for k in ``shifts``, columns D^(width-1) .. D^0."""
    rows = []
    var = MPoly3.var(ind)
    for k in shifts:
        shifted = compose(DiffOp.d(k), op)
        row = [MPoly3.const(shifted.coeff(width - 1 - col)) for col in range(width)]
        col = width - 1 - k
        row[col] = row[col] - var
        rows.append(row)
    return rows


def sylvester_s0(pair: SpectralPair) -> PolyMatrix:
    n, m = pair.orders
    size = n + m
    rows = _shift_rows(pair.p, pair.ind_p, range(m - 1, -1, -1), size)
    rows += _shift_rows(pair.q, pair.ind_q, range(n - 1, -1, -1), size)
    return PolyMatrix(rows)


def sylvester_s1(pair: SpectralPair) -> PolyMatrix:
    n, m = pair.orders
    if n + m < 3:
        raise OrderTooSmall(f"no first subresultant for orders ({n}, {m})")
    width = n + m - 1
    rows = _shift_rows(pair.p, pair.ind_p, range(m - 2, -1, -1), width)
    rows += _shift_rows(pair.q, pair.ind_q, range(n - 2, -1, -1), width)
    return PolyMatrix(rows)


def diff_resultant(pair: SpectralPair) -> MPoly3:
    """Determinant of S0; a constant-coefficient polynomial for commuting pairs."""
    res = determinant(sylvester_s0(pair))
    if not is_constant_in_x(res):
        raise NotXFree(f"differential resultant depends on x: {res}")
    return res


def first_subresultant(pair: SpectralPair):
    """Return ``(phi0, phi1)`` so that the first subresultant is ``phi0 + phi1*D``."""
    s1 = sylvester_s1(pair)
    last = s1.ncols - 1
    phi0 = determinant(s1.drop_column(last - 1))
    phi1 = determinant(s1.drop_column(last))
    return phi0, phi1
