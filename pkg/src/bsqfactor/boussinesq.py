"""Boussinesq hierarchy at concrete rational potentials.

``L = D^3 + q1*D + q1'/2 + q0``. The recursion produces pairs (f, g) per
level and branch, from which the operators ``P_m`` (m = 3n+i) and the
stationary residuals are assembled. Constant vectors are flat: entry j
multiplies ``P_{m_j}`` where ``m_j`` runs over 1, 2, 4, 5, 7, 8, ...
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .diffop import DiffOp, commutator, compose
from .errors import BadOrder, LogarithmicPart, NoCentralizerFound
from .exactfield import RatFunc, UPoly, rational_antiderivative

__all__ = [
    "Potentials",
    "BsqLevel",
    "CentralizerBasis",
    "order_sequence",
    "bsq_recursion",
    "assemble_P",
    "bsq_residual",
    "solve_constants",
    "centralizer_basis",
]

_ZERO = RatFunc()
_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Potentials:
    q0: RatFunc
    q1: RatFunc
    u0: RatFunc
    u1: RatFunc

    @classmethod
    def from_q(cls, q0, q1):
        q0, q1 = RatFunc.coerce(q0), RatFunc.coerce(q1)
        return cls(q0, q1, q1.derive() * _HALF + q0, q1)

    @classmethod
    def from_u(cls, u0, u1):
        u0, u1 = RatFunc.coerce(u0), RatFunc.coerce(u1)
        return cls(u0 - u1.derive() * _HALF, u1, u0, u1)

    def operator(self) -> DiffOp:
        """The third order operator ``D^3 + u1*D + u0``."""
        return DiffOp([self.u0, self.u1, 0, 1])


@dataclass(frozen=True)
class BsqLevel:
    n: int
    i: int
    f: RatFunc
    g: RatFunc


@dataclass
class CentralizerBasis:
    A1: DiffOp
    A2: DiffOp
    n1: int
    n2: int
    c1: tuple
    c2: tuple


def order_sequence(below):
    """Orders 1, 2, 4, 5, ... strictly below ``below``."""
    return [m for m in range(1, below) if m % 3]


def _split(m):
    if m % 3 == 0:
        raise BadOrder(f"order {m} is divisible by 3")
    if m < 1:
        raise BadOrder(f"order {m} is not positive")
    return divmod(m, 3)


# -- constants for constant potentials -------------------------------------
#
# With q1 = k and q0 = h constant every P_m has constant coefficients and
# equals the polynomial part of (z^3 + k z + h)^(m/3). That fixes the value
# of f_{n,i}, g_{n,i} at constant potentials, hence the limit at infinity of
# the same quantities for potentials that stay finite there.

def _binom(a: Fraction, j: int) -> Fraction:
    out = Fraction(1)
    for t in range(j):
        out = out * (a - t) / (t + 1)
    return out


def _power_part(m, k, h):
    """Polynomial part of (z^3 + k z + h)^(m/3) as a dict power -> coefficient."""
    if m <= 0:
        return {}
    a = Fraction(m, 3)
    # w = k z^-2 + h z^-3; only powers with 2p + 3r <= m survive
    out = {}
    for j in range(m // 2 + 1):
        cj = _binom(a, j)
        if cj == 0:
            continue
        for p in range(j + 1):
            r = j - p
            e = m - 2 * p - 3 * r
            if e < 0:
                continue
            coef = cj * _binom(Fraction(j), p) * Fraction(k) ** p * Fraction(h) ** r
            if coef:
                out[e] = out.get(e, 0) + coef
    return out


def _constant_level(n, i, k, h):
    m = 3 * n + i
    top = _power_part(m, k, h)
    low = _power_part(m - 3, k, h)
    diff = dict(top)
    for e, c in low.items():
        for e2, c2 in ((3, 1), (1, k), (0, h)):
            diff[e + e2] = diff.get(e + e2, 0) - c * c2
    return Fraction(diff.get(2, 0)), Fraction(diff.get(1, 0))


# -- recursion ---------------------------------------------------------------

def _derivs(f, k):
    out = [f]
    for _ in range(k):
        out.append(out[-1].derive())
    return out


def _step(pot: Potentials, F: RatFunc, G: RatFunc):
    q0, q1 = pot.q0, pot.q1
    Q0 = _derivs(q0, 1)
    Q1 = _derivs(q1, 3)
    Fd = _derivs(F, 5)
    Gd = _derivs(G, 3)
    third = Fraction(1, 3)
    rhs_f = (2 * Gd[3] + 2 * q1 * Gd[1] + Q1[1] * G + 3 * q0 * Fd[1] + 2 * Q0[1] * F) * third
    rhs_g = (
        3 * q0 * Gd[1]
        + Q0[1] * G
        - Fraction(1, 6) * Fd[5]
        - Fraction(5, 6) * q1 * Fd[3]
        - Fraction(5, 4) * Q1[1] * Fd[2]
        - (Fraction(3, 4) * Q1[2] + Fraction(2, 3) * q1 * q1) * Fd[1]
        - (Fraction(1, 6) * Q1[3] + Fraction(2, 3) * q1 * Q1[1]) * F
    ) * third
    return rhs_f, rhs_g


def _integrate(rhs, target, n, i):
    try:
        out = rational_antiderivative(rhs)
    except LogarithmicPart as exc:
        raise LogarithmicPart(f"level ({n},{i}): {exc}", level=(n, i)) from None
    if target is not None:
        at_inf = out.value_at_infinity()
        if at_inf is not None and at_inf != target:
            out = out + (target - at_inf)
    return out


class _Hierarchy:
    """Lazily extended table of levels for one set of potentials."""

    def __init__(self, pot: Potentials):
        self.pot = pot
        k = pot.q1.value_at_infinity()
        h = pot.q0.value_at_infinity()
        self.limits = None if k is None or h is None else (k, h)
        self.levels = {
            (0, 1): BsqLevel(0, 1, _ZERO, RatFunc(1)),
            (0, 2): BsqLevel(0, 2, RatFunc(1), _ZERO),
        }
        self._ops = {}

    def level(self, n, i):
        key = (n, i)
        if key not in self.levels:
            prev = self.level(n - 1, i)
            rhs_f, rhs_g = _step(self.pot, prev.f, prev.g)
            tf = tg = None
            if self.limits is not None:
                tf, tg = _constant_level(n, i, *self.limits)
            f = _integrate(rhs_f, tf, n, i)
            g = _integrate(rhs_g, tg, n, i)
            self.levels[key] = BsqLevel(n, i, f, g)
        return self.levels[key]

    def L_ni(self, n, i) -> DiffOp:
        lv = self.level(n, i)
        f1, f2 = _derivs(lv.f, 2)[1:]
        c0 = f2 * Fraction(1, 6) - lv.g.derive() + Fraction(2, 3) * self.pot.q1 * lv.f
        return DiffOp([c0, lv.g - f1 * _HALF, lv.f])

    def P0(self, m) -> DiffOp:
        """Zero-constant operator P_m."""
        n, i = _split(m)
        if m not in self._ops:
            op = self.L_ni(n, i)
            if n > 0:
                op = compose(self.P0(m - 3), self.pot.operator()) + op
            self._ops[m] = op
        return self._ops[m]

    def residual0(self, m):
        n, i = _split(m)
        lv = self.level(n + 1, i)
        return 3 * lv.f.derive(), 3 * lv.g.derive()


_CACHE = {}


def _hier(pot: Potentials) -> _Hierarchy:
    h = _CACHE.get(pot)
    if h is None:
        if len(_CACHE) > 64:
            _CACHE.clear()
        h = _CACHE[pot] = _Hierarchy(pot)
    return h


def bsq_recursion(pot: Potentials, n_max: int):
    """Levels ``0..n_max`` of both branches, keyed by ``(n, i)``."""
    hier = _hier(pot)
    return {(n, i): hier.level(n, i) for n in range(n_max + 1) for i in (1, 2)}


def _check_consts(m, c):
    lower = order_sequence(m)
    c = tuple(Fraction(v) for v in c)
    if len(c) != len(lower):
        raise ValueError(f"order {m} needs {len(lower)} constants, got {len(c)}")
    return lower, c


def assemble_P(m: int, pot: Potentials, c=None) -> DiffOp:
    _split(m)
    hier = _hier(pot)
    if c is None:
        c = (0,) * len(order_sequence(m))
    lower, c = _check_consts(m, c)
    op = hier.P0(m)
    for mj, cj in zip(lower, c):
        if cj:
            op = op + hier.P0(mj) * RatFunc(cj)
    return op


def bsq_residual(n: int, i: int, pot: Potentials, c=()):
    m = 3 * n + i
    hier = _hier(pot)
    lower, c = _check_consts(m, c)
    r1, r2 = hier.residual0(m)
    for mj, cj in zip(lower, c):
        if cj:
            s1, s2 = hier.residual0(mj)
            r1, r2 = r1 + s1 * cj, r2 + s2 * cj
    return r1, r2


def _rref_solve(rows, rhs, nvars):
    """Exact solution of ``rows * c = rhs`` with free variables zero, or ``None``."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(nvars):
        piv = next((k for k in range(r, len(aug)) if aug[k][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [v * inv for v in aug[r]]
        for k in range(len(aug)):
            if k != r and aug[k][col] != 0:
                t = aug[k][col]
                aug[k] = [a - t * b for a, b in zip(aug[k], aug[r])]
        pivots.append(col)
        r += 1
    if any(row[-1] != 0 for row in aug[r:]):
        return None
    sol = [Fraction(0)] * nvars
    for k, col in enumerate(pivots):
        sol[col] = aug[k][-1]
    return tuple(sol)


def _lcm(a: UPoly, b: UPoly) -> UPoly:
    return (a * b).exact_div(UPoly.gcd(a, b)).monic()


def solve_constants(n: int, i: int, pot: Potentials):
    """Constants making the level-(n, i) residual vanish, or ``None``."""
    m = 3 * n + i
    hier = _hier(pot)
    lower = order_sequence(m)
    base = hier.residual0(m)
    cols = [hier.residual0(mj) for mj in lower]
    rows, rhs = [], []
    for comp in range(2):
        funcs = [base[comp]] + [col[comp] for col in cols]
        den = UPoly([1])
        for fn in funcs:
            den = _lcm(den, fn.den)
        nums = [(fn.num * den).exact_div(fn.den) for fn in funcs]
        top = max(p.degree for p in nums)
        for e in range(top + 1):
            rows.append([p.coeffs[e] if e <= p.degree else Fraction(0) for p in nums[1:]])
            rhs.append(-(nums[0].coeffs[e] if e <= nums[0].degree else Fraction(0)))
    sol = _rref_solve(rows, rhs, len(lower))
    if sol is None:
        return None
    r1, r2 = bsq_residual(n, i, pot, sol)
    if not (r1.is_zero() and r2.is_zero()):  # pragma: no cover - solver consistency
        return None
    return sol


def centralizer_basis(pot: Potentials, n_cap: int = 5) -> CentralizerBasis:
    """Least-level commuting operators of orders 3n+1 and 3n+2 within the cap."""
    L = pot.operator()
    found = {}
    for i in (1, 2):
        for n in range(n_cap + 1):
            c = solve_constants(n, i, pot)
            if c is None:
                continue
            A = assemble_P(3 * n + i, pot, c)
            if not commutator(A, L).is_zero():  # pragma: no cover - equivalence guard
                continue
            found[i] = (A, n, c)
            break
        else:
            raise NoCentralizerFound(
                f"no Boussinesq operator of order 3n+{i} with n <= {n_cap} commutes with L",
                branch=i,
                cap=n_cap,
            )
    (A1, n1, c1), (A2, n2, c2) = found[1], found[2]
    return CentralizerBasis(A1, A2, n1, n2, c1, c2)
