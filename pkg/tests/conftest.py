from fractions import Fraction

import pytest
import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bsqfactor.boussinesq import Potentials
from bsqfactor.diffop import DiffOp
from bsqfactor.exactfield import RatFunc, UPoly

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

X = sympy.Symbol("x")
x = RatFunc.x()


# -- sympy bridges (independent oracles) -------------------------------------

def upoly_to_sympy(p: UPoly, var=X):
    return sum(sympy.Rational(c.numerator, c.denominator) * var**k for k, c in enumerate(p.coeffs))


def to_sympy(f: RatFunc, var=X):
    return upoly_to_sympy(f.num, var) / upoly_to_sympy(f.den, var)


def from_sympy(expr, var=X) -> RatFunc:
    num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
    pn = sympy.Poly(num, var).all_coeffs()[::-1]
    pd = sympy.Poly(den, var).all_coeffs()[::-1]
    as_frac = lambda c: Fraction(int(c.p), int(c.q))
    return RatFunc(UPoly([as_frac(c) for c in pn]), UPoly([as_frac(c) for c in pd]))


def apply_op(op: DiffOp, expr, var=X):
    """Apply an operator to a sympy expression: sum a_k * d^k expr / dx^k."""
    return sum(to_sympy(c, var) * sympy.diff(expr, var, k) for k, c in enumerate(op.coeffs))


# -- strategies --------------------------------------------------------------

small_rat = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
nonzero_rat = small_rat.filter(lambda q: q != 0)


@st.composite
def upolys(draw, max_degree=3):
    return UPoly(draw(st.lists(small_rat, max_size=max_degree + 1)))


@st.composite
def ratfuncs(draw, max_degree=2):
    num = draw(upolys(max_degree))
    den = draw(upolys(max_degree))
    if den.is_zero():
        den = UPoly([1])
    return RatFunc(num, den)


@st.composite
def diffops(draw, max_order=3, max_degree=2):
    return DiffOp(draw(st.lists(ratfuncs(max_degree), max_size=max_order + 1)))


@st.composite
def nonzero_diffops(draw, max_order=3, max_degree=2):
    op = draw(diffops(max_order, max_degree))
    if op.is_zero():
        op = DiffOp([draw(ratfuncs(max_degree).filter(lambda f: not f.is_zero()))])
    return op


# -- operator families used across the suite ---------------------------------

def nonplanar_potentials(h):
    """L = D^3 - 6/x^2 D + 12/x^3 + h (non-planar spectral curve)."""
    return Potentials.from_q(6 / x**3 + h, -6 / x**2)


def planar_potentials(h):
    """L = D^3 - 15/x^2 D + 15/x^3 + h (planar spectral curve)."""
    return Potentials.from_q(RatFunc(h), -15 / x**2)


def nonplanar_A1():
    return DiffOp([-24 / x**4, 24 / x**3, -8 / x**2, 0, 1])


def nonplanar_A2():
    return DiffOp([80 / x**5, -80 / x**4, 40 / x**3, -10 / x**2, 0, 1])


def nonplanar_phi0(tau):
    """Closed form of the right-factor coefficient along (t^3+h, t^4, t^5)."""
    t = Fraction(tau)
    num = UPoly([4, -4 * t, 2 * t**2, -t**3])
    den = UPoly([0, 2, -2 * t, t**2])
    return RatFunc(num, den)


def planar_phi0(tau):
    t = Fraction(tau)
    num = UPoly([30, 30 * t, 15 * t**2, 5 * t**3, t**4])
    den = UPoly([0, 10, 10 * t, 5 * t**2, t**3])
    return RatFunc(num, den)


@pytest.fixture
def L_nonplanar_h0():
    return nonplanar_potentials(0).operator()
