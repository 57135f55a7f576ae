from fractions import Fraction
from functools import lru_cache
from math import comb

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from bsqfactor.curvepoly import (
    GAMMA,
    LAMBDA,
    MU,
    MPoly3,
    PolyMatrix,
    determinant,
    eval_point,
    is_constant_in_x,
    jacobian_row,
    mpoly_arith,
    mpoly_exact_div,
    squarefree_test_const,
)
from bsqfactor.errors import InexactDivision, NonSquare, PreconditionViolated
from bsqfactor.exactfield import RatFunc

from .conftest import small_rat

x = RatFunc.x()
lam, mu, gam = MPoly3.lam(), MPoly3.mu(), MPoly3.gam()
ONE = MPoly3.const(1)
ZERO = MPoly3()


def laplace(rows):
    """Cofactor expansion along the first row, memoized on the remaining columns."""
    n = len(rows)

    @lru_cache(maxsize=None)
    def minor(r, cols):
        if r == n:
            return ONE
        acc = ZERO
        for pos, j in enumerate(cols):
            a = rows[r][j]
            if a.is_zero():
                continue
            sub = minor(r + 1, cols[:pos] + cols[pos + 1:])
            term = a * sub
            acc = acc - term if pos % 2 else acc + term
        return acc

    return minor(0, tuple(range(n)))


coeffs = st.one_of(small_rat.map(RatFunc), small_rat.map(lambda c: RatFunc(c) / x))


@st.composite
def mpolys(draw, max_terms=2):
    exps = st.tuples(st.integers(0, 1), st.integers(0, 1), st.integers(0, 1))
    return MPoly3(draw(st.dictionaries(exps, coeffs, max_size=max_terms)))


@st.composite
def matrices(draw, max_size=6):
    n = draw(st.integers(1, max_size))
    return [[draw(mpolys()) for _ in range(n)] for _ in range(n)]


def test_arith_examples():
    assert mpoly_arith(mu - gam, mu + gam, "mul") == mu**2 - gam**2
    assert mpoly_exact_div(mu**2 - gam**2, mu - gam) == mu + gam
    h = Fraction(5, 3)
    a = (lam - h) ** 2
    expected = sum(
        (MPoly3.const(comb(4, k) * (-h) ** (4 - k)) * lam**k for k in range(5)), ZERO
    )
    assert mpoly_arith(a, a, "mul") == expected
    with pytest.raises(InexactDivision):
        mpoly_exact_div(mu**2 + gam, mu - gam)


def test_determinant_examples():
    ident = [[ONE if i == j else ZERO for j in range(5)] for i in range(5)]
    assert determinant(PolyMatrix(ident)) == ONE
    rows = [[lam, mu, gam], [ONE, lam, mu], [lam, mu, gam]]
    assert determinant(PolyMatrix(rows)).is_zero()
    got = determinant(PolyMatrix([[lam, mu], [gam, MPoly3.const(1 / x)]]))
    assert got == lam * MPoly3.const(1 / x) - mu * gam
    with pytest.raises(NonSquare):
        determinant(PolyMatrix([[lam, mu]]))


def test_eval_and_jacobian_examples():
    h = Fraction(2)
    f1 = -(mu**3) + (lam - h) ** 4
    assert eval_point(f1, (h, 0, 7)).is_zero()
    assert jacobian_row(lam) == (ONE, ZERO, ZERO)
    assert eval_point(gam**4 - mu**5, (Fraction(-3), 1, 1)).is_zero()


def test_is_constant_in_x_examples():
    assert is_constant_in_x(-(mu**3) + (lam - 2) ** 4)
    assert not is_constant_in_x(lam * MPoly3.const(1 / x))
    assert is_constant_in_x(ZERO)


def test_squarefree_examples():
    assert squarefree_test_const(gam**4 - mu**5)[0]
    ok, cert = squarefree_test_const((gam - mu**2) ** 4)
    assert not ok and cert in (gam - mu**2, mu**2 - gam)
    assert squarefree_test_const(mu * gam)[0]
    with pytest.raises(PreconditionViolated):
        squarefree_test_const(mu * MPoly3.const(1 / x))


def test_rendering_is_grlex():
    assert (-(mu**3) + lam**4).to_str() == "lambda^4-mu^3"


@settings(max_examples=60)
@given(matrices())
def test_determinant_matches_cofactor_expansion(rows):
    assert determinant(PolyMatrix(rows)) == laplace(rows)


@settings(max_examples=60)
@given(matrices(max_size=5), st.data())
def test_determinant_alternating_and_linear(rows, data):
    n = len(rows)
    d = determinant(PolyMatrix(rows))
    if n >= 2:
        i, j = data.draw(st.permutations(range(n)))[:2]
        swapped = [r[:] for r in rows]
        swapped[i], swapped[j] = swapped[j], swapped[i]
        assert determinant(PolyMatrix(swapped)) == -d
    r = data.draw(st.integers(0, n - 1))
    other = [data.draw(mpolys()) for _ in range(n)]
    s = data.draw(mpolys())
    mixed = [row[:] for row in rows]
    mixed[r] = [a + s * b for a, b in zip(rows[r], other)]
    alt = [row[:] for row in rows]
    alt[r] = other
    assert determinant(PolyMatrix(mixed)) == d + s * determinant(PolyMatrix(alt))


points = st.tuples(small_rat, small_rat, small_rat)


@given(mpolys(4), mpolys(4), points)
def test_eval_is_ring_homomorphism(a, b, p):
    assert eval_point(a + b, p) == eval_point(a, p) + eval_point(b, p)
    assert eval_point(a * b, p) == eval_point(a, p) * eval_point(b, p)


@given(mpolys(4), mpolys(4))
def test_mixed_partials_commute(a, b):
    f = a * b + a**2
    fl, fm, fg = jacobian_row(f)
    assert jacobian_row(fl)[MU] == jacobian_row(fm)[LAMBDA]
    assert jacobian_row(fm)[GAMMA] == jacobian_row(fg)[MU]


M, G = sympy.symbols("mu gamma")


@st.composite
def mu_gamma_polys(draw):
    exps = st.tuples(st.just(0), st.integers(0, 2), st.integers(0, 2))
    ints = st.integers(-3, 3).map(RatFunc)
    return MPoly3(draw(st.dictionaries(exps, ints, min_size=1, max_size=3)))


@settings(max_examples=80)
@given(mu_gamma_polys(), mu_gamma_polys(), st.integers(1, 3))
def test_squarefree_agrees_with_sympy(a, b, k):
    f = a * b**k
    if f.is_zero():
        return
    expr = sum(c.constant_value() * M**j * G**kk for (_, j, kk), c in f.terms.items())
    _, factors = sympy.sqf_list(sympy.Poly(expr, M, G))
    expected = all(m == 1 for _, m in factors)
    ok, cert = squarefree_test_const(f)
    assert ok == expected
    if not ok:
        # the witness divides f at least twice
        assert mpoly_exact_div(f, cert * cert) is not None
