from fractions import Fraction

import pytest

from bsqfactor.boussinesq import centralizer_basis
from bsqfactor.curvepoly import GAMMA, LAMBDA, MU, MPoly3, eval_point, is_constant_in_x
from bsqfactor.diffop import DiffOp, operator_poly_eval, right_gcd
from bsqfactor.errors import NotXFree, OrderTooSmall
from bsqfactor.exactfield import RatFunc
from bsqfactor.resultants import (
    SpectralPair,
    diff_resultant,
    first_subresultant,
    sylvester_s0,
    sylvester_s1,
)
from bsqfactor.spectral import subresultants

from .conftest import nonplanar_A1, nonplanar_A2, nonplanar_potentials, planar_potentials

x = RatFunc.x()
D = DiffOp.d()
lam, mu, gam = MPoly3.lam(), MPoly3.mu(), MPoly3.gam()


def c(f):
    return MPoly3.const(f)


def up_to_sign(a, b):
    return a == b or a == -b


def nonplanar_pairs(h):
    L = nonplanar_potentials(h).operator()
    A1, A2 = nonplanar_A1(), nonplanar_A2()
    return (
        SpectralPair(L, A1, LAMBDA, MU),
        SpectralPair(L, A2, LAMBDA, GAMMA),
        SpectralPair(A1, A2, MU, GAMMA),
    )


def test_pair_validation():
    with pytest.raises(OrderTooSmall):
        SpectralPair(DiffOp([x]), D, LAMBDA, MU)
    with pytest.raises(ValueError):
        SpectralPair(D, D, MU, MU)
    assert SpectralPair(D, D, "lambda", "mu").ind_q == MU


def test_s0_shapes():
    p1, p2, p3 = nonplanar_pairs(0)
    assert sylvester_s0(p1).shape == (7, 7)
    assert sylvester_s0(p2).shape == (8, 8)
    assert sylvester_s0(p3).shape == (9, 9)
    small = sylvester_s0(SpectralPair(D, D, LAMBDA, MU))
    assert small.rows == [[c(1), -lam], [c(1), -mu]]


def test_s1_shapes():
    p1, p2, p3 = nonplanar_pairs(0)
    assert sylvester_s1(p1).shape == (5, 6)
    assert sylvester_s1(p2).shape == (6, 7)
    assert sylvester_s1(p3).shape == (7, 8)
    with pytest.raises(OrderTooSmall):
        sylvester_s1(SpectralPair(D, D, LAMBDA, MU))


@pytest.mark.parametrize("h", [0, 2, Fraction(-1, 3)])
def test_nonplanar_resultants(h):
    p1, p2, p3 = nonplanar_pairs(h)
    f1, f2, f3 = diff_resultant(p1), diff_resultant(p2), diff_resultant(p3)
    assert up_to_sign(f1, -(mu**3) + (lam - h) ** 4)
    assert up_to_sign(f2, -(gam**3) - (c(h) - lam) ** 5)
    assert up_to_sign(f3, gam**4 - mu**5)
    assert f1.degree_in(LAMBDA) == 4 and f1.degree_in(MU) == 3
    assert f2.degree_in(LAMBDA) == 5 and f2.degree_in(GAMMA) == 3


def test_planar_resultant_f1():
    h = 3
    pot = planar_potentials(h)
    basis = centralizer_basis(pot)
    f1 = diff_resultant(SpectralPair(pot.operator(), basis.A1, LAMBDA, MU))
    assert up_to_sign(f1, -(mu**3) + (lam - h) ** 4)


@pytest.mark.parametrize("h", [0, 2])
def test_nonplanar_subresultants(h):
    p1, _, p3 = nonplanar_pairs(h)
    l = lam - h
    phi10, phi11 = first_subresultant(p1)
    assert up_to_sign(phi11, l**2 - c(2 / x**2) * mu + c(4 / x**3) * l)
    phi30, phi31 = first_subresultant(p3)
    assert up_to_sign(phi31, mu**3 - c(2 / x**2) * gam**2 + c(4 / x**3) * gam * mu)


def test_planar_subresultants():
    pot = planar_potentials(0)
    basis = centralizer_basis(pot)
    phi0, phi1 = first_subresultant(SpectralPair(pot.operator(), basis.A1, LAMBDA, MU))
    hl = -lam
    reference_phi10 = mu * hl - c(5 / x**3) * mu - c(20 / x**4) * hl - c(300 / x**7)
    assert up_to_sign(phi0, reference_phi10)
    # the reference form has a stray 1/x on the first term; the determinant has none
    assert up_to_sign(phi1, hl**2 - c(5 / x**2) * mu - c(100 / x**6))


def test_not_x_free_is_reported():
    # a non-commuting pair has an x-dependent resultant
    with pytest.raises(NotXFree):
        diff_resultant(SpectralPair(DiffOp([x, 0, 1]), D, LAMBDA, MU))


def test_burchnall_chaundy_vanishing():
    L = nonplanar_potentials(0).operator()
    A1, A2 = nonplanar_A1(), nonplanar_A2()
    for pair in nonplanar_pairs(0):
        f = diff_resultant(pair)
        assert is_constant_in_x(f)
        assert operator_poly_eval(f, L, A1, A2).is_zero()


def along_curve(h, taus):
    for t in taus:
        t = Fraction(t)
        yield t, (t**3 + h, t**4, t**5)


@pytest.mark.parametrize("h", [0, 1, -2])
def test_subresultant_agrees_with_euclid(h):
    L = nonplanar_potentials(h).operator()
    A1, A2 = nonplanar_A1(), nonplanar_A2()
    subs = [first_subresultant(p) for p in nonplanar_pairs(h)]
    taus = [1, 2, -1, 3, Fraction(1, 2), Fraction(-2, 3), 5]
    for t, pt in along_curve(h, taus):
        ratios = []
        for phi0, phi1 in subs:
            den = eval_point(phi1, pt)
            assert not den.is_zero()
            ratios.append(eval_point(phi0, pt) / den)
        assert ratios[0] == ratios[1] == ratios[2]
        g = right_gcd(L - DiffOp.scalar(pt[0]), A1 - DiffOp.scalar(pt[1]))
        assert g == DiffOp([ratios[0], 1])


def test_subresultants_from_basis_match_pairs():
    pot = nonplanar_potentials(2)
    basis = centralizer_basis(pot)
    assert subresultants(pot.operator(), basis) == tuple(
        first_subresultant(p) for p in nonplanar_pairs(2)
    )
