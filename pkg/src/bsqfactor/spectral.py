"""Spectral curve, curve points and the spectral factorization pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional

import sympy

from .boussinesq import CentralizerBasis, Potentials, centralizer_basis
from .curvepoly import GAMMA, LAMBDA, MU, MPoly3, eval_point, jacobian_row, squarefree_test_const
from .diffop import DiffOp, compose, right_divmod
from .errors import NotOnCurve, PreconditionViolated, ZeroDenominator
from .exactfield import RatFunc, UPoly, as_fraction
from .resultants import SpectralPair, diff_resultant, first_subresultant

__all__ = [
    "NOT_PRIME",
    "HEURISTICALLY_PRIME",
    "UNDETERMINED",
    "MSG_NOT_REDUCIBLE",
    "MSG_IN_Z",
    "MSG_NO_POINT",
    "SpectralCurve",
    "CurvePoint",
    "Parametrization",
    "Verification",
    "FactorizationResult",
    "Diagnostic",
    "spectral_pairs",
    "spectral_curve",
    "subresultants",
    "point_from_tau",
    "point_from_lambda",
    "points_at_lambda",
    "rational_roots",
    "univariate_at",
    "z_membership",
    "cofactor",
    "spf",
    "planar_factor",
    "verify_spectral_factorization",
]

NOT_PRIME = "NotPrime"
HEURISTICALLY_PRIME = "HeuristicallyPrime"
UNDETERMINED = "Undetermined"

MSG_NOT_REDUCIBLE = "L is not geometrically reducible"
MSG_IN_Z = "a spectral factorization of L-lambda0 cannot be obtained"
MSG_NO_POINT = "no rational point; supply a parametrization and tau0"


def _sign_fix(f: MPoly3, var: int, want_negative: bool) -> MPoly3:
    pure = [(e, c) for e, c in f.terms.items() if e[var] and sum(e) == e[var]]
    if not pure:
        return f
    e, c = max(pure, key=lambda t: t[0][var])
    negative = c.constant_value() < 0 if c.is_constant() else False
    return f if negative == want_negative else -f


@dataclass
class SpectralCurve:
    f1: MPoly3
    f2: MPoly3
    f3: MPoly3
    orders: tuple
    verdict: str
    certificate: Optional[MPoly3] = None

    def normalized(self):
        """Sign-normalized (f1, f2, f3) used in reports."""
        return (
            _sign_fix(self.f1, MU, True),
            _sign_fix(self.f2, GAMMA, True),
            _sign_fix(self.f3, GAMMA, False),
        )

    def generators(self):
        return (self.f1, self.f2, self.f3)


@dataclass(frozen=True)
class CurvePoint:
    lambda0: Fraction
    mu0: Fraction
    gamma0: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "lambda0", as_fraction(self.lambda0))
        object.__setattr__(self, "mu0", as_fraction(self.mu0))
        if self.gamma0 is not None:
            object.__setattr__(self, "gamma0", as_fraction(self.gamma0))

    def coords(self):
        return (self.lambda0, self.mu0, self.gamma0 if self.gamma0 is not None else Fraction(0))


@dataclass(frozen=True)
class Parametrization:
    """Polynomial curve parametrization; two components for a plane curve in (lambda, mu)."""

    components: tuple

    def __post_init__(self):
        comps = tuple(c if isinstance(c, UPoly) else UPoly.constant(c) for c in self.components)
        if len(comps) not in (2, 3):
            raise ValueError("a parametrization has two or three components")
        object.__setattr__(self, "components", comps)

    def substitute(self, f: MPoly3) -> UPoly:
        """``f`` composed with the parametrization, as a polynomial in the parameter."""
        comps = list(self.components) + [UPoly()] * (3 - len(self.components))
        powers = [[UPoly([1])] for _ in range(3)]
        acc = UPoly()
        for (i, j, k), c in f.terms.items():
            if not c.is_constant():
                raise PreconditionViolated("substitution needs x-free coefficients")
            term = UPoly([c.constant_value()])
            for v, e in enumerate((i, j, k)):
                while len(powers[v]) <= e:
                    powers[v].append(powers[v][-1] * comps[v])
                term = term * powers[v][e]
            acc = acc + term
        return acc

    def at(self, tau0):
        tau0 = as_fraction(tau0)
        return tuple(c(tau0) for c in self.components)


@dataclass
class Verification:
    factorization: bool
    divides_A1: bool
    divides_A2: Optional[bool]
    ratios_agree: bool
    details: dict = field(default_factory=dict)

    @property
    def ok(self):
        return (
            self.factorization
            and self.divides_A1
            and self.divides_A2 is not False
            and self.ratios_agree
        )

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {
            "factorization": self.factorization,
            "divides_A1": self.divides_A1,
            "divides_A2": self.divides_A2,
            "ratios_agree": self.ratios_agree,
        }


@dataclass
class FactorizationResult:
    ideal: Optional[SpectralCurve]
    point: CurvePoint
    phi0: RatFunc
    right_factor: DiffOp
    quotient: DiffOp
    verified: bool
    checks: Optional[Verification] = None
    basis: Optional[CentralizerBasis] = None
    candidates: tuple = ()
    caveats: tuple = ()
    planar_f1: Optional[MPoly3] = None


@dataclass
class Diagnostic:
    code: str
    message: str
    ideal: Optional[SpectralCurve] = None
    basis: Optional[CentralizerBasis] = None
    point: Optional[CurvePoint] = None
    reasons: tuple = ()


# -- curve -------------------------------------------------------------------

def spectral_pairs(L: DiffOp, basis: CentralizerBasis):
    return (
        SpectralPair(L, basis.A1, LAMBDA, MU),
        SpectralPair(L, basis.A2, LAMBDA, GAMMA),
        SpectralPair(basis.A1, basis.A2, MU, GAMMA),
    )


def spectral_curve(L: DiffOp, basis: CentralizerBasis) -> SpectralCurve:
    f1, f2, f3 = (diff_resultant(p) for p in spectral_pairs(L, basis))
    o1, o2 = basis.A1.order, basis.A2.order
    squarefree, cert = squarefree_test_const(f3)
    if cert is not None:
        cert = _sign_fix(cert, GAMMA, False)
    if not squarefree:
        verdict = NOT_PRIME
    elif gcd(o1, o2) == 1:
        verdict = HEURISTICALLY_PRIME
    else:
        verdict = UNDETERMINED
    return SpectralCurve(f1, f2, f3, (L.order, o1, o2), verdict, cert)


def subresultants(L: DiffOp, basis: CentralizerBasis):
    return tuple(first_subresultant(p) for p in spectral_pairs(L, basis))


# -- points ------------------------------------------------------------------

def _on_curve(curve: SpectralCurve, coords):
    return all(eval_point(f, coords).is_zero() for f in curve.generators())


def point_from_tau(param: Parametrization, tau0, curve: Optional[SpectralCurve] = None) -> CurvePoint:
    vals = param.at(tau0)
    point = CurvePoint(*vals)
    if curve is not None:
        if len(vals) != 3 or not _on_curve(curve, point.coords()):
            shown = ", ".join(str(v) for v in vals)
            raise NotOnCurve(f"parametrization at tau0={tau0} gives ({shown}), which is not on the curve")
    return point


def univariate_at(f: MPoly3, lambda0, var):
    """Coefficients (low degree first) of f(lambda0, .) in the variable ``var``."""
    coeffs = {}
    for e, c in f.terms.items():
        coeffs[e[var]] = coeffs.get(e[var], 0) + c.constant_value() * lambda0 ** e[LAMBDA]
    top = max(coeffs, default=-1)
    return [coeffs.get(k, Fraction(0)) for k in range(top + 1)]


def rational_roots(coeffs):
    """Sorted rational roots of a polynomial given low degree first; ``None`` for the zero polynomial."""
    if not any(coeffs):
        return None
    t = sympy.Symbol("t")
    poly = sympy.Poly(
        [sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], t, domain=sympy.QQ
    )
    roots = poly.ground_roots()
    return sorted(Fraction(int(r.p), int(r.q)) for r in roots)


def points_at_lambda(curve: SpectralCurve, lambda0):
    """All rational points of the curve above ``lambda0``, sorted by (mu0, gamma0)."""
    lambda0 = as_fraction(lambda0)
    mus = rational_roots(univariate_at(curve.f1, lambda0, MU))
    gams = rational_roots(univariate_at(curve.f2, lambda0, GAMMA))
    if mus is None or gams is None:
        raise PreconditionViolated("the curve contains a whole line above lambda0")
    out = []
    for m in mus:
        for g in gams:
            if curve.f3.substitute((lambda0, m, g)).is_zero():
                out.append(CurvePoint(lambda0, m, g))
    return out


def point_from_lambda(curve: SpectralCurve, lambda0) -> Optional[CurvePoint]:
    pts = points_at_lambda(curve, lambda0)
    return pts[0] if pts else None


def _rank(rows):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(rank + 1, len(rows)):
            t = rows[r][col] / rows[rank][col]
            rows[r] = [a - t * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def z_membership(P0: CurvePoint, curve: SpectralCurve, subres):
    """Decide whether P0 lies in the bad set (singular point or vanishing denominator)."""
    coords = P0.coords()
    reasons = []
    jac = [[eval_point(d, coords).constant_value() for d in jacobian_row(f)] for f in curve.generators()]
    if _rank(jac) < 2:
        reasons.append("singular point of the curve (Jacobian rank < 2)")
    for idx, (_, phi1) in enumerate(subres, start=1):
        if eval_point(phi1, coords).is_zero():
            reasons.append(f"phi_{idx},1 vanishes at the point")
    return bool(reasons), tuple(reasons)


# -- factorization -----------------------------------------------------------

def cofactor(phi0: RatFunc, u1: RatFunc) -> DiffOp:
    """Left cofactor N with ``N*(D + phi0) = L - lambda0`` for ``L = D^3 + u1*D + u0``."""
    return DiffOp([phi0 * phi0 - 2 * phi0.derive() + u1, -phi0, 1])


def _verify(L, point, phi0, ops, subres):
    coords = point.coords()
    right = DiffOp([phi0, 1])
    lhs = compose(cofactor(phi0, L.coeff(1)), right)
    target = L - DiffOp.scalar(point.lambda0)
    fact_ok = lhs == target
    divides = []
    for A, value in ops:
        divides.append(right_divmod(A - DiffOp.scalar(value), right)[1].is_zero())
    ratios = []
    for phi0_poly, phi1_poly in subres:
        den = eval_point(phi1_poly, coords)
        if den.is_zero():
            ratios.append(None)
        else:
            ratios.append(eval_point(phi0_poly, coords) / den)
    ratios_ok = all(r is not None and r == phi0 for r in ratios)
    return fact_ok, divides, ratios_ok, ratios


def verify_spectral_factorization(
    L: DiffOp,
    pot: Potentials,
    point: CurvePoint,
    phi0: RatFunc,
    basis: CentralizerBasis,
    subres=None,
) -> Verification:
    """Check the factorization identity, the gcd claim and agreement of the three ratios."""
    if subres is None:
        subres = subresultants(L, basis)
    fact_ok, (d1, d2), ratios_ok, ratios = _verify(
        L, point, phi0, [(basis.A1, point.mu0), (basis.A2, point.gamma0)], subres
    )
    return Verification(fact_ok, d1, d2, ratios_ok, {"ratios": ratios})


def _target_point(curve, target):
    if isinstance(target, CurvePoint):
        if not _on_curve(curve, target.coords()):
            raise NotOnCurve(f"{target} is not on the curve")
        return target, ()
    if "lambda0" in target and target["lambda0"] is not None:
        pts = points_at_lambda(curve, target["lambda0"])
        return (pts[0] if pts else None), tuple(pts)
    return point_from_tau(target["param"], target["tau0"], curve), ()


def spf(L: DiffOp, pot: Potentials, target, n_cap: int = 5):
    """Run the full spectral factorization pipeline.

    ``target`` is ``{"lambda0": value}``, ``{"param": Parametrization, "tau0": value}``
    or a :class:`CurvePoint`. Returns a :class:`FactorizationResult` or a
    :class:`Diagnostic`.
    """
    if L is None:
        L = pot.operator()
    elif L != pot.operator():
        raise PreconditionViolated("L does not match the potentials")
    basis = centralizer_basis(pot, n_cap)
    curve = spectral_curve(L, basis)
    if curve.verdict == NOT_PRIME:
        return Diagnostic("not_geometrically_reducible", MSG_NOT_REDUCIBLE, curve, basis)
    caveats = [f"primality verdict is {curve.verdict} (not a proof)"]
    subres = subresultants(L, basis)
    point, candidates = _target_point(curve, target)
    if point is None:
        return Diagnostic("no_rational_point", MSG_NO_POINT, curve, basis)
    in_z, reasons = z_membership(point, curve, subres)
    if in_z:
        return Diagnostic("in_Z", MSG_IN_Z, curve, basis, point, reasons)
    coords = point.coords()
    phi0 = eval_point(subres[0][0], coords) / eval_point(subres[0][1], coords)
    right = DiffOp([phi0, 1])
    quotient, rem = right_divmod(L - DiffOp.scalar(point.lambda0), right)
    checks = verify_spectral_factorization(L, pot, point, phi0, basis, subres)
    return FactorizationResult(
        ideal=curve,
        point=point,
        phi0=phi0,
        right_factor=right,
        quotient=quotient,
        verified=bool(checks) and rem.is_zero(),
        checks=checks,
        basis=basis,
        candidates=candidates,
        caveats=tuple(caveats),
    )


def planar_factor(L: DiffOp, A1: DiffOp, point) -> FactorizationResult:
    """Factor ``L - lambda0`` using only the pair (L, A1) and the plane curve f1 = 0.

    ``point`` is ``(lambda0, mu0)`` or ``(Parametrization, tau0)`` with a
    two-component parametrization.
    """
    pair = SpectralPair(L, A1, LAMBDA, MU)
    f1 = diff_resultant(pair)
    if isinstance(point[0], Parametrization):
        lam0, mu0 = point[0].at(point[1])[:2]
    else:
        lam0, mu0 = point
    p0 = CurvePoint(lam0, mu0)
    if not f1.substitute((p0.lambda0, p0.mu0, 0)).is_zero():
        raise NotOnCurve(f"({p0.lambda0}, {p0.mu0}) is not on f1 = 0")
    phi0_poly, phi1_poly = first_subresultant(pair)
    coords = p0.coords()
    den = eval_point(phi1_poly, coords)
    if den.is_zero():
        raise ZeroDenominator("phi_1,1 vanishes at the point")
    phi0 = eval_point(phi0_poly, coords) / den
    right = DiffOp([phi0, 1])
    quotient, rem = right_divmod(L - DiffOp.scalar(p0.lambda0), right)
    fact_ok, (d1,), ratios_ok, ratios = _verify(L, p0, phi0, [(A1, p0.mu0)], [(phi0_poly, phi1_poly)])
    checks = Verification(fact_ok, d1, None, ratios_ok, {"ratios": ratios})
    return FactorizationResult(
        ideal=None,
        point=p0,
        phi0=phi0,
        right_factor=right,
        quotient=quotient,
        verified=bool(checks) and rem.is_zero(),
        checks=checks,
        caveats=("plane curve f1 only; gamma is not used",),
        planar_f1=f1,
    )
