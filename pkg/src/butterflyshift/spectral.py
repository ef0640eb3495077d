"""Spectral radii of the induced operators and the convergence abscissa.

Because the induced operator applied to the indicator of its cylinder is
constant on that cylinder, its spectral radius is that constant, assembled
from the three series:

    lambda_[1]  = Sigma1 + Sigma2 e^(-alpha*beta - Z) / (1 - m Sigma2 Sigma3)
    lambda_[32] = Sigma2 Sigma3            (single pair of wings)
                = Sigma2 Sigma3 / (1 - Sigma2 Sigma3)   (doubled wings)

with m = 1 for variant A and m = 2 for variant B (a 2-string can be followed
by either wing family).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import ModelParams, wing_pressure
from .roots import bisect_log_offset
from .series import DEFAULT_TOL, SeriesEval, sigma1, sigma2, sigma3

GEOMETRIC_ONE_FAMILY = "GeometricOneFamily"
WING_COMPOSITION = "WingComposition"
PRESSURE_FLOOR = "PressureFloor"


def wing_multiplicity(params: ModelParams) -> int:
    """How many wing families an excursion from a 2-string can enter."""
    return 2 if params.variant == "B" else 1


@dataclass(frozen=True)
class SpectralValue:
    """Induced-operator spectral radius with its series constituents.

    ``defined`` is False when a constituent diverges or the geometric
    composition condition fails; the constituents stay available so callers
    can see which one failed.
    """

    value: float
    defined: bool
    sigma1: SeriesEval
    sigma2: SeriesEval
    sigma3: SeriesEval


@dataclass(frozen=True)
class AbscissaReport:
    Z_c: float
    binding: str
    converges_at_Zc: bool


def lambda_1(params: ModelParams, beta: float, Z: float,
             tol: float = DEFAULT_TOL) -> SpectralValue:
    """Spectral radius of the operator induced on the cylinder [1]."""
    s1 = sigma1(params, beta, Z, tol=tol)
    s2 = sigma2(params, beta, Z, tol=tol)
    s3 = sigma3(params, beta, Z, tol=tol)
    m = wing_multiplicity(params)
    if s1.divergent or s2.divergent or s3.divergent or m * s2.value * s3.value >= 1.0:
        return SpectralValue(math.nan, False, s1, s2, s3)
    value = s1.value + (s2.value * math.exp(-params.alpha * beta - Z)
                        / (1.0 - m * s2.value * s3.value))
    return SpectralValue(value, True, s1, s2, s3)


def lambda_32(params: ModelParams, beta: float, Z: float,
              tol: float = DEFAULT_TOL) -> SpectralValue:
    """Spectral radius of the operator induced on the cylinder [32].

    Variant A return words hold exactly one wing block, so the value is
    Sigma2*Sigma3; variant B words may weave through the mirrored wing any
    number of times first, giving the geometric composition.
    """
    s1 = SeriesEval(0.0, 0.0, 0, False)  # the 1-family plays no role here
    s2 = sigma2(params, beta, Z, tol=tol)
    s3 = sigma3(params, beta, Z, tol=tol)
    if s2.divergent or s3.divergent:
        return SpectralValue(math.nan, False, s1, s2, s3)
    z = s2.value * s3.value
    if params.variant == "A":
        return SpectralValue(z, True, s1, s2, s3)
    if z >= 1.0:
        return SpectralValue(math.nan, False, s1, s2, s3)
    return SpectralValue(z / (1.0 - z), True, s1, s2, s3)


def composition_value_at_floor(params: ModelParams, beta: float,
                               tol: float = DEFAULT_TOL) -> float:
    """m * Sigma2 * Sigma3 evaluated at Z = P34(beta) (+inf when divergent)."""
    z0 = wing_pressure(params, beta)
    s2 = sigma2(params, beta, z0, tol=tol)
    s3 = sigma3(params, beta, z0, tol=tol)
    if s2.divergent or s3.divergent:
        return math.inf
    return wing_multiplicity(params) * s2.value * s3.value


def composition_boundary(params: ModelParams, beta: float,
                         tol: float = DEFAULT_TOL) -> float | None:
    """The Z above P34(beta) where m*Sigma2*Sigma3 crosses 1, if it does.

    The map is strictly decreasing in Z, +inf-or-large at the floor for small
    beta and below 1 there once beta passes the small transition; in the
    second case None is returned.  A root closer to the floor than the solver
    can resolve (floor value within 1e-11 of 1) also counts as absent.
    """
    if composition_value_at_floor(params, beta, tol) <= 1.0 + 1e-11:
        return None
    z0 = wing_pressure(params, beta)

    def f(w: float) -> float:
        s2 = sigma2(params, beta, z0 + w, tol=tol)
        s3 = sigma3(params, beta, z0 + w, tol=tol)
        if s2.divergent or s3.divergent:
            return math.inf
        return wing_multiplicity(params) * s2.value * s3.value - 1.0

    return z0 + bisect_log_offset(f).offset


def abscissa(params: ModelParams, beta: float, tol: float = DEFAULT_TOL) -> AbscissaReport:
    """Infimum Z_c of the lambda_[1] convergence domain, with the active bound.

    Z_c = max(log L - alpha*beta, composition boundary, P34(beta)); the report
    names which of the three binds and whether the operator still converges at
    Z_c itself (it does only on the pressure floor past the small transition).
    """
    if beta < 0:
        raise ValueError("beta must be >= 0")
    geo = math.log(params.L) - params.alpha * beta
    floor = wing_pressure(params, beta)
    wing = composition_boundary(params, beta, tol)
    candidates = [(geo, GEOMETRIC_ONE_FAMILY), (floor, PRESSURE_FLOOR)]
    if wing is not None:
        candidates.append((wing, WING_COMPOSITION))
    z_c, binding = max(candidates, key=lambda c: c[0])
    if binding == PRESSURE_FLOOR:
        converges = composition_value_at_floor(params, beta, tol) < 1.0 and geo < floor
    else:
        # Sigma1 diverges at its own boundary; Sigma2*Sigma3 hits 1 at the
        # composition boundary: either way the operator diverges at Z_c.
        converges = False
    return AbscissaReport(z_c, binding, converges)
