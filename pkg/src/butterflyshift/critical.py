"""Transition parameters, pressure functions, and equilibrium-count reports.

The two critical inverse temperatures of either variant are roots of strictly
monotone maps:

  * beta_lo (the small transition) solves  m*Sigma2*Sigma3 = 1  at the wing
    pressure floor Z = P34(beta); at that floor the wing series is a zeta
    value, so each evaluation is closed-form fast.
  * beta_hi (the main transition) solves  lambda_[1] = 1  at Z = P34(beta).

Both roots can sit exponentially close to their lower bracket (the zeta pole
at eps*beta = 1, respectively beta_lo), hence the log-offset bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .model import ModelParams, wing_pressure
from .roots import bisect_log_offset
from .series import DEFAULT_TOL, dsigma_dZ, riemann_zeta
from .spectral import composition_boundary, composition_value_at_floor, lambda_1

BELOW_LO = "below_lo"
BETWEEN = "between"
ABOVE_HI = "above_hi"


@dataclass(frozen=True)
class CriticalSet:
    """The two transition parameters with solver diagnostics.

    beta_lo is beta_1 (variant A) or beta_2 (variant B); beta_hi is beta_c or
    beta_c'.  Residuals are the defining-equation values at the returned
    roots; brackets are the final bisection brackets.
    """

    beta_lo: float
    beta_hi: float
    residual_lo: float
    residual_hi: float
    bracket_lo: tuple[float, float]
    bracket_hi: tuple[float, float]


@dataclass(frozen=True)
class PressureSample:
    beta: float
    p34: float
    p_mid: float
    p_full: float
    ztilde: float | None
    regime: str


@dataclass(frozen=True)
class EquilibriumReport:
    """Outcome of the finite-return-time criterion at a transition point.

    ``weight_on_cylinder`` answers whether some equilibrium state gives
    positive weight to the inducing cylinder ([1] at beta_hi, [32] at
    beta_lo); it can only be True when the return-time expectation is finite,
    i.e. when eps*beta > 2.
    """

    beta_star: float
    eps_beta: float
    return_time_derivative_finite: bool
    count_lower_bound: int
    weight_on_cylinder: bool


@dataclass(frozen=True)
class GateauxReport:
    t_values: tuple[float, ...]
    symmetric_quotients: tuple[float, ...]
    asymmetric_quotients: tuple[float, ...]
    symmetric_slopes: tuple[float, float]   # (left, right)
    asymmetric_slopes: tuple[float, float]


def pressure_34(params: ModelParams, beta: float) -> float:
    """Wing pressure P34(beta) = gamma*beta + log(1 + e^(delta*beta)) >= log 2."""
    if beta < 0:
        raise ValueError("beta must be >= 0")
    return wing_pressure(params, beta)


def _beta_lo_map(params: ModelParams, beta: float, tol: float) -> float:
    return composition_value_at_floor(params, beta, tol) - 1.0


@lru_cache(maxsize=256)
def _critical_set_cached(params: ModelParams, tol: float) -> CriticalSet:
    eps = params.epsilon

    def f_lo(u: float) -> float:
        return _beta_lo_map(params, (1.0 + u) / eps, tol)

    lo = bisect_log_offset(f_lo)
    b_lo = (1.0 + lo.offset) / eps

    def f_hi(v: float) -> float:
        b = b_lo + v
        lam = lambda_1(params, b, wing_pressure(params, b), tol=tol)
        return (lam.value if lam.defined else math.inf) - 1.0

    hi = bisect_log_offset(f_hi, hi0=max(1.0, b_lo))
    b_hi = b_lo + hi.offset
    return CriticalSet(
        beta_lo=b_lo,
        beta_hi=b_hi,
        residual_lo=lo.residual,
        residual_hi=hi.residual,
        bracket_lo=((1.0 + lo.bracket[0]) / eps, (1.0 + lo.bracket[1]) / eps),
        bracket_hi=(b_lo + hi.bracket[0], b_lo + hi.bracket[1]),
    )


def critical_set(params: ModelParams, tol: float = DEFAULT_TOL) -> CriticalSet:
    """Both transition parameters of the system (cached per parameter set)."""
    return _critical_set_cached(params, tol)


def beta_lo(params: ModelParams, tol: float = DEFAULT_TOL) -> float:
    """beta_1 / beta_2: unique root of m*Sigma2*Sigma3(P34(beta), beta) = 1.

    The map is strictly decreasing, +inf below eps*beta = 1 (the zeta pole)
    and -> 0 as beta grows, so the root exists for every parameter set.
    """
    return critical_set(params, tol).beta_lo


def beta_hi(params: ModelParams, tol: float = DEFAULT_TOL) -> float:
    """beta_c / beta_c': unique root of lambda_[1](P34(beta), beta) = 1 above beta_lo."""
    return critical_set(params, tol).beta_hi


def ztilde_c(params: ModelParams, beta: float, tol: float = DEFAULT_TOL) -> float | None:
    """The Z > P34(beta) where m*Sigma2*Sigma3 = 1, or None past beta_lo.

    For beta below beta_lo this is the pressure of the subsystem without the
    1-family; approaching beta_lo it merges with P34.
    """
    if beta < 0:
        raise ValueError("beta must be >= 0")
    return composition_boundary(params, beta, tol)


def pressure_full(params: ModelParams, beta: float, tol: float = DEFAULT_TOL) -> float:
    """Pressure of the full system.

    Below beta_hi: the unique Z with lambda_[1] = 1, found by bisection on a
    decreasing map (divergent evaluations count as above 1).  At and above
    beta_hi the pressure sticks to the wing pressure P34.
    """
    if beta < 0:
        raise ValueError("beta must be >= 0")
    crit = critical_set(params, tol)
    if beta >= crit.beta_hi:
        return wing_pressure(params, beta)
    z0 = max(wing_pressure(params, beta), math.log(params.L) - params.alpha * beta)

    def f(w: float) -> float:
        lam = lambda_1(params, beta, z0 + w, tol=tol)
        return (lam.value if lam.defined else math.inf) - 1.0

    return z0 + bisect_log_offset(f).offset


def pressure_mid(params: ModelParams, beta: float, tol: float = DEFAULT_TOL) -> float:
    """Pressure of the subsystem without the 1-family.

    Equals the composition boundary Z~_c below beta_lo and P34 from beta_lo
    on; the two branches agree in the limit.
    """
    if beta < 0:
        raise ValueError("beta must be >= 0")
    zt = composition_boundary(params, beta, tol)
    return zt if zt is not None else wing_pressure(params, beta)


def pressure_sample(params: ModelParams, beta: float, tol: float = DEFAULT_TOL) -> PressureSample:
    """One beta-grid point with all three pressures and its regime label."""
    crit = critical_set(params, tol)
    zt = ztilde_c(params, beta, tol)
    if beta < crit.beta_lo:
        regime = BELOW_LO
    elif beta < crit.beta_hi:
        regime = BETWEEN
    else:
        regime = ABOVE_HI
    return PressureSample(
        beta=beta,
        p34=pressure_34(params, beta),
        p_mid=zt if zt is not None else wing_pressure(params, beta),
        p_full=pressure_full(params, beta, tol),
        ztilde=zt,
        regime=regime,
    )


def equilibrium_report(params: ModelParams, which: str,
                       beta_star: float | None = None,
                       tol: float = DEFAULT_TOL) -> EquilibriumReport:
    """Equilibrium count and cylinder-weight verdict at a transition.

    which is "at_beta_lo" or "at_beta_hi"; beta_star overrides the transition
    point (the derivative test is still run at the wing pressure floor).

    The decisive quantity is eps*beta at the transition: the Z-derivative of
    the wing series converges there iff eps*beta > 2, which is exactly the
    finite-return-time-expectation criterion for the induced equilibrium to
    open out to a global one.
    """
    if which not in ("at_beta_lo", "at_beta_hi"):
        raise ValueError(f"which must be 'at_beta_lo' or 'at_beta_hi', got {which!r}")
    crit = critical_set(params, tol)
    b = beta_star if beta_star is not None else (
        crit.beta_lo if which == "at_beta_lo" else crit.beta_hi)
    eps_beta = params.epsilon * b
    dS3 = dsigma_dZ("S3", params, b, wing_pressure(params, b), tol=tol)
    finite = not dS3.divergent
    if which == "at_beta_lo":
        if params.variant == "A":
            # the wing equilibrium always exists; a second one needs weight on
            # [32], i.e. eps*beta_1 > 2, which the zeta bound rules out
            count = 2 if finite else 1
            weight = finite
        else:
            # doubled wings: the two mirrored wing equilibria coexist
            count = 2
            weight = finite
    else:
        if params.variant == "A":
            count = 2 if finite else 1
            weight = finite
        else:
            count = 2
            weight = finite
    return EquilibriumReport(
        beta_star=b,
        eps_beta=eps_beta,
        return_time_derivative_finite=finite,
        count_lower_bound=count,
        weight_on_cylinder=weight,
    )


def zeta_at_beta_lo(params: ModelParams, tol: float = DEFAULT_TOL) -> float:
    """zeta(eps * beta_lo); the defining equation forces this above 5."""
    eb = params.epsilon * critical_set(params, tol).beta_lo
    return riemann_zeta(eb) if eb > 1.0 else math.inf


def _wing_pressure_gamma(params: ModelParams, beta: float, gamma: float) -> float:
    return wing_pressure(ModelParams(params.alpha, gamma, params.delta,
                                     params.epsilon, params.L, params.variant), beta)


def gateaux_check(params: ModelParams, beta: float, t_values: list[float],
                  tol: float = DEFAULT_TOL) -> GateauxReport:
    """One-sided difference quotients of the pressure under wing perturbations.

    Variant B above beta_hi only, where the pressure is the maximum of the two
    wing pressures.  The symmetric family shifts gamma on BOTH wings: the
    quotients agree from both sides (slope beta; the pressure stays analytic
    despite the two coexisting equilibria).  The asymmetric family shifts only
    the unprimed wing: the max of the two closed forms has one-sided slopes
    beta and 0, exhibiting why the symmetry requirement matters.
    """
    if params.variant != "B":
        raise ValueError("gateaux_check requires variant B")
    crit = critical_set(params, tol)
    if not beta > crit.beta_hi:
        raise ValueError(f"gateaux_check requires beta > beta_hi = {crit.beta_hi}")
    ts = tuple(t for t in t_values if t != 0.0)
    if not ts or not any(t > 0 for t in ts) or not any(t < 0 for t in ts):
        raise ValueError("t_values must contain nonzero values on both sides of 0")
    p0 = wing_pressure(params, beta)
    sym, asym = [], []
    for t in ts:
        # both wings shifted: still two mirrored wings with pressure P34(gamma+t)
        sym.append((_wing_pressure_gamma(params, beta, params.gamma + t) - p0) / t)
        # only the unprimed wing shifted: pressure is the larger wing pressure
        p_t = max(_wing_pressure_gamma(params, beta, params.gamma + t), p0)
        asym.append((p_t - p0) / t)
    def one_sided(qs):
        left = min(((t, q) for t, q in zip(ts, qs) if t < 0), key=lambda p: abs(p[0]))
        right = min(((t, q) for t, q in zip(ts, qs) if t > 0), key=lambda p: abs(p[0]))
        return (left[1], right[1])
    return GateauxReport(
        t_values=ts,
        symmetric_quotients=tuple(sym),
        asymmetric_quotients=tuple(asym),
        symmetric_slopes=one_sided(sym),
        asymmetric_slopes=one_sided(asym),
    )
