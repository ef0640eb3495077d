"""Bisection on certified-monotone maps.

All implicit equations in this package (the composition boundary, beta_1,
beta_c, the pressure itself) are roots of maps proved monotone, so bisection
is the whole story.  Roots routinely sit a sub-double-precision distance above
a known floor (a pole or a convergence boundary), so the search runs in the
logarithm of the offset from that floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

OFFSET_FLOOR = 1e-300


@dataclass(frozen=True)
class RootResult:
    offset: float          # root position above the floor
    residual: float        # f at the returned offset
    bracket: tuple[float, float]


def bisect_log_offset(
    f: Callable[[float], float],
    hi0: float = 1.0,
    floor: float = OFFSET_FLOOR,
    hi_cap: float = 1e9,
    max_iter: int = 240,
) -> RootResult:
    """Root of a decreasing map f(w) on w > 0, bisected in log(w).

    f may return +inf to signal "still above the root" (e.g. a divergent
    series left of a convergence boundary).  If f is already <= 0 at the
    floor the root is numerically indistinguishable from the floor and the
    floor is returned.
    """
    f_floor = f(floor)
    if f_floor <= 0.0:
        return RootResult(floor, f_floor, (floor, floor))
    hi = hi0
    while f(hi) > 0.0:
        hi *= 4.0
        if hi > hi_cap:
            raise ArithmeticError("no sign change up to the bracket cap")
    t_lo, t_hi = math.log(floor), math.log(hi)
    for _ in range(max_iter):
        t_mid = 0.5 * (t_lo + t_hi)
        if f(math.exp(t_mid)) > 0.0:
            t_lo = t_mid
        else:
            t_hi = t_mid
        if t_hi - t_lo < 1e-15:
            break
    w = math.exp(0.5 * (t_lo + t_hi))
    return RootResult(w, f(w), (math.exp(t_lo), math.exp(t_hi)))
