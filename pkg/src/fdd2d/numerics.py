"""Bracketing and bisection for scalar monotone equations.

Every non-linear equation in the package (the rate-balance roots, the CU
power equation of the outage bound) goes through :func:`bisect`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import NoSignChange, NonFinite

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 200


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError(f"interval bounds must be finite, got [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise ValueError(f"interval needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi


def _eval(f: Callable[[float], float], x: float) -> float:
    y = float(f(x))
    if not math.isfinite(y):
        raise NonFinite(f"f({x!r}) = {y!r}")
    return y


def bisect(
    f: Callable[[float], float],
    bracket: Interval,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> float:
    """Root of ``f`` inside ``bracket`` by bisection.

    ``tol`` is relative: iteration stops once ``hi - lo <= tol * max(|lo|, |hi|)``,
    when ``f`` hits exactly zero, or when the midpoint can no longer be
    represented between the endpoints. An endpoint with ``f == 0`` is returned
    as is.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = bracket.lo, bracket.hi
    flo = _eval(f, lo)
    if flo == 0.0:
        return lo
    fhi = _eval(f, hi)
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoSignChange(f"f({lo!r})={flo!r} and f({hi!r})={fhi!r} share a sign")

    neg_lo = flo < 0
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = _eval(f, mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == neg_lo:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * max(abs(lo), abs(hi)):
            break
    return 0.5 * (lo + hi)


def bracket_upward(
    f: Callable[[float], float],
    start: float,
    growth: float = 2.0,
    limit: float = 1e12,
) -> Optional[Interval]:
    """First geometric cell ``[a, a*growth]`` in ``[start, limit]`` where ``f``
    changes sign (or touches zero); ``None`` if there is none.

    The last cell is truncated at ``limit``.
    """
    if not start > 0:
        raise ValueError("start must be positive")
    if not growth > 1:
        raise ValueError("growth must exceed 1")
    if limit < start:
        raise ValueError("limit must be >= start")

    a = start
    fa = _eval(f, a)
    while a < limit:
        b = min(a * growth, limit)
        fb = _eval(f, b)
        if fa == 0.0 or fb == 0.0 or (fa > 0) != (fb > 0):
            return Interval(a, b)
        a, fa = b, fb
    return None
