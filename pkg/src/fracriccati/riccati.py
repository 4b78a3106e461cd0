"""Closed-form solutions of the delta-modified Riccati equation

    u'(x) + a u(x)^2 = b x^(1-delta) / Gamma(2-delta),  a != 0,

obtained through the associated linear equation y'' = (ab/Gamma(2-delta))
x^(1-delta) y and its Bessel solutions y = sqrt(x) B_n(q x^r).  The two
distinguished branches are ratios of neighbouring-order Bessel functions:
first kind (J or I) for branch 1, second kind (Y or K) for branch 2.  The
regime is fixed by sign(a*b): oscillatory (J/Y) for a*b < 0, modified (I/K)
for a*b > 0; b = 0 degenerates and is refused here.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import DegenerateRegimeError
from .fracops import _delta_value, frac_const
from . import specfun

__all__ = [
    "Regime",
    "RiccatiParams",
    "BesselMap",
    "SolutionEval",
    "map_params",
    "eval_u1",
    "eval_u2",
    "eval_y_branch",
    "residual",
    "find_poles",
]

OSCILLATORY = "oscillatory"
MODIFIED = "modified"
DEGENERATE = "degenerate"
Regime = str

# pole threshold: |B_n| below this relative scale marks a solution pole
_POLE_RTOL = 1e-12


@dataclass(frozen=True)
class RiccatiParams:
    """Coefficients of u' + a u^2 = b plus the scheme parameter delta."""

    a: float
    b: float
    delta: float

    def __post_init__(self):
        if self.a == 0.0:
            raise ValueError("Riccati coefficient a must be nonzero")
        object.__setattr__(self, "delta", _delta_value(self.delta))


@dataclass(frozen=True)
class BesselMap:
    """Parameters (p, q, r, n) of the linear-equation template plus regime.

    p - n*r vanishes identically for this family (p = 1/2, r = (3-delta)/2,
    n = 1/(3-delta)); the solution formulas rely on that cancellation
    analytically, so it is exposed as an exact property rather than a
    rounded difference of the float fields.
    """

    p: float
    q_mag: float
    r: float
    n: float
    regime: Regime

    @property
    def p_minus_nr(self) -> float:
        return 0.0


def map_params(rp: RiccatiParams) -> BesselMap:
    """Map Riccati coefficients to the Bessel-template parameters."""
    d = rp.delta
    r = 0.5 * (3.0 - d)
    n = 1.0 / (3.0 - d)
    ab = rp.a * rp.b
    if rp.b == 0.0:
        return BesselMap(0.5, 0.0, r, n, DEGENERATE)
    q_mag = (2.0 / (3.0 - d)) * math.sqrt(abs(ab) / specfun.gamma(2.0 - d))
    regime = OSCILLATORY if ab < 0.0 else MODIFIED
    return BesselMap(0.5, q_mag, r, n, regime)


@dataclass(frozen=True)
class SolutionEval:
    """One closed-form branch value; value is nan when pole_flag is set."""

    value: float
    pole_flag: bool
    denominator_magnitude: float


def _branch_ratio(bm: BesselMap, branch: int, x: float) -> tuple[float, float, float]:
    """(num, den, sign) with num/den the neighbouring-order Bessel ratio and
    sign the factor entering y'/y (K alone flips it)."""
    z = bm.q_mag * x**bm.r
    if bm.regime == OSCILLATORY:
        kind = "J" if branch == 1 else "Y"
        sign = 1.0
    else:
        kind = "I" if branch == 1 else "K"
        sign = 1.0 if branch == 1 else -1.0
    num = specfun.bessel(kind, bm.n - 1.0, z)
    den = specfun.bessel(kind, bm.n, z)
    return num, den, sign


def _eval_branch(rp: RiccatiParams, branch: int, x: float) -> SolutionEval:
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"Riccati branch evaluation requires x > 0, got {x}")
    bm = map_params(rp)
    if bm.regime == DEGENERATE:
        raise DegenerateRegimeError(
            "b = 0 has no Bessel-ratio branch; the flat-case solution "
            "u = 1/(a(x - C)) lives in the cosmology module"
        )
    num, den, sign = _branch_ratio(bm, branch, x)
    if abs(den) < _POLE_RTOL * (abs(num) + 1.0):
        return SolutionEval(math.nan, True, abs(den))
    prefactor = bm.q_mag * bm.r * x ** (bm.r - 1.0) / rp.a
    return SolutionEval(sign * prefactor * num / den, False, abs(den))


def eval_u1(rp: RiccatiParams, x: float) -> SolutionEval:
    """Branch-1 solution u1 = (1/a) q r x^(r-1) B_(n-1)(q x^r)/B_n(q x^r),
    B = J in the oscillatory regime and I in the modified one."""
    return _eval_branch(rp, 1, x)


def eval_u2(rp: RiccatiParams, x: float) -> SolutionEval:
    """Branch-2 solution built from the second-kind functions: Y in the
    oscillatory regime, K (with the sign flipped by K' = -K_(n-1) - (n/z)K_n)
    in the modified one."""
    return _eval_branch(rp, 2, x)


def _yprime_forms(rp: RiccatiParams, branch: int, x: float) -> tuple[float, float, float]:
    """(y, y' by the lower-order form, y' by the upper-order form)."""
    bm = map_params(rp)
    if bm.regime == DEGENERATE:
        raise DegenerateRegimeError("b = 0 has no Bessel-template branch")
    z = bm.q_mag * x**bm.r
    if bm.regime == OSCILLATORY:
        kind = "J" if branch == 1 else "Y"
    else:
        kind = "I" if branch == 1 else "K"
    b_n = specfun.bessel(kind, bm.n, z)
    b_lo = specfun.bessel(kind, bm.n - 1.0, z)
    b_hi = specfun.bessel(kind, bm.n + 1.0, z)
    y = math.sqrt(x) * b_n
    qrx = bm.q_mag * bm.r * x ** (bm.r - 1.0)
    nr_over_x = bm.n * bm.r / x
    p_over_x = bm.p / x
    if kind in ("J", "Y"):
        # y'/y = (p - nr)/x + qr x^(r-1) B_(n-1)/B_n, the p - nr = 0 form
        d_lo = y * qrx * (b_lo / b_n)
        d_hi = y * (p_over_x + nr_over_x - qrx * (b_hi / b_n))
    elif kind == "I":
        d_lo = y * qrx * (b_lo / b_n)
        d_hi = y * (p_over_x + nr_over_x + qrx * (b_hi / b_n))
    else:  # K
        d_lo = y * (-qrx) * (b_lo / b_n)
        d_hi = y * (p_over_x + nr_over_x - qrx * (b_hi / b_n))
    return y, d_lo, d_hi


def eval_y_branch(rp: RiccatiParams, branch: int, x: float) -> tuple[float, float]:
    """Linear-equation branch y = sqrt(x) B_n(q x^r) and its derivative.

    y' uses the form in which p - nr cancels; the alternative recurrence form
    is evaluated as a cross-check and a warning is emitted if they disagree.
    """
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"eval_y_branch requires x > 0, got {x}")
    if branch not in (1, 2):
        raise ValueError(f"branch must be 1 or 2, got {branch}")
    y, d_lo, d_hi = _yprime_forms(rp, branch, x)
    # scale by the magnitude of the terms entering the forms, not by y' itself,
    # which legitimately passes through zero
    scale = abs(d_lo) + abs(d_hi) + abs(y) / x + 1e-300
    if abs(d_lo - d_hi) > 1e-6 * scale:
        warnings.warn(
            f"eval_y_branch: derivative recurrence forms disagree at x={x} "
            f"({d_lo} vs {d_hi})",
            stacklevel=2,
        )
    return y, d_lo


def residual(rp: RiccatiParams, x: float, u: float, u_prime: float) -> float:
    """Defect u' + a u^2 - b x^(1-delta)/Gamma(2-delta) of a candidate value."""
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"residual requires x > 0, got {x}")
    return u_prime + rp.a * u * u - frac_const(rp.b, rp.delta, x)


def find_poles(
    rp: RiccatiParams,
    x_lo: float,
    x_hi: float,
    branch: int = 1,
) -> list[float]:
    """All poles of the chosen branch in [x_lo, x_hi]: zeros of the
    denominator Bessel function, bracketed by a sign scan in the (monotone)
    Bessel argument and bisected to 1e-12 relative.

    The modified regime has none (I_n, K_n > 0 on x > 0): empty list.
    """
    x_lo = float(x_lo)
    x_hi = float(x_hi)
    if not 0.0 < x_lo < x_hi:
        raise ValueError(f"need 0 < x_lo < x_hi, got [{x_lo}, {x_hi}]")
    if branch not in (1, 2):
        raise ValueError(f"branch must be 1 or 2, got {branch}")
    bm = map_params(rp)
    if bm.regime != OSCILLATORY:
        return []
    kind = "J" if branch == 1 else "Y"

    def den(x: float) -> float:
        return specfun.bessel(kind, bm.n, bm.q_mag * x**bm.r)

    # zeros of B_n(z) are simple and at least ~pi apart asymptotically; an
    # eighth-of-pi scan in z cannot skip a pair
    z_lo = bm.q_mag * x_lo**bm.r
    z_hi = bm.q_mag * x_hi**bm.r
    n_steps = max(8, int((z_hi - z_lo) / (math.pi / 8.0)) + 1)
    poles = []
    x_prev = x_lo
    f_prev = den(x_prev)
    for i in range(1, n_steps + 1):
        z = z_lo + (z_hi - z_lo) * i / n_steps
        x_cur = (z / bm.q_mag) ** (1.0 / bm.r)
        if i == n_steps:
            x_cur = x_hi
        f_cur = den(x_cur)
        if f_prev == 0.0:
            poles.append(x_prev)
        elif f_prev * f_cur < 0.0:
            lo, hi = x_prev, x_cur
            flo = f_prev
            while hi - lo > 1e-12 * hi:
                mid = 0.5 * (lo + hi)
                fmid = den(mid)
                if fmid == 0.0:
                    lo = hi = mid
                    break
                if flo * fmid < 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fmid
            poles.append(0.5 * (lo + hi))
        x_prev, f_prev = x_cur, f_cur
    if f_prev == 0.0:
        poles.append(x_prev)
    return poles
