"""FRW barotropic cosmology in conformal time: the Hubble parameter obeys
the constant-coefficient Riccati equation dH/deta + c H^2 = -k c, which the
fractional scheme turns into the modified equation with free term
-k c eta^(1-delta)/Gamma(2-delta).  Closed and open universes (k = +-1) map
onto the Riccati branches with a = c, b = -k c; the flat case k = 0 is
untouched by the scheme and keeps its classical solution H = 1/(c eta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BranchZeroError, FlatCaseError
from .fracops import _delta_value, adaptive_simpson
from . import riccati

__all__ = [
    "CosmoParams",
    "HubbleEval",
    "c_of_gamma",
    "hubble",
    "hubble_flat",
    "scale_factor",
]


def c_of_gamma(gamma_index: float) -> float:
    """Riccati coefficient from the adiabatic index: c = (3/2) gamma - 1.

    gamma = 4/3 (radiation) gives c = 1; gamma = 1 (dust) gives c = 1/2;
    gamma = 2/3 gives c = 0, which downstream constructors reject.
    """
    return 1.5 * float(gamma_index) - 1.0


@dataclass(frozen=True)
class CosmoParams:
    """Curvature index k, scheme parameter delta, and the fluid parameter
    given either as c directly or through the adiabatic index gamma."""

    k: int
    delta: float
    c: float | None = None
    gamma_index: float | None = None

    def __post_init__(self):
        if self.k not in (-1, 0, 1):
            raise ValueError(f"curvature index must be -1, 0 or 1, got {self.k}")
        object.__setattr__(self, "delta", _delta_value(self.delta))
        if self.c is None and self.gamma_index is None:
            raise ValueError("provide c or gamma_index")
        if self.c is None:
            object.__setattr__(self, "c", c_of_gamma(self.gamma_index))
        elif self.gamma_index is not None:
            implied = c_of_gamma(self.gamma_index)
            if abs(self.c - implied) > 1e-12:
                raise ValueError(
                    f"inconsistent inputs: c={self.c} but gamma implies {implied}"
                )
        if self.c == 0.0:
            raise ValueError(
                "c = 0 rejected: the Riccati coefficient a = c would vanish"
            )

    def riccati_params(self) -> riccati.RiccatiParams:
        if self.k == 0:
            raise FlatCaseError("k = 0 has no delta-modified Riccati map")
        return riccati.RiccatiParams(a=self.c, b=-self.k * self.c, delta=self.delta)


@dataclass(frozen=True)
class HubbleEval:
    """Hubble parameter sample; delta_applied is False on the flat branch."""

    eta: float
    H: float
    branch: int
    pole_flag: bool
    delta_applied: bool = True


def hubble(cp: CosmoParams, eta: float, branch: int = 1) -> HubbleEval:
    """delta-modified Hubble parameter for k = +-1.

    Branch 1 is the first-kind ratio (J for k = 1, I for k = -1; the
    nondivergent-data branch), branch 2 the second-kind one.  With a = c and
    b = -k c the 1/a prefactor cancels, so H equals the Riccati branch value.
    At delta = 1 branch 1 collapses to cot(c eta) and coth(c eta).
    """
    eta = float(eta)
    if not eta > 0.0:
        raise ValueError(f"conformal time must be positive, got {eta}")
    if cp.k == 0:
        raise FlatCaseError("k = 0 is outside the modified family; use hubble_flat")
    if branch not in (1, 2):
        raise ValueError(f"branch must be 1 or 2, got {branch}")
    rp = cp.riccati_params()
    ev = riccati.eval_u1(rp, eta) if branch == 1 else riccati.eval_u2(rp, eta)
    return HubbleEval(eta, ev.value, branch, ev.pole_flag)


def hubble_flat(cp: CosmoParams, eta: float) -> HubbleEval:
    """Classical flat-universe solution H = 1/(c eta) of dH/deta + c H^2 = 0,
    integration constant fixed so H diverges as eta -> 0+ like the curved
    branch-1 solutions; tagged as untouched by delta."""
    eta = float(eta)
    if not eta > 0.0:
        raise ValueError(f"conformal time must be positive, got {eta}")
    if cp.k != 0:
        raise ValueError(f"hubble_flat needs k = 0, got k = {cp.k}")
    return HubbleEval(eta, 1.0 / (cp.c * eta), 1, False, delta_applied=False)


def scale_factor(cp: CosmoParams, eta: float, eta_ref: float, branch: int = 1) -> float:
    """Scale-factor ratio R(eta)/R(eta_ref) recovered from H = (dR/deta)/R.

    Through u = y'/(a y) the ratio is (y(eta)/y(eta_ref))^(1/c) with y the
    chosen linear branch; both times must sit in one pole-free interval on
    which y keeps its sign.  The flat case integrates H = 1/(c eta) directly
    to (eta/eta_ref)^(1/c).
    """
    eta = float(eta)
    eta_ref = float(eta_ref)
    if not (eta > 0.0 and eta_ref > 0.0):
        raise ValueError("both times must be positive")
    if cp.k == 0:
        return (eta / eta_ref) ** (1.0 / cp.c)
    if eta == eta_ref:
        return 1.0
    rp = cp.riccati_params()
    lo, hi = min(eta, eta_ref), max(eta, eta_ref)
    if riccati.find_poles(rp, lo, hi, branch):
        raise BranchZeroError(
            f"branch-{branch} linear solution crosses zero inside [{lo}, {hi}]"
        )
    y_a, _ = riccati.eval_y_branch(rp, branch, eta)
    y_b, _ = riccati.eval_y_branch(rp, branch, eta_ref)
    if y_a == 0.0 or y_b == 0.0 or (y_a > 0.0) != (y_b > 0.0):
        raise BranchZeroError(
            f"branch-{branch} linear solution changes sign between "
            f"{eta_ref} and {eta}"
        )
    return (y_a / y_b) ** (1.0 / cp.c)


def scale_factor_by_quadrature(
    cp: CosmoParams, eta: float, eta_ref: float, branch: int = 1, tol: float = 1e-9
) -> float:
    """Cross-check route: exp(integral of H) by adaptive quadrature."""
    eta = float(eta)
    eta_ref = float(eta_ref)
    if eta == eta_ref:
        return 1.0
    if cp.k == 0:
        integral = adaptive_simpson(
            lambda t: hubble_flat(cp, t).H, eta_ref, eta, tol
        ) if eta > eta_ref else -adaptive_simpson(
            lambda t: hubble_flat(cp, t).H, eta, eta_ref, tol
        )
        return math.exp(integral)

    def h_of(t: float) -> float:
        ev = hubble(cp, t, branch)
        if ev.pole_flag:
            raise BranchZeroError(f"Hubble pole hit at eta = {t}")
        return ev.H

    if eta > eta_ref:
        integral = adaptive_simpson(h_of, eta_ref, eta, tol)
    else:
        integral = -adaptive_simpson(h_of, eta, eta_ref, tol)
    return math.exp(integral)
