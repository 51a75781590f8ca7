"""Adjustment coefficient, the Lundberg exponential bound, and the
two-moment exponential decay coefficient.

The adjustment coefficient R is the positive root of

    g(r) = lam * (M_X(r) - 1) - c*r + sigma^2 r^2 / 2 = 0,

which exists inside (0, mgf_sup) under the net-profit condition because
g(0) = 0 with g'(0) = lam*mu1 - c < 0 and M_X blows up at mgf_sup.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .model import PerturbedModel

__all__ = [
    "AdjustmentResult",
    "NoRootError",
    "adjustment_coefficient",
    "lundberg_bound",
    "renyi_coefficient",
]


class NoRootError(RuntimeError):
    """No sign change found inside the admissible bracket."""


@dataclass(frozen=True)
class AdjustmentResult:
    R: float
    bracket: tuple[float, float]
    residual: float
    iterations: int


def _g(model: PerturbedModel, r: float) -> float:
    return (
        model.lam * (model.claims.mgf(r) - 1.0)
        - model.c * r
        + 0.5 * model.sigma**2 * r * r
    )


def adjustment_coefficient(model: PerturbedModel) -> AdjustmentResult:
    """Find R by bracketed root-finding on g.

    The lower end is fixed at 1e-12 (g must be negative there); the upper end
    starts at 0.999 * mgf_sup and moves geometrically closer to mgf_sup until
    g is positive, since the MGF divergence guarantees a sign change.
    """
    sup = model.claims.mgf_sup
    if not sup > 0.0:
        raise NoRootError("claim MGF has empty positive domain")
    lo = 1e-12
    g_lo = _g(model, lo)
    if not g_lo < 0.0:
        raise NoRootError(f"g({lo}) = {g_lo}, expected negative under net profit")
    hi = None
    g_hi = None
    for k in range(3, 16):
        cand = sup * (1.0 - 10.0**-k)
        g_cand = _g(model, cand)
        if g_cand > 0.0:
            hi, g_hi = cand, g_cand
            break
    if hi is None:
        raise NoRootError(
            f"no sign change in ({lo}, {sup}): g(lo) = {g_lo}, g(near sup) = {g_cand}"
        )
    root, info = optimize.brentq(
        lambda r: _g(model, r),
        lo,
        hi,
        xtol=1e-300,
        rtol=4.0 * np.finfo(float).eps,
        maxiter=200,
        full_output=True,
    )
    residual = abs(_g(model, root))
    return AdjustmentResult(
        R=float(root),
        bracket=(lo, hi),
        residual=residual,
        iterations=int(info.iterations),
    )


def lundberg_bound(model: PerturbedModel, u, R: float | None = None):
    """Exponential upper bound e^{-R u} on the ultimate ruin probability."""
    if R is None:
        R = adjustment_coefficient(model).R
    scalar = np.isscalar(u)
    val = np.exp(-R * np.asarray(u, dtype=float))
    return float(val) if scalar else val


def renyi_coefficient(model: PerturbedModel) -> float:
    """Classical two-moment decay coefficient 2 q mu1 / mu2.

    Note this is not the decay rate of the published exponential
    approximation tables; approx.renyi_approx uses a third-moment rate.
    """
    mu1 = model.claims.raw_moment(1)
    mu2 = model.claims.raw_moment(2)
    return 2.0 * model.q * mu1 / mu2
