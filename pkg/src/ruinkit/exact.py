"""Reference ruin probabilities: transform inversion and the
oscillation/claim decomposition by Volterra marching.

exact_ruin inverts the Pollaczek-Khinchine transform numerically; it is the
"exact" column every approximation is judged against. decompose_ruin splits
the ruin probability into ruin caused by the diffusion oscillation crossing
zero and ruin caused by a claim jump, by solving the pair of renewal
(Volterra) equations

    psi1(u) = 1 - H1(u) + (1-q) int_0^u psi1(u-x) h3(x) dx
    psi2(u) = (1-q)(H1(u) - H3(u)) + (1-q) int_0^u psi2(u-x) h3(x) dx

with H1 the Exp(tau) record CDF and h3 the combined ladder density.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _inversion
from ._kernels import volterra_march
from ._inversion import InversionError
from .model import PerturbedModel

__all__ = ["RuinCurve", "DecompositionCurves", "exact_ruin", "decompose_ruin", "InversionError"]


@dataclass(frozen=True)
class RuinCurve:
    """A labeled (u, value) grid; u strictly increasing, values in [0, 1]."""

    method: str
    u: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if u.shape != v.shape or u.ndim != 1:
            raise ValueError("u and values must be 1-d arrays of equal length")
        if u.size > 1 and not np.all(np.diff(u) > 0.0):
            raise ValueError("u grid must be strictly increasing")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "values", v)

    def __iter__(self):
        return iter(zip(self.u.tolist(), self.values.tolist()))


@dataclass(frozen=True)
class DecompositionCurves:
    psi1: RuinCurve  # ruin by oscillation
    psi2: RuinCurve  # ruin by claim


def exact_ruin(
    model: PerturbedModel,
    u,
    method: str = "talbot",
    degree: int | None = None,
    check: bool = True,
):
    """Ultimate ruin probability Psi(u) by inversion of pk_transform.

    u = 0 is returned without inversion: exactly 1 when sigma > 0, and
    1 - q on the classical sigma = 0 pathway. Absolute accuracy target is
    1e-7 over u in [0, 100] (validated against the closed form available
    for exponential claims). check=True recomputes at a higher quadrature
    order and raises InversionError on disagreement beyond 1e-6.
    """
    scalar = np.isscalar(u)
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(u_arr < 0.0):
        raise ValueError("u must be nonnegative")
    transform = lambda s: model.pk_transform(s)
    at_zero = 1.0 if model.sigma > 0.0 else 1.0 - model.q
    out = np.empty(u_arr.shape)
    tol = 1e-6 if check else None
    for i, ui in enumerate(u_arr):
        if ui == 0.0:
            out[i] = at_zero
        else:
            out[i] = _inversion.invert(transform, ui, method=method, degree=degree, check_tol=tol)
    return float(out[0]) if scalar else out


def decompose_ruin(
    model: PerturbedModel, u_max: float, step: float = 0.01, refine: int = 4
) -> DecompositionCurves:
    """Solve the two renewal equations on the grid 0, step, ..., u_max.

    The march runs internally at step/refine and is subsampled back; the
    trapezoid error is O(h^2), so refine=4 buys a 16x accuracy factor.
    """
    if model.sigma == 0.0:
        raise ValueError("the cause split requires a diffusion term (sigma > 0)")
    if u_max <= 0.0 or step <= 0.0:
        raise ValueError("u_max and step must be positive")
    if refine < 1:
        raise ValueError("refine must be at least 1")
    tau = model.tau
    h = step / refine
    if tau * h >= 1.0:
        raise ValueError("step too coarse: tau * step / refine must be < 1")
    q = model.q
    n_out = int(round(u_max / step)) + 1
    n = (n_out - 1) * refine + 1
    grid = np.arange(n) * h
    h1_tail = np.exp(-tau * grid)  # 1 - H1
    h3_cdf = np.asarray(model.claims.h3_cdf(grid, tau), dtype=float)
    h3_pdf = np.asarray(model.claims.h3_density(grid, tau), dtype=float)
    forcing1 = h1_tail
    forcing2 = (1.0 - q) * ((1.0 - h1_tail) - h3_cdf)
    psi1 = volterra_march(forcing1, h3_pdf, 1.0 - q, h)
    psi2 = volterra_march(forcing2, h3_pdf, 1.0 - q, h)
    out = grid[::refine]
    return DecompositionCurves(
        psi1=RuinCurve("oscillation_ruin", out, psi1[::refine]),
        psi2=RuinCurve("claim_ruin", out, psi2[::refine]),
    )
