"""The diffusion-perturbed compound Poisson surplus model.

V(t) = u + c*t - S(t) + sigma*W(t), where S is a compound Poisson sum of
claims with intensity lam and W a standard Wiener process. The premium rate
c and the safety loading theta determine each other through c = (1+theta) *
lam * mu1; exactly one of them is given at construction.

Derived quantities used throughout:
    q   = 1 - lam*mu1/c = theta/(1+theta), the ladder-success deficit
    tau = 2c/sigma^2, the rate of the exponential oscillation record
    rho = c*q, the profit parameter

The module also exposes the transforms every solver consumes: the central
moments of V(t), the Levy exponent of the net-drift process, the Laplace
transform of the ultimate ruin probability (Pollaczek-Khinchine form), and
the MGF of the maximal aggregate loss.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .claims import ClaimDistribution

__all__ = ["PerturbedModel", "CentralMoments"]


class CentralMoments(NamedTuple):
    nu1: float
    nu2: float
    nu3: float
    nu4: float
    nu5: float


@dataclass(frozen=True)
class PerturbedModel:
    """Immutable model object; all operations are pure."""

    claims: ClaimDistribution
    lam: float
    sigma: float
    loading: float = field(default=None)  # type: ignore[assignment]
    premium_rate: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if not self.lam > 0.0:
            raise ValueError("claim intensity lam must be positive")
        if self.sigma < 0.0:
            raise ValueError("sigma must be nonnegative")
        mu1 = self.claims.raw_moment(1)
        if (self.loading is None) == (self.premium_rate is None):
            raise ValueError("give exactly one of loading or premium_rate")
        if self.loading is not None:
            if not self.loading > 0.0:
                raise ValueError("loading must be positive")
            object.__setattr__(self, "premium_rate", (1.0 + self.loading) * self.lam * mu1)
        else:
            object.__setattr__(self, "loading", self.premium_rate / (self.lam * mu1) - 1.0)
        if not self.premium_rate - self.lam * mu1 > 0.0:
            raise ValueError("net profit condition violated: c <= lam * mu1")

    # -- derived parameters --------------------------------------------------

    @property
    def c(self) -> float:
        return self.premium_rate

    @property
    def q(self) -> float:
        return 1.0 - self.lam * self.claims.raw_moment(1) / self.c

    @property
    def tau(self) -> float:
        if self.sigma == 0.0:
            raise ValueError("tau undefined for sigma = 0 (no diffusion)")
        return 2.0 * self.c / self.sigma**2

    @property
    def rho(self) -> float:
        return self.c * self.q

    def derive_params(self) -> tuple[float, float, float, float]:
        """(c, q, tau, rho)."""
        return self.c, self.q, self.tau, self.rho

    # -- moments of the surplus at a fixed time -------------------------------

    def central_moments(self, u: float, t: float) -> CentralMoments:
        """Central moments nu1..nu5 of V(t) started from u.

        nu4 is the cumulant conversion lam*t*mu4 + 3*nu2^2; the variance term
        already contains the diffusion contribution, so no separate
        3*sigma^4*t^2 is added (adding it would double count: the fourth
        central moment of any Levy increment is kappa4 + 3*kappa2^2).
        """
        if t <= 0.0:
            raise ValueError("t must be positive")
        if u < 0.0:
            raise ValueError("u must be nonnegative")
        m = [self.claims.raw_moment(k) for k in range(1, 6)]
        lt = self.lam * t
        nu2 = lt * m[1] + self.sigma**2 * t
        return CentralMoments(
            nu1=u + self.c * t - lt * m[0],
            nu2=nu2,
            nu3=-lt * m[2],
            nu4=lt * m[3] + 3.0 * nu2**2,
            nu5=-lt * m[4] - 10.0 * lt * m[2] * nu2,
        )

    # -- transforms ------------------------------------------------------------

    def levy_exponent(self, s):
        """Laplace exponent of the claims-minus-premium net process.

        c*s - lam*(1 - laplace_X(s)) + sigma^2 s^2 / 2; vanishes at 0 with
        slope c - lam*mu1 > 0.
        """
        s_arr = s if np.isscalar(s) else np.asarray(s)
        return (
            self.c * s_arr
            - self.lam * (1.0 - self.claims._mgf_unchecked(-s_arr))
            + 0.5 * self.sigma**2 * s_arr * s_arr
        )

    def pk_transform(self, s):
        """Laplace transform Psi*(s) of the ultimate ruin probability.

        Pollaczek-Khinchine form. For sigma > 0:
            Psi*(s) = [s + tau(1-q)(1 - h2*(s))] / [s (s + tau - tau(1-q) h2*(s))]
        where h2* is the equilibrium claim transform. For sigma = 0 the
        classical pathway applies: Psi*(s) = (1 - phi*(s)) / s with
        phi*(s) = q / (1 - (1-q) h2*(s)) the transform of the maximal
        aggregate loss distribution.

        Accepts complex s (inversion contour); s = 0 is a pole.
        """
        q = self.q
        h2 = self.claims.equilibrium_laplace(s)
        if self.sigma == 0.0:
            mgf_l = q / (1.0 - (1.0 - q) * h2)
            return (1.0 - mgf_l) / s
        tau = self.tau
        return (s + tau * (1.0 - q) * (1.0 - h2)) / (s * (s + tau - tau * (1.0 - q) * h2))

    def mgf_max_loss(self, r: float) -> float:
        """MGF of the maximal aggregate loss L = sup_t (loss process).

        M_L(r) = q r tau mu1 / [r (tau - r) mu1 + (q-1) tau (M_X(r) - 1)],
        with M_L(0) = 1 by limit (second-order Taylor of the denominator
        keeps the quotient finite through r = 0).
        """
        q = self.q
        tau = self.tau
        mu1 = self.claims.raw_moment(1)
        mu2 = self.claims.raw_moment(2)
        mu3 = self.claims.raw_moment(3)
        # denominator D(r) = r(tau-r)mu1 + (q-1)tau(M_X(r)-1) has a simple
        # zero at 0; D(r)/r -> q tau mu1 - r [mu1 + (1-q) tau mu2/2] - ...
        denom_scale = q * tau * mu1
        if abs(r) * (mu1 + (1.0 - q) * tau * mu2 / 2.0) < 1e-8 * denom_scale:
            lin = mu1 + (1.0 - q) * tau * mu2 / 2.0
            quad = (1.0 - q) * tau * mu3 / 6.0
            return q * tau * mu1 / (denom_scale - r * lin - r * r * quad)
        mgf_val = self.claims.mgf(r)  # domain-guarded; diverges at mgf_sup
        denom = r * (tau - r) * mu1 + (q - 1.0) * tau * (mgf_val - 1.0)
        # the denominator has a zero exactly at the adjustment coefficient;
        # for r < 0 numerator and denominator are both negative, which is fine
        if r > 0.0 and denom <= 0.0:
            raise ValueError(
                f"maximal-loss MGF diverges at r={r!r} (argument at or beyond "
                "the adjustment coefficient)"
            )
        return q * r * tau * mu1 / denom

    def mean_max_loss(self) -> float:
        """E[L] = (sigma^2 + lam*mu2) / (2 c q), the integral of the ruin curve."""
        return (self.sigma**2 + self.lam * self.claims.raw_moment(2)) / (2.0 * self.c * self.q)
