"""Claim-size distributions for the perturbed compound Poisson surplus model.

Each distribution exposes closed-form raw moments (orders 1 through 5), the
moment generating function and its Laplace counterpart, tail probabilities,
the integrated-tail (equilibrium) transforms, and the distribution function
of the combined ladder height: the sum of an Exp(tau) oscillation record and
an equilibrium-distributed claim record. The bound and decomposition solvers
consume that combined CDF, written h3_cdf / h3_density here.

All pointwise functions accept scalars or numpy arrays and return a matching
shape. Transform functions (mgf, laplace, equilibrium_laplace) also accept
complex arguments; on the real axis the MGF is guarded at its divergence
point, while complex off-axis evaluation follows the analytic continuation
needed by the inversion contour.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

__all__ = [
    "ClaimDistribution",
    "Exponential",
    "Gamma",
    "MixedExponential",
]

_MAX_MOMENT_ORDER = 5

# Relative window around tau = rate inside which the removable-singularity
# branch of the ladder closed forms is used instead of the direct quotient.
_SINGULAR_REL_TOL = 1e-9


def _maybe_scalar(value: np.ndarray, scalar_input: bool):
    if scalar_input:
        return value.item() if isinstance(value, np.ndarray) else value
    return value


class ClaimDistribution(ABC):
    """Positive claim-size distribution with light-tailed transform support."""

    # -- moments -----------------------------------------------------------

    @abstractmethod
    def raw_moment(self, k: int) -> float:
        """E[X^k] in closed form for k = 1..5."""

    def _check_order(self, k: int) -> None:
        if not isinstance(k, (int, np.integer)) or not 1 <= k <= _MAX_MOMENT_ORDER:
            raise ValueError(
                f"moment order must be an integer in 1..{_MAX_MOMENT_ORDER}, got {k!r}"
            )

    @property
    def mean(self) -> float:
        return self.raw_moment(1)

    # -- transforms --------------------------------------------------------

    @abstractmethod
    def _mgf_unchecked(self, r):
        """Analytic continuation of the MGF; no domain guard."""

    @property
    @abstractmethod
    def mgf_sup(self) -> float:
        """Supremum of the real MGF domain (divergence abscissa)."""

    def mgf(self, r):
        """E[e^{rX}]. Real arguments at or beyond mgf_sup are a hard error."""
        arr = np.asarray(r)
        real_part = np.real(arr)
        on_real_axis = np.imag(arr) == 0 if np.iscomplexobj(arr) else np.ones_like(arr, dtype=bool)
        if np.any(on_real_axis & (real_part >= self.mgf_sup)):
            raise ValueError(
                f"mgf argument {r!r} not below divergence point {self.mgf_sup!r}"
            )
        return self._mgf_unchecked(r)

    def laplace(self, s):
        """Laplace transform of the claim density, mgf(-s)."""
        return self.mgf(-s) if np.isscalar(s) else self.mgf(np.negative(s))

    def equilibrium_laplace(self, s):
        """Laplace transform of the integrated-tail (equilibrium) density.

        (1 - laplace(s)) / (s * mean), with the s -> 0 limit of 1 taken
        explicitly and a short series used near 0 to dodge cancellation.
        """
        scalar_input = np.isscalar(s)
        arr = np.atleast_1d(np.asarray(s, dtype=complex if np.iscomplexobj(np.asarray(s)) else float))
        mu1 = self.raw_moment(1)
        mu2 = self.raw_moment(2)
        mu3 = self.raw_moment(3)
        out = np.empty(arr.shape, dtype=arr.dtype if np.iscomplexobj(arr) else float)
        # the crossover sits where the series truncation error (next term
        # ~ s^3 mu4 / 24 mu1) and the subtractive cancellation in the
        # direct quotient are both far below double precision noise
        small = np.abs(arr) * mu2 / (2.0 * mu1) < 1e-5
        if np.any(small):
            z = arr[small]
            out[small] = 1.0 - z * mu2 / (2.0 * mu1) + z * z * mu3 / (6.0 * mu1)
        if np.any(~small):
            z = arr[~small]
            out[~small] = (1.0 - self._mgf_unchecked(-z)) / (z * mu1)
        result = out.reshape(np.shape(s)) if not scalar_input else out
        return _maybe_scalar(result, scalar_input)

    # -- distribution functions --------------------------------------------

    @abstractmethod
    def cdf(self, x):
        """P(X <= x); 0 at x = 0."""

    def tail(self, x):
        """P(X > x)."""
        return 1.0 - self.cdf(x)

    def equilibrium_density(self, x):
        """Density of the integrated-tail distribution, tail(x) / mean."""
        return self.tail(x) / self.raw_moment(1)

    # -- combined ladder height --------------------------------------------

    def h3_cdf(self, x, tau: float):
        """CDF of (Exp(tau) record) + (equilibrium claim record) at x.

        Uses a closed form where the family admits one, otherwise adaptive
        quadrature with absolute tolerance 1e-10.
        """
        if tau <= 0.0:
            raise ValueError("tau must be positive")
        scalar_input = np.isscalar(x)
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        closed = self._h3_cdf_closed(arr, tau)
        if closed is None:
            closed = self._h3_quad(arr, tau, density=False)
        return _maybe_scalar(closed, scalar_input)

    def h3_density(self, x, tau: float):
        """Density of the combined ladder height; vanishes at x = 0."""
        if tau <= 0.0:
            raise ValueError("tau must be positive")
        scalar_input = np.isscalar(x)
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        closed = self._h3_density_closed(arr, tau)
        if closed is None:
            closed = self._h3_quad(arr, tau, density=True)
        return _maybe_scalar(closed, scalar_input)

    def _h3_cdf_closed(self, x: np.ndarray, tau: float):
        return None

    def _h3_density_closed(self, x: np.ndarray, tau: float):
        return None

    def _h3_quad(self, x: np.ndarray, tau: float, density: bool) -> np.ndarray:
        mu1 = self.raw_moment(1)
        out = np.empty(x.shape, dtype=float)
        for i, xi in enumerate(x.ravel()):
            if xi <= 0.0:
                out.flat[i] = 0.0
                continue
            if density:
                f = lambda t: tau * math.exp(-tau * (xi - t)) * self.tail(t) / mu1
            else:
                f = lambda t: -math.expm1(-tau * (xi - t)) * self.tail(t) / mu1
            val, _ = integrate.quad(f, 0.0, xi, epsabs=1e-10, epsrel=1e-10, limit=200)
            out.flat[i] = val
        return out


# ---------------------------------------------------------------------------
# concrete families
# ---------------------------------------------------------------------------


def _exp_ladder_pieces(x: np.ndarray, rate: float, tau: float):
    """Per-component ladder integrals shared by Exponential and the mixture.

    Returns (cdf_piece, density_piece) for a unit-weight Exp(rate) component,
    before division by the mixture mean: cdf_piece integrates to 1/rate.
    """
    ex = np.exp(-rate * x)
    if abs(tau - rate) < _SINGULAR_REL_TOL * rate:
        # removable singularity tau = rate, limit branch
        cross = x * ex
    else:
        cross = (ex - np.exp(-tau * x)) / (tau - rate)
    cdf_piece = (1.0 - ex) / rate - cross
    density_piece = tau * cross
    return cdf_piece, density_piece


@dataclass(frozen=True)
class Exponential(ClaimDistribution):
    """Exponential claim sizes with the given rate."""

    rate: float

    def __post_init__(self):
        if not self.rate > 0.0:
            raise ValueError("rate must be positive")

    def raw_moment(self, k: int) -> float:
        self._check_order(k)
        return math.factorial(k) / self.rate**k

    def _mgf_unchecked(self, r):
        return self.rate / (self.rate - np.asarray(r)) if not np.isscalar(r) else self.rate / (self.rate - r)

    @property
    def mgf_sup(self) -> float:
        return self.rate

    def cdf(self, x):
        return -np.expm1(-self.rate * np.asarray(x)) if not np.isscalar(x) else -math.expm1(-self.rate * x)

    def tail(self, x):
        return np.exp(-self.rate * np.asarray(x)) if not np.isscalar(x) else math.exp(-self.rate * x)

    def _h3_cdf_closed(self, x: np.ndarray, tau: float):
        cdf_piece, _ = _exp_ladder_pieces(x, self.rate, tau)
        return self.rate * cdf_piece

    def _h3_density_closed(self, x: np.ndarray, tau: float):
        _, density_piece = _exp_ladder_pieces(x, self.rate, tau)
        return self.rate * density_piece


@dataclass(frozen=True)
class Gamma(ClaimDistribution):
    """Gamma claim sizes, shape/rate parameterization. Gamma(1, b) == Exponential(b)."""

    shape: float
    rate: float

    def __post_init__(self):
        if not self.shape > 0.0 or not self.rate > 0.0:
            raise ValueError("shape and rate must be positive")

    def raw_moment(self, k: int) -> float:
        self._check_order(k)
        num = 1.0
        for j in range(k):
            num *= self.shape + j
        return num / self.rate**k

    def _mgf_unchecked(self, r):
        base = 1.0 - np.asarray(r) / self.rate
        return np.power(base, -self.shape) if not np.isscalar(r) else (1.0 - r / self.rate) ** -self.shape

    @property
    def mgf_sup(self) -> float:
        return self.rate

    def cdf(self, x):
        return special.gammainc(self.shape, self.rate * np.asarray(x))

    def tail(self, x):
        return special.gammaincc(self.shape, self.rate * np.asarray(x))

    def _integer_shape(self) -> int | None:
        m = round(self.shape)
        if m >= 1 and abs(self.shape - m) < 1e-12:
            return m
        return None

    def _ladder_sum(self, x: np.ndarray, tau: float):
        """e^{-tau x}-weighted ladder integral, expanded termwise.

        Returns sum_j (beta^j/j!) * int_0^x t^j e^{(tau-beta)t} dt folded with
        the outer e^{-tau x}, i.e. the subtracted part of the ladder CDF, or
        None when the closed form would lose too many digits (tau close to
        the claim rate amplifies the 1/a^{j+1} terms).
        """
        m = self._integer_shape()
        if m is None:
            return None
        beta = self.rate
        a = tau - beta
        if abs(a) < _SINGULAR_REL_TOL * beta:
            return None
        # predicted cancellation magnitude of the largest term
        if 1e-16 * math.factorial(m - 1) / abs(a) ** m > 1e-10:
            return None
        ebx = np.exp(-beta * x)
        etx = np.exp(-tau * x)
        ax = a * x
        total = np.zeros_like(x)
        for j in range(m):
            poly = np.zeros_like(x)
            for i in range(j + 1):
                poly += (-1.0) ** (j - i) * ax**i / math.factorial(i)
            total += (beta**j) * (ebx * poly - (-1.0) ** j * etx) / a ** (j + 1)
        return (beta / m) * total

    def _h3_cdf_closed(self, x: np.ndarray, tau: float):
        m = self._integer_shape()
        if m is None:
            return None
        part = self._ladder_sum(x, tau)
        if part is None:
            return None
        bx = self.rate * x
        h2 = np.zeros_like(x)
        for j in range(1, m + 1):
            h2 += special.gammainc(j, bx)
        return h2 / m - part

    def _h3_density_closed(self, x: np.ndarray, tau: float):
        part = self._ladder_sum(x, tau)
        if part is None:
            return None
        return tau * part


@dataclass(frozen=True)
class MixedExponential(ClaimDistribution):
    """Finite mixture of exponentials: sum_i w_i * Exp(rate_i)."""

    weights: tuple[float, ...]
    rates: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "rates", tuple(float(b) for b in self.rates))
        if len(self.weights) != len(self.rates) or not self.weights:
            raise ValueError("weights and rates must be equal-length, nonempty")
        if any(w <= 0.0 for w in self.weights) or any(b <= 0.0 for b in self.rates):
            raise ValueError("weights and rates must be positive")
        if abs(sum(self.weights) - 1.0) > 1e-6:
            raise ValueError(f"weights sum to {sum(self.weights)!r}, expected 1")

    def raw_moment(self, k: int) -> float:
        self._check_order(k)
        fact = math.factorial(k)
        return sum(w * fact / b**k for w, b in zip(self.weights, self.rates))

    def _mgf_unchecked(self, r):
        r_arr = np.asarray(r)
        total = sum(w * (b / (b - r_arr)) for w, b in zip(self.weights, self.rates))
        return total if not np.isscalar(r) else complex(total) if np.iscomplexobj(r_arr) else float(total)

    @property
    def mgf_sup(self) -> float:
        return min(self.rates)

    def cdf(self, x):
        x_arr = np.asarray(x)
        return sum(w * -np.expm1(-b * x_arr) for w, b in zip(self.weights, self.rates))

    def tail(self, x):
        x_arr = np.asarray(x)
        return sum(w * np.exp(-b * x_arr) for w, b in zip(self.weights, self.rates))

    def _h3_cdf_closed(self, x: np.ndarray, tau: float):
        mu1 = self.raw_moment(1)
        total = np.zeros_like(x)
        for w, b in zip(self.weights, self.rates):
            cdf_piece, _ = _exp_ladder_pieces(x, b, tau)
            total += w * cdf_piece
        return total / mu1

    def _h3_density_closed(self, x: np.ndarray, tau: float):
        mu1 = self.raw_moment(1)
        total = np.zeros_like(x)
        for w, b in zip(self.weights, self.rates):
            _, density_piece = _exp_ladder_pieces(x, b, tau)
            total += w * density_piece
        return total / mu1
