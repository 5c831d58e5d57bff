"""Husimi Q distributions of the weak mode and quadrature-node generation.

Each supported state has a Gaussian Q function in alpha = ax + i ay:

    squeezed vacuum  Q(alpha) = (pi cosh r)^-1
                       exp[-|alpha|^2 + (tanh r / 2)(e^{-i phi} alpha^2 + c.c.)]
    coherent         Q(alpha) = pi^-1 exp(-|alpha - alpha0|^2)
    thermal          Q(alpha) = (pi (1 + nbar))^-1 exp(-|alpha|^2 / (1 + nbar))

All three are bivariate normals in (ax, ay); we expose mean, principal-axis
angle, and principal variances in closed form and build ensemble nodes either
as a tensor Gauss-Hermite rule along the principal axes or by Monte Carlo
sampling.  Keeping the axis angle explicit (instead of diagonalizing the
covariance numerically) makes phase rotations act on nodes exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from qsfa.fields import wrap_angle


@dataclass(frozen=True)
class SqueezedVacuum:
    """Squeezed vacuum with squeezing r >= 0 and squeezing phase phi.

    For phi = 0 the anti-squeezed (long) axis of Q lies along Re alpha.
    """

    r: float
    phi: float = 0.0

    def __post_init__(self):
        if self.r < 0.0:
            raise ValueError(f"r must be nonnegative, got {self.r}")
        object.__setattr__(self, "phi", wrap_angle(self.phi))

    @property
    def mean(self) -> complex:
        return 0.0 + 0.0j

    @property
    def axis_angle(self) -> float:
        """Angle of the first principal axis (the anti-squeezed one)."""
        return 0.5 * self.phi

    @property
    def variances(self) -> tuple[float, float]:
        """(anti-squeezed, squeezed) variances of Q along the principal axes."""
        th = math.tanh(self.r)
        return 0.5 / (1.0 - th), 0.5 / (1.0 + th)

    @property
    def nbar(self) -> float:
        return math.sinh(self.r) ** 2


@dataclass(frozen=True)
class CoherentState:
    """Coherent state |alpha0>; axis_angle tracks applied phase rotations."""

    alpha0: complex
    axis_angle: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha0", complex(self.alpha0))
        object.__setattr__(self, "axis_angle", wrap_angle(self.axis_angle))

    @property
    def mean(self) -> complex:
        return self.alpha0

    @property
    def variances(self) -> tuple[float, float]:
        return 0.5, 0.5

    @property
    def nbar(self) -> float:
        return abs(self.alpha0) ** 2


@dataclass(frozen=True)
class ThermalState:
    """Thermal state with mean photon number nbar."""

    nbar_mean: float

    def __post_init__(self):
        if self.nbar_mean < 0.0:
            raise ValueError(f"nbar must be nonnegative, got {self.nbar_mean}")

    @property
    def mean(self) -> complex:
        return 0.0 + 0.0j

    @property
    def axis_angle(self) -> float:
        return 0.0

    @property
    def variances(self) -> tuple[float, float]:
        v = 0.5 * (1.0 + self.nbar_mean)
        return v, v

    @property
    def nbar(self) -> float:
        return self.nbar_mean


Distribution = Union[SqueezedVacuum, CoherentState, ThermalState]


def husimi_eval(dist: Distribution, alpha) -> np.ndarray | float:
    """Q(alpha), vectorized over an array of complex alpha."""
    alpha = np.asarray(alpha, dtype=np.complex128)
    mu = dist.mean
    ang = dist.axis_angle
    v1, v2 = dist.variances
    # coordinates along the principal axes
    d = (alpha - mu) * np.exp(-1j * ang)
    q = np.exp(-d.real ** 2 / (2.0 * v1) - d.imag ** 2 / (2.0 * v2))
    q = q / (2.0 * math.pi * math.sqrt(v1 * v2))
    return q if q.ndim else float(q)


def rotate_dist(dist: Distribution, dphi: float) -> Distribution:
    """State after the phase rotation alpha -> alpha e^{i dphi / 2}.

    Squeezed vacuum maps to squeezing phase phi + dphi, a coherent state to
    alpha0 e^{i dphi/2}, and a thermal state to itself (returned unchanged,
    exactly).
    """
    if isinstance(dist, SqueezedVacuum):
        return replace(dist, phi=wrap_angle(dist.phi + dphi))
    if isinstance(dist, CoherentState):
        return CoherentState(
            alpha0=dist.alpha0 * np.exp(0.5j * dphi),
            axis_angle=wrap_angle(dist.axis_angle + 0.5 * dphi),
        )
    if isinstance(dist, ThermalState):
        return dist
    raise TypeError(f"unsupported distribution {type(dist).__name__}")


@dataclass(frozen=True)
class NodeSet:
    """Quadrature nodes and weights for an ensemble average over Q."""

    alphas: np.ndarray  # complex128, shape (n,)
    weights: np.ndarray  # float64, shape (n,), sums to 1

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=np.complex128)
        w = np.asarray(self.weights, dtype=np.float64)
        if a.shape != w.shape or a.ndim != 1:
            raise ValueError("alphas and weights must be matching 1-d arrays")
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.alphas.size


def gauss_hermite_nodes(dist: Distribution, order: int) -> NodeSet:
    """Tensor Gauss-Hermite rule along the principal axes of Q.

    Exact for E_Q[f] with f polynomial of degree < 2*order in each principal
    coordinate; node count is order**2.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    x, w = np.polynomial.hermite.hermgauss(order)
    w = w / math.sqrt(math.pi)  # weights for exp(-x^2) normalized to 1
    v1, v2 = dist.variances
    c1 = math.sqrt(2.0 * v1) * x
    c2 = math.sqrt(2.0 * v2) * x
    g1, g2 = np.meshgrid(c1, c2, indexing="ij")
    z = (g1 + 1j * g2).ravel() * np.exp(1j * dist.axis_angle) + dist.mean
    ww = np.outer(w, w).ravel()
    return NodeSet(alphas=z, weights=ww)


def monte_carlo_nodes(dist: Distribution, count: int, seed: int) -> NodeSet:
    """Equal-weight nodes drawn from Q with a counter-based generator."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    v1, v2 = dist.variances
    c1 = rng.normal(0.0, math.sqrt(v1), size=count)
    c2 = rng.normal(0.0, math.sqrt(v2), size=count)
    z = (c1 + 1j * c2) * np.exp(1j * dist.axis_angle) + dist.mean
    w = np.full(count, 1.0 / count)
    return NodeSet(alphas=z, weights=w)


def make_nodes(
    dist: Distribution,
    method: str = "gauss_hermite",
    order: int = 32,
    count: int = 1024,
    seed: int = 0,
) -> NodeSet:
    """Build ensemble nodes for a distribution.

    method is "gauss_hermite" (order**2 tensor nodes) or "monte_carlo"
    (count equal-weight samples from the Philox stream for seed).
    """
    if method == "gauss_hermite":
        return gauss_hermite_nodes(dist, order)
    if method == "monte_carlo":
        return monte_carlo_nodes(dist, count, seed)
    raise ValueError(f"unknown node method {method!r}")
