"""Two-color field model: strong classical 2w drive plus a weak w mode.

Everything is in atomic units.  The field is linearly polarized along x:

    E(t) = i g_w [alpha e^{-i(w t - theta)} - alpha* e^{+i(w t - theta)}]
         + i g_2w alpha_2w [e^{-2 i w t} - e^{+2 i w t}]

which for alpha = ax + i ay expands to the manifestly real form

    E(t) = 2 g_w [ax sin(w t - theta) - ay cos(w t - theta)]
         + 2 g_2w alpha_2w sin(2 w t).

The vector potential is A(t) = -int E dt with zero cycle average.  Both are
evaluated through a small harmonic table A(t) = sum_k A_k e^{i k w t}
(k = -2..2, A_0 = 0), which continues analytically to complex t for free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

# 1 a.u. of intensity (E^2 in W/cm^2): I[W/cm^2] = 3.50945e16 * E0[a.u.]^2
INTENSITY_WCM2_PER_AU = 3.50945e16

# omega[a.u.] = NM_TO_OMEGA / lambda[nm]
NM_TO_OMEGA = 45.563352529180525


def wrap_angle(x: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    w = math.remainder(x, 2.0 * math.pi)
    if w <= -math.pi:
        w += 2.0 * math.pi
    return w


@dataclass(frozen=True)
class AtomSpec:
    """Target atom: ionization potential and effective dipole parameter.

    ``lam`` enters the bound-state dipole matrix element; for He we use
    ip = 0.904 and lam = 1.6875.
    """

    ip: float = 0.904
    lam: float = 1.6875

    def __post_init__(self):
        if not self.ip > 0.0:
            raise ValueError(f"ip must be positive, got {self.ip}")
        if not self.lam > 0.0:
            raise ValueError(f"lam must be positive, got {self.lam}")


HELIUM = AtomSpec()


@dataclass(frozen=True)
class FieldConfig:
    """Two-color field parameters (atomic units).

    omega      fundamental (weak-field) frequency; the strong drive is 2*omega
    g_w        single-photon coupling of the w mode
    g_2w       coupling of the 2w mode
    alpha_2w   real coherent amplitude of the strong 2w field,
               peak field E_2w = 2 * g_2w * alpha_2w
    theta      carrier phase of the w mode, wrapped to (-pi, pi]
    """

    omega: float
    g_w: float = 1e-8
    g_2w: float | None = None
    alpha_2w: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if not self.omega > 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not self.g_w > 0.0:
            raise ValueError(f"g_w must be positive, got {self.g_w}")
        if self.g_2w is None:
            # g scales like sqrt(omega) for a fixed quantization volume
            object.__setattr__(self, "g_2w", self.g_w * math.sqrt(2.0))
        if not self.g_2w > 0.0:
            raise ValueError(f"g_2w must be positive, got {self.g_2w}")
        if self.alpha_2w < 0.0:
            raise ValueError(f"alpha_2w must be nonnegative, got {self.alpha_2w}")
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    @property
    def e_2w(self) -> float:
        """Peak field of the strong 2w component."""
        return 2.0 * self.g_2w * self.alpha_2w

    @property
    def a_2w(self) -> float:
        """Vector-potential amplitude of the strong component, E_2w/(2 omega)."""
        return self.e_2w / (2.0 * self.omega)

    @property
    def period(self) -> float:
        """Fundamental period 2 pi / omega (one unit cell)."""
        return 2.0 * math.pi / self.omega

    @property
    def up(self) -> float:
        """Ponderomotive energy of the strong 2w field alone."""
        return self.a_2w ** 2 / 4.0

    @property
    def cutoff_px(self) -> float:
        """Classical direct-electron momentum cutoff |p_x| = 2 sqrt(Up)."""
        return 2.0 * math.sqrt(self.up)

    def with_theta(self, theta: float) -> "FieldConfig":
        return replace(self, theta=theta)


def intensity_to_amplitude(intensity_wcm2: float) -> float:
    """Peak-field amplitude in a.u. for a cycle-averaged intensity in W/cm^2."""
    if intensity_wcm2 < 0.0:
        raise ValueError(f"intensity must be nonnegative, got {intensity_wcm2}")
    return math.sqrt(intensity_wcm2 / INTENSITY_WCM2_PER_AU)


def squeezing_from_intensity(i_squ: float, g: float) -> float:
    """Squeezing parameter r with mean intensity I_squ = g^2 sinh^2(r) (a.u.)."""
    if g <= 0.0:
        raise ValueError(f"coupling g must be positive, got {g}")
    if i_squ < 0.0:
        raise ValueError(f"I_squ must be nonnegative, got {i_squ}")
    return math.asinh(math.sqrt(i_squ) / g)


def intensity_from_squeezing(r: float, g: float) -> float:
    """Inverse of squeezing_from_intensity: I_squ = g^2 sinh^2 r."""
    if g <= 0.0:
        raise ValueError(f"coupling g must be positive, got {g}")
    return (g * math.sinh(r)) ** 2


def config_for_drive(
    omega: float,
    intensity_2w_wcm2: float,
    g_w: float = 1e-8,
    theta: float = 0.0,
) -> FieldConfig:
    """FieldConfig whose 2w component has the requested intensity."""
    e_2w = intensity_to_amplitude(intensity_2w_wcm2)
    cfg = FieldConfig(omega=omega, g_w=g_w, theta=theta)
    return replace(cfg, alpha_2w=e_2w / (2.0 * cfg.g_2w))


# --- weak-field parameter maps -------------------------------------------
#
# All three weak-field states are matched at equal mean intensity: a weak
# field of cycle-averaged intensity I (W/cm^2) has amplitude E0 = sqrt(I/C),
# and <E^2> = E0^2/2 requires
#   coherent   alpha0  = E0 / (2 g)
#   squeezed   sinh(r) = E0 / (2 g)
#   thermal    nbar    = (E0 / (2 g))^2

def coherent_alpha0_for_intensity(intensity_wcm2: float, g: float) -> float:
    if g <= 0.0:
        raise ValueError(f"coupling g must be positive, got {g}")
    return intensity_to_amplitude(intensity_wcm2) / (2.0 * g)


def squeezing_for_intensity(intensity_wcm2: float, g: float) -> float:
    e0 = intensity_to_amplitude(intensity_wcm2)
    return squeezing_from_intensity((0.5 * e0) ** 2, g)


def nbar_for_intensity(intensity_wcm2: float, g: float) -> float:
    if g <= 0.0:
        raise ValueError(f"coupling g must be positive, got {g}")
    return (intensity_to_amplitude(intensity_wcm2) / (2.0 * g)) ** 2


def g_for_squeezing_and_intensity(r: float, intensity_wcm2: float) -> float:
    """Coupling g that pairs a given r with a given mean weak-field intensity."""
    if r <= 0.0:
        raise ValueError(f"r must be positive, got {r}")
    return intensity_to_amplitude(intensity_wcm2) / (2.0 * math.sinh(r))


# --- harmonic table -------------------------------------------------------

def vector_harmonics(cfg: FieldConfig, alpha: complex) -> np.ndarray:
    """Coefficients A_k of A(t) = sum_{k=-2}^{2} A_k e^{i k w t} (index k+2).

    The w-mode part is A_w(t) = (2 g_w/w) [ax cos(wt-theta) + ay sin(wt-theta)]
    and the strong part A_2w(t) = (g_2w alpha_2w / w) cos(2wt).
    """
    ax = alpha.real
    ay = alpha.imag
    b = 2.0 * cfg.g_w / cfg.omega
    ct, st = math.cos(cfg.theta), math.sin(cfg.theta)
    a_cos = b * (ax * ct - ay * st)
    a_sin = b * (ax * st + ay * ct)
    a2 = 0.5 * cfg.g_2w * cfg.alpha_2w / cfg.omega
    coeffs = np.zeros(5, dtype=np.complex128)
    coeffs[0] = a2                            # k = -2
    coeffs[1] = 0.5 * (a_cos + 1j * a_sin)    # k = -1
    coeffs[3] = 0.5 * (a_cos - 1j * a_sin)    # k = +1
    coeffs[4] = a2                            # k = +2
    return coeffs


def _harmonic_eval(coeffs: np.ndarray, omega: float, t) -> np.ndarray | complex:
    t = np.asarray(t, dtype=np.complex128)
    u = np.exp(1j * omega * t)
    acc = np.zeros_like(t)
    for k in (-2, -1, 1, 2):
        acc = acc + coeffs[k + 2] * u ** k
    return acc if acc.ndim else complex(acc)


def vector_potential(t, cfg: FieldConfig, alpha: complex = 0.0):
    """A(t) (x component), valid for real or complex t."""
    return _harmonic_eval(vector_harmonics(cfg, alpha), cfg.omega, t)


def electric_field(t, cfg: FieldConfig, alpha: complex = 0.0):
    """E(t) = -dA/dt (x component), valid for real or complex t."""
    a = vector_harmonics(cfg, alpha)
    k = np.arange(-2, 3)
    e = -1j * k * cfg.omega * a
    return _harmonic_eval(e, cfg.omega, t)
