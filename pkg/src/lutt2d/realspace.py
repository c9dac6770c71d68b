"""Real-space/imaginary-time effective potential via the angular special
function f_gamma.

v_eff(tau, x) = -g_eff / (v_F^2 |tau|^3) * f_gamma(phi, |x|/(sqrt(1-gamma^2) v_F |tau|))
with (x_+, x_-) = |x| (cos phi, sin phi) and

f_gamma(phi, x) = (1+2 gamma) / (8 pi (1+gamma)(1-gamma^2)) *
    int_0^{2pi} dchi/(2pi) sum_s (1 + s w)(e_s^2 - 3 x^2 cos^2(chi-phi))
                                 / (e_s^2 + x^2 cos^2(chi-phi))^3,

e_pm = sqrt((1 +- eta)/2), w = (cos^2 2chi + gamma)/((1+gamma) eta),
eta = sqrt(1 - A sin^2 2chi), A = 1 - gamma^2/(1+gamma)^2.

The chi-integrand has soft directions at sin 2chi = 0 where e_- vanishes; the
midpoint-offset quadrature never evaluates there.  At x = 0 the integral
diverges, and on the symmetry axes phi in (pi/2) Z it diverges for every x;
away from those angles the converged integral is finite (and vanishes
linearly as x -> 0, while fixed-resolution sampling saturates instead --
see the convergence notes in the README).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .couplings import CouplingSet


@dataclass(frozen=True)
class QuadratureSpec:
    """Midpoint-offset periodic-trapezoid rule on [0, 2*pi) with n_nodes nodes."""

    n_nodes: int = 2048

    def __post_init__(self):
        if self.n_nodes < 64 or self.n_nodes % 2:
            raise ValueError("n_nodes must be even and >= 64")

    def nodes(self) -> np.ndarray:
        return (np.arange(self.n_nodes) + 0.5) * (2.0 * math.pi / self.n_nodes)


def f_gamma(phi: float, x: float, gamma: float,
            spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Angular kernel of the real-space effective potential.

    Deterministic for a fixed spec.  x must be positive (the x = 0 integrand
    is divergent; probe the blow-up by sampling small x instead).
    """
    if x <= 0.0:
        raise ValueError("x must be positive (integrand divergent at x = 0)")
    if not 0.0 <= gamma < 1.0:
        raise ValueError("gamma must lie in [0, 1)")
    chi = spec.nodes()
    A = 1.0 - gamma ** 2 / (1.0 + gamma) ** 2
    eta = np.sqrt(1.0 - A * np.sin(2.0 * chi) ** 2)
    w = (np.cos(2.0 * chi) ** 2 + gamma) / ((1.0 + gamma) * eta)
    c2 = (x * np.cos(chi - phi)) ** 2
    tot = np.zeros_like(chi)
    for s in (1.0, -1.0):
        e2 = 0.5 * (1.0 + s * eta)
        tot += (1.0 + s * w) * (e2 - 3.0 * c2) / (e2 + c2) ** 3
    pref = (1.0 + 2.0 * gamma) / (8.0 * math.pi * (1.0 + gamma) * (1.0 - gamma ** 2))
    return pref * float(np.mean(tot))


def veff_xt(tau: float, x, cs: CouplingSet,
            spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Real-space, imaginary-time effective potential.

    x is the diagonal-component pair (x_+, x_-); tau != 0.
    """
    if tau == 0.0:
        raise ValueError("tau must be nonzero")
    xp, xm = float(x[0]), float(x[1])
    r = math.hypot(xp, xm)
    if r == 0.0:
        raise ValueError("x = 0 not representable (kernel divergent)")
    phi = math.atan2(xm, xp)
    arg = r / (math.sqrt(1.0 - cs.gamma ** 2) * cs.v_F * abs(tau))
    return (-cs.g_eff / (cs.v_F ** 2 * abs(tau) ** 3)
            * f_gamma(phi, arg, cs.gamma, spec))


def time_integral_check(phi: float, gamma: float,
                        y_min: float = 0.04, y_max: float = 200.0,
                        n_coarse: int = 3200,
                        spec: QuadratureSpec = QuadratureSpec(4096)
                        ) -> tuple[float, float]:
    """Time sum rule in scaling form.

    The full imaginary-time integral of v_eff at x != 0 is proportional to
    int_0^inf y f_gamma(phi, y) dy, which vanishes identically (the potential
    time-averages to a contact term).  Returns (I, I_abs): the signed integral
    including the analytic small-y tail (f ~ c y there, i.e. the 1/tau^4 large-
    time tail of v_eff) and the integral of |y f| as the normalization scale.
    """
    ys = np.concatenate([
        np.geomspace(y_min, 1.0, n_coarse // 4, endpoint=False),
        np.linspace(1.0, y_max, n_coarse),
    ])
    big = QuadratureSpec(max(spec.n_nodes, 1 << 17))
    fv = np.array([f_gamma(phi, float(y), gamma, big if y < 0.2 else spec)
                   for y in ys])
    yf = ys * fv
    I = float(np.trapezoid(yf, ys))
    I_abs = float(np.trapezoid(np.abs(yf), ys))
    # small-y tail: f ~ c*y so int_0^{y_min} y f dy = c y_min^3 / 3
    c_lin = fv[0] / ys[0]
    I += c_lin * ys[0] ** 3 / 3.0
    return I, I_abs
