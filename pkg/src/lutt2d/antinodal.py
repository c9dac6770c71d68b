"""Boson-mediated effective interactions for the antinodal fermions: the
frequency-dependent potential, its static limit (piecewise constant), the
energy-resolved Bardeen-Pines form, and the renormalized coupling g3 - g_eff.

The boson-exchange weights W_s pair with the dispersion branches omega_s.
Where both cutoff functions are active the two branches are coupled and

    W_s = (v_F^2 (1-gamma)/4) [ |p|^2 + s ((p+^2-p-^2)^2 + gamma |p|^4)
                                    / ((1+gamma) sqrt(|p|^4 - A (2 p+ p-)^2)) ];

where only chi_s is active, W_s = v_F^2 (1-gamma) p_s^2 / 2; otherwise 0.
These normalizations make the exact static collapse hold:
v_eff(0, p) = -g_eff inside, -g_eff (1/2+gamma)/(1+gamma) in the single-branch
ring, 0 outside.
"""
from __future__ import annotations

import math

from .couplings import CouplingSet, linearized_dispersion
from .lattice import SQRT2, Kind, MomentumIndex
from .nodal import _a_const, omega_closed
from .partition import BosonRegion, FlavorIndex, boson_region, cutoff_chi_real


def _diag_of(p, cs: CouplingSet) -> tuple[float, float]:
    if isinstance(p, MomentumIndex):
        if p.kind is not Kind.BOSONIC:
            raise ValueError("expected a bosonic momentum")
        return p.diag(cs.params)
    return float(p[0]), float(p[1])


def W(s: int, p, cs: CouplingSet) -> float:
    """Boson-exchange weight W_s(p); 0 outside the cutoff support of branch s."""
    pp_, pm_ = _diag_of(p, cs)
    chi_s = cutoff_chi_real(s, pp_, pm_, cs.partition, cs.params)
    if not chi_s:
        return 0.0
    g = cs.gamma
    ps = pp_ if s == 1 else pm_
    if not cutoff_chi_real(-s, pp_, pm_, cs.partition, cs.params):
        return 0.5 * cs.v_F ** 2 * (1.0 - g) * ps * ps
    p2 = pp_ * pp_ + pm_ * pm_
    if p2 == 0.0:
        return 0.0
    if pp_ * pm_ == 0.0:
        # axis limit of the coupled form: the + branch carries everything
        return 0.5 * cs.v_F ** 2 * (1.0 - g) * p2 if s == 1 else 0.0
    root = math.sqrt(max(p2 * p2 - _a_const(g) * (2.0 * pp_ * pm_) ** 2, 0.0))
    num = (pp_ * pp_ - pm_ * pm_) ** 2 + g * p2 * p2
    return 0.25 * cs.v_F ** 2 * (1.0 - g) * (p2 + s * num / ((1.0 + g) * root))


def _active_pairs(p, cs: CouplingSet):
    """(W_s, omega_s) over branches with nonvanishing weight at p."""
    pp_, pm_ = _diag_of(p, cs)
    out = []
    for s in (1, -1):
        w_s = W(s, (pp_, pm_), cs)
        if w_s > 0.0:
            out.append((w_s, omega_closed(s, (pp_, pm_), cs)))
    return out


def veff_hat(omega: float, p, cs: CouplingSet) -> float:
    """Fourier-transformed effective antinodal potential
    -(g4^2/(pi a~ v_F)) sum_s W_s(p) / (omega^2 + omega_s(p)^2).

    At p = 0 the boson modes degenerate into zero modes; the value is defined
    by the p -> 0 limit, -g_eff at omega = 0 and 0 otherwise.
    """
    pp_, pm_ = _diag_of(p, cs)
    if pp_ == 0.0 and pm_ == 0.0:
        return -cs.g_eff if omega == 0.0 else 0.0
    pref = cs.g4 ** 2 / (math.pi * cs.a_tilde * cs.v_F)
    acc = 0.0
    for w_s, om_s in _active_pairs((pp_, pm_), cs):
        acc += w_s / (omega * omega + om_s * om_s)
    return -pref * acc


def veff_static(p, cs: CouplingSet) -> float:
    """Static effective potential: exactly -g_eff on the doubly-cutoff region,
    -g_eff (1/2 + gamma)/(1 + gamma) on the single-branch ring, 0 outside."""
    pp_, pm_ = _diag_of(p, cs)
    region, _ = boson_region(pp_, pm_, cs.partition, cs.params)
    if region is BosonRegion.INNER:
        return -cs.g_eff
    if region is BosonRegion.MIDDLE:
        return -cs.g_eff * (0.5 + cs.gamma) / (1.0 + cs.gamma)
    return 0.0


def static_support_region(p, cs: CouplingSet) -> BosonRegion:
    pp_, pm_ = _diag_of(p, cs)
    return boson_region(pp_, pm_, cs.partition, cs.params)[0]


def bardeen_pines(r: int, r_prime: int, k, p, cs: CouplingSet,
                  resonance_tol: float = 1e-12) -> float:
    """Energy-resolved boson-exchange potential between antinodal fermions,

    v_{rr'}(k, p) = -(g4^2/(pi a~ v_F)) sum_s [W_s/(2 omega_s)]
                    [1/(omega_s - dE_r(k,p)) + 1/(omega_s + dE_{r'}(k,p))]

    with dE_r(k,p) the saddle-band energy transfer E_{r,0}(k) - E_{r,0}(k-p).
    k and p are diagonal-component pairs; k and k-p must lie in the antinodal
    window |k_pm| <= kappa*pi/(sqrt2 a).  Raises on resonance
    |omega_s - dE| < resonance_tol * omega_s.
    """
    kp, km = float(k[0]), float(k[1])
    pp_, pm_ = _diag_of(p, cs)
    bound = cs.kappa * math.pi / (SQRT2 * cs.params.a) + 0.5 * cs.params.delta
    for name, (xp, xm) in (("k", (kp, km)), ("k-p", (kp - pp_, km - pm_))):
        if abs(xp) > bound or abs(xm) > bound:
            raise ValueError(f"{name} outside the antinodal window")
    fa = FlavorIndex(r, 0)
    fb = FlavorIndex(r_prime, 0)
    dE_r = (linearized_dispersion(fa, (kp, km), cs)
            - linearized_dispersion(fa, (kp - pp_, km - pm_), cs))
    dE_rp = (linearized_dispersion(fb, (kp, km), cs)
             - linearized_dispersion(fb, (kp - pp_, km - pm_), cs))
    if pp_ == 0.0 and pm_ == 0.0:
        return veff_hat(0.0, (0.0, 0.0), cs) if dE_r == 0.0 == dE_rp else 0.0
    pref = cs.g4 ** 2 / (math.pi * cs.a_tilde * cs.v_F)
    acc = 0.0
    for w_s, om_s in _active_pairs((pp_, pm_), cs):
        for dE in (dE_r, -dE_rp):
            if abs(om_s - dE) < resonance_tol * om_s:
                raise ValueError("boson-exchange resonance: omega_s ~ dE")
        acc += w_s / (2.0 * om_s) * (1.0 / (om_s - dE_r) + 1.0 / (om_s + dE_rp))
    return -pref * acc


def renormalized_coupling(cs: CouplingSet) -> float:
    """Effective antinodal density-density coupling g3 - g_eff."""
    return cs.g3 - cs.g_eff
