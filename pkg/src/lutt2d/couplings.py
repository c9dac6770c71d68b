"""Derived constants of the effective model: expanded dispersions, coupling
constants, per-flavor chemical potentials and fillings, normal-ordering
constants, validity and symmetry checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import SQRT2, ModelParams, dispersion_diag
from .partition import (FLAVORS, FlavorIndex, PartitionParams, area_fractions,
                        region_mode_counts)
from .vertices import fock_coupling


def epsilon_at_q(f: FlavorIndex, Q: float, params: ModelParams) -> float:
    """Band energy at the flavor base point: 4t' antinodal,
    -4[t cosQ + t' cos^2 Q] nodal, 4(rt - t') in/out."""
    t, tp = params.t, params.t_prime
    if f.s == 0:
        return 4.0 * tp
    if f.s == 2:
        return 4.0 * (f.r * t - tp)
    c = math.cos(Q)
    return -4.0 * (t * c + tp * c * c)


def linearized_dispersion(f: FlavorIndex, k_diag, cs: "CouplingSet"):
    """Leading Taylor dispersion about the flavor base point.

    k_diag is (k_plus, k_minus); scalars or arrays.  The antinodal branch is
    the saddle -r c_F k+ k- - c_F'(k+^2 + k-^2); the nodal branches are linear
    r v_F k_s; the in/out bands are the paraboloids (-r c_F/2 + c_F')|k|^2.
    """
    kp = np.asarray(k_diag[0], dtype=float)
    km = np.asarray(k_diag[1], dtype=float)
    if f.s == 0:
        return -f.r * cs.c_F * kp * km - cs.c_F_prime * (kp * kp + km * km)
    if f.s == 2:
        return (-0.5 * f.r * cs.c_F + cs.c_F_prime) * (kp * kp + km * km)
    ks = kp if f.s == 1 else km
    return f.r * cs.v_F * ks


def fillings(pp: PartitionParams, params: ModelParams
             ) -> tuple[dict[FlavorIndex, float], float]:
    """Closed-form per-flavor fillings and the total filling factor.

    nu_{r,0} = nu_a kappa^2/2, nu_{r,+-} = (1-kappa)(2Q/pi - 1 + kappa)/4,
    nu_{-,2} = (1-kappa)^2/2, nu_{+,2} = 0;
    nu = 1/2 + (1-kappa)(2Q/pi - 1) + kappa^2 (nu_a - 1/2).
    """
    pp.validate(params)
    kap = pp.kappa(params)
    qfrac = 2.0 * pp.Q(params) / math.pi
    nu_rs = {}
    for f in FLAVORS:
        if f.s == 0:
            nu_rs[f] = 0.5 * pp.nu_a * kap * kap
        elif f.s in (1, -1):
            nu_rs[f] = 0.25 * (1.0 - kap) * (qfrac - 1.0 + kap)
        else:
            nu_rs[f] = 0.5 * (1.0 - kap) ** 2 if f.r == -1 else 0.0
    nu = 0.5 + (1.0 - kap) * (qfrac - 1.0) + kap * kap * (pp.nu_a - 0.5)
    return nu_rs, nu


def _coupling_interaction_sums(pp, params, nu_rs):
    """D_{r,s} = sum_{r',s'} v_{r,s,r',s'} (f_{r',s'} - 2 nu_{r',s'})."""
    fr = area_fractions(pp, params)
    D = {}
    for f in FLAVORS:
        D[f] = sum(fock_coupling(f, g, pp, params) * (fr[g] - 2.0 * nu_rs[g])
                   for g in FLAVORS)
    return D


def chemical_potentials(params: ModelParams, pp: PartitionParams):
    """Per-flavor chemical potentials with the nodal points pinned on the Fermi
    surface (mu_{r,+-} = 0), plus the implied bare chemical potential.

    Returns (mu0, mu_plus2, mu_minus2, mu_rs, mu_bare).  The general evaluation
    is cross-checked against the closed forms for mu0 and mu_{+-,2} to 1e-12
    relative.
    """
    pp.validate(params)
    nu_rs, nu = fillings(pp, params)
    D = _coupling_interaction_sums(pp, params, nu_rs)
    Q = pp.Q(params)
    f_node = FlavorIndex(+1, 1)
    mu_bare = (epsilon_at_q(f_node, Q, params) + 2.0 * params.V * nu + D[f_node])
    mu_rs = {}
    for f in FLAVORS:
        mu_rs[f] = mu_bare - epsilon_at_q(f, Q, params) - 2.0 * params.V * nu - D[f]

    t, tp, V = params.t, params.t_prime, params.V
    kap = pp.kappa(params)
    qfrac = 2.0 * Q / math.pi
    c = math.cos(Q)
    mu0_closed = (-4.0 * tp - (4.0 * t + V * (1.0 - kap) ** 2) * c
                  - (4.0 * tp + 2.0 * V * (1.0 - kap) * (qfrac - 1.0)) * c * c)
    bracket = 4.0 * t + V * (1.0 - kap) * ((1.0 - kap) + 2.0 * (qfrac - 1.0) * c)
    mu_p2_closed = -bracket * (1.0 + c) + 4.0 * tp * math.sin(Q) ** 2
    mu_m2_closed = +bracket * (1.0 - c) + 4.0 * tp * math.sin(Q) ** 2

    scale = max(abs(params.t), abs(V))
    for general, closed, name in ((mu_rs[FlavorIndex(+1, 0)], mu0_closed, "mu0"),
                                  (mu_rs[FlavorIndex(+1, 2)], mu_p2_closed, "mu_{+,2}"),
                                  (mu_rs[FlavorIndex(-1, 2)], mu_m2_closed, "mu_{-,2}")):
        if abs(general - closed) > 1e-12 * max(abs(closed), scale):
            raise RuntimeError(f"{name} closed form disagrees with the general "
                               f"evaluation: {closed} vs {general}")
    return mu0_closed, mu_p2_closed, mu_m2_closed, mu_rs, mu_bare


@dataclass(frozen=True)
class CouplingSet:
    """All derived constants of the effective model, with the generating
    parameters attached for downstream spectral evaluations."""

    params: ModelParams
    partition: PartitionParams
    v_F: float
    c_F: float
    c_F_prime: float
    a_tilde: float
    gamma: float
    g1: float
    g2: float
    g3: float
    g4: float
    g_eff: float
    mu0: float
    mu_plus2: float
    mu_minus2: float
    mu_bare: float
    mu_rs: dict[FlavorIndex, float] = field(repr=False)
    nu_rs: dict[FlavorIndex, float] = field(repr=False)
    nu: float = 0.0
    E0_const: float = 0.0
    E_int: float = 0.0

    @property
    def kappa(self) -> float:
        return self.partition.kappa(self.params)

    @property
    def Q(self) -> float:
        return self.partition.Q(self.params)


def derive_couplings(params: ModelParams, pp: PartitionParams,
                     with_sea_energy: bool = True) -> CouplingSet:
    """Compute the full coupling set.

    Raises ValueError when gamma >= 1 (the bosonized model is defined only for
    gamma < 1) or kappa = 1.  The two closed forms of g_eff are cross-checked
    to 1e-13 relative.
    """
    pp.validate(params)
    t, tp, V, a = params.t, params.t_prime, params.V, params.a
    kap = pp.kappa(params)
    Q = pp.Q(params)
    if kap >= 1.0:
        raise ValueError("kappa = 1 is outside the admissible range")
    sQ, cQ = math.sin(Q), math.cos(Q)
    vel = t + 2.0 * tp * cQ
    v_F = 2.0 * SQRT2 * sQ * vel * a
    gamma = V * (1.0 - kap) * sQ / (2.0 * math.pi * vel)
    if gamma >= 1.0:
        raise ValueError(f"gamma = {gamma:.6g} >= 1: bosonized model undefined")
    a_tilde = SQRT2 * a / (1.0 - kap)
    g1 = 2.0 * V * a * a * sQ * sQ
    g2 = 0.5 * g1
    g3 = 2.0 * V * a * a
    g4 = g3
    g_eff = V * V * (1.0 - kap) * a * a / (
        sQ * math.pi * (t + 2.0 * tp * cQ + V / math.pi * (1.0 - kap) * sQ))
    g_eff_alt = g4 * g4 / (math.pi * a_tilde * v_F * (1.0 + 2.0 * gamma))
    if abs(g_eff - g_eff_alt) > 1e-13 * abs(g_eff):
        raise RuntimeError(f"g_eff closed forms disagree: {g_eff} vs {g_eff_alt}")

    mu0, mu_p2, mu_m2, mu_rs, mu_bare = chemical_potentials(params, pp)
    nu_rs, nu = fillings(pp, params)
    E0, E_int = dirac_sea_energy(params, pp, mu_bare) if with_sea_energy else (0.0, 0.0)
    return CouplingSet(params=params, partition=pp, v_F=v_F, c_F=2.0 * t * a * a,
                       c_F_prime=2.0 * tp * a * a, a_tilde=a_tilde, gamma=gamma,
                       g1=g1, g2=g2, g3=g3, g4=g4, g_eff=g_eff,
                       mu0=mu0, mu_plus2=mu_p2, mu_minus2=mu_m2, mu_bare=mu_bare,
                       mu_rs=mu_rs, nu_rs=nu_rs, nu=nu,
                       E0_const=E0, E_int=E_int)


# --- Dirac-sea (normal-ordering) constants -----------------------------------

def _region_offsets(f: FlavorIndex, pp: PartitionParams, params: ModelParams):
    """Integer offset grids (m_plus, m_minus) of the flavor rectangle."""
    nk, n_L = pp.n_kappa, params.n_L
    narrow = np.arange(-nk - 1, nk)         # |m+1| <= nk
    wide = np.arange(-(n_L - nk - 1) - 1, n_L - nk - 1)
    if f.s == 0:
        gp, gm = narrow, narrow
    elif f.s == 2:
        gp, gm = wide, wide
    else:
        shift = f.r * (pp.n_Q - n_L)
        shifted = np.arange(-shift - nk - 1, -shift + nk)
        if f.s == 1:
            gp, gm = shifted, wide
        else:
            gp, gm = wide, shifted
    MP, MM = np.meshgrid(gp, gm, indexing="ij")
    return MP.ravel(), MM.ravel()


def sea_occupation(f: FlavorIndex, pp: PartitionParams, params: ModelParams,
                   cs_kin: tuple[float, float, float]):
    """Offsets (m_plus, m_minus) and a boolean filled mask for the flavor's
    reference sea.

    Nodal seas fill r*k_s < 0; the in band is full and the out band empty; the
    antinodal sea deterministically fills the round(nu_a * N) lowest states of
    the saddle dispersion (any equal-count choice leaves the sea sums
    unchanged within degenerate levels).
    """
    v_F, c_F, c_Fp = cs_kin
    mp, mm = _region_offsets(f, pp, params)
    d = params.delta
    kp, km = d * (mp + 0.5), d * (mm + 0.5)
    if f.s in (1, -1):
        ks = kp if f.s == 1 else km
        filled = f.r * ks < 0.0
    elif f.s == 2:
        filled = np.full(mp.shape, f.r == -1)
    else:
        energy = -f.r * c_F * kp * km - c_Fp * (kp * kp + km * km)
        order = np.lexsort((mm, mp, energy))  # energy-major, deterministic ties
        n_fill = int(math.floor(pp.nu_a * mp.size + 0.5))
        filled = np.zeros(mp.shape, dtype=bool)
        filled[order[:n_fill]] = True
    return mp, mm, kp, km, filled


def dirac_sea_energy(params: ModelParams, pp: PartitionParams,
                     mu_bare: float) -> tuple[float, float]:
    """Normal-ordering constants (E0, E_int) from the exact finite sums.

    E0 = sum over filled states of [eps(Q_{r,s}) + E_{r,s}(k)] + E_int with
    E_int = (L/a)^2 (V nu^2 - mu nu + sum v nu (f - nu)) evaluated with the
    actual per-flavor counts of the reference sea.
    """
    pp.validate(params)
    t, a = params.t, params.a
    kin_consts = (2.0 * SQRT2 * math.sin(pp.Q(params))
                  * (t + 2.0 * params.t_prime * math.cos(pp.Q(params))) * a,
                  2.0 * t * a * a, 2.0 * params.t_prime * a * a)
    Q = pp.Q(params)
    n_sites = params.n_sites
    fr = area_fractions(pp, params)

    kinetic = 0.0
    nu_hat = {}
    for f in FLAVORS:
        _, _, kp, km, filled = sea_occupation(f, pp, params, kin_consts)
        v_F, c_F, c_Fp = kin_consts
        if f.s == 0:
            e_k = -f.r * c_F * kp * km - c_Fp * (kp * kp + km * km)
        elif f.s == 2:
            e_k = (-0.5 * f.r * c_F + c_Fp) * (kp * kp + km * km)
        else:
            ks = kp if f.s == 1 else km
            e_k = f.r * v_F * ks
        kinetic += float(np.sum(e_k[filled])) + epsilon_at_q(f, Q, params) * int(filled.sum())
        nu_hat[f] = filled.sum() / n_sites

    nu_tot = sum(nu_hat.values())
    inter = sum(fock_coupling(f, g, pp, params) * nu_hat[f] * (fr[g] - nu_hat[g])
                for f in FLAVORS for g in FLAVORS)
    E_int = n_sites * (params.V * nu_tot * nu_tot - mu_bare * nu_tot + inter)
    return kinetic + E_int, E_int


# --- validity and symmetry ----------------------------------------------------

@dataclass(frozen=True)
class ValidityReport:
    passed: bool
    slack_in: float
    slack_out: float
    margin: float
    note: str


def validity_check(params: ModelParams, pp: PartitionParams,
                   margin: float | None = None) -> ValidityReport:
    """Check that the in band sits fully below and the out band fully above the
    Fermi level by at least `margin` (default t/5).

    Physical orientation: filled in band requires mu_{-,2} >= max E_{-,2} +
    margin, empty out band requires mu_{+,2} <= min E_{+,2} - margin.  The
    opposite sign convention is sometimes quoted for these inequalities; the
    report's note records that the orientation used here is the one consistent
    with the band curvatures.
    """
    if margin is None:
        margin = params.t / 5.0
    cs = derive_couplings(params, pp, with_sea_energy=False)
    kmax = (1.0 - cs.kappa) * math.pi / (SQRT2 * params.a)  # corner of the s=2 region
    k2 = 2.0 * kmax * kmax
    e_in_max = (0.5 * cs.c_F + cs.c_F_prime) * k2   # r = -1 paraboloid top
    e_in_max = max(e_in_max, 0.0)
    e_out_min = (-0.5 * cs.c_F + cs.c_F_prime) * k2  # r = +1 inverted paraboloid bottom
    e_out_min = min(e_out_min, 0.0)
    slack_in = cs.mu_minus2 - e_in_max
    slack_out = e_out_min - cs.mu_plus2
    passed = slack_in >= margin and slack_out >= margin
    note = ("in-band filled/out-band empty orientation: mu_{-,2} above the in-band "
            "top and mu_{+,2} below the out-band bottom (the reversed printed "
            "convention mu_{-,2} << 0, mu_{+,2} >> 0 disagrees with the band "
            "curvatures and is not used)")
    return ValidityReport(passed, slack_in, slack_out, margin, note)


def particle_hole_map(params: ModelParams, pp: PartitionParams
                      ) -> tuple[ModelParams, PartitionParams]:
    """Particle-hole image of the parameters:
    (t, t', nu, mu, V) -> (t, -t', 1-nu, 2V-mu, V) and Q -> pi - Q,
    nu_a -> 1 - nu_a.  An involution; Q' is always on the quantization grid."""
    pp.validate(params)
    n_Q_new = 2 * params.n_L - pp.n_Q
    if not 1 <= n_Q_new <= 2 * params.n_L - 1:
        raise ValueError("mapped Q = pi - Q off the quantization grid")
    p_new = ModelParams(t=params.t, t_prime=-params.t_prime, V=params.V,
                        mu=2.0 * params.V - params.mu, a=params.a, n_L=params.n_L)
    pp_new = PartitionParams(n_kappa=pp.n_kappa, n_Q=n_Q_new,
                             nu_a=1.0 - pp.nu_a, b1=pp.b1, b2=pp.b2)
    return p_new, pp_new.validate(p_new)
