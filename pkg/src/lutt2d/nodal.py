"""Bosonized nodal sector: closed-form boson dispersion, numerical symplectic
oracle, ground-state energy, and the regularized free energy.

Zero modes (p_s = 0 for branch s) are excluded throughout.  On the axes
p_+ p_- = 0 the two-branch closed form degenerates; there the surviving branch
carries the decoupled frequency v_F sqrt(1 - gamma^2 chi_s) |p_s|, which is
what both the positivity of the spectrum and the symplectic oracle require.
"""
from __future__ import annotations

import math
from typing import Iterator

import numpy as np

from .couplings import CouplingSet
from .lattice import Kind, MomentumIndex
from .partition import cutoff_chi_real, in_C_s_real


def _diag_of(p, cs: CouplingSet) -> tuple[float, float]:
    if isinstance(p, MomentumIndex):
        if p.kind is not Kind.BOSONIC:
            raise ValueError("boson momenta must be bosonic")
        return p.diag(cs.params)
    return float(p[0]), float(p[1])


def _a_const(gamma: float) -> float:
    return 1.0 - gamma ** 2 / (1.0 + gamma) ** 2


def omega_closed(s: int, p, cs: CouplingSet) -> float:
    """Boson dispersion omega_s(p) for branch s = +-1 at bosonic momentum p.

    Inside the doubly-cutoff (coupled) region:
        omega_s = v_F sqrt((1-gamma^2)/2) sqrt(|p|^2 + s sqrt(|p|^4 - A (2 p+ p-)^2)),
        A = 1 - gamma^2/(1+gamma)^2.
    Where only chi_s is active: v_F sqrt(1-gamma^2) |p_s|; where chi_s = 0:
    v_F |p_s|.  Raises on zero modes (p_s = 0) and outside C_s.
    """
    pp_, pm_ = _diag_of(p, cs)
    ps = pp_ if s == 1 else pm_
    if ps == 0.0:
        raise ValueError("zero mode p_s = 0 is excluded")
    if not in_C_s_real(s, pp_, pm_, cs.partition, cs.params):
        raise ValueError("p outside the branch domain C_s")
    chi_s = cutoff_chi_real(s, pp_, pm_, cs.partition, cs.params)
    chi_o = cutoff_chi_real(-s, pp_, pm_, cs.partition, cs.params)
    g = cs.gamma
    if chi_s and chi_o and pp_ * pm_ != 0.0:
        p2 = pp_ * pp_ + pm_ * pm_
        root = math.sqrt(max(p2 * p2 - _a_const(g) * (2.0 * pp_ * pm_) ** 2, 0.0))
        return cs.v_F * math.sqrt(0.5 * (1.0 - g * g) * (p2 + s * root))
    if chi_s:
        return cs.v_F * math.sqrt(1.0 - g * g) * abs(ps)
    return cs.v_F * abs(ps)


def bogoliubov_numeric(p, cs: CouplingSet) -> dict[int, float]:
    """Symplectic eigenvalues of the quadratic boson form at momentum p.

    Builds the mass matrix M = v_F diag(1 - gamma chi_s) and stiffness
    K = v_F [(1 + gamma chi_s) p_s^2 delta_ss' + gamma chi+ chi- p+ p- off-diag]
    over the branches present at p (p in C_s, p_s != 0), and returns
    sqrt(eig(M^{1/2} K M^{1/2})) keyed by branch, the larger eigenvalue on the
    + branch.  Raises if the form is not positive definite (gamma >= 1).
    """
    pp_, pm_ = _diag_of(p, cs)
    comp = {1: pp_, -1: pm_}
    branches = [s for s in (1, -1)
                if comp[s] != 0.0 and in_C_s_real(s, pp_, pm_, cs.partition, cs.params)]
    if not branches:
        raise ValueError("no boson mode at this momentum")
    g = cs.gamma
    chi = {s: cutoff_chi_real(s, pp_, pm_, cs.partition, cs.params) for s in (1, -1)}
    n = len(branches)
    M = np.zeros((n, n))
    K = np.zeros((n, n))
    for i, s in enumerate(branches):
        M[i, i] = cs.v_F * (1.0 - g * chi[s])
        K[i, i] = cs.v_F * (1.0 + g * chi[s]) * comp[s] ** 2
    if n == 2:
        cross = cs.v_F * g * chi[1] * chi[-1] * pp_ * pm_
        K[0, 1] = K[1, 0] = cross
    for mat, name in ((M, "mass"), (K, "stiffness")):
        if np.any(np.linalg.eigvalsh(mat) <= 0.0):
            raise ValueError(f"{name} matrix not positive definite (gamma >= 1?)")
    mw, mv = np.linalg.eigh(M)
    Ms = mv @ np.diag(np.sqrt(mw)) @ mv.T
    freq2 = np.linalg.eigvalsh(Ms @ K @ Ms)
    freqs = np.sqrt(freq2)
    if n == 1:
        return {branches[0]: float(freqs[0])}
    return {1: float(freqs[1]), -1: float(freqs[0])}


def boson_modes(cs: CouplingSet, extra_ring: int = 0) -> Iterator[tuple[int, MomentumIndex]]:
    """Modes (s, p) with p in C_s, p_s != 0, within the chi_s support plus an
    optional ring of `extra_ring` grid steps in the |p_s| direction.

    Deterministic order: branch +1 first, then lexicographic (m_plus, m_minus).
    """
    params, pp = cs.params, cs.partition
    n_L, nk = params.n_L, pp.n_kappa
    long_cap = int(math.floor(pp.b1 * (nk + 0.5))) + extra_ring
    perp_cap = n_L - nk - 1
    for s in (1, -1):
        for m_long in range(-long_cap, long_cap + 1):
            if m_long == 0:
                continue
            for m_perp in range(-perp_cap, perp_cap + 1):
                mp, mm = (m_long, m_perp) if s == 1 else (m_perp, m_long)
                yield s, MomentumIndex(mp, mm, Kind.BOSONIC)


def ground_energy(cs: CouplingSet) -> float:
    """Nodal ground-state energy E_n = (1/2) sum_{s, p in C_s} [omega_s(p) - v_F |p_s|].

    The summand vanishes identically where chi_s = 0, so the sum over the
    cutoff support is exact with no truncation error.
    """
    terms = []
    for s, p in boson_modes(cs):
        pp_, pm_ = p.diag(cs.params)
        ps = pp_ if s == 1 else pm_
        terms.append(omega_closed(s, p, cs) - cs.v_F * abs(ps))
    return 0.5 * math.fsum(terms)


def _log_sinh(x: np.ndarray) -> np.ndarray:
    """log(sinh x) for x > 0, overflow-safe."""
    return x + np.log1p(-np.exp(-2.0 * x)) - math.log(2.0)


def free_energy(beta: float, cs: CouplingSet, beta0: float | None = None,
                window: int | None = None) -> float:
    """Regularized nodal free energy per area, -log(Z_n)/(beta L^2), with
    Z_n = prod_{s, p in C_s} sinh^2(beta0 v_F |p_s|/2) / sinh^2(beta omega_s(p)/2).

    With the default beta0 = beta every mode with omega = v_F |p_s| contributes
    a factor 1 and the product is finite without truncation.  For beta0 != beta
    the product runs over infinitely many modes, so a finite window (max |m_s|
    in grid steps beyond the cutoff support) must be supplied.

    As beta -> infinity (beta0 = beta), -log(Z_n)/beta tends to
    sum_{s,p} [omega_s - v_F |p_s|] which is twice the ground energy E_n --
    the sinh^2 pairing counts each real mode's two Fourier components.
    """
    if beta <= 0 or (beta0 is not None and beta0 <= 0):
        raise ValueError("inverse temperatures must be positive")
    same = beta0 is None or beta0 == beta
    if not same and window is None:
        raise ValueError("beta0 != beta makes the untruncated product diverge; "
                         "supply an explicit window")
    b0 = beta if same else beta0
    ring = 0 if same else int(window)
    terms = []
    for s, p in boson_modes(cs, extra_ring=ring):
        pp_, pm_ = p.diag(cs.params)
        ps = abs(pp_ if s == 1 else pm_)
        om = omega_closed(s, p, cs)
        if same and om == cs.v_F * ps:
            continue
        terms.append(2.0 * (_log_sinh(np.float64(0.5 * b0 * cs.v_F * ps))
                            - _log_sinh(np.float64(0.5 * beta * om))))
    logZ = math.fsum(float(t) for t in terms)
    return -logZ / (beta * cs.params.L ** 2)


def spectrum_table(cs: CouplingSet, extra_ring: int = 2
                   ) -> dict[tuple[int, MomentumIndex], float]:
    """omega_s(p) over the cutoff support plus a ring of free modes."""
    return {(s, p): omega_closed(s, p, cs) for s, p in boson_modes(cs, extra_ring)}
