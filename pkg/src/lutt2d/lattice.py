"""Bare 2D t-t'-V lattice model: momentum grids, tight-binding dispersion,
Fermi-contour extraction.

Momenta live on a diagonal grid: in rotated components k_pm = (k1 +- k2)/sqrt(2),
fermionic momenta are (2*pi/L)*(m +- 1/2) with integer m (antiperiodic boundary
conditions), bosonic momentum transfers are integer multiples of 2*pi/L.  All
set-membership logic downstream works on the integer pairs (m_plus, m_minus);
floating-point vectors are derived on demand.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

SQRT2 = math.sqrt(2.0)


class Kind(Enum):
    FERMIONIC = "fermionic"
    BOSONIC = "bosonic"


@dataclass(frozen=True)
class ModelParams:
    """Bare lattice parameters.

    Parameters
    ----------
    t, t_prime : float
        Nearest- and next-nearest-neighbor hopping energies; t > 0 and
        |2*t_prime/t| < 1 (otherwise the saddle-point structure of the band
        changes and the construction does not apply).
    V : float
        Nearest-neighbor repulsion strength, > 0.
    mu : float
        Bare chemical potential (used by Fermi-contour extraction; the derived
        effective model fixes its own chemical potential).
    a : float
        Lattice constant, > 0.
    n_L : int
        System-size integer; the linear size is L = 2*sqrt(2)*a*n_L and the
        lattice has (L/a)^2 = 8*n_L^2 sites.
    """

    t: float
    t_prime: float = 0.0
    V: float = 1.0
    mu: float = 0.0
    a: float = 1.0
    n_L: int = 10

    def __post_init__(self):
        if self.t <= 0:
            raise ValueError("hopping t must be positive")
        if self.V <= 0:
            raise ValueError("interaction V must be positive")
        if abs(2.0 * self.t_prime / self.t) >= 1.0:
            raise ValueError("|2*t_prime/t| < 1 required")
        if self.a <= 0:
            raise ValueError("lattice constant a must be positive")
        if not isinstance(self.n_L, int) or self.n_L < 1:
            raise ValueError("n_L must be a positive integer")

    @property
    def L(self) -> float:
        return 2.0 * SQRT2 * self.a * self.n_L

    @property
    def delta(self) -> float:
        """Diagonal momentum grid step 2*pi/L."""
        return 2.0 * math.pi / self.L

    @property
    def n_sites(self) -> int:
        return 8 * self.n_L * self.n_L


@dataclass(frozen=True, order=True)
class MomentumIndex:
    """Exact integer momentum on the diagonal grid.

    Fermionic: k_pm = (2*pi/L)*(m_pm + 1/2).  Bosonic: p_pm = (2*pi/L)*m_pm.
    """

    m_plus: int
    m_minus: int
    kind: Kind = Kind.FERMIONIC

    def diag(self, params: ModelParams) -> tuple[float, float]:
        """(k_plus, k_minus) in physical units."""
        off = 0.5 if self.kind is Kind.FERMIONIC else 0.0
        d = params.delta
        return d * (self.m_plus + off), d * (self.m_minus + off)

    def vector(self, params: ModelParams) -> np.ndarray:
        """Cartesian (k1, k2)."""
        kp, km = self.diag(params)
        return np.array([(kp + km) / SQRT2, (kp - km) / SQRT2])


def _as_k1k2(k, params: ModelParams):
    if isinstance(k, MomentumIndex):
        return k.vector(params)
    return np.asarray(k, dtype=float)


def dispersion(k, params: ModelParams):
    """Tight-binding band energy.

    eps(k) = -2t[cos(a k1) + cos(a k2)] - 4 t' cos(a k1) cos(a k2);
    periodic with period 2*pi/a in each Cartesian component.  Accepts a
    MomentumIndex, a length-2 vector, or an (..., 2) array.
    """
    kk = _as_k1k2(k, params)
    a = params.a
    c1 = np.cos(a * kk[..., 0])
    c2 = np.cos(a * kk[..., 1])
    return -2.0 * params.t * (c1 + c2) - 4.0 * params.t_prime * c1 * c2


def dispersion_diag(k_plus, k_minus, params: ModelParams):
    """Band energy from diagonal momentum components."""
    k1 = (np.asarray(k_plus) + np.asarray(k_minus)) / SQRT2
    k2 = (np.asarray(k_plus) - np.asarray(k_minus)) / SQRT2
    return dispersion(np.stack([k1, k2], axis=-1), params)


def in_bz(m_plus: int, m_minus: int, n_L: int) -> bool:
    """Exact Brillouin-zone membership -pi/a <= k_j < pi/a for a fermionic index."""
    u = m_plus + m_minus + 1  # k1 * sqrt(2)/delta
    v = m_plus - m_minus      # k2 * sqrt(2)/delta
    return -2 * n_L <= u < 2 * n_L and -2 * n_L <= v < 2 * n_L


def bz_grid(params: ModelParams) -> list[MomentumIndex]:
    """All 8*n_L^2 fermionic momenta of the Brillouin zone, lexicographic in
    (m_plus, m_minus)."""
    n = params.n_L
    out = []
    for mp in range(-2 * n - 1, 2 * n + 1):
        for mm in range(-2 * n - 1, 2 * n + 1):
            if in_bz(mp, mm, n):
                out.append(MomentumIndex(mp, mm, Kind.FERMIONIC))
    return out


def band_range(params: ModelParams) -> tuple[float, float]:
    """Exact (min, max) of the band over the continuum zone: extrema sit at
    cos(a k_j) = +-1 or, for |2t'| < t, only at those corners."""
    vals = []
    for c1 in (-1.0, 1.0):
        for c2 in (-1.0, 1.0):
            vals.append(-2.0 * params.t * (c1 + c2) - 4.0 * params.t_prime * c1 * c2)
    return min(vals), max(vals)


def fermi_contour(mu: float, params: ModelParams, resolution: int = 256):
    """Level-set polylines of dispersion(k) = mu inside the zone square.

    Marching squares (linear interpolation) on a uniform
    (resolution+1) x (resolution+1) sampling of [-pi/a, pi/a]^2, endpoints
    included so the sample set is exactly symmetric under parity and the
    fourfold rotation.  Polylines crossing the zone boundary are stitched to
    their periodic partners, so every returned polyline is closed modulo
    reciprocal-lattice translations.  Returns [] when mu lies outside the band.

    Returns
    -------
    list of (N, 2) float arrays of (k1, k2) vertices.
    """
    if resolution < 16:
        raise ValueError("resolution must be >= 16")
    lo, hi = band_range(params)
    if mu < lo or mu > hi:
        return []
    from skimage import measure

    edge = math.pi / params.a
    ax = np.linspace(-edge, edge, resolution + 1)
    K1, K2 = np.meshgrid(ax, ax, indexing="ij")
    grid = dispersion(np.stack([K1, K2], axis=-1), params)
    raw = measure.find_contours(grid, mu)
    step = 2.0 * edge / resolution
    polys = [np.column_stack([-edge + c[:, 0] * step, -edge + c[:, 1] * step]) for c in raw]
    return _stitch_periodic(polys, edge, tol=1e-9 * edge)


def _stitch_periodic(polys, edge, tol):
    """Join open polylines across the periodic zone boundary."""
    period = 2.0 * edge

    def closed(p):
        return np.linalg.norm(p[0] - p[-1]) <= tol

    def closed_mod(p):
        d = np.abs(p[0] - p[-1])
        d = np.minimum(d, np.abs(d - period))
        return np.all(d <= tol)

    done = [p for p in polys if closed(p)]
    open_ = [p for p in polys if not closed(p)]
    shifts = [np.array([i * period, j * period]) for i in (-1, 0, 1) for j in (-1, 0, 1)]

    while open_:
        cur = open_.pop(0)
        merged = True
        while merged and not closed_mod(cur):
            merged = False
            for idx, other in enumerate(open_):
                for flip in (False, True):
                    cand = other[::-1] if flip else other
                    hit = None
                    for sh in shifts:
                        if np.linalg.norm(cur[-1] - (cand[0] + sh)) <= tol:
                            hit = sh
                            break
                    if hit is not None:
                        cur = np.vstack([cur, cand[1:] + hit])
                        open_.pop(idx)
                        merged = True
                        break
                if merged:
                    break
        done.append(cur)
    return done
