"""Eight-region decomposition of the Brillouin zone, cutoff functions, area
fractions, and the nodal/antinodal momentum sets.

Region membership is exact: the admissible (kappa, Q) are quantized so every
region boundary sits half a grid step away from any fermionic momentum, and
all comparisons reduce to integer inequalities on the diagonal indices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .lattice import SQRT2, Kind, ModelParams, MomentumIndex

S_VALUES = (0, 1, -1, 2)  # s = 0, +, -, 2


class FlavorIndex(NamedTuple):
    """Fermion flavor (r, s) with r = +-1 and s in {0, +1, -1, 2}."""

    r: int
    s: int

    def __repr__(self):
        smap = {0: "0", 1: "+", -1: "-", 2: "2"}
        return f"({'+' if self.r > 0 else '-'},{smap[self.s]})"


FLAVORS: tuple[FlavorIndex, ...] = tuple(
    FlavorIndex(r, s) for s in S_VALUES for r in (+1, -1)
)


def flavor_class(f: FlavorIndex) -> str:
    if f.s == 0:
        return "antinodal"
    if f.s in (1, -1):
        return "nodal"
    return "in" if f.r == -1 else "out"


def rotation_map(f: FlavorIndex) -> FlavorIndex:
    """Discrete 90-degree rotation acting on flavors."""
    if f.s == 0:
        return FlavorIndex(-f.r, 0)
    if f.s == 2:
        return f
    # (r,+) -> (r,-) ;  (r,-) -> (-r,+)
    if f.s == 1:
        return FlavorIndex(f.r, -1)
    return FlavorIndex(-f.r, 1)


def parity_map(f: FlavorIndex) -> FlavorIndex:
    """Spatial inversion acting on flavors."""
    if f.s in (1, -1):
        return FlavorIndex(-f.r, f.s)
    return f


class RegionError(RuntimeError):
    """Raised when the unique-cover invariant of the zone decomposition fails."""


@dataclass(frozen=True)
class PartitionParams:
    """Integers pinning the zone decomposition: kappa = (n_kappa + 1/2)/n_L and
    Q = pi*n_Q/(2*n_L), plus the antinodal filling nu_a and cutoff widths b1, b2.

    The constructor is inert; call validate(params) to enforce the admissibility
    window (also run by every consumer of these parameters).
    """

    n_kappa: int
    n_Q: int
    nu_a: float = 0.5
    b1: float = 1.0
    b2: float = 1.0

    def validate(self, params: ModelParams) -> "PartitionParams":
        n_L = params.n_L
        if not isinstance(self.n_kappa, int) or not 0 <= self.n_kappa <= n_L - 1:
            raise ValueError(
                f"n_kappa={self.n_kappa} outside 0..n_L-1: kappa must lie in (0, 1) "
                "on the half-integer grid kappa = (n_kappa + 1/2)/n_L")
        if not isinstance(self.n_Q, int) or self.n_Q < 1:
            raise ValueError("n_Q must be a positive integer")
        if abs(self.n_Q - n_L) > self.n_kappa:
            raise ValueError(
                "Q window violated: pi*(1-kappa)/2 < Q < pi*(1+kappa)/2 requires "
                f"|n_Q - n_L| <= n_kappa (got n_Q={self.n_Q}, n_L={n_L}, "
                f"n_kappa={self.n_kappa})")
        if not 0.0 <= self.nu_a <= 1.0:
            raise ValueError("nu_a must lie in [0, 1]")
        if self.b1 <= 0 or self.b2 <= 0:
            raise ValueError("cutoff widths b1, b2 must be positive")
        return self

    @classmethod
    def from_values(cls, kappa: float, Q: float, params: ModelParams,
                    nu_a: float = 0.5, b1: float = 1.0, b2: float = 1.0):
        """Construct from real (kappa, Q); rejects values off the quantization
        grid rather than snapping."""
        n_L = params.n_L
        nk = kappa * n_L - 0.5
        nq = 2.0 * n_L * Q / math.pi
        if abs(nk - round(nk)) > 1e-9 or abs(nq - round(nq)) > 1e-9:
            raise ValueError(
                f"(kappa={kappa}, Q={Q}) off the quantization grid "
                f"kappa in (N+1/2)/n_L, Q in pi*N/(2*n_L) for n_L={n_L}")
        return cls(int(round(nk)), int(round(nq)), nu_a, b1, b2).validate(params)

    def kappa(self, params: ModelParams) -> float:
        return (self.n_kappa + 0.5) / params.n_L

    def Q(self, params: ModelParams) -> float:
        return math.pi * self.n_Q / (2 * params.n_L)

    def is_q_half(self, params: ModelParams) -> bool:
        return self.n_Q == params.n_L


def q_vectors_diag(pp: PartitionParams, params: ModelParams) -> dict[FlavorIndex, tuple[int, int]]:
    """Flavor base points Q_{r,s} as integer diagonal indices (units of 2*pi/L)."""
    n_L, n_Q = params.n_L, pp.n_Q
    return {
        FlavorIndex(+1, 0): (n_L, n_L),
        FlavorIndex(-1, 0): (n_L, -n_L),
        FlavorIndex(+1, 1): (n_Q, 0),
        FlavorIndex(-1, 1): (-n_Q, 0),
        FlavorIndex(+1, -1): (0, n_Q),
        FlavorIndex(-1, -1): (0, -n_Q),
        FlavorIndex(-1, 2): (0, 0),
        FlavorIndex(+1, 2): (2 * n_L, 0),
    }


def q_vectors(pp: PartitionParams, params: ModelParams) -> dict[FlavorIndex, np.ndarray]:
    """Flavor base points as Cartesian vectors: (pi/a,0), (0,pi/a) antinodal,
    (rQ/a, rsQ/a) nodal, (0,0) in, (pi/a,pi/a) out."""
    pp.validate(params)
    a, Q = params.a, pp.Q(params)
    return {
        FlavorIndex(+1, 0): np.array([math.pi / a, 0.0]),
        FlavorIndex(-1, 0): np.array([0.0, math.pi / a]),
        FlavorIndex(+1, 1): np.array([Q / a, Q / a]),
        FlavorIndex(-1, 1): np.array([-Q / a, -Q / a]),
        FlavorIndex(+1, -1): np.array([Q / a, -Q / a]),
        FlavorIndex(-1, -1): np.array([-Q / a, Q / a]),
        FlavorIndex(-1, 2): np.array([0.0, 0.0]),
        FlavorIndex(+1, 2): np.array([math.pi / a, math.pi / a]),
    }


def _offset_in_region(f: FlavorIndex, mp: int, mm: int, pp: PartitionParams,
                      n_L: int) -> bool:
    """Exact membership of a fermionic offset (k relative to Q_{r,s}) in the
    flavor's rectangle; all bounds are half-integers so ties are impossible."""
    nk = pp.n_kappa
    wide = n_L - nk - 1
    if f.s == 0:
        return abs(mp + 1) <= nk and abs(mm + 1) <= nk
    if f.s == 2:
        return abs(mp + 1) <= wide and abs(mm + 1) <= wide
    shift = f.r * (pp.n_Q - n_L)
    if f.s == 1:   # s-direction is the '+' diagonal
        return abs(mp + 1 + shift) <= nk and abs(mm + 1) <= wide
    return abs(mm + 1 + shift) <= nk and abs(mp + 1) <= wide


def region_of(k: MomentumIndex, pp: PartitionParams, params: ModelParams
              ) -> tuple[FlavorIndex, tuple[int, int]]:
    """Unique decomposition k = Q_{r,s} + offset + (2*pi/a)*n of a zone momentum.

    Returns the flavor and the umklapp integer pair n = (n1, n2).  Existence or
    uniqueness failure raises RegionError (invariant breach).
    """
    if k.kind is not Kind.FERMIONIC:
        raise ValueError("region_of expects a fermionic momentum")
    pp.validate(params)
    n_L = params.n_L
    qd = q_vectors_diag(pp, params)
    hits = []
    for f in FLAVORS:
        qp, qm = qd[f]
        for up in range(-3, 4):
            for um in range(-3, 4):
                if (up - um) % 2:
                    continue
                mp = k.m_plus - qp - 2 * n_L * up
                mm = k.m_minus - qm - 2 * n_L * um
                if _offset_in_region(f, mp, mm, pp, n_L):
                    hits.append((f, ((up + um) // 2, (up - um) // 2)))
    if len(hits) != 1:
        raise RegionError(
            f"zone point {k} decomposed {len(hits)} times (expected exactly once): {hits}")
    return hits[0]


def area_fractions(pp: PartitionParams, params: ModelParams) -> dict[FlavorIndex, float]:
    """f_{r,0} = kappa^2/2, f_{r,+-} = kappa(1-kappa)/2, f_{r,2} = (1-kappa)^2/2."""
    kap = pp.kappa(params)
    out = {}
    for f in FLAVORS:
        if f.s == 0:
            out[f] = 0.5 * kap * kap
        elif f.s == 2:
            out[f] = 0.5 * (1.0 - kap) ** 2
        else:
            out[f] = 0.5 * kap * (1.0 - kap)
    return out


def region_mode_counts(pp: PartitionParams, params: ModelParams) -> dict[FlavorIndex, int]:
    """Exact number of grid offsets per flavor region (= f_{r,s}*(L/a)^2)."""
    nk, n_L = pp.n_kappa, params.n_L
    narrow = 2 * nk + 1
    wide = 2 * (n_L - nk) - 1
    out = {}
    for f in FLAVORS:
        if f.s == 0:
            out[f] = narrow * narrow
        elif f.s == 2:
            out[f] = wide * wide
        else:
            out[f] = narrow * wide
    return out


# --- cutoff functions and bosonic support geometry ---------------------------

def chi_bounds(pp: PartitionParams, params: ModelParams) -> tuple[float, float]:
    """(b1*kappa*pi/(sqrt2 a), b2*(1-kappa)*pi/(sqrt2 a))."""
    kap = pp.kappa(params)
    base = math.pi / (SQRT2 * params.a)
    return pp.b1 * kap * base, pp.b2 * (1.0 - kap) * base


def cutoff_chi_real(s: int, p_plus: float, p_minus: float,
                    pp: PartitionParams, params: ModelParams) -> int:
    """Sharp momentum-transfer cutoff chi_s(p) for real diagonal components:
    1 iff |p_s| <= b1*kappa*pi/(sqrt2 a) and |p_{-s}| <= b2*(1-kappa)*pi/(sqrt2 a)."""
    long_b, perp_b = chi_bounds(pp, params)
    ps, pt = (p_plus, p_minus) if s == 1 else (p_minus, p_plus)
    return int(abs(ps) <= long_b and abs(pt) <= perp_b)


def cutoff_chi(s: int, pmom: MomentumIndex, pp: PartitionParams,
               params: ModelParams) -> int:
    """chi_s on the bosonic grid (closed inequalities, exact)."""
    if pmom.kind is not Kind.BOSONIC:
        raise ValueError("cutoff_chi expects a bosonic momentum")
    pp.validate(params)
    pplus, pminus = pmom.diag(params)
    return cutoff_chi_real(s, pplus, pminus, pp, params)


def in_C_s(s: int, pmom: MomentumIndex, pp: PartitionParams, params: ModelParams) -> bool:
    """Membership in the nodal-density domain C_s: |p_{-s}| <= (1-kappa)*pi/(sqrt2 a)."""
    if pmom.kind is not Kind.BOSONIC:
        raise ValueError("in_C_s expects a bosonic momentum")
    m_perp = pmom.m_minus if s == 1 else pmom.m_plus
    return abs(m_perp) <= params.n_L - pp.n_kappa - 1


def in_C_s_real(s: int, p_plus: float, p_minus: float, pp: PartitionParams,
                params: ModelParams) -> bool:
    perp = p_minus if s == 1 else p_plus
    return abs(perp) <= (1.0 - pp.kappa(params)) * math.pi / (SQRT2 * params.a)


class BosonRegion(Enum):
    INNER = "inner"       # both cutoffs active: coupled branches
    MIDDLE = "middle"     # exactly one cutoff active: decoupled branch
    OUTSIDE = "outside"   # no coupling to the antinodal densities


def boson_region(p_plus: float, p_minus: float, pp: PartitionParams,
                 params: ModelParams) -> tuple[BosonRegion, tuple[int, ...]]:
    """Classify a bosonic momentum by which cutoff functions are active.

    Returns the region and the tuple of active branch labels s.
    """
    active = tuple(s for s in (1, -1)
                   if cutoff_chi_real(s, p_plus, p_minus, pp, params))
    if len(active) == 2:
        return BosonRegion.INNER, active
    if len(active) == 1:
        return BosonRegion.MIDDLE, active
    return BosonRegion.OUTSIDE, active
