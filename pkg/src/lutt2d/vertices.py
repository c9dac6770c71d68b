"""Interaction-vertex enumeration and classification.

After the momentum-transfer approximation, a four-flavor scattering term
survives only when the flavor base points balance up to a reciprocal-lattice
vector.  The survivors fall into eleven mutually exclusive structural
categories; at the commensurate point Q = pi/2 (and at other commensurate Q)
additional solutions appear that match none of them.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .lattice import ModelParams
from .partition import FLAVORS, FlavorIndex, PartitionParams, q_vectors_diag

EXTRA_Q_HALF = "extra_q_half"

_P45 = {(1, -1), (-1, 1), (0, 2), (2, 0)}
_P02 = {(0, 2), (2, 0)}


class VertexTuple(NamedTuple):
    flavors: tuple[FlavorIndex, FlavorIndex, FlavorIndex, FlavorIndex]
    umklapp: tuple[int, int]


class ClassifiedVertex(NamedTuple):
    vertex: VertexTuple
    category: int | str  # 1..11 or EXTRA_Q_HALF


def u_hat(p, params: ModelParams):
    """Fourier-transformed pair interaction (a^2 V / 8 pi^2)[cos(a p1) + cos(a p2)]."""
    p = np.asarray(p, dtype=float)
    a = params.a
    return params.V * a * a / (8.0 * math.pi ** 2) * (
        np.cos(a * p[..., 0]) + np.cos(a * p[..., 1]))


def fock_coupling(f1: FlavorIndex, f2: FlavorIndex, pp: PartitionParams,
                  params: ModelParams) -> float:
    """Exchange coupling v_{r,s,r',s'} = (2 pi)^2 u_hat(Q_{r,s} - Q_{r',s'})/a^2.

    Evaluated as (V/2)[cos(a dQ1) + cos(a dQ2)] to keep the exact special values
    (+-V, 0, V cos 2Q, ...) at roundoff accuracy.  Symmetric in its arguments.
    """
    qd = q_vectors_diag(pp, params)
    d = params.delta
    dqp = (qd[f1][0] - qd[f2][0]) * d
    dqm = (qd[f1][1] - qd[f2][1]) * d
    # back to Cartesian components
    dq1 = (dqp + dqm) / math.sqrt(2.0)
    dq2 = (dqp - dqm) / math.sqrt(2.0)
    a = params.a
    return 0.5 * params.V * (math.cos(a * dq1) + math.cos(a * dq2))


def _match_row(row: int, t: tuple[FlavorIndex, ...]) -> bool:
    t1, t2, t3, t4 = t
    if row == 1:
        return t1 == t2 and t3 == t4 and t1 != t3
    if row == 2:
        return t1 == t4 and t2 == t3 and t1 != t2
    if row == 3:
        return t1 == t2 == t3 == t4
    if row == 4:
        return (t1.s == t3.s and t2.s == t4.s and (t1.s, t2.s) in _P45
                and t2.r == -t1.r and t3.r == -t1.r and t4.r == t1.r)
    if row == 5:
        return (t1.s == t3.s and t2.s == t4.s and (t1.s, t2.s) in _P45
                and t2.r == t1.r and t3.r == -t1.r and t4.r == -t1.r)
    if row == 6:
        return (t1.s == t2.s == t3.s == t4.s and t1.s in (0, 2)
                and t2.r == -t1.r and t3.r == t1.r and t4.r == -t1.r)
    if row == 7:
        return (t1 == t3 and t1.s in (0, 2) and t2.s in (1, -1)
                and t4.s == t2.s and t4.r == -t2.r)
    if row == 8:
        return (t2 == t4 and t1.s in (1, -1) and t3.s == t1.s
                and t3.r == -t1.r and t2.s in (0, 2))
    if row == 9:
        # distinctness guards keep rows 3 and 6 out of this pattern
        return (t1 == t3 and t2 == t4 and t1.s in (0, 2) and t2.s in (0, 2)
                and t1 != t2 and not (t2.s == t1.s and t2.r == -t1.r))
    if row == 10:
        return (t4.s == t1.s and t4.r == -t1.r and t3.s == t2.s
                and t3.r == -t2.r and (t1.s, t2.s) in _P02)
    if row == 11:
        return (t2.s == t1.s and t2.r == -t1.r and t4.s == t3.s
                and t4.r == -t3.r and (t1.s, t3.s) in _P02)
    raise ValueError(row)


def matching_rows(t: tuple[FlavorIndex, ...]) -> list[int]:
    return [row for row in range(1, 12) if _match_row(row, t)]


def classify_tuple(t: tuple[FlavorIndex, ...]) -> int | str:
    """First matching category in row order; EXTRA_Q_HALF when none matches."""
    rows = matching_rows(t)
    if not rows:
        return EXTRA_Q_HALF
    if len(rows) > 1:
        raise RuntimeError(f"tuple {t} matches rows {rows}; rows must be exclusive")
    return rows[0]


def _umklapp_of(t, qd, n_L):
    """Integer n with Q1 - Q2 + Q3 - Q4 = (2 pi/a) n, or None."""
    dp = qd[t[0]][0] - qd[t[1]][0] + qd[t[2]][0] - qd[t[3]][0]
    dm = qd[t[0]][1] - qd[t[1]][1] + qd[t[2]][1] - qd[t[3]][1]
    if dp % (2 * n_L) or dm % (2 * n_L):
        return None
    up, um = dp // (2 * n_L), dm // (2 * n_L)
    if (up - um) % 2:
        return None
    return ((up + um) // 2, (up - um) // 2)


def enumerate_and_classify(pp: PartitionParams, params: ModelParams,
                           allow_q_half: bool = False) -> list[ClassifiedVertex]:
    """Scan all 8^4 flavor four-tuples for momentum balance and classify the
    survivors.

    At Q = pi/2 the scan is refused unless allow_q_half is set, since the
    category table presumes Q != pi/2; the extra commensurate solutions are
    flagged EXTRA_Q_HALF.  Output order is the scan order (flavors
    lexicographic in the canonical flavor list).
    """
    pp.validate(params)
    if pp.is_q_half(params) and not allow_q_half:
        raise ValueError("Q = pi/2 requires allow_q_half=True: the category "
                         "table assumes Q != pi/2")
    qd = q_vectors_diag(pp, params)
    n_L = params.n_L
    out = []
    for t1 in FLAVORS:
        for t2 in FLAVORS:
            for t3 in FLAVORS:
                for t4 in FLAVORS:
                    t = (t1, t2, t3, t4)
                    n = _umklapp_of(t, qd, n_L)
                    if n is None:
                        continue
                    out.append(ClassifiedVertex(VertexTuple(t, n), classify_tuple(t)))
    return out


def category_counts(classified: list[ClassifiedVertex]) -> dict[int | str, int]:
    counts: dict[int | str, int] = {}
    for cv in classified:
        counts[cv.category] = counts.get(cv.category, 0) + 1
    return counts
