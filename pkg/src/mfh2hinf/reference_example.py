"""Bundled two-step reference example and its published solution values.

`reference_system()` builds the n = l = q = 2, K = 2 example system that
ships with the repository (also serialized as examples/paper_example.json),
with the customary attenuation level gamma = 0.8 and x0 = (1, 1).

`REFERENCE_SOLUTION` holds the published solution tables for that system,
rounded to four decimals as printed: the four H-operator diagnostics, the
four gain sequences, and the four value sequences, each indexed by step
k = 0, 1, 2.  The `reproduce-paper-example` CLI command and the golden
acceptance test compare a fresh solve against these values entry by entry.
"""

from __future__ import annotations

import numpy as np

from .model import Dimensions, MeanFieldSystem, StageParams

GAMMA = 0.8

_STAGES = {
    # k = 0
    0: dict(
        A=[[0.05, 0.15], [0.25, 0.35]],
        At=[[0.05, 0.25], [0.35, 0.20]],
        B=[[0.05, 0.10], [0.10, 0.20]],
        Bt=[[0.05, 0.15], [0.20, 0.20]],
        C=[[0.05, 0.25], [0.10, 0.25]],
        Ct=[[0.05, 0.15], [0.25, 0.15]],
        D=[[0.05, 0.18], [0.15, 0.28]],
        Dt=[[0.05, 0.30], [0.25, 0.35]],
        F1=[[0.05, 0.25], [0.35, 0.30]],
        Phi=[[0.05, 0.10], [0.30, 0.20]],
        Psi=[[0.80, 0.60], [0.60, -0.80]],
    ),
    # k = 1
    1: dict(
        A=[[0.10, 0.08], [0.18, 0.12]],
        At=[[0.10, 0.12], [0.22, 0.08]],
        B=[[0.10, 0.18], [0.20, 0.28]],
        Bt=[[0.10, 0.20], [0.25, 0.08]],
        C=[[0.10, 0.12], [0.18, 0.10]],
        Ct=[[0.10, 0.08], [0.15, 0.08]],
        D=[[0.10, 0.12], [0.20, 0.18]],
        Dt=[[0.10, 0.40], [0.10, 0.15]],
        F1=[[0.10, 0.30], [0.25, 0.10]],
        Phi=[[0.10, 0.25], [0.10, 0.20]],
        Psi=[[1.00, 0.00], [0.00, 1.00]],
    ),
    # k = 2
    2: dict(
        A=[[0.15, 0.10], [0.20, 0.15]],
        At=[[0.15, 0.15], [0.25, 0.10]],
        B=[[0.15, 0.20], [0.20, 0.30]],
        Bt=[[0.15, 0.25], [0.30, 0.10]],
        C=[[0.15, 0.15], [0.20, 0.15]],
        Ct=[[0.15, 0.10], [0.20, 0.10]],
        D=[[0.15, 0.10], [0.15, 0.20]],
        Dt=[[0.15, 0.15], [0.20, 0.25]],
        F1=[[0.15, 0.20], [0.15, 0.20]],
        Phi=[[0.15, 0.15], [0.20, 0.30]],
        Psi=[[0.60, -0.80], [0.80, 0.60]],
    ),
}


def reference_system() -> MeanFieldSystem:
    """The bundled reference system (K = 2, gamma = 0.8, x0 = (1, 1))."""
    dims = Dimensions(n=2, l=2, q=2, m_phi=2, K=2)
    stages = tuple(StageParams(**_STAGES[k]) for k in range(3))
    return MeanFieldSystem(dims=dims, stages=stages, x0=[1.0, 1.0], gamma=GAMMA)


def _seq(by_k: dict[int, list[list[float]]]) -> np.ndarray:
    out = np.array([by_k[k] for k in sorted(by_k)], dtype=float)
    out.setflags(write=False)
    return out


#: Published solution values, four printed decimals, indexed [k, row, col].
REFERENCE_SOLUTION: dict[str, np.ndarray] = {
    "H": _seq({
        2: [[0.6400, 0.0000], [0.0000, 0.6400]],
        1: [[0.6232, -0.0210], [-0.0210, 0.6127]],
        0: [[0.6346, -0.0112], [-0.0112, 0.6166]],
    }),
    "Ht": _seq({
        2: [[0.6400, 0.0000], [0.0000, 0.6400]],
        1: [[0.5773, -0.0790], [-0.0790, 0.5364]],
        0: [[0.5950, -0.0801], [-0.0801, 0.4948]],
    }),
    "H1": _seq({
        2: [[1.0000, 0.0000], [0.0000, 1.0000]],
        1: [[1.0843, 0.0667], [0.0667, 1.1117]],
        0: [[1.1489, 0.1480], [0.1480, 1.1925]],
    }),
    "Ht1": _seq({
        2: [[1.0000, 0.0000], [0.0000, 1.0000]],
        1: [[1.0843, 0.0667], [0.0667, 1.1117]],
        0: [[1.1902, 0.2139], [0.2139, 1.2985]],
    }),
    "U": _seq({
        2: [[0.0000, 0.0000], [0.0000, 0.0000]],
        1: [[-0.0605, -0.0419], [-0.0517, -0.0385]],
        0: [[-0.0848, -0.1243], [-0.0840, -0.1399]],
    }),
    "Ut": _seq({
        2: [[0.0000, 0.0000], [0.0000, 0.0000]],
        1: [[-0.0975, -0.0525], [-0.0829, -0.0630]],
        0: [[-0.1902, -0.1908], [-0.2225, -0.2947]],
    }),
    "V": _seq({
        2: [[0.0000, 0.0000], [0.0000, 0.0000]],
        1: [[0.0243, 0.0176], [0.0298, 0.0215]],
        0: [[0.0090, 0.0202], [0.0186, 0.0422]],
    }),
    "Vt": _seq({
        2: [[0.0000, 0.0000], [0.0000, 0.0000]],
        1: [[0.0905, 0.0575], [0.1194, 0.0769]],
        0: [[0.0891, 0.1179], [0.1550, 0.2060]],
    }),
    "P1": _seq({
        2: [[-0.0625, -0.0825], [-0.0825, -0.1125]],
        1: [[-0.0396, -0.0593], [-0.0593, -0.1129]],
        0: [[-0.1141, -0.1012], [-0.1012, -0.1148]],
    }),
    "Q1": _seq({
        2: [[-0.0625, -0.0825], [-0.0825, -0.1125]],
        1: [[-0.1286, -0.1167], [-0.1167, -0.1502]],
        0: [[-0.3248, -0.3715], [-0.3715, -0.4619]],
    }),
    "Pt1": _seq({
        2: [[1.0625, 0.0825], [0.0825, 1.1125]],
        1: [[1.1255, 0.1195], [0.1195, 1.1585]],
        0: [[1.1729, 0.2114], [0.2114, 1.3676]],
    }),
    "Qt1": _seq({
        2: [[1.0625, 0.0825], [0.0825, 1.1125]],
        1: [[1.6674, 0.4629], [0.4629, 1.3867]],
        0: [[2.0130, 1.2515], [1.2515, 2.8022]],
    }),
}

#: Tolerance for matching the published values (four printed decimals).
REFERENCE_TOL = 5e-4
