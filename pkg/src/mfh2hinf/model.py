"""Domain types for time-varying mean-field stochastic systems.

A system evolves on stages k = 0..K as

    x(k+1) = A x + At E[x] + B v + Bt E[v]
             + (C x + Ct E[x] + D v + Dt E[v]) w(k) + F1 u,

with scalar noise w(k) (zero mean, unit variance, independent across k),
disturbance v, control u, deterministic initial state x0, and quadratic
output stacking Phi(k) x over Psi(k) u, where Psi(k) is orthonormal
(Psi^T Psi = I).  The uncontrolled view drops the control block, so the
output is Phi x alone.

This module owns the value types, dimensional validation, and the JSON
document format used by the CLI.  All types are immutable after
construction (frozen dataclasses holding read-only arrays) and safe to
share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Sequence

import numpy as np

#: Absolute per-entry tolerance for the orthonormality check Psi^T Psi = I.
PSI_TOL = 1e-9

_STAGE_MATRICES = ("A", "At", "B", "Bt", "C", "Ct", "D", "Dt", "F1", "Phi", "Psi")


class SystemFormatError(ValueError):
    """A system document could not be parsed; `path` names the offending field."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class DimensionMismatchError(SystemFormatError):
    """A parsed matrix or vector has the wrong shape."""


def _frozen_array(value, shape=None) -> np.ndarray:
    out = np.array(value, dtype=float)
    if shape is not None and out.shape != shape:
        raise ValueError(f"expected shape {shape}, got {out.shape}")
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Dimensions:
    """Problem sizes: stages run k = 0..K, so a horizon K has K+1 stages."""

    n: int      # state dimension
    l: int      # disturbance dimension
    q: int      # control dimension
    m_phi: int  # rows of the state-output weight Phi(k)
    K: int      # horizon (last stage index)

    def __post_init__(self):
        for name in ("n", "l", "q", "m_phi"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"dimension {name} must be >= 1, got {getattr(self, name)}")
        if int(self.K) < 0:
            raise ValueError(f"horizon K must be >= 0, got {self.K}")


@dataclass(frozen=True)
class StageParams:
    """Parameter matrices of one stage k.

    Shapes: A, At, C, Ct are n x n; B, Bt, D, Dt are n x l; F1 is n x q;
    Phi is m_phi x n; Psi is q x q with Psi^T Psi = I.  Construction does
    not enforce shapes; `validate` reports violations as data.
    """

    A: np.ndarray
    At: np.ndarray
    B: np.ndarray
    Bt: np.ndarray
    C: np.ndarray
    Ct: np.ndarray
    D: np.ndarray
    Dt: np.ndarray
    F1: np.ndarray
    Phi: np.ndarray
    Psi: np.ndarray

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, _frozen_array(getattr(self, f.name)))

    # Combined drift/diffusion maps for the mean recursion.
    @property
    def Abb(self) -> np.ndarray:
        return self.A + self.At

    @property
    def Bbb(self) -> np.ndarray:
        return self.B + self.Bt

    @property
    def Cbb(self) -> np.ndarray:
        return self.C + self.Ct

    @property
    def Dbb(self) -> np.ndarray:
        return self.D + self.Dt


@dataclass(frozen=True)
class MeanFieldSystem:
    """A full time-varying system: dimensions, K+1 stages, initial state.

    `gamma` is the disturbance attenuation level bundled with the system
    document; solvers always take gamma explicitly, the bundled value is a
    default for the CLI.
    """

    dims: Dimensions
    stages: tuple[StageParams, ...]
    x0: np.ndarray
    gamma: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(self, "x0", _frozen_array(self.x0))

    def stage(self, k: int) -> StageParams:
        return self.stages[k]

    @classmethod
    def constant(cls, dims: Dimensions, stage: StageParams, x0,
                 gamma: float | None = None) -> "MeanFieldSystem":
        """Replicate one stage across the whole horizon."""
        return cls(dims=dims, stages=(stage,) * (dims.K + 1), x0=x0, gamma=gamma)


@dataclass(frozen=True)
class LqStageParams:
    """One stage of the control-only system: drift A1 x + At1 E[x] + F1 u,
    diffusion (B1 x + Bt1 E[x]) w, output stacking Phi1 x over Psi1 u."""

    A1: np.ndarray
    At1: np.ndarray
    B1: np.ndarray
    Bt1: np.ndarray
    F1: np.ndarray
    Phi1: np.ndarray
    Psi1: np.ndarray

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, _frozen_array(getattr(self, f.name)))

    @property
    def Abb1(self) -> np.ndarray:
        return self.A1 + self.At1

    @property
    def Bbb1(self) -> np.ndarray:
        return self.B1 + self.Bt1


@dataclass(frozen=True)
class LqSystem:
    """Quadratic-cost control problem over k = 0..K (no disturbance channel)."""

    dims: Dimensions
    stages: tuple[LqStageParams, ...]
    x0_bar: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(self, "x0_bar", _frozen_array(self.x0_bar))

    def stage(self, k: int) -> LqStageParams:
        return self.stages[k]

    @classmethod
    def from_mean_field(cls, system: MeanFieldSystem) -> "LqSystem":
        """Drop the disturbance channel of a mean-field system.

        With v = 0 the state recursion reduces to drift A x + At E[x] + F1 u
        and diffusion (C x + Ct E[x]) w, so the state-multiplicative
        diffusion matrices become the B1/Bt1 pair here.
        """
        stages = tuple(
            LqStageParams(A1=s.A, At1=s.At, B1=s.C, Bt1=s.Ct,
                          F1=s.F1, Phi1=s.Phi, Psi1=s.Psi)
            for s in system.stages
        )
        return cls(dims=system.dims, stages=stages, x0_bar=system.x0)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of `validate`: an empty violation list means the system is valid."""

    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def _expected_shapes(dims: Dimensions) -> dict[str, tuple[int, int]]:
    n, l, q, m = dims.n, dims.l, dims.q, dims.m_phi
    return {
        "A": (n, n), "At": (n, n), "C": (n, n), "Ct": (n, n),
        "B": (n, l), "Bt": (n, l), "D": (n, l), "Dt": (n, l),
        "F1": (n, q), "Phi": (m, n), "Psi": (q, q),
    }


def validate(system: MeanFieldSystem, psi_tol: float = PSI_TOL) -> ValidationReport:
    """Check dimensional consistency, finiteness, and Psi orthonormality.

    Violations are returned as data; nothing raises and the input is never
    mutated.
    """
    out: list[str] = []
    dims = system.dims
    if len(system.stages) != dims.K + 1:
        out.append(f"expected {dims.K + 1} stages for horizon K={dims.K}, "
                   f"got {len(system.stages)}")
    if system.x0.shape != (dims.n,):
        out.append(f"x0: dimension mismatch, expected shape ({dims.n},), "
                   f"got {system.x0.shape}")
    elif not np.all(np.isfinite(system.x0)):
        out.append("x0: non-finite entry")
    shapes = _expected_shapes(dims)
    eye_q = np.eye(dims.q)
    for k, stage in enumerate(system.stages):
        for name, shape in shapes.items():
            mat = getattr(stage, name)
            if mat.shape != shape:
                out.append(f"stages[{k}].{name}: dimension mismatch, expected "
                           f"{shape}, got {mat.shape}")
                continue
            if not np.all(np.isfinite(mat)):
                out.append(f"stages[{k}].{name}: non-finite entry")
        if stage.Psi.shape == (dims.q, dims.q):
            err = np.abs(stage.Psi.T @ stage.Psi - eye_q).max()
            if err > psi_tol:
                out.append(f"Psi not orthonormal at k={k}: "
                           f"max |Psi^T Psi - I| = {err:.3e} > {psi_tol:.1e}")
    if system.gamma is not None and not system.gamma > 0:
        out.append(f"gamma must be > 0, got {system.gamma}")
    return ValidationReport(violations=tuple(out))


# ---------------------------------------------------------------------------
# JSON document format
# ---------------------------------------------------------------------------
#
# Top-level keys: "horizon" (K), "gamma", "dims" {"n","l","q","m_phi"},
# "x0" (list of n numbers), "stages" (list of K+1 objects, each holding the
# eleven stage matrices as row-major nested arrays).


def _parse_matrix(obj, rows: int, cols: int, path: str) -> np.ndarray:
    try:
        mat = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SystemFormatError(f"not a numeric matrix ({exc})", path) from exc
    if mat.shape != (rows, cols):
        raise DimensionMismatchError(
            f"expected {rows}x{cols} matrix, got shape {mat.shape}", path)
    return mat


def system_from_document(doc: dict) -> MeanFieldSystem:
    """Build a system from a parsed JSON document.

    Raises SystemFormatError (with the field path) on missing or malformed
    fields, and DimensionMismatchError when a stage matrix has the wrong
    shape.
    """
    if not isinstance(doc, dict):
        raise SystemFormatError("document root must be an object")
    for key in ("horizon", "gamma", "dims", "x0", "stages"):
        if key not in doc:
            raise SystemFormatError("missing required key", key)
    dims_doc = doc["dims"]
    for key in ("n", "l", "q", "m_phi"):
        if key not in dims_doc:
            raise SystemFormatError("missing required key", f"dims.{key}")
    try:
        dims = Dimensions(n=int(dims_doc["n"]), l=int(dims_doc["l"]),
                          q=int(dims_doc["q"]), m_phi=int(dims_doc["m_phi"]),
                          K=int(doc["horizon"]))
    except (TypeError, ValueError) as exc:
        raise SystemFormatError(f"bad dimensions ({exc})", "dims") from exc
    gamma = float(doc["gamma"])
    if not gamma > 0:
        raise SystemFormatError(f"gamma must be > 0, got {gamma}", "gamma")
    try:
        x0 = np.array(doc["x0"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise SystemFormatError(f"not a numeric vector ({exc})", "x0") from exc
    if x0.shape != (dims.n,):
        raise DimensionMismatchError(
            f"expected {dims.n} entries, got shape {x0.shape}", "x0")
    stages_doc = doc["stages"]
    if not isinstance(stages_doc, list) or len(stages_doc) != dims.K + 1:
        raise SystemFormatError(
            f"expected {dims.K + 1} stages for horizon K={dims.K}, "
            f"got {len(stages_doc) if isinstance(stages_doc, list) else type(stages_doc)}",
            "stages")
    shapes = _expected_shapes(dims)
    stages = []
    for k, stage_doc in enumerate(stages_doc):
        if not isinstance(stage_doc, dict):
            raise SystemFormatError("stage must be an object", f"stages[{k}]")
        mats = {}
        for name in _STAGE_MATRICES:
            if name not in stage_doc:
                raise SystemFormatError("missing required key", f"stages[{k}].{name}")
            rows, cols = shapes[name]
            mats[name] = _parse_matrix(stage_doc[name], rows, cols, f"stages[{k}].{name}")
        stages.append(StageParams(**mats))
    return MeanFieldSystem(dims=dims, stages=tuple(stages), x0=x0, gamma=gamma)


def system_to_document(system: MeanFieldSystem) -> dict:
    """Inverse of `system_from_document`; floats keep full precision."""
    return {
        "horizon": system.dims.K,
        "gamma": system.gamma,
        "dims": {"n": system.dims.n, "l": system.dims.l,
                 "q": system.dims.q, "m_phi": system.dims.m_phi},
        "x0": system.x0.tolist(),
        "stages": [
            {name: getattr(stage, name).tolist() for name in _STAGE_MATRICES}
            for stage in system.stages
        ],
    }


def load_system(source: str | Path) -> MeanFieldSystem:
    """Load a system from a JSON file path."""
    text = Path(source).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemFormatError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return system_from_document(doc)


def save_system(system: MeanFieldSystem, path: str | Path) -> None:
    """Write the JSON document; round-trips bit-exactly (repr-precision floats)."""
    Path(path).write_text(json.dumps(system_to_document(system), indent=2) + "\n")
