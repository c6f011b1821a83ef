"""Backward matrix recursions for attenuation analysis and synthesis.

Three solvers share one vocabulary of stage operators.  For a stage with
drift pair (A, At), disturbance pair (B, Bt), diffusion pairs (C, Ct) and
(D, Dt), output weight Phi, and combined maps Ab = A+At etc.:

  deviation channel      L(P')  = A^T P' A + C^T P' C - Phi^T Phi
                         G(P')  = A^T P' B + C^T P' D
                         H(P')  = g^2 I + B^T P' B + D^T P' D
  mean channel           Lt(P',Q') = Ab^T Q' Ab + Cb^T P' Cb - Phi^T Phi
                         Gt(P',Q') = Ab^T Q' Bb + Cb^T P' Db
                         Ht(P',Q') = g^2 I + Bb^T Q' Bb + Db^T P' Db

`sbrl_solve` runs the constrained recursion P = L - G H^{-1} G^T,
Q = Lt - Gt Ht^{-1} Gt^T down from zero terminal values; it certifies the
disturbance-to-output gain is below g whenever all H operators stay
positive definite.  `lq_solve` is the control-side analogue (operators
H1 = I + F1^T P F1 etc.).  `h2hinf_solve` interleaves both: at each step
the deviation gains (U, V) and the mean gains (Ubb, Vbb) each solve a
2-block linear system, then four value matrices are updated.

Losing positive definiteness mid-recursion is an expected, meaningful
outcome (the level g is simply not certified), so it is returned as a
`FeasibilityFailure` value rather than raised.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .model import LqSystem, MeanFieldSystem, StageParams

#: Minimum eigenvalue required of an H operator to count as positive definite.
PD_TOL = 1e-10

#: Condition-number bound above which a coupled gain system is rejected.
COND_TOL = 1e12


class SingularCouplingError(np.linalg.LinAlgError):
    """The stacked gain system is (numerically) rank deficient."""


def sym(M: np.ndarray) -> np.ndarray:
    """Symmetrize; the recursions are symmetric in exact arithmetic."""
    return 0.5 * (M + M.T)


def min_eig(M: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(sym(M))[0])


@dataclass(frozen=True)
class FeasibilityFailure:
    """Positivity of an H operator failed at step `step`.

    `which` is one of "H", "Ht", "H1", "Ht1".  This certifies nothing about
    the true attenuation level: the recursion condition is sufficient only.
    """

    step: int
    which: str
    min_eigenvalue: float

    def describe(self) -> str:
        return (f"operator {self.which} lost positive definiteness at step "
                f"k={self.step} (min eigenvalue {self.min_eigenvalue:.6e})")


class SbrlOperators(NamedTuple):
    L: np.ndarray
    G: np.ndarray
    H: np.ndarray
    Lt: np.ndarray
    Gt: np.ndarray
    Ht: np.ndarray


def sbrl_operators(stage: StageParams, P_next: np.ndarray, Q_next: np.ndarray,
                   gamma: float) -> SbrlOperators:
    """Evaluate the six stage operators at (P_next, Q_next).

    H and Ht are symmetrized before return; L/Lt are symmetric up to
    rounding whenever P_next/Q_next are.
    """
    A, B, C, D, Phi = stage.A, stage.B, stage.C, stage.D, stage.Phi
    Ab, Bb, Cb, Db = stage.Abb, stage.Bbb, stage.Cbb, stage.Dbb
    g2I = gamma * gamma * np.eye(B.shape[1])
    PhiPhi = Phi.T @ Phi
    L = A.T @ P_next @ A + C.T @ P_next @ C - PhiPhi
    G = A.T @ P_next @ B + C.T @ P_next @ D
    H = sym(g2I + B.T @ P_next @ B + D.T @ P_next @ D)
    Lt = Ab.T @ Q_next @ Ab + Cb.T @ P_next @ Cb - PhiPhi
    Gt = Ab.T @ Q_next @ Bb + Cb.T @ P_next @ Db
    Ht = sym(g2I + Bb.T @ Q_next @ Bb + Db.T @ P_next @ Db)
    return SbrlOperators(L=L, G=G, H=H, Lt=Lt, Gt=Gt, Ht=Ht)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SbrlSolution:
    """Value sequences of the attenuation recursion, k = 0..K+1.

    P, Q have shape (K+2, n, n) with P[K+1] = Q[K+1] = 0; H_seq, Ht_seq
    hold the per-step operator values H(P(k+1)), Ht(P(k+1), Q(k+1)) for
    k = 0..K (diagnostics).  On success Q(k) is negative semidefinite.
    """

    P: np.ndarray
    Q: np.ndarray
    gamma: float
    H_seq: np.ndarray
    Ht_seq: np.ndarray


def sbrl_solve(system: MeanFieldSystem, gamma: float) -> SbrlSolution | FeasibilityFailure:
    """Run the constrained backward recursion for the uncontrolled system.

    The control channel (F1, Psi) is ignored; the output is Phi x alone.
    Returns a FeasibilityFailure the first time H or Ht fails to be
    positive definite (min eigenvalue <= PD_TOL).
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    dims = system.dims
    n, l, K = dims.n, dims.l, dims.K
    P = np.zeros((K + 2, n, n))
    Q = np.zeros((K + 2, n, n))
    H_seq = np.zeros((K + 1, l, l))
    Ht_seq = np.zeros((K + 1, l, l))
    for k in range(K, -1, -1):
        ops = sbrl_operators(system.stage(k), P[k + 1], Q[k + 1], gamma)
        me = min_eig(ops.H)
        if me <= PD_TOL:
            return FeasibilityFailure(step=k, which="H", min_eigenvalue=me)
        me = min_eig(ops.Ht)
        if me <= PD_TOL:
            return FeasibilityFailure(step=k, which="Ht", min_eigenvalue=me)
        P[k] = sym(ops.L - ops.G @ np.linalg.solve(ops.H, ops.G.T))
        Q[k] = sym(ops.Lt - ops.Gt @ np.linalg.solve(ops.Ht, ops.Gt.T))
        H_seq[k] = ops.H
        Ht_seq[k] = ops.Ht
    return SbrlSolution(P=_freeze(P), Q=_freeze(Q), gamma=gamma,
                        H_seq=_freeze(H_seq), Ht_seq=_freeze(Ht_seq))


@dataclass(frozen=True)
class LqSolution:
    """Control-side value sequences and gains.

    Pt, Qt: (K+2, n, n) with zero terminal values; U, Ut: (K+1, q, n).
    The optimal feedback is u(k) = U(k) x(k) + Ut(k) E[x(k)], and
    `optimal_value` = x0_bar^T Qt(0) x0_bar is the minimal cost.
    """

    Pt: np.ndarray
    Qt: np.ndarray
    U: np.ndarray
    Ut: np.ndarray
    optimal_value: float
    H1_seq: np.ndarray
    Ht1_seq: np.ndarray

    @property
    def Ubb(self) -> np.ndarray:
        """Mean-channel gains U + Ut."""
        return self.U + self.Ut


def lq_solve(system: LqSystem) -> LqSolution | FeasibilityFailure:
    """Solve the quadratic-cost control recursion.

    Positive definiteness of H1 and Ht1 cannot fail while Pt, Qt stay
    positive semidefinite, but is checked defensively step by step.
    """
    dims = system.dims
    n, q, K = dims.n, dims.q, dims.K
    Pt = np.zeros((K + 2, n, n))
    Qt = np.zeros((K + 2, n, n))
    U = np.zeros((K + 1, q, n))
    Ut = np.zeros((K + 1, q, n))
    H1_seq = np.zeros((K + 1, q, q))
    Ht1_seq = np.zeros((K + 1, q, q))
    Iq = np.eye(q)
    for k in range(K, -1, -1):
        s = system.stage(k)
        A1, B1, F1, Phi1 = s.A1, s.B1, s.F1, s.Phi1
        Ab1, Bb1 = s.Abb1, s.Bbb1
        PhiPhi = Phi1.T @ Phi1
        H1 = sym(Iq + F1.T @ Pt[k + 1] @ F1)
        Ht1 = sym(Iq + F1.T @ Qt[k + 1] @ F1)
        me = min_eig(H1)
        if me <= PD_TOL:
            return FeasibilityFailure(step=k, which="H1", min_eigenvalue=me)
        me = min_eig(Ht1)
        if me <= PD_TOL:
            return FeasibilityFailure(step=k, which="Ht1", min_eigenvalue=me)
        G1 = A1.T @ Pt[k + 1] @ F1
        Gt1 = Ab1.T @ Qt[k + 1] @ F1
        L1 = A1.T @ Pt[k + 1] @ A1 + B1.T @ Pt[k + 1] @ B1 + PhiPhi
        Lt1 = Ab1.T @ Qt[k + 1] @ Ab1 + Bb1.T @ Pt[k + 1] @ Bb1 + PhiPhi
        U[k] = -np.linalg.solve(H1, G1.T)
        Ubb_k = -np.linalg.solve(Ht1, Gt1.T)
        Ut[k] = Ubb_k - U[k]
        Pt[k] = sym(L1 - G1 @ np.linalg.solve(H1, G1.T))
        Qt[k] = sym(Lt1 - Gt1 @ np.linalg.solve(Ht1, Gt1.T))
        H1_seq[k] = H1
        Ht1_seq[k] = Ht1
    value = float(system.x0_bar @ Qt[0] @ system.x0_bar)
    return LqSolution(Pt=_freeze(Pt), Qt=_freeze(Qt), U=_freeze(U), Ut=_freeze(Ut),
                      optimal_value=value, H1_seq=_freeze(H1_seq),
                      Ht1_seq=_freeze(Ht1_seq))


class CoupledGains(NamedTuple):
    U: np.ndarray    # deviation control gain, q x n
    Ubb: np.ndarray  # mean control gain U + Ut, q x n
    V: np.ndarray    # deviation disturbance gain, l x n
    Vbb: np.ndarray  # mean disturbance gain V + Vt, l x n


def coupled_gain_step(stage: StageParams, P1n: np.ndarray, Q1n: np.ndarray,
                      Pt1n: np.ndarray, Qt1n: np.ndarray,
                      gamma: float) -> CoupledGains | FeasibilityFailure:
    """Solve the simultaneous gain equations at one step.

    The deviation pair satisfies

        V = -H(P1n)^{-1} [B^T P1n (A + F1 U) + D^T P1n C]
        U = -H1(Pt1n)^{-1} [F1^T Pt1n (A + B V)]

    i.e. a linear 2-block system in (V, U); the mean pair (Vbb, Ubb) is the
    analogue built from the combined maps and (Q1n, Qt1n).  Both mean gains
    carry the minus sign, matching the variational derivation (the sign is
    pinned down empirically by the bundled reference example).  Each block
    system is solved column-wise by one dense factorization.
    """
    A, B, C, D, F1 = stage.A, stage.B, stage.C, stage.D, stage.F1
    Ab, Bb, Cb, Db = stage.Abb, stage.Bbb, stage.Cbb, stage.Dbb
    l = B.shape[1]
    q = F1.shape[1]
    g2I = gamma * gamma * np.eye(l)
    Iq = np.eye(q)

    H = sym(g2I + B.T @ P1n @ B + D.T @ P1n @ D)
    Ht = sym(g2I + Bb.T @ Q1n @ Bb + Db.T @ P1n @ Db)
    H1 = sym(Iq + F1.T @ Pt1n @ F1)
    Ht1 = sym(Iq + F1.T @ Qt1n @ F1)
    for name, op in (("H", H), ("Ht", Ht), ("H1", H1), ("Ht1", Ht1)):
        me = min_eig(op)
        if me <= PD_TOL:
            return FeasibilityFailure(step=-1, which=name, min_eigenvalue=me)

    def stacked_solve(Hd, coup_vu, coup_uv, Hu, rhs_v, rhs_u, label):
        Mcoup = np.block([[Hd, coup_vu], [coup_uv, Hu]])
        if np.linalg.cond(Mcoup) > COND_TOL:
            raise SingularCouplingError(
                f"{label} gain system is rank deficient "
                f"(cond {np.linalg.cond(Mcoup):.3e} > {COND_TOL:.1e})")
        sol = np.linalg.solve(Mcoup, -np.vstack([rhs_v, rhs_u]))
        return sol[:l], sol[l:]

    V, U = stacked_solve(
        H, B.T @ P1n @ F1, F1.T @ Pt1n @ B, H1,
        B.T @ P1n @ A + D.T @ P1n @ C, F1.T @ Pt1n @ A, "deviation")
    Vbb, Ubb = stacked_solve(
        Ht, Bb.T @ Q1n @ F1, F1.T @ Qt1n @ Bb, Ht1,
        Bb.T @ Q1n @ Ab + Db.T @ P1n @ Cb, F1.T @ Qt1n @ Ab, "mean")
    return CoupledGains(U=U, Ubb=Ubb, V=V, Vbb=Vbb)


@dataclass(frozen=True)
class HOperatorDiagnostics:
    """Per-step operator values at the solution, k = 0..K.

    H, Ht are l x l (disturbance channel), H1, Ht1 are q x q (control
    channel); each is the operator evaluated at the step-(k+1) values, the
    quantity whose positive definiteness gates step k.
    """

    H: np.ndarray
    Ht: np.ndarray
    H1: np.ndarray
    Ht1: np.ndarray


@dataclass(frozen=True)
class H2HinfSolution:
    """Solution of the four coupled value recursions plus the four gains.

    Value sequences have shape (K+2, n, n) and vanish at K+1; gains have
    shape (K+1, p, n).  The synthesized feedback laws are

        u(k) = U(k) x(k) + Ut(k) E[x(k)]        (control)
        v(k) = V(k) x(k) + Vt(k) E[x(k)]        (worst-case disturbance)

    On success Q1(k) is negative semidefinite and Qt1(k) positive
    semidefinite.  `hinf_value` = x0^T Q1(0) x0 is the saddle value of the
    attenuation functional; `h2_value` = x0^T Qt1(0) x0 is the certified
    control-channel value (output energy plus accumulated state energy;
    see `moments.CostBreakdown.j2_reg`).
    """

    P1: np.ndarray
    Q1: np.ndarray
    Pt1: np.ndarray
    Qt1: np.ndarray
    U: np.ndarray
    Ut: np.ndarray
    V: np.ndarray
    Vt: np.ndarray
    gamma: float
    h2_value: float
    hinf_value: float
    h_ops: HOperatorDiagnostics

    @property
    def Ubb(self) -> np.ndarray:
        return self.U + self.Ut

    @property
    def Vbb(self) -> np.ndarray:
        return self.V + self.Vt


def h2hinf_solve(system: MeanFieldSystem, gamma: float) -> H2HinfSolution | FeasibilityFailure:
    """Run the coupled backward recursion at attenuation level gamma.

    Each step k = K..0 solves the two stacked gain systems, then updates

      P1  <- (A+F1 U)^T P1' (A+F1 U) + C^T P1' C - Phi^T Phi - U^T U
              - Gu H^{-1} Gu^T
      Q1  <- (Ab+F1 Ubb)^T Q1' (..) + Cb^T P1' Cb - Phi^T Phi - Ubb^T Ubb
              - Gtu Ht^{-1} Gtu^T
      Pt1 <- (A+B V)^T Pt1' (..) + (C+D V)^T Pt1' (..) + Phi^T Phi + I
              - Gv H1^{-1} Gv^T
      Qt1 <- (Ab+Bb Vbb)^T Qt1' (..) + (Cb+Db Vbb)^T Pt1' (..) + Phi^T Phi + I
              - Gtv Ht1^{-1} Gtv^T

    The identity added to the control-channel updates is n x n (it prices
    accumulated state energy alongside the Phi output; the q x q and n x n
    readings coincide for the square systems this targets).
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    dims = system.dims
    n, l, q, K = dims.n, dims.l, dims.q, dims.K
    P1 = np.zeros((K + 2, n, n))
    Q1 = np.zeros((K + 2, n, n))
    Pt1 = np.zeros((K + 2, n, n))
    Qt1 = np.zeros((K + 2, n, n))
    U = np.zeros((K + 1, q, n))
    Ut = np.zeros((K + 1, q, n))
    V = np.zeros((K + 1, l, n))
    Vt = np.zeros((K + 1, l, n))
    H_seq = np.zeros((K + 1, l, l))
    Ht_seq = np.zeros((K + 1, l, l))
    H1_seq = np.zeros((K + 1, q, q))
    Ht1_seq = np.zeros((K + 1, q, q))
    In = np.eye(n)
    for k in range(K, -1, -1):
        s = system.stage(k)
        gains = coupled_gain_step(s, P1[k + 1], Q1[k + 1], Pt1[k + 1], Qt1[k + 1], gamma)
        if isinstance(gains, FeasibilityFailure):
            return FeasibilityFailure(step=k, which=gains.which,
                                      min_eigenvalue=gains.min_eigenvalue)
        Uk, Ubk, Vk, Vbk = gains
        U[k], V[k] = Uk, Vk
        Ut[k] = Ubk - Uk
        Vt[k] = Vbk - Vk

        A, B, C, D, F1, Phi = s.A, s.B, s.C, s.D, s.F1, s.Phi
        Ab, Bb, Cb, Db = s.Abb, s.Bbb, s.Cbb, s.Dbb
        PhiPhi = Phi.T @ Phi
        g2I = gamma * gamma * np.eye(l)
        Iq = np.eye(q)

        H = sym(g2I + B.T @ P1[k + 1] @ B + D.T @ P1[k + 1] @ D)
        Ht = sym(g2I + Bb.T @ Q1[k + 1] @ Bb + Db.T @ P1[k + 1] @ Db)
        H1 = sym(Iq + F1.T @ Pt1[k + 1] @ F1)
        Ht1 = sym(Iq + F1.T @ Qt1[k + 1] @ F1)
        H_seq[k], Ht_seq[k], H1_seq[k], Ht1_seq[k] = H, Ht, H1, Ht1

        Acl = A + F1 @ Uk
        Gu = Acl.T @ P1[k + 1] @ B + C.T @ P1[k + 1] @ D
        P1[k] = sym(Acl.T @ P1[k + 1] @ Acl + C.T @ P1[k + 1] @ C
                    - PhiPhi - Uk.T @ Uk - Gu @ np.linalg.solve(H, Gu.T))

        Abcl = Ab + F1 @ Ubk
        Gtu = Abcl.T @ Q1[k + 1] @ Bb + Cb.T @ P1[k + 1] @ Db
        Q1[k] = sym(Abcl.T @ Q1[k + 1] @ Abcl + Cb.T @ P1[k + 1] @ Cb
                    - PhiPhi - Ubk.T @ Ubk - Gtu @ np.linalg.solve(Ht, Gtu.T))

        Av = A + B @ Vk
        Cv = C + D @ Vk
        Gv = Av.T @ Pt1[k + 1] @ F1
        Pt1[k] = sym(Av.T @ Pt1[k + 1] @ Av + Cv.T @ Pt1[k + 1] @ Cv
                     + PhiPhi + In - Gv @ np.linalg.solve(H1, Gv.T))

        Abv = Ab + Bb @ Vbk
        Cbv = Cb + Db @ Vbk
        Gtv = Abv.T @ Qt1[k + 1] @ F1
        Qt1[k] = sym(Abv.T @ Qt1[k + 1] @ Abv + Cbv.T @ Pt1[k + 1] @ Cbv
                     + PhiPhi + In - Gtv @ np.linalg.solve(Ht1, Gtv.T))

    diag = HOperatorDiagnostics(H=_freeze(H_seq), Ht=_freeze(Ht_seq),
                                H1=_freeze(H1_seq), Ht1=_freeze(Ht1_seq))
    return H2HinfSolution(
        P1=_freeze(P1), Q1=_freeze(Q1), Pt1=_freeze(Pt1), Qt1=_freeze(Qt1),
        U=_freeze(U), Ut=_freeze(Ut), V=_freeze(V), Vt=_freeze(Vt),
        gamma=gamma,
        h2_value=float(system.x0 @ Qt1[0] @ system.x0),
        hinf_value=float(system.x0 @ Q1[0] @ system.x0),
        h_ops=diag)


class InfeasibleBracketError(RuntimeError):
    """The upper bracket endpoint is itself infeasible."""

    def __init__(self, gamma: float, failure: FeasibilityFailure):
        self.gamma = gamma
        self.failure = failure
        super().__init__(f"infeasible at bracket_hi={gamma}: {failure.describe()}")


@dataclass(frozen=True)
class GammaSearchResult:
    """Outcome of the feasibility bisection.

    gamma_star is the smallest certified-feasible level found (within tol
    of the true feasibility threshold, assuming feasibility is monotone in
    gamma).  `solution` is the full solve at `solution_gamma` =
    gamma_star + tol (a safely interior level).  `history` records every
    (gamma, feasible) probe; `non_monotone` is True when the optional scan
    contradicts the monotonicity assumption, None when no scan ran.
    """

    gamma_star: float
    solution_gamma: float
    solution: H2HinfSolution
    history: tuple[tuple[float, bool], ...]
    tol: float
    bracket: tuple[float, float]
    non_monotone: bool | None = None


def gamma_star_search(system: MeanFieldSystem, bracket_lo: float, bracket_hi: float,
                      tol: float, scan_points: int = 0) -> GammaSearchResult:
    """Bisect for the feasibility threshold of `h2hinf_solve` in gamma.

    Requires 0 < bracket_lo < bracket_hi and feasibility at bracket_hi
    (raises InfeasibleBracketError otherwise).  Feasibility is assumed
    monotone in gamma; pass scan_points > 0 to spot-check that assumption
    on a uniform grid and flag contradictions.
    """
    if not (0 < bracket_lo < bracket_hi):
        raise ValueError(f"need 0 < bracket_lo < bracket_hi, got "
                         f"({bracket_lo}, {bracket_hi})")
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    history: list[tuple[float, bool]] = []

    def feasible(g: float) -> H2HinfSolution | FeasibilityFailure:
        res = h2hinf_solve(system, g)
        history.append((g, not isinstance(res, FeasibilityFailure)))
        return res

    res_hi = feasible(bracket_hi)
    if isinstance(res_hi, FeasibilityFailure):
        raise InfeasibleBracketError(bracket_hi, res_hi)
    lo, hi = bracket_lo, bracket_hi
    res_lo = feasible(lo)
    if not isinstance(res_lo, FeasibilityFailure):
        gamma_star = lo  # feasible on the whole bracket
    else:
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if isinstance(feasible(mid), FeasibilityFailure):
                lo = mid
            else:
                hi = mid
        gamma_star = hi

    solution_gamma = gamma_star + tol
    solution = h2hinf_solve(system, solution_gamma)
    if isinstance(solution, FeasibilityFailure):
        # Contradicts monotonicity just above a feasible point; fall back.
        solution_gamma = gamma_star if gamma_star > bracket_lo else bracket_hi
        solution = h2hinf_solve(system, solution_gamma)
        assert not isinstance(solution, FeasibilityFailure)

    non_monotone: bool | None = None
    if scan_points > 0:
        flags = [not isinstance(feasible(g), FeasibilityFailure)
                 for g in np.linspace(bracket_lo, bracket_hi, scan_points)]
        # Monotone feasibility shows as 0...0 1...1 along increasing gamma.
        non_monotone = any(a and not b for a, b in zip(flags, flags[1:]))

    return GammaSearchResult(gamma_star=gamma_star, solution_gamma=solution_gamma,
                             solution=solution, history=tuple(history), tol=tol,
                             bracket=(bracket_lo, bracket_hi),
                             non_monotone=non_monotone)


# ---------------------------------------------------------------------------
# Solution serialization (JSON document + per-sequence CSV rows)
# ---------------------------------------------------------------------------

_H2HINF_SEQUENCES = ("P1", "Q1", "Pt1", "Qt1", "U", "Ut", "V", "Vt")


def h2hinf_solution_to_document(sol: H2HinfSolution) -> dict:
    """JSON document keyed by sequence name, plus H-operator diagnostics."""
    doc = {name: getattr(sol, name).tolist() for name in _H2HINF_SEQUENCES}
    doc["gamma"] = sol.gamma
    doc["h2_value"] = sol.h2_value
    doc["hinf_value"] = sol.hinf_value
    doc["H_ops"] = {name: getattr(sol.h_ops, name).tolist()
                    for name in ("H", "Ht", "H1", "Ht1")}
    return doc


def sequence_csv_rows(seq: np.ndarray) -> list[tuple[int, int, int, float]]:
    """Flatten a (steps, rows, cols) sequence to (k, row, col, value) rows."""
    return [(k, i, j, float(seq[k, i, j]))
            for k in range(seq.shape[0])
            for i in range(seq.shape[1])
            for j in range(seq.shape[2])]
