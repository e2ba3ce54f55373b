"""Least-squares solvers for over-determined dual quaternion equations ``A X = B``.

The dual residual ``||A_st X_st - B_st||_F + ||A_st X_in + A_in X_st - B_in||_F eps``
is minimised lexicographically: the standard part exactly, then the
infinitesimal part over the affine family

    X_st = A_st^+ B_st + (I - A_st^+ A_st) Z.

With ``C = A_in (I - A_st^+ A_st)``, ``D = A_in A_st^+ B_st - B_in``,
``G = [A_st, C]`` and ``W = [X_in; Z]`` the second stage is
``min_W 1/2 ||G W + D||_F^2``. Two iterative solvers are provided:

* ``alg1_solve``: proximal point iterations on the reduced variable
  ``W_1 = V_1 W`` where ``G = [G_1, O] V``.
* ``alg2_solve``: Jacobi-proximal ADMM for the nuclear-norm regularised
  split ``min alpha ||X_in||_* + 1/2 ||G W + D||^2  s.t.  X_in = H W``.
"""

from __future__ import annotations

import configparser
import csv
import math
import os
import time
from dataclasses import dataclass, field, fields, replace
from typing import Callable, Iterator, NamedTuple

import numpy as np

from .dual_quat import DualQMatrix
from .exceptions import DimensionError, PreconditionError
from .quat_core import QMatrix, frobenius_norm, hstack, inner_real, vstack
from .quat_linalg import (
    HPDFactor,
    _scale_columns,
    complex_adjoint,
    hpd_factor,
    hpd_factor_solve,
    nuclear_norm,
    pinv,
    qsvd,
    svt,
)

__all__ = [
    "DualLsqProblem",
    "ReducedProblem",
    "Alg1Config",
    "Alg2Config",
    "PRESETS",
    "TraceRecord",
    "DualSolution",
    "Alg1Result",
    "Alg2State",
    "ParamReport",
    "assemble",
    "alg1_solve",
    "reconstruct",
    "alg2_step",
    "alg2_iterates",
    "alg2_solve",
    "check_params",
    "kkt_residual",
    "baseline_direct",
    "objectives",
    "fejer_distance",
    "solve_problem",
    "parse_config",
    "load_config",
    "write_trace_csv",
    "TRACE_COLUMNS",
]


@dataclass(frozen=True)
class DualLsqProblem:
    """Data ``A = A_st + A_in eps`` (m x n) and ``B = B_st + B_in eps`` (m x p)."""

    A_st: QMatrix
    A_in: QMatrix
    B_st: QMatrix
    B_in: QMatrix

    def __post_init__(self):
        if self.A_st.shape != self.A_in.shape:
            raise DimensionError(f"A_st {self.A_st.shape} and A_in {self.A_in.shape} differ")
        if self.B_st.shape != self.B_in.shape:
            raise DimensionError(f"B_st {self.B_st.shape} and B_in {self.B_in.shape} differ")
        if self.A_st.rows != self.B_st.rows:
            raise DimensionError(f"A has {self.A_st.rows} rows but B has {self.B_st.rows}")

    @classmethod
    def from_dual(cls, A: DualQMatrix, B: DualQMatrix) -> "DualLsqProblem":
        return cls(A.st, A.inf, B.st, B.inf)

    @property
    def A(self) -> DualQMatrix:
        return DualQMatrix(self.A_st, self.A_in)

    @property
    def B(self) -> DualQMatrix:
        return DualQMatrix(self.B_st, self.B_in)

    @property
    def m(self) -> int:
        return self.A_st.rows

    @property
    def n(self) -> int:
        return self.A_st.cols

    @property
    def p(self) -> int:
        return self.B_st.cols


@dataclass(frozen=True)
class ReducedProblem:
    """Quantities derived once from a ``DualLsqProblem``.

    ``G ~= [G1, O] Vfull`` with ``G1 = U_r Sigma_r`` full column rank and
    ``Vfull = V*`` unitary; ``H = [I_n, O]`` is implicit.
    """

    A_st_pinv: QMatrix
    C: QMatrix
    D: QMatrix
    G: QMatrix
    r: int
    G1: QMatrix
    Vfull: QMatrix
    sigma_G: np.ndarray

    @property
    def n(self) -> int:
        return self.C.cols

    @property
    def p(self) -> int:
        return self.D.cols


def _check_positive(obj, names):
    for name in names:
        v = getattr(obj, name)
        if not (v > 0 and math.isfinite(v)):
            raise PreconditionError(f"{type(obj).__name__}.{name} must be positive, got {v!r}")
    if not (isinstance(obj.max_iter, int) and obj.max_iter >= 1):
        raise PreconditionError(f"max_iter must be a positive integer, got {obj.max_iter!r}")


@dataclass(frozen=True)
class Alg1Config:
    tau: float = 1.0
    eps: float = 1e-9
    max_iter: int = 200
    relative_stop: bool = False

    def __post_init__(self):
        _check_positive(self, ("tau", "eps"))


@dataclass(frozen=True)
class Alg2Config:
    """Jacobi-proximal ADMM parameters.

    ``kkt_every`` > 0 evaluates the (probe-based, comparatively expensive)
    KKT residual every that many iterations; the terminal iterate is always
    evaluated.
    """

    alpha: float = 1e-7
    tau_x: float = 1.0
    tau_w: float = 0.6
    rho: float = 2.5
    gamma: float = 0.5
    eps: float = 1e-9
    max_iter: int = 200
    relative_stop: bool = False
    kkt_every: int = 0

    def __post_init__(self):
        _check_positive(self, ("alpha", "tau_x", "tau_w", "rho", "gamma", "eps"))

    @classmethod
    def preset(cls, name: str, **overrides) -> "Alg2Config":
        try:
            base = PRESETS[name]
        except KeyError:
            raise PreconditionError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
        return replace(base, **overrides)


# "paper" reproduces the experimental settings; "theorem" satisfies the
# sufficient conditions checked by check_params.
PRESETS = {
    "paper": Alg2Config(),
    "theorem": Alg2Config(tau_x=2.0, tau_w=3.0, rho=0.2, gamma=0.9),
}


TRACE_COLUMNS = ("iter", "f0", "objst", "objin", "step_norm", "primal_residual", "kkt_residual", "elapsed_ms")


@dataclass
class TraceRecord:
    iter: int
    f0: float | None = None
    objst: float | None = None
    objin: float | None = None
    step_norm: float | None = None
    primal_residual: float | None = None
    kkt_residual: float | None = None
    elapsed_ms: float | None = None


@dataclass
class DualSolution:
    X_st: QMatrix
    X_in: QMatrix
    Z: QMatrix
    objst: float
    objin: float
    algorithm: str
    iterations: int = 0
    converged: bool = True
    trace: list[TraceRecord] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    @property
    def X(self) -> DualQMatrix:
        return DualQMatrix(self.X_st, self.X_in)


def objectives(problem: DualLsqProblem, X_st: QMatrix, X_in: QMatrix) -> tuple[float, float]:
    """Residuals ``||A_st X_st - B_st||_F`` and ``||A_st X_in + A_in X_st - B_in||_F``."""
    if X_st.shape != (problem.n, problem.p) or X_in.shape != (problem.n, problem.p):
        raise DimensionError(
            f"solution parts {X_st.shape}, {X_in.shape} do not match ({problem.n}, {problem.p})"
        )
    objst = frobenius_norm(problem.A_st @ X_st - problem.B_st)
    objin = frobenius_norm(problem.A_st @ X_in + problem.A_in @ X_st - problem.B_in)
    return objst, objin


def assemble(problem: DualLsqProblem, rank_tol: float = 1e-10) -> ReducedProblem:
    n = problem.n
    Ap = pinv(problem.A_st, rank_tol)
    proj = QMatrix.eye(n) - Ap @ problem.A_st
    C = problem.A_in @ proj
    D = problem.A_in @ (Ap @ problem.B_st) - problem.B_in
    G = hstack([problem.A_st, C])
    res = qsvd(G, rank_tol)
    G1 = _scale_columns(res.Ur, res.sigma_r)
    return ReducedProblem(Ap, C, D, G, res.rank, G1, res.V.H, res.sigma)


def _x_st_from_z(problem: DualLsqProblem, Ap: QMatrix, Z: QMatrix) -> QMatrix:
    return Ap @ problem.B_st + Z - Ap @ (problem.A_st @ Z)


def _solution(problem, red, X_in, Z, algorithm, **kw) -> DualSolution:
    X_st = _x_st_from_z(problem, red.A_st_pinv, Z)
    objst, objin = objectives(problem, X_st, X_in)
    return DualSolution(X_st, X_in, Z, objst, objin, algorithm, **kw)


def reconstruct(
    red: ReducedProblem,
    problem: DualLsqProblem,
    W1: QMatrix,
    W2: QMatrix | None = None,
    algorithm: str = "alg1",
) -> DualSolution:
    """Map ``[W1; W2]`` back to ``(X_st, X_in)``; ``W2`` is free and defaults to zero."""
    n, p, r = red.n, red.p, red.r
    if W1.shape != (r, p):
        raise DimensionError(f"W1 must be {(r, p)}, got {W1.shape}")
    if W2 is not None and W2.shape != (2 * n - r, p):
        raise DimensionError(f"W2 must be {(2 * n - r, p)}, got {W2.shape}")
    V = red.Vfull.H
    W = V[:, :r] @ W1 if r else QMatrix.zeros(2 * n, p)
    if W2 is not None and r < 2 * n:
        W = W + V[:, r:] @ W2
    return _solution(problem, red, W[:n], W[n:], algorithm)


@dataclass
class Alg1Result:
    W1: QMatrix
    trace: list[TraceRecord]
    iterations: int
    converged: bool
    stationarity: float


def _f0(G1: QMatrix, W1: QMatrix, D: QMatrix) -> float:
    return 0.5 * frobenius_norm(G1 @ W1 + D) ** 2


def alg1_solve(
    red: ReducedProblem,
    cfg: Alg1Config = Alg1Config(),
    W1_0: QMatrix | None = None,
    problem: DualLsqProblem | None = None,
    callback: Callable[[int, QMatrix], None] | None = None,
) -> Alg1Result:
    """Proximal point iterations ``W1 <- (tau I + G1* G1)^{-1} (tau W1 - G1* D)``.

    The trace holds one record per iterate starting at ``W1_0`` (iteration 0).
    When ``problem`` is given the records also carry ``objst``/``objin`` of
    the reconstructed solution with ``W2 = 0``. ``callback(k, W1)`` sees
    every iterate, including ``W1_0``.
    """
    r, p = red.r, red.p
    G1, D = red.G1, red.D
    W = QMatrix.zeros(r, p) if W1_0 is None else W1_0
    if W.shape != (r, p):
        raise DimensionError(f"W1_0 must be {(r, p)}, got {W.shape}")
    t0 = time.perf_counter()

    def record(k, W, step):
        rec = TraceRecord(k, f0=_f0(G1, W, D), step_norm=step)
        if problem is not None:
            sol = reconstruct(red, problem, W)
            rec.objst, rec.objin = sol.objst, sol.objin
        rec.elapsed_ms = 1e3 * (time.perf_counter() - t0)
        if callback is not None:
            callback(k, W)
        return rec

    trace = [record(0, W, None)]
    if r == 0:
        return Alg1Result(W, trace, 0, True, 0.0)

    M = QMatrix.eye(r) * cfg.tau + G1.H @ G1
    factor = hpd_factor(M)
    G1tD = G1.H @ D
    converged = False
    k = 0
    for k in range(1, cfg.max_iter + 1):
        W_next = hpd_factor_solve(None, W * cfg.tau - G1tD, factor)
        step = frobenius_norm(W_next - W)
        W = W_next
        trace.append(record(k, W, step))
        tol = cfg.eps * max(1.0, frobenius_norm(W)) if cfg.relative_stop else cfg.eps
        if step <= tol:
            converged = True
            break
    stationarity = frobenius_norm(G1.H @ (G1 @ W + D))
    return Alg1Result(W, trace, k, converged, stationarity)


class Alg2State(NamedTuple):
    X_in: QMatrix
    W: QMatrix
    T: QMatrix


@dataclass(frozen=True)
class _Alg2Operators:
    factor: HPDFactor
    GtD: QMatrix


def _alg2_operators(red: ReducedProblem, cfg: Alg2Config) -> _Alg2Operators:
    n = red.n
    # tau_W I + G*G + rho H*H, with H*H = diag(I_n, 0)
    hth = np.zeros(2 * n)
    hth[:n] = cfg.rho
    M = red.G.H @ red.G + QMatrix.diag(cfg.tau_w + hth)
    return _Alg2Operators(hpd_factor(M), red.G.H @ red.D)


def alg2_step(
    state: Alg2State,
    red: ReducedProblem,
    cfg: Alg2Config,
    ops: _Alg2Operators | None = None,
) -> Alg2State:
    """One Jacobi-proximal ADMM update; X and W both read only the k-th state."""
    X, W, T = state
    n, p = red.n, red.p
    if X.shape != (n, p) or W.shape != (2 * n, p) or T.shape != (n, p):
        raise DimensionError("ADMM state shapes do not match the reduced problem")
    if ops is None:
        ops = _alg2_operators(red, cfg)
    rho, tx = cfg.rho, cfg.tau_x
    HW = W[:n]
    X_tilde = (HW * rho + T + X * tx) / (rho + tx)
    X_next = svt(X_tilde, cfg.alpha / (rho + tx))
    rhs = vstack([X * rho - T, QMatrix.zeros(n, p)]) + W * cfg.tau_w - ops.GtD
    W_next = hpd_factor_solve(None, rhs, ops.factor)
    T_next = T - (X_next - W_next[:n]) * (cfg.gamma * rho)
    return Alg2State(X_next, W_next, T_next)


def _zero_state(red: ReducedProblem) -> Alg2State:
    n, p = red.n, red.p
    return Alg2State(QMatrix.zeros(n, p), QMatrix.zeros(2 * n, p), QMatrix.zeros(n, p))


def alg2_iterates(
    red: ReducedProblem, cfg: Alg2Config, init: Alg2State | None = None
) -> Iterator[Alg2State]:
    """Yield ``Theta^0, Theta^1, ...`` indefinitely (no stopping test)."""
    state = _zero_state(red) if init is None else Alg2State(*init)
    ops = _alg2_operators(red, cfg)
    yield state
    while True:
        state = alg2_step(state, red, cfg, ops)
        yield state


def alg2_solve(
    red: ReducedProblem,
    problem: DualLsqProblem,
    cfg: Alg2Config = Alg2Config(),
    init: Alg2State | None = None,
) -> DualSolution:
    n = red.n
    t0 = time.perf_counter()
    its = alg2_iterates(red, cfg, init)
    state = next(its)
    trace = [TraceRecord(0, f0=0.5 * frobenius_norm(red.G @ state.W + red.D) ** 2,
                         primal_residual=frobenius_norm(state.X_in - state.W[:n]), elapsed_ms=0.0)]
    converged = False
    k = 0
    for k in range(1, cfg.max_iter + 1):
        new = next(its)
        step = math.sqrt(frobenius_norm(new.X_in - state.X_in) ** 2 + frobenius_norm(new.W - state.W) ** 2)
        state = new
        X_st = _x_st_from_z(problem, red.A_st_pinv, state.W[n:])
        objst, objin = objectives(problem, X_st, state.X_in)
        rec = TraceRecord(
            k,
            f0=0.5 * frobenius_norm(red.G @ state.W + red.D) ** 2,
            objst=objst,
            objin=objin,
            step_norm=step,
            primal_residual=frobenius_norm(state.X_in - state.W[:n]),
        )
        if cfg.kkt_every and k % cfg.kkt_every == 0:
            rec.kkt_residual = kkt_residual(state.X_in, state.W, state.T, red, cfg)
        rec.elapsed_ms = 1e3 * (time.perf_counter() - t0)
        trace.append(rec)
        scale = math.sqrt(frobenius_norm(state.X_in) ** 2 + frobenius_norm(state.W) ** 2)
        tol = cfg.eps * max(1.0, scale) if cfg.relative_stop else cfg.eps
        if step <= tol:
            converged = True
            break
    kkt = trace[-1].kkt_residual
    if kkt is None:
        kkt = kkt_residual(state.X_in, state.W, state.T, red, cfg)
        trace[-1].kkt_residual = kkt
    trace[-1].elapsed_ms = 1e3 * (time.perf_counter() - t0)
    return _solution(
        problem, red, state.X_in, state.W[n:], "alg2",
        iterations=k, converged=converged, trace=trace,
        diagnostics={
            "primal_residual": trace[-1].primal_residual,
            "kkt_residual": kkt,
            "state": state,
            "params_ok": check_params(cfg, 1).hypotheses_hold,
        },
    )


@dataclass(frozen=True)
class ParamReport:
    """Outcome of the sufficient conditions for ADMM convergence."""

    gamma_tau_x_rho: float
    gamma_tau_w: float
    two_minus_gamma_minus_2gamma_rho: float
    cond_tau_x: bool
    cond_tau_w: bool
    cond_rho: bool
    Q: QMatrix
    P: QMatrix
    p_min_eig: float

    @property
    def hypotheses_hold(self) -> bool:
        return self.cond_tau_x and self.cond_tau_w and self.cond_rho

    @property
    def p_positive_definite(self) -> bool:
        return self.p_min_eig > 0.0

    def lines(self) -> list[str]:
        flag = {True: "ok", False: "FAIL"}
        return [
            f"gamma*(tau_x+rho) = {self.gamma_tau_x_rho:.6g} > 1: {flag[self.cond_tau_x]}",
            f"gamma*tau_w = {self.gamma_tau_w:.6g} > 1: {flag[self.cond_tau_w]}",
            f"2-gamma-2*gamma*rho = {self.two_minus_gamma_minus_2gamma_rho:.6g} > 0: {flag[self.cond_rho]}",
            f"min eigenvalue of P = {self.p_min_eig:.6g}",
            f"convergence hypotheses hold: {'yes' if self.hypotheses_hold else 'no'}",
        ]


def _weight_blocks(cfg: Alg2Config, n: int) -> tuple[np.ndarray, np.ndarray]:
    tx, tw, rho, g = cfg.tau_x, cfg.tau_w, cfg.rho, cfg.gamma
    I = np.eye(n)
    Z = np.zeros((n, n))
    # rows/cols ordered (X_in, W[:n], W[n:], T); H = [I, O] touches W[:n]
    Q = np.block([
        [(tx + rho) * I, Z, Z, Z],
        [Z, (tw + rho) * I, Z, Z],
        [Z, Z, tw * I, Z],
        [Z, Z, Z, I / (g * rho)],
    ])
    P = np.block([
        [(tx + rho) * I, Z, Z, I / g],
        [Z, (tw + rho) * I, Z, I / g],
        [Z, Z, tw * I, Z],
        [I / g, I / g, Z, (2 - g) / (g * g * rho) * I],
    ])
    return Q, P


def check_params(cfg: Alg2Config, n: int) -> ParamReport:
    """Evaluate the three scalar conditions and materialise ``Q`` and ``P`` (size 4n)."""
    tx, tw, rho, g = cfg.tau_x, cfg.tau_w, cfg.rho, cfg.gamma
    a, b, c = g * (tx + rho), g * tw, 2.0 - g - 2.0 * g * rho
    Qr, Pr = _weight_blocks(cfg, n)
    P = QMatrix.from_real(Pr)
    p_min = float(np.linalg.eigvalsh(complex_adjoint(P))[0])
    return ParamReport(a, b, c, a > 1.0, b > 1.0, c > 0.0, QMatrix.from_real(Qr), P, p_min)


def fejer_distance(theta, theta_ref, cfg: Alg2Config, n: int | None = None) -> float:
    """``||Theta - Theta_ref||_Q`` with ``Q = diag((tau_x+rho) I, tau_w I + rho H*H, I/(gamma rho))``."""
    X, W, T = theta
    Xr, Wr, Tr = theta_ref
    n = X.rows if n is None else n
    if X.shape != Xr.shape or W.shape != Wr.shape or T.shape != Tr.shape or W.rows != 2 * n:
        raise DimensionError("fejer_distance: state shapes disagree")
    dX, dW, dT = X - Xr, W - Wr, T - Tr
    sq = (
        (cfg.tau_x + cfg.rho) * frobenius_norm(dX) ** 2
        + cfg.tau_w * frobenius_norm(dW) ** 2
        + cfg.rho * frobenius_norm(dW[:n]) ** 2
        + frobenius_norm(dT) ** 2 / (cfg.gamma * cfg.rho)
    )
    return math.sqrt(sq)


def _probe_set(X: QMatrix, count: int, seed: int) -> list[QMatrix]:
    rng = np.random.default_rng(seed)
    scale = max(1.0, frobenius_norm(X))
    probes = [QMatrix.zeros(*X.shape), X * 2.0]
    for _ in range(count):
        E = rng.standard_normal((*X.shape, 4))
        nrm = np.linalg.norm(E)
        probes.append(QMatrix(E * (scale / nrm if nrm else 0.0)))
    return probes


def kkt_residual(
    X_in: QMatrix,
    W: QMatrix,
    T: QMatrix,
    red: ReducedProblem,
    cfg: Alg2Config,
    probes: int = 50,
    seed: int = 0,
) -> float:
    """Largest violation among the KKT conditions of the regularised split problem.

    Stationarity in ``W`` and primal feasibility are measured as Frobenius
    norms. Membership ``T in d(alpha ||.||_*)(X_in)`` is probed through the
    subgradient inequality on a fixed set of test points.
    """
    n = red.n
    if W.shape != (2 * n, X_in.cols) or T.shape != X_in.shape:
        raise DimensionError("kkt_residual: state shapes disagree")
    HtT = vstack([T, QMatrix.zeros(n, T.cols)])
    stat = frobenius_norm(HtT + red.G.H @ (red.G @ W + red.D))
    feas = frobenius_norm(X_in - W[:n])
    fx = cfg.alpha * nuclear_norm(X_in)
    worst = 0.0
    for Y in _probe_set(X_in, probes, seed):
        gap = cfg.alpha * nuclear_norm(Y) - fx - inner_real(T, Y - X_in)
        worst = max(worst, -gap)
    return max(stat, feas, worst)


def baseline_direct(problem: DualLsqProblem, rank_tol: float = 1e-10) -> DualSolution:
    """Closed-form per-part solve ignoring the free variable:
    ``X_st = A_st^+ B_st`` and ``X_in = A_st^+ (B_in - A_in X_st)``."""
    Ap = pinv(problem.A_st, rank_tol)
    X_st = Ap @ problem.B_st
    X_in = Ap @ (problem.B_in - problem.A_in @ X_st)
    objst, objin = objectives(problem, X_st, X_in)
    return DualSolution(X_st, X_in, QMatrix.zeros(problem.n, problem.p), objst, objin, "baseline")


def solve_problem(
    problem: DualLsqProblem,
    algorithm: str,
    alg1_cfg: Alg1Config | None = None,
    alg2_cfg: Alg2Config | None = None,
    rank_tol: float = 1e-10,
) -> tuple[DualSolution, ReducedProblem | None]:
    """Run ``alg1``, ``alg2`` or ``baseline`` end to end."""
    if algorithm == "baseline":
        t0 = time.perf_counter()
        sol = baseline_direct(problem, rank_tol)
        sol.diagnostics["time_s"] = time.perf_counter() - t0
        return sol, None
    t0 = time.perf_counter()
    red = assemble(problem, rank_tol)
    if algorithm == "alg1":
        res = alg1_solve(red, alg1_cfg or Alg1Config(), problem=problem)
        sol = reconstruct(red, problem, res.W1)
        sol.iterations, sol.converged, sol.trace = res.iterations, res.converged, res.trace
        sol.diagnostics["stationarity"] = res.stationarity
    elif algorithm == "alg2":
        sol = alg2_solve(red, problem, alg2_cfg or Alg2Config())
    else:
        raise PreconditionError(f"unknown algorithm {algorithm!r}")
    sol.diagnostics["time_s"] = time.perf_counter() - t0
    return sol, red


# -- config files and trace output --------------------------------------------------

_CONFIG_KEYS = {"tau", "alpha", "tau_x", "tau_w", "rho", "gamma", "eps", "max_iter", "preset", "relative_stop"}


def parse_config(text: str) -> tuple[Alg1Config, Alg2Config]:
    """Parse a flat ``key = value`` solver config (``#`` comments allowed)."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.read_string("[solver]\n" + text)
    raw = dict(cp["solver"])
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise PreconditionError(f"unknown config keys: {sorted(unknown)}")
    alg2 = Alg2Config.preset(raw.pop("preset", "paper").strip())
    alg1 = Alg1Config()
    casts = {f.name: f.type for f in fields(Alg2Config)}
    a1, a2 = {}, {}
    for key, val in raw.items():
        if key == "max_iter":
            a1[key] = a2[key] = int(val)
        elif key == "relative_stop":
            a1[key] = a2[key] = cp.getboolean("solver", key)
        elif key == "tau":
            a1[key] = float(val)
        elif key == "eps":
            a1[key] = a2[key] = float(val)
        elif key in casts:
            a2[key] = float(val)
    return replace(alg1, **a1), replace(alg2, **a2)


def load_config(path: str | os.PathLike) -> tuple[Alg1Config, Alg2Config]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _csv_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_trace_csv(path: str | os.PathLike, trace: list[TraceRecord]) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for rec in trace:
            row = [_csv_value(getattr(rec, c)) for c in TRACE_COLUMNS[:-1]]
            row.append("" if rec.elapsed_ms is None else f"{rec.elapsed_ms:.3f}")
            w.writerow(row)
