"""Dense quaternion / dual quaternion linear algebra and least-squares solvers
for over-determined dual quaternion matrix equations."""

from .dual_quat import (
    DualNumber,
    DualQMatrix,
    DualQuaternion,
    dq_mat_mul,
    dqm_frobenius,
    dual_abs,
    dual_cmp,
    dual_mul,
    metric_rho,
    v_value,
)
from .exceptions import DimensionError, FactorizationError, FormatError, InputError, PreconditionError
from .harness import ExperimentSpec, gen_synthetic, run_experiment
from .lsq_solvers import (
    Alg1Config,
    Alg2Config,
    DualLsqProblem,
    DualSolution,
    alg1_solve,
    alg2_solve,
    assemble,
    baseline_direct,
    check_params,
    objectives,
    reconstruct,
    solve_problem,
)
from .quat_core import QMatrix, Quaternion, conj_transpose, frobenius_norm, inner_real, mat_mul, mul_qq
from .quat_linalg import complex_adjoint, hpd_factor, hpd_factor_solve, nuclear_norm, pinv, qsvd, svt

__version__ = "0.1.0"
