"""Seeded experiment generation, image I/O and CSV reporting.

Random streams
--------------
Every matrix draws from its own PCG64 stream: child ``i`` of
``numpy.random.SeedSequence(seed).spawn(len(STREAMS))`` feeds ``STREAMS[i]``.
Regenerating one matrix therefore never perturbs the others.
"""

from __future__ import annotations

import csv
import math
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .exceptions import FormatError, InputError
from .lsq_solvers import (
    Alg1Config,
    Alg2Config,
    DualLsqProblem,
    DualSolution,
    ReducedProblem,
    check_params,
    solve_problem,
    write_trace_csv,
)
from .quat_core import QMatrix
from .quat_linalg import _scale_columns, qsvd, singular_values

__all__ = [
    "STREAMS",
    "SUMMARY_COLUMNS",
    "ExperimentSpec",
    "Instance",
    "matlab_round",
    "gen_synthetic",
    "gen_image_problem",
    "read_ppm",
    "write_ppm",
    "image_to_qmatrix",
    "qmatrix_to_image",
    "display_scale",
    "write_reports",
    "run_experiment",
]

STREAMS = ("A_st", "A_in", "X_st", "X_in", "A_in_mask")
SUMMARY_COLUMNS = ("case", "m", "n", "p", "algorithm", "objst", "objin", "iter", "time_s", "rank_G", "params_ok")
CASES = ("i", "ii", "iii")
ALGORITHMS = ("alg1", "alg2", "baseline")


def matlab_round(x: float) -> int:
    """Round half away from zero."""
    return int(math.floor(abs(x) + 0.5)) * (1 if x >= 0 else -1)


@dataclass
class ExperimentSpec:
    case_id: str
    m: int
    n: int = 0
    p: int = 0
    seed: int = 0
    xin_rank: int | None = None
    ain_density: float = 1.0
    algorithm: str = "alg1"
    preset: str = "paper"
    alg1: Alg1Config = field(default_factory=Alg1Config)
    alg2: Alg2Config | None = None
    out_dir: str | os.PathLike | None = None
    image_st: str | os.PathLike | None = None
    image_in: str | os.PathLike | None = None

    @property
    def is_image(self) -> bool:
        return self.image_st is not None

    def alg2_config(self) -> Alg2Config:
        return self.alg2 if self.alg2 is not None else Alg2Config.preset(self.preset)

    def validate(self) -> None:
        if self.case_id not in CASES:
            raise InputError(f"case must be one of {CASES}, got {self.case_id!r}")
        if self.algorithm not in ALGORITHMS:
            raise InputError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if (self.image_st is None) != (self.image_in is None):
            raise InputError("image specs need both image_st and image_in")
        if min(self.m, self.n, self.p) < 1:
            raise InputError(f"dimensions must be positive, got m={self.m}, n={self.n}, p={self.p}")
        if self.case_id == "i" and not self.m < self.n:
            raise InputError(f"case (i) needs m < n, got m={self.m}, n={self.n}")
        if self.case_id in ("ii", "iii") and not self.m > self.n:
            raise InputError(f"case ({self.case_id}) needs m > n, got m={self.m}, n={self.n}")
        if self.xin_rank is not None and not 0 <= self.xin_rank <= min(self.n, self.p):
            raise InputError(f"xin_rank must lie in [0, {min(self.n, self.p)}]")
        if not 0.0 < self.ain_density <= 1.0:
            raise InputError(f"ain_density must lie in (0, 1], got {self.ain_density}")


class Instance(NamedTuple):
    problem: DualLsqProblem
    X_st: QMatrix
    X_in: QMatrix


def _rngs(seed: int) -> dict[str, np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(len(STREAMS))
    return {name: np.random.Generator(np.random.PCG64(ss)) for name, ss in zip(STREAMS, children)}


def _gauss(rng: np.random.Generator, rows: int, cols: int) -> QMatrix:
    return QMatrix(rng.standard_normal((rows, cols, 4)))


def _truncate(A: QMatrix, keep: int) -> QMatrix:
    res = qsvd(A)
    return _scale_columns(res.U[:, :keep], res.sigma[:keep]) @ res.V[:, :keep].H


def _coefficients(case_id: str, m: int, n: int, density: float, rngs) -> tuple[QMatrix, QMatrix]:
    A_st = _gauss(rngs["A_st"], m, n)
    if case_id == "iii":
        A_st = _truncate(A_st, matlab_round(n / 1.2))
    A_in = _gauss(rngs["A_in"], m, n)
    if density < 1.0:
        nnz = matlab_round(density * m * n)
        keep = rngs["A_in_mask"].choice(m * n, size=nnz, replace=False)
        mask = np.zeros(m * n)
        mask[keep] = 1.0
        A_in = QMatrix(A_in.data * mask.reshape(m, n, 1))
    return A_st, A_in


def _consistent(A_st, A_in, X_st, X_in) -> Instance:
    return Instance(DualLsqProblem(A_st, A_in, A_st @ X_st, A_st @ X_in + A_in @ X_st), X_st, X_in)


def gen_synthetic(spec: ExperimentSpec) -> Instance:
    """Gaussian instance of the requested case with a consistent right-hand side."""
    spec.validate()
    rngs = _rngs(spec.seed)
    A_st, A_in = _coefficients(spec.case_id, spec.m, spec.n, spec.ain_density, rngs)
    X_st = _gauss(rngs["X_st"], spec.n, spec.p)
    X_in = _gauss(rngs["X_in"], spec.n, spec.p)
    if spec.xin_rank is not None:
        X_in = _truncate(X_in, spec.xin_rank)
    return _consistent(A_st, A_in, X_st, X_in)


def gen_image_problem(X_st: QMatrix, X_in: QMatrix, case_id: str, m: int, seed: int = 0,
                      ain_density: float = 1.0) -> Instance:
    """Encrypt two images with seeded key matrices ``A_st``, ``A_in`` (m x n)."""
    if X_st.shape != X_in.shape:
        raise InputError(f"image sizes differ: {X_st.shape} vs {X_in.shape}")
    n, p = X_st.shape
    ExperimentSpec(case_id, m, n, p, seed, ain_density=ain_density).validate()
    A_st, A_in = _coefficients(case_id, m, n, ain_density, _rngs(seed))
    return _consistent(A_st, A_in, X_st, X_in)


# -- PPM (P6) -------------------------------------------------------------------

_PPM_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def read_ppm(path: str | os.PathLike) -> np.ndarray:
    """Read a binary 8-bit RGB PPM into a ``(height, width, 3)`` uint8 array."""
    buf = Path(path).read_bytes()
    pos = 0
    tokens = []
    for _ in range(4):
        mt = _PPM_TOKEN.match(buf, pos)
        if mt is None:
            raise FormatError("truncated PPM header")
        tokens.append(mt.group(1))
        pos = mt.end()
    if tokens[0] != b"P6":
        raise FormatError(f"unsupported image format {tokens[0][:8]!r}; only binary PPM (P6) is read")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise FormatError("malformed PPM header") from exc
    if maxval != 255:
        raise FormatError(f"only 8-bit PPM (maxval 255) is supported, got maxval {maxval}")
    if pos >= len(buf) or not buf[pos : pos + 1].isspace():
        raise FormatError("truncated PPM header")
    pos += 1
    size = width * height * 3
    raster = buf[pos : pos + size]
    if len(raster) != size:
        raise FormatError(f"truncated PPM raster: expected {size} bytes, found {len(raster)}")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3).copy()


def write_ppm(path: str | os.PathLike, rgb: np.ndarray) -> None:
    rgb = np.asarray(rgb)
    if rgb.ndim != 3 or rgb.shape[2] != 3 or rgb.dtype != np.uint8:
        raise InputError("expected a (height, width, 3) uint8 array")
    h, w, _ = rgb.shape
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (w, h))
        fh.write(np.ascontiguousarray(rgb).tobytes())


def image_to_qmatrix(path: str | os.PathLike) -> QMatrix:
    """Pure quaternion matrix with R, G, B in the i, j, k parts, scaled to [0, 1]."""
    rgb = read_ppm(path).astype(float) / 255.0
    data = np.zeros(rgb.shape[:2] + (4,))
    data[..., 1:] = rgb
    return QMatrix(data)


def qmatrix_to_image(X: QMatrix, path: str | os.PathLike) -> None:
    """Write the i, j, k parts of ``X`` as RGB; the real part is ignored."""
    rgb = np.rint(np.clip(X.data[..., 1:], 0.0, 1.0) * 255.0).astype(np.uint8)
    write_ppm(path, rgb)


def display_scale(X: QMatrix) -> QMatrix:
    """Affinely map the imaginary parts of ``X`` onto [0, 1] for viewing."""
    im = X.data[..., 1:]
    lo, hi = float(im.min()), float(im.max())
    data = np.zeros_like(X.data)
    if hi > lo:
        data[..., 1:] = (im - lo) / (hi - lo)
    return QMatrix(data)


# -- reporting ------------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_reports(
    out_dir: str | os.PathLike,
    case_id: str,
    problem: DualLsqProblem,
    sol: DualSolution,
    red: ReducedProblem | None,
    alg2_cfg: Alg2Config | None = None,
    images: bool = False,
) -> dict[str, Path]:
    """Write summary/trace/spectrum CSVs (and PPMs for image runs).

    Files already written are removed if a later one fails.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: dict[str, Path] = {}
    try:
        params_ok = check_params(alg2_cfg, 1).hypotheses_hold if sol.algorithm == "alg2" else None
        row = [
            case_id, problem.m, problem.n, problem.p, sol.algorithm, sol.objst, sol.objin,
            sol.iterations, f"{sol.diagnostics.get('time_s', 0.0):.3f}",
            None if red is None else red.r, params_ok,
        ]
        written["summary"] = out / "summary.csv"
        _write_csv(written["summary"], SUMMARY_COLUMNS, [[_fmt(v) if not isinstance(v, str) else v for v in row]])

        written["trace"] = out / "trace.csv"
        write_trace_csv(written["trace"], sol.trace)

        written["sv_xin"] = out / "sv_xin.csv"
        sv = singular_values(sol.X_in)
        _write_csv(written["sv_xin"], ("index", "sigma"), [[i + 1, _fmt(s)] for i, s in enumerate(sv)])

        if images:
            for key, X in (("xst", sol.X_st), ("xin", sol.X_in),
                           ("bst", display_scale(problem.B_st)), ("bin", display_scale(problem.B_in))):
                written[key] = out / f"{key}.ppm"
                qmatrix_to_image(X, written[key])
    except BaseException:
        for path in written.values():
            if path.exists():
                path.unlink()
        raise
    return written


@dataclass
class RunReport:
    instance: Instance
    solution: DualSolution
    reduced: ReducedProblem | None
    files: dict[str, Path]


def run_experiment(spec: ExperimentSpec) -> RunReport:
    """Generate (or encrypt) an instance, solve it and write the report files."""
    if spec.is_image:
        X_st = image_to_qmatrix(spec.image_st)
        X_in = image_to_qmatrix(spec.image_in)
        spec.n, spec.p = X_st.shape
        spec.validate()
        inst = gen_image_problem(X_st, X_in, spec.case_id, spec.m, spec.seed, spec.ain_density)
    else:
        inst = gen_synthetic(spec)
    alg2_cfg = spec.alg2_config()
    sol, red = solve_problem(inst.problem, spec.algorithm, spec.alg1, alg2_cfg)
    files = {}
    if spec.out_dir is not None:
        files = write_reports(spec.out_dir, spec.case_id, inst.problem, sol, red, alg2_cfg, images=spec.is_image)
    return RunReport(inst, sol, red, files)
