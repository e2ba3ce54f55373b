"""Command line entry point: ``dqlsq <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import harness
from .dual_quat import DualQMatrix, parse_dqmat, read_dqmat, write_dqmat
from .exceptions import FormatError
from .lsq_solvers import Alg1Config, Alg2Config, DualLsqProblem, check_params, load_config, solve_problem
from .quat_core import parse_qmat
from .quat_linalg import singular_values


def _configs(args) -> tuple[Alg1Config, Alg2Config]:
    if getattr(args, "config", None):
        alg1, alg2 = load_config(args.config)
        if args.preset_given:
            alg2 = Alg2Config.preset(args.preset, eps=alg2.eps, max_iter=alg2.max_iter)
        return alg1, alg2
    return Alg1Config(), Alg2Config.preset(args.preset)


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algo", choices=harness.ALGORITHMS, default="alg1")
    p.add_argument("--preset", choices=("paper", "theorem"), default=None,
                   help="Alg2 parameter preset (default: paper)")
    p.add_argument("--config", help="flat key = value solver config file")


def _add_case_flags(p: argparse.ArgumentParser, dims: bool = True) -> None:
    p.add_argument("--case", dest="case_id", choices=harness.CASES, default="ii")
    p.add_argument("--m", type=int, required=not dims)
    if dims:
        p.add_argument("--n", type=int)
        p.add_argument("--p", type=int)
        p.add_argument("--xin-rank", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ain-density", type=float, default=1.0)


def _save_problem(out: Path, inst: harness.Instance) -> None:
    out.mkdir(parents=True, exist_ok=True)
    write_dqmat(out / "A.dqmat", inst.problem.A)
    write_dqmat(out / "B.dqmat", inst.problem.B)
    write_dqmat(out / "X_true.dqmat", DualQMatrix(inst.X_st, inst.X_in))


def _load_problem(path: Path) -> DualLsqProblem:
    return DualLsqProblem.from_dual(read_dqmat(path / "A.dqmat"), read_dqmat(path / "B.dqmat"))


def _print_summary(sol) -> None:
    print(f"{sol.algorithm}: objst={sol.objst:.3e} objin={sol.objin:.3e} iter={sol.iterations}")


def cmd_synth(args) -> int:
    spec = harness.ExperimentSpec(args.case_id, args.m, args.n, args.p, args.seed,
                                  xin_rank=args.xin_rank, ain_density=args.ain_density)
    inst = harness.gen_synthetic(spec)
    _save_problem(Path(args.out), inst)
    print(f"wrote A.dqmat, B.dqmat, X_true.dqmat to {args.out}")
    return 0


def cmd_solve(args) -> int:
    alg1, alg2 = _configs(args)
    if args.problem:
        problem = _load_problem(Path(args.problem))
        sol, red = solve_problem(problem, args.algo, alg1, alg2)
        harness.write_reports(args.out, args.case_id, problem, sol, red, alg2)
    else:
        if None in (args.m, args.n, args.p):
            raise SystemExit("solve: give --problem DIR or all of --m --n --p")
        spec = harness.ExperimentSpec(args.case_id, args.m, args.n, args.p, args.seed,
                                      xin_rank=args.xin_rank, ain_density=args.ain_density,
                                      algorithm=args.algo, alg1=alg1, alg2=alg2, out_dir=args.out)
        sol = harness.run_experiment(spec).solution
    _print_summary(sol)
    return 0


def cmd_image_encrypt(args) -> int:
    X_st = harness.image_to_qmatrix(args.st)
    X_in = harness.image_to_qmatrix(getattr(args, "in"))
    inst = harness.gen_image_problem(X_st, X_in, args.case_id, args.m, args.seed, args.ain_density)
    out = Path(args.out)
    _save_problem(out, inst)
    harness.qmatrix_to_image(harness.display_scale(inst.problem.B_st), out / "bst.ppm")
    harness.qmatrix_to_image(harness.display_scale(inst.problem.B_in), out / "bin.ppm")
    print(f"wrote encrypted problem and bst.ppm, bin.ppm to {out}")
    return 0


def cmd_image_recover(args) -> int:
    alg1, alg2 = _configs(args)
    problem = _load_problem(Path(args.problem))
    sol, red = solve_problem(problem, args.algo, alg1, alg2)
    harness.write_reports(args.out, args.case_id, problem, sol, red, alg2, images=True)
    _print_summary(sol)
    return 0


def cmd_svd_dump(args) -> int:
    text = Path(args.file).read_text(encoding="ascii")
    head = text.split(None, 1)[0] if text.strip() else ""
    if head == "QMAT":
        parts = [("matrix", parse_qmat(text))]
    elif head == "DQMAT":
        D = parse_dqmat(text)
        parts = [("st", D.st), ("in", D.inf)]
    else:
        raise FormatError(f"{args.file}: expected a QMAT or DQMAT file")
    fh = open(args.out, "w", newline="", encoding="ascii") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("part", "index", "sigma"))
        for name, M in parts:
            for i, s in enumerate(singular_values(M)):
                w.writerow((name, i + 1, format(float(s), ".17g")))
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_check_params(args) -> int:
    _, cfg = _configs(args)
    report = check_params(cfg, args.n)
    for line in report.lines():
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dqlsq", description="Dual quaternion least-squares experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic problem as DQMAT files")
    _add_case_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("solve", help="solve a saved or freshly generated problem and write reports")
    _add_case_flags(p)
    _add_solver_flags(p)
    p.add_argument("--problem", help="directory holding A.dqmat and B.dqmat")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("image-encrypt", help="encrypt two PPM images into a dual quaternion system")
    _add_case_flags(p, dims=False)
    p.add_argument("--st", required=True, help="PPM image used as X_st")
    p.add_argument("--in", required=True, help="PPM image used as X_in")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_image_encrypt)

    p = sub.add_parser("image-recover", help="recover images from an encrypted problem")
    p.add_argument("--case", dest="case_id", choices=harness.CASES, default="ii")
    _add_solver_flags(p)
    p.add_argument("--problem", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_image_recover)

    p = sub.add_parser("svd-dump", help="singular values of a QMAT/DQMAT file as CSV")
    p.add_argument("file")
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_svd_dump)

    p = sub.add_parser("check-params", help="report the ADMM convergence conditions")
    p.add_argument("--preset", choices=("paper", "theorem"), default=None)
    p.add_argument("--config")
    p.add_argument("--n", type=int, default=1, help="block size used to materialise P")
    p.set_defaults(func=cmd_check_params)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    args.preset_given = getattr(args, "preset", None) is not None
    if getattr(args, "preset", "x") is None:
        args.preset = "paper"
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
