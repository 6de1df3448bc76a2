"""Command line front end.

Problems travel as JSON files: {"A": [[...]], "theta": "sphere",
"h": {"kind": "zero_norm", "nu": 0.5}} plus optional "x0" / "xbar"
vectors.  Exit codes: 0 ok, 2 bad input, 3 bad solver config, 4 point
not critical, 5 theta unsupported by the subcommand, 6 oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .certify import verify_kl_half, write_samples_csv
from .linalg import SymMatrix
from .oracle import (
    prox_bruteforce,
    random_feasible_point,
    random_symmetric,
    subdiff_distance_bruteforce,
)
from .sets import DegenerateInput
from .solver import (
    IterateTrace,
    RateEstimationError,
    SolverConfig,
    SolverConfigError,
    estimate_linear_rate,
    prox_theta_h,
    proximal_gradient,
    random_feasible,
    write_trace_csv,
)
from .sphere_quadratic import crit_points_general
from .subdiff import (
    ProblemSpec,
    SparsityBall,
    Theta,
    ZeroNorm,
    check_critical,
    objective,
    subdiff_distance,
)

_THETA_NAMES = {t.value: t for t in Theta}


class ProblemFileError(ValueError):
    pass


def load_problem_file(path):
    """Returns (ProblemSpec, x0 or None, xbar or None)."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProblemFileError(
            f"{path} is not valid JSON (line {exc.lineno}, column {exc.colno})"
        ) from exc
    if not isinstance(raw, dict):
        raise ProblemFileError(f"{path}: top level must be an object")
    for key in ("A", "theta", "h"):
        if key not in raw:
            raise ProblemFileError(f"{path}: missing key {key!r}")
    theta_name = raw["theta"]
    if theta_name not in _THETA_NAMES:
        raise ProblemFileError(
            f"{path}: unknown theta {theta_name!r}, expected one of "
            + ", ".join(sorted(_THETA_NAMES))
        )
    try:
        a = SymMatrix(np.asarray(raw["A"], dtype=float))
    except (ValueError, TypeError) as exc:
        raise ProblemFileError(f"{path}: bad matrix A: {exc}") from exc
    hspec = raw["h"]
    if not isinstance(hspec, dict) or "kind" not in hspec:
        raise ProblemFileError(f"{path}: h must be an object with a 'kind'")
    try:
        if hspec["kind"] == "zero_norm":
            h = ZeroNorm(float(hspec["nu"]))
        elif hspec["kind"] == "sparsity":
            h = SparsityBall(int(hspec["kappa"]))
        else:
            raise ProblemFileError(
                f"{path}: unknown h kind {hspec['kind']!r}"
            )
    except (KeyError, ValueError, TypeError) as exc:
        if isinstance(exc, ProblemFileError):
            raise
        raise ProblemFileError(f"{path}: bad h spec: {exc}") from exc
    try:
        problem = ProblemSpec(a, _THETA_NAMES[theta_name], h)
    except ValueError as exc:
        raise ProblemFileError(f"{path}: {exc}") from exc

    def vec(key):
        if key not in raw:
            return None
        v = np.asarray(raw[key], dtype=float)
        if v.shape != (problem.dim,):
            raise ProblemFileError(
                f"{path}: {key} must have length {problem.dim}"
            )
        return v

    return problem, vec("x0"), vec("xbar")


def dump_problem_file(path, problem, x0=None, xbar=None):
    doc = {"A": problem.a.entries.tolist(), "theta": problem.theta.value}
    if isinstance(problem.h, ZeroNorm):
        doc["h"] = {"kind": "zero_norm", "nu": problem.h.nu}
    else:
        doc["h"] = {"kind": "sparsity", "kappa": problem.h.kappa}
    if x0 is not None:
        doc["x0"] = list(np.asarray(x0, dtype=float))
    if xbar is not None:
        doc["xbar"] = list(np.asarray(xbar, dtype=float))
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, default=repr)
        fh.write("\n")


def _fmt_support(x):
    idx = [str(i) for i in np.flatnonzero(np.asarray(x) != 0.0)]
    return "{" + ", ".join(idx) + "}"


def cmd_solve(args):
    problem, x0, _ = load_problem_file(args.problem)
    cfg = SolverConfig(
        max_iters=args.max_iters, step=args.step, tol=args.tol, seed=args.seed
    )
    if x0 is None:
        x0 = random_feasible(problem, np.random.default_rng(args.seed))
    trace = proximal_gradient(problem, x0, cfg)
    x = trace.xs[-1]
    res = subdiff_distance(problem, x)
    print(f"iterations: {len(trace) - 1}")
    print(f"objective: {objective(problem, x):.12g}")
    print(f"support: {_fmt_support(x)}")
    print(f"criticality residual: {res.distance:.6g}")
    if args.trace_out:
        write_trace_csv(args.trace_out, trace)
        print(f"trace written to {args.trace_out}")
    return 0


def cmd_certify(args):
    problem, _, xbar = load_problem_file(args.problem)
    if xbar is None:
        print("certify needs an 'xbar' entry in the problem file", file=sys.stderr)
        return 2
    res = subdiff_distance(problem, xbar)
    if res.distance > 1e-8:
        print(f"xbar is not critical (residual {res.distance:.6g})", file=sys.stderr)
        return 4
    cert = verify_kl_half(
        problem, xbar, delta=args.delta, eta=args.eta, n=args.n, seed=args.seed
    )
    print(cert.summary())
    if args.samples_out:
        write_samples_csv(args.samples_out, cert.samples)
        print(f"samples written to {args.samples_out}")
    return 0


def cmd_critical(args):
    problem, _, _ = load_problem_file(args.problem)
    if problem.theta is not Theta.SPHERE:
        print(
            "critical-point enumeration is only implemented for theta = sphere",
            file=sys.stderr,
        )
        return 5
    crit = crit_points_general(problem.a)
    print(f"representatives: {len(crit.representatives)}")
    for z in crit.representatives:
        val = objective(problem, z)
        feasible = np.isfinite(val)
        tag = "infeasible"
        if feasible:
            tag = "critical" if check_critical(problem, z, tol=1e-8) else "feasible"
        coords = ", ".join(f"{v:.6g}" for v in z)
        vtxt = f"{val:.6g}" if feasible else "inf"
        print(f"  [{coords}]  value={vtxt}  {tag}")
    return 0


def cmd_prox(args):
    problem, _, _ = load_problem_file(args.problem)
    try:
        u = np.array([float(s) for s in args.u.split(",")], dtype=float)
    except ValueError:
        print(f"could not parse --u {args.u!r}", file=sys.stderr)
        return 2
    if u.size != problem.dim:
        print(f"--u must have length {problem.dim}", file=sys.stderr)
        return 2
    try:
        x = prox_theta_h(problem.theta, problem.h, u, args.t)
    except DegenerateInput as exc:
        print(f"degenerate input: {exc}", file=sys.stderr)
        return 2
    print("prox: [" + ", ".join(repr(float(v)) for v in x) + "]")
    print(f"support: {_fmt_support(x)}")
    return 0


def cmd_oracle_check(args):
    problem, _, _ = load_problem_file(args.problem)
    if problem.dim > 8:
        print("oracle-check is guarded to p <= 8", file=sys.stderr)
        return 2
    rng = np.random.default_rng(args.seed)
    for trial in range(args.trials):
        a = random_symmetric(problem.dim, rng)
        trial_problem = ProblemSpec(a, problem.theta, problem.h)
        x = random_feasible_point(problem.theta, problem.h, problem.dim, rng)
        d_fast = subdiff_distance(trial_problem, x).distance
        d_slow = subdiff_distance_bruteforce(trial_problem, x)
        if abs(d_fast - d_slow) > 1e-7 * max(1.0, d_slow):
            print(
                f"trial {trial}: subdifferential distance mismatch "
                f"{d_fast!r} vs {d_slow!r}",
                file=sys.stderr,
            )
            dump_problem_file(args.dump_out, trial_problem, xbar=x)
            print(f"instance dumped to {args.dump_out}", file=sys.stderr)
            return 6
        u = rng.standard_normal(problem.dim)
        t = float(10.0 ** rng.uniform(-2.0, 0.0))
        try:
            x_fast = prox_theta_h(trial_problem.theta, trial_problem.h, u, t)
        except DegenerateInput:
            continue
        report = prox_bruteforce(trial_problem.theta, trial_problem.h, u, t)
        zn = isinstance(trial_problem.h, ZeroNorm)
        hfast = trial_problem.h.nu * np.count_nonzero(x_fast) if zn else 0.0
        v_fast = 0.5 * float(np.sum((x_fast - u) ** 2)) + t * hfast
        if v_fast - report.value > 1e-9:
            print(
                f"trial {trial}: prox objective mismatch "
                f"{v_fast!r} vs {report.value!r}",
                file=sys.stderr,
            )
            dump_problem_file(args.dump_out, trial_problem, x0=u)
            print(f"instance dumped to {args.dump_out}", file=sys.stderr)
            return 6
    print(f"{args.trials} trials consistent")
    return 0


def cmd_rate(args):
    try:
        rows = _read_trace(args.trace)
    except (OSError, ValueError) as exc:
        print(f"cannot read trace: {exc}", file=sys.stderr)
        return 2
    ks, thetas, sizes = rows
    stable_from = 0
    for i in range(1, len(sizes)):
        if sizes[i] != sizes[i - 1]:
            stable_from = i
    trace = IterateTrace(
        xs=[],
        thetas=list(thetas),
        supports=[],
        step_norms=[0.0] * len(thetas),
        support_stable_from=stable_from,
    )
    try:
        report = estimate_linear_rate(trace, theta_star=args.theta_star)
    except (RateEstimationError, ValueError) as exc:
        print(f"rate estimation failed: {exc}", file=sys.stderr)
        return 2
    if report.gap_exhausted:
        print("GAP-EXHAUSTED: objective gaps at float resolution, no rate fit")
        return 0
    rate = float(np.exp(report.slope))
    print(f"tail length: {report.tail_len}")
    print(f"log-gap slope: {report.slope:.6g} (rate {rate:.6g})")
    print(f"r_squared: {report.r_squared:.6g}")
    return 0


def _read_trace(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        need = {"k", "theta", "support_size"}
        if not need <= set(header):
            raise ValueError(f"trace header must contain {sorted(need)}")
        ki = header.index("k")
        ti = header.index("theta")
        si = header.index("support_size")
        ks, thetas, sizes = [], [], []
        for line in fh:
            parts = line.strip().split(",")
            if len(parts) < len(header):
                continue
            ks.append(int(parts[ki]))
            thetas.append(float(parts[ti]))
            sizes.append(int(parts[si]))
    if not ks:
        raise ValueError("trace has no rows")
    return ks, thetas, sizes


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="l0quad",
        description="Sparse composite quadratic toolbox",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="run the proximal gradient method")
    ps.add_argument("problem")
    ps.add_argument("--max-iters", type=int, default=500)
    ps.add_argument("--step", type=float, default=None)
    ps.add_argument("--tol", type=float, default=1e-10)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--trace-out", default=None)
    ps.set_defaults(func=cmd_solve)

    pc = sub.add_parser("certify", help="empirical KL(1/2) certificate at xbar")
    pc.add_argument("problem")
    pc.add_argument("--delta", type=float, default=1e-2)
    pc.add_argument("--eta", type=float, default=1e-2)
    pc.add_argument("--n", type=int, default=500)
    pc.add_argument("--seed", type=int, default=0)
    pc.add_argument("--samples-out", default=None)
    pc.set_defaults(func=cmd_certify)

    pk = sub.add_parser("critical", help="enumerate sphere critical points")
    pk.add_argument("problem")
    pk.set_defaults(func=cmd_critical)

    pp = sub.add_parser("prox", help="evaluate the composite prox at a point")
    pp.add_argument("problem")
    pp.add_argument("--u", required=True, help="comma separated vector")
    pp.add_argument("--t", type=float, required=True)
    pp.set_defaults(func=cmd_prox)

    po = sub.add_parser(
        "oracle-check", help="cross-check fast paths against brute force"
    )
    po.add_argument("problem")
    po.add_argument("--trials", type=int, default=25)
    po.add_argument("--seed", type=int, default=0)
    po.add_argument("--dump-out", default="oracle_mismatch.json")
    po.set_defaults(func=cmd_oracle_check)

    pr = sub.add_parser("rate", help="fit a linear rate to a solve trace")
    pr.add_argument("trace")
    pr.add_argument("--theta-star", type=float, required=True)
    pr.set_defaults(func=cmd_rate)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProblemFileError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except SolverConfigError as exc:
        print(f"bad solver configuration: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
