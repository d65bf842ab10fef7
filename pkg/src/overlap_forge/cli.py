"""Command line front end.

Subcommands: solve (single problem), sweep (CSV parameter sweeps), simulate
(seeded Monte Carlo), usd (discrimination comparison), bound (least
success-target modulus), clone (extra-copy problems).

Phases accept radians ("1.45") or multiples of pi ("0.6pi", "-pi").
Regime is auto-detected from the inputs: zero input modulus routes to the
orthogonal solver, phases all at multiples of pi route to the real solver,
anything else to the general solver; --regime overrides.

Exit codes: 0 solved, 1 usage, 2 infeasible or degenerate input,
3 output I/O failure, 4 simulation verification failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import orthogonal, realcase
from .applications import CloningSpec, cloning_problem, optimal_cloning_probability
from .errors import (DegenerateInputError, DomainError, InfeasibleError,
                     OverlapForgeError)
from .general import (ORDER_NEITHER, InnerProduct, MappingProblem, PriorPair,
                      beta_lower_bound, check_independence,
                      check_modulus_ordering, p_at_beta_min, solve_general,
                      usd_probability)
from .simulate import SimulationConfig, binomial_3sigma, posterior_check, run
from .synthesis import synthesize, verify_action

SEED_ENV = "OVERLAP_FORGE_SEED"
PHASE_TOL = 1e-9

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_IO = 3
EXIT_VERIFY = 4

FIGURES = ("fig1a", "fig1b", "fig2", "fig3a", "fig3b", "fig4")

FIG1A_ALPHAS = (0.3, 0.5, 0.7, 0.9)
FIG1B_ALPHAS = (0.3, 0.5)
FIG1B_GAPS = (0.3, 0.5, 0.7)
FIG1B_THETA_BETA = 0.6 * math.pi
FIG2_ETAS = (1.0 / 8.0, 1.0 / 4.0, 1.0 / 3.0, 1.0 / 2.0)
FIG3_ETAS = (0.3, 0.5, 0.7)
FIG3_TRIPLES = {"fig3a": (1.0 / 3.0, 1.0 / 6.0, 2.0 / 3.0),
                "fig3b": (1.0 / 6.0, 1.0 / 3.0, 2.0 / 3.0)}
FIG4_ALPHA = 1.0 / math.sqrt(3.0)
FIG4_FACTORS = (0.25, 0.5, 0.75, 1.25, 1.5, 1.75)


@dataclass(frozen=True)
class SweepSpec:
    figure: str
    resolution: int
    out_path: str

    def __post_init__(self):
        if self.figure not in FIGURES:
            raise DomainError(f"unknown figure id {self.figure!r}")
        if int(self.resolution) < 2:
            raise DomainError("resolution must be at least 2")
        object.__setattr__(self, "resolution", int(self.resolution))


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default, which collides with the
    # infeasible code; route everything through exit 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_phase(text: str) -> float:
    """Radians, or a multiple of pi when suffixed with 'pi'."""
    s = text.strip().lower()
    try:
        if s.endswith("pi"):
            head = s[:-2].strip()
            if head in ("", "+"):
                return math.pi
            if head == "-":
                return -math.pi
            return float(head) * math.pi
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse phase {text!r}") from None


def _parse_seed(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse seed {text!r}") from None


def fmt(x: float) -> str:
    return f"{x:.12g}"


def _yesno(flag: bool) -> str:
    return "yes" if flag else "no"


def detect_regime(alpha_mod: float, phases: tuple[float, float, float]) -> str:
    if alpha_mod == 0.0:
        return "orthogonal"
    if all(abs(math.remainder(p, math.pi)) <= PHASE_TOL for p in phases):
        return "real"
    return "general"


def _signed_real(mod: float, phase: float) -> float:
    return mod if abs(math.remainder(phase, math.tau)) < math.pi / 2.0 else -mod


def _build_parser() -> _Parser:
    parser = _Parser(prog="overlap-forge",
                     description="Heralded mapping of two-state overlaps")
    sub = parser.add_subparsers(dest="command", required=True)

    problem = argparse.ArgumentParser(add_help=False)
    problem.add_argument("--alpha-mod", type=float, required=True)
    problem.add_argument("--alpha-phase", type=parse_phase, default=0.0)
    problem.add_argument("--beta-mod", type=float, required=True)
    problem.add_argument("--beta-phase", type=parse_phase, default=0.0)
    problem.add_argument("--gamma-mod", type=float, required=True)
    problem.add_argument("--gamma-phase", type=parse_phase, default=0.0)
    problem.add_argument("--eta1", type=float, default=0.5)
    problem.add_argument("--regime", default="auto",
                         choices=("auto", "general", "orthogonal", "real"))
    problem.add_argument("--p1", type=float, default=None,
                         help="evaluate at this p1 instead of optimizing "
                              "(orthogonal and real regimes only)")

    p_solve = sub.add_parser("solve", parents=[problem],
                             help="solve a single mapping problem")
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser("sweep", help="write a parameter-sweep CSV")
    p_sweep.add_argument("--figure", required=True, choices=FIGURES)
    p_sweep.add_argument("--resolution", type=int, default=400)
    p_sweep.add_argument("--out", required=True)
    p_sweep.set_defaults(func=cmd_sweep_args)

    p_sim = sub.add_parser("simulate", parents=[problem],
                           help="run the seeded Monte Carlo check")
    p_sim.add_argument("--shots", type=int, required=True)
    p_sim.add_argument("--seed", type=_parse_seed, default=None,
                       help=f"defaults to ${SEED_ENV}")
    p_sim.add_argument("--out", default=None,
                       help="also write the counts table as CSV")
    p_sim.set_defaults(func=cmd_simulate)

    p_usd = sub.add_parser("usd", help="unambiguous-discrimination probability")
    p_usd.add_argument("--alpha-mod", type=float, required=True)
    p_usd.add_argument("--eta1", type=float, default=0.5)
    p_usd.set_defaults(func=cmd_usd)

    p_bound = sub.add_parser("bound",
                             help="least success-target modulus in the "
                                  "quadrature family")
    p_bound.add_argument("--alpha-mod", type=float, required=True)
    p_bound.add_argument("--alpha-phase", type=parse_phase, default=0.0)
    p_bound.add_argument("--beta-phase", type=parse_phase, default=0.0)
    p_bound.add_argument("--eta1", type=float, default=0.5)
    p_bound.set_defaults(func=cmd_bound)

    p_clone = sub.add_parser("clone", help="derive and solve a cloning problem")
    p_clone.add_argument("--alpha-mod", type=float, required=True)
    p_clone.add_argument("--alpha-phase", type=parse_phase, default=0.0)
    p_clone.add_argument("--copies", type=int, default=1,
                         help="extra copies m")
    p_clone.add_argument("--eta1", type=float, default=0.5)
    p_clone.add_argument("--optimize-phases", action="store_true",
                         help="also report the best probability over free "
                              "output phases")
    p_clone.set_defaults(func=cmd_clone)

    return parser


def _priors(eta1: float) -> PriorPair:
    return PriorPair(eta1, 1.0 - eta1)


def _resolve_regime(args) -> str:
    detected = detect_regime(args.alpha_mod, (args.alpha_phase,
                                              args.beta_phase,
                                              args.gamma_phase))
    if args.regime == "auto":
        return detected
    if args.regime == "orthogonal" and args.alpha_mod != 0.0:
        raise DomainError("regime 'orthogonal' requires --alpha-mod 0")
    if args.regime == "real" and detected not in ("real", "orthogonal"):
        raise DomainError(
            "regime 'real' requires all phases at multiples of pi"
        )
    return args.regime


def _solve_any(args):
    """Solve per regime; returns (regime, MappingProblem, MappingSolution,
    extra key/value pairs for printing)."""
    regime = _resolve_regime(args)
    priors = _priors(args.eta1)
    if regime == "orthogonal":
        op = orthogonal.OrthoPrepProblem(args.beta_mod, args.gamma_mod, priors)
        extra = {}
        if args.p1 is None:
            sol = orthogonal.optimal(op)
            extra["regime_tag"] = sol.regime
            extra["degenerate_posterior"] = _yesno(sol.degenerate_posterior)
        mp, ms = orthogonal.as_mapping(op, args.p1)
        return regime, mp, ms, extra
    if regime == "real":
        rp = realcase.RealCaseProblem(
            _signed_real(args.alpha_mod, args.alpha_phase),
            _signed_real(args.beta_mod, args.beta_phase),
            _signed_real(args.gamma_mod, args.gamma_phase),
            priors,
        )
        _, hi = realcase.feasible_interval(rp)
        mp, ms = realcase.as_mapping(rp, args.p1)
        extra = {"interval_hi": fmt(hi), "swapped": _yesno(rp.swapped)}
        return regime, mp, ms, extra
    if args.p1 is not None:
        raise DomainError(
            "--p1 applies only to the orthogonal and real regimes; the "
            "general regime admits two isolated solutions"
        )
    mp = MappingProblem(
        alpha=InnerProduct(args.alpha_mod, args.alpha_phase),
        beta=InnerProduct(args.beta_mod, args.beta_phase),
        gamma=InnerProduct(args.gamma_mod, args.gamma_phase),
        priors=priors,
    )
    best, _ = solve_general(mp)
    extra = {"ordering": check_modulus_ordering(mp),
             "assignment": best.assignment}
    return regime, mp, best, extra


def cmd_solve(args) -> int:
    try:
        regime, mp, ms, extra = _solve_any(args)
    except (InfeasibleError, DegenerateInputError, DomainError) as exc:
        print(f"feasible = no\ndiagnostic = {exc}")
        return EXIT_INFEASIBLE
    lines = [f"regime = {regime}", "feasible = yes"]
    for k, v in extra.items():
        lines.append(f"{k} = {v}")
    lines += [
        f"p1 = {fmt(ms.p1)}",
        f"p2 = {fmt(ms.p2)}",
        f"p_beta = {fmt(ms.p_beta)}",
        f"p_gamma = {fmt(ms.p_gamma)}",
        f"posterior_eta1 = {fmt(ms.posterior.eta1)}",
        f"posterior_eta2 = {fmt(ms.posterior.eta2)}",
        f"sign_flip_beta = {_yesno(ms.sign_flips.beta)}",
        f"sign_flip_gamma = {_yesno(ms.sign_flips.gamma)}",
    ]
    print("\n".join(lines))
    return EXIT_OK


def _rows_fig1a(resolution: int):
    rows = []
    for a in FIG1A_ALPHAS:
        alpha = InnerProduct(a, 0.0)
        for t in np.linspace(0.0, 1.0, resolution):
            if abs(t - 0.5) <= PHASE_TOL:
                continue
            rows.append((fmt(t), fmt(a),
                         fmt(beta_lower_bound(alpha, t * math.pi))))
    return ("theta_over_pi", "alpha", "beta_min"), rows


def _rows_fig1b(resolution: int):
    rows = []
    for a in FIG1B_ALPHAS:
        alpha = InnerProduct(a, 0.0)
        bmin = beta_lower_bound(alpha, FIG1B_THETA_BETA)
        for gap in FIG1B_GAPS:
            priors = _priors((1.0 + gap) / 2.0)
            for b in np.linspace(bmin, 1.0, resolution):
                mp = MappingProblem(
                    alpha=alpha,
                    beta=InnerProduct(b, FIG1B_THETA_BETA),
                    gamma=InnerProduct(1.0, FIG1B_THETA_BETA + math.pi / 2.0),
                    priors=priors,
                )
                best, _ = solve_general(mp)
                rows.append((fmt(b), fmt(a), fmt(gap), fmt(best.p_beta)))
    return ("beta_mod", "alpha", "eta_gap", "p_beta_plus"), rows


def _rows_fig2(resolution: int):
    rows = []
    for eta1 in FIG2_ETAS:
        priors = _priors(eta1)
        for k in range(1, resolution + 1):
            r = k / resolution
            sol = orthogonal.optimal(
                orthogonal.OrthoPrepProblem(r, 1.0, priors))
            rows.append((fmt(r), fmt(eta1), fmt(sol.p_beta)))
    return ("ratio", "eta1", "p_max"), rows


def _rows_fig3(figure: str, resolution: int):
    a, b, g = FIG3_TRIPLES[figure]
    rows = []
    for eta1 in FIG3_ETAS:
        rp = realcase.RealCaseProblem(a, b, g, _priors(eta1))
        _, hi = realcase.feasible_interval(rp)
        for p1 in np.linspace(realcase.EDGE_EPS, hi, resolution):
            p2p = realcase.p2_pm(rp, float(p1))[0]
            rows.append((fmt(p1), fmt(eta1),
                         fmt(eta1 * p1 + (1.0 - eta1) * p2p)))
    return ("p1", "eta1", "p_beta_plus"), rows


def _rows_fig4(resolution: int):
    alpha = InnerProduct(FIG4_ALPHA, 0.0)
    usd = usd_probability(alpha, _priors(0.5)).value
    rows = []
    for f in FIG4_FACTORS:
        theta = f * math.pi / 2.0
        p_min = p_at_beta_min(alpha, theta)
        theta_beta = -theta  # input phase 0, so the lead is -theta_beta
        bmin = beta_lower_bound(alpha, theta_beta)
        for b in np.linspace(bmin, 1.0, resolution):
            mp = MappingProblem(
                alpha=alpha,
                beta=InnerProduct(b, theta_beta),
                gamma=InnerProduct(1.0, theta_beta + math.pi / 2.0),
                priors=_priors(0.5),
            )
            best, _ = solve_general(mp)
            rows.append((fmt(b), fmt(f), fmt(best.p_beta), fmt(usd),
                         fmt(p_min)))
    return ("beta_mod", "f", "p_beta_plus", "p_usd", "p_at_beta_min"), rows


def cmd_sweep(spec: SweepSpec) -> int:
    if spec.figure == "fig1a":
        header, rows = _rows_fig1a(spec.resolution)
    elif spec.figure == "fig1b":
        header, rows = _rows_fig1b(spec.resolution)
    elif spec.figure == "fig2":
        header, rows = _rows_fig2(spec.resolution)
    elif spec.figure in ("fig3a", "fig3b"):
        header, rows = _rows_fig3(spec.figure, spec.resolution)
    else:
        header, rows = _rows_fig4(spec.resolution)
    text = "\n".join([",".join(header)] + [",".join(r) for r in rows]) + "\n"
    try:
        with open(spec.out_path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"cannot write {spec.out_path}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(rows)} rows to {spec.out_path}")
    return EXIT_OK


def cmd_sweep_args(args) -> int:
    try:
        spec = SweepSpec(args.figure, args.resolution, args.out)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return cmd_sweep(spec)


def cmd_simulate(args) -> int:
    seed = args.seed
    if seed is None:
        env = os.environ.get(SEED_ENV)
        if env is None:
            print(f"error: no --seed and ${SEED_ENV} is unset",
                  file=sys.stderr)
            return EXIT_USAGE
        try:
            seed = int(env, 0)
        except ValueError:
            print(f"error: cannot parse ${SEED_ENV}={env!r}", file=sys.stderr)
            return EXIT_USAGE
    if args.shots < 1:
        print("error: --shots must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        regime, mp, ms, _ = _solve_any(args)
        syn = synthesize(mp, ms)
    except (InfeasibleError, DegenerateInputError, DomainError) as exc:
        print(f"feasible = no\ndiagnostic = {exc}")
        return EXIT_INFEASIBLE
    report_v = verify_action(syn, mp, ms)
    lines = [
        f"regime = {regime}",
        f"p1 = {fmt(ms.p1)}",
        f"p2 = {fmt(ms.p2)}",
        f"p_beta_exact = {fmt(ms.p_beta)}",
        f"verified = {_yesno(report_v.ok)}",
    ]
    if not report_v.ok:
        lines.append(
            "diagnostic = synthesized unitary failed exact-algebra checks "
            f"(max branch-probability residual {report_v.max_prob_residual:.3g})"
        )
        print("\n".join(lines))
        return EXIT_VERIFY
    rep = run(SimulationConfig(problem=mp, solution=ms, synthesis=syn,
                               shots=args.shots, seed=seed))
    env3 = binomial_3sigma(ms.p_beta, rep.shots)
    lines += [
        f"shots = {rep.shots}",
        f"seed = {rep.seed}",
        f"count_input1_success = {rep.counts[0][0]}",
        f"count_input1_failure = {rep.counts[0][1]}",
        f"count_input2_success = {rep.counts[1][0]}",
        f"count_input2_failure = {rep.counts[1][1]}",
        f"empirical_p_beta = {fmt(rep.empirical_p_beta)}",
        f"envelope_3sigma = {fmt(env3)}",
        f"within_envelope = "
        f"{_yesno(abs(rep.empirical_p_beta - ms.p_beta) <= env3)}",
        f"posterior_eta1_exact = {fmt(ms.posterior.eta1)}",
    ]
    if rep.empirical_posterior is not None:
        lines += [
            f"empirical_posterior_eta1 = {fmt(rep.empirical_posterior.eta1)}",
            f"posterior_deviation = {fmt(posterior_check(rep, ms))}",
        ]
    else:
        lines.append("empirical_posterior_eta1 = n/a")
    for label, resid in (("success", rep.success_overlap_residual),
                         ("failure", rep.failure_overlap_residual)):
        lines.append(f"{label}_overlap_residual = "
                     + (fmt(resid) if resid is not None else "n/a"))
    print("\n".join(lines))
    if args.out is not None:
        rows = ["input,outcome,count"]
        for i in (0, 1):
            for o in (0, 1):
                rows.append(f"{i + 1},{o},{rep.counts[i][o]}")
        try:
            with open(args.out, "w", newline="") as fh:
                fh.write("\n".join(rows) + "\n")
        except OSError as exc:
            print(f"cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK


def cmd_usd(args) -> int:
    try:
        res = usd_probability(InnerProduct(args.alpha_mod, 0.0),
                              _priors(args.eta1))
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    print(f"p_usd = {fmt(res.value)}\nvalid = {_yesno(res.valid)}")
    return EXIT_OK


def cmd_bound(args) -> int:
    try:
        alpha = InnerProduct(args.alpha_mod, args.alpha_phase)
        bmin = beta_lower_bound(alpha, args.beta_phase)
        lines = [f"beta_min = {fmt(bmin)}"]
        if args.eta1 == 0.5:
            theta = args.alpha_phase - args.beta_phase
            lines.append(f"p_at_beta_min = {fmt(p_at_beta_min(alpha, theta))}")
        print("\n".join(lines))
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_clone(args) -> int:
    try:
        spec = CloningSpec(InnerProduct(args.alpha_mod, args.alpha_phase),
                           args.copies)
        mp = cloning_problem(spec, _priors(args.eta1))
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    lines = [
        f"m = {spec.m}",
        f"beta_mod = {fmt(mp.beta.modulus)}",
        f"beta_phase = {fmt(mp.beta.phase)}",
        f"gamma_mod = {fmt(mp.gamma.modulus)}",
        f"gamma_phase = {fmt(mp.gamma.phase)}",
        f"ordering = {check_modulus_ordering(mp)}",
        f"independent = {_yesno(check_independence(mp))}",
    ]
    code = EXIT_OK
    try:
        best, _ = solve_general(mp)
        lines += [
            "feasible = yes",
            f"p1 = {fmt(best.p1)}",
            f"p2 = {fmt(best.p2)}",
            f"p_beta = {fmt(best.p_beta)}",
        ]
    except (InfeasibleError, DegenerateInputError) as exc:
        lines += ["feasible = no", f"diagnostic = {exc}"]
        code = EXIT_INFEASIBLE
    if args.optimize_phases:
        p_opt = optimal_cloning_probability(args.alpha_mod, spec.m,
                                            _priors(args.eta1))
        lines.append(f"optimal_phase_probability = {fmt(p_opt)}")
    print("\n".join(lines))
    return code


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OverlapForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
