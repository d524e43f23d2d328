"""Command-line front end.

Usage examples::

    curvlab constants onplus --N 3 --format json
    curvlab verify clifford --d 2
    curvlab mlsi search --model depolarizing --param n=2 --samples 500 --seed 1
    curvlab schema

Exit codes: 0 all checks pass or are flagged, 1 some check failed,
2 usage error, 3 input file could not be read or parsed.

Input files
-----------
growth file (``constants fourier --growth``)
    ``key=value`` lines: ``mode=A`` with ``sigma``, ``r``, ``C_r``, or
    ``mode=B`` with ``sigma``, ``C``, ``R``. ``#`` starts a comment.
group table (``verify group --table``)
    First line the order ``n``; then ``n`` rows of ``n`` integers where row
    ``g`` column ``h`` is the index of ``g h`` and element ``0`` is the
    identity; then one line with the ``n`` values of ``psi``.
atoms file (``constants hunt --atoms``)
    One ``x w`` pair per line.

The default seed is 0. ``CURVLAB_THREADS`` caps the number of worker threads.
"""
from __future__ import annotations

import argparse
import contextvars
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from . import __version__
from .config import override_tolerances, tolerance_names
from .errors import CurvlabError, MeasureSupportError, ParseError
from .report import CheckRecord, Report, check, info, report_schema

DEFAULT_SEED = 0

Task = Callable[[], list]


class UsageError(Exception):
    pass


class InputFileError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputFileError(f"cannot read {path}: {exc.strerror}") from exc


# -- constants ------------------------------------------------------------------------------
def _family_records(rep) -> list[CheckRecord]:
    from .constants.families import DISCREPANCY_TOL

    main_prov = "paper_closed_form" if rep.provenance in ("closed_form", "both") else "chain_computation"
    out = [info(k, v, main_prov) for k, v in
           (("t_cb", rep.t_cb), ("lambda_curvature", rep.lambda_curvature), ("lambda", rep.lambda_clsi))
           if v is not None]
    for k, v in rep.closed_form.items():
        out.append(info(f"closed_form.{k}", v, "paper_closed_form"))
    for k, v in rep.chain.items():
        out.append(info(f"chain.{k}", v, "chain_computation", flagged=(v is False)))
    for k, v in rep.discrepancy.items():
        if k.startswith("ratio"):
            out.append(info(f"discrepancy.{k}", v, "chain_computation"))
        else:
            out.append(CheckRecord(f"discrepancy.{k}", "pass" if v <= DISCREPANCY_TOL else "flagged",
                                   v, 0.0, DISCREPANCY_TOL, "chain_computation"))
    res = rep.consistency_residual()
    if res is not None:
        out.append(check("consistency.kappa", res <= 1e-12, res, 0.0, 1e-12, "chain_computation"))
    for c in rep.checks:
        if c.passed is None:
            out.append(info(c.name, c.value, c.provenance))
        else:
            out.append(check(c.name, c.passed, c.value, c.expected, c.tol, c.provenance))
    for i, f in enumerate(rep.flags):
        out.append(CheckRecord(f"flag[{i}]", "flagged", f, None, None, "chain_computation"))
    return out


def cmd_constants(args) -> list[Task]:
    from .constants import (exp_growth_clsi, fourier_clsi, free_wordlength_clsi, hunt_eigenvalues,
                            onplus_clsi, parse_growth, qaut_clsi, torus_constants, chebyshev_table)

    fam = args.family
    if fam == "onplus":
        return [lambda: _family_records(onplus_clsi(args.N))]
    if fam == "qaut":
        return [lambda: _family_records(qaut_clsi(args.d))]
    if fam == "free-wordlength":
        return [lambda: _family_records(free_wordlength_clsi(args.s))]
    if fam == "torus":
        return [lambda: _family_records(torus_constants(args.dim, args.torus_family))]
    if fam == "fourier":
        g = parse_growth(_read(args.growth))
        if g.mode == "A":
            return [lambda: _family_records(fourier_clsi(g))]
        return [lambda: _family_records(exp_growth_clsi(g.C, g.R, g.sigma))]
    if fam == "hunt":
        atoms = _parse_atoms(_read(args.atoms))
        try:
            lam = hunt_eigenvalues(args.N, args.b, atoms, args.kmax)
        except MeasureSupportError as exc:
            raise InputFileError(str(exc)) from exc

        def hunt():
            out = [info("lambda_k", lam.tolist())]
            out.append(check("lambda_0_zero", lam[0] == 0.0, float(lam[0]), 0.0, 0.0, "paper_closed_form"))
            out.append(check("lambda_k_nonnegative", bool(np.all(lam >= -1e-12)), float(lam.min()), 0.0, 1e-12))
            if not atoms:
                heat = args.b * chebyshev_table(args.N, args.kmax, log_scale=True).ratio_dU_U()
                heat[0] = 0.0
                err = float(np.max(np.abs(lam - heat)))
                out.append(check("matches_scaled_heat", err <= 1e-12, err, 0.0, 1e-12, "paper_closed_form"))
            return out
        return [hunt]
    raise UsageError(f"unknown family {fam}")


def _parse_atoms(text: str) -> list[tuple[float, float]]:
    atoms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"atoms line {lineno}: expected 'x w'")
        try:
            x, w = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise ParseError(f"atoms line {lineno}: non-numeric value") from exc
        if not (math.isfinite(x) and math.isfinite(w)):
            raise ParseError(f"atoms line {lineno}: non-finite value")
        atoms.append((x, w))
    return atoms


# -- verification suites --------------------------------------------------------------------
def cmd_verify_clifford(args) -> list[Task]:
    from .entropy_curvature import gradient_estimate_check
    from .models import (anticommutation_residual, clifford_derivation, clifford_number_semigroup,
                         derivation_triple_check, intertwining_check)
    from .semigroup import spectral_gap

    d = args.d
    if not 1 <= d <= 6:
        raise UsageError("--d must lie in 1..6")

    def anti():
        r = anticommutation_residual(d)
        return [check("anticommutation_residual", r <= 1e-13, r, 0.0, 1e-13)]

    def gap():
        g = spectral_gap(clifford_number_semigroup(d))
        return [check("spectral_gap", abs(g - 1) <= 1e-12, g, 1.0, 1e-12)]

    def triple():
        rep = derivation_triple_check(clifford_derivation(d), seed=args.seed)
        out = [check(f"triple.{k}", v <= 1e-10, v, 0.0, 1e-10) for k, v in
               (("star", rep.star_residual), ("leibniz", rep.leibniz_residual),
                ("gamma", rep.gamma_residual), ("mean_zero", rep.mean_zero_residual)) if v is not None]
        return out + [info("triple.pairs_checked", rep.pairs_checked)]

    def inter():
        r = intertwining_check(clifford_derivation(d), (0.1, 1.0, 2.0))
        return [check("intertwining_residual", r <= 1e-10, r, 0.0, 1e-10)]

    def grad():
        D = clifford_derivation(d)
        rep = gradient_estimate_check(D.semigroup, D, 1.0, samples=args.samples, seed=args.seed)
        return [check("gradient_estimate", rep.passed, rep.worst_relative_margin, None, 1e-8),
                info("gradient_estimate.samples", rep.samples)]

    return [anti, gap, triple, inter, grad]


def _parse_dims(text: str) -> list[int]:
    try:
        dims = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"--dims must be a comma-separated list of integers, got {text!r}") from exc
    if not dims or any(not 2 <= n <= 6 for n in dims):
        raise UsageError("--dims entries must lie in 2..6")
    return dims


def cmd_verify_depolarizing(args) -> list[Task]:
    from .algebra import random_density
    from .entropy_curvature import (best_bakry_emery_lambda, entropy_decay_check, gradient_estimate_check,
                                    mlsi_ratio_search)
    from .models import depolarizing_inner_derivation, depolarizing_semigroup, derivation_triple_check, matrix_algebra
    from .semigroup import Superoperator, cb_return_time, choi_norm

    tasks = []
    for n in _parse_dims(args.dims):
        def suite(n=n):
            alg = matrix_algebra(n)
            S = depolarizing_semigroup(alg)
            out = []
            be = best_bakry_emery_lambda(S).best_lambda
            out.append(check(f"M{n}.best_lambda", be >= 0.5 - 1e-6, be, 0.5, 1e-6))
            m = mlsi_ratio_search(S, samples=args.samples, seed=args.seed)
            out.append(check(f"M{n}.mlsi_min_ratio", m.min_ratio >= 0.5 - 1e-6, m.min_ratio, 0.5, 1e-6))
            ok, worst = True, math.inf
            grid = np.linspace(0.1, 3.0, 10)
            for i in range(args.states):
                rho = random_density(alg, np.random.default_rng(np.random.SeedSequence(args.seed, spawn_key=(n, i))))
                rep = entropy_decay_check(S, rho, 0.5, grid)
                ok &= rep.passed
                worst = min(worst, min(rep.margins))
            out.append(check(f"M{n}.entropy_decay", ok, worst, None, 1e-8))
            cb = cb_return_time(S)
            ref = math.log(2 * choi_norm(Superoperator.identity(alg) - Superoperator(alg, S.fixed_point.matrix)))
            out.append(check(f"M{n}.t_cb", abs(cb.t_cb - ref) <= 1e-8, cb.t_cb, ref, 1e-8, "chain_computation"))
            D = depolarizing_inner_derivation(n)
            tr = derivation_triple_check(D, seed=args.seed)
            out.append(check(f"M{n}.derivation_triple", tr.passed,
                             max(tr.star_residual, tr.leibniz_residual, tr.gamma_residual), 0.0, 1e-10))
            ge = gradient_estimate_check(D.semigroup, D, 0.5, samples=args.samples, seed=args.seed)
            out.append(check(f"M{n}.gradient_estimate", ge.passed, ge.worst_relative_margin, None, 1e-8))
            return out
        tasks.append(suite)
    return tasks


def cmd_verify_chebyshev(args) -> list[Task]:
    from .constants import chebyshev_table, onplus_spectral_data

    N, K = args.N, args.kmax
    if N < 2 or not 2 <= K <= 10_000:
        raise UsageError("need --N >= 2 and 2 <= --kmax <= 10000")

    def recursion():
        t = chebyshev_table(N, K, log_scale=True)
        r1 = float(np.max(t.recursion_residual()))
        r2 = float(np.max(t.derivative_identity_residual()))
        return [check("recursion_residual", r1 <= 1e-12, r1, 0.0, 1e-12),
                check("derivative_identity_residual", r2 <= 1e-12, r2, 0.0, 1e-12)]

    def bounds():
        sp = onplus_spectral_data(N, K)
        out = [check(f"bound.{k}", ok, sp.bounds.worst[k], 0.0, 1e-12, "paper_closed_form")
               for k, ok in sp.bounds.checks.items()]
        out += [CheckRecord(f"flag[{i}]", "flagged", f, provenance="paper_closed_form")
                for i, f in enumerate(sp.bounds.flags)]
        return out

    return [recursion, bounds]


def cmd_verify_qgram(args) -> list[Task]:
    from .models import q_gram

    def run():
        g = q_gram(args.n, args.dim, args.q)
        out = [check("min_eigenvalue", g.min_eig >= -1e-10, g.min_eig, 0.0, 1e-10)]
        if args.n == 2 and args.dim >= 2:
            ev = np.linalg.eigvalsh(g.submatrix([(0, 1), (1, 0)]))
            exp = np.sort([1 - args.q, 1 + args.q])
            err = float(np.max(np.abs(ev - exp)))
            out.append(check("two_by_two_eigenvalues", err <= 1e-14, ev.tolist(), exp.tolist(), 1e-14,
                             "paper_closed_form"))
        return out
    return [run]


def cmd_verify_group(args) -> list[Task]:
    from .entropy_curvature import best_bakry_emery_lambda
    from .models import cnd_violation, fourier_multiplier_semigroup, k_matrix, parse_group_table
    from .semigroup import cb_return_time, spectral_gap

    G = parse_group_table(_read(args.table))

    def run():
        K = k_matrix(G)
        m, _ = cnd_violation(K)
        out = [check("cnd", m >= -1e-9, m, 0.0, 1e-9)]
        if m < -1e-9:
            return out
        sq = float(np.linalg.eigvalsh(K.schur_square)[0])
        out.append(check("k_schur_square_psd", sq >= -1e-9, sq, 0.0, 1e-9))
        S, _ = fourier_multiplier_semigroup(G)
        nz = G.psi[G.psi > 1e-12]
        gap = spectral_gap(S)
        expect = float(nz.min()) if nz.size else 0.0
        out.append(check("spectral_gap", abs(gap - expect) <= 1e-10, gap, expect, 1e-10))
        out.append(info("best_lambda", best_bakry_emery_lambda(S).best_lambda))
        if nz.size:
            out.append(info("t_cb", cb_return_time(S).t_cb, "chain_computation"))
        return out
    return [run]


# -- finite models ---------------------------------------------------------------------------
MODELS = {
    "depolarizing": {"n": 2},
    "clifford": {"d": 2},
    "two-point": {},
    "cyclic": {"n": 5},
    "symmetric": {"n": 3},
}
# known lower bounds on the best curvature and MLSI constants
_CLAIMS = {"depolarizing": 0.5, "clifford": 1.0, "two-point": 1.0}


def _model_params(name: str, pairs: list[str]) -> dict:
    params = dict(MODELS[name])
    for p in pairs or []:
        if "=" not in p:
            raise UsageError(f"--param expects key=value, got {p!r}")
        k, v = (s.strip() for s in p.split("=", 1))
        if k not in params:
            raise UsageError(f"model {name} has no parameter {k!r} (known: {sorted(params)})")
        try:
            params[k] = int(v)
        except ValueError as exc:
            raise UsageError(f"parameter {k} must be an integer") from exc
    return params


def build_model(name: str, params: dict):
    from .models import (clifford_number_semigroup, cyclic_group, depolarizing_semigroup,
                         fourier_multiplier_semigroup, matrix_algebra, symmetric_group, two_point_semigroup)

    if name == "depolarizing":
        if not 2 <= params["n"] <= 6:
            raise UsageError("depolarizing needs 2 <= n <= 6")
        return depolarizing_semigroup(matrix_algebra(params["n"]))
    if name == "clifford":
        if not 1 <= params["d"] <= 5:
            raise UsageError("clifford needs 1 <= d <= 5")
        return clifford_number_semigroup(params["d"])
    if name == "two-point":
        return two_point_semigroup()
    if name == "cyclic":
        if not 2 <= params["n"] <= 30:
            raise UsageError("cyclic needs 2 <= n <= 30")
        return fourier_multiplier_semigroup(cyclic_group(params["n"], "wordlength"))[0]
    if name == "symmetric":
        if not 2 <= params["n"] <= 4:
            raise UsageError("symmetric needs 2 <= n <= 4")
        return fourier_multiplier_semigroup(symmetric_group(params["n"], "indicator"))[0]
    raise UsageError(f"unknown model {name}")


def cmd_curvature(args) -> list[Task]:
    from .entropy_curvature import best_bakry_emery_lambda

    params = _model_params(args.model, args.param)

    def run():
        lam = best_bakry_emery_lambda(build_model(args.model, params)).best_lambda
        claim = _CLAIMS.get(args.model)
        if claim is None:
            return [info("best_lambda", lam)]
        return [check("best_lambda", lam >= claim - 1e-6, lam, claim, 1e-6)]
    return [run]


def cmd_mlsi(args) -> list[Task]:
    from .entropy_curvature import mlsi_ratio_search

    params = _model_params(args.model, args.param)
    if args.samples < 1:
        raise UsageError("--samples must be positive")

    def run():
        rep = mlsi_ratio_search(build_model(args.model, params), samples=args.samples, seed=args.seed)
        claim = _CLAIMS.get(args.model)
        out = [info("sampled_min_ratio", rep.sampled_min), info("skipped", rep.skipped),
               info("refinement_steps", rep.refinement_steps)]
        if claim is None:
            out.insert(0, info("min_ratio", rep.min_ratio))
        else:
            out.insert(0, check("min_ratio", rep.min_ratio >= claim - 1e-6, rep.min_ratio, claim, 1e-6))
        return out
    return [run]


def cmd_cbtime(args) -> list[Task]:
    from .constants import kappa
    from .entropy_curvature import best_bakry_emery_lambda
    from .semigroup import Superoperator, cb_return_time, choi_norm

    params = _model_params(args.model, args.param)

    def run():
        S = build_model(args.model, params)
        cb = cb_return_time(S)
        out = [info("t_cb", cb.t_cb, "chain_computation"), info("choi_norm_at_zero", cb.norm_at_zero),
               info("surrogate", cb.surrogate, flagged=cb.surrogate)]
        if args.model == "depolarizing":
            ref = math.log(2 * choi_norm(Superoperator.identity(S.algebra) - Superoperator(S.algebra, S.fixed_point.matrix)))
            out.append(check("t_cb_closed_form", abs(cb.t_cb - ref) <= 1e-8, cb.t_cb, ref, 1e-8,
                             "chain_computation"))
        lam = best_bakry_emery_lambda(S).best_lambda
        if math.isfinite(lam) and cb.t_cb > 0:
            out.append(info("lambda_clsi", kappa(lam, cb.t_cb), "chain_computation"))
        return out
    return [run]


# -- argument parsing ---------------------------------------------------------------------
def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"sampling seed (default {DEFAULT_SEED})")
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                   help=f"override a tolerance; names: {', '.join(tolerance_names())}")
    p.add_argument("--timings", action="store_true", help="record wall-clock seconds per check")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="curvlab", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"curvlab {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)

    const = sub.add_parser("constants", help="analytic CLSI constants")
    fsub = const.add_subparsers(dest="family", required=True)
    p = fsub.add_parser("onplus", parents=[common]); p.add_argument("--N", type=int, required=True)
    p = fsub.add_parser("qaut", parents=[common]); p.add_argument("--d", type=int, required=True)
    p = fsub.add_parser("fourier", parents=[common]); p.add_argument("--growth", required=True)
    p = fsub.add_parser("free-wordlength", parents=[common]); p.add_argument("--s", type=int, required=True)
    p = fsub.add_parser("torus", parents=[common])
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--family", dest="torus_family", choices=("heat", "poisson", "wordlength"), required=True)
    p = fsub.add_parser("hunt", parents=[common])
    p.add_argument("--N", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--atoms", required=True)
    p.add_argument("--kmax", type=int, default=20)
    const.set_defaults(handler=cmd_constants)

    ver = sub.add_parser("verify", help="finite-dimensional verification suites")
    vsub = ver.add_subparsers(dest="suite", required=True)
    p = vsub.add_parser("clifford", parents=[common])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(handler=cmd_verify_clifford)
    p = vsub.add_parser("depolarizing", parents=[common])
    p.add_argument("--dims", default="2,3")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--states", type=int, default=20)
    p.set_defaults(handler=cmd_verify_depolarizing)
    p = vsub.add_parser("chebyshev", parents=[common])
    p.add_argument("--N", type=float, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.set_defaults(handler=cmd_verify_chebyshev)
    p = vsub.add_parser("qgram", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--q", type=float, required=True)
    p.set_defaults(handler=cmd_verify_qgram)
    p = vsub.add_parser("group", parents=[common])
    p.add_argument("--table", required=True)
    p.set_defaults(handler=cmd_verify_group)

    model_help = f"one of: {', '.join(MODELS)}"
    curv = sub.add_parser("curvature", help="best Bakry-Emery constant")
    csub = curv.add_subparsers(dest="action", required=True)
    p = csub.add_parser("best-lambda", parents=[common])
    p.add_argument("--model", choices=tuple(MODELS), required=True, help=model_help)
    p.add_argument("--param", action="append", default=[], metavar="KEY=INT")
    p.set_defaults(handler=cmd_curvature)

    mlsi = sub.add_parser("mlsi", help="sampled MLSI ratios")
    msub = mlsi.add_subparsers(dest="action", required=True)
    p = msub.add_parser("search", parents=[common])
    p.add_argument("--model", choices=tuple(MODELS), required=True, help=model_help)
    p.add_argument("--param", action="append", default=[], metavar="KEY=INT")
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(handler=cmd_mlsi)

    p = sub.add_parser("cbtime", parents=[common], help="CB-return time of a finite model")
    p.add_argument("--model", choices=tuple(MODELS), required=True, help=model_help)
    p.add_argument("--param", action="append", default=[], metavar="KEY=INT")
    p.set_defaults(handler=cmd_cbtime)

    sub.add_parser("schema", help="print the JSON report schema")
    return parser


def _parse_tols(pairs: list[str]) -> dict:
    out = {}
    names = set(tolerance_names())
    for p in pairs:
        if "=" not in p:
            raise UsageError(f"--tol expects name=value, got {p!r}")
        k, v = (s.strip() for s in p.split("=", 1))
        if k not in names:
            raise UsageError(f"unknown tolerance {k!r}")
        try:
            val = float(v)
        except ValueError as exc:
            raise UsageError(f"tolerance {k} must be a number") from exc
        if not (math.isfinite(val) and val > 0):
            raise UsageError(f"tolerance {k} must be positive")
        out[k] = val
    return out


def _command_name(args) -> str:
    parts = [args.cmd] + [getattr(args, a) for a in ("family", "suite", "action") if getattr(args, a, None)]
    return " ".join(parts)


def _config(args) -> dict:
    skip = {"handler", "cmd", "family", "suite", "action", "format", "seed", "tol", "timings"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _execute(tasks: list[Task], timings: bool) -> list[CheckRecord]:
    from .entropy_curvature import default_workers

    def timed(task, ctx):
        t0 = time.perf_counter()
        recs = ctx.run(task)
        dt = time.perf_counter() - t0
        if timings:
            for r in recs:
                r.seconds = dt
        return recs

    workers = min(default_workers(), len(tasks))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            futures = [ex.submit(timed, t, contextvars.copy_context()) for t in tasks]
            results = [f.result() for f in futures]
    else:
        results = [timed(t, contextvars.copy_context()) for t in tasks]
    return [r for recs in results for r in recs]


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cmd == "schema":
        sys.stdout.write(json.dumps(report_schema(), indent=2) + "\n")
        return 0
    try:
        tols = _parse_tols(args.tol)
        with override_tolerances(**tols):
            tasks = args.handler(args)
            checks = _execute(tasks, args.timings)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"curvlab: error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, InputFileError) as exc:
        print(f"curvlab: input error: {exc}", file=sys.stderr)
        return 3
    except CurvlabError as exc:
        print(f"curvlab: error: {exc}", file=sys.stderr)
        return 2
    config = _config(args)
    if tols:
        config["tolerances"] = tols
    rep = Report(_command_name(args), args.seed, config, checks)
    sys.stdout.write(rep.render(args.format))
    return rep.exit_code


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
