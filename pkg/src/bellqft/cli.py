"""Command-line entry point: ``bellqft <subcommand> [options]``.

Exit status: 0 success, 1 domain or configuration error, 2 numerical
non-convergence.  Results go to ``--output``, else to
``$BELLQFT_OUTPUT_DIR/<subcommand>.<ext>`` when that variable is set, else
to standard output.
"""

from __future__ import annotations

import argparse
import io
import math
import os
import re
import sys
import time
from pathlib import Path
from typing import Sequence

import numpy as np

from bellqft import chsh, qm_bell
from bellqft.envelope import ResultEnvelope, dumps, format_float
from bellqft.fourier import scalar_inner
from bellqft.kernels import KernelChoice, KernelKind, smeared_pairing
from bellqft.modular import DomainError, ModularParams
from bellqft.optimize import maximize_base, maximize_unitary
from bellqft.proca import duality_report, gradient_of_scalar, proca_inner, transverse_from_scalar
from bellqft.quadrature import QuadratureError
from bellqft.spacetime import Wedge, random_bump

OUTPUT_DIR_ENV = "BELLQFT_OUTPUT_DIR"

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_NONCONVERGENCE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # argparse only treats plain decimals as negative numbers; also
        # accept "-2e-12" and "-1,2,3" as values (no option starts with a digit)
        self._negative_number_matcher = re.compile(r"^-\.?\d")

    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


class NonConvergence(Exception):
    def __init__(self, message: str, envelope: ResultEnvelope | None = None):
        super().__init__(message)
        self.envelope = envelope


def _floats(text: str, count: int, what: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise DomainError(f"{what} must be {count} comma-separated numbers") from exc
    if len(values) != count:
        raise DomainError(f"{what} must have exactly {count} values, got {len(values)}")
    if not all(math.isfinite(v) for v in values):
        raise DomainError(f"{what} must be finite")
    return values


def _positive(value: float, what: str) -> float:
    if not (value > 0 and math.isfinite(value)):
        raise DomainError(f"{what} must be positive, got {value}")
    return value


def _complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


# -- subcommands ---------------------------------------------------------------


def run_qm_chsh(args) -> ResultEnvelope:
    if args.angles is None:
        angles = qm_bell.BellAngles.standard()
    else:
        angles = qm_bell.BellAngles(*_floats(args.angles, 4, "--angles"))
    value = qm_bell.chsh_value(angles)
    top = float(np.max(np.abs(np.linalg.eigvalsh(qm_bell.chsh_operator(angles)))))
    return ResultEnvelope(
        "qm-chsh",
        {"angles": [angles.alpha, angles.alpha_prime, angles.beta, angles.beta_prime]},
        {"chsh": value, "magnitude": abs(value), "operator_norm": top, "tsirelson": chsh.TSIRELSON},
    )


def _unitary(args) -> chsh.UnitaryParams | None:
    if args.unitary is None:
        return None
    return chsh.UnitaryParams.from_array(_floats(args.unitary, 8, "--unitary"))


def run_qft_chsh(args) -> ResultEnvelope:
    params = ModularParams(args.lam, args.eta, args.eta_prime)
    u = _unitary(args)
    breakdown = chsh.chsh_base(params) if u is None else chsh.chsh_unitary(params, u)
    inputs = {"lambda": args.lam, "eta": args.eta, "eta_prime": args.eta_prime}
    if u is not None:
        inputs["unitary"] = dict(zip(chsh.UnitaryParams.names(), u.as_array().tolist()))
    return ResultEnvelope("qft-chsh", inputs, breakdown.as_dict(), field=args.field)


def run_optimize(args) -> ResultEnvelope:
    if args.starts is not None and args.starts < 1:
        raise DomainError("--starts must be at least 1")
    options = {}
    if args.max_iter is not None:
        options["max_iter"] = args.max_iter
    if args.problem == "base":
        starts = args.starts if args.starts is not None else 64
        result = maximize_base(starts, args.seed, **options)
        names = ("lambda", "eta", "eta_prime")
    else:
        starts = args.starts if args.starts is not None else 256
        result = maximize_unitary(starts, args.seed, **options)
        names = ("lambda", "eta", "eta_prime") + chsh.UnitaryParams.names()
    outputs = {
        "best_value": result.best_value,
        "best_point": dict(zip(names, result.best_point.tolist())),
        "evaluations": result.evaluations,
        "starts": result.starts,
        "converged_starts": int(sum(result.converged)),
        "history": result.history,
        "notes": dict(result.notes),
    }
    envelope = ResultEnvelope(
        "optimize",
        {"problem": args.problem, "starts": starts, "seed": args.seed, "max_iter": args.max_iter},
        outputs,
        field=args.field,
    )
    if not result.converged[result.notes["best_start"]]:
        raise NonConvergence("best start hit max_iter before its simplex collapsed", envelope)
    return envelope


def run_kernels_check(args) -> ResultEnvelope:
    m = _positive(args.mass, "--mass")
    tol = _positive(args.tol, "--tol")
    if args.pairs < 1:
        raise DomainError("--pairs must be at least 1")
    rng = np.random.default_rng(args.seed)
    pj = KernelChoice(KernelKind.PAULI_JORDAN, m)
    had = KernelChoice(KernelKind.HADAMARD, m)
    causal, causal_err = [], []
    for _ in range(args.pairs):
        f, g = random_bump(rng, Wedge.RIGHT), random_bump(rng, Wedge.LEFT)
        res = smeared_pairing(f, g, pj, tol)
        causal.append(res.value)
        causal_err.append(res.error)
    f, g = random_bump(rng), random_bump(rng)
    pj_fg, pj_gf = smeared_pairing(f, g, pj, tol), smeared_pairing(g, f, pj, tol)
    h_fg, h_gf = smeared_pairing(f, g, had, tol), smeared_pairing(g, f, had, tol)
    momentum = scalar_inner(f, g, m, tol)
    outputs = {
        "microcausality": {"values": causal, "max_abs": max(abs(v) for v in causal)},
        "pauli_jordan": {"fg": pj_fg.value, "gf": pj_gf.value, "antisymmetry_defect": abs(pj_fg.value + pj_gf.value)},
        "hadamard": {"fg": h_fg.value, "gf": h_gf.value, "symmetry_defect": abs(h_fg.value - h_gf.value)},
        "momentum_space": {
            "inner_product": _complex_pair(momentum.value),
            "twice_real_part": 2.0 * momentum.value.real,
            "twice_imag_part": 2.0 * momentum.value.imag,
            "k_max": momentum.k_max,
        },
    }
    errors = {
        "microcausality": max(causal_err),
        "pauli_jordan": pj_fg.error + pj_gf.error,
        "hadamard": h_fg.error + h_gf.error,
        "momentum_space": momentum.error,
    }
    inputs = {"mass": m, "tol": tol, "pairs": args.pairs, "seed": args.seed}
    return ResultEnvelope("kernels-check", inputs, outputs, errors)


def run_proca_check(args) -> ResultEnvelope:
    M = _positive(args.mass, "--mass")
    tol = _positive(args.tol, "--tol")
    if args.pairs < 1:
        raise DomainError("--pairs must be at least 1")
    rng = np.random.default_rng(args.seed)
    reports = []
    for _ in range(args.pairs):
        f, g = random_bump(rng), random_bump(rng)
        reports.append(duality_report(f, g, M, tol))
    f, g, h = random_bump(rng), random_bump(rng), random_bump(rng)
    fv, gv = transverse_from_scalar(f, M), transverse_from_scalar(g, M)
    plain = proca_inner(fv, gv, M, tol)
    shifted = proca_inner(fv + gradient_of_scalar(h), gv, M, tol)
    opt = chsh.BASE_OPTIMUM
    params = ModularParams(opt["lambda"], opt["eta"], opt["eta_prime"])
    outputs = {
        "duality": [r.as_dict() for r in reports],
        "max_relative_error": max(r.relative_error for r in reports),
        "longitudinal_shift": abs(shifted.value - plain.value),
        "proca_tagged_chsh": chsh.chsh_base(params).chsh,
    }
    errors = {
        "duality": max(r.proca_error + r.scalar_error for r in reports),
        "longitudinal_shift": plain.error + shifted.error,
    }
    inputs = {"mass": M, "tol": tol, "pairs": args.pairs, "seed": args.seed}
    return ResultEnvelope("proca-check", inputs, outputs, errors, field="proca")


def _fixed(items: Sequence[str] | None) -> dict[str, float]:
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or name not in chsh.GRID_PARAMS:
            raise DomainError(f"--fixed expects name=value with name in {chsh.GRID_PARAMS}, got {item!r}")
        try:
            out[name] = float(value)
        except ValueError as exc:
            raise DomainError(f"--fixed value for {name} is not a number") from exc
    return out


def run_surface(args):
    axis1, axis2 = chsh.GridAxis.parse(args.param1), chsh.GridAxis.parse(args.param2)
    fixed = _fixed(args.fixed)
    grid = chsh.surface_grid(axis1, axis2, fixed, _unitary(args))
    if args.format == "csv":
        buf = io.StringIO()
        buf.write(f"{axis1.name},{axis2.name},chsh\n")
        for x, y, z in grid.rows():
            buf.write(f"{format_float(x)},{format_float(y)},{format_float(z)}\n")
        return buf.getvalue()
    outputs = {
        axis1.name: axis1.values().tolist(),
        axis2.name: axis2.values().tolist(),
        "chsh": grid.values.tolist(),
    }
    inputs = {"param1": args.param1, "param2": args.param2, "fixed": fixed, "unitary": args.unitary}
    return ResultEnvelope("surface", inputs, outputs, field=args.field)


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bellqft", description="Bell-CHSH correlators for the free scalar field in 1+1 dimensions.")
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)
    sub.required = True

    def common(p, formats=("json",), default_format="json"):
        p.add_argument("--format", choices=formats, default=default_format)
        p.add_argument("--output", help="write here instead of stdout")
        p.add_argument("--seed", type=int, default=0)
        return p

    p = common(sub.add_parser("qm-chsh", help="two-qubit singlet CHSH value"))
    p.add_argument("--angles", help="alpha,alpha',beta,beta' in radians")
    p.set_defaults(run=run_qm_chsh)

    def modular(p):
        p.add_argument("--lambda", dest="lam", type=float, default=chsh.BASE_OPTIMUM["lambda"])
        p.add_argument("--eta", type=float, default=chsh.BASE_OPTIMUM["eta"])
        p.add_argument("--eta-prime", dest="eta_prime", type=float, default=chsh.BASE_OPTIMUM["eta_prime"])

    def field_flag(p):
        p.add_argument("--field", choices=("scalar", "proca"), default="scalar")

    p = common(sub.add_parser("qft-chsh", help="vacuum CHSH correlator of Weyl-built dichotomic operators"))
    modular(p)
    p.add_argument("--unitary", help="alpha,beta,alpha',beta',sigma,tau,sigma',tau'")
    field_flag(p)
    p.set_defaults(run=run_qft_chsh)

    p = common(sub.add_parser("optimize", help="multistart Nelder-Mead maximization"))
    p.add_argument("--problem", choices=("base", "unitary"), default="base")
    p.add_argument("--starts", type=int)
    p.add_argument("--max-iter", dest="max_iter", type=int)
    field_flag(p)
    p.set_defaults(run=run_optimize)

    p = common(sub.add_parser("kernels-check", help="position-space kernel and causality checks"))
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--pairs", type=int, default=3)
    p.set_defaults(run=run_kernels_check)

    p = common(sub.add_parser("proca-check", help="Proca/scalar inner-product duality"))
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--pairs", type=int, default=2)
    p.set_defaults(run=run_proca_check)

    p = common(sub.add_parser("surface", help="CHSH over a grid of two modular parameters"), ("csv", "json"), "csv")
    p.add_argument("--param1", required=True, help="name:lo:hi:n")
    p.add_argument("--param2", required=True, help="name:lo:hi:n")
    p.add_argument("--fixed", action="append", help="name=value for the third parameter (repeatable)")
    p.add_argument("--unitary", help="alpha,beta,alpha',beta',sigma,tau,sigma',tau'")
    field_flag(p)
    p.set_defaults(run=run_surface)
    return parser


def _destination(args) -> Path | None:
    if args.output:
        return Path(args.output)
    directory = os.environ.get(OUTPUT_DIR_ENV)
    if directory:
        ext = "csv" if args.format == "csv" else "json"
        return Path(directory) / f"{args.subcommand}.{ext}"
    return None


def _write(text: str, target: Path | None, stdout) -> None:
    if target is None:
        stdout.write(text)
        return
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_DOMAIN
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_DOMAIN

    start = time.perf_counter()
    status = EXIT_OK
    try:
        result = args.run(args)
    except NonConvergence as exc:
        stderr.write(f"non-convergence: {exc}\n")
        result, status = exc.envelope, EXIT_NONCONVERGENCE
    except QuadratureError as exc:
        stderr.write(f"non-convergence: {exc}\n")
        return EXIT_NONCONVERGENCE
    except (DomainError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    if result is None:
        return status

    if isinstance(result, ResultEnvelope):
        result.wall_time = time.perf_counter() - start
        result.inputs = {"argv": argv, **result.inputs}
        text = dumps(result.as_dict())
    else:
        text = result
    try:
        _write(text, _destination(args), stdout)
    except OSError as exc:
        stderr.write(f"error: cannot write output: {exc}\n")
        return EXIT_DOMAIN
    return status


def main() -> None:
    sys.exit(run())
