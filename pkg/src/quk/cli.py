"""Command-line front end: classify, check-gate, certify, orbits and mixing, all emitting JSON.

Exit codes: 0 success (certify: Dense), 2 invalid input or malformed matrix, 3 non-unitary input,
10 certify Finite, 11 certify Inconclusive.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from threadpoolctl import threadpool_limits

from .adjointrep import SIGMA_TOL, adjoint_report
from .certgeom import certificate_check, spectral_report
from .composite import Budgets, Status, cn_gate, density_certify, intra_qudit_cn, trichotomy_classify
from .diagonalgates import (
    PhaseFunction,
    bicharacter_test,
    coboundary,
    orbit_mixing_test,
    t_s,
    ts_mixing_report,
    ts_divisibility_criterion,
)
from .errors import MatrixFormatError, NotUnitaryError
from .matrixio import load_matrix
from .paulicliff import EPS_MATCH, EPS_UNITARY, check_unitary, clifford_membership, hadamard, pauli_x, pauli_z, phase_gate

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NOT_UNITARY = 3
EXIT_FINITE = 10
EXIT_INCONCLUSIVE = 11

D_MIN, D_MAX = 2, 100
SIG_DIGITS = 12

GATE_REGISTRY = ("X", "Z", "H", "P", "Ts(s)", "CN(p,q)", "intraCN(p,q)", "matrix:<path>")

_TS = re.compile(r"^Ts\((\d+)\)$")
_CN = re.compile(r"^(intraCN|CN)\((\d+),\s*(\d+)\)$")


class SpecError(ValueError):
    """A command-line gate spec or argument is invalid."""


@dataclass
class RunConfig:
    command: str
    d: int
    gate_specs: list[str] = field(default_factory=list)
    budgets: Budgets = field(default_factory=Budgets)
    tol: Optional[float] = None
    json_out: Optional[str] = None
    s: Optional[int] = None

    def __post_init__(self):
        if self.tol is not None and not self.tol > 0:
            raise SpecError(f"tolerance must be positive, got {self.tol}")


@dataclass
class Gate:
    spec: str
    matrix: np.ndarray
    ts_param: Optional[int] = None


def build_gate(d: int, spec: str) -> Gate:
    """Materialize a registry spec at dimension d. Raises SpecError, MatrixFormatError or NotUnitaryError."""
    spec = spec.strip()
    fixed = {"X": pauli_x, "Z": pauli_z, "H": hadamard, "P": phase_gate}
    if spec in fixed:
        return Gate(spec, fixed[spec](d))
    m = _TS.match(spec)
    if m:
        s = int(m.group(1))
        if s < 1:
            raise SpecError(f"Ts needs s >= 1, got {spec}")
        return Gate(spec, t_s(d, s), ts_param=s)
    m = _CN.match(spec)
    if m:
        kind, p, q = m.group(1), int(m.group(2)), int(m.group(3))
        try:
            if kind == "CN":
                if p * q != d:
                    raise SpecError(f"{spec} acts on dimension {p * q}, not {d}")
                return Gate(spec, cn_gate(p, q))
            return Gate(spec, intra_qudit_cn(d, p, q))
        except SpecError:
            raise
        except ValueError as exc:
            raise SpecError(f"{spec}: {exc}") from exc
    if spec.startswith("matrix:"):
        U = load_matrix(spec[len("matrix:"):])
        if U.shape != (d, d):
            raise MatrixFormatError(f"{spec} has dimension {U.shape[0]}, expected {d}")
        check_unitary(U, EPS_UNITARY)
        return Gate(spec, U)
    raise SpecError(f"unknown gate spec {spec!r}; registry: {', '.join(GATE_REGISTRY)}")


def round_floats(obj):
    """Round every float to 12 significant digits so reruns diff cleanly."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return obj
        return float(f"{obj:.{SIG_DIGITS}g}") + 0.0
    if isinstance(obj, (np.floating,)):
        return round_floats(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    return obj


def render(obj) -> str:
    return json.dumps(round_floats(obj), indent=2) + "\n"


def _check_d(d: int) -> None:
    if not D_MIN <= d <= D_MAX:
        raise SpecError(f"d must lie in [{D_MIN}, {D_MAX}], got {d}")


def cmd_classify(cfg: RunConfig) -> tuple[dict, int]:
    _check_d(cfg.d)
    return trichotomy_classify(cfg.d).to_dict(), EXIT_OK


def _is_diagonal(U: np.ndarray) -> bool:
    return bool(np.max(np.abs(U - np.diag(np.diag(U)))) <= 1e-12)


def cmd_check_gate(cfg: RunConfig) -> tuple[dict, int]:
    _check_d(cfg.d)
    if len(cfg.gate_specs) != 1:
        raise SpecError("check-gate takes exactly one gate spec")
    gate = build_gate(cfg.d, cfg.gate_specs[0])
    tol = cfg.tol if cfg.tol is not None else EPS_MATCH
    wit = clifford_membership(cfg.d, gate.matrix, tol=tol)
    spec_rep = spectral_report(gate.matrix)
    report = {
        "d": cfg.d,
        "gate": gate.spec,
        "clifford": wit.to_dict(),
        "spectral": spec_rep.to_dict(),
        "certificate": certificate_check(gate.matrix) is not None,
    }
    if _is_diagonal(gate.matrix):
        zeta = PhaseFunction(np.diag(gate.matrix))
        diag = {"bicharacter": bicharacter_test(coboundary(zeta))}
        if gate.ts_param is not None:
            diag["mixing"] = ts_mixing_report(cfg.d, gate.ts_param).to_dict()
            if gate.ts_param >= 2:
                diag["divisibility_predicate"] = ts_divisibility_criterion(cfg.d, gate.ts_param)
        else:
            diag["mixing"] = orbit_mixing_test(zeta, cfg.d).to_dict()
        report["diagonal"] = diag
    return report, EXIT_OK


def cmd_certify(cfg: RunConfig) -> tuple[dict, int]:
    _check_d(cfg.d)
    if not cfg.gate_specs:
        raise SpecError("certify needs at least one gate spec")
    gates = [build_gate(cfg.d, s) for s in cfg.gate_specs]
    sigma = cfg.tol if cfg.tol is not None else SIGMA_TOL
    verdict = density_certify(cfg.d, [g.matrix for g in gates], cfg.budgets, sigma_tol=sigma)
    out = verdict.to_dict()
    out["generators"] = {f"g{i}": g.spec for i, g in enumerate(gates)}
    code = {Status.DENSE: EXIT_OK, Status.FINITE: EXIT_FINITE, Status.INCONCLUSIVE: EXIT_INCONCLUSIVE}
    return out, code[verdict.status]


def cmd_orbits(cfg: RunConfig) -> tuple[dict, int]:
    _check_d(cfg.d)
    if cfg.d > 30:
        raise SpecError("orbit enumeration supports d <= 30")
    gates = [build_gate(cfg.d, s).matrix for s in cfg.gate_specs] or None
    return adjoint_report(cfg.d, gates), EXIT_OK


def cmd_mixing(cfg: RunConfig) -> tuple[dict, int]:
    _check_d(cfg.d)
    if cfg.s is None or cfg.s < 1:
        raise SpecError("mixing needs s >= 1")
    return ts_mixing_report(cfg.d, cfg.s).to_dict(), EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "check-gate": cmd_check_gate,
    "certify": cmd_certify,
    "orbits": cmd_orbits,
    "mixing": cmd_mixing,
}


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-words", type=_positive_int, default=Budgets.max_word_len,
                        help="maximum word length of the certificate search")
    common.add_argument("--budget-closure", type=_positive_int, default=Budgets.closure_cap,
                        help="maximum number of projective elements in closure enumeration")
    common.add_argument("--budget-search", type=_positive_int, default=Budgets.max_search_elements,
                        help="maximum number of distinct elements visited by the certificate search")
    common.add_argument("--tol", type=_positive_float, default=None,
                        help="commutant rank threshold (certify) or Pauli matching tolerance (check-gate)")
    common.add_argument("--json", dest="json_out", default=None, metavar="OUT",
                        help="also write the JSON result to this file")

    parser = argparse.ArgumentParser(prog="quk", description="Qudit Clifford analysis and universality certificates.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("classify", parents=[common], help="trichotomy class and recommended gate set")
    p.add_argument("d", type=int)
    p = sub.add_parser("check-gate", parents=[common], help="Clifford membership and spectral report for one gate")
    p.add_argument("d", type=int)
    p.add_argument("gate", help=f"one of {', '.join(GATE_REGISTRY)}")
    p = sub.add_parser("certify", parents=[common], help="density verdict for a generator set")
    p.add_argument("d", type=int)
    p.add_argument("gates", nargs="+")
    p = sub.add_parser("orbits", parents=[common], help="commutant dimension and SL(2, Z_d) orbits")
    p.add_argument("d", type=int)
    p.add_argument("gates", nargs="*")
    p = sub.add_parser("mixing", parents=[common], help="orbit-mixing report for T_s")
    p.add_argument("d", type=int)
    p.add_argument("s", type=int)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    specs = [args.gate] if args.command == "check-gate" else list(getattr(args, "gates", []) or [])
    budgets = Budgets(max_word_len=args.budget_words, max_search_elements=args.budget_search,
                      closure_cap=args.budget_closure)
    return RunConfig(args.command, args.d, specs, budgets, args.tol, args.json_out, getattr(args, "s", None))


def _thread_limit() -> Optional[int]:
    raw = os.environ.get("QUK_THREADS")
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError:
        raise SpecError(f"QUK_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise SpecError(f"QUK_THREADS must be a positive integer, got {raw!r}")
    return n


def run(cfg: RunConfig) -> tuple[dict, int]:
    with threadpool_limits(limits=_thread_limit()):
        return COMMANDS[cfg.command](cfg)


def _fail(code: int, message: str, **extra) -> int:
    sys.stdout.write(render({"error": message, **extra}))
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
        result, code = run(cfg)
    except NotUnitaryError as exc:
        return _fail(EXIT_NOT_UNITARY, str(exc), deviation=exc.deviation)
    except (SpecError, MatrixFormatError, ValueError) as exc:
        return _fail(EXIT_INVALID, str(exc))
    text = render(result)
    sys.stdout.write(text)
    if cfg.json_out:
        with open(cfg.json_out, "w") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
