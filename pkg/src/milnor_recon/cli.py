"""Command-line driver.

Exit codes: 0 success, 2 structural or recognition rejection (reason in
the output), 3 malformed input.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import io
from .algebra import AlgebraTable, validate_table
from .errors import MilnorReconError
from .exact import Polynomial
from .forms import DEFAULT_SEARCH_BOUND, cubic_invariants, hesse_cubic, j_of_Qt, recover_form_with_matrix
from .milnor import build_milnor_table, gradient_map, hilbert_function, scramble_table
from .reconstruct import invariants, recognize, reconstruct_map

COMMANDS = ("milnor", "scramble", "reconstruct", "recover", "recognize", "invariant", "roundtrip")

EXIT_OK, EXIT_REJECTED, EXIT_MALFORMED = 0, 2, 3


@dataclass
class JobSpec:
    command: str
    input: Path | None = None
    output: Path | None = None
    seed: int = 1
    search_bound: int = DEFAULT_SEARCH_BOUND
    t: Fraction | None = None
    explicit_basis: Path | None = None


class Rejected(Exception):
    def __init__(self, payload: dict):
        super().__init__(payload.get("reason"))
        self.payload = payload


def _rejection(exc: MilnorReconError) -> dict:
    return {"status": "rejected", "reason": exc.reason, "detail": str(exc)}


def _read_json(path: Path | None) -> Any:
    if path is None:
        raise io.MalformedInput("--input is required")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise io.MalformedInput(f"cannot read {path}: {exc}") from exc
    return io.loads(text)


def _read_algebra(path: Path | None) -> AlgebraTable:
    T = io.algebra_from_json(_read_json(path))
    report = validate_table(T)
    if not report.valid:
        raise io.MalformedInput(f"table is not associative at triples {report.violations[:5]}")
    return T


def _read_form(job: JobSpec) -> Polynomial:
    if job.t is not None:
        return hesse_cubic(job.t)
    return io.poly_from_json(_read_json(job.input))


def _read_map(job: JobSpec):
    """A map file, a form file (its gradient is used), or a reconstruct report."""
    if job.t is not None:
        return gradient_map(hesse_cubic(job.t))
    obj = _read_json(job.input)
    if isinstance(obj, dict) and "phi" in obj:
        obj = obj["phi"]
    if isinstance(obj, dict) and "components" in obj:
        return io.map_from_json(obj)
    if isinstance(obj, dict) and "terms" in obj:
        return gradient_map(io.poly_from_json(obj))
    raise io.MalformedInput("expected a map, a form, or a reconstruct report")


def _report_json(r) -> dict:
    return {
        "status": "success",
        "N": r.N,
        "nu": r.nu,
        "n": r.n,
        "m": r.m,
        "loewy": r.loewy,
        "f": io.matrix_to_json(r.f_coords),
        "gamma": io.matrix_to_json(r.gamma),
        "monomials": [list(mu) for mu in r.monomials],
        "phi": io.map_to_json(r.phi),
        "diagnostics": [list(d) for d in r.diagnostics],
    }


def _summary(Q: Polynomial) -> dict:
    P = gradient_map(Q)
    G = build_milnor_table(P)
    inv = invariants(G.table)
    out = {"dim": inv["dim"], "nu": inv["nu"], "hilbert": hilbert_function(P)}
    if Q.nvars == 3 and Q.degree() == 3:
        out["J"] = io.q2s(cubic_invariants(Q).J)
    return out


def roundtrip(Q: Polynomial, seed: int, search_bound: int = DEFAULT_SEARCH_BOUND) -> dict:
    """milnor -> scramble -> reconstruct -> recover -> milnor."""
    original = _summary(Q)
    T = scramble_table(build_milnor_table(gradient_map(Q)).table, seed)
    report = reconstruct_map(T)
    Q2, D0 = recover_form_with_matrix(report.phi, search_bound)
    recovered = _summary(Q2)
    match = original == recovered
    return {
        "status": "success" if match else "rejected",
        "reason": None if match else "InvariantMismatch",
        "seed": seed,
        "original": original,
        "recovered": recovered,
        "phi": io.map_to_json(report.phi),
        "D0": io.matrix_to_json(D0),
        "recovered_form": io.poly_to_json(Q2),
        "match": match,
    }


def execute(job: JobSpec) -> dict:
    """Run one job and return the JSON payload; raises Rejected or MalformedInput."""
    try:
        if job.command == "milnor":
            P = _read_map(job)
            basis = io.basis_from_json(_read_json(job.explicit_basis)) if job.explicit_basis else None
            return io.algebra_to_json(build_milnor_table(P, basis).table)
        if job.command == "scramble":
            return io.algebra_to_json(scramble_table(_read_algebra(job.input), job.seed))
        if job.command == "reconstruct":
            return _report_json(reconstruct_map(_read_algebra(job.input)))
        if job.command == "recover":
            Q, D0 = recover_form_with_matrix(_read_map(job), job.search_bound)
            return {"status": "success", "form": io.poly_to_json(Q), "D0": io.matrix_to_json(D0)}
        if job.command == "recognize":
            v = recognize(_read_algebra(job.input))
            out = {"status": v.status, "reason": v.reason, "detail": v.detail}
            if v.report is not None:
                out["report"] = _report_json(v.report)
            if v.certificate is not None:
                out["certificate"] = v.certificate
            if not v.ok:
                raise Rejected(out)
            return out
        if job.command == "invariant":
            inv = cubic_invariants(_read_form(job))
            out = {"status": "success", "S": io.q2s(inv.S), "T": io.q2s(inv.T),
                   "Delta": io.q2s(inv.Delta), "J": io.q2s(inv.J)}
            if job.t is not None:
                out["J_formula"] = io.q2s(j_of_Qt(job.t))
            return out
        if job.command == "roundtrip":
            if job.t is None and job.input is not None and Path(job.input).is_dir():
                cases = {}
                for path in sorted(Path(job.input).glob("*.json")):
                    sub = JobSpec("roundtrip", path, None, job.seed, job.search_bound)
                    try:
                        cases[path.name] = roundtrip(_read_form(sub), job.seed, job.search_bound)
                    except MilnorReconError as exc:
                        cases[path.name] = _rejection(exc)
                ok = all(c["status"] == "success" for c in cases.values())
                out = {"status": "success" if ok else "rejected", "cases": cases}
            else:
                out = roundtrip(_read_form(job), job.seed, job.search_bound)
            if out["status"] != "success":
                raise Rejected(out)
            return out
    except MilnorReconError as exc:
        raise Rejected(_rejection(exc)) from exc
    raise io.MalformedInput(f"unknown command {job.command!r}")


def run(job: JobSpec, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        payload, status = execute(job), EXIT_OK
    except Rejected as rej:
        payload, status = rej.payload, EXIT_REJECTED
    except io.MalformedInput as exc:
        payload, status = {"status": "malformed", "reason": "MalformedInput", "detail": str(exc)}, EXIT_MALFORMED
    text = io.dumps(payload)
    if job.output is not None:
        Path(job.output).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    return status


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_MALFORMED, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="milnor-recon", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", type=Path)
    ap.add_argument("--output", type=Path)
    ap.add_argument("--seed", type=int, default=1, help="scramble seed; 0 is the identity")
    ap.add_argument("--search-bound", type=int, default=DEFAULT_SEARCH_BOUND)
    ap.add_argument("--qt", type=Fraction, help="use the cubic z1^3+z2^3+z3^3+t*z1*z2*z3")
    ap.add_argument("--explicit-basis", type=Path, help="milnor only: basis file of degree-tagged polynomials")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    job = JobSpec(args.command, args.input, args.output, args.seed, args.search_bound, args.qt, args.explicit_basis)
    return run(job)


if __name__ == "__main__":
    sys.exit(main())
