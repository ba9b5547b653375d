"""Command line interface and the JSON file formats for generators,
bases, and equivalence reports.

Exit codes: 0 success (and "equivalent" for `equiv`), 1 "inequivalent"
or failed verification, 2 usage or validation error, 3 internal
discrepancy between the two decision routes (must never occur).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import equivalence, meb
from .chargroup import Decomposition, decompositions, dft_generator, hadamard_generator, zeilinger_generator
from .exact import DEFAULT_TOL, ExponentMatrix, Tolerance, is_zeilinger, to_complex

TOL_ENV_VAR = "MEBKIT_TOL"

_PROVENANCE_KINDS = ("character", "dft", "hadamard", "custom")


def _parse_generator_obj(obj, source: str) -> tuple[ExponentMatrix, dict | None]:
    if not isinstance(obj, dict):
        raise ValueError(f"{source}: expected a JSON object at top level")
    for key in ("d", "base", "entries"):
        if key not in obj:
            raise ValueError(f"{source}: missing field '{key}'")
    d = obj["d"]
    base = obj["base"]
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"{source}: field 'd' must be a positive integer, got {d!r}")
    if not isinstance(base, int) or base < 1:
        raise ValueError(f"{source}: field 'base' must be a positive integer, got {base!r}")
    if d % base != 0:
        raise ValueError(f"{source}: base {base} does not divide d={d}")
    entries = obj["entries"]
    if not isinstance(entries, list) or len(entries) != d:
        raise ValueError(f"{source}: 'entries' must hold {d} rows, got {len(entries) if isinstance(entries, list) else type(entries).__name__}")
    scale = d // base
    grid = []
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != d:
            raise ValueError(f"{source}: entries row {i} has length {len(row) if isinstance(row, list) else '?'}, expected {d}")
        for j, e in enumerate(row):
            if not isinstance(e, int) or isinstance(e, bool):
                raise ValueError(f"{source}: entries row {i}, column {j} is not an integer")
        grid.append(tuple((e % base) * scale for e in row))
    provenance = obj.get("provenance")
    if provenance is not None:
        if not isinstance(provenance, dict) or provenance.get("kind") not in _PROVENANCE_KINDS:
            raise ValueError(f"{source}: provenance kind must be one of {_PROVENANCE_KINDS}")
    return ExponentMatrix(d, tuple(grid)), provenance


def read_generator(
    path: str, verify: bool = True, tol: Tolerance = DEFAULT_TOL
) -> tuple[ExponentMatrix, dict | None]:
    """Load a generator file; with verify=True the grid must be Zeilinger."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    matrix, provenance = _parse_generator_obj(obj, path)
    if verify and not is_zeilinger(to_complex(matrix), tol):
        raise ValueError(f"{path}: grid is not a Zeilinger matrix (unitary with flat moduli)")
    return matrix, provenance


def write_generator(matrix: ExponentMatrix, provenance: dict | None, path: str) -> None:
    """Write a generator file that reads back to an identical grid."""
    text = _generator_text(matrix, provenance)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _generator_text(matrix: ExponentMatrix, provenance: dict | None) -> str:
    obj = {
        "d": matrix.d,
        "base": matrix.d,
        "entries": [list(row) for row in matrix.entries],
    }
    if provenance is not None:
        obj["provenance"] = provenance
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _basis_obj(basis: meb.MebBasis) -> dict:
    states = []
    for (j, k), state in basis:
        states.append(
            {
                "j": j,
                "k": k,
                "re": [float(a.real) for a in state],
                "im": [float(a.imag) for a in state],
            }
        )
    obj = {"kind": "meb_basis", "d": basis.d, "states": states}
    if basis.generator is not None:
        obj["generator"] = {
            "d": basis.generator.d,
            "base": basis.generator.d,
            "entries": [list(row) for row in basis.generator.entries],
        }
    return obj


def write_basis(basis: meb.MebBasis, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(_basis_obj(basis), indent=2, sort_keys=True) + "\n")


def read_basis(path: str) -> meb.MebBasis:
    """Load a basis file written by write_basis."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(obj, dict) or obj.get("kind") != "meb_basis":
        raise ValueError(f"{path}: not a basis file (kind != 'meb_basis')")
    d = obj.get("d")
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"{path}: field 'd' must be a positive integer")
    states = np.zeros((d, d, d * d), dtype=complex)
    seen = set()
    for i, entry in enumerate(obj.get("states", [])):
        j, k = entry.get("j"), entry.get("k")
        if not (isinstance(j, int) and isinstance(k, int) and 0 <= j < d and 0 <= k < d):
            raise ValueError(f"{path}: state {i} has invalid indices (j={j!r}, k={k!r})")
        if (j, k) in seen:
            raise ValueError(f"{path}: duplicate state index ({j},{k})")
        seen.add((j, k))
        re, im = entry.get("re"), entry.get("im")
        if not (isinstance(re, list) and isinstance(im, list) and len(re) == len(im) == d * d):
            raise ValueError(f"{path}: state ({j},{k}) needs re/im lists of length {d * d}")
        states[j, k] = np.array(re, dtype=float) + 1j * np.array(im, dtype=float)
    if len(seen) != d * d:
        raise ValueError(f"{path}: found {len(seen)} states, expected {d * d}")
    generator = None
    if obj.get("generator") is not None:
        generator, _ = _parse_generator_obj(obj["generator"], path)
    return meb.MebBasis(d=d, states=states, generator=generator)


def _resolve_tol(args) -> Tolerance:
    if args.tol is not None:
        return Tolerance(args.tol)
    env = os.environ.get(TOL_ENV_VAR)
    if env is not None:
        try:
            return Tolerance(float(env))
        except ValueError as exc:
            raise ValueError(f"{TOL_ENV_VAR}={env!r} is not a usable tolerance: {exc}") from exc
    return DEFAULT_TOL


def _parse_decomp_spec(spec: str) -> Decomposition:
    try:
        factors = tuple(int(part) for part in spec.split("x"))
    except ValueError:
        raise ValueError(f"bad decomposition spec {spec!r}; use forms like '6' or '2x3'") from None
    return Decomposition(factors)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_decomp(args) -> int:
    for dec in decompositions(args.d):
        print(str(dec))
    return 0


def _cmd_gen(args) -> int:
    if args.decomp is not None:
        dec = _parse_decomp_spec(args.decomp)
        matrix = zeilinger_generator(dec)
        provenance = {"kind": "character", "decomposition": list(dec.factors)}
    elif args.dft is not None:
        matrix = dft_generator(args.dft)
        provenance = {"kind": "dft", "decomposition": None}
    else:
        matrix = hadamard_generator(args.hadamard)
        provenance = {"kind": "hadamard", "decomposition": [2] * args.hadamard}
    _emit(_generator_text(matrix, provenance), args.out)
    return 0


def _cmd_basis(args) -> int:
    tol = _resolve_tol(args)
    matrix, _ = read_generator(args.gen, verify=not args.no_verify, tol=tol)
    basis = meb.generate_meb(matrix, tol)
    _emit(json.dumps(_basis_obj(basis), indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_verify(args) -> int:
    tol = _resolve_tol(args)
    if args.gen is not None:
        matrix, _ = read_generator(args.gen, verify=False, tol=tol)
        if not is_zeilinger(to_complex(matrix), tol):
            raise ValueError(f"{args.gen}: grid is not a Zeilinger matrix")
        basis = meb.generate_meb(matrix, tol)
    else:
        basis = read_basis(args.basis)

    lines = [f"d: {basis.d}"]
    report = meb.verify_meb(basis, tol)
    lines.append(f"gram: {'pass' if report.gram_ok else 'FAIL'}")
    lines.append(f"entanglement: {'pass' if report.entangled_ok else 'FAIL'}")
    if report.generator_flat_ok is None:
        lines.append("generator_flat: skipped (no generator attached)")
    else:
        lines.append(f"generator_flat: {'pass' if report.generator_flat_ok else 'FAIL'}")

    ok = report.ok
    if basis.generator is not None:
        group = meb.group_verify(meb.generator_columns(basis.generator), tol)
        lines.append(f"group_closure: {'pass' if group.closure else 'FAIL'}")
        lines.append(f"group_identity: {'pass' if group.identity_present else 'FAIL'}")
        lines.append(f"group_inverses: {'pass' if group.inverses else 'FAIL'}")
        lines.append(f"group_power: {'pass' if group.power_condition else 'FAIL'}")
        lines.append(f"group_commutative: {'pass' if group.commutative else 'FAIL'}")
        ok = ok and group.ok
        for failure in group.failures:
            lines.append(f"detail: {failure}")
    else:
        lines.append("group: skipped (no generator attached)")
    for failure in report.failures:
        lines.append(f"detail: {failure}")
    lines.append(f"result: {'pass' if ok else 'FAIL'}")
    print("\n".join(lines))
    return 0 if ok else 1


def _phase_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _witness_obj(witness: equivalence.Equivalent) -> dict:
    return {
        "col_perm": list(witness.col_perm.image),
        "row_perm": list(witness.row_perm.image),
        "diag": [_phase_pair(p) for p in witness.diag.phases],
    }


def _bilocal_obj(bilocal: equivalence.BilocalWitness) -> dict:
    def grid(u: np.ndarray) -> list[list[list[float]]]:
        return [[_phase_pair(complex(v)) for v in row] for row in u]

    two_pi = 2.0 * np.pi
    return {
        "u1": grid(bilocal.u1),
        "u2": grid(bilocal.u2),
        "pair_map": [
            {"from": list(src), "to": list(dst)} for src, dst in sorted(bilocal.pair_map.items())
        ],
        "thetas": [
            {"pair": list(src), "theta": float(np.angle(phase) % two_pi)}
            for src, phase in sorted(bilocal.phases.items())
        ],
    }


def _cmd_equiv(args) -> int:
    start = time.perf_counter()
    tol = _resolve_tol(args)
    m1, _ = read_generator(args.file1, verify=not args.no_verify, tol=tol)
    m2, _ = read_generator(args.file2, verify=not args.no_verify, tol=tol)
    if m1.d != m2.d:
        raise ValueError(f"dimension mismatch: {args.file1} has d={m1.d}, {args.file2} has d={m2.d}")

    fast_equivalent = equivalence.perm_equivalent(m1, m2)
    report: dict = {
        "verdict": "equivalent" if fast_equivalent else "inequivalent",
        "method": "canonical-form",
        "tolerance": tol.eps,
    }
    if not fast_equivalent:
        report["certificate"] = {
            "canonical_form_1": [list(r) for r in equivalence.canonical_form(m1).entries],
            "canonical_form_2": [list(r) for r in equivalence.canonical_form(m2).entries],
        }

    verdict = None
    if args.oracle or (args.witness and fast_equivalent):
        verdict = equivalence.meb_equivalent(m1, m2, tol)
        oracle_equivalent = isinstance(verdict, equivalence.Equivalent)
        if args.oracle:
            report["oracle"] = "equivalent" if oracle_equivalent else "inequivalent"
            report["method"] = "canonical-form+oracle"
            if oracle_equivalent != fast_equivalent:
                raise RuntimeError(
                    f"canonical forms say {report['verdict']} but the exhaustive "
                    f"search says {report['oracle']}"
                )
        if oracle_equivalent:
            report["witness"] = _witness_obj(verdict)

    if args.witness and fast_equivalent:
        bilocal = equivalence.witness_to_bilocal(m1, m2, verdict, tol)
        report["bilocal"] = _bilocal_obj(bilocal)

    print(json.dumps(report, indent=2, sort_keys=True))
    print(f"# elapsed: {time.perf_counter() - start:.3f}s")
    return 0 if fast_equivalent else 1


def _cmd_classes(args) -> int:
    tol = _resolve_tol(args)
    classes = equivalence.enumerate_classes(args.d, tol)
    print(f"d: {args.d}")
    print(f"classes: {len(classes)}")
    for i, cls in enumerate(classes, start=1):
        members = " ".join(str(dec) for dec in cls.members)
        print(f"class {i}: {members}")
    return 0


def _cmd_canon(args) -> int:
    tol = _resolve_tol(args)
    matrix, _ = read_generator(args.file, verify=not args.no_verify, tol=tol)
    canon = equivalence.canonical_form(matrix)
    print(_generator_text(canon, None), end="")
    return 0


def _add_tol(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=None, help=f"tolerance (default 1e-9, or ${TOL_ENV_VAR})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mebkit", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decomp", help="list the decompositions of d")
    p.add_argument("d", type=int)
    p.set_defaults(func=_cmd_decomp)

    p = sub.add_parser("gen", help="emit a generator file")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--decomp", help="character generator for a decomposition, e.g. 2x3 or 6")
    kind.add_argument("--dft", type=int, help="discrete Fourier transform generator")
    kind.add_argument("--hadamard", type=int, help="Kronecker-power Hadamard generator (d = 2^n)")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("basis", help="emit all d^2 basis states for a generator")
    p.add_argument("--gen", required=True)
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--no-verify", action="store_true", help="skip the Zeilinger check on load")
    _add_tol(p)
    p.set_defaults(func=_cmd_basis)

    p = sub.add_parser("verify", help="verify a generator or a basis file")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--gen")
    src.add_argument("--basis")
    _add_tol(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("equiv", help="decide equivalence of two generators")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--oracle", action="store_true", help="cross-check with the exhaustive search")
    p.add_argument("--witness", action="store_true", help="emit the explicit bilocal witness")
    p.add_argument("--no-verify", action="store_true", help="skip the Zeilinger check on load")
    _add_tol(p)
    p.set_defaults(func=_cmd_equiv)

    p = sub.add_parser("classes", help="enumerate equivalence classes of decompositions")
    p.add_argument("d", type=int)
    _add_tol(p)
    p.set_defaults(func=_cmd_classes)

    p = sub.add_parser("canon", help="print the canonical form of a generator")
    p.add_argument("file")
    p.add_argument("--no-verify", action="store_true", help="skip the Zeilinger check on load")
    _add_tol(p)
    p.set_defaults(func=_cmd_canon)

    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"internal discrepancy: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run_cli())
