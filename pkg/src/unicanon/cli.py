"""Command-line front end.

All file formats use JSON with 1-based indices and complex numbers as
[re, im] pairs.  Exit codes: 0 success, 2 validation error (machine-readable
object on stderr), 64 unknown subcommand, 65 parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .numcore import Tolerance, equiv_canonical, simil_canonical
from . import mbm
from .mbm import MarkedBlockMatrix
from . import scheme as scheme_mod
from .scheme import Scheme, fill_general_position, render_ascii, count_params
from . import quiverrep as qr
from . import dims as dims_mod
from . import euclid
from . import wildness

__all__ = ["dispatch", "main"]

COMMANDS = (
    "canon-matrix",
    "canon-mbm",
    "canon-rep",
    "decompose",
    "isometric",
    "scheme",
    "fill-scheme",
    "dims",
    "params",
    "construct",
    "realify",
    "real-type",
    "decompose-real",
    "gadget",
)


class _CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _c2j(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _matrix_to_json(M) -> list:
    return [[_c2j(z) for z in row] for row in np.atleast_2d(M)]


def _j2c(p) -> complex:
    # entries are [re, im] pairs; bare numbers are taken as real
    if isinstance(p, (int, float)):
        return complex(p)
    return complex(p[0], p[1])


def _json_to_matrix(data) -> np.ndarray:
    if isinstance(data, dict):
        data = data["entries"]
    try:
        return np.array([[_j2c(p) for p in row] for row in data], dtype=complex)
    except (TypeError, IndexError, ValueError) as exc:
        raise _CliError(2, f"not a matrix: {exc}")


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _CliError(65, f"cannot parse {path}: {exc}")


def _emit(obj, args):
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _transcript_json(T):
    return {
        "R": [_matrix_to_json(b) for b in T.R],
        "S": [_matrix_to_json(b) for b in T.S],
    }


def _isometry_json(T):
    return {"S": [_matrix_to_json(b) for b in T.S]}


def _load_rep(path):
    data = _load_json(path)
    try:
        return qr.Representation.from_json(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise _CliError(65, f"bad representation file {path}: {exc}")


def _parse_dimvec(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise _CliError(65, f"bad dimension vector {text!r}")


def _build_parser():
    ap = argparse.ArgumentParser(prog="unicanon", add_help=True)
    ap.add_argument("--tol", type=float, default=1e-9)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", choices=("json", "ascii"), default=None)
    ap.add_argument("--transcript", default=None, help="write transcript JSON here")
    ap.add_argument("--out", default=None, help="write output here instead of stdout")
    sub = ap.add_subparsers(dest="command")

    p = sub.add_parser("canon-matrix")
    p.add_argument("--mode", choices=("equiv", "simil"), required=True)
    p.add_argument("file")

    for name in ("canon-mbm", "scheme"):
        p = sub.add_parser(name)
        p.add_argument("file")

    p = sub.add_parser("canon-rep")
    p.add_argument("file")

    p = sub.add_parser("decompose")
    p.add_argument("file")

    p = sub.add_parser("isometric")
    p.add_argument("file")
    p.add_argument("file2")

    p = sub.add_parser("fill-scheme")
    p.add_argument("--mode", choices=("real-random", "integer"), default="real-random")
    p.add_argument("file")

    p = sub.add_parser("dims")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("file")

    p = sub.add_parser("params")
    p.add_argument("--d", required=True)
    p.add_argument("file")

    p = sub.add_parser("construct")
    p.add_argument("--d", required=True)
    p.add_argument("file")

    for name in ("realify", "real-type", "decompose-real"):
        p = sub.add_parser(name)
        p.add_argument("file")

    p = sub.add_parser("gadget")
    p.add_argument("--kind", required=True)
    p.add_argument("file")
    p.add_argument("--in2", dest="file2", default=None)
    return ap


def _mbm_out(canonical, trace, tol):
    zs = scheme_mod.zones(trace)
    return {
        "canonical": canonical.to_json(),
        "zones": [
            {
                "depth": z.depth,
                "kind": z.kind,
                "block": list(z.block),
            }
            for z in zs
        ],
    }


def _run(args) -> int:
    tol = Tolerance(abs=args.tol)
    cmd = args.command
    if cmd == "canon-matrix":
        A = _json_to_matrix(_load_json(args.file))
        if args.mode == "equiv":
            can, R, S = equiv_canonical(A, tol)
            out = {"matrix": _matrix_to_json(can.matrix())}
            if args.transcript:
                with open(args.transcript, "w") as fh:
                    json.dump(
                        {"R": _matrix_to_json(R), "S": _matrix_to_json(S)}, fh
                    )
        else:
            n = A.shape[0]
            M = MarkedBlockMatrix((n,), (n,), A, frozenset({(0, 0)}))
            C, T, _ = mbm.canonicalize(M, tol)
            out = {"matrix": _matrix_to_json(C.entries)}
            if args.transcript:
                with open(args.transcript, "w") as fh:
                    json.dump(_transcript_json(T), fh)
        _emit(out, args)
        return 0
    if cmd == "canon-mbm":
        M = MarkedBlockMatrix.from_json(_load_json(args.file))
        C, T, trace = mbm.canonicalize(M, tol)
        if args.transcript:
            with open(args.transcript, "w") as fh:
                json.dump(_transcript_json(T), fh)
        _emit(_mbm_out(C, trace, tol), args)
        return 0
    if cmd == "canon-rep":
        A = _load_rep(args.file)
        Ainf, T, schemes = qr.rep_canonical(A, tol)
        out = {
            "canonical": Ainf.to_json(),
            "schemes": {a: S.to_json() for a, S in schemes.items()},
        }
        if args.transcript:
            with open(args.transcript, "w") as fh:
                json.dump(_isometry_json(T), fh)
        _emit(out, args)
        return 0
    if cmd == "decompose":
        data = _load_json(args.file)
        if "quiver" in data:
            A = qr.Representation.from_json(data)
            parts = qr.decompose_rep(A, tol)
            out = {
                "summands": [
                    {"multiplicity": m, "representation": P.to_json()}
                    for P, m in parts
                ]
            }
        else:
            M = MarkedBlockMatrix.from_json(data)
            parts = mbm.decompose(M, tol)
            out = {
                "summands": [
                    {"multiplicity": m, "matrix": P.to_json()} for P, m in parts
                ]
            }
        _emit(out, args)
        return 0
    if cmd == "isometric":
        A = _load_rep(args.file)
        B = _load_rep(args.file2)
        _emit({"isometric": bool(qr.isometric(A, B, tol))}, args)
        return 0
    if cmd == "scheme":
        M = MarkedBlockMatrix.from_json(_load_json(args.file))
        C, _, trace = mbm.canonicalize(M, tol)
        S = scheme_mod.scheme_of(C, scheme_mod.zones(trace), tol)
        if args.format == "json":
            _emit(S.to_json(), args)
        else:
            _emit(render_ascii(S), args)
        return 0
    if cmd == "fill-scheme":
        S = Scheme.from_json(_load_json(args.file))
        M = fill_general_position(S, args.mode, seed=args.seed, tol=tol)
        _emit(M.to_json(), args)
        return 0
    if cmd == "dims":
        Q = qr.Quiver.from_json(_load_json(args.file))
        vecs = dims_mod.enumerate_D(Q, args.bound)
        _emit("\n".join(json.dumps(list(v)) for v in vecs), args)
        return 0
    if cmd == "params":
        Q = qr.Quiver.from_json(_load_json(args.file))
        d = _parse_dimvec(args.d)
        nr, nc = dims_mod.max_params(Q, d)
        _emit({"real": nr, "complex": nc}, args)
        return 0
    if cmd == "construct":
        Q = qr.Quiver.from_json(_load_json(args.file))
        d = _parse_dimvec(args.d)
        R = dims_mod.construct_indecomposable(Q, d, seed=args.seed, tol=tol)
        _emit(R.to_json(), args)
        return 0
    if cmd == "realify":
        A = _load_rep(args.file)
        _emit(euclid.realify(A).to_json(), args)
        return 0
    if cmd == "real-type":
        A = _load_rep(args.file)
        rt = euclid.classify_real(A, tol)
        out = {"kind": rt.kind}
        if rt.lam is not None:
            out["lambda"] = int(rt.lam)
        if rt.form is not None:
            out["form"] = rt.form.to_json()
        _emit(out, args)
        return 0
    if cmd == "decompose-real":
        A = _load_rep(args.file)
        parts = euclid.decompose_real(A, tol)
        _emit(
            {
                "summands": [
                    {"multiplicity": m, "representation": P.to_json()}
                    for P, m in parts
                ]
            },
            args,
        )
        return 0
    if cmd == "gadget":
        if args.kind not in wildness.GADGET_KINDS:
            raise _CliError(2, f"unknown gadget kind {args.kind!r}")
        X = _json_to_matrix(_load_json(args.file))
        G = wildness.gadget(args.kind, X)
        if isinstance(G, MarkedBlockMatrix):
            out = {"gadget": G.to_json()}
        else:
            out = {"gadget": G.to_json()}
        if args.file2:
            Y = _json_to_matrix(_load_json(args.file2))
            out["faithful"] = bool(wildness.gadget_faithful(args.kind, X, Y, tol))
        _emit(out, args)
        return 0
    raise _CliError(64, f"unknown command {cmd!r}")


def dispatch(argv) -> int:
    argv = list(argv)
    if not any(a in COMMANDS for a in argv):
        sys.stderr.write(
            json.dumps({"error": "unknown command", "argv": argv}) + "\n"
        )
        return 64
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit:
        sys.stderr.write(json.dumps({"error": "bad arguments"}) + "\n")
        return 65
    try:
        return _run(args)
    except _CliError as exc:
        sys.stderr.write(json.dumps({"error": str(exc)}) + "\n")
        return exc.code
    except (ValueError, KeyError, RuntimeError) as exc:
        sys.stderr.write(
            json.dumps({"error": str(exc), "type": type(exc).__name__}) + "\n"
        )
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
