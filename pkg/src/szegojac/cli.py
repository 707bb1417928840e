"""Command-line client.

Every subcommand builds the same request model the HTTP service
accepts and calls the same handler function, so the two surfaces share
one implementation. Inputs are JSON documents ({"a": [...], "b": [...]}
for matrices, {"alpha": [...]} for coefficients, {"x": [...], "v":
[...]} for weight tables); outputs are JSON, or CSV tables where a
sequence dump is natural. Exit codes: 0 all criteria pass, 2
inconclusive, 1 failure or error.
"""

import argparse
import json
import sys

from fastapi import HTTPException

from .service.models import (AsymptoticsRequest, CheckRequest,
                             CommuteRequest, EdgesRequest, EigsRequest,
                             GeronimusRequest, MatrixIn,
                             MFunctionRequest, SzegoMapRequest,
                             TolOverrides)
from .service.app import (asymptotics_endpoint, check_endpoint,
                          commute_endpoint, edges_endpoint,
                          eigs_endpoint, geronimus_endpoint,
                          m_function_endpoint, szego_map_endpoint)

_TOL_FLAGS = ("tol_edge", "tol_roundtrip", "tol_report", "tol_eig",
              "grid_size", "window_K")


def _add_common(p):
    p.add_argument("--input", default="-",
                   help="JSON input document (file path or - for stdin)")
    p.add_argument("--output", default="-",
                   help="output destination (file path or - for stdout)")
    p.add_argument("--csv", action="store_true",
                   help="emit CSV instead of JSON where a table exists")
    for name in _TOL_FLAGS:
        p.add_argument("--" + name.replace("_", "-").lower(),
                       dest=name, type=float, default=None)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="szegojac",
        description="Jacobi-matrix / circle-coefficient correspondence "
                    "toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run one direction of the "
                       "correspondence check")
    p.add_argument("--direction", required=True, choices=("1to2", "2to1"))
    p.add_argument("--variant", choices=("e", "o", "+", "-"))
    _add_common(p)

    p = sub.add_parser("geronimus", help="coefficients <-> matrix")
    p.add_argument("--direction", required=True, choices=("fwd", "inv"))
    p.add_argument("--variant", required=True,
                   choices=("e", "o", "+", "-"))
    _add_common(p)

    p = sub.add_parser("szego-map", help="circle <-> line weight tables")
    p.add_argument("--direction", required=True, choices=("fwd", "inv"))
    p.add_argument("--variant", required=True,
                   choices=("e", "o", "+", "-"))
    _add_common(p)

    p = sub.add_parser("commute", help="insert or delete an eigenvalue")
    p.add_argument("op", choices=("add", "remove"))
    p.add_argument("--E", type=float, required=True)
    p.add_argument("--gamma", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("asymptotics", help="solution families at an "
                       "energy outside the essential spectrum's interior")
    p.add_argument("--E", type=float, required=True)
    p.add_argument("--K", type=int, default=None, help="window length")
    p.add_argument("--json", action="store_true",
                   help="emit JSON instead of the default CSV")
    _add_common(p)

    p = sub.add_parser("m-function", help="evaluate m(z)")
    p.add_argument("--at", required=True,
                   help="evaluation point RE or RE,IM")
    _add_common(p)

    p = sub.add_parser("edges", help="classify m(+-2)")
    p.add_argument("--method", default="extrapolated-limit",
                   choices=("extrapolated-limit", "closed-form-tail"))
    _add_common(p)

    p = sub.add_parser("eigs", help="eigenvalues outside [-2, 2]")
    _add_common(p)

    return parser


def _read_json(path):
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text) if text.strip() else {}


def _write(args, text):
    if args.output == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(args.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _tol_overrides(args):
    fields = {}
    for name in _TOL_FLAGS:
        val = getattr(args, name, None)
        if val is not None:
            fields[name] = int(val) if name in ("grid_size", "window_K") \
                else val
    return TolOverrides(**fields)


def _matrix_in(doc):
    return MatrixIn(a=doc.get("a", []), b=doc.get("b", []),
                    tail_bound=doc.get("tail_bound", 0.0))


def _csv(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join("%.17g" % x if isinstance(x, float)
                              else str(x) for x in row))
    return "\n".join(lines)


def _run(args):
    tol = _tol_overrides(args)
    doc = _read_json(args.input)

    if args.command == "check":
        req = CheckRequest(direction=args.direction,
                           matrix=_matrix_in(doc) if "a" in doc
                           or "b" in doc else None,
                           alpha=doc.get("alpha"),
                           variant=args.variant or doc.get("variant"),
                           tol=tol)
        resp = check_endpoint(req)
        code = {"pass": 0, "inconclusive": 2}.get(resp.status, 1)
        return json.dumps(resp.report, indent=2, default=str), code

    if args.command == "geronimus":
        req = GeronimusRequest(direction=args.direction,
                               variant=args.variant,
                               alpha=doc.get("alpha"),
                               matrix=_matrix_in(doc) if "a" in doc
                               or "b" in doc else None,
                               tol=tol)
        resp = geronimus_endpoint(req)
        if args.csv:
            if resp.matrix is not None:
                m = resp.matrix
                n = max(len(m.a), len(m.b))
                rows = [(i + 1,
                         m.a[i] if i < len(m.a) else 1.0,
                         m.b[i] if i < len(m.b) else 0.0)
                        for i in range(n)]
                return _csv(("n", "a", "b"), rows), 0
            rows = list(enumerate(resp.alpha))
            return _csv(("n", "alpha"), rows), 0
        return json.dumps(resp.model_dump(), indent=2), 0

    if args.command == "szego-map":
        req = SzegoMapRequest(direction=args.direction,
                              variant=args.variant,
                              alpha=doc.get("alpha"),
                              x=doc.get("x"), v=doc.get("v"), tol=tol)
        resp = szego_map_endpoint(req)
        if args.csv:
            if resp.x is not None:
                return _csv(("x", "v"), list(zip(resp.x, resp.v))), 0
            return _csv(("theta", "w"),
                        list(zip(resp.theta, resp.w))), 0
        return json.dumps(resp.model_dump(), indent=2), 0

    if args.command == "commute":
        req = CommuteRequest(matrix=_matrix_in(doc), op=args.op,
                             E=args.E, gamma=args.gamma, tol=tol)
        resp = commute_endpoint(req)
        return json.dumps(resp.model_dump(), indent=2), 0

    if args.command == "asymptotics":
        req = AsymptoticsRequest(matrix=_matrix_in(doc), E=args.E,
                                 K=args.K, tol=tol)
        resp = asymptotics_endpoint(req)
        if args.json:
            return json.dumps(resp.model_dump(), indent=2), 0
        rows = list(zip(resp.k, resp.psi_s, resp.psi_b, resp.ratio,
                        resp.residual))
        return _csv(("k", "psi_s", "psi_b", "ratio", "residual"),
                    rows), 0

    if args.command == "m-function":
        parts = args.at.split(",")
        z_re = float(parts[0])
        z_im = float(parts[1]) if len(parts) > 1 else 0.0
        req = MFunctionRequest(matrix=_matrix_in(doc), z_re=z_re,
                               z_im=z_im)
        resp = m_function_endpoint(req)
        return json.dumps(resp.model_dump(), indent=2), 0

    if args.command == "edges":
        req = EdgesRequest(matrix=_matrix_in(doc), method=args.method,
                           tol=tol)
        resp = edges_endpoint(req)
        return json.dumps(resp.model_dump(), indent=2), 0

    if args.command == "eigs":
        req = EigsRequest(matrix=_matrix_in(doc), tol=tol)
        resp = eigs_endpoint(req)
        if args.csv:
            rows = list(enumerate(resp.eigenvalues))
            return _csv(("i", "E"), rows), 0
        return json.dumps(resp.model_dump(), indent=2), 0

    raise ValueError("unknown command %r" % args.command)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        text, code = _run(args)
    except HTTPException as exc:
        print("error: %s" % exc.detail, file=sys.stderr)
        return 1
    except (ValueError, RuntimeError, OSError,
            json.JSONDecodeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    _write(args, text)
    return code


if __name__ == "__main__":
    sys.exit(main())
