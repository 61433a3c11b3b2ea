"""Command-line front end.

A thin client over the certification service: each subcommand builds the
same request models the HTTP endpoints accept, dispatches them (in-process
by default, or to a remote server with ``--url``), and prints the response
as a JSON report with every float at 17 significant digits.

Exit codes: 0 verdict-true (or plain success), 1 verdict-false, 2 parse or
input validation, 3 eigensolver non-convergence, 4 singular system,
5 invalid region parameters, 6 base certificate failed, 7 solvability
(Krein) condition violated.
"""

import argparse
import sys

from . import __version__, matrixio
from .matrixio import ParseError
from .service import schemas
from .service.handlers import ERROR_CODES, ServiceError


class LocalClient:
    """In-process dispatch straight to the service handlers."""

    def post(self, path, request, response_model):
        from .service import handlers
        fn = {"/spectrum": handlers.handle_spectrum,
              "/certify": handlers.handle_certify,
              "/perturb": handlers.handle_perturb,
              "/solve": handlers.handle_solve}[path]
        return fn(request)


class HttpClient:
    """Remote dispatch to a running specloc service."""

    def __init__(self, base_url):
        import httpx
        self._client = httpx.Client(base_url=base_url, timeout=600.0)

    def post(self, path, request, response_model):
        resp = self._client.post(path, json=request.model_dump())
        if resp.status_code >= 400:
            try:
                body = resp.json()
            except ValueError:
                body = {}
            code = body.get("code", "parse")
            if code not in ERROR_CODES:
                code = "invalid_input"  # e.g. FastAPI validation detail bodies
            extra = {k: v for k, v in body.items() if k not in ("code", "message")}
            raise ServiceError(code, body.get("message", resp.text), **extra)
        return response_model.model_validate(resp.json())


def _client(args):
    return HttpClient(args.url) if args.url else LocalClient()


def _matrix_payload(path):
    return schemas.MatrixPayload.from_array(matrixio.load_matrix(path))


def _region_payload(args):
    return schemas.RegionPayload(kind=args.region, a=args.a, b=args.b, p=args.p)


def _print_report(argv, body):
    report = {"command": list(argv)}
    report.update(body)
    sys.stdout.write(matrixio.dumps_json17(report) + "\n")


def _verdict_exit(verdict):
    if verdict is None:
        return 0
    return 0 if verdict else 1


def cmd_spectrum(args, argv):
    req = schemas.SpectrumRequest(matrix=_matrix_payload(args.matrix))
    resp = _client(args).post("/spectrum", req, schemas.SpectrumResponse)
    _print_report(argv, resp.model_dump())
    return 0


def cmd_certify(args, argv):
    req = schemas.CertifyRequest(
        matrix=_matrix_payload(args.matrix),
        region=_region_payload(args),
        c=_matrix_payload(args.c_path) if args.c_path else None,
        oracle=args.oracle)
    resp = _client(args).post("/certify", req, schemas.CertifyResponse)
    _print_report(argv, resp.model_dump())
    return _verdict_exit(resp.verdict)


def cmd_perturb(args, argv):
    if args.matrix_b is None and not args.radius_only:
        raise ParseError("matrix B is required unless --radius-only is given")
    req = schemas.PerturbRequest(
        matrix_a=_matrix_payload(args.matrix_a),
        region=_region_payload(args),
        matrix_b=_matrix_payload(args.matrix_b) if args.matrix_b else None,
        radius_only=args.radius_only)
    resp = _client(args).post("/perturb", req, schemas.PerturbResponse)
    _print_report(argv, resp.model_dump())
    return _verdict_exit(resp.verdict)


def cmd_solve(args, argv):
    if (args.region is None) == (args.coeffs is None):
        raise ParseError("give exactly one of --region or --coeffs")
    region = coefficients = None
    matrix_b = None
    if args.region is not None:
        region = _region_payload(args)
    else:
        form, b = matrixio.load_coefficients(args.coeffs)
        coefficients = schemas.CoefficientsPayload(
            coeffs=[[(float(v.real), float(v.imag)) for v in row]
                    for row in form.coeffs],
            rhs_sign=form.rhs_sign)
        if b is not None:
            matrix_b = schemas.MatrixPayload.from_array(b)
    req = schemas.SolveRequest(
        matrix_a=_matrix_payload(args.matrix_a),
        matrix_y=_matrix_payload(args.matrix_y),
        region=region,
        coefficients=coefficients,
        matrix_b=matrix_b,
        method=args.method,
        quadrature_points=args.q)
    resp = _client(args).post("/solve", req, schemas.SolveResponse)
    body = resp.model_dump()
    if args.out:
        matrixio.save_matrix(resp.h.to_array(), args.out)
        body["h_path"] = args.out
    _print_report(argv, body)
    return 0


def cmd_serve(args, _argv):
    import uvicorn

    from .service.app import app
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _add_region_flags(parser, required=False):
    parser.add_argument("--region", required=required,
                        choices=["halfplane", "disk", "ellipse-in", "ellipse-out",
                                 "parabola-in", "parabola-out"],
                        help="spectral target region")
    parser.add_argument("--a", type=float, default=None, help="ellipse semi-axis a (a > b)")
    parser.add_argument("--b", type=float, default=None, help="ellipse semi-axis b")
    parser.add_argument("--p", type=float, default=None, help="parabola parameter p > 0")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="specloc",
        description="Certify matrix spectrum localization via Lyapunov-type equations.")
    parser.add_argument("--version", action="version", version=f"specloc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("spectrum", help="eigenvalues of a matrix file")
    ps.add_argument("matrix", help="matrix file (JSON rows/cols/entries)")
    ps.add_argument("--url", default=None, help="remote service URL (default: in-process)")
    ps.set_defaults(run=cmd_spectrum)

    pc = sub.add_parser("certify", help="localization certificate for a region")
    pc.add_argument("matrix", help="matrix file for A")
    _add_region_flags(pc, required=True)
    pc.add_argument("--C", dest="c_path", default=None,
                    help="matrix file for C (default: identity)")
    pc.add_argument("--oracle", action="store_true",
                    help="cross-check the verdict against the eigenvalue oracle")
    pc.add_argument("--url", default=None)
    pc.set_defaults(run=cmd_certify)

    pp = sub.add_parser("perturb", help="perturbation condition / radius for a region")
    pp.add_argument("matrix_a", help="matrix file for A")
    pp.add_argument("matrix_b", nargs="?", default=None,
                    help="matrix file for the perturbation B")
    _add_region_flags(pp, required=True)
    pp.add_argument("--radius-only", action="store_true",
                    help="skip B and print the norm radius alone (ellipse regions)")
    pp.add_argument("--url", default=None)
    pp.set_defaults(run=cmd_perturb)

    pv = sub.add_parser("solve", help="raw generalized Lyapunov solve")
    pv.add_argument("matrix_a", help="matrix file for A")
    pv.add_argument("matrix_y", help="matrix file for the right-hand side Y")
    _add_region_flags(pv)
    pv.add_argument("--coeffs", default=None,
                    help="coefficient file (grid, rhs_sign, optional b_path; default B = A*)")
    pv.add_argument("--method", choices=["kron", "contour"], default="kron")
    pv.add_argument("--Q", dest="q", type=int, default=64,
                    help="quadrature nodes per contour (contour method)")
    pv.add_argument("--out", default=None, help="write H to this matrix file")
    pv.add_argument("--url", default=None)
    pv.set_defaults(run=cmd_solve)

    pr = sub.add_parser("serve", help="run the HTTP service")
    pr.add_argument("--host", default="127.0.0.1")
    pr.add_argument("--port", type=int, default=8000)
    pr.set_defaults(run=cmd_serve)
    return parser


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args, ["specloc"] + argv)
    except ParseError as exc:
        _print_report(["specloc"] + argv, {"error": {"code": "parse", "message": str(exc)}})
        return 2
    except ServiceError as exc:
        _print_report(["specloc"] + argv, {"error": exc.payload()})
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
