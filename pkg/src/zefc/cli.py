"""Command-line front end.

Each subcommand builds the same request model the HTTP service accepts and
either calls the handler in process (default) or POSTs it to a running
service (`--server URL`).  Reports are canonical JSON (sorted keys), so
identical inputs and flags produce byte-identical output.

Exit codes: 0 success, 2 validation error, 3 verification failure,
4 cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from .errors import CapExceededError, InstanceFormatError, VerificationError
from .service import handlers, schemas

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_VERIFICATION = 3
EXIT_CAP = 4

_ENDPOINTS = {
    "graphs": ("/graphs", handlers.graphs_report, schemas.GraphsResponse),
    "entropy": ("/entropy", handlers.entropy_report, schemas.EntropyResponse),
    "bounds": ("/bounds", handlers.bounds_report, schemas.BoundsResponse),
    "region": ("/region", handlers.region_report, schemas.RegionResponse),
    "verify": ("/verify", handlers.verify_report, schemas.VerifyResponse),
    "simulate": ("/simulate", handlers.simulate_report, schemas.SimulateResponse),
    "check-relay": ("/check-relay", handlers.relay_report, schemas.RelayResponse),
}

_STATUS_EXITS = {400: EXIT_VALIDATION, 409: EXIT_VERIFICATION, 422: EXIT_CAP}


class RemoteError(Exception):
    def __init__(self, exit_code: int, detail: str):
        super().__init__(detail)
        self.exit_code = exit_code


def _call(name: str, request: Any, server: str | None) -> Any:
    endpoint, handler, response_model = _ENDPOINTS[name]
    if server is None:
        return handler(request)
    import httpx

    resp = httpx.post(server.rstrip("/") + endpoint, json=request.model_dump(), timeout=600.0)
    if resp.status_code != 200:
        detail = resp.text
        try:
            body = resp.json()
            detail = body.get("detail", detail)
        except ValueError:
            pass
        raise RemoteError(_STATUS_EXITS.get(resp.status_code, 1), str(detail))
    return response_model.model_validate(resp.json())


def _read_instance_doc(path: str) -> schemas.InstanceDoc:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: not valid JSON: {exc}") from exc
    try:
        return schemas.InstanceDoc.model_validate(raw)
    except ValueError as exc:
        raise InstanceFormatError(f"{path}: {exc}") from exc


def _read_scheme_doc(path: str) -> schemas.SchemeDoc:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: not valid JSON: {exc}") from exc
    try:
        return schemas.SchemeDoc.model_validate(raw)
    except ValueError as exc:
        raise InstanceFormatError(f"{path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _json_report(model: Any) -> str:
    return json.dumps(model.model_dump(), indent=2, sort_keys=True) + "\n"


def _solver(args: argparse.Namespace) -> schemas.SolverOptions:
    return schemas.SolverOptions(tol=args.tol, max_iter=args.max_iter)


def _cmd_graphs(args: argparse.Namespace) -> int:
    req = schemas.GraphsRequest(instance=_read_instance_doc(args.instance))
    resp = _call("graphs", req, args.server)
    if args.format == "json":
        _emit(_json_report(resp), args.out)
        return EXIT_OK
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    suffix = "dot" if args.format == "dot" else "edges"
    for doc in (resp.f_rook, resp.confusability_x, resp.confusability_y):
        content = doc.dot if args.format == "dot" else doc.edge_list
        (out_dir / f"{doc.name}.{suffix}").write_text(content, encoding="utf-8")
    return EXIT_OK


def _cmd_entropy(args: argparse.Namespace) -> int:
    req = schemas.EntropyRequest(
        instance=_read_instance_doc(args.instance),
        kind=args.kind,
        target=args.target,
        n=args.n,
        cap_vertices=args.cap_vertices,
        solver=_solver(args),
        record_trace=args.trace is not None,
    )
    resp = _call("entropy", req, args.server)
    if args.trace is not None and resp.trace is not None:
        lines = ["iter,objective_bits"]
        lines += [f"{i},{v!r}" for i, v in enumerate(resp.trace)]
        Path(args.trace).write_text("\n".join(lines) + "\n", encoding="utf-8")
    _emit(_json_report(resp), args.out)
    return EXIT_OK


def _cmd_bounds(args: argparse.Namespace) -> int:
    req = schemas.BoundsRequest(instance=_read_instance_doc(args.instance), solver=_solver(args))
    resp = _call("bounds", req, args.server)
    _emit(_json_report(resp), args.out)
    return EXIT_OK


def _cmd_region(args: argparse.Namespace) -> int:
    req = schemas.RegionRequest(
        instance=_read_instance_doc(args.instance),
        ns=list(range(1, args.n + 1)),
        solver=_solver(args),
    )
    resp = _call("region", req, args.server)
    if args.format == "csv":
        lines = ["n,r_a,r_b,r_c"]
        for n_key in sorted(resp.frontiers, key=int):
            for p in resp.frontiers[n_key]:
                lines.append(f"{n_key},{p.r_a!r},{p.r_b!r},{p.r_c!r}")
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(_json_report(resp), args.out)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    req = schemas.VerifyRequest(
        instance=_read_instance_doc(args.instance),
        scheme=_read_scheme_doc(args.scheme),
    )
    resp = _call("verify", req, args.server)
    _emit(_json_report(resp), args.out)
    return EXIT_OK if resp.zero_error else EXIT_VERIFICATION


def _cmd_simulate(args: argparse.Namespace) -> int:
    req = schemas.SimulateRequest(
        instance=_read_instance_doc(args.instance),
        scheme=_read_scheme_doc(args.scheme),
        blocks=args.blocks,
        seed=args.seed,
    )
    resp = _call("simulate", req, args.server)
    _emit(_json_report(resp), args.out)
    return EXIT_OK if resp.zero_error else EXIT_VERIFICATION


def _cmd_check_relay(args: argparse.Namespace) -> int:
    req = schemas.RelayRequest(
        instance=_read_instance_doc(args.instance),
        scheme=_read_scheme_doc(args.scheme),
    )
    resp = _call("check-relay", req, args.server)
    _emit(_json_report(resp), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zefc",
        description="Zero-error function computation over a relay: analysis toolkit",
    )
    parser.add_argument("--server", help="URL of a running service; default is in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, scheme: bool = False) -> None:
        p.add_argument("instance", help="path to the instance JSON document")
        if scheme:
            p.add_argument("--scheme", required=True, help="path to the scheme JSON document")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--tol", type=float, default=1e-10, help="solver tolerance")
        p.add_argument("--max-iter", type=int, default=10_000, help="solver iteration cap")

    p = sub.add_parser("graphs", help="support graph and confusability graphs")
    common(p)
    p.add_argument("--format", choices=["json", "dot", "edges"], default="json")
    p.set_defaults(func=_cmd_graphs)

    p = sub.add_parser("entropy", help="chromatic or graph entropy")
    p.add_argument("kind", choices=["chromatic", "graph"])
    common(p)
    p.add_argument("--target", choices=["joint", "x", "y"], default="joint")
    p.add_argument("--n", type=int, default=1, help="block length (chromatic only)")
    p.add_argument("--cap-vertices", type=int, default=16, help="exact-search vertex cap")
    p.add_argument("--trace", help="write per-iteration objective CSV here (graph only)")
    p.set_defaults(func=_cmd_entropy)

    p = sub.add_parser("bounds", help="inner and outer rate-region corners")
    common(p)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("region", help="corners plus finite-n frontiers")
    common(p)
    p.add_argument("--n", type=int, default=1, help="compute frontiers for 1..n")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=_cmd_region)

    p = sub.add_parser("verify", help="zero-error check of a scheme")
    common(p, scheme=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("simulate", help="exact and simulated rates of a scheme")
    common(p, scheme=True)
    p.add_argument("--blocks", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("check-relay", help="can the relay compute the function?")
    common(p, scheme=True)
    p.set_defaults(func=_cmd_check_relay)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InstanceFormatError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except CapExceededError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except RemoteError as exc:
        print(f"server error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
