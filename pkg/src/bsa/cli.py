"""Command line front end.

Every subcommand is a thin HTTP client: it packages its arguments into a
JSON request, posts it to the service (in-process by default, or a remote
server via --server), and prints the response as canonical JSON bytes.

Exit codes: 0 success, 1 well-formed input but no certificate (for example
an antipodal search that found nothing), 2 invalid input, 3 numerical
failure inside the solver.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import httpx

from .jsonio import dumps

EXIT_OK = 0
EXIT_UNCERTIFIED = 1
EXIT_BAD_INPUT = 2
EXIT_NUMERICAL = 3


def _read_doc(value):
    """Parse a JSON document given inline, as a path, or '-' for stdin."""
    if value == "-":
        text = sys.stdin.read()
    elif value.lstrip().startswith("{"):
        text = value
    else:
        try:
            with open(value) as fh:
                text = fh.read()
        except OSError as exc:
            raise SystemExit(f"cannot read {value}: {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        print(dumps({"error": "BadJson", "detail": str(exc)}), file=sys.stderr)
        raise SystemExit(EXIT_BAD_INPUT)


def _default_seed():
    raw = os.environ.get("BSA_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"BSA_SEED must be an integer, got {raw!r}")


def _client(server):
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app, raise_server_exceptions=False)


def _post(args, path, payload):
    try:
        with _client(args.server) as client:
            resp = client.post(path, json=payload)
    except httpx.HTTPError as exc:
        print(dumps({"error": "Transport", "detail": str(exc)}), file=sys.stderr)
        return None, EXIT_NUMERICAL
    if resp.status_code == 200:
        return resp.json(), EXIT_OK
    body = resp.json() if resp.headers.get("content-type", "").startswith(
        "application/json") else {"error": "Http", "detail": resp.text}
    print(dumps(body), file=sys.stderr)
    return None, EXIT_BAD_INPUT if resp.status_code == 422 else EXIT_NUMERICAL


def _emit(args, doc):
    text = json.dumps(doc, indent=2, sort_keys=True) if args.pretty else dumps(doc)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_certify(args):
    payload = {"set": _read_doc(args.set), "tol": args.tol}
    doc, code = _post(args, "/certify", payload)
    if doc is None:
        return code
    if args.emit_table:
        with open(args.emit_table, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["upper", "lower", "margin", "distance"])
            for row in doc["table"]:
                writer.writerow(
                    [row["upper"], row["lower"], row["margin"], row["distance"]]
                )
    _emit(args, doc)
    if not doc["verdict"]["valid"] or doc["report"]["d"] <= 0:
        return EXIT_UNCERTIFIED
    return EXIT_OK


def cmd_construct(args):
    payload = {"family": args.family, "seed": args.seed}
    if args.p is not None:
        payload["p"] = args.p if args.p == "inf" else float(args.p)
    if args.n is not None:
        payload["n"] = args.n
    if args.space is not None:
        payload["space"] = _read_doc(args.space)
    if args.input is not None:
        extra = _read_doc(args.input)
        payload.update({k: extra[k] for k in ("vectors", "functionals") if k in extra})
    doc, code = _post(args, "/construct", payload)
    if doc is None:
        return code
    _emit(args, doc)
    return EXIT_OK


def cmd_search(args):
    payload = {
        "space": _read_doc(args.space),
        "mode": args.mode,
        "count": args.count,
        "config": _read_doc(args.config) if args.config else {},
    }
    payload["config"].setdefault("seed", args.seed)
    doc, code = _post(args, "/search", payload)
    if doc is None:
        return code
    _emit(args, doc)
    return EXIT_OK if doc["certified"] else EXIT_UNCERTIFIED


def cmd_oracle(args):
    payload = {
        "set": _read_doc(args.set),
        "pair": [args.pair[0], args.pair[1]],
        "grid": args.grid,
    }
    doc, code = _post(args, "/oracle", payload)
    if doc is None:
        return code
    _emit(args, doc)
    return EXIT_OK


def cmd_validate(args):
    doc, code = _post(args, "/validate", {"space": _read_doc(args.space)})
    if doc is None:
        return code
    _emit(args, doc)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bsa",
        description="certificates of bounded separated antipodal point sets",
    )
    parser.add_argument("--server", default=None,
                        help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--pretty", action="store_true",
                       help="indent the JSON output")
        p.add_argument("--out", default=None, help="write output to a file")

    p = sub.add_parser("certify", help="certify a point set")
    p.add_argument("--set", required=True,
                   help="point set JSON (path, inline, or - for stdin)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--emit-table", default=None, metavar="CSV",
                   help="write per-pair margins and distances as CSV")
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("construct", help="build a named example family")
    p.add_argument("--family", required=True,
                   choices=["lp-basis", "summing", "auerbach", "strict-convex",
                            "plus-minus", "renorm-equilateral", "biorthogonal"])
    p.add_argument("--p", default=None, help="exponent for lp-basis (number or inf)")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--space", default=None, help="space JSON (path, inline, or -)")
    p.add_argument("--input", default=None,
                   help="extra JSON with vectors/functionals for biorthogonal")
    p.add_argument("--seed", type=int, default=_default_seed())
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", help="search for extremal point sets")
    p.add_argument("--space", required=True)
    p.add_argument("--mode", required=True, choices=["ka", "antipodal", "separated"])
    p.add_argument("--count", type=int, default=4)
    p.add_argument("--config", default=None, help="search config JSON")
    p.add_argument("--seed", type=int, default=_default_seed())
    common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("oracle", help="grid oracle margin for one pair")
    p.add_argument("--set", required=True)
    p.add_argument("--pair", nargs=2, type=int, required=True, metavar=("I", "J"))
    p.add_argument("--grid", type=int, default=360)
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("validate", help="validate and canonicalize a space")
    p.add_argument("--space", required=True)
    common(p)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
