"""Command-line entry points.

Subcommands: ``search`` (find an admissible tuple and write its evidence),
``build`` (emit torsor equations plus membership/obstruction certificates
for a chosen twist), ``verify`` (re-check a certificate file), and
``paper-example`` (reproduce the built-in worked example against its golden
equations).  Certificates go to --out or stdout; progress goes to stderr.

Exit codes: 0 success, 1 parameter error, 2 search exhaustion,
3 certificate failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import difflib
import json
import sys

from . import __version__
from .certs import (
    PAPER_EXAMPLE,
    build_build_payload,
    build_paper_example_payload,
    build_search_payload,
    dump_document,
    load_golden_equations,
    make_document,
    verify_document,
)
from .errors import (
    CertificateFailure,
    ParameterError,
    SearchExhausted,
    ShacertError,
)
from .search import DEFAULT_LIMIT, SearchParams, search_tuple

EXIT_OK = 0
EXIT_PARAMETER = 1
EXIT_EXHAUSTED = 2
EXIT_CERTIFICATE = 3
EXIT_IO = 4


class _CliExit(Exception):
    def __init__(self, code: int, message: str | None = None):
        super().__init__(message or "")
        self.code = code
        self.message = message


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is taken by search exhaustion.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _CliExit(EXIT_PARAMETER, f"{self.prog}: error: {message}")


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise ParameterError(f"expected a comma-separated list of integers, got {text!r}")


def _add_search_flags(sub):
    sub.add_argument("--p", type=int, required=True, help="odd prime exponent, > 3")
    sub.add_argument("--u", type=int, required=True, help="first curve parameter (3 must not divide it)")
    sub.add_argument("--v", type=int, required=True, help="second curve parameter (3 must not divide it)")
    sub.add_argument("--t", type=int, required=True, help="number of tuple primes")
    sub.add_argument("--start", type=int, default=2, help="lowest candidate value (default 2)")
    sub.add_argument("--limit", type=int, default=DEFAULT_LIMIT,
                     help="highest candidate value scanned before giving up")


def _add_output_flags(sub):
    sub.add_argument("--out", help="write the certificate to this path (default: stdout)")
    sub.add_argument("--quiet", action="store_true", help="suppress progress messages")


def _emit(payload: dict, out: str | None, quiet: bool, note: str | None = None) -> None:
    text = dump_document(make_document(payload, note))
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        if not quiet:
            print(f"wrote {out}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _say(quiet: bool, message: str) -> None:
    if not quiet:
        print(message, file=sys.stderr)


def cmd_search(args) -> int:
    params = SearchParams(args.p, args.u, args.v, args.t, args.start, args.limit)
    tup = search_tuple(params)
    _say(args.quiet, f"admissible tuple: {', '.join(map(str, tup.primes))}")
    _emit(build_search_payload(tup), args.out, args.quiet)
    return EXIT_OK


def cmd_build(args) -> int:
    if args.t < 1:
        raise ParameterError("build needs a tuple of length >= 1 (got --t {})".format(args.t))
    params = SearchParams(args.p, args.u, args.v, args.t, args.start, args.limit)
    subset = _int_list(args.subset) if args.subset else []
    exponents = _int_list(args.exponents) if args.exponents else [1] * len(subset)
    tup = search_tuple(params)
    _say(args.quiet, f"admissible tuple: {', '.join(map(str, tup.primes))}")
    payload = build_build_payload(tup, subset, exponents)
    conclusion = payload["conclusion"]
    _say(args.quiet, f"twist {payload['twist']['value']}: {conclusion['reason']}")
    _emit(payload, args.out, args.quiet)
    if not payload["membership"]["passed"]:
        raise CertificateFailure("local membership failed; see the certificate")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        with open(args.path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _CliExit(EXIT_IO, f"cannot read {args.path}: {exc}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFailure(f"{args.path} is not valid JSON: {exc}")
    failures = verify_document(doc)
    if failures:
        for failure in failures:
            print(f"FAIL {failure}", file=sys.stderr)
        raise CertificateFailure(f"{len(failures)} re-check(s) failed")
    _say(args.quiet, f"{args.path}: all re-checks passed")
    return EXIT_OK


def cmd_paper_example(args) -> int:
    payload = build_paper_example_payload()
    checks = [
        ("tuple conditions", all(e["ok"] for e in payload["tuple"]["evidence"])),
        ("equations match golden rendering", payload["golden_match"]),
        ("everywhere-local membership", payload["membership"]["passed"]),
        ("global obstruction infeasible", payload["obstruction"]["verdict"] == "infeasible"),
        ("order-p class certified", payload["conclusion"]["order_p_certified"]),
        (f"rank bound t-1 = {len(PAPER_EXAMPLE['primes']) - 1}",
         payload["sha_bound"].get("established", False)),
    ]
    for label, ok in checks:
        _say(args.quiet, f"{'PASS' if ok else 'FAIL'} {label}")
    if args.out:
        _emit(payload, args.out, args.quiet)
    if not payload["golden_match"]:
        diff = "\n".join(
            difflib.unified_diff(
                load_golden_equations().splitlines(),
                payload["equations"]["lines"],
                fromfile="golden",
                tofile="emitted",
                lineterm="",
            )
        )
        raise CertificateFailure(f"emitted equations differ from golden:\n{diff}")
    if not all(ok for _, ok in checks):
        raise CertificateFailure("paper example checks failed")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="shacert", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"shacert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_search = sub.add_parser("search", help="find an admissible prime tuple")
    _add_search_flags(p_search)
    _add_output_flags(p_search)
    p_search.set_defaults(func=cmd_search)

    p_build = sub.add_parser("build", help="emit torsor equations and certificates for a twist")
    _add_search_flags(p_build)
    p_build.add_argument("--subset", default="",
                         help="comma-separated 1-based tuple indices dividing the twist (may be empty)")
    p_build.add_argument("--exponents", default="",
                         help="comma-separated exponents in [1, p-1], one per subset index (default: all 1)")
    _add_output_flags(p_build)
    p_build.set_defaults(func=cmd_build)

    p_verify = sub.add_parser("verify", help="re-check a certificate file")
    p_verify.add_argument("path", help="certificate file to verify")
    p_verify.add_argument("--quiet", action="store_true", help="suppress progress messages")
    p_verify.set_defaults(func=cmd_verify)

    p_example = sub.add_parser("paper-example", help="reproduce the built-in worked example")
    _add_output_flags(p_example)
    p_example.set_defaults(func=cmd_paper_example)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _CliExit as exc:
        if exc.message:
            print(exc.message, file=sys.stderr)
        return exc.code
    except (ParameterError, ValueError) as exc:
        print(f"shacert: parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except SearchExhausted as exc:
        print(f"shacert: search exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except CertificateFailure as exc:
        print(f"shacert: certificate failure: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except ShacertError as exc:
        print(f"shacert: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except OSError as exc:
        print(f"shacert: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
