"""Command-line front end: curve listings, intersections, expansions, verifiers and the pairing cache."""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, TextIO

from ..coinv.divisor import CoinvariantDivisor, intersect_fcurve, psi_functional, psi_value
from ..combinat.fcurves import FamilyKind, FCurve, check_ambient, curve_family, enum_fcurves
from ..divisors.classes import CurveFunctional, boundary_delta, boundary_value, check_boundary_subset, expand
from ..divisors.pairing import dumps_pairing
from ..engine.session import VERIFIERS, VerificationSession, default_suite
from ..errors import (
    AmbientMismatchError,
    CertificateError,
    InvalidAmbientError,
    InvalidArgumentError,
    MznError,
    ResourceLimitError,
    SearchBudgetExceeded,
)
from ..engine.config import OUTPUT_FORMATS, Config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CONSISTENCY = 3


def parse_labels(text: str) -> List[int]:
    """Parse a comma-separated label list such as `1,2,3`."""
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise InvalidArgumentError(f"Malformed label list: {text!r}")


def parse_curve(text: str, n: int) -> FCurve:
    curve = FCurve.parse(text)
    if curve.n != n:
        raise AmbientMismatchError(f"Curve {text} lives on M_0,{curve.n}, not M_0,{n}")
    return curve


def named_functional(text: str, n: int, session: VerificationSession) -> CurveFunctional:
    """
    Turn `psi:i`, `delta:S` or `D[m]:a1,...,an` into a functional on the F-curves of M_0,n.
    """
    text = text.strip()
    if text.startswith("psi:"):
        i = parse_labels(text[4:])
        if len(i) != 1:
            raise InvalidArgumentError(f"psi takes one label, got {text!r}")
        return CurveFunctional.from_mapping(n, psi_functional(n, i[0]))
    if text.startswith("delta:"):
        return boundary_delta(n, parse_labels(text[6:]), session.pairing(n))
    divisor = CoinvariantDivisor.parse(text)
    if divisor.n != n:
        raise AmbientMismatchError(f"Divisor {text} lives on M_0,{divisor.n}, not M_0,{n}")
    return CurveFunctional(n, tuple(intersect_fcurve(divisor, curve) for curve in enum_fcurves(n)))


def cmd_fcurves(args, session: VerificationSession, out: TextIO) -> int:
    n = check_ambient(args.n)
    if n > session.config.n_ceiling:
        raise ResourceLimitError(f"n={n} exceeds the configured ceiling {session.config.n_ceiling}")
    if args.filter:
        curves = curve_family(
            n,
            args.filter,
            S=parse_labels(args.S) if args.S else None,
            T=parse_labels(args.T) if args.T else None,
            i=args.i,
            s=args.s,
            t=args.t,
        )
    else:
        curves = enum_fcurves(n)

    encoded = [curve.encode() for curve in curves]
    if session.config.output_format == "json":
        print(json.dumps(encoded), file=out)
    else:
        for line in encoded:
            print(line, file=out)
    return EXIT_OK


def cmd_intersect(args, session: VerificationSession, out: TextIO) -> int:
    n = check_ambient(args.n)
    curve = parse_curve(args.curve, n)
    text = args.divisor.strip()
    if text.startswith("psi:"):
        labels = parse_labels(text[4:])
        if len(labels) != 1 or not 1 <= labels[0] <= n:
            raise InvalidArgumentError(f"psi takes one label in 1..{n}, got {text!r}")
        value = psi_value(curve, labels[0])
    elif text.startswith("delta:"):
        value = boundary_value(curve, check_boundary_subset(n, parse_labels(text[6:])))
    else:
        divisor = CoinvariantDivisor.parse(text)
        if divisor.n != n:
            raise AmbientMismatchError(f"Divisor {text} lives on M_0,{divisor.n}, not M_0,{n}")
        value = intersect_fcurve(divisor, curve)

    if session.config.output_format == "json":
        print(json.dumps({"divisor": text, "curve": curve.encode(), "value": value}), file=out)
    else:
        print(value, file=out)
    return EXIT_OK


def cmd_expand(args, session: VerificationSession, out: TextIO) -> int:
    n = check_ambient(args.n)
    if args.functional:
        try:
            payload = json.loads(Path(args.functional).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidArgumentError(f"Cannot read functional file {args.functional}: {exc}")
        functional = CurveFunctional.from_json(payload)
        if functional.n != n:
            raise AmbientMismatchError(f"Functional lives on M_0,{functional.n}, not M_0,{n}")
    elif args.divisor:
        functional = named_functional(args.divisor, n, session)
    else:
        raise InvalidArgumentError("expand needs --divisor or --functional")

    result = expand(functional, session.pairing(n))
    if result is None:
        print("not-realizable", file=out)
        return EXIT_FAIL
    print(result.dumps(), file=out)
    return EXIT_OK


def _verify_params(args) -> Dict:
    params = {}
    for name in ("i", "j", "part", "m_max", "s", "t", "samples", "seed"):
        value = getattr(args, name, None)
        if value is not None:
            params[name] = value
    if args.S is not None:
        params["S"] = parse_labels(args.S)
    if args.T is not None:
        params["T"] = parse_labels(args.T)
    if args.curves is not None:
        params["curves"] = [FCurve.parse(text, args.n) for text in args.curves.split(";") if text.strip()]
    return params


def cmd_verify(args, session: VerificationSession, out: TextIO) -> int:
    report = session.run(args.theorem, check_ambient(args.n), **_verify_params(args))
    print(report.dumps(), file=out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_pairing(args, session: VerificationSession, out: TextIO) -> int:
    text = dumps_pairing(session.pairing(check_ambient(args.n)))
    if args.output:
        Path(args.output).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_suite(args, session: VerificationSession, out: TextIO) -> int:
    reports = session.run_many(default_suite(args.n))
    frame = session.summary(reports)
    fmt = session.config.output_format
    if fmt == "json":
        print(json.dumps([report.to_json() for report in reports], indent=2), file=out)
    elif fmt == "csv":
        out.write(frame.to_csv(index=False))
    else:
        print(frame.to_string(index=False), file=out)
    return EXIT_OK if all(report.passed for report in reports) else EXIT_FAIL


COMMANDS: Dict[str, Callable] = {
    "fcurves": cmd_fcurves,
    "intersect": cmd_intersect,
    "expand": cmd_expand,
    "verify": cmd_verify,
    "pairing": cmd_pairing,
    "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mzn-verify",
        allow_abbrev=False,
        description="Exact intersection numbers of coinvariant divisors with F-curves on M_0,n",
    )
    parser.add_argument("--cache-dir", type=str, help="Pairing-matrix cache directory (MZN_CACHE_DIR overrides)")
    parser.add_argument("--n-ceiling", type=int, help="Largest n allowed for pairing-matrix work (default 10)")
    parser.add_argument("--threads", type=int, help="Worker threads (default 1)")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, help="Output format (default plain)")
    parser.add_argument("--no-cache", action="store_true", help="Neither read nor write the disk cache")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    fcurves = sub.add_parser("fcurves", help="List F-curves")
    fcurves.add_argument("--n", type=int, required=True)
    fcurves.add_argument("--filter", choices=[kind.value for kind in FamilyKind])
    fcurves.add_argument("--S", type=str, help="Labels for the st family, e.g. 1,2,3,4,5")
    fcurves.add_argument("--T", type=str, help="Labels for the st family")
    fcurves.add_argument("--i", type=int, help="Label for the proj family")
    fcurves.add_argument("--s", type=int, help="First label for the pair family")
    fcurves.add_argument("--t", type=int, help="Second label for the pair family")

    intersect = sub.add_parser("intersect", help="Intersect a divisor with an F-curve")
    intersect.add_argument("--n", type=int, required=True)
    intersect.add_argument("--divisor", required=True, help="D[m]:a1,...,an, psi:i or delta:S")
    intersect.add_argument("--curve", required=True, help="Curve as I|J|K|L, e.g. 1|2,3|4|5")

    expand_cmd = sub.add_parser("expand", help="Expand a functional in the sl2 basis")
    expand_cmd.add_argument("--n", type=int, required=True)
    expand_cmd.add_argument("--divisor", help="psi:i, delta:S or D[m]:a1,...,an")
    expand_cmd.add_argument("--functional", help="JSON file {n, values: [{curve, value}]}")

    verify = sub.add_parser("verify", help="Run a theorem verifier and print its report")
    verify.add_argument("theorem", choices=list(VERIFIERS))
    verify.add_argument("--n", type=int, required=True)
    verify.add_argument("--i", type=int)
    verify.add_argument("--j", type=int)
    verify.add_argument("--S", type=str)
    verify.add_argument("--T", type=str)
    verify.add_argument("--s", type=int)
    verify.add_argument("--t", type=int)
    verify.add_argument("--part", type=int, choices=[1, 2])
    verify.add_argument("--m-max", dest="m_max", type=int)
    verify.add_argument("--curves", type=str, help="Semicolon-separated curves for knu-rank")
    verify.add_argument("--samples", type=int)
    verify.add_argument("--seed", type=int)

    pairing = sub.add_parser("pairing", help="Build (or load) and export the pairing matrix")
    pairing.add_argument("--n", type=int, required=True)
    pairing.add_argument("--output", help="Write to this file instead of stdout")

    suite = sub.add_parser("suite", help="Run the standard verifier batch for several n")
    suite.add_argument("--n", type=int, nargs="+", required=True)
    return parser


def main(argv: Optional[List[str]] = None, environ=None, out: Optional[TextIO] = None) -> int:
    """
    Entry point.

    Returns:
        0 pass, 1 mathematical fail, 2 usage error, 3 consistency error
    """
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        config = Config.from_args(args, environ)
        config.check_cache_writable()
        session = VerificationSession(config)
        return COMMANDS[args.command](args, session, out)
    except (AmbientMismatchError, CertificateError, SearchBudgetExceeded) as exc:
        logger.error("%s", exc)
        return EXIT_CONSISTENCY
    except (InvalidAmbientError, InvalidArgumentError, ResourceLimitError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except MznError as exc:
        logger.error("%s", exc)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
