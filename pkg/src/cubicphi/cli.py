"""Command line interface: ``cubicphi <command> ...`` or ``python3 -m cubicphi``.

Results go to stdout, diagnostics to stderr.  Exit status is 0 on success,
1 when a verification suite fails and 2 for usage or coverage errors.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import math
import re
import sys
from typing import Optional, Sequence

from . import forms, oracle
from .arith import factorize, is_fundamental, mirror
from .fields import CoverageError
from .series import phi_coefficients
from .sextic import count_sextic, required_coverage
from .tables import HEADER, TableFormatError, obtain_store

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_EXACT = re.compile(r"(?:(\d+)\*)?(\d+)(?:(\^|e|E)(\d+))?\Z")


class UsageError(Exception):
    pass


def parse_exact(text: str) -> int:
    """Exact positive integer from '1000', '10^12', '10e12' or '3*10^23'."""
    m = _EXACT.match(text.strip().replace("_", ""))
    if not m:
        raise argparse.ArgumentTypeError(f"not an exact integer: {text!r}")
    mult, base, op, exp = m.groups()
    if op is None:
        value = int(base)
    elif op == "^":
        value = int(base) ** int(exp)
    else:
        value = int(base) * 10 ** int(exp)
    return value * (int(mult) if mult else 1)


def parse_int(text: str) -> int:
    if not re.fullmatch(r"[+-]?\d+", text.strip()):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(text)


def parse_sign(text: str) -> int:
    if text in ("+", "pos", "1", "+1"):
        return 1
    if text in ("-", "neg", "-1"):
        return -1
    raise argparse.ArgumentTypeError(f"sign must be + or -, got {text!r}")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cubicphi", description="Cubic fields with given quadratic resolvent.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cubics", help="list cubic fields in a discriminant range")
    c.add_argument("--min", type=parse_exact, default=1)
    c.add_argument("--max", type=parse_exact, required=True)
    c.add_argument("--sign", type=parse_sign, required=True)
    c.add_argument("--table")
    c.add_argument("--format", choices=("tsv", "json"), default="tsv")
    c.add_argument("--workers", type=int, default=1)

    ph = sub.add_parser("phi", help="coefficients N_f of the series for D")
    ph.add_argument("--d", type=parse_int, required=True)
    ph.add_argument("--flimit", type=parse_exact, required=True)
    ph.add_argument("--table")
    ph.add_argument("--format", choices=("csv", "json"), default="csv")

    s = sub.add_parser("sextic", help="count S3-sextic fields below a bound")
    s.add_argument("--bound", type=parse_exact, required=True)
    s.add_argument("--sign", type=parse_sign, required=True)
    s.add_argument("--table")
    s.add_argument("--breakdown", action="store_true")
    s.add_argument("--workers", type=int, default=1)

    v = sub.add_parser("verify", help="compare against the brute-force oracle")
    v.add_argument("--suite", choices=("phi", "sextic", "forms", "valuations", "all"), required=True)
    v.add_argument("--bound", type=parse_exact, required=True)
    return p


def _cmd_cubics(args, out) -> int:
    if not 1 <= args.min <= args.max:
        raise UsageError("need 1 <= --min <= --max")
    kw = {"max_pos": args.max} if args.sign > 0 else {"max_neg": args.max}
    store = obtain_store(**kw, table=args.table, workers=args.workers)
    if not store.covers(args.sign * args.max):
        raise CoverageError(f"table does not cover |disc| <= {args.max} of sign {args.sign:+d}")
    rows = [E for E in store if (E.discriminant > 0) == (args.sign > 0) and args.min <= abs(E.discriminant) <= args.max]
    if args.format == "json":
        json.dump([{"disc": E.discriminant, "form": list(E.form), "poly": list(E.poly)} for E in rows], out)
        out.write("\n")
    else:
        out.write(HEADER + "\n")
        for E in rows:
            out.write("\t".join(str(x) for x in (E.discriminant, *E.form)) + "\n")
    return EXIT_OK


def _cmd_phi(args, out) -> int:
    D, F = args.d, args.flimit
    if D == 0 or not is_fundamental(D):
        raise UsageError(f"{D} is not a fundamental discriminant")
    if F < 1:
        raise UsageError("--flimit must be >= 1")
    need = max(abs(mirror(D)), 27 * abs(D))
    # D* and -27D have the sign opposite to D
    kw = {"max_neg": need} if D > 0 else {"max_pos": need}
    store = obtain_store(**kw, table=args.table)
    series = phi_coefficients(D, F, store)
    counts = series.counts()
    if args.format == "json":
        json.dump({"D": D, "flimit": F, "scale": series.scale,
                   "rows": [{"f": f, "N": n} for f, n in enumerate(counts, 1)]}, out)
        out.write("\n")
    else:
        out.write("f,N\n")
        for f, n in enumerate(counts, 1):
            out.write(f"{f},{n}\n")
    return EXIT_OK


def _cmd_sextic(args, out) -> int:
    X, sign = args.bound, args.sign
    if X < 1:
        raise UsageError("--bound must be >= 1")
    need = required_coverage(X, sign)
    store = obtain_store(max_pos=need[1], max_neg=need[-1], table=args.table, workers=args.workers)
    tally = count_sextic(X, sign, store, breakdown=args.breakdown, workers=args.workers)
    out.write(f"{tally.total}\n")
    if args.breakdown:
        out.write("D,count\n")
        for D, n in tally.breakdown.items():
            out.write(f"{D},{n}\n")
    return EXIT_OK


# --- verification suites ---

def _suite_forms(B, say):
    ok = True
    for sign in (1, -1):
        fast = [tuple(F) for F in forms.enumerate_classes(forms.EnumerationRequest(B, sign))]
        slow = [tuple(F) for F in oracle.hunter_enumerate(B, sign)]
        rep = oracle.compare_multisets(f"forms: enumeration vs Hunter search, sign {sign:+d}, |disc| <= {B} ({len(slow)} fields)", slow, fast)
        say(rep.line())
        ok &= rep.passed
    return ok


def _suite_phi(B, say):
    ok = True
    Dmax = min(500, B)
    store = obtain_store(max_pos=27 * Dmax, max_neg=27 * Dmax)
    for sign in (1, -1):
        counts = oracle.field_counts(B, sign)
        bad, checked = [], 0
        for n in range(1, Dmax + 1):
            D = sign * n
            if not is_fundamental(D):
                continue
            F = math.isqrt(B // n)
            if F < 1:
                continue
            got = phi_coefficients(D, F, store).counts()
            want = [counts.get(D * f * f, 0) for f in range(1, F + 1)]
            if D == 1:
                got, want = got[1:], want[1:]
            checked += len(want)
            if got != want:
                bad.append(D)
        rep = oracle.OracleReport(f"phi: series vs Hunter counts, sign {sign:+d}, |D| <= {Dmax}, |D| f^2 <= {B} ({checked} coefficients)",
                                  0, len(bad), not bad, f"D = {bad[0]}" if bad else None)
        say(rep.line())
        ok &= rep.passed
    return ok


def _suite_sextic(B, say):
    ok = True
    top = min(B, 10**9)
    Xs = sorted({10**k for k in range(1, 10) if 10**k <= top} | {top})
    need = required_coverage(top, 1)[-1]
    store = obtain_store(max_pos=need, max_neg=need)
    for sign in (1, -1):
        for X in Xs:
            rep = oracle.compare_counts(f"sextic: X = {X}, sign {sign:+d}", oracle.direct_sextic(X, sign),
                                        count_sextic(X, sign, store).total)
            say(rep.line())
            ok &= rep.passed
    return ok


_ALLOWED_V3 = {0, 1, 3, 4, 5}


def _suite_valuations(B, say):
    from collections import Counter
    from .arith import valuation

    store = obtain_store(max_pos=B, max_neg=B)
    hist, bad = Counter(), []
    for E in store:
        d = E.discriminant
        v3 = valuation(abs(d), 3)
        hist[v3] += 1
        fac = factorize(abs(d))
        if v3 not in _ALLOWED_V3 or fac.get(2, 0) > 3 or any(e > 2 for p, e in fac.items() if p > 3):
            bad.append(d)
    total = sum(hist.values())
    rep = oracle.OracleReport(f"valuations: {total} fields with |disc| <= {B}", 0, len(bad), not bad,
                              f"disc {bad[0]}" if bad else None)
    say(rep.line())
    for v, w in zip(sorted(_ALLOWED_V3), (81, 27, 6, 2, 1)):
        say(f"    v3 = {v}: {hist[v]} ({hist[v] / max(total, 1):.4f} observed, {w}/117 = {w / 117:.4f} limit)")
    return rep.passed


_SUITES = {"forms": _suite_forms, "phi": _suite_phi, "sextic": _suite_sextic, "valuations": _suite_valuations}


def _cmd_verify(args, out) -> int:
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    B = args.bound
    if B < 1:
        raise UsageError("--bound must be >= 1")
    if args.suite in ("forms", "phi", "all") and B > oracle.HUNTER_LIMIT:
        raise UsageError(f"--bound for the oracle suites is limited to {oracle.HUNTER_LIMIT}")

    def say(line):
        out.write(line + "\n")
        out.flush()

    ok = True
    for name in names:
        ok &= _SUITES[name](B, say)
    say("all checks passed" if ok else "verification FAILED")
    return EXIT_OK if ok else EXIT_FAIL


_COMMANDS = {"cubics": _cmd_cubics, "phi": _cmd_phi, "sextic": _cmd_sextic, "verify": _cmd_verify}


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=err,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args, out)
    except (UsageError, CoverageError, TableFormatError, oracle.OracleLimitError,
            forms.EnumerationLimitError, OSError) as exc:
        err.write(f"cubicphi {args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
