"""Command-line surface.

Results go to stdout, diagnostics to stderr.  Exit codes: 0 success,
1 domain/usage error, 2 resource error, 3 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from itertools import chain, combinations

from .certify import (
    Schedule,
    certify_lower_bound,
    enumerate_certificate,
    parse_threshold,
    verify_certificate,
)
from .construction import build_base, build_member, member_to_dict
from .errors import DomainError, ResourceError
from .novak import count_nc, is_nc_criterion, list_nc
from .sieve import build_factor_table, build_tables
from .smoothness import (
    YRule,
    conjecture_table,
    dickman_rho,
    pi_smooth_count,
    psi_count,
    rows_to_csv,
    rows_to_json,
    shifted_smooth_set,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_RESOURCE = 2
EXIT_MISMATCH = 3

CONSTRUCT_ALL_CAP = 20  # 2^pi members; refuse beyond this many set bits


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on bad usage instead of argparse's 2
        raise _UsageError(f"{self.prog}: {message}")


def parse_natural(text: str) -> int:
    """Positive integer from '123', '1_000_000', '10^7', or '1e6'."""
    t = str(text).strip().replace("_", "")
    try:
        if t.startswith("10^"):
            n = 10 ** int(t[3:])
        elif any(c in t for c in "eE") and "^" not in t:
            f = float(t)
            n = int(f)
            if n != f:
                raise ValueError(t)
        else:
            n = int(t)
    except (ValueError, OverflowError) as exc:
        raise DomainError(f"not a natural number: {text!r}") from exc
    if n < 0:
        raise DomainError(f"not a natural number: {text!r}")
    return n


def _parse_z_values(text: str) -> list[int]:
    """Comma list ('10^4,10^5') or inclusive arithmetic range 'lo..hi..step'."""
    t = text.strip()
    if ".." in t:
        parts = t.split("..")
        if len(parts) != 3:
            raise DomainError("range syntax is lo..hi..step")
        lo, hi, step = (parse_natural(p) for p in parts)
        if step < 1 or hi < lo:
            raise DomainError("range needs lo <= hi and step >= 1")
        return list(range(lo, hi + 1, step))
    return [parse_natural(p) for p in t.split(",") if p]


def _parse_y_rule(text: str) -> YRule:
    t = text.strip()
    if t == "hild":
        return YRule(kind="hild")
    if t.startswith("fixed:"):
        return YRule(kind="fixed", value=parse_natural(t[6:]))
    if t.startswith("power:"):
        u = float(t[6:])
        if not 0 < u:
            raise DomainError("power rule needs u > 0")
        return YRule(kind="power", value=u)
    raise DomainError(f"unknown y rule {text!r}; use fixed:y, power:u, or hild")


def _emit(obj) -> None:
    print(json.dumps(obj, separators=(",", ":")))


def _verdict_dict(v) -> dict:
    witness = None if v.is_nc else {v.witness_kind: v.witness}
    return {"n": v.n, "is_nc": v.is_nc, "witness": witness}


def _cmd_nc_check(args) -> int:
    n = parse_natural(args.n)
    table = build_factor_table(max(n, 2), memory_budget=args.limit_memory)
    v = is_nc_criterion(n, table)
    if args.format == "json":
        _emit(_verdict_dict(v))
    elif v.is_nc:
        print("true")
    else:
        print(f"false {v.witness_kind} {v.witness}")
    return EXIT_OK


def _cmd_nc_count(args) -> int:
    x = parse_natural(args.limit)
    c = count_nc(x)
    if args.format == "json":
        _emit({"x": x, "count": c})
    else:
        print(c)
    return EXIT_OK


def _cmd_nc_list(args) -> int:
    x = parse_natural(args.limit)
    members = list_nc(x)
    if args.format == "json":
        _emit(members)
    else:
        sys.stdout.write("\n".join(str(m) for m in members) + "\n")
    return EXIT_OK


def _cmd_smooth_psi(args) -> int:
    x, y = parse_natural(args.x), parse_natural(args.y)
    table = build_factor_table(max(x, 2), memory_budget=args.limit_memory)
    c = psi_count(x, y, table)
    if args.format == "json":
        _emit({"x": x, "y": y, "psi": c})
    else:
        print(c)
    return EXIT_OK


def _cmd_smooth_pi(args) -> int:
    x, y = parse_natural(args.x), parse_natural(args.y)
    tables = build_tables(max(x, 2), memory_budget=args.limit_memory)
    c = pi_smooth_count(x, y, tables.primes, tables.factors)
    if args.format == "json":
        _emit({"x": x, "y": y, "pi_smooth": c})
    else:
        print(c)
    return EXIT_OK


def _cmd_smooth_rho(args) -> int:
    v = dickman_rho(args.u)
    if args.format == "json":
        _emit({"u": args.u, "rho": v})
    else:
        print(f"{v:.12g}")
    return EXIT_OK


def _cmd_conjecture(args) -> int:
    zs = _parse_z_values(args.z)
    rule = _parse_y_rule(args.y_rule)
    tables = build_tables(max(max(zs), 2), memory_budget=args.limit_memory)
    rows = conjecture_table(zs, rule, tables)
    if args.format == "json":
        _emit(rows_to_json(rows))
    elif args.format == "csv":
        sys.stdout.write(rows_to_csv(rows))
    else:
        print(f"{'z':>12} {'y':>10} {'pi':>9} {'pi_smooth':>9} {'psi':>12} {'lhs':>14} {'rhs':>14}")
        for r in rows:
            print(
                f"{r.z:>12} {r.y:>10} {r.pi:>9} {r.pi_smooth:>9} {r.psi:>12} "
                f"{r.lhs_ratio:>14.6g} {r.rhs_ratio:>14.6g}"
            )
    return EXIT_OK


def _cmd_construct(args) -> int:
    r, s = parse_natural(args.r), parse_natural(args.s)
    tables = build_tables(max(s, 2), memory_budget=args.limit_memory)
    base = build_base(s, r, tables.primes)
    pset = shifted_smooth_set(s, r, tables.primes, tables.factors)
    if args.subset is not None:
        subset = [parse_natural(p) for p in args.subset.split(",") if p]
        member = build_member(base, subset, pset)
        if args.format == "json":
            _emit(member_to_dict(member))
        else:
            print(f"E={member.value} subset={','.join(str(p) for p in member.subset)}")
    elif args.all:
        if pset.count > CONSTRUCT_ALL_CAP:
            raise ResourceError(
                f"--all would build 2^{pset.count} members; cap is 2^{CONSTRUCT_ALL_CAP}"
            )
        subsets = chain.from_iterable(
            combinations(pset.members, k) for k in range(pset.count + 1)
        )
        members = [build_member(base, sub, pset) for sub in subsets]
        if args.format == "json":
            _emit([member_to_dict(m) for m in members])
        else:
            for m in members:
                print(f"E={m.value} subset={','.join(str(p) for p in m.subset)}")
    else:
        info = {
            "D": str(base.value),
            "exponents": [[p, e] for p, e in base.exponents],
            "pi": pset.count,
        }
        if args.format == "json":
            _emit(info)
        else:
            expo = " ".join(f"{p}^{e}" for p, e in base.exponents)
            print(f"D={base.value} ({expo}) pi={pset.count}")
    return EXIT_OK


def _cmd_certify(args) -> int:
    x = parse_threshold(args.x)
    if args.r is not None or args.s is not None:
        if args.r is None or args.s is None:
            raise _UsageError("certify: manual schedules need both --r and --s")
        sched = Schedule.manual(x, parse_natural(args.r), parse_natural(args.s))
    elif args.schedule == "t1":
        if args.u is None:
            raise _UsageError("certify: --schedule t1 needs --u")
        sched = Schedule.t1(x, args.u)
    elif args.schedule == "t2":
        sched = Schedule.t2(x)
    else:
        raise _UsageError("certify: give --r/--s or --schedule t1/t2")
    cert = certify_lower_bound(sched, memory_budget=args.limit_memory)
    if args.format == "json":
        _emit(cert.to_dict())
    else:
        print(json.dumps(cert.to_dict(), indent=2))
    if args.enumerate:
        report = enumerate_certificate(cert, memory_budget=args.limit_memory)
        print(
            f"enumerated {report.members} members: distinct={report.distinct} "
            f"bounded={report.all_at_most_x} valid={report.all_criterion_valid}",
            file=sys.stderr,
        )
        if not report.ok:
            return EXIT_MISMATCH
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        with open(args.cert, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read certificate: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"certificate is not valid JSON: {exc}") from exc
    ok, mismatches = verify_certificate(data, memory_budget=args.limit_memory)
    if ok:
        print("ok")
        return EXIT_OK
    for line in mismatches:
        print(line, file=sys.stderr)
    return EXIT_MISMATCH


def build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["plain", "json", "csv"], default="plain")
    common.add_argument(
        "--limit-memory", type=parse_natural, default=None, metavar="BYTES",
        help="memory budget for factor tables",
    )

    top = _Parser(prog="nc-forge", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    nc = sub.add_parser("nc", help="membership, counting, listing")
    ncsub = nc.add_subparsers(dest="nc_command", required=True)
    p = ncsub.add_parser("check", parents=[common])
    p.add_argument("n")
    p.set_defaults(func=_cmd_nc_check)
    p = ncsub.add_parser("count", parents=[common])
    p.add_argument("--limit", required=True)
    p.set_defaults(func=_cmd_nc_count)
    p = ncsub.add_parser("list", parents=[common])
    p.add_argument("--limit", required=True)
    p.set_defaults(func=_cmd_nc_list)

    smooth = sub.add_parser("smooth", help="smooth counts and the Dickman rho")
    ssub = smooth.add_subparsers(dest="smooth_command", required=True)
    p = ssub.add_parser("psi", parents=[common])
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=_cmd_smooth_psi)
    p = ssub.add_parser("pi", parents=[common])
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=_cmd_smooth_pi)
    p = ssub.add_parser("rho", parents=[common])
    p.add_argument("--u", type=float, required=True)
    p.set_defaults(func=_cmd_smooth_rho)

    p = sub.add_parser("conjecture", parents=[common], help="ratio table rows")
    p.add_argument("--z", required=True, help="comma list or lo..hi..step")
    p.add_argument("--y-rule", required=True, dest="y_rule", help="fixed:y, power:u, or hild")
    p.set_defaults(func=_cmd_conjecture)

    p = sub.add_parser("construct", parents=[common], help="family base and members")
    p.add_argument("--r", required=True)
    p.add_argument("--s", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--subset", help="comma-separated primes")
    group.add_argument("--all", action="store_true", help="every subset")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("certify", parents=[common], help="emit a lower-bound certificate")
    p.add_argument("--x", required=True, help="digits, 10^k, or e^k")
    p.add_argument("--schedule", choices=["t1", "t2"])
    p.add_argument("--u", type=float)
    p.add_argument("--r")
    p.add_argument("--s")
    p.add_argument("--enumerate", action="store_true", help="rebuild and check every member")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("verify", parents=[common], help="re-validate a certificate file")
    p.add_argument("--cert", required=True)
    p.set_defaults(func=_cmd_verify)

    return top


def run(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, format="%(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DOMAIN
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
