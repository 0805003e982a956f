"""Finite lower-bound certificates for the Novak-Carmichael counting function.

A certificate fixes parameters (r, s), takes the shifted-smooth prime set
P(s, r) with cardinality pi, the base D(s, r), and a subset size A, and
records that D times the product of the A largest members of P(s, r) stays
at or below the threshold x (exact big-integer comparison, boundary E = x
included).  Every size-A subset then yields a distinct member <= x, so
binomial(pi, A) is a proven lower bound for the count up to x.

A is the exact maximum of a with D * s^a <= x, capped at pi.  Floating
point only proposes the starting point; integer comparisons settle it.
Degenerate schedules (r < 2, or D > x) produce an explanatory
zero-certificate rather than an error.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import mpmath

from .construction import build_base, build_member, shifted_part_divides_base
from .errors import DomainError, ResourceError
from .sieve import Tables, build_tables
from .smoothness import shifted_smooth_set

binomial = math.comb

SCHEDULE_T1 = "t1"
SCHEDULE_T2 = "t2"
SCHEDULE_MANUAL = "manual"

GUARD_DIGITS = 30
MAX_NOTATION_EXPONENT = 10**6

CERT_FIELDS = (
    "x",
    "r",
    "s",
    "pi",
    "exponents",
    "A",
    "count",
    "log10_count",
    "max_member_check",
    "lemma2_applicable",
)

_DECIMAL_RE = re.compile(r"^\d+$")
_POW10_RE = re.compile(r"^10\^(\d+)$")
_POWE_RE = re.compile(r"^e\^(\d+(?:\.\d+)?)$")


@dataclass(frozen=True)
class Threshold:
    """The bound x: exact integer value plus its original notation.

    text is echoed verbatim into certificates; log is the natural log as a
    float, used only to propose parameters.
    """

    text: str
    value: int
    log: float


def parse_threshold(notation: str | int) -> Threshold:
    """Parse x given as a decimal string, an int, 10^k, or e^k.

    e^k is resolved to floor(e^k) with 30 guard digits, so the certificate
    is checked against an exact integer either way.
    """
    if isinstance(notation, int):
        if notation < 1:
            raise DomainError(f"x must be positive, got {notation}")
        return Threshold(text=str(notation), value=notation, log=math.log(notation))
    text = notation.strip().replace("_", "")
    m = _POW10_RE.match(text)
    if m:
        k = int(m.group(1))
        if k > MAX_NOTATION_EXPONENT:
            raise ResourceError(f"10^{k} is beyond the supported notation range")
        return Threshold(text=text, value=10**k, log=k * math.log(10.0))
    m = _POWE_RE.match(text)
    if m:
        k = float(m.group(1))
        if k > MAX_NOTATION_EXPONENT:
            raise ResourceError(f"e^{m.group(1)} is beyond the supported notation range")
        digits = int(k / math.log(10.0)) + GUARD_DIGITS
        with mpmath.workdps(digits + 10):
            value = int(mpmath.floor(mpmath.exp(mpmath.mpf(m.group(1)))))
        return Threshold(text=text, value=value, log=k)
    if _DECIMAL_RE.match(text):
        value = int(text)
        if value < 1:
            raise DomainError("x must be positive")
        return Threshold(text=text, value=value, log=math.log(value))
    raise DomainError(f"cannot parse threshold {notation!r}; use digits, 10^k, or e^k")


@dataclass(frozen=True)
class Schedule:
    """Parameter schedule: how (r, s) are chosen below a threshold x.

    t1: r = floor(log x / (loglog x)^2), s = floor(r^(1/u)) for a fixed
        u in (0, 1); certifies toward the x^(1-u) regime.
    t2: r = floor(log x / (loglog x)^3), s = floor(e^((loglog x -
        3 logloglog x)^2)); the sub-exponential regime.
    manual: r and s given directly.
    """

    kind: str
    x: Threshold
    u: float | None = None
    r: int | None = None
    s: int | None = None

    @classmethod
    def t1(cls, x: Threshold | str | int, u: float) -> "Schedule":
        if not 0.0 < u < 1.0:
            raise DomainError(f"u must lie in (0, 1), got {u}")
        return cls(kind=SCHEDULE_T1, x=_as_threshold(x), u=u)

    @classmethod
    def t2(cls, x: Threshold | str | int) -> "Schedule":
        return cls(kind=SCHEDULE_T2, x=_as_threshold(x))

    @classmethod
    def manual(cls, x: Threshold | str | int, r: int, s: int) -> "Schedule":
        return cls(kind=SCHEDULE_MANUAL, x=_as_threshold(x), r=int(r), s=int(s))


def _as_threshold(x: Threshold | str | int) -> Threshold:
    return x if isinstance(x, Threshold) else parse_threshold(x)


def schedule_params(sched: Schedule) -> tuple[int, int, bool]:
    """Resolve a schedule to (r, s, feasible) with feasible = (2 <= r <= s).

    The formula schedules need loglog x, so they require x >= 16; manual
    schedules pass through at any x.
    """
    if sched.kind == SCHEDULE_MANUAL:
        r, s = int(sched.r), int(sched.s)
        return r, s, 2 <= r <= s
    if sched.x.value < 16:
        raise DomainError(f"formula schedules need x >= 16, got x={sched.x.value}")
    big_l = sched.x.log
    ll = math.log(big_l)
    if sched.kind == SCHEDULE_T1:
        r = math.floor(big_l / ll**2)
        if r >= 1:
            s_real = float(r) ** (1.0 / sched.u)
            if not math.isfinite(s_real):
                raise ResourceError(f"schedule s overflows at r={r}, u={sched.u}")
            s = math.floor(s_real)
        else:
            s = 0
    elif sched.kind == SCHEDULE_T2:
        lll = math.log(ll)
        r = math.floor(big_l / ll**3)
        expo = (ll - 3.0 * lll) ** 2
        if expo > 700.0:
            raise ResourceError(f"schedule s overflows (exponent {expo:.1f})")
        s = math.floor(math.exp(expo))
    else:
        raise DomainError(f"unknown schedule kind {sched.kind!r}")
    return int(r), int(s), 2 <= r <= s


@dataclass(frozen=True)
class LowerBoundCertificate:
    """Self-contained record proving count(x) >= binomial(pi, A).

    max_member_check True means D times the product of the A largest
    members of P(s, r) is <= x by exact big-integer comparison, so all
    binomial(pi, A) size-A members fit under x.  lemma2_applicable records
    whether A <= pi/2 + 1, in which case count >= (pi/A)^A as well.
    """

    x: str
    r: int
    s: int
    pi: int
    exponents: tuple[tuple[int, int], ...]
    A: int
    count: int
    log10_count: float
    max_member_check: bool
    lemma2_applicable: bool
    infeasible_reason: str | None = None

    def to_dict(self) -> dict:
        data = {
            "x": self.x,
            "r": self.r,
            "s": self.s,
            "pi": self.pi,
            "exponents": [[p, e] for p, e in self.exponents],
            "A": self.A,
            "count": str(self.count),
            "log10_count": self.log10_count,
            "max_member_check": self.max_member_check,
            "lemma2_applicable": self.lemma2_applicable,
        }
        if self.infeasible_reason is not None:
            data["infeasible_reason"] = self.infeasible_reason
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "LowerBoundCertificate":
        try:
            return cls(
                x=str(data["x"]),
                r=int(data["r"]),
                s=int(data["s"]),
                pi=int(data["pi"]),
                exponents=tuple((int(p), int(e)) for p, e in data["exponents"]),
                A=int(data["A"]),
                count=int(data["count"]),
                log10_count=float(data["log10_count"]),
                max_member_check=bool(data["max_member_check"]),
                lemma2_applicable=bool(data["lemma2_applicable"]),
                infeasible_reason=data.get("infeasible_reason"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed certificate: {exc}") from exc


def _zero_certificate(
    x: Threshold,
    r: int,
    s: int,
    reason: str,
    pi: int = 0,
    exponents: tuple[tuple[int, int], ...] = (),
) -> LowerBoundCertificate:
    return LowerBoundCertificate(
        x=x.text,
        r=r,
        s=s,
        pi=pi,
        exponents=exponents,
        A=0,
        count=0,
        log10_count=0.0,
        max_member_check=False,
        lemma2_applicable=False,
        infeasible_reason=reason,
    )


def certify_lower_bound(
    sched: Schedule,
    tables: Tables | None = None,
    *,
    memory_budget: int | None = None,
) -> LowerBoundCertificate:
    """Produce a lower-bound certificate for the schedule's threshold.

    Infeasible schedules yield an explanatory zero-certificate; exceeding
    table limits raises ResourceError.
    """
    x = sched.x
    r, s, feasible = schedule_params(sched)
    if not feasible:
        return _zero_certificate(
            x, r, s, reason=f"infeasible schedule: need 2 <= r <= s, got r={r}, s={s}"
        )
    if tables is None:
        tables = build_tables(s, memory_budget=memory_budget)
    elif tables.limit < s:
        raise ResourceError(f"tables with limit {tables.limit} do not cover s={s}")
    pset = shifted_smooth_set(s, r, tables.primes, tables.factors)
    base = build_base(s, r, tables.primes)
    if base.value > x.value:
        return _zero_certificate(
            x,
            r,
            s,
            reason="base value exceeds x; no member fits",
            pi=pset.count,
            exponents=base.exponents,
        )

    # Propose A by floats, then settle max{a : D * s^a <= x} exactly.
    a = max(0, math.floor((x.log - base.log_value) / math.log(s)))
    cur = base.value * s**a
    while a > 0 and cur > x.value:
        a -= 1
        cur //= s
    while cur * s <= x.value:
        a += 1
        cur *= s
    a = min(a, pset.count)

    largest = [int(p) for p in pset.members[-a:]] if a else []
    product = math.prod(largest)
    while a > 0 and base.value * product > x.value:
        product //= largest.pop(0)
        a -= 1
    max_member_check = base.value * product <= x.value
    count = binomial(pset.count, a)
    return LowerBoundCertificate(
        x=x.text,
        r=r,
        s=s,
        pi=pset.count,
        exponents=base.exponents,
        A=a,
        count=count,
        log10_count=math.log10(count) if count else 0.0,
        max_member_check=max_member_check,
        lemma2_applicable=a >= 1 and 2 * a <= pset.count + 2,
    )


def verify_certificate(
    data: dict | LowerBoundCertificate,
    *,
    memory_budget: int | None = None,
) -> tuple[bool, list[str]]:
    """Recompute a certificate from its (x, r, s) and compare every field.

    Returns (ok, mismatches).  Any divergence -- altered counts, exponent
    vectors, flags, or extra/missing keys -- is reported.
    """
    given = data.to_dict() if isinstance(data, LowerBoundCertificate) else dict(data)
    mismatches = []
    for key in CERT_FIELDS:
        if key not in given:
            mismatches.append(f"missing field {key!r}")
    if mismatches:
        return False, mismatches
    try:
        x = parse_threshold(str(given["x"]))
        r = int(given["r"])
        s = int(given["s"])
    except (TypeError, ValueError) as exc:
        return False, [f"unparseable field: {exc}"]
    recomputed = certify_lower_bound(
        Schedule.manual(x, r, s), memory_budget=memory_budget
    ).to_dict()
    for key in sorted(set(given) | set(recomputed)):
        if key not in recomputed:
            mismatches.append(f"unexpected field {key!r}")
        elif key not in given:
            mismatches.append(f"missing field {key!r}")
        elif given[key] != recomputed[key]:
            mismatches.append(f"{key}: certificate has {given[key]!r}, recomputed {recomputed[key]!r}")
    return not mismatches, mismatches


def check_binomial_floor(a_max: int) -> bool:
    """binomial(a, b) >= (a/b)^b for all 2 <= a <= a_max, 1 <= b <= a/2 + 1.

    Compared in exact integer arithmetic: binomial(a, b) * b^b >= a^b.
    """
    if a_max < 2:
        raise DomainError(f"check_binomial_floor needs a_max >= 2, got {a_max}")
    for a in range(2, a_max + 1):
        for b in range(1, a // 2 + 2):
            if binomial(a, b) * b**b < a**b:
                return False
    return True


@dataclass(frozen=True)
class EnumerationReport:
    """Outcome of exhaustively rebuilding every size-A member of a certificate."""

    members: int
    count_matches: bool
    distinct: bool
    all_at_most_x: bool
    all_criterion_valid: bool

    @property
    def ok(self) -> bool:
        return self.count_matches and self.distinct and self.all_at_most_x and self.all_criterion_valid


def enumerate_certificate(
    cert: LowerBoundCertificate | dict,
    tables: Tables | None = None,
    *,
    cap: int = 100_000,
    memory_budget: int | None = None,
) -> EnumerationReport:
    """Rebuild all binomial(pi, A) members and check the certified properties.

    Each member must be distinct, at most x, and pass the divisor criterion
    through its known factor structure.  Raises ResourceError when the
    member count exceeds cap.
    """
    if isinstance(cert, dict):
        cert = LowerBoundCertificate.from_dict(cert)
    if cert.count == 0:
        return EnumerationReport(0, True, True, True, True)
    if cert.count > cap:
        raise ResourceError(f"{cert.count} members exceed the enumeration cap {cap}")
    x = parse_threshold(cert.x)
    if tables is None:
        tables = build_tables(cert.s, memory_budget=memory_budget)
    pset = shifted_smooth_set(cert.s, cert.r, tables.primes, tables.factors)
    base = build_base(cert.s, cert.r, tables.primes)
    total = binomial(pset.count, cert.A)

    shift_ok = {
        q: shifted_part_divides_base(q, base)
        for q in sorted({p for p, _ in base.exponents} | set(pset.members))
    }
    seen = set()
    all_at_most_x = True
    all_valid = True
    for subset in combinations(pset.members, cert.A):
        member = build_member(base, subset, pset)
        seen.add(member.value)
        if member.value > x.value:
            all_at_most_x = False
        for q in set(subset) | {p for p, _ in base.exponents}:
            if not shift_ok[q] or (q > 2 and member.value % (q - 1) != 0):
                all_valid = False
                break
    return EnumerationReport(
        members=total,
        count_matches=total == cert.count,
        distinct=len(seen) == total,
        all_at_most_x=all_at_most_x,
        all_criterion_valid=all_valid,
    )


@dataclass(frozen=True)
class ExponentRow:
    """Realized exponent of one certificate against its schedule's target."""

    x: str
    r: int
    s: int
    feasible: bool
    pi: int
    A: int
    log10_count: float
    exponent: float | None
    target: float | None


def exponent_report(
    x_values: Sequence[Threshold | str | int],
    kind: str,
    *,
    u: float | None = None,
    r: int | None = None,
    s: int | None = None,
    tables: Tables | None = None,
    memory_budget: int | None = None,
) -> list[ExponentRow]:
    """Certify each x and report the realized exponent.

    For t1 and manual schedules the exponent is log(count)/log(x) (target
    1 - u when u is known).  For t2 it is the equivalent decay constant d
    with count = x * e^(-d log x logloglog x / loglog x).  No convergence
    is asserted; this is a comparison table.
    """
    rows = []
    for raw in x_values:
        x = _as_threshold(raw)
        if kind == SCHEDULE_T1:
            sched = Schedule.t1(x, u)
        elif kind == SCHEDULE_T2:
            sched = Schedule.t2(x)
        elif kind == SCHEDULE_MANUAL:
            if r is None or s is None:
                raise DomainError("manual exponent reports need r and s")
            sched = Schedule.manual(x, r, s)
        else:
            raise DomainError(f"unknown schedule kind {kind!r}")
        cert = certify_lower_bound(sched, tables, memory_budget=memory_budget)
        feasible = cert.infeasible_reason is None
        exponent = None
        target = None
        if feasible and cert.count >= 1:
            ln_count = math.log(cert.count) if cert.count > 1 else 0.0
            if kind == SCHEDULE_T2:
                ll = math.log(x.log)
                lll = math.log(ll)
                exponent = (x.log - ln_count) * ll / (x.log * lll)
            else:
                exponent = ln_count / x.log
                if kind == SCHEDULE_T1:
                    target = 1.0 - u
        rows.append(
            ExponentRow(
                x=x.text,
                r=cert.r,
                s=cert.s,
                feasible=feasible,
                pi=cert.pi,
                A=cert.A,
                log10_count=cert.log10_count,
                exponent=exponent,
                target=target,
            )
        )
    return rows
