"""Novak-Carmichael membership, counting, and listing.

A positive integer n is Novak-Carmichael when a^n = 1 (mod n) for every a
coprime to n; equivalently, every prime p dividing n satisfies (p-1) | n.
Three independent routes decide membership: the divisor criterion, the
defining congruence, and divisibility of n by the Carmichael function.
n = 1 counts as a member (the defining congruence holds vacuously).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceError
from .sieve import DEFAULT_SEGMENT_SIZE, MAX_LIMIT, FactorTable, _sieve_monolithic, factorize

DEFINITION_ORACLE_LIMIT = 10**7

THREADS_ENV = "NC_FORGE_THREADS"


@dataclass(frozen=True)
class NovakVerdict:
    """Membership verdict with a checkable witness on rejection.

    witness_kind is "prime" (a prime p | n with (p-1) not dividing n) or
    "base" (an a coprime to n with a^n != 1 mod n); None when is_nc is True.
    """

    n: int
    is_nc: bool
    witness_kind: str | None = None
    witness: int | None = None


def resolve_thread_count(explicit: int | None = None) -> int:
    """Worker count: explicit arg, else NC_FORGE_THREADS, else auto (0 = auto)."""
    if explicit is not None and explicit > 0:
        return explicit
    env = os.environ.get(THREADS_ENV, "").strip()
    if env:
        try:
            k = int(env)
        except ValueError as exc:
            raise DomainError(f"{THREADS_ENV}={env!r} is not an integer") from exc
        if k > 0:
            return k
    return min(4, os.cpu_count() or 1)


def is_nc_criterion(n: int, table: FactorTable) -> NovakVerdict:
    """Divisor criterion: every prime p | n must satisfy (p-1) | n."""
    if n < 1 or n > table.limit:
        raise DomainError(f"is_nc_criterion({n}) outside [1, {table.limit}]")
    if n == 1:
        return NovakVerdict(n=1, is_nc=True)
    for p, _ in factorize(n, table).factors:
        if p > 2 and n % (p - 1):
            return NovakVerdict(n=n, is_nc=False, witness_kind="prime", witness=p)
    return NovakVerdict(n=n, is_nc=True)


def is_nc_definition(n: int) -> NovakVerdict:
    """Defining congruence, tested for every base coprime to n.

    Desk-scale oracle: n above 10^7 raises ResourceError.  The witness is
    the smallest failing base.
    """
    if n < 1:
        raise DomainError(f"is_nc_definition needs n >= 1, got {n}")
    if n > DEFINITION_ORACLE_LIMIT:
        raise ResourceError(
            f"definitional check capped at {DEFINITION_ORACLE_LIMIT}; use the criterion"
        )
    for a in range(2, n):
        if math.gcd(a, n) == 1 and pow(a, n, n) != 1:
            return NovakVerdict(n=n, is_nc=False, witness_kind="base", witness=a)
    return NovakVerdict(n=n, is_nc=True)


def carmichael_lambda(n: int, table: FactorTable) -> int:
    """Exponent of the multiplicative group mod n."""
    if n < 1 or n > table.limit:
        raise DomainError(f"carmichael_lambda({n}) outside [1, {table.limit}]")
    if n == 1:
        return 1
    parts = []
    for p, a in factorize(n, table).factors:
        if p == 2:
            parts.append(1 if a == 1 else 2 if a == 2 else 1 << (a - 2))
        else:
            parts.append(p ** (a - 1) * (p - 1))
    return math.lcm(*parts)


def _flags_from_table(lo: int, hi: int, table: FactorTable) -> np.ndarray:
    """Criterion flags for n in [lo, hi) using a full spf table."""
    n = np.arange(lo, hi, dtype=np.int64)
    ok = np.ones(n.shape[0], dtype=bool)
    residual = n.copy()
    idx = np.flatnonzero(residual > 1)
    while idx.size:
        p = table.spf_many(residual[idx])
        ok[idx] &= (n[idx] % (p - 1)) == 0  # p = 2 gives modulus 1, always 0
        residual[idx] //= p
        idx = idx[residual[idx] > 1]
    return ok


def _flags_from_segment(lo: int, hi: int, base_primes: np.ndarray) -> np.ndarray:
    """Criterion flags for n in [lo, hi) by trial division with primes <= sqrt(hi-1)."""
    n = np.arange(lo, hi, dtype=np.int64)
    ok = np.ones(n.shape[0], dtype=bool)
    residual = n.copy()
    for p in base_primes:
        p = int(p)
        start = ((lo + p - 1) // p) * p
        if start >= hi:
            continue
        idx = np.arange(start - lo, hi - lo, p)
        if p > 2:
            ok[idx] &= (n[idx] % (p - 1)) == 0
        rem = residual[idx] // p
        live = np.flatnonzero(rem % p == 0)
        while live.size:
            rem[live] //= p
            live = live[rem[live] % p == 0]
        residual[idx] = rem
    big = np.flatnonzero(residual > 1)  # leftover cofactor is a prime > sqrt
    if big.size:
        ok[big] &= (n[big] % (residual[big] - 1)) == 0
    return ok


def _resolve_method(x: int, table: FactorTable | None, method: str) -> str:
    if method == "auto":
        return "monolithic" if table is not None and table.limit >= x else "segmented"
    if method in ("monolithic", "table"):
        if table is None or table.limit < x:
            raise DomainError("monolithic mode needs a factor table covering x")
        return "monolithic"
    if method == "segmented":
        return "segmented"
    raise DomainError(f"unknown method {method!r}")


def _segment_ranges(x: int, segment_size: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + segment_size, x + 1)) for lo in range(2, x + 1, segment_size)]


def count_nc(
    x: int,
    table: FactorTable | None = None,
    *,
    method: str = "auto",
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int | None = None,
) -> int:
    """Exact count of Novak-Carmichael numbers <= x (n = 1 included).

    The monolithic path sweeps a full factor table; the segmented path
    streams blocks with base primes up to sqrt(x) and needs no table.
    Both paths agree exactly.
    """
    if x < 1:
        raise DomainError(f"count_nc needs x >= 1, got {x}")
    if x > MAX_LIMIT:
        raise ResourceError(f"x={x} exceeds the supported ceiling 2^40")
    if x == 1:
        return 1
    mode = _resolve_method(x, table, method)
    if mode == "monolithic":
        return 1 + int(_flags_from_table(2, x + 1, table).sum())
    base = _sieve_monolithic(math.isqrt(x))
    ranges = _segment_ranges(x, segment_size)
    workers = resolve_thread_count(threads)
    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = pool.map(lambda t: int(_flags_from_segment(t[0], t[1], base).sum()), ranges)
            return 1 + sum(counts)
    return 1 + sum(int(_flags_from_segment(lo, hi, base).sum()) for lo, hi in ranges)


def list_nc(
    x: int,
    table: FactorTable | None = None,
    *,
    method: str = "auto",
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int | None = None,
) -> list[int]:
    """Ordered members <= x; length equals count_nc(x)."""
    if x < 1:
        raise DomainError(f"list_nc needs x >= 1, got {x}")
    if x > MAX_LIMIT:
        raise ResourceError(f"x={x} exceeds the supported ceiling 2^40")
    if x == 1:
        return [1]
    mode = _resolve_method(x, table, method)
    if mode == "monolithic":
        flags = _flags_from_table(2, x + 1, table)
        return [1] + (np.flatnonzero(flags) + 2).tolist()
    base = _sieve_monolithic(math.isqrt(x))
    ranges = _segment_ranges(x, segment_size)
    workers = resolve_thread_count(threads)

    def members(t: tuple[int, int]) -> np.ndarray:
        lo, hi = t
        return np.flatnonzero(_flags_from_segment(lo, hi, base)) + lo

    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(members, ranges))
    else:
        chunks = [members(t) for t in ranges]
    return [1] + np.concatenate(chunks).tolist()
