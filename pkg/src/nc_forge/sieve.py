"""Prime sieves and smallest-prime-factor tables.

Tables are immutable after construction and safe to share across threads.
Sieving is deterministic: the segmented and monolithic code paths produce
identical prime sequences, independent of the segment size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceError

DEFAULT_SEGMENT_SIZE = 1 << 20
MAX_LIMIT = 1 << 40
DEFAULT_MEMORY_BUDGET = 2 << 30  # bytes allowed for one factor table


def _check_limit(limit: int) -> None:
    if limit < 2:
        raise DomainError(f"limit must be at least 2, got {limit}")
    if limit > MAX_LIMIT:
        raise ResourceError(f"limit {limit} exceeds the supported ceiling 2^40")


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """All primes up to ``limit`` in increasing order, with count lookups."""

    limit: int
    primes: np.ndarray
    count: int

    def pi(self, x: int) -> int:
        """Number of primes <= x.  Requires x <= limit."""
        if x > self.limit:
            raise DomainError(f"pi({x}) not covered by a table with limit {self.limit}")
        return int(np.searchsorted(self.primes, x, side="right"))

    def __contains__(self, p: int) -> bool:
        if p > self.limit:
            raise DomainError(f"{p} not covered by a table with limit {self.limit}")
        i = int(np.searchsorted(self.primes, p))
        return i < self.count and int(self.primes[i]) == p


@dataclass(frozen=True, eq=False)
class FactorTable:
    """Smallest prime factor of every n in [2, limit].

    Internally only odd n are stored (even n map to 2 arithmetically);
    the lookup contract is unaffected by the layout.
    """

    limit: int
    spf_odd: np.ndarray  # spf_odd[k] = smallest prime factor of 2k+1; slot 0 unused

    def spf(self, n: int) -> int:
        if n < 2 or n > self.limit:
            raise DomainError(f"spf({n}) outside table range [2, {self.limit}]")
        if n % 2 == 0:
            return 2
        return int(self.spf_odd[n >> 1])

    def spf_many(self, values: np.ndarray) -> np.ndarray:
        """Vectorised spf lookup.  Caller guarantees 2 <= v <= limit."""
        out = np.full(values.shape, 2, dtype=np.int64)
        odd = (values & 1).astype(bool)
        if odd.any():
            out[odd] = self.spf_odd[values[odd] >> 1]
        return out


@dataclass(frozen=True)
class Factorization:
    """Prime factorization n = prod p_k^a_k with strictly increasing p_k."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        out = 1
        for p, a in self.factors:
            out *= p**a
        return out


@dataclass(frozen=True, eq=False)
class Tables:
    """A prime table and a factor table sharing one limit."""

    primes: PrimeTable
    factors: FactorTable

    @property
    def limit(self) -> int:
        return min(self.primes.limit, self.factors.limit)


def _sieve_monolithic(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _sieve_segmented(limit: int, segment_size: int) -> np.ndarray:
    root = math.isqrt(limit)
    base = _sieve_monolithic(root)
    chunks = [base]
    lo = root + 1
    while lo <= limit:
        hi = min(lo + segment_size, limit + 1)
        flags = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start < hi:
                flags[start - lo :: p] = False
        chunks.append((np.flatnonzero(flags) + lo).astype(np.int64))
        lo = hi
    return np.concatenate(chunks)


def sieve_primes(
    limit: int,
    *,
    method: str = "auto",
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> PrimeTable:
    """Sieve all primes up to limit.

    Parameters
    ----------
    limit : int
        Inclusive upper bound, at least 2.
    method : str
        "monolithic" (one flag array), "segmented" (bounded working set),
        or "auto" (segmented above 2^22).  All methods return identical
        tables.
    segment_size : int
        Entries per segment in segmented mode.
    """
    _check_limit(limit)
    if segment_size < 1:
        raise DomainError("segment_size must be positive")
    if method == "auto":
        method = "monolithic" if limit <= (1 << 22) else "segmented"
    if method == "monolithic":
        primes = _sieve_monolithic(limit)
    elif method == "segmented":
        primes = _sieve_segmented(limit, segment_size)
    else:
        raise DomainError(f"unknown sieve method {method!r}")
    primes.setflags(write=False)
    return PrimeTable(limit=limit, primes=primes, count=len(primes))


def build_factor_table(
    limit: int,
    *,
    memory_budget: int | None = None,
) -> FactorTable:
    """Build the smallest-prime-factor table for [2, limit].

    Parameters
    ----------
    limit : int
        Inclusive upper bound, at least 2.
    memory_budget : int, optional
        Maximum bytes for the internal array (default 2 GiB).  A limit
        whose table would not fit raises ResourceError; stream with the
        segmented operations (count_nc, psi_count, ...) instead.
    """
    _check_limit(limit)
    budget = DEFAULT_MEMORY_BUDGET if memory_budget is None else memory_budget
    half = (limit + 1) // 2  # slots for n = 1, 3, 5, ..., <= limit
    dtype = np.uint32 if limit < 2**32 else np.uint64
    needed = half * np.dtype(dtype).itemsize
    if needed > budget:
        raise ResourceError(
            f"factor table for limit {limit} needs {needed} bytes, over the "
            f"{budget}-byte budget; use the segmented streaming operations "
            f"or raise the budget"
        )
    spf_odd = np.zeros(half, dtype=dtype)
    for p in range(3, math.isqrt(limit) + 1, 2):
        if spf_odd[p >> 1] == 0:
            view = spf_odd[(p * p) >> 1 :: p]
            view[view == 0] = p
    remaining = np.flatnonzero(spf_odd == 0)
    spf_odd[remaining] = 2 * remaining + 1  # odd primes are their own spf
    spf_odd.setflags(write=False)
    return FactorTable(limit=limit, spf_odd=spf_odd)


def build_tables(limit: int, *, memory_budget: int | None = None) -> Tables:
    """Convenience constructor for a matched PrimeTable/FactorTable pair."""
    return Tables(
        primes=sieve_primes(limit),
        factors=build_factor_table(limit, memory_budget=memory_budget),
    )


def factorize(n: int, table: FactorTable) -> Factorization:
    """Factor n by walking the spf chain.  Requires 2 <= n <= table.limit."""
    if n < 2 or n > table.limit:
        raise DomainError(f"factorize({n}) outside table range [2, {table.limit}]")
    out = []
    m = n
    while m > 1:
        p = 2 if m % 2 == 0 else int(table.spf_odd[m >> 1])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out.append((p, e))
    return Factorization(n=n, factors=tuple(out))
