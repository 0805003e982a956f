"""Smooth-number counts, shifted-smooth prime sets, and the Dickman rho function.

Conventions: the greatest prime factor of 1 is 1, so n = 1 counts as y-smooth
for every y >= 1 and the prime 2 always belongs to the shifted-smooth set.
"""

from __future__ import annotations

import logging
import math
import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .sieve import DEFAULT_SEGMENT_SIZE, FactorTable, PrimeTable, Tables

logger = logging.getLogger(__name__)

RHO_CUTOFF = 500.0  # beyond this the double-precision value is flushed to zero


@dataclass(frozen=True)
class ShiftedSmoothSet:
    """Primes p <= x whose shift p-1 has no prime factor above y."""

    x: int
    y: int
    members: tuple[int, ...]
    count: int


@dataclass(frozen=True)
class ConjectureRow:
    """One row of the ratio table comparing smooth shifted primes to smooth integers."""

    z: int
    y: int
    pi: int
    pi_smooth: int
    psi: int
    lhs_ratio: float  # pi_smooth / pi
    rhs_ratio: float  # psi / z


@dataclass(frozen=True)
class HildebrandRow:
    """Empirical decay exponent of psi(z, y)/z at y = round(exp(sqrt(log z)))."""

    z: int
    y: int
    psi: int
    ratio: float
    exponent: float


@dataclass(frozen=True)
class YRule:
    """How the smoothness bound y is derived from z in a ratio table."""

    kind: str  # "fixed" | "power" | "hild"
    value: int | float | None = None

    def y_for(self, z: int) -> int:
        if self.kind == "fixed":
            y = int(self.value)
        elif self.kind == "power":
            y = round(z ** float(self.value))
        elif self.kind == "hild":
            y = round(math.exp(math.sqrt(math.log(z))))
        else:
            raise DomainError(f"unknown y rule {self.kind!r}")
        if y < 1:
            raise DomainError(f"y rule yields y={y} < 1 at z={z}")
        return y


def greatest_prime_factor(n: int, table: FactorTable) -> int:
    """Largest prime dividing n; returns 1 for n = 1.  Requires n <= table.limit."""
    if n < 1 or n > table.limit:
        raise DomainError(f"greatest_prime_factor({n}) outside [1, {table.limit}]")
    if n == 1:
        return 1
    p = 1
    m = n
    while m > 1:
        p = 2 if m % 2 == 0 else int(table.spf_odd[m >> 1])
        while m % p == 0:
            m //= p
    return p  # spf chain is nondecreasing, so the last factor is the largest


def _gpf_chunk(table: FactorTable, ns: np.ndarray) -> np.ndarray:
    """Greatest prime factor for each entry of ns (entries >= 1)."""
    g = np.ones(ns.shape, dtype=np.int64)
    m = ns.astype(np.int64, copy=True)
    idx = np.flatnonzero(m > 1)
    while idx.size:
        p = table.spf_many(m[idx])
        g[idx] = p
        m[idx] //= p
        idx = idx[m[idx] > 1]
    return g


def psi_count(
    x: int,
    y: int,
    table: FactorTable,
    *,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> int:
    """Count the y-smooth integers n <= x (n = 1 included)."""
    if x < 1:
        raise DomainError(f"psi_count needs x >= 1, got {x}")
    if y < 1:
        raise DomainError(f"psi_count needs y >= 1, got {y}")
    if x > table.limit:
        raise DomainError(f"x={x} exceeds table limit {table.limit}")
    total = 0
    for lo in range(1, x + 1, segment_size):
        ns = np.arange(lo, min(lo + segment_size, x + 1), dtype=np.int64)
        total += int((_gpf_chunk(table, ns) <= y).sum())
    return total


def pi_smooth_count(
    x: int,
    y: int,
    primes: PrimeTable,
    table: FactorTable,
    *,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> int:
    """Count primes p <= x with p-1 being y-smooth."""
    if x < 2 or y < 1:
        raise DomainError(f"pi_smooth_count needs x >= 2 and y >= 1, got x={x}, y={y}")
    if x > primes.limit or x - 1 > table.limit:
        raise DomainError(f"x={x} exceeds table limits")
    ps = primes.primes[: primes.pi(x)]
    total = 0
    for lo in range(0, len(ps), segment_size):
        shifted = ps[lo : lo + segment_size] - 1
        total += int((_gpf_chunk(table, shifted) <= y).sum())
    return total


def shifted_smooth_set(
    x: int,
    y: int,
    primes: PrimeTable,
    table: FactorTable,
) -> ShiftedSmoothSet:
    """Materialise the set of primes p <= x with y-smooth shift p-1."""
    if x < 2 or y < 1:
        raise DomainError(f"shifted_smooth_set needs x >= 2 and y >= 1, got x={x}, y={y}")
    if x > primes.limit or x - 1 > table.limit:
        raise DomainError(f"x={x} exceeds table limits")
    ps = primes.primes[: primes.pi(x)]
    keep = _gpf_chunk(table, ps - 1) <= y
    members = tuple(int(p) for p in ps[keep])
    return ShiftedSmoothSet(x=x, y=y, members=members, count=len(members))


# ---------------------------------------------------------------------------
# Dickman rho
# ---------------------------------------------------------------------------

_NODES = 4096  # nodes per unit interval, step 2^-12
_H = 1.0 / _NODES


class _DickmanGrid:
    """Values of rho on a fixed grid, extended block by block.

    Block b holds rho on [b, b+1].  The delayed values rho(t-1) needed on a
    new block all lie in the previous, fully computed block, so each unit
    interval is integrated with composite Simpson steps whose midpoints come
    from cubic interpolation of the known block.
    """

    def __init__(self) -> None:
        self.values = np.ones(_NODES + 1)  # rho = 1 on [0, 1]
        self.blocks = 1
        self._lock = threading.Lock()

    def extend_to(self, blocks: int) -> None:
        with self._lock:
            while self.blocks < blocks:
                prev = self.values[-(_NODES + 1) :]
                mid = np.empty(_NODES)
                mid[1:-1] = (-prev[:-3] + 9.0 * prev[1:-2] + 9.0 * prev[2:-1] - prev[3:]) / 16.0
                mid[0] = 0.3125 * prev[0] + 0.9375 * prev[1] - 0.3125 * prev[2] + 0.0625 * prev[3]
                mid[-1] = 0.0625 * prev[-4] - 0.3125 * prev[-3] + 0.9375 * prev[-2] + 0.3125 * prev[-1]
                ts = self.blocks + np.arange(_NODES + 1) * _H
                f_lo = prev[:-1] / ts[:-1]
                f_hi = prev[1:] / ts[1:]
                f_mid = mid / (ts[:-1] + 0.5 * _H)
                steps = (_H / 6.0) * (f_lo + 4.0 * f_mid + f_hi)
                block = self.values[-1] - np.cumsum(steps)
                np.maximum(block, 0.0, out=block)  # clamp double-precision underflow
                self.values = np.concatenate([self.values, block])
                self.blocks += 1

    def eval(self, u: float) -> float:
        self.extend_to(max(1, math.ceil(u)))
        k = u * _NODES
        k0 = math.floor(k)
        if k0 >= len(self.values) - 1:
            return float(self.values[-1])
        if k == k0:
            return float(self.values[k0])
        block_lo = (k0 // _NODES) * _NODES
        base = min(max(k0 - 1, block_lo), block_lo + _NODES - 3)
        t = k - base
        w0 = (t - 1.0) * (t - 2.0) * (t - 3.0) / -6.0
        w1 = t * (t - 2.0) * (t - 3.0) / 2.0
        w2 = t * (t - 1.0) * (t - 3.0) / -2.0
        w3 = t * (t - 1.0) * (t - 2.0) / 6.0
        v = self.values[base : base + 4]
        return float(w0 * v[0] + w1 * v[1] + w2 * v[2] + w3 * v[3])


_GRID = _DickmanGrid()


def dickman_rho(u: float) -> float:
    """Dickman's rho: 1 on [0, 1], then u rho'(u) = -rho(u-1).

    Absolute error is at most 1e-9 for u <= 20.  For u > 500 the value
    underflows double precision and 0.0 is returned (logged).
    """
    u = float(u)
    if u < 0:
        raise DomainError(f"dickman_rho needs u >= 0, got {u}")
    if u <= 1.0:
        return 1.0
    if u > RHO_CUTOFF:
        logger.warning("dickman_rho(%g): underflow-to-zero beyond u=%g", u, RHO_CUTOFF)
        return 0.0
    return _GRID.eval(u)


# ---------------------------------------------------------------------------
# Ratio tables
# ---------------------------------------------------------------------------

def _round_sig(v: float, digits: int = 12) -> float:
    return float(f"{v:.{digits}g}")


def conjecture_table(
    z_values: Sequence[int],
    y_rule: YRule,
    tables: Tables,
    *,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> list[ConjectureRow]:
    """Exact ratio rows: shifted-smooth primes over all primes vs smooth integers over z."""
    if not z_values:
        raise DomainError("conjecture_table needs at least one z value")
    rows = []
    for z in sorted(int(z) for z in z_values):
        if z > tables.limit:
            raise DomainError(f"z={z} exceeds table limit {tables.limit}")
        y = y_rule.y_for(z)
        n_primes = tables.primes.pi(z)
        n_shifted = pi_smooth_count(z, y, tables.primes, tables.factors, segment_size=segment_size)
        n_smooth = psi_count(z, y, tables.factors, segment_size=segment_size)
        rows.append(
            ConjectureRow(
                z=z,
                y=y,
                pi=n_primes,
                pi_smooth=n_shifted,
                psi=n_smooth,
                lhs_ratio=n_shifted / n_primes,
                rhs_ratio=n_smooth / z,
            )
        )
    return rows


CSV_HEADER = "z,y,pi,pi_smooth,psi,lhs_ratio,rhs_ratio"


def rows_to_csv(rows: Iterable[ConjectureRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.z},{r.y},{r.pi},{r.pi_smooth},{r.psi},"
            f"{r.lhs_ratio:.12g},{r.rhs_ratio:.12g}"
        )
    return "\n".join(lines) + "\n"


def rows_to_json(rows: Iterable[ConjectureRow]) -> list[dict]:
    return [
        {
            "z": r.z,
            "y": r.y,
            "pi": r.pi,
            "pi_smooth": r.pi_smooth,
            "psi": r.psi,
            "lhs_ratio": _round_sig(r.lhs_ratio),
            "rhs_ratio": _round_sig(r.rhs_ratio),
        }
        for r in rows
    ]


def hildebrand_report(
    z_values: Sequence[int],
    tables: Tables,
    *,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> list[HildebrandRow]:
    """Observed exponent e(z) = -log(psi/z) / (sqrt(log z) loglog z) at y = round(e^sqrt(log z))."""
    if not z_values:
        raise DomainError("hildebrand_report needs at least one z value")
    rows = []
    for z in sorted(int(z) for z in z_values):
        lz = math.log(z)
        y = round(math.exp(math.sqrt(lz)))
        n_smooth = psi_count(z, y, tables.factors, segment_size=segment_size)
        ratio = n_smooth / z
        exponent = -math.log(ratio) / (math.sqrt(lz) * math.log(lz))
        rows.append(HildebrandRow(z=z, y=y, psi=n_smooth, ratio=ratio, exponent=exponent))
    return rows
