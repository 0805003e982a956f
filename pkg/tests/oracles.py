"""Brute-force reference implementations used to pin expected values.

Everything here is deliberately slow and simple: trial division, Pascal's
triangle, and a trapezoid solver of the integral form of the rho delay
equation.  None of it shares code with the package under test.
"""

import math


def trial_primes(limit):
    out = []
    for n in range(2, limit + 1):
        if all(n % d for d in range(2, math.isqrt(n) + 1)):
            out.append(n)
    return out


def trial_factorize(n):
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def trial_gpf(n):
    if n == 1:
        return 1
    return trial_factorize(n)[-1][0]


def smooth_count(x, y):
    return sum(1 for n in range(1, x + 1) if trial_gpf(n) <= y)


def shifted_smooth_primes(x, y):
    return [p for p in trial_primes(x) if trial_gpf(p - 1) <= y]


def pascal_binomial(n, k):
    if k < 0 or k > n:
        return 0
    row = [1]
    for _ in range(n):
        row = [a + b for a, b in zip([0] + row, row + [0])]
    return row[k]


def group_exponent(n):
    """Exponent of the multiplicative group mod n, by brute-force orders."""
    if n == 1:
        return 1
    result = 1
    for a in range(1, n):
        if math.gcd(a, n) != 1:
            continue
        order = 1
        v = a % n
        while v != 1:
            v = v * a % n
            order += 1
        result = math.lcm(result, order)
    return result


def _rho_trapezoid(u, k):
    """Solve u*rho(u) = integral of rho over [u-1, u] on a 2^-k grid."""
    m = 1 << k
    h = 1.0 / m
    total = round(u * m)
    assert abs(u * m - total) < 1e-9, "oracle needs u on the refinement grid"
    v = [1.0] * (m + 1)
    window = float(m - 1)  # sum of v[i-m+1 .. i-1] at the first solved node
    for i in range(m + 1, total + 1):
        t = i * h
        vi = h * (0.5 * v[i - m] + window) / (t - 0.5 * h)
        v.append(vi)
        window += vi - v[i - m + 1]
    return v[total]


def dickman_oracle(u, tol=1e-9):
    """Dickman rho by step-halving trapezoid with Richardson extrapolation."""
    prev = _rho_trapezoid(u, 11)
    for k in range(12, 17):
        cur = _rho_trapezoid(u, k)
        if abs(cur - prev) < tol:
            return (4.0 * cur - prev) / 3.0
        prev = cur
    raise RuntimeError(f"dickman oracle did not stabilise at u={u}")
