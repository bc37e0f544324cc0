"""Slow, deliberately naive reference computations used as test oracles.

Nothing here imports the package: the eigenform is rebuilt from the product
q * prod (1 - q^n)^24 and divisor sums by trial division, in plain lists.
"""
from __future__ import annotations

from fractions import Fraction

EISENSTEIN_CONSTANT = {4: 240, 6: -504, 10: -264, 14: -24}


def divisor_sum(n: int, r: int) -> int:
    return sum(d**r for d in range(1, n + 1) if n % d == 0)


def mul(a: list[int], b: list[int]) -> list[int]:
    n = len(a)
    out = [0] * n
    for i, x in enumerate(a):
        if x:
            for j in range(n - i):
                out[i + j] += x * b[j]
    return out


def delta(N: int) -> list[int]:
    """Coefficients 0..N of q prod_{n>=1} (1 - q^n)^24, by repeated multiplication."""
    series = [0] * (N + 1)
    series[0] = 1
    for n in range(1, N + 1):
        factor = [0] * (N + 1)
        factor[0] = 1
        factor[n] = -1
        for _ in range(24):
            series = mul(series, factor)
    return [0] + series[:N]


def eisenstein(weight: int, N: int) -> list[int]:
    if weight == 0:
        return [1] + [0] * N
    c = EISENSTEIN_CONSTANT[weight]
    return [1] + [c * divisor_sum(n, weight - 1) for n in range(1, N + 1)]


def eigenform(k: int, N: int) -> list[int]:
    """a(0..N) of the weight 2k-2 level one eigenform Delta * E_{2k-14}."""
    return mul(delta(N), eisenstein(2 * k - 14, N))


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def sk_lambda(k: int, a: list[int], n: int) -> int:
    """lambda_F(n) from the Euler-factor identity, using the oracle's own a(p^j)."""
    out = 1
    for p, m in factor(n).items():
        e = k - 1
        total = p ** (m * e) + p ** (m * e - 1) + a[p**m]
        for ell in range(1, m):
            top = (m - ell) * e
            total += (p**top + p ** (top - 1)) * a[p**ell]
        out *= total
    return out


def sk_ratio(k: int, a: list[int], n: int) -> Fraction:
    return Fraction(sk_lambda(k, a, n), n ** (k - 1))
