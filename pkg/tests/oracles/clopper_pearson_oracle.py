"""High-precision Clopper-Pearson bounds, independent of scipy.

Inverts the exact binomial tail ``P(Bin(n, x) >= k) = I_x(k, n - k + 1)`` by
bisection in 30-digit arithmetic. The printed values are frozen into
tests/test_stats.py and tests/test_acceptance.py; rerun to audit them.

    python tests/oracles/clopper_pearson_oracle.py
"""

import mpmath as mp

mp.mp.dps = 30
CASES = [(5144, 10000), (1, 10), (9, 10), (2412, 10000), (50, 100)]


def tail_ge(k, n, x):
    if k <= 0:
        return mp.mpf(1)
    if k > n:
        return mp.mpf(0)
    term = mp.binomial(n, k) * x**k * (1 - x) ** (n - k)
    total = term
    for j in range(k, n):
        term = term * (n - j) / (j + 1) * x / (1 - x)
        total += term
        if term < total * mp.mpf(10) ** -35:
            break
    return total


def bisect(f, target):
    lo, hi = mp.mpf(0), mp.mpf(1)
    for _ in range(110):
        mid = (lo + hi) / 2
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


if __name__ == "__main__":
    alpha = mp.mpf("0.05")
    for k, n in CASES:
        low = bisect(lambda x: tail_ge(k, n, x), alpha / 2)
        high = bisect(lambda x: tail_ge(k + 1, n, x), 1 - alpha / 2)
        print(k, n, mp.nstr(low, 16), mp.nstr(high, 16))
