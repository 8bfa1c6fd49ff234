"""Exact binomial confidence intervals."""

from __future__ import annotations

from .physics import DomainError


def beta_quantile(q: float, a: float, b: float, tol: float = 1e-12) -> float:
    """Inverse of the regularised incomplete beta ``I_x(a, b)`` by bisection.

    ``I_x`` is monotone in ``x`` on [0, 1], so bisection always converges.
    """
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"quantile level must lie in [0, 1], got {q!r}")
    from scipy.special import betainc  # deferred: scipy.special dominates CLI start-up

    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if betainc(a, b, mid) < q:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def clopper_pearson(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Two-sided Clopper-Pearson interval for ``successes`` out of ``trials``.

    The lower bound is exactly 0 when ``successes == 0`` and the upper bound is
    exactly 1 when ``successes == trials``.
    """
    k, n = int(successes), int(trials)
    if k != successes or n != trials or n < 1 or not 0 <= k <= n:
        raise DomainError(f"need integers 0 <= successes <= trials, trials >= 1; got {successes}, {trials}")
    if not 0.0 < confidence < 1.0:
        raise DomainError(f"confidence must lie in (0, 1), got {confidence!r}")
    alpha = 1.0 - confidence
    low = 0.0 if k == 0 else beta_quantile(alpha / 2.0, k, n - k + 1)
    high = 1.0 if k == n else beta_quantile(1.0 - alpha / 2.0, k + 1, n - k)
    return low, high
