"""Hurwitz zeta function by Euler-Maclaurin summation.

Only real arguments ``s > 1`` and ``q > 0`` are supported; that is all the
power-law normalizers need. Absolute error is below 1e-14 for the parameter
ranges used in this package.
"""

from __future__ import annotations

import math

import numpy as np

# B_2, B_4, ..., B_20
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
)

# summation is shifted until q + N >= _SHIFT before the asymptotic tail is used
_SHIFT = 12


def hurwitz_zeta(s: float, q):
    """Return ``sum_{j>=0} (q + j)**(-s)``.

    Parameters
    ----------
    s : float
        Exponent, ``s > 1``.
    q : float or array_like
        Offset(s), all ``> 0``.
    """
    if not s > 1.0:
        raise ValueError(f"hurwitz_zeta needs s > 1, got {s}")
    q_arr = np.asarray(q, dtype=float)
    if np.any(q_arr <= 0):
        raise ValueError("hurwitz_zeta needs q > 0")
    scalar = q_arr.ndim == 0
    q_arr = np.atleast_1d(q_arr)

    # direct head: j = 0 .. N-1 where N = max(0, ceil(_SHIFT - q))
    shift = np.maximum(0, np.ceil(_SHIFT - q_arr)).astype(np.int64)
    head = np.zeros_like(q_arr)
    for j in range(int(shift.max(initial=0))):
        mask = j < shift
        head[mask] += (q_arr[mask] + j) ** (-s)

    a = q_arr + shift
    tail = a ** (1.0 - s) / (s - 1.0) + 0.5 * a ** (-s)
    # rising factorial s (s+1) ... (s+2m-2), divided by (2m)!
    coef = s
    fact = 2.0
    power = a ** (-s - 1.0)
    inv_a2 = a ** -2.0
    for m, b2m in enumerate(_BERNOULLI, start=1):
        tail += b2m / fact * coef * power
        coef *= (s + 2 * m - 1) * (s + 2 * m)
        fact *= (2 * m + 1) * (2 * m + 2)
        power = power * inv_a2

    out = head + tail
    return float(out[0]) if scalar else out


def riemann_zeta(s: float) -> float:
    """Riemann zeta at real ``s > 1``."""
    return hurwitz_zeta(s, 1.0)
