"""Derivative-jet arithmetic.

A jet is an array ``J`` with ``J[k]`` the k-th derivative of a quantity with
respect to the curve parameter.  Products follow the Leibniz rule and powers
use the recurrence obtained from ``a h' = p a' h``, so every composite built
here carries exact analytic derivatives of its inputs.
"""

from math import comb

import numpy as np


def _leibniz(a, b, op):
    n = min(len(a), len(b))
    out = []
    for k in range(n):
        acc = None
        for i in range(k + 1):
            term = comb(k, i) * op(a[i], b[k - i])
            acc = term if acc is None else acc + term
        out.append(acc)
    return np.stack(out)


def mul(a, b):
    """Pointwise product of two jets of identical trailing shape."""
    return _leibniz(a, b, np.multiply)


def scale(vec, s):
    """Vector jet (..., 3) times scalar jet (...)."""
    return _leibniz(vec, s, lambda x, y: x * y[..., None])


def dot(a, b):
    return _leibniz(a, b, lambda x, y: np.sum(x * y, axis=-1))


def cross(a, b):
    return _leibniz(a, b, lambda x, y: np.cross(x, y))


def power(a, p):
    """Jet of ``a**p`` for a scalar jet ``a`` that does not vanish."""
    a = np.asarray(a, dtype=float)
    h = [a[0] ** p]
    for n in range(len(a) - 1):
        acc = p * sum(comb(n, k) * a[k + 1] * h[n - k] for k in range(n + 1))
        acc = acc - sum(comb(n, k) * a[k] * h[n + 1 - k] for k in range(1, n + 1))
        h.append(acc / a[0])
    return np.stack(h)


def div(a, b):
    return mul(a, power(b, -1.0))


def shift(a):
    """Jet of the derivative: drops the value slot."""
    return a[1:]
