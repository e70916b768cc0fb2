"""Truncated trigonometric series on the circle R/2piZ.

``TrigSeries`` stores ``const + sum_k cos_k cos(kt) + sin_k sin(kt)`` with
coefficients of arbitrary trailing shape: ``()`` for periodic scalars such as
the densities ``a`` and ``b``, ``(3,)`` for closed curves in space.
Differentiation and integration act on the coefficients; nothing is ever
differenced numerically.
"""

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi

# relative magnitude below which projected coefficients are treated as noise
CHOP_TOL = 1e-14


def grid(n):
    """The uniform grid ``2 pi j / n``, ``j = 0..n-1``."""
    return TWO_PI * np.arange(n) / n


@dataclass(frozen=True, eq=False)
class TrigSeries:
    const: np.ndarray
    cos: np.ndarray
    sin: np.ndarray

    def __post_init__(self):
        const = np.asarray(self.const, dtype=float)
        cos = np.asarray(self.cos, dtype=float)
        sin = np.asarray(self.sin, dtype=float)
        if cos.size == 0:
            cos = np.zeros((0,) + const.shape)
        if sin.size == 0:
            sin = np.zeros((0,) + const.shape)
        k = max(len(cos), len(sin))
        cos = _pad(cos, k, const.shape)
        sin = _pad(sin, k, const.shape)
        if cos.shape[1:] != const.shape:
            raise ValueError(f"coefficient shape {cos.shape[1:]} does not match constant {const.shape}")
        object.__setattr__(self, "const", const)
        object.__setattr__(self, "cos", cos)
        object.__setattr__(self, "sin", sin)

    # construction -----------------------------------------------------

    @classmethod
    def constant(cls, value):
        value = np.asarray(value, dtype=float)
        return cls(value, np.zeros((0,) + value.shape), np.zeros((0,) + value.shape))

    @classmethod
    def zero(cls, shape=()):
        return cls.constant(np.zeros(shape))

    @classmethod
    def from_samples(cls, values, chop=True):
        """Trigonometric interpolant of samples taken on ``grid(len(values))``."""
        values = np.asarray(values, dtype=float)
        n = len(values)
        spec = np.fft.rfft(values, axis=0) / n
        const = spec[0].real
        kmax = (n - 1) // 2
        cos = 2.0 * spec[1:kmax + 1].real
        sin = -2.0 * spec[1:kmax + 1].imag
        if n % 2 == 0:
            # the Nyquist mode cannot carry a sine part
            cos = np.concatenate([cos, spec[n // 2].real[None]])
            sin = np.concatenate([sin, np.zeros_like(spec[n // 2].real)[None]])
        out = cls(const, cos, sin)
        return out.chop() if chop else out

    @classmethod
    def from_function(cls, func, n=1024, chop=True):
        return cls.from_samples(func(grid(n)), chop=chop)

    # structure --------------------------------------------------------

    @property
    def degree(self):
        return len(self.cos)

    @property
    def shape(self):
        return self.const.shape

    @property
    def mean(self):
        return self.const

    def coefficient_norms(self):
        """Per-mode magnitude, maximised over components."""
        mags = np.hypot(self.cos, self.sin)
        if mags.ndim > 1:
            mags = mags.reshape(len(mags), -1).max(axis=1)
        return mags

    def chop(self, tol=CHOP_TOL):
        mags = self.coefficient_norms()
        scale = max(float(np.max(np.abs(self.const), initial=0.0)), float(np.max(mags, initial=0.0)))
        if scale == 0.0:
            return TrigSeries.zero(self.shape)
        keep = np.nonzero(mags > tol * scale)[0]
        k = keep[-1] + 1 if len(keep) else 0
        return TrigSeries(self.const, self.cos[:k], self.sin[:k])

    def is_zero(self):
        return not np.any(self.const) and not np.any(self.cos) and not np.any(self.sin)

    # evaluation -------------------------------------------------------

    def _basis(self, t):
        k = np.arange(1, self.degree + 1)
        ang = np.multiply.outer(t, k)
        return np.cos(ang), np.sin(ang)

    def _combine(self, c, s, const, cb, sb):
        out = np.tensordot(cb, c, axes=([-1], [0])) + np.tensordot(sb, s, axes=([-1], [0]))
        return out + const

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        cb, sb = self._basis(t)
        return self._combine(self.cos, self.sin, self.const, cb, sb)

    def jet(self, t, order):
        """Array of derivatives ``0..order`` at ``t``; shape ``(order+1,) + t.shape + self.shape``."""
        t = np.asarray(t, dtype=float)
        cb, sb = self._basis(t)
        out = [self._combine(self.cos, self.sin, self.const, cb, sb)]
        c, s = self.cos, self.sin
        k = self._kcol()
        zero = np.zeros(self.shape)
        for _ in range(order):
            c, s = k * s, -k * c
            out.append(self._combine(c, s, zero, cb, sb))
        return np.stack(out)

    def sample(self, n):
        return self(grid(n))

    def _kcol(self):
        return np.arange(1, self.degree + 1, dtype=float).reshape((-1,) + (1,) * len(self.shape))

    # calculus ---------------------------------------------------------

    def derivative(self, order=1):
        if order == 0:
            return self
        c, s = self.cos, self.sin
        k = self._kcol()
        for _ in range(order):
            c, s = k * s, -k * c
        return TrigSeries(np.zeros(self.shape), c, s)

    def primitive(self):
        """Primitive of the zero-mean part, normalised to vanish at t = 0.

        The mean is dropped; callers that need the drift ``mean * t`` add it
        themselves.
        """
        k = self._kcol()
        cos = -self.sin / k
        sin = self.cos / k
        const = np.sum(self.sin / k, axis=0) if self.degree else np.zeros(self.shape)
        return TrigSeries(const, cos, sin)

    def integral(self):
        """Exact integral over one period."""
        return TWO_PI * self.const

    # arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, TrigSeries):
            return TrigSeries(self.const + other, self.cos, self.sin)
        k = max(self.degree, other.degree)
        return TrigSeries(
            self.const + other.const,
            _pad(self.cos, k, self.shape) + _pad(other.cos, k, other.shape),
            _pad(self.sin, k, self.shape) + _pad(other.sin, k, other.shape),
        )

    __radd__ = __add__

    def __neg__(self):
        return TrigSeries(-self.const, -self.cos, -self.sin)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TrigSeries):
            return product(self, other, lambda x, y: x * y if x.shape == y.shape else _bcast(x, y))
        return TrigSeries(self.const * other, self.cos * other, self.sin * other)

    __rmul__ = __mul__

    def shifted(self, dt):
        """The series of ``t -> self(t + dt)``."""
        k = self._kcol()
        ck, sk = np.cos(k * dt), np.sin(k * dt)
        return TrigSeries(self.const, self.cos * ck + self.sin * sk, self.sin * ck - self.cos * sk)

    def component(self, i):
        return TrigSeries(self.const[i], self.cos[:, i], self.sin[:, i])

    def to_dict(self):
        """JSON-ready coefficients (1-based cos/sin lists)."""
        return {"const": self.const.tolist(), "cos": self.cos.tolist(), "sin": self.sin.tolist()}

    def __repr__(self):
        return f"TrigSeries(shape={self.shape}, degree={self.degree})"


def _pad(arr, k, shape):
    arr = np.asarray(arr, dtype=float).reshape((-1,) + tuple(shape))
    if len(arr) >= k:
        return arr
    return np.concatenate([arr, np.zeros((k - len(arr),) + tuple(shape))])


def _bcast(x, y):
    # scalar series times vector series
    if x.ndim < y.ndim:
        return x[..., None] * y
    return x * y[..., None]


def _fft_size(k):
    n = 16
    while n < 2 * k + 2:
        n *= 2
    return n


def product(a, b, op):
    """Exact series of a pointwise bilinear combination of two series.

    The result has degree at most ``a.degree + b.degree``; sampling on a grid
    with more than twice that many points recovers it without aliasing.
    """
    n = _fft_size(a.degree + b.degree + 1)
    t = grid(n)
    return TrigSeries.from_samples(op(a(t), b(t)))


def cross(a, b):
    return product(a, b, np.cross)


def dot(a, b):
    return product(a, b, lambda x, y: np.sum(x * y, axis=-1))


def scalar_times(s, v):
    return product(s, v, lambda x, y: x[..., None] * y)
