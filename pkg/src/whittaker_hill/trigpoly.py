"""Exact-coefficient arithmetic for finite real trigonometric polynomials.

A :class:`TrigPoly` is a finite Fourier series

    p(x) = a_0 + sum_{n>=1} a_n cos(n x) + b_n sin(n x)

with real double-precision coefficients.  Internally the series is kept
as the centred complex coefficient vector c_{-N}..c_N of sum c_k e^{ikx}
with Hermitian symmetry (c_{-k} = conj(c_k)), so that multiplication is
a plain convolution.  Coefficients with magnitude below 1e-12 times the
largest one are pruned after every operation, keeping the degree tight.
"""

from __future__ import annotations

import math
from typing import Iterable, NamedTuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

_PRUNE_REL = 1e-12
_TWO_PI = 2.0 * math.pi


class RealZero(NamedTuple):
    """A zero of a TrigPoly in [0, 2*pi), flagged if it looks multiple."""

    x: float
    multiple: bool


def _normalize(c: np.ndarray) -> np.ndarray:
    """Hermitian-symmetrize, prune tiny coefficients, trim the degree."""
    c = np.asarray(c, dtype=complex)
    if c.ndim != 1 or c.size % 2 == 0:
        raise ValueError("internal coefficient array must have odd length")
    c = 0.5 * (c + np.conj(c[::-1]))
    mx = float(np.max(np.abs(c))) if c.size else 0.0
    if mx == 0.0 or not math.isfinite(mx):
        if not math.isfinite(mx):
            raise ValueError("non-finite coefficient encountered")
        return np.zeros(1, dtype=complex)
    c = np.where(np.abs(c) <= _PRUNE_REL * mx, 0.0, c)
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        return np.zeros(1, dtype=complex)
    mid = c.size // 2
    reach = max(mid - nz[0], nz[-1] - mid)
    return c[mid - reach : mid + reach + 1]


class TrigPoly:
    """Finite real Fourier series on the 2*pi lattice."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: np.ndarray):
        # coeffs: centred complex array c_{-N}..c_N; prefer the classmethods.
        c = _normalize(coeffs)
        c.setflags(write=False)
        object.__setattr__(self, "_c", c)

    def __setattr__(self, name, value):
        raise AttributeError("TrigPoly is immutable")

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls) -> "TrigPoly":
        return cls(np.zeros(1, dtype=complex))

    @classmethod
    def constant(cls, value: float) -> "TrigPoly":
        return cls(np.array([complex(value)]))

    @classmethod
    def cosine(cls, n: int, amplitude: float = 1.0) -> "TrigPoly":
        """amplitude * cos(n x)."""
        return cls.from_terms({n: (amplitude, 0.0)})

    @classmethod
    def sine(cls, n: int, amplitude: float = 1.0) -> "TrigPoly":
        """amplitude * sin(n x)."""
        return cls.from_terms({n: (0.0, amplitude)})

    @classmethod
    def from_terms(cls, terms: dict[int, tuple[float, float]]) -> "TrigPoly":
        """Build from a map frequency -> (cosine coeff a_n, sine coeff b_n)."""
        if not terms:
            return cls.zero()
        n_max = max(terms)
        if n_max < 0 or min(terms) < 0:
            raise ValueError("frequencies must be non-negative")
        c = np.zeros(2 * n_max + 1, dtype=complex)
        for n, (a, b) in terms.items():
            if n == 0:
                if b != 0.0:
                    raise ValueError("sine coefficient b_0 does not exist")
                c[n_max] += a
            else:
                c[n_max + n] += 0.5 * (a - 1j * b)
                c[n_max - n] += 0.5 * (a + 1j * b)
        return cls(c)

    # ------------------------------------------------------------------
    # structure
    # ------------------------------------------------------------------

    @property
    def degree(self) -> int:
        """Largest frequency with a nonzero coefficient (0 for the zero poly)."""
        return self._c.size // 2

    @property
    def is_zero(self) -> bool:
        return self._c.size == 1 and self._c[0] == 0.0

    def coeff(self, n: int) -> tuple[float, float]:
        """(a_n, b_n) for frequency n >= 0."""
        if n < 0:
            raise ValueError("frequency must be non-negative")
        mid = self._c.size // 2
        if n > mid:
            return (0.0, 0.0)
        if n == 0:
            return (float(self._c[mid].real) + 0.0, 0.0)
        ck = self._c[mid + n]
        return (2.0 * float(ck.real) + 0.0, -2.0 * float(ck.imag) + 0.0)

    @property
    def coeffs(self) -> dict[int, tuple[float, float]]:
        out = {}
        for n in range(self.degree + 1):
            a, b = self.coeff(n)
            if a != 0.0 or b != 0.0:
                out[n] = (a, b)
        return out

    @property
    def coeff_scale(self) -> float:
        """sum_n |a_n| + |b_n|, the natural scale for tolerances."""
        mid = self._c.size // 2
        a0 = abs(float(self._c[mid].real))
        tail = self._c[mid + 1 :]
        return a0 + 2.0 * float(np.sum(np.abs(tail.real)) + np.sum(np.abs(tail.imag)))

    @property
    def is_pi_periodic(self) -> bool:
        """True iff every nonzero frequency is even."""
        mid = self._c.size // 2
        odd = self._c[mid + 1 :: 2]
        return not np.any(odd)

    @property
    def is_pi_antiperiodic(self) -> bool:
        """True iff every nonzero frequency is odd."""
        mid = self._c.size // 2
        even = self._c[mid::2]
        return not np.any(even)

    @property
    def is_even_function(self) -> bool:
        """True iff p(-x) = p(x), i.e. all sine coefficients vanish."""
        mx = float(np.max(np.abs(self._c)))
        if mx == 0.0:
            return True
        return float(np.max(np.abs(self._c.imag))) <= 1e-10 * mx

    @property
    def is_odd_function(self) -> bool:
        """True iff p(-x) = -p(x), i.e. all cosine coefficients vanish."""
        mx = float(np.max(np.abs(self._c)))
        if mx == 0.0:
            return True
        return float(np.max(np.abs(self._c.real))) <= 1e-10 * mx

    # ------------------------------------------------------------------
    # ring operations and calculus
    # ------------------------------------------------------------------

    def _padded(self, reach: int) -> np.ndarray:
        mid = self._c.size // 2
        if reach == mid:
            return self._c
        out = np.zeros(2 * reach + 1, dtype=complex)
        out[reach - mid : reach + mid + 1] = self._c
        return out

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = TrigPoly.constant(float(other))
        if not isinstance(other, TrigPoly):
            return NotImplemented
        reach = max(self.degree, other.degree)
        return TrigPoly(self._padded(reach) + other._padded(reach))

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly(-self._c)

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = TrigPoly.constant(float(other))
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return TrigPoly(self._c * float(other))
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return TrigPoly(np.convolve(self._c, other._c))

    __rmul__ = __mul__

    def derivative(self) -> "TrigPoly":
        """Term-wise derivative."""
        mid = self._c.size // 2
        k = np.arange(-mid, mid + 1)
        return TrigPoly(1j * k * self._c)

    def __call__(self, x):
        """Evaluate at x (scalar or ndarray, radians)."""
        xs = np.asarray(x, dtype=float)
        mid = self._c.size // 2
        val = np.full(xs.shape, float(self._c[mid].real))
        if mid:
            ks = np.arange(1, mid + 1)
            phases = np.exp(1j * np.multiply.outer(xs, ks))
            val = val + 2.0 * np.real(phases @ self._c[mid + 1 :])
        if xs.ndim == 0:
            return float(val)
        return val

    # ------------------------------------------------------------------

    def __repr__(self):
        parts = []
        for n, (a, b) in self.coeffs.items():
            if a:
                parts.append(f"{a:g}*cos({n}x)" if n else f"{a:g}")
            if b:
                parts.append(f"{b:g}*sin({n}x)")
        return "TrigPoly(" + (" + ".join(parts) if parts else "0") + ")"


class GaugedRational:
    """A function e^{gauge*cos(2x)} * num(x) / den(x) with TrigPoly num, den.

    The denominator is the constant 1 unless the value arose from a Crum
    quotient.  Evaluating at a real zero of the denominator raises rather
    than returning an infinity.
    """

    __slots__ = ("num", "den", "gauge")

    def __init__(self, num: TrigPoly, den: TrigPoly | None = None, gauge: float = 0.0):
        if den is None:
            den = TrigPoly.constant(1.0)
        if den.is_zero:
            raise ValueError("denominator is identically zero")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "gauge", float(gauge))

    def __setattr__(self, name, value):
        raise AttributeError("GaugedRational is immutable")

    @property
    def has_unit_denominator(self) -> bool:
        return self.den.degree == 0 and abs(self.den.coeff(0)[0] - 1.0) <= 1e-12

    def __call__(self, x):
        xs = np.asarray(x, dtype=float)
        dv = self.den(xs)
        floor = 1e-10 * max(1.0, self.den.coeff_scale)
        if np.min(np.abs(dv)) <= floor:
            bad = xs if xs.ndim == 0 else xs.ravel()[int(np.argmin(np.abs(dv)))]
            raise ZeroDivisionError(
                f"evaluation at x={float(bad):.12g} hits a real zero of the denominator"
            )
        val = np.exp(self.gauge * np.cos(2.0 * xs)) * self.num(xs) / dv
        if xs.ndim == 0:
            return float(val)
        return val

    def derivative(self) -> "GaugedRational":
        """d/dx, again of gauged-rational form (denominator squared)."""
        two_sin = TrigPoly.sine(2, -2.0 * self.gauge)  # d/dx gauge*cos2x
        num = (two_sin * self.num + self.num.derivative()) * self.den
        num = num - self.num * self.den.derivative()
        return GaugedRational(num, self.den * self.den, self.gauge)

    def __repr__(self):
        return f"GaugedRational(gauge={self.gauge:g}, num={self.num!r}, den={self.den!r})"


# ----------------------------------------------------------------------
# wronskians
# ----------------------------------------------------------------------


def wronskian(fs: Iterable[TrigPoly]) -> TrigPoly:
    """Wronskian W(f_1, .., f_k), expanded symbolically.

    Rows are the 0th..(k-1)th derivatives in ascending order, which fixes
    the overall sign convention.  Expansion runs over column subsets so
    the cost is k * 2^(k-1) polynomial products instead of k!.
    """
    fs = list(fs)
    k = len(fs)
    if k == 0:
        raise ValueError("wronskian needs at least one function")
    if k == 1:
        return fs[0]
    table = [fs]
    for _ in range(k - 1):
        table.append([f.derivative() for f in table[-1]])

    minors: dict[int, TrigPoly] = {0: TrigPoly.constant(1.0)}

    def minor(mask: int) -> TrigPoly:
        got = minors.get(mask)
        if got is not None:
            return got
        row = bin(mask).count("1") - 1
        acc = TrigPoly.zero()
        pos = 0
        for j in range(k):
            bit = 1 << j
            if not mask & bit:
                continue
            term = table[row][j] * minor(mask ^ bit)
            acc = acc + term if (row + pos) % 2 == 0 else acc - term
            pos += 1
        minors[mask] = acc
        return acc

    return minor((1 << k) - 1)


def gauged_wronskian(fs: Iterable[GaugedRational]) -> GaugedRational:
    """Wronskian of k gauged functions sharing one gauge and unit denominator.

    The common exponential factor pulls out of the determinant, so the
    result has gauge k*g and a plain TrigPoly wronskian as numerator.
    """
    fs = list(fs)
    if not fs:
        raise ValueError("gauged_wronskian needs at least one function")
    gauge = fs[0].gauge
    for f in fs:
        if f.gauge != gauge:
            raise ValueError("mixed gauges in gauged_wronskian")
        if not f.has_unit_denominator:
            raise ValueError("gauged_wronskian requires unit denominators")
    if len(fs) == 1:
        return fs[0]
    return GaugedRational(wronskian([f.num for f in fs]), gauge=len(fs) * gauge)


# ----------------------------------------------------------------------
# real zeros and margins
# ----------------------------------------------------------------------


def real_zeros(
    p: TrigPoly,
    circle_tol: float = 1e-8,
    dedup_tol: float = 1e-9,
) -> list[RealZero]:
    """All real zeros of p in [0, 2*pi), each with a multiplicity flag.

    Substitutes z = e^{ix}: the zeros of p on the real line are the roots
    of the degree-2N complex polynomial z^N p(x(z)) on the unit circle.
    Roots are taken from the companion matrix (numpy.roots) and kept when
    ``| |z| - 1 | <= circle_tol``; every kept argument is polished by a
    guarded Newton step and certified against
    |p(x)| <= 1e-8 * sum|coeffs|.  A double real zero makes the companion
    pair split off the circle by ~sqrt(eps), so near-circle roots within
    1e-4 are also polished (toward the stationary point when p' is flat)
    and admitted iff they pass the same certification.
    """
    if p.is_zero:
        raise ValueError("real_zeros of the zero polynomial is undefined")
    if p.degree == 0:
        return []
    scale = p.coeff_scale
    dp = p.derivative()
    ddp = dp.derivative()
    dp_scale = max(1.0, dp.coeff_scale)
    ddp_scale = max(1.0, ddp.coeff_scale)

    def polish(x: float) -> float:
        for _ in range(4):  # plain Newton while the root looks simple
            d = dp(x)
            if abs(d) < 1e-8 * dp_scale:
                break
            step = p(x) / d
            if abs(step) > 1e-3:
                break
            cand = (x - step) % _TWO_PI
            if abs(p(cand)) >= abs(p(x)):
                break
            x = cand
        if abs(dp(x)) <= 1e-7 * dp_scale:
            # Tangency: |p| is below rounding over a ~1e-8 window, so pin
            # the point by the stationary condition p'(x) = 0 instead.
            y = x
            for _ in range(4):
                dd = ddp(y)
                if abs(dd) < 1e-10 * ddp_scale:
                    break
                step = dp(y) / dd
                if abs(step) > 1e-3:
                    break
                cand = (y - step) % _TWO_PI
                if abs(dp(cand)) >= abs(dp(y)):
                    break
                y = cand
            if abs(p(y)) <= max(abs(p(x)), 1e-8 * scale):
                x = y
        return x

    coeffs = p._c[::-1]  # descending powers of z
    roots = np.roots(coeffs / np.max(np.abs(coeffs)))
    args = []
    for z in roots:
        if abs(abs(z) - 1.0) > max(circle_tol, 1e-4):
            continue
        x = polish(float(np.angle(z)) % _TWO_PI)
        if abs(p(x)) <= 1e-8 * scale:
            args.append(x)
    args.sort()

    zeros: list[RealZero] = []
    used: list[float] = []
    for x in args:
        if used and min(abs(x - used[-1]), _TWO_PI - abs(x - used[-1])) <= dedup_tol:
            continue
        if used and min(abs(x - used[0]), _TWO_PI - abs(x - used[0])) <= dedup_tol:
            continue
        used.append(x)
        multiple = abs(dp(x)) <= 1e-7 * dp_scale
        zeros.append(RealZero(x, multiple))
    return zeros


def min_abs_on_period(p: TrigPoly, grid: int = 4096) -> tuple[float, float]:
    """Global minimum of |p| over [0, 2*pi) and its location.

    Dense grid scan (at least 4096 points) followed by local refinement
    to 1e-12 in x.  When the minimizing cell contains a sign change the
    minimum is a zero crossing and is refined by root bracketing (value
    minimization alone cannot localize x below ~sqrt(eps)); otherwise the
    smooth minimum of p^2 is refined by bounded minimization.
    """
    n = max(int(grid), 4096, 32 * (p.degree + 1))
    xs = np.arange(n) * (_TWO_PI / n)
    vals = np.abs(p(xs))
    i = int(np.argmin(vals))
    h = _TWO_PI / n
    lo, hi = xs[i] - h, xs[i] + h

    candidates = [(float(vals[i]), float(xs[i]))]
    f_lo, f_mid, f_hi = p(lo), p(xs[i]), p(hi)
    for a, b, fa, fb in ((lo, xs[i], f_lo, f_mid), (xs[i], hi, f_mid, f_hi)):
        if fa == 0.0:
            candidates.append((0.0, float(a % _TWO_PI)))
        elif (fa > 0) != (fb > 0):
            root = float(brentq(p, a, b, xtol=1e-13, rtol=8.9e-16))
            candidates.append((abs(p(root)), root % _TWO_PI))
    res = minimize_scalar(
        lambda t: p(float(t)) ** 2,
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    candidates.append((abs(p(float(res.x))), float(res.x) % _TWO_PI))
    return min(candidates)
