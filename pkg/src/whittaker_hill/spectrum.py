"""Quasi-exactly solvable sector of the Whittaker-Hill operator.

The gauge substitution psi = phi * e^{alpha cos 2x} turns the Hill
equation with potential -(4 alpha s cos 2x + 2 alpha^2 cos 4x) into an
eigenvalue problem for

    K = -D^2 + 4 alpha sin(2x) D - 4 (s-1) alpha cos(2x),

whose periodic (odd s) or anti-periodic (even s) trigonometric-polynomial
eigenfunctions are governed by finite tri-diagonal matrices.  This module
builds those matrices, solves them by Sturm-sequence bisection, and
reconstructs the eigenfunctions as TrigPolys.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InternalConsistencyError
from .trigpoly import GaugedRational, TrigPoly

_COINCIDENCE_TOL = 1e-9  # same-matrix eigenvalues closer than this are a defect


@dataclass(frozen=True)
class WHParams:
    """Coupling alpha > 0 and positive integer s of the Whittaker-Hill operator."""

    alpha: float
    s: int

    def __post_init__(self):
        if not (isinstance(self.s, (int, np.integer)) and self.s >= 1):
            raise ValueError(f"s must be a positive integer, got {self.s!r}")
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise ValueError(f"alpha must be finite and > 0, got {self.alpha!r}")

    @property
    def m(self) -> int:
        """Half the size of the solvable sector: (s-1)//2 for odd s, s//2 for even."""
        return (self.s - 1) // 2 if self.s % 2 else self.s // 2

    def potential_coefficients(self) -> TrigPoly:
        """The potential -(4 alpha s cos 2x + 2 alpha^2 cos 4x) as a TrigPoly."""
        return TrigPoly.from_terms(
            {2: (-4.0 * self.alpha * self.s, 0.0), 4: (-2.0 * self.alpha**2, 0.0)}
        )


@dataclass(frozen=True)
class TriDiag:
    """Tri-diagonal matrix in nu: entry k of the diagonal is (nu - d[k]).

    ``sub`` holds the sub-diagonal a_2..a_n and ``sup`` the super-diagonal
    c_1..c_{n-1} (1-based band labels).  All off-diagonal entries must be
    strictly positive (Jacobi property), which guarantees a real simple
    spectrum.
    """

    d: tuple[float, ...]
    sub: tuple[float, ...]
    sup: tuple[float, ...]

    def __post_init__(self):
        n = len(self.d)
        if len(self.sub) != max(n - 1, 0) or len(self.sup) != max(n - 1, 0):
            raise ValueError("band lengths must be n-1")
        if any(v <= 0.0 for v in self.sub) or any(v <= 0.0 for v in self.sup):
            raise ValueError("off-diagonal entries must be strictly positive")

    @property
    def n(self) -> int:
        return len(self.d)

    def dense(self, nu: float) -> np.ndarray:
        """The matrix evaluated at nu (for oracles and debugging)."""
        m = np.diag([nu - dk for dk in self.d])
        for i, (a, c) in enumerate(zip(self.sub, self.sup)):
            m[i + 1, i] = a
            m[i, i + 1] = c
        return m


def build_periodic_matrices(params: WHParams) -> tuple[TriDiag, TriDiag]:
    """The two solvable-sector matrices for odd s (pi-periodic problem).

    Returns (even_sector, odd_sector): the even sector acts on the cosine
    coefficients (A_0, A_2, .., A_{2m}) and has size m+1; the odd sector
    acts on (B_2, .., B_{2m}) and has size m.
    """
    if params.s % 2 == 0:
        raise ValueError("s is even; use build_antiperiodic_matrices")
    a, s, m = params.alpha, params.s, params.m
    d_even = tuple(4.0 * k * k for k in range(m + 1))
    sup_even = tuple(2.0 * a * (s + 2 * k + 1) for k in range(m))
    sub_even = tuple(
        4.0 * a * (s - 1) if k == 1 else 2.0 * a * (s - 2 * k + 1)
        for k in range(1, m + 1)
    )
    even = TriDiag(d_even, sub_even, sup_even)
    odd = TriDiag(d_even[1:], sub_even[1:], sup_even[1:])
    return even, odd


def build_antiperiodic_matrices(params: WHParams) -> tuple[TriDiag, TriDiag]:
    """The two solvable-sector matrices for even s (pi-antiperiodic problem).

    Returns (even_sector, odd_sector), both m x m.  The even sector acts on
    the cosine coefficients (C_1, C_3, ..) with first diagonal offset
    1 - 2*alpha*s; the odd sector acts on the sine coefficients with
    offset 1 + 2*alpha*s.
    """
    if params.s % 2 == 1:
        raise ValueError("s is odd; use build_periodic_matrices")
    a, s, m = params.alpha, params.s, params.m
    d_tail = tuple(float((2 * k - 1) ** 2) for k in range(2, m + 1))
    sup = tuple(2.0 * a * (s + 2 * k) for k in range(1, m))
    sub = tuple(2.0 * a * (s - 2 * k + 2) for k in range(2, m + 1))
    even = TriDiag((1.0 - 2.0 * a * s,) + d_tail, sub, sup)
    odd = TriDiag((1.0 + 2.0 * a * s,) + d_tail, sub, sup)
    return even, odd


# ----------------------------------------------------------------------
# Sturm-sequence eigen-solver
# ----------------------------------------------------------------------


def sturm_sequence(m: TriDiag, nu: float) -> tuple[list[float], int]:
    """Leading principal minors Delta_0..Delta_n of the matrix at nu.

    Delta_0 = 1, Delta_1 = nu - d_1 and
    Delta_k = (nu - d_k) Delta_{k-1} - c_{k-1} a_k Delta_{k-2}.

    Also returns the number of sign agreements between consecutive
    members, which equals the number of eigenvalues strictly below nu
    and drives the bisection bracketing.
    """
    deltas = [1.0]
    agreements = 0
    prev_sign = 1
    scale = 1.0  # power-of-two rescaling guard against overflow
    prev2, prev1 = 0.0, 1.0
    for k in range(m.n):
        q = m.sup[k - 1] * m.sub[k - 1] if k >= 1 else 0.0
        cur = (nu - m.d[k]) * prev1 - q * prev2
        deltas.append(cur * scale)
        sign = prev_sign if cur == 0.0 else (1 if cur > 0.0 else -1)
        if cur == 0.0:
            sign = -prev_sign  # eigenvalue at nu counts as not-below
        if sign == prev_sign:
            agreements += 1
        prev_sign = sign
        prev2, prev1 = prev1, cur
        big = max(abs(prev1), abs(prev2))
        if big > 1e250:
            prev1 *= 2.0**-512
            prev2 *= 2.0**-512
            scale *= 2.0**512
    return deltas, agreements


def _count_below(m: TriDiag, nu: float) -> int:
    return sturm_sequence(m, nu)[1]


def _char_poly_and_derivative(m: TriDiag, nu: float) -> tuple[float, float]:
    p2, p1 = 0.0, 1.0
    dp2, dp1 = 0.0, 0.0
    for k in range(m.n):
        q = m.sup[k - 1] * m.sub[k - 1] if k >= 1 else 0.0
        p = (nu - m.d[k]) * p1 - q * p2
        dp = p1 + (nu - m.d[k]) * dp1 - q * dp2
        p2, p1, dp2, dp1 = p1, p, dp1, dp
    return p1, dp1


def _gershgorin_bounds(m: TriDiag) -> tuple[float, float]:
    # discs of the symmetrized (similar) matrix with off-diagonals sqrt(c*a)
    g = [math.sqrt(c * a) for c, a in zip(m.sup, m.sub)]
    lo = math.inf
    hi = -math.inf
    for i, dk in enumerate(m.d):
        r = (g[i - 1] if i > 0 else 0.0) + (g[i] if i < m.n - 1 else 0.0)
        lo = min(lo, dk - r)
        hi = max(hi, dk + r)
    return lo - 1.0, hi + 1.0


def eigenvalues(m: TriDiag, tol: float = 1e-12) -> list[float]:
    """All eigenvalues of the Jacobi-type matrix, sorted ascending.

    Bisection on the Sturm sign-agreement count inside the Gershgorin
    enclosure, each root bracketed to width ``tol``, then polished by a
    few Newton steps on the characteristic polynomial.
    """
    if m.n == 0:
        return []
    lo0, hi0 = _gershgorin_bounds(m)
    out = []
    for j in range(m.n):
        lo, hi = lo0, hi0
        for _ in range(200):
            if hi - lo <= tol:
                break
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _count_below(m, mid) >= j + 1:
                hi = mid
            else:
                lo = mid
        nu = 0.5 * (lo + hi)
        for _ in range(4):  # Newton polish to round-off
            p, dp = _char_poly_and_derivative(m, nu)
            if dp == 0.0:
                break
            step = p / dp
            cand = nu - step
            if not (lo - tol <= cand <= hi + tol):
                break
            nu = cand
            if abs(step) <= 1e-16 * max(1.0, abs(nu)):
                break
        out.append(nu)
    return out


def eigenvector(m: TriDiag, nu: float, residual_tol: float = 1e-6) -> np.ndarray:
    """Kernel vector of the matrix at an eigenvalue nu.

    Forward three-term recursion seeded with first component 1 and
    normalized so the largest-magnitude component is +1; falls back to
    the backward recursion if the unused matrix row is not satisfied.
    Raises ValueError when nu is not an eigenvalue within tolerance.
    """
    n = m.n
    if n == 0:
        raise ValueError("empty matrix has no eigenvectors")

    def forward() -> tuple[np.ndarray, float]:
        v = np.zeros(n)
        v[0] = 1.0
        if n > 1:
            v[1] = -(nu - m.d[0]) / m.sup[0]
            for k in range(1, n - 1):
                v[k + 1] = -(m.sub[k - 1] * v[k - 1] + (nu - m.d[k]) * v[k]) / m.sup[k]
        v = v / v[np.argmax(np.abs(v))]
        if n == 1:
            r = abs(nu - m.d[0])
            rs = max(1.0, abs(nu - m.d[0]) + 1.0)
        else:
            r = abs(m.sub[-1] * v[-2] + (nu - m.d[-1]) * v[-1])
            rs = max(1.0, abs(m.sub[-1]) + abs(nu - m.d[-1]))
        return v, r / rs

    def backward() -> tuple[np.ndarray, float]:
        v = np.zeros(n)
        v[-1] = 1.0
        if n > 1:
            v[-2] = -(nu - m.d[-1]) / m.sub[-1]
            for k in range(n - 2, 0, -1):
                v[k - 1] = -(m.sup[k] * v[k + 1] + (nu - m.d[k]) * v[k]) / m.sub[k - 1]
        v = v / v[np.argmax(np.abs(v))]
        if n == 1:
            r = abs(nu - m.d[0])
            rs = max(1.0, abs(nu - m.d[0]) + 1.0)
        else:
            r = abs((nu - m.d[0]) * v[0] + m.sup[0] * v[1])
            rs = max(1.0, abs(m.sup[0]) + abs(nu - m.d[0]))
        return v, r / rs

    v, res = forward()
    if res > residual_tol and n > 1:
        v2, res2 = backward()
        if res2 < res:
            v, res = v2, res2
    if res > residual_tol:
        raise ValueError(
            f"nu={nu!r} is not an eigenvalue (relative residual {res:.3e})"
        )
    return v


# ----------------------------------------------------------------------
# solvable spectrum
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralEntry:
    """One solvable eigenvalue with its eigenfunction.

    ``index`` is the 0-based position in increasing nu; ``label`` is the
    conventional numbering used by cluster sets (0..2m for odd s, 1..2m
    for even s).  ``lam`` is the Hill-equation eigenvalue nu - 2 alpha^2.
    """

    index: int
    label: int
    nu: float
    lam: float
    parity: str  # "even" | "odd"
    phi: TrigPoly


@dataclass(frozen=True)
class SolvableSpectrum:
    params: WHParams
    entries: tuple[SpectralEntry, ...] = field(repr=False)

    @property
    def nus(self) -> np.ndarray:
        return np.array([e.nu for e in self.entries])

    @property
    def lams(self) -> np.ndarray:
        return np.array([e.lam for e in self.entries])

    def by_label(self, label: int) -> SpectralEntry:
        offset = 0 if self.params.s % 2 else 1
        i = label - offset
        if not 0 <= i < len(self.entries):
            raise ValueError(f"label {label} out of range for s={self.params.s}")
        return self.entries[i]

    def __len__(self):
        return len(self.entries)


def _phi_from_vector(v: np.ndarray, kind: str) -> TrigPoly:
    if kind == "cos_even":  # A_0 + sum A_{2k} cos 2kx
        return TrigPoly.from_terms({2 * k: (float(c), 0.0) for k, c in enumerate(v)})
    if kind == "sin_even":  # sum B_{2k} sin 2kx, k >= 1
        return TrigPoly.from_terms({2 * (k + 1): (0.0, float(c)) for k, c in enumerate(v)})
    if kind == "cos_odd":  # sum C_{2k-1} cos (2k-1)x
        return TrigPoly.from_terms({2 * k + 1: (float(c), 0.0) for k, c in enumerate(v)})
    if kind == "sin_odd":
        return TrigPoly.from_terms({2 * k + 1: (0.0, float(c)) for k, c in enumerate(v)})
    raise ValueError(kind)


def solvable_spectrum(params: WHParams) -> SolvableSpectrum:
    """The full solvable sector for (alpha, s), sorted by nu.

    Eigenvalues of the two sector matrices are merged by the interlacing
    order (even sector first), which the theory guarantees to coincide
    with the numeric sort; a violation beyond tolerance raises
    InternalConsistencyError.  Parities alternate starting with an even
    eigenfunction.
    """
    odd_s = params.s % 2 == 1
    if odd_s:
        even_m, odd_m = build_periodic_matrices(params)
        kinds = ("cos_even", "sin_even")
    else:
        even_m, odd_m = build_antiperiodic_matrices(params)
        kinds = ("cos_odd", "sin_odd")

    nus_even = eigenvalues(even_m)
    nus_odd = eigenvalues(odd_m)
    for nus in (nus_even, nus_odd):
        for a, b in zip(nus, nus[1:]):
            if b - a < _COINCIDENCE_TOL:
                raise InternalConsistencyError(
                    f"eigenvalues {a!r} and {b!r} of one sector matrix coincide"
                )

    merged: list[tuple[float, str, TriDiag, str]] = []
    for i in range(len(nus_even) + len(nus_odd)):
        j = i // 2
        if i % 2 == 0:
            merged.append((nus_even[j], "even", even_m, kinds[0]))
        else:
            merged.append((nus_odd[j], "odd", odd_m, kinds[1]))
    span = max(abs(v[0]) for v in merged) if merged else 1.0
    for (a, *_), (b, *_) in zip(merged, merged[1:]):
        if b < a - max(_COINCIDENCE_TOL, 1e-14 * span):
            raise InternalConsistencyError(
                f"interlacing violated: nu={b!r} follows nu={a!r}"
            )

    offset = 0 if odd_s else 1
    entries = []
    shift = 2.0 * params.alpha**2
    for idx, (nu, parity, matrix, kind) in enumerate(merged):
        phi = _phi_from_vector(eigenvector(matrix, nu), kind)
        ok = phi.is_pi_periodic if odd_s else phi.is_pi_antiperiodic
        if not ok or (parity == "even") != phi.is_even_function:
            raise InternalConsistencyError(
                f"eigenfunction at nu={nu!r} has the wrong symmetry class"
            )
        entries.append(
            SpectralEntry(
                index=idx,
                label=idx + offset,
                nu=nu,
                lam=nu - shift,
                parity=parity,
                phi=phi,
            )
        )
    return SolvableSpectrum(params=params, entries=tuple(entries))


def gauged_eigenfunction(spec: SolvableSpectrum, index: int) -> GaugedRational:
    """psi = phi * e^{alpha cos 2x}, the Hill-equation eigenfunction at lam."""
    if not 0 <= index < len(spec.entries):
        raise ValueError(f"index {index} out of range")
    return GaugedRational(spec.entries[index].phi, gauge=spec.params.alpha)


def apply_gauged_hamiltonian(phi: TrigPoly, params: WHParams) -> TrigPoly:
    """-phi'' + 4 alpha sin(2x) phi' - 4 (s-1) alpha cos(2x) phi, symbolically."""
    a = params.alpha
    first = phi.derivative()
    second = first.derivative()
    drift = TrigPoly.sine(2, 4.0 * a) * first
    well = TrigPoly.cosine(2, -4.0 * (params.s - 1) * a) * phi
    return -second + drift + well


def inner_product(p: TrigPoly, q: TrigPoly, alpha: float, nodes: int = 2048) -> float:
    """Weighted scalar product int_0^pi p q e^{2 alpha cos 2x} dx.

    Periodic trapezoid quadrature; spectrally accurate for the smooth
    pi-periodic integrands arising from one solvable sector.
    """
    if nodes < 1024:
        raise ValueError("use at least 1024 quadrature nodes")
    xs = np.arange(nodes) * (math.pi / nodes)
    vals = p(xs) * q(xs) * np.exp(2.0 * alpha * np.cos(2.0 * xs))
    return float(np.sum(vals) * (math.pi / nodes))


def free_spectrum(s: int) -> list[float]:
    """The alpha -> 0 limit of the solvable eigenvalues (analytic oracle).

    Odd s = 2m+1: 0, 4, 4, .., 4m^2, 4m^2.  Even s = 2m: 1, 1, .., (2m-1)^2.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    if s % 2:
        m = (s - 1) // 2
        out = [0.0]
        for k in range(1, m + 1):
            out += [4.0 * k * k] * 2
        return out
    m = s // 2
    out = []
    for k in range(1, m + 1):
        out += [float((2 * k - 1) ** 2)] * 2
    return out
