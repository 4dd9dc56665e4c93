"""Floquet/monodromy verification layer for pi-periodic Hill operators.

Everything here treats the potential as a black-box callable, so band
structure, gap closure and Dirichlet eigenvalues computed from it are
independent of the symbolic machinery that produced the potential.

Monodromy matrices are stored in the fundamental-solution convention:
columns are (psi(pi), psi'(pi)) of the solutions with initial data (1,0)
and (0,1).  The trace (Hill discriminant) does not depend on the
convention.

Band edges are found through the even-potential factorization of the
discriminant.  Writing c, c', s, s' for the values at pi/2 of the
cosine-like and sine-like solutions and their derivatives,

    Delta(lam) - 2 = 4 s(lam) c'(lam),      Delta(lam) + 2 = 4 c(lam) s'(lam),

so every periodic/anti-periodic eigenvalue is a *simple* root of one of
four Sturm-Liouville families (Neumann/Dirichlet problems on [0, pi/2]).
Closed gaps are coincidences of two simple roots, which bisection
resolves to ~1e-10 -- far below any closure tolerance -- whereas a raw
tangency scan of Delta = +-2 could not certify them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .errors import IntegrationError, InternalConsistencyError
from .spectrum import WHParams

_PI = math.pi
_CHUNK = 2048


@dataclass(frozen=True)
class PotentialFn:
    """A pi-periodic real potential given by a point evaluator."""

    evaluator: Callable[[float], float]
    period: float = _PI
    description: str = ""

    def __post_init__(self):
        if abs(self.period - _PI) > 1e-12:
            raise ValueError("only the pi lattice is supported")
        xs = np.linspace(0.05, _PI - 0.05, 13)
        u0 = self.values(xs)
        u1 = self.values(xs + _PI)
        scale = max(1.0, float(np.max(np.abs(u0))))
        if not np.all(np.isfinite(u0)):
            raise ValueError("potential is not finite on [0, pi]")
        if float(np.max(np.abs(u1 - u0))) > 1e-10 * scale:
            raise ValueError("potential is not pi-periodic within 1e-10")

    def __call__(self, x: float) -> float:
        return float(self.evaluator(x))

    def values(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized evaluation with a scalar-only fallback."""
        xs = np.asarray(xs, dtype=float)
        try:
            out = np.asarray(self.evaluator(xs), dtype=float)
            if out.shape == xs.shape:
                return out
        except Exception:
            pass
        return np.array([float(self.evaluator(float(x))) for x in xs.ravel()]).reshape(
            xs.shape
        )

    def is_even(self, tol: float = 1e-9) -> bool:
        xs = np.linspace(0.03, _PI / 2 - 0.03, 11)
        scale = max(1.0, float(np.max(np.abs(self.values(xs)))))
        return float(np.max(np.abs(self.values(-xs) - self.values(xs)))) <= tol * scale


def free_potential() -> PotentialFn:
    """u = 0, the closed-form oracle potential."""
    return PotentialFn(lambda x: np.zeros_like(np.asarray(x, dtype=float)),
                       description="free")


def whittaker_hill_potential(params: WHParams) -> PotentialFn:
    """u(x) = -(4 alpha s cos 2x + 2 alpha^2 cos 4x)."""
    poly = params.potential_coefficients()
    return PotentialFn(
        poly, description=f"whittaker-hill s={params.s} alpha={params.alpha:g}"
    )


# ----------------------------------------------------------------------
# fundamental-system propagation
# ----------------------------------------------------------------------


def _propagate(
    u: PotentialFn,
    lams: np.ndarray,
    x_end: float,
    rtol: float,
    atol: float,
) -> np.ndarray:
    """Integrate the two-solution basis of psi'' = (u - lam) psi.

    Returns array (4, n): rows are psi_1, psi_1', psi_2, psi_2' at x_end
    for initial data (1,0) and (0,1), one column per lam.
    """
    lams = np.asarray(lams, dtype=float)
    n = lams.size
    if n == 0:
        return np.zeros((4, 0))
    if n > _CHUNK:
        parts = [
            _propagate(u, lams[i : i + _CHUNK], x_end, rtol, atol)
            for i in range(0, n, _CHUNK)
        ]
        return np.concatenate(parts, axis=1)

    ev = u.evaluator

    def rhs(x, y):
        ux = float(ev(x))
        y = y.reshape(4, n)
        out = np.empty_like(y)
        out[0] = y[1]
        out[1] = (ux - lams) * y[0]
        out[2] = y[3]
        out[3] = (ux - lams) * y[2]
        return out.ravel()

    y0 = np.zeros(4 * n)
    y0[:n] = 1.0
    y0[3 * n :] = 1.0
    res = solve_ivp(
        rhs,
        (0.0, x_end),
        y0,
        method="DOP853",
        rtol=rtol,
        atol=atol,
        t_eval=[x_end],
    )
    if not res.success:
        raise IntegrationError(f"monodromy integration failed: {res.message}")
    return res.y[:, -1].reshape(4, n)


@dataclass(frozen=True)
class Monodromy:
    """Fundamental matrix over one period and its trace (Hill discriminant)."""

    matrix: np.ndarray = field(repr=False)
    discriminant: float
    lam: float
    error_estimate: float  # |det M - 1|, the unimodularity defect


def monodromy(u: PotentialFn, lam: float, tol: float = 1e-8) -> Monodromy:
    """Monodromy matrix at lam, with |det M - 1| <= tol enforced.

    The integration tolerance starts near tol/100 and is tightened until
    the unimodularity defect meets tol; persistent failure raises
    IntegrationError carrying the achieved defect.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    rtol = min(max(tol * 1e-2, 1e-13), 1e-8)
    achieved = math.inf
    for _ in range(3):
        y = _propagate(u, np.array([lam]), _PI, rtol, rtol)
        m = np.array([[y[0, 0], y[2, 0]], [y[1, 0], y[3, 0]]])
        achieved = abs(float(np.linalg.det(m)) - 1.0)
        if achieved <= tol:
            return Monodromy(
                matrix=m,
                discriminant=float(m[0, 0] + m[1, 1]),
                lam=float(lam),
                error_estimate=achieved,
            )
        if rtol <= 1e-13:
            break
        rtol = max(rtol * 1e-2, 1e-13)
    raise IntegrationError(
        f"could not reach |det M - 1| <= {tol:g} at lam={lam!r}", achieved=achieved
    )


def discriminants(
    u: PotentialFn, lams: np.ndarray, rtol: float = 1e-11
) -> tuple[np.ndarray, np.ndarray]:
    """Batched Hill discriminants; returns (Delta values, |det - 1| defects)."""
    y = _propagate(u, np.asarray(lams, dtype=float), _PI, rtol, rtol)
    dets = y[0] * y[3] - y[1] * y[2]
    return y[0] + y[3], np.abs(dets - 1.0)


def discriminant_scan(
    u: PotentialFn,
    lambda_min: float,
    lambda_max: float,
    samples: int,
    rtol: float = 1e-11,
) -> np.ndarray:
    """Uniformly sampled (lam, Delta(lam)) table, ready for plotting."""
    if not lambda_min < lambda_max:
        raise ValueError("need lambda_min < lambda_max")
    if samples < 2:
        raise ValueError("need at least 2 samples")
    lams = np.linspace(lambda_min, lambda_max, samples)
    deltas, _ = discriminants(u, lams, rtol)
    return np.column_stack([lams, deltas])


# ----------------------------------------------------------------------
# band edges via the even-potential factorization
# ----------------------------------------------------------------------


def _half_period_values(u, lams, rtol, atol=None):
    return _propagate(u, lams, _PI / 2, rtol, rtol if atol is None else atol)


def _bisect_family_roots(
    u: PotentialFn,
    grid: np.ndarray,
    values: np.ndarray,
    rtol: float,
    xtol: float,
    x_end: float,
) -> list[list[float]]:
    """Roots of the four solution-value families on the grid, refined.

    ``values`` has shape (4, len(grid)); a sign change of row r between
    grid nodes brackets one simple root of family r.  All brackets are
    bisected together, one batched integration per halving.
    """
    brackets = []  # (family, lo, hi, f_lo)
    signs = np.sign(values)
    for fam in range(4):
        row = signs[fam]
        flips = np.nonzero(row[:-1] * row[1:] < 0)[0]
        for i in flips:
            brackets.append([fam, grid[i], grid[i + 1], values[fam, i]])
        for i in np.nonzero(row == 0)[0]:  # exact grid hit
            brackets.append([fam, grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)],
                             values[fam, max(i - 1, 0)]])

    for _ in range(80):
        open_idx = [i for i, (_, lo, hi, _) in enumerate(brackets) if hi - lo > xtol]
        if not open_idx:
            break
        mids = np.array([0.5 * (brackets[i][1] + brackets[i][2]) for i in open_idx])
        vals = _propagate(u, mids, x_end, rtol, rtol)
        for pos, i in enumerate(open_idx):
            fam, lo, hi, flo = brackets[i]
            fmid = vals[fam, pos]
            if fmid == 0.0 or (fmid > 0) == (flo > 0):
                brackets[i][1] = mids[pos]
                brackets[i][3] = fmid if fmid != 0.0 else flo
            else:
                brackets[i][2] = mids[pos]

    roots: list[list[float]] = [[], [], [], []]
    for fam, lo, hi, _ in brackets:
        roots[fam].append(0.5 * (lo + hi))
    for fam in range(4):
        roots[fam].sort()
        for a, b in zip(roots[fam], roots[fam][1:]):
            if b - a < 100 * xtol:
                raise IntegrationError(
                    f"unresolved root cluster in lam window [{a!r}, {b!r}]"
                )
    return roots


@dataclass(frozen=True)
class GapRecord:
    index: int
    left: float
    right: float
    width: float
    closed: bool


@dataclass(frozen=True)
class GapReport:
    """Bottom of the spectrum and the resolved gaps, in increasing order."""

    lambda0: float
    gaps: tuple[GapRecord, ...]

    def gap(self, index: int) -> GapRecord:
        for g in self.gaps:
            if g.index == index:
                return g
        raise KeyError(index)


def band_edges(
    u: PotentialFn,
    lambda_max: float,
    closure_tol: float = 1e-6,
    scan_points: int = 4096,
    rtol: float = 1e-12,
    bisect_tol: float = 1e-10,
) -> GapReport:
    """Locate all band/gap edges below lambda_max and classify closures.

    Gap n sits between bands n and n+1; its edges are periodic
    eigenvalues for even n and anti-periodic ones for odd n, one from an
    even (Neumann-type) and one from an odd (Dirichlet-type) eigenfunction
    family.  A gap is closed when the two families coincide within
    ``closure_tol``.  Requires an even potential (all potentials produced
    by this package are even).
    """
    if not u.is_even():
        raise ValueError("band_edges requires an even potential u(-x) = u(x)")
    xs = np.linspace(0.0, _PI, 257)
    lam_lo = float(np.min(u.values(xs))) - 0.5
    if lambda_max <= lam_lo:
        raise ValueError("lambda_max is below the bottom of the spectrum")

    grid = np.linspace(lam_lo, lambda_max, int(scan_points))
    values = _half_period_values(u, grid, rtol)
    # rows: 0 -> c = y_c(pi/2), 1 -> c', 2 -> s, 3 -> s'
    roots = _bisect_family_roots(u, grid, values, rtol, bisect_tol, _PI / 2)
    nn, dd, nd, dn = roots[1], roots[2], roots[0], roots[3]

    if not nn:
        raise IntegrationError("no periodic eigenvalue below lambda_max")
    lambda0 = nn[0]

    gaps = []
    n = 1
    while True:
        if n % 2:  # anti-periodic edges
            i = (n + 1) // 2
            if i > len(nd) or i > len(dn):
                break
            pair = (nd[i - 1], dn[i - 1])
        else:  # periodic edges
            i = n // 2
            if i + 1 > len(nn) - 1 + 1 or i > len(dd):
                break
            if i >= len(nn):
                break
            pair = (nn[i], dd[i - 1])
        left, right = min(pair), max(pair)
        width = right - left
        gaps.append(
            GapRecord(index=n, left=left, right=right, width=width,
                      closed=width < closure_tol)
        )
        n += 1

    prev = lambda0
    for g in gaps:
        if g.left < prev - 1e-7:
            raise InternalConsistencyError(
                f"gap {g.index} edges out of order: {g.left!r} below {prev!r}"
            )
        prev = g.right
    return GapReport(lambda0=lambda0, gaps=tuple(gaps))


def dirichlet_eigenvalues(
    u: PotentialFn,
    lambda_min: float,
    lambda_max: float,
    scan_points: int = 4096,
    rtol: float = 1e-12,
    bisect_tol: float = 1e-10,
) -> list[float]:
    """All lam in range with psi(pi; lam) = 0 for psi(0)=0, psi'(0)=1.

    These are the zeros of the monodromy entry M_12 in the fundamental
    convention; each is simple, so scan plus bisection suffices.
    """
    if not (math.isfinite(lambda_min) and math.isfinite(lambda_max)):
        raise ValueError("range bounds must be finite")
    if not lambda_min < lambda_max:
        raise ValueError("need lambda_min < lambda_max")
    grid = np.linspace(lambda_min, lambda_max, int(scan_points))
    values = _propagate(u, grid, _PI, rtol, rtol)
    roots = _bisect_family_roots(u, grid, values, rtol, bisect_tol, _PI)
    return roots[2]  # the y_s(pi) family
