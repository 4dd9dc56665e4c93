"""Darboux/Crum transformations built on cluster sets of eigenfunctions.

A Darboux step removes (or relocates) spectral data of the Hill operator
using a wronskian of chosen eigenfunctions.  For the Whittaker-Hill
operator the index sets that give regular (pole-free) potentials are
exactly the *cluster* subsets: each pair {2i-1, 2i} enters wholly or not
at all, plus optionally the singleton {0} when s is odd.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InternalConsistencyError, SingularPotentialError
from .floquet import PotentialFn
from .spectrum import SolvableSpectrum, WHParams
from .trigpoly import TrigPoly, min_abs_on_period, real_zeros, wronskian


@dataclass(frozen=True)
class ClusterSet:
    """A subset of solvable-sector labels, with its cluster property.

    Valid labels are {0..2m} for odd s and {1..2m} for even s.  The set
    may violate the cluster property (``is_cluster`` is then False);
    regularity of the associated wronskian is guaranteed only for true
    clusters.
    """

    indices: tuple[int, ...]
    s: int

    def __init__(self, indices, s: int):
        idx = tuple(sorted(set(int(i) for i in indices)))
        s = int(s)
        if s < 1:
            raise ValueError("s must be a positive integer")
        m = (s - 1) // 2 if s % 2 else s // 2
        lo = 0 if s % 2 else 1
        for i in idx:
            if not lo <= i <= 2 * m:
                raise ValueError(
                    f"index {i} outside the solvable sector {{{lo},..,{2 * m}}} for s={s}"
                )
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "s", s)

    @property
    def k(self) -> int:
        return len(self.indices)

    @property
    def m(self) -> int:
        return (self.s - 1) // 2 if self.s % 2 else self.s // 2

    @property
    def pairs(self) -> tuple[int, ...]:
        """The pair numbers i whose cluster {2i-1, 2i} is fully contained."""
        return tuple(
            i
            for i in range(1, self.m + 1)
            if 2 * i - 1 in self.indices and 2 * i in self.indices
        )

    @property
    def is_cluster(self) -> bool:
        """True iff each pair {2i-1, 2i} is contained wholly or not at all."""
        members = set(self.indices)
        for i in range(1, self.m + 1):
            if (2 * i - 1 in members) != (2 * i in members):
                return False
        return True

    def __contains__(self, label: int) -> bool:
        return label in self.indices

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)


def enumerate_clusters(s: int, include_zero: bool = False) -> list[ClusterSet]:
    """All nonempty cluster subsets of {1,..,2m}, in pair-mask counting order.

    With ``include_zero`` (odd s only) the sets containing the singleton
    {0} are enumerated as well, for 2^(m+1) - 1 sets in total; the full
    set {0,..,2m} reproduces the original potential shifted by pi/2.
    """
    if s < 1:
        raise ValueError("s must be a positive integer")
    m = (s - 1) // 2 if s % 2 else s // 2
    with_zero = include_zero and s % 2 == 1
    units: list[tuple[int, ...]] = []
    if with_zero:
        units.append((0,))
    units += [(2 * i - 1, 2 * i) for i in range(1, m + 1)]
    out = []
    for mask in range(1, 1 << len(units)):
        members: list[int] = []
        for bit, unit in enumerate(units):
            if mask >> bit & 1:
                members.extend(unit)
        out.append(ClusterSet(members, s))
    return out


def cluster_wronskian(spec: SolvableSpectrum, cluster: ClusterSet) -> TrigPoly:
    """W(phi_{i_1}, .., phi_{i_k}) for the labels in the set, ascending.

    For a true cluster the result is pi-periodic (asserted); the empty
    set gives the constant 1.
    """
    if cluster.s != spec.params.s:
        raise ValueError("cluster set belongs to a different s")
    if cluster.k == 0:
        return TrigPoly.constant(1.0)
    phis = [spec.by_label(i).phi for i in cluster.indices]
    v = wronskian(phis)
    if cluster.is_cluster and not v.is_pi_periodic:
        raise InternalConsistencyError(
            "cluster wronskian failed to land in the pi-periodic class"
        )
    return v


def regularity(v: TrigPoly) -> tuple[bool, float]:
    """(has no real zeros, min |v| over a period) for a wronskian.

    Unit-circle rooting is authoritative for the yes/no answer and the
    dense-grid margin is reported alongside; if the two disagree, or the
    margin is too small to certify either way, an error is raised rather
    than guessing.
    """
    if v.is_zero:
        raise ValueError("regularity of the zero polynomial is undefined")
    zeros = real_zeros(v)
    margin, _ = min_abs_on_period(v)
    floor = 1e-8 * max(1.0, v.coeff_scale)
    if zeros:
        if margin > floor:
            raise InternalConsistencyError(
                f"rooting found a zero but the grid margin is {margin:.3e}"
            )
        return False, margin
    if margin <= floor:
        raise InternalConsistencyError(
            f"margin {margin:.3e} is too small to certify regularity"
        )
    return True, margin


@dataclass(frozen=True)
class GapEdgePrediction:
    """Predicted side of the Dirichlet eigenvalue in one open gap."""

    pair: int  # solvable pair number i (gap between labels 2i-1, 2i)
    gap_index: int  # global gap number: 2i for odd s, 2i-1 for even s
    edge: str  # "left" | "right"


def dirichlet_edge_prediction(cluster: ClusterSet, s: int) -> tuple[GapEdgePrediction, ...]:
    """Which edge of each open gap carries the Dirichlet eigenvalue.

    Baseline: left edge for odd s (the lower edge eigenfunction is odd),
    right edge for even s.  Transforming by a cluster flips exactly the
    gaps whose pair {2i-1, 2i} is contained in the set.
    """
    if cluster.s != s:
        raise ValueError("cluster set belongs to a different s")
    if not cluster.is_cluster:
        raise ValueError(
            "Dirichlet edges are only predicted for cluster sets: each pair "
            "{2i-1, 2i} must be contained wholly or not at all"
        )
    odd_s = s % 2 == 1
    baseline = "left" if odd_s else "right"
    flipped = "right" if odd_s else "left"
    out = []
    for i in range(1, cluster.m + 1):
        edge = flipped if i in cluster.pairs else baseline
        gap_index = 2 * i if odd_s else 2 * i - 1
        out.append(GapEdgePrediction(pair=i, gap_index=gap_index, edge=edge))
    return tuple(out)


@dataclass(frozen=True)
class TransformedOperator:
    """A Darboux-transformed Whittaker-Hill operator for one index set."""

    params: WHParams
    cluster: ClusterSet
    wronskian: TrigPoly = field(repr=False)
    regular: bool
    margin: float
    spectrum_map: tuple[GapEdgePrediction, ...] | None
    first_zero: float | None = None


def darboux_transform(spec: SolvableSpectrum, cluster: ClusterSet) -> TransformedOperator:
    """Assemble the transform record: wronskian, regularity, edge map."""
    v = cluster_wronskian(spec, cluster)
    regular, margin = regularity(v)
    first_zero = None if regular else real_zeros(v)[0].x
    spectrum_map = (
        dirichlet_edge_prediction(cluster, spec.params.s) if cluster.is_cluster else None
    )
    return TransformedOperator(
        params=spec.params,
        cluster=cluster,
        wronskian=v,
        regular=regular,
        margin=margin,
        spectrum_map=spectrum_map,
        first_zero=first_zero,
    )


def transformed_potential(op: TransformedOperator) -> PotentialFn:
    """The transformed potential as a callable, pi-periodic and smooth.

        v(x) = 4 alpha (2k - s) cos 2x - 2 alpha^2 cos 4x
               - 2 (V''(x) V(x) - V'(x)^2) / V(x)^2

    with V the cluster wronskian.  Raises SingularPotentialError when V
    has a real zero (non-regular set).
    """
    if not op.regular:
        raise SingularPotentialError(
            f"index set {op.cluster.indices} gives a singular potential: "
            f"wronskian vanishes near x={op.first_zero:.12g}"
        )
    alpha, s = op.params.alpha, op.params.s
    base = TrigPoly.from_terms(
        {2: (4.0 * alpha * (2 * op.cluster.k - s), 0.0), 4: (-2.0 * alpha**2, 0.0)}
    )
    v = op.wronskian
    vp = v.derivative()
    vpp = vp.derivative()

    def evaluator(x):
        vv = v(x)
        return base(x) - 2.0 * (vpp(x) * vv - vp(x) ** 2) / (vv * vv)

    tag = (
        f"darboux s={s} alpha={alpha:g} "
        f"I={{{','.join(str(i) for i in op.cluster.indices)}}}"
    )
    return PotentialFn(evaluator, description=tag)


def _psi_parts(spec: SolvableSpectrum, label: int) -> TrigPoly:
    return spec.by_label(label).phi


def crum_eigenfunction(spec: SolvableSpectrum, cluster: ClusterSet, j: int):
    """Crum quotient eigenfunction of the transformed operator at lam_j.

    For j outside the set, psi_tilde = W(psi_j, psi_I) / W(psi_I); the
    exponential factors collapse so the result is

        e^{alpha cos 2x} * W(phi_j, phi_I) / V_I.

    The empty set returns psi_j unchanged.
    """
    from .trigpoly import GaugedRational

    if cluster.s != spec.params.s:
        raise ValueError("cluster set belongs to a different s")
    if j in cluster:
        raise ValueError(
            f"label {j} is inside the set; use crum_pair for the removed levels"
        )
    phi_j = _psi_parts(spec, j)
    alpha = spec.params.alpha
    if cluster.k == 0:
        return GaugedRational(phi_j, gauge=alpha)
    v = cluster_wronskian(spec, cluster)
    regular, _ = regularity(v)
    if not regular:
        raise SingularPotentialError(
            f"index set {cluster.indices} gives a singular transform"
        )
    num = wronskian([phi_j] + [_psi_parts(spec, i) for i in cluster.indices])
    return GaugedRational(num, v, gauge=alpha)


def crum_pair(spec: SolvableSpectrum, cluster: ClusterSet):
    """Eigenfunctions of the transformed operator at the removed levels.

    Only single-step formulas exist in closed form: for one pair cluster
    {2i-1, 2i} the functions psi_{2i}/W and psi_{2i-1}/W solve the
    transformed equation at lam_{2i-1} and lam_{2i} respectively; for the
    singleton {0} the inverse 1/psi_0 solves it at lam_0.  Returned in
    ascending order of their eigenvalues, with gauge -alpha.
    """
    from .trigpoly import GaugedRational

    if cluster.s != spec.params.s:
        raise ValueError("cluster set belongs to a different s")
    if not cluster.is_cluster:
        raise ValueError("crum_pair needs a cluster set")
    alpha = spec.params.alpha
    if cluster.indices == (0,):
        phi0 = _psi_parts(spec, 0)
        return (GaugedRational(TrigPoly.constant(1.0), phi0, gauge=-alpha),)
    if cluster.k != 2 or len(cluster.pairs) != 1:
        raise ValueError(
            "closed forms exist only for a single pair cluster or the "
            "singleton {0}; multi-cluster removed levels have no one-step formula"
        )
    i = cluster.pairs[0]
    lo, hi = _psi_parts(spec, 2 * i - 1), _psi_parts(spec, 2 * i)
    v = cluster_wronskian(spec, cluster)
    regular, _ = regularity(v)
    if not regular:
        raise SingularPotentialError(
            f"index set {cluster.indices} gives a singular transform"
        )
    at_lo = GaugedRational(hi, v, gauge=-alpha)  # eigenvalue lam_{2i-1}
    at_hi = GaugedRational(lo, v, gauge=-alpha)  # eigenvalue lam_{2i}
    return (at_lo, at_hi)
