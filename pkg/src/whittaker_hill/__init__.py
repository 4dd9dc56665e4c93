"""Spectral toolkit for the Whittaker-Hill operator.

Exact trigonometric-polynomial algebra, the quasi-exactly solvable
spectrum, Darboux/Crum transformed semifinite-gap potentials, and an
independent Floquet/monodromy verification layer.
"""

from .errors import IntegrationError, InternalConsistencyError, SingularPotentialError
from .trigpoly import (
    GaugedRational,
    RealZero,
    TrigPoly,
    gauged_wronskian,
    min_abs_on_period,
    real_zeros,
    wronskian,
)
from .spectrum import (
    SolvableSpectrum,
    SpectralEntry,
    TriDiag,
    WHParams,
    apply_gauged_hamiltonian,
    build_antiperiodic_matrices,
    build_periodic_matrices,
    eigenvalues,
    eigenvector,
    free_spectrum,
    gauged_eigenfunction,
    inner_product,
    solvable_spectrum,
    sturm_sequence,
)
from .darboux import (
    ClusterSet,
    GapEdgePrediction,
    TransformedOperator,
    cluster_wronskian,
    crum_eigenfunction,
    crum_pair,
    darboux_transform,
    dirichlet_edge_prediction,
    enumerate_clusters,
    regularity,
    transformed_potential,
)
from .floquet import (
    GapRecord,
    GapReport,
    Monodromy,
    PotentialFn,
    band_edges,
    dirichlet_eigenvalues,
    discriminant_scan,
    discriminants,
    free_potential,
    monodromy,
    whittaker_hill_potential,
)

__version__ = "0.1.0"

__all__ = [
    "ClusterSet",
    "GapEdgePrediction",
    "GapRecord",
    "GapReport",
    "GaugedRational",
    "IntegrationError",
    "InternalConsistencyError",
    "Monodromy",
    "PotentialFn",
    "RealZero",
    "SingularPotentialError",
    "SolvableSpectrum",
    "SpectralEntry",
    "TransformedOperator",
    "TriDiag",
    "TrigPoly",
    "WHParams",
    "apply_gauged_hamiltonian",
    "band_edges",
    "build_antiperiodic_matrices",
    "build_periodic_matrices",
    "cluster_wronskian",
    "crum_eigenfunction",
    "crum_pair",
    "darboux_transform",
    "dirichlet_edge_prediction",
    "dirichlet_eigenvalues",
    "discriminant_scan",
    "discriminants",
    "eigenvalues",
    "eigenvector",
    "enumerate_clusters",
    "free_potential",
    "free_spectrum",
    "gauged_eigenfunction",
    "gauged_wronskian",
    "inner_product",
    "min_abs_on_period",
    "monodromy",
    "real_zeros",
    "regularity",
    "solvable_spectrum",
    "sturm_sequence",
    "transformed_potential",
    "whittaker_hill_potential",
    "wronskian",
]
