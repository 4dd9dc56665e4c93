import math

import numpy as np
import pytest

from whittaker_hill.darboux import ClusterSet, darboux_transform, transformed_potential
from whittaker_hill.errors import IntegrationError
from whittaker_hill.floquet import (
    PotentialFn,
    band_edges,
    dirichlet_eigenvalues,
    discriminant_scan,
    discriminants,
    free_potential,
    monodromy,
    whittaker_hill_potential,
)
from whittaker_hill.spectrum import WHParams, solvable_spectrum


def test_potential_fn_rejects_non_periodic():
    with pytest.raises(ValueError):
        PotentialFn(lambda x: np.cos(np.asarray(x)))  # 2*pi-periodic only


def test_potential_fn_values_scalar_fallback():
    pot = PotentialFn(lambda x: float(np.cos(2 * x)) if np.ndim(x) == 0 else np.cos(2 * x))
    xs = np.linspace(0, 1, 5)
    assert np.allclose(pot.values(xs), np.cos(2 * xs))
    scalar_only = PotentialFn(lambda x: math.cos(2 * float(np.asarray(x).reshape(()))))
    assert np.allclose(scalar_only.values(xs), np.cos(2 * xs))


def test_monodromy_free_closed_forms():
    free = free_potential()
    m1 = monodromy(free, 1.0)
    assert m1.discriminant == pytest.approx(2 * math.cos(math.pi), abs=1e-9)
    assert np.max(np.abs(m1.matrix + np.eye(2))) <= 1e-9  # M = -I
    assert m1.error_estimate <= 1e-8

    m4 = monodromy(free, 4.0)
    assert m4.discriminant == pytest.approx(2.0, abs=1e-9)

    # generic lam: fundamental matrix in closed form
    lam = 2.7
    w = math.sqrt(lam)
    m = monodromy(free, lam).matrix
    want = np.array(
        [
            [math.cos(w * math.pi), math.sin(w * math.pi) / w],
            [-w * math.sin(w * math.pi), math.cos(w * math.pi)],
        ]
    )
    assert np.max(np.abs(m - want)) <= 1e-9


def test_monodromy_unreachable_tolerance_raises():
    with pytest.raises(IntegrationError) as info:
        monodromy(free_potential(), 5.0, tol=1e-18)
    assert info.value.achieved is not None


def test_monodromy_requires_positive_tol():
    with pytest.raises(ValueError):
        monodromy(free_potential(), 1.0, tol=0.0)


def test_discriminant_scan_free_closed_form():
    tab = discriminant_scan(free_potential(), 0.25, 20.0, 160)
    want = 2 * np.cos(math.pi * np.sqrt(tab[:, 0]))
    assert np.max(np.abs(tab[:, 1] - want)) <= 1e-8


def test_discriminant_scan_validation():
    with pytest.raises(ValueError):
        discriminant_scan(free_potential(), 1.0, 0.0, 10)
    with pytest.raises(ValueError):
        discriminant_scan(free_potential(), 0.0, 1.0, 1)


def test_solvable_values_hit_the_periodic_line():
    params = WHParams(1.0, 3)
    spec = solvable_spectrum(params)
    deltas, defects = discriminants(whittaker_hill_potential(params), spec.lams)
    assert np.max(np.abs(deltas - 2.0)) <= 1e-6
    assert np.max(defects) <= 1e-8


def test_solvable_values_hit_the_antiperiodic_line():
    params = WHParams(1.0, 2)
    spec = solvable_spectrum(params)
    deltas, _ = discriminants(whittaker_hill_potential(params), spec.lams)
    assert np.max(np.abs(deltas + 2.0)) <= 1e-6


def test_band_edges_free_all_closed():
    report = band_edges(free_potential(), 30.0)
    assert report.lambda0 == pytest.approx(0.0, abs=1e-8)
    assert len(report.gaps) >= 5
    for g in report.gaps[:5]:
        assert g.closed
        assert g.left == pytest.approx(g.index**2, abs=1e-8)


def test_band_edges_requires_even_potential():
    skew = PotentialFn(lambda x: np.sin(2 * np.asarray(x, dtype=float)))
    with pytest.raises(ValueError):
        band_edges(skew, 10.0)


def test_band_edges_validates_range():
    with pytest.raises(ValueError):
        band_edges(free_potential(), -5.0)


def test_band_edges_s3_solvable_gap():
    params = WHParams(1.0, 3)
    spec = solvable_spectrum(params)
    report = band_edges(whittaker_hill_potential(params), 30.0)
    g2 = report.gap(2)
    assert not g2.closed
    assert g2.left == pytest.approx(spec.lams[1], abs=1e-8)
    assert g2.right == pytest.approx(spec.lams[2], abs=1e-8)
    assert report.lambda0 == pytest.approx(spec.lams[0], abs=1e-8)
    assert report.gap(4).closed


def test_dirichlet_free_squares():
    gammas = dirichlet_eigenvalues(free_potential(), 0.2, 27.0)
    assert np.max(np.abs(np.array(gammas) - [1, 4, 9, 16, 25])) <= 1e-8


def test_dirichlet_validation():
    with pytest.raises(ValueError):
        dirichlet_eigenvalues(free_potential(), 5.0, 1.0)
    with pytest.raises(ValueError):
        dirichlet_eigenvalues(free_potential(), 0.0, math.inf)


def test_dirichlet_gap2_left_edge_untransformed():
    params = WHParams(1.0, 3)
    spec = solvable_spectrum(params)
    u = whittaker_hill_potential(params)
    gammas = dirichlet_eigenvalues(u, 0.0, 10.0)
    assert min(abs(g - spec.lams[1]) for g in gammas) <= 1e-6


def test_dirichlet_gap2_right_edge_transformed():
    params = WHParams(1.0, 3)
    spec = solvable_spectrum(params)
    pot = transformed_potential(darboux_transform(spec, ClusterSet([1, 2], 3)))
    gammas = dirichlet_eigenvalues(pot, 0.0, 10.0)
    assert min(abs(g - spec.lams[2]) for g in gammas) <= 1e-6


def test_transformed_discriminant_matches_original():
    # Darboux transforms are isospectral: same Delta inside the bands
    params = WHParams(1.0, 3)
    spec = solvable_spectrum(params)
    u = whittaker_hill_potential(params)
    v = transformed_potential(darboux_transform(spec, ClusterSet([1, 2], 3)))
    report = band_edges(u, 30.0)
    lams = []
    for left, right in ((report.lambda0, report.gaps[0].left),
                        (report.gaps[0].right, report.gaps[1].left),
                        (report.gaps[1].right, report.gaps[2].left)):
        lams.extend(np.linspace(left + 1e-3, right - 1e-3, 6))
    du, _ = discriminants(u, np.array(lams))
    dv, _ = discriminants(v, np.array(lams))
    assert np.max(np.abs(du - dv)) <= 1e-5
