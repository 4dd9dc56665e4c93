import math

import numpy as np
import pytest
from scipy.special import iv

from whittaker_hill.spectrum import (
    SolvableSpectrum,
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
from whittaker_hill.trigpoly import TrigPoly

from test_trigpoly import coeff_diff


def C_of(alpha):
    return (math.sqrt(1 + 16 * alpha**2) - 1) / (4 * alpha)


# ----------------------------------------------------------------------
# parameters and matrices
# ----------------------------------------------------------------------


def test_params_validation():
    with pytest.raises(ValueError):
        WHParams(0.0, 3)
    with pytest.raises(ValueError):
        WHParams(-1.0, 3)
    with pytest.raises(ValueError):
        WHParams(1.0, 0)
    assert WHParams(1.0, 7).m == 3
    assert WHParams(1.0, 8).m == 4


def test_tridiag_requires_positive_bands():
    with pytest.raises(ValueError):
        TriDiag((0.0, 4.0), (0.0,), (8.0,))
    with pytest.raises(ValueError):
        TriDiag((0.0, 4.0), (8.0,), (-1.0,))


@pytest.mark.parametrize("alpha", [0.25, 1.0, 4.0])
def test_periodic_matrices_s3_charpoly(alpha):
    even, odd = build_periodic_matrices(WHParams(alpha, 3))
    assert even.n == 2 and odd.n == 1
    # det K(nu) = nu (nu - 4) - 64 alpha^2 on a few sample nus
    for nu in (-3.0, 0.0, 1.7, 5.0):
        deltas, _ = sturm_sequence(even, nu)
        assert deltas[-1] == pytest.approx(nu * (nu - 4) - 64 * alpha**2, rel=1e-14)
        d1, _ = sturm_sequence(odd, nu)
        assert d1[-1] == pytest.approx(nu - 4, abs=1e-14)


def test_periodic_matrices_s1_shapes():
    even, odd = build_periodic_matrices(WHParams(0.7, 1))
    assert even.n == 1 and even.d == (0.0,)
    assert odd.n == 0
    assert eigenvalues(odd) == []


def test_matrix_builders_reject_wrong_parity():
    with pytest.raises(ValueError):
        build_periodic_matrices(WHParams(1.0, 4))
    with pytest.raises(ValueError):
        build_antiperiodic_matrices(WHParams(1.0, 3))


@pytest.mark.parametrize("alpha", [0.25, 1.0, 4.0])
def test_antiperiodic_matrices_s4_charpoly(alpha):
    even, odd = build_antiperiodic_matrices(WHParams(alpha, 4))
    assert even.n == odd.n == 2
    for nu in (-2.0, 0.5, 3.0):
        de, _ = sturm_sequence(even, nu)
        do, _ = sturm_sequence(odd, nu)
        assert de[-1] == pytest.approx(
            (nu - 1 + 8 * alpha) * (nu - 9) - 48 * alpha**2, rel=1e-13
        )
        assert do[-1] == pytest.approx(
            (nu - 1 - 8 * alpha) * (nu - 9) - 48 * alpha**2, rel=1e-13
        )


def test_antiperiodic_matrices_s2():
    even, odd = build_antiperiodic_matrices(WHParams(0.25, 2))
    assert even.n == odd.n == 1
    assert eigenvalues(even) == [pytest.approx(1 - 4 * 0.25)]
    assert eigenvalues(odd) == [pytest.approx(1 + 4 * 0.25)]


# ----------------------------------------------------------------------
# Sturm sequences and the eigen-solver
# ----------------------------------------------------------------------


def test_sturm_sequence_example_s3():
    even, _ = build_periodic_matrices(WHParams(1.0, 3))
    deltas, below = sturm_sequence(even, 0.0)
    assert deltas == [1.0, 0.0, -64.0]
    assert below == 1  # exactly nu_0 = 2(1 - sqrt(17)) lies below 0


def test_sturm_sequence_positive_at_large_nu():
    even, _ = build_periodic_matrices(WHParams(2.0, 9))
    deltas, below = sturm_sequence(even, 1e6)
    assert all(d > 0 for d in deltas)
    assert below == even.n


def test_sturm_sequence_matches_dense_determinant():
    even, _ = build_periodic_matrices(WHParams(1.0, 5))
    nu = 10.0
    deltas, _ = sturm_sequence(even, nu)
    dense = np.linalg.det(even.dense(nu))
    assert deltas[-1] == pytest.approx(dense, rel=1e-12)


@pytest.mark.parametrize("alpha", [0.25, 1.0, 4.0])
def test_eigenvalues_s3_closed_form(alpha):
    even, odd = build_periodic_matrices(WHParams(alpha, 3))
    root = math.sqrt(1 + 16 * alpha**2)
    got = eigenvalues(even)
    assert abs(got[0] - 2 * (1 - root)) <= 1e-10
    assert abs(got[1] - 2 * (1 + root)) <= 1e-10
    assert eigenvalues(odd) == [pytest.approx(4.0, abs=1e-12)]


def test_eigenvalues_s5_cubic_oracle():
    # det K(nu) for s=5 expands to nu^3 - 20 nu^2 + (64 - 256 a^2) nu + 3072 a^2
    alpha = 1.0
    even, _ = build_periodic_matrices(WHParams(alpha, 5))
    oracle = np.sort(np.roots([1.0, -20.0, 64.0 - 256 * alpha**2, 3072 * alpha**2]).real)
    got = np.array(eigenvalues(even))
    assert np.max(np.abs(got - oracle)) <= 1e-9


def test_eigenvalues_s7_dense_oracle_golden():
    # golden values from np.linalg.eigvals of the dense matrix, pinned once
    golden = [
        -8.695680790831242,
        8.732047258189008,
        18.757600073918926,
        37.20603345872332,
    ]
    even, _ = build_periodic_matrices(WHParams(0.5, 7))
    got = eigenvalues(even)
    assert np.max(np.abs(np.array(got) - golden)) <= 1e-9
    # and against a live dense eigensolver run
    m = np.diag(even.d).astype(float)
    for i, (a, c) in enumerate(zip(even.sub, even.sup)):
        m[i + 1, i] = -a
        m[i, i + 1] = -c
    live = np.sort(np.linalg.eigvals(m).real)
    assert np.max(np.abs(np.array(got) - live)) <= 1e-9


def test_eigenvector_s3_direction():
    alpha = 0.75
    even, _ = build_periodic_matrices(WHParams(alpha, 3))
    nu0 = 2 * (1 - math.sqrt(1 + 16 * alpha**2))
    v = eigenvector(even, nu0)
    assert v[0] == pytest.approx(1.0)
    assert v[1] == pytest.approx(C_of(alpha), rel=1e-10)


def test_eigenvector_s4_direction():
    alpha = 1.0
    even, _ = build_antiperiodic_matrices(WHParams(alpha, 4))
    nu1 = min(eigenvalues(even))
    v = eigenvector(even, nu1)
    # direction (nu1 - 9, -4 alpha) after rescaling
    assert v[1] / v[0] == pytest.approx(-4 * alpha / (nu1 - 9), rel=1e-9)


def test_eigenvector_trivial_and_rejection():
    even, _ = build_periodic_matrices(WHParams(0.4, 1))
    assert eigenvector(even, 0.0).tolist() == [1.0]
    with pytest.raises(ValueError):
        eigenvector(even, 0.5)
    big, _ = build_periodic_matrices(WHParams(1.0, 7))
    with pytest.raises(ValueError):
        eigenvector(big, 1.2345)


# ----------------------------------------------------------------------
# solvable spectra
# ----------------------------------------------------------------------


def test_spectrum_s3_table():
    alpha = 1.0
    spec = solvable_spectrum(WHParams(alpha, 3))
    root = math.sqrt(17)
    assert [e.parity for e in spec.entries] == ["even", "odd", "even"]
    assert np.allclose(spec.nus, [2 * (1 - root), 4.0, 2 * (1 + root)], atol=1e-10)
    c = C_of(alpha)
    assert coeff_diff(
        spec.entries[0].phi, TrigPoly.from_terms({0: (1, 0), 2: (c, 0)})
    ) <= 1e-10
    assert coeff_diff(spec.entries[1].phi, TrigPoly.sine(2)) <= 1e-12
    # phi_2 = (1 - sqrt(1+16a^2))/(4a) + cos 2x, normalized to max component +1
    assert coeff_diff(
        spec.entries[2].phi, TrigPoly.from_terms({0: (-c, 0), 2: (1, 0)})
    ) <= 1e-10


def test_spectrum_s2():
    spec = solvable_spectrum(WHParams(0.3, 2))
    assert np.allclose(spec.nus, [1 - 1.2, 1 + 1.2], atol=1e-12)
    assert [e.parity for e in spec.entries] == ["even", "odd"]
    assert coeff_diff(spec.entries[0].phi, TrigPoly.cosine(1)) <= 1e-12
    assert coeff_diff(spec.entries[1].phi, TrigPoly.sine(1)) <= 1e-12
    assert [e.label for e in spec.entries] == [1, 2]


def test_spectrum_small_alpha_near_free():
    spec = solvable_spectrum(WHParams(1e-6, 5))
    assert np.max(np.abs(spec.nus - np.array(free_spectrum(5)))) <= 1e-4


def test_spectrum_symmetry_classes():
    for s in (3, 4, 5, 6):
        spec = solvable_spectrum(WHParams(0.8, s))
        for e in spec.entries:
            assert (e.parity == "even") == e.phi.is_even_function
            if s % 2:
                assert e.phi.is_pi_periodic
            else:
                assert e.phi.is_pi_antiperiodic


def test_lambda_gauge_shift_exact():
    params = WHParams(1.7, 6)
    spec = solvable_spectrum(params)
    for e in spec.entries:
        assert e.lam == e.nu - 2 * params.alpha**2


def test_by_label():
    spec = solvable_spectrum(WHParams(1.0, 4))
    assert spec.by_label(1).index == 0
    with pytest.raises(ValueError):
        spec.by_label(0)
    spec3 = solvable_spectrum(WHParams(1.0, 3))
    assert spec3.by_label(0).index == 0


def test_gauged_eigenfunction():
    spec1 = solvable_spectrum(WHParams(0.9, 1))
    psi0 = gauged_eigenfunction(spec1, 0)
    assert psi0.gauge == 0.9
    assert psi0.num.degree == 0  # phi_0 = 1, so psi_0 = e^{a cos 2x}
    assert psi0(0.3) == pytest.approx(math.exp(0.9 * math.cos(0.6)), rel=1e-12)

    spec2 = solvable_spectrum(WHParams(0.5, 2))
    psi = gauged_eigenfunction(spec2, 0)
    assert coeff_diff(psi.num, TrigPoly.cosine(1)) <= 1e-12
    with pytest.raises(ValueError):
        gauged_eigenfunction(spec2, 5)


def test_operator_residual_symbolic():
    for s, alpha in [(3, 1.0), (4, 0.5), (7, 2.0), (8, 1.5)]:
        params = WHParams(alpha, s)
        spec = solvable_spectrum(params)
        for e in spec.entries:
            r = apply_gauged_hamiltonian(e.phi, params) - e.nu * e.phi
            scale = max(1.0, abs(e.nu)) * e.phi.coeff_scale
            assert r.coeff_scale <= 1e-8 * scale


# ----------------------------------------------------------------------
# inner products
# ----------------------------------------------------------------------


def test_inner_product_constant():
    one = TrigPoly.constant(1.0)
    assert inner_product(one, one, 0.0) == pytest.approx(math.pi, abs=1e-12)


def test_inner_product_orthogonality_s3():
    spec = solvable_spectrum(WHParams(1.0, 3))
    phi0, phi2 = spec.entries[0].phi, spec.entries[2].phi
    assert abs(inner_product(phi0, phi2, 1.0)) <= 1e-8


def test_inner_product_odd_symmetry():
    assert abs(inner_product(TrigPoly.sine(2), TrigPoly.cosine(2), 0.8)) <= 1e-12


def test_inner_product_bessel_oracle():
    # int_0^pi cos(2nx) e^{2 a cos 2x} dx = pi I_n(2a); sine terms integrate to 0
    rng = np.random.default_rng(23)
    alpha = 1.3
    terms = {n: (rng.standard_normal(), 0.0 if n == 0 else rng.standard_normal())
             for n in range(0, 7, 2)}
    p = TrigPoly.from_terms(terms)
    got = inner_product(p, TrigPoly.constant(1.0), alpha)
    want = sum(a * math.pi * iv(n // 2, 2 * alpha) for n, (a, b) in terms.items())
    assert got == pytest.approx(want, rel=1e-10)


def test_inner_product_rejects_small_node_count():
    one = TrigPoly.constant(1.0)
    with pytest.raises(ValueError):
        inner_product(one, one, 1.0, nodes=512)


def test_free_spectrum_lists():
    assert free_spectrum(1) == [0.0]
    assert free_spectrum(5) == [0.0, 4.0, 4.0, 16.0, 16.0]
    assert free_spectrum(2) == [1.0, 1.0]
    assert free_spectrum(6) == [1.0, 1.0, 9.0, 9.0, 25.0, 25.0]
