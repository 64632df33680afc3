import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from scipy.special import erf

from gausscomp.banded import PerturbedIdentity
from gausscomp.gaussmeas import (
    Box,
    DivergenceError,
    GaussianSpace,
    QuadSpec,
    RnDerivative,
    chi_norm_sq,
    diag_closed_form,
    ell2p_norm_sq,
    gaussian_box_mass,
    h_normalization,
    infinite_product,
    perturbation_bound_check,
    poisson_bounds,
    proof_constant,
    rn_eval,
    rn_power_factorization_check,
    singular_scaling_demo,
)

RNG = np.random.default_rng(42)


def random_well_conditioned(kappa, rng):
    """Singular values in [0.5, 2]: invertible with mild condition number."""
    u, _ = np.linalg.qr(rng.standard_normal((kappa, kappa)))
    v, _ = np.linalg.qr(rng.standard_normal((kappa, kappa)))
    sv = rng.uniform(0.5, 2.0, kappa)
    return u @ np.diag(sv) @ v.T


# -- density ----------------------------------------------------------------

def test_rn_identity_is_one():
    d = RnDerivative(np.eye(3))
    pts = RNG.standard_normal((10_000, 3))
    vals = np.array([rn_eval(d, x) for x in pts])
    np.testing.assert_allclose(vals, 1.0, rtol=1e-14)


def test_rn_scalar_values():
    d = RnDerivative(np.array([[2.0]]))
    assert rn_eval(d, [0.0]) == pytest.approx(0.5)
    d = RnDerivative(np.array([[0.5]]))
    assert rn_eval(d, [1.0]) == pytest.approx(2.0 * math.exp(-1.5))


def test_rn_rejects_singular():
    with pytest.raises(ValueError):
        RnDerivative(np.array([[1.0, 0.0], [2.0, 0.0]]))


def test_factorization_trivial_n1():
    A = random_well_conditioned(3, RNG)
    pts = RNG.standard_normal((20, 3))
    assert rn_power_factorization_check(A, 1, pts) == 0.0


def test_factorization_diag():
    A = np.diag([0.5, 1.0 / 3.0])
    pts = RNG.standard_normal((100, 2))
    assert rn_power_factorization_check(A, 2, pts) < 1e-10


def test_factorization_random_family():
    worst = 0.0
    for _ in range(10):
        kappa = int(RNG.integers(1, 4))
        A = random_well_conditioned(kappa, RNG)
        pts = RNG.standard_normal((20, kappa))
        n = int(RNG.integers(1, 5))
        worst = max(worst, rn_power_factorization_check(A, n, pts))
    assert worst < 1e-8


# -- quadrature norms -------------------------------------------------------

def test_gaussian_space_normalization():
    for kappa in (1, 2, 3):
        GaussianSpace(kappa)  # density check at construction
        val = h_normalization(np.eye(kappa))
        assert val == pytest.approx(1.0, abs=1e-10)


def test_h_normalization_random():
    for _ in range(5):
        kappa = int(RNG.integers(1, 4))
        A = random_well_conditioned(kappa, RNG)
        assert h_normalization(A) == pytest.approx(1.0, abs=1e-8)


def test_chi_norm_identity_box_mass():
    val = chi_norm_sq(np.eye(1), 1, Box(1, 1.0))
    assert val == pytest.approx(erf(1.0 / math.sqrt(2.0)), abs=1e-10)


def test_chi_norm_free_closed_form():
    # no box restriction: the norm is the product of tail factors
    alpha = 0.5
    val = chi_norm_sq(np.array([[alpha]]), 1, None)
    assert val == pytest.approx(1.0 / (alpha * math.sqrt(2.0 - alpha**2)),
                                rel=1e-9)


def test_chi_norm_divergence_flag():
    with pytest.raises(DivergenceError):
        chi_norm_sq(np.array([[2.0]]), 1, None)


def test_chi_norm_monotone_in_box():
    A = np.diag([0.5, 0.75])
    vals = [chi_norm_sq(A, 1, Box(2, k)) for k in (0.5, 1.0, 2.0, 4.0)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_diag_closed_form_vs_quadrature():
    alpha = lambda j: 1.0 - 2.0 ** (-j)
    for i in (1, 2):
        for l in (4, 6):
            closed = diag_closed_form(alpha, i, 2, 1.0, l)
            A = np.diag([alpha(j) for j in range(1, l + 1)])
            quad = chi_norm_sq(A, i, Box(2, 1.0))
            assert quad == pytest.approx(closed, rel=1e-8)


def test_diag_closed_form_all_ones_reduces_to_box():
    # alpha close to 1 everywhere: tail factors collapse to 1 and the value
    # reduces to the squared box mass
    a = 1.0 - 1e-9
    val = diag_closed_form([a, a, a], 1, 2, 1.0, 3)
    assert val == pytest.approx(erf(1.0 / math.sqrt(2.0)) ** 2, rel=1e-6)
    with pytest.raises(ValueError):
        diag_closed_form([1.0, 1.0, 1.0], 1, 2, 1.0, 3)  # tail needs alpha < 1


def test_diag_closed_form_tail_undefined():
    with pytest.raises(ValueError):
        diag_closed_form([0.5, 0.5, 1.5], 2, 2, 1.0, 3)


def test_diag_closed_form_converges_in_l():
    alpha = lambda j: 1.0 - 2.0 ** (-j)
    vals = [diag_closed_form(alpha, 1, 2, 1.0, l) for l in range(3, 30)]
    incs = np.abs(np.diff(vals))
    assert incs[-1] < 1e-7
    assert incs[-1] < incs[0]


# -- products ---------------------------------------------------------------

def test_product_all_ones():
    res = infinite_product(lambda j: 1.0)
    assert res.status == "convergent"
    assert res.value == 1.0 and res.remainder_bound == 0.0


def test_product_euler_like():
    res = infinite_product(lambda j: 1.0 - 2.0 ** (-j), n_terms=200,
                           tail_bound=lambda N: 2.0 ** (-N))
    assert res.status == "convergent"
    assert res.value == pytest.approx(0.2887880950866, abs=1e-10)
    assert res.remainder_bound < 1e-30


def test_product_harmonic_divergent():
    res = infinite_product(lambda j: 1.0 - 1.0 / (j + 1), n_terms=5000)
    assert res.status == "divergent_to_zero"


def test_product_rejects_nonpositive():
    with pytest.raises(ValueError):
        infinite_product(lambda j: 1.0 - 1.0 / j, n_terms=10)


# -- poisson bounds ---------------------------------------------------------

@pytest.mark.parametrize("a", [0.1, 0.5, 1.0, 2.0, 3.0, 5.0])
def test_poisson_bounds_bracket(a):
    lo, hi = poisson_bounds(a)
    mass_sq = gaussian_box_mass(a) ** 2
    assert lo < mass_sq < hi


def test_poisson_bounds_values():
    lo, hi = poisson_bounds(1.0)
    assert lo == pytest.approx(1.0 - math.exp(-0.5))
    assert hi == pytest.approx(1.0 - math.exp(-1.0))


def test_poisson_bounds_vanish_at_zero():
    lo, hi = poisson_bounds(1e-8)
    assert 0 < lo < hi < 1e-15


# -- singular scaling -------------------------------------------------------

def test_singular_scaling_dichotomy():
    rep = singular_scaling_demo(0.5, N=10_000)
    assert rep.beta == pytest.approx((1.0 + math.sqrt(2.0)) / 2.0)
    assert rep.q_exponent == pytest.approx(0.5 * rep.beta)
    assert rep.q_exponent < 1.0 < rep.beta
    assert rep.sqrt_alpha_exponent < 1.0
    # P stays bounded away from zero, with a certificate
    assert rep.p_limit_lower > 0.0
    assert np.all(np.diff(rep.p_trajectory) <= 0)
    assert rep.p_trajectory[-1] >= rep.p_limit_lower
    # log Q diverges downward
    assert rep.log_q_trajectory[-1] < -5.0
    assert rep.log_q_trajectory[-1] < rep.log_q_trajectory[-2]


def test_singular_scaling_near_degenerate_flag():
    assert singular_scaling_demo(0.999, N=100).near_degenerate
    assert not singular_scaling_demo(0.5, N=100).near_degenerate


def test_singular_scaling_rejects_bad_alpha():
    with pytest.raises(ValueError):
        singular_scaling_demo(1.5)


# -- weighted norms and the perturbation inequality -------------------------

def test_ell2p_basics():
    assert ell2p_norm_sq([0.0, 0.0], [1.0, 2.0]) == 0.0
    assert ell2p_norm_sq([1.0, 1.0], [0.5, 0.25]) == pytest.approx(0.75)


@seed(5)
@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=-5, max_value=5), st.floats(min_value=-5, max_value=5))
def test_ell2p_homogeneity(x1, x2):
    x = np.array([x1, x2])
    p = [0.5, 0.25]
    assert ell2p_norm_sq(2.0 * x, p) == pytest.approx(4.0 * ell2p_norm_sq(x, p))


def test_perturbation_bound_unit_vector():
    b = PerturbedIdentity.geometric(0.5)
    e1 = np.zeros(8)
    e1[0] = 1.0
    chk = perturbation_bound_check(b, 1, [e1])
    assert chk.all_pass and chk.worst_ratio <= 1.0


def test_perturbation_bound_zero_perturbation():
    from gausscomp.banded import BandedSymbol
    base = BandedSymbol.from_entries(1, {})
    b = PerturbedIdentity(base=base, alpha=lambda j: 0.5 ** j,
                          weights=lambda j: 0.5 ** j, m=0.25, M=0.75,
                          alpha_sum=1.0, weight_sum=1.0)
    x = RNG.standard_normal(10)
    chk = perturbation_bound_check(b, 2, [x])
    assert chk.worst_ratio == 0.0


def test_perturbation_bound_random_supports():
    b = PerturbedIdentity.geometric(0.5)
    xs = []
    for _ in range(50):
        x = np.zeros(24)
        support = RNG.choice(24, size=12, replace=False)
        x[support] = RNG.standard_normal(12)
        xs.append(x)
    for k in (1, 2, 3):
        chk = perturbation_bound_check(b, k, xs)
        assert chk.all_pass, f"k={k}: worst ratio {chk.worst_ratio}"


def test_proof_constant_monotone_in_power():
    b = PerturbedIdentity.geometric(0.5)
    cs = [proof_constant(b, k) for k in (1, 2, 3)]
    assert cs[0] < cs[1] < cs[2]
