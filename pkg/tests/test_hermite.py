import math

import numpy as np
import pytest

from gausscomp.hermite import (
    CylFunction,
    HermiteModel,
    adjoint_apply,
    composition_apply,
    gram,
    hermite_values,
)

RNG = np.random.default_rng(7)


def test_hermite_values_low_degrees():
    x = np.array([0.0, 1.0, -2.0])
    vals = hermite_values(x, 3)
    np.testing.assert_allclose(vals[:, 0], 1.0)
    np.testing.assert_allclose(vals[:, 1], x)
    np.testing.assert_allclose(vals[:, 2], (x**2 - 1.0) / math.sqrt(2.0))
    np.testing.assert_allclose(vals[:, 3], (x**3 - 3 * x) / math.sqrt(6.0))


@pytest.mark.parametrize("kappa,degree", [(1, 8), (2, 6), (3, 4)])
def test_basis_orthonormal(kappa, degree):
    model = HermiteModel.get(kappa, degree)
    G = model._phi.T @ (model.weights[:, None] * model._phi)
    np.testing.assert_allclose(G, np.eye(model.dim), atol=1e-10)


def test_model_dim_binomial():
    # multi-indices with |beta| <= D in kappa variables
    assert HermiteModel.get(2, 6).dim == math.comb(8, 2)
    assert HermiteModel.get(3, 4).dim == math.comb(7, 3)


def test_graded_lex_ordering():
    model = HermiteModel.get(2, 3)
    degs = [sum(idx) for idx in model.indices]
    assert degs == sorted(degs)
    assert model.indices[0] == (0, 0)


def test_project_roundtrip():
    model = HermiteModel.get(2, 5)
    coef = RNG.standard_normal(model.dim)
    f = model.function(coef)
    vals = f.eval(model.nodes)
    np.testing.assert_allclose(model.project(vals), coef, atol=1e-10)


def test_cyl_function_norm_parseval():
    model = HermiteModel.get(1, 6)
    coef = RNG.standard_normal(model.dim)
    f = model.function(coef)
    assert f.norm_sq == pytest.approx(float(coef @ coef))
    assert model.quad_norm_sq(f.eval(model.nodes)) == pytest.approx(
        f.norm_sq, abs=1e-10)


def test_embed_preserves_coefficients():
    small = HermiteModel.get(2, 3)
    big = HermiteModel.get(2, 6)
    f = small.basis_function((1, 2))
    g = f.embed(big)
    assert g.norm_sq == pytest.approx(1.0)
    assert g.coef[big._index_pos[(1, 2)]] == 1.0


# -- operators --------------------------------------------------------------

def test_adjoint_identity_exact():
    model = HermiteModel.get(2, 5)
    f = model.function(RNG.standard_normal(model.dim))
    g, leak = adjoint_apply(np.eye(2), f, target=model)
    np.testing.assert_allclose(g.coef, f.coef, atol=1e-10)
    assert leak < 1e-10


def test_adjoint_of_constant_integrates_to_one():
    # S 1 = h_A; its mean coefficient is the integral of the density
    model = HermiteModel.get(1, 6)
    one = model.basis_function((0,))
    g, leak = adjoint_apply(np.array([[0.5]]), one, pad=6)
    assert g.coef[0] == pytest.approx(1.0, abs=1e-10)
    assert leak > 0.0  # density is not polynomial


def test_composition_scales_linear_coefficient():
    model = HermiteModel.get(1, 4)
    f = model.basis_function((1,))
    g, leak = composition_apply(np.array([[0.75]]), f, target=model)
    assert g.coef[model._index_pos[(1,)]] == pytest.approx(0.75, abs=1e-12)
    assert leak < 1e-12


def test_composition_preserves_degree_no_leak():
    model = HermiteModel.get(2, 6)
    A = np.array([[0.5, 0.1], [0.0, 0.4]])
    f = model.function(RNG.standard_normal(model.dim))
    g, leak = composition_apply(A, f, target=model)
    assert leak < 1e-9 * f.norm_sq


def test_adjointness_within_truncation():
    # <C_A f, g> equals <f, S g> whenever the target of S g contains every
    # degree present in f; the projection discards only components
    # orthogonal to f
    model = HermiteModel.get(2, 6)
    A = np.diag([0.5, 1.0 / 3.0])
    for _ in range(5):
        f = model.function(RNG.standard_normal(model.dim))
        g = model.function(RNG.standard_normal(model.dim))
        caf, _ = composition_apply(A, f, target=model)
        sg, _ = adjoint_apply(A, g, target=model)
        lhs = float(caf.coef @ g.coef)
        rhs = float(f.coef @ sg.coef)
        assert lhs == pytest.approx(rhs, abs=1e-9)


def test_adjointness_quadrature_both_sides():
    # <C_A f, g> = <f, S g> with both sides by quadrature on a fine model
    fine = HermiteModel.get(1, 30)
    model = HermiteModel.get(1, 5)
    A = np.array([[0.5]])
    for _ in range(5):
        f = model.function(RNG.standard_normal(model.dim))
        g = model.function(RNG.standard_normal(model.dim))
        caf, _ = composition_apply(A, f, target=model)
        lhs = float(caf.coef @ g.coef)
        sg, _ = adjoint_apply(A, g, target=fine)
        rhs = float(f.embed(fine).coef @ sg.coef)
        assert lhs == pytest.approx(rhs, abs=1e-8)


def test_adjoint_norm_bound_contracting():
    # |C_A f| <= sup h_A^(1/2) |f| for diagonal contracting A
    model = HermiteModel.get(1, 6)
    alpha = 0.5
    bound = math.sqrt(1.0 / alpha)  # sup of the density on the real line
    for _ in range(10):
        f = model.function(RNG.standard_normal(model.dim))
        caf, _ = composition_apply(np.array([[alpha]]), f, target=model)
        assert math.sqrt(caf.norm_sq) <= bound * math.sqrt(f.norm_sq) + 1e-12


def test_gram_identity_and_mismatch():
    model = HermiteModel.get(2, 3)
    basis = [model.basis_function(idx) for idx in model.indices[:4]]
    np.testing.assert_allclose(gram(basis, basis), np.eye(4), atol=1e-14)
    other = HermiteModel.get(2, 4)
    with pytest.raises(ValueError):
        gram(basis, [other.basis_function((0, 0))])


def test_gram_matches_quadrature():
    model = HermiteModel.get(2, 5)
    fs = [model.function(RNG.standard_normal(model.dim)) for _ in range(3)]
    G = gram(fs, fs)
    for i in range(3):
        for j in range(3):
            quad = float(model.weights @ (fs[i].eval(model.nodes)
                                          * fs[j].eval(model.nodes)))
            assert G[i, j] == pytest.approx(quad, abs=1e-10)


def test_adjoint_leakage_is_significant_for_top_degree():
    # the adjoint pushes mass up in degree; for a top-degree input most of
    # the image lies beyond any small padding, which is why bilinear forms
    # of adjoint powers are evaluated by direct quadrature elsewhere
    model = HermiteModel.get(1, 6)
    top = model.basis_function((6,))
    _, leak = adjoint_apply(np.array([[0.5]]), top, pad=4)
    assert leak > 0.1
