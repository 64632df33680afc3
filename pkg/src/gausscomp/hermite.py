"""Truncated tensor Hermite models for cylindrical functions.

The basis is the probabilists' Hermite family, normalized to be orthonormal
under the standard Gaussian measure, tensorized over coordinates and
truncated by total degree.  Linear-symbol composition and its adjoint act
on coefficient vectors through cached quadrature-projection matrices, and
every application reports its truncation leakage (the quadrature mass that
falls outside the target degree).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np
from numpy.polynomial.hermite_e import hermegauss

from .gaussmeas import RnDerivative

__all__ = [
    "HermiteModel",
    "CylFunction",
    "adjoint_apply",
    "composition_apply",
    "gram",
    "hermite_values",
]


def hermite_values(points, max_degree):
    """Orthonormal probabilists' Hermite values He_n(x)/sqrt(n!).

    Returns an array of shape (len(points), max_degree + 1).
    """
    x = np.asarray(points, dtype=float)
    out = np.empty((len(x), max_degree + 1))
    out[:, 0] = 1.0
    if max_degree >= 1:
        out[:, 1] = x
    for n in range(1, max_degree):
        out[:, n + 1] = x * out[:, n] - n * out[:, n - 1]
    for n in range(max_degree + 1):
        out[:, n] /= math.sqrt(math.factorial(n))
    return out


class HermiteModel:
    """Tensor Hermite basis on R^kappa truncated by total degree.

    Basis functions are indexed by multi-indices in graded lexicographic
    order.  The quadrature grid is the tensor probabilists' Gauss-Hermite
    rule of the given order per coordinate, with weights normalized so they
    sum to one (expectation weights under the Gaussian measure).
    """

    _cache: dict = {}

    def __init__(self, kappa, degree, quad_order=None):
        if quad_order is None:
            quad_order = degree + 12
        if quad_order < degree + 2:
            raise ValueError("quadrature order must be at least degree + 2")
        self.kappa = int(kappa)
        self.degree = int(degree)
        self.quad_order = int(quad_order)
        self.indices = sorted(
            (
                idx
                for idx in iproduct(range(degree + 1), repeat=kappa)
                if sum(idx) <= degree
            ),
            key=lambda idx: (sum(idx), idx),
        )
        self._index_pos = {idx: b for b, idx in enumerate(self.indices)}
        z, w = hermegauss(quad_order)
        w = w / w.sum()
        grids = np.meshgrid(*[z] * kappa, indexing="ij")
        self.nodes = np.stack([g.ravel() for g in grids], axis=-1)
        wg = np.meshgrid(*[w] * kappa, indexing="ij")
        wts = np.ones(self.nodes.shape[0])
        for g in wg:
            wts = wts * g.ravel()
        self.weights = wts
        self._phi = self.basis_matrix(self.nodes)

    @classmethod
    def get(cls, kappa, degree, quad_order=None):
        """Cached model lookup; construction is the expensive part."""
        key = (kappa, degree, quad_order)
        if key not in cls._cache:
            cls._cache[key] = cls(kappa, degree, quad_order)
        return cls._cache[key]

    @property
    def dim(self):
        return len(self.indices)

    def basis_matrix(self, points):
        """Values of every basis function at the points, (npts, dim)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        per_coord = [
            hermite_values(pts[:, c], self.degree) for c in range(self.kappa)
        ]
        out = np.empty((pts.shape[0], self.dim))
        for b, idx in enumerate(self.indices):
            col = per_coord[0][:, idx[0]].copy()
            for c in range(1, self.kappa):
                col *= per_coord[c][:, idx[c]]
            out[:, b] = col
        return out

    def project(self, values):
        """Coefficients of the quadrature projection of point values."""
        return self._phi.T @ (self.weights * values)

    def quad_norm_sq(self, values):
        return float(np.real(self.weights @ (values * np.conj(values))))

    def function(self, coef):
        coef = np.asarray(coef)
        if coef.shape != (self.dim,):
            raise ValueError(f"coefficient vector must have length {self.dim}")
        return CylFunction(self, coef)

    def basis_function(self, idx):
        coef = np.zeros(self.dim)
        coef[self._index_pos[tuple(idx)]] = 1.0
        return CylFunction(self, coef)


@dataclass
class CylFunction:
    """Coefficient vector over a Hermite model."""

    model: HermiteModel
    coef: np.ndarray

    @property
    def norm_sq(self):
        return float(np.real(np.vdot(self.coef, self.coef)))

    def eval(self, points):
        return self.model.basis_matrix(points) @ self.coef

    def embed(self, target: HermiteModel):
        """Inject coefficients into a model of larger degree, same kappa."""
        if target is self.model:
            return self
        if target.kappa != self.model.kappa or target.degree < self.model.degree:
            raise ValueError("target model must extend the source model")
        coef = np.zeros(target.dim, dtype=self.coef.dtype)
        for b, idx in enumerate(self.model.indices):
            coef[target._index_pos[idx]] = self.coef[b]
        return CylFunction(target, coef)


# ---------------------------------------------------------------------------
# operators

_op_cache: dict = {}

_MAX_TRANSFER_POINTS = 2_000_000


def _scaled_grid(scales, order):
    """Tensor Gauss-Hermite rule for the Gaussian measure after the
    per-coordinate substitution x = z / sqrt(s).

    Returns (points, log_weights) with sum exp(log_w) f(x) approximating
    the Gaussian expectation of f; the choice s_j matched to the decay of
    the integrand keeps the effective weight bounded.
    """
    z, v = hermegauss(order)
    v = v / v.sum()
    kappa = len(scales)
    axes = [z / math.sqrt(s) for s in scales]
    grids = np.meshgrid(*axes, indexing="ij")
    X = np.stack([g.ravel() for g in grids], axis=-1)
    logw = np.zeros(X.shape[0])
    zg = np.meshgrid(*[z] * kappa, indexing="ij")
    vg = np.meshgrid(*[np.log(v)] * kappa, indexing="ij")
    for g, lv, s in zip(zg, vg, scales):
        logw += (lv.ravel() - 0.5 * math.log(s)
                 + 0.5 * g.ravel() ** 2 * (1.0 - 1.0 / s))
    return X, logw


def _transfer_at(A, model_in, model_out, adjoint, order):
    kappa = model_in.kappa
    if adjoint:
        A_inv = np.linalg.inv(A)
        M = A_inv.T @ A_inv
        E_G = 2.0 * M - np.eye(kappa)
        if float(np.linalg.eigvalsh(0.5 * (E_G + E_G.T))[0]) <= 1e-12:
            raise ValueError(
                "adjoint image is not square-integrable: combined exponent "
                "matrix fails positive-definiteness"
            )
        logdet = float(np.linalg.slogdet(A_inv)[1])
        mats = []
        for E in (M, E_G):
            scales = np.clip(np.diag(E), 1e-6, None)
            X, logw = _scaled_grid(scales, order)
            Y = X @ A_inv.T
            logh = (logdet + 0.5 * (np.sum(X * X, axis=1)
                                    - np.sum(Y * Y, axis=1)))
            mats.append((X, Y, logw, logh))
        (Xs, Ys, logw_s, logh_s), (Xg, Yg, logw_g, logh_g) = mats
        S = model_out.basis_matrix(Xs).T @ (
            np.exp(logw_s + logh_s)[:, None] * model_in.basis_matrix(Ys))
        Vg = model_in.basis_matrix(Yg)
        G = Vg.T @ (np.exp(logw_g + 2.0 * logh_g)[:, None] * Vg)
        return S, G
    X, logw = _scaled_grid(np.ones(kappa), order)
    w = np.exp(logw)
    V = model_in.basis_matrix(X @ A.T)
    S = model_out.basis_matrix(X).T @ (w[:, None] * V)
    G = V.T @ (w[:, None] * V)
    return S, G


def _transfer(A, model_in: HermiteModel, model_out: HermiteModel, adjoint: bool):
    """Projection matrix S and value-Gram G for composition or its adjoint.

    S c are the target coefficients of the transformed function with source
    coefficients c; c^H G c is its full squared quadrature norm, so the
    leakage of one application is c^H (G - S^T S) c >= 0.  The quadrature
    order is doubled until both matrices stabilize to 1e-8; a failure to
    stabilize within the point budget raises.
    """
    A = np.asarray(A, dtype=float)
    key = (A.tobytes(), A.shape, id(model_in), id(model_out), adjoint)
    if key in _op_cache:
        return _op_cache[key]
    order = max(model_out.quad_order, model_out.degree + 10)
    S, G = _transfer_at(A, model_in, model_out, adjoint, order)
    while True:
        order *= 2
        if order ** model_in.kappa > _MAX_TRANSFER_POINTS:
            raise ValueError(
                "quadrature order insufficient: transfer matrices did not "
                f"stabilize to 1e-8 within {_MAX_TRANSFER_POINTS} points"
            )
        S2, G2 = _transfer_at(A, model_in, model_out, adjoint, order)
        ds = float(np.max(np.abs(S2 - S)))
        dg = float(np.max(np.abs(G2 - G))) / max(1.0, float(np.max(np.abs(G2))))
        S, G = S2, G2
        if ds <= 1e-8 and dg <= 1e-8:
            break
    _op_cache[key] = (S, G)
    return S, G


def _apply(A, f: CylFunction, target, adjoint, pad):
    if target is None:
        target = HermiteModel.get(f.model.kappa, f.model.degree + pad)
    if target.kappa != f.model.kappa:
        raise ValueError("dimension mismatch between symbol and model")
    S, G = _transfer(A, f.model, target, adjoint)
    coef = S @ f.coef
    full = float(np.real(np.vdot(f.coef, G @ f.coef)))
    leakage = max(0.0, full - float(np.real(np.vdot(coef, coef))))
    return CylFunction(target, coef), leakage


def adjoint_apply(A, f: CylFunction, target: HermiteModel | None = None,
                  pad: int = 4):
    """Apply the composition adjoint (density times inverse composition).

    Returns (g, leakage); leakage is the squared quadrature norm falling
    outside the target truncation.  The density factor is not polynomial,
    so leakage is generically positive.
    """
    return _apply(A, f, target, adjoint=True, pad=pad)


def composition_apply(A, f: CylFunction, target: HermiteModel | None = None,
                      pad: int = 0):
    """Apply composition by the linear map A (projection onto the target).

    Composition by a linear map preserves polynomial degree, so with a
    target of the same degree the leakage vanishes up to quadrature noise.
    """
    return _apply(A, f, target, adjoint=False, pad=pad)


def gram(fs, gs):
    """Matrix of inner products <f_i, g_j> by coefficient dot products."""
    if not fs or not gs:
        return np.zeros((len(fs), len(gs)))
    model = fs[0].model
    for h in list(fs) + list(gs):
        if h.model is not model:
            raise ValueError("all functions must share one model")
    F = np.stack([f.coef for f in fs])
    G = np.stack([g.coef for g in gs])
    return F @ np.conj(G).T
