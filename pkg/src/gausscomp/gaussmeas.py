"""Gaussian densities, Radon-Nikodym derivatives of linear symbols and
weighted-norm computations.

Everything is assembled in log space: the densities involved span hundreds
of orders of magnitude already in moderate dimension.  Quadrature is tensor
Gauss-Hermite (probabilists' weight) on unrestricted coordinates and a
composite Gauss-Legendre panel rule on box-restricted coordinates, with the
order doubled until two successive values agree to the requested target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from numpy.polynomial.legendre import leggauss
from scipy.special import erf

from .banded import PerturbedIdentity, power

__all__ = [
    "DivergenceError",
    "GaussianSpace",
    "RnDerivative",
    "Box",
    "QuadSpec",
    "rn_eval",
    "rn_power_factorization_check",
    "chi_norm_sq",
    "h_normalization",
    "diag_closed_form",
    "gaussian_box_mass",
    "infinite_product",
    "ProductResult",
    "poisson_bounds",
    "singular_scaling_demo",
    "SingularScalingReport",
    "ell2p_norm_sq",
    "perturbation_bound_check",
    "PerturbationCheck",
    "proof_constant",
]

_SQRT2PI = math.sqrt(2.0 * math.pi)


class DivergenceError(ArithmeticError):
    """Raised when the Gaussian-weighted quadratic form fails to decay in an
    unrestricted coordinate, so the integral is infinite."""


@dataclass(frozen=True)
class GaussianSpace:
    """Standard Gaussian product measure on R^kappa."""

    kappa: int

    def log_density(self, x):
        x = np.asarray(x, dtype=float)
        return -0.5 * float(x @ x) - 0.5 * self.kappa * math.log(2.0 * math.pi)

    def density(self, x):
        return math.exp(self.log_density(x))


class RnDerivative:
    """Density of the image of the Gaussian measure under a linear map.

    For an invertible matrix A the density against the Gaussian measure is
    |det A^-1| * exp((|x|^2 - |A^-1 x|^2) / 2), evaluated here in log space.
    """

    def __init__(self, A):
        A = np.asarray(A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("symbol must be a square matrix")
        sign, logdet = np.linalg.slogdet(A)
        if sign == 0 or not np.isfinite(logdet):
            raise ValueError("symbol matrix is not invertible")
        self.A = A
        self.A_inv = np.linalg.inv(A)
        self.log_abs_det_A_inv = -logdet

    @property
    def kappa(self):
        return self.A.shape[0]

    def log_eval(self, x):
        x = np.asarray(x, dtype=float)
        y = self.A_inv @ x
        return self.log_abs_det_A_inv + 0.5 * (float(x @ x) - float(y @ y))

    def __call__(self, x):
        return math.exp(self.log_eval(x))


def rn_eval(d: RnDerivative, x) -> float:
    return d(x)


def rn_power_factorization_check(A, n: int, points) -> float:
    """Worst relative deviation between the density of A^n and the product
    of shifted single-step densities, in log space, over the sample points.
    """
    if n < 1:
        raise ValueError("power must be >= 1")
    A = np.asarray(A, dtype=float)
    direct = RnDerivative(np.linalg.matrix_power(A, n))
    single = RnDerivative(A)
    inv_pows = [np.linalg.matrix_power(single.A_inv, t) for t in range(n)]
    worst = 0.0
    for x in np.atleast_2d(np.asarray(points, dtype=float)):
        lhs = direct.log_eval(x)
        rhs = math.fsum(single.log_eval(ip @ x) for ip in inv_pows)
        scale = max(1.0, abs(lhs))
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


# ---------------------------------------------------------------------------
# quadrature


@dataclass(frozen=True)
class Box:
    """Axis-aligned hypercube [-k, k]^dims on the first `dims` coordinates."""

    dims: int
    halfwidth: float

    def __post_init__(self):
        if self.dims < 0 or self.halfwidth <= 0:
            raise ValueError("box needs dims >= 0 and positive halfwidth")


@dataclass(frozen=True)
class QuadSpec:
    order: int = 40           # Gauss-Hermite order per unrestricted coordinate
    panels: int = 8           # panels per box coordinate
    panel_order: int = 12     # Gauss-Legendre order per panel
    target: float = 1e-9      # doubling stops when successive values agree
    max_order: int = 1500
    max_points: int = 4_000_000
    psd_tol: float = 1e-12    # decay threshold on unrestricted eigenvalues


def _box_rule(k, panels, order):
    """Composite Gauss-Legendre nodes/weights on [-k, k]."""
    base_x, base_w = leggauss(order)
    edges = np.linspace(-k, k, panels + 1)
    xs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        xs.append(0.5 * (a + b) + half * base_x)
        ws.append(half * base_w)
    return np.concatenate(xs), np.concatenate(ws)


def _free_rule(order, scale):
    """Scaled probabilists' Gauss-Hermite rule for a coordinate whose
    exponent has diagonal coefficient folded into `scale`.

    Returns nodes x and weights w such that sum(w * f(x)) approximates
    integral of f(x) * exp(-scale * x^2 / 2) / sqrt(2 pi) dx times
    exp(+x^2 * scale / 2) ... i.e. plain Lebesgue weights carrying the
    substitution x = z / sqrt(scale).
    """
    z, w = hermegauss(order)
    x = z / math.sqrt(scale)
    # Lebesgue weights: w_i * exp(z_i^2 / 2) / sqrt(scale), folded so the
    # caller just evaluates the full (2 pi)^{-1/2} exp(-e x^2 / 2) integrand.
    lw = w * np.exp(0.5 * z**2) / math.sqrt(scale)
    return x, lw


def _doubling(attempt, quad: QuadSpec):
    """Run `attempt(order, panel_order)` with doubled orders until two
    successive values agree to the target.  Stops at the best refinement
    that fits the point budget."""
    order, panel_order = quad.order, quad.panel_order
    prev = attempt(order, panel_order)
    while order < quad.max_order:
        order, panel_order = 2 * order, 2 * panel_order
        try:
            cur = attempt(order, panel_order)
        except _PointBudgetExceeded:
            return prev
        if abs(cur - prev) <= quad.target * max(1.0, abs(cur)):
            return cur
        prev = cur
    return prev


class _PointBudgetExceeded(Exception):
    pass


def _gauss_box_integral(E, box: Box, quad: QuadSpec, log_scale=0.0):
    """Quadrature of (2 pi)^{-kappa/2} exp(-x^T E x / 2) over box x R^rest.

    `log_scale` is added inside the exponent so huge prefactors can be
    folded in without overflow.  Orders double until the target is met.
    Diagonal exponent matrices use the separable per-coordinate path, so
    dimension is unlimited there; coupled matrices need a full tensor grid
    and are limited by the point budget.
    """
    E = np.asarray(E, dtype=float)
    kappa = E.shape[0]
    d = box.dims if box is not None else 0
    if d > kappa:
        raise ValueError("box dimensions exceed ambient dimension")
    if d < kappa:
        free = E[d:, d:]
        evals = np.linalg.eigvalsh(0.5 * (free + free.T))
        if evals.min() <= quad.psd_tol:
            raise DivergenceError(
                "quadratic form fails positive-definiteness on unrestricted "
                f"coordinates (min eigenvalue {evals.min():.3e})"
            )

    diag = np.diag(E)
    off = np.max(np.abs(E - np.diag(diag))) if kappa > 1 else 0.0
    if off <= 1e-13 * max(1.0, np.max(np.abs(diag))):
        log_val = log_scale
        for j in range(kappa):
            e = diag[j]

            def attempt(order, panel_order, _e=e, _isbox=j < d):
                if _isbox:
                    x, w = _box_rule(box.halfwidth, quad.panels, panel_order)
                else:
                    x, w = _free_rule(order, 0.5 * (1.0 + _e))
                return float(w @ np.exp(-0.5 * _e * x * x)) / _SQRT2PI

            log_val += math.log(_doubling(attempt, quad))
        return math.exp(log_val)

    def attempt(order, panel_order):
        rules = []
        npts = 1
        for j in range(kappa):
            if j < d:
                x, w = _box_rule(box.halfwidth, quad.panels, panel_order)
            else:
                # halfway scale keeps the rule an honest quadrature while
                # matching the Gaussian envelope well enough to converge fast
                x, w = _free_rule(order, 0.5 * (1.0 + E[j, j]))
            rules.append((x, w))
            npts *= len(x)
        if npts > quad.max_points:
            raise _PointBudgetExceeded(npts)
        grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
        wgrid = np.meshgrid(*[r[1] for r in rules], indexing="ij")
        wts = np.ones(pts.shape[0])
        for g in wgrid:
            wts = wts * g.ravel()
        expo = -0.5 * np.einsum("ni,ij,nj->n", pts, E, pts) + log_scale
        vals = np.exp(expo)
        return float(wts @ vals) / (2.0 * math.pi) ** (kappa / 2.0)

    try:
        return _doubling(attempt, quad)
    except _PointBudgetExceeded as exc:
        raise ValueError(
            f"tensor quadrature needs {exc.args[0]} points "
            f"(limit {quad.max_points}); dimension too large for a coupled "
            "exponent matrix"
        ) from None


def chi_norm_sq(A, i: int, box: Box | None, quad: QuadSpec | None = None) -> float:
    """Squared L2 norm of the box-restricted density of A^i by quadrature.

    Integrates the squared Radon-Nikodym density of the i-th power of the
    linear symbol over box x R^rest against the Gaussian measure.  Raises
    DivergenceError when the integral is infinite.
    """
    quad = quad or QuadSpec()
    A = np.asarray(A, dtype=float)
    kappa = A.shape[0]
    if box is None:
        box = Box(0, 1.0)
    B = np.linalg.matrix_power(np.linalg.inv(A), i)
    sign, logdetB = np.linalg.slogdet(B)
    E = 2.0 * (B.T @ B) - np.eye(kappa)
    return _gauss_box_integral(E, box, quad, log_scale=2.0 * logdetB)


def h_normalization(A, quad: QuadSpec | None = None) -> float:
    """Quadrature of the density of A against the Gaussian measure.

    Measure transport makes this exactly 1 for every invertible A; the
    quadrature value is the numerical check.
    """
    quad = quad or QuadSpec()
    A = np.asarray(A, dtype=float)
    B = np.linalg.inv(A)
    sign, logdetB = np.linalg.slogdet(B)
    E = B.T @ B
    return _gauss_box_integral(E, Box(0, 1.0), quad, log_scale=logdetB)


def gaussian_box_mass(a: float) -> float:
    """Mass of [-a, a] under the standard 1-D Gaussian."""
    return float(erf(a / math.sqrt(2.0)))


def diag_closed_form(alphas, i: int, n_plus_r: int, k: float, l: int) -> float:
    """Closed-form squared norm of the box-restricted density for a
    diagonal symbol diag(alpha_1, ..., alpha_l), box [-k, k]^(n+r).

    The leading n+r coordinates contribute explicit box-restricted factors
    (error-function form); every tail coordinate j in (n+r, l] contributes
    (alpha_j^i * sqrt(2 - alpha_j^(2i)))^(-1).
    """
    alpha = _materialize(alphas, l)
    if l <= n_plus_r:
        raise ValueError("truncation l must exceed the box dimension n+r")
    log_val = 0.0
    for j in range(1, n_plus_r + 1):
        a2i = alpha[j - 1] ** (2 * i)
        two = 2.0 - a2i
        if two <= 0:
            raise ValueError(
                f"2 - alpha_{j}^(2i) <= 0; box factor undefined"
            )
        # integral over [-k,k] of exp(-x^2 (1 - a^{2i}) / a^{2i}) d(mu_G)
        box_factor = math.sqrt(a2i / two) * erf(k * math.sqrt(two / (2.0 * a2i)))
        log_val += -math.log(a2i) + math.log(box_factor)
    for j in range(n_plus_r + 1, l + 1):
        aj = alpha[j - 1]
        if not 0 < aj < 1:
            raise ValueError(
                f"tail entries must satisfy 0 < alpha_{j} < 1, got {aj}"
            )
        a2i = aj ** (2 * i)
        two = 2.0 - a2i
        if two <= 0:
            raise ValueError(f"2 - alpha_{j}^(2i) <= 0; tail factor undefined")
        log_val -= i * math.log(aj) + 0.5 * math.log(two)
    return math.exp(log_val)


def _materialize(alphas, l):
    if callable(alphas):
        return [float(alphas(j)) for j in range(1, l + 1)]
    seq = [float(v) for v in alphas]
    if len(seq) < l:
        raise ValueError(f"need {l} entries, got {len(seq)}")
    return seq


# ---------------------------------------------------------------------------
# infinite products and the singular-scaling demonstration


@dataclass(frozen=True)
class ProductResult:
    status: str                 # convergent | divergent_to_zero | indeterminate
    value: float                # partial product
    remainder_bound: float | None  # bound on |limit/value - 1| when convergent
    terms_used: int


def infinite_product(terms: Callable[[int], float], n_terms: int = 10_000,
                     tail_bound: Callable[[int], float] | None = None) -> ProductResult:
    """Classify the product of positive terms t_1, t_2, ...

    Convergence is decided through summability of |1 - t_j|.  With a
    `tail_bound(N)` certificate (a bound on the tail sum of |1 - t_j|)
    the verdict is `convergent` together with a rigorous remainder bound.
    Without a certificate the partial sums can only witness divergence to
    zero; anything else is `indeterminate`.
    """
    log_p = 0.0
    dev_sum = 0.0
    dev_half = 0.0
    hit_zero = False
    any_above_one = False
    for j in range(1, n_terms + 1):
        t = float(terms(j))
        if t <= 0:
            raise ValueError(f"term {j} is not positive: {t}")
        if t > 1:
            any_above_one = True
        log_p += math.log(t)
        dev_sum += abs(1.0 - t)
        if j == n_terms // 2:
            dev_half = dev_sum
        if log_p < -745:  # exp underflows
            hit_zero = True
    value = math.exp(log_p) if log_p > -745 else 0.0
    if tail_bound is not None:
        T = float(tail_bound(n_terms))
        if T >= 1.0:
            raise ValueError("tail bound must certify a tail sum below 1")
        rem = math.expm1(T / (1.0 - T))
        return ProductResult("convergent", value, rem, n_terms)
    if dev_sum == 0.0:
        # every inspected term is exactly 1; nothing to bound
        return ProductResult("convergent", value, 0.0, n_terms)
    tail_estimate = dev_sum - dev_half
    if not any_above_one and (hit_zero or tail_estimate > 0.05):
        return ProductResult("divergent_to_zero", value, None, n_terms)
    return ProductResult("indeterminate", value, None, n_terms)


def poisson_bounds(a: float):
    """Two-sided bounds (1 - e^{-a^2/2}, 1 - e^{-a^2}) sandwiching the
    squared Gaussian mass of [-a, a]."""
    if a <= 0:
        raise ValueError("a must be positive")
    return -math.expm1(-a * a / 2.0), -math.expm1(-a * a)


@dataclass
class SingularScalingReport:
    alpha: float
    beta: float                  # exponent of the generator x_n = n^-beta
    N: int
    p_trajectory: np.ndarray     # partial products with exponent beta
    log_q_trajectory: np.ndarray  # log partial products with exponent 2 a^2 b
    p_tail_sum_bound: float      # integral-test bound on the tail of sum x_n
    p_limit_lower: float         # certified lower bound for the limit of P
    q_exponent: float            # 2 * alpha^2 * beta, < 1 (non-summable)
    sqrt_alpha_exponent: float   # beta * sqrt(alpha), < 1 by construction
    near_degenerate: bool
    note: str = (
        "beta = (1 + 1/sqrt(alpha))/2 is one admissible choice; any "
        "exponent strictly between 1 and 1/sqrt(alpha) works. The index "
        "starts at n = 2 because x_1 = 1 would annihilate the first factor."
    )


def singular_scaling_demo(alpha: float, N: int = 10_000) -> SingularScalingReport:
    """Contrast the two box-product trajectories under a singular scaling.

    With x_n = n^-beta and a_n = sqrt(2 ln(1/x_n)), the product of
    1 - exp(-a_n^2 / 2) = 1 - x_n stays bounded away from zero (its
    exponent beta > 1 is summable), while the scaled product of
    1 - exp(-alpha^2 a_n^2) = 1 - x_n^(2 alpha^2) collapses to zero
    (exponent 2 alpha^2 beta < 1 is not summable).
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    beta = 0.5 * (1.0 + 1.0 / math.sqrt(alpha))
    q_exp = 2.0 * alpha * alpha * beta
    ns = np.arange(2, N + 2, dtype=float)
    x = ns ** (-beta)
    xq = ns ** (-q_exp)
    p_traj = np.cumprod(1.0 - x)
    log_q_traj = np.cumsum(np.log1p(-xq))
    # integral-test tail: sum_{n > N+1} n^-beta <= (N+1)^(1-beta) / (beta-1)
    tail = (N + 1.0) ** (1.0 - beta) / (beta - 1.0)
    x_next = (N + 2.0) ** (-beta)
    p_limit_lower = float(p_traj[-1] * math.exp(-tail / (1.0 - x_next)))
    return SingularScalingReport(
        alpha=alpha,
        beta=beta,
        N=N,
        p_trajectory=p_traj,
        log_q_trajectory=log_q_traj,
        p_tail_sum_bound=tail,
        p_limit_lower=p_limit_lower,
        q_exponent=q_exp,
        sqrt_alpha_exponent=beta * math.sqrt(alpha),
        near_degenerate=(1.0 / math.sqrt(alpha) - 1.0) < 0.05,
    )


# ---------------------------------------------------------------------------
# weighted sequence norms and the perturbation inequality


def ell2p_norm_sq(x, p) -> float:
    """Weighted squared norm sum x_j^2 p_j."""
    x = np.asarray(x, dtype=float)
    if callable(p):
        w = np.array([p(j) for j in range(1, len(x) + 1)])
    else:
        w = np.asarray(p, dtype=float)
        if len(w) != len(x):
            raise ValueError("weights and sequence length mismatch")
    if np.any(w <= 0):
        raise ValueError("weights must be positive")
    return float(np.sum(x * x * w))


def proof_constant(b: PerturbedIdentity, k: int, sup_window: int = 200) -> float:
    """The explicit inequality constant for the k-th power of b = I + bhat.

    Assembled from the proof's chain: c = max(sup alpha_j / p_j, sup
    alpha_j); the shift-norm bound on the weighted space comes from the
    ratio bounds (m, M); the k-th power of the perturbation is controlled
    through the binomial expansion with row bounds alpha_j scaled by
    g_k = sum_i C(k, i) (sum alpha)^(i-1).
    """
    c = 0.0
    for j in range(1, sup_window + 1):
        aj = b.alpha(j)
        c = max(c, aj, aj / b.weights(j))
    g_k = sum(
        math.comb(k, i) * b.alpha_sum ** (i - 1) for i in range(1, k + 1)
    )
    eta_k = k * b.base.eta
    shift = max(b.M, 1.0 / b.m) ** (eta_k / 2.0)
    K = 2.0 * (g_k * c) ** 2 * (2 * eta_k + 1) * shift**2
    return K + 2.0 * math.sqrt(K)


@dataclass
class PerturbationCheck:
    C_tilde: float
    worst_ratio: float
    all_pass: bool
    trials: int


def perturbation_bound_check(b: PerturbedIdentity, k: int,
                             xs: Sequence[np.ndarray]) -> PerturbationCheck:
    """Verify |sum x_j^2 - ((b^k) x)_j^2| <= C_tilde * sum x_j^2 p_j on
    finite-support samples, with C_tilde from the explicit constant chain.
    """
    C_tilde = proof_constant(b, k)
    eta = b.base.eta
    worst = 0.0
    for x in xs:
        x = np.asarray(x, dtype=float)
        n = len(x) + k * eta
        b.validate_window(n + k * eta)
        Bk = power(b.symbol, k, n).window(n)
        xp = np.zeros(n)
        xp[: len(x)] = x
        y = Bk @ xp
        lhs = abs(float(np.sum(xp * xp) - np.sum(y * y)))
        rhs = C_tilde * ell2p_norm_sq(x, b.weights)
        if rhs == 0.0:
            if lhs > 0:
                worst = math.inf
            continue
        worst = max(worst, lhs / rhs)
    return PerturbationCheck(C_tilde, worst, worst <= 1.0, len(xs))
