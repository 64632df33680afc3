"""Numeric verdict procedures for the weak-cohyponormality class machinery.

The module hosts the coefficient-tensor layer (effective degree, the
positivity form over complex lambda, Gram-constructed admissible tensors),
the bilinear form for powers of the composition adjoint, the matrix
normality test, and the hypothesis suites for the three criteria on banded
symbols.

A sampled check of a universally quantified positivity statement can only
disprove it or accumulate evidence, never prove it; verdicts are therefore
split into "fail" (a genuine disproof), "pass" (a numeric check at stated
tolerance) and "evidence" (a sampled or truncated statement).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .banded import (
    BandedSymbol,
    BlockPartition,
    PerturbedIdentity,
    det_sequence,
    in_class_F,
    power_entry_bound,
    truncate,
)
from .gaussmeas import (
    Box,
    DivergenceError,
    QuadSpec,
    chi_norm_sq,
    perturbation_bound_check,
)
from .hermite import HermiteModel

__all__ = [
    "CheckReport",
    "CoefficientTensor",
    "LambdaGrid",
    "compute_n_a",
    "gram_construct",
    "form_positivity_evidence",
    "snr_form_value",
    "SnrFormResult",
    "normality_test",
    "hyponormality_consequence",
    "thm51_suite",
    "prop52_suite",
    "prop56_suite",
]


@dataclass
class CheckReport:
    """Structured pass/fail/evidence record for one verified hypothesis."""

    name: str
    verdict: str                     # pass | fail | evidence
    payload: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    seed: int | None = None

    def to_dict(self):
        return {
            "name": self.name,
            "verdict": self.verdict,
            "payload": _plain(self.payload),
            "params": _plain(self.params),
            "tolerances": _plain(self.tolerances),
            "seed": self.seed,
        }


def _plain(obj):
    """Recursively convert numpy scalars/arrays for serialization."""
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


# ---------------------------------------------------------------------------
# coefficient tensors


class CoefficientTensor:
    """Complex coefficients a[p, q, i, j], p, q in 0..n, i, j in 1..m.

    The effective degree is the largest index whose row or column slice in
    the (p, q) plane carries a nonzero entry.
    """

    def __init__(self, entries):
        a = np.asarray(entries, dtype=complex)
        if a.ndim != 4 or a.shape[0] != a.shape[1] or a.shape[2] != a.shape[3]:
            raise ValueError("tensor must have shape (n+1, n+1, m, m)")
        self.a = a
        self.n = a.shape[0] - 1
        self.m = a.shape[2]
        self.n_a = compute_n_a(self)

    @classmethod
    def zeros(cls, n, m):
        return cls(np.zeros((n + 1, n + 1, m, m), dtype=complex))

    def scaled(self, z):
        return CoefficientTensor(self.a * z)


def compute_n_a(c: CoefficientTensor) -> int:
    """Greatest degree index whose row or column slice is nonzero."""
    a = c.a if isinstance(c, CoefficientTensor) else np.asarray(c, dtype=complex)
    for d in range(a.shape[0] - 1, -1, -1):
        if np.any(a[d, :, :, :] != 0) or np.any(a[:, d, :, :] != 0):
            return d
    return 0


def gram_construct(c) -> CoefficientTensor:
    """Tensor a[p,q,i,j] = sum_t c[p,i,t] * conj(c[q,j,t]).

    The resulting positivity form is a sum of squares, so the output is
    admissible for every lambda by construction.
    """
    c = np.asarray(c, dtype=complex)
    if c.ndim != 3:
        raise ValueError("generator must have shape (n+1, m, T)")
    a = np.einsum("pit,qjt->pqij", c, np.conj(c))
    return CoefficientTensor(a)


@dataclass(frozen=True)
class LambdaGrid:
    """Sampling grid in the complex plane for the positivity form."""

    radii: tuple = tuple(round(0.1 * k, 1) for k in range(1, 21))
    n_angles: int = 64
    n_random: int = 256
    random_radius: float = 3.0
    seed: int = 0

    def points(self):
        pts = [0.0 + 0.0j]
        for rho in self.radii:
            for t in range(self.n_angles):
                theta = 2.0 * math.pi * t / self.n_angles
                pts.append(rho * complex(math.cos(theta), math.sin(theta)))
        rng = np.random.default_rng(self.seed)
        for _ in range(self.n_random):
            while True:
                z = complex(*(rng.uniform(-1, 1, 2) * self.random_radius))
                if abs(z) <= self.random_radius:
                    pts.append(z)
                    break
        return np.array(pts)


def form_positivity_evidence(c: CoefficientTensor,
                             grid: LambdaGrid | None = None,
                             tol_psd: float = 1e-10) -> CheckReport:
    """Sample the positivity form over a lambda grid.

    For each lambda the form in z is the Hermitian matrix M with
    M[j, i] = sum_{p,q} a[p,q,i,j] lambda^p conj(lambda)^q; a negative
    eigenvalue below -tol_psd * |M| at any sampled lambda is a disproof.
    A clean sweep is evidence only: sampling cannot certify all lambda.
    """
    grid = grid or LambdaGrid()
    a = c.a
    worst = math.inf
    witness = None
    max_asym = 0.0
    for lam in grid.points():
        lp = np.array([lam**p for p in range(c.n + 1)])
        C = np.einsum("p,q,pqij->ij", lp, np.conj(lp), a)
        M = C.T
        scale = max(1.0, float(np.linalg.norm(M)))
        asym = float(np.linalg.norm(M - M.conj().T)) / scale
        max_asym = max(max_asym, asym)
        H = 0.5 * (M + M.conj().T)
        lo = float(np.linalg.eigvalsh(H)[0])
        if asym > tol_psd or lo < -tol_psd * scale:
            if lo / scale < worst:
                worst, witness = lo / scale, lam
    ok = witness is None
    return CheckReport(
        name="form_positivity",
        verdict="evidence" if ok else "fail",
        payload={
            "witness_lambda": None if ok else [witness.real, witness.imag],
            "worst_relative_eigenvalue": None if ok else worst,
            "max_asymmetry": max_asym,
        },
        params={"n": c.n, "m": c.m, "n_a": c.n_a,
                "grid_points": len(grid.points())},
        tolerances={"tol_psd": tol_psd},
        seed=grid.seed,
    )


# ---------------------------------------------------------------------------
# the bilinear form for powers of the composition adjoint
#
# Inner products <S^a f, S^b g> with S the composition adjoint are computed
# by direct quadrature of the weighted-composition representation
#     <S^a f, S^b g> = int h_{A^a} h_{A^b} (f o A^-a) conj(g o A^-b) d mu,
# which involves no truncation of the operator at all.  Successive
# projections of S onto a padded polynomial model were tried first and
# rejected: the adjoint moves mass up in degree with slowly decaying tails,
# so projection leakage of order 1e-1 swamps any useful tolerance.  Here
# the only error source is quadrature, controlled by order doubling.


_gram_cache: dict = {}


def _power_pair_grams(A, model: HermiteModel, max_power: int, order: int):
    """Gram matrices G[a][b] with f^T G conj(g) = <S^a f, S^b g>."""
    A = np.asarray(A, dtype=float)
    cache_key = (A.tobytes(), A.shape, id(model), max_power, order)
    if cache_key in _gram_cache:
        return _gram_cache[cache_key]
    kappa = A.shape[0]
    if kappa != model.kappa:
        raise ValueError("symbol dimension does not match the model")
    inv = np.linalg.inv(A)
    B = [np.linalg.matrix_power(inv, d) for d in range(max_power + 1)]
    logdet = [np.linalg.slogdet(b)[1] for b in B]
    M = [b.T @ b for b in B]
    from numpy.polynomial.hermite_e import hermegauss

    z1, v1 = hermegauss(order)
    grams = {}
    for a in range(max_power + 1):
        for b in range(a, max_power + 1):
            E = M[a] + M[b] - np.eye(kappa)
            lo = float(np.linalg.eigvalsh(0.5 * (E + E.T))[0])
            if lo <= 1e-12:
                raise DivergenceError(
                    f"inner product of powers ({a}, {b}) diverges: combined "
                    f"exponent matrix has min eigenvalue {lo:.3e}"
                )
            scales = np.maximum(np.diag(E), 0.1)
            axes_x = [z1 / math.sqrt(s) for s in scales]
            grids = np.meshgrid(*axes_x, indexing="ij")
            X = np.stack([g.ravel() for g in grids], axis=-1)
            zg = np.meshgrid(*[z1] * kappa, indexing="ij")
            Z2 = sum((g.ravel() ** 2 * (1.0 - 1.0 / s))
                     for g, s in zip(zg, scales))
            logv = np.zeros(X.shape[0])
            wg = np.meshgrid(*[np.log(v1)] * kappa, indexing="ij")
            for g in wg:
                logv = logv + g.ravel()
            Xa = X @ B[a].T
            Xb = X @ B[b].T
            expo = (
                logv
                + 0.5 * Z2
                - 0.5 * np.sum(np.log(scales))
                - 0.5 * kappa * math.log(2.0 * math.pi)
                + logdet[a] + logdet[b]
                + 0.5 * (2.0 * np.sum(X * X, axis=1)
                         - np.sum(Xa * Xa, axis=1)
                         - np.sum(Xb * Xb, axis=1))
            )
            weff = np.exp(expo)
            Ba = model.basis_matrix(Xa)
            Bb = model.basis_matrix(Xb)
            G = Ba.T @ (weff[:, None] * Bb)
            grams[(a, b)] = G
            if a != b:
                grams[(b, a)] = G.T
    _gram_cache[cache_key] = grams
    return grams


@dataclass
class SnrFormResult:
    value: float
    imag: float
    defect: float          # change of the value under quadrature doubling
    valid: bool


def snr_form_value(A, c: CoefficientTensor, r: int, testfns, model: HermiteModel,
                   order: int | None = None,
                   defect_tol: float = 1e-6) -> SnrFormResult:
    """Value of the double-sum form for T = the composition adjoint of A.

    `testfns[i][k]` (i = 0..m-1, k = 0..r) are coefficient vectors over the
    model.  The trial is valid when the value is stable under quadrature
    doubling and its imaginary part is negligible.
    """
    if len(testfns) != c.m or any(len(row) != r + 1 for row in testfns):
        raise ValueError("need an m x (r+1) array of test functions")
    order = order or max(24, 2 * model.degree + 8)
    max_power = c.n_a + r
    vals = []
    for o in (order, 2 * order):
        grams = _power_pair_grams(A, model, max_power, o)
        coefs = [[np.asarray(f.coef if hasattr(f, "coef") else f,
                             dtype=complex) for f in row] for row in testfns]
        total = 0.0 + 0.0j
        for p in range(c.n_a + 1):
            for q in range(c.n_a + 1):
                for k in range(r + 1):
                    for l in range(r + 1):
                        G = grams[(p + k, q + l)]
                        for i in range(c.m):
                            for j in range(c.m):
                                aij = c.a[p, q, i, j]
                                if aij == 0:
                                    continue
                                u = coefs[i][l]
                                v = coefs[j][k]
                                total += aij * (u @ (G @ np.conj(v)))
        vals.append(total)
    defect = abs(vals[1] - vals[0]) / max(1.0, abs(vals[1]))
    imag = abs(vals[1].imag) / max(1.0, abs(vals[1]))
    return SnrFormResult(
        value=float(vals[1].real),
        imag=imag,
        defect=defect,
        valid=defect <= defect_tol and imag <= defect_tol,
    )


# ---------------------------------------------------------------------------
# matrix-level tests


def normality_test(A, tol: float = 1e-10) -> CheckReport:
    """Frobenius-norm commutator test |A A^T - A^T A| <= tol |A|_F^2."""
    A = np.asarray(A, dtype=float)
    comm = A @ A.T - A.T @ A
    scale = float(np.linalg.norm(A)) ** 2
    resid = float(np.linalg.norm(comm))
    ok = resid <= tol * max(scale, 1e-300)
    return CheckReport(
        name="normality",
        verdict="pass" if ok else "fail",
        payload={"commutator_frobenius": resid, "scale": scale},
        tolerances={"tol": tol},
    )


def hyponormality_consequence(A, model_degree: int = 6, trials: int = 200,
                              seed: int = 0, tol: float = 1e-7) -> CheckReport:
    """Empirical consequence of membership in the first weak class.

    On random pairs (f, g) checks the quadratic form
    <f,f> + <g,Tf> + <Tf,g> + <Tg,Tg> >= -tol with T the composition
    adjoint, plus the derived norm comparison |T* g| <= |Tg| obtained by
    substituting f = -T* g (T* acts as plain composition, which preserves
    polynomial degree and is evaluated exactly in the model).
    """
    A = np.asarray(A, dtype=float)
    model = HermiteModel.get(A.shape[0], model_degree)
    grams = _power_pair_grams(A, model, 1, max(24, 2 * model_degree + 8))
    G00, G10, G11 = grams[(0, 0)], grams[(1, 0)], grams[(1, 1)]
    # T* g = g o A within the model (degree-preserving, hence exact): its
    # coefficients satisfy <T* g, e_b> = <g, T e_b> = (G10 @ g)[b]
    rng = np.random.default_rng(seed)
    worst_form = math.inf
    worst_norm_gap = -math.inf
    for t in range(trials):
        f = rng.standard_normal(model.dim)
        g = rng.standard_normal(model.dim)
        f /= np.linalg.norm(f)
        g /= np.linalg.norm(g)
        if t % 4 == 0:
            # adversarial substitution f = -T* g
            f = -(G10 @ g)
        form = float(f @ (G00 @ f) + 2.0 * (f @ (G10 @ g))
                     + g @ (G11 @ g))
        worst_form = min(worst_form, form)
        tstar = G10 @ g
        tstar_sq = float(tstar @ (G00 @ tstar))
        t_sq = float(g @ (G11 @ g))
        worst_norm_gap = max(worst_norm_gap,
                             math.sqrt(max(tstar_sq, 0.0))
                             - math.sqrt(max(t_sq, 0.0)))
    ok = worst_form >= -tol and worst_norm_gap <= tol
    return CheckReport(
        name="hyponormality_consequence",
        verdict="pass" if ok else "fail",
        payload={"worst_form_value": worst_form,
                 "worst_adjoint_norm_excess": worst_norm_gap,
                 "trials": trials},
        params={"degree": model_degree},
        tolerances={"tol": tol},
        seed=seed,
    )


# ---------------------------------------------------------------------------
# hypothesis suites


def _glod_trajectory(corner, s, i, box, L, quad, dim_cap):
    """Trajectory of the box-restricted squared norms of the truncation
    densities; `corner(l)` yields the s(l) x s(l) symbol matrix."""
    traj = []
    capped = False
    cap = max(dim_cap, box.dims)
    for l in range(1, L + 1):
        size = s.cut(l)
        if size > cap:
            capped = True
            break
        mat = corner(l)
        traj.append(chi_norm_sq(mat, i, Box(min(box.dims, size),
                                            box.halfwidth), quad))
    return traj, capped


def _trajectory_consistent(traj, skip=0):
    """Finite values whose increments shrink (Cauchy-looking).

    The first `skip` levels are ignored: while the truncation is smaller
    than the box the restricted box grows with the level and increments are
    not comparable.
    """
    if any(not math.isfinite(v) for v in traj):
        return False
    tail = traj[skip:]
    incs = [abs(b - a) for a, b in zip(tail, tail[1:])]
    if len(incs) < 2:
        return True
    return all(b <= a + 1e-12 or a < 1e-12 for a, b in zip(incs, incs[1:]))


def thm51_suite(a: BandedSymbol, s: BlockPartition, n: int, r: int, L: int,
                boxes, quad: QuadSpec | None = None,
                dim_cap: int = 6) -> list:
    """Numeric checks for the general inductive-limit criterion.

    Per power i and box: finiteness of the truncation norm (iii), the
    trajectory of box-restricted norms (v, reported as evidence since a
    limsup over all truncations cannot be certified), and the structural
    coordinate-stability conditions (vi)/(vii) which hold exactly for
    banded symbols.
    """
    quad = quad or QuadSpec()
    reports = []
    for i in range(1, n + r + 1):
        for bi, box in enumerate(boxes):
            try:
                traj, capped = _glod_trajectory(
                    lambda l: truncate(a, s, l), s, i, box, L, quad, dim_cap)
            except DivergenceError as exc:
                reports.append(CheckReport(
                    name=f"finiteness[i={i},box={bi}]",
                    verdict="fail",
                    payload={"detail": str(exc)},
                    params={"i": i, "box_halfwidth": box.halfwidth},
                ))
                continue
            except ValueError as exc:
                reports.append(CheckReport(
                    name=f"finiteness[i={i},box={bi}]",
                    verdict="evidence",
                    payload={"detail": f"not computable within the "
                                       f"quadrature budget: {exc}"},
                    params={"i": i, "box_halfwidth": box.halfwidth},
                ))
                continue
            reports.append(CheckReport(
                name=f"finiteness[i={i},box={bi}]",
                verdict="pass",
                payload={"largest_norm_sq": traj[-1] if traj else None},
                params={"i": i, "box_halfwidth": box.halfwidth,
                        "levels": len(traj), "dim_capped": capped},
            ))
            skip = sum(1 for l in range(1, len(traj) + 1)
                       if s.cut(l) < box.dims)
            reports.append(CheckReport(
                name=f"norm_trajectory[i={i},box={bi}]",
                verdict="evidence" if _trajectory_consistent(traj, skip)
                else "fail",
                payload={"trajectory": traj,
                         "note": "limit behaviour consistent up to the "
                                 "reported truncation depth only"},
                params={"i": i, "box_halfwidth": box.halfwidth},
            ))
        structural_ok = a.eta is not None and np.isfinite(a.eta)
        reports.append(CheckReport(
            name=f"coordinate_stability[i={i}]",
            verdict="pass" if structural_ok else "evidence",
            payload={"bandwidth": a.eta,
                     "stable_from": f"any p with s(p) >= m + {i * a.eta}"
                     if structural_ok else "not checkable for unbanded symbols"},
            params={"i": i},
        ))
    return reports


def prop52_suite(a: BandedSymbol, s: BlockPartition, n: int, r: int, L: int,
                 boxes, quad: QuadSpec | None = None,
                 tol: float = 1e-10, dim_cap: int = 6) -> list:
    """Hypothesis suite for the block-3-diagonal inverse-symbol criterion.

    Checks, on truncations up to depth L: invertibility of the corners,
    membership of the inverse symbol in the full-or-zero-rank block class,
    normality of the inverse corners, finiteness of the box-restricted
    norms and consistency of their trajectory.
    """
    quad = quad or QuadSpec()
    reports = []
    nmax = s.cut(L)
    corner_L = truncate(a, s, L)
    # (a) invertibility of the truncations
    bad = None
    for l in range(1, L + 1):
        sg, la = np.linalg.slogdet(truncate(a, s, l))
        if sg == 0 or not np.isfinite(la):
            bad = l
            break
    reports.append(CheckReport(
        name="invertible_truncations",
        verdict="pass" if bad is None else "fail",
        payload={"first_singular_level": bad},
        params={"L": L},
    ))
    if bad is not None:
        return reports
    inv_L = np.linalg.inv(corner_L)
    inv_sym = BandedSymbol.from_dense(
        np.where(np.abs(inv_L) > 1e-12, inv_L, 0.0))
    # (b) inverse symbol in the block class; edge rows of the window are
    # contaminated by truncation, so check one block short
    rep = in_class_F(inv_sym, s, max(2, L - 1), tol=tol)
    reports.append(CheckReport(
        name="inverse_in_block_class",
        verdict="pass" if rep.ok and rep.structural_violation is None else "fail",
        payload={"structural_violation": rep.structural_violation,
                 "block_ranks": rep.block_ranks},
        tolerances={"rank_tol": tol},
    ))
    # (d) normality of the inverse corners
    worst = 0.0
    for k in range(1, L + 1):
        sub = inv_L[: s.cut(k), : s.cut(k)]
        rep_k = normality_test(sub, tol=1e-8)
        worst = max(worst, rep_k.payload["commutator_frobenius"]
                    / max(rep_k.payload["scale"], 1e-300))
    reports.append(CheckReport(
        name="inverse_corners_normal",
        verdict="pass" if worst <= 1e-8 else "fail",
        payload={"worst_relative_commutator": worst},
        tolerances={"tol": 1e-8},
    ))
    # (c) + (e): finiteness and trajectory of the box-restricted norms
    for i in range(1, n + r + 1):
        for bi, box in enumerate(boxes):
            try:
                traj, capped = _glod_trajectory(
                    lambda l: truncate(a, s, l), s, i, box, L, quad, dim_cap)
            except DivergenceError as exc:
                reports.append(CheckReport(
                    name=f"box_norm_finite[i={i},box={bi}]",
                    verdict="fail",
                    payload={"detail": str(exc)},
                ))
                continue
            except ValueError as exc:
                reports.append(CheckReport(
                    name=f"box_norm_finite[i={i},box={bi}]",
                    verdict="evidence",
                    payload={"detail": f"not computable within the "
                                       f"quadrature budget: {exc}"},
                ))
                continue
            reports.append(CheckReport(
                name=f"box_norm_finite[i={i},box={bi}]",
                verdict="pass",
                payload={"largest_norm_sq": traj[-1] if traj else None,
                         "dim_capped": capped},
                params={"i": i, "box_halfwidth": box.halfwidth},
            ))
            skip = sum(1 for l in range(1, len(traj) + 1)
                       if s.cut(l) < box.dims)
            reports.append(CheckReport(
                name=f"norm_trajectory_consistent[i={i},box={bi}]",
                verdict="pass" if _trajectory_consistent(traj, skip)
                else "fail",
                payload={"trajectory": traj},
                params={"i": i, "box_halfwidth": box.halfwidth},
            ))
    return reports


def prop56_suite(b: PerturbedIdentity, s: BlockPartition, n: int, r: int,
                 rho: float | None, L: int = 64, seed: int = 0,
                 bound_window: int = 12, bound_samples: int = 100) -> list:
    """Hypothesis suite for the perturbed-identity criterion.

    Family preconditions are checked first; a failed precondition stops the
    suite before any determinant analysis.  Then: summability certificates,
    the determinant floor |det b_k| >= rho up to depth L, the power entry
    bound, and the sampled perturbation inequality with the proof-derived
    constant.
    """
    reports = []
    for name, ok in b.preconditions:
        reports.append(CheckReport(
            name=f"precondition: {name}",
            verdict="pass" if ok else "fail",
            payload={},
        ))
    if any(rep.verdict == "fail" for rep in reports):
        reports.append(CheckReport(
            name="conclusion",
            verdict="fail",
            payload={"detail": "family precondition violated; determinant "
                               "analysis not attempted"},
        ))
        return reports
    # summability and ratio certificates (validated on a finite window)
    win = max(64, s.cut(min(len(s), L)))
    partial_alpha = math.fsum(b.alpha(j) for j in range(1, win + 1))
    partial_p = math.fsum(b.weights(j) for j in range(1, win + 1))
    summable_ok = (partial_alpha <= b.alpha_sum * (1 + 1e-9)
                   and partial_p <= b.weight_sum * (1 + 1e-9))
    reports.append(CheckReport(
        name="summability_certificates",
        verdict="pass" if summable_ok else "fail",
        payload={"alpha_partial": partial_alpha, "alpha_sum": b.alpha_sum,
                 "weight_partial": partial_p, "weight_sum": b.weight_sum},
        params={"window": win},
    ))
    try:
        b.validate_window(win)
        reports.append(CheckReport(
            name="symmetry_rowbound_ratio", verdict="pass",
            params={"window": win}))
    except ValueError as exc:
        reports.append(CheckReport(
            name="symmetry_rowbound_ratio", verdict="fail",
            payload={"detail": str(exc)}))
    # determinant floor
    dets = det_sequence(b.symbol, s, min(L, len(s)))
    if rho is None:
        rho = 0.5 * float(np.min(np.abs(dets)))
    floor_ok = bool(np.all(np.abs(dets) >= rho - 1e-12))
    reports.append(CheckReport(
        name="determinant_floor",
        verdict="pass" if floor_ok else "fail",
        payload={"min_abs_det": float(np.min(np.abs(dets))),
                 "rho": rho,
                 "strictly_decreasing": bool(np.all(np.diff(dets) < 0)),
                 "note": f"floor verified to depth {len(dets)}; deeper "
                         "determinants extrapolate by monotonicity"},
        params={"L": len(dets)},
    ))
    # trace-class entry bound for powers up to n + r
    worst_entry = 0.0
    for k in range(1, max(1, n + r) + 1):
        ok, ratio = power_entry_bound(b, k, bound_window)
        worst_entry = max(worst_entry, ratio)
    reports.append(CheckReport(
        name="power_entry_bound",
        verdict="pass" if worst_entry <= 1.0 + 1e-12 else "fail",
        payload={"worst_ratio": worst_entry},
        params={"window": bound_window, "max_power": max(1, n + r)},
    ))
    # sampled perturbation inequality
    rng = np.random.default_rng(seed)
    worst_pert = 0.0
    c_tilde = None
    for k in range(1, max(1, n + r) + 1):
        xs = []
        for _ in range(bound_samples):
            x = np.zeros(24)
            support = rng.choice(24, size=12, replace=False)
            x[support] = rng.standard_normal(12)
            xs.append(x)
        chk = perturbation_bound_check(b, k, xs)
        worst_pert = max(worst_pert, chk.worst_ratio)
        c_tilde = chk.C_tilde
    reports.append(CheckReport(
        name="perturbation_inequality",
        verdict="pass" if worst_pert <= 1.0 else "fail",
        payload={"worst_ratio": worst_pert, "C_tilde": c_tilde},
        params={"samples_per_power": bound_samples},
        seed=seed,
    ))
    all_ok = all(rep.verdict == "pass" for rep in reports)
    reports.append(CheckReport(
        name="conclusion",
        verdict="pass" if all_ok else "fail",
        payload={"detail": f"class-membership hypotheses verified to depth "
                           f"{min(L, len(s))}" if all_ok
                 else "at least one hypothesis failed"},
        params={"n": n, "r": r},
    ))
    return reports
