"""Tensor calculus on a coordinate chart.

Everything is exact and symbolic: inverse metric, Christoffel symbols,
the contracted symbols entering the Laplace-Beltrami operator, Lie
derivatives of the metric, scalar Hessians and Laplacians, the Ricci
scalar, and the gradient (closedness) test for lowered vector fields.

Lorentzian metrics are admitted exactly like Riemannian ones; the only
requirement is an invertible symmetric component matrix.  Charts are
assumed topologically trivial, so closed one-forms are treated as exact.

Sign conventions: the Ricci scalar uses R^i_{jkl} = dGamma^i_{lj,k} - ...,
pinned by the unit 2-sphere giving +2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import sympy as sp

from .expr import Expr, Tri, ZeroResult, is_zero, normalize, surely_zero

__all__ = [
    "Chart",
    "Metric",
    "LinearPDE",
    "SingularMetricError",
    "inverse_metric",
    "christoffel",
    "contracted_gamma",
    "laplace_beltrami",
    "divergence_form_gammas",
    "lie_derivative_metric",
    "hessian_scalar",
    "laplacian_scalar",
    "ricci_scalar",
    "is_gradient",
]


class SingularMetricError(ValueError):
    """Metric determinant is identically zero."""


def _as_symbol(s) -> sp.Symbol:
    return s if isinstance(s, sp.Symbol) else sp.Symbol(s)


@dataclass(frozen=True)
class Chart:
    """Ordered coordinate symbols of a local chart."""

    coords: tuple[sp.Symbol, ...]

    def __init__(self, coords: Sequence[sp.Symbol | str]):
        syms = tuple(_as_symbol(c) for c in coords)
        if len(set(syms)) != len(syms):
            raise ValueError(f"coordinate names must be distinct: {syms}")
        if len(syms) < 1:
            raise ValueError("chart needs at least one coordinate")
        object.__setattr__(self, "coords", syms)

    @property
    def n(self) -> int:
        return len(self.coords)

    def index(self, coord: sp.Symbol | str) -> int:
        return self.coords.index(_as_symbol(coord))

    def __repr__(self) -> str:
        return f"Chart({', '.join(c.name for c in self.coords)})"


@dataclass(frozen=True)
class Metric:
    """Symmetric invertible component matrix g_ij over a chart."""

    chart: Chart
    components: sp.ImmutableDenseMatrix

    def __init__(self, chart: Chart, components):
        g = sp.ImmutableDenseMatrix(components).applyfunc(normalize)
        n = chart.n
        if g.shape != (n, n):
            raise ValueError(f"metric must be {n}x{n}, got {g.shape}")
        for i in range(n):
            for j in range(i + 1, n):
                if not surely_zero(g[i, j] - g[j, i]):
                    raise ValueError(f"metric not symmetric in entry ({i},{j})")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "components", g)

    @property
    def n(self) -> int:
        return self.chart.n

    def __getitem__(self, ij) -> Expr:
        return self.components[ij]

    def det(self) -> Expr:
        return normalize(self.components.det(method="berkowitz"))


@dataclass(frozen=True)
class LinearPDE:
    """Second order PDE A^{ij} u_{ij} - B^i u_i - f(x, u) = 0."""

    chart: Chart
    A: sp.ImmutableDenseMatrix
    B: tuple[Expr, ...]
    f: Expr
    dep: sp.Symbol = field(default_factory=lambda: sp.Symbol("u"))

    def __init__(self, chart: Chart, A, B, f, dep: sp.Symbol | str = "u"):
        dep = _as_symbol(dep)
        if dep in chart.coords:
            raise ValueError(f"dependent variable {dep} collides with a coordinate")
        A = sp.ImmutableDenseMatrix(A).applyfunc(normalize)
        n = chart.n
        if A.shape != (n, n):
            raise ValueError(f"A must be {n}x{n}")
        for i in range(n):
            for j in range(i + 1, n):
                if not surely_zero(A[i, j] - A[j, i]):
                    raise ValueError(f"A not symmetric in entry ({i},{j})")
        B = tuple(normalize(b) for b in B)
        if len(B) != n:
            raise ValueError(f"B must have {n} components")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "f", normalize(f))
        object.__setattr__(self, "dep", dep)

    @property
    def n(self) -> int:
        return self.chart.n

    def potential(self) -> Expr | None:
        """V with f = V(x)*u, or None when f is not of that form (0 gives 0)."""
        if self.f == 0:
            return sp.S.Zero
        V = normalize(sp.diff(self.f, self.dep))
        if V.has(self.dep):
            return None
        if not surely_zero(self.f - V * self.dep):
            return None
        return V

    @property
    def is_laplace(self) -> bool:
        return self.f == 0

    def scaled(self, factor: Expr) -> "LinearPDE":
        """The same equation multiplied through by a nonzero factor."""
        return LinearPDE(
            self.chart,
            self.A * factor,
            tuple(factor * b for b in self.B),
            factor * self.f,
            self.dep,
        )


# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def inverse_metric(g: Metric) -> sp.ImmutableDenseMatrix:
    """g^{ij}; raises :class:`SingularMetricError` when det(g) is zero."""
    det = g.det()
    if surely_zero(det):
        raise SingularMetricError(f"metric determinant vanishes: det = {det}")
    inv = g.components.adjugate().applyfunc(normalize) / det
    return sp.ImmutableDenseMatrix(inv).applyfunc(normalize)


@lru_cache(maxsize=None)
def christoffel(g: Metric) -> tuple:
    """Gamma^i_{jk} = g^{il}(g_{lj,k} + g_{lk,j} - g_{jk,l})/2, symmetric in jk."""
    n = g.n
    x = g.chart.coords
    ginv = inverse_metric(g)
    dg = [[[sp.diff(g[l, j], x[k]) for k in range(n)] for j in range(n)] for l in range(n)]
    gamma = []
    for i in range(n):
        plane = []
        for j in range(n):
            row = []
            for k in range(n):
                if k < j:
                    row.append(plane[k][j])
                    continue
                term = sum(
                    ginv[i, l] * (dg[l][j][k] + dg[l][k][j] - dg[j][k][l])
                    for l in range(n)
                )
                row.append(normalize(term / 2))
            plane.append(row)
        gamma.append(tuple(tuple(r) for r in plane))
    return tuple(gamma)


@lru_cache(maxsize=None)
def contracted_gamma(g: Metric) -> tuple[Expr, ...]:
    """Gamma^i = Gamma^i_{jk} g^{jk}."""
    n = g.n
    ginv = inverse_metric(g)
    gamma = christoffel(g)
    return tuple(
        normalize(sum(gamma[i][j][k] * ginv[j, k] for j in range(n) for k in range(n)))
        for i in range(n)
    )


def laplace_beltrami(g: Metric, dep: sp.Symbol | str = "u") -> LinearPDE:
    """The Laplace equation of g: g^{ij} u_{ij} - Gamma^i u_i = 0."""
    return LinearPDE(g.chart, inverse_metric(g), contracted_gamma(g), sp.S.Zero, dep)


def _metric_sign(g: Metric) -> int:
    """Sign of det(g) probed at a sample point (for sqrt|det| in tests)."""
    from .expr import eval_numeric, random_rational
    import random

    det = g.det()
    rng = random.Random(f"metric-sign|{sp.srepr(det)}")
    for _ in range(50):
        point = {s: random_rational(rng, positive=True) for s in det.free_symbols}
        try:
            v = eval_numeric(det, point)
        except ValueError:
            continue
        if abs(v) > 1e-9:
            return 1 if v > 0 else -1
    raise SingularMetricError("could not determine the sign of det(g)")


def divergence_form_gammas(g: Metric) -> tuple[Expr, ...]:
    """-|g|^{-1/2} d_j(|g|^{1/2} g^{ij}), for checking against contracted_gamma."""
    n = g.n
    x = g.chart.coords
    ginv = inverse_metric(g)
    det = g.det()
    sqrtg = sp.sqrt(_metric_sign(g) * det)
    out = []
    for i in range(n):
        term = -sum(sp.diff(sqrtg * ginv[i, j], x[j]) for j in range(n)) / sqrtg
        out.append(normalize(term))
    return tuple(out)


def lie_derivative_metric(xi: Sequence[Expr], g: Metric) -> sp.ImmutableDenseMatrix:
    """(L_xi g)_ij = xi^k g_ij,k + g_kj xi^k_,i + g_ik xi^k_,j."""
    n = g.n
    x = g.chart.coords
    if len(xi) != n:
        raise ValueError(f"vector must have {n} components")
    xi = [normalize(c) for c in xi]
    L = sp.zeros(n, n)
    for i in range(n):
        for j in range(n):
            t = sum(xi[k] * sp.diff(g[i, j], x[k]) for k in range(n))
            t += sum(g[k, j] * sp.diff(xi[k], x[i]) for k in range(n))
            t += sum(g[i, k] * sp.diff(xi[k], x[j]) for k in range(n))
            L[i, j] = normalize(t)
    return sp.ImmutableDenseMatrix(L)


def hessian_scalar(psi: Expr, g: Metric) -> sp.ImmutableDenseMatrix:
    """psi_{;ij} = psi_{,ij} - Gamma^k_{ij} psi_{,k}."""
    n = g.n
    x = g.chart.coords
    gamma = christoffel(g)
    psi = normalize(psi)
    H = sp.zeros(n, n)
    for i in range(n):
        for j in range(i, n):
            t = sp.diff(psi, x[i], x[j]) - sum(
                gamma[k][i][j] * sp.diff(psi, x[k]) for k in range(n)
            )
            H[i, j] = H[j, i] = normalize(t)
    return sp.ImmutableDenseMatrix(H)


def laplacian_scalar(psi: Expr, g: Metric) -> Expr:
    """Delta psi = g^{ij} psi_{;ij} = g^{ij} psi_{,ij} - Gamma^i psi_{,i}."""
    n = g.n
    x = g.chart.coords
    ginv = inverse_metric(g)
    gam = contracted_gamma(g)
    psi = normalize(psi)
    t = sum(ginv[i, j] * sp.diff(psi, x[i], x[j]) for i in range(n) for j in range(n))
    t -= sum(gam[i] * sp.diff(psi, x[i]) for i in range(n))
    return normalize(t)


@lru_cache(maxsize=None)
def ricci_scalar(g: Metric) -> Expr:
    """Scalar curvature; the unit 2-sphere gives +2.

    R_{jk} = Gamma^i_{jk,i} - Gamma^i_{ji,k}
             + Gamma^i_{ip} Gamma^p_{jk} - Gamma^i_{kp} Gamma^p_{ji}
    contracted with g^{jk}.
    """
    n = g.n
    x = g.chart.coords
    ginv = inverse_metric(g)
    gamma = christoffel(g)
    total = sp.S.Zero
    for j in range(n):
        for k in range(n):
            ric = sum(sp.diff(gamma[i][j][k], x[i]) for i in range(n))
            ric -= sum(sp.diff(gamma[i][j][i], x[k]) for i in range(n))
            ric += sum(
                gamma[i][i][p] * gamma[p][j][k] - gamma[i][k][p] * gamma[p][j][i]
                for i in range(n)
                for p in range(n)
            )
            total += ginv[j, k] * ric
    return normalize(total)


def lower_index(xi: Sequence[Expr], g: Metric) -> tuple[Expr, ...]:
    """xi_i = g_ij xi^j."""
    n = g.n
    return tuple(
        normalize(sum(g[i, j] * xi[j] for j in range(n))) for i in range(n)
    )


def is_gradient(xi: Sequence[Expr], g: Metric) -> ZeroResult:
    """Closedness of the lowered field: d_[i xi_j] = 0 (tri-state).

    Closed one-forms count as gradients because charts are simply connected.
    """
    n = g.n
    x = g.chart.coords
    low = lower_index(xi, g)
    results = []
    for i in range(n):
        for j in range(i + 1, n):
            results.append(is_zero(sp.diff(low[j], x[i]) - sp.diff(low[i], x[j])))
    if any(r.state is Tri.NONZERO for r in results):
        return ZeroResult(Tri.NONZERO)
    if all(r.state is Tri.ZERO for r in results):
        return ZeroResult(Tri.ZERO, probabilistic=any(r.probabilistic for r in results))
    return ZeroResult(Tri.UNKNOWN)
