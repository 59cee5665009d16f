"""Lie point symmetries of Laplace/Poisson/Klein-Gordon equations.

Two independent routes are provided and tested against each other:

* generation straight from the conformal algebra of the metric
  (:func:`laplace_symmetries`, :func:`klein_gordon_symmetries`) together with
  the closed-form symmetry conditions for a linear second order PDE
  (:func:`check_linear_pde_symmetry`, :func:`poisson_symmetry_check`);

* a raw second-prolongation computation (:func:`verify_by_prolongation`)
  that knows nothing about conformal geometry and serves as the oracle.

Generators have the affine form X = xi^i(x) d_i + (a(x) u + b(x)) d_u.  The
free additive multiple of u d_u is normalized away in generated symmetries:
conformal factors that are constant contribute nothing (KVs and HVs appear
bare) and u d_u is listed separately.  The b(x) d_u family is carried as a
symbolic :data:`GENERIC_SOLUTION` marker, never instantiated.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import sympy as sp

from .expr import Expr, Tri, ZeroResult, is_zero, normalize, surely_zero
from .geometry import Chart, LinearPDE, Metric, laplacian_scalar
from .conformal import ConformalVector, NotCKV, Undecided, VectorClass, classify

__all__ = [
    "GenericSolution",
    "GENERIC_SOLUTION",
    "SymmetryGenerator",
    "SymmetryConditionReport",
    "CatalogError",
    "laplace_symmetries",
    "klein_gordon_symmetries",
    "poisson_symmetry_check",
    "check_linear_pde_symmetry",
    "verify_by_prolongation",
    "trivial_generators",
]

log = logging.getLogger(__name__)


class GenericSolution:
    """Marker object: b(x) is 'any solution of the homogeneous equation'."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "<generic solution b(x)>"


GENERIC_SOLUTION = GenericSolution()


@dataclass(frozen=True)
class SymmetryGenerator:
    """X = xi^i d_i + (a u + b) d_u over a chart."""

    chart: Chart
    xi: tuple[Expr, ...]
    a: Expr = sp.S.Zero
    b: Expr | GenericSolution = sp.S.Zero
    name: str = ""

    def __init__(self, chart, xi, a=sp.S.Zero, b=sp.S.Zero, name=""):
        xi = tuple(normalize(c) for c in xi)
        if len(xi) != chart.n:
            raise ValueError(f"generator needs {chart.n} base components")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "a", normalize(a))
        b_val = b if isinstance(b, GenericSolution) else normalize(b)
        object.__setattr__(self, "b", b_val)
        object.__setattr__(self, "name", name)

    @property
    def has_generic_b(self) -> bool:
        return isinstance(self.b, GenericSolution)

    @property
    def is_trivial(self) -> bool:
        """True for the u d_u and b d_u generators (zero base part)."""
        return all(c == 0 for c in self.xi)

    def eta(self, u: sp.Symbol) -> Expr:
        if self.has_generic_b:
            raise ValueError("generic-solution generator has no concrete eta")
        return self.a * u + self.b

    def renamed(self, name: str) -> "SymmetryGenerator":
        return SymmetryGenerator(self.chart, self.xi, self.a, self.b, name)

    def scaled(self, c) -> "SymmetryGenerator":
        if self.has_generic_b:
            raise ValueError("cannot scale a generic-solution generator")
        return SymmetryGenerator(
            self.chart, tuple(c * x for x in self.xi), c * self.a, c * self.b, self.name
        )

    def __repr__(self) -> str:
        tag = f"{self.name}: " if self.name else ""
        parts = [
            f"{comp}*d_{c.name}"
            for comp, c in zip(self.xi, self.chart.coords)
            if comp != 0
        ]
        if self.has_generic_b:
            parts.append("b*d_u")
        elif self.a != 0 or self.b != 0:
            parts.append(f"({self.a}*u + {self.b})*d_u")
        return f"<X {tag}{' + '.join(parts) or '0'}>"


@dataclass(frozen=True)
class SymmetryConditionReport:
    """Outcome of a symmetry condition: tri-state plus the multiplier."""

    satisfied: ZeroResult
    lam: Expr | None
    residuals: tuple[Expr, ...] = ()
    note: str = ""

    def __bool__(self) -> bool:
        return self.satisfied.state is Tri.ZERO


class CatalogError(ValueError):
    """A supplied catalog vector failed the CKV check."""


def _combine(states: Sequence[ZeroResult]) -> ZeroResult:
    if any(s.state is Tri.NONZERO for s in states):
        return ZeroResult(Tri.NONZERO)
    if all(s.state is Tri.ZERO for s in states):
        return ZeroResult(Tri.ZERO, probabilistic=any(s.probabilistic for s in states))
    return ZeroResult(Tri.UNKNOWN)


def _as_conformal(catalog, g: Metric) -> list[ConformalVector]:
    out = []
    for k, entry in enumerate(catalog):
        if isinstance(entry, ConformalVector):
            out.append(entry)
            continue
        cv = classify(entry, g, name=f"v{k + 1}")
        if isinstance(cv, NotCKV):
            raise CatalogError(
                f"catalog vector {list(entry)} is not a CKV: residual "
                f"{cv.residual} in entry {cv.entry}"
            )
        if isinstance(cv, Undecided):
            raise CatalogError(
                f"catalog vector {list(entry)}: CKV check undecided on {cv.residual}"
            )
        out.append(cv)
    return out


def trivial_generators(chart: Chart, dep: sp.Symbol | str = "u") -> list[SymmetryGenerator]:
    """u d_u plus the generic-solution family b(x) d_u."""
    zero = tuple(sp.S.Zero for _ in chart.coords)
    return [
        SymmetryGenerator(chart, zero, a=sp.S.One, name="Xu"),
        SymmetryGenerator(chart, zero, b=GENERIC_SOLUTION, name="Xb"),
    ]


def _geometric_generator(cv: ConformalVector, n: int, chart: Chart) -> SymmetryGenerator:
    """The emitted symmetry for one CKV, with the u d_u gauge fixed.

    Constant conformal factors (KV, HV) are absorbed into the free a_0, so
    those generators are emitted bare; non-constant factors keep the
    (2-n)/2 psi u d_u term with a_0 = 0.
    """
    if cv.klass in (VectorClass.KV, VectorClass.HV):
        a = sp.S.Zero
    else:
        a = sp.Rational(2 - n, 2) * cv.psi
    return SymmetryGenerator(chart, cv.xi, a=a, name=cv.name)


def laplace_symmetries(
    g: Metric, catalog: Sequence, dep: sp.Symbol | str = "u"
) -> list[SymmetryGenerator]:
    """Symmetries of the Laplace equation of g generated by the catalog CKVs.

    n > 2: every KV/HV/sp.CKV yields a symmetry; a proper CKV does iff its
    conformal factor is harmonic.  n = 2: every CKV yields a symmetry with no
    psi term.  The trivial pair u d_u, b d_u is always appended.
    """
    return klein_gordon_symmetries(g, sp.S.Zero, catalog, dep)


def klein_gordon_symmetries(
    g: Metric, V: Expr, catalog: Sequence, dep: sp.Symbol | str = "u"
) -> list[SymmetryGenerator]:
    """Symmetries of Delta u - V(x) u = 0 from the catalog CKVs.

    Condition for n > 2: xi^k V_,k + 2 psi V - (2-n)/2 * Delta psi = 0;
    for n = 2: xi^k V_,k + 2 psi V = 0.  V = 0 recovers the Laplace case.
    """
    n = g.n
    V = normalize(V)
    chart = g.chart
    out = []
    for cv in _as_conformal(catalog, g):
        dV = sum(
            cv.xi[k] * sp.diff(V, chart.coords[k]) for k in range(n)
        )
        cond = dV + 2 * cv.psi * V
        if n > 2:
            cond -= sp.Rational(2 - n, 2) * laplacian_scalar(cv.psi, g)
        z = is_zero(cond)
        if z.state is Tri.NONZERO:
            continue
        if z.state is Tri.UNKNOWN:
            log.warning(
                "symmetry condition undecided for %s; leaving it out", cv.name or cv
            )
            continue
        if n > 2:
            out.append(_geometric_generator(cv, n, chart))
        else:
            out.append(SymmetryGenerator(chart, cv.xi, name=cv.name))
    out.extend(trivial_generators(chart, dep))
    return out


# ---------------------------------------------------------------------------
# closed-form symmetry conditions for A^{ij}u_ij - B^i u_i - f = 0


def _lie_derivative_contravariant(
    xi: Sequence[Expr], A: sp.Matrix, coords
) -> sp.Matrix:
    """(L_xi A)^{ij} = xi^k A^{ij}_,k - A^{kj} xi^i_,k - A^{ik} xi^j_,k."""
    n = len(coords)
    L = sp.zeros(n, n)
    for i in range(n):
        for j in range(n):
            t = sum(xi[k] * sp.diff(A[i, j], coords[k]) for k in range(n))
            t -= sum(A[k, j] * sp.diff(xi[i], coords[k]) for k in range(n))
            t -= sum(A[i, k] * sp.diff(xi[j], coords[k]) for k in range(n))
            L[i, j] = normalize(t)
    return L


def check_linear_pde_symmetry(pde: LinearPDE, X: SymmetryGenerator) -> SymmetryConditionReport:
    """Closed-form symmetry conditions for the affine generator X.

    First the multiplier lambda is solved from the requirement that
    L_xi A be proportional to A (through lambda - a), then the first order
    and zeroth order conditions are tested.  Residuals are collected; a
    nonzero proportionality residual fails immediately.
    """
    if X.chart != pde.chart:
        raise ValueError("generator chart does not match the PDE chart")
    n = pde.n
    coords = pde.chart.coords
    u = pde.dep
    xi, a = X.xi, X.a
    A, B, f = pde.A, pde.B, pde.f

    LA = _lie_derivative_contravariant(xi, A, coords)
    pivot = None
    for i in range(n):
        for j in range(i, n):
            if is_zero(A[i, j]).state is Tri.NONZERO:
                pivot = (i, j)
                break
        if pivot:
            break
    if pivot is None:
        raise ValueError("PDE has no usable nonzero A entry")
    lam = normalize(a + LA[pivot] / A[pivot])

    states: list[ZeroResult] = []
    residuals: list[Expr] = []

    for i in range(n):
        for j in range(i, n):
            res = normalize(LA[i, j] - (lam - a) * A[i, j])
            z = is_zero(res)
            states.append(z)
            if z.state is Tri.NONZERO:
                return SymmetryConditionReport(
                    satisfied=ZeroResult(Tri.NONZERO),
                    lam=lam,
                    residuals=(res,),
                    note=f"L_xi A not proportional to A in entry ({i},{j})",
                )

    for k in range(n):
        t = sum(A[i, j] * sp.diff(xi[k], coords[i], coords[j]) for i in range(n) for j in range(n))
        t -= 2 * sum(A[i, k] * sp.diff(a, coords[i]) for i in range(n))
        t += a * B[k]
        t -= sum(sp.diff(xi[k], coords[i]) * B[i] for i in range(n))
        t += sum(xi[i] * sp.diff(B[k], coords[i]) for i in range(n))
        t -= lam * B[k]
        res = normalize(t)
        z = is_zero(res)
        states.append(z)
        if z.state is not Tri.ZERO:
            residuals.append(res)

    note = ""
    fu = sp.diff(f, u)
    t = sum(A[i, j] * sp.diff(a, coords[i], coords[j]) for i in range(n) for j in range(n)) * u
    t -= sum(sp.diff(a, coords[i]) * B[i] for i in range(n)) * u
    t -= sum(xi[k] * sp.diff(f, coords[k]) for k in range(n))
    t -= a * u * fu
    t += lam * f
    if X.has_generic_b:
        if pde.potential() is None:
            raise ValueError("generic-solution b requires f linear in u")
        note = "b-terms satisfied by definition (b solves the equation)"
    else:
        b = X.b
        t += sum(A[i, j] * sp.diff(b, coords[i], coords[j]) for i in range(n) for j in range(n))
        t -= sum(sp.diff(b, coords[i]) * B[i] for i in range(n))
        t -= b * fu
    res = normalize(t)
    z = is_zero(res)
    states.append(z)
    if z.state is not Tri.ZERO:
        residuals.append(res)

    return SymmetryConditionReport(
        satisfied=_combine(states), lam=lam, residuals=tuple(residuals), note=note
    )


def poisson_symmetry_check(g: Metric, f: Expr, X: SymmetryGenerator) -> SymmetryConditionReport:
    """Conformal-route check of X against Delta u - f(x, u) = 0.

    Requires xi to be a CKV; for n > 2 the u-coefficient must equal
    (2-n)/2 psi up to an additive constant, for n = 2 it must be constant.
    The remaining constraint is the zeroth order condition with multiplier
    lambda = a - 2 psi.  Failures are report content, not errors.
    """
    n = g.n
    coords = g.chart.coords
    u_syms = [s for s in normalize(f).free_symbols if s not in coords]
    u = u_syms[0] if u_syms else sp.Symbol("u")
    f = normalize(f)

    cv = classify(X.xi, g)
    if isinstance(cv, NotCKV):
        return SymmetryConditionReport(
            satisfied=ZeroResult(Tri.NONZERO),
            lam=None,
            residuals=(cv.residual,),
            note="xi is not a CKV of the metric",
        )
    if isinstance(cv, Undecided):
        return SymmetryConditionReport(
            satisfied=ZeroResult(Tri.UNKNOWN),
            lam=None,
            residuals=(cv.residual,),
            note="CKV check undecided",
        )
    psi = cv.psi
    states: list[ZeroResult] = []
    residuals: list[Expr] = []

    shape = X.a - (sp.Rational(2 - n, 2) * psi if n > 2 else 0)
    for c in coords:
        res = normalize(sp.diff(shape, c))
        z = is_zero(res)
        states.append(z)
        if z.state is not Tri.ZERO:
            residuals.append(res)

    lam = normalize(X.a - 2 * psi)
    fu = sp.diff(f, u)
    t = laplacian_scalar(X.a, g) * u
    t -= sum(xk * sp.diff(f, ck) for xk, ck in zip(X.xi, coords))
    t -= X.a * u * fu
    t += lam * f
    note = ""
    if X.has_generic_b:
        note = "b-terms satisfied by definition (b solves the equation)"
    else:
        t += laplacian_scalar(X.b, g)
        t -= X.b * fu
    res = normalize(sp.expand(t))
    z = is_zero(res)
    states.append(z)
    if z.state is not Tri.ZERO:
        residuals.append(res)

    return SymmetryConditionReport(
        satisfied=_combine(states), lam=lam, residuals=tuple(residuals), note=note
    )


# ---------------------------------------------------------------------------
# the prolongation oracle


def _jet_symbols(pde: LinearPDE):
    n = pde.n
    u = pde.dep
    du = [sp.Symbol(f"_{u.name}_{i}") for i in range(n)]
    ddu = {}
    for i in range(n):
        for j in range(i, n):
            ddu[(i, j)] = ddu[(j, i)] = sp.Symbol(f"_{u.name}_{i}_{j}")
    return du, ddu


def verify_by_prolongation(pde: LinearPDE, X: SymmetryGenerator) -> SymmetryConditionReport:
    """Second-prolongation symmetry check, independent of Theorems 1-3.

    Builds eta_[i], eta_[ij] from the total-derivative formulas, applies
    X^[2] to H = A^{ij}u_ij - B^i u_i - f, eliminates one second derivative
    through H = 0 (the first diagonal entry with nonzero A^{ii}, else the
    first nonzero mixed entry), and requires the result to vanish identically
    in the remaining jet coordinates.  lambda is recovered by coefficient
    matching.
    """
    if X.chart != pde.chart:
        raise ValueError("generator chart does not match the PDE chart")
    n = pde.n
    coords = pde.chart.coords
    u = pde.dep
    if X.has_generic_b:
        if pde.potential() is None:
            raise ValueError("generic-solution b requires f linear in u")
        return SymmetryConditionReport(
            satisfied=ZeroResult(Tri.ZERO),
            lam=sp.S.Zero,
            note="b d_u family: symmetry of any linear equation by definition of b",
        )

    du, ddu = _jet_symbols(pde)

    def total_diff(F: Expr, i: int) -> Expr:
        t = sp.diff(F, coords[i]) + du[i] * sp.diff(F, u)
        t += sum(ddu[(k, i)] * sp.diff(F, du[k]) for k in range(n))
        return t

    xi, a, b = X.xi, X.a, X.b
    eta = a * u + b
    eta_i = [
        sp.expand(total_diff(eta, i) - sum(du[j] * sp.diff(xi[j], coords[i]) for j in range(n)))
        for i in range(n)
    ]
    eta_ij = {}
    for i in range(n):
        for j in range(n):
            eta_ij[(i, j)] = sp.expand(
                total_diff(eta_i[i], j)
                - sum(ddu[(i, k)] * sp.diff(xi[k], coords[j]) for k in range(n))
            )

    H = sp.expand(
        sum(pde.A[i, j] * ddu[(i, j)] for i in range(n) for j in range(n))
        - sum(pde.B[i] * du[i] for i in range(n))
        - pde.f
    )

    E = sum(xi[i] * sp.diff(H, coords[i]) for i in range(n))
    E += eta * sp.diff(H, u)
    E += sum(eta_i[i] * sp.diff(H, du[i]) for i in range(n))
    for i in range(n):
        for j in range(i, n):
            coeff = sp.diff(H, ddu[(i, j)])
            sym_eta = (eta_ij[(i, j)] + eta_ij[(j, i)]) / 2
            E += sym_eta * coeff
    E = sp.expand(E)

    pivot = None
    for k in range(n):
        if is_zero(pde.A[k, k]).state is Tri.NONZERO:
            pivot = (k, k)
            break
    if pivot is None:
        for i in range(n):
            for j in range(i + 1, n):
                if is_zero(pde.A[i, j]).state is Tri.NONZERO:
                    pivot = (i, j)
                    break
            if pivot:
                break
    if pivot is None:
        raise ValueError("PDE has no nonzero A entry to eliminate through H = 0")
    upiv = ddu[pivot]
    c = sp.diff(H, upiv)
    R = sp.expand(H - c * upiv)
    lam = normalize(sp.diff(E, upiv) / c)
    E_mod = sp.expand(E.subs(upiv, -R / c))

    jets = [u] + du + sorted(set(ddu.values()), key=lambda s: s.name)
    jets = [s for s in jets if s != upiv]
    numer = sp.fraction(sp.together(E_mod))[0]
    poly = sp.Poly(sp.expand(numer), *jets)
    states: list[ZeroResult] = []
    residuals: list[Expr] = []
    for coeff in poly.coeffs():
        res = normalize(coeff)
        z = is_zero(res)
        states.append(z)
        if z.state is not Tri.ZERO:
            residuals.append(res)
    return SymmetryConditionReport(
        satisfied=_combine(states), lam=lam, residuals=tuple(residuals)
    )
