"""Conformal Killing vector classification and polynomial-ansatz discovery.

A vector field xi is a CKV of g when L_xi g = 2 psi g.  The hierarchy:

* psi == 0             Killing vector (KV)
* psi nonzero constant homothetic vector (HV)
* psi_{;ij} == 0       special CKV (sp.CKV); grad psi is then a gradient KV
* otherwise            proper CKV

The conformal factor is always extracted from the trace,
psi = g^{ij}(L_xi g)_{ij} / (2n), before testing proportionality, so no
metric entry is ever divided by.

Discovery is by polynomial ansatz over a polynomial metric only; for other
metrics the caller supplies catalog vectors (fixtures always can).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import sympy as sp

from .expr import (
    Expr,
    Tri,
    ZeroResult,
    eval_numeric,
    is_zero,
    normalize,
    random_rational,
    simplify_kernels,
    surely_zero,
)
from .geometry import (
    Metric,
    hessian_scalar,
    inverse_metric,
    is_gradient,
    lie_derivative_metric,
)

__all__ = [
    "VectorClass",
    "ConformalVector",
    "NotCKV",
    "Undecided",
    "classify",
    "solve_ckv_ansatz",
    "conformal_rescale_check",
    "RescaleCheck",
    "AnsatzError",
]


class VectorClass(Enum):
    KV = "KV"
    HV = "HV"
    SP_CKV = "sp.CKV"
    PROPER_CKV = "proper CKV"


@dataclass(frozen=True)
class ConformalVector:
    """A verified CKV with its conformal factor and hierarchy class."""

    xi: tuple[Expr, ...]
    psi: Expr
    klass: VectorClass
    gradient: ZeroResult
    name: str = ""
    norm_sign: int | None = None  # sign of g(xi, xi) at a sample point; 0 = null

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"<{self.klass.value}{tag} xi={list(self.xi)} psi={self.psi}>"


@dataclass(frozen=True)
class NotCKV:
    """Returned when L_xi g - 2 psi g has a nonzero entry."""

    entry: tuple[int, int]
    residual: Expr


@dataclass(frozen=True)
class Undecided:
    """A zero test came back Unknown; carries the offending expression."""

    residual: Expr


class AnsatzError(ValueError):
    """solve_ckv_ansatz preconditions violated."""


def conformal_factor(xi: Sequence[Expr], g: Metric) -> Expr:
    """psi = g^{ij} (L_xi g)_{ij} / (2n)."""
    n = g.n
    L = lie_derivative_metric(xi, g)
    ginv = inverse_metric(g)
    tr = sum(ginv[i, j] * L[i, j] for i in range(n) for j in range(n))
    return normalize(tr / (2 * n))


def _norm_sign(xi: Sequence[Expr], g: Metric) -> int | None:
    n = g.n
    norm = normalize(
        sum(g[i, j] * xi[i] * xi[j] for i in range(n) for j in range(n))
    )
    z = is_zero(norm)
    if z.state is Tri.ZERO:
        return 0
    rng = random.Random(f"norm-sign|{sp.srepr(norm)}")
    for _ in range(50):
        point = {s: random_rational(rng, positive=True) for s in norm.free_symbols}
        try:
            v = eval_numeric(norm, point)
        except ValueError:
            continue
        if abs(v) > 1e-9:
            return 1 if v > 0 else -1
    return None


def classify(
    xi: Sequence[Expr], g: Metric, name: str = ""
) -> ConformalVector | NotCKV | Undecided:
    """Verify the CKV property of xi and place it in the hierarchy."""
    n = g.n
    xi = tuple(normalize(c) for c in xi)
    if len(xi) != n:
        raise ValueError(f"vector must have {n} components")
    psi = conformal_factor(xi, g)
    L = lie_derivative_metric(xi, g)
    for i in range(n):
        for j in range(i, n):
            res = normalize(L[i, j] - 2 * psi * g[i, j])
            z = is_zero(res)
            if z.state is Tri.NONZERO:
                return NotCKV((i, j), res)
            if z.state is Tri.UNKNOWN:
                return Undecided(res)

    psi = simplify_kernels(psi)
    z_psi = is_zero(psi)
    if z_psi.state is Tri.UNKNOWN:
        return Undecided(psi)
    if z_psi.state is Tri.ZERO:
        klass = VectorClass.KV
        psi = sp.S.Zero
    else:
        dpsi = [normalize(sp.diff(psi, c)) for c in g.chart.coords]
        states = [is_zero(d) for d in dpsi]
        if any(s.state is Tri.UNKNOWN for s in states):
            return Undecided(next(d for d, s in zip(dpsi, states) if s.state is Tri.UNKNOWN))
        if all(s.state is Tri.ZERO for s in states):
            klass = VectorClass.HV
        else:
            H = hessian_scalar(psi, g)
            hstates = [is_zero(H[i, j]) for i in range(n) for j in range(i, n)]
            if any(s.state is Tri.UNKNOWN for s in hstates):
                return Undecided(psi)
            klass = (
                VectorClass.SP_CKV
                if all(s.state is Tri.ZERO for s in hstates)
                else VectorClass.PROPER_CKV
            )
    return ConformalVector(
        xi=xi,
        psi=psi,
        klass=klass,
        gradient=is_gradient(xi, g),
        name=name,
        norm_sign=_norm_sign(xi, g),
    )


# ---------------------------------------------------------------------------
# polynomial ansatz


def _monomials(coords: Sequence[sp.Symbol], degree: int) -> list[Expr]:
    """All monomials of total degree <= degree, graded lexicographic order."""
    out = []
    n = len(coords)
    for total in range(degree + 1):
        for exps in sorted(
            e for e in itertools.product(range(total + 1), repeat=n) if sum(e) == total
        ):
            out.append(sp.Mul(*[c**e for c, e in zip(coords, exps)]))
    return out


def _poly_coeff_equations(expr: Expr, coords: Sequence[sp.Symbol], unknowns) -> list[Expr]:
    """Coefficients of expr as a polynomial in coords (linear in unknowns)."""
    p = sp.Poly(sp.expand(expr), *coords)
    return list(p.coeffs())


def _nullspace_in(rows: list[list[Expr]], dim: int) -> list[sp.Matrix]:
    if not rows:
        return [sp.Matrix([sp.Integer(i == j) for i in range(dim)]) for j in range(dim)]
    M = sp.Matrix(rows)
    return M.nullspace()


def _extend_basis(smaller: list[sp.Matrix], larger: list[sp.Matrix]) -> list[sp.Matrix]:
    """Vectors of `larger` extending `smaller` to a basis of span(larger)."""
    added = []
    have = list(smaller)
    if have:
        M = sp.Matrix.hstack(*have)
        rank = M.rank()
    else:
        M = None
        rank = 0
    for v in larger:
        cand = sp.Matrix.hstack(M, v) if M is not None else sp.Matrix(v)
        r = cand.rank()
        if r > rank:
            M, rank = cand, r
            added.append(v)
    return added


def _primitive(v: sp.Matrix) -> sp.Matrix:
    denoms = [sp.fraction(sp.nsimplify(x))[1] for x in v]
    v = v * sp.lcm([sp.Integer(d) for d in denoms] or [sp.Integer(1)])
    nums = [abs(x) for x in v if x != 0]
    if nums:
        v = v / sp.gcd([sp.Integer(x) for x in nums])
    for x in v:
        if x != 0:
            if x < 0:
                v = -v
            break
    return v


def solve_ckv_ansatz(g: Metric, degree: int = 2, degree_cap: int = 3) -> list[ConformalVector]:
    """Basis of the polynomial CKVs of total degree <= degree.

    The returned basis is adapted to the conformal hierarchy: gradient KVs
    first, then the remaining KVs, then HVs, sp.CKVs and proper CKVs, each
    group in a deterministic order.  Raises :class:`AnsatzError` for
    non-polynomial metrics or a degree above the cap.
    """
    coords = g.chart.coords
    n = g.n
    if degree > degree_cap:
        raise AnsatzError(f"ansatz degree {degree} exceeds cap {degree_cap}")
    for i in range(n):
        for j in range(n):
            if not g[i, j].is_polynomial(*coords):
                raise AnsatzError(f"metric entry g[{i},{j}] = {g[i, j]} is not polynomial")

    mons = _monomials(coords, degree)
    unknowns = [
        sp.Symbol(f"_c_{i}_{a}") for i in range(n) for a in range(len(mons))
    ]
    xi = [
        sum(unknowns[i * len(mons) + a] * mons[a] for a in range(len(mons)))
        for i in range(n)
    ]

    det = g.det()
    adj = g.components.adjugate()
    L = lie_derivative_metric(xi, g)
    # avoid normalize() on entries carrying the ansatz unknowns: plain expand
    L = sp.Matrix(g.n, g.n, lambda i, j: sp.expand(
        sum(xi[k] * sp.diff(g[i, j], coords[k]) for k in range(n))
        + sum(g[k, j] * sp.diff(xi[k], coords[i]) for k in range(n))
        + sum(g[i, k] * sp.diff(xi[k], coords[j]) for k in range(n))
    ))
    trace_num = sp.expand(
        sum(adj[k, l] * L[k, l] for k in range(n) for l in range(n))
    )  # = det * g^{kl} (Lg)_{kl}, polynomial and linear in the unknowns

    # CKV condition, cleared of denominators: n*det*(Lg)_ij - trace_num*g_ij = 0
    eqs: list[Expr] = []
    for i in range(n):
        for j in range(i, n):
            E = sp.expand(n * det * L[i, j] - trace_num * g[i, j])
            eqs.extend(_poly_coeff_equations(E, coords, unknowns))

    A, _ = sp.linear_eq_to_matrix(eqs, unknowns)
    solution_basis = A.nullspace()
    m = len(solution_basis)
    if m == 0:
        return []

    # express psi data for a general element: tau-parametrized
    taus = [sp.Symbol(f"_t_{a}") for a in range(m)]
    cvec = sum((taus[a] * solution_basis[a] for a in range(m)), sp.zeros(len(unknowns), 1))
    sub = dict(zip(unknowns, cvec))
    xi_t = [sp.expand(x.subs(sub)) for x in xi]
    psi_num = sp.expand(trace_num.subs(sub))  # psi = psi_num / (2 n det)
    psi_t = psi_num / (2 * n * det)

    def tau_conditions(exprs: list[Expr]) -> list[list[Expr]]:
        rows = []
        for e in exprs:
            for coeff in _poly_coeff_equations(e, coords, taus):
                rows.append([sp.diff(coeff, ta) for ta in taus])
        return rows

    # layer conditions, each linear in tau
    kv_rows = tau_conditions([psi_num])
    grad_rows = list(kv_rows)
    low = [sp.expand(sum(g[i, j] * xi_t[j] for j in range(n))) for i in range(n)]
    closed = [
        sp.expand(sp.diff(low[j], coords[i]) - sp.diff(low[i], coords[j]))
        for i in range(n)
        for j in range(i + 1, n)
    ]
    grad_rows += tau_conditions(closed)

    hv_rows = tau_conditions(
        [
            sp.expand(det * sp.diff(psi_num, c) - psi_num * sp.diff(det, c))
            for c in coords
        ]
    )
    hess = hessian_scalar_sym(psi_t, g)
    sp_rows = tau_conditions(
        [sp.expand(sp.fraction(sp.together(h))[0]) for h in hess]
    )

    full = [sp.eye(m).col(j) for j in range(m)]
    N_kv = _nullspace_in(kv_rows, m)
    N_grad = _nullspace_in(grad_rows, m)
    N_hv = _nullspace_in(hv_rows, m)
    N_sp = _nullspace_in(sp_rows, m)

    span_grad = N_grad
    span_kv = _extend_basis([], N_grad + N_kv)
    span_hv = _extend_basis([], span_kv + N_hv)
    span_sp = _extend_basis([], span_hv + N_sp)

    adapted = []
    adapted += [("Kg", v) for v in span_grad]
    adapted += [("K", v) for v in _extend_basis(span_grad, N_kv)]
    adapted += [("H", v) for v in _extend_basis(span_kv, N_hv)]
    adapted += [("Csp", v) for v in _extend_basis(span_hv, N_sp)]
    adapted += [("C", v) for v in _extend_basis(span_sp, full)]

    counters: dict[str, int] = {}
    out = []
    for prefix, tau_vec in adapted:
        tau_vec = _primitive(tau_vec)
        point = dict(zip(taus, tau_vec))
        vec = [normalize(x.subs(point)) for x in xi_t]
        counters[prefix] = counters.get(prefix, 0) + 1
        name = f"{prefix}{counters[prefix]}"
        cv = classify(vec, g, name=name)
        if not isinstance(cv, ConformalVector):
            raise AnsatzError(f"ansatz produced a non-CKV: {vec} -> {cv}")
        out.append(cv)
    return out


def hessian_scalar_sym(psi: Expr, g: Metric) -> list[Expr]:
    """Upper-triangle entries of psi_{;ij} without normalize (ansatz path)."""
    n = g.n
    x = g.chart.coords
    from .geometry import christoffel

    gamma = christoffel(g)
    out = []
    for i in range(n):
        for j in range(i, n):
            out.append(
                sp.together(
                    sp.diff(psi, x[i], x[j])
                    - sum(gamma[k][i][j] * sp.diff(psi, x[k]) for k in range(n))
                )
            )
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RescaleCheck:
    """Conformal factors of one field with respect to g and N^2 g.

    Both factors come from direct Lie derivatives.  (The closed-form factor
    transfer rule printed in the source material is dimensionally inconsistent
    with direct computation on the exponential rescale example, so it is not
    used; the two classify() calls are the ground truth.)
    """

    psi_base: Expr
    psi_scaled: Expr
    class_base: VectorClass
    class_scaled: VectorClass


def conformal_rescale_check(xi: Sequence[Expr], g: Metric, N: Expr) -> RescaleCheck:
    """Classify xi against g and against N^2 g and report both factors."""
    base = classify(xi, g)
    if not isinstance(base, ConformalVector):
        raise ValueError(f"field is not a CKV of the base metric: {base}")
    scaled_metric = Metric(g.chart, (N**2) * g.components)
    scaled = classify(xi, scaled_metric)
    if not isinstance(scaled, ConformalVector):
        raise ValueError(f"field is not a CKV of the rescaled metric: {scaled}")
    return RescaleCheck(
        psi_base=base.psi,
        psi_scaled=scaled.psi,
        class_base=base.klass,
        class_scaled=scaled.klass,
    )
