"""Symmetry reduction of a linear second order PDE by one point symmetry.

The engine never integrates characteristic systems.  A reduction needs a
straightening :class:`CoordinateMap` from the registry (or user supplied)
under which the symmetry becomes rho(x) * (d_s + mu u d_u) for a constant
weight mu.  The zero order invariants are then the remaining coordinates
together with w = u e^{-mu s}; substituting u = e^{mu s} w and dropping s
yields the reduced equation.  The registry maps use logarithmic radial
coordinates precisely so that the similarity substitution is always of this
exponential form (the algebraic weights like u R^{-2p} come out of s = ln R).

After a reduction, :func:`as_laplace_form` tries to recognize the result as
the Laplace or Klein-Gordon equation of a reduced metric, optionally after
multiplying through by a supplied gauge factor.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import sympy as sp

from .expr import (
    Expr,
    Tri,
    eval_numeric,
    is_zero,
    normalize,
    simplify_kernels,
    surely_zero,
)
from .geometry import Chart, LinearPDE, Metric, contracted_gamma, inverse_metric
from .liesym import (
    GenericSolution,
    SymmetryGenerator,
    check_linear_pde_symmetry,
)

__all__ = [
    "CoordinateMap",
    "MapValidationError",
    "ReductionError",
    "StraightenResult",
    "ReductionResult",
    "LaplaceForm",
    "transform_pde",
    "transform_metric",
    "pushforward_vector",
    "pushforward_generator",
    "straighten",
    "reduce",
    "as_laplace_form",
    "project_generator",
    "registry",
    "identity_map",
    "hyperspherical_map",
    "spckv_similarity_map",
    "inversion_map",
    "lrs_hv_map",
    "petrov3_map",
    "frw_ckv_map",
]


class MapValidationError(ValueError):
    """forward/inverse composition failed the identity check."""


class ReductionError(ValueError):
    """The symmetry/map pair does not produce a valid reduction."""


@dataclass(frozen=True)
class CoordinateMap:
    """Invertible chart change: old coordinates as expressions in new ones.

    ``forward`` maps every old coordinate to its expression in the new chart;
    ``inverse`` maps every new coordinate back.  The composition is verified
    at construction: symbolically when possible, otherwise numerically at
    random rational points inside ``sample_box`` (so non-rational maps get a
    probabilistic check over their valid domain).
    """

    name: str
    old_chart: Chart
    new_chart: Chart
    forward: Mapping[sp.Symbol, Expr]
    inverse: Mapping[sp.Symbol, Expr]
    domain_note: str = ""
    sample_box: Mapping[sp.Symbol, tuple] | None = None

    def __init__(self, name, old_chart, new_chart, forward, inverse,
                 domain_note="", sample_box=None, check=True):
        forward = {k: normalize(v) for k, v in forward.items()}
        inverse = {k: normalize(v) for k, v in inverse.items()}
        if set(forward) != set(old_chart.coords):
            raise ValueError("forward must cover exactly the old coordinates")
        if set(inverse) != set(new_chart.coords):
            raise ValueError("inverse must cover exactly the new coordinates")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "old_chart", old_chart)
        object.__setattr__(self, "new_chart", new_chart)
        object.__setattr__(self, "forward", dict(forward))
        object.__setattr__(self, "inverse", dict(inverse))
        object.__setattr__(self, "domain_note", domain_note)
        object.__setattr__(self, "sample_box", dict(sample_box) if sample_box else None)
        if check:
            self._check_roundtrip()

    def _box_point(self, rng: random.Random, extra_symbols=()) -> dict:
        point = {}
        for c in self.new_chart.coords:
            lo, hi = (self.sample_box or {}).get(c, (sp.Rational(3, 10), sp.Rational(3, 2)))
            lo, hi = sp.Rational(lo), sp.Rational(hi)
            point[c] = lo + (hi - lo) * sp.Rational(rng.randint(1, 63), 64)
        for p in extra_symbols:
            # free parameters carried by the map (sampled off special values)
            point[p] = sp.Rational(rng.randint(17, 100), 64)
        return point

    def _check_roundtrip(self, samples: int = 10) -> None:
        composed = {
            c: self.inverse[c].subs(self.forward, simultaneous=True)
            for c in self.new_chart.coords
        }
        residuals = {c: normalize(e - c) for c, e in composed.items()}
        if all(r == 0 for r in residuals.values()):
            return
        rng = random.Random(f"roundtrip|{self.name}")
        for c, r in residuals.items():
            if r == 0:
                continue
            params = sorted(
                r.free_symbols - set(self.new_chart.coords), key=lambda s: s.name
            )
            good = 0
            attempts = 0
            while good < samples and attempts < 8 * samples:
                attempts += 1
                try:
                    v = eval_numeric(r, self._box_point(rng, params))
                except ValueError:
                    continue
                if abs(v) > sp.Float("1e-8"):
                    raise MapValidationError(
                        f"map {self.name!r}: inverse(forward({c.name})) - {c.name} = {r} "
                        f"is nonzero on the sample box"
                    )
                good += 1
            if good < samples:
                raise MapValidationError(
                    f"map {self.name!r}: could not validate the round trip for {c.name}"
                )


def pushforward_vector(xi: Sequence[Expr], cmap: CoordinateMap) -> tuple[Expr, ...]:
    """Components of xi^i d_{old_i} in the new chart."""
    old = cmap.old_chart.coords
    out = []
    for c in cmap.new_chart.coords:
        comp = sum(x * sp.diff(cmap.inverse[c], o) for x, o in zip(xi, old))
        out.append(substitute_forward(comp, cmap))
    return tuple(out)


def substitute_forward(e: Expr, cmap: CoordinateMap) -> Expr:
    return simplify_kernels(normalize(e).subs(cmap.forward, simultaneous=True))


def pushforward_generator(X: SymmetryGenerator, cmap: CoordinateMap) -> SymmetryGenerator:
    if X.chart != cmap.old_chart:
        raise ValueError("generator chart does not match the map")
    b = X.b if X.has_generic_b else substitute_forward(X.b, cmap)
    return SymmetryGenerator(
        cmap.new_chart,
        pushforward_vector(X.xi, cmap),
        substitute_forward(X.a, cmap),
        b,
        X.name,
    )


def transform_pde(pde: LinearPDE, cmap: CoordinateMap) -> LinearPDE:
    """The same equation written in the new chart."""
    if pde.chart != cmap.old_chart:
        raise ValueError("PDE chart does not match the map")
    old = cmap.old_chart.coords
    new = cmap.new_chart.coords
    n = len(old)
    F = [cmap.inverse[c] for c in new]  # new_k as function of old
    dF = [[sp.diff(F[k], old[i]) for i in range(n)] for k in range(n)]
    A2 = sp.zeros(n, n)
    B2 = []
    for k in range(n):
        for l in range(k, n):
            t = sum(
                pde.A[i, j] * dF[k][i] * dF[l][j] for i in range(n) for j in range(n)
            )
            A2[k, l] = A2[l, k] = substitute_forward(t, cmap)
    for k in range(n):
        t = sum(pde.B[i] * dF[k][i] for i in range(n))
        t -= sum(
            pde.A[i, j] * sp.diff(F[k], old[i], old[j])
            for i in range(n)
            for j in range(n)
        )
        B2.append(substitute_forward(t, cmap))
    f2 = normalize(pde.f.subs(
        {o: cmap.forward[o] for o in old}, simultaneous=True))
    return LinearPDE(cmap.new_chart, sp.ImmutableDenseMatrix(A2), tuple(B2), f2, pde.dep)


def transform_metric(g: Metric, cmap: CoordinateMap) -> Metric:
    """Pullback of g to the new chart: g'_{kl} = g_ij F^i_{,k} F^j_{,l}."""
    if g.chart != cmap.old_chart:
        raise ValueError("metric chart does not match the map")
    old = cmap.old_chart.coords
    new = cmap.new_chart.coords
    n = len(old)
    fwd = [cmap.forward[o] for o in old]
    J = [[sp.diff(fwd[i], new[k]) for k in range(n)] for i in range(n)]
    gf = g.components.subs(cmap.forward, simultaneous=True)
    comp = sp.zeros(n, n)
    for k in range(n):
        for l in range(k, n):
            t = sum(gf[i, j] * J[i][k] * J[j][l] for i in range(n) for j in range(n))
            comp[k, l] = comp[l, k] = simplify_kernels(t)
    return Metric(cmap.new_chart, sp.ImmutableDenseMatrix(comp))


# ---------------------------------------------------------------------------
# straightening and reduction


@dataclass(frozen=True)
class StraightenResult:
    s: sp.Symbol
    mu: Expr
    factor: Expr  # pushforward X = factor * (d_s + mu u d_u)
    pushed: SymmetryGenerator
    metric: Metric | None = None


def straighten(
    X: SymmetryGenerator, cmap: CoordinateMap, g: Metric | None = None
) -> StraightenResult:
    """Identify the translation coordinate and constant weight of X under cmap.

    The pushforward must equal rho(x) * (d_s + mu u d_u) with mu constant;
    the common scalar rho is allowed because a symmetry and its functional
    multiples share the same zero order invariants.
    """
    if X.has_generic_b:
        raise ReductionError("cannot reduce by a generic-solution symmetry")
    P = pushforward_generator(X, cmap)
    if not surely_zero(P.b):
        raise ReductionError(f"straightened symmetry keeps an inhomogeneous term {P.b}")
    nz = []
    for c, comp in zip(cmap.new_chart.coords, P.xi):
        state = is_zero(comp).state
        if state is not Tri.ZERO:
            nz.append((c, comp))
    if len(nz) != 1:
        raise ReductionError(
            f"map {cmap.name!r} does not straighten {X.name or X}: nonzero components "
            f"{[(c.name, str(e)) for c, e in nz]}"
        )
    s, rho = nz[0]
    mu = normalize(sp.cancel(P.a / rho))
    for c in cmap.new_chart.coords:
        if not surely_zero(sp.diff(mu, c)):
            raise ReductionError(f"weight {mu} is not constant (varies with {c.name})")
    if not surely_zero(P.a - mu * rho):
        raise ReductionError("u-coefficient is not proportional to the base component")
    gm = transform_metric(g, cmap) if g is not None else None
    return StraightenResult(s=s, mu=mu, factor=rho, pushed=P, metric=gm)


@dataclass(frozen=True)
class LaplaceForm:
    metric: Metric
    potential: Expr
    gauge: Expr


@dataclass(frozen=True)
class ReductionResult:
    used: SymmetryGenerator
    cmap: CoordinateMap
    s: sp.Symbol
    mu: Expr
    factor: Expr
    reduced_chart: Chart
    reduced_pde: LinearPDE
    laplace_form: LaplaceForm | None = None

    def with_laplace_form(self, form: LaplaceForm | None) -> "ReductionResult":
        return replace(self, laplace_form=form)


def _pick_reference(coeffs: list[Expr]) -> Expr:
    for c in coeffs:
        if is_zero(c).state is Tri.NONZERO:
            return c
    raise ReductionError("reduced equation is identically zero")


def reduce(
    pde: LinearPDE,
    X: SymmetryGenerator,
    cmap: CoordinateMap,
    *,
    check_symmetry: bool = True,
    s0: Expr = sp.S.Zero,
    dep: str = "w",
) -> ReductionResult:
    """Reduce pde by X using the straightening map.

    X must be a verified symmetry of pde.  The transformed coefficients are
    required to be s-free up to one common factor (checked exactly through
    Wronskian ratios); the reduced equation is the transformed one with
    u = e^{mu s} w substituted and s frozen at ``s0``.
    """
    if check_symmetry:
        rep = check_linear_pde_symmetry(pde, X)
        if rep.satisfied.state is not Tri.ZERO:
            raise ReductionError(
                f"{X.name or X} is not a verified symmetry of the equation: "
                f"residuals {rep.residuals[:2]}"
            )
    st = straighten(X, cmap)
    tp = transform_pde(pde, cmap)
    new = cmap.new_chart.coords
    n = len(new)
    s_idx = new.index(st.s)
    mu = st.mu

    V = tp.potential()
    if V is None and mu != 0:
        raise ReductionError("exponential similarity substitution needs f linear in u")

    keep = [k for k in range(n) if k != s_idx]
    A_hat = sp.Matrix(
        len(keep), len(keep), lambda a, b: tp.A[keep[a], keep[b]]
    )
    B_hat = [tp.B[k] - 2 * mu * tp.A[k, s_idx] for k in keep]
    if V is not None:
        V_hat = normalize(V + mu * tp.B[s_idx] - mu**2 * tp.A[s_idx, s_idx])
        f_hat_template = None
    else:
        V_hat = None
        f_hat_template = tp.f  # mu == 0, possibly nonlinear f

    coeffs = [A_hat[a, b] for a in range(len(keep)) for b in range(a, len(keep))]
    coeffs += list(B_hat)
    if V_hat is not None:
        coeffs.append(V_hat)
    ref = _pick_reference([A_hat[a, b] for a in range(len(keep)) for b in range(a, len(keep))])
    dref = sp.diff(ref, st.s)
    for c in coeffs:
        w = normalize(sp.diff(c, st.s) * ref - c * dref)
        if not surely_zero(w):
            raise ReductionError(
                f"residual {st.s.name}-dependence in reduced coefficient {c}"
            )

    def freeze(e: Expr) -> Expr:
        for candidate in (s0, sp.S.One, sp.Integer(2)):
            v = e.subs(st.s, candidate)
            if not v.has(sp.zoo, sp.nan, sp.oo):
                return simplify_kernels(v)
        raise ReductionError(f"could not freeze {st.s.name} in {e}")

    reduced_chart = Chart([new[k] for k in keep])
    dep_sym = sp.Symbol(dep if sp.Symbol(dep) not in reduced_chart.coords else f"{dep}_")
    A_red = A_hat.applyfunc(freeze)
    B_red = tuple(freeze(b) for b in B_hat)
    if V_hat is not None:
        f_red = freeze(V_hat) * dep_sym
    else:
        f_red = normalize(freeze(f_hat_template).subs(tp.dep, dep_sym))
    reduced = LinearPDE(reduced_chart, A_red, B_red, f_red, dep_sym)
    return ReductionResult(
        used=X,
        cmap=cmap,
        s=st.s,
        mu=mu,
        factor=st.factor,
        reduced_chart=reduced_chart,
        reduced_pde=reduced,
    )


def as_laplace_form(rr: ReductionResult, gauge_hint: Expr | None = None) -> LaplaceForm | None:
    """Try to read the reduced equation as Laplace/Klein-Gordon of a metric.

    Proposes h^{ij} = gauge * A^{ij} for gauge in (1, hint) and accepts when
    the first order terms match the contracted Christoffel symbols of h and
    the zeroth order term is a potential.  Returns None when no gauge works.
    """
    pde = rr.reduced_pde
    V = pde.potential()
    if V is None:
        return None
    gauges = [sp.S.One]
    if gauge_hint is not None:
        gauges.append(normalize(gauge_hint))
    m = pde.n
    for gauge in gauges:
        h_inv = (pde.A * gauge).applyfunc(normalize)
        det = h_inv.det(method="berkowitz")
        if surely_zero(det):
            continue
        h_low = (h_inv.adjugate() / det).applyfunc(normalize)
        try:
            h = Metric(pde.chart, sp.ImmutableDenseMatrix(h_low))
            gam = contracted_gamma(h)
        except Exception:
            continue
        ok = all(
            surely_zero(normalize(gauge * pde.B[i] - gam[i])) for i in range(m)
        )
        if not ok:
            continue
        return LaplaceForm(metric=h, potential=normalize(gauge * V), gauge=gauge)
    return None


def project_generator(
    Y: SymmetryGenerator, rr: ReductionResult
) -> SymmetryGenerator | None:
    """Push Y through the reduction chart and similarity substitution.

    Returns the reduced-chart generator, or None when Y does not descend
    (an s-dependent component survives).  The w-coefficient picks up
    -mu * Y^s because w = u e^{-mu s}.
    """
    P = pushforward_generator(Y, rr.cmap)
    new = rr.cmap.new_chart.coords
    s = rr.s
    s_idx = new.index(s)
    a_new = normalize(P.a - rr.mu * P.xi[s_idx])
    comps = [P.xi[k] for k in range(len(new)) if k != s_idx]
    exprs = list(comps) + [a_new]
    if not P.has_generic_b:
        b_new = normalize(P.b * sp.exp(-rr.mu * s))
        exprs.append(b_new)
    for e in exprs:
        if not surely_zero(sp.diff(e, s)):
            return None
    def drop_s(e: Expr) -> Expr:
        return simplify_kernels(e.subs(s, sp.S.Zero))
    return SymmetryGenerator(
        rr.reduced_chart,
        tuple(drop_s(c) for c in comps),
        drop_s(a_new),
        P.b if P.has_generic_b else drop_s(normalize(P.b * sp.exp(-rr.mu * s))),
        Y.name,
    )


# ---------------------------------------------------------------------------
# built-in straightening maps


def identity_map(chart: Chart) -> CoordinateMap:
    ident = {c: c for c in chart.coords}
    return CoordinateMap(
        "identity", chart, chart, ident, dict(ident), domain_note="everywhere"
    )


def hyperspherical_map(chart: Chart | None = None) -> CoordinateMap:
    """Cartesian (t,x,y,z), metric dt^2 - dx^2 - dy^2 - dz^2, to the
    hyperboloidal chart (rho, theta, phi, zeta) with radius r = e^rho.

    Valid inside the light cone t^2 > x^2 + y^2 + z^2, t > 0.  The pullback
    metric is e^{2 rho)(d rho^2 - ...) with the hyperbolic 3-space angular
    part; the dilation t d_t + ... becomes d_rho.
    """
    t, x, y, z = (chart or Chart(["t", "x", "y", "z"])).coords
    old = Chart([t, x, y, z])
    rho, th, ph, ze = sp.symbols("rho theta phi zeta")
    new = Chart([rho, th, ph, ze])
    r = sp.exp(rho)
    forward = {
        t: r * sp.cosh(th) * sp.cosh(ph) * sp.cosh(ze),
        x: r * sp.cosh(th) * sp.cosh(ph) * sp.sinh(ze),
        y: r * sp.cosh(th) * sp.sinh(ph),
        z: r * sp.sinh(th),
    }
    r2 = t**2 - x**2 - y**2 - z**2
    w2 = t**2 - x**2 - y**2
    inverse = {
        rho: sp.log(r2) / 2,
        th: sp.log((z + sp.sqrt(w2)) / sp.sqrt(r2)),
        ph: sp.log((y + sp.sqrt(t**2 - x**2)) / sp.sqrt(w2)),
        ze: sp.log((t + x) / (t - x)) / 2,
    }
    return CoordinateMap(
        "hyperspherical",
        old,
        new,
        forward,
        inverse,
        domain_note="interior of the future light cone",
        sample_box={rho: ("-1/2", "1/2"), th: ("1/4", "1"), ph: ("1/4", "1"), ze: ("1/4", "1")},
    )


def spckv_similarity_map(
    chart: Chart, kv_coord, radial_coord, x_name: str = "x", s_name: str = "s"
) -> CoordinateMap:
    """The similarity chart for the special-CKV reduction.

    Replaces the gradient-KV coordinate z through z = sqrt(R(xR-1)/x) and the
    radius through R = e^s, so the pushed symmetry becomes
    z * (d_s + 2p u d_u); the invariant x equals R/(R^2 - z^2).
    """
    z = chart.coords[chart.index(kv_coord)]
    R = chart.coords[chart.index(radial_coord)]
    rest = [c for c in chart.coords if c not in (z, R)]
    xs = sp.Symbol(x_name)
    ss = sp.Symbol(s_name)
    new = Chart([xs, ss] + rest)
    Rn = sp.exp(ss)
    forward = {z: sp.sqrt(Rn * (xs * Rn - 1) / xs), R: Rn}
    forward.update({c: c for c in rest})
    inverse = {xs: R / (R**2 - z**2), ss: sp.log(R)}
    inverse.update({c: c for c in rest})
    box = {xs: ("1", "2"), ss: ("1/2", "1")}
    box.update({c: ("1/4", "1") for c in rest})
    return CoordinateMap(
        f"spckv_{z.name}_{R.name}",
        chart,
        new,
        forward,
        inverse,
        domain_note=f"{R.name} > 0, {xs.name}*{R.name} > 1, {z.name} > 0",
        sample_box=box,
    )


def inversion_map(chart: Chart, coord, new_name: str = "T") -> CoordinateMap:
    """x -> 1/T on one coordinate, identity elsewhere (exact round trip)."""
    x = chart.coords[chart.index(coord)]
    T = sp.Symbol(new_name)
    newcoords = [T if c == x else c for c in chart.coords]
    new = Chart(newcoords)
    forward = {c: c for c in chart.coords}
    forward[x] = 1 / T
    inverse = {c: c for c in new.coords}
    inverse[T] = 1 / x
    return CoordinateMap(
        f"inversion_{x.name}",
        chart,
        new,
        forward,
        inverse,
        domain_note=f"{x.name} != 0",
    )


def log_radial_map(chart: Chart, coord, new_name: str = "s") -> CoordinateMap:
    """r -> e^s on one coordinate, identity elsewhere (r > 0)."""
    r = chart.coords[chart.index(coord)]
    s = sp.Symbol(new_name)
    new = Chart([s if c == r else c for c in chart.coords])
    forward = {c: c for c in chart.coords}
    forward[r] = sp.exp(s)
    inverse = {c: c for c in new.coords}
    inverse[s] = sp.log(r)
    box = {c: ("1/4", "1") for c in new.coords}
    return CoordinateMap(
        f"log_{r.name}", chart, new, forward, inverse,
        domain_note=f"{r.name} > 0", sample_box=box,
    )


def lrs_hv_map(chart: Chart, s_param: Expr) -> CoordinateMap:
    """Straightens the LRS homothety t d_t + R d_R + S(z d_z + y d_y), S=(2-s)/2.

    t = e^r cosh(theta), R = e^r sinh(theta), z = zeta e^{S r}, y = v e^{S r};
    valid for t > R > 0.
    """
    t, R, z, y = chart.coords
    r, th, ze, vv = sp.symbols("r theta zeta v")
    new = Chart([r, th, ze, vv])
    S = normalize((2 - s_param) / 2)
    eSr = sp.exp(S * r)
    forward = {
        t: sp.exp(r) * sp.cosh(th),
        R: sp.exp(r) * sp.sinh(th),
        z: ze * eSr,
        y: vv * eSr,
    }
    r_of = sp.log(t**2 - R**2) / 2
    eSr_of = sp.exp(S * r_of)
    inverse = {
        r: r_of,
        th: sp.log((t + R) / sp.sqrt(t**2 - R**2)),
        ze: z / eSr_of,
        vv: y / eSr_of,
    }
    box = {r: ("-1/2", "1/2"), th: ("1/4", "1"), ze: ("1/4", "1"), vv: ("1/4", "1")}
    return CoordinateMap(
        "lrs_hv", chart, new, forward, inverse,
        domain_note="t > R > 0", sample_box=box,
    )


def petrov3_map(chart: Chart) -> CoordinateMap:
    """Straightens v d_v + rho d_rho: sigma = rho/v, s = ln v."""
    rho, v, x, y = chart.coords
    sg, ss = sp.symbols("sigma s")
    new = Chart([sg, ss, x, y])
    forward = {rho: sg * sp.exp(ss), v: sp.exp(ss), x: x, y: y}
    inverse = {sg: rho / v, ss: sp.log(v), x: x, y: y}
    box = {sg: ("1/4", "1"), ss: ("-1/2", "1/2"), x: ("1/4", "1"), y: ("1/4", "1")}
    return CoordinateMap(
        "petrov3", chart, new, forward, inverse,
        domain_note="v > 0", sample_box=box,
    )


def frw_ckv_map(chart: Chart) -> CoordinateMap:
    """Straightens the boost-based proper CKV x d_t + t d_x + ...:
    R = t^2 - x^2 and s = t are the new coordinates (t > |x|)."""
    t = chart.coords[0]
    x = chart.coords[1]
    rest = list(chart.coords[2:])
    R, ss = sp.symbols("R s")
    new = Chart([R, ss] + rest)
    forward = {t: ss, x: sp.sqrt(ss**2 - R)}
    forward.update({c: c for c in rest})
    inverse = {R: t**2 - x**2, ss: t}
    inverse.update({c: c for c in rest})
    box = {R: ("1", "2"), ss: ("2", "3")}
    box.update({c: ("1/4", "1") for c in rest})
    return CoordinateMap(
        "frw_ckv", chart, new, forward, inverse,
        domain_note=f"{t.name} > |{x.name}|", sample_box=box,
    )


def registry() -> list[CoordinateMap]:
    """The built-in straightening maps on their canonical fixture charts."""
    m4 = Chart(["t", "x", "y", "z"])
    lrs = Chart(["t", "R", "z", "y"])
    m4sph = Chart(["t", "R", "theta", "phi"])
    p3 = Chart(["rho", "v", "x", "y"])
    red3 = Chart(["x", "theta", "phi"])
    s = sp.Symbol("s_lrs")
    return [
        identity_map(m4),
        hyperspherical_map(m4),
        spckv_similarity_map(m4sph, "t", "R"),
        spckv_similarity_map(lrs, "t", "R", x_name="x"),
        inversion_map(red3, "x"),
        lrs_hv_map(lrs, s),
        petrov3_map(p3),
        frw_ckv_map(m4),
    ]
