"""Lie brackets, commutator tables and the normalizer test.

The bracket acts on affine point-symmetry generators
X = xi^i d_i + (a u + b) d_u over a fixed chart; the class is closed under
it.  Commutator tables expand each bracket over the given basis with exact
coefficient matching; u d_u is adjoined automatically when a bracket
produces it.  Generic-solution generators never enter tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import sympy as sp

from .expr import Expr, Tri, is_zero, normalize, simplify_kernels
from .geometry import Chart
from .liesym import SymmetryGenerator

__all__ = [
    "lie_bracket",
    "CommutatorTable",
    "commutator_table",
    "SpanError",
    "normalizer_test",
    "InNormalizer",
    "Outside",
    "match_linear_combination",
    "u_du",
]


class SpanError(ValueError):
    """A bracket escaped the span of the table basis."""


def u_du(chart: Chart, name: str = "Xu") -> SymmetryGenerator:
    return SymmetryGenerator(chart, tuple(sp.S.Zero for _ in chart.coords), a=sp.S.One, name=name)


def lie_bracket(X: SymmetryGenerator, Y: SymmetryGenerator) -> SymmetryGenerator:
    """[X, Y] on (x, u)-space; affine generators are closed under it."""
    if X.chart != Y.chart:
        raise ValueError("bracket requires a common chart")
    if X.has_generic_b or Y.has_generic_b:
        raise ValueError("generic-solution generators have no concrete bracket")
    coords = X.chart.coords
    n = len(coords)

    def apply(xi, F):
        return sum(xi[k] * sp.diff(F, coords[k]) for k in range(n))

    zi = tuple(
        simplify_kernels(apply(X.xi, Y.xi[i]) - apply(Y.xi, X.xi[i])) for i in range(n)
    )
    a = simplify_kernels(apply(X.xi, Y.a) - apply(Y.xi, X.a))
    b = simplify_kernels(
        apply(X.xi, Y.b) - apply(Y.xi, X.b) + X.b * Y.a - Y.b * X.a
    )
    return SymmetryGenerator(X.chart, zi, a, b)


def _components(X: SymmetryGenerator) -> list[Expr]:
    return list(X.xi) + [X.a, X.b]


def _opacify(exprs: Sequence[Expr]):
    """Replace kernel subexpressions by fresh symbols, shared across exprs."""
    mapping: dict[sp.Basic, sp.Symbol] = {}

    def walk(e: sp.Basic) -> sp.Basic:
        if e.is_Atom:
            return e
        if isinstance(e, sp.Function) or (
            isinstance(e, sp.Pow) and not e.args[1].is_Integer
        ):
            if e not in mapping:
                mapping[e] = sp.Symbol(f"_k{len(mapping)}")
            return mapping[e]
        return e.func(*[walk(a) for a in e.args])

    return [walk(sp.sympify(e)) for e in exprs], mapping


def match_linear_combination(
    target: Sequence[Expr],
    basis: Sequence[Sequence[Expr]],
    symbols: Sequence[sp.Symbol] = (),
) -> list[Expr] | None:
    """Coefficients c with sum(c_k * basis_k) == target, or None.

    Coefficients are constants (possibly in the parameter symbols listed in
    ``symbols``).  Candidates come from an exact linear solve after making
    kernel subexpressions opaque; the result is then verified entrywise with
    the real zero test.
    """
    m = len(target)
    if any(len(b) != m for b in basis):
        raise ValueError("basis entries must match the target length")
    if not basis:
        return None
    cs = [sp.Symbol(f"_m{k}") for k in range(len(basis))]
    basis = [[simplify_kernels(e) for e in b] for b in basis]
    target = [simplify_kernels(e) for e in target]
    residual = [
        sp.together(sum(cs[k] * basis[k][i] for k in range(len(basis))) - target[i])
        for i in range(m)
    ]
    flat, _ = _opacify([sp.fraction(r)[0] for r in residual])
    eqs: list[Expr] = []
    for numer in flat:
        gens = sorted(
            (s for s in numer.free_symbols if s not in cs and s not in symbols),
            key=lambda s: s.name,
        )
        if gens:
            eqs.extend(sp.Poly(sp.expand(numer), *gens).coeffs())
        else:
            eqs.append(numer)
    try:
        A, rhs = sp.linear_eq_to_matrix(eqs, cs)
        sols = sp.linsolve((A, rhs), cs)
    except Exception:
        return None
    if not sols:
        return None
    sol = next(iter(sols))
    sol = [normalize(v.subs({c: 0 for c in cs})) for v in sol]
    for i in range(m):
        check = sum(sol[k] * basis[k][i] for k in range(len(basis))) - target[i]
        if is_zero(check).state is not Tri.ZERO:
            return None
    return sol


@dataclass(frozen=True)
class CommutatorTable:
    """Structure constants of [B_i, B_j] = c^k_{ij} B_k over a basis.

    ``basis`` may end with an adjoined u d_u element (``adjoined_u_du``).
    Coefficients are exact: rational numbers, or constants in declared
    parameters for parameter-carrying fixtures.
    """

    basis: tuple[SymmetryGenerator, ...]
    coeffs: dict
    adjoined_u_du: bool

    def entry(self, i: int, j: int) -> tuple[Expr, ...]:
        return tuple(
            self.coeffs.get((i, j, k), sp.S.Zero) for k in range(len(self.basis))
        )

    def nonzero_entries(self):
        out = {}
        for (i, j, k), c in sorted(
            self.coeffs.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])
        ):
            if i < j and c != 0:
                out.setdefault((i, j), []).append((k, c))
        return out

    def check_antisymmetry(self) -> bool:
        d = len(self.basis)
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    if not sp.simplify(
                        self.coeffs.get((i, j, k), sp.S.Zero)
                        + self.coeffs.get((j, i, k), sp.S.Zero)
                    ) == 0:
                        return False
        return True

    def check_jacobi(self) -> bool:
        """Jacobi identity on the structure constants, exact arithmetic."""
        d = len(self.basis)

        def c(i, j, k):
            return self.coeffs.get((i, j, k), sp.S.Zero)

        for i in range(d):
            for j in range(i + 1, d):
                for k in range(j + 1, d):
                    for l in range(d):
                        total = sum(
                            c(i, j, m) * c(m, k, l)
                            + c(j, k, m) * c(m, i, l)
                            + c(k, i, m) * c(m, j, l)
                            for m in range(d)
                        )
                        if not is_zero(sp.expand(total)).state is Tri.ZERO:
                            return False
        return True

    def render_text(self) -> str:
        names = [b.name or f"B{k+1}" for k, b in enumerate(self.basis)]
        lines = []
        for (i, j), terms in self.nonzero_entries().items():
            rhs = " + ".join(
                (f"{names[k]}" if c == 1 else f"({c})*{names[k]}") for k, c in terms
            )
            lines.append(f"[{names[i]}, {names[j]}] = {rhs}")
        return "\n".join(lines) if lines else "(abelian)"

    def to_jsonable(self) -> dict:
        from .expr import render

        names = [b.name or f"B{k+1}" for k, b in enumerate(self.basis)]
        entries = [
            {
                "pair": [names[i], names[j]],
                "terms": [{"basis": names[k], "coeff": render(c)} for k, c in terms],
            }
            for (i, j), terms in self.nonzero_entries().items()
        ]
        return {"basis": names, "adjoined_u_du": self.adjoined_u_du, "entries": entries}


def commutator_table(
    basis: Sequence[SymmetryGenerator], parameters: Sequence[sp.Symbol] = ()
) -> CommutatorTable:
    """Expand all pairwise brackets over the basis (u d_u adjoined on demand).

    Raises :class:`SpanError` naming the pair when a bracket cannot be
    expressed in span(basis + {u d_u}).
    """
    basis = list(basis)
    if any(b.has_generic_b for b in basis):
        raise ValueError("generic-solution generators cannot enter a commutator table")
    chart = basis[0].chart
    extra = u_du(chart)
    have_u = any(
        all(c == 0 for c in b.xi) and b.a == 1 and b.b == 0 for b in basis
    )
    adjoined = False
    full = list(basis)
    comps = [_components(b) for b in full]
    results: dict[tuple[int, int], list[Expr]] = {}

    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            Z = lie_bracket(basis[i], basis[j])
            sol = match_linear_combination(_components(Z), comps, parameters)
            if sol is None and not have_u and not adjoined:
                trial = match_linear_combination(
                    _components(Z), comps + [_components(extra)], parameters
                )
                if trial is not None:
                    adjoined = True
                    full = basis + [extra]
                    comps = comps + [_components(extra)]
                    for key, prev in results.items():
                        results[key] = prev + [sp.S.Zero]
                    sol = trial
            if sol is None:
                raise SpanError(
                    f"[{basis[i].name or i}, {basis[j].name or j}] = {Z} escapes the basis span"
                )
            results[(i, j)] = sol

    if adjoined:
        for key, prev in results.items():
            if len(prev) < len(full):
                results[key] = prev + [sp.S.Zero]
        for i in range(len(basis)):
            Z = lie_bracket(basis[i], extra)
            sol = match_linear_combination(_components(Z), comps, parameters)
            if sol is None:
                raise SpanError("bracket with the adjoined u d_u escapes the span")
            results[(i, len(basis))] = sol

    coeffs = {}
    for (i, j), sol in results.items():
        for k, c in enumerate(sol):
            if c != 0:
                coeffs[(i, j, k)] = c
                coeffs[(j, i, k)] = -c
    return CommutatorTable(basis=tuple(full), coeffs=coeffs, adjoined_u_du=adjoined)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InNormalizer:
    """[X_used, Y] = c X_used (+ multiple of u d_u)."""

    c: Expr
    u_coeff: Expr = sp.S.Zero


@dataclass(frozen=True)
class Outside:
    residual: SymmetryGenerator | None = None


def normalizer_test(
    X_used: SymmetryGenerator,
    Y: SymmetryGenerator,
    parameters: Sequence[sp.Symbol] = (),
) -> InNormalizer | Outside:
    """Inheritance precondition: [X_used, Y] proportional to X_used mod u d_u."""
    Z = lie_bracket(X_used, Y)
    sol = match_linear_combination(
        _components(Z),
        [_components(X_used), _components(u_du(X_used.chart))],
        parameters,
    )
    if sol is None:
        return Outside(residual=Z)
    return InNormalizer(c=sol[0], u_coeff=sol[1])
