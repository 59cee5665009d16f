"""Inherited vs. Type II hidden classification of reduced-equation symmetries.

Inheritance is operationalized as "projection of a normalizer element": an
original symmetry Y with [X_used, Y] = c X_used (+ a multiple of u d_u)
descends through the reduction chart; a reduced symmetry equal to such a
projection up to rational scale and addition of u d_u multiples is
inherited.  Non-trivial reduced symmetries matching no projection are
Type II hidden symmetries.  u d_u and the b d_u family are trivial on both
sides and never drive a Type II tag.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import sympy as sp

from .expr import Expr, Tri, ZeroResult, is_zero, normalize, surely_zero
from .geometry import Metric, laplacian_scalar, ricci_scalar
from .conformal import ConformalVector, VectorClass
from .liesym import SymmetryGenerator, check_linear_pde_symmetry
from .algebra import InNormalizer, match_linear_combination, normalizer_test, u_du
from .reduction import ReductionResult, project_generator

__all__ = [
    "Tag",
    "SymmetryProvenance",
    "InternalConsistencyError",
    "normalizer_projections",
    "classify_reduced",
    "proper_ckv_filter",
    "FilterRecord",
]


class Tag(Enum):
    INHERITED = "inherited"
    TYPE_II = "type-II"
    TRIVIAL = "trivial"


class InternalConsistencyError(RuntimeError):
    """A normalizer projection failed to be a symmetry of the reduced PDE."""


@dataclass(frozen=True)
class SymmetryProvenance:
    generator: SymmetryGenerator
    tag: Tag
    source: SymmetryGenerator | None = None
    note: str = ""


def _is_trivial(X: SymmetryGenerator) -> bool:
    return X.is_trivial


def normalizer_projections(
    original: Sequence[SymmetryGenerator],
    X_used: SymmetryGenerator,
    rr: ReductionResult,
    parameters: Sequence[sp.Symbol] = (),
) -> list[tuple[SymmetryGenerator, SymmetryGenerator]]:
    """(Y, projection of Y) for every normalizer element of X_used.

    Every projection is verified to be a symmetry of the reduced equation;
    a failure raises :class:`InternalConsistencyError` since it indicates a
    bug upstream, not bad data.  X_used itself projects to nothing and is
    omitted.
    """
    projections: list[tuple[SymmetryGenerator, SymmetryGenerator]] = []
    for Y in original:
        if _is_trivial(Y) or Y.has_generic_b:
            continue
        res = normalizer_test(X_used, Y, parameters)
        if not isinstance(res, InNormalizer):
            continue
        P = project_generator(Y, rr)
        if P is None:
            raise InternalConsistencyError(
                f"normalizer element {Y.name or Y} failed to project"
            )
        if all(c == 0 for c in P.xi) and P.b == 0:
            continue  # X_used itself (or a u d_u shift): trivial projection
        rep = check_linear_pde_symmetry(rr.reduced_pde, P)
        if rep.satisfied.state is Tri.NONZERO:
            raise InternalConsistencyError(
                f"projection of {Y.name or Y} is not a symmetry of the reduced "
                f"equation: residuals {rep.residuals[:2]}"
            )
        projections.append((Y, P))
    return projections


def classify_reduced(
    original: Sequence[SymmetryGenerator],
    X_used: SymmetryGenerator,
    rr: ReductionResult,
    reduced_syms: Sequence[SymmetryGenerator],
    parameters: Sequence[sp.Symbol] = (),
    projections: Sequence[tuple[SymmetryGenerator, SymmetryGenerator]] | None = None,
) -> list[SymmetryProvenance]:
    """Tag every reduced symmetry as Inherited, Type II, or Trivial.

    ``original`` is the symmetry list of the unreduced equation;
    ``reduced_syms`` must already be verified symmetries of the reduced one.
    """
    if projections is None:
        projections = normalizer_projections(original, X_used, rr, parameters)

    w_du = u_du(rr.reduced_pde.chart)
    out: list[SymmetryProvenance] = []
    for Rs in reduced_syms:
        if _is_trivial(Rs):
            out.append(SymmetryProvenance(Rs, Tag.TRIVIAL,
                                          note="present for every linear equation"))
            continue
        matched = None
        for Y, P in projections:
            sol = match_linear_combination(
                list(Rs.xi) + [Rs.a],
                [list(P.xi) + [P.a], list(w_du.xi) + [w_du.a]],
                parameters,
            )
            if sol is not None and sol[0] != 0 and sol[0].is_Rational:
                matched = (Y, sol[0], sol[1])
                break
        if matched is not None:
            Y, c, k = matched
            note = f"= {c} * projection({Y.name or 'original'})"
            if k != 0:
                note += f" + {k} * u d_u"
            out.append(SymmetryProvenance(Rs, Tag.INHERITED, source=Y, note=note))
        else:
            out.append(SymmetryProvenance(Rs, Tag.TYPE_II))
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FilterRecord:
    vector: ConformalVector
    accepted: bool
    residual: Expr
    note: str = ""


def proper_ckv_filter(
    h: Metric,
    catalog: Sequence[ConformalVector],
    V: Expr | None = None,
) -> list[FilterRecord]:
    """Accept/reject catalog CKVs as symmetry generators of Delta w - V w = 0.

    KVs, HVs and sp.CKVs pass automatically (their conformal factor has a
    vanishing Laplacian) unless a nonzero potential breaks the Klein-Gordon
    condition.  Proper CKVs are kept only when the condition holds.  On a
    constant-curvature metric the records carry the cross-check that the
    proper conformal factors satisfy Delta psi proportional to R psi, which
    is what forces their rejection there.
    """
    n = h.n
    coords = h.chart.coords
    V = normalize(V) if V is not None else sp.S.Zero
    R = None
    constant_R = False
    try:
        R = ricci_scalar(h)
        constant_R = all(surely_zero(sp.diff(R, c)) for c in coords) and not surely_zero(R)
    except Exception:
        pass

    out = []
    for cv in catalog:
        lap = laplacian_scalar(cv.psi, h)
        cond = sum(x * sp.diff(V, c) for x, c in zip(cv.xi, coords)) + 2 * cv.psi * V
        if n > 2:
            cond -= sp.Rational(2 - n, 2) * lap
        cond = normalize(cond)
        z = is_zero(cond)
        note = ""
        if constant_R and cv.klass is VectorClass.PROPER_CKV:
            rel = normalize((n - 1) * lap + R * cv.psi)
            if surely_zero(rel):
                note = (
                    f"constant curvature: Delta psi = -R psi/(n-1) = "
                    f"{normalize(-R / (n - 1))} * psi, nonzero"
                )
        out.append(
            FilterRecord(
                vector=cv,
                accepted=z.state is Tri.ZERO,
                residual=cond,
                note=note,
            )
        )
    return out
