"""End-to-end analysis: metric -> conformal catalog -> symmetries ->
commutators -> reductions -> inherited / Type II classification."""

from __future__ import annotations

from dataclasses import dataclass

import sympy as sp

from . import expr as ex
from .expr import Expr, Tri, is_zero, normalize, render, simplify_kernels
from .geometry import Chart, LinearPDE, Metric, laplace_beltrami, ricci_scalar
from .conformal import (
    AnsatzError,
    ConformalVector,
    NotCKV,
    Undecided,
    VectorClass,
    classify,
    solve_ckv_ansatz,
)
from .liesym import (
    GENERIC_SOLUTION,
    SymmetryGenerator,
    check_linear_pde_symmetry,
    klein_gordon_symmetries,
    trivial_generators,
)
from .algebra import SpanError, commutator_table, match_linear_combination, u_du
from .classify import Tag, classify_reduced, normalizer_projections, proper_ckv_filter
from .reduction import (
    LaplaceForm,
    ReductionError,
    ReductionResult,
    as_laplace_form,
    frw_ckv_map,
    hyperspherical_map,
    identity_map,
    inversion_map,
    lrs_hv_map,
    petrov3_map,
    reduce as reduce_pde,
    spckv_similarity_map,
    transform_metric,
)
from .inputfmt import AnalysisInput, InputError, ReductionRequest, VectorDecl
from .report import Report, SCHEMA_VERSION

__all__ = ["AnalysisError", "run_analysis"]


class AnalysisError(ValueError):
    """Input validated syntactically but the analysis is inconsistent."""


def _matrix_entries(M, chart: Chart) -> list[dict]:
    out = []
    n = chart.n
    for i in range(n):
        for j in range(i, n):
            if M[i, j] != 0:
                out.append(
                    {"i": chart.coords[i].name, "j": chart.coords[j].name,
                     "value": render(M[i, j])}
                )
    return out


def _display_generator(X: SymmetryGenerator, dep: str) -> str:
    def wrap(c) -> str:
        s = render(c)
        return s if c.is_Symbol or c.is_Number and c >= 0 else f"({s})"

    parts = [
        (f"d_{coord.name}" if c == 1 else f"{wrap(c)}*d_{coord.name}")
        for c, coord in zip(X.xi, X.chart.coords) if c != 0
    ]
    if X.has_generic_b:
        parts.append(f"b*d_{dep}")
    else:
        eta_terms = []
        if X.a != 0:
            eta_terms.append(dep if X.a == 1 else f"{wrap(X.a)}*{dep}")
        if X.b != 0:
            eta_terms.append(f"({render(X.b)})")
        if eta_terms:
            parts.append(f"({' + '.join(eta_terms)})*d_{dep}")
    return " + ".join(parts) if parts else "0"


def _display_pde(pde: LinearPDE) -> str:
    n = pde.n
    dep = pde.dep.name
    terms = []
    for i in range(n):
        for j in range(i, n):
            c = pde.A[i, j] if i == j else 2 * pde.A[i, j]
            c = normalize(c)
            if c != 0:
                terms.append(f"({render(c)})*{dep}_{pde.chart.coords[i].name}{pde.chart.coords[j].name}")
    for i in range(n):
        if pde.B[i] != 0:
            terms.append(f"-({render(pde.B[i])})*{dep}_{pde.chart.coords[i].name}")
    if pde.f != 0:
        terms.append(f"-({render(pde.f)})")
    return " + ".join(terms).replace("+ -", "- ") + " = 0"


def _jsonable_generator(X: SymmetryGenerator, dep: str) -> dict:
    return {
        "name": X.name,
        "xi": [render(c) for c in X.xi],
        "a": render(X.a),
        "b": "generic-solution" if X.has_generic_b else render(X.b),
        "display": _display_generator(X, dep),
    }


def _grad_str(z) -> str:
    return z.state.value


def _build_map(req: ReductionRequest, chart: Chart, params: dict):
    name, args = req.map_name, req.map_args
    if name == "identity":
        return identity_map(chart)
    if name == "hyperspherical":
        return hyperspherical_map(chart)
    if name == "spckv":
        if len(args) != 2:
            raise InputError("spckv map needs (kv_coord, radial_coord)", req.line)
        return spckv_similarity_map(chart, args[0], args[1])
    if name == "lrs_hv":
        if len(args) != 1:
            raise InputError("lrs_hv map needs (parameter)", req.line)
        val = params.get(args[0])
        s_param = val if val is not None else sp.Symbol(args[0])
        return lrs_hv_map(chart, s_param)
    if name == "petrov3":
        return petrov3_map(chart)
    if name == "frw_ckv":
        return frw_ckv_map(chart)
    raise InputError(f"unknown map {name!r}", req.line)


def _dedupe_generators(
    gens: list[SymmetryGenerator], chart: Chart, parameters
) -> list[SymmetryGenerator]:
    """Drop generators equal to an earlier one up to scale and u d_u."""
    kept: list[SymmetryGenerator] = []
    wdu = u_du(chart)
    for X in gens:
        if X.has_generic_b:
            kept.append(X)
            continue
        duplicate = False
        for Y in kept:
            if Y.has_generic_b:
                continue
            sol = match_linear_combination(
                list(X.xi) + [X.a],
                [list(Y.xi) + [Y.a], list(wdu.xi) + [wdu.a]],
                parameters,
            )
            if sol is not None and sol[0] != 0:
                duplicate = True
                break
        if not duplicate:
            kept.append(X)
    return kept


def _dedupe_catalog(cvs: list[ConformalVector], parameters) -> list[ConformalVector]:
    kept: list[ConformalVector] = []
    for cv in cvs:
        duplicate = False
        for other in kept:
            sol = match_linear_combination(list(cv.xi), [list(other.xi)], parameters)
            if sol is not None and sol[0] != 0:
                duplicate = True
                break
        if not duplicate:
            kept.append(cv)
    return kept


def run_analysis(ai: AnalysisInput, preset: str | None = None) -> Report:
    """Run the full pipeline on one validated input; deterministic output."""
    report = Report()
    warn = report.warnings.append

    if "samples" in ai.options:
        ex.zero_config.samples = ai.options["samples"]
    if "seed" in ai.options:
        ex.zero_config.seed = ai.options["seed"]
    degree = ai.options.get("degree", 2)

    chart = Chart(ai.chart)
    dep = sp.Symbol(ai.dep)
    param_values = {sp.Symbol(k): v for k, v in ai.params.items() if v is not None}
    parameters = tuple(sp.Symbol(k) for k, v in ai.params.items() if v is None)

    def subst(e: Expr) -> Expr:
        return normalize(e.subs(param_values, simultaneous=True)) if param_values else e

    n = chart.n
    comp = sp.zeros(n, n)
    for (i_name, j_name), e in ai.metric.items():
        i, j = chart.index(i_name), chart.index(j_name)
        comp[i, j] = comp[j, i] = subst(e)
    try:
        g = Metric(chart, comp)
        pde = laplace_beltrami(g, dep)
    except Exception as exn:
        raise AnalysisError(f"bad metric: {exn}") from exn

    V = subst(ai.potential) if ai.potential is not None else None
    if V is not None and V != 0:
        pde = LinearPDE(chart, pde.A, pde.B, V * dep, dep)

    # conformal catalog
    catalog: list[ConformalVector] = []
    for decl in ai.vectors:
        xi = [subst(decl.components.get(c.name, sp.S.Zero)) for c in chart.coords]
        cv = classify(xi, g, name=decl.name)
        if isinstance(cv, NotCKV):
            raise AnalysisError(
                f"vector {decl.name} is not a CKV: residual {cv.residual} at {cv.entry}"
            )
        if isinstance(cv, Undecided):
            warn(f"vector {decl.name}: CKV check undecided on {cv.residual}; skipped")
            continue
        catalog.append(cv)
    try:
        catalog.extend(solve_ckv_ansatz(g, degree))
    except AnsatzError:
        pass
    catalog = _dedupe_catalog(catalog, parameters)

    symmetries = klein_gordon_symmetries(g, V if V is not None else sp.S.Zero,
                                         catalog, dep)
    geometric = [X for X in symmetries if not X.is_trivial]

    table = None
    if len(geometric) >= 2:
        try:
            table = commutator_table(geometric, parameters)
        except SpanError as exn:
            warn(f"commutator table not closed: {exn}")

    data = {
        "schema": SCHEMA_VERSION,
        "preset": preset,
        "options": {"degree": degree, "samples": ex.zero_config.samples,
                    "seed": ex.zero_config.seed},
        "chart": [c.name for c in chart.coords],
        "dep": dep.name,
        "parameters": {k: (str(v) if v is not None else None) for k, v in ai.params.items()},
        "metric": _matrix_entries(g.components, chart),
        "potential": render(V) if V is not None else None,
        "equation": {
            "A": [[render(pde.A[i, j]) for j in range(n)] for i in range(n)],
            "B": [render(b) for b in pde.B],
            "f": render(pde.f),
            "dep": dep.name,
            "display": _display_pde(pde),
        },
        "conformal": [
            {
                "name": cv.name,
                "class": cv.klass.value,
                "psi": render(cv.psi),
                "gradient": _grad_str(cv.gradient),
                "norm_sign": cv.norm_sign,
                "xi": [render(c) for c in cv.xi],
            }
            for cv in catalog
        ],
        "symmetries": [_jsonable_generator(X, dep.name) for X in symmetries],
        "commutators": table.to_jsonable() if table else None,
        "reductions": [],
    }

    by_name = {X.name: X for X in symmetries}
    for req in ai.reductions:
        if req.vector not in by_name:
            raise AnalysisError(
                f"reduction vector {req.vector} did not produce a symmetry "
                f"(rejected by the symmetry condition?)"
            )
        X_used = by_name[req.vector]
        cmap = _build_map(req, chart, ai.params)
        gauge = subst(req.gauge) if req.gauge is not None else None
        try:
            rr = reduce_pde(pde, X_used, cmap)
        except ReductionError as exn:
            raise AnalysisError(f"reduction by {req.vector}: {exn}") from exn
        lf = as_laplace_form(rr, gauge_hint=gauge)
        red_dep = rr.reduced_pde.dep

        red_entry = {
            "symmetry": X_used.name,
            "map": cmap.name,
            "s": rr.s.name,
            "mu": render(rr.mu),
            "factor": render(rr.factor),
            "reduced_chart": [c.name for c in rr.reduced_chart.coords],
            "reduced_pde": {
                "A": [[render(rr.reduced_pde.A[i, j]) for j in range(rr.reduced_pde.n)]
                      for i in range(rr.reduced_pde.n)],
                "B": [render(b) for b in rr.reduced_pde.B],
                "f": render(rr.reduced_pde.f),
                "dep": red_dep.name,
                "display": _display_pde(rr.reduced_pde),
            },
        }

        red_catalog: list[ConformalVector] = []
        filter_records = None
        if lf is not None:
            red_entry["laplace_form"] = {
                "gauge": render(lf.gauge),
                "metric": _matrix_entries(lf.metric.components, lf.metric.chart),
                "potential": render(lf.potential),
            }
            if req.want_ricci:
                red_entry["laplace_form"]["ricci_scalar"] = render(
                    simplify_kernels(ricci_scalar(lf.metric))
                )
            for decl in req.rvectors:
                xi = [subst(decl.components.get(c.name, sp.S.Zero))
                      for c in rr.reduced_chart.coords]
                cv = classify(xi, lf.metric, name=decl.name)
                if isinstance(cv, NotCKV):
                    raise AnalysisError(
                        f"rvector {decl.name} is not a CKV of the reduced metric: "
                        f"{cv.residual}"
                    )
                if isinstance(cv, Undecided):
                    warn(f"rvector {decl.name}: undecided ({cv.residual}); skipped")
                    continue
                red_catalog.append(cv)
            try:
                red_catalog.extend(solve_ckv_ansatz(lf.metric, degree))
            except AnsatzError:
                pass
            red_catalog = _dedupe_catalog(red_catalog, parameters)
            filter_records = proper_ckv_filter(lf.metric, red_catalog, lf.potential)
            reduced_syms = klein_gordon_symmetries(
                lf.metric, lf.potential, red_catalog, red_dep
            )
        else:
            red_entry["laplace_form"] = None
            reduced_syms = []
            for decl in req.rvectors:
                xi = [subst(decl.components.get(c.name, sp.S.Zero))
                      for c in rr.reduced_chart.coords]
                # a component keyed by the dependent variable is the u-part
                a_part = subst(decl.components.get(red_dep.name, sp.S.Zero))
                cand = SymmetryGenerator(rr.reduced_chart, xi, a=a_part, name=decl.name)
                rep = check_linear_pde_symmetry(rr.reduced_pde, cand)
                if rep.satisfied.state is Tri.ZERO:
                    reduced_syms.append(cand)
                else:
                    warn(
                        f"rvector {decl.name} is not a symmetry of the reduced "
                        f"equation; residuals {[render(r) for r in rep.residuals[:1]]}"
                    )
            reduced_syms.extend(trivial_generators(rr.reduced_chart, red_dep))

        # verify theorem output against the raw reduced equation, then merge
        # in the normalizer projections (they may add generators the reduced
        # catalog does not know about)
        for X in reduced_syms:
            rep = check_linear_pde_symmetry(rr.reduced_pde, X)
            if rep.satisfied.state is Tri.NONZERO:
                raise AnalysisError(
                    f"reduced symmetry {X.name} fails on the reduced equation; "
                    f"residuals {[render(r) for r in rep.residuals[:1]]}"
                )
        projections = normalizer_projections(symmetries, X_used, rr, parameters)
        merged = _dedupe_generators(
            list(reduced_syms) + [P for _, P in projections],
            rr.reduced_chart,
            parameters,
        )
        merged = [X for X in merged if not X.is_trivial] + [
            X for X in merged if X.is_trivial
        ]
        provenance = classify_reduced(
            symmetries, X_used, rr, merged, parameters, projections=projections
        )

        red_entry["reduced_symmetries"] = [
            {
                "name": pv.generator.name,
                "display": _display_generator(pv.generator, red_dep.name),
                "tag": pv.tag.value,
                "source": pv.source.name if pv.source is not None else None,
                "note": pv.note,
            }
            for pv in provenance
        ]
        red_entry["type_ii"] = [
            pv.generator.name for pv in provenance if pv.tag is Tag.TYPE_II
        ]
        if filter_records is not None:
            red_entry["proper_ckv_filter"] = [
                {
                    "name": r.vector.name,
                    "class": r.vector.klass.value,
                    "accepted": r.accepted,
                    "residual": render(r.residual),
                    "note": r.note,
                }
                for r in filter_records
            ]
        if req.postmap is not None:
            kind, coord, new_name = req.postmap
            base_metric = lf.metric if lf is not None else None
            if base_metric is None:
                warn("postmap requested but no reduced metric is available")
            else:
                pmap = inversion_map(rr.reduced_chart, coord, new_name)
                pm_metric = transform_metric(base_metric, pmap)
                pm_entry = {
                    "map": pmap.name,
                    "metric": _matrix_entries(pm_metric.components, pm_metric.chart),
                }
                if req.want_ricci:
                    pm_entry["ricci_scalar"] = render(simplify_kernels(ricci_scalar(pm_metric)))
                red_entry["postmap"] = pm_entry

        data["reductions"].append(red_entry)

    report.data = data
    return report
