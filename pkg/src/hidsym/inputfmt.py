"""Line-oriented declarative input format for analyses.

A file describes one analysis::

    # comment
    chart t R z y
    param s                 # free parameter (or: param s = 2)
    option degree 2
    option samples 12
    option seed 0

    metric t t -1
    metric R R 1
    metric z z exp(s*ln(R))
    metric y y exp(s*ln(R))

    potential 0             # optional: Klein-Gordon potential V(x)

    vector K1
      t 1

    reduce K1 via identity gauge -1
      ricci
      rvector H3
        R R
      postmap inversion x T

Sections: ``chart`` (once), ``param``, ``option``, ``dep``, ``metric``
(sparse symmetric entries), ``potential``, ``vector`` followed by component
lines ``<coord> <expr>``, and ``reduce <vector> via <map>`` blocks whose body
may contain ``gauge <expr>``, ``ricci``, ``rvector`` declarations (catalog
vectors on the reduced chart) and ``postmap inversion <coord> <new>``.

Map specs: ``identity``, ``hyperspherical``, ``spckv(<kv>,<radial>)``,
``lrs_hv(<param>)``, ``petrov3``, ``frw_ckv``.

All expression values use the engine grammar and are parsed eagerly so that
errors carry line numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import sympy as sp

from .expr import ExprSyntaxError, parse

__all__ = ["InputError", "AnalysisInput", "ReductionRequest", "VectorDecl",
           "parse_input", "load_input"]


class InputError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass
class VectorDecl:
    name: str
    components: dict[str, sp.Expr] = field(default_factory=dict)
    line: int = 0


@dataclass
class ReductionRequest:
    vector: str
    map_name: str
    map_args: tuple[str, ...] = ()
    gauge: sp.Expr | None = None
    want_ricci: bool = False
    postmap: tuple[str, str, str] | None = None  # (kind, coord, new_name)
    rvectors: list[VectorDecl] = field(default_factory=list)
    line: int = 0


@dataclass
class AnalysisInput:
    chart: list[str] = field(default_factory=list)
    params: dict[str, sp.Rational | None] = field(default_factory=dict)
    options: dict[str, int] = field(default_factory=dict)
    dep: str = "u"
    metric: dict[tuple[str, str], sp.Expr] = field(default_factory=dict)
    potential: sp.Expr | None = None
    vectors: list[VectorDecl] = field(default_factory=list)
    reductions: list[ReductionRequest] = field(default_factory=list)

    def validate(self) -> None:
        if not self.chart:
            raise InputError("no chart declared")
        if len(set(self.chart)) != len(self.chart):
            raise InputError("chart coordinates must be distinct")
        if not self.metric:
            raise InputError("no metric entries declared")
        names = set(self.chart)
        for (i, j) in self.metric:
            if i not in names or j not in names:
                raise InputError(f"metric entry ({i},{j}) uses unknown coordinates")
        known = {v.name for v in self.vectors}
        for v in self.vectors:
            for c in v.components:
                if c not in names:
                    raise InputError(
                        f"vector {v.name}: unknown coordinate {c}", v.line
                    )
        for r in self.reductions:
            if r.vector not in known:
                raise InputError(f"reduce references unknown vector {r.vector}", r.line)


def _parse_expr(text: str, line: int) -> sp.Expr:
    try:
        return parse(text)
    except ExprSyntaxError as ex:
        raise InputError(f"bad expression {text!r}: {ex}", line) from ex


def _parse_map_spec(spec: str, line: int) -> tuple[str, tuple[str, ...]]:
    spec = spec.strip()
    if "(" in spec:
        if not spec.endswith(")"):
            raise InputError(f"bad map spec {spec!r}", line)
        name, _, rest = spec.partition("(")
        args = tuple(a.strip() for a in rest[:-1].split(",") if a.strip())
        return name.strip(), args
    return spec, ()


def parse_input(text: str) -> AnalysisInput:
    ai = AnalysisInput()
    vector_ctx: VectorDecl | None = None
    reduce_ctx: ReductionRequest | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]

        if head == "chart":
            if ai.chart:
                raise InputError("chart declared twice", lineno)
            ai.chart = tokens[1:]
            vector_ctx = reduce_ctx = None
        elif head == "param":
            rest = tokens[1:]
            if "=" in rest:
                eq = rest.index("=")
                name = " ".join(rest[:eq])
                value = "".join(rest[eq + 1:])
                v = _parse_expr(value, lineno)
                if not v.is_Rational:
                    raise InputError(f"parameter value must be rational: {value}", lineno)
                ai.params[name] = v
            else:
                ai.params[" ".join(rest)] = None
            vector_ctx = reduce_ctx = None
        elif head == "option":
            if len(tokens) != 3:
                raise InputError("option needs a key and an integer value", lineno)
            try:
                ai.options[tokens[1]] = int(tokens[2])
            except ValueError:
                raise InputError(f"option {tokens[1]} needs an integer", lineno)
            vector_ctx = reduce_ctx = None
        elif head == "dep":
            ai.dep = tokens[1]
            vector_ctx = reduce_ctx = None
        elif head == "metric":
            if len(tokens) < 4:
                raise InputError("metric needs: metric <ci> <cj> <expr>", lineno)
            key = (tokens[1], tokens[2])
            ai.metric[key] = _parse_expr(" ".join(tokens[3:]), lineno)
            vector_ctx = reduce_ctx = None
        elif head == "potential":
            ai.potential = _parse_expr(" ".join(tokens[1:]), lineno)
            vector_ctx = reduce_ctx = None
        elif head == "vector":
            if len(tokens) != 2:
                raise InputError("vector needs exactly one name", lineno)
            vector_ctx = VectorDecl(name=tokens[1], line=lineno)
            ai.vectors.append(vector_ctx)
            reduce_ctx = None
        elif head == "reduce":
            if len(tokens) < 4 or tokens[2] != "via":
                raise InputError("reduce needs: reduce <vector> via <map>", lineno)
            name, args = _parse_map_spec(tokens[3], lineno)
            req = ReductionRequest(vector=tokens[1], map_name=name, map_args=args, line=lineno)
            rest = tokens[4:]
            if rest:
                if rest[0] != "gauge":
                    raise InputError(f"unexpected token {rest[0]!r} after map", lineno)
                req.gauge = _parse_expr(" ".join(rest[1:]), lineno)
            ai.reductions.append(req)
            reduce_ctx = req
            vector_ctx = None
        elif head == "gauge" and reduce_ctx is not None:
            reduce_ctx.gauge = _parse_expr(" ".join(tokens[1:]), lineno)
        elif head == "ricci" and reduce_ctx is not None:
            reduce_ctx.want_ricci = True
        elif head == "rvector":
            if reduce_ctx is None:
                raise InputError("rvector outside a reduce block", lineno)
            vector_ctx = VectorDecl(name=tokens[1], line=lineno)
            reduce_ctx.rvectors.append(vector_ctx)
        elif head == "postmap":
            if reduce_ctx is None:
                raise InputError("postmap outside a reduce block", lineno)
            if len(tokens) != 4 or tokens[1] != "inversion":
                raise InputError("postmap needs: postmap inversion <coord> <new>", lineno)
            reduce_ctx.postmap = ("inversion", tokens[2], tokens[3])
        elif vector_ctx is not None and len(tokens) >= 2:
            coord = tokens[0]
            if coord in vector_ctx.components:
                raise InputError(f"component {coord} declared twice", lineno)
            vector_ctx.components[coord] = _parse_expr(" ".join(tokens[1:]), lineno)
        else:
            raise InputError(f"unrecognized line {line!r}", lineno)

    ai.validate()
    return ai


def load_input(path) -> AnalysisInput:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_input(fh.read())
