"""Report container with deterministic JSON and text rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

__all__ = ["Report", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1


@dataclass
class Report:
    """Analysis results as a JSON-able tree (insertion order is meaningful)."""

    data: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        payload = dict(self.data)
        payload["warnings"] = list(self.warnings)
        return json.dumps(payload, indent=2, ensure_ascii=True) + "\n"

    def to_text(self, width: int = 78) -> str:
        d = self.data
        bar = "=" * width
        sub = "-" * width
        lines: list[str] = []
        title = d.get("preset") or "analysis"
        lines += [bar, f"hidsym report: {title}", bar]
        lines.append(f"chart: ({', '.join(d['chart'])})   dep: {d['dep']}")
        if d.get("parameters"):
            ps = ", ".join(
                f"{k}={v}" if v is not None else f"{k} (free)"
                for k, v in d["parameters"].items()
            )
            lines.append(f"parameters: {ps}")
        lines.append("metric (lower index, nonzero entries):")
        for entry in d["metric"]:
            lines.append(f"  g[{entry['i']},{entry['j']}] = {entry['value']}")
        if d.get("potential") not in (None, "0"):
            lines.append(f"potential: V = {d['potential']}")

        lines += ["", sub, "conformal catalog", sub]
        for cv in d["conformal"]:
            grad = {"zero": "gradient", "nonzero": "non-gradient", "unknown": "gradient?"}[
                cv["gradient"]
            ]
            norm = {1: "spacelike", -1: "timelike", 0: "null", None: ""}[cv["norm_sign"]]
            extra = f", {norm}" if norm else ""
            lines.append(f"  {cv['name']}: {cv['class']} ({grad}{extra})  psi = {cv['psi']}")
            lines.append(f"      xi = ({', '.join(cv['xi'])})")

        lines += ["", sub, "point symmetries of the equation", sub]
        for s in d["symmetries"]:
            lines.append(f"  {s['name']}: {s['display']}")

        if d.get("commutators"):
            lines += ["", sub, "nonzero commutators", sub]
            for e in d["commutators"]["entries"]:
                rhs = " + ".join(
                    t["basis"] if t["coeff"] == "1" else f"({t['coeff']})*{t['basis']}"
                    for t in e["terms"]
                )
                lines.append(f"  [{e['pair'][0]}, {e['pair'][1]}] = {rhs}")
            if not d["commutators"]["entries"]:
                lines.append("  (abelian)")

        for red in d.get("reductions", []):
            lines += ["", sub, f"reduction by {red['symmetry']} via {red['map']}", sub]
            lines.append(
                f"  invariant coordinates: ({', '.join(red['reduced_chart'])});"
                f" dropped {red['s']}, weight mu = {red['mu']}"
            )
            lines.append(f"  reduced equation ({red['reduced_pde']['dep']}):")
            lines.append(f"    {red['reduced_pde']['display']}")
            lf = red.get("laplace_form")
            if lf:
                lines.append(f"  Laplace/Klein-Gordon form (gauge {lf['gauge']}):")
                for entry in lf["metric"]:
                    lines.append(f"    h[{entry['i']},{entry['j']}] = {entry['value']}")
                if lf["potential"] != "0":
                    lines.append(f"    potential = {lf['potential']}")
                if "ricci_scalar" in lf:
                    lines.append(f"    ricci scalar = {lf['ricci_scalar']}")
            else:
                lines.append("  (reduced equation is not a Laplacian of a metric)")
            pm = red.get("postmap")
            if pm:
                lines.append(f"  after {pm['map']}:")
                for entry in pm["metric"]:
                    lines.append(f"    h[{entry['i']},{entry['j']}] = {entry['value']}")
                if "ricci_scalar" in pm:
                    lines.append(f"    ricci scalar = {pm['ricci_scalar']}")
            if red.get("proper_ckv_filter"):
                lines.append("  proper CKV filter on the reduced metric:")
                for r in red["proper_ckv_filter"]:
                    verdict = "accepted" if r["accepted"] else "rejected"
                    note = f"  [{r['note']}]" if r["note"] else ""
                    lines.append(f"    {r['name']}: {verdict} (residual {r['residual']}){note}")
            lines.append("  reduced symmetries:")
            for s in red["reduced_symmetries"]:
                src = f" <- {s['source']}" if s.get("source") else ""
                lines.append(f"    [{s['tag']:9s}] {s['name']}: {s['display']}{src}")
            tII = red["type_ii"]
            lines.append(f"  Type II hidden symmetries: {', '.join(tII) if tII else 'none'}")

        if self.warnings:
            lines += ["", sub, "warnings", sub]
            lines += [f"  {w}" for w in self.warnings]
        lines.append(bar)
        return "\n".join(lines) + "\n"
