"""Command line front-end.

``hidsym analyze <file|preset>`` runs one analysis and prints the text
report (optionally writing JSON); ``hidsym corpus`` runs every shipped
preset and compares the JSON output against the committed golden files.

Exit codes: 0 success, 2 validation error, 3 internal consistency error.
"""

from __future__ import annotations

import argparse
import importlib.resources
import json
import os
import sys
from pathlib import Path

from . import expr as ex
from .classify import InternalConsistencyError
from .inputfmt import AnalysisInput, InputError, load_input, parse_input
from .pipeline import AnalysisError, run_analysis
from .report import Report

__all__ = ["main", "preset_names", "load_preset", "analyze"]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INTERNAL = 3

PRESET_ORDER = [
    "flat2",
    "flat3",
    "minkowski3",
    "minkowski4",
    "m4_hyperspherical",
    "m4_spckv",
    "lrs",
    "lrs_s2",
    "petrov3",
    "frw",
    "decomposable_demo",
    "spckv_m2",
]


def _preset_dir():
    return importlib.resources.files("hidsym") / "presets"


def preset_names() -> list[str]:
    return list(PRESET_ORDER)


def load_preset(name: str) -> AnalysisInput:
    res = _preset_dir() / f"{name}.hs"
    if not res.is_file():
        raise InputError(f"unknown preset {name!r}; available: {', '.join(PRESET_ORDER)}")
    return parse_input(res.read_text(encoding="utf-8"))


def analyze(
    source: str,
    *,
    overrides: dict[str, str] | None = None,
    degree: int | None = None,
    samples: int | None = None,
    seed: int | None = None,
) -> Report:
    """Run one analysis from a preset name or an input file path."""
    if os.path.exists(source):
        ai = load_input(source)
        preset = None
    else:
        ai = load_preset(source)
        preset = source
    if overrides:
        import sympy as sp

        for k, v in overrides.items():
            val = sp.Rational(v)
            if k not in ai.params:
                raise InputError(f"--param {k}: not a declared parameter")
            ai.params[k] = val
    if degree is not None:
        ai.options["degree"] = degree
    if samples is not None:
        ai.options["samples"] = samples
    if seed is not None:
        ai.options["seed"] = seed
    return run_analysis(ai, preset=preset)


def _cmd_analyze(args) -> int:
    overrides = {}
    for spec in args.param or []:
        if "=" not in spec:
            print(f"error: --param needs name=value, got {spec!r}", file=sys.stderr)
            return EXIT_VALIDATION
        k, _, v = spec.partition("=")
        overrides[k.strip()] = v.strip()
    try:
        report = analyze(
            args.source,
            overrides=overrides,
            degree=args.degree,
            samples=args.samples,
            seed=args.seed,
        )
    except (InputError, AnalysisError) as exn:
        print(f"error: {exn}", file=sys.stderr)
        return EXIT_VALIDATION
    except InternalConsistencyError as exn:
        print(f"internal consistency error: {exn}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.json:
        Path(args.json).write_text(report.to_json(), encoding="utf-8")
    print(report.to_text(), end="")
    return EXIT_OK


def _golden_dir() -> Path:
    return Path(__file__).resolve().parent.parent.parent / "tests" / "golden"


def _cmd_corpus(args) -> int:
    golden = Path(args.golden) if args.golden else _golden_dir()
    failures = 0
    names = args.only or PRESET_ORDER

    def run_one(name: str) -> tuple[str, str]:
        report = analyze(name, seed=args.seed)
        return name, report.to_json()

    results = []
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run_one, names))
    else:
        results = [run_one(n) for n in names]

    for name, payload in results:
        path = golden / f"{name}.json"
        if args.update:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(payload, encoding="utf-8")
            print(f"updated {path}")
            continue
        if not path.exists():
            print(f"FAIL {name}: missing golden file {path}")
            failures += 1
            continue
        expected = path.read_text(encoding="utf-8")
        if expected == payload:
            print(f"ok   {name}")
        else:
            failures += 1
            print(f"FAIL {name}: report differs from {path}")
            if args.verbose:
                import difflib

                diff = difflib.unified_diff(
                    expected.splitlines(), payload.splitlines(),
                    fromfile="golden", tofile="current", lineterm="",
                )
                for line in list(diff)[:80]:
                    print("  " + line)
    if failures:
        print(f"{failures} preset(s) failed")
        return EXIT_VALIDATION
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="hidsym",
        description=(
            "Lie point symmetries of Laplace/Poisson/Klein-Gordon equations "
            "from the conformal algebra of a metric; symmetry reduction and "
            "Type II hidden symmetry classification."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="run one analysis from a file or preset")
    pa.add_argument("source", help=f"input file or preset ({', '.join(PRESET_ORDER)})")
    pa.add_argument("--json", metavar="PATH", help="also write the JSON report")
    pa.add_argument("--degree", type=int, help="polynomial ansatz degree")
    pa.add_argument("--samples", type=int, help="zero-test sample count")
    pa.add_argument("--seed", type=int, help="zero-test base seed")
    pa.add_argument(
        "--param", action="append", metavar="NAME=RATIONAL",
        help="instantiate a declared parameter (repeatable)",
    )
    pa.set_defaults(func=_cmd_analyze)

    pc = sub.add_parser("corpus", help="run all presets against golden files")
    pc.add_argument("--golden", help="golden directory (default: tests/golden)")
    pc.add_argument("--update", action="store_true", help="rewrite golden files")
    pc.add_argument("--only", nargs="*", help="subset of presets")
    pc.add_argument("--jobs", type=int, default=1, help="parallel workers")
    pc.add_argument("--seed", type=int, default=None, help="zero-test base seed")
    pc.add_argument("--verbose", action="store_true", help="show diffs on failure")
    pc.set_defaults(func=_cmd_corpus)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
