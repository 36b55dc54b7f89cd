"""Command line front end.

Exit codes: 0 success/certified, 1 verification failed, 2 invalid input,
3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, replace
from typing import Optional, Sequence, TextIO

from .coloring import (
    ColoredComplex,
    ColoringError,
    InvariantViolation,
    check_proper,
    color,
    to_dot,
)
from .generate import RandomArrangementConfig, random_complex
from .schemes import (
    SCHEMES,
    Certificate,
    SchemeError,
    symbolic_check,
    verify,
)
from .snc_complex import SncComplex, SncError, format_arrangement, parse_arrangement, validate

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Optional[str] = None
    dim: Optional[int] = None
    scheme: str = "square"
    r: int = 2
    symbolic_check: bool = False
    seed: int = 0
    random: bool = False
    random_vertices: int = 8
    format: str = "text"
    output: Optional[str] = None
    dim2_mode: str = "double"


class InputError(Exception):
    pass


def _load(cfg: RunConfig) -> tuple[SncComplex, dict[str, int]]:
    if cfg.random:
        n = cfg.dim or 3
        rng = random.Random(cfg.seed)
        c = random_complex(RandomArrangementConfig(n, cfg.random_vertices), rng)
        return c, {}
    if cfg.input is None:
        raise InputError("an input file (or --random) is required")
    try:
        with open(cfg.input) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from None
    c, colors = parse_arrangement(text)
    if cfg.dim is not None:
        c = replace(c, n=cfg.dim)
    return c, colors


def _colored(cfg: RunConfig, c: SncComplex, colors: dict[str, int]):
    if colors:
        cc = ColoredComplex(c, colors)
        if not check_proper(cc):
            raise InputError("the coloring given in the input is not a proper n-coloring")
        return cc, []
    return color(c, dim2_mode=cfg.dim2_mode)


def _cmd_validate(cfg: RunConfig, out: TextIO) -> int:
    c, colors = _load(cfg)
    report = validate(c)
    if colors:
        cc = ColoredComplex(c, colors)
        if not report and not check_proper(cc):
            report.append("given coloring is not proper")
    if cfg.format == "json":
        out.write(json.dumps({"valid": not report, "violations": report}, indent=2) + "\n")
    else:
        out.write(f"violations: {len(report)}\n")
        for line in report:
            out.write(f"  {line}\n")
    return EXIT_OK if not report else EXIT_INVALID


def _cmd_color(cfg: RunConfig, out: TextIO) -> int:
    c, colors = _load(cfg)
    cc, log = _colored(cfg, c, colors)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(format_arrangement(cc.complex, dict(cc.color)))
    if cfg.format == "json":
        doc = {
            "n": cc.complex.n,
            "colors": {v: cc.color[v] for v in cc.complex.vertex_ids},
            "blowups": [
                {"edge": list(rec.edge), "exceptional": rec.exceptional, "step": rec.step}
                for rec in log
            ],
        }
        out.write(json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    out.write(f"blowups: {len(log)}\n")
    for rec in log:
        out.write(f"  {rec.step} {rec.edge[0]}-{rec.edge[1]} -> {rec.exceptional}\n")
    out.write(f"coloring: n={cc.complex.n} vertices={len(cc.complex.vertices)}\n")
    for v in cc.complex.vertex_ids:
        out.write(f"  {v} {cc.color[v]}\n")
    return EXIT_OK


def _cmd_verify(cfg: RunConfig, out: TextIO) -> int:
    if cfg.r < 2:
        raise InputError("--r must be at least 2")
    c, colors = _load(cfg)
    problems = validate(c)
    if problems:
        raise InputError("invalid complex: " + "; ".join(problems))
    cc, log = _colored(cfg, c, colors)
    try:
        scheme = SCHEMES[cfg.scheme](cc)
    except SchemeError as exc:
        raise InputError(str(exc)) from None
    result = verify(cc, scheme, cfg.r)
    doc = {
        "scheme": scheme.name,
        "r": cfg.r,
        "n": cc.complex.n,
        "faces": len(cc.complex.faces),
        "functions": len(scheme.functions),
        "blowups": len(log),
    }
    if isinstance(result, Certificate):
        doc.update(status="CERTIFIED", scenarios=result.scenarios)
        if cfg.symbolic_check:
            total, ok = symbolic_check(result, random.Random(cfg.seed))
            doc["symbolic_check"] = {"systems": total, "unramified": ok}
    else:
        doc.update(
            status="FAILED",
            scenario={"T": list(result.scenario.T), "J": list(result.scenario.J)},
            target=result.target,
        )
    if cfg.format == "json":
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(
            f"scenarios: faces={doc['faces']} functions={doc['functions']} "
            f"blowups={doc['blowups']}"
            + (f" total={result.scenarios}" if isinstance(result, Certificate) else "")
            + "\n"
        )
        if "symbolic_check" in doc:
            sc = doc["symbolic_check"]
            out.write(f"symbolic-check: systems={sc['systems']} unramified={sc['unramified']}\n")
        out.write(result.summary() + "\n")
    if "symbolic_check" in doc and doc["symbolic_check"]["systems"] != doc["symbolic_check"]["unramified"]:
        return EXIT_INTERNAL
    return EXIT_OK if isinstance(result, Certificate) else EXIT_FAILED


def _cmd_export_dot(cfg: RunConfig, out: TextIO) -> int:
    c, colors = _load(cfg)
    cc, _ = _colored(cfg, c, colors)
    dot = to_dot(cc)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(dot)
    else:
        out.write(dot)
    return EXIT_OK


COMMANDS = {
    "validate": _cmd_validate,
    "color": _cmd_color,
    "verify": _cmd_verify,
    "export-dot": _cmd_export_dot,
}


def run(cfg: RunConfig, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return COMMANDS[cfg.command](cfg, out)
    except InvariantViolation as exc:
        err.write(f"internal invariant violated: {exc}\n")
        return EXIT_INTERNAL
    except (InputError, SncError, ColoringError, SchemeError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snc-ramify",
        description="Color SNC dual complexes by edge blow-ups and certify ramification-killing schemes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        p.add_argument("input", nargs="?" if not needs_input else None, help="arrangement file")
        p.add_argument("--dim", type=int, help="override the ambient dimension")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--dim2-mode", choices=("double", "odd-components"), default="double")

    common(sub.add_parser("validate", help="check the complex invariants"))
    p = sub.add_parser("color", help="blow up edges and print an n-coloring")
    common(p)
    p.add_argument("-o", "--output", help="write the colored arrangement here")
    p = sub.add_parser("verify", help="color, then certify or refute a function scheme")
    common(p, needs_input=False)
    p.add_argument("--scheme", choices=sorted(SCHEMES), default="square")
    p.add_argument("--r", type=int, required=True, help="modulus (order of the class)")
    p.add_argument("--symbolic-check", action="store_true")
    p.add_argument("--random", action="store_true", help="use a seeded random arrangement")
    p.add_argument("--random-vertices", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p = sub.add_parser("export-dot", help="write the colored dual graph in DOT")
    common(p)
    p.add_argument("-o", "--output")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fields = {k.replace("-", "_"): v for k, v in vars(args).items()}
    cfg = RunConfig(**{k: v for k, v in fields.items() if k in RunConfig.__dataclass_fields__})
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
