"""Command-line interface: ``gwpdesign {check,oracle,enumerate,family,orbits}``.

Exit codes: 0 success / 2-design, 1 criterion failure, 2 bad input,
3 cap exceeded, 4 criterion and enumeration disagree.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, TextIO

from .blockstructure import Block, BlockStructure, CapExceeded, StructureError, load_block, load_structure
from .constructions import FamilyError, FamilySpec, P_CAP, verify_family
from .design import (
    DesignReport,
    alternating_mu_sum,
    check_criterion,
    enumerate_design,
    pair_counts,
)
from .gwp import (
    DEFAULT_GROUP_CAP,
    DEFAULT_V_CAP,
    ComponentGroups,
    orbital_size_alternating,
    orbital_size_product,
    parse_group_text,
    predicted_order,
)
from .poset import Poset, PosetError, format_set

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP, EXIT_DISAGREE = 0, 1, 2, 3, 4


@dataclass
class JobConfig:
    command: str
    paths: list = field(default_factory=list)
    format: str = "table"
    with_empty: bool = False
    group_cap: int = DEFAULT_GROUP_CAP
    v_cap: int = DEFAULT_V_CAP
    pair_budget: int | None = None
    seed: int = 0
    emit_block: str | None = None

    def __post_init__(self) -> None:
        for name in ("group_cap", "v_cap"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.pair_budget is not None and self.pair_budget <= 0:
            raise ValueError("pair_budget must be positive")


def render_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _set_json(poset: Poset, subset) -> list:
    return sorted(subset, key=poset.index)


def _verdict_json(poset: Poset, v) -> dict:
    return {
        "J": _set_json(poset, v.J),
        "border": _set_json(poset, v.border),
        "lhs": v.lhs,
        "rhs_numerator": v.rhs_numerator,
        "rhs_denominator": v.rhs_denominator,
        "holds": v.holds,
        "gap": v.gap,
    }


def report_json(poset: Poset, report: DesignReport) -> dict:
    d = {
        "v": report.v,
        "k": report.k,
        "is_2_design": report.is_2_design,
        "hypothesis_met": report.hypothesis_met,
        "verdicts": [_verdict_json(poset, v) for v in report.verdicts],
    }
    if report.empty_verdict is not None:
        d["empty_verdict"] = _verdict_json(poset, report.empty_verdict)
    if report.b is not None:
        d.update(b=report.b, r=report.r, lam=report.lam)
    return d


def report_table(poset: Poset, report: DesignReport) -> str:
    rows = []
    verdicts = list(report.verdicts)
    if report.empty_verdict is not None:
        verdicts.append(report.empty_verdict)
    for v in verdicts:
        rows.append(
            (
                format_set(poset, v.J),
                format_set(poset, v.border),
                v.lhs,
                f"{v.rhs_numerator}/{v.rhs_denominator}",
                "yes" if v.holds else "no",
                v.gap,
            )
        )
    head = [f"v = {report.v}", f"k = {report.k}"]
    if not report.hypothesis_met:
        head.append("WARNING: hypothesis unmet (a component group is not 2-transitive)")
    body = render_table(("J", "border", "lhs", "rhs", "holds", "gap"), rows)
    tail = f"2-design: {'yes' if report.is_2_design else 'no'}"
    return "\n".join(head + [body, tail, "(gap = |lhs*(v-1) - rhs numerator|, a near-miss ranking aid)"])


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise StructureError(f"cannot read {path}: {exc.strerror}") from None


def _load(cfg: JobConfig) -> tuple[BlockStructure, Block]:
    structure = load_structure(_read(cfg.paths[0]))
    block = load_block(structure, _read(cfg.paths[1]))
    return structure, block


def _load_groups(structure: BlockStructure, path: str | None) -> ComponentGroups | None:
    if path is None:
        return None
    return parse_group_text(structure, _read(path))


def _emit(out: TextIO, cfg: JobConfig, payload: dict, table: str) -> None:
    if cfg.format == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        out.write(table + "\n")


def cmd_check(cfg: JobConfig, out: TextIO) -> int:
    structure, block = _load(cfg)
    groups = _load_groups(structure, cfg.paths[2] if len(cfg.paths) > 2 else None)
    report = check_criterion(block, groups, with_empty=cfg.with_empty)
    poset = structure.poset
    _emit(out, cfg, report_json(poset, report), report_table(poset, report))
    return EXIT_OK if report.is_2_design else EXIT_FAIL


def cmd_oracle(cfg: JobConfig, out: TextIO) -> int:
    structure, block = _load(cfg)
    poset = structure.poset
    if cfg.pair_budget is not None and block.k**2 > cfg.pair_budget:
        raise CapExceeded(f"k^2 = {block.k ** 2} exceeds the pair budget {cfg.pair_budget}")
    counts = pair_counts(block)
    v, k = structure.v, block.k
    rows, items = [], []
    identity_ok, design = True, True
    for mask in poset.ancestral_masks():
        if mask == poset.full_mask:
            continue
        J = poset.subset(mask)
        pairs = counts[J]
        alt = alternating_mu_sum(block, J)
        orbit = orbital_size_product(structure, mask)
        # |(BxB) n O_J| * v(v-1) == k(k-1)|O_J|
        balanced = pairs * v * (v - 1) == k * (k - 1) * orbit
        identity_ok &= pairs == alt
        design &= balanced
        rows.append((format_set(poset, J), pairs, alt, orbit, "yes" if balanced else "no"))
        items.append({"J": _set_json(poset, J), "pairs": pairs, "alternating_sum": alt, "orbital_size": orbit, "balanced": balanced})
    table = "\n".join(
        [
            f"v = {v}",
            f"k = {k}",
            render_table(("J", "pairs", "alt_sum", "|O_J|", "balanced"), rows),
            f"pair identity: {'ok' if identity_ok else 'VIOLATED'}",
            f"2-design: {'yes' if design else 'no'}",
        ]
    )
    payload = {"v": v, "k": k, "rows": items, "pair_identity": identity_ok, "is_2_design": design}
    _emit(out, cfg, payload, table)
    if not identity_ok:
        return EXIT_DISAGREE
    return EXIT_OK if design else EXIT_FAIL


def cmd_enumerate(cfg: JobConfig, out: TextIO) -> int:
    structure, block = _load(cfg)
    groups = _load_groups(structure, cfg.paths[2] if len(cfg.paths) > 2 else None)
    order = predicted_order(structure, groups)
    if order > cfg.group_cap:
        raise CapExceeded(f"|F| = {order} exceeds the group cap {cfg.group_cap}")
    if structure.v > cfg.v_cap:
        raise CapExceeded(f"v = {structure.v} exceeds the v cap {cfg.v_cap}")
    d = enumerate_design(block, groups, cfg.group_cap, cfg.v_cap)
    hyp = d.criterion.hypothesis_met
    lam = str(d.lam) if d.lam is not None else "nonconstant"
    agreement = "AGREE" if d.agrees else ("DISAGREE" if hyp else "DISAGREE (hypothesis unmet)")
    table = "\n".join(
        [
            f"|F| = {d.group_order}",
            f"v = {structure.v}",
            f"k = {block.k}",
            f"b = {d.b}",
            f"r = {d.r}",
            f"lambda = {lam}",
            f"enumeration 2-design: {'yes' if d.is_2_design else 'no'}",
            f"criterion 2-design: {'yes' if d.criterion.is_2_design else 'no'}",
            f"2-transitive components: {'yes' if hyp else 'no'}",
            agreement,
        ]
    )
    payload = {
        "group_order": d.group_order,
        "v": structure.v,
        "k": block.k,
        "b": d.b,
        "r": d.r,
        "lam": d.lam,
        "enumeration_is_2_design": d.is_2_design,
        "criterion_is_2_design": d.criterion.is_2_design,
        "hypothesis_met": hyp,
        "agree": d.agrees,
    }
    _emit(out, cfg, payload, table)
    if not d.agrees and hyp:
        return EXIT_DISAGREE
    return EXIT_OK if d.is_2_design else EXIT_FAIL


def cmd_orbits(cfg: JobConfig, out: TextIO) -> int:
    structure = load_structure(_read(cfg.paths[0]))
    poset = structure.poset
    v = structure.v
    rows, items = [], []
    total = 0
    for mask in poset.ancestral_masks():
        a = orbital_size_product(structure, mask)
        b = orbital_size_alternating(structure, mask)
        if a != b:
            raise AssertionError("orbital size forms disagree")
        if mask != poset.full_mask:
            total += a
        J = poset.subset(mask)
        border = poset.subset(poset.border_mask(mask))
        rows.append((format_set(poset, J), format_set(poset, border), a, a // v))
        items.append({"J": _set_json(poset, J), "border": _set_json(poset, border), "size": a, "size_over_v": a // v})
    table = "\n".join(
        [
            f"v = {v}",
            render_table(("J", "border", "|O_J|", "|O_J|/v"), rows),
            f"sum over proper J = {total} (v(v-1) = {v * (v - 1)})",
        ]
    )
    _emit(out, cfg, {"v": v, "orbitals": items, "proper_total": total}, table)
    return EXIT_OK


def cmd_family(cfg: JobConfig, out: TextIO, family: str, p: int) -> int:
    spec = FamilySpec(family, p)
    report = verify_family(spec, pair_budget=cfg.pair_budget)
    poset = report.structure.poset
    if cfg.emit_block:
        Path(cfg.emit_block).write_text(report.block.to_text())

    def match(a, b):
        return "MATCH" if a == b else "MISMATCH"

    order = sorted(report.mu_rows, key=poset.sort_key)
    mu_rows = [(format_set(poset, J), *report.mu_rows[J], match(*report.mu_rows[J])) for J in order]
    orb_order = sorted(report.orbit_rows, key=poset.sort_key)
    orb_rows = [
        (format_set(poset, J), format_set(poset, poset.border(J)), *report.orbit_rows[J], match(*report.orbit_rows[J]))
        for J in orb_order
    ]
    sections = [
        f"family {spec.family}, p = {spec.p}",
        f"sizes = {' '.join(str(e) for e in report.structure.sizes)}",
        f"v = {report.structure.v}",
        f"k = {report.block.k}",
        "",
        "mu_B(J)",
        render_table(("J", "computed", "reference", "status"), mu_rows),
        "",
        "|O_J|/v",
        render_table(("J", "border", "computed", "reference", "status"), orb_rows),
        "",
        report_table(poset, report.criterion),
    ]
    if report.pair_oracle_skipped:
        sections.append("pair oracle: skipped (pair budget)")
    else:
        sections.append(f"pair oracle: {'MATCH' if report.pairs_match else 'MISMATCH'}")
    payload = {
        "family": spec.family,
        "p": spec.p,
        "sizes": list(report.structure.sizes),
        "v": report.structure.v,
        "k": report.block.k,
        "mu": [
            {"J": _set_json(poset, J), "computed": a, "reference": b, "match": a == b}
            for J, (a, b) in ((J, report.mu_rows[J]) for J in order)
        ],
        "orbits": [
            {"J": _set_json(poset, J), "border": _set_json(poset, poset.border(J)), "computed": a, "reference": b, "match": a == b}
            for J, (a, b) in ((J, report.orbit_rows[J]) for J in orb_order)
        ],
        "criterion": report_json(poset, report.criterion),
        "pair_oracle": None
        if report.pair_oracle_skipped
        else [
            {"J": _set_json(poset, J), "pairs": a, "alternating_sum": b}
            for J, (a, b) in sorted(report.pair_rows.items(), key=lambda kv: poset.sort_key(kv[0]))
        ],
        "ok": report.ok,
    }
    _emit(out, cfg, payload, "\n".join(sections))
    return EXIT_OK if report.ok else EXIT_FAIL


def _env_default(name: str, default, cast=str):
    raw = os.environ.get(name.upper())
    if raw is None:
        return default
    if cast is bool:
        return raw.strip().lower() in ("1", "true", "yes", "on")
    return cast(raw)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default=_env_default("format", "table"))
    common.add_argument("--with-empty", action="store_true", default=_env_default("with_empty", False, bool))
    common.add_argument("--group-cap", type=int, default=_env_default("group_cap", DEFAULT_GROUP_CAP, int))
    common.add_argument("--v-cap", type=int, default=_env_default("v_cap", DEFAULT_V_CAP, int))
    common.add_argument("--pair-budget", type=int, default=_env_default("pair_budget", None, int))
    common.add_argument("--seed", type=int, default=_env_default("seed", 0, int))
    common.add_argument("--emit-block", default=_env_default("emit_block", None))

    parser = argparse.ArgumentParser(prog="gwpdesign", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", parents=[common], help="evaluate the 2-design criterion")
    p.add_argument("structure")
    p.add_argument("block")
    p.add_argument("groups", nargs="?")
    p = sub.add_parser("oracle", parents=[common], help="count block pairs per orbital directly")
    p.add_argument("structure")
    p.add_argument("block")
    p = sub.add_parser("enumerate", parents=[common], help="brute-force B^F at tiny scale")
    p.add_argument("structure")
    p.add_argument("block")
    p.add_argument("groups", nargs="?")
    p = sub.add_parser("family", parents=[common], help="build and verify an explicit family")
    p.add_argument("family", choices=sorted(P_CAP))
    p.add_argument("--p", type=int, required=True)
    p = sub.add_parser("orbits", parents=[common], help="orbital sizes of a structure")
    p.add_argument("structure")
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    paths = [getattr(args, n) for n in ("structure", "block", "groups") if getattr(args, n, None)]
    try:
        cfg = JobConfig(
            command=args.command,
            paths=paths,
            format=args.format,
            with_empty=args.with_empty,
            group_cap=args.group_cap,
            v_cap=args.v_cap,
            pair_budget=args.pair_budget,
            seed=args.seed,
            emit_block=args.emit_block,
        )
        if cfg.command == "check":
            return cmd_check(cfg, out)
        if cfg.command == "oracle":
            return cmd_oracle(cfg, out)
        if cfg.command == "enumerate":
            return cmd_enumerate(cfg, out)
        if cfg.command == "orbits":
            return cmd_orbits(cfg, out)
        return cmd_family(cfg, out, args.family, args.p)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (StructureError, PosetError, FamilyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main_exit() -> None:
    sys.exit(main())
