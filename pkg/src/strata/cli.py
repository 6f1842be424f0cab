"""Command-line interface: ``strata <command> ...``.

Exit codes: 0 on success or PASS, 1 on a FAIL or invalid verdict, 2 on
input errors (bad flags, unreadable or malformed files, unsupported cases).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import catalog, io
from .errors import StrataError
from .gysin import CONVENTIONS, verify
from .ih import ih_betti, regular_part_betti, relative_betti, step_ih_betti
from .simplicial import SimplicialComplex
from .stratification import (
    Perversity,
    StratifiedSpace,
    cone_stratified,
    named_perversity,
    product_stratified,
    suspension_stratified,
    validate_pseudomanifold,
)


class UsageError(Exception):
    pass


def parse_perversity(space: StratifiedSpace, spec: str) -> Perversity:
    """``id=int[,id=int...]``, ``top``, ``zero`` or ``const:<n>``.

    Terms ``codim<k>=<int>`` set every stratum of codimension ``k``; explicit
    stratum terms override them.
    """
    spec = spec.strip()
    if spec in ("top", "zero") or spec.startswith("const:"):
        try:
            return named_perversity(space, spec)
        except ValueError as exc:
            raise UsageError(f"bad perversity {spec!r}: {exc}") from None
    try:
        return named_perversity(space, int(spec))
    except ValueError:
        pass
    values = {}
    by_codim = {}
    for part in filter(None, (p.strip() for p in spec.split(","))):
        sid, eq, val = part.partition("=")
        if not eq:
            raise UsageError(f"bad perversity term {part!r}: expected <stratum>=<int>")
        sid = sid.strip()
        try:
            v = int(val)
        except ValueError:
            raise UsageError(f"bad perversity value in {part!r}") from None
        if sid.startswith("codim") and sid[5:].isdigit() and sid not in space.singular_ids:
            by_codim[int(sid[5:])] = v
        else:
            values[sid] = v
    for st in space.singular_strata:
        if st.id not in values and st.codim in by_codim:
            values[st.id] = by_codim[st.codim]
    missing = set(space.singular_ids) - set(values)
    extra = set(values) - set(space.singular_ids)
    if missing or extra:
        raise UsageError(
            f"perversity must give every singular stratum {list(space.singular_ids)}"
            + (f"; missing {sorted(missing)}" if missing else "")
            + (f"; unknown {sorted(extra)}" if extra else "")
        )
    return Perversity.of(values)


def parse_range(spec: str) -> list[int] | None:
    """``a..b`` (inclusive) or a single integer; ``None`` for anything else."""
    lo, sep, hi = spec.partition("..")
    try:
        if sep:
            a, b = int(lo), int(hi)
            if a > b:
                raise UsageError(f"empty range {spec!r}")
            return list(range(a, b + 1))
        return [int(spec)]
    except ValueError:
        return None


def perversities(space: StratifiedSpace, spec: str) -> list[Perversity]:
    consts = parse_range(spec)
    if consts is not None:
        return [named_perversity(space, k) for k in consts]
    return [parse_perversity(space, spec)]


def _table(t) -> list[int]:
    return list(t.entries)


# -- commands -------------------------------------------------------------------


def cmd_validate(args, out) -> int:
    space = io.load_space(args.space)
    report = validate_pseudomanifold(space)
    doc = report.to_dict()
    doc["strata"] = [{"id": st.id, "codim": st.codim, "dim": st.dim} for st in space.strata]
    if args.json:
        out.write(io.dumps(doc))
    else:
        out.write(f"{report.verdict} (length {report.length})\n")
        for st in space.strata:
            out.write(f"  stratum {st.id}: dim {st.dim}, codim {st.codim}\n")
        for v in report.violations:
            out.write(f"  {v.code} at {v.witness}" + (f": {v.detail}" if v.detail else "") + "\n")
    return 0 if report.valid else 1


def cmd_ih(args, out) -> int:
    space = io.load_space(args.space)
    if args.perversity is None and args.qbar is None:
        raise UsageError("ih needs --perversity or --qbar")
    qs = perversities(space, args.perversity) if args.perversity is not None else []
    if args.qbar is not None:
        consts = parse_range(args.qbar)
        if consts is None:
            raise UsageError(f"--qbar expects a..b or an integer, got {args.qbar!r}")
        qs += [named_perversity(space, k) for k in consts]
    upper = None
    if args.step_to is not None:
        uppers = perversities(space, args.step_to)
        if len(uppers) != 1:
            raise UsageError("--step-to takes a single perversity")
        upper = uppers[0]
    rows = []
    for q in qs:
        row = {"q": q.as_dict(), "ih": _table(ih_betti(space, q))}
        if upper is not None:
            row["step_to"] = upper.as_dict()
            row["step"] = _table(step_ih_betti(space, q, upper))
        rows.append(row)
    extra = {}
    if args.compare:
        extra = {"regular": _table(regular_part_betti(space)), "relative": _table(relative_betti(space))}
    if args.json:
        out.write(io.dumps({"space": str(args.space), "results": rows, **extra}))
        return 0
    for row in rows:
        body = "(" + ",".join(map(str, row["ih"])) + ")"
        if len(rows) > 1 or args.step_to is not None:
            q = ", ".join(f"{k}={v}" for k, v in sorted(row["q"].items()))
            body = f"q[{q}]: {body}"
            if "step" in row:
                body += "  step: (" + ",".join(map(str, row["step"])) + ")"
        out.write(body + "\n")
    for k, v in extra.items():
        out.write(f"{k}: (" + ",".join(map(str, v)) + ")\n")
    return 0


def _manifold(spec: str) -> SimplicialComplex:
    if spec == "interval":
        return catalog.interval()
    if spec == "circle":
        return catalog.four_cycle()
    return io.complex_from_json(io.read_json(spec), io._Ctx(spec, Path(spec).parent))


def cmd_construct(args, out) -> int:
    space = io.load_space(args.space)
    if args.kind == "cone":
        result = cone_stratified(space, args.apex_id)
    elif args.kind == "susp":
        result = suspension_stratified(space, tuple(args.apex_ids.split(",")))
    else:
        if args.manifold is None:
            raise UsageError("construct product needs --manifold interval|circle|<complex file>")
        result = product_stratified(_manifold(args.manifold), space)
    text = io.dumps(io.space_to_json(result))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        if not args.json:
            out.write(f"wrote {args.output}\n")
    else:
        out.write(text)
    return 0


def cmd_gysin(args, out) -> int:
    if (args.catalog is None) == (args.action is None):
        raise UsageError("gysin needs exactly one of --catalog or --action")
    action = catalog.get(args.catalog) if args.catalog else io.load_action(args.action)
    if action.B.singular_ids:
        if args.qbar is None:
            raise UsageError(f"{action.name} has singular strata; pass --qbar")
        qs = perversities(action.B, args.qbar)
    else:
        qs = [Perversity()]
    reports = [verify(action, q) for q in qs]
    ok = all(r.passed for r in reports)
    if args.json:
        out.write(io.dumps({"action": action.name, "verdict": "PASS" if ok else "FAIL", "reports": [r.to_dict() for r in reports]}))
    else:
        out.write(f"action {action.name}\n")
        for k, v in sorted(CONVENTIONS.items()):
            out.write(f"  convention {k}: {v}\n")
        for r in reports:
            _write_report(out, r)
        out.write(("PASS" if ok else "FAIL") + "\n")
    return 0 if ok else 1


def _write_report(out, r) -> None:
    q = ", ".join(f"{k}={v}" for k, v in r.q.values) or "(free)"
    out.write(f"q[{q}]: {r.verdict}" + ("" if r.in_theorem_range else "  (outside 0 <= q <= t)") + "\n")
    labels = dict(r.classification.labels)
    if labels:
        out.write("  strata: " + ", ".join(f"{k}={v}" for k, v in sorted(labels.items())) + "\n")
    for name, t in r.tables:
        out.write(f"  {name}: {t}\n")
    for les in (r.gysin, r.lower):
        out.write(f"  {les.pattern} sequence: {les.verdict}; dims {list(les.dims)}; ranks {list(les.ranks)}\n")
        if not les.feasible:
            j = les.first_violation
            out.write(f"    first violation at position {j} ({les.labels[j - 1]}), rank {les.ranks[j - 1]}\n")
    for c in r.checks:
        out.write(f"  check {c.name}: {'ok' if c.ok else 'FAILED'} ({c.detail})\n")


def cmd_catalog(args, out) -> int:
    if args.dump_catalog:
        action = catalog.get(args.dump_catalog)
        text = io.dumps(io.action_to_json(action))
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
            if not args.json:
                out.write(f"wrote {args.output}\n")
        else:
            out.write(text)
        return 0
    entries = []
    for name in catalog.names():
        a = catalog.get(name)
        entries.append(
            {
                "name": name,
                "shape": a.shape,
                "X": a.metadata.get("X", ""),
                "B": a.metadata.get("B", ""),
                "singular_strata": list(a.B.singular_ids),
            }
        )
    if args.json:
        out.write(io.dumps({"catalog": entries}))
    else:
        for e in entries:
            out.write(f"{e['name']}: {e['X']} -> {e['B']} [{e['shape']}]\n")
    return 0


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    p = argparse.ArgumentParser(prog="strata", description="Intersection cohomology of stratified spaces and circle actions.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", parents=[common], help="check pseudomanifold conditions")
    v.add_argument("space")
    v.set_defaults(func=cmd_validate)

    i = sub.add_parser("ih", parents=[common], help="intersection cohomology Betti numbers")
    i.add_argument("--space", required=True)
    i.add_argument("--perversity", help="id=int,...  |  top | zero | const:<n>")
    i.add_argument("--qbar", help="sweep constant perversities a..b")
    i.add_argument("--step-to", help="also compute the step table up to this perversity")
    i.add_argument("--compare", action="store_true", help="also print regular-part and relative tables")
    i.set_defaults(func=cmd_ih)

    c = sub.add_parser("construct", parents=[common], help="cone, suspension or product of a space")
    c.add_argument("kind", choices=["cone", "susp", "product"])
    c.add_argument("--space", required=True)
    c.add_argument("--apex-id", default="star")
    c.add_argument("--apex-ids", default="north,south")
    c.add_argument("--manifold", help="interval, circle or a complex file (product only)")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_construct)

    g = sub.add_parser("gysin", parents=[common], help="verify the Gysin and residue sequences of an action")
    g.add_argument("--catalog")
    g.add_argument("--action")
    g.add_argument("--qbar", help="integer, a..b, or a perversity on the orbit space")
    g.set_defaults(func=cmd_gysin)

    k = sub.add_parser("catalog", parents=[common], help="list or dump built-in actions")
    k.add_argument("--dump-catalog", metavar="NAME")
    k.add_argument("-o", "--output")
    k.set_defaults(func=cmd_catalog)
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (StrataError, UsageError) as exc:
        err.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
