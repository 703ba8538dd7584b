"""Command-line front end: ``holocoh {betti,verify,restrict,hilbert,cache}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import cache, presentation, resolution
from .cohomology import ContractError, cohomology_ring, restrict
from .generators import canonical_generators, cyclic_classes
from .groups import GroupSpec, GroupSpecError, holomorph_subgroups, make_group
from .presentation import PresentationError, RingPresentation
from .report import render_text
from .verify import TARGETS, bits, express, run_target, subgroup_a_ring

GROUPS = ("holomorph", "gx", "gz", "cyclic", "product")


class UsageError(Exception):
    pass


def build_spec(args) -> GroupSpec:
    family = args.group
    if family in ("holomorph", "gx", "gz"):
        if args.rho is None:
            raise UsageError(f"--group {family} needs --rho")
        spec = {"holomorph": GroupSpec.holomorph, "gx": GroupSpec.metacyclic_gx, "gz": GroupSpec.dihedral_gz}[family](
            args.rho
        )
    elif family == "cyclic":
        if args.order is None:
            raise UsageError("--group cyclic needs --order")
        spec = GroupSpec.cyclic(args.order)
    else:
        if not args.factors:
            raise UsageError("--group product needs --factors, e.g. 2,2,4")
        spec = GroupSpec.product(*(GroupSpec.cyclic(int(f)) for f in args.factors.split(",")))
    spec.validate()
    return spec


def matching_presentation(spec: GroupSpec) -> RingPresentation | None:
    if spec.family == "holomorph" and spec.rho >= 3:
        return presentation.holomorph_presentation(spec.rho)
    if spec.family == "gx":
        return presentation.metacyclic_presentation(spec.rho)
    if spec.family == "gz":
        return presentation.dihedral_presentation()
    if spec.family == "cyclic" and spec.param >= 2:
        return presentation.cyclic_presentation(spec.param)
    return None


def load_presentation(name: str) -> RingPresentation:
    if name in presentation.CORPUS:
        return presentation.load_corpus(name)
    path = Path(name)
    if path.exists():
        return RingPresentation.from_file(path)
    raise UsageError(f"{name!r} is neither a shipped presentation ({', '.join(presentation.CORPUS)}) nor a file")


def cmd_betti(args) -> tuple[dict, bool]:
    spec = build_spec(args)
    res = resolution.minimal_resolution(make_group(spec), args.max_degree, args.cache_dir)
    out = {"group": str(spec), "betti": res.ranks[: args.max_degree + 1]}
    ok = True
    pres = matching_presentation(spec)
    if pres is not None:
        dims = pres.hilbert(args.max_degree)
        ok = dims == out["betti"]
        out.update(presentation=pres.name, dimensions=dims, match=ok)
    return out, ok


def cmd_hilbert(args) -> tuple[dict, bool]:
    pres = load_presentation(args.presentation)
    out = {"presentation": pres.name, "dimensions": pres.hilbert(args.max_degree)}
    if args.basis is not None:
        out["basis"] = [pres.format_monomial(m) for m in pres.monomial_basis(args.basis)]
    return out, True


def cmd_verify(args) -> tuple[dict, bool]:
    target = args.target_pos or args.target
    reports = run_target(target, args.rho, args.max_degree, args.cache_dir)
    data = [r.to_dict() for r in reports]
    ok = all(r.verdict for r in reports)
    return {"target": target, "verdict": "pass" if ok else "fail", "reports": data}, ok


def cmd_restrict(args) -> tuple[dict, bool]:
    spec = build_spec(args)
    if spec.family != "holomorph":
        raise UsageError("restrict is available for --group holomorph")
    subs = holomorph_subgroups(spec.rho)
    if args.subgroup not in subs:
        raise UsageError(f"unknown subgroup {args.subgroup!r}; choose from {', '.join(subs)}")
    incl = subs[args.subgroup]
    named = canonical_generators(spec, 4, args.cache_dir)
    if args.subgroup == "A":
        _, classes, pres = subgroup_a_ring(spec.rho)
        describe = lambda c: express(c, pres, classes) or bits(c.coords)
    elif args.subgroup == "N":
        wy, cy = cyclic_classes(incl.source, 4, args.cache_dir)
        pres = RingPresentation.parse("gen wy 1\ngen cy 2\nrel wy^2\n")
        describe = lambda c: express(c, pres, {"wy": wy, "cy": cy}) or bits(c.coords)
    else:
        cohomology_ring(incl.source, 4, args.cache_dir)
        describe = lambda c: bits(c.coords)
    rows = []
    for name, pinned in named.classes.items():
        images = []
        for label, cls in pinned.candidates():
            text = describe(restrict(incl, cls))
            images.append({"candidate": bits(label), "image": text})
        rows.append({"class": name, "images": images})
    return {"group": str(spec), "subgroup": args.subgroup, "subgroup_group": str(incl.source.spec), "rows": rows}, True


def cmd_cache(args) -> tuple[dict, bool]:
    if args.cache_dir is None:
        raise UsageError(f"cache needs --cache-dir or ${cache.ENV_VAR}")
    if args.action == "list":
        return {"cache_dir": str(args.cache_dir), "entries": cache.entries(args.cache_dir)}, True
    if args.action == "clear":
        return {"cache_dir": str(args.cache_dir), "removed": cache.clear(args.cache_dir)}, True
    spec = build_spec(args)
    res = resolution.minimal_resolution(make_group(spec), args.max_degree, args.cache_dir)
    cache.store(args.cache_dir, res)
    return {"cache_dir": str(args.cache_dir), "group": str(spec), "ranks": res.ranks}, True


def _text(command: str, data: dict) -> str:
    if command == "verify":
        return "\n\n".join(render_text(r) for r in data["reports"]) + f"\n\noverall: {data['verdict']}"
    if command == "betti":
        lines = [f"{data['group']}: betti {data['betti']}"]
        if "presentation" in data:
            state = "match" if data["match"] else "MISMATCH"
            lines.append(f"{data['presentation']}: dims  {data['dimensions']} ({state})")
        return "\n".join(lines)
    if command == "hilbert":
        lines = [f"{data['presentation']}: {data['dimensions']}"]
        if "basis" in data:
            lines.append("basis: " + ", ".join(data["basis"]))
        return "\n".join(lines)
    if command == "restrict":
        lines = [f"restriction {data['group']} -> {data['subgroup']} = {data['subgroup_group']}"]
        for row in data["rows"]:
            for img in row["images"]:
                tag = f"[{img['candidate']}]" if img["candidate"] else ""
                lines.append(f"  {row['class']}{tag} -> {img['image']}")
        return "\n".join(lines)
    if command == "cache" and "entries" in data:
        lines = [f"cache {data['cache_dir']}"]
        for e in data["entries"]:
            state = e.get("error") or ("current" if e.get("current") else "stale")
            lines.append(f"  {e['file']}: ranks {e.get('ranks')} ({state}, {e['bytes']} bytes)")
        return "\n".join(lines)
    if command == "cache" and "ranks" in data:
        return f"cached {data['group']} in {data['cache_dir']}: ranks {data['ranks']}"
    if command == "cache":
        return f"removed {data['removed']} cached resolutions from {data['cache_dir']}"
    return json.dumps(data)


def _failure_summary(report: dict) -> str:
    ids = [c["id"] for c in report["checks"] if c["mandatory"] and not c["passed"]]
    if not report["passing_candidates"] and report["candidates"]:
        ids.append("no candidate tuple passes")
    return f"{report['target']} on {report['group']}: " + ", ".join(ids)


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", choices=GROUPS, default="holomorph")
    common.add_argument("--rho", type=int)
    common.add_argument("--order", type=int, help="order of a cyclic group")
    common.add_argument("--factors", help="comma-separated cyclic orders for --group product")
    common.add_argument("--max-degree", type=int)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--cache-dir", type=Path, default=None, help=f"defaults to ${cache.ENV_VAR}")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="holocoh", description="Mod-2 cohomology of holomorphs of cyclic 2-groups.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("betti", parents=[common], help="Betti numbers from the minimal resolution")
    p = sub.add_parser("verify", parents=[common], help="verify stated ring structure")
    p.add_argument("target_pos", nargs="?", choices=TARGETS + ("all",), metavar="TARGET")
    p.add_argument("--target", choices=TARGETS + ("all",), default="all")
    p = sub.add_parser("restrict", parents=[common], help="restrictions of the named generators")
    p.add_argument("--subgroup", default="A", help="N, Kx, Kz, Gx, Gz, xz or A")
    p = sub.add_parser("hilbert", parents=[common], help="dimensions of a presented ring")
    p.add_argument("presentation", help="shipped presentation name or a file path")
    p.add_argument("--basis", type=int, help="also list a monomial basis in this degree")
    p = sub.add_parser("cache", parents=[common], help="inspect or fill the resolution cache")
    p.add_argument("action", choices=("list", "clear", "warm"))
    return parser


COMMANDS = {
    "betti": cmd_betti,
    "verify": cmd_verify,
    "restrict": cmd_restrict,
    "hilbert": cmd_hilbert,
    "cache": cmd_cache,
}
DEFAULT_MAX_DEGREE = {"betti": 6, "hilbert": 8, "cache": 6}


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.cache_dir is None:
        args.cache_dir = cache.default_cache_dir()
    if args.max_degree is None:
        args.max_degree = DEFAULT_MAX_DEGREE.get(args.command)
    try:
        data, ok = COMMANDS[args.command](args)
    except (UsageError, GroupSpecError, PresentationError, ContractError) as exc:
        print(f"holocoh: error: {exc}", file=sys.stderr)
        return 2
    except (resolution.ResourceError, presentation.ResourceError) as exc:
        print(f"holocoh: resource bound exceeded: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        print(json.dumps(data, indent=2))
    else:
        print(_text(args.command, data))
    if not ok and args.command == "verify":
        failed = [_failure_summary(r) for r in data["reports"] if r["verdict"] != "pass"]
        print("holocoh: verification failed: " + "; ".join(failed), file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
