"""Command-line interface.

Subcommands: ``validate``, ``bound``, ``enumerate``, ``census``, ``render``.
Every flag can be defaulted through an environment variable with the
``SPANSURF_`` prefix (dashes become underscores, e.g. ``SPANSURF_THREADS``).

Exit codes: 0 success; 2 invalid input (syntax, labels, unreadable files);
3 precondition violation (non-alternating, split, nugatory, or non-prime
diagram); 4 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .config import TargetSpec
from .diagram import (
    DiagramError,
    NotAlternatingError,
    NotPrimeError,
    NugatoryCrossingError,
    PDConsistencyError,
    PDSyntaxError,
    SplitDiagramError,
    parse_pd,
    parse_table,
)
from .render import render_svg
from .search import (
    SearchBudget,
    bound,
    bound_chi,
    enumerate_configurations,
    intermediate_bounds,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_PRECONDITION = 3
EXIT_BUDGET = 4

_PRECONDITION_ERRORS = (
    NotAlternatingError,
    SplitDiagramError,
    NugatoryCrossingError,
    NotPrimeError,
)


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _env_default(name: str, fallback=None):
    return os.environ.get("SPANSURF_" + name.upper().replace("-", "_"), fallback)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="spansurf",
        description="Census of standard-position spanning-surface "
        "configurations on prime alternating link diagrams.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_target(sp):
        sp.add_argument("--genus", type=int, default=None,
                        help="Seifert genus target (orientable, knots)")
        sp.add_argument("--chi", type=int, default=None,
                        help="spanning-surface Euler characteristic target")

    def add_common(sp):
        sp.add_argument("--out", default=_env_default("out"),
                        help="output file (default stdout)")
        sp.add_argument("--format", default=_env_default("format", "json"),
                        choices=("json", "csv", "text"))

    v = sub.add_parser("validate", help="validate PD codes")
    v.add_argument("--pd", help="PD code text")
    v.add_argument("--table", help="knot table file (name<TAB>pd lines)")
    add_common(v)

    b = sub.add_parser("bound", help="evaluate the census bound")
    b.add_argument("--n", type=int, required=True)
    add_target(b)
    b.add_argument("--intermediate", action="store_true",
                   help="also print the per-curve and per-class factors")
    add_common(b)

    e = sub.add_parser("enumerate", help="enumerate configurations")
    e.add_argument("--pd", required=True)
    e.add_argument("--name", default="")
    add_target(e)
    e.add_argument("--emit-surfaces", action="store_true",
                   default=bool(_env_default("emit_surfaces")))
    e.add_argument("--node-limit", type=int,
                   default=_env_default("node_limit"))
    e.add_argument("--time-limit", type=float,
                   default=_env_default("time_limit"))
    e.add_argument("--engine", choices=("pruned", "oracle"), default="pruned")
    add_common(e)

    c = sub.add_parser("census", help="run a table of diagrams")
    c.add_argument("--table", required=True)
    add_target(c)
    c.add_argument("--emit-surfaces", action="store_true")
    c.add_argument("--node-limit", type=int,
                   default=_env_default("node_limit"))
    c.add_argument("--time-limit", type=float,
                   default=_env_default("time_limit"))
    c.add_argument("--threads", type=int,
                   default=int(_env_default("threads", "1")))
    c.add_argument("--resume", action="store_true",
                   help="skip names already present in the output file")
    c.add_argument("--out", default=_env_default("out"))
    c.add_argument("--mask-timing", action="store_true",
                   help="zero the elapsed fields (reproducible output)")

    r = sub.add_parser("render", help="render a diagram to SVG")
    r.add_argument("--pd", required=True)
    r.add_argument("--configuration",
                   help="file with a configuration JSON object to overlay")
    r.add_argument("--out", default=_env_default("out"))
    return p


def _target_from_args(args, component_count: int = 1) -> TargetSpec:
    if (args.genus is None) == (args.chi is None):
        raise CliError(EXIT_INVALID, "choose exactly one of --genus / --chi")
    if args.genus is not None:
        return TargetSpec.seifert_genus(args.genus)
    return TargetSpec.spanning_chi(args.chi, component_count)


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _read_table(path: str) -> list[tuple[str, str]]:
    try:
        with open(path) as fh:
            return list(parse_table(fh.read()))
    except OSError as e:
        raise CliError(EXIT_INVALID, f"cannot read table: {e}")


def cmd_validate(args) -> int:
    rows = []
    if args.pd:
        rows.append(("<pd>", args.pd))
    if args.table:
        rows.extend(_read_table(args.table))
    if not rows:
        raise CliError(EXIT_INVALID, "validate needs --pd or --table")
    reports = []
    worst = EXIT_OK
    for name, pd in rows:
        try:
            d = parse_pd(pd)
            reports.append({
                "name": name, "ok": True, "n": d.n,
                "edges": len(d.edges), "faces": len(d.faces),
                "components": d.component_count,
                "prime": d.is_prime(),
                "two_braid_closure": d.is_two_braid_closure(),
            })
            if not d.is_prime():
                worst = max(worst, EXIT_PRECONDITION)
        except DiagramError as e:
            reports.append({
                "name": name, "ok": False,
                "error": type(e).__name__, "detail": str(e),
            })
            if isinstance(e, _PRECONDITION_ERRORS):
                worst = max(worst, EXIT_PRECONDITION)
            else:
                worst = max(worst, EXIT_INVALID)
    if args.format == "text":
        lines = []
        for r in reports:
            if r["ok"]:
                lines.append(
                    f"{r['name']}: ok n={r['n']} faces={r['faces']} "
                    f"components={r['components']} prime={r['prime']}"
                )
            else:
                lines.append(f"{r['name']}: {r['error']}: {r['detail']}")
        _write("\n".join(lines) + "\n", args.out)
    else:
        _write(json.dumps(reports, indent=2) + "\n", args.out)
    return worst


def cmd_bound(args) -> int:
    if (args.genus is None) == (args.chi is None):
        raise CliError(EXIT_INVALID, "choose exactly one of --genus / --chi")
    try:
        if args.genus is not None:
            value = bound(args.n, args.genus)
        else:
            value = bound_chi(args.n, args.chi)
    except ValueError as e:
        raise CliError(EXIT_INVALID, str(e))
    if args.intermediate and args.genus is not None:
        data = {k: str(v) for k, v in
                intermediate_bounds(args.n, args.genus).items()}
        data["bound"] = str(value)
        _write(json.dumps(data, indent=2) + "\n", args.out)
    else:
        _write(str(value) + "\n", args.out)
    return EXIT_OK


def _parse_diagram(pd: str):
    try:
        return parse_pd(pd)
    except _PRECONDITION_ERRORS as e:
        raise CliError(EXIT_PRECONDITION, f"{type(e).__name__}: {e}")
    except DiagramError as e:
        raise CliError(EXIT_INVALID, f"{type(e).__name__}: {e}")


def cmd_enumerate(args) -> int:
    d = _parse_diagram(args.pd)
    try:
        target = _target_from_args(args, d.component_count)
    except ValueError as e:
        raise CliError(EXIT_INVALID, str(e))
    budget = None
    if args.node_limit or args.time_limit:
        budget = SearchBudget.from_target(
            target,
            node_limit=int(args.node_limit) if args.node_limit else None,
            time_limit=float(args.time_limit) if args.time_limit else None,
        )
    try:
        if args.engine == "oracle":
            from .search import oracle_enumerate

            configs = oracle_enumerate(d, target)
            payload = {
                "name": args.name, "engine": "oracle",
                "configuration_count": len(configs),
                "configurations": [c.to_json_dict() for c in configs],
            }
            _write(json.dumps(payload, indent=2) + "\n", args.out)
            return EXIT_OK
        configs, report = enumerate_configurations(
            d, target, budget=budget,
            emit_surfaces=args.emit_surfaces, name=args.name,
        )
    except NotPrimeError as e:
        raise CliError(EXIT_PRECONDITION, str(e))
    except ValueError as e:
        raise CliError(EXIT_INVALID, str(e))
    text = _format_report(report, args.format)
    _write(text, args.out)
    return EXIT_OK if report.completed else EXIT_BUDGET


def _format_report(report, fmt: str, mask_timing: bool = False) -> str:
    data = report.to_json_dict(mask_timing=mask_timing)
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if fmt == "csv":
        cols = ["name", "n", "configuration_count", "bound", "completed"]
        row = ",".join(str(data[c]) for c in cols)
        return ",".join(cols) + "\n" + row + "\n"
    lines = [
        f"name: {data['name']}",
        f"n: {data['n']}",
        f"target: {data['target']}",
        f"bound: {data['bound']}",
        f"configurations: {data['configuration_count']}",
        f"completed: {data['completed']}",
    ]
    return "\n".join(lines) + "\n"


def _census_worker(job) -> dict:
    name, pd, mode, value, emit_surfaces, node_limit, time_limit, mask = job
    try:
        d = parse_pd(pd)
    except DiagramError as e:
        return {"name": name, "error": type(e).__name__, "detail": str(e)}
    try:
        if mode == "genus":
            target = TargetSpec.seifert_genus(value)
        else:
            target = TargetSpec.spanning_chi(value, d.component_count)
        budget = SearchBudget.from_target(target, node_limit=node_limit,
                                          time_limit=time_limit)
        _configs, report = enumerate_configurations(
            d, target, budget=budget, emit_surfaces=emit_surfaces, name=name
        )
    except (NotPrimeError, ValueError) as e:
        return {"name": name, "error": type(e).__name__, "detail": str(e)}
    return report.to_json_dict(mask_timing=mask)


def cmd_census(args) -> int:
    rows = _read_table(args.table)
    if (args.genus is None) == (args.chi is None):
        raise CliError(EXIT_INVALID, "choose exactly one of --genus / --chi")
    mode = "genus" if args.genus is not None else "chi"
    value = args.genus if args.genus is not None else args.chi
    done: set[str] = set()
    if args.resume and args.out and os.path.exists(args.out):
        with open(args.out) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    done.add(json.loads(line).get("name", ""))
    jobs = [
        (name, pd, mode, value, args.emit_surfaces,
         int(args.node_limit) if args.node_limit else None,
         float(args.time_limit) if args.time_limit else None,
         args.mask_timing)
        for name, pd in rows
        if name not in done
    ]
    out_fh = open(args.out, "a") if args.out else sys.stdout
    exhausted = False
    try:
        if args.threads > 1:
            with ProcessPoolExecutor(max_workers=args.threads) as pool:
                results = list(pool.map(_census_worker, jobs))
        else:
            results = [_census_worker(j) for j in jobs]
        for rec in results:
            if not rec.get("completed", True):
                exhausted = True
            out_fh.write(json.dumps(rec) + "\n")
            out_fh.flush()
    finally:
        if args.out:
            out_fh.close()
    return EXIT_BUDGET if exhausted else EXIT_OK


def cmd_render(args) -> int:
    d = _parse_diagram(args.pd)
    cfg = None
    if args.configuration:
        from .config import configuration_from_json

        try:
            with open(args.configuration) as fh:
                data = json.load(fh)
        except OSError as e:
            raise CliError(EXIT_INVALID, f"cannot read configuration: {e}")
        cfg = configuration_from_json(data, TargetSpec.spanning_chi(-1, d.component_count))
    svg = render_svg(d, cfg)
    _write(svg, args.out)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "validate": cmd_validate,
        "bound": cmd_bound,
        "enumerate": cmd_enumerate,
        "census": cmd_census,
        "render": cmd_render,
    }
    try:
        return handlers[args.command](args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
