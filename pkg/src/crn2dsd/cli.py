"""Command-line interface.

Commands: ``compile``, ``check``, ``simulate``, ``export-dot``.

Exit codes:
  0  success (for ``check``: no spurious interactions)
  2  compile rejection: ordering violation, unrepairable ordering, arity,
     or an inapplicable sabotage request (diagnostics on stderr)
  3  parse error
  4  ``check`` found spurious interactions
  5  unreachable simulation stop condition

The ``--sabotage`` modes deliberately break exactly one design rule after
normal validation, to reproduce the failure each rule prevents:
``share-linker-toehold`` gives two reactions with the same final reactant
one linker toehold, ``linker-equals-t`` sets a linker toehold equal to the
universal toehold, and ``swap-order`` flips the first two reactants of a
termolecular reaction so that buffer identities collide.
"""

from __future__ import annotations

import argparse
import sys as _sys

from .analyzer import AnalysisOptions, enumerate_interactions, explain
from .compiler import (CompileError, CompileOptions, SabotageError,
                       allocate_toeholds, build_system, check_fanin_bound,
                       compile_crn, sabotage_linker_equals_t,
                       sabotage_share_linker_toehold, sabotage_swap_order)
from .crn import ParseError, parse_crn
from .export import (report_to_dict, system_to_dict, system_to_dot, to_json,
                     trajectory_to_text)
from .sim import (SimOptions, StopCondition, build_ssa_network, in_flight,
                  map_state, run_trajectories, simulate)

EXIT_OK = 0
EXIT_COMPILE = 2
EXIT_PARSE = 3
EXIT_SPURIOUS = 4
EXIT_STOP = 5


def _err(msg: str) -> None:
    print(msg, file=_sys.stderr)


def _parse_init(text: str) -> dict[str, int]:
    out: dict[str, int] = {}
    if not text:
        return out
    for part in text.split(","):
        name, _, value = part.partition("=")
        name = name.strip()
        if not name or not value.strip().lstrip("-").isdigit():
            raise ValueError(f"bad --init entry {part!r}; expected NAME=COUNT")
        out[name] = int(value)
    return out


def _parse_rates(entries: list[str]) -> dict[str, float]:
    out: dict[str, float] = {}
    for entry in entries:
        name, _, value = entry.partition("=")
        try:
            out[name.strip()] = float(value)
        except ValueError as exc:
            raise ValueError(f"bad --rate entry {entry!r}; expected EVENT=RATE") from exc
    return out


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as handle:
            handle.write(text)
    else:
        _sys.stdout.write(text)


def _build(args) -> "DsdSystem":
    with open(args.input) as handle:
        crn = parse_crn(handle.read())
    opts = CompileOptions(fix_order=args.fix_order, fuel_count=args.fuel_count,
                          initial=_parse_init(getattr(args, "init", "") or ""))
    sabotage = getattr(args, "sabotage", None)
    if sabotage == "swap-order":
        swapped = sabotage_swap_order(crn)
        return build_system(swapped, allocate_toeholds(swapped), opts)
    system = compile_crn(crn, opts)
    if sabotage == "share-linker-toehold":
        asg = sabotage_share_linker_toehold(system.crn, system.assignment)
        return build_system(system.crn, asg, opts)
    if sabotage == "linker-equals-t":
        asg = sabotage_linker_equals_t(system.crn, system.assignment)
        return build_system(system.crn, asg, opts)
    return system


def cmd_compile(args) -> int:
    system = _build(args)
    for species, size in check_fanin_bound(system.crn):
        _err(f"warning: {size} reactions share final reactant {species} "
             f"(more than the expected worst case of 3)")
    _write(to_json(system_to_dict(system)), args.output)
    return EXIT_OK


def cmd_check(args) -> int:
    system = _build(args)
    report = enumerate_interactions(
        system, AnalysisOptions(gc_assumed=(args.gc == "assumed")))
    _sys.stdout.write(explain(report))
    if args.output:
        _write(to_json(report_to_dict(report)), args.output)
    return EXIT_OK if report.spurious_count == 0 else EXIT_SPURIOUS


def cmd_simulate(args) -> int:
    system = _build(args)
    sim_opts = SimOptions(gc_assumed=(args.gc == "assumed"),
                          include_spurious=args.include_spurious,
                          rates=_parse_rates(args.rate))
    network = build_ssa_network(system, sim_opts)
    stop = StopCondition(max_steps=args.max_steps, max_time=args.max_time)
    try:
        stop.validate()
    except ValueError as exc:
        _err(f"error: {exc}")
        return EXIT_STOP
    chunks = []
    if args.trajectories > 1:
        runs = run_trajectories(network, system.initial_counts, args.seed,
                                args.trajectories, stop)
    else:
        runs = [simulate(network, system.initial_counts, args.seed, stop)]
    for i, traj in enumerate(runs):
        if len(runs) > 1:
            chunks.append(f"# trajectory {i}\n")
        chunks.append(trajectory_to_text(traj, map_state(system, traj.final),
                                         in_flight(system, traj.final)))
    _write("".join(chunks), args.output)
    return EXIT_OK


def cmd_export_dot(args) -> int:
    system = _build(args)
    _write(system_to_dot(system), args.output)
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser, *, sabotage: bool = True) -> None:
    p.add_argument("input", help="CRN source file")
    p.add_argument("--fix-order", action="store_true",
                   help="repair reactant ordering by swapping first/second "
                        "reactants of termolecular reactions")
    p.add_argument("--fuel-count", type=int, default=100, metavar="N",
                   help="initial count of every gate and fuel (default 100)")
    p.add_argument("-o", "--output", default=None, metavar="PATH",
                   help="write the result here instead of stdout")
    if sabotage:
        p.add_argument("--sabotage", default=None,
                       choices=["share-linker-toehold", "linker-equals-t",
                                "swap-order"],
                       help="break exactly one design rule to reproduce the "
                            "failure it prevents")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crn2dsd",
        description="Compile CRNs to strand-displacement systems, check them "
                    "for crosstalk, and simulate them stochastically.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile and export the system")
    _add_common(p)
    p.add_argument("--init", default="", metavar="A=10,B=5",
                   help="initial species-strand counts")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("check", help="compile and enumerate crosstalk")
    _add_common(p)
    p.add_argument("--gc", choices=["assumed", "off"], default="assumed",
                   help="treat collected buffers as removed (assumed, "
                        "default) or circulating (off)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("simulate", help="compile and run stochastic trajectories")
    _add_common(p)
    p.add_argument("--init", default="", metavar="A=10,B=5",
                   help="initial species-strand counts")
    p.add_argument("--seed", type=int, default=0, metavar="N")
    p.add_argument("--max-steps", type=int, default=None, metavar="N")
    p.add_argument("--max-time", type=float, default=None, metavar="T")
    p.add_argument("--quiescence", action="store_true",
                   help="run to quiescence (the default stop condition)")
    p.add_argument("--gc", choices=["assumed", "off"], default="assumed")
    p.add_argument("--include-spurious", action="store_true",
                   help="add the analyzer's spurious channels to the network")
    p.add_argument("--trajectories", type=int, default=1, metavar="N",
                   help="independent runs with seeds split from --seed")
    p.add_argument("--rate", action="append", default=[], metavar="EVENT=RATE",
                   help="override the unit rate of one event (repeatable)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("export-dot", help="render gate complexes as a graph")
    _add_common(p, sabotage=False)
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        _err(f"parse error: {exc}")
        return EXIT_PARSE
    except CompileError as exc:
        _err(f"compile error: {exc}")
        if exc.violations:
            for v in exc.violations:
                _err(f"  {v}")
        return EXIT_COMPILE
    except SabotageError as exc:
        _err(f"sabotage not applicable: {exc}")
        return EXIT_COMPILE
    except (ValueError, OSError) as exc:
        _err(f"error: {exc}")
        return EXIT_COMPILE


if __name__ == "__main__":
    raise SystemExit(main())
