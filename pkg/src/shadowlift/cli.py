"""Command-line interface: ``shadowlift <command> ...``.

Exit codes: 0 success (or LIFTABLE), 3 UNLIFTABLE, 1 input or replay error,
2 usage error.  Input files default to standard input, also spelled ``-``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .builtin import fig1_system, paper_example_ledger, paper_example_text
from .constraints import constraint_to_json
from .diagram import ShadowDiagram, format_diagram, parse_diagram
from .errors import ShadowError
from .export import to_dot, to_svg
from .movie import (
    Movie,
    check_liftability,
    descending_resolution,
    is_movie_text,
    parse_movie,
    serialize_movie,
)
from .moves import enumerate_moves, format_move
from .search import DEFAULT_WEIGHTS, SearchConfig, search, shrink, write_results
from .solver import solve

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_UNLIFTABLE = 0, 1, 2, 3


class CliError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_movie(path: str) -> Movie:
    text = _read(path)
    try:
        if is_movie_text(text):
            return parse_movie(text)
        return Movie(parse_diagram(text))
    except ShadowError as exc:
        raise CliError(f"{path}: {exc}") from None


def _load_diagram(path: str) -> ShadowDiagram:
    return _load_movie(path).final


def _names(arg: str | None) -> dict | None:
    if not arg:
        return None
    out = {}
    for item in arg.split(","):
        key, _, value = item.partition("=")
        out[int(key)] = value
    return out


def _parse_weights(arg: str | None) -> dict:
    weights = dict(DEFAULT_WEIGHTS)
    if not arg:
        return weights
    for item in arg.split(","):
        key, sep, value = item.partition("=")
        if not sep:
            raise CliError(f"bad weight {item!r}, expected KIND=VALUE")
        weights[key.strip()] = float(value)
    return weights


# -- commands -------------------------------------------------------------

def cmd_validate(args) -> int:
    text = _read(args.file)
    try:
        if is_movie_text(text):
            m = parse_movie(text)
            d = m.final
            print(f"movie: {len(m)} steps, {len(m.variables())} crossing ids")
            print(f"final: V={d.n_crossings} E={d.n_edges} F={d.n_faces}")
        else:
            d = parse_diagram(text)
            print(f"diagram: V={d.n_crossings} E={d.n_edges} F={d.n_faces}")
    except ShadowError as exc:
        raise CliError(f"{args.file}: {exc}") from None
    return EXIT_OK


def cmd_enumerate(args) -> int:
    d = _load_diagram(args.file)
    for m in enumerate_moves(d):
        print(format_move(m))
    return EXIT_OK


def cmd_apply(args) -> int:
    m = _load_movie(args.file)
    _write(args.out, format_diagram(m.final))
    return EXIT_OK


def cmd_check_lift(args) -> int:
    m = _load_movie(args.file)
    report = check_liftability(m)
    names = _names(args.names)
    if args.json:
        print(json.dumps(report.to_json(names), indent=2))
    else:
        print(report.verdict)
        if report.conflict_step is not None:
            print(f"conflict at step {report.conflict_step}: "
                  f"{format_move(m.steps[report.conflict_step])}")
        for line in report.ledger(names):
            print(line)
    return EXIT_OK if report.liftable else EXIT_UNLIFTABLE


def cmd_lift(args) -> int:
    m = _load_movie(args.file)
    report = check_liftability(m)
    if not report.liftable:
        print(f"UNLIFTABLE: no lift exists (conflict at step {report.conflict_step})",
              file=sys.stderr)
        return EXIT_UNLIFTABLE
    frames = report.witness.to_json()
    if args.json:
        print(json.dumps(frames, indent=2))
    else:
        for f in frames:
            head = f"frame {f['frame']}" + (f" after {f['move']}" if "move" in f else "")
            signs = " ".join(f"{c}:{'+' if s > 0 else '-'}" for c, s in f["signs"].items())
            print(f"{head}\n  code: {f['code']}\n  signs: {signs or '(none)'}")
    return EXIT_OK


def cmd_resolve(args) -> int:
    d = _load_diagram(args.file)
    try:
        signs = descending_resolution(d, args.basepoint)
    except ShadowError as exc:
        raise CliError(str(exc)) from None
    for c, s in sorted(signs.items()):
        print(f"{c} {'+' if s > 0 else '-'}")
    return EXIT_OK


def _run_walker(cfg: SearchConfig):
    return search(cfg)


def cmd_search(args) -> int:
    weights = _parse_weights(args.weights)
    try:
        configs = [SearchConfig(seed=args.seed + k, max_steps=args.steps,
                                max_crossings=args.max_crossings, weights=weights,
                                stop_at_first=args.stop_at_first,
                                episode_length=args.episode_length)
                   for k in range(args.walkers)]
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if args.jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_walker, configs))
    else:
        results = [search(cfg) for cfg in configs]
    total = 0
    for result in results:
        write_results(result, args.out_dir)
        total += len(result.finds)
        s = result.summary()
        print(f"seed {s['seed']}: {s['finds']} unliftable movies in "
              f"{s['steps_explored']} steps ({s['wall_time']:.2f}s)")
    print(f"total finds: {total}")
    return EXIT_OK


def cmd_shrink(args) -> int:
    m = _load_movie(args.file)
    try:
        small = shrink(m)
    except ShadowError as exc:
        raise CliError(f"{args.file}: {exc}") from None
    print(f"{len(m)} -> {len(small)} steps", file=sys.stderr)
    _write(args.out, serialize_movie(small))
    return EXIT_OK


def cmd_paper_example(args) -> int:
    ledger = paper_example_ledger()
    if args.out:
        Path(args.out).write_text(paper_example_text())
        print("\n".join(ledger))
    else:
        sys.stdout.write(paper_example_text())
        sys.stdout.write("".join(f"# {line}\n" for line in ledger))
    return EXIT_OK


def cmd_fig1(args) -> int:
    system = fig1_system()
    result = solve(system)
    verdict = "SAT" if result.satisfiable else "UNSAT"
    payload = {
        "variables": list(system.variables),
        "constraints": [constraint_to_json(c, step) for step, c in system.constraints],
        "verdict": verdict,
    }
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    else:
        print(json.dumps(payload, indent=2))
    print(verdict, file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_export(args) -> int:
    m = _load_movie(args.file)
    if not 0 <= args.step < len(m.frames):
        raise CliError(f"step {args.step} out of range (movie has frames 0..{len(m.frames) - 1})")
    d = m.frames[args.step]
    signs = None
    if args.signs:
        report = check_liftability(m)
        if report.liftable:
            signs = {c: report.witness_signs[c] for c in d.positions}
    text = to_dot(d, signs=signs) if args.format == "dot" else to_svg(d, signs=signs)
    _write(args.out, text)
    return EXIT_OK


# -- wiring ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shadowlift",
                                     description="Shadow movies and their classical lifts.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a diagram or movie file")
    p.add_argument("file", nargs="?", default="-")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("enumerate-moves", help="list applicable move sites")
    p.add_argument("file", nargs="?", default="-", help="diagram, or movie (its final frame)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("apply", help="replay a movie and write its final diagram")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("check-lift", help="decide liftability (exit 3 if unliftable)")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--json", action="store_true")
    p.add_argument("--names", help="sign names, e.g. 0=-a,1=a")
    p.set_defaults(func=cmd_check_lift)

    p = sub.add_parser("lift", help="print a signed classical movie")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("resolve", help="descending resolution from a basepoint dart")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--basepoint", type=int, default=0)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("search", help="random-walk search for unliftable movies")
    p.add_argument("--seed", type=int, default=int(os.environ.get("SHADOWLIFT_SEED", "0")))
    p.add_argument("--steps", type=int, default=100_000)
    p.add_argument("--max-crossings", type=int, default=8)
    p.add_argument("--weights", help="e.g. R2+=3,R3=4,R1+=0")
    p.add_argument("--episode-length", type=int, default=60)
    p.add_argument("--stop-at-first", action="store_true")
    p.add_argument("--walkers", type=int, default=1, help="seeds SEED..SEED+WALKERS-1")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--out-dir", default="finds")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("shrink", help="minimize an unliftable movie")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--out")
    p.set_defaults(func=cmd_shrink)

    p = sub.add_parser("paper-example", help="the built-in unliftable movie and its ledger")
    p.add_argument("--out", help="write the movie here and print the ledger")
    p.set_defaults(func=cmd_paper_example)

    p = sub.add_parser("fig1", help="three mutually opposite signs: an UNSAT instance")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("export", help="draw one frame as DOT or SVG")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--step", type=int, default=0, help="frame index (0 = initial)")
    p.add_argument("--format", choices=("dot", "svg"), default="dot")
    p.add_argument("--signs", action="store_true", help="label crossings with witness signs")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"shadowlift: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ShadowError as exc:
        print(f"shadowlift: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
