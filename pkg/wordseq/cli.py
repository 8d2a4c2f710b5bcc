import argparse
import os
import sys

import pandas as pd

from config_utils import FORMATS, resolve_settings
from wordseq import reports
from wordseq.checks import run_all
from wordseq.dyadic import parse_dyadic
from wordseq.graph_system import InverseSystem, SystemDefinitionError, dump_system, read_system_file
from wordseq.group_ops import (
    GroupElement,
    act,
    difference_word,
    essential_multiplicity,
    inverse,
    make_element,
    multiply,
)
from wordseq.limit_ops import (
    AmbiguousNeighborError,
    CoherenceError,
    CompletionResult,
    DepthError,
    SequenceKind,
    WordSequence,
    cap_prefix_violations,
    coherence_violations,
    complete,
    load_sequence,
    parse_sequence,
    project,
    project_sequence,
    reduce_sequence,
    sequence_to_json,
    stabilize,
    stable_initial_match,
)
from wordseq.metric import rho, sequence_length, tree_ball
from wordseq.spaces import BUILTIN_SPACES, builtin
from wordseq.word_calculus import WordError, check_word, parse_word, reduce, to_json


"""
Command-line front end: `python -m wordseq.cli <command> ...`.

Results go to stdout in the chosen --format. Diagnostics go to stderr:
`LEVEL n:` lines for invalid systems and sequences, `Warn:` for things
that were skipped, `Error:` for everything else.

Exit status: 0 success, 1 validation or coherence failure, 2 usage error.
"""

DOMAIN_ERRORS = (SystemDefinitionError, WordError, CoherenceError, AmbiguousNeighborError, DepthError)
KINDS = {"coherent": SequenceKind.COHERENT, "reduced": SequenceKind.REDUCED}


class UsageError(Exception):
    """Bad arguments that argparse itself cannot catch."""


# --- Inputs ----------------------------------------------------------------


def load_system_arg(args, settings) -> InverseSystem:
    """--system is a definition file when the path exists, else a builtin name."""
    if not args.system:
        raise UsageError("--system is required")
    if os.path.exists(args.system):
        return read_system_file(args.system)
    if args.system not in BUILTIN_SPACES and args.system != "figure2":
        raise UsageError(f"{args.system!r} is neither a file nor one of {', '.join(BUILTIN_SPACES)}")
    try:
        return builtin(args.system, settings["depth"], args.subdiv)
    except ValueError as e:
        raise UsageError(str(e)) from None


def read_sequence(system: InverseSystem, path: str, kind: SequenceKind = SequenceKind.COHERENT) -> WordSequence:
    with open(path, encoding="utf-8") as f:
        return load_sequence(system, f.read(), kind)


def read_element(system: InverseSystem, path: str, window: int) -> GroupElement:
    return make_element(read_sequence(system, path), window)


def inline_word(system: InverseSystem, level: int, text: str):
    return check_word(system, parse_word(level, text))


# --- Output ----------------------------------------------------------------


def emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def emit_csv(df: pd.DataFrame) -> None:
    df.to_csv(sys.stdout, index=False)


def unsupported(command: str, fmt: str) -> UsageError:
    return UsageError(f"--format {fmt} is not available for {command}")


def emit_sequence(seq: WordSequence, fmt: str, command: str) -> None:
    if fmt == "text":
        emit(str(seq))
    elif fmt == "json":
        emit(reports.dumps(sequence_to_json(seq)))
    else:
        raise unsupported(command, fmt)


def emit_completion(result: CompletionResult, fmt: str, command: str) -> None:
    if fmt == "json":
        emit(reports.dumps(reports.completion_json(result)))
    elif fmt == "csv":
        emit_csv(reports.trust_table(result))
    elif fmt == "text":
        emit(str(result.sequence))
        emit(f"confirmed through level {result.confirmed_depth}, coherent through level {result.coherent_depth}")
        for t in result.trust:
            if t.anomaly:
                print(f"Warn: level {t.level}: completion ending did not match a known pattern", file=sys.stderr)
    else:
        raise unsupported(command, fmt)


def emit_element(element: GroupElement, fmt: str, command: str) -> None:
    if fmt == "json":
        emit(reports.dumps(reports.element_json(element)))
    elif fmt == "text":
        emit(str(element.sequence))
        emit(f"verdict: {element.verdict}")
    else:
        raise unsupported(command, fmt)


# --- Commands --------------------------------------------------------------


def cmd_validate(args, settings) -> int:
    system = load_system_arg(args, settings)
    problems = []
    for path in args.sequences:
        with open(path, encoding="utf-8") as f:
            words = parse_sequence(f.read())
        if len(words) > system.depth:
            errors = [f"{len(words)} levels given, system {system.name!r} has {system.depth}"]
        else:
            errors = coherence_violations(system, words, KINDS[args.kind])
        problems.append((path, errors))
    failed = any(errors for _, errors in problems)
    for path, errors in problems:
        for message in errors:
            print(f"{path}: {message}", file=sys.stderr)
    if settings["format"] == "json":
        emit(
            reports.dumps(
                {
                    "system": system.name,
                    "depth": system.depth,
                    "sequences": [{"path": p, "valid": not e, "errors": e} for p, e in problems],
                }
            )
        )
    else:
        emit(f"ok: system {system.name} with {system.depth} levels")
        for path, errors in problems:
            emit(f"{'ok' if not errors else 'invalid'}: {path}")
    return 1 if failed else 0


def cmd_space_gen(args, settings) -> int:
    try:
        system = builtin(args.name, settings["depth"], args.subdiv)
    except (KeyError, ValueError) as e:
        raise UsageError(str(e.args[0])) from None
    fmt = settings["format"]
    if fmt == "json":
        emit(reports.dumps(reports.system_json(system)))
    elif fmt == "text":
        emit(dump_system(system))
    else:
        raise unsupported("space gen", fmt)
    return 0


def cmd_project(args, settings) -> int:
    system = load_system_arg(args, settings)
    w = inline_word(system, args.level, args.word)
    fmt = settings["format"]
    if args.to is None:
        emit_sequence(project_sequence(system, w), fmt, "project")
        return 0
    image = project(system, args.to, w)
    if fmt == "json":
        emit(reports.dumps(to_json(image)))
    elif fmt == "text":
        emit(str(image))
    else:
        raise unsupported("project", fmt)
    return 0


def cmd_reduce(args, settings) -> int:
    system = load_system_arg(args, settings)
    fmt = settings["format"]
    if args.level is None:
        emit_sequence(reduce_sequence(read_sequence(system, args.target)), fmt, "reduce")
        return 0
    normal = reduce(inline_word(system, args.level, args.target))
    if fmt == "json":
        emit(reports.dumps(to_json(normal)))
    elif fmt == "text":
        emit(str(normal))
    else:
        raise unsupported("reduce", fmt)
    return 0


def cmd_stabilize(args, settings) -> int:
    system = load_system_arg(args, settings)
    seq = read_sequence(system, args.sequence, SequenceKind.REDUCED)
    stabilized, verdict = stabilize(seq, settings["window"])
    fmt = settings["format"]
    if fmt == "json":
        emit(reports.dumps({"sequence": sequence_to_json(stabilized), **reports.verdict_json(verdict)}))
    elif fmt == "csv":
        emit_csv(reports.constancy_table(verdict))
    elif fmt == "text":
        emit(str(stabilized))
        emit(f"verdict: {verdict}")
    else:
        raise unsupported("stabilize", fmt)
    return 0


def cmd_complete(args, settings) -> int:
    system = load_system_arg(args, settings)
    emit_completion(complete(read_sequence(system, args.sequence)), settings["format"], "complete")
    return 0


def cmd_match(args, settings) -> int:
    system = load_system_arg(args, settings)
    a, b = read_sequence(system, args.first), read_sequence(system, args.second)
    for problem in cap_prefix_violations(a, b):
        print(f"Warn: {problem}", file=sys.stderr)
    emit_sequence(stable_initial_match(a, b), settings["format"], "match")
    return 0


def cmd_length(args, settings) -> int:
    system = load_system_arg(args, settings)
    bound = sequence_length(read_sequence(system, args.sequence))
    fmt = settings["format"]
    if fmt == "json":
        emit(reports.dumps(reports.bound_json(bound)))
    elif fmt == "csv":
        emit_csv(pd.DataFrame([reports.bound_json(bound)]))
    elif fmt == "text":
        emit(str(bound))
    else:
        raise unsupported("length", fmt)
    return 0


def cmd_distance(args, settings) -> int:
    system = load_system_arg(args, settings)
    a, b = read_sequence(system, args.first), read_sequence(system, args.second)
    interval = rho(a, b, completed=args.completed)
    fmt = settings["format"]
    if fmt == "json":
        emit(reports.dumps(reports.rho_json(interval)))
    elif fmt == "text":
        emit(f"{interval} {interval.verdict}")
    else:
        raise unsupported("distance", fmt)
    return 0


def cmd_multiply(args, settings) -> int:
    system = load_system_arg(args, settings)
    window = settings["window"]
    a, b = read_element(system, args.first, window), read_element(system, args.second, window)
    emit_element(multiply(a, b, window), settings["format"], "multiply")
    return 0


def cmd_invert(args, settings) -> int:
    system = load_system_arg(args, settings)
    window = settings["window"]
    emit_element(inverse(read_element(system, args.element, window), window), settings["format"], "invert")
    return 0


def cmd_difference(args, settings) -> int:
    system = load_system_arg(args, settings)
    window = settings["window"]
    a, b = read_element(system, args.first, window), read_element(system, args.second, window)
    emit_completion(difference_word(a, b, window), settings["format"], "difference")
    return 0


def cmd_act(args, settings) -> int:
    system = load_system_arg(args, settings)
    window = settings["window"]
    g = read_element(system, args.element, window)
    seq, verdict = act(g, read_sequence(system, args.point), window)
    fmt = settings["format"]
    if fmt == "json":
        emit(reports.dumps({"sequence": sequence_to_json(seq), **reports.verdict_json(verdict)}))
    elif fmt == "text":
        emit(str(seq))
        emit(f"verdict: {verdict}")
    else:
        raise unsupported("act", fmt)
    return 0


def cmd_multiplicity(args, settings) -> int:
    system = load_system_arg(args, settings)
    upto = args.upto or system.depth
    fmt = settings["format"]
    if args.vertex is None:
        table = reports.multiplicity_table(system, args.level, upto)
        if fmt == "json":
            emit(reports.dumps(table.to_dict(orient="records")))
        elif fmt in ("csv", "text"):
            emit_csv(table)
        else:
            raise unsupported("multiplicity", fmt)
        return 0
    report = essential_multiplicity(system, args.level, args.vertex, upto)
    if fmt == "json":
        emit(reports.dumps(reports.multiplicity_json(report)))
    elif fmt == "text":
        for k, c in report.counts:
            emit(f"c_{k}({report.vertex}) = {c}")
        if not report.monotone:
            print(f"Warn: counts for {report.vertex} decrease somewhere", file=sys.stderr)
    else:
        raise unsupported("multiplicity", fmt)
    return 0


def cmd_tree_export(args, settings) -> int:
    system = load_system_arg(args, settings)
    max_len = parse_dyadic(args.max_len) if args.max_len else None
    ball = tree_ball(system, args.level, max_len, settings["node_budget"])
    if ball.partial:
        print(f"Warn: node budget of {settings['node_budget']} reached; tree is partial", file=sys.stderr)
    fmt = settings["format"]
    if fmt == "json":
        emit(reports.dumps(reports.tree_json(ball)))
    elif fmt in ("dot", "text"):
        emit(reports.tree_dot(ball))
    else:
        raise unsupported("tree export", fmt)
    return 0


def cmd_check(args, settings) -> int:
    results = run_all(settings["seed"], settings["samples"], settings["depth"], settings["window"])
    if args.only:
        results = [r for r in results if args.only in r.name]
        if not results:
            raise UsageError(f"no check matches {args.only!r}")
    fmt = settings["format"]
    if fmt == "json":
        emit(reports.dumps(reports.check_table(results).to_dict(orient="records")))
    elif fmt == "csv":
        emit_csv(reports.check_table(results))
    elif fmt == "text":
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            emit(f"{status} {r.name} [{r.fixture}] {r.cases} cases")
            for message in r.failures[:3]:
                emit(f"    {message}")
    else:
        raise unsupported("check", fmt)
    return 0 if all(r.passed for r in results) else 1


# --- Parser ----------------------------------------------------------------


def common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", help="system-definition file or builtin name")
    common.add_argument("--depth", type=int, help="levels to build for a builtin space")
    common.add_argument("--subdiv", type=int, default=2, help="edge subdivision of the builtin interval")
    common.add_argument("--window", type=int, help="stability window")
    common.add_argument("--format", choices=FORMATS, help="output format")
    common.add_argument("--seed", type=int, help="seed for the check suites")
    common.add_argument("--node-budget", type=int, help="node cap for tree export")
    common.add_argument("--samples", type=int, help="samples per check suite")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = common_flags()
    parser = argparse.ArgumentParser(prog="wordseq", description="Word-sequence calculus for one-dimensional spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate a system and optional sequence files")
    p.add_argument("sequences", nargs="*")
    p.add_argument("--kind", choices=sorted(KINDS), default="coherent")
    p.set_defaults(func=cmd_validate)

    space = sub.add_parser("space", help="builtin spaces")
    space_sub = space.add_subparsers(dest="space_command", required=True)
    p = space_sub.add_parser("gen", parents=[common], help="print a builtin system definition")
    p.add_argument("name", choices=BUILTIN_SPACES)
    p.set_defaults(func=cmd_space_gen)

    p = sub.add_parser("project", parents=[common], help="project a word to lower levels")
    p.add_argument("--level", type=int, required=True, help="level of the given word")
    p.add_argument("--to", type=int, help="target level; default prints every level")
    p.add_argument("word")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("reduce", parents=[common], help="reduce a word or a sequence file")
    p.add_argument("--level", type=int, help="treat TARGET as an inline word at this level")
    p.add_argument("target")
    p.set_defaults(func=cmd_reduce)

    for name, func, help_text in (
        ("stabilize", cmd_stabilize, "stabilize a reduced sequence"),
        ("complete", cmd_complete, "complete a coherent sequence"),
        ("length", cmd_length, "dyadic length interval of a sequence"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("sequence")
        p.set_defaults(func=func)

    for name, func, help_text in (
        ("match", cmd_match, "stable initial match of two sequences"),
        ("distance", cmd_distance, "rho interval between two sequences"),
        ("multiply", cmd_multiply, "product of two returning sequences"),
        ("difference", cmd_difference, "completed arc from the first element to the second"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("first")
        p.add_argument("second")
        p.set_defaults(func=func)
    sub.choices["distance"].add_argument("--completed", action="store_true", help="inputs are already completed")

    p = sub.add_parser("invert", parents=[common], help="inverse of a returning sequence")
    p.add_argument("element")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("act", parents=[common], help="act on a based sequence by a group element")
    p.add_argument("element")
    p.add_argument("point")
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("multiplicity", parents=[common], help="essential multiplicity counts")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--vertex", help="one vertex; default tabulates the whole level")
    p.add_argument("--upto", type=int, help="deepest level k; default is the system depth")
    p.set_defaults(func=cmd_multiplicity)

    tree = sub.add_parser("tree", help="covering tree")
    tree_sub = tree.add_subparsers(dest="tree_command", required=True)
    p = tree_sub.add_parser("export", parents=[common], help="export a ball of the covering tree")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--max-len", help="radius as p/2^e")
    p.set_defaults(func=cmd_tree_export)

    p = sub.add_parser("check", parents=[common], help="run the invariant suites")
    p.add_argument("--only", help="keep checks whose name contains this text")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    settings = resolve_settings(
        {
            "window": args.window,
            "node_budget": args.node_budget,
            "seed": args.seed,
            "samples": args.samples,
            "depth": args.depth,
            "format": args.format,
        }
    )
    try:
        return args.func(args, settings)
    except UsageError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    except SystemDefinitionError as e:
        for message in e.errors:
            print(message if message.startswith("LEVEL") else f"Error: {message}", file=sys.stderr)
        return 1
    except DOMAIN_ERRORS as e:
        message = str(e)
        print(message if message.startswith("LEVEL") else f"Error: {message}", file=sys.stderr)
        return 1
    except KeyError as e:
        print(f"Error: {e.args[0]}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
