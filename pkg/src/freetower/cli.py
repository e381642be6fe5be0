"""Command-line entry point.

Exit codes: 0 success or positive certificate, 2 inconclusive,
3 malformed input, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import forking, stallings, towers, whitehead
from .errors import InvalidFloorError, MalformedInputError
from .morphisms import compose, whitehead_minimize
from .presentations import MATCHED, VERIFIED, map_relator_check, verify_isomorphism
from .words import (
    Word,
    check_rank,
    cyclic_core,
    format_word,
    letter_key,
    letter_name,
    parse_word,
    parse_word_list,
)

EXIT_OK, EXIT_INCONCLUSIVE, EXIT_MALFORMED, EXIT_USAGE = 0, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class Command:
    verb: str
    flags: dict = field(default_factory=dict)
    output: str = "text"


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return value


def _nonnegative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be non-negative")
    return value


def _output_flag(p, choices=("text", "json", "dot")):
    p.add_argument("--output", choices=choices, default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="freetower", description="Free-group certificates for hyperbolic towers.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    for verb in ("whitehead", "cut-vertices"):
        p = sub.add_parser(verb, help="Whitehead graph of a set of words")
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--words", help="semicolon-separated words")
        src.add_argument("--file", help="file with one word per line")
        p.add_argument("--rank", type=_positive)
        _output_flag(p)

    p = sub.add_parser("fold", help="Stallings core graph of a subgroup")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--gens", help="semicolon-separated generators")
    src.add_argument("--file", help="file with one generator per line")
    p.add_argument("--rank", type=_positive)
    p.add_argument("--contains", help="word to test for membership")
    _output_flag(p)

    p = sub.add_parser("primitive", help="Whitehead length test for primitivity")
    p.add_argument("--word", required=True)
    p.add_argument("--rank", type=_positive)
    _output_flag(p, ("text", "json"))

    p = sub.add_parser("tower", help="tower presentations and their verification")
    tsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    b = tsub.add_parser("build")
    b.add_argument("family", choices=("gn", "gn-tilde"))
    b.add_argument("--n", type=_positive, required=True)
    b.add_argument("--emit", "--output", dest="output", choices=("text", "json", "dot"), default="text")
    v = tsub.add_parser("verify")
    v.add_argument("--n", type=_positive, required=True)
    _output_flag(v, ("text", "json"))

    p = sub.add_parser("fork-witness", help="non-separability certificate for {a, b_i}")
    p.add_argument("--word", required=True)
    p.add_argument("--i", type=_positive, required=True)
    p.add_argument("--dot", help="write the union Whitehead graph here")
    _output_flag(p)

    p = sub.add_parser("weight-witness", help="preweight lower-bound certificates")
    p.add_argument("--word", required=True)
    p.add_argument("--count", type=_nonnegative, required=True)
    p.add_argument("--json", dest="json_path", help="write the JSON report here")
    _output_flag(p, ("text", "json"))
    return parser


def parse_args(argv: list[str]) -> Command:
    ns = build_parser().parse_args(argv)
    flags = {k: v for k, v in vars(ns).items() if k not in ("verb", "output")}
    return Command(ns.verb, flags, ns.output)


def _read_words(flags: dict, key: str) -> list[Word]:
    if flags.get("file"):
        try:
            text = Path(flags["file"]).read_text(encoding="utf-8")
        except OSError as exc:
            raise MalformedInputError(f"cannot read {flags['file']}: {exc}") from exc
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise MalformedInputError("no words in file")
        return [parse_word(line) for line in lines]
    return parse_word_list(flags[key])


def _rank(flags: dict, words: list[Word]) -> int:
    return flags.get("rank") or max([w.max_index for w in words] + [1])


def _dump(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _run_whitehead(cmd: Command) -> tuple[int, str]:
    words = _read_words(cmd.flags, "words")
    rank = _rank(cmd.flags, words)
    verdict = whitehead.separability_obstruction(words, rank)
    g = verdict.graph
    if cmd.output == "dot":
        return EXIT_OK, g.to_dot()
    if cmd.verb == "cut-vertices":
        if cmd.output == "json":
            return EXIT_OK, _dump(
                {"cut_vertices": [letter_name(v) for v in sorted(verdict.cut_vertices, key=letter_key)]}
            )
        return EXIT_OK, whitehead.format_vertex_set(verdict.cut_vertices) + "\n"
    if cmd.output == "json":
        return EXIT_OK, _dump(verdict.to_json_dict())
    lines = [f"rank {rank}, {len(g.edges)} edges, total multiplicity {g.total_multiplicity()}"]
    for (u, v), m in g.sorted_edges():
        lines.append(f"  {letter_name(u)} -- {letter_name(v)}  [{m}]")
    lines.append(f"cut vertices: {whitehead.format_vertex_set(verdict.cut_vertices)}")
    lines.append(f"separability: {verdict.status} ({verdict.reason})")
    return EXIT_OK, "\n".join(lines) + "\n"


def _run_fold(cmd: Command) -> tuple[int, str]:
    gens = _read_words(cmd.flags, "gens")
    member = parse_word(cmd.flags["contains"]) if cmd.flags.get("contains") else None
    rank = _rank(cmd.flags, gens + ([member] if member is not None else []))
    g = stallings.core_graph(gens, rank)
    if member is not None:
        check_rank(member, rank)
    if cmd.output == "dot":
        return EXIT_OK, g.to_dot()
    data = g.to_json_dict()
    data["subgroup_rank"] = stallings.subgroup_rank(g)
    data["generates_ambient"] = stallings.is_rose(g)
    if member is not None:
        data["contains"] = {"word": format_word(member), "result": stallings.contains(g, member)}
    if cmd.output == "json":
        return EXIT_OK, _dump(data)
    lines = [stallings.describe(g), f"subgroup rank: {data['subgroup_rank']}",
             f"generates F_{rank}: {str(data['generates_ambient']).lower()}"]
    if member is not None:
        lines.append(f"contains {format_word(member)}: {str(data['contains']['result']).lower()}")
    return EXIT_OK, "\n".join(lines) + "\n"


def _run_primitive(cmd: Command) -> tuple[int, str]:
    w = parse_word(cmd.flags["word"])
    rank = _rank(cmd.flags, [w])
    if not w:
        raise MalformedInputError("the identity is not primitive")
    minimal, transcript = whitehead_minimize(cyclic_core(w), rank)
    result = len(minimal) == 1
    if cmd.output == "json":
        return EXIT_OK, _dump({
            "word": format_word(w),
            "rank": rank,
            "primitive": result,
            "minimal": format_word(minimal),
            "transcript": [m.describe() for m in transcript],
        })
    lines = [f"primitive: {str(result).lower()}", f"minimal: {format_word(minimal)}"]
    lines += [f"  {m.describe()}" for m in transcript]
    return EXIT_OK, "\n".join(lines) + "\n"


def verify_tower(n: int) -> dict:
    """Everything checkable about ``G^n`` and its torus re-presentation."""
    tower, gn = towers.build_Gn(n)
    built = towers.build_Gn_tilde(n)
    chain = []
    for i, (f, g) in enumerate(built.chain):
        report = verify_isomorphism(f, g, built.stages[i], built.stages[i + 1])
        chain.append({"i": i, "status": report.status})
    end_to_end = built.chain[0][0]
    for f, _ in built.chain[1:]:
        end_to_end = compose(f, end_to_end)
    e2e = map_relator_check(end_to_end, gn, built.presentation)
    floors = []
    for label, t in (("gn", tower), ("gn-tilde", built.tower)):
        for j, floor in enumerate(t.floors):
            rep = towers.validate_floor(floor, strict_surface_list=True)
            floors.append({"tower": label, "floor": j, **rep.to_json_dict()})
    support = [towers.w_prime_support_ok(built, j) for j in range(1, n + 1)]
    checks = {
        "chain_verified": all(c["status"] == VERIFIED for c in chain),
        "stage0_is_gn": towers.same_presentation(built.stages[0], gn),
        "tower_matches_tilde": towers.same_presentation(
            built.tower.top.reordered(built.presentation.generators), built.presentation
        ),
        "end_to_end_matched": all(m.status == MATCHED for m in e2e),
        "floors_valid": all(f["passed"] for f in floors),
        "w_prime_support": all(support),
        "generator_counts": gn.rank == 2 + 3 * n and built.presentation.rank == 3 * n + 2,
    }
    return {
        "n": n,
        "passed": all(checks.values()),
        "checks": checks,
        "chain": chain,
        "floors": floors,
        "w_primes": [built.presentation.show(w) for w in built.w_primes],
    }


def _run_tower(cmd: Command) -> tuple[int, str]:
    n = cmd.flags["n"]
    if cmd.flags["action"] == "verify":
        result = verify_tower(n)
        code = EXIT_OK if result["passed"] else EXIT_INCONCLUSIVE
        if cmd.output == "json":
            return code, _dump(result)
        lines = [f"n = {n}"]
        lines += [f"  {name}: {'ok' if ok else 'FAIL'}" for name, ok in result["checks"].items()]
        lines.append("verified" if result["passed"] else "NOT verified")
        return code, "\n".join(lines) + "\n"
    if cmd.flags["family"] == "gn":
        tower, pres = towers.build_Gn(n)
    else:
        built = towers.build_Gn_tilde(n)
        tower, pres = built.tower, built.presentation
    if cmd.output == "json":
        return EXIT_OK, pres.to_json()
    if cmd.output == "dot":
        return EXIT_OK, tower.to_dot()
    return EXIT_OK, pres.pretty() + "\n"


def _fork_code(verdict: str) -> int:
    return EXIT_INCONCLUSIVE if verdict == forking.INCONCLUSIVE else EXIT_OK


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise MalformedInputError(f"cannot write {path}: {exc}") from exc


def _run_fork(cmd: Command) -> tuple[int, str]:
    report = forking.fork_witness(parse_word(cmd.flags["word"]), cmd.flags["i"])
    if cmd.flags.get("dot"):
        _write(cmd.flags["dot"], report.graph.to_dot())
    if cmd.output == "json":
        text = _dump(report.to_json_dict())
    elif cmd.output == "dot":
        text = report.graph.to_dot()
    else:
        text = report.render_text()
    return _fork_code(report.verdict), text


def _run_weight(cmd: Command) -> tuple[int, str]:
    report = forking.weight_witness(parse_word(cmd.flags["word"]), cmd.flags["count"])
    data = _dump(report.to_json_dict())
    if cmd.flags.get("json_path"):
        _write(cmd.flags["json_path"], data)
    code = EXIT_OK if report.complete else EXIT_INCONCLUSIVE
    return code, data if cmd.output == "json" else report.render_text()


_DISPATCH = {
    "whitehead": _run_whitehead,
    "cut-vertices": _run_whitehead,
    "fold": _run_fold,
    "primitive": _run_primitive,
    "tower": _run_tower,
    "fork-witness": _run_fork,
    "weight-witness": _run_weight,
}


def run(cmd: Command) -> tuple[int, str]:
    try:
        return _DISPATCH[cmd.verb](cmd)
    except (MalformedInputError, InvalidFloorError) as exc:
        return EXIT_MALFORMED, f"error: {exc}\n"


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cmd = parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    code, text = run(cmd)
    stream = sys.stderr if code == EXIT_MALFORMED else sys.stdout
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
