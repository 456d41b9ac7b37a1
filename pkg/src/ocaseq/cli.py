"""Command-line front end.

Commands: rule-info, square, orthogonal, cycles, keystream, search,
enumerate-linear.  Results go to stdout (JSON by default, CSV via
--format csv, raw bits or packed bytes for keystream); diagnostics and
timing go to stderr.  Exit status: 0 on success, 1 on usage errors,
2 on domain errors such as a non-bipermutive rule.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time

from . import ca, dynsys, enumeration, gf2

try:  # Wolfram codes at large diameters overflow the default digit limit
    sys.set_int_max_str_digits(400_000)
except (AttributeError, ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; usage errors are 1
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit_json(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _emit_csv(rows: list[list[str]]) -> None:
    sys.stdout.write("\n".join(",".join(row) for row in rows) + "\n")


def _add_rule_args(parser: argparse.ArgumentParser, sides: str) -> None:
    parser.add_argument("--diameter", type=int, required=True,
                        help="rule diameter d (number of cells read)")
    for side in sides:
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument(f"--rule-{side}", type=int, metavar="CODE",
                           help=f"Wolfram code of rule {side}")
        group.add_argument(f"--poly-{side}", metavar="POLY",
                           help=f"rule {side} as a polynomial (hex mask or X^k+... sum)")


def _resolve_rule(args, side: str) -> ca.LocalRule:
    code = getattr(args, f"rule_{side}")
    if code is not None:
        return ca.LocalRule(args.diameter, code)
    mask = gf2.poly_parse(getattr(args, f"poly_{side}"))
    return ca.poly_to_rule(mask, args.diameter)


def _rules_orthogonal(f: ca.LocalRule, g: ca.LocalRule) -> bool:
    # strictly linear pairs go through coprimality, which has no size cap;
    # everything else is checked exhaustively
    if (ca.classify_linearity(f) == ca.LINEAR and ca.classify_linearity(g) == ca.LINEAR
            and ca.is_bipermutive(f) and ca.is_bipermutive(g)):
        return gf2.poly_gcd(ca.rule_to_poly(f), ca.rule_to_poly(g)) == 1
    return dynsys.is_oca_pair(f, g)


def _cmd_rule_info(args) -> int:
    rule = _resolve_rule(args, "f")
    linearity = ca.classify_linearity(rule)
    bipermutive = ca.is_bipermutive(rule)
    poly = None
    if linearity == ca.LINEAR and bipermutive:
        poly = gf2.poly_hex(ca.rule_to_poly(rule))
    _emit_json({
        "rule": rule.wolfram_code,
        "diameter": rule.diameter,
        "bipermutive": bipermutive,
        "linearity": linearity,
        "poly": poly,
    })
    return 0


def _cmd_square(args) -> int:
    from . import squares

    sq = squares.square_from_rule(_resolve_rule(args, "f"))
    entries = sq.entries.tolist()
    if args.format == "csv":
        _emit_csv([[str(v) for v in row] for row in entries])
    else:
        _emit_json({"order": sq.order, "entries": entries})
    return 0


def _cmd_orthogonal(args) -> int:
    f = _resolve_rule(args, "f")
    g = _resolve_rule(args, "g")
    if f.diameter != g.diameter:
        raise ValueError("diameter mismatch")
    _emit_json({"orthogonal": _rules_orthogonal(f, g)})
    return 0


def _cmd_cycles(args) -> int:
    f = _resolve_rule(args, "f")
    g = _resolve_rule(args, "g")
    decomposition = dynsys.cycle_decomposition(f, g)
    if args.format == "csv":
        rows = [["length", "count"]]
        rows += [[str(length), str(count)] for length, count in decomposition.cycles]
        _emit_csv(rows)
    else:
        _emit_json({"pairs": decomposition.to_pairs()})
    if args.plot_dir:
        from . import plots

        os.makedirs(args.plot_dir, exist_ok=True)
        path = os.path.join(args.plot_dir, f"cycles-d{args.diameter}.png")
        plots.save_cycle_length_chart(decomposition, path,
                                      title=f"Cycle decomposition, diameter {args.diameter}")
        print(f"figure written to {path}", file=sys.stderr)
    return 0


def _cmd_keystream(args) -> int:
    f = _resolve_rule(args, "f")
    g = _resolve_rule(args, "g")
    if not _rules_orthogonal(f, g):
        raise ValueError("not an OCA pair")
    width = 2 * (args.diameter - 1)
    if args.seed.lower() == "random":
        bits = random.Random(args.rng_seed).getrandbits(width)
    else:
        try:
            bits = int(args.seed, 16)
        except ValueError:
            raise ValueError(f"bad seed {args.seed!r}; give hex digits or 'random'") from None
        if not 0 <= bits < (1 << width):
            raise ValueError(f"seed wider than {width} bits")
    seed = dynsys.SystemState(args.diameter - 1, bits)
    half = "left" if args.left_half else "full"
    stream = dynsys.keystream(f, g, seed, args.length, half=half)
    if args.format == "bytes":
        sys.stdout.buffer.write(dynsys.pack_bits(stream))
        sys.stdout.buffer.flush()
    else:
        out = sys.stdout
        block: list[str] = []
        for bit in stream:
            block.append("01"[bit])
            if len(block) == 65536:
                out.write("".join(block))
                block.clear()
        out.write("".join(block) + "\n")
    return 0


def _cmd_search(args) -> int:
    started = time.perf_counter()
    report = enumeration.search_bipermutive(
        args.diameter, allow_long=args.allow_long,
        threads=args.threads, checkpoint_dir=args.checkpoint_dir)
    if args.format == "csv":
        _emit_csv(report.to_csv_rows())
    else:
        _emit_json(report.to_json_dict())
    print(f"search d={args.diameter}: {report.oca_pairs} OCA pairs, "
          f"elapsed {time.perf_counter() - started:.3f}s", file=sys.stderr)
    if args.plot_dir:
        from . import plots

        os.makedirs(args.plot_dir, exist_ok=True)
        path = os.path.join(args.plot_dir, f"search-d{args.diameter}-max-cycles.png")
        plots.save_max_cycle_histogram(report, path)
        print(f"figure written to {path}", file=sys.stderr)
    return 0


def _cmd_enumerate_linear(args) -> int:
    report = enumeration.enumerate_maximal_linear(
        args.diameter, threads=args.threads, checkpoint_dir=args.checkpoint_dir)
    if args.format == "csv":
        _emit_csv(report.to_csv_rows())
    else:
        _emit_json(report.to_json_dict())
    print(f"enumerate-linear d={args.diameter}: {report.mloca_unordered} maximal pairs, "
          f"elapsed {report.elapsed:.3f}s", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ocaseq",
                     description="Pseudorandom sequences from orthogonal cellular automata")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sub = commands.add_parser("rule-info", help="classify one local rule")
    _add_rule_args(sub, "f")
    sub.set_defaults(handler=_cmd_rule_info)

    sub = commands.add_parser("square", help="dump the Latin square of a rule")
    _add_rule_args(sub, "f")
    sub.add_argument("--format", choices=["json", "csv"], default="json")
    sub.set_defaults(handler=_cmd_square)

    sub = commands.add_parser("orthogonal", help="test a pair of rules for orthogonality")
    _add_rule_args(sub, "fg")
    sub.set_defaults(handler=_cmd_orthogonal)

    sub = commands.add_parser("cycles", help="full cycle decomposition of a pair")
    _add_rule_args(sub, "fg")
    sub.add_argument("--format", choices=["json", "csv"], default="json")
    sub.add_argument("--plot-dir", metavar="DIR",
                     help="also render the decomposition as a figure in DIR")
    sub.set_defaults(handler=_cmd_cycles)

    sub = commands.add_parser("keystream", help="emit the bit stream of a pair")
    _add_rule_args(sub, "fg")
    sub.add_argument("--seed", required=True, metavar="HEX",
                     help="2n-bit seed state in hex, or 'random'")
    sub.add_argument("--rng-seed", type=int, metavar="N",
                     help="seed for --seed random, for reproducibility")
    sub.add_argument("--length", type=int, required=True, metavar="STEPS",
                     help="number of update steps to emit")
    sub.add_argument("--left-half", action="store_true",
                     help="emit only the first rule's half of each state")
    sub.add_argument("--format", choices=["bits", "bytes"], default="bits")
    sub.set_defaults(handler=_cmd_keystream)

    sub = commands.add_parser("search", help="exhaustive bipermutive pair search")
    sub.add_argument("--diameter", type=int, required=True)
    sub.add_argument("--allow-long", action="store_true",
                     help="confirm the multi-hour diameter-6 run")
    sub.add_argument("--threads", type=int, default=1)
    sub.add_argument("--checkpoint-dir", metavar="DIR")
    sub.add_argument("--format", choices=["json", "csv"], default="json")
    sub.add_argument("--plot-dir", metavar="DIR",
                     help="also render the max-cycle histogram in DIR")
    sub.set_defaults(handler=_cmd_search)

    sub = commands.add_parser("enumerate-linear",
                              help="enumerate maximal-order linear pairs")
    sub.add_argument("--diameter", type=int, required=True)
    sub.add_argument("--threads", type=int, default=1)
    sub.add_argument("--checkpoint-dir", metavar="DIR")
    sub.add_argument("--format", choices=["json", "csv"], default="json")
    sub.set_defaults(handler=_cmd_enumerate_linear)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 1
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # the consumer went away mid-stream; silence the shutdown flush too
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())
