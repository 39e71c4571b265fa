"""Batch front end: runs constructions and verification suites for a given
(p, r), emits delimited reports plus a PNG summary, and evaluates element
expressions to PBW normal form.

Exit codes: 0 all checks pass, 1 verification failure, 2 usage/config error.
Two runs with the same configuration (including seed) produce byte-identical
report files; the output path is deliberately excluded from the config echo.
"""

import argparse
import dataclasses
import sys

from .idempotents import b_r, mu, validate_pair
from .pbw import AlgebraContext, format_element
from .report import report_dict, to_csv_bytes, to_json_bytes, write_report
from .scalars import is_prime
from .structure import format_label
from .verify import SUITES, run_suites, suite_unity


@dataclasses.dataclass
class RunConfig:
    p: int
    r: int = 1
    labels: tuple = None
    suites: tuple = SUITES
    out_format: str = "json"
    out_path: str = None
    parallelism: int = 1
    seed: int = 0

    def validate(self):
        if not is_prime(self.p):
            raise ValueError(f"p must be a prime, got {self.p}")
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if self.parallelism < 1:
            raise ValueError(f"jobs must be >= 1, got {self.parallelism}")
        if self.out_format not in ("json", "csv"):
            raise ValueError(f"format must be json or csv, got {self.out_format}")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ValueError(f"unknown suite(s) {unknown}; choose from {SUITES}")
        return self


def _parse_pair(text, p):
    """One "a,j" slot; half-integer j is written n/2 (so "0,1/2" at p=2)."""
    a_text, comma, j_text = text.partition(",")
    if not comma:
        raise ValueError(f"label slot {text!r} needs the form a,j")
    a = int(a_text)
    j_text = j_text.strip()
    if j_text.endswith("/2"):
        j2 = int(j_text[:-2])
    else:
        j2 = 2 * int(j_text)
    return validate_pair((a, j2), p)


def parse_label(text, p, r):
    """An r-slot label "a,j;a,j;..."; slot i drives level i of the tower."""
    parts = text.split(";")
    if len(parts) != r:
        raise ValueError(f"label {text!r} needs {r} slot(s), got {len(parts)}")
    return tuple(_parse_pair(part, p) for part in parts)


class ExprError(ValueError):
    """Parse failure with the 0-based offset of the offending character."""

    def __init__(self, pos, message):
        super().__init__(f"parse error at position {pos}: {message}")
        self.pos = pos


class _ExprParser:
    """Recursive descent for: expr := term (+ term)*, term := atom (* atom)*,
    atom := INT | X(n) | Y(n) | H(n) | mu(a) | B(bits;a,j;...).

    * binds tighter than +, both left-associative, no parentheses beyond
    the call syntax.  Admissibility errors from evaluation propagate as
    plain ValueError so the caller can surface them verbatim.
    """

    def __init__(self, text, ctx):
        self.text = text
        self.ctx = ctx
        self.i = 0

    def parse(self):
        value = self._expr()
        self._skip_ws()
        if self.i < len(self.text):
            raise ExprError(self.i, f"unexpected {self.text[self.i]!r}")
        return value

    def _skip_ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def _peek(self):
        self._skip_ws()
        return self.text[self.i] if self.i < len(self.text) else ""

    def _expr(self):
        value = self._term()
        while self._peek() == "+":
            self.i += 1
            value = value + self._term()
        return value

    def _term(self):
        value = self._atom()
        while self._peek() == "*":
            self.i += 1
            value = value * self._atom()
        return value

    def _atom(self):
        ch = self._peek()
        if not ch:
            raise ExprError(self.i, "expected a value")
        if ch.isdigit():
            start = self.i
            while self.i < len(self.text) and self.text[self.i].isdigit():
                self.i += 1
            return self.ctx.scalar(int(self.text[start : self.i]))
        if ch.isalpha():
            return self._call()
        raise ExprError(self.i, f"unexpected {ch!r}")

    def _call(self):
        start = self.i
        while self.i < len(self.text) and self.text[self.i].isalpha():
            self.i += 1
        name = self.text[start : self.i]
        if self._peek() != "(":
            raise ExprError(self.i, f"expected '(' after {name}")
        self.i += 1
        args_at = self.i
        close = self.text.find(")", self.i)
        if close < 0:
            raise ExprError(args_at, "missing ')'")
        inside = self.text[args_at:close].strip()
        self.i = close + 1
        if name in ("X", "Y", "H"):
            n = self._int(inside, args_at)
            if not 0 <= n < self.ctx.bound:
                raise ExprError(
                    args_at, f"index {n} out of range [0, {self.ctx.bound - 1}]"
                )
            return getattr(self.ctx, name.lower())(n)
        if name == "mu":
            return mu(self._int(inside, args_at), self.ctx.r, self.ctx)
        if name == "B":
            return self._b_call(inside, args_at)
        raise ExprError(start, f"unknown function {name!r}; expected X, Y, H, mu, or B")

    def _int(self, text, pos):
        try:
            return int(text)
        except ValueError:
            raise ExprError(pos, f"expected an integer, got {text!r}") from None

    def _b_call(self, inside, pos):
        parts = inside.split(";")
        bits = parts[0].strip()
        if len(bits) != self.ctx.r or any(b not in "01" for b in bits):
            raise ExprError(
                pos, f"B needs {self.ctx.r} bit(s) of 0/1 before the first ';', got {bits!r}"
            )
        if len(parts) - 1 != self.ctx.r:
            raise ExprError(pos, f"B needs {self.ctx.r} label slot(s), got {len(parts) - 1}")
        label = tuple(_parse_pair(part, self.ctx.p) for part in parts[1:])
        return b_r(label, tuple(int(b) for b in bits), self.ctx)


def evaluate_expression(text, ctx):
    return _ExprParser(text, ctx).parse()


def _config_payload(cfg, command):
    """Config echo embedded in reports; out_path is excluded on purpose."""
    return {
        "command": command,
        "p": cfg.p,
        "r": cfg.r,
        "labels": [format_label(tup) for tup in cfg.labels] if cfg.labels else None,
        "suites": list(cfg.suites),
        "format": cfg.out_format,
        "seed": cfg.seed,
        "jobs": cfg.parallelism,
    }


def _emit(report, cfg):
    if cfg.out_path:
        write_report(report, cfg.out_path, cfg.out_format)
        n = len(report["rows"])
        state = "pass" if report["pass"] else "FAIL"
        print(f"wrote {cfg.out_path} ({n} checks, {state})")
    else:
        data = to_json_bytes(report) if cfg.out_format == "json" else to_csv_bytes(report)
        sys.stdout.write(data.decode("utf-8"))


def _finish(report, rows):
    if report["pass"]:
        return 0
    first = next(row for row in rows if not row.passed)
    print(
        f"FAIL [{first.label}] {first.check}: expected {first.expected}, got {first.got}",
        file=sys.stderr,
    )
    return 1


def cmd_decompose(cfg):
    """Idempotent table for the decomposition of 1, with certificates."""
    ctx = AlgebraContext(cfg.p, cfg.r)
    rows = suite_unity(ctx, cfg.labels)
    report = report_dict(_config_payload(cfg, "decompose"), rows)
    _emit(report, cfg)
    return _finish(report, rows)


def cmd_verify(cfg):
    """Selected verification suites; per-label pass/fail plus dimensions."""
    ctx = AlgebraContext(cfg.p, cfg.r)
    rows, payloads = run_suites(
        ctx, cfg.suites, cfg.labels, seed=cfg.seed, jobs=cfg.parallelism
    )
    report = report_dict(_config_payload(cfg, "verify"), rows, payloads)
    _emit(report, cfg)
    return _finish(report, rows)


def cmd_element(cfg, expr):
    """Parse and evaluate one expression, print its PBW normal form."""
    ctx = AlgebraContext(cfg.p, cfg.r)
    try:
        value = evaluate_expression(expr, ctx)
    except ExprError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except (ValueError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(format_element(value))
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, required=True, help="prime characteristic")
    common.add_argument("--r", type=int, default=1, help="tower height, >= 1 (default 1)")
    common.add_argument(
        "--labels",
        nargs="*",
        metavar="LABEL",
        help='restrict to these labels, each "a,j;a,j;..." with half-integer j as n/2',
    )
    common.add_argument(
        "--suites",
        nargs="*",
        choices=SUITES,
        metavar="SUITE",
        help=f"suites to run, from: {', '.join(SUITES)} (default: all)",
    )
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument(
        "--out", metavar="PATH", help="report file; a PNG summary is rendered next to it"
    )
    common.add_argument("--jobs", type=int, default=1, help="worker threads across labels")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")

    parser = argparse.ArgumentParser(
        prog="sl2ur",
        description="Exact structure computations in the truncated divided-power "
        "algebra of SL2 at a prime p.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser(
        "decompose",
        parents=[common],
        help="build the orthogonal idempotent decomposition of 1 and certify it",
    )
    sub.add_parser("verify", parents=[common], help="run verification suites")
    element = sub.add_parser(
        "element",
        parents=[common],
        help="evaluate an element expression to normal form",
    )
    element.add_argument(
        "expr",
        help="expression over X(n), Y(n), H(n), mu(a), B(bits;a,j;...), "
        "nonnegative integers, + and * (with * binding tighter)",
    )
    return parser


def _config_from_args(args):
    cfg = RunConfig(
        p=args.p,
        r=args.r,
        suites=tuple(args.suites) if args.suites else SUITES,
        out_format=args.format,
        out_path=args.out,
        parallelism=args.jobs,
        seed=args.seed,
    ).validate()
    if args.labels:
        cfg.labels = tuple(parse_label(text, args.p, args.r) for text in args.labels)
    return cfg


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        cfg = _config_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.command == "decompose":
        return cmd_decompose(cfg)
    if args.command == "verify":
        return cmd_verify(cfg)
    return cmd_element(cfg, args.expr)


if __name__ == "__main__":
    sys.exit(main())
