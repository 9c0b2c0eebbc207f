"""Command-line front end: diagrams, indices, invariants, verification.

Commands

    diagram    render the filled table (or emit the whole result as JSON)
    index      number of crosses, optionally cross-checked by the oracle
    invariants canonical polynomial strings, optionally fully checked
    orbit-dim  generic orbit dimension, or the rank at one explicit form
    verify     run the property suite over many ideals and report JSON

Exit status: 0 success, 1 a check failed, 2 bad input.  All randomized
commands are deterministic in --seed (default 0).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import invariants as invariants_mod
from . import oracle as oracle_mod
from .core import (
    LinearForm,
    NotAnIdealError,
    OutOfRangeError,
    Pair,
    PatternIdeal,
    QuotientAlgebra,
    counter_rand,
    enumerate_pattern_ideals,
    order_gt,
    sample_pattern_ideals,
    succ_key,
    validate_pattern_ideal,
)
from .diagram import (
    Diagram,
    SymbolKind,
    b_set,
    build_diagram,
    check_closure,
    d_minus,
    dominating_ideal,
    index_of,
    max_orbit_dim,
)
from .polyring import MissingCoordinateError, canonical_string

__all__ = [
    "IdealSpec",
    "IdealSyntaxError",
    "OracleReport",
    "StepSummary",
    "ResultBundle",
    "parse_ideal_spec",
    "render_diagram",
    "make_bundle",
    "emit_json",
    "bundle_from_json",
    "run_verify",
    "dispatch",
    "main",
]


class IdealSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} (at position {position})")


@dataclass(frozen=True)
class IdealSpec:
    n: int
    pairs: tuple[Pair, ...]

    def to_ideal(self) -> PatternIdeal:
        return validate_pattern_ideal(self.n, self.pairs)


def parse_ideal_spec(text: str) -> IdealSpec:
    """Parse "n: i,j; i,j; ..." — "n:" alone means the empty ideal."""
    colon = text.find(":")
    if colon < 0:
        raise IdealSyntaxError("expected ':' after the matrix size", len(text))
    head = text[:colon].strip()
    if not head.isdigit():
        raise IdealSyntaxError("matrix size must be a positive integer", 0)
    pairs = []
    offset = colon + 1
    body = text[colon + 1 :]
    if body.strip():
        for segment in body.split(";"):
            entry = segment.strip()
            start = offset + len(segment) - len(segment.lstrip())
            parts = entry.split(",")
            if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
                raise IdealSyntaxError("expected a pair like 'i,j'", start)
            pairs.append(Pair(int(parts[0]), int(parts[1])))
            offset += len(segment) + 1
    return IdealSpec(int(head), tuple(pairs))


_SYMBOLS = {
    "ascii": {
        SymbolKind.BULLET: "*",
        SymbolKind.CROSS: "X",
        SymbolKind.PLUS: "+",
        SymbolKind.MINUS: "-",
    },
    "unicode": {
        SymbolKind.BULLET: "•",
        SymbolKind.CROSS: "⊗",
        SymbolKind.PLUS: "+",
        SymbolKind.MINUS: "-",
    },
}


def _table_lines(d: Diagram, marks: dict, upto: int | None) -> list[str]:
    lines = []
    for row in range(1, d.n + 1):
        cells = []
        for col in range(1, row):
            symbol = d.cells.get(Pair(row, col))
            if symbol is None or (upto is not None and symbol.step > upto):
                cells.append(".")
            else:
                cells.append(marks[symbol.kind])
        lines.append(" ".join(cells))
    return lines


def render_diagram(d: Diagram, style: str = "ascii", steps: bool = False) -> str:
    """The filled table, one line per row, columns 1..row-1 of each row.

    With steps=True the intermediate tables (state after steps 0..s-1,
    unfilled cells shown as ".") are appended below the final one.
    """
    marks = _SYMBOLS[style]
    lines = _table_lines(d, marks, None)
    if steps:
        for i in range(d.s):
            lines.append("")
            lines.append(f"after step {i}:")
            lines.extend(_table_lines(d, marks, i))
    return "\n".join(lines)


@dataclass(frozen=True)
class OracleReport:
    index: int
    generic_rank: int
    trials: int
    seed: int


@dataclass(frozen=True)
class StepSummary:
    xi: Pair
    p: int
    minus: tuple[Pair, ...]
    plus: tuple[Pair, ...]


@dataclass(frozen=True)
class ResultBundle:
    n: int
    ideal: tuple[Pair, ...]
    crosses: tuple[Pair, ...]
    c_plus: tuple[Pair, ...]
    c_minus: tuple[Pair, ...]
    steps: tuple[StepSummary, ...]
    index: int
    max_orbit_dim: int
    invariants: tuple[str, ...]
    oracle: OracleReport | None = None

    def __post_init__(self):
        dim = self.n * (self.n - 1) // 2 - len(self.ideal)
        if self.index + self.max_orbit_dim != dim:
            raise ValueError("index plus orbit dimension must equal dim L")


def make_bundle(
    d: Diagram, invariant_strings: list[str], oracle: OracleReport | None = None
) -> ResultBundle:
    return ResultBundle(
        n=d.n,
        ideal=tuple(sorted(d.ideal.members, key=succ_key)),
        crosses=d.xi_list,
        c_plus=d.pluses,
        c_minus=d.minuses,
        steps=tuple(
            StepSummary(rec.xi, rec.p, rec.minus, rec.plus) for rec in d.steps
        ),
        index=index_of(d),
        max_orbit_dim=max_orbit_dim(d),
        invariants=tuple(invariant_strings),
        oracle=oracle,
    )


def _pair_list(pairs) -> list[list[int]]:
    return [[p.row, p.col] for p in pairs]


def emit_json(bundle: ResultBundle) -> str:
    doc = {
        "n": bundle.n,
        "ideal": _pair_list(bundle.ideal),
        "S": _pair_list(bundle.crosses),
        "C_plus": _pair_list(bundle.c_plus),
        "C_minus": _pair_list(bundle.c_minus),
        "steps": [
            {
                "xi": [rec.xi.row, rec.xi.col],
                "p": rec.p,
                "minus": _pair_list(rec.minus),
                "plus": _pair_list(rec.plus),
            }
            for rec in bundle.steps
        ],
        "index": bundle.index,
        "max_orbit_dim": bundle.max_orbit_dim,
        "invariants": list(bundle.invariants),
    }
    if bundle.oracle is not None:
        doc["oracle"] = {
            "index": bundle.oracle.index,
            "generic_rank": bundle.oracle.generic_rank,
            "trials": bundle.oracle.trials,
            "seed": bundle.oracle.seed,
        }
    return json.dumps(doc, indent=2)


def _pairs_from(doc) -> tuple[Pair, ...]:
    return tuple(Pair(int(r), int(c)) for r, c in doc)


def bundle_from_json(text: str) -> ResultBundle:
    doc = json.loads(text)
    oracle = None
    if "oracle" in doc:
        o = doc["oracle"]
        oracle = OracleReport(o["index"], o["generic_rank"], o["trials"], o["seed"])
    return ResultBundle(
        n=doc["n"],
        ideal=_pairs_from(doc["ideal"]),
        crosses=_pairs_from(doc["S"]),
        c_plus=_pairs_from(doc["C_plus"]),
        c_minus=_pairs_from(doc["C_minus"]),
        steps=tuple(
            StepSummary(
                Pair(*step["xi"]),
                step["p"],
                _pairs_from(step["minus"]),
                _pairs_from(step["plus"]),
            )
            for step in doc["steps"]
        ),
        index=doc["index"],
        max_orbit_dim=doc["max_orbit_dim"],
        invariants=tuple(doc["invariants"]),
        oracle=oracle,
    )


def _ideal_label(ideal: PatternIdeal) -> str:
    body = "; ".join(f"{p.row},{p.col}" for p in sorted(ideal.members, key=succ_key))
    return f"{ideal.n}: {body}" if body else f"{ideal.n}:"


def _structural_problem(d: Diagram) -> str | None:
    ideal = d.ideal
    if index_of(d) + max_orbit_dim(d) != ideal.dim_quotient:
        return "index plus orbit dimension misses dim L"
    if max_orbit_dim(d) % 2:
        return "orbit dimension is odd"
    for rec in d.steps:
        if len(rec.minus) != len(rec.plus):
            return f"step {rec.index}: plus and minus counts differ"
    for earlier, later in zip(d.xi_list, d.xi_list[1:]):
        if not order_gt(earlier, later):
            return "cross chain is not strictly decreasing"
    for i in range(d.s + 1):
        if not check_closure(b_set(d, i), ideal):
            return f"unfilled set after step {i} is not closed"
        if i >= 1 and not check_closure(d_minus(d, i), dominating_ideal(d, i)):
            return f"minus family at step {i} is not closed above the cross"
    return None


def run_verify(max_n: int, trials: int, seed: int, bound: int) -> tuple[dict, bool]:
    """Check every property we know how to state, over many ideals.

    Exhaustive over pattern ideals for n <= 6, a 25-ideal sample for
    n in {7, 8}.  Symbolic checks scale down with n (centrality, shape
    and full step-by-step relation verification for n <= 5, construction
    only above); the numeric oracles run everywhere.  Returns
    (report, all_passed) with a deterministic report layout.
    """
    agreement = {"checked": 0, "failures": []}
    structural = {"checked": 0, "failures": []}
    symbolic = {"checked": 0, "failures": []}
    invariance = {"checked": 0, "failures": []}
    independence = {"checked": 0, "failures": []}
    total = 0
    for n in range(2, max_n + 1):
        if n <= 6:
            ideals = list(enumerate_pattern_ideals(n))
        else:
            ideals = sample_pattern_ideals(n, 25, seed)
        for position, ideal in enumerate(ideals):
            total += 1
            label = _ideal_label(ideal)
            case_seed = counter_rand(seed, 0x1D, n, position)
            d = build_diagram(ideal)
            structural["checked"] += 1
            problem = _structural_problem(d)
            if problem:
                structural["failures"].append(f"{label}: {problem}")
            agreement["checked"] += 1
            oracle_index, oracle_rank = oracle_mod.index_oracle(
                ideal, trials, bound, case_seed
            )
            if oracle_index != index_of(d) or oracle_rank != max_orbit_dim(d):
                agreement["failures"].append(
                    f"{label}: diagram ({index_of(d)}, {max_orbit_dim(d)})"
                    f" vs oracle ({oracle_index}, {oracle_rank})"
                )
            try:
                if n <= 5:
                    zs = invariants_mod.build_invariants(d, check=True)
                    symbolic["checked"] += 1
                    state = invariants_mod.initial_state(d)
                    for i in range(1, d.s + 1):
                        report = invariants_mod.verify_relations(state, d, i)
                        if not report.passed:
                            symbolic["failures"].append(
                                f"{label}: step {i}: {report.counterexample}"
                            )
                        state = invariants_mod.theta_step(state, d, i)
                else:
                    zs = invariants_mod.build_invariants(d, check=False)
                invariance["checked"] += 1
                if not oracle_mod.invariance_oracle(zs, ideal, trials, case_seed):
                    invariance["failures"].append(
                        f"{label}: an invariant moved under the coadjoint action"
                    )
                independence["checked"] += 1
                jrank = oracle_mod.generic_jacobian_rank(zs, ideal, case_seed, bound)
                if jrank != len(zs):
                    independence["failures"].append(
                        f"{label}: jacobian rank {jrank}, expected {len(zs)}"
                    )
            except Exception as exc:  # noqa: BLE001 -- a bad invariant must fail the run, not kill it
                symbolic["failures"].append(f"{label}: {exc!r}")
    checks = {
        "diagram_oracle_agreement": agreement,
        "structural": structural,
        "symbolic": symbolic,
        "invariance": invariance,
        "independence": independence,
    }
    passed = all(not block["failures"] for block in checks.values())
    report = {
        "max_n": max_n,
        "trials": trials,
        "seed": seed,
        "bound": bound,
        "ideals_checked": total,
        "checks": checks,
        "passed": passed,
    }
    return report, passed


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitdiag",
        description="Diagrams, index and coadjoint invariants of quotients of "
        "the strictly lower-triangular matrix algebra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_ideal(p):
        p.add_argument(
            "--ideal",
            required=True,
            help="pattern ideal, e.g. \"7: 5,1; 6,1; 7,1; 7,2\" (- reads stdin)",
        )

    def with_oracle_knobs(p):
        p.add_argument("--trials", type=int, default=5)
        p.add_argument("--bound", type=int, default=1000)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("diagram", help="render the filled diagram")
    with_ideal(p)
    p.add_argument("--style", choices=sorted(_SYMBOLS), default="ascii")
    p.add_argument("--steps", action="store_true", help="append intermediate tables")
    p.add_argument("--json", action="store_true", dest="as_json")
    p.add_argument("--oracle", action="store_true", help="include an oracle report in the JSON")
    with_oracle_knobs(p)

    p = sub.add_parser("index", help="number of crosses = index of the algebra")
    with_ideal(p)
    p.add_argument("--oracle", action="store_true", help="cross-check against random-form ranks")
    with_oracle_knobs(p)

    p = sub.add_parser("invariants", help="canonical strings of the invariants")
    with_ideal(p)
    p.add_argument("--check", action="store_true", help="run centrality and shape checks")

    p = sub.add_parser("orbit-dim", help="maximal orbit dimension, or rank at a form")
    with_ideal(p)
    p.add_argument("--form", help="JSON file {\"i,j\": \"num/den\"} of form values")

    p = sub.add_parser("verify", help="run the property suite and print a JSON report")
    p.add_argument("--max-n", type=int, default=5, dest="max_n")
    with_oracle_knobs(p)
    return parser


def _ideal_text(value: str) -> str:
    return sys.stdin.read() if value == "-" else value


def _load_form(path: str, ideal: PatternIdeal) -> LinearForm:
    with open(path, encoding="utf-8") as handle:
        raw = json.load(handle)
    values = {}
    for key, value in raw.items():
        parts = key.split(",")
        if len(parts) != 2 or not all(p.strip().lstrip("-").isdigit() for p in parts):
            raise ValueError(f"bad coordinate key {key!r} in form file")
        values[Pair(int(parts[0]), int(parts[1]))] = Fraction(str(value))
    return LinearForm.from_dict(QuotientAlgebra.from_ideal(ideal), values)


def _run(args) -> int:
    if args.command == "verify":
        report, passed = run_verify(args.max_n, args.trials, args.seed, args.bound)
        print(json.dumps(report, indent=2))
        return 0 if passed else 1
    ideal = parse_ideal_spec(_ideal_text(args.ideal)).to_ideal()
    d = build_diagram(ideal)
    if args.command == "diagram":
        if args.as_json:
            strings = [
                canonical_string(z)
                for z in invariants_mod.build_invariants(d, check=False)
            ]
            oracle_report = None
            if args.oracle:
                oracle_index, oracle_rank = oracle_mod.index_oracle(
                    ideal, args.trials, args.bound, args.seed
                )
                oracle_report = OracleReport(
                    oracle_index, oracle_rank, args.trials, args.seed
                )
            print(emit_json(make_bundle(d, strings, oracle_report)))
        else:
            print(render_diagram(d, args.style, steps=args.steps))
        return 0
    if args.command == "index":
        value = index_of(d)
        if args.oracle:
            oracle_index, oracle_rank = oracle_mod.index_oracle(
                ideal, args.trials, args.bound, args.seed
            )
            print(f"index={value} oracle={oracle_index} rank={oracle_rank}")
            return 0 if oracle_index == value else 1
        print(f"index={value}")
        return 0
    if args.command == "invariants":
        for z in invariants_mod.build_invariants(d, check=args.check):
            print(canonical_string(z))
        return 0
    if args.command == "orbit-dim":
        if args.form is not None:
            f = _load_form(args.form, ideal)
            rank = oracle_mod.exact_rank(oracle_mod.skew_form_matrix(f, ideal))
            print(f"rank={rank}")
        else:
            print(f"max_orbit_dim={max_orbit_dim(d)}")
        return 0
    raise AssertionError(f"unhandled command {args.command!r}")


def dispatch(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _run(args)
    except (
        invariants_mod.CentralityError,
        invariants_mod.NotTriangularError,
        invariants_mod.InconsistentStateError,
    ) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    except (
        IdealSyntaxError,
        NotAnIdealError,
        OutOfRangeError,
        MissingCoordinateError,
        OSError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
