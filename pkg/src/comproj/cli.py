"""Command line entry point.

Exit status: 0 ok, 1 usage or parse error, 2 infeasible input or violated
condition, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .algebra import global_dimension
from .comhom import (
    KernelNotProjectiveError,
    NotInStratumError,
    build_from_homology,
    dimension_report,
    fibre_dims,
    lift,
    validate_comhom_point,
)
from .complexes import (
    InfeasibleProfile,
    StratumPossiblyEmpty,
    random_complex_fixed_rank,
    rank_profile,
    strata_profile,
    validate_complex,
)
from .components import EnumerationBudgetExceeded, components_rep_hr
from .counting import CountBudgetExceeded, count_points
from .documents import DocumentError, Instance, load_document
from .representations import DecompositionInconclusive, RejectionBudgetExceeded

EXIT_OK, EXIT_PARSE, EXIT_INFEASIBLE, EXIT_BUDGET = 0, 1, 2, 3


class Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        print("\n".join(lines))


def _profile(inst: Instance):
    prof = strata_profile(inst.algebra, inst.d, inst.r)
    return prof


def _profile_lines(prof) -> list[str]:
    lines = [f"{'i':>3} {'hdeg':>4}  {'d_i':<12} {'r_i':<12} {'k_i':<12} {'h_i':<12} m_i"]
    for row in prof.table():
        lines.append(
            f"{row['i']:>3} {row['homology_degree']:>4}  {str(tuple(row['d'])):<12} {str(tuple(row['r'])):<12} "
            f"{str(tuple(row['k'])):<12} {str(tuple(row['h'])):<12} {row['m'] and tuple(row['m'])}"
        )
    return lines


def _signed(x: int) -> str:
    return f"+ {x}" if x >= 0 else f"- {-x}"


def _gate(inst: Instance) -> int | None:
    cap = inst.budgets["global_dimension_cap"]
    gd = global_dimension(inst.algebra, cap)
    if gd is None or gd > 2:
        shown = f"> {cap}" if gd is None else gd
        print(f"warning: global dimension {shown} exceeds 2; kernels of differentials need not be projective",
              file=sys.stderr)
    return gd


def cmd_analyze(inst: Instance, args) -> int:
    """Profile, fibre dimensions and dimension report."""
    gd = _gate(inst)
    prof = _profile(inst)
    payload = {"algebra": inst.algebra.describe(), "global_dimension": gd, "cartan": inst.algebra.cartan.tolist(),
               "profile": prof.to_json()}
    lines = [repr(inst.algebra), f"global dimension: {gd if gd is not None else '> cap'}",
             f"Cartan matrix: {inst.algebra.cartan.tolist()}", ""] + _profile_lines(prof)
    if not prof.feasible:
        payload["verdict"] = "infeasible"
        _emit(args, payload, lines + ["", f"infeasible: {prof.reason}"])
        return EXIT_INFEASIBLE
    fib = fibre_dims(prof)
    payload["fibres"] = fib.to_json()
    lines += ["", "fibre dimensions: " + ", ".join(f"{k}={v}" for k, v in fib.to_json().items())]
    rep_dims = None
    try:
        comp = components_rep_hr(inst.algebra, prof, budget=inst.budgets["enumeration"])
        rep_dims = comp.component_dims()
        payload["components"] = comp.to_json()
    except (EnumerationBudgetExceeded, DecompositionInconclusive) as exc:
        lines.append(f"components not computed: {exc}")
    offset = dimension_report(prof, 0)
    payload["dimension_offsets"] = {
        "chain": offset.chain_dims[0],
        "closed_form": offset.closed_form_dims[0],
        "discrepancy": offset.discrepancy,
    }
    lines.append(f"dim comproj_(d,r) = dim rep_(h,r) {_signed(offset.chain_dims[0])}   (fibre chain)")
    lines.append(f"closed form gives dim rep_(h,r) {_signed(offset.closed_form_dims[0])}"
                 + ("   [DISAGREES]" if offset.discrepancy else ""))
    if rep_dims:
        rep = dimension_report(prof, rep_dims)
        payload["dimensions"] = rep.to_json()
        lines.append(f"component dimensions (chain): {list(rep.chain_dims)}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_components(inst: Instance, args) -> int:
    """Irreducible components of the stratum."""
    prof = _profile(inst)
    if not prof.feasible:
        print(f"infeasible: {prof.reason}", file=sys.stderr)
        return EXIT_INFEASIBLE
    comp = components_rep_hr(inst.algebra, prof, budget=inst.budgets["enumeration"])
    lines = []
    for deg in comp.degrees:
        lines.append(f"i={deg.i} (homology degree {deg.i - 1}), h={deg.h}")
        for c in deg.maximal:
            mark = "+" if c in deg.passing else "-"
            lines.append(f"  {mark} {c.name:<32} orbit dim {c.orbit_dim}")
    lines.append(f"counts before presentation filter: {comp.counts_before_filter}")
    lines.append(f"counts after presentation filter:  {comp.counts}")
    lines.append(f"irreducible components of comproj_(d,r): {comp.total}")
    _emit(args, comp.to_json(), lines)
    return EXIT_OK


def cmd_lift(inst: Instance, args) -> int:
    """Lift a complex to a point with explicit homology."""
    x = inst.complex_payload()
    if x is None:
        raise Failure(EXIT_PARSE, "/complex: the lift command needs a 'complex' payload")
    bad = validate_complex(x)
    if bad is not None:
        print(f"not a complex: {bad}", file=sys.stderr)
        return EXIT_INFEASIBLE
    z = lift(x)
    bad = validate_comhom_point(z)
    if bad is not None:
        print(f"lift failed validation: {bad}", file=sys.stderr)
        return EXIT_INFEASIBLE
    lines = _profile_lines(z.profile) + ["", "lift validated"]
    for i, part in sorted(z.parts.items()):
        lines.append(f"  H_{i} (homology degree {i - 1}): dim {part.H.dim}")
    _emit(args, {"profile": z.profile.to_json(), "point": z.to_json()}, lines)
    return EXIT_OK


def cmd_build(inst: Instance, args) -> int:
    """Build a complex from homology (or sample one)."""
    prof = _profile(inst)
    if not prof.feasible:
        print(f"infeasible: {prof.reason}", file=sys.stderr)
        return EXIT_INFEASIBLE
    homology = inst.homology_payload()
    if homology is None:
        x = random_complex_fixed_rank(inst.algebra, prof, inst.seed, inst.budgets["sampler"])
    else:
        z = build_from_homology(inst.algebra, prof, homology)
        bad = validate_comhom_point(z)
        if bad is not None:
            print(f"built point failed validation: {bad}", file=sys.stderr)
            return EXIT_INFEASIBLE
        x = z.complex()
    ranks = rank_profile(x)
    lines = _profile_lines(prof) + ["", f"built complex with rank profile {ranks.to_json()}"]
    _emit(args, {"complex": x.to_json(), "rank_array": ranks.to_json()}, lines)
    return EXIT_OK if ranks == prof.r else EXIT_INFEASIBLE


def cmd_count(inst: Instance, args) -> int:
    """Exhaustive point counts over small primes."""
    primes = inst.primes
    if args.primes:
        primes = tuple(int(p) for p in args.primes.split(","))
    if not primes:
        raise Failure(EXIT_PARSE, "count needs primes (--primes or a 'primes' entry)")
    rep = count_points(inst.algebra, inst.d, primes, inst.budgets["count"])
    lines = [f"{rep.coordinates} coordinates; totals {rep.totals}"]
    for s in rep.strata:
        tag = "" if s.determined else "  (underdetermined: supply more primes)"
        ranks = {i: v for i, v in s.ranks}
        lines.append(f"  ranks {ranks or 'zero'}: counts {s.counts} -> {s.polynomial()} (degree {s.degree}){tag}")
    _emit(args, rep.to_json(), lines)
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "components": cmd_components,
    "lift": cmd_lift,
    "build": cmd_build,
    "count": cmd_count,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="comproj", description="Varieties of complexes of projective modules")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__ or name)
        p.add_argument("document", help="JSON instance document")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--seed", type=int, help="override the document seed")
        p.add_argument("--budget", type=int, help="override the budget used by this command")
        if name == "count":
            p.add_argument("--primes", help="comma-separated primes")
    return parser


_BUDGET_KEY = {"components": "enumeration", "analyze": "enumeration", "build": "sampler", "count": "count"}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        inst = load_document(args.document)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.seed is not None:
        inst.seed = args.seed
    if args.budget is not None and args.command in _BUDGET_KEY:
        inst.budgets[_BUDGET_KEY[args.command]] = args.budget
    try:
        return COMMANDS[args.command](inst, args)
    except Failure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InfeasibleProfile, NotInStratumError, KernelNotProjectiveError, StratumPossiblyEmpty) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (EnumerationBudgetExceeded, CountBudgetExceeded, RejectionBudgetExceeded, DecompositionInconclusive) as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
