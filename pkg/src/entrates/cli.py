"""Command-line front end.

Exit codes: 0 on success, 1 on domain errors (infeasible targets, missing
inputs, degenerate instances, battery violations), 2 on state-file parse
errors.  ``--csv PATH`` writes a ``quantity,value,witness`` table next to
the human-readable output; rates are printed with nine decimals while CSV
carries full precision.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .battery import SUITE_NAMES, run_battery
from .entropy import entropy_profile
from .errors import (
    CapacityError,
    DegenerateTargetError,
    InfeasibleTargetError,
    NeedsInputError,
    StateFileError,
    StateValidationError,
)
from .combing import CombingTarget, plan_combing
from .fourparty import (
    best_four_party_plan,
    max_min_rate_oracle,
    merging_rate_triples,
    plan_four_party,
    upper_bound_four_party,
)
from .ghz import best_ghz_bound
from .states import MixedState, PureState
from .stateio import parse_state
from .tolerances import RATE_ATOL
from .tripartite import (
    best_bounds,
    bipartite_rate,
    plan_tripartite,
    pure_bipartition_entanglement,
    upper_bound_mixed,
)

_DOMAIN_ERRORS = (
    InfeasibleTargetError,
    DegenerateTargetError,
    NeedsInputError,
    CapacityError,
    StateValidationError,
    ValueError,
)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return "inf" if math.isinf(value) else f"{value:.9f}"
    return str(value)


def _csv_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "inf" if math.isinf(value) else repr(value)
    return str(value)


def _write_csv(path: str, rows: list[tuple]) -> None:
    lines = ["quantity,value,witness"]
    for quantity, value, witness in rows:
        lines.append(f"{quantity},{_csv_value(value)},{witness}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _print_table(rows: list[tuple]) -> None:
    if not rows:
        return
    width = max(len(str(r[0])) for r in rows)
    for label, value, witness in rows:
        line = f"  {str(label):<{width}}   {_fmt(value)}"
        if witness:
            line += f"   {witness}"
        print(line)


def _load(path: str):
    return parse_state(Path(path))


def _header(title: str, state) -> None:
    lay = state.layout
    print(title)
    print(
        "parties: "
        + " ".join(lay.parties)
        + "   dims: "
        + " ".join(str(d) for d in lay.dims)
    )
    print()


def _subset_label(subset) -> str:
    return "".join(subset) if all(len(p) == 1 for p in subset) else "+".join(subset)


def cmd_entropies(args) -> int:
    state = _load(args.state)
    prof = entropy_profile(state)
    _header(f"entropy profile: {Path(args.state).name}", state)
    rows = [
        (f"S({_subset_label(t)})", prof.s(t), "")
        for t in prof.layout.proper_subsets()
    ]
    _print_table(rows)
    if args.csv:
        _write_csv(args.csv, rows)
    return 0


def _parse_einf(path: str) -> tuple[dict[str, float], dict[str, float]]:
    rho_vals: dict[str, float] = {}
    sigma_vals: dict[str, float] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line or line.lower().startswith("cut,"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise ValueError(
                f"expected 'cut,source,target' rows in {path}, got {raw!r}"
            )
        cut, source, target = parts
        rho_vals[cut] = float(source)
        sigma_vals[cut] = float(target)
    return rho_vals, sigma_vals


def cmd_rate(args) -> int:
    if args.einf:
        rho_vals, sigma_vals = _parse_einf(args.einf)
        upper, witness = upper_bound_mixed(rho_vals, sigma_vals)
        print("rate bounds from supplied bipartition entanglement")
        print()
        rows = [("upper bound", upper, witness)]
        _print_table(rows)
        if args.csv:
            _write_csv(args.csv, [("upper_bound", upper, witness)])
        return 0

    psi = _load(args.source)
    phi = _load(args.target)
    if psi.layout.parties != phi.layout.parties:
        raise ValueError("source and target must share the same parties")
    if isinstance(psi, MixedState) or isinstance(phi, MixedState):
        raise NeedsInputError(
            "mixed-state rates need per-bipartition entanglement values; "
            "pass them with --einf"
        )
    name = f"{Path(args.source).name} -> {Path(args.target).name}"
    n = psi.layout.num_parties

    if n == 2:
        rate = bipartite_rate(psi, phi)
        _header(f"rate bounds: {name}", psi)
        rows = [
            ("lower bound", rate, "exact bipartite conversion"),
            ("upper bound", rate, "exact bipartite conversion"),
            ("tight", True, ""),
        ]
        _print_table(rows)
        csv_rows = [
            ("lower_bound", rate, "bipartite"),
            ("upper_bound", rate, "bipartite"),
            ("tight", True, ""),
        ]
    elif n == 3:
        bound = best_bounds(psi, phi)
        _header(f"rate bounds: {name}", psi)
        lower_witness = "; ".join(w.describe() for w in bound.lower_witnesses)
        rows = [
            ("lower bound", bound.lower, lower_witness),
            ("upper bound", bound.upper, bound.upper_witness),
            ("tight", bound.tight, ""),
        ]
        _print_table(rows)
        if bound.note:
            print(f"  note: {bound.note}")
        elif not bound.tight:
            print("  note: upper bound not certified achievable by these bounds")
        csv_rows = [
            ("lower_bound", bound.lower, lower_witness.replace("; ", ";")),
            ("upper_bound", bound.upper, bound.upper_witness),
            ("tight", bound.tight, ""),
        ]
    else:
        rho_vals = pure_bipartition_entanglement(psi)
        sigma_vals = pure_bipartition_entanglement(phi)
        upper, witness = upper_bound_mixed(rho_vals, sigma_vals)
        _header(f"rate bounds: {name}", psi)
        rows = [("upper bound", upper, witness)]
        _print_table(rows)
        if n == 4:
            print("  note: run plan4 for the catalytic lower bound")
        csv_rows = [("upper_bound", upper, witness)]

    if args.csv:
        _write_csv(args.csv, csv_rows)
    return 0


def cmd_comb(args) -> int:
    state = _load(args.state)
    if not isinstance(state, PureState):
        raise ValueError("combing plans need a pure source state")
    prof = entropy_profile(state)
    parties = prof.layout.parties
    alice = args.alice or parties[0]
    if alice not in parties:
        raise ValueError(f"unknown party {alice!r}")
    partners = tuple(p for p in parties if p != alice)
    roles = (alice, *partners)
    plan = plan_combing(prof, CombingTarget(args.e_mu, args.e_nu), roles=roles)

    _header(f"combing plan: {Path(args.state).name}", state)
    print(f"roles: alice {alice}, partners {partners[0]} {partners[1]}")
    rows = [
        ("case", plan.case_id, ""),
        ("p(branch a)", plan.p, plan.branch_a.describe(alice)),
        ("p(branch b)", 1.0 - plan.p, plan.branch_b.describe(alice)),
        ("branch a", plan.branch_a.e_mu, f"e_nu {_fmt(plan.branch_a.e_nu)}"),
        ("branch b", plan.branch_b.e_mu, f"e_nu {_fmt(plan.branch_b.e_nu)}"),
        ("achieved e_mu", plan.achieved.e_mu, ""),
        ("achieved e_nu", plan.achieved.e_nu, ""),
        ("slack e_mu", plan.slack[0], ""),
        ("slack e_nu", plan.slack[1], ""),
    ]
    _print_table(rows)
    if args.csv:
        _write_csv(
            args.csv,
            [
                ("case_id", plan.case_id, ""),
                ("p", plan.p, plan.branch_a.describe(alice)),
                ("achieved_e_mu", plan.achieved.e_mu, ""),
                ("achieved_e_nu", plan.achieved.e_nu, ""),
                ("slack_e_mu", plan.slack[0], ""),
                ("slack_e_nu", plan.slack[1], ""),
            ],
        )
    return 0


def cmd_plan3(args) -> int:
    psi = _load(args.source)
    phi = _load(args.target)
    if not (isinstance(psi, PureState) and isinstance(phi, PureState)):
        raise ValueError("tripartite planning needs pure states")
    plan = plan_tripartite(psi, phi)
    alice, y, z = plan.roles
    _header(
        f"conversion plan: {Path(args.source).name} -> {Path(args.target).name}",
        psi,
    )
    print(f"roles: alice {alice}, teleport partner {y}, convert partner {z}")
    rows = [
        ("rate", plan.r, ""),
        ("comb e_mu", plan.combing_plan.achieved.e_mu,
         plan.combing_plan.branch_a.describe(alice)),
        ("comb e_nu", plan.combing_plan.achieved.e_nu,
         plan.combing_plan.branch_b.describe(alice)),
        ("time-share p", plan.combing_plan.p, ""),
        ("convert with", plan.convert_partner,
         f"consumes {_fmt(plan.convert_entanglement)} bits/copy"),
        ("compress rate", plan.compress_rate, "qubits/copy"),
        ("teleport budget", plan.teleport_budget, f"bits/copy to {y}"),
    ]
    _print_table(rows)
    if plan.teleport_budget <= RATE_ATOL:
        print("  note: no teleport step needed; pure bipartite conversion")
    if args.csv:
        _write_csv(
            args.csv,
            [
                ("rate", plan.r, f"{alice}|{y}{z}"),
                ("comb_e_mu", plan.combing_plan.achieved.e_mu, ""),
                ("comb_e_nu", plan.combing_plan.achieved.e_nu, ""),
                ("time_share_p", plan.combing_plan.p, ""),
                ("compress_rate", plan.compress_rate, ""),
                ("teleport_budget", plan.teleport_budget, ""),
            ],
        )
    return 0


def cmd_plan4(args) -> int:
    psi = _load(args.source)
    phi = _load(args.target)
    n = psi.layout.num_parties
    if n > 4:
        print(
            "not implemented: planning beyond four parties (the bound is "
            "only conjectured there)",
            file=sys.stderr,
        )
        return 1
    if n != 4:
        raise ValueError("plan4 needs four-party states; use rate/plan3 below that")
    if not (isinstance(psi, PureState) and isinstance(phi, PureState)):
        raise ValueError("four-party planning needs pure states")

    if args.alice:
        parties = psi.layout.parties
        if args.alice not in parties:
            raise ValueError(f"unknown party {args.alice!r}")
        bobs = tuple(p for p in parties if p != args.alice)
        plan = plan_four_party(psi, phi, roles=(args.alice, *bobs), pivot=args.pivot)
    else:
        plan = best_four_party_plan(psi, phi, pivot=args.pivot)

    upper, upper_witness = upper_bound_four_party(psi, phi)
    triples = merging_rate_triples(psi, (plan.alice, *plan.bobs))
    oracle = max_min_rate_oracle(triples, phi, (plan.alice, *plan.bobs))
    exact = abs(upper - plan.g) <= RATE_ATOL

    _header(
        f"catalytic plan: {Path(args.source).name} -> {Path(args.target).name}",
        psi,
    )
    print(f"roles: alice {plan.alice}, partners {' '.join(plan.bobs)}")
    rows = [
        ("lower bound", plan.g, _subset_label(plan.bound_witness)),
        ("upper bound", upper, _subset_label(upper_witness)),
        ("exact", exact, ""),
        ("case", plan.case_id, ""),
        ("oracle max-min", oracle, ""),
        ("catalyst budget", plan.catalyst_budget, "bits/copy"),
    ]
    for i, b in enumerate(plan.bobs):
        rows.append(
            (f"achieved {b}", plan.achieved.as_tuple()[i],
             f"target {_fmt(plan.targets[i])}")
        )
    for ex in plan.executions:
        rows.append(
            (f"order {'-'.join(ex.order)}", ex.weight,
             "rates " + " ".join(_fmt(r) for r in ex.rates.as_tuple()))
        )
    _print_table(rows)
    if args.csv:
        csv_rows = [
            ("lower_bound", plan.g, _subset_label(plan.bound_witness)),
            ("upper_bound", upper, _subset_label(upper_witness)),
            ("exact", exact, ""),
            ("case_id", plan.case_id, ""),
            ("oracle_max_min", oracle, ""),
            ("catalyst_budget", plan.catalyst_budget, ""),
        ]
        for i, b in enumerate(plan.bobs):
            csv_rows.append((f"achieved_{b}", plan.achieved.as_tuple()[i], ""))
        for ex in plan.executions:
            csv_rows.append((f"weight_{'-'.join(ex.order)}", ex.weight, ""))
        _write_csv(args.csv, csv_rows)
    return 0


def cmd_ghz(args) -> int:
    sigma = _load(args.target)
    bound = best_ghz_bound(
        sigma,
        pivot=args.pivot,
        alice=args.alice,
        e_c_override=args.ec,
    )
    _header(f"GHZ distillation bound: -> {Path(args.target).name}", sigma)
    print(f"roles: alice {bound.alice}, pivot {bound.pivot}")
    rows = [
        ("rate lower bound", bound.rate_lower, ""),
        ("cost value", bound.e_c_value, bound.surrogate_kind),
    ]
    for party, share in bound.split.items():
        rows.append((f"pair budget {party}", share, ""))
    _print_table(rows)
    if bound.note:
        print(f"  note: {bound.note}")
    if args.csv:
        csv_rows = [
            ("rate_lower", bound.rate_lower, f"{bound.alice}|{bound.pivot}"),
            ("e_c", bound.e_c_value, bound.surrogate_kind),
        ]
        for party, share in bound.split.items():
            csv_rows.append((f"split_{party}", share, ""))
        _write_csv(args.csv, csv_rows)
    return 0


def cmd_verify(args) -> int:
    dims = tuple(int(d) for d in args.dims.lower().split("x"))
    report = run_battery(
        args.suite, args.trials, dims, args.seed, tolerance=args.tolerance
    )
    sys.stdout.write(report.render())
    if args.csv:
        rows = [
            ("suite", report.suite, ""),
            ("trials", report.trials, ""),
            ("failures", len(report.failures), ""),
            ("max_violation", report.max_violation, ""),
        ]
        rows.extend(
            (f"failure_{f.trial}_{f.check_id}", f.amount, f.detail)
            for f in report.failures
        )
        _write_csv(args.csv, rows)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entrates",
        description=(
            "Rate bounds and protocol plans for asymptotic LOCC "
            "transformations of multipartite pure states."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropies", help="reduced entropies of every proper subset")
    p.add_argument("--state", required=True, help="state file")
    p.add_argument("--csv", help="write a quantity,value,witness table")
    p.set_defaults(func=cmd_entropies)

    p = sub.add_parser("rate", help="conversion rate bounds between two states")
    p.add_argument("--from", dest="source", required=True, help="source state file")
    p.add_argument("--to", dest="target", required=True, help="target state file")
    p.add_argument(
        "--einf",
        help="CSV of per-bipartition entanglement values (cut,source,target) "
        "for mixed states",
    )
    p.add_argument("--csv", help="write a quantity,value,witness table")
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("comb", help="plan a tripartite combing transformation")
    p.add_argument("--state", required=True, help="source state file")
    p.add_argument("--e-mu", dest="e_mu", type=float, required=True,
                   help="target bits/copy with the first partner")
    p.add_argument("--e-nu", dest="e_nu", type=float, required=True,
                   help="target bits/copy with the second partner")
    p.add_argument("--alice", help="distributor party (default: first)")
    p.add_argument("--csv", help="write a quantity,value,witness table")
    p.set_defaults(func=cmd_comb)

    p = sub.add_parser("plan3", help="synthesize the tripartite conversion protocol")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--csv", help="write a quantity,value,witness table")
    p.set_defaults(func=cmd_plan3)

    p = sub.add_parser("plan4", help="synthesize the four-party catalytic plan")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--alice", help="fix the distributor (default: maximize)")
    p.add_argument("--pivot", help="partner anchoring the case analysis")
    p.add_argument("--csv", help="write a quantity,value,witness table")
    p.set_defaults(func=cmd_plan4)

    p = sub.add_parser("ghz", help="bound on distilling a target from GHZ states")
    p.add_argument("--to", dest="target", required=True, help="target state file")
    p.add_argument("--pivot", help="pivot party (default: maximize over roles)")
    p.add_argument("--alice", help="distributor party (default: maximize)")
    p.add_argument("--ec", type=float,
                   help="entanglement cost override across the pivot cut")
    p.add_argument("--csv", help="write a quantity,value,witness table")
    p.set_defaults(func=cmd_ghz)

    p = sub.add_parser("verify", help="run a randomized property battery")
    p.add_argument("--suite", required=True, choices=SUITE_NAMES)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--dims", default="2x2x2", help="per-party dims, e.g. 2x2x2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--csv", help="write a quantity,value,witness table")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> None:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except StateFileError as err:
        print(f"error: {err}", file=sys.stderr)
        code = 2
    except _DOMAIN_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        code = 1
    sys.exit(code)
