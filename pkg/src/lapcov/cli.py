"""Command-line entry point: scenario JSON in, deterministic report JSON out.

Reports go to stdout, a one-line human summary to stderr; ``--format text``
replaces the JSON with an indented text rendering.  Exit codes: 0 for a clean
verdict, 2 for a degenerate verdict, 1 for any error (reported as a JSON
object with a machine-readable code).
"""

import argparse
import sys

from . import __version__
from .errors import (
    ExpectationYZero,
    FMuIntegralZero,
    GridTooLarge,
    LapcovError,
    MissingGridValue,
    PrimeOutOfRange,
    RankDeficientPencil,
    ScenarioError,
    SymbolUndefinedAtAtom,
    ZeroWeightAtom,
)
from .kernels import DEGENERATE as KERNEL_DEGENERATE
from .kernels import kernel_recover, truncation_tail_bound
from .laplace import (
    NOT_POINT_MASS,
    POINT_MASS,
    decide_covariance,
    laplace_transform,
    multiplicativity_defect,
    recover_point_mass,
    resolve_point,
)
from .measures import total_mass
from .randomvectors import CONSTANT, decide_constant_vector
from .report import dumps, encode_complex, format_float
from .scenario import (
    element_to_json,
    load_scenario,
    parse_element,
    parse_kernel,
    parse_pair_function,
    parse_random_vector,
    parse_shift_operators,
    point_to_json,
)
from .semigroups import NAT_ADD, identity
from .shifts import (
    admissible_generator,
    bv_norm,
    pair_function_from_measure,
    positive_definite_check,
    semicharacter_defect,
)
from .toeplitz import (
    DEFAULT_MATRIX_ORDER,
    character_value_from_atom,
    disc_measure,
    luecking_check,
    moment_matrix,
    prony_recover,
    rank_one_check,
    toeplitz_matrix,
)

import numpy as np

_ERROR_CODES = {
    ScenarioError: "scenario_invalid",
    FMuIntegralZero: "f_mu_integral_zero",
    ExpectationYZero: "expectation_y_zero",
    PrimeOutOfRange: "prime_out_of_range",
    GridTooLarge: "grid_too_large",
    SymbolUndefinedAtAtom: "symbol_undefined",
    MissingGridValue: "missing_grid_value",
    ZeroWeightAtom: "zero_weight_atom",
    RankDeficientPencil: "rank_deficient_pencil",
}


class _CommandError(LapcovError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _require(scenario, field: str):
    value = getattr(scenario, field, None)
    if value is None:
        raise _CommandError("scenario_invalid", f"this command needs a '{field}' section")
    return value


def _grid_fields(grid) -> dict:
    return {
        "grid_order": grid.order if grid.order is not None else None,
        "grid_size": len(grid.elements),
    }


def _character_table_json(semigroup, grid, table) -> list:
    return [
        {"s": element_to_json(semigroup, el), "value": encode_complex(table[el])}
        for el in grid.pairs_closure
    ]


def _cmd_transform(scenario, args):
    mu = _require(scenario, "measure")
    grid = scenario.grid
    values = [
        {
            "s": element_to_json(mu.semigroup, s),
            "t": element_to_json(mu.semigroup, t),
            "v": encode_complex(laplace_transform(mu, scenario.symbol, s, t)),
        }
        for s in grid.elements
        for t in grid.elements
    ]
    report = {
        "command": "transform",
        "grid": [element_to_json(mu.semigroup, el) for el in grid.elements],
        "values": values,
    }
    return report, 0, f"tabulated {len(values)} transform values"


def _cmd_covariance(scenario, args):
    mu = _require(scenario, "measure")
    verdict = decide_covariance(mu, scenario.symbol, scenario.grid, scenario.tolerances)
    sg = mu.semigroup
    report = {"command": "covariance", "verdict": verdict.kind}
    exit_code = 0
    if verdict.kind == POINT_MASS:
        report["c"] = encode_complex(verdict.mass)
        report["zeta"] = point_to_json(verdict.point) if verdict.point_resolved else None
        report["zeta_resolved"] = verdict.point_resolved
        report["max_residual"] = verdict.max_residual
        report["multiplicativity_defect"] = verdict.character_defect
        report["gamma"] = _character_table_json(sg, scenario.grid, verdict.character)
        report["certification"] = "relative_to_grid"
        summary = f"point_mass (normalized max residual {format_float(verdict.max_residual)})"
    elif verdict.kind == NOT_POINT_MASS:
        witness_s, witness_t = verdict.witness
        report["witness_s"] = element_to_json(sg, witness_s)
        report["witness_t"] = element_to_json(sg, witness_t)
        report["residual"] = encode_complex(verdict.witness_residual)
        report["max_residual"] = verdict.max_residual
        report["certification"] = "witness"
        summary = f"not_point_mass (witness residual {format_float(abs(verdict.witness_residual))})"
    else:
        report["case"] = verdict.degenerate_case
        exit_code = 2
        summary = f"degenerate ({verdict.degenerate_case})"
    report.update(_grid_fields(scenario.grid))
    report["symbol_vanishes_on_atom"] = verdict.symbol_vanishes_on_atom
    return report, exit_code, f"covariance: {summary}"


def _cmd_recover(scenario, args):
    mu = _require(scenario, "measure")
    tol = scenario.tolerances
    mass = total_mass(mu)
    weight_scale = sum(abs(w) for w in mu.weights)
    if abs(mass) < tol.mass * weight_scale:
        raise _CommandError("mass_zero", "total mass is numerically zero; nothing to recover")
    mass, table = recover_point_mass(mu, scenario.symbol, scenario.grid, tol)
    point, resolved = resolve_point(scenario.grid, table, mu.semigroup)
    defect = multiplicativity_defect(table, scenario.grid)
    report = {
        "command": "recover",
        "c": encode_complex(mass),
        "zeta": point_to_json(point) if resolved else None,
        "zeta_resolved": resolved,
        "multiplicativity_defect": defect,
        "gamma": _character_table_json(mu.semigroup, scenario.grid, table),
    }
    report.update(_grid_fields(scenario.grid))
    return report, 0, f"recover: multiplicativity defect {format_float(defect)}"


def _cmd_toeplitz(scenario, args):
    mu = _require(scenario, "measure")
    order = args.matrix_order or scenario.raw.get("toeplitz", {}).get(
        "matrix_order", DEFAULT_MATRIX_ORDER
    )
    rank_tol = scenario.tolerances.rank
    per_element = []
    for s in scenario.grid.elements:
        nu = disc_measure(mu, scenario.symbol, s)
        sigma = np.linalg.svd(toeplitz_matrix(nu, order), compute_uv=False)
        check = luecking_check(nu, order, rank_tol)
        per_element.append(
            {
                "s": element_to_json(mu.semigroup, s),
                "singular_values": [float(v) for v in sigma],
                "moment_rank": check.rank,
                "atom_count": check.atom_count,
                "luecking_agree": check.agree,
                "rank_one_ratio": rank_one_check(mu, scenario.symbol, s, order),
            }
        )
    report = {
        "command": "toeplitz",
        "matrix_order": int(order),
        "rank_tol": float(rank_tol),
        "per_element": per_element,
    }
    if args.moments_csv:
        element = identity(mu.semigroup)
        if args.csv_element is not None:
            import json as _json

            element = parse_element(mu.semigroup, _json.loads(args.csv_element), "--csv-element")
        matrix = moment_matrix(disc_measure(mu, scenario.symbol, element), order)
        with open(args.moments_csv, "w", encoding="utf-8") as handle:
            for row in matrix:
                cells = []
                for value in row:
                    cells.append(format_float(value.real))
                    cells.append(format_float(value.imag))
                handle.write(",".join(cells) + "\n")
        report["moments_csv"] = args.moments_csv
    agree_count = sum(1 for entry in per_element if entry["luecking_agree"])
    return report, 0, f"toeplitz: rank/support agreement on {agree_count}/{len(per_element)} elements"


def _cmd_prony(scenario, args):
    mu = _require(scenario, "measure")
    k_max = args.k_max or scenario.raw.get("prony", {}).get("k_max", 6)
    rank_tol = scenario.tolerances.rank
    direct_table = None
    try:
        _, direct_table = recover_point_mass(mu, scenario.symbol, scenario.grid, scenario.tolerances)
    except FMuIntegralZero:
        pass
    per_element = []
    for s in scenario.grid.elements:
        nu = disc_measure(mu, scenario.symbol, s)
        result = prony_recover(nu, k_max=k_max, rel_tol=rank_tol)
        entry = {
            "s": element_to_json(mu.semigroup, s),
            "rank": result.rank,
            "atoms": [
                {"position": encode_complex(a), "weight": encode_complex(m)}
                for a, m in result.atoms
            ],
            "reconstruction_residual": result.residual,
        }
        from_atom = direct = None
        if result.rank == 1:
            from_atom = character_value_from_atom(mu, s, result.atoms[0][0])
        if direct_table is not None:
            direct = direct_table.get(s)
        entry["character_from_atom"] = encode_complex(from_atom) if from_atom is not None else None
        entry["character_direct"] = encode_complex(direct) if direct is not None else None
        entry["route_difference"] = (
            abs(from_atom - direct) if from_atom is not None and direct is not None else None
        )
        per_element.append(entry)
    report = {"command": "prony", "k_max": int(k_max), "per_element": per_element}
    diffs = [e["route_difference"] for e in per_element if e["route_difference"] is not None]
    summary = (
        f"prony: max route difference {format_float(max(diffs))}"
        if diffs
        else "prony: no single-atom elements to cross-check"
    )
    return report, 0, summary


def _cmd_pd(scenario, args):
    section = scenario.raw.get("pd", {})
    sg = scenario.semigroup
    if sg is None:
        raise _CommandError("scenario_invalid", "this command needs a 'semigroup' section")
    if "pair_function" in section:
        f = parse_pair_function(sg, section["pair_function"])
        grid = f.grid
    else:
        mu = _require(scenario, "measure")
        grid = scenario.grid
        f = pair_function_from_measure(mu, grid, scenario.symbol)
    e = identity(sg)
    if "points" in section:
        points = [
            (
                parse_element(sg, entry["s"], f"pd.points[{i}].s"),
                parse_element(sg, entry["t"], f"pd.points[{i}].t"),
            )
            for i, entry in enumerate(section["points"])
        ]
    else:
        points = [(s, e) for s in grid.elements[:6]]

    definiteness = positive_definite_check(f, points)
    mass = f(e, e)
    defect = None
    if abs(mass) > 0:
        scaled = {key: value / mass for key, value in f.values.items()}
        defect = semicharacter_defect(type(f)(grid, scaled), points)

    report = {
        "command": "pd",
        "points": [
            {"s": element_to_json(sg, s), "t": element_to_json(sg, t)} for s, t in points
        ],
        "min_eigenvalue": definiteness.min_eigenvalue,
        "is_positive_definite": definiteness.is_positive,
        "gram_asymmetry": definiteness.asymmetry,
        "semicharacter_defect": defect,
    }
    if "operators" in section:
        operators = parse_shift_operators(sg, section["operators"])
        report["bv_operator_count"] = len(operators)
    else:
        if "generator" in section:
            pair = (
                parse_element(sg, section["generator"]["a"], "pd.generator.a"),
                parse_element(sg, section["generator"]["b"], "pd.generator.b"),
            )
        else:
            non_identity = [s for s in grid.elements if s != e]
            pair = (non_identity[0] if non_identity else e, e)
        operators = [admissible_generator(sg, pair, phase) for phase in (1, -1, 1j, -1j)]
        report["bv_generator_pair"] = {
            "a": element_to_json(sg, pair[0]),
            "b": element_to_json(sg, pair[1]),
        }
    report["bv_norm"] = bv_norm(f, operators)
    return report, 0, f"pd: min eigenvalue {format_float(definiteness.min_eigenvalue)}"


def _cmd_random_vector(scenario, args):
    section = scenario.raw.get("random_vector")
    if section is None:
        raise _CommandError("scenario_invalid", "this command needs a 'random_vector' section")
    rv = parse_random_vector(section)
    max_order = section.get("max_order", 3)
    verdict = decide_constant_vector(rv, max_order=max_order, tol=scenario.tolerances)
    report = {"command": "random_vector", "verdict": verdict.kind, "max_order": int(max_order)}
    if verdict.kind == CONSTANT:
        report["zeta"] = point_to_json(verdict.point)
        summary = "random_vector: constant"
    else:
        m, n = verdict.witness
        report["witness_m"] = [int(i) for i in m]
        report["witness_n"] = [int(i) for i in n]
        report["residual"] = encode_complex(verdict.residual)
        summary = f"random_vector: not constant (residual {format_float(abs(verdict.residual))})"
    return report, 0, summary


def _cmd_kernel(scenario, args):
    mu = _require(scenario, "measure")
    if mu.semigroup.family != NAT_ADD:
        raise _CommandError("scenario_invalid", "the kernel command needs a nat_add measure")
    section = scenario.raw.get("kernel")
    if section is None:
        raise _CommandError("scenario_invalid", "this command needs a 'kernel' section")
    kernel, f_coefficients, z_grid, residual_tol = parse_kernel(section)
    verdict = kernel_recover(
        kernel, f_coefficients, mu, z_grid=z_grid, residual_tol=residual_tol, tol=scenario.tolerances
    )
    if z_grid is None:
        from .kernels import default_z_grid

        z_grid = default_z_grid(kernel.z_dim)
    z_norm = max((sum(abs(v) ** 2 for v in z) ** 0.5 for z in z_grid), default=0.0)
    w_norm = max((sum(abs(v) ** 2 for v in p) ** 0.5 for p in mu.points), default=0.0)
    tail = truncation_tail_bound(kernel, z_norm, w_norm) if z_norm * w_norm <= 0.25 else None
    report = {
        "command": "kernel",
        "verdict": verdict.kind,
        "truncation_tail_bound": tail,
        "c": encode_complex(verdict.mass) if verdict.mass is not None else None,
        "zeta": point_to_json(verdict.point) if verdict.point is not None else None,
        "phase": verdict.phase,
        "max_residual": verdict.max_residual,
        "witness_z": point_to_json(verdict.witness_z) if verdict.witness_z is not None else None,
        "reason": verdict.reason,
    }
    exit_code = 2 if verdict.kind == KERNEL_DEGENERATE else 0
    return report, exit_code, f"kernel: {verdict.kind}"


_COMMANDS = {
    "transform": _cmd_transform,
    "covariance": _cmd_covariance,
    "recover": _cmd_recover,
    "toeplitz": _cmd_toeplitz,
    "prony": _cmd_prony,
    "pd": _cmd_pd,
    "random-vector": _cmd_random_vector,
    "kernel": _cmd_kernel,
}


def _render_text(value, indent: int = 0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_render_scalar(item)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, dict) or (
                isinstance(item, list) and any(isinstance(v, (dict, list)) for v in item)
            ):
                lines.append(f"{pad}-")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_render_scalar(item)}")
    else:
        lines.append(f"{pad}{_render_scalar(value)}")
    return lines


def _render_scalar(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, list):
        return "[" + ", ".join(_render_scalar(v) for v in value) + "]"
    return str(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lapcov",
        description="Covariance-equation testing and point-mass recovery for atomic measures",
    )
    parser.add_argument("--version", action="version", version=f"lapcov {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("transform", "tabulate the generalized Laplace transform over the grid"),
        ("covariance", "decide the covariance equation"),
        ("recover", "recover the Dirac constant and candidate character"),
        ("toeplitz", "singular-value profiles, rank/support and rank-one checks"),
        ("prony", "matrix-pencil atom recovery and route agreement"),
        ("pd", "positive definiteness, semicharacter defect and variation norm"),
        ("random-vector", "decide whether a discrete random vector is constant"),
        ("kernel", "decide the analytic-kernel extremal property"),
    ):
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("scenario", help="path to a scenario JSON file")
        sub.add_argument("--grid-order", type=int, default=None)
        sub.add_argument("--tol-res", type=float, default=None)
        sub.add_argument("--tol-mass", type=float, default=None)
        sub.add_argument("--rank-tol", type=float, default=None)
        sub.add_argument("--matrix-order", type=int, default=None)
        sub.add_argument("--format", choices=("json", "text"), default="json")
        if name == "toeplitz":
            sub.add_argument("--moments-csv", default=None, help="export a moment matrix as CSV")
            sub.add_argument(
                "--csv-element", default=None, help="JSON element for the CSV export (default identity)"
            )
        if name == "prony":
            sub.add_argument("--k-max", type=int, default=None)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1

    try:
        scenario = load_scenario(
            args.scenario,
            grid_order=args.grid_order,
            tol_overrides={
                "mass": args.tol_mass,
                "residual": args.tol_res,
                "rank": args.rank_tol,
            },
        )
        report, exit_code, summary = _COMMANDS[args.command](scenario, args)
    except LapcovError as exc:
        code = getattr(exc, "code", None) or _ERROR_CODES.get(type(exc), "internal_error")
        error_report = {"error": {"code": code, "message": str(exc)}}
        stdout.write(dumps(error_report))
        print(f"error: {exc}", file=stderr)
        return 1

    if args.format == "json":
        stdout.write(dumps(report))
        print(summary, file=stderr)
    else:
        stdout.write("\n".join(_render_text(report)) + "\n")
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
