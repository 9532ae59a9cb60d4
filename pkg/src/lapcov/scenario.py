"""Scenario-file parsing and the JSON encodings shared with reports.

Complex numbers are [re, im] pairs (a bare number is accepted as a real).
Elements are encoded per semigroup family: a list of ints for nat_add, an
int for nat_mult, a number for half_line.  Character points are arrays of
complex pairs.
"""

import json
from dataclasses import dataclass

from .errors import ScenarioError
from .kernels import DEFAULT_TRUNCATION, KernelCoefficients
from .laplace import EvaluationGrid, Tolerances, default_grid
from .measures import AtomicMeasure, Symbol
from .randomvectors import DiscreteRandomVector
from .semigroups import HALF_LINE, NAT_ADD, NAT_MULT, Semigroup, validate_element


def _fail(path: str, message: str):
    raise ScenarioError(f"{path}: {message}")


def parse_complex(value, path: str) -> complex:
    if isinstance(value, bool):
        _fail(path, "expected a complex number, got a boolean")
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(float(value[0]), float(value[1]))
    _fail(path, "expected [re, im] (or a bare real number)")


def parse_point(value, path: str) -> tuple:
    if not isinstance(value, list) or not value:
        _fail(path, "expected a nonempty array of complex coordinates")
    return tuple(parse_complex(v, f"{path}[{i}]") for i, v in enumerate(value))


def parse_element(semigroup: Semigroup, value, path: str):
    try:
        if semigroup.family == NAT_ADD:
            if not isinstance(value, list):
                _fail(path, "nat_add elements are arrays of nonnegative ints")
            return validate_element(semigroup, value)
        if semigroup.family == NAT_MULT:
            if not isinstance(value, int) or isinstance(value, bool):
                _fail(path, "nat_mult elements are positive ints")
            return validate_element(semigroup, value)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            _fail(path, "half_line elements are nonnegative numbers")
        return validate_element(semigroup, value)
    except ScenarioError:
        raise
    except Exception as exc:
        _fail(path, str(exc))


def element_to_json(semigroup: Semigroup, element):
    if semigroup.family == NAT_ADD:
        return [int(x) for x in element]
    if semigroup.family == NAT_MULT:
        return int(element)
    return float(element)


def point_to_json(point) -> list:
    return [[complex(z).real, complex(z).imag] for z in point]


def parse_semigroup(data, path: str = "semigroup") -> Semigroup:
    if not isinstance(data, dict) or "kind" not in data:
        _fail(path, "expected an object with a 'kind' field")
    kind = data["kind"]
    try:
        if kind == NAT_ADD:
            return Semigroup.nat_add(int(data.get("d", 1)))
        if kind == NAT_MULT:
            return Semigroup.nat_mult(int(data.get("primes", 1)))
        if kind == HALF_LINE:
            return Semigroup.half_line()
    except Exception as exc:
        _fail(path, str(exc))
    _fail(f"{path}.kind", f"unknown semigroup kind {kind!r}")


def parse_measure(semigroup: Semigroup, data, path: str = "measure") -> AtomicMeasure:
    if not isinstance(data, dict) or not isinstance(data.get("atoms"), list) or not data["atoms"]:
        _fail(path, "expected an object with a nonempty 'atoms' array")
    atoms = []
    for i, atom in enumerate(data["atoms"]):
        apath = f"{path}.atoms[{i}]"
        if not isinstance(atom, dict) or "point" not in atom or "weight" not in atom:
            _fail(apath, "expected an object with 'point' and 'weight'")
        point = parse_point(atom["point"], f"{apath}.point")
        weight = parse_complex(atom["weight"], f"{apath}.weight")
        atoms.append((point, weight))
    try:
        return AtomicMeasure(semigroup, tuple(atoms))
    except Exception as exc:
        _fail(path, str(exc))


def parse_symbol(data, path: str = "symbol") -> Symbol:
    if data is None:
        return Symbol.constant(1)
    if not isinstance(data, dict) or "kind" not in data:
        _fail(path, "expected an object with a 'kind' field")
    kind = data["kind"]
    if kind == "const":
        return Symbol.constant(parse_complex(data.get("value", 1), f"{path}.value"))
    if kind == "poly":
        terms = data.get("terms")
        if not isinstance(terms, list):
            _fail(f"{path}.terms", "expected an array of {m, c} terms")
        coefficients = {}
        for i, term in enumerate(terms):
            tpath = f"{path}.terms[{i}]"
            if not isinstance(term, dict) or "m" not in term or "c" not in term:
                _fail(tpath, "expected an object with 'm' and 'c'")
            if not isinstance(term["m"], list):
                _fail(f"{tpath}.m", "expected a multi-index array")
            index = tuple(int(x) for x in term["m"])
            coefficients[index] = coefficients.get(index, 0j) + parse_complex(term["c"], f"{tpath}.c")
        return Symbol.polynomial(coefficients)
    if kind == "table":
        entries = data.get("entries")
        if not isinstance(entries, list):
            _fail(f"{path}.entries", "expected an array of {point, value} entries")
        table = {}
        for i, entry in enumerate(entries):
            epath = f"{path}.entries[{i}]"
            if not isinstance(entry, dict) or "point" not in entry or "value" not in entry:
                _fail(epath, "expected an object with 'point' and 'value'")
            table[parse_point(entry["point"], f"{epath}.point")] = parse_complex(
                entry["value"], f"{epath}.value"
            )
        return Symbol.table(table)
    _fail(f"{path}.kind", f"unknown symbol kind {kind!r}")


def parse_grid(semigroup: Semigroup, data, order_override: int = None, path: str = "grid") -> EvaluationGrid:
    if order_override is not None:
        return default_grid(semigroup, order=order_override)
    if data is None:
        return default_grid(semigroup)
    if not isinstance(data, dict):
        _fail(path, "expected an object with 'order' or 'elements'")
    if "elements" in data:
        if not isinstance(data["elements"], list) or not data["elements"]:
            _fail(f"{path}.elements", "expected a nonempty array of elements")
        elements = tuple(
            parse_element(semigroup, el, f"{path}.elements[{i}]")
            for i, el in enumerate(data["elements"])
        )
        return EvaluationGrid(semigroup, elements)
    if "order" in data:
        order = data["order"]
        if not isinstance(order, int) or isinstance(order, bool) or order < 1:
            _fail(f"{path}.order", "expected a positive integer")
        return default_grid(semigroup, order=order)
    _fail(path, "expected 'order' or 'elements'")


def parse_tolerances(data, overrides: dict = None, path: str = "tolerances") -> Tolerances:
    values = {"mass": 1e-10, "residual": 1e-8, "rank": 1e-8}
    if data is not None:
        if not isinstance(data, dict):
            _fail(path, "expected an object")
        for key in values:
            if key in data:
                value = data[key]
                if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
                    _fail(f"{path}.{key}", "expected a positive number")
                values[key] = float(value)
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = float(value)
    try:
        return Tolerances(**values)
    except Exception as exc:
        _fail(path, str(exc))


def parse_random_vector(data, path: str = "random_vector") -> DiscreteRandomVector:
    if not isinstance(data, dict) or not isinstance(data.get("outcomes"), list) or not data["outcomes"]:
        _fail(path, "expected an object with a nonempty 'outcomes' array")
    outcomes = []
    for i, outcome in enumerate(data["outcomes"]):
        opath = f"{path}.outcomes[{i}]"
        if not isinstance(outcome, dict) or not {"p", "x", "y"} <= set(outcome):
            _fail(opath, "expected an object with 'p', 'x' and 'y'")
        p = outcome["p"]
        if isinstance(p, bool) or not isinstance(p, (int, float)):
            _fail(f"{opath}.p", "expected a probability")
        outcomes.append(
            (float(p), parse_point(outcome["x"], f"{opath}.x"), parse_complex(outcome["y"], f"{opath}.y"))
        )
    try:
        return DiscreteRandomVector(tuple(outcomes))
    except Exception as exc:
        _fail(path, str(exc))


def parse_kernel(data, path: str = "kernel"):
    """Returns (KernelCoefficients, f coefficient dict, z grid or None, residual tolerance)."""
    if not isinstance(data, dict):
        _fail(path, "expected an object")
    truncation = data.get("truncation", DEFAULT_TRUNCATION)
    if isinstance(truncation, bool) or not isinstance(truncation, int) or truncation < 0:
        _fail(f"{path}.truncation", "expected a nonnegative integer")
    kind = data.get("kind", "bergman" if "coefficients" not in data else "list")
    if kind == "bergman":
        kernel = KernelCoefficients.bergman(truncation)
    elif kind == "list":
        raw = data.get("coefficients")
        if not isinstance(raw, list) or not raw:
            _fail(f"{path}.coefficients", "expected a nonempty array of {m, n, a} terms")
        terms = {}
        z_dim = w_dim = None
        for i, term in enumerate(raw):
            tpath = f"{path}.coefficients[{i}]"
            if not isinstance(term, dict) or not {"m", "n", "a"} <= set(term):
                _fail(tpath, "expected an object with 'm', 'n' and 'a'")
            if not isinstance(term["m"], list) or not isinstance(term["n"], list):
                _fail(tpath, "'m' and 'n' must be multi-index arrays")
            m = tuple(int(x) for x in term["m"])
            n = tuple(int(x) for x in term["n"])
            z_dim = len(m) if z_dim is None else z_dim
            w_dim = len(n) if w_dim is None else w_dim
            terms[(m, n)] = parse_complex(term["a"], f"{tpath}.a")
        try:
            kernel = KernelCoefficients.from_terms(z_dim, w_dim, truncation, terms)
        except Exception as exc:
            _fail(path, str(exc))
    else:
        _fail(f"{path}.kind", f"unknown kernel kind {kind!r}")

    raw_f = data.get("f")
    if not isinstance(raw_f, list) or not raw_f:
        _fail(f"{path}.f", "expected a nonempty array of {m, b} terms")
    f_coefficients = {}
    for i, term in enumerate(raw_f):
        tpath = f"{path}.f[{i}]"
        if not isinstance(term, dict) or "m" not in term or "b" not in term:
            _fail(tpath, "expected an object with 'm' and 'b'")
        if not isinstance(term["m"], list):
            _fail(f"{tpath}.m", "expected a multi-index array")
        f_coefficients[tuple(int(x) for x in term["m"])] = parse_complex(term["b"], f"{tpath}.b")

    z_grid = None
    if "z_points" in data:
        if not isinstance(data["z_points"], list) or not data["z_points"]:
            _fail(f"{path}.z_points", "expected a nonempty array of points")
        z_grid = tuple(
            parse_point(p, f"{path}.z_points[{i}]") for i, p in enumerate(data["z_points"])
        )

    residual_tol = data.get("residual_tol", 1e-8)
    if isinstance(residual_tol, bool) or not isinstance(residual_tol, (int, float)) or residual_tol <= 0:
        _fail(f"{path}.residual_tol", "expected a positive number")
    return kernel, f_coefficients, z_grid, float(residual_tol)


def parse_pair_function(semigroup: Semigroup, data, path: str = "pd.pair_function"):
    """Explicit pair-function table: {"grid": [...], "values": [{"s","t","v"}, ...]}."""
    from .shifts import PairFunction

    if not isinstance(data, dict) or not isinstance(data.get("values"), list):
        _fail(path, "expected an object with a 'values' array")
    if not isinstance(data.get("grid"), list) or not data["grid"]:
        _fail(f"{path}.grid", "expected a nonempty array of elements")
    grid = parse_grid(semigroup, {"elements": data["grid"]}, path=f"{path}.grid")
    values = {}
    for i, entry in enumerate(data["values"]):
        epath = f"{path}.values[{i}]"
        if not isinstance(entry, dict) or not {"s", "t", "v"} <= set(entry):
            _fail(epath, "expected an object with 's', 't' and 'v'")
        s = parse_element(semigroup, entry["s"], f"{epath}.s")
        t = parse_element(semigroup, entry["t"], f"{epath}.t")
        values[(s, t)] = parse_complex(entry["v"], f"{epath}.v")
    return PairFunction(grid, values)


def parse_shift_operators(semigroup: Semigroup, data, path: str = "pd.operators"):
    """Operators as term lists: [[{"a","b","coeff"}, ...], ...]."""
    from .shifts import ShiftCombination

    if not isinstance(data, list) or not data:
        _fail(path, "expected a nonempty array of term lists")
    operators = []
    for i, raw_terms in enumerate(data):
        opath = f"{path}[{i}]"
        if not isinstance(raw_terms, list) or not raw_terms:
            _fail(opath, "expected a nonempty term list")
        terms = []
        for j, term in enumerate(raw_terms):
            tpath = f"{opath}[{j}]"
            if not isinstance(term, dict) or not {"a", "b", "coeff"} <= set(term):
                _fail(tpath, "expected an object with 'a', 'b' and 'coeff'")
            terms.append(
                (
                    parse_element(semigroup, term["a"], f"{tpath}.a"),
                    parse_element(semigroup, term["b"], f"{tpath}.b"),
                    parse_complex(term["coeff"], f"{tpath}.coeff"),
                )
            )
        operators.append(ShiftCombination(tuple(terms)))
    return operators


@dataclass
class Scenario:
    """Parsed scenario: the engine inputs plus the raw command sections."""

    semigroup: Semigroup
    measure: AtomicMeasure
    symbol: Symbol
    grid: EvaluationGrid
    tolerances: Tolerances
    raw: dict


def parse_scenario(data, grid_order: int = None, tol_overrides: dict = None) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario root must be a JSON object")
    semigroup = measure = grid = None
    if "semigroup" in data:
        semigroup = parse_semigroup(data["semigroup"])
        if "measure" in data:
            measure = parse_measure(semigroup, data["measure"])
        grid = parse_grid(semigroup, data.get("grid"), order_override=grid_order)
    symbol = parse_symbol(data.get("symbol")) if "symbol" in data else Symbol.constant(1)
    tolerances = parse_tolerances(data.get("tolerances"), overrides=tol_overrides)
    return Scenario(semigroup, measure, symbol, grid, tolerances, data)


def load_scenario(source_path: str, grid_order: int = None, tol_overrides: dict = None) -> Scenario:
    try:
        with open(source_path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario is not valid JSON: {exc}") from exc
    return parse_scenario(data, grid_order=grid_order, tol_overrides=tol_overrides)
