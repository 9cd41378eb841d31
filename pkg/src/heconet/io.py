"""File formats: XML system descriptions, JSON incidence and scenario
documents, CSV result tables, and DOT graph export.

XML schema (all ids are non-empty strings; unknown elements and
attributes are rejected with their line and column):

    <system name="...">
      <operand id="man" name="manufactured products" unit="M$"/>
      <resource id="economy" name="Economy" kind="transformation"/>
      <process id="p1" name="..." kind="transformation">
        <input operand="man" coeff="0.35"/>
        <output operand="man" coeff="1.0"/>
      </process>
      <capability id="c1" resource="economy" process="p1" duration="0">
        <pull operand="man" buffer="economy"/>
        <push operand="man" buffer="economy"/>
      </capability>
    </system>

A capability without explicit <pull>/<push> children routes every
process input and output through its own resource, which therefore
must be a buffer.  Writing always emits the explicit form, so a
written document re-reads to a structurally equal model.

Numbers serialize with shortest round-trip decimal encoding (repr),
so JSON round-trips are bit-exact.  CSV output always uses '.' as the
decimal point, ',' as the separator, and '\\n' line endings.
"""

import csv
import io as _io
import json
import warnings
import xml.parsers.expat
from dataclasses import dataclass, field
from xml.sax.saxutils import quoteattr

import numpy as np

from heconet.core import (Capability, Flow, Operand, Process, ProcessKind,
                          Resource, ResourceKind, SystemModel, require_valid)
from heconet.incidence import IncidenceMatrices, matricize
from heconet.rcot import RcotSolution

INCIDENCE_SCHEMA = "heconet-incidence/1"
SCENARIO_SCHEMA = "heconet-scenario/1"
SCHEDULE_SCHEMA = "heconet-schedule/1"


class XmlFormatError(ValueError):
    """Malformed or off-schema XML; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class JsonFormatError(ValueError):
    pass


class ScenarioError(ValueError):
    pass


# --------------------------------------------------------------------------
# XML system model

_ALLOWED_ATTRS = {
    "system": {"name"},
    "operand": {"id", "name", "unit"},
    "resource": {"id", "name", "kind"},
    "process": {"id", "name", "kind"},
    "input": {"operand", "coeff"},
    "output": {"operand", "coeff"},
    "capability": {"id", "resource", "process", "duration"},
    "pull": {"operand", "buffer"},
    "push": {"operand", "buffer"},
}

_PARENT_OF = {
    "operand": "system",
    "resource": "system",
    "process": "system",
    "capability": "system",
    "input": "process",
    "output": "process",
    "pull": "capability",
    "push": "capability",
}


class _CapabilityDraft:
    def __init__(self, attrs):
        self.attrs = attrs
        self.pull = {}
        self.push = {}


class _XmlLoader:
    def __init__(self):
        self.parser = xml.parsers.expat.ParserCreate()
        self.parser.StartElementHandler = self._start
        self.parser.EndElementHandler = self._end
        self.parser.CharacterDataHandler = self._chars
        self.stack = []
        self.operands = []
        self.resources = []
        self.processes = []
        self.caps = []
        self.current_process = None
        self.current_flows = None
        self.current_cap = None

    def _where(self):
        return self.parser.CurrentLineNumber, self.parser.CurrentColumnNumber + 1

    def _fail(self, message: str):
        line, col = self._where()
        raise XmlFormatError(message, line, col)

    def _require(self, attrs: dict, name: str, attr: str) -> str:
        if attr not in attrs:
            self._fail(f"<{name}> is missing required attribute '{attr}'")
        return attrs[attr]

    def _number(self, text: str, name: str, attr: str) -> float:
        try:
            return float(text)
        except ValueError:
            self._fail(f"<{name}> attribute '{attr}' is not a number: {text!r}")

    def _start(self, name, attrs):
        parent = self.stack[-1] if self.stack else None
        if name not in _ALLOWED_ATTRS:
            self._fail(f"unknown element <{name}>")
        if parent is None:
            if name != "system":
                self._fail(f"root element must be <system>, got <{name}>")
        elif _PARENT_OF.get(name) != parent:
            self._fail(f"<{name}> is not allowed inside <{parent}>")
        unknown = set(attrs) - _ALLOWED_ATTRS[name]
        if unknown:
            self._fail(f"<{name}> has unknown attribute '{sorted(unknown)[0]}'")
        self.stack.append(name)
        handler = getattr(self, f"_on_{name}", None)
        if handler is not None:
            handler(attrs)

    def _end(self, name):
        self.stack.pop()
        if name == "process":
            proc_id, proc_name, kind, inputs, outputs = self.current_process
            try:
                self.processes.append(Process(proc_id, proc_name, kind,
                                              tuple(inputs), tuple(outputs)))
            except ValueError as exc:
                self._fail(str(exc))
            self.current_process = None
        elif name == "capability":
            self.caps.append(self.current_cap)
            self.current_cap = None

    def _chars(self, data):
        if data.strip():
            self._fail(f"unexpected text content: {data.strip()[:40]!r}")

    def _on_system(self, attrs):
        pass

    def _on_operand(self, attrs):
        self.operands.append(Operand(
            self._require(attrs, "operand", "id"),
            attrs.get("name", ""), attrs.get("unit", "")))

    def _on_resource(self, attrs):
        kind_text = self._require(attrs, "resource", "kind")
        try:
            kind = ResourceKind(kind_text)
        except ValueError:
            allowed = ", ".join(k.value for k in ResourceKind)
            self._fail(f"unknown resource kind {kind_text!r}; expected one of: {allowed}")
        self.resources.append(Resource(
            self._require(attrs, "resource", "id"), attrs.get("name", ""), kind))

    def _on_process(self, attrs):
        kind_text = attrs.get("kind", ProcessKind.TRANSFORMATION.value)
        try:
            kind = ProcessKind(kind_text)
        except ValueError:
            allowed = ", ".join(k.value for k in ProcessKind)
            self._fail(f"unknown process kind {kind_text!r}; expected one of: {allowed}")
        self.current_process = (self._require(attrs, "process", "id"),
                                attrs.get("name", ""), kind, [], [])

    def _on_flow(self, name, attrs, bucket):
        operand = self._require(attrs, name, "operand")
        coeff = self._number(self._require(attrs, name, "coeff"), name, "coeff")
        try:
            bucket.append(Flow(operand, coeff))
        except ValueError as exc:
            self._fail(str(exc))

    def _on_input(self, attrs):
        self._on_flow("input", attrs, self.current_process[3])

    def _on_output(self, attrs):
        self._on_flow("output", attrs, self.current_process[4])

    def _on_capability(self, attrs):
        if "duration" in attrs:
            text = attrs["duration"]
            try:
                duration = int(text)
            except ValueError:
                self._fail(f"<capability> duration is not an integer: {text!r}")
        else:
            duration = 0
        draft = _CapabilityDraft({
            "id": attrs.get("id", ""),
            "resource": self._require(attrs, "capability", "resource"),
            "process": self._require(attrs, "capability", "process"),
            "duration": duration,
        })
        self.current_cap = draft

    def _on_pull(self, attrs):
        self.current_cap.pull[self._require(attrs, "pull", "operand")] = \
            self._require(attrs, "pull", "buffer")

    def _on_push(self, attrs):
        self.current_cap.push[self._require(attrs, "push", "operand")] = \
            self._require(attrs, "push", "buffer")

    def build(self) -> SystemModel:
        by_process = {p.id: p for p in self.processes}
        caps = []
        for draft in self.caps:
            a = draft.attrs
            pull, push = dict(draft.pull), dict(draft.push)
            proc = by_process.get(a["process"])
            if proc is not None:
                # implicit routing through the capability's own resource
                for fl in proc.inputs:
                    pull.setdefault(fl.operand, a["resource"])
                for fl in proc.outputs:
                    push.setdefault(fl.operand, a["resource"])
            cap_id = a["id"] or f"{a['resource']}:{a['process']}"
            caps.append(Capability(cap_id, a["resource"], a["process"],
                                   pull, push, a["duration"]))
        return SystemModel(tuple(self.operands), tuple(self.resources),
                           tuple(self.processes), tuple(caps))


def parse_system_xml(data) -> SystemModel:
    """Parse an XML system description and validate the result.

    Accepts bytes (UTF-8) or str.  Malformed or off-schema input raises
    XmlFormatError with line and column; a well-formed document whose
    model breaks a structural rule raises ModelError listing every
    violation.
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    loader = _XmlLoader()
    try:
        loader.parser.Parse(data, True)
    except xml.parsers.expat.ExpatError as exc:
        raise XmlFormatError(
            xml.parsers.expat.errors.messages[exc.code], exc.lineno, exc.offset + 1
        ) from None
    model = loader.build()
    require_valid(model)
    return model


def _attr(name: str, value: str) -> str:
    return f" {name}={quoteattr(value)}"


def write_system_xml(model: SystemModel) -> bytes:
    """Serialize a model; parse_system_xml on the result reproduces it."""
    out = ["<?xml version='1.0' encoding='utf-8'?>", "<system>"]
    for op in model.operands:
        line = f"  <operand{_attr('id', op.id)}"
        if op.name:
            line += _attr("name", op.name)
        if op.unit:
            line += _attr("unit", op.unit)
        out.append(line + "/>")
    for res in model.resources:
        line = f"  <resource{_attr('id', res.id)}"
        if res.name:
            line += _attr("name", res.name)
        out.append(line + _attr("kind", res.kind.value) + "/>")
    for proc in model.processes:
        line = f"  <process{_attr('id', proc.id)}"
        if proc.name:
            line += _attr("name", proc.name)
        out.append(line + _attr("kind", proc.kind.value) + ">")
        for tag, flows in (("input", proc.inputs), ("output", proc.outputs)):
            for fl in flows:
                out.append(f"    <{tag}{_attr('operand', fl.operand)}"
                           f"{_attr('coeff', repr(fl.coeff))}/>")
        out.append("  </process>")
    for cap in model.capabilities:
        line = (f"  <capability{_attr('id', cap.id)}{_attr('resource', cap.resource)}"
                f"{_attr('process', cap.process)}")
        if cap.duration:
            line += _attr("duration", str(cap.duration))
        out.append(line + ">")
        for tag, routing in (("pull", cap.pull), ("push", cap.push)):
            for operand, buffer in routing.items():
                out.append(f"    <{tag}{_attr('operand', operand)}"
                           f"{_attr('buffer', buffer)}/>")
        out.append("  </capability>")
    out.append("</system>")
    return ("\n".join(out) + "\n").encode("utf-8")


# --------------------------------------------------------------------------
# Incidence JSON

def write_incidence_json(inc: IncidenceMatrices) -> bytes:
    if inc.n_places == 0 or len(inc.capabilities) == 0:
        raise ValueError(
            f"refusing to serialize a degenerate {inc.m_plus.shape} incidence")
    doc = {
        "schema": INCIDENCE_SCHEMA,
        "operands": list(inc.operands),
        "buffers": list(inc.buffers),
        "capabilities": list(inc.capabilities),
        "shape": [inc.n_places, len(inc.capabilities)],
        "m_plus": [[float(v) for v in row] for row in inc.m_plus],
        "m_minus": [[float(v) for v in row] for row in inc.m_minus],
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def _load_json(data, what: str) -> dict:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise JsonFormatError(f"invalid {what} JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise JsonFormatError(f"{what} document must be a JSON object")
    return doc


def _expect_schema(doc: dict, expected: str, what: str):
    got = doc.get("schema")
    if got != expected:
        raise JsonFormatError(
            f"{what} schema mismatch: expected {expected!r}, got {got!r}")


def _string_list(doc: dict, key: str, what: str) -> list:
    value = doc.get(key)
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise JsonFormatError(f"{what} field {key!r} must be a list of strings")
    return value


def _number_rows(doc: dict, key: str, shape, what: str) -> np.ndarray:
    value = doc.get(key)
    if not isinstance(value, list) or len(value) != shape[0]:
        raise JsonFormatError(f"{what} field {key!r} must be a list of {shape[0]} rows")
    out = np.zeros(shape)
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != shape[1]:
            raise JsonFormatError(
                f"{what} field {key!r} row {i} must have {shape[1]} entries")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise JsonFormatError(f"{what} field {key!r}[{i}][{j}] is not a number")
            out[i, j] = v
    return out


def read_incidence_json(data) -> IncidenceMatrices:
    doc = _load_json(data, "incidence")
    _expect_schema(doc, INCIDENCE_SCHEMA, "incidence")
    operands = _string_list(doc, "operands", "incidence")
    buffers = _string_list(doc, "buffers", "incidence")
    capabilities = _string_list(doc, "capabilities", "incidence")
    shape = doc.get("shape")
    if (not isinstance(shape, list) or len(shape) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in shape)):
        raise JsonFormatError("incidence field 'shape' must be [rows, cols]")
    rows, cols = shape
    if rows == 0 or cols == 0:
        raise JsonFormatError(f"degenerate incidence shape {shape}")
    if rows != len(operands) * len(buffers):
        raise JsonFormatError(
            f"shape {shape} disagrees with {len(operands)} operands x {len(buffers)} buffers")
    if cols != len(capabilities):
        raise JsonFormatError(f"shape {shape} disagrees with {len(capabilities)} capabilities")
    m_plus = _number_rows(doc, "m_plus", (rows, cols), "incidence")
    m_minus = _number_rows(doc, "m_minus", (rows, cols), "incidence")
    return IncidenceMatrices(
        m_plus=m_plus, m_minus=m_minus, m=matricize(m_plus, m_minus),
        operands=tuple(operands), buffers=tuple(buffers),
        capabilities=tuple(capabilities))


# --------------------------------------------------------------------------
# Scenario JSON

@dataclass(frozen=True)
class Scenario:
    """Economic data for one solve: named demand, factor availability and
    prices, plus optional horizon/boundary/pin data for time-domain runs."""

    demand: dict
    availability: dict
    prices: dict
    horizon: int = 1
    dt: float = 1.0
    boundary: dict = field(default_factory=dict)
    pins: dict = field(default_factory=dict)


def _named_numbers(doc: dict, key: str, required: bool) -> dict:
    value = doc.get(key)
    if value is None:
        if required:
            raise ScenarioError(f"scenario is missing required field {key!r}")
        return {}
    if not isinstance(value, dict):
        raise ScenarioError(f"scenario field {key!r} must be an object")
    out = {}
    for name, v in value.items():
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ScenarioError(f"scenario field {key!r}[{name!r}] is not a number")
        if v < 0:
            raise ScenarioError(f"scenario field {key!r}[{name!r}] must be >= 0")
        out[name] = float(v)
    return out


def load_scenario(data) -> Scenario:
    doc = _load_json(data, "scenario")
    _expect_schema(doc, SCENARIO_SCHEMA, "scenario")
    demand = _named_numbers(doc, "demand", required=True)
    availability = _named_numbers(doc, "availability", required=True)
    prices = _named_numbers(doc, "prices", required=True)
    if set(availability) != set(prices):
        raise ScenarioError(
            "scenario 'availability' and 'prices' must name the same factors")
    overlap = set(demand) & set(availability)
    if overlap:
        raise ScenarioError(
            f"operands cannot be both products and factors: {sorted(overlap)}")
    horizon = doc.get("horizon", 1)
    if not isinstance(horizon, int) or isinstance(horizon, bool) or horizon < 1:
        raise ScenarioError("scenario 'horizon' must be a positive integer")
    dt = doc.get("dt", 1.0)
    if isinstance(dt, bool) or not isinstance(dt, (int, float)) or dt <= 0:
        raise ScenarioError("scenario 'dt' must be a positive number")
    boundary = doc.get("boundary", {})
    pins = doc.get("pins", {})
    if not isinstance(boundary, dict) or not isinstance(pins, dict):
        raise ScenarioError("scenario 'boundary' and 'pins' must be objects")
    return Scenario(demand=demand, availability=availability, prices=prices,
                    horizon=horizon, dt=float(dt), boundary=boundary, pins=pins)


def vectors_from_scenario(model: SystemModel, scenario: Scenario):
    """Order scenario data by the model's operand declaration order.

    Returns (y, f, pi, product_ids, factor_ids).  Products must be
    declared before factors so that incidence rows split cleanly.
    """
    ids = [op.id for op in model.operands]
    missing = (set(scenario.demand) | set(scenario.availability)) - set(ids)
    if missing:
        raise ScenarioError(f"scenario names unknown operands: {sorted(missing)}")
    uncovered = set(ids) - set(scenario.demand) - set(scenario.availability)
    if uncovered:
        raise ScenarioError(
            f"scenario covers neither demand nor availability for: {sorted(uncovered)}")
    products = [i for i in ids if i in scenario.demand]
    factors = [i for i in ids if i in scenario.availability]
    if ids != products + factors:
        raise ScenarioError(
            "operands must be declared products first, then factors; "
            f"declaration order is {ids}")
    y = np.array([scenario.demand[i] for i in products])
    f = np.array([scenario.availability[i] for i in factors])
    pi = np.array([scenario.prices[i] for i in factors])
    return y, f, pi, tuple(products), tuple(factors)


def load_schedule(data):
    """Read a firing schedule: {"schema": ..., "u_minus": [[...], ...],
    optional "q_b"/"q_e" initial marking vectors, optional "dt"}.

    Returns (u_minus, q_b0 or None, q_e0 or None, dt or None).
    """
    doc = _load_json(data, "schedule")
    _expect_schema(doc, SCHEDULE_SCHEMA, "schedule")
    u = doc.get("u_minus")
    if not isinstance(u, list) or not u or not all(isinstance(r, list) for r in u):
        raise JsonFormatError("schedule 'u_minus' must be a non-empty list of rows")
    width = len(u[0])
    arr = np.zeros((len(u), width))
    for k, row in enumerate(u):
        if len(row) != width:
            raise JsonFormatError(f"schedule 'u_minus' row {k} has ragged length")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise JsonFormatError(f"schedule 'u_minus'[{k}][{j}] is not a number")
            arr[k, j] = v

    def _vector(key):
        value = doc.get(key)
        if value is None:
            return None
        if not isinstance(value, list):
            raise JsonFormatError(f"schedule {key!r} must be a list of numbers")
        return np.array([float(v) for v in value])

    dt = doc.get("dt")
    if dt is not None and (isinstance(dt, bool) or not isinstance(dt, (int, float)) or dt <= 0):
        raise JsonFormatError("schedule 'dt' must be a positive number")
    return arr, _vector("q_b"), _vector("q_e"), None if dt is None else float(dt)


# --------------------------------------------------------------------------
# Result tables

def _csv_bytes(rows) -> bytes:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def emit_results_csv(solution: RcotSolution) -> bytes:
    """Tabulate an optimal technology-choice solution.

    Per-capability rows carry the activity value and its share of the
    summed activity; then one objective row and one use row per factor.
    """
    if solution.status.value != "optimal":
        raise ValueError(f"cannot tabulate a {solution.status.value} solution")
    total = float(np.sum(solution.x_star))
    if total == 0.0:
        warnings.warn("all capability values are zero; percent column is 0.0%",
                      RuntimeWarning, stacklevel=2)
    labels = solution.tech_labels or tuple(
        f"u{j + 1}" for j in range(len(solution.x_star)))
    rows = [["capability", "value", "percent"]]
    for label, value in zip(labels, solution.x_star):
        pct = 100.0 * value / total if total else 0.0
        rows.append([label, f"{value:.4f}", f"{pct:.1f}%"])
    rows.append(["objective", f"{solution.z:.4f}", ""])
    factor_labels = solution.factor_labels or tuple(
        f"f{i + 1}" for i in range(len(solution.phi)))
    for label, value in zip(factor_labels, solution.phi):
        rows.append([f"use:{label}", f"{value:.4f}", ""])
    return _csv_bytes(rows)


def emit_results_json(solution: RcotSolution) -> bytes:
    doc = {
        "status": solution.status.value,
        "objective": None if np.isnan(solution.z) else float(solution.z),
        "x": {label: float(v) for label, v in zip(solution.tech_labels, solution.x_star)},
        "factor_use": {label: float(v)
                       for label, v in zip(solution.factor_labels, solution.phi)},
        "binding": {label: float(v)
                    for label, v in zip(solution.row_labels, solution.binding)},
        "iterations": solution.iterations,
    }
    if solution.status.value != "optimal":
        doc["x"] = {}
        doc["factor_use"] = {}
        doc["binding"] = {}
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def emit_chord_csv(a_star, sector_labels=(), tech_labels=(),
                   nonzero_only: bool = False) -> bytes:
    """Long-format edge list of a transaction matrix for chord tooling."""
    a_star = np.asarray(a_star, dtype=float)
    if a_star.ndim != 2:
        raise ValueError("a_star must be a matrix")
    if not np.all(np.isfinite(a_star)):
        raise ValueError("a_star must be finite")
    n, t = a_star.shape
    sector_labels = tuple(sector_labels) or tuple(f"s{i + 1}" for i in range(n))
    tech_labels = tuple(tech_labels) or tuple(f"t{j + 1}" for j in range(t))
    if len(sector_labels) != n or len(tech_labels) != t:
        raise ValueError("label lengths must match the matrix shape")
    rows = [["source", "target", "coefficient"]]
    for i in range(n):
        for j in range(t):
            if nonzero_only and a_star[i, j] == 0.0:
                continue
            rows.append([sector_labels[i], tech_labels[j], repr(float(a_star[i, j]))])
    return _csv_bytes(rows)


def emit_trajectory_csv(q_b, q_e, place_labels, transition_labels) -> bytes:
    """Wide-format marking trajectory: one row per step k = 0..K."""
    q_b = np.asarray(q_b, dtype=float)
    q_e = np.asarray(q_e, dtype=float)
    header = ["step"] + [f"qB:{p}" for p in place_labels] \
        + [f"qE:{t}" for t in transition_labels]
    rows = [header]
    for k in range(q_b.shape[0]):
        rows.append([str(k)] + [repr(float(v)) for v in q_b[k]]
                    + [repr(float(v)) for v in q_e[k]])
    return _csv_bytes(rows)


def emit_full_json(sol, objective_only: bool = False) -> bytes:
    """Serialize a solved time-domain program (FullSolution)."""
    doc = {"status": sol.status.value,
           "objective": None if np.isnan(sol.objective) else float(sol.objective)}
    if sol.infeasible_rows:
        doc["infeasible_rows"] = list(sol.infeasible_rows)
    if not objective_only and sol.status.value == "optimal":
        for name in ("q_b", "q_e", "q_sl", "q_el",
                     "u_plus", "u_minus", "ul_plus", "ul_minus"):
            arr = getattr(sol, name)
            if arr.size:
                doc[name] = [[float(v) for v in row] for row in arr]
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


# --------------------------------------------------------------------------
# DOT export

_OPERAND_COLORS = ("#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2",
                   "#b279a2", "#eeca3b", "#9d755d")


def to_dot(inc: IncidenceMatrices, name: str = "system") -> bytes:
    """Bipartite place/transition graph with one color per operand."""
    color_of = {op: _OPERAND_COLORS[i % len(_OPERAND_COLORS)]
                for i, op in enumerate(inc.operands)}
    lines = [f"digraph {json.dumps(name)} {{", "  rankdir=LR;"]
    labels = inc.place_labels
    for idx, (op, buf) in enumerate(labels):
        lines.append(
            f'  p{idx} [shape=ellipse, label="{op}@{buf}", color="{color_of[op]}"];')
    for j, cap in enumerate(inc.capabilities):
        lines.append(f'  t{j} [shape=box, label="{cap}"];')
    row_of = inc.row_index
    for (op, buf), idx in row_of.items():
        for j in range(len(inc.capabilities)):
            if inc.m_minus[idx, j] != 0:
                lines.append(
                    f'  p{idx} -> t{j} [label="{inc.m_minus[idx, j]:g}", '
                    f'color="{color_of[op]}"];')
            if inc.m_plus[idx, j] != 0:
                lines.append(
                    f'  t{j} -> p{idx} [label="{inc.m_plus[idx, j]:g}", '
                    f'color="{color_of[op]}"];')
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")
