"""Structural ontology of a hetero-functional production system.

A system is described by four kinds of elements:

* **operands** -- the things that flow (products, factors),
* **resources** -- the things that hold or move operands; transformation
  resources and independent buffers together form the buffer set,
* **processes** -- recipes that convert input operands into output
  operands with fixed per-unit coefficients,
* **capabilities** -- the pairing "resource r does process p", each with
  explicit pull/push buffers per operand and an integer duration.

Everything is immutable after construction.  :func:`validate` reports
every structural violation as data; nothing downstream accepts an
invalid model.
"""

import math
from dataclasses import dataclass, field
from enum import Enum


class ResourceKind(str, Enum):
    TRANSFORMATION = "transformation"
    INDEPENDENT_BUFFER = "independent-buffer"
    TRANSPORTATION = "transportation"


class ProcessKind(str, Enum):
    TRANSFORMATION = "transformation"
    REFINED_TRANSPORTATION = "refined-transportation"


# Resource kinds whose members belong to the buffer set.
BUFFER_KINDS = (ResourceKind.TRANSFORMATION, ResourceKind.INDEPENDENT_BUFFER)


@dataclass(frozen=True)
class Operand:
    """A thing that flows through the system (product or factor)."""

    id: str
    name: str = ""
    unit: str = ""


@dataclass(frozen=True)
class Flow:
    """One (operand, per-unit coefficient) stream of a process."""

    operand: str
    coeff: float


@dataclass(frozen=True)
class Process:
    """A recipe converting input operands into output operands."""

    id: str
    name: str = ""
    kind: ProcessKind = ProcessKind.TRANSFORMATION
    inputs: tuple[Flow, ...] = ()
    outputs: tuple[Flow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", ProcessKind(self.kind))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))


@dataclass(frozen=True)
class Resource:
    """A holder or mover of operands."""

    id: str
    name: str = ""
    kind: ResourceKind = ResourceKind.TRANSFORMATION

    def __post_init__(self):
        object.__setattr__(self, "kind", ResourceKind(self.kind))

    @property
    def is_buffer(self) -> bool:
        return self.kind in BUFFER_KINDS


@dataclass(frozen=True)
class Capability:
    """Resource ``resource`` executes process ``process``.

    ``pull`` maps each input operand of the process to the buffer it is
    drawn from; ``push`` maps each output operand to the buffer it is
    injected into.  ``duration`` is the integer number of time steps
    between the start and the completion of one execution; 0 means the
    execution completes within the step it starts.
    """

    id: str
    resource: str
    process: str
    pull: dict = field(default_factory=dict)
    push: dict = field(default_factory=dict)
    duration: int = 0

    def __post_init__(self):
        object.__setattr__(self, "pull", dict(self.pull))
        object.__setattr__(self, "push", dict(self.push))


@dataclass(frozen=True)
class SystemModel:
    """A complete, self-contained system description."""

    operands: tuple[Operand, ...] = ()
    resources: tuple[Resource, ...] = ()
    processes: tuple[Process, ...] = ()
    capabilities: tuple[Capability, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "operands", tuple(self.operands))
        object.__setattr__(self, "resources", tuple(self.resources))
        object.__setattr__(self, "processes", tuple(self.processes))
        object.__setattr__(self, "capabilities", tuple(self.capabilities))

    def operand(self, operand_id: str) -> Operand:
        return _lookup(self.operands, operand_id, "operand")

    def resource(self, resource_id: str) -> Resource:
        return _lookup(self.resources, resource_id, "resource")

    def process(self, process_id: str) -> Process:
        return _lookup(self.processes, process_id, "process")

    def capability(self, capability_id: str) -> Capability:
        return _lookup(self.capabilities, capability_id, "capability")


def _lookup(items, item_id, kind):
    for item in items:
        if item.id == item_id:
            return item
    raise KeyError(f"no {kind} with id {item_id!r}")


@dataclass(frozen=True)
class Violation:
    """One structural defect, addressed by a path into the model."""

    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


class ModelError(ValueError):
    """Raised when an operation requires a valid model and gets none."""

    def __init__(self, violations: list):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid system model: {lines}")


def validate(model: SystemModel) -> list[Violation]:
    """Check every structural invariant; return violations as data.

    The result is sorted lexicographically by (path, message), so it is
    deterministic and validate(m) == validate(m) byte for byte.
    """
    out: list[Violation] = []
    _check_unique(model.operands, "operand", out)
    _check_unique(model.resources, "resource", out)
    _check_unique(model.processes, "process", out)
    _check_unique(model.capabilities, "capability", out)

    operand_ids = {o.id for o in model.operands}
    resource_ids = {r.id for r in model.resources}
    process_by_id = {p.id: p for p in model.processes}
    buffer_ids = {r.id for r in model.resources if r.is_buffer}

    for o in model.operands:
        if not o.unit:
            out.append(Violation(f"operand[{o.id}].unit", "unit must be non-empty"))

    for p in model.processes:
        if not p.outputs:
            out.append(Violation(f"process[{p.id}]", "must have at least one output"))
        for fname, flows in (("inputs", p.inputs), ("outputs", p.outputs)):
            for i, flow in enumerate(flows):
                where = f"process[{p.id}].{fname}[{i}]"
                if flow.operand not in operand_ids:
                    out.append(Violation(where, f"unknown operand {flow.operand!r}"))
                coeff = flow.coeff
                if not isinstance(coeff, (int, float)) or isinstance(coeff, bool) \
                        or not math.isfinite(coeff) or coeff < 0:
                    out.append(Violation(where, f"coefficient must be finite and >= 0, got {coeff!r}"))

    if not model.capabilities:
        out.append(Violation("capabilities", "at least one capability is required"))

    for cap in model.capabilities:
        where = f"capability[{cap.id}]"
        if cap.resource not in resource_ids:
            out.append(Violation(where, f"unknown resource {cap.resource!r}"))
        proc = process_by_id.get(cap.process)
        if proc is None:
            out.append(Violation(where, f"unknown process {cap.process!r}"))
        if not isinstance(cap.duration, int) or isinstance(cap.duration, bool) or cap.duration < 0:
            out.append(Violation(f"{where}.duration", f"must be a non-negative integer, got {cap.duration!r}"))
        for side, mapping in (("pull", cap.pull), ("push", cap.push)):
            flows = () if proc is None else (proc.inputs if side == "pull" else proc.outputs)
            needed = {fl.operand for fl in flows}
            for operand_id in sorted(needed - set(mapping)):
                out.append(Violation(f"{where}.{side}", f"missing buffer for operand {operand_id!r}"))
            for operand_id, buffer_id in sorted(mapping.items()):
                if proc is not None and operand_id not in needed:
                    out.append(Violation(f"{where}.{side}[{operand_id}]",
                                         f"operand is not {'an input' if side == 'pull' else 'an output'} of process {cap.process!r}"))
                if buffer_id not in buffer_ids:
                    out.append(Violation(f"{where}.{side}[{operand_id}]",
                                         f"{buffer_id!r} is not a buffer"))

    out.sort(key=lambda v: (v.path, v.message))
    return out


def _check_unique(items, kind, out):
    seen = set()
    for item in items:
        if not item.id:
            out.append(Violation(f"{kind}[]", "id must be non-empty"))
        elif item.id in seen:
            out.append(Violation(f"{kind}[{item.id}]", "duplicate id"))
        seen.add(item.id)


def require_valid(model: SystemModel) -> SystemModel:
    """Raise :class:`ModelError` unless the model validates cleanly."""
    violations = validate(model)
    if violations:
        raise ModelError(violations)
    return model


def buffer_set(model: SystemModel) -> list[str]:
    """Ordered buffer ids: transformation resources first, then
    independent buffers, each group in declaration order."""
    first = [r.id for r in model.resources if r.kind is ResourceKind.TRANSFORMATION]
    second = [r.id for r in model.resources if r.kind is ResourceKind.INDEPENDENT_BUFFER]
    return first + second


def capability_label(model: SystemModel, cap: Capability) -> str:
    """Human label following the subject + predicate sentence form,
    e.g. "Economy produces manufactured products"."""
    try:
        subject = model.resource(cap.resource).name or cap.resource
    except KeyError:
        subject = cap.resource
    try:
        predicate = model.process(cap.process).name or cap.process
    except KeyError:
        predicate = cap.process
    return f"{subject} {predicate}".strip()
