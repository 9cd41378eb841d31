"""Reference-case runner: load a case file, execute the full pipeline
(XML model -> incidence -> solve), and compare against expected values
with per-value deltas.

A case runs through two independent pipelines, the technology-choice
LP and the static network-flow reduction, and the report additionally
checks that both produce the same activity vector.
"""

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from heconet import hfnmcf, rcot
from heconet.config import DEFAULT_TOLERANCES, Tolerances
from heconet.core import SystemModel, capability_label
from heconet.incidence import build_incidence
from heconet.io import (JsonFormatError, Scenario, _expect_schema, _load_json,
                        load_scenario, parse_system_xml, vectors_from_scenario)

GOLDEN_SCHEMA = "heconet-golden/1"
PIPELINE_AGREEMENT = 1e-6


@dataclass(frozen=True)
class GoldenCase:
    name: str
    model_path: Path
    scenario_path: Path
    expected: dict

    def load_model(self) -> SystemModel:
        return parse_system_xml(self.model_path.read_bytes())

    def load_scenario(self) -> Scenario:
        return load_scenario(self.scenario_path.read_bytes())


@dataclass(frozen=True)
class GoldenValue:
    name: str
    expected: float
    actual: float
    tolerance: float

    @property
    def delta(self) -> float:
        return self.actual - self.expected

    @property
    def passed(self) -> bool:
        return abs(self.delta) <= self.tolerance

    def __str__(self):
        mark = "ok" if self.passed else "FAIL"
        return (f"{self.name}: expected {self.expected:.6g}, actual {self.actual:.6g}, "
                f"delta {self.delta:+.3g}, tolerance {self.tolerance:.3g} [{mark}]")


@dataclass
class GoldenReport:
    case: str
    pipeline: str
    values: list

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.values)

    def failures(self) -> list:
        return [v for v in self.values if not v.passed]

    def __str__(self):
        head = f"case {self.case} [{self.pipeline}]: " \
            + ("PASS" if self.passed else "FAIL")
        return "\n".join([head] + [f"  {v}" for v in self.values])


def _expected_block(doc: dict, case_name: str) -> dict:
    exp = doc.get("expected")
    if not isinstance(exp, dict):
        raise JsonFormatError(f"case {case_name!r} has no 'expected' object")
    for key in ("objective", "x", "factor_use"):
        if key not in exp:
            raise JsonFormatError(f"case {case_name!r} expected block lacks {key!r}")
    return exp


def load_case(path) -> GoldenCase:
    """Read a case document; relative model/scenario paths resolve
    against the case file's directory."""
    path = Path(path)
    doc = _load_json(path.read_bytes(), "golden case")
    _expect_schema(doc, GOLDEN_SCHEMA, "golden case")
    name = doc.get("name", path.stem)
    base = path.parent
    model = base / doc["model"]
    scenario = base / doc["scenario"]
    return GoldenCase(name=name, model_path=model, scenario_path=scenario,
                      expected=_expected_block(doc, name))


def bundled_case(name: str = "three_sector_golden.json") -> GoldenCase:
    root = resources.files("heconet.data")
    return load_case(Path(str(root / name)))


def _solve_both(model, scenario, tol: Tolerances):
    y, f, pi, products, factors = vectors_from_scenario(model, scenario)
    inc = build_incidence(model)
    labels = tuple(capability_label(model, c) for c in model.capabilities)
    inst = rcot.instance_from_incidence(inc, len(products), y, f, pi,
                                        tech_labels=labels)
    rcot_sol = rcot.solve_rcot(inst, tol)
    f_star = inc.m_minus[len(products):]
    red = hfnmcf.build_static(model, y, f, pi, f_star)
    static_sol = hfnmcf.solve_static(red, tol=tol)
    return rcot_sol, static_sol, factors


def run_golden(case: GoldenCase, pipeline: str = "both",
               tol: Tolerances = DEFAULT_TOLERANCES) -> GoldenReport:
    """Execute the case and compare every expected value.

    ``pipeline`` selects which solve feeds the comparison: "rcot",
    "static", or "both" (compare the static solve and additionally
    require the two activity vectors to agree entry-wise).
    """
    if pipeline not in ("rcot", "static", "both"):
        raise ValueError("pipeline must be 'rcot', 'static', or 'both'")
    model = case.load_model()
    scenario = case.load_scenario()
    rcot_sol, static_sol, factors = _solve_both(model, scenario, tol)
    primary = rcot_sol if pipeline == "rcot" else static_sol

    values = []
    exp = case.expected
    obj = exp["objective"]
    values.append(GoldenValue("objective", float(obj["value"]), primary.z,
                              float(obj["tolerance"])))
    ex_x = exp["x"]
    x_tol = float(ex_x["tolerance"])
    for j, expected in enumerate(ex_x["values"]):
        values.append(GoldenValue(f"x[{j}]", float(expected),
                                  float(primary.x_star[j]), x_tol))
    for fname, block in exp["factor_use"].items():
        idx = factors.index(fname)
        values.append(GoldenValue(f"use:{fname}", float(block["value"]),
                                  float(primary.phi[idx]), float(block["tolerance"])))
    if pipeline == "both":
        for j in range(len(rcot_sol.x_star)):
            values.append(GoldenValue(f"agreement:x[{j}]", float(rcot_sol.x_star[j]),
                                      float(static_sol.x_star[j]), PIPELINE_AGREEMENT))
        values.append(GoldenValue("agreement:objective", rcot_sol.z, static_sol.z,
                                  PIPELINE_AGREEMENT))
    return GoldenReport(case=case.name, pipeline=pipeline, values=values)
