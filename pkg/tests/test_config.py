import dataclasses
import json

import pytest

from heconet.config import DEFAULT_TOLERANCES, Tolerances


def test_defaults():
    t = DEFAULT_TOLERANCES
    assert t.spectral_tol == 1e-10
    assert t.spectral_max_iter == 10000
    assert t.lp_pivot == 1e-11
    assert t.lp_feasibility == 1e-7
    assert t.lp_complementarity == 1e-6
    assert t.lp_duality_gap == 1e-6
    assert t.lp_refactor_every == 50
    assert t.demand_slack == 1e-6


def test_replace_returns_new_instance():
    t = DEFAULT_TOLERANCES.replace(lp_max_iter=7)
    assert t.lp_max_iter == 7
    assert DEFAULT_TOLERANCES.lp_max_iter != 7
    assert isinstance(t, Tolerances)


def test_frozen():
    with pytest.raises(dataclasses.FrozenInstanceError):
        DEFAULT_TOLERANCES.spectral_tol = 1.0


def test_from_json_roundtrip():
    text = json.dumps({"lp_pivot": 1e-9, "lp_max_iter": 123})
    t = Tolerances.from_json(text)
    assert t.lp_pivot == 1e-9
    assert t.lp_max_iter == 123
    assert t.spectral_tol == DEFAULT_TOLERANCES.spectral_tol


def test_from_json_rejects_unknown_key():
    with pytest.raises(ValueError, match="unknown"):
        Tolerances.from_json('{"no_such_knob": 1}')


def test_from_json_rejects_non_numeric():
    with pytest.raises(ValueError):
        Tolerances.from_json('{"lp_pivot": "tight"}')
    with pytest.raises(ValueError):
        Tolerances.from_json('["lp_pivot"]')
