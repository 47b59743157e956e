import json

import pytest

import stratforge

HYPERBOLIC = {
    "torus_rank": 1,
    "moduli": [],
    "weights": [[1, -1]],
    "finite_chars": [],
    "kind": "symplectic_at_zero",
}


def test_stratify_shape():
    p = stratforge.stratify_dict(HYPERBOLIC)
    assert p["schema_version"] == stratforge.schema_version
    assert len(p["strata"]) == 2
    dims = sorted(s["dimension"] for s in p["strata"])
    assert dims == [0, 2]
    assert p["frontier"] == [[0, 1]]


def test_links_recursion():
    t = stratforge.links_dict(HYPERBOLIC)
    origin = t["nodes"][0]
    assert "link" in origin
    assert len(origin["children"]) == 1
    open_node = t["nodes"][1]
    assert "link" not in open_node


def test_verify_passes_and_is_deterministic():
    a = stratforge.verify(json.dumps(HYPERBOLIC), 20000, 7, 3.0)
    b = stratforge.verify(json.dumps(HYPERBOLIC), 20000, 7, 3.0)
    assert a == b
    report = json.loads(a)
    assert report["pass"]
    assert report["density"] >= 0.99


def test_input_errors_are_value_errors():
    with pytest.raises(stratforge.InputError):
        stratforge.stratify_dict({"torus_rank": 1})
