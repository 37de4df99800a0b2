import json
import math

import numpy as np
import pytest

from hcprony.instances import (
    InstanceError,
    expsum_from_json,
    expsum_to_json,
    hyperbola_spec,
    instance_size,
    load_json,
    oracle_for_instance,
    random_expsum_spec,
    random_rational_spec,
    sparsepoly_from_json,
    sparsepoly_to_json,
)
from hcprony.scalars import EXACT, FloatField
from hcprony.sparsepoly import random_sparse_polynomial, shear_theta


def test_random_expsum_constraints():
    spec = random_expsum_spec(np.random.default_rng(0), 3, 6)
    W = np.array(spec.frequencies)
    assert np.all(np.abs(W.real) <= 1) and np.all((W.imag > -math.pi) & (W.imag <= math.pi))
    sep = min(np.abs(W[i] - W[j]).max() for i in range(6) for j in range(i))
    assert sep >= 1e-2
    assert all(1 <= abs(c) <= 2 for c in spec.coefficients)


def test_seed_determinism():
    a = random_rational_spec(np.random.default_rng(4), 2, 5)
    b = random_rational_spec(np.random.default_rng(4), 2, 5)
    assert a == b
    assert len(set(a.points)) == 5


@pytest.mark.parametrize("spec", [random_expsum_spec(np.random.default_rng(1), 2, 3), random_rational_spec(np.random.default_rng(1), 2, 3), hyperbola_spec(4)])
def test_expsum_json_roundtrip(spec):
    doc = json.loads(json.dumps(expsum_to_json(spec)))
    back = expsum_from_json(doc)
    assert back.points == spec.points
    assert np.allclose(back.frequencies, spec.frequencies)
    assert instance_size(doc) == spec.size


def test_exact_oracle_from_document():
    doc = expsum_to_json(hyperbola_spec(3))
    o = oracle_for_instance(doc, EXACT)
    assert o((1, 1)) == 3


def test_sparsepoly_json_roundtrip():
    p = random_sparse_polynomial(np.random.default_rng(0), 3, 4)
    q, theta = sparsepoly_from_json(json.loads(json.dumps(sparsepoly_to_json(p, shear_theta(3)))))
    assert q == p and theta == shear_theta(3)


@pytest.mark.parametrize("doc", [{"type": "expsum"}, {"type": "expsum", "frequencies": [[[0, 0]]], "coefficients": []}, {"type": "sparsepoly", "terms": [{"exp": [1]}]}, {"type": "nope"}])
def test_malformed(doc):
    with pytest.raises(InstanceError):
        oracle_for_instance(doc, FloatField())


def test_load_json_errors(tmp_path):
    (tmp_path / "a.json").write_text("[1, 2]")
    with pytest.raises(InstanceError):
        load_json(tmp_path / "a.json")
    with pytest.raises(InstanceError):
        load_json(tmp_path / "missing.json")
