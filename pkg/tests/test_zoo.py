import json
from collections import Counter
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dgwb.complexes import cohomology
from dgwb.zoo import BASES, IDEAL_KINDS, Budgets, ZooInstance, generate_zoo

GOLDEN = Path(__file__).parent / "golden"


def test_golden_instance():
    (z,) = generate_zoo(0, 1)
    committed = (GOLDEN / "instance_seed0.json").read_text()
    assert json.dumps(z.to_json(), sort_keys=True, indent=1) + "\n" == committed


def test_empty_zoo():
    assert generate_zoo(0, 0) == []


@given(st.integers(0, 2**32), st.integers(0, 5))
def test_reproducible(seed, count):
    a, b = generate_zoo(seed, count), generate_zoo(seed, count)
    assert [z.digest for z in a] == [z.digest for z in b]
    # instances depend on (seed, index) only
    assert [z.digest for z in generate_zoo(seed, count + 2)[:count]] == [z.digest for z in a]


@given(st.integers(0, 1000), st.integers(0, 30))
def test_json_round_trip(seed, index):
    z = generate_zoo(seed, index + 1)[index]
    back = ZooInstance.from_json(json.loads(json.dumps(z.to_json())))
    assert back == z and back.digest == z.digest


def test_instances_respect_budgets():
    budgets = Budgets()
    for z in generate_zoo(0, 60):
        M = z.module
        assert 1 <= M.rank <= budgets.max_cells
        assert max(M.degrees) - min(M.degrees) <= budgets.max_span + 1
        assert z.dg_ring.k <= budgets.max_koszul
        H = cohomology(M.underlying)
        assert H.is_zero() or (H.inf >= min(M.degrees) - z.dg_ring.k and H.sup <= max(M.degrees))


def test_zoo_mixes_bases_and_ideals():
    zoo = generate_zoo(0, 60)
    bases = {str(z.dg_ring.base) for z in zoo}
    assert bases == {str(R) for _, R in BASES}
    kinds = Counter(z.ideal_kind for z in zoo)
    assert set(kinds) == set(IDEAL_KINDS)
    assert {z.dg_ring.k for z in zoo} == {0, 1, 2}


@pytest.mark.parametrize("bad", [dict(max_cells=0), dict(cutoff=0), dict(precision=0), dict(max_span=-1), dict(stab_cutoff=2)])
def test_budgets_must_be_positive(bad):
    with pytest.raises(ValueError):
        Budgets(**bad)
