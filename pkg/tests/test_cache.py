import json

from dgwb import mutants
from dgwb.cache import ENV_VAR, ResultCache, active_cache, digest_of
from dgwb.dg import koszul_dg_ring
from dgwb.matrix import Matrix
from dgwb.rings import ZZ, Zmod
from dgwb.snf import smith_normal_form
from dgwb.tate import resolve_cyclic


def test_digest_is_canonical():
    assert digest_of({"a": 1, "b": [2]}) == digest_of({"b": [2], "a": 1})
    assert len(digest_of([])) == 16 and digest_of(1) != digest_of("1")


def test_round_trip_and_collision_guard(tmp_path):
    cache = ResultCache(tmp_path)
    assert cache.get("snf", {"x": 1}) is None
    cache.put("snf", {"x": 1}, [1, 2])
    assert cache.get("snf", {"x": 1}) == [1, 2]
    assert cache.get("tate", {"x": 1}) is None
    # a file whose stored input disagrees is ignored
    path = cache.path("snf", {"x": 1})
    entry = json.loads(path.read_text())
    path.write_text(json.dumps({**entry, "input": {"x": 2}}))
    assert cache.get("snf", {"x": 1}) is None
    path.write_text("{not json")
    assert cache.get("snf", {"x": 1}) is None


def test_disabled_without_env(monkeypatch):
    monkeypatch.delenv(ENV_VAR, raising=False)
    assert active_cache() is None


def test_results_are_cached_and_reused(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    A = Matrix.from_rows(ZZ, [[2, 4], [6, 8]])
    first = smith_normal_form(A)
    assert len(list(tmp_path.glob("*.json"))) == 1
    assert smith_normal_form(A) == first
    B = koszul_dg_ring(Zmod(4), (2,))
    res = resolve_cyclic(B, None, -3)
    n = len(list(tmp_path.glob("*.json")))
    assert resolve_cyclic(B, None, -3) == res
    assert len(list(tmp_path.glob("*.json"))) == n
    assert not list(tmp_path.glob("*.tmp"))


def test_bypassed_under_mutants(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    with mutants.inject("snf_divisibility"):
        assert active_cache() is None
        smith_normal_form(Matrix.from_rows(ZZ, [[2, 0], [0, 3]]))
    assert not list(tmp_path.iterdir())
