import pytest
from hypothesis import given
from hypothesis import strategies as st

from dgwb import mutants
from dgwb.complexes import cohomology
from dgwb.dg import koszul_dg_ring
from dgwb.errors import ResourceLimit
from dgwb.rings import GF, ZZ, FpxQuotient, Zmod
from dgwb.tate import ext_floor, resolve_cyclic, tate_resolution, tor_floor

RINGS = [koszul_dg_ring(R, a) for R, a in (
    (ZZ, ()), (ZZ, (2,)), (ZZ, (4, 6)), (Zmod(4), (2,)), (Zmod(8), (2, 2)),
    (Zmod(9), (3,)), (Zmod(8), (4,)), (GF(3), (0,)), (FpxQuotient(2, (0, 0, 1)), ((0, 1),)),
)]


def test_ordinary_ring_needs_no_variables():
    assert tate_resolution(koszul_dg_ring(ZZ, ()), -4).adjoined == ()


def test_regular_sequence_needs_no_variables():
    T = tate_resolution(koszul_dg_ring(ZZ, (2,)), -4)
    assert T.adjoined == ()


def test_kos_z4_kills_the_class_2xi():
    A = koszul_dg_ring(Zmod(4), (2,))
    T = tate_resolution(A, -4)
    assert T.adjoined and T.adjoined[0][1] == -2
    H = cohomology(T.module.underlying).restrict(-4, 0)
    assert H.invariants == {0: (2,)}


@given(st.sampled_from(RINGS), st.integers(-5, 0))
def test_resolution_is_quasi_iso_above_floor(A, floor):
    Abar, _ = A.h0
    H = cohomology(resolve_cyclic(A, None, floor).module.underlying).restrict(floor, 0)
    assert H.invariants == {0: (Abar.modulus if not Abar.is_domain_cover else 0,)}


@given(st.sampled_from(RINGS), st.integers(-4, 0), st.integers(2, 9))
def test_cyclic_resolution_target(A, floor, c):
    Abar, _ = A.h0
    E = A.base.cover
    try:
        target = Abar.quotient(c)
    except Exception:
        return
    res = resolve_cyclic(A, c, floor)
    H = cohomology(res.module.underlying).restrict(floor, 0)
    if target == Abar and not Abar.is_domain_cover:
        assert H.invariants == {0: (Abar.modulus,)}
    else:
        d = E.gcd(c, Abar.modulus) if not Abar.is_domain_cover else c
        assert H.invariants == {0: (E.normalize(d)[1],)}


@given(st.sampled_from(RINGS), st.integers(-5, -1))
def test_deeper_floor_extends_shallower(A, floor):
    deep, shallow = resolve_cyclic(A, None, floor), resolve_cyclic(A, None, floor + 1)
    assert deep.adjoined[: len(shallow.adjoined)] == shallow.adjoined


def test_floors():
    assert ext_floor(-2, 3) == -5
    assert tor_floor(1, 3) == -4
    with mutants.inject("window_off_by_one"):
        assert ext_floor(-2, 3) == -4
        assert tor_floor(1, 3) == -3


def test_budget_is_enforced():
    with pytest.raises(ResourceLimit) as info:
        resolve_cyclic(koszul_dg_ring(Zmod(8), (2, 2)), None, -8, budget=3)
    assert info.value.transcript
