import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phasebounds import closed_form as cf
from phasebounds.errors import RejectedInput
from phasebounds.info_matrix import (build_bim, build_him, oracle_bcrb_diag,
                                     oracle_hcrb_diag)

GRID = [(jd, sw2, L)
        for jd in (0.5, 2.0, 20.0)
        for sw2 in (0.005, 0.1)
        for L in (2, 3, 5, 10, 30)]


def test_coefs_vieta_identities():
    c = cf.coefs(2.0, 0.005)
    assert c.r1 * c.r2 == pytest.approx(4e4, rel=1e-10)
    assert c.r1 + c.r2 == pytest.approx(402.0, rel=1e-10)  # jd + 2/sw2
    assert 0 < c.r1 < c.r2
    # direct quadratic-root oracle
    roots = np.sort(np.roots([1.0, -402.0, 4e4]))
    assert c.r1 == pytest.approx(roots[0], rel=1e-10)
    assert c.r2 == pytest.approx(roots[1], rel=1e-10)


@pytest.mark.parametrize("jd,sw2", [(0.5, 0.005), (2.0, 0.1), (1e6, 1.0),
                                    (1e-3, 1e-4)])
def test_coefs_rho_sum_to_one(jd, sw2):
    c = cf.coefs(jd, sw2)
    assert c.rho1 + c.rho2 == pytest.approx(1.0, abs=1e-12)


def test_coefs_asymptotic_probe():
    c = cf.coefs(1e6, 1.0)
    assert c.r2 / c.r1 > 1e10
    assert c.rho2 == pytest.approx(1.0, rel=1e-5)


def test_coefs_rejects_bad_input():
    with pytest.raises(RejectedInput):
        cf.coefs(0.0, 0.005)
    with pytest.raises(RejectedInput):
        cf.coefs(2.0, -1.0)


def test_det_small_cases():
    c = cf.coefs(2.0, 0.005)
    sign, logmag = cf.det_b(c, 1)
    assert sign == 1.0 and logmag == pytest.approx(np.log(202.0), rel=1e-12)
    sign, logmag = cf.det_b(c, 2)
    assert sign == 1.0 and logmag == pytest.approx(np.log(804.0), rel=1e-12)


@pytest.mark.parametrize("jd,sw2,L", GRID)
def test_det_matches_dense_oracle(jd, sw2, L):
    sign, logmag = cf.det_b(cf.coefs(jd, sw2), L)
    ref_sign, ref_logmag = np.linalg.slogdet(build_bim(jd, sw2, L))
    assert sign == ref_sign
    assert logmag == pytest.approx(ref_logmag, rel=1e-9)


def test_det_no_overflow_at_large_length():
    sign, logmag = cf.det_b(cf.coefs(2.0, 0.005), 10_000)
    assert sign == 1.0 and np.isfinite(logmag)


@pytest.mark.parametrize("jd,sw2,L", GRID)
def test_bcrb_offline_matches_oracle(jd, sw2, L):
    c = cf.coefs(jd, sw2)
    ref = oracle_bcrb_diag(build_bim(jd, sw2, L))
    for l in range(1, L + 1):
        val = cf.bcrb_offline(c, L, l).value
        assert val == pytest.approx(ref[l - 1], rel=1e-8)


@pytest.mark.parametrize("jd,sw2,L", GRID)
def test_hcrb_offline_matches_oracle(jd, sw2, L):
    c = cf.coefs(jd, sw2)
    ref = oracle_hcrb_diag(build_him(jd, sw2, L))
    for l in range(1, L + 1):
        val = cf.hcrb_offline(c, L, l).value
        assert val == pytest.approx(ref[l - 1], rel=1e-8)


def test_hcrb_l2_is_exactly_no_prior_level():
    c = cf.coefs(2.0, 0.005)
    for l in (1, 2):
        assert cf.hcrb_offline(c, 2, l).value == pytest.approx(0.5, abs=1e-12)


def test_offline_palindrome():
    c = cf.coefs(2.0, 0.005)
    for L in (5, 30, 60):
        for l in range(1, L // 2 + 1):
            a = cf.bcrb_offline(c, L, l).value
            b = cf.bcrb_offline(c, L, L + 1 - l).value
            assert a == pytest.approx(b, rel=1e-10)
            a = cf.hcrb_offline(c, L, l).value
            b = cf.hcrb_offline(c, L, L + 1 - l).value
            assert a == pytest.approx(b, rel=1e-10)


def test_decoupled_phase_limit():
    c = cf.coefs(2.0, 1e6)
    assert cf.bcrb_offline(c, 10, 5).value == pytest.approx(0.5, rel=1e-3)


def test_hcrb_dominates_bcrb():
    for jd, sw2, L in GRID:
        c = cf.coefs(jd, sw2)
        for l in range(1, L + 1):
            assert (cf.hcrb_offline(c, L, l).value
                    >= cf.bcrb_offline(c, L, l).value)


def test_bcrb_online_small_l_and_identity():
    c = cf.coefs(2.0, 0.005)
    assert cf.bcrb_online(c, 1).value == pytest.approx(0.5, rel=1e-12)
    assert cf.bcrb_online(c, 2).value == pytest.approx(202.0 / 804.0,
                                                       rel=1e-12)
    for l in (2, 5, 30):
        assert cf.bcrb_online(c, l).value == pytest.approx(
            cf.bcrb_offline(c, l, l).value, rel=1e-12)


def test_bcrb_online_nonincreasing():
    c = cf.coefs(2.0, 0.005)
    vals = [cf.bcrb_online(c, l).value for l in range(1, 61)]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(vals, vals[1:]))


def test_hcrb_online_values():
    c = cf.coefs(2.0, 0.005)
    assert cf.hcrb_online(c, 2).value == pytest.approx(0.5, abs=1e-12)
    ref = oracle_hcrb_diag(build_him(2.0, 0.005, 30))
    assert cf.hcrb_online(c, 30).value == pytest.approx(ref[-1], rel=1e-8)
    with pytest.raises(RejectedInput):
        cf.hcrb_online(c, 1)


def test_online_dominates_offline():
    c = cf.coefs(2.0, 0.005)
    for L in (10, 30, 60):
        for l in range(2, L + 1):
            assert (cf.hcrb_online(c, l).value
                    >= cf.hcrb_offline(c, L, l).value * (1 - 1e-12))
            assert (cf.bcrb_online(c, l).value
                    >= cf.bcrb_offline(c, L, l).value * (1 - 1e-12))


def test_edge_elements_l2_by_hand():
    c = cf.coefs(2.0, 0.005)
    first, last = cf.h11_inv_edge(c, 2, 1)
    assert first == pytest.approx(202.0 / 804.0, rel=1e-12)
    assert last == pytest.approx(200.0 / 804.0, rel=1e-12)


def test_edge_elements_match_dense_inverse():
    jd, sw2, L = 2.0, 0.005, 10
    c = cf.coefs(jd, sw2)
    inv = np.linalg.inv(build_bim(jd, sw2, L))
    for l in range(1, L + 1):
        first, last = cf.h11_inv_edge(c, L, l)
        assert first == pytest.approx(inv[l - 1, 0], rel=1e-9)
        assert last == pytest.approx(inv[l - 1, L - 1], rel=1e-9)
        # centrosymmetry pairing
        mirror_first, _ = cf.h11_inv_edge(c, L, L + 1 - l)
        assert last == pytest.approx(mirror_first, rel=1e-12)


def test_position_out_of_range():
    c = cf.coefs(2.0, 0.005)
    with pytest.raises(RejectedInput):
        cf.bcrb_offline(c, 10, 11)
    with pytest.raises(RejectedInput):
        cf.hcrb_offline(c, 10, 0)
    with pytest.raises(RejectedInput):
        cf.bcrb_offline(c, 1, 1)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 50.0), st.floats(2e-3, 1.0), st.integers(2, 40),
       st.data())
def test_property_oracle_equivalence(jd, sw2, L, data):
    l = data.draw(st.integers(1, L))
    c = cf.coefs(jd, sw2)
    ref_b = oracle_bcrb_diag(build_bim(jd, sw2, L))[l - 1]
    ref_h = oracle_hcrb_diag(build_him(jd, sw2, L))[l - 1]
    assert cf.bcrb_offline(c, L, l).value == pytest.approx(ref_b, rel=1e-8)
    assert cf.hcrb_offline(c, L, l).value == pytest.approx(ref_h, rel=1e-8)
