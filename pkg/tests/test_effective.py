import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stc.effective import (
    COMP_INDEX,
    INT2_TERMS,
    SZERO_INDEX,
    bond_gammas,
    build_h_st,
    build_h_szero,
    gamma_parallel,
    gamma_perp,
    j_of_phi,
    numerical_second_order,
    project,
    second_order_corrections,
    zeeman_split,
)
from stc.errors import UnalignedZeeman, ZeroZeemanField
from stc.hubbard import exact_effective_hamiltonian, schrieffer_wolff2
from stc.linalg import max_abs, traceless
from stc.spin import Rotation3, SpinParams, UniformDevice, build_h_spin, rotation_matrix

from conftest import angles, random_rotation, rotations, spin_params

GRID = np.linspace(0, 2 * np.pi, 100)
THETA = np.linspace(0, np.pi, 100)


def test_gamma_examples():
    assert gamma_parallel(np.pi, np.pi / 2) == pytest.approx(1.0, abs=1e-15)
    assert gamma_parallel(0.0, 0.7) == -1.0
    assert gamma_parallel(np.pi, 0.0) == pytest.approx(-1.0, abs=1e-15)
    assert abs(gamma_perp(np.pi, np.pi / 2)) < 1e-30
    assert gamma_perp(0.0, 1.3) == 1.0
    assert gamma_perp(np.pi, 0.0) == pytest.approx(-1.0, abs=1e-15)


def test_gamma_identity_on_grid():
    phi, theta = np.meshgrid(GRID, THETA)
    lhs = 2 * np.abs(gamma_perp(phi, theta)) + gamma_parallel(phi, theta)
    assert np.max(np.abs(lhs - 1)) < 1e-13
    assert np.all(np.abs(gamma_perp(phi, theta)) <= 1 + 1e-15)
    assert np.all(np.abs(gamma_parallel(phi, theta)) <= 1 + 1e-15)


@given(angles, st.floats(0, np.pi), angles)
def test_bond_gammas_match_closed_forms(phi, theta, azimuth):
    axis = (np.sin(theta) * np.cos(azimuth), np.sin(theta) * np.sin(azimuth), np.cos(theta))
    gpar, gperp = bond_gammas(rotation_matrix(Rotation3.about(axis, phi)))
    assert gpar == pytest.approx(gamma_parallel(phi, theta), abs=1e-12)
    assert gperp == pytest.approx(gamma_perp(phi, theta), abs=1e-12)


def test_j_of_phi():
    assert j_of_phi(0.4, 0.0) == pytest.approx(1.6)
    assert abs(j_of_phi(0.4, np.pi)) < 1e-16
    assert j_of_phi(0.4, np.pi / 2) == pytest.approx(0.8)
    assert j_of_phi(0.4, 0.3) == pytest.approx(j_of_phi(0.4, 0.3 + 2 * np.pi))


@given(spin_params())
def test_exact_projection_identities(p):
    h = build_h_spin(p)
    hst, st_ = build_h_st(p)
    assert max_abs(traceless(hst) - traceless(project(h, COMP_INDEX))) <= 1e-12
    h6, _ = build_h_szero(p)
    assert max_abs(traceless(h6) - traceless(project(h, SZERO_INDEX))) <= 1e-12
    assert st_.b1[2] == pytest.approx(p.dh1) and st_.b2[2] == pytest.approx(p.dh2)


@given(spin_params())
def test_leakage_splitting_independent_of_exchange(p):
    _, spec = build_h_szero(p)
    h1, h2, h3, h4 = p.hz
    assert spec.e_leak_plus - spec.e_leak_minus == pytest.approx(h1 + h2 - h3 - h4, abs=1e-12)


def test_zeeman_only_leakage_energies():
    p = SpinParams(h=[21.0, 20.0, 19.5, 17.0])
    _, spec = build_h_szero(p)
    assert spec.e_leak_plus == pytest.approx(2.25) and spec.e_leak_minus == pytest.approx(-2.25)


def test_sweet_spot_decouples_leakage():
    p = UniformDevice(jsc=0.4).spin_params()
    h6, spec = build_h_szero(p)
    assert abs(spec.coupling) < 1e-14
    assert max_abs(h6[:4, 4:]) < 1e-14
    _, st_ = build_h_st(p)
    assert st_.jzz == pytest.approx(0.4, abs=1e-15)


def test_pure_ising_without_local_fields():
    p = UniformDevice(jsc=0.4, dh1=0.0, dh2=0.0).spin_params()
    hst, _ = build_h_st(p)
    assert np.allclose(hst, np.diag([0.1, -0.1, -0.1, 0.1]), atol=1e-15)


def test_unaligned_fields_rejected():
    p = SpinParams(h=np.array([[1.0, 0, 20], [0, 0, 19], [0, 0, 18], [0, 0, 17]]))
    with pytest.raises(UnalignedZeeman):
        build_h_st(p)
    with pytest.raises(UnalignedZeeman):
        build_h_szero(p)


# ---------------------------------------------------------------- second order

def _generic(rng, scale=1.0, hz=(21.0, 19.0, 18.0, 16.0)):
    return SpinParams(h=np.array(hz), j1=0.3 * scale, j2=0.25 * scale, jsc=0.4 * scale,
                      rot1=random_rotation(rng), rotsc=random_rotation(rng), rot2=random_rotation(rng))


def test_oracle_form_matches_numerical_reduction(rng):
    for _ in range(20):
        p = _generic(rng)
        terms = second_order_corrections(p)
        leak, inter = numerical_second_order(p)
        assert np.allclose(terms.leak2, leak, atol=1e-13)
        assert np.allclose(terms.int2, inter, atol=1e-13)


def test_verbatim_form_disagrees_with_numerical_reduction(rng):
    p = _generic(rng)
    terms = second_order_corrections(p, form="verbatim")
    leak, inter = numerical_second_order(p)
    assert max(np.max(np.abs(np.subtract(terms.leak2, leak))), np.max(np.abs(np.subtract(terms.int2, inter)))) > 1e-4


def test_dduu_column_follows_from_uudd_column(rng):
    p = _generic(rng)
    h0, v = zeeman_split(p)
    h2 = schrieffer_wolff2(h0, v, SZERO_INDEX) - project(h0 + v, SZERO_INDEX)
    flipped = [3, 2, 1, 0]
    for c in range(4):
        assert h2[flipped[c], 5] == pytest.approx(-np.conj(h2[c, 4]), abs=1e-14)


@given(rotations(), rotations(), angles)
def test_interaction_terms_vanish_at_sweet_spot(r1, r2, azimuth):
    rsc = Rotation3((np.cos(azimuth), np.sin(azimuth), 0.0), np.pi)
    p = SpinParams(h=[21.0, 19.0, 18.0, 16.0], j1=0.3, j2=0.2, jsc=0.4, rot1=r1, rotsc=rsc, rot2=r2)
    for form in ("oracle", "verbatim"):
        assert max(abs(x) for x in second_order_corrections(p, form).int2) < 1e-14


@given(rotations(), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_leakage_terms_vanish_without_dot_rotations(rsc, j1, j2, jsc):
    p = SpinParams(h=[21.0, 19.0, 18.0, 16.0], j1=j1, j2=j2, jsc=jsc, rotsc=rsc)
    for form in ("oracle", "verbatim"):
        assert max(abs(x) for x in second_order_corrections(p, form).leak2) < 1e-14


def test_zero_zeeman_rejected():
    with pytest.raises(ZeroZeemanField):
        second_order_corrections(SpinParams(h=[20.0, 0.0, 18.0, 17.0], jsc=0.4))
    with pytest.raises(ValueError):
        second_order_corrections(SpinParams(h=[20.0, 19.0, 18.0, 17.0]), form="other")


def _residual(p):
    """Mismatch of the second-order block against the all-orders zero-magnetization block."""
    h0, v = zeeman_split(p)
    exact = exact_effective_hamiltonian(build_h_spin(p), SZERO_INDEX)
    approx = schrieffer_wolff2(h0, v, SZERO_INDEX)
    return max_abs(traceless(exact) - traceless(approx))


def test_second_order_residual_is_third_order():
    scales = [1.0, 0.5, 0.25]
    r = [_residual(_generic(np.random.default_rng(7), s)) for s in scales]
    order = np.polyfit(np.log(scales), np.log(r), 1)[0]
    assert order == pytest.approx(3.0, abs=0.3)


def test_int2_term_order():
    assert INT2_TERMS == ("xz", "yz", "zx", "zy")
