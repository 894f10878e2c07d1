from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from painlab.numkit import ComplexPath, integrate_path, local_samples
from painlab.systems import (
    FormalMonodromies,
    PainleveCoefficients,
    coordinate_field,
    painleve_coefficients,
    painleve_rhs,
)
from painlab.transforms import (
    GENERATORS,
    BranchChoice,
    TransformTag,
    affine_det,
    apply_word,
    compose,
    decompose,
    gromak_backlund,
    gromak_roots,
    lattice_affine,
    okamoto_p5,
    reflection,
    schlesinger_theta,
    theta_lattice,
    verify_on_trajectory,
    word_map,
)

from conftest import TIGHT

THETA = FormalMonodromies.p5(0.3 + 0.1j, -0.2, 0.7j)


def _thetas(th):
    return np.array([th.theta0, th.theta1, th.thetainf], dtype=complex)


@pytest.fixture(scope="module")
def yzu_trajectory():
    return integrate_path(coordinate_field("C40-P5", THETA), [0.7 + 0.1j, 0.3 - 0.2j, 1.0],
                          ComplexPath([1.0, 1.5]), TIGHT)


@pytest.fixture(scope="module")
def p5_samples():
    co = painleve_coefficients(THETA)
    f = lambda t, s: [s[1], painleve_rhs("P5", co, t, s[0], s[1])]
    return local_samples(f, [0.7 + 0.1j, 0.3 - 0.2j], 1.2, 1e-4, n=5)


# ----------------------------------------------------------------- Gromak

def test_gromak_value_and_coefficients():
    yh, ch = gromak_backlund(1, 2, 0, PainleveCoefficients(0.5, -0.5, 0, -0.5), (1, 1, 1))
    assert yh == pytest.approx(5.0)
    assert ch.alpha == pytest.approx(1 / 8) and ch.beta == pytest.approx(-1 / 8)


def test_branch_choice_validation():
    assert len(BranchChoice.all()) == 32
    with pytest.raises(ValueError):
        BranchChoice(eps=0)
    with pytest.raises(ValueError):
        TransformTag("GROMAK")
    with pytest.raises(ValueError):
        TransformTag("R0", BranchChoice())
    with pytest.raises(ValueError):
        TransformTag("NOPE")


@pytest.mark.parametrize("branch", [BranchChoice(), BranchChoice(1, 1, 1, 1, -1)])
def test_lattice_at_zero_exponents(branch):
    h = theta_lattice(FormalMonodromies.p5(0, 0, 0), branch)
    assert h.thetainf == pytest.approx(1)
    assert h.theta0 - h.theta1 == pytest.approx(1)
    assert h.theta0 + h.theta1 == pytest.approx(1)


@pytest.mark.parametrize("branch", BranchChoice.all())
def test_lattice_is_unimodular_and_decomposes(branch):
    m = lattice_affine(branch)
    assert abs(affine_det(m)) == 1
    word = decompose(branch)
    assert word_map(word) == m
    a, b = theta_lattice(THETA, branch), apply_word(word, THETA)
    assert np.max(np.abs(_thetas(a) - _thetas(b))) < 1e-13


@pytest.mark.parametrize("branch", BranchChoice.all())
def test_hatted_coefficients_match_lattice(branch):
    roots = gromak_roots(THETA, branch)
    _, ch = gromak_backlund(0.5, 0.3, 0.2, painleve_coefficients(THETA), roots)
    cc = painleve_coefficients(theta_lattice(THETA, branch))
    assert max(abs(x - y) for x, y in zip(ch.as_tuple(), cc.as_tuple())) < 1e-13


@pytest.mark.parametrize("branch", BranchChoice.all()[::8])
def test_gromak_maps_solutions_to_solutions(branch, p5_samples):
    rep = verify_on_trajectory(TransformTag.gromak(branch), p5_samples, THETA, 1e-5)
    assert rep.status == "PASS"


def test_gromak_root_mismatch_fails(p5_samples):
    b = BranchChoice()
    r = gromak_roots(THETA, b)
    rep = verify_on_trajectory(TransformTag.gromak(b), p5_samples, THETA, 1e-5,
                               coeff_roots=(-r[0], r[1], r[2]))
    assert rep.status == "FAIL"


# ------------------------------------------------------ Okamoto, reflections

def test_okamoto_example():
    hat, th, co = okamoto_p5({"y": 2, "z": 1}, FormalMonodromies.p5(2, 0, 0), 1.0)
    assert hat["y"] == pytest.approx(1) and hat["z"] == pytest.approx(2)
    assert _thetas(th) == pytest.approx([1, -1, -2])


def test_okamoto_exponents_at_zero():
    assert np.all(_thetas(apply_word(("OKAMOTO",), FormalMonodromies.p5(0, 0, 0))) == 0)


def test_r0_example():
    hat, th, t = reflection("R0", {"y": 2, "z": 1, "u": 1}, FormalMonodromies.p5(1, 0, 0), 1.0)
    assert [hat["y"], hat["z"], hat["u"]] == pytest.approx([1, 2, 2])
    assert th.theta0 == pytest.approx(-1)


def test_r0_changes_painleve_coefficients():
    th = FormalMonodromies.p5(0.4, 0.1, 0.3)
    th_r = apply_word(("R0",), th)
    a, b = painleve_coefficients(th), painleve_coefficients(th_r)
    assert a.gamma == pytest.approx(1 - 0.4 - 0.1) and b.gamma == pytest.approx(1 + 0.4 - 0.1)


def test_rinf_example():
    hat, _, t = reflection("RINF", {"y": 2, "z": 1}, FormalMonodromies.p5(0, 0, 0), 1.0)
    assert hat["y"] == pytest.approx(0.5) and hat["z"] == pytest.approx(-1) and t == -1


@pytest.mark.parametrize("tag", ["R0", "R1", "RINF", "R01", "S_PP", "S_MM"])
def test_involutions_and_inverses(tag):
    inverse = {"S_PP": "S_MM", "S_MM": "S_PP"}.get(tag, tag)
    assert compose(GENERATORS[inverse], GENERATORS[tag]) == word_map(())


def test_schlesinger_on_zero():
    assert _thetas(schlesinger_theta("S_PP", FormalMonodromies.p5(0, 0, 0))) == pytest.approx([1, 0, 1])
    with pytest.raises(ValueError):
        schlesinger_theta("R0", THETA)


def test_r01_swaps_local_exponents():
    th = apply_word(("R01",), THETA)
    assert th.theta0 == THETA.theta1 and th.theta1 == THETA.theta0


@given(st.lists(st.sampled_from(sorted(GENERATORS)), max_size=6))
@settings(max_examples=60, deadline=None)
def test_word_maps_stay_unimodular(word):
    m = word_map(tuple(word))
    assert abs(affine_det(m)) == 1
    assert all(isinstance(x, Fraction) or isinstance(x, int) for r in m[0] for x in r)


def test_decompose_rejects_foreign_linear_part():
    bad = (((Fraction(2), 0, 0), (0, 1, 0), (0, 0, 1)), (Fraction(0),) * 3)
    with pytest.raises(LookupError):
        decompose(bad)


# ----------------------------------------------------- trajectory checks

@pytest.mark.parametrize("tag", [None, "OKAMOTO", "R0", "R1", "RINF", "R01"])
def test_transforms_preserve_the_system(tag, yzu_trajectory):
    rep = verify_on_trajectory(tag, yzu_trajectory, THETA, 1e-10)
    assert rep.status == "PASS" and rep.samples > 10
    assert rep.transform == ("IDENTITY" if tag is None else tag)


def test_schlesinger_has_no_trajectory_action(yzu_trajectory):
    with pytest.raises(ValueError):
        verify_on_trajectory("S_PP", yzu_trajectory, THETA, 1e-10)
