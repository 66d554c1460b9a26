import math

import numpy as np
import pytest

from vqsl import qmat, states
from vqsl.exceptions import ParamOutOfRange
from vqsl.states import Region, WernerVariant
from vqsl.validation import state_violations

VARIANTS = list(WernerVariant)


def purity_loops(rho):
    n = rho.shape[0]
    return sum((rho[i, j] * rho[j, i]).real for i in range(n) for j in range(n))


def test_maximally_entangled_kets():
    psi0 = states.maximally_entangled()
    expected = (qmat.ket(0, 0) + qmat.ket(1, 1) + qmat.ket(2, 2)) / math.sqrt(3)
    np.testing.assert_allclose(psi0, expected, atol=1e-15)
    psi1 = states.maximally_entangled("psi1")
    expected = (qmat.ket(0, 1) + qmat.ket(1, 2) + qmat.ket(2, 0)) / math.sqrt(3)
    np.testing.assert_allclose(psi1, expected, atol=1e-15)
    for v in VARIANTS:
        assert np.linalg.norm(states.maximally_entangled(v)) == pytest.approx(1, abs=1e-15)


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("p", [0.0, 0.25, 0.5, 1.0])
def test_werner_is_state_with_expected_purity(variant, p):
    rho = states.werner(p, variant)
    herm, tr, lo = state_violations(rho)
    assert herm <= 1e-12 and tr <= 1e-12 and lo >= -1e-12
    assert purity_loops(rho) == pytest.approx((1 - p * p) / 9 + p * p, abs=1e-12)


def test_werner_limits():
    np.testing.assert_allclose(states.werner(0.0), np.eye(9) / 9, atol=1e-15)
    psi = states.maximally_entangled()
    np.testing.assert_allclose(states.werner(1.0), np.outer(psi, psi.conj()), atol=1e-15)


@pytest.mark.parametrize("p", [-0.1, 1.1, math.nan])
def test_werner_rejects_out_of_range(p):
    with pytest.raises(ParamOutOfRange, match="p out of"):
        states.werner(p)


def test_shift_unitary():
    s = states.shift_unitary()
    assert np.max(np.abs(s.conj().T @ s - np.eye(9))) <= 1e-15
    np.testing.assert_allclose(np.linalg.matrix_power(s, 3), np.eye(9), atol=1e-15)
    psi0 = states.maximally_entangled("psi0")
    psi1 = states.maximally_entangled("psi1")
    np.testing.assert_allclose(s.conj().T @ psi0, psi1, atol=1e-15)
    expected = (qmat.ket(0, 2) + qmat.ket(1, 0) + qmat.ket(2, 1)) / math.sqrt(3)
    np.testing.assert_allclose(s @ psi0, expected, atol=1e-15)
    for p in (0.2, 0.7, 1.0):
        conj = s.conj().T @ states.werner(p, "psi0") @ s
        np.testing.assert_allclose(conj, states.werner(p, "psi1"), atol=1e-15)


def test_swapped_variant_is_party_swap():
    for p in (0.3, 1.0):
        np.testing.assert_allclose(
            states.swap_parties(states.werner(p, "psi1")), states.werner(p, "psi1-swapped"), atol=1e-15
        )


@pytest.mark.parametrize("alpha", np.linspace(0, 5, 51))
def test_horodecki_is_state(alpha):
    herm, tr, lo = state_violations(states.horodecki(alpha))
    assert herm <= 1e-12 and tr <= 1e-12 and lo >= -1e-12


def test_horodecki_explicit_entries():
    rho = states.horodecki(3.0)
    i = lambda a, b: np.argmax(np.abs(qmat.ket(a, b)))  # noqa: E731
    assert rho[i(0, 0), i(1, 1)] == pytest.approx(2 / 21)
    assert rho[i(0, 0), i(0, 0)] == pytest.approx(2 / 21)
    assert rho[i(0, 1), i(0, 1)] == pytest.approx(3 / 21)
    assert rho[i(1, 0), i(1, 0)] == pytest.approx(2 / 21)
    assert rho[i(0, 1), i(1, 0)] == 0


@pytest.mark.parametrize("alpha", [0.0, 0.7, 1.5, 2.5, 3.2])
def test_horodecki_reflection_is_party_swap(alpha):
    np.testing.assert_allclose(
        states.swap_parties(states.horodecki(alpha)), states.horodecki(5 - alpha), atol=1e-15
    )


def test_swap_is_involution(rng):
    from conftest import random_density

    rho = random_density(rng, 9)
    np.testing.assert_allclose(states.swap_parties(states.swap_parties(rho)), rho, atol=0)


def test_negativity_werner():
    assert states.negativity(states.werner(0.25)) == 0.0
    assert states.negativity(states.werner(1.0)) == pytest.approx(1.0, abs=1e-12)
    for p in (0.3, 0.6, 0.9):
        # eigenvalue (1 - 4p)/9 of multiplicity 3
        assert states.negativity(states.werner(p)) == pytest.approx(3 * (4 * p - 1) / 9, abs=1e-12)
        n0 = states.negativity(states.werner(p, "psi0"))
        for v in ("psi1", "psi1-swapped"):
            assert states.negativity(states.werner(p, v)) == pytest.approx(n0, abs=1e-12)


def test_horodecki_ppt_structure():
    for alpha in np.linspace(1, 4, 13):
        assert states.is_ppt(states.horodecki(alpha))
        assert states.negativity(states.horodecki(alpha)) == 0.0
    for alpha in (0.0, 0.5, 0.9, 4.1, 5.0):
        assert not states.is_ppt(states.horodecki(alpha))
        assert states.negativity(states.horodecki(alpha)) > 0
    assert states.is_ppt(states.horodecki(1.5))


@pytest.mark.parametrize(
    "family, param, label",
    [
        ("werner", 0.25, Region.SEPARABLE),
        ("werner-psi1", 0.26, Region.FREE_ENTANGLED),
        ("werner-psi0", 0.0, Region.SEPARABLE),
        ("horodecki", 2.5, Region.SEPARABLE),
        ("horodecki", 2.0, Region.SEPARABLE),
        ("horodecki", 3.0, Region.SEPARABLE),
        ("horodecki", 3.5, Region.BOUND_ENTANGLED),
        ("horodecki", 1.5, Region.BOUND_ENTANGLED),
        ("horodecki", 4.5, Region.FREE_ENTANGLED),
        ("horodecki", 0.5, Region.FREE_ENTANGLED),
    ],
)
def test_classify_region(family, param, label):
    region = states.classify_region(family, param)
    assert region.label is label and region.parameter == param


def test_classify_region_consistent_with_negativity():
    for p in np.linspace(0, 1, 41):
        free = states.classify_region("werner", p).label is Region.FREE_ENTANGLED
        assert free == (states.negativity(states.werner(p)) > 0)
    for a in np.linspace(0, 5, 51):
        free = states.classify_region("horodecki", a).label is Region.FREE_ENTANGLED
        assert free == (states.negativity(states.horodecki(a)) > 0)


def test_classify_region_errors():
    with pytest.raises(ParamOutOfRange):
        states.classify_region("horodecki", 5.5)
    with pytest.raises(ParamOutOfRange):
        states.classify_region("ghz", 0.5)
    with pytest.raises(ParamOutOfRange):
        states.family_state("ghz", 0.5)
