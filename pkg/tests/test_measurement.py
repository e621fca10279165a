"""
Tests for fixed-setting measurements and single-shot discrimination.
"""
from collections import Counter

import numpy as np
import pytest

from core.dfstates import singlet, six_qubit_state
from core.errors import DomainError, ShapeError
from core.measurement import (
    DECIDE_A, DECIDE_B, PAIR_SETTINGS, MeasurementSetting, discriminate,
    distribution, sample, verify_table1,
)
from core.statevec import QubitPermutation, StateVector, permute


def test_singlet_in_z_and_x():
    for bases in ("zz", "xx"):
        dist = distribution(MeasurementSetting(bases), singlet())
        assert dist.probability("01") == pytest.approx(0.5)
        assert dist.probability("10") == pytest.approx(0.5)
        assert dist.probability("00") == pytest.approx(0.0, abs=1e-15)
        assert sorted(dist.support()) == ["01", "10"]


def test_x_readout_of_plus_state():
    plus = StateVector(1, np.array([1, 1]) / np.sqrt(2))
    assert distribution(MeasurementSetting("x"), plus).probability("0") == pytest.approx(1.0)


def test_distribution_sums_to_one(six_basis):
    for psi in six_basis.values():
        for bases in set(PAIR_SETTINGS.values()):
            assert distribution(MeasurementSetting(bases), psi).probs.sum() == pytest.approx(1.0)


def test_sampling_stays_in_support_and_matches_frequencies():
    shots = sample(MeasurementSetting("zz"), singlet(), 42, 100000)
    counts = Counter(shots)
    assert set(counts) <= {"01", "10"}
    assert 0.49 <= counts["01"] / len(shots) <= 0.51


def test_sampling_is_deterministic():
    s = MeasurementSetting("zzxxzz")
    psi = six_qubit_state("111")
    assert sample(s, psi, 5, 200) == sample(s, psi, 5, 200)
    with pytest.raises(DomainError):
        sample(s, psi, 5, 0)


def test_setting_validation():
    with pytest.raises(DomainError):
        MeasurementSetting("zy")
    with pytest.raises(DomainError):
        MeasurementSetting("")
    with pytest.raises(ShapeError):
        distribution(MeasurementSetting("zzz"), singlet())


def test_discriminate_separable_pair():
    result = discriminate(MeasurementSetting("zzxxzz"), six_qubit_state("011"), six_qubit_state("101"))
    assert result.success
    assert result.success_probability == pytest.approx(1.0)
    assert result.max_overlap < 1e-12
    decisions = set(result.discriminator.decision.values())
    assert {DECIDE_A, DECIDE_B} <= decisions


def test_discriminate_genuine_state_in_z():
    result = discriminate(MeasurementSetting("zzzzzz"), six_qubit_state("000"), six_qubit_state("111"))
    assert result.success


def test_discriminate_same_state_fails():
    psi = six_qubit_state("000")
    result = discriminate(MeasurementSetting("zzzzzz"), psi, psi)
    assert not result.success
    assert result.discriminator is None
    assert result.success_probability == pytest.approx(0.5)


def test_discriminate_requires_matching_sizes():
    with pytest.raises(ShapeError):
        discriminate(MeasurementSetting("zz"), singlet(), six_qubit_state("000"))


def test_every_pair_has_a_separating_setting():
    report = verify_table1()
    assert report.total == 10
    assert report.passed == 10
    assert report.summary_line() == "table1 10 10"
    assert report.lines()[0].startswith("000 011 zzxxzz PASS")


def test_wrong_setting_is_reported_as_failure(six_basis):
    report = verify_table1(six_basis, {("000", "011"): "zzzzzz"})
    assert report.passed == 0
    assert report.lines()[-1] == "table1 0 1"


def test_discrimination_is_permutation_covariant(six_basis):
    rng = np.random.default_rng(0)
    for _ in range(20):
        p = QubitPermutation(6, tuple(int(m) for m in rng.permutation(6) + 1))
        for (a, b), bases in PAIR_SETTINGS.items():
            setting = MeasurementSetting(bases).permuted(p)
            result = discriminate(setting, permute(p, six_basis[a]), permute(p, six_basis[b]))
            assert result.success, (a, b, p.mapping)


def test_discrimination_ignores_global_phase(six_basis):
    for (a, b), bases in PAIR_SETTINGS.items():
        result = discriminate(MeasurementSetting(bases),
                              six_basis[a].scaled(np.exp(0.7j)), six_basis[b].scaled(-1j))
        assert result.success


def test_distribution_ignores_global_phase(six_basis):
    for label, psi in six_basis.items():
        for bases in ("zzzzzz", "xxxxxx", "zzxxzz", "xzxzxz"):
            setting = MeasurementSetting(bases)
            for alpha in (0.3, np.pi / 2, 2.9):
                rotated = psi.scaled(np.exp(1j * alpha))
                gap = np.max(np.abs(distribution(setting, psi).probs - distribution(setting, rotated).probs))
                assert gap <= 1e-15, (label, bases, alpha)


def test_sampled_outcomes_are_classified_without_error(six_basis):
    for (a, b), bases in list(PAIR_SETTINGS.items())[:4]:
        setting = MeasurementSetting(bases)
        discriminator = discriminate(setting, six_basis[a], six_basis[b]).discriminator
        assert all(discriminator.decide(o) == DECIDE_A for o in sample(setting, six_basis[a], 1, 10000))
        assert all(discriminator.decide(o) == DECIDE_B for o in sample(setting, six_basis[b], 2, 10000))
