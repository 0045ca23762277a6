"""Exhaustive leakage audit: exact joint enumeration over tiny fields.

Security here means: for every admissible coalition, the distribution of the
coalition's observations is the same for every assignment of the data
matrices.  The audit checks this by counting, so SECURE is a theorem about
the instance, not a sample.
"""

import numpy as np
import pytest

from sgpd import (
    AuditInstance,
    BudgetExceeded,
    ConfigurationError,
    PrimeField,
    audit,
    audit_all_subsets,
    report_lines,
)


@pytest.fixture(scope="module")
def micro_tall():
    return AuditInstance(2, 1, 1, 1, 4, PrimeField(5), 2, 1, 1)


def test_micro_tall_is_secure(micro_tall):
    verdict = audit_all_subsets(micro_tall)
    assert verdict.secure
    assert verdict.cases_per_subset == 3125  # 5 data + random symbols over GF(5)
    assert len(verdict.subsets) == 4
    for sub in verdict.subsets:
        assert sub.secure and sub.uniform
        assert sub.support == 25  # observations cover GF(5)^2 uniformly


def test_negative_control_flips_to_insecure(micro_tall):
    control = AuditInstance(2, 1, 1, 1, 4, PrimeField(5), 2, 1, 1, negative_control=True)
    verdict = audit_all_subsets(control)
    assert not verdict.secure
    assert any(not sub.secure for sub in verdict.subsets)
    # shares without randomness are a deterministic function of the data
    assert all(sub.support == 1 for sub in verdict.subsets)


def test_micro_wide_is_secure():
    inst = AuditInstance(1, 1, 1, 1, 4, PrimeField(5), 1, 1, 1)
    assert audit_all_subsets(inst).secure
    control = AuditInstance(1, 1, 1, 1, 4, PrimeField(5), 1, 1, 1, negative_control=True)
    assert not audit_all_subsets(control).secure


def test_single_subset_consistent_with_full_audit(micro_tall):
    full = audit_all_subsets(micro_tall)
    alone = audit(micro_tall, (2,))
    matching = [s for s in full.subsets if s.subset == (2,)]
    assert matching and matching[0] == alone


def test_smaller_coalitions_also_learn_nothing():
    inst = AuditInstance(2, 1, 1, 2, 3, PrimeField(5), 2, 1, 1)
    assert audit(inst, (1, 3)).secure
    assert audit(inst, (2,)).secure  # below the collusion bound


def test_fingerprint_is_deterministic(micro_tall):
    assert audit(micro_tall, (1,)).fingerprint == audit(micro_tall, (1,)).fingerprint


def test_budget_refusal(micro_tall):
    with pytest.raises(BudgetExceeded) as info:
        audit_all_subsets(micro_tall, budget=100)
    assert info.value.required == 4 * 3125
    assert info.value.budget == 100
    with pytest.raises(BudgetExceeded):
        audit(micro_tall, (1,), budget=3124)


def test_negative_control_charged_like_the_real_audit(micro_tall):
    # the control enumerates fewer variables but is budgeted identically, so
    # a budget that blocks the audit also blocks its control
    control = AuditInstance(2, 1, 1, 1, 4, PrimeField(5), 2, 1, 1, negative_control=True)
    with pytest.raises(BudgetExceeded):
        audit_all_subsets(control, budget=3125 * 4 - 1)


def test_subset_validation(micro_tall):
    with pytest.raises(ConfigurationError):
        audit(micro_tall, (0,))
    with pytest.raises(ConfigurationError):
        audit(micro_tall, (5,))
    with pytest.raises(ConfigurationError):
        audit(micro_tall, (1, 1))
    with pytest.raises(ConfigurationError):
        audit(micro_tall, (1, 2))  # larger than the collusion level


def test_instance_validation():
    with pytest.raises(ConfigurationError):
        AuditInstance(2, 1, 1, 1, 5, PrimeField(5), 2, 1, 1)  # needs p > workers
    with pytest.raises(ConfigurationError):
        AuditInstance(2, 1, 1, 1, 4, PrimeField(5), 3, 1, 1)  # t does not divide T
    with pytest.raises(ConfigurationError):
        AuditInstance(2, 1, 1, 0, 4, PrimeField(5), 2, 1, 1)  # nothing to audit


def test_report_lines_shape(micro_tall):
    verdict = audit_all_subsets(micro_tall)
    lines = report_lines(micro_tall, verdict)
    assert lines[0].startswith("instance t=2 s=1 d=1")
    assert lines[-1] == "verdict=SECURE"
    assert sum("verdict=SECURE" in ln for ln in lines[2:-1]) == 4


def test_observed_support_matches_collusion_dimension():
    # two colluding workers observe 4 symbols; support is p^4, still uniform
    inst = AuditInstance(2, 1, 1, 2, 3, PrimeField(5), 2, 1, 1)
    verdict = audit(inst, (1, 2))
    assert verdict.secure and verdict.uniform
    assert verdict.support == 5**4
