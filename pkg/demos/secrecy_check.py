"""Exhaustive proof-by-counting that shares leak nothing.

A micro instance over GF(5) is small enough to enumerate every assignment of
the data and randomness.  For each possible colluding subset the audit builds
the exact distribution of the coalition's observations conditioned on the
data; SECURE means every condition gives the same distribution.  Zeroing the
randomness (the negative control) must break this.
"""

from sgpd import AuditInstance, PrimeField, audit_all_subsets, report_lines

instance = AuditInstance(
    t=2, s=1, d=1, p_c=1, n_workers=4, field=PrimeField(5),
    big_t=2, big_s=1, big_d=1,
)
verdict = audit_all_subsets(instance)
for line in report_lines(instance, verdict):
    print(line)

print()
control = AuditInstance(
    t=2, s=1, d=1, p_c=1, n_workers=4, field=PrimeField(5),
    big_t=2, big_s=1, big_d=1, negative_control=True,
)
control_verdict = audit_all_subsets(control)
print("negative control (randomness zeroed):", "SECURE" if control_verdict.secure else "INSECURE")
assert verdict.secure and not control_verdict.secure
