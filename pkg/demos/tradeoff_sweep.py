"""Recovery-threshold versus communication-load trade-off, three collusion levels.

For fixed storage fractions (each worker holds 1/36 of A and of B) the block
split (t, s, d) is a free knob: small s favors cheap decoding (few field
elements per output), large s favors a low recovery threshold.  Raising the
collusion tolerance P_C shifts the whole curve up.
"""

from sgpd.cli import sweep_rows

POOL = 3000
rows = sweep_rows(36, 36, POOL, [0, 11, 29])

print(f"{'pc':>3} {'t':>3} {'s':>3} {'d':>3} {'case':<12} {'P_R':>5} {'C_L/TD':>9} {'frontier':>8}")
for row in rows:
    print(
        f"{row['pc']:>3} {row['t']:>3} {row['s']:>3} {row['d']:>3} "
        f"{row['case']:<12} {row['P_R']:>5} {str(row['C_L_over_TD']):>9} "
        f"{'*' if row['frontier'] else '':>8}"
    )

for p_c in (0, 11, 29):
    frontier = [(r["P_R"], str(r["C_L_over_TD"])) for r in rows if r["pc"] == p_c and r["frontier"]]
    print(f"\nP_C={p_c}: frontier (P_R, C_L/TD) pairs: {frontier}")
