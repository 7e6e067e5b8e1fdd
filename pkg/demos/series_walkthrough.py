"""Coefficients of the conductor series for a few resolvents.

For each D this prints the cubic fields that feed the series (those of
discriminant D* and -27D, with their splitting type at small primes) and
then the counts N_f of cubic fields with discriminant D f^2.

    python3 demos/series_walkthrough.py
"""

from cubicphi.fields import FieldStore, inventory, omega
from cubicphi.series import c_constant, m1_factor, phi_coefficients

STORE = FieldStore.enumerate(max_pos=10**6, max_neg=30_000)

for D in (-4, -107, 321, -255, -8751):
    inv = inventory(D, STORE)
    print(f"D = {D}: c_D = {c_constant(D)}, 3-factor {m1_factor(D)}, fields at D* / -27D: {inv.sizes}")
    for label, pool in (("D*", inv.fields_Dstar), ("-27D", inv.fields_27D)):
        for E in pool:
            signs = " ".join(f"{p}:{omega(E, p):+d}" for p in (2, 5, 7, 11, 13))
            print(f"   {label:5} {E.discriminant:8d}  poly {E.poly}  omega {signs}")
    counts = phi_coefficients(D, 40, STORE).counts()
    print("   N_f for f <= 40:", {f: n for f, n in enumerate(counts, 1) if n})
    print()
