"""Pump frequencies and surviving interaction terms for two incommensurate modes.

    python3 demos/pump_planning.py
"""

import math

from hempss.canonical import CanonicalParams
from hempss.hamiltonian import generic_coefficients
from hempss.processes import (
    check_phase_matching,
    enumerate_terms,
    match_couplings,
    pump_design_four_photon,
    pump_design_hempss,
)

w1, w2 = 1.0, math.sqrt(2)

design = pump_design_four_photon(w1, w2)
print("twelve pumps, pair sums:")
for rel in design.relations:
    print(f"  pumps {rel.pair}: {rel.total:.7f}   ({rel.process})")

terms = enumerate_terms([3, 4, 5], (w1, w2), design.pumps)
print(f"\n{len(terms)} surviving terms:")
for t in terms:
    res, ok = check_phase_matching(t, ((0, 0, w1), (0, 0, w2)), design.pumps)
    print(f"  {t.kappa_label:<12} {t.monomial():<28} order {t.susceptibility_order}  dk={res:.1e}")

p = CanonicalParams(r=0.8, gamma_mod=0.1, chi_mod=0.1, delta1=math.pi, delta2=0.0)
a = match_couplings(generic_coefficients(p), terms, design.pumps)
print("\nrequired kappa * E * E products:")
for label, v in a.products.items():
    print(f"  {label:<12} {v.real:+.6f}{v.imag:+.6f}j")
print(f"self/cross Kerr ratio {a.kerr_ratio:.3f} (reference {a.reference_kerr_ratio}, ok={a.kerr_ratio_ok})")

cubic = pump_design_hempss(w1, w2)
only = enumerate_terms([3, 4, 5], (w1, w2), cubic.pumps, include_kerr=False)
print("\neight pumps, Kerr neglected:", ", ".join(t.monomial() for t in only))
