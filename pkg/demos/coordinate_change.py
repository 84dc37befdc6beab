"""Changing the coordinate gamma -> f(gamma) and checking what survives.

Two fermion rules are compared.  The logarithmic one treats c as dgamma/gamma,
the plain one treats c as dgamma.  Both share the same beta~.
"""
from fractions import Fraction

from cdr_engine.coordinates import CoordTransform1, verify_tilde_ope, verify_virasoro_invariance

examples = {
    "2 gamma": CoordTransform1.from_coefficients([2], 8),
    "gamma + gamma^2": CoordTransform1.from_coefficients([1, 1], 8),
    "gamma + gamma^3": CoordTransform1.from_coefficients([1, 0, 1], 8),
    "gamma - gamma^2/3": CoordTransform1.from_coefficients([1, Fraction(-1, 3)], 8),
}

print("inverse of gamma + gamma^2:", [str(c) for c in examples["gamma + gamma^2"].g.to_list()])

for variant in ("log", "plain"):
    print(f"\n{variant} fermion rule (gamma_0 cutoff 8)")
    for name, t in examples.items():
        ope = verify_tilde_ope(t, 8, variant=variant)
        vir = verify_virasoro_invariance(t, 8, variant=variant)
        bad = ", ".join("~".join(c.pair) for c in ope.failures()) or "none"
        print(f"  {name:20} OPE failures: {bad:28} L~ == L: {vir.passed}")

# the leading failure for the logarithmic rule, spelled out
t = examples["gamma + gamma^2"]
check = next(c for c in verify_tilde_ope(t, 4).checks if c.pair == ("c", "beta"))
print("\nc~ beta~ first pole through gamma_0-degree 4:", check.poles.get(0))
