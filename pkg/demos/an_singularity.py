"""The A_N chart monoid, its groupification and the log differentials."""
from cdr_engine.monoid import (
    an_chart,
    an_log_differentials,
    an_monoid,
    clifford_pairing,
    etale_check,
    groupify,
    is_saturated,
    membership,
    smoothness_check,
)
from cdr_engine.modes import format_state

for N in range(2, 6):
    Q = an_monoid(N)
    gp = groupify(Q)
    et = etale_check(an_chart(N))
    print(f"N={N}: Q^gp = {gp.group}, basis {gp.basis}, Z^2/Q^gp = {gp.cokernel}; "
          f"chart etale: {et.etale}; saturated: {is_saturated(Q).saturated}; "
          f"smooth in char 2: {smoothness_check(Q, 2).smooth}")

# (x, y) lies in Q(3) exactly when x = y mod 3
Q3 = an_monoid(3)
for v in [(4, 1), (2, 1), (6, 0), (5, 5)]:
    ok, wit = membership(Q3, v)
    print(v, "in Q(3)" if ok else "not in Q(3)", wit or "")

pres = an_log_differentials(3)
print("\nlog differentials of Q(3):")
for k, v in pres.format_pullback().items():
    print(f"  {k} -> {v}")
for note in pres.notes:
    print("  note:", note)

print("\nClifford pairing of dp, dq against dp*, dq*:")
for (a, b), ope in clifford_pairing().items():
    print(f"  {a:3} {b:4}", {n + 1: format_state(v) for n, v in ope.nonzero().items()} or "regular")
