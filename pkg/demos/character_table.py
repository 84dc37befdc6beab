"""Invariant slices of V_Q and the length formula against the generator count."""
from cdr_engine.character import compare, enumerate_invariant_slice, minimal_generators
from cdr_engine.modes import format_monomial

sl = enumerate_invariant_slice(2, 1, 2)
print(f"weight-1 invariants for N=2 up to gamma_0-degree 2: {len(sl)} monomials")
for m in sl.strata[1]:
    print("  ", format_monomial(m))
print("not products of the listed blocks:", [format_monomial(m) for m in sl.not_block_products])

g = minimal_generators(3, 1)
print(f"\nN=3, r=1: {g.count} generators over V_Q^0 (counts at cutoffs {g.counts_at})")
for m in g.witnesses:
    print("  ", format_monomial(m))

for N in (2, 3, 6):
    print()
    print(compare(N, 3 if N < 6 else 2).to_text(), end="")
