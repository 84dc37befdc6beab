"""Free fields of the rank-2 system: OPEs, the Virasoro element and the differential."""
from cdr_engine.modes import StateVector, parse_state, format_state
from cdr_engine.vertex import distinguished_states, nth_product, ope_singular, translate

beta = parse_state("b[1,-1]|0>")   # beta^1_{-1}|0>, the state of beta^1(z)
gamma = parse_state("g[1,0]|0>")   # gamma^1_0|0>
b = parse_state("B[1,-1]|0>")
c = parse_state("C[1,0]|0>")

# singular parts, listed by pole order
for name, (x, y) in {"beta gamma": (beta, gamma), "gamma beta": (gamma, beta),
                     "b c": (b, c), "c b": (c, b), "gamma gamma": (gamma, gamma)}.items():
    poles = ope_singular(x, y).nonzero()
    print(f"{name:12}", {n + 1: format_state(v) for n, v in poles.items()} or "regular")

D = distinguished_states(2)
print("L =", format_state(D.L))
print("L_(1) L == 2 L:", nth_product(D.L, 1, D.L) == D.L * 2)
print("L_(3) L == 0 (central charge 0):", not nth_product(D.L, 3, D.L))
print("L_(0) L == T L:", nth_product(D.L, 0, D.L) == translate(D.L))
print("Q_(0) G == L:", D.d(D.G) == D.L)

# d = Q_(0) sends a function to its differential and squares to zero
f = parse_state("g[1,0]^3|0> + 2 g[1,0] g[2,0]|0>")
df = D.d(f)
print("d(f) =", format_state(df))
print("d(d(f)) =", format_state(D.d(df)))
