"""
Graph isomorphism as a QUBO
===========================

Two small graphs, one a relabelled copy of the other. We build the penalty
QUBO, look at its coefficients, solve it exhaustively and read the vertex
mapping back out of the optimal bit vector.
"""

import numpy as np

from ssqa.model import qubo_energy, qubo_to_ising
from ssqa.oracle import brute_force_min
from ssqa.problems import build_gi_qubo, decode_mapping, generate_gi, verify_mapping

np.set_printoptions(linewidth=120)

inst = generate_gi(4, edge_prob=0.5, seed=3, permute=True)
print("graph 1 edges:", sorted(inst.graph1.edges))
print("graph 2 edges:", sorted(inst.graph2.edges))
print("hidden relabelling (graph2 -> graph1):", inst.truth_perm)

# 16 binary variables x[u, i]: "vertex u of graph 2 is vertex i of graph 1"
q = build_gi_qubo(inst)
print("\nQ is", q.Q.shape, "with constant", q.offset)
print(q.Q[:4, :8])

# the planted solution costs nothing
print("\nenergy of the planted mapping:", qubo_energy(q, inst.truth_bits()))

# 2**16 states is nothing for the exhaustive oracle
rep = brute_force_min(q)
print("exact minimum:", rep.min_energy, "reached by", rep.n_ground_states, "assignments")
for x in rep.ground_states:
    m = decode_mapping(x, inst.n_nodes)
    print("  ", m.as_permutation(), verify_mapping(inst, m).value)

# the same problem in spin language, as the annealers see it
ising = qubo_to_ising(q)
print("\nIsing biases range", ising.h.min(), "to", ising.h.max())
print("couplings take values", np.unique(ising.J))
