"""Walk through the full pipeline on a six-petal rose automorphism.

Run with ``python demos/rose6_walkthrough.py``.
"""

from traintracks.absolute import transition_analysis, whitehead_graphs
from traintracks.bounds import compute_bounds
from traintracks.document import sample_document
from traintracks.fixed import build_xstar, fixed_subgroup_generators, format_word
from traintracks.inp import compute_inps
from traintracks.turns import illegal_turn_closure, map_profile
from traintracks.vsets import enumerate_v

doc = sample_document("rose6")
G, f = doc.G, doc.f

# The map is a train track: iterates of edges never cross an illegal turn.
prof = map_profile(G, f)
print("train track:", prof.is_train_track, " expanding after", prof.t_exp, "steps")

# Illegal turns and the time t0 after which the closure stops changing.
closure = illegal_turn_closure(G, f)
print("illegal turns:", sorted(str(T) for T in closure.nondegenerate), " t0 =", closure.t0)

# V(f) collects the paths whose two branches overlap long enough under f.
print("V(f):", [str(v) for v in enumerate_v(G, f, 1)])

b = compute_bounds(G, f)
print("bounds:", b.as_dict())

# Indivisible Nielsen paths, with their periods and endpoint kinds.
a = compute_inps(G, f)
for r in a.records:
    print(f"INP {r}  period={r.period}  endpoints={r.endpoint_kind}")
print("domain power:", a.power)

# The fixed subgroup at the rose vertex comes out of the X* graph.
xs = build_xstar(f)
gens = fixed_subgroup_generators(xs, "v").generators
print("fixed subgroup generators:", [format_word(g) for g in gens])

ta = transition_analysis(f)
print("primitive:", ta.primitive, " whitehead connected:",
      all(w.connected for w in whitehead_graphs(f).values()))
