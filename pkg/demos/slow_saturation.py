"""A map whose INPs only show up in V(f^t) for t beyond t_hat.

For a -> bbba, b -> cbba, c -> bba the bound t_hat is 3, but two of the
three INP prolongations first appear in V(f^4).  The INP search therefore
raises the power until the set of INPs stops changing.

Run with ``python demos/slow_saturation.py``.
"""

from traintracks.fixed import build_xstar, fixed_subgroup_generators, format_word
from traintracks.inp import compute_inps, domain_power
from traintracks.morphism import GosMorphism

f = GosMorphism.rose({"a": "bbba", "b": "cbba", "c": "bba"})
a = compute_inps(f.G, f)
print("t_hat =", a.bounds.t_hat, " saturated domain power =", domain_power(f.G, f))
for r in a.records:
    print(f"INP {r}: period {r.period}, endpoints {r.endpoint_kind}")

xs = build_xstar(f)
print("X* built for f^%d with %d subdivisions" % (xs.power_used, len(xs.subdivisions)))
print("fixed words of f^%d:" % xs.power_used,
      [format_word(g) for g in fixed_subgroup_generators(xs, "v").generators])
