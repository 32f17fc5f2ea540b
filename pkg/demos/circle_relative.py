"""A relative system: one top edge glued onto a circle vertex space.

The vertex space X is a circle with loop x, and the top edge b maps across
it as ``b {X: x} b``.  Nothing in the top edge is periodic, while the loop
inside X is carried by the vertex space.

Run with ``python demos/circle_relative.py``.
"""

from traintracks.bounds import compute_bounds
from traintracks.document import sample_document
from traintracks.fixed import classify_conjugacy_class
from traintracks.groupoid import is_surjective_on_pi1
from traintracks.inp import compute_inps
from traintracks.paths import format_path, parse_loop, parse_path
from traintracks.turns import special_turns

doc = sample_document("circle")
G, f = doc.G, doc.f

print("f(b) =", format_path(f.map_path(parse_path(G, "b"))))
print("surjective on pi1:", is_surjective_on_pi1(G, f))
print("special turns:", [str(T) for T in special_turns(G, f, 1)])
print("bounds:", compute_bounds(G, f).as_dict())
print("INPs:", compute_inps(G, f).records)
for loop in ("b", "{X: x}"):
    print(loop, "->", classify_conjugacy_class(G, f, parse_loop(G, loop)).kind)
