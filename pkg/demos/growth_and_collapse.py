"""Split a rose map by growth and collapse the polynomial part into a vertex space.

For a -> a, b -> bab the edge a is fixed and b grows exponentially.  The
collapse produces a graph of spaces with a single top edge b.

Run with ``python demos/growth_and_collapse.py``.
"""

from traintracks.absolute import to_graph_of_spaces, transition_analysis
from traintracks.document import dump_document
from traintracks.morphism import GosMorphism
from traintracks.turns import map_profile

f = GosMorphism.rose({"a": "a", "b": "bab"})
ta = transition_analysis(f)
print("growth:", ta.growth)

H, g = to_graph_of_spaces(f)
print("collapsed document:", dump_document(H, g))
prof = map_profile(H, g)
print("train track:", prof.is_train_track, " expanding:", prof.is_expanding)
