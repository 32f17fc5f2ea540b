"""The Fibonacci map a -> ab, b -> a has a single INP of period two.

Run with ``python demos/fibonacci_inp.py``.
"""

from traintracks.document import sample_document
from traintracks.fixed import classify_conjugacy_class
from traintracks.inp import compute_inps
from traintracks.paths import parse_loop

doc = sample_document("fibonacci")
G, f = doc.G, doc.f

for r in compute_inps(G, f).records:
    print(f"INP {r}: period {r.period}")

# The commutator is the loop formed by the INP, so f^2 fixes its conjugacy class.
cert = classify_conjugacy_class(G, f, parse_loop(G, "A B a b"))
print("A B a b:", cert.kind, "periodic" if cert.periodic else "not periodic")
