import os
import random
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from oracles import positive_automorphism_images  # noqa: E402
from traintracks.document import sample_document  # noqa: E402
from traintracks.morphism import GosMorphism  # noqa: E402
from traintracks.turns import expansion_exponent  # noqa: E402

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ROSE6 = {"a": "baccddeeff", "b": "a", "c": "ac", "d": "da", "e": "ae", "f": "fa"}

# t-hat from the cancellation constants is too small for this map: three of
# its INP prolongations only appear in V(f^4) while t-hat = 3.
SLOW_INP_MAP = {"a": "bbba", "b": "cbba", "c": "bba"}


def expanding_roses(seed: int, count: int, ranks=(2, 3), max_len: int = 4):
    """Deterministic list of expanding positive rose automorphisms."""
    rng = random.Random(seed)
    out, seen = [], set()
    while len(out) < count:
        imgs = positive_automorphism_images(rng, rng.choice(ranks), max_len=max_len)
        key = tuple(sorted(imgs.items()))
        if key in seen:
            continue
        seen.add(key)
        if expansion_exponent(GosMorphism.rose(imgs)) is not None:
            out.append(imgs)
    return out


@pytest.fixture
def rose6():
    d = sample_document("rose6")
    return d.G, d.f


@pytest.fixture
def circle():
    d = sample_document("circle")
    return d.G, d.f


@pytest.fixture
def fibonacci():
    d = sample_document("fibonacci")
    return d.G, d.f
