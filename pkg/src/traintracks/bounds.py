"""Cancellation and iteration constants derived from V(f)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import HypothesisViolation
from .graph import GraphOfSpaces
from .morphism import GosMorphism
from .turns import illegal_turn_closure, require_expanding_train_track
from .vsets import enumerate_v, max_entry_length


@dataclass(frozen=True)
class BoundsReport:
    C: int
    t_exp: int
    lambda_min: int
    lambda_max: int
    C_prime: Fraction
    C_1: Fraction
    t_1: int
    t_hat: int
    t0: int

    def as_dict(self) -> dict:
        return {"C": self.C, "t_exp": self.t_exp, "lambda_min": self.lambda_min,
                "lambda_max": self.lambda_max, "C_prime": str(self.C_prime),
                "C_1": str(self.C_1), "t_1": self.t_1, "t_hat": self.t_hat, "t0": self.t0}


def cancellation_to_power(C: int, lam_max: int, t: int) -> Fraction:
    """``C * (lam_max^t - 1) / (lam_max - 1)``, i.e. ``sum_k C lam_max^(k-1)``."""
    if lam_max == 1:
        return Fraction(C * t)
    return Fraction(C * (lam_max ** t - 1), lam_max - 1)


def compute_bounds(G: GraphOfSpaces, f: GosMorphism) -> BoundsReport:
    cached = f.__dict__.get("_bounds")
    if cached is not None:
        return cached
    prof = require_expanding_train_track(G, f)
    closure = illegal_turn_closure(G, f)
    C = max_entry_length(enumerate_v(G, f, 1))
    t_exp = prof.t_exp
    lens = [f.length(e, t_exp) for e in f.positive_edges()]
    lam_min, lam_max = min(lens), max(lens)
    if lam_min < 2:
        raise HypothesisViolation("expansion exponent does not stretch every edge")
    C_prime = cancellation_to_power(C, lam_max, t_exp)
    C_1 = C_prime / (lam_min - 1)
    t_1 = 1
    while not all(f.length(e, t_1) > C_1 for e in f.positive_edges()):
        t_1 += 1
    rep = BoundsReport(C=C, t_exp=t_exp, lambda_min=lam_min, lambda_max=lam_max,
                       C_prime=C_prime, C_1=C_1, t_1=t_1, t_hat=t_1 + 2 * closure.t0,
                       t0=closure.t0)
    f.__dict__["_bounds"] = rep
    return rep
