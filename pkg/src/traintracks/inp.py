"""Pseudo-INP cores, the map f-hat on V+, INP enumeration and legalization.

A pseudo-INP is ``eta = branch1^-1 . tip . branch2`` with legal branches
leaving an illegal tip.  Applying ``f^t`` and reducing cancels a common
prefix of ``f^t(branch1)`` and ``f^t(branch2)``; the part of ``eta`` that
disappears is the backtracking core ``eta_t``.  Everything here is computed
lazily from lengths and streams, so images are only materialized one step at
a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, gcd
from typing import Optional, Union

from .bounds import BoundsReport, compute_bounds
from .errors import CapacityError, ConsistencyError, DomainError
from .graph import GraphOfSpaces, LocalPath, inverse
from .morphism import GosMorphism, common_prefix
from .paths import ClosedPath, EdgePath, Locus, PartialPath, ZeroPath, reduce_path
from .turns import Turn, TurnClosure, illegal_turn_closure, make_turn
from .vsets import _pullback, enumerate_v, join_branches, split_at_tip

STAR = "*"


# ----------------------------------------------------------------- types

@dataclass(frozen=True)
class PseudoInp:
    branch1: EdgePath
    tip: LocalPath
    branch2: EdgePath

    @property
    def eta(self) -> EdgePath:
        return join_branches(self.branch1, self.tip, self.branch2)

    @property
    def path(self) -> PartialPath:
        return PartialPath(self.eta)

    @property
    def tip_index(self) -> int:
        return len(self.branch1) - 1

    @property
    def tip_turn(self) -> Turn:
        return make_turn(inverse(self.branch1.first), self.tip, self.branch2.first)

    def __str__(self) -> str:
        return str(self.eta)


@dataclass(frozen=True)
class LegalMarker:
    """The pseudo-INP legalizes at ``exponent``.

    ``reason`` is ``"consumed"`` when a branch image is swallowed by the
    backtracking, ``"tip-legal"`` when the new tip turn is legal.
    """

    exponent: int
    reason: str


@dataclass(frozen=True)
class TipState:
    power: int
    overlap: int
    consumed: bool
    tip_turn: Optional[Turn]
    legal: bool


@dataclass(frozen=True)
class InpRecord:
    prolongation: EdgePath
    tip: int
    period: int
    head: Union[str, Locus]
    tail: Union[str, Locus]
    verified: bool
    flips: bool = False

    @property
    def core(self) -> PartialPath:
        return PartialPath(self.prolongation, self.head != "vertex", self.tail != "vertex",
                           None if self.head == "vertex" else self.head,
                           None if self.tail == "vertex" else self.tail)

    @property
    def endpoint_kind(self) -> str:
        kinds = {self.head == "vertex", self.tail == "vertex"}
        if kinds == {True}:
            return "vertex"
        if kinds == {False}:
            return "interior"
        return "mixed"

    def __str__(self) -> str:
        return str(self.prolongation)

    def as_dict(self) -> dict:
        return {"prolongation": str(self.prolongation), "period": self.period,
                "endpoint_kind": self.endpoint_kind, "head": str(self.head),
                "tail": str(self.tail), "verified": self.verified}


@dataclass
class VPlus:
    entries: list[EdgePath]
    fhat_table: dict
    tails: dict
    periods: dict

    def index(self, p: EdgePath):
        return _key(p)

    def as_dict(self) -> dict:
        out = {}
        for k in sorted(self.fhat_table, key=_name):
            img, flip = self.fhat_table[k]
            out[_name(k)] = {"image": _name(img), "flip": flip,
                             "tail": self.tails[k], "period": self.periods[k]}
        return out


@dataclass
class InpAnalysis:
    vplus: VPlus
    records: list[InpRecord]
    t_plus: int
    t_star: int
    t_4: int
    bounds: BoundsReport
    power: int
    diagnostics: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"inps": [r.as_dict() for r in self.records], "power": self.power,
                "t_plus": self.t_plus,
                "t_star": self.t_star, "t_4": self.t_4, "V_plus_size": len(self.vplus.entries) + 1,
                "diagnostics": list(self.diagnostics)}


def _key(p: EdgePath):
    return p.tokens()


def _name(k) -> str:
    if k == STAR:
        return STAR
    out = []
    for tok in k:
        if tok[0] == "E":
            out.append(tok[1])
        elif tok[4]:
            out.append("{%s: %s}" % (tok[1], " ".join(tok[4])))
    return " ".join(out)


# ------------------------------------------------------- construction

def pseudo_inp(G: GraphOfSpaces, f: GosMorphism, eta: EdgePath,
               tip: Optional[int] = None) -> PseudoInp:
    """Split ``eta`` at its (unique) illegal turn into a :class:`PseudoInp`."""
    closure = illegal_turn_closure(G, f)
    bad = [i for i, (a, c, b) in enumerate(eta.turns()) if make_turn(a, c, b) in closure.illegal]
    if tip is None:
        if len(bad) != 1:
            raise DomainError(f"{eta} has {len(bad)} illegal turns, expected exactly one")
        tip = bad[0]
    elif bad != [tip]:
        raise DomainError(f"{eta} is not a pseudo-INP with tip {tip}")
    b1, chi, b2 = split_at_tip(eta, tip)
    return PseudoInp(b1, chi, b2)


# ------------------------------------------------------------ tip state

def tip_state(f: GosMorphism, closure: TurnClosure, b1: EdgePath, chi: LocalPath,
              b2: EdgePath, t: int) -> TipState:
    """Cancellation at the tip of ``f^t(b1^-1 chi b2)`` and the resulting tip turn."""
    J = f.junction_power(inverse(b1.first), chi, b2.first, t)
    x1, x2 = f.first_edge(b1.first, t), f.first_edge(b2.first, t)
    if not J.is_trivial or x1 != x2:
        T = make_turn(inverse(x1), J, x2)
        return TipState(t, 0, False, T, T not in closure.illegal)
    L = common_prefix(f, b1, b2, t)
    if L >= f.path_length(b1, t) or L >= f.path_length(b2, t):
        return TipState(t, L, True, None, True)
    c1 = f.connector_after(b1, t, L - 1)
    c2 = f.connector_after(b2, t, L - 1)
    T = make_turn(inverse(f.edge_at(b1, t, L)), c1.inverse() + c2, f.edge_at(b2, t, L))
    return TipState(t, L, False, T, T not in closure.illegal)


def backtracking_core(G: GraphOfSpaces, f: GosMorphism, eta: PseudoInp, t: int):
    """The ``f^t``-backtracking subpath ``eta_t`` and its endpoint loci.

    Returns ``(core, loci)``: ``core`` is a :class:`PartialPath` whose trim
    flags mark ends inside an edge (None when nothing cancels yet), ``loci``
    holds per branch ``(edge, power, index)`` or None for a vertex end.
    """
    if t < 1:
        raise DomainError("power must be at least 1")
    closure = illegal_turn_closure(G, f)
    if eta.tip_turn not in closure.illegal:
        raise DomainError(f"tip turn {eta.tip_turn} of {eta} is legal: nothing backtracks")
    st = tip_state(f, closure, eta.branch1, eta.tip, eta.branch2, t)
    if st.overlap == 0:
        return None, (None, None)
    parts, loci = [], []
    for b in (eta.branch1, eta.branch2):
        i, partial, off = _pullback(f, b, t, st.overlap)
        parts.append(b.sub(0, i + 1))
        loci.append(Locus(b.edges[i], t, off) if partial else None)
    core = join_branches(parts[0], eta.tip, parts[1])
    head = loci[0]
    head_rev = None if head is None else Locus(
        inverse(head.edge), t, f.length(head.edge, t) - head.index)
    return PartialPath(core, head is not None, loci[1] is not None, head_rev, loci[1]), tuple(loci)


def core_prolongation(G: GraphOfSpaces, f: GosMorphism, eta: PseudoInp,
                      power: Optional[int] = None):
    """Canonical vertex-prolongation of ``eta_infinity`` or a :class:`LegalMarker`.

    The tip is followed for ``t = 1 .. power``; the first stage at which a
    branch is consumed or the tip turn becomes legal is the legalizing
    exponent.  Otherwise the prolongation of ``eta_power`` is returned as a
    :class:`PseudoInp` oriented like ``eta``.  ``power`` defaults to the
    saturated domain power (see :func:`domain_power`), at which the
    prolongation already reaches into every edge of ``eta_infinity``.
    """
    if power is None:
        power = domain_power(G, f)
    closure = illegal_turn_closure(G, f)
    if eta.tip_turn not in closure.illegal:
        return LegalMarker(0, "tip-legal")
    st = None
    for t in range(1, power + 1):
        st = tip_state(f, closure, eta.branch1, eta.tip, eta.branch2, t)
        if st.legal:
            return LegalMarker(t, "consumed" if st.consumed else "tip-legal")
    if st.overlap == 0:
        raise ConsistencyError(f"tip of {eta} never degenerates up to power {power}")
    parts = []
    for b in (eta.branch1, eta.branch2):
        i, _, _ = _pullback(f, b, st.power, st.overlap)
        parts.append(b.sub(0, i + 1))
    return PseudoInp(parts[0], eta.tip, parts[1])


def reduced_image(G: GraphOfSpaces, f: GosMorphism, eta: PseudoInp):
    """``[f(eta)]`` as a :class:`PseudoInp`, or a :class:`LegalMarker` when legal."""
    closure = illegal_turn_closure(G, f)
    st = tip_state(f, closure, eta.branch1, eta.tip, eta.branch2, 1)
    if st.legal:
        return LegalMarker(1, "consumed" if st.consumed else "tip-legal")
    r1 = f.map_path(eta.branch1)
    r2 = f.map_path(eta.branch2)
    L = st.overlap
    if L == 0:
        chi = f.junction(inverse(eta.branch1.first), eta.tip, eta.branch2.first)
    else:
        chi = r1.connectors[L - 1].inverse() + r2.connectors[L - 1]
    return PseudoInp(r1.sub(L, len(r1)), chi, r2.sub(L, len(r2)))


def fhat(G: GraphOfSpaces, f: GosMorphism, eta: PseudoInp, power: Optional[int] = None):
    """``f-hat(eta)``: the core prolongation of ``[f(eta)]``, or :data:`STAR`."""
    img = reduced_image(G, f, eta)
    if isinstance(img, LegalMarker):
        return STAR
    res = core_prolongation(G, f, img, power)
    return STAR if isinstance(res, LegalMarker) else res


# ------------------------------------------------------------ f-hat on V+

def _orientation(p: PseudoInp) -> tuple[EdgePath, bool]:
    """Canonical path of a pseudo-INP and whether it was reversed."""
    a = p.eta
    r = a.reverse()
    if r.tokens() < a.tokens():
        return r, True
    return a, False


def _orbit_data(table: dict) -> tuple[dict, dict]:
    tails, periods = {}, {}
    for start in table:
        seq, pos = [], {}
        x = start
        while x not in pos:
            pos[x] = len(seq)
            seq.append(x)
            x = table[x][0]
        tails[start] = pos[x]
        periods[start] = len(seq) - pos[x]
    return tails, periods


def _oriented_period(table: dict, k) -> Optional[int]:
    """Least ``p`` with ``f-hat^p`` fixing ``k`` with its orientation."""
    x, flip = k, False
    for p in range(1, 2 * len(table) + 2):
        x, fl = table[x]
        if x == STAR:
            return None
        flip ^= fl
        if x == k and not flip:
            return p
    return None


def _expanding_multiple(f: GosMorphism, p: int, edges) -> int:
    P = p
    while any(f.length(e, P) < 2 for e in edges):
        P += p
    return P


def _endpoint(f: GosMorphism, b: EdgePath, P: int, L: int):
    """Endpoint data of an INP branch from the overlap ``L`` at power ``P``."""
    j = L + len(b) - 1
    last = len(b) - 1
    acc = f.path_length(b.sub(0, last), P) if last else 0
    n = f.length(b.last, P)
    k = j - acc
    if not 0 < k < n or f.edge_at(b, P, j) != b.last:
        return None
    return "vertex" if k == n - 1 else Locus(b.last, P, k)


def _align(f: GosMorphism, closure, p: PseudoInp, P: int):
    """Check ``[f^P(eta)]`` contains ``eta`` at the tip; return the overlap."""
    st = tip_state(f, closure, p.branch1, p.tip, p.branch2, P)
    if st.legal or st.overlap == 0:
        return None
    L = st.overlap
    for b in (p.branch1, p.branch2):
        if f.path_length(b, P) < L + len(b):
            return None
        for j, e in enumerate(b.edges):
            if f.edge_at(b, P, L + j) != e:
                return None
            if j + 1 < len(b) and f.connector_after(b, P, L + j) != b.connectors[j]:
                return None
    c1 = f.connector_after(p.branch1, P, L - 1)
    c2 = f.connector_after(p.branch2, P, L - 1)
    if c1.inverse() + c2 != p.tip:
        return None
    return L


def inp_record(G: GraphOfSpaces, f: GosMorphism, p: PseudoInp, period: int,
               flips: bool = False) -> InpRecord:
    """Verify a periodic prolongation by alignment and extract endpoint data."""
    closure = illegal_turn_closure(G, f)
    ok = _align(f, closure, p, period) is not None
    P = _expanding_multiple(f, period, (p.branch1.last, p.branch2.last))
    L = _align(f, closure, p, P)
    ends = [None, None]
    if L is not None:
        ends = [_endpoint(f, b, P, L) for b in (p.branch1, p.branch2)]
    verified = ok and L is not None and None not in ends
    head, tail = ends
    if isinstance(head, Locus):
        head = Locus(inverse(head.edge), P, f.length(head.edge, P) - 1 - head.index)
    return InpRecord(p.eta, p.tip_index, period, head if head is not None else "unknown",
                     tail if tail is not None else "unknown", verified, flips)


def _entry_pinp(G, f, path: EdgePath) -> PseudoInp:
    return pseudo_inp(G, f, path)


DEFAULT_EXTRA_POWERS = 12


def _analyze_at(G: GraphOfSpaces, f: GosMorphism, t: int) -> InpAnalysis:
    """V+, f-hat and the periodic records with V(f^t) as domain."""
    memo = f.__dict__.setdefault("_inp_at", {})
    if t in memo:
        return memo[t]
    bounds = compute_bounds(G, f)
    entries = [v.eta for v in enumerate_v(G, f, t)]
    keys = {_key(e): e for e in entries}
    pinps = {_key(e): _entry_pinp(G, f, e) for e in entries}
    table: dict = {STAR: (STAR, False)}
    for k, pi in pinps.items():
        img = fhat(G, f, pi, t)
        if img == STAR:
            table[k] = (STAR, False)
            continue
        path, flip = _orientation(img)
        if _key(path) not in keys:
            raise ConsistencyError(f"f-hat({_name(k)}) = {path} lies outside V(f^{t})")
        table[k] = (_key(path), flip)
    tails, periods = _orbit_data(table)
    vplus = VPlus(entries, table, tails, periods)
    records = []
    for k in sorted(pinps):
        if tails[k] != 0:
            continue
        per = _oriented_period(table, k)
        if per is None:
            continue
        records.append(inp_record(G, f, pinps[k], per, flips=per != periods[k]))
    t_plus = max(tails[k] + periods[k] for k in table)
    res = InpAnalysis(vplus, records, t_plus, 0, t_plus, bounds, t)
    memo[t] = res
    return res


def _signature(a: InpAnalysis):
    return sorted((_key(r.prolongation), r.tip, r.period) for r in a.records)


def domain_power(G: GraphOfSpaces, f: GosMorphism,
                 max_extra: int = DEFAULT_EXTRA_POWERS) -> int:
    """Least ``t >= t_hat`` whose INP set agrees with the one at ``t + 1``.

    The exponent ``t_hat`` from :func:`compute_bounds` does not always make
    V(f^t) contain every INP prolongation: an INP whose fixed endpoint sits
    very close to a vertex is only reached by the backtracking core at a
    later power.  The search steps past ``t_hat`` until f-hat closes up on
    its domain, every periodic point verifies as an INP and one more power
    adds nothing.
    """
    cached = f.__dict__.get("_domain_power")
    if cached is not None:
        return cached
    base = compute_bounds(G, f).t_hat
    prev = None
    for t in range(base, base + max_extra + 1):
        try:
            a = _analyze_at(G, f, t)
        except ConsistencyError:
            prev = None
            continue
        if not all(r.verified for r in a.records):
            prev = None
            continue
        if prev is not None and _signature(prev) == _signature(a):
            f.__dict__["_domain_power"] = prev.power
            return prev.power
        prev = a
    raise CapacityError("max_extra_powers", max_extra, "INP set did not stabilize past t_hat")


def compute_inps(G: GraphOfSpaces, f: GosMorphism, t_star: bool = True,
                 max_union_steps: Optional[int] = None) -> InpAnalysis:
    """Build V+ and f-hat, read off the INPs and the exponents t+, t*, t4."""
    cache = f.__dict__.setdefault("_inp_cache", {})
    if t_star in cache:
        return cache[t_star]
    base = _analyze_at(G, f, domain_power(G, f))
    analysis = InpAnalysis(base.vplus, base.records, base.t_plus, 0, base.t_plus,
                           base.bounds, base.power)
    if t_star:
        ts, diag = _t_star(G, f, analysis, max_union_steps)
        analysis.t_star = ts
        analysis.t_4 = ts + analysis.t_plus
        analysis.diagnostics.extend(diag)
    cache[t_star] = analysis
    return analysis


def inp_set(G: GraphOfSpaces, f: GosMorphism) -> list[InpRecord]:
    return compute_inps(G, f, t_star=False).records


# ---------------------------------------------------- unions and t-star

def _oriented_entries(entries):
    out = []
    for e in entries:
        out.append(e)
        r = e.reverse()
        if r.tokens() != e.tokens():
            out.append(r)
    return out


def overlapping_unions(G: GraphOfSpaces, f: GosMorphism, entries) -> list[EdgePath]:
    """Reduced unions of two V+ entries sharing at least one edge, tips distinct."""
    closure = illegal_turn_closure(G, f)
    ori = _oriented_entries(entries)
    tips = {}
    for p in ori:
        tips[_key(p)] = [i for i, (a, c, b) in enumerate(p.turns())
                         if make_turn(a, c, b) in closure.illegal][0]
    seen, out = set(), []
    for A in ori:
        tA = tips[_key(A)]
        for B in ori:
            tB = tips[_key(B)]
            for k in range(1, min(len(A), len(B))):
                if tA > len(A) - k - 1 or tB < k - 1:
                    continue
                if A.edges[len(A) - k:] != B.edges[:k]:
                    continue
                if A.connectors[len(A) - k:] != B.connectors[:k - 1]:
                    continue
                U = EdgePath(A.edges + B.edges[k:], A.connectors + B.connectors[k - 1:])
                key = min(U.tokens(), U.reverse().tokens())
                if key not in seen:
                    seen.add(key)
                    out.append(U)
    return out


def _window(G, closure, p: EdgePath, width: int) -> EdgePath:
    """Drop edges farther than ``width`` from every illegal turn."""
    bad = [i for i, (a, c, b) in enumerate(p.turns()) if make_turn(a, c, b) in closure.illegal]
    if not bad:
        return p
    lo = max(0, bad[0] + 1 - width)
    hi = min(len(p), bad[-1] + 1 + width)
    return p.sub(lo, hi)


def _t_star(G, f, analysis: InpAnalysis, max_steps):
    closure = illegal_turn_closure(G, f)
    longest = max((len(e) for e in analysis.vplus.entries), default=0)
    width = max(ceil(analysis.bounds.C_1), longest) + 2
    cap = max_steps or (len(analysis.vplus.entries) + 1 + analysis.t_plus) * 2 + 2
    best, diag = 0, []
    for U in overlapping_unions(G, f, analysis.vplus.entries):
        p, t = U, 0
        while True:
            dec = pseudo_legal_decomposition(G, f, p, analysis.records)
            if dec is not None:
                if not any(kind == "inp" for kind, *_ in dec):
                    best = max(best, t)
                break
            if t >= cap:
                diag.append(f"union {U} neither legalizes nor stabilizes within {cap} steps")
                break
            img = reduce_path(G, f.map_path(p))
            t += 1
            if isinstance(img, ZeroPath):
                best = max(best, t)
                break
            p = _window(G, closure, img, width)
    return best, diag


# ------------------------------------------------------ pseudo-legality

def _rev_locus(f: GosMorphism, x):
    if isinstance(x, Locus):
        return Locus(inverse(x.edge), x.power, f.length(x.edge, x.power) - 1 - x.index)
    return x


def _occurrences(f: GosMorphism, records):
    """Each INP in both orientations: ``(path, tip, head, tail, record)``."""
    out = []
    for r in records:
        if not r.verified:
            continue
        P = r.prolongation
        out.append((P, r.tip, r.head, r.tail, r))
        R = P.reverse()
        if R.tokens() != P.tokens():
            out.append((R, len(P) - 2 - r.tip, _rev_locus(f, r.tail), _rev_locus(f, r.head), r))
    return out


def _locus_index(f: GosMorphism, x: Locus, P: int) -> int:
    """Occurrence index at power ``P`` (a multiple of ``x.power``) of the fixed point ``x``."""
    img = f.iterate_edge_image(x.edge, x.power)
    prefix = img.sub(0, x.index) if x.index else None
    idx, level = x.index, x.power
    while level < P:
        idx += f.path_length(prefix, level) if prefix is not None else 0
        level += x.power
    return idx


def compare_loci(f: GosMorphism, a: Locus, b: Locus) -> int:
    """Order of two fixed points on the same oriented edge: -1, 0 or 1."""
    if a.edge != b.edge:
        raise DomainError(f"loci {a} and {b} lie on different edges")
    P = a.power * b.power // gcd(a.power, b.power)
    ia, ib = _locus_index(f, a, P), _locus_index(f, b, P)
    return (ia > ib) - (ia < ib)


def _match(f, p, j, closed, occs):
    n = len(p.edges)
    for P, tip, head, tail, rec in occs:
        s = j - tip
        if closed:
            if len(P) > n + 1:
                continue
            s %= n
        elif s < 0 or s + len(P) > n:
            continue
        ok = all(p.edges[(s + i) % n] == P.edges[i] for i in range(len(P))) and all(
            p.connectors[(s + i) % n] == P.connectors[i] for i in range(len(P) - 1))
        if ok:
            return (s, s + len(P) - 1, head, tail, rec)
    return None


def _gap(f, A, B, sB):
    """Legal piece between occurrence A and occurrence B (starting at ``sB``).

    Returns ``(a, b)`` edge range, None when there is no gap, or False when
    the two occurrences overlap.
    """
    _, eA, _, tailA, _ = A
    _, _, headB, _, _ = B
    if sB < eA:
        return False
    if sB == eA:
        if tailA == "vertex" or headB == "vertex":
            return False
        c = compare_loci(f, tailA, headB)
        if c > 0:
            return False
        return (eA, eA) if c < 0 else None
    a = eA if tailA != "vertex" else eA + 1
    b = sB if headB != "vertex" else sB - 1
    return (a, b) if a <= b else None


def pseudo_legal_decomposition(G: GraphOfSpaces, f: GosMorphism, p, records):
    """Split a reduced path into legal and INP pieces, or None if not pseudo-legal.

    Pieces are ``(kind, start, end, record)`` with inclusive edge ranges and
    ``kind`` in ``{"legal", "inp"}``; neighbouring pieces share an edge when
    an INP ends inside it.  For closed paths indices are cyclic.
    """
    closure = illegal_turn_closure(G, f)
    if isinstance(p, ZeroPath):
        return []
    closed = isinstance(p, ClosedPath)
    n = len(p.edges)
    bad = [i for i, (a, c, b) in enumerate(p.turns()) if make_turn(a, c, b) in closure.illegal]
    if not bad:
        return [("legal", 0, n - 1, None)]
    occs = _occurrences(f, records)
    occ = []
    for j in bad:
        hit = _match(f, p, j, closed, occs)
        if hit is None:
            return None
        occ.append(hit)
    occ.sort(key=lambda o: o[0])
    pieces = []
    if not closed:
        s0, _, h0, _, _ = occ[0]
        b = s0 if h0 != "vertex" else s0 - 1
        if b >= 0:
            pieces.append(("legal", 0, b, None))
    for i, A in enumerate(occ):
        pieces.append(("inp", A[0] % n, A[1] % n, A[4]))
        if i + 1 < len(occ):
            g = _gap(f, A, occ[i + 1], occ[i + 1][0])
        elif closed:
            g = _gap(f, A, occ[0], occ[0][0] + n)
        else:
            a = A[1] if A[3] != "vertex" else A[1] + 1
            g = (a, n - 1) if a <= n - 1 else None
        if g is False:
            return None
        if g is not None:
            pieces.append(("legal", g[0] % n, g[1] % n, None))
    return pieces


def is_pseudo_legal(G: GraphOfSpaces, f: GosMorphism, p, records) -> bool:
    return pseudo_legal_decomposition(G, f, p, records) is not None


# ------------------------------------------------------------ legalization

@dataclass
class Legalization:
    exponent: int
    path: object
    pieces: list
    ilt_start: int
    ilt_end: int

    @property
    def inp_pieces(self) -> list:
        return [x for x in self.pieces if x[0] == "inp"]

    def as_dict(self) -> dict:
        return {"t": self.exponent, "path": str(self.path), "ILT_start": self.ilt_start,
                "ILT_end": self.ilt_end,
                "pieces": [{"kind": k, "start": s, "end": e,
                            "inp": None if r is None else str(r)} for k, s, e, r in self.pieces]}


def legalization_cap(G: GraphOfSpaces, f: GosMorphism, ilt: int) -> int:
    a = compute_inps(G, f)
    return ilt * (len(a.vplus.entries) + 1 + a.t_4) + a.t_4


def legalize(G: GraphOfSpaces, f: GosMorphism, gamma, cap: Optional[int] = None) -> Legalization:
    """Least ``t`` with ``[f^t(gamma)]`` pseudo-legal, with its decomposition."""
    analysis = compute_inps(G, f)
    closure = illegal_turn_closure(G, f)
    p = reduce_path(G, gamma)
    ilt0 = closure.ilt(p)
    if cap is None:
        cap = legalization_cap(G, f, ilt0)
    t = 0
    while True:
        dec = pseudo_legal_decomposition(G, f, p, analysis.records)
        if dec is not None:
            return Legalization(t, p, dec, ilt0, closure.ilt(p))
        if t >= cap:
            raise ConsistencyError(f"{gamma} is not pseudo-legal after {cap} iterations")
        p = f.reduced_image(p)
        t += 1


def decay_check(G: GraphOfSpaces, f: GosMorphism, gamma, t_4: Optional[int] = None) -> dict:
    """Both sides of the illegal-turn decay inequality for ``gamma``."""
    analysis = compute_inps(G, f)
    if t_4 is None:
        t_4 = analysis.t_4
    closure = illegal_turn_closure(G, f)
    leg = legalize(G, f, gamma)
    p = reduce_path(G, gamma)
    base = closure.ilt(p)
    final = leg.ilt_end
    after = closure.ilt(f.reduced_image(p, t_4))
    lhs = after - final
    rhs = (base - final) / 2
    return {"t_gamma": leg.exponent, "t_4": t_4, "ILT_gamma": base, "ILT_after_t4": after,
            "ILT_legalized": final, "lhs": lhs, "rhs": rhs, "holds": lhs <= rhs}
