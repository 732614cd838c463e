"""Controllability-set algebra and supervisor synthesis.

Solvability of the control problem is equivalent to the existence of a
*controllability family*: a set E of pair sets W (each pairing plant
states with specification states) such that

* (istate) some member pairs every initial plant state with an initial
  specification state;
* (uc-forward) every member has, for each uncontrollable event, a member
  all its matched moves can land in (the match predicate);
* (required-backward) every required specification move out of a paired
  state is matched by a plant move landing, together with the rest of
  the member's moves, in some member.

Families are filtered by a monotone step (``f_step``); its greatest
fixpoint over the powerset of an admissible pair universe decides
solvability, and the supervisor automaton built from that fixpoint is
the maximally permissive solution.

Representation: members are fixed-width bit masks over a deterministic
pair universe.  The fixpoint is driven by the family's antichain of
maximal members, which is sound because every iterate is closed
downward (the match predicate shrinks with its first argument and grows
with its third); the antichain engine is cross-checked against plain
member enumeration in the test suite.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace

from .automata import (
    Automaton,
    is_deterministic,
    require_same_alphabet,
    sync_product,
)
from .errors import CapExceeded, NotAFamily, NotCcSimulation, UniverseMismatch
from .relations import (
    ISTATE,
    Counterexample,
    PairRelation,
    RefineResult,
    RelationKind,
    holds,
    is_admissible,
    is_cc_simulation,
    refine,
)

Pair = tuple[str, str]

DEFAULT_UNIVERSE_CAP = 20


@dataclass(frozen=True)
class PairSetFamily:
    """A set of subsets of a fixed, ordered pair universe.

    Members are bit masks over ``universe`` indices; membership is exact
    set equality and members are deduplicated by construction.
    """

    universe: tuple[Pair, ...]
    members: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(tuple(p) for p in self.universe))
        object.__setattr__(self, "members", frozenset(self.members))
        if len(set(self.universe)) != len(self.universe):
            raise UniverseMismatch("universe pairs must be unique")
        full = (1 << len(self.universe)) - 1
        for m in self.members:
            if m & ~full:
                raise UniverseMismatch("member mask exceeds the universe")

    @staticmethod
    def from_pair_sets(universe, sets) -> "PairSetFamily":
        universe = tuple(tuple(p) for p in universe)
        index = {p: i for i, p in enumerate(universe)}
        members = set()
        for w in sets:
            mask = 0
            for p in w:
                p = tuple(p)
                if p not in index:
                    raise UniverseMismatch(f"pair {p!r} not in the universe")
                mask |= 1 << index[p]
            members.add(mask)
        return PairSetFamily(universe, frozenset(members))

    @staticmethod
    def over(g: Automaton, r: Automaton, sets) -> "PairSetFamily":
        """Family over the union of the given sets, ordered by state indices."""
        pairs = sorted(
            {tuple(p) for w in sets for p in w},
            key=lambda p: (g.state_index[p[0]], r.state_index[p[1]]),
        )
        return PairSetFamily.from_pair_sets(tuple(pairs), sets)

    def pairs_of(self, mask: int) -> tuple[Pair, ...]:
        return tuple(p for i, p in enumerate(self.universe) if mask >> i & 1)

    def member_sets(self) -> frozenset[frozenset[Pair]]:
        return frozenset(frozenset(self.pairs_of(m)) for m in self.members)

    def contains_set(self, pairs) -> bool:
        return frozenset(tuple(p) for p in pairs) in self.member_sets()

    def union_pairs(self) -> frozenset[Pair]:
        mask = 0
        for m in self.members:
            mask |= m
        return frozenset(self.pairs_of(mask))

    def __len__(self) -> int:
        return len(self.members)


def _submasks(base: int):
    sub = base
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & base


def _maximal(masks) -> list[int]:
    out: list[int] = []
    for m in sorted(set(masks), key=lambda v: (-v.bit_count(), v)):
        if not any(m | o == o for o in out):
            out.append(m)
    return sorted(out)


class _FamilyContext:
    """Index tables and obligation masks for one (g, r, universe) triple."""

    def __init__(self, g: Automaton, r: Automaton, universe: tuple[Pair, ...]):
        require_same_alphabet(g, r)
        self.g, self.r = g, r
        self.universe = tuple(universe)
        self.n = len(self.universe)
        self.full = (1 << self.n) - 1
        self.index: dict[Pair, int] = {}
        for i, (x, z) in enumerate(self.universe):
            if x not in g.state_index or z not in r.state_index:
                raise UniverseMismatch(f"pair ({x!r}, {z!r}) outside the automata")
            self.index[(x, z)] = i
        ab = g.alphabet
        self.uc_events = [e for e in ab.events if e in ab.uncontrollable]
        self.req_events = [e for e in ab.events if e in ab.required]
        # forward[i][ev]: one mask per plant move x --ev--> x', holding the
        # universe pairs (x', z') that a matching specification move reaches.
        self.forward: list[dict[str, list[int]]] = []
        # backward[i][ev]: one (z', mask) per specification move z --ev--> z',
        # the mask holding universe pairs (x', z') with x --ev--> x'.
        self.backward: list[dict[str, list[tuple[str, int]]]] = []
        for x, z in self.universe:
            fwd: dict[str, list[int]] = {}
            bwd: dict[str, list[tuple[str, int]]] = {}
            for ev in ab.events:
                xs = g.successors(x, ev)
                zs = r.successors(z, ev)
                if xs:
                    fwd[ev] = [self._mask((x1, z1) for z1 in zs) for x1 in xs]
                if ev in ab.required and zs:
                    bwd[ev] = [(z1, self._mask((x1, z1) for x1 in xs)) for z1 in zs]
            self.forward.append(fwd)
            self.backward.append(bwd)
        self.istate_masks = [
            self._mask((x0, z0) for z0 in r.initial) for x0 in g.initial
        ]
        self.initial_mask = self._mask(
            (x0, z0) for x0 in g.initial for z0 in r.initial
        )
        self._good_cache: dict[tuple[str, int], int] = {}

    def _mask(self, pairs) -> int:
        m = 0
        for p in pairs:
            i = self.index.get(p)
            if i is not None:
                m |= 1 << i
        return m

    @staticmethod
    def bits(mask: int):
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def ok(self, i: int, ev: str, target: int) -> bool:
        return all(target & ob for ob in self.forward[i].get(ev, ()))

    def good_mask(self, ev: str, target: int) -> int:
        """Pairs whose forward obligations under ``ev`` land in ``target``."""
        key = (ev, target)
        cached = self._good_cache.get(key)
        if cached is None:
            cached = 0
            for i in range(self.n):
                if self.ok(i, ev, target):
                    cached |= 1 << i
            self._good_cache[key] = cached
        return cached

    def match(self, w: int, ev: str, target: int) -> bool:
        return w & ~self.good_mask(ev, target) == 0

    def istate(self, w: int) -> bool:
        return all(w & m for m in self.istate_masks)

    def member_passes(self, w: int, candidates) -> bool:
        """Both filtering conditions for ``w`` against candidate targets."""
        for ev in self.uc_events:
            if not any(self.match(w, ev, t) for t in candidates):
                return False
        for i in self.bits(w):
            for ev, obligations in self.backward[i].items():
                for _z1, ob in obligations:
                    if not any(t & ob and self.match(w, ev, t) for t in candidates):
                        return False
        return True

    def post_mask(self, w: int, ev: str) -> int:
        """Universe pairs reachable when both sides follow a ``w`` pair's move."""
        out = 0
        for i in self.bits(w):
            x, z = self.universe[i]
            zs = self.r.successors(z, ev)
            for x1 in self.g.successors(x, ev):
                out |= self._mask((x1, z1) for z1 in zs)
        return out


def universe_kind(alphabet) -> RelationKind:
    return RelationKind(
        alphabet.uncontrollable, alphabet.required, False, False, "ucr-clauses"
    )


def _universe_refinement(g: Automaton, r: Automaton) -> RefineResult:
    return refine(g, r, universe_kind(g.alphabet))


def pairs_universe(g: Automaton, r: Automaton) -> tuple[Pair, ...]:
    """Admissible search space for family members.

    The union of any controllability family satisfies the uncontrollable-
    forward and required-backward clauses, so every member lies inside
    the greatest relation closed under them.  Returned in deterministic
    (plant index, specification index) order.
    """
    res = _universe_refinement(g, r)
    gi, ri = g.state_index, r.state_index
    return tuple(sorted(res.alive, key=lambda p: (gi[p[0]], ri[p[1]])))


def f_step(e: PairSetFamily, g: Automaton, r: Automaton) -> PairSetFamily:
    """One filtering pass: keep members whose obligations ``e`` can answer.

    Condition one: for every uncontrollable event there is a member
    matching the member's moves.  Condition two: every required
    specification move out of a member pair is answered by a plant move
    into some member that also matches the whole member.  Targets are
    quantified over ``e`` exactly as given.
    """
    ctx = _FamilyContext(g, r, e.universe)
    members = sorted(e.members)
    keep = [w for w in members if ctx.member_passes(w, members)]
    return PairSetFamily(e.universe, frozenset(keep))


def downward_closure(e: PairSetFamily) -> PairSetFamily:
    """All subsets of all members (closure under taking subsets)."""
    out: set[int] = set()
    for m in sorted(e.members, key=lambda v: -v.bit_count()):
        if m in out:
            continue
        out.update(_submasks(m))
    return PairSetFamily(e.universe, frozenset(out))


def is_controllability_family(e: PairSetFamily, g: Automaton, r: Automaton) -> bool:
    """Direct check of the family conditions, quantified over ``e`` itself."""
    ctx = _FamilyContext(g, r, e.universe)
    if not any(ctx.istate(w) for w in e.members):
        return False
    members = sorted(e.members)
    return all(ctx.member_passes(w, members) for w in members)


def istate_condition(e: PairSetFamily, g: Automaton, r: Automaton) -> bool:
    ctx = _FamilyContext(g, r, e.universe)
    return any(ctx.istate(w) for w in e.members)


def _antichain_pass(ctx: _FamilyContext, chain: list[int]) -> list[int]:
    """Maximal members surviving one filtering pass of the closed family.

    Candidate members are explored top down; when one violates a
    condition, every surviving subset must avoid that violation, which
    yields a small set of strictly smaller children covering all of them.
    """
    survivors: list[int] = []
    seen: set[int] = set()
    stack = sorted(chain)
    while stack:
        w = stack.pop()
        if w in seen:
            continue
        seen.add(w)
        children = _violation_children(ctx, w, chain)
        if children is None:
            survivors.append(w)
        else:
            for c in children:
                if c not in seen:
                    stack.append(c)
    return _maximal(survivors)


def _violation_children(ctx: _FamilyContext, w: int, chain: list[int]):
    """None if ``w`` passes both conditions; else strictly smaller subsets
    jointly covering every passing subset of ``w``."""
    for ev in ctx.uc_events:
        if not any(ctx.match(w, ev, t) for t in chain):
            # A passing subset must fit below some target's good set.
            return [w & ctx.good_mask(ev, t) for t in chain]
    for i in ctx.bits(w):
        for ev, obligations in ctx.backward[i].items():
            for _z1, ob in obligations:
                if not any(t & ob and ctx.match(w, ev, t) for t in chain):
                    children = [w & ~(1 << i)]
                    children.extend(
                        w & ctx.good_mask(ev, t) for t in chain if t & ob
                    )
                    return children
    return None


@dataclass
class _FamilyFixpoint:
    ctx: _FamilyContext
    antichain: list[int]
    iterations: int
    universe_refinement: RefineResult

    def solvable(self) -> bool:
        # The istate condition only demands containment of pairs, so it
        # holds for some member iff it holds for some maximal member.
        return any(self.ctx.istate(m) for m in self.antichain)

    def materialize(self) -> PairSetFamily:
        return downward_closure(
            PairSetFamily(self.ctx.universe, frozenset(self.antichain))
        )


def family_fixpoint(
    g: Automaton, r: Automaton, cap: int | None = None
) -> _FamilyFixpoint:
    """Greatest fixpoint of the filtering step over the full powerset.

    Tracked by its antichain of maximal members; the full powerset start
    is downward closed and every pass preserves closure, so the antichain
    determines the family exactly.
    """
    if cap is None:
        cap = DEFAULT_UNIVERSE_CAP
    res = _universe_refinement(g, r)
    gi, ri = g.state_index, r.state_index
    universe = tuple(sorted(res.alive, key=lambda p: (gi[p[0]], ri[p[1]])))
    if len(universe) > cap:
        raise CapExceeded(len(universe), cap)
    ctx = _FamilyContext(g, r, universe)
    chain = [ctx.full]
    iterations = 0
    while True:
        iterations += 1
        nxt = _antichain_pass(ctx, chain)
        if nxt == chain:
            return _FamilyFixpoint(ctx, chain, iterations, res)
        chain = nxt


def greatest_family(
    g: Automaton, r: Automaton, cap: int | None = None
) -> PairSetFamily:
    """The greatest fixpoint, materialized member by member."""
    return family_fixpoint(g, r, cap).materialize()


def is_solvable(g: Automaton, r: Automaton, cap: int | None = None) -> bool:
    """Does any fixpoint member pair all initial plant states with initials?"""
    return family_fixpoint(g, r, cap).solvable()


def solvability_counterexample(
    g: Automaton, r: Automaton, fix: _FamilyFixpoint
) -> Counterexample | None:
    """Explain an unsolvable instance.

    If some initial plant state has every initial pairing eliminated from
    the pair universe, the relation-level deletion cascade names the
    clause that killed it; otherwise the failure is the family-level
    istate condition.
    """
    if fix.solvable():
        return None
    res = fix.universe_refinement
    for x0 in g.initial:
        cands = [(x0, z0) for z0 in r.initial]
        dead = [c for c in cands if c not in res.alive]
        if len(dead) == len(cands):
            first = min(dead, key=lambda c: res.reasons[c].time)
            cx = res.root_cause(first)
            return replace(cx, note=f"no admissible pairing for initial state {x0}")
    remaining = list(fix.antichain)
    for x0idx, x0 in enumerate(g.initial):
        mask = fix.ctx.istate_masks[x0idx]
        remaining = [m for m in remaining if m & mask]
        if not remaining:
            return Counterexample(
                kind=ISTATE,
                left=x0,
                note="every family member pairing it fails the fixpoint conditions",
            )
    return None


@dataclass(frozen=True)
class SupervisorAutomaton:
    """Automaton whose states are family members, with the member map."""

    automaton: Automaton
    members: dict[str, tuple[Pair, ...]]
    family: PairSetFamily


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of the two independent solution conditions."""

    admissible: bool
    cc_simulated: bool
    admissibility_counterexample: Counterexample | None = None
    cc_counterexample: Counterexample | None = None

    @property
    def overall(self) -> bool:
        return self.admissible and self.cc_simulated


@dataclass(frozen=True)
class SynthesisOutcome:
    solvable: bool
    family: PairSetFamily
    supervisor: SupervisorAutomaton | None = None
    report: VerificationReport | None = None
    iterations: int = 0


def member_state_id(pairs) -> str:
    return "W{" + ",".join(f"{x}:{z}" for x, z in pairs) + "}"


def _initial_members(ctx: _FamilyContext, chain: list[int]) -> list[int]:
    # Initial supervisor states: members inside initial-by-initial pairs
    # that still realize the istate condition.
    cand: set[int] = set()
    for m in chain:
        cand.update(_submasks(m & ctx.initial_mask))
    return sorted(w for w in cand if ctx.istate(w))


def _edge_targets(ctx: _FamilyContext, chain: list[int], w: int, ev: str) -> list[int]:
    # Valid successors of member w under ev: nonempty closure members
    # inside the joint successor pairs of w that match all of w's moves.
    post = ctx.post_mask(w, ev)
    cand: set[int] = set()
    for m in chain:
        cand.update(_submasks(post & m))
    cand.discard(0)
    return sorted(t for t in cand if ctx.match(w, ev, t))


def _assemble_supervisor(
    ctx: _FamilyContext,
    chain: list[int],
    closure: PairSetFamily,
    *,
    reachable_only: bool,
) -> SupervisorAutomaton:
    initial = _initial_members(ctx, chain)
    if not initial:
        raise NotAFamily("no member realizes the initial condition")
    events = ctx.g.alphabet.events
    edges: list[tuple[int, str, int]] = []
    if reachable_only:
        order: list[int] = list(initial)
        seen = set(order)
        queue = deque(order)
        while queue:
            w = queue.popleft()
            for ev in events:
                for t in _edge_targets(ctx, chain, w, ev):
                    edges.append((w, ev, t))
                    if t not in seen:
                        seen.add(t)
                        order.append(t)
                        queue.append(t)
    else:
        order = sorted(closure.members)
        edges = [
            (w, ev, t)
            for w in order
            for ev in events
            for t in _edge_targets(ctx, chain, w, ev)
        ]
    names = {w: member_state_id(closure.pairs_of(w)) for w in order}
    aut = Automaton(
        alphabet=ctx.g.alphabet,
        states=tuple(names[w] for w in order),
        transitions=tuple((names[a], ev, names[b]) for a, ev, b in edges),
        initial=tuple(names[w] for w in initial),
    )
    return SupervisorAutomaton(
        automaton=aut,
        members={names[w]: closure.pairs_of(w) for w in order},
        family=closure,
    )


def build_supervisor(
    e: PairSetFamily,
    g: Automaton,
    r: Automaton,
    *,
    reachable_only: bool = True,
) -> SupervisorAutomaton:
    """Supervisor automaton over the downward closure of ``e``.

    States are closure members; initial states are the members that
    realize the istate condition inside initial-by-initial pairs; there
    is a transition W --ev--> W' when some paired move realizes ``ev``,
    W' matches all of W's moves, and W' stays inside the pairs reachable
    by W's moves.  By default only the part reachable from the initial
    members is kept.
    """
    if not is_controllability_family(e, g, r):
        raise NotAFamily("input does not satisfy the controllability conditions")
    closure = downward_closure(e)
    ctx = _FamilyContext(g, r, closure.universe)
    chain = _maximal(closure.members)
    return _assemble_supervisor(ctx, chain, closure, reachable_only=reachable_only)


def extract_family(
    s: Automaton,
    g: Automaton,
    r: Automaton,
    phi: PairRelation | None = None,
) -> PairSetFamily:
    """Family read off a covariant-contravariant simulation witness.

    Each supervisor state y contributes the set of (plant, specification)
    pairs that ``phi`` relates at reachable product states (y, x).  When
    ``phi`` is omitted the greatest witness is computed; a supplied
    relation is verified first.
    """
    prod = sync_product(s, g)
    kind = RelationKind.cc_simulation(r.alphabet)
    if phi is None:
        ok, result = holds(prod, r, kind)
        if not ok:
            raise NotCcSimulation(result.describe())
        phi = result
    else:
        if (phi.left, phi.right) != (prod, r):
            raise UniverseMismatch(
                "relation must range over the supervised system and the specification"
            )
        if not is_cc_simulation(prod, r, phi):
            raise NotCcSimulation("supplied relation violates a clause")
    assert prod.pair_of is not None
    theta: dict[str, set[Pair]] = {y: set() for y in s.states}
    for pid, z in phi.pairs:
        comp = prod.pair_of[pid]
        theta[comp.left].add((comp.right, z))
    return PairSetFamily.over(g, r, [frozenset(v) for v in theta.values()])


def verify_solution(s: Automaton, g: Automaton, r: Automaton) -> VerificationReport:
    """Independent membership test for candidate supervisors.

    Checks admissibility and the covariant-contravariant simulation of
    the supervised system by the specification; shares nothing with the
    family machinery.
    """
    require_same_alphabet(s, g)
    require_same_alphabet(g, r)
    admissible, acx = is_admissible(s, g)
    ok, result = holds(sync_product(s, g), r, RelationKind.cc_simulation(r.alphabet))
    return VerificationReport(
        admissible=admissible,
        cc_simulated=ok,
        admissibility_counterexample=acx,
        cc_counterexample=None if ok else result,
    )


def synthesize(g: Automaton, r: Automaton, cap: int | None = None) -> SynthesisOutcome:
    """Decide solvability and build the maximally permissive supervisor.

    When solvable, the supervisor built from the greatest fixpoint
    simulates every other solution's supervised behavior; the attached
    report re-verifies it through the independent membership test.
    """
    fix = family_fixpoint(g, r, cap)
    family = fix.materialize()
    if not fix.solvable():
        return SynthesisOutcome(False, family, iterations=fix.iterations)
    supervisor = _assemble_supervisor(
        fix.ctx, fix.antichain, family, reachable_only=True
    )
    report = verify_solution(supervisor.automaton, g, r)
    return SynthesisOutcome(True, family, supervisor, report, fix.iterations)


def deterministic_fastpath(g: Automaton, r: Automaton) -> bool | None:
    """Shortcut valid only when both automata are deterministic.

    There, solvability coincides with the one-shot relation check with
    uncontrollable-forward, required-backward and initial conditions.
    Returns None otherwise; nondeterminism breaks the shortcut.
    """
    if not (is_deterministic(g) and is_deterministic(r)):
        return None
    ok, _ = holds(g, r, RelationKind.ucr_simulation(g.alphabet))
    return ok


def bisimilarity_solvable(g: Automaton, r: Automaton, cap: int | None = None) -> bool:
    """Solvability of the two-sided (bisimilarity) control problem.

    Runs the family fixpoint with every event required, then demands that
    the initial-by-initial members jointly cover every initial
    specification state.
    """
    ab = g.alphabet
    forced = replace(ab, required=frozenset(ab.events))
    g2 = replace(g, alphabet=forced, pair_of=None)
    r2 = replace(r, alphabet=forced, pair_of=None)
    fix = family_fixpoint(g2, r2, cap)
    if not fix.solvable():
        return False
    ctx = fix.ctx
    covered: set[str] = set()
    for m in fix.antichain:
        core = m & ctx.initial_mask
        if ctx.istate(core):
            covered.update(ctx.universe[i][1] for i in ctx.bits(core))
    return covered == set(r.initial)
