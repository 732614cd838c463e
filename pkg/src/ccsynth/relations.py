"""Parameterized forward/backward simulation engine.

One refinement loop instantiates every behavioral preorder used by the
synthesis pipeline.  A *kind* selects which events carry a forward
obligation (moves of the left automaton must be matched by the right),
which carry a backward obligation (moves of the right automaton must be
matched by the left), and which initial-state conditions apply:

===============  ==============  ===============  ========================
kind             forward events  backward events  initial conditions
===============  ==============  ===============  ========================
simulation       all             none             left-to-right
cc-simulation    all             required         left-to-right
bisimulation     all             all              both directions
uc-simulation    uncontrollable  none             left-to-right
ucr-simulation   uncontrollable  required         left-to-right
===============  ==============  ===============  ========================

Relations satisfying a kind's forward/backward clauses are closed under
union, so a unique greatest one exists; it is computed by deleting
violating pairs from the full product until stable.  Deletions are
logged so that a failed check can be explained by walking the deletion
cascade down to a pair whose obligation has no candidate witness at all.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .automata import Automaton, require_same_alphabet
from .errors import CapExceeded, UniverseMismatch

FORWARD = "forward"
BACKWARD = "backward"
ADMISSIBILITY = "admissibility"
ISTATE = "istate"


@dataclass(frozen=True)
class RelationKind:
    """Clause selection for the greatest-relation computation."""

    forward_events: frozenset[str]
    backward_events: frozenset[str] = frozenset()
    check_initial: bool = True
    check_inverse_initial: bool = False
    name: str = "custom"

    @staticmethod
    def simulation(alphabet) -> "RelationKind":
        return RelationKind(frozenset(alphabet.events), frozenset(), True, False, "sim")

    @staticmethod
    def cc_simulation(alphabet) -> "RelationKind":
        return RelationKind(
            frozenset(alphabet.events), alphabet.required, True, False, "ccsim"
        )

    @staticmethod
    def bisimulation(alphabet) -> "RelationKind":
        # A single relation whose forward clause holds in both directions
        # is exactly one that is a simulation alongside its inverse.
        return RelationKind(
            frozenset(alphabet.events), frozenset(alphabet.events), True, True, "bisim"
        )

    @staticmethod
    def uc_simulation(alphabet) -> "RelationKind":
        return RelationKind(alphabet.uncontrollable, frozenset(), True, False, "ucsim")

    @staticmethod
    def ucr_simulation(alphabet) -> "RelationKind":
        return RelationKind(
            alphabet.uncontrollable, alphabet.required, True, False, "ucrsim"
        )

    @staticmethod
    def simulation_wrt(events) -> "RelationKind":
        return RelationKind(frozenset(events), frozenset(), True, False, "sim-wrt")

    @staticmethod
    def named(name: str, alphabet) -> "RelationKind":
        factories = {
            "sim": RelationKind.simulation,
            "ccsim": RelationKind.cc_simulation,
            "bisim": RelationKind.bisimulation,
            "ucsim": RelationKind.uc_simulation,
            "ucrsim": RelationKind.ucr_simulation,
        }
        try:
            return factories[name](alphabet)
        except KeyError:
            raise ValueError(f"unknown relation kind {name!r}") from None


@dataclass(frozen=True)
class PairRelation:
    """A set of (state of ``left``, state of ``right``) pairs."""

    left: Automaton
    right: Automaton
    pairs: frozenset[tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(self.pairs))
        for x, z in self.pairs:
            if x not in self.left.state_index:
                raise UniverseMismatch(f"state {x!r} not in the left automaton")
            if z not in self.right.state_index:
                raise UniverseMismatch(f"state {z!r} not in the right automaton")

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def sorted_pairs(self) -> tuple[tuple[str, str], ...]:
        li, ri = self.left.state_index, self.right.state_index
        return tuple(sorted(self.pairs, key=lambda p: (li[p[0]], ri[p[1]])))


@dataclass(frozen=True)
class Step:
    """One link of a deletion cascade: the obligation that had no witness."""

    left: str
    right: str
    clause: str
    event: str
    successor: str


@dataclass(frozen=True)
class Counterexample:
    """Why a check failed: the root violation plus the cascade to it.

    ``kind`` names the violated clause.  For relation checks it is the
    clause of the cascade's root (``forward`` or ``backward``); the
    chain starts at the pair demanded by the failed initial condition.
    """

    kind: str
    left: str
    right: str | None = None
    event: str | None = None
    successor: str | None = None
    chain: tuple[Step, ...] = ()
    note: str = ""

    def describe(self) -> str:
        if self.kind == FORWARD:
            head = (
                f"forward clause fails at ({self.left}, {self.right}): "
                f"{self.left} --{self.event}--> {self.successor} has no matching move "
                f"from {self.right}"
            )
        elif self.kind == BACKWARD:
            head = (
                f"backward clause fails at ({self.left}, {self.right}): "
                f"{self.right} --{self.event}--> {self.successor} is required but "
                f"{self.left} cannot match it"
            )
        elif self.kind == ADMISSIBILITY:
            head = (
                f"admissibility fails at ({self.left}, {self.right}): plant enables "
                f"uncontrollable {self.event} but the supervisor refuses it"
            )
        elif self.kind == ISTATE:
            head = f"no controllability family member covers initial state {self.left}"
        else:
            head = f"{self.kind} clause fails at ({self.left}, {self.right})"
        return head if not self.note else f"{head} [{self.note}]"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "left": self.left,
            "right": self.right,
            "event": self.event,
            "successor": self.successor,
            "chain": [
                {
                    "left": s.left,
                    "right": s.right,
                    "clause": s.clause,
                    "event": s.event,
                    "successor": s.successor,
                }
                for s in self.chain
            ],
            "note": self.note,
            "message": self.describe(),
        }


@dataclass
class _Deletion:
    clause: str
    event: str
    successor: str
    time: int
    candidates: tuple[tuple[str, str], ...]


@dataclass
class RefineResult:
    """Greatest relation for a kind's clauses, with its deletion log."""

    left: Automaton
    right: Automaton
    alive: set[tuple[str, str]]
    reasons: dict[tuple[str, str], _Deletion] = field(default_factory=dict)
    deletions: int = 0

    def relation(self) -> PairRelation:
        return PairRelation(self.left, self.right, frozenset(self.alive))

    def root_cause(self, pair: tuple[str, str]) -> Counterexample:
        """Walk the deletion cascade from ``pair`` to an intrinsic violation."""
        chain: list[Step] = []
        current = pair
        while True:
            d = self.reasons[current]
            chain.append(Step(current[0], current[1], d.clause, d.event, d.successor))
            if not d.candidates:
                break
            # Every candidate was already dead when this pair was deleted;
            # following the earliest death keeps the walk strictly
            # decreasing in time, so it terminates at a rootless deletion.
            current = min(d.candidates, key=lambda c: self.reasons[c].time)
        root = chain[-1]
        return Counterexample(
            kind=root.clause,
            left=root.left,
            right=root.right,
            event=root.event,
            successor=root.successor,
            chain=tuple(chain),
        )


def refine(a: Automaton, b: Automaton, kind: RelationKind) -> RefineResult:
    """Delete clause-violating pairs from the full product until stable.

    One scan in fixed pair-index order seeds a FIFO worklist; a deleted
    pair re-queues exactly the pairs whose clauses could have used it as
    a witness.  Fully deterministic, and the result is the unique
    greatest clause-closed relation regardless of processing order.
    """
    require_same_alphabet(a, b)
    events = a.alphabet.events
    for ev in kind.forward_events | kind.backward_events:
        if ev not in a.alphabet._event_index:
            raise UniverseMismatch(f"kind references event {ev!r} outside the alphabet")
    na, nb = a.n_states, b.n_states
    ai, bi = a.state_index, b.state_index
    fwd = [k for k, ev in enumerate(events) if ev in kind.forward_events]
    bwd = [k for k, ev in enumerate(events) if ev in kind.backward_events]
    deps = sorted(set(fwd) | set(bwd))

    def tables(aut, index, nst):
        succ = [[() for _ in range(nst)] for _ in events]
        pred = [[[] for _ in range(nst)] for _ in events]
        for src, ev, dst in aut.transitions:
            k, si, di = aut.alphabet._event_index[ev], index[src], index[dst]
            succ[k][si] += (di,)
            pred[k][di].append(si)
        return succ, pred

    succ_a, pred_a = tables(a, ai, na)
    succ_b, pred_b = tables(b, bi, nb)

    n = na * nb
    alive = bytearray([1]) * n
    reasons: dict[int, _Deletion] = {}
    clock = 0
    queue: deque[int] = deque()
    queued = bytearray(n)

    def check(pid: int):
        xi, zi = divmod(pid, nb)
        for k in fwd:
            zs = succ_b[k][zi]
            for x1 in succ_a[k][xi]:
                base = x1 * nb
                if not any(alive[base + z1] for z1 in zs):
                    return FORWARD, k, x1, tuple(base + z1 for z1 in zs)
        for k in bwd:
            xs = succ_a[k][xi]
            for z1 in succ_b[k][zi]:
                if not any(alive[x1 * nb + z1] for x1 in xs):
                    return BACKWARD, k, z1, tuple(x1 * nb + z1 for x1 in xs)
        return None

    def kill(pid: int, hit) -> None:
        nonlocal clock
        clause, k, succ_state, cands = hit
        alive[pid] = 0
        succ_name = a.states[succ_state] if clause == FORWARD else b.states[succ_state]
        reasons[pid] = _Deletion(
            clause,
            events[k],
            succ_name,
            clock,
            tuple((a.states[c // nb], b.states[c % nb]) for c in cands),
        )
        clock += 1
        xi, zi = divmod(pid, nb)
        for kk in deps:
            for px in pred_a[kk][xi]:
                base = px * nb
                for pz in pred_b[kk][zi]:
                    q = base + pz
                    if alive[q] and not queued[q]:
                        queued[q] = 1
                        queue.append(q)

    for pid in range(n):
        hit = check(pid)
        if hit is not None:
            kill(pid, hit)
    while queue:
        pid = queue.popleft()
        queued[pid] = 0
        if not alive[pid]:
            continue
        hit = check(pid)
        if hit is not None:
            kill(pid, hit)

    alive_pairs = {
        (a.states[pid // nb], b.states[pid % nb]) for pid in range(n) if alive[pid]
    }
    named_reasons = {
        (a.states[pid // nb], b.states[pid % nb]): d for pid, d in reasons.items()
    }
    return RefineResult(a, b, alive_pairs, named_reasons, deletions=clock)


def greatest_relation(a: Automaton, b: Automaton, kind: RelationKind) -> PairRelation:
    """Largest relation closed under the kind's forward/backward clauses.

    Well defined because these clauses are preserved under union of
    relations; the initial-state conditions play no role here.
    """
    return refine(a, b, kind).relation()


def clause_violations(
    rel: PairRelation, kind: RelationKind
) -> list[tuple[tuple[str, str], str, str, str]]:
    """All forward/backward clause violations of ``rel`` against itself.

    Empty iff ``rel`` satisfies the kind's clauses; used to confirm that
    refinement output is a fixed point and to vet user-supplied relations.
    """
    a, b = rel.left, rel.right
    out = []
    for x, z in rel.sorted_pairs():
        for ev in a.alphabet.events:
            if ev in kind.forward_events:
                for x1 in a.successors(x, ev):
                    if not any((x1, z1) in rel.pairs for z1 in b.successors(z, ev)):
                        out.append(((x, z), FORWARD, ev, x1))
            if ev in kind.backward_events:
                for z1 in b.successors(z, ev):
                    if not any((x1, z1) in rel.pairs for x1 in a.successors(x, ev)):
                        out.append(((x, z), BACKWARD, ev, z1))
    return out


def initial_condition(phi: PairRelation) -> bool:
    """Every left-initial state is paired with some right-initial state."""
    return all(
        any((x0, z0) in phi.pairs for z0 in phi.right.initial)
        for x0 in phi.left.initial
    )


def inverse_initial_condition(phi: PairRelation) -> bool:
    return all(
        any((x0, z0) in phi.pairs for x0 in phi.left.initial)
        for z0 in phi.right.initial
    )


def _initial_counterexample(
    res: RefineResult, failing: str, from_left: bool
) -> Counterexample:
    # Every candidate pairing of the failing initial state was deleted;
    # trace the earliest-deleted one so the cascade is deterministic.
    if from_left:
        cands = [(failing, z0) for z0 in res.right.initial]
    else:
        cands = [(x0, failing) for x0 in res.left.initial]
    first = min(cands, key=lambda c: res.reasons[c].time)
    cx = res.root_cause(first)
    side = "initial state" if from_left else "specification initial state"
    return Counterexample(
        kind=cx.kind,
        left=cx.left,
        right=cx.right,
        event=cx.event,
        successor=cx.successor,
        chain=cx.chain,
        note=f"no pairing survives for {side} {failing}",
    )


def holds(
    a: Automaton, b: Automaton, kind: RelationKind
) -> tuple[bool, PairRelation | Counterexample]:
    """Decide whether ``a`` is related to ``b`` under ``kind``.

    Computes the greatest clause-closed relation, then applies the
    kind's initial-state conditions.  Returns the witnessing relation on
    success, otherwise a counterexample naming the failing clause.
    """
    res = refine(a, b, kind)
    rel = res.relation()
    if kind.check_initial:
        for x0 in a.initial:
            if not any((x0, z0) in rel.pairs for z0 in b.initial):
                return False, _initial_counterexample(res, x0, True)
    if kind.check_inverse_initial:
        for z0 in b.initial:
            if not any((x0, z0) in rel.pairs for x0 in a.initial):
                return False, _initial_counterexample(res, z0, False)
    return True, rel


def match_predicate(w: PairRelation, event: str, w2: PairRelation) -> bool:
    """Does every move of a ``w`` pair under ``event`` land in ``w2``?

    True iff for every (x, z) in ``w`` and every x --event--> x' there is
    some z --event--> z' with (x', z') in ``w2``.
    """
    if (w.left, w.right) != (w2.left, w2.right):
        raise UniverseMismatch("both relations must range over the same automata")
    g, r = w.left, w.right
    for x, z in w.pairs:
        for x1 in g.successors(x, event):
            if not any((x1, z1) in w2.pairs for z1 in r.successors(z, event)):
                return False
    return True


def is_admissible(
    s: Automaton, g: Automaton
) -> tuple[bool, Counterexample | None]:
    """May the supervisor never refuse an uncontrollable move of the plant?

    True iff at every reachable product state (y, x), every uncontrollable
    event enabled by the plant at x is enabled by the product.  The
    counterexample is the first violating (y, x, event) in BFS order.
    """
    require_same_alphabet(s, g)
    unc = [ev for ev in g.alphabet.events if ev in g.alphabet.uncontrollable]
    queue = deque((y, x) for y in s.initial for x in g.initial)
    seen = set(queue)
    while queue:
        y, x = queue.popleft()
        for ev in unc:
            # (y, x) --ev--> exists in the product iff both factors move.
            if g.enables(x, ev) and not s.enables(y, ev):
                return False, Counterexample(
                    kind=ADMISSIBILITY, left=y, right=x, event=ev
                )
        for ev in g.alphabet.events:
            for y1 in s.successors(y, ev):
                for x1 in g.successors(x, ev):
                    if (y1, x1) not in seen:
                        seen.add((y1, x1))
                        queue.append((y1, x1))
    return True, None


DEFAULT_SUBSET_PAIR_CAP = 100_000


def is_state_controllable(
    s: Automaton, g: Automaton, cap: int = DEFAULT_SUBSET_PAIR_CAP
) -> bool:
    """Trace-level admissibility over reach sets.

    For every string s and uncontrollable event e: if the plant can
    continue with e after s, every supervisor state reachable by s must
    enable e.  Explored by simultaneous subset construction over pairs
    (plant reach set, supervisor reach set); the frontier is capped
    because the construction is worst-case exponential.
    """
    require_same_alphabet(s, g)
    unc = [ev for ev in g.alphabet.events if ev in g.alphabet.uncontrollable]
    start = (frozenset(g.initial), frozenset(s.initial))
    queue = deque([start])
    seen = {start}
    explored = 0
    while queue:
        xs, ys = queue.popleft()
        explored += 1
        if explored > cap:
            raise CapExceeded(explored, cap, "subset-pair frontier")
        for ev in unc:
            plant_can = any(g.enables(x, ev) for x in xs)
            if plant_can and not all(s.enables(y, ev) for y in ys):
                return False
        for ev in g.alphabet.events:
            xs1 = frozenset(t for x in xs for t in g.successors(x, ev))
            ys1 = frozenset(t for y in ys for t in s.successors(y, ev))
            if not xs1 or not ys1:
                # Dead plant side leaves nothing to demand; dead
                # supervisor side leaves nothing to blame.
                continue
            nxt = (xs1, ys1)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return True


def is_uniform(phi: PairRelation, g: Automaton, r: Automaton) -> bool:
    """Can per-string slices of ``phi`` serve as matching witnesses?

    Quantifies over quadruples (x1, x2, z1, z2) whose components are all
    reachable by one common string (computed as reachability of the
    4-fold synchronous product): whenever (x1, z1) and (x2, z2) are in
    ``phi``, z1 enables a required event and x2 takes it, some move of z2
    must cover x2's move inside ``phi``.
    """
    if (phi.left, phi.right) != (g, r):
        raise UniverseMismatch("relation must range over exactly (g, r)")
    req = [ev for ev in g.alphabet.events if ev in g.alphabet.required]
    roots = {
        (x1, x2, z1, z2)
        for x1 in g.initial
        for x2 in g.initial
        for z1 in r.initial
        for z2 in r.initial
    }
    queue = deque(sorted(roots))
    seen = set(roots)
    while queue:
        quad = queue.popleft()
        x1, x2, z1, z2 = quad
        if (x1, z1) in phi.pairs and (x2, z2) in phi.pairs:
            for ev in req:
                if not r.enables(z1, ev):
                    continue
                for x2p in g.successors(x2, ev):
                    if not any(
                        (x2p, z2p) in phi.pairs for z2p in r.successors(z2, ev)
                    ):
                        return False
        for ev in g.alphabet.events:
            for a1 in g.successors(x1, ev):
                for a2 in g.successors(x2, ev):
                    for b1 in r.successors(z1, ev):
                        for b2 in r.successors(z2, ev):
                            nxt = (a1, a2, b1, b2)
                            if nxt not in seen:
                                seen.add(nxt)
                                queue.append(nxt)
    return True


def is_cc_simulation(s_times_g: Automaton, r: Automaton, phi: PairRelation) -> bool:
    """Is ``phi`` a covariant-contravariant simulation from ``s_times_g`` to ``r``?"""
    if (phi.left, phi.right) != (s_times_g, r):
        return False
    kind = RelationKind.cc_simulation(r.alphabet)
    if clause_violations(phi, kind):
        return False
    return initial_condition(phi)
