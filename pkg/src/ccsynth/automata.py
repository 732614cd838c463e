"""Core automaton model: alphabets, synchronous products, reachability.

All values are immutable after construction; every operation is a pure
function returning fresh values, so instances are safe to share freely.
State ids are opaque strings; dense integer indices are assigned in
declaration order, which fixes every iteration order in the package and
makes all derived outputs deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    AlphabetMismatch,
    DuplicateStateId,
    EmptyInitialSet,
    UnknownEvent,
    UnknownState,
    ValidationError,
)

Transition = tuple[str, str, str]


class ProductState(NamedTuple):
    """Component pair behind a synchronous-product state."""

    left: str
    right: str


@dataclass(frozen=True)
class Alphabet:
    """Finite event set partitioned into controllable and uncontrollable
    events, with a distinguished subset of required events.

    ``controllable`` is derived: it is exactly ``events`` minus
    ``uncontrollable``, so the two always partition the alphabet.
    """

    events: tuple[str, ...]
    uncontrollable: frozenset[str] = frozenset()
    required: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(self, "uncontrollable", frozenset(self.uncontrollable))
        object.__setattr__(self, "required", frozenset(self.required))
        seen = set()
        for name in self.events:
            if not name:
                raise ValidationError("event names must be nonempty")
            if name in seen:
                raise ValidationError(f"duplicate event name {name!r}")
            seen.add(name)
        for name in self.uncontrollable - seen:
            raise UnknownEvent(f"uncontrollable event {name!r} not in alphabet")
        for name in self.required - seen:
            raise UnknownEvent(f"required event {name!r} not in alphabet")

    @property
    def controllable(self) -> frozenset[str]:
        return frozenset(self.events) - self.uncontrollable

    def index(self, event: str) -> int:
        try:
            return self._event_index[event]
        except KeyError:
            raise UnknownEvent(f"event {event!r} not in alphabet") from None

    @cached_property
    def _event_index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.events)}


@dataclass(frozen=True)
class Automaton:
    """Nondeterministic automaton: states, labeled transitions and a
    nonempty set of initial states.

    Transitions are normalized to a sorted, duplicate-free tuple at
    construction (by state/event declaration indices), so two automata
    describing the same structure compare equal regardless of the order
    in which transitions were supplied.  ``pair_of`` carries component
    information on synchronous products and never takes part in
    equality.
    """

    alphabet: Alphabet
    states: tuple[str, ...]
    transitions: tuple[Transition, ...]
    initial: tuple[str, ...]
    pair_of: Mapping[str, ProductState] | None = field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        sidx = {s: i for i, s in enumerate(self.states)}
        eidx = {e: i for i, e in enumerate(self.alphabet.events)}
        big = len(sidx) + len(eidx) + 1

        def tkey(t: Transition):
            return (sidx.get(t[0], big), eidx.get(t[1], big), sidx.get(t[2], big), t)

        trans = sorted(set(map(tuple, self.transitions)), key=tkey)
        object.__setattr__(self, "transitions", tuple(trans))
        init = sorted(set(self.initial), key=lambda s: (sidx.get(s, big), s))
        object.__setattr__(self, "initial", tuple(init))

    # -- indexed views -------------------------------------------------

    @cached_property
    def state_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def _succ(self) -> dict[tuple[str, str], tuple[str, ...]]:
        out: dict[tuple[str, str], list[str]] = {}
        for src, ev, dst in self.transitions:
            out.setdefault((src, ev), []).append(dst)
        return {k: tuple(v) for k, v in out.items()}

    def successors(self, state: str, event: str) -> tuple[str, ...]:
        """Targets of ``state --event-->``, in state declaration order."""
        return self._succ.get((state, event), ())

    def enables(self, state: str, event: str) -> bool:
        return (state, event) in self._succ

    @property
    def n_states(self) -> int:
        return len(self.states)


def validate_automaton(a: Automaton) -> None:
    """Raise the first violated structural invariant, or return None.

    Checks, in order: nonempty initial set, transition events declared,
    transition endpoints and initial states declared, state ids unique.
    """
    if not a.initial:
        raise EmptyInitialSet("initial state set is empty")
    declared = set(a.states)
    events = set(a.alphabet.events)
    for src, ev, dst in a.transitions:
        if ev not in events:
            raise UnknownEvent(f"transition event {ev!r} not in alphabet")
        if src not in declared:
            raise UnknownState(f"transition source {src!r} not a declared state")
        if dst not in declared:
            raise UnknownState(f"transition target {dst!r} not a declared state")
    for s in a.initial:
        if s not in declared:
            raise UnknownState(f"initial state {s!r} not a declared state")
    if len(declared) != len(a.states):
        seen: set[str] = set()
        for s in a.states:
            if s in seen:
                raise DuplicateStateId(f"state id {s!r} declared twice")
            seen.add(s)


def require_same_alphabet(a: Automaton, b: Automaton) -> None:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(
            "operands must share one alphabet (same events, attributes and order)"
        )


def product_state_id(left: str, right: str) -> str:
    return f"({left},{right})"


def sync_product(s: Automaton, g: Automaton, *, full: bool = False) -> Automaton:
    """Synchronous composition: both factors move together on every event.

    State set is the cartesian product restricted to its reachable part
    unless ``full`` is given; initial states are all pairs of initials.
    The result's ``pair_of`` maps each product state id back to its
    component pair.
    """
    require_same_alphabet(s, g)
    roots = [(y, x) for y in s.initial for x in g.initial]
    if full:
        order = [(y, x) for y in s.states for x in g.states]
    else:
        order = list(roots)
        seen = set(order)
        queue = deque(order)
        while queue:
            y, x = queue.popleft()
            for ev in s.alphabet.events:
                for y1 in s.successors(y, ev):
                    for x1 in g.successors(x, ev):
                        if (y1, x1) not in seen:
                            seen.add((y1, x1))
                            order.append((y1, x1))
                            queue.append((y1, x1))
    names = {pair: product_state_id(*pair) for pair in order}
    present = set(order)
    transitions = [
        (names[(y, x)], ev, names[(y1, x1)])
        for (y, x) in order
        for ev in s.alphabet.events
        for y1 in s.successors(y, ev)
        for x1 in g.successors(x, ev)
        if (y1, x1) in present
    ]
    return Automaton(
        alphabet=s.alphabet,
        states=tuple(names[p] for p in order),
        transitions=tuple(transitions),
        initial=tuple(names[p] for p in roots if p in present),
        pair_of={names[p]: ProductState(*p) for p in order},
    )


def reach(a: Automaton, sequence: Sequence[str]) -> frozenset[str]:
    """States reachable from some initial state via exactly ``sequence``."""
    for ev in sequence:
        if ev not in a.alphabet._event_index:
            raise UnknownEvent(f"event {ev!r} not in alphabet")
    current = frozenset(a.initial)
    for ev in sequence:
        current = frozenset(t for s in current for t in a.successors(s, ev))
    return current


def reachable_states(a: Automaton) -> tuple[str, ...]:
    """All reachable states, in BFS discovery order from the initials."""
    seen = list(a.initial)
    seen_set = set(seen)
    queue = deque(seen)
    while queue:
        s = queue.popleft()
        for ev in a.alphabet.events:
            for t in a.successors(s, ev):
                if t not in seen_set:
                    seen_set.add(t)
                    seen.append(t)
                    queue.append(t)
    return tuple(seen)


def reachable_part(a: Automaton) -> Automaton:
    """Restriction of ``a`` to states reachable from its initial set."""
    keep = set(reachable_states(a))
    return replace(
        a,
        states=tuple(s for s in a.states if s in keep),
        transitions=tuple(t for t in a.transitions if t[0] in keep and t[2] in keep),
        initial=a.initial,
        pair_of=None
        if a.pair_of is None
        else {s: p for s, p in a.pair_of.items() if s in keep},
    )


def is_deterministic(a: Automaton) -> bool:
    """One initial state and at most one successor per (state, event)."""
    if len(a.initial) != 1:
        return False
    return all(len(a.successors(s, ev)) <= 1 for (s, ev) in a._succ)


def default_inclusion_bound(a: Automaton, b: Automaton) -> int:
    # Beyond |A|x|B| steps the (state, subset) exploration only revisits
    # configurations already seen, so this bound loses nothing.
    return a.n_states * b.n_states + 1


def language_included(a: Automaton, b: Automaton, bound: int | None = None) -> bool:
    """Is every trace of ``a`` of length <= bound also a trace of ``b``?

    Explores pairs (state of a, subset of b's states) reached by common
    strings; a pair whose subset side goes empty witnesses a trace of
    ``a`` that ``b`` cannot follow.
    """
    require_same_alphabet(a, b)
    if bound is None:
        bound = default_inclusion_bound(a, b)
    b0 = frozenset(b.initial)
    frontier = [(x, b0) for x in a.initial]
    seen = set(frontier)
    for _ in range(bound):
        nxt = []
        for x, bs in frontier:
            for ev in a.alphabet.events:
                for x1 in a.successors(x, ev):
                    bs1 = frozenset(t for z in bs for t in b.successors(z, ev))
                    if not bs1:
                        return False
                    key = (x1, bs1)
                    if key not in seen:
                        seen.add(key)
                        nxt.append(key)
        if not nxt:
            break
        frontier = nxt
    return True


def make_automaton(
    events: Iterable[str],
    states: Iterable[str],
    transitions: Iterable[Transition],
    initial: Iterable[str],
    *,
    uncontrollable: Iterable[str] = (),
    required: Iterable[str] = (),
) -> Automaton:
    """Build and validate an automaton in one call."""
    a = Automaton(
        alphabet=Alphabet(tuple(events), frozenset(uncontrollable), frozenset(required)),
        states=tuple(states),
        transitions=tuple(transitions),
        initial=tuple(initial),
    )
    validate_automaton(a)
    return a
