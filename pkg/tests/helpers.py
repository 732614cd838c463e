"""Shared test utilities: small random automata and structural probes."""

from __future__ import annotations

import random
from collections import deque

from ccsynth import Alphabet, Automaton, SupervisorAutomaton


def random_automaton(
    alphabet: Alphabet,
    n_states: int,
    density: float,
    rng: random.Random,
    prefix: str = "q",
) -> Automaton:
    states = tuple(f"{prefix}{i}" for i in range(n_states))
    transitions = tuple(
        (s, ev, t)
        for s in states
        for ev in alphabet.events
        for t in states
        if rng.random() < density
    )
    initial = tuple(s for s in states if rng.random() < 0.3) or (states[0],)
    return Automaton(alphabet, states, transitions, initial)


def random_alphabet(rng: random.Random, n_events: int) -> Alphabet:
    events = tuple(f"e{i}" for i in range(n_events))
    unc = frozenset(ev for ev in events if rng.random() < 0.5)
    req = frozenset(ev for ev in events if rng.random() < 0.4)
    return Alphabet(events, unc, req)


def projection_consistent(sup: SupervisorAutomaton, g: Automaton) -> bool:
    """Tandem search: at every reached supervisor state, the plant
    components of its member equal the plant states reachable by the
    same string."""
    aut = sup.automaton
    start = [(w, frozenset(g.initial)) for w in aut.initial]
    seen = set(start)
    queue = deque(start)
    while queue:
        w, rs = queue.popleft()
        proj = frozenset(x for x, _z in sup.members[w])
        if proj != rs:
            return False
        for ev in aut.alphabet.events:
            rs1 = frozenset(t for x in rs for t in g.successors(x, ev))
            for w1 in aut.successors(w, ev):
                nxt = (w1, rs1)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return True
