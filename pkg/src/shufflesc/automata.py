"""Core automata machinery.

Transformations (total maps on {1..n}), complete DFAs given as one
transformation per letter, NFAs, and the standard constructions: subset
construction, minimization, canonical forms, word acceptance.

States are 1-based everywhere; this convention leaks into file formats and
reports on purpose, so internal code never exposes 0-based offsets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence, Union


class FormatError(ValueError):
    """A DFA file failed to parse; `where` names the offending field."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


@dataclass(frozen=True)
class Transformation:
    """A total map on {1..n}, stored as the image tuple [1t, 2t, ..., nt]."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if n == 0:
            raise ValueError("empty transformation")
        for q, img in enumerate(self.images, start=1):
            if not isinstance(img, int) or not 1 <= img <= n:
                raise ValueError(f"image of {q} is {img!r}, not in 1..{n}")

    @property
    def degree(self) -> int:
        return len(self.images)

    def apply(self, q: int) -> int:
        if not 1 <= q <= self.degree:
            raise ValueError(f"state {q} out of range 1..{self.degree}")
        return self.images[q - 1]

    def __call__(self, q: int) -> int:
        return self.apply(q)

    def then(self, other: "Transformation") -> "Transformation":
        """Composition: first self, then other."""
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return Transformation(tuple(other.images[i - 1] for i in self.images))

    def is_permutation(self) -> bool:
        return len(set(self.images)) == self.degree

    def inverse(self) -> "Transformation":
        if not self.is_permutation():
            raise ValueError("not a permutation")
        inv = [0] * self.degree
        for q, img in enumerate(self.images, start=1):
            inv[img - 1] = q
        return Transformation(tuple(inv))

    @staticmethod
    def identity(n: int) -> "Transformation":
        return Transformation(tuple(range(1, n + 1)))

    @staticmethod
    def point(n: int, p: int, q: int) -> "Transformation":
        """The map (p -> q): sends p to q, fixes everything else."""
        images = list(range(1, n + 1))
        images[p - 1] = q
        return Transformation(tuple(images))

    @staticmethod
    def transposition(n: int, p: int, q: int) -> "Transformation":
        """The swap (p, q)."""
        images = list(range(1, n + 1))
        images[p - 1], images[q - 1] = q, p
        return Transformation(tuple(images))


def apply(t: Transformation, q: int) -> int:
    """Image of state q under t."""
    return t.apply(q)


@dataclass(frozen=True)
class Dfa:
    """Complete DFA: one Transformation per letter, initial state 1."""

    state_count: int
    alphabet: tuple[str, ...]
    transitions: tuple[Transformation, ...]  # aligned with alphabet
    finals: frozenset[int]
    initial: int = 1

    def __post_init__(self):
        if self.state_count < 1:
            raise ValueError("state_count must be positive")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate letters in alphabet")
        if len(self.transitions) != len(self.alphabet):
            raise ValueError("one transformation per letter required")
        for x, t in zip(self.alphabet, self.transitions):
            if t.degree != self.state_count:
                raise ValueError(f"transformation for {x!r} has wrong degree")
        for f in self.finals:
            if not 1 <= f <= self.state_count:
                raise ValueError(f"final state {f} out of range")
        if not 1 <= self.initial <= self.state_count:
            raise ValueError("initial state out of range")

    def letter_index(self, x: str) -> int:
        try:
            return self.alphabet.index(x)
        except ValueError:
            raise ValueError(f"letter {x!r} not in alphabet") from None

    def step(self, q: int, x: str) -> int:
        return self.transitions[self.letter_index(x)].apply(q)

    def run(self, word: Iterable[str], start: int | None = None) -> int:
        q = self.initial if start is None else start
        for x in word:
            q = self.step(q, x)
        return q

    def accepts(self, word: Iterable[str]) -> bool:
        return self.run(word) in self.finals


@dataclass(frozen=True)
class Nfa:
    """NFA with a single initial state; transitions[q-1][i] is delta(q, alphabet[i])."""

    state_count: int
    alphabet: tuple[str, ...]
    transitions: tuple[tuple[frozenset[int], ...], ...]
    initial: int
    finals: frozenset[int]

    def __post_init__(self):
        if self.state_count < 1:
            raise ValueError("state_count must be positive")
        if len(self.transitions) != self.state_count:
            raise ValueError("one transition row per state required")
        for row in self.transitions:
            if len(row) != len(self.alphabet):
                raise ValueError("one successor set per letter required")
            for succs in row:
                for s in succs:
                    if not 1 <= s <= self.state_count:
                        raise ValueError(f"successor {s} out of range")
        if not 1 <= self.initial <= self.state_count:
            raise ValueError("initial state out of range")
        for f in self.finals:
            if not 1 <= f <= self.state_count:
                raise ValueError(f"final state {f} out of range")

    def letter_index(self, x: str) -> int:
        try:
            return self.alphabet.index(x)
        except ValueError:
            raise ValueError(f"letter {x!r} not in alphabet") from None

    def step(self, states: frozenset[int], x: str) -> frozenset[int]:
        i = self.letter_index(x)
        out: set[int] = set()
        for q in states:
            out |= self.transitions[q - 1][i]
        return frozenset(out)

    def accepts(self, word: Iterable[str]) -> bool:
        current = frozenset([self.initial])
        for x in word:
            current = self.step(current, x)
        return bool(current & self.finals)


Automaton = Union[Dfa, Nfa]


def accepts(a: Automaton, word: Iterable[str]) -> bool:
    """Membership of a word (any iterable of letters; a str iterates chars)."""
    return a.accepts(word)


def determinize(a: Nfa) -> tuple[Dfa, list[frozenset[int]]]:
    """Accessible subset automaton of `a`.

    Returns the DFA together with the subset carried by each new state id
    (state i corresponds to subsets[i-1]; state 1 is {initial}).
    """
    start = frozenset([a.initial])
    ids: dict[frozenset[int], int] = {start: 1}
    subsets: list[frozenset[int]] = [start]
    table: list[list[int]] = []
    i = 0
    while i < len(subsets):
        current = subsets[i]
        row = []
        for x in a.alphabet:
            nxt = a.step(current, x)
            if nxt not in ids:
                ids[nxt] = len(subsets) + 1
                subsets.append(nxt)
            row.append(ids[nxt])
        table.append(row)
        i += 1
    count = len(subsets)
    transitions = tuple(
        Transformation(tuple(table[q][li] for q in range(count)))
        for li in range(len(a.alphabet))
    )
    finals = frozenset(
        ids[s] for s in subsets if s & a.finals
    )
    return Dfa(count, a.alphabet, transitions, finals), subsets


def trim(d: Dfa) -> Dfa:
    """Restrict to states reachable from the initial state, relabeled in
    BFS discovery order (initial becomes 1). Completeness is preserved."""
    order = [d.initial]
    pos = {d.initial: 1}
    qi = 0
    while qi < len(order):
        q = order[qi]
        for t in d.transitions:
            nxt = t.apply(q)
            if nxt not in pos:
                pos[nxt] = len(order) + 1
                order.append(nxt)
        qi += 1
    count = len(order)
    transitions = tuple(
        Transformation(tuple(pos[t.apply(q)] for q in order))
        for t in d.transitions
    )
    finals = frozenset(pos[f] for f in d.finals if f in pos)
    return Dfa(count, d.alphabet, transitions, finals)


def minimize(d: Dfa) -> Dfa:
    """Minimal complete DFA of the same language (Moore partition refinement)."""
    d = trim(d)
    m = d.state_count
    block = [1 if q in d.finals else 0 for q in range(1, m + 1)]
    while True:
        sigs = [
            (block[q - 1],) + tuple(block[t.apply(q) - 1] for t in d.transitions)
            for q in range(1, m + 1)
        ]
        renum: dict[tuple, int] = {}
        new_block = []
        for sig in sigs:
            if sig not in renum:
                renum[sig] = len(renum)
            new_block.append(renum[sig])
        if new_block == block:
            break
        block = new_block
    count = len(set(block))
    # representative state per block, block ids already in first-occurrence
    # order from state 1, so the initial state's block is block[0] = 0
    reps = [0] * count
    for q in range(m, 0, -1):
        reps[block[q - 1]] = q
    transitions = tuple(
        Transformation(tuple(block[t.apply(reps[b]) - 1] + 1 for b in range(count)))
        for t in d.transitions
    )
    finals = frozenset(block[f - 1] + 1 for f in d.finals)
    return Dfa(count, d.alphabet, transitions, finals, initial=block[d.initial - 1] + 1)


def state_complexity(d: Dfa) -> int:
    """Number of states of the minimal complete DFA for L(d)."""
    return minimize(d).state_count


@dataclass(frozen=True)
class CanonicalForm:
    """Total ordering key for a DFA, equal iff isomorphic.

    `letters_complete` is True when the key was minimized over all letter
    permutations; only then does equality also absorb letter renaming.
    """

    key: tuple
    letters_complete: bool


MAX_CANONICAL_LETTERS = 8


def _bfs_key(d: Dfa, letter_order: Sequence[int]) -> tuple:
    """Relabel states by BFS from the initial state, visiting letters in the
    given order; all states must be reachable (trim first)."""
    order = [d.initial]
    pos = {d.initial: 1}
    qi = 0
    while qi < len(order):
        q = order[qi]
        for li in letter_order:
            nxt = d.transitions[li].apply(q)
            if nxt not in pos:
                pos[nxt] = len(order) + 1
                order.append(nxt)
        qi += 1
    if len(order) != d.state_count:
        raise ValueError("unreachable states; trim before canonicalizing")
    rows = tuple(
        tuple(pos[d.transitions[li].apply(q)] for q in order)
        for li in letter_order
    )
    finals = tuple(sorted(pos[f] for f in d.finals))
    return (d.state_count, rows, finals)


def canonicalize(d: Dfa) -> CanonicalForm:
    """Canonical form under state relabeling (initial fixed) and, for
    alphabets up to 8 letters, letter renaming."""
    d = trim(d)
    k = len(d.alphabet)
    if k <= MAX_CANONICAL_LETTERS:
        best = min(_bfs_key(d, perm) for perm in permutations(range(k)))
        return CanonicalForm(best, True)
    return CanonicalForm(_bfs_key(d, tuple(range(k))), False)


def isomorphic_with_letter_renaming(d1: Dfa, d2: Dfa) -> bool:
    """Explicit letter-permutation matching for large alphabets."""
    d1, d2 = trim(d1), trim(d2)
    k = len(d1.alphabet)
    if len(d2.alphabet) != k or d1.state_count != d2.state_count:
        return False
    if k <= MAX_CANONICAL_LETTERS:
        return canonicalize(d1) == canonicalize(d2)
    # prune with a letter-renaming-invariant signature per letter
    def sig(d: Dfa, li: int) -> tuple:
        images = d.transitions[li].images
        return (tuple(sorted(images)), images[d.initial - 1] == d.initial)

    groups1: dict[tuple, list[int]] = {}
    groups2: dict[tuple, list[int]] = {}
    for li in range(k):
        groups1.setdefault(sig(d1, li), []).append(li)
        groups2.setdefault(sig(d2, li), []).append(li)
    if set(groups1) != set(groups2):
        return False
    if any(len(groups1[g]) != len(groups2[g]) for g in groups1):
        return False
    base = _bfs_key(d1, tuple(range(k)))

    def assignments(gkeys: list[tuple]):
        if not gkeys:
            yield []
            return
        head, *rest = gkeys
        for perm in permutations(groups2[head]):
            for tail in assignments(rest):
                yield list(perm) + tail

    gkeys = sorted(groups1)
    order1 = [li for g in gkeys for li in groups1[g]]
    inv1 = [0] * k
    for i, li in enumerate(order1):
        inv1[li] = i
    for assigned in assignments(gkeys):
        # assigned[i] is the d2 letter matched with order1[i]
        if _bfs_key(d2, tuple(assigned)) == _bfs_key(d1, tuple(order1)):
            return True
    return False


# -- DFA file format ---------------------------------------------------------
#
# One UTF-8 JSON object:
#   {"states": m, "alphabet": ["a","b"], "initial": 1, "finals": [2],
#    "transitions": {"a": [2,1], "b": [1,1]}}
# where transitions[x][q-1] is delta(q, x).


def dfa_to_dict(d: Dfa) -> dict:
    return {
        "states": d.state_count,
        "alphabet": list(d.alphabet),
        "initial": d.initial,
        "finals": sorted(d.finals),
        "transitions": {
            x: list(t.images) for x, t in zip(d.alphabet, d.transitions)
        },
    }


def dfa_from_dict(obj: dict) -> Dfa:
    if not isinstance(obj, dict):
        raise FormatError("expected a JSON object", "$")
    try:
        m = obj["states"]
    except KeyError:
        raise FormatError("missing field", "states") from None
    if not isinstance(m, int) or m < 1:
        raise FormatError(f"expected a positive integer, got {m!r}", "states")
    alphabet = obj.get("alphabet")
    if not isinstance(alphabet, list) or not alphabet or not all(
        isinstance(x, str) for x in alphabet
    ):
        raise FormatError("expected a nonempty list of strings", "alphabet")
    if len(set(alphabet)) != len(alphabet):
        raise FormatError("duplicate letters", "alphabet")
    initial = obj.get("initial", 1)
    if not isinstance(initial, int) or not 1 <= initial <= m:
        raise FormatError(f"state {initial!r} out of range 1..{m}", "initial")
    finals = obj.get("finals")
    if not isinstance(finals, list):
        raise FormatError("expected a list of states", "finals")
    for i, f in enumerate(finals):
        if not isinstance(f, int) or not 1 <= f <= m:
            raise FormatError(f"state {f!r} out of range 1..{m}", f"finals[{i}]")
    trans = obj.get("transitions")
    if not isinstance(trans, dict):
        raise FormatError("expected an object keyed by letter", "transitions")
    if set(trans) != set(alphabet):
        missing = sorted(set(alphabet) - set(trans))
        extra = sorted(set(trans) - set(alphabet))
        raise FormatError(
            f"letters do not match alphabet (missing {missing}, extra {extra})",
            "transitions",
        )
    transitions = []
    for x in alphabet:
        row = trans[x]
        if not isinstance(row, list) or len(row) != m:
            raise FormatError(f"expected a list of {m} states", f"transitions[{x!r}]")
        for qi, img in enumerate(row):
            if not isinstance(img, int) or not 1 <= img <= m:
                raise FormatError(
                    f"state {img!r} out of range 1..{m}", f"transitions[{x!r}][{qi}]"
                )
        transitions.append(Transformation(tuple(row)))
    return Dfa(m, tuple(alphabet), tuple(transitions), frozenset(finals), initial)


def load_dfa(path) -> Dfa:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as e:
            raise FormatError(f"invalid JSON at line {e.lineno}: {e.msg}", str(path))
    try:
        return dfa_from_dict(obj)
    except FormatError as e:
        raise FormatError(str(e), str(path)) from None


def dump_dfa(d: Dfa, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(dfa_to_dict(d), fh, indent=1)
        fh.write("\n")
