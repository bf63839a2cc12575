"""Exhaustive search for shuffle witness pairs over small DFA spaces.

A candidate pair over k letters is a multiset of joint letters (s, t) with
s acting on the m-state left DFA and t on the n-state right DFA, plus a
choice of final sets. Letter order never matters to the shuffle, so
multisets are generated in nondecreasing canonical order, killing letter
permutations at the source; remaining symmetry (per-DFA state relabeling
and joint letter renaming) is removed by canonicalizing reported
witnesses. The guard formula deliberately overcounts — it prices the raw
space before the minimality and reachability filters bite.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations, product
from string import ascii_lowercase

from .automata import Dfa, Transformation, state_complexity
from .shuffle import bound_f, build_shuffle_nfa, shuffle_state_complexity

SEARCH_GUARD_EVALUATIONS = 10**9


class SearchVolumeError(RuntimeError):
    """The raw candidate volume exceeds the evaluation guard."""


@dataclass(frozen=True)
class SearchSpace:
    """The candidate space for witness pairs with kappa(K)=m, kappa(L)=n."""

    m: int
    n: int
    k: int

    def letter_candidates(self) -> list[tuple[Transformation, Transformation]]:
        """All joint letters (s, t) in lexicographic image order."""
        out = []
        for s in product(range(1, self.m + 1), repeat=self.m):
            for t in product(range(1, self.n + 1), repeat=self.n):
                out.append((Transformation(s), Transformation(t)))
        return out

    def final_choices(self) -> int:
        """Nonempty proper final sets on each side."""
        return (2**self.m - 2) * (2**self.n - 2)

    def volume_estimate(self) -> int:
        """Letter multisets times final-set choices, before any filtering."""
        pairs = self.m**self.m * self.n**self.n
        return math.comb(pairs + self.k - 1, self.k) * self.final_choices()


@dataclass
class SearchResult:
    maximum: int
    bound: int
    met: bool
    witnesses: list[tuple[Dfa, Dfa]]
    candidates_evaluated: int

    def summary(self) -> dict:
        return {
            "max": self.maximum,
            "bound": self.bound,
            "met": self.met,
            "candidates_evaluated": self.candidates_evaluated,
        }


def _letter_names(k: int) -> tuple[str, ...]:
    if k <= len(ascii_lowercase):
        return tuple(ascii_lowercase[:k])
    return tuple(f"x{i}" for i in range(k))


def _proper_final_sets(size: int) -> list[frozenset[int]]:
    out = []
    for bits in range(1, (1 << size) - 1):
        out.append(frozenset(q + 1 for q in range(size) if bits >> q & 1))
    return out


def _bfs_relabel_key(d: Dfa) -> tuple:
    """Canonical key of a trim DFA under state relabeling with the letter
    order held fixed: BFS discovery order from the initial state."""
    relabel = {d.initial: 1}
    order = [d.initial]
    head = 0
    while head < len(order):
        q = order[head]
        head += 1
        for t in d.transitions:
            nxt = t.apply(q)
            if nxt not in relabel:
                relabel[nxt] = len(relabel) + 1
                order.append(nxt)
    rows = tuple(
        tuple(relabel[t.apply(q)] for t in d.transitions) for q in order
    )
    finals = tuple(sorted(relabel[f] for f in d.finals if f in relabel))
    return (len(order), rows, finals)


def _permute_letters(d: Dfa, perm: tuple[int, ...]) -> Dfa:
    return Dfa(
        d.state_count,
        d.alphabet,
        tuple(d.transitions[i] for i in perm),
        d.finals,
        d.initial,
    )


def pair_canonical_key(
    K: Dfa, L: Dfa, *, allow_swap: bool = False, ignore_finals: bool = False
) -> tuple:
    """Canonical key of a witness pair: minimum of the per-DFA relabeling
    keys over joint renamings of the shared alphabet.

    allow_swap also minimizes over the operand order (sound because the
    shuffle commutes; only available for equal state counts). ignore_finals
    blanks both final sets first — the convention under which the 4-letter
    2x2 witness is unique: with final sets distinguished, the exhaustive
    search finds bound-meeting variants of the same transition structure
    that differ only in which state is final on each side.
    """
    k = len(K.alphabet)
    orders = [(K, L)]
    if allow_swap and K.state_count == L.state_count:
        orders.append((L, K))
    best = None
    for first, second in orders:
        if ignore_finals:
            first = Dfa(first.state_count, first.alphabet, first.transitions,
                        frozenset([1]), first.initial)
            second = Dfa(second.state_count, second.alphabet, second.transitions,
                         frozenset([1]), second.initial)
        for perm in permutations(range(k)):
            a = _bfs_relabel_key(_permute_letters(first, perm))
            b = _bfs_relabel_key(_permute_letters(second, perm))
            key = ((a[0], a[1]) if ignore_finals else a,
                   (b[0], b[1]) if ignore_finals else b)
            if best is None or key < best:
                best = key
    return best


def right_dfa_canonical_key(L: Dfa, *, ignore_finals: bool = False) -> tuple:
    """Canonical key of one DFA under letter renaming and state relabeling;
    optionally blind to the final set."""
    k = len(L.alphabet)
    base = L
    if ignore_finals:
        base = Dfa(L.state_count, L.alphabet, L.transitions, frozenset([1]), L.initial)
    best = None
    for perm in permutations(range(k)):
        key = _bfs_relabel_key(_permute_letters(base, perm))
        if best is None or key < best:
            best = key
    if ignore_finals:
        return (best[0], best[1])
    return best


def _guard(space: SearchSpace, force: bool) -> None:
    volume = space.volume_estimate()
    if volume > SEARCH_GUARD_EVALUATIONS and not force:
        raise SearchVolumeError(
            f"search space for (m={space.m}, n={space.n}, k={space.k}) prices "
            f"at ~{volume:.3e} candidate evaluations, over the guard of "
            f"{SEARCH_GUARD_EVALUATIONS:.0e}; pass force=True to run anyway"
        )


def _reachable_subset_count(K: Dfa, L: Dfa) -> int:
    """Size of the reachable part of the shuffle subset automaton; an upper
    bound on the shuffle complexity that is independent of the final sets."""
    sh = build_shuffle_nfa(K, L)
    init = frozenset([sh.state_id(1, 1)])
    seen = {init}
    stack = [init]
    while stack:
        cur = stack.pop()
        for x in sh.nfa.alphabet:
            nxt = sh.nfa.step(cur, x)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen)


def max_shuffle_complexity(
    m: int,
    n: int,
    k: int,
    result_cap: int = 10,
    *,
    force: bool = False,
    workers: int = 1,
    stop_at_bound: bool = False,
    dedup_swap: bool = True,
    dedup_finals: bool = True,
) -> SearchResult:
    """Exact maximum of the shuffle complexity over the deduplicated space.

    Witnesses attaining the maximum are reported in canonical form, at most
    result_cap of them; one representative survives per equivalence class
    of pair_canonical_key under the dedup_* convention flags (defaults:
    operand swap allowed, final sets not distinguished — the convention
    under which the 4-letter 2x2 witness is unique). stop_at_bound returns
    as soon as some pair meets bound_f(m, n); the reported maximum is then
    the bound but the witness list may be truncated early.
    """
    space = SearchSpace(m, n, k)
    _guard(space, force)
    bound = bound_f(m, n)
    names = _letter_names(k)
    left_finals = _proper_final_sets(m)
    right_finals = _proper_final_sets(n)
    candidates = space.letter_candidates()
    multisets = list(combinations_with_replacement(range(len(candidates)), k))

    def evaluate_shard(shard) -> tuple[int, dict, int]:
        best = 0
        witnesses: dict[tuple, tuple[Dfa, Dfa]] = {}
        evaluated = 0
        for multiset in shard:
            letters = [candidates[i] for i in multiset]
            k_trans = tuple(s for s, _ in letters)
            l_trans = tuple(t for _, t in letters)
            probe_K = Dfa(m, names, k_trans, frozenset([1]))
            probe_L = Dfa(n, names, l_trans, frozenset([1]))
            reach = _reachable_subset_count(probe_K, probe_L)
            if reach < best:
                continue  # cannot attain the current maximum
            for FK in left_finals:
                K = Dfa(m, names, k_trans, FK)
                if state_complexity(K) != m:
                    continue
                for FL in right_finals:
                    L = Dfa(n, names, l_trans, FL)
                    if state_complexity(L) != n:
                        continue
                    evaluated += 1
                    kappa = shuffle_state_complexity(K, L)
                    if kappa > best:
                        best = kappa
                        witnesses = {}
                    if kappa == best:
                        key = pair_canonical_key(K, L)
                        witnesses.setdefault(key, (K, L))
                    if stop_at_bound and best >= bound:
                        return best, witnesses, evaluated
        return best, witnesses, evaluated

    if workers <= 1:
        shards = [multisets]
    else:
        shards = [multisets[i::workers] for i in range(workers)]
    if len(shards) == 1:
        results = [evaluate_shard(shards[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(shards)) as pool:
            results = list(pool.map(evaluate_shard, shards))

    maximum = max(r[0] for r in results)
    evaluated = sum(r[2] for r in results)
    merged: dict[tuple, tuple[Dfa, Dfa]] = {}
    for best, wits, _ in results:
        if best == maximum:
            merged.update(wits)
    # regroup the strictly-deduplicated witnesses under the requested
    # convention; the representative is the one with the least strict key
    classes: dict[tuple, tuple] = {}
    for strict_key in sorted(merged):
        K, L = merged[strict_key]
        relaxed = pair_canonical_key(
            K, L, allow_swap=dedup_swap, ignore_finals=dedup_finals
        )
        classes.setdefault(relaxed, strict_key)
    pairs = [merged[classes[key]] for key in sorted(classes)][:result_cap]
    return SearchResult(maximum, bound, maximum >= bound, pairs, evaluated)


def min_witness_alphabet(
    m: int,
    n: int,
    k_range,
    *,
    force: bool = False,
    workers: int = 1,
) -> int | None:
    """Smallest letter count in k_range whose best pair meets the bound,
    or None. Values below the proven alphabet lower bound are skipped
    without search."""
    from .shuffle import min_alphabet_lower_bound

    lower = min_alphabet_lower_bound(m, n)
    for k in k_range:
        if k < lower:
            continue
        result = max_shuffle_complexity(
            m, n, k, force=force, workers=workers, stop_at_bound=True
        )
        if result.met:
            return k
    return None


def count_nonisomorphic_witness_right_dfas(
    m: int,
    n: int,
    k: int,
    *,
    ignore_finals: bool = True,
    force: bool = False,
    workers: int = 1,
) -> int:
    """Number of canonically distinct right-hand DFAs in bound-meeting
    pairs, after pair-orientation normalization. ignore_finals (the
    default, matching the relaxation under which the 2x3 count exceeds 60)
    makes right DFAs differing only in final sets count once."""
    result = max_shuffle_complexity(
        m, n, k, result_cap=10**6, force=force, workers=workers,
        dedup_swap=True, dedup_finals=ignore_finals,
    )
    if not result.met:
        return 0
    keys = {
        right_dfa_canonical_key(L, ignore_finals=ignore_finals)
        for _, L in result.witnesses
    }
    return len(keys)
