#!/usr/bin/env python3
"""The other half of tightness, and finding witnesses from scratch.

Reaching many subsets is not enough — they must also be pairwise
inequivalent. If every NFA state is uniquely distinguishable (some word is
accepted from it and from no other state), all subset states separate.
Unique distinguishability propagates backwards along unique
in-transitions, so for the three-letter witness family the whole product
state set is covered by a closure from the single accepting state.

The second part re-discovers the four-letter 2x2 witness pair by
exhaustive search and confirms that it is unique up to isomorphism (with
operand swap allowed and final sets not distinguished).
"""

from shufflesc import (
    bound_f,
    build_shuffle_nfa,
    max_shuffle_complexity,
    shuffle_state_complexity,
    ternary_witness,
    unique_in_subgraph,
    uniquely_distinguishable,
)


def main():
    print("unique in-transitions of the three-letter witness")
    print("-" * 55)
    for m, n in [(2, 2), (3, 3), (4, 5), (6, 6)]:
        sh = build_shuffle_nfa(*ternary_witness(m, n))
        edges = unique_in_subgraph(sh.nfa)
        closed = uniquely_distinguishable(sh.nfa)
        print(
            f"  {m}x{n}: {len(edges)} unique in-edges, closure covers "
            f"{len(closed)}/{m * n} states"
        )

    sh = build_shuffle_nfa(*ternary_witness(4, 5))
    print()
    print("a few edges of the 4x5 subgraph:")
    for e in unique_in_subgraph(sh.nfa)[:6]:
        print(
            f"    {sh.state_pair(e.src)} --{e.letter}--> {sh.state_pair(e.dst)}"
        )

    print()
    print("exhaustive witness search at 2x2")
    print("-" * 55)
    for k in (2, 3, 4):
        result = max_shuffle_complexity(2, 2, k)
        mark = "meets the bound" if result.met else "falls short"
        print(
            f"  {k} letters: max kappa = {result.maximum} "
            f"(bound {result.bound}, {mark}; "
            f"{result.candidates_evaluated:,} candidates)"
        )

    result = max_shuffle_complexity(2, 2, 4)
    K, L = result.witnesses[0]
    print()
    print(f"  the four-letter witness is unique up to isomorphism "
          f"({len(result.witnesses)} class)")
    print(f"  re-verification: kappa = {shuffle_state_complexity(K, L)} "
          f"= f(2,2) = {bound_f(2, 2)}")


if __name__ == "__main__":
    main()
