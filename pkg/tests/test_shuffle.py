import pytest
from hypothesis import given, settings, strategies as st

from shufflesc.automata import Dfa, Transformation, determinize, state_complexity
from shufflesc.shuffle import (
    GridSizeError,
    ProductSubset,
    bound_f,
    build_shuffle_nfa,
    count_valid_subsets,
    ideal_bound,
    is_valid,
    min_alphabet_lower_bound,
    okhotin_witness,
    projections,
    shuffle_state_complexity,
    sigma_star_dfa,
)

T = Transformation


def witness_2x2_pair():
    K = Dfa(2, ("a", "b", "c", "d"),
            (T((2, 2)), T((2, 1)), T((2, 1)), T((1, 1))), frozenset([2]))
    L = Dfa(2, ("a", "b", "c", "d"),
            (T((2, 1)), T((1, 1)), T((2, 1)), T((2, 1))), frozenset([2]))
    return K, L


def witness_2x3_pair():
    K = Dfa(2, tuple("abcdef"),
            (T((1, 2)), T((2, 1)), T((2, 1)), T((1, 1)), T((2, 2)), T((2, 1))),
            frozenset([2]))
    L = Dfa(3, tuple("abcdef"),
            (T((2, 2, 3)), T((2, 1, 3)), T((1, 1, 1)),
             T((3, 1, 2)), T((3, 1, 2)), T((3, 1, 1))),
            frozenset([1]))
    return K, L


@st.composite
def dfa_pair_strategy(draw, max_states=4):
    m = draw(st.integers(1, max_states))
    n = draw(st.integers(1, max_states))
    k = draw(st.integers(1, 3))
    letters = tuple("abc"[:k])

    def one(size):
        transitions = tuple(
            T(tuple(draw(st.integers(1, size)) for _ in range(size)))
            for _ in range(k)
        )
        finals = frozenset(q for q in range(1, size + 1) if draw(st.booleans()))
        return Dfa(size, letters, transitions, finals)

    return one(m), one(n)


class TestProductSubset:
    def test_index_layout_is_normative(self):
        # (p,q) occupies bit (p-1)*n + (q-1)
        s = ProductSubset.from_pairs(3, 4, [(2, 3)])
        assert s.bits == 1 << (1 * 4 + 2)

    def test_pairs_round_trip(self):
        pairs = [(1, 1), (2, 3), (3, 1)]
        s = ProductSubset.from_pairs(3, 3, pairs)
        assert sorted(s.pairs()) == sorted(pairs)
        assert len(s) == 3
        assert (2, 3) in s and (3, 3) not in s

    def test_out_of_grid_rejected(self):
        with pytest.raises(ValueError):
            ProductSubset.from_pairs(2, 2, [(3, 1)])


class TestValidity:
    def test_initial_valid(self):
        assert is_valid(ProductSubset.from_pairs(2, 2, [(1, 1)]))

    def test_cst_pair_valid(self):
        assert is_valid(ProductSubset.from_pairs(3, 3, [(2, 1), (1, 3)]))

    def test_off_axis_invalid(self):
        assert not is_valid(ProductSubset.from_pairs(2, 2, [(2, 2)]))


class TestBound:
    @pytest.mark.parametrize("m,n,value", [
        (1, 1, 1), (1, 2, 2), (2, 2, 10), (2, 3, 44),
    ])
    def test_paper_values(self, m, n, value):
        assert bound_f(m, n) == value

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
    def test_one_row_case(self, n):
        assert bound_f(1, n) == 2 ** (n - 1)

    def test_six_six_exact(self):
        assert bound_f(6, 6) == 2**35 + 2**25 * 31 * 31

    def test_symmetric(self):
        for m in range(1, 6):
            for n in range(1, 6):
                assert bound_f(m, n) == bound_f(n, m)

    @pytest.mark.parametrize("m,n", [
        (2, 2), (2, 3), (2, 4), (3, 3), (2, 5), (3, 4), (2, 6),
        (3, 5), (2, 7), (4, 4), (2, 8),
    ])
    def test_counting_identity(self, m, n):
        assert count_valid_subsets(m, n) == bound_f(m, n)

    def test_count_examples(self):
        assert count_valid_subsets(2, 2) == 10
        assert count_valid_subsets(3, 3) == 400
        assert count_valid_subsets(2, 4) == 184

    def test_count_guard(self):
        with pytest.raises(GridSizeError):
            count_valid_subsets(5, 6)


class TestShuffleNfa:
    def test_one_state_all_accepting(self):
        d = Dfa(1, ("a",), (T((1,)),), frozenset([1]))
        sh = build_shuffle_nfa(d, d)
        assert sh.nfa.state_count == 1
        assert sh.nfa.accepts([])
        assert sh.nfa.accepts(["a", "a"])

    def test_transition_law(self):
        K, L = witness_2x2_pair()
        sh = build_shuffle_nfa(K, L)
        # delta((1,1), a) = {(delta_K(1,a), 1), (1, delta_L(1,a))} = {(2,1),(1,2)}
        succ = sh.nfa.step(frozenset([sh.state_id(1, 1)]), "a")
        assert {sh.state_pair(s) for s in succ} == {(2, 1), (1, 2)}

    def test_successor_count_one_or_two(self):
        K, L = witness_2x3_pair()
        sh = build_shuffle_nfa(K, L)
        for row in sh.nfa.transitions:
            for succs in row:
                assert 1 <= len(succs) <= 2

    def test_alphabet_mismatch(self):
        K = Dfa(1, ("a",), (T((1,)),), frozenset([1]))
        L = Dfa(1, ("b",), (T((1,)),), frozenset([1]))
        with pytest.raises(ValueError):
            build_shuffle_nfa(K, L)


class TestShuffleComplexity:
    def test_2x2_witness_meets_bound(self):
        assert shuffle_state_complexity(*witness_2x2_pair()) == 10

    def test_example_two_three(self):
        assert shuffle_state_complexity(*witness_2x3_pair()) == 44

    def test_empty_left_language(self):
        K = Dfa(2, ("a",), (T((2, 1)),), frozenset())
        L = Dfa(2, ("a",), (T((2, 1)),), frozenset([2]))
        assert shuffle_state_complexity(K, L) == 1

    def test_2x2_witness_subset_automaton_has_ten_reachable(self):
        sh = build_shuffle_nfa(*witness_2x2_pair())
        det, subsets = determinize(sh.nfa)
        assert len(subsets) >= 10


class TestProjections:
    def test_initial(self):
        assert projections(ProductSubset.from_pairs(2, 2, [(1, 1)])) == (
            frozenset([1]), frozenset([1]),
        )

    def test_empty(self):
        assert projections(ProductSubset(2, 2, 0)) == (frozenset(), frozenset())

    def test_full_row_projection(self):
        # columns of the 9-column orbit table over Q_5 cover every row
        cols = [{1, 2}, {2, 3}, {1, 3}, {1, 4}, {2, 4}, {3, 4},
                {1, 5}, {2, 5}, {3, 5}]
        pairs = [(i, j) for j, col in enumerate(cols, start=1) for i in col]
        rows, _ = projections(ProductSubset.from_pairs(5, 9, pairs))
        assert rows == frozenset([1, 2, 3, 4, 5])


class TestOkhotin:
    def test_n3_language(self):
        d = okhotin_witness(3)
        assert d.alphabet == ("a1",)
        assert state_complexity(d) == 3
        assert d.accepts(["a1", "a1"])
        assert d.accepts(["a1", "a1", "a1"])
        assert not d.accepts(["a1"])
        assert not d.accepts([])

    def test_first_repeat_accepts(self):
        d = okhotin_witness(5)
        assert d.accepts(["a2", "a3", "a2"])
        assert not d.accepts(["a2", "a3", "a1"])

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_ideal_bound_met(self, n):
        L = okhotin_witness(n)
        kappa = shuffle_state_complexity(sigma_star_dfa(L.alphabet), L)
        assert kappa == ideal_bound(n) == 2 ** (n - 2) + 1

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_witness_minimal(self, n):
        assert state_complexity(okhotin_witness(n)) == n

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            okhotin_witness(2)
        with pytest.raises(ValueError):
            ideal_bound(2)


class TestAlphabetLowerBound:
    def test_two_two_exception(self):
        assert min_alphabet_lower_bound(2, 2) == 4

    def test_formula_values(self):
        assert min_alphabet_lower_bound(2, 3) == 5
        assert min_alphabet_lower_bound(3, 3) == 8


class TestRandomPairProperties:
    @settings(max_examples=120, deadline=None)
    @given(dfa_pair_strategy())
    def test_reachable_subsets_valid_and_monotone(self, pair):
        K, L = pair
        sh = build_shuffle_nfa(K, L)
        m, n = sh.m, sh.n
        det, subsets = determinize(sh.nfa)
        for sub in subsets:
            pairs = [sh.state_pair(s) for s in sub]
            S = ProductSubset.from_pairs(m, n, pairs)
            assert is_valid(S)
            rows, cols = projections(S)
            for x in sh.nfa.alphabet:
                succ = sh.nfa.step(sub, x)
                S2 = ProductSubset.from_pairs(
                    m, n, [sh.state_pair(s) for s in succ]
                )
                rows2, cols2 = projections(S2)
                assert rows <= rows2 and cols <= cols2

    @settings(max_examples=60, deadline=None)
    @given(dfa_pair_strategy())
    def test_bound_dominance_and_commutativity(self, pair):
        K, L = pair
        kappa = shuffle_state_complexity(K, L)
        assert kappa <= bound_f(state_complexity(K), state_complexity(L))
        assert kappa == shuffle_state_complexity(L, K)
