import math
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from occamlab.core import LabeledSample, Monomial, all_examples, point_to_example, random_monomial
from occamlab.errors import InfeasibleError, LengthError, NotRealizableError
from occamlab.learners import (
    LEARNERS,
    consistent_bruteforce,
    greedy_merge,
    greedy_superstring,
    haussler_cover,
    haussler_monomial_learn,
    standard_monomial_learn,
)


def sample(pos=(), neg=()):
    return LabeledSample.from_pairs([(x, True) for x in pos] + [(x, False) for x in neg])


def random_instance(seed, n_max=10, m_max=40):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, n_max + 1))
    target = random_monomial(n, rng)
    m = int(rng.integers(1, m_max + 1))
    points = rng.integers(0, 1 << n, size=m)
    # bias towards positives so the positive-driven learners have something to do
    for j in range(0, m, 2):
        p = int(rng.integers(0, 1 << n))
        for i in range(n):
            s = target.status(i + 1)
            if s:
                p = p | (1 << i) if s == 1 else p & ~(1 << i)
        points[j] = p
    examples = [point_to_example(int(p), n) for p in points]
    return n, target, LabeledSample.labeled_by(target, examples)


class TestStandard:
    def test_deletion_trace(self):
        assert standard_monomial_learn(sample(["100", "101"]), 3) == Monomial.from_literals(3, [1, -2])

    def test_opposite_positives_delete_everything(self):
        assert standard_monomial_learn(sample(["00", "11"]), 2) == Monomial.empty(2)

    def test_no_positives_keeps_all_literals(self):
        assert standard_monomial_learn(sample(neg=["01"]), 2) == Monomial.all_literals(2)

    def test_length_mismatch(self):
        with pytest.raises(LengthError):
            standard_monomial_learn(sample(["101"]), 2)

    @pytest.mark.parametrize("seed", range(500))
    def test_containment_and_consistency(self, seed):
        n, target, smp = random_instance(seed)
        out = standard_monomial_learn(smp, n)
        assert out.literals >= target.literals
        assert smp.consistent_with(out)


class TestSetCoverLearner:
    def test_single_candidate(self):
        out = haussler_monomial_learn(sample(["100", "111"], ["000", "011"]), 3)
        assert out == Monomial.from_literals(3, [1])

    def test_no_negatives(self):
        assert haussler_monomial_learn(sample(["10"]), 2) == Monomial.empty(2)

    def test_needs_two_literals(self):
        out = haussler_monomial_learn(sample(["11"], ["00", "01", "10"]), 2)
        assert out == Monomial.from_literals(2, [1, 2])
        assert consistent_bruteforce(sample(["11"], ["00", "01", "10"]), "monomial", 2).size == 2

    def test_unrealizable(self):
        with pytest.raises(NotRealizableError):
            haussler_monomial_learn(sample(["01", "10"], ["11"]), 2)

    @pytest.mark.parametrize("seed", range(500))
    def test_cover_size_and_consistency(self, seed):
        n, target, smp = random_instance(seed)
        out = haussler_monomial_learn(smp, n)
        assert smp.consistent_with(out)
        cover = haussler_cover(smp, n)
        negatives = len(set(smp.negatives))
        if negatives:
            assert len(cover) <= target.size * (1 + math.log(negatives))
        else:
            assert cover == []

    def test_complementary_cover_without_positives(self):
        smp = sample(neg=["00", "10", "01"])
        out = haussler_monomial_learn(smp, 2)
        assert smp.consistent_with(out)


class TestBruteforce:
    def test_full_truth_table(self):
        xs = all_examples(2)
        target = Monomial.from_literals(2, [1])
        assert consistent_bruteforce(LabeledSample.labeled_by(target, xs), "monomial", 2) == target

    def test_unrealizable_returns_none(self):
        assert consistent_bruteforce(sample(["01", "10"], ["11"]), "monomial", 2) is None

    def test_empty_sample(self):
        assert consistent_bruteforce(LabeledSample(()), "monomial", 3) == Monomial.empty(3)

    def test_enumeration_limits(self):
        with pytest.raises(InfeasibleError):
            consistent_bruteforce(LabeledSample(()), "monomial", 13)
        with pytest.raises(InfeasibleError):
            consistent_bruteforce(LabeledSample(()), "threshold", 5)

    def test_circuit_finds_xor(self):
        xs = all_examples(2)
        labels = [x.count("1") == 1 for x in xs]
        rep = consistent_bruteforce(LabeledSample.from_pairs(zip(xs, labels)), "threshold", 2)
        assert [rep.accepts(x) for x in xs] == labels
        assert len(rep.gates) == 2

    @pytest.mark.parametrize("seed", range(40))
    def test_learners_agree_with_bruteforce_on_consistency(self, seed):
        n, target, smp = random_instance(seed, n_max=6)
        best = consistent_bruteforce(smp, "monomial", n)
        assert best is not None and smp.consistent_with(best)
        assert best.size <= target.size


def _merge_in_order(strings):
    from occamlab.kernels import max_overlap
    out = strings[0]
    for s in strings[1:]:
        if s in out:
            continue
        out += s[max_overlap(out, s):]
    return out


def optimal_superstring_length(strings):
    return min(len(_merge_in_order(list(p))) for p in permutations(strings))


class TestGreedy:
    @pytest.mark.parametrize("inp,want", [({"abc", "bcd"}, "abcd"), ({"ab"}, "ab"),
                                          ({"ata", "tat"}, "atat")])
    def test_examples(self, inp, want):
        assert greedy_merge(inp) == want

    def test_empty_input(self):
        with pytest.raises(ValueError):
            greedy_merge(set())

    def test_substrings_removed_first(self):
        assert greedy_merge({"abcd", "bc", "cde"}) == "abcde"

    def test_superstring_rep(self):
        rep = greedy_superstring({"ACG", "CGT"}, n=3)
        assert rep.text == "ACGT"
        assert rep.accepts("CGT") and not rep.accepts("GTA")

    @given(st.lists(st.text("ab", min_size=1, max_size=5), min_size=1, max_size=7))
    @settings(max_examples=150, deadline=None)
    def test_within_four_times_optimum(self, strings):
        merged = greedy_merge(strings)
        for s in strings:
            assert s in merged
        assert len(merged) <= 4 * optimal_superstring_length(sorted(set(strings)))

    @given(st.lists(st.text("ACGT", min_size=1, max_size=6), min_size=1, max_size=10))
    @settings(max_examples=100, deadline=None)
    def test_order_independent(self, strings):
        assert greedy_merge(strings) == greedy_merge(list(reversed(strings)))


def test_registry_systems():
    for (system, name), factory in LEARNERS.items():
        learner = factory(3)
        assert learner.system == system
        assert learner.draw_count(3, 1, 0.1, 0.1) >= 1
