import math

import numpy as np
import pytest

from occamlab.core import (
    DnfFormula,
    ExceptionWrapped,
    FiniteDistribution,
    LabeledSample,
    Monomial,
    Oracle,
    ThresholdCircuit,
    all_examples,
    random_monomial,
)
from occamlab.circuits import random_circuit
from occamlab.errors import InfeasibleError, StageFailure
from occamlab.learners import PacLearner, circuit_learner, standard_learner
from occamlab.reductions import (
    MAJ3,
    exception_handle,
    find_epsilon0,
    maj3_kdnf,
    maj3_threshold,
    reconstruct_theorem2,
    reconstruct_theorem3,
    theorem2_occam,
    theorem3_occam,
)


def concept(rep, n):
    return {x for x in all_examples(n) if rep.accepts(x)}


def vote(reps, x):
    return sum(r.accepts(x) for r in reps) >= 2


def random_sample(target, n, m, seed):
    dist = FiniteDistribution.uniform(all_examples(n))
    return Oracle(dist, target, seed=seed).draw(m)


def random_dnf(n, width, terms, rng):
    return DnfFormula(n, tuple(random_monomial(n, rng, width) for _ in range(terms)))


class TestExceptionHandle:
    def test_flip_removes_point(self):
        rep = exception_handle(Monomial.from_literals(2, [1]), "11")
        assert concept(rep, 2) == {"10"}

    def test_flip_on_always_true(self):
        rep = exception_handle(Monomial.empty(2), "00")
        assert concept(rep, 2) == {"01", "10", "11"}

    @pytest.mark.parametrize("seed", range(20))
    def test_involution(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 11))
        base = random_monomial(n, rng)
        x = "".join(rng.choice(["0", "1"], size=n))
        twice = exception_handle(exception_handle(base, x), x)
        assert concept(twice, n) == concept(base, n)
        assert twice.exceptions == ()

    def test_other_points_unchanged(self):
        base = Monomial.from_literals(3, [1, -3])
        rep = exception_handle(base, "010")
        assert concept(rep, 3) ^ concept(base, 3) == {"010"}

    def test_length_linear_in_exception_count(self):
        base = Monomial.from_literals(6, [2])
        rep, lengths = base, [base.length_bits()]
        for x in all_examples(6)[:10]:
            rep = exception_handle(rep, x)
            lengths.append(rep.length_bits())
        steps = {b - a for a, b in zip(lengths[1:], lengths[2:])}
        assert len(steps) == 1

    def test_alphabet_checked(self):
        with pytest.raises(ValueError):
            exception_handle(Monomial.empty(2), "0a")


class TestMaj3Threshold:
    def test_unanimous(self):
        r = ThresholdCircuit.single(3, (1,), 1, (1,))
        out = maj3_threshold(r, r, r)
        assert concept(out, 3) == concept(r, 3)

    def test_three_variables(self):
        rs = [ThresholdCircuit.single(3, (1,), 1, (i,)) for i in (1, 2, 3)]
        out = maj3_threshold(*rs)
        assert concept(out, 3) == {"011", "101", "110", "111"}
        last = out.gates[-1]
        assert last.weights == (1, 1, 1) and last.threshold == 2

    def test_random_triples(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            rs = [random_circuit(4, rng) for _ in range(3)]
            out = maj3_threshold(*rs)
            assert all(out.accepts(x) == vote(rs, x) for x in all_examples(4))
            assert out.length_bits() <= 2 * sum(r.length_bits() for r in rs)

    def test_mismatched_n(self):
        with pytest.raises(ValueError):
            maj3_threshold(ThresholdCircuit.single(2, (1,), 1, (1,)),
                           ThresholdCircuit.single(3, (1,), 1, (1,)),
                           ThresholdCircuit.single(3, (1,), 1, (1,)))


class TestMaj3Dnf:
    def test_pairwise_terms(self):
        hs = [Monomial.from_literals(3, [i]) for i in (1, 2, 3)]
        out = maj3_kdnf(*hs)
        got = {t.literals for t in out.terms}
        assert got == {frozenset({1, 2}), frozenset({2, 3}), frozenset({1, 3})}
        assert out.width == 2

    def test_unanimous(self):
        h = DnfFormula.from_literal_lists(4, [[1, -2], [3]])
        out = maj3_kdnf(h, h, h)
        assert concept(out, 4) == concept(h, 4)

    def test_random_two_dnfs(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            hs = [random_dnf(5, 2, int(rng.integers(1, 4)), rng) for _ in range(3)]
            out = maj3_kdnf(*hs)
            assert out.width <= 4
            assert all(out.accepts(x) == vote(hs, x) for x in all_examples(5))


class TestEpsilon0:
    def test_inverse_epsilon_meets_square_root(self):
        for m in (16, 100, 512, 10 ** 4):
            eps0 = find_epsilon0(lambda n, s, e, g: 1 / e, m, 1, 1, 0.1)
            assert eps0 == pytest.approx(m ** -0.5, rel=1e-8)

    def test_general_exponent(self):
        eps0 = find_epsilon0(lambda n, s, e, g: e ** -2, 1000, 1, 1, 0.1)
        assert eps0 == pytest.approx(1000 ** (-1 / 3), rel=1e-8)

    def test_no_intersection(self):
        with pytest.raises(InfeasibleError):
            find_epsilon0(lambda n, s, e, g: 10.0, 5, 1, 1, 0.1)
        with pytest.raises(InfeasibleError):
            find_epsilon0(None, 5, 1, 1, 0.1)


class TestExceptionConstruction:
    def test_standard_learner_compresses(self):
        n, m = 6, 512
        target = random_monomial(n, np.random.default_rng(1), 3)
        smp = random_sample(target, n, m, seed=1)
        learner = standard_learner(n)
        run = theorem2_occam(learner, smp, n, gamma=0.1, seed=7)
        rep, code = run
        assert run.consistent and smp.consistent_with(rep)
        assert len(code) < m
        back = reconstruct_theorem2(code, learner, target)
        assert concept(back, n) == concept(rep, n)

    @pytest.mark.parametrize("seed", range(10))
    def test_noisy_sample_is_repaired(self, seed):
        rng = np.random.default_rng(seed)
        n = 5
        items = [("".join(rng.choice(["0", "1"], size=n)), bool(rng.integers(0, 2)))
                 for _ in range(64)]
        table = dict(items)
        smp = LabeledSample.from_pairs((x, table[x]) for x, _ in items)
        learner = PacLearner("inv", "monomial", standard_learner(n).learn,
                             lambda n_, s, e, g: 1 / e, order_invariant=True)
        run = theorem2_occam(learner, smp, n, seed=seed)
        assert run.consistent
        assert isinstance(run.rep, ExceptionWrapped)
        assert run.epsilon == pytest.approx(64 ** -0.5, rel=1e-8)


class TestMajorityConstruction:
    def test_threshold_circuits(self):
        n, m = 4, 64
        rng = np.random.default_rng(0)
        target = random_circuit(n, rng, max_gates=2)
        learner = circuit_learner(n)
        failures = 0
        for seed in range(5):
            smp = random_sample(target, n, m, seed)
            try:
                run = theorem3_occam(learner, MAJ3["threshold"], smp, n, gamma=0.3, seed=seed)
            except StageFailure:
                failures += 1
                continue
            rep, code = run
            assert run.consistent
            e1, e2 = run.exception_sets
            assert not set(e1) & set(e2)
            assert len(set(e2)) < math.sqrt(m)
            assert run.compression > 1
            assert len(code) <= code.bound
            back = reconstruct_theorem3(code, learner, MAJ3["threshold"], target)
            assert concept(back, n) == concept(rep, n)
        assert failures <= 1

    def test_parameters(self):
        n, m = 4, 100
        target = ThresholdCircuit.single(n, (1, 1), 2, (1, 2))
        smp = random_sample(target, n, m, 3)
        run = theorem3_occam(circuit_learner(n), maj3_threshold, smp, n, gamma=0.3, seed=3,
                             retries=2)
        assert run.epsilon == pytest.approx(1 / (2 * math.sqrt(m)))
        assert run.delta == pytest.approx(0.1)
        assert len(run.fed) == 3

    def test_stage_failure_surfaces(self):
        n = 3
        xs = all_examples(n)
        smp = LabeledSample.from_pairs((x, x.count("1") % 2 == 1) for x in xs)
        constant = Monomial.empty(n)
        bad = PacLearner("const", "monomial", lambda smp_: constant, lambda *a: 4.0)
        with pytest.raises(StageFailure) as info:
            theorem3_occam(bad, maj3_kdnf, smp, n, retries=1)
        assert info.value.stage == 1
