import json
import math

import numpy as np
import pytest

from occamlab.bounds import finite_class_bound
from occamlab.coding import monomial_code_bound, superstring_code_bound
from occamlab.core import Monomial, all_examples
from occamlab.errors import InfeasibleError
from occamlab.harness import (
    ExperimentConfig,
    application1_experiment,
    application2_experiment,
    binomial_slack,
    kc_sample_size,
    make_support,
    pac_verify,
    resolve_sample_size,
    superstring_ratio,
    vc_dim_bruteforce,
)


class TestVcDimension:
    # frozen from an exhaustive shattering run over the full domain
    @pytest.mark.parametrize("n,want", [(1, 2), (2, 2), (3, 3)])
    def test_monomials(self, n, want):
        assert vc_dim_bruteforce("monomial", n) == want

    def test_single_concept(self):
        assert vc_dim_bruteforce("monomial", 2, concepts=[{"01", "10"}]) == 0

    def test_restricted_domain(self):
        assert vc_dim_bruteforce("monomial", 3, domain=["100", "010"]) == 2

    def test_domain_limit(self):
        with pytest.raises(InfeasibleError):
            vc_dim_bruteforce("monomial", 5)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            ExperimentConfig(trials=0)
        with pytest.raises(ValueError):
            ExperimentConfig(epsilon=1.0)
        with pytest.raises(ValueError):
            ExperimentConfig(bound_source="fixed")
        with pytest.raises(ValueError):
            ExperimentConfig(bound_source="guess")
        with pytest.raises(ValueError):
            ExperimentConfig.from_dict({"colour": "red"})

    def test_json_round_trip(self, tmp_path):
        cfg = ExperimentConfig(n=4, target="1-0-", support="random:8", trials=3)
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg.to_dict()))
        assert ExperimentConfig.from_json(path) == cfg

    def test_bound_sources(self):
        base = dict(n=5, epsilon=0.2, delta=0.2)
        assert resolve_sample_size(ExperimentConfig(**base)) == finite_class_bound(3 ** 5 + 1, 0.2, 0.2)
        assert resolve_sample_size(ExperimentConfig(bound_source="fixed", m=7, **base)) == 7
        assert resolve_sample_size(ExperimentConfig(bound_source="vc", **base)) > 0
        assert resolve_sample_size(ExperimentConfig(bound_source="length", **base)) > 0

    def test_supports(self):
        rng = np.random.default_rng(0)
        target = Monomial.from_pattern("1-0")
        assert make_support("all", target, 3, rng) == all_examples(3)
        mixed = make_support("mixed:20", target, 3, rng)
        assert any(target.accepts(x) for x in mixed)
        with pytest.raises(ValueError):
            make_support("some:3", target, 3, rng)


class TestPacVerify:
    def test_cheating_learner_is_perfect(self):
        rate, results = pac_verify(ExperimentConfig(learner="cheat", n=4, trials=20))
        assert rate == 1.0
        assert all(r.error == 0 for r in results)

    def test_standard_learner_meets_guarantee(self):
        cfg = ExperimentConfig(n=5, epsilon=0.2, delta=0.2, trials=200, seed=1)
        rate, results = pac_verify(cfg)
        assert rate >= 0.8
        assert all(r.success == (r.error <= 0.2) for r in results)

    def test_one_example_is_not_enough(self):
        cfg = ExperimentConfig(n=5, epsilon=0.05, delta=0.2, trials=200, seed=1,
                               bound_source="fixed", m=1)
        rate, _ = pac_verify(cfg)
        assert rate < 0.8

    def test_reproducible_and_thread_independent(self):
        cfg = ExperimentConfig(n=6, epsilon=0.1, delta=0.1, trials=30, seed=9,
                               support="random:40")
        a = pac_verify(cfg)
        b = pac_verify(cfg)
        cfg.threads = 4
        c = pac_verify(cfg)
        assert a == b == c

    def test_threshold_system(self):
        cfg = ExperimentConfig(system="threshold", learner="bruteforce", n=3, trials=10,
                               epsilon=0.2, delta=0.2)
        rate, _ = pac_verify(cfg)
        assert rate >= 0.8

    def test_slack(self):
        assert binomial_slack(0.1, 100) == pytest.approx(0.09)


class TestApplication1:
    def test_genome_ratio(self):
        rep = application1_experiment(3 * 10 ** 9, 500, bound_only=True)
        assert 6.5 <= rep["ratio_formula"] <= 7.5
        assert 6.5 <= rep["ratio_codec"] <= 7.5

    def test_fixed_point(self):
        # 2 log2 64 + log2 16 = 16
        assert superstring_ratio(64, 16) == pytest.approx(1.0)

    def test_desk_instance(self):
        rep = application1_experiment(20000, 200, seed=3)
        assert rep["round_trip"] and rep["consistent"]
        assert rep["p_kc"] <= superstring_code_bound(rep["groups"], 20000, 200)
        assert rep["groups"] <= rep["group_limit"]
        assert rep["ratio"] > 1

    def test_desk_limit(self):
        with pytest.raises(InfeasibleError):
            application1_experiment(10 ** 6, 100)


class TestApplication2:
    def test_sixteen_variables(self):
        rep = application2_experiment(16, 12, trials=20, seed=0)
        assert rep["p_kc"] == 7 and rep["p_len"] == 32
        assert rep["m_kc"] < rep["m_len"]

    def test_no_free_variables(self):
        assert monomial_code_bound(0) == 0
        assert kc_sample_size(0, 0.1, 0.1) == math.ceil(20 * math.log(10))

    def test_target_size_checked(self):
        with pytest.raises(ValueError):
            application2_experiment(4, 5)
