"""Empirical PAC checks, brute-force VC dimension and the two application experiments.

Every trial derives its random streams from ``(seed, trial index)``, so a run
is reproducible byte for byte and trials can execute on a thread pool without
changing the report. Errors are always exact sums over a finite support.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .bounds import (
    INFINITY,
    PolynomialForm,
    constant_p,
    finite_class_bound,
    kc_bound,
    length_based_bound,
    vc_upper_bound,
)
from .circuits import MAX_TABLE_INPUTS, circuit_table
from .coding import (
    decode,
    encode_superstring_given_target,
    monomial_code_bound,
    superstring_code_bound,
    superstring_group_cost,
    superstring_group_limit,
)
from .core import (
    DNA,
    FiniteDistribution,
    Monomial,
    Oracle,
    SuperstringRep,
    all_examples,
    example_to_point,
    make_rng,
    random_monomial,
    symmetric_difference_error,
)
from .errors import InfeasibleError, OccamError
from .learners import LEARNERS, cheating_learner, greedy_superstring

BOUND_SOURCES = ("vc", "finite", "length", "kc", "fixed")
MAX_VC_DOMAIN = 16
EXACT_SUPPORT_LIMIT = 16


def binomial_slack(p: float, trials: int, sigmas: float = 3.0) -> float:
    return sigmas * math.sqrt(p * (1 - p) / trials)


# -- configuration -------------------------------------------------------------


@dataclass
class ExperimentConfig:
    """One PAC-verification experiment.

    ``support`` is ``"all"`` (every example), ``"random:K"`` (K random
    examples), ``"mixed:K"`` (K/2 positives of the target plus K/2 random
    examples) or an explicit list of examples. The distribution is uniform on
    the distinct support unless ``probabilities`` is given. ``target`` is a
    monomial pattern such as ``"1-0"``; ``None`` draws a fresh random target
    per trial (with exactly ``target_size`` literals when that is set).
    """

    system: str = "monomial"
    learner: str = "standard"
    bound_source: str = "finite"
    n: int = 5
    epsilon: float = 0.1
    delta: float = 0.1
    trials: int = 100
    seed: int = 0
    target: str | None = None
    target_size: int | None = None
    support: object = "all"
    probabilities: list | None = None
    m: int | None = None
    threads: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not (0 < self.epsilon < 1 and 0 < self.delta < 1):
            raise ValueError("epsilon and delta must lie in (0, 1)")
        if self.bound_source not in BOUND_SOURCES:
            raise ValueError(f"bound source must be one of {', '.join(BOUND_SOURCES)}")
        if self.bound_source == "fixed" and (self.m is None or self.m < 1):
            raise ValueError("a fixed bound source needs m >= 1")
        if self.target_size is not None and not 0 <= self.target_size <= self.n:
            raise ValueError(f"target size {self.target_size} outside [0, {self.n}]")
        if (self.system, self.learner) not in LEARNERS and self.learner != "cheat":
            raise ValueError(f"no learner {self.learner!r} for system {self.system!r}")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class TrialResult:
    index: int
    m: int
    error: float
    success: bool
    code_bits: int | None = None
    wall_time: float = field(default=0.0, compare=False)

    CSV_FIELDS = ("trial", "m", "error", "success", "code_bits")

    def row(self) -> dict:
        return {"trial": self.index, "m": self.m, "error": self.error,
                "success": int(self.success), "code_bits": self.code_bits}


# -- VC dimension --------------------------------------------------------------


def _concept_masks(system, n, domain, concepts=None):
    if concepts is not None:
        index = {x: i for i, x in enumerate(domain)}
        masks = set()
        for c in concepts:
            masks.add(sum(1 << index[x] for x in c if x in index))
        return masks
    points = [example_to_point(x) for x in domain]
    if system == "monomial":
        masks = set()
        for st in np.ndindex(*(3,) * n):
            mono = Monomial.from_statuses(list(st))
            hits = mono.accepts_many(points)
            masks.add(int(sum(1 << i for i in np.flatnonzero(hits))))
        masks.add(0)  # the all-literals monomial
        return masks
    if system == "threshold":
        if n > MAX_TABLE_INPUTS:
            raise InfeasibleError(f"threshold enumeration limited to n <= {MAX_TABLE_INPUTS}")
        tts = circuit_table(n).reachable
        return {int(sum(1 << i for i, p in enumerate(points) if tt >> p & 1)) for tt in tts}
    raise InfeasibleError(f"no concept enumeration for system {system!r}")


def vc_dim_bruteforce(system: str, n: int, domain=None, concepts=None) -> int:
    """Largest subset of ``domain`` shattered by the class, by exhaustive search.

    ``concepts`` (an iterable of example sets) replaces the system's own class.
    """
    domain = all_examples(n) if domain is None else list(domain)
    if len(domain) > MAX_VC_DOMAIN:
        raise InfeasibleError(f"VC search limited to domains of at most {MAX_VC_DOMAIN} points")
    masks = _concept_masks(system, n, domain, concepts)
    return int(kernels.vc_dimension(np.array(sorted(masks), dtype=np.int64), len(domain)))


def class_size(system: str, n: int) -> int:
    if system == "monomial":
        return 3 ** n + 1
    if system == "threshold":
        return circuit_table(n).class_size
    raise InfeasibleError(f"no class size known for system {system!r}")


def _vc_dimension(system, n):
    if system == "monomial" and n > 3:
        return n  # matches the exhaustive values for n <= 3
    return vc_dim_bruteforce(system, n)


def representation_bits(system: str, n: int) -> int:
    """Length of the longest representation the length-based bound must pay for."""
    if system == "monomial":
        return 2 * n
    if system == "threshold":
        table = circuit_table(n)
        return int(table.best_len[table.reachable].max())
    raise InfeasibleError(f"no representation length known for system {system!r}")


def kc_sample_size(p: float, epsilon: float, delta: float):
    """Sample size from a hypothesis description of ``p`` bits given the target."""
    return kc_bound(PolynomialForm(0.0, constant_p(max(p, 1e-12))), None, None,
                    epsilon, delta, deterministic=True)


def resolve_sample_size(config: ExperimentConfig) -> int:
    src, n, eps, delta = config.bound_source, config.n, config.epsilon, config.delta
    if src == "fixed":
        return int(config.m)
    if src == "finite":
        return finite_class_bound(class_size(config.system, n), eps, delta)
    if src == "vc":
        return vc_upper_bound(_vc_dimension(config.system, n), eps, delta)
    if src == "length":
        return length_based_bound(representation_bits(config.system, n), eps, delta)
    if config.system != "monomial":
        raise InfeasibleError("the KC bound source is available for monomials only")
    free = n - (config.target_size if config.target_size is not None else 0)
    m = kc_sample_size(monomial_code_bound(free), eps, delta)
    if m == INFINITY:
        raise InfeasibleError("KC-based bound is infinite")
    return int(m)


# -- targets and supports ------------------------------------------------------


def _random_rows(rng, k, n):
    return rng.integers(0, 2, size=(k, n), dtype=np.int8)


def _rows_to_examples(rows):
    return ["".join("1" if b else "0" for b in row) for row in rows]


def _positives_of(target: Monomial, rows):
    rows = rows.copy()
    for i, st in enumerate(target.statuses()):
        if st == 1:
            rows[:, i] = 1
        elif st == 2:
            rows[:, i] = 0
    return rows


def make_support(spec, target, n, rng):
    if isinstance(spec, (list, tuple)):
        return list(dict.fromkeys(spec))
    if spec == "all":
        if n > EXACT_SUPPORT_LIMIT:
            raise InfeasibleError(f"full support limited to n <= {EXACT_SUPPORT_LIMIT}")
        return all_examples(n)
    kind, _, size = str(spec).partition(":")
    if kind not in ("random", "mixed") or not size.isdigit() or int(size) < 1:
        raise ValueError(f"bad support spec {spec!r}")
    k = int(size)
    if kind == "random":
        return list(dict.fromkeys(_rows_to_examples(_random_rows(rng, k, n))))
    if not isinstance(target, Monomial) or target.contradictory:
        raise ValueError("mixed supports need a satisfiable monomial target")
    pos = _rows_to_examples(_positives_of(target, _random_rows(rng, k // 2, n)))
    rest = _rows_to_examples(_random_rows(rng, k - k // 2, n))
    return list(dict.fromkeys(pos + rest))


def make_target(config: ExperimentConfig, rng):
    if config.system == "monomial":
        if config.target is not None:
            mono = Monomial.from_pattern(config.target)
            if mono.n != config.n:
                raise ValueError("target pattern length differs from n")
            return mono
        return random_monomial(config.n, rng, config.target_size)
    if config.system == "threshold":
        table = circuit_table(config.n)
        return table.witness(int(rng.choice(table.reachable)))
    raise InfeasibleError(f"no target generator for system {config.system!r}")


def _learner(config, target):
    if config.learner == "cheat":
        return cheating_learner(target, config.n)
    return LEARNERS[(config.system, config.learner)](config.n)


# -- PAC verification ----------------------------------------------------------


def run_trial(config: ExperimentConfig, index: int, m: int) -> TrialResult:
    start = time.perf_counter()
    rng = make_rng(config.seed, 2 * index)
    target = make_target(config, rng)
    support = make_support(config.support, target, config.n, rng)
    if config.probabilities is not None:
        dist = FiniteDistribution(tuple(support), config.probabilities)
    else:
        dist = FiniteDistribution.uniform(support)
    oracle = Oracle(dist, target, config.seed, 2 * index + 1)
    learner = _learner(config, target)
    try:
        hyp = learner.learn(oracle.draw(m))
        error = symmetric_difference_error(hyp, target, dist)
    except OccamError:
        error = math.nan
    return TrialResult(index, m, error, bool(error <= config.epsilon),
                       wall_time=time.perf_counter() - start)


def pac_verify(config: ExperimentConfig):
    """Success rate and per-trial results, ordered by trial index."""
    m = resolve_sample_size(config)
    indices = range(config.trials)
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(lambda i: run_trial(config, i, m), indices))
    else:
        results = [run_trial(config, i, m) for i in indices]
    rate = sum(r.success for r in results) / len(results)
    return rate, results


# -- application 1: superstrings -----------------------------------------------


DESK_LIMIT = 10 ** 5


def superstring_ratio(s: float, n: int) -> float:
    """Length-based over KC-based description size, ``n / (2 log2 s + log2 n)``."""
    return n / (2 * math.log2(s) + math.log2(n))


def covering_substrings(text: str, n: int, rng, max_gap: int | None = None):
    """Windows starting at 0 and ending at the last position, consecutive starts at
    most ``max_gap`` (default ``n // 2``) apart, so they cover ``text``."""
    gap = max(1, n // 2 if max_gap is None else max_gap)
    last = len(text) - n
    starts = [0]
    while starts[-1] < last:
        starts.append(min(last, starts[-1] + int(rng.integers(1, gap + 1))))
    return [text[p:p + n] for p in starts]


def application1_experiment(s: int, n: int, epsilon: float = 0.1, delta: float = 0.1,
                            num_samples: int | None = None, bound_only: bool = False,
                            seed: int = 0) -> dict:
    """KC-based versus length-based sample sizes for learning a superstring target."""
    if n < 1 or s < n:
        raise ValueError("need 1 <= n <= s")
    start = time.perf_counter()
    p_len = 2 * 2 * s
    report = {"mode": "bound-only" if bound_only else "desk", "s": s, "n": n,
              "epsilon": epsilon, "delta": delta}
    if bound_only:
        p_kc = p_len * (2 * math.log2(s) + math.log2(n)) / n
        p_codec = superstring_group_limit(s, n) * superstring_group_cost(s, n) + 1
        report.update(p_len=p_len, p_kc=p_kc, p_codec=p_codec,
                      ratio_formula=superstring_ratio(s, n),
                      ratio_codec=n / superstring_group_cost(s, n))
    else:
        if s > DESK_LIMIT:
            raise InfeasibleError(f"desk mode materializes at most s={DESK_LIMIT}; "
                                  "use bound-only mode")
        rng = make_rng(seed, 0)
        text = "".join(DNA[i] for i in rng.integers(0, 4, size=s))
        if num_samples is None:
            examples = covering_substrings(text, n, rng)
        else:
            starts = rng.integers(0, s - n + 1, size=num_samples)
            examples = [text[p:p + n] for p in starts]
        target = SuperstringRep(text, n)
        hyp = greedy_superstring(examples, n, DNA)
        code = encode_superstring_given_target(hyp, target, examples)
        p_kc = len(code.bits)
        report.update(
            p_len=p_len, p_kc=p_kc, examples=len(set(examples)), hypothesis_length=len(hyp.text),
            groups=code.stats["groups"], group_limit=code.stats["group_limit"],
            fallback=code.stats["fallback"],
            formula_bound=superstring_code_bound(code.stats["groups"], s, n),
            round_trip=decode(code).text == hyp.text,
            consistent=all(hyp.accepts(x) for x in examples),
        )
    m_kc = kc_sample_size(report["p_kc"], epsilon, delta)
    m_len = length_based_bound(p_len, epsilon, delta)
    report.update(m_kc=m_kc, m_len=m_len, ratio=m_len / m_kc,
                  runtime=time.perf_counter() - start)
    return report


# -- application 2: monomials --------------------------------------------------


def application2_experiment(n: int, target_size: int | None = None, epsilon: float = 0.1,
                            delta: float = 0.1, trials: int = 100, seed: int = 0,
                            support_size: int = 1000, threads: int = 1) -> dict:
    """Standard monomial learner: KC-based versus length-based sample sizes, plus a
    PAC run at the KC-based size."""
    if target_size is None:
        target_size = n - math.ceil(math.sqrt(n))
    if not 0 <= target_size <= n:
        raise ValueError(f"target size {target_size} outside [0, {n}]")
    start = time.perf_counter()
    p_kc = monomial_code_bound(n - target_size)
    p_len = 2 * n
    m_kc = kc_sample_size(p_kc, epsilon, delta)
    m_len = length_based_bound(p_len, epsilon, delta)
    config = ExperimentConfig("monomial", "standard", "fixed", n, epsilon, delta, trials, seed,
                              target_size=target_size, support=f"mixed:{support_size}",
                              m=int(m_kc), threads=threads)
    rate, results = pac_verify(config)
    required = (1 - delta) - binomial_slack(delta, trials)
    return {"n": n, "target_size": target_size, "epsilon": epsilon, "delta": delta,
            "p_kc": p_kc, "p_len": p_len, "m_kc": m_kc, "m_len": m_len,
            "ratio": m_kc / m_len, "trials": trials, "success_rate": rate,
            "required_rate": required, "passed": m_kc < m_len and rate >= required,
            "results": results, "runtime": time.perf_counter() - start}
