"""Turning PAC learners into Occam algorithms.

Two closure properties make this possible. Exception handling flips the
membership of a single example; with it, a learner run at a suitably chosen
accuracy can be patched into a hypothesis consistent with a whole sample
(:func:`theorem2_occam`). Majority of three combines three hypotheses that err
on disjoint sets into one with no errors (:func:`theorem3_occam`).

Both constructions also return a witness code for the hypothesis: the
examples the learner was fed (plus any exceptions). Anyone holding the target
can relabel those examples, rerun the deterministic learner and rebuild the
same hypothesis, so the code length bounds the hypothesis' conditional
description length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coding import WitnessCode, decode, encode_transcript
from .core import (
    DnfFormula,
    ExceptionWrapped,
    FiniteDistribution,
    LabeledSample,
    Monomial,
    ThresholdCircuit,
    ThresholdGate,
    bits_per_symbol,
    check_example,
    make_rng,
)
from .errors import InfeasibleError, StageFailure

EPSILON_RTOL = 1e-9


# -- closure operations --------------------------------------------------------


def exception_handle(rep, x: str) -> ExceptionWrapped:
    """A representation of ``c(rep)`` with the membership of ``x`` flipped."""
    base = rep.base if isinstance(rep, ExceptionWrapped) else rep
    current = rep.exceptions if isinstance(rep, ExceptionWrapped) else ()
    check_example(x, base.alphabet, base.n, exact=base.pointwise)
    if x in current:
        return ExceptionWrapped(base, tuple(e for e in current if e != x))
    return ExceptionWrapped(base, current + (x,))


def _check_same_n(reps):
    if len({r.n for r in reps}) != 1:
        raise ValueError("majority of three needs a common n")


def maj3_threshold(r1: ThresholdCircuit, r2: ThresholdCircuit,
                   r3: ThresholdCircuit) -> ThresholdCircuit:
    """Place the three circuits side by side and add a gate ``a + b + c >= 2``."""
    _check_same_n((r1, r2, r3))
    n = r1.n
    gates, outputs, offset = [], [], 0
    for circuit in (r1, r2, r3):
        renumber = {g.id: g.id + offset for g in circuit.gates}
        for g in circuit.gates:
            gates.append(ThresholdGate(renumber[g.id], g.weights, g.threshold,
                                       tuple(renumber.get(i, i) for i in g.inputs)))
        outputs.append(renumber[circuit.output])
        offset += len(circuit.gates)
    gates.append(ThresholdGate(n + offset + 1, (1, 1, 1), 2, tuple(outputs)))
    return ThresholdCircuit(n, tuple(gates))


def _as_dnf(rep) -> DnfFormula:
    if isinstance(rep, DnfFormula):
        return rep
    if isinstance(rep, Monomial):
        return DnfFormula(rep.n, () if rep.contradictory else (rep,))
    raise TypeError(f"cannot read {type(rep).__name__} as a DNF")


def maj3_kdnf(h1, h2, h3) -> DnfFormula:
    """Expand ``(h1 & h2) | (h2 & h3) | (h3 & h1)`` into a DNF of at most twice the width.

    Conjoining two terms unions their literals; terms that would need both
    ``x`` and ``~x`` are dropped and repeated terms are kept once.
    """
    h1, h2, h3 = _as_dnf(h1), _as_dnf(h2), _as_dnf(h3)
    _check_same_n((h1, h2, h3))
    n = h1.n
    terms, seen = [], set()
    for a, b in ((h1, h2), (h2, h3), (h3, h1)):
        for t1 in a.terms:
            for t2 in b.terms:
                pos, neg = t1.pos | t2.pos, t1.neg | t2.neg
                if pos & neg or (pos, neg) in seen:
                    continue
                seen.add((pos, neg))
                terms.append(Monomial(n, pos, neg))
    return DnfFormula(n, tuple(terms))


MAJ3 = {
    "threshold": maj3_threshold,
    "dnf": maj3_kdnf,
    "monomial": maj3_kdnf,
}


# -- shared plumbing -----------------------------------------------------------


def _accepts(rep, examples) -> np.ndarray:
    return np.array([rep.accepts(x) for x in examples], dtype=bool)


class _SampleView:
    """Distinct examples of a sample with labels and multiplicities."""

    def __init__(self, sample: LabeledSample):
        if not len(sample):
            raise ValueError("the sample is empty")
        counts = sample.counts()
        self.examples = list(counts)
        self.labels = np.array([counts[x][0] for x in self.examples], dtype=bool)
        self.weights = np.array([counts[x][1] for x in self.examples], dtype=float)
        self.m = len(sample)
        self.label_of = {x: counts[x][0] for x in self.examples}

    def distribution(self, weights=None) -> FiniteDistribution:
        w = self.weights if weights is None else weights
        keep = w > 0
        return FiniteDistribution.from_weights(
            [x for x, k in zip(self.examples, keep) if k], w[keep])

    def draw(self, dist: FiniteDistribution, rng, k: int) -> LabeledSample:
        idx = dist.sample_indices(rng, k)
        return LabeledSample(tuple((dist.support[i], self.label_of[dist.support[i]])
                                   for i in idx))

    def errors(self, rep) -> np.ndarray:
        return _accepts(rep, self.examples) != self.labels


def _relabel(examples, label) -> LabeledSample:
    return LabeledSample(tuple((x, bool(label(x))) for x in examples))


def _labeler(target):
    if callable(target):
        return target
    if isinstance(target, LabeledSample):
        table = dict(target.items)
        return table.__getitem__
    return target.accepts


@dataclass
class OccamRun:
    """Outcome of one reverse-Occam construction.

    Unpacks as ``rep, code = run``.
    """

    rep: object
    code: WitnessCode
    m: int
    n: int
    epsilon: float
    delta: float
    fed: list
    exception_sets: list
    consistent: bool
    attempts: int = 1
    stats: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.rep, self.code))

    @property
    def code_bits(self) -> int:
        return len(self.code.bits)

    @property
    def compression(self) -> float:
        return self.m / max(1, self.code_bits)


# -- exception-handling construction -------------------------------------------


def find_epsilon0(sample_size, m: int, n, s, gamma) -> float:
    """Smallest-bracket root of ``sample_size(eps) = eps * m`` on ``(1/m, 1]``.

    Returns the upper end of the final bracket, so the learner's declared
    sample size at the returned value never exceeds ``eps * m``.
    """
    if sample_size is None:
        raise InfeasibleError("learner declares no sample-size function")

    def gap(eps):
        return sample_size(n, s, eps, gamma) - eps * m

    lo, hi = 1.0 / m, 1.0
    if gap(hi) > 0:
        raise InfeasibleError(
            f"declared sample size at eps=1 is {sample_size(n, s, 1.0, gamma):.6g} > m={m}; "
            "the curves do not meet in (1/m, 1]")
    if gap(lo) <= 0:
        return lo
    while hi - lo > EPSILON_RTOL * hi:
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0:
            lo = mid
        else:
            hi = mid
    return hi


def _as_set_mode(learner):
    return "auto" if learner.order_invariant else False


def theorem2_occam(learner, sample: LabeledSample, n: int, s=None, gamma: float = 0.1,
                   seed: int = 0, stream: int = 0) -> OccamRun:
    """Run the learner at the accuracy where its sample size meets ``eps * m``, then
    patch every misclassified sample example with an exception."""
    view = _SampleView(sample)
    m = view.m
    eps0 = find_epsilon0(learner.sample_size, m, n, s, gamma)
    rng = make_rng(seed, stream)
    fed = view.draw(view.distribution(), rng, learner.draw_count(n, s, eps0, gamma))
    hyp = learner.learn(fed)
    exceptions = [x for x, bad in zip(view.examples, view.errors(hyp)) if bad]
    rep = hyp
    for x in exceptions:
        rep = exception_handle(rep, x)
    if not isinstance(rep, ExceptionWrapped):
        rep = ExceptionWrapped(rep, ())
    alphabet = rep.alphabet
    code = encode_transcript([fed.examples, exceptions], n, alphabet, _as_set_mode(learner))
    bps = bits_per_symbol(alphabet)
    return OccamRun(rep, code, m, n, eps0, gamma, [fed], [exceptions],
                    sample.consistent_with(rep),
                    stats={"predicted_compression": 1.0 / (2 * eps0 * n * bps),
                           "fed": len(fed), "exceptions": len(exceptions)})


def reconstruct_theorem2(code: WitnessCode, learner, target) -> ExceptionWrapped:
    """Decoder side: relabel the fed examples with the target, rerun, reapply exceptions."""
    fed, exceptions = decode(code)
    hyp = learner.learn(_relabel(fed, _labeler(target)))
    return ExceptionWrapped(hyp, tuple(exceptions))


# -- majority-of-three construction --------------------------------------------


def theorem3_occam(learner, maj3, sample: LabeledSample, n: int, s=None, gamma: float = 0.3,
                   seed: int = 0, stream: int = 0, retries: int = 0) -> OccamRun:
    """Three learner runs at ``eps = 1/(2 sqrt m)``, ``delta = gamma/3`` combined by majority.

    Stage 1 learns on the sample's own distribution. Stage 2 puts mass ``eps``
    on each stage-1 error and must get all of them right. Stage 3 learns on the
    errors of the first two stages and must get all of those right. A stage
    that misses its target raises :class:`StageFailure` once ``retries`` fresh
    attempts are used up.
    """
    view = _SampleView(sample)
    m = view.m
    eps = 1.0 / (2.0 * math.sqrt(m))
    delta = gamma / 3.0
    k = learner.draw_count(n, s, eps, delta)
    failure = None
    for attempt in range(retries + 1):
        try:
            run = _theorem3_attempt(learner, maj3, view, n, eps, delta, k,
                                    seed, stream + 3 * attempt)
        except StageFailure as exc:
            failure = exc
            continue
        run.attempts = attempt + 1
        run.consistent = sample.consistent_with(run.rep)
        return run
    raise failure


def _theorem3_attempt(learner, maj3, view, n, eps, delta, k, seed, stream):
    examples = view.examples
    mu1 = view.distribution()
    fed1 = view.draw(mu1, make_rng(seed, stream), k)
    r1 = learner.learn(fed1)
    err1 = view.errors(r1)
    if mu1.mass([x for x, e in zip(examples, err1) if e]) > eps * (1 + EPSILON_RTOL):
        raise StageFailure(1, "first hypothesis exceeds its error budget")

    # stage 2: mass eps on each stage-1 error (per copy), the rest spread over the others
    w2 = np.where(err1, eps * view.weights, 0.0)
    rest = view.weights * ~err1
    if rest.sum() > 0:
        w2 = w2 + rest / rest.sum() * max(0.0, 1.0 - w2.sum())
    mu2 = view.distribution(w2)
    fed2 = view.draw(mu2, make_rng(seed, stream + 1), k)
    r2 = learner.learn(fed2)
    err2 = view.errors(r2)
    if (err2 & err1).any():
        raise StageFailure(2, "second hypothesis errs on a stage-1 exception")
    if mu2.mass([x for x, e in zip(examples, err2) if e]) > eps * (1 + EPSILON_RTOL):
        raise StageFailure(2, "second hypothesis exceeds its error budget")

    bad = err1 | err2
    mu3 = view.distribution(np.where(bad, view.weights, 0.0) if bad.any() else None)
    fed3 = view.draw(mu3, make_rng(seed, stream + 2), k)
    r3 = learner.learn(fed3)
    if (view.errors(r3) & bad).any():
        raise StageFailure(3, "third hypothesis errs on an earlier exception")

    rep = maj3(r1, r2, r3)
    e1 = [x for x, e in zip(examples, err1) if e]
    e2 = [x for x, e in zip(examples, err2) if e]
    code = encode_transcript([fed1.examples, fed2.examples, fed3.examples], n,
                             rep.alphabet, _as_set_mode(learner))
    return OccamRun(rep, code, view.m, n, eps, delta, [fed1, fed2, fed3], [e1, e2],
                    consistent=False, stats={"fed": 3 * k, "stage_outputs": (r1, r2, r3)})


def reconstruct_theorem3(code: WitnessCode, learner, maj3, target):
    label = _labeler(target)
    stages = [learner.learn(_relabel(fed, label)) for fed in decode(code)]
    return maj3(*stages)
