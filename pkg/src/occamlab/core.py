"""Representation systems, samples, distributions and the example oracle.

Every representation class exposes the same small surface:

``system``        registry id ("monomial", "dnf", "threshold", "superstring", "exception")
``n``             example length
``alphabet``      the example alphabet Sigma
``accepts(x)``    concept membership
``to_bits()``     canonical binary encoding; ``length_bits()`` is its length

Boolean examples are strings over ``"01"``; character ``i`` is variable ``x_{i+1}``.
Internally an example of length n is also addressed as the integer point
``p = sum(int(x[i]) << i)``, which is how truth tables are indexed.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import AlphabetError, CodecError, LengthError
from .prefix import (
    decode_int,
    decode_signed,
    encode_int,
    encode_signed,
    int_code_length,
    signed_code_length,
)

BINARY = "01"
DNA = "ACGT"

ABSENT, POSITIVE, NEGATIVE, BOTH = 0, 1, 2, 3
_PATTERN_CHARS = "-10*"  # indexed by status


def bits_per_symbol(alphabet: str) -> int:
    return max(1, math.ceil(math.log2(len(alphabet))))


def check_example(x: str, alphabet: str, n: int | None = None, exact: bool = False) -> str:
    if not isinstance(x, str) or not x:
        raise LengthError("examples are nonempty strings")
    bad = set(x) - set(alphabet)
    if bad:
        raise AlphabetError(f"symbols {''.join(sorted(bad))!r} not in alphabet {alphabet!r}")
    if n is not None:
        if exact and len(x) != n:
            raise LengthError(f"example {x!r} has length {len(x)}, expected {n}")
        if len(x) > n:
            raise LengthError(f"example {x!r} longer than n={n}")
    return x


def example_to_point(x: str) -> int:
    return int(x[::-1], 2)


def point_to_example(p: int, n: int) -> str:
    return format(p, f"0{n}b")[::-1]


def all_examples(n: int) -> list[str]:
    return [point_to_example(p, n) for p in range(1 << n)]


def _points_matrix(n: int) -> np.ndarray:
    """Row p holds the bits of point p, column i is variable x_{i+1}."""
    p = np.arange(1 << n, dtype=np.int64)
    return ((p[:, None] >> np.arange(n)) & 1).astype(np.int64)


# -- monomials -----------------------------------------------------------------


@dataclass(frozen=True)
class Monomial:
    """Conjunction of literals stored as two bitmasks.

    A variable set in both masks is the ``both`` status of the initial
    all-literals monomial. That state is all-or-nothing: either every variable
    is ``both`` or none is.
    """

    n: int
    pos: int = 0
    neg: int = 0

    system = "monomial"
    pointwise = True  # accepts_many takes integer points
    alphabet = BINARY

    def __post_init__(self):
        full = (1 << self.n) - 1
        if self.n < 1:
            raise ValueError("monomials need n >= 1")
        if self.pos & ~full or self.neg & ~full:
            raise ValueError("literal mask exceeds n variables")
        both = self.pos & self.neg
        if both and both != full:
            raise ValueError("'both' status only allowed as the all-literals monomial")

    @classmethod
    def all_literals(cls, n):
        full = (1 << n) - 1
        return cls(n, full, full)

    @classmethod
    def empty(cls, n):
        return cls(n)

    @classmethod
    def from_literals(cls, n, literals: Iterable[int]):
        """``literals`` are signed 1-based variable indices: ``[1, -2]`` is x1 & ~x2."""
        pos = neg = 0
        for lit in literals:
            if lit == 0 or abs(lit) > n:
                raise ValueError(f"literal {lit} out of range for n={n}")
            if lit > 0:
                pos |= 1 << (lit - 1)
            else:
                neg |= 1 << (-lit - 1)
        return cls(n, pos, neg)

    @classmethod
    def from_statuses(cls, statuses: Sequence[int]):
        pos = neg = 0
        for i, st in enumerate(statuses):
            if st & POSITIVE:
                pos |= 1 << i
            if st & NEGATIVE:
                neg |= 1 << i
        return cls(len(statuses), pos, neg)

    @classmethod
    def from_pattern(cls, pattern: str):
        """Parse the canonical text form: one of ``- 1 0 *`` per variable."""
        try:
            return cls.from_statuses([_PATTERN_CHARS.index(c) for c in pattern.strip()])
        except ValueError:
            raise AlphabetError(f"bad monomial pattern {pattern!r}") from None

    def status(self, i: int) -> int:
        return ((self.pos >> i) & 1) | (((self.neg >> i) & 1) << 1)

    def statuses(self) -> list[int]:
        return [self.status(i) for i in range(self.n)]

    @property
    def contradictory(self) -> bool:
        return bool(self.pos & self.neg)

    @property
    def literals(self) -> frozenset[int]:
        return frozenset(
            [i + 1 for i in range(self.n) if self.pos >> i & 1]
            + [-(i + 1) for i in range(self.n) if self.neg >> i & 1]
        )

    @property
    def variables(self) -> frozenset[int]:
        mask = self.pos | self.neg
        return frozenset(i + 1 for i in range(self.n) if mask >> i & 1)

    @property
    def size(self) -> int:
        return bin(self.pos | self.neg).count("1")

    def accepts_point(self, p: int) -> bool:
        return not self.contradictory and (p & self.pos) == self.pos and not (p & self.neg)

    def accepts(self, x: str) -> bool:
        return self.accepts_point(example_to_point(x))

    def accepts_many(self, points) -> np.ndarray:
        if self.contradictory:
            return np.zeros(len(points), dtype=bool)
        if self.n <= 64:
            p = np.asarray(points, dtype=np.uint64)
            pos, neg = np.uint64(self.pos), np.uint64(self.neg)
            return ((p & pos) == pos) & ((p & neg) == 0)
        return np.array([self.accepts_point(int(q)) for q in points], dtype=bool)

    def truth_table(self) -> np.ndarray:
        return self.accepts_many(np.arange(1 << self.n))

    def pattern(self) -> str:
        return "".join(_PATTERN_CHARS[s] for s in self.statuses())

    def __str__(self):
        if self.contradictory:
            return "FALSE"
        parts = []
        for i in range(self.n):
            st = self.status(i)
            if st == POSITIVE:
                parts.append(f"x{i + 1}")
            elif st == NEGATIVE:
                parts.append(f"~x{i + 1}")
        return " & ".join(parts) if parts else "TRUE"

    def length_bits(self) -> int:
        return 2 * self.n

    def to_bits(self) -> str:
        # absent 00, positive 01, negative 10, both 11 (high bit = negative)
        return "".join(format(s, "02b") for s in self.statuses())

    @classmethod
    def from_bits(cls, bits: str, n: int, pos: int = 0):
        if pos + 2 * n > len(bits):
            raise CodecError("truncated monomial encoding")
        chunk = bits[pos:pos + 2 * n]
        return cls.from_statuses([int(chunk[2 * i:2 * i + 2], 2) for i in range(n)]), pos + 2 * n


# -- DNF -----------------------------------------------------------------------


@dataclass(frozen=True)
class DnfFormula:
    n: int
    terms: tuple[Monomial, ...] = ()

    system = "dnf"
    pointwise = True  # accepts_many takes integer points
    alphabet = BINARY

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            if t.n != self.n:
                raise ValueError("all DNF terms must share n")
            if t.contradictory:
                raise ValueError("DNF terms may not contain the 'both' status")

    @classmethod
    def from_literal_lists(cls, n, terms):
        return cls(n, tuple(Monomial.from_literals(n, t) for t in terms))

    @property
    def width(self) -> int:
        return max((t.size for t in self.terms), default=0)

    def accepts(self, x: str) -> bool:
        p = example_to_point(x)
        return any(t.accepts_point(p) for t in self.terms)

    def accepts_point(self, p: int) -> bool:
        return any(t.accepts_point(p) for t in self.terms)

    def accepts_many(self, points) -> np.ndarray:
        out = np.zeros(len(points), dtype=bool)
        for t in self.terms:
            out |= t.accepts_many(points)
        return out

    def truth_table(self) -> np.ndarray:
        return self.accepts_many(np.arange(1 << self.n))

    def __str__(self):
        if not self.terms:
            return "FALSE"
        return " | ".join(f"({t})" for t in self.terms)

    def length_bits(self) -> int:
        return int_code_length(len(self.terms)) + 2 * self.n * len(self.terms)

    def to_bits(self) -> str:
        return encode_int(len(self.terms)) + "".join(t.to_bits() for t in self.terms)


# -- threshold circuits --------------------------------------------------------


@dataclass(frozen=True)
class ThresholdGate:
    """Node ``id`` outputs ``sum(w * value(input)) >= threshold``.

    Input ids ``1..n`` are the variables; gates are numbered from ``n + 1``.
    """

    id: int
    weights: tuple[int, ...]
    threshold: int
    inputs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "inputs", tuple(int(i) for i in self.inputs))
        if len(self.weights) != len(self.inputs):
            raise ValueError("gate needs one weight per input")

    def length_bits(self) -> int:
        return (
            int_code_length(self.id)
            + int_code_length(len(self.inputs))
            + sum(signed_code_length(w) for w in self.weights)
            + signed_code_length(self.threshold)
            + sum(int_code_length(i) for i in self.inputs)
        )

    def to_bits(self) -> str:
        # degree precedes the weights so the decoder knows how many to read
        return (
            encode_int(self.id)
            + encode_int(len(self.inputs))
            + "".join(encode_signed(w) for w in self.weights)
            + encode_signed(self.threshold)
            + "".join(encode_int(i) for i in self.inputs)
        )


@dataclass(frozen=True)
class ThresholdCircuit:
    """Acyclic threshold circuit whose output is its last gate."""

    n: int
    gates: tuple[ThresholdGate, ...]

    system = "threshold"
    pointwise = True  # accepts_many takes integer points
    alphabet = BINARY

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if not self.gates:
            raise ValueError("a circuit needs at least one gate")
        seen = set(range(1, self.n + 1))
        for g in self.gates:
            if g.id in seen or g.id <= self.n:
                raise ValueError(f"gate id {g.id} collides with an earlier node or variable")
            for i in g.inputs:
                if i not in seen:
                    raise ValueError(f"gate {g.id} reads node {i} which does not precede it")
            seen.add(g.id)

    @classmethod
    def single(cls, n, weights, threshold, inputs=None):
        inputs = tuple(range(1, n + 1)) if inputs is None else tuple(inputs)
        return cls(n, (ThresholdGate(n + 1, tuple(weights), threshold, inputs),))

    @property
    def output(self) -> int:
        return self.gates[-1].id

    def evaluate_point(self, p: int) -> bool:
        val = {i + 1: (p >> i) & 1 for i in range(self.n)}
        for g in self.gates:
            s = sum(w * val[i] for w, i in zip(g.weights, g.inputs))
            val[g.id] = 1 if s >= g.threshold else 0
        return bool(val[self.output])

    def accepts(self, x: str) -> bool:
        return self.evaluate_point(example_to_point(x))

    accepts_point = evaluate_point

    def accepts_many(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.int64)
        val = {i + 1: (pts >> i) & 1 for i in range(self.n)}
        for g in self.gates:
            s = np.zeros(len(pts), dtype=np.int64)
            for w, i in zip(g.weights, g.inputs):
                s += w * val[i]
            val[g.id] = (s >= g.threshold).astype(np.int64)
        return val[self.output].astype(bool)

    def truth_table(self) -> np.ndarray:
        return self.accepts_many(np.arange(1 << self.n))

    def __str__(self):
        def name(i):
            return f"x{i}" if i <= self.n else f"g{i}"

        lines = []
        for g in self.gates:
            terms = " + ".join(f"{w}*{name(i)}" for w, i in zip(g.weights, g.inputs)) or "0"
            lines.append(f"g{g.id} = [{terms} >= {g.threshold}]")
        return "; ".join(lines)

    def length_bits(self) -> int:
        return int_code_length(len(self.gates)) + sum(g.length_bits() for g in self.gates)

    def to_bits(self) -> str:
        return encode_int(len(self.gates)) + "".join(g.to_bits() for g in self.gates)

    @classmethod
    def from_bits(cls, bits: str, n: int, pos: int = 0):
        count, pos = decode_int(bits, pos)
        if count == 0:
            raise CodecError("circuit encoding declares zero gates")
        gates = []
        for _ in range(count):
            gid, pos = decode_int(bits, pos)
            degree, pos = decode_int(bits, pos)
            weights = []
            for _ in range(degree):
                w, pos = decode_signed(bits, pos)
                weights.append(w)
            threshold, pos = decode_signed(bits, pos)
            inputs = []
            for _ in range(degree):
                i, pos = decode_int(bits, pos)
                inputs.append(i)
            gates.append(ThresholdGate(gid, tuple(weights), threshold, tuple(inputs)))
        try:
            return cls(n, tuple(gates)), pos
        except ValueError as exc:
            raise CodecError(str(exc)) from None


# -- superstrings --------------------------------------------------------------


@dataclass(frozen=True)
class SuperstringRep:
    """The concept of all length-``n`` windows of ``text``."""

    text: str
    n: int
    alphabet: str = DNA

    system = "superstring"
    pointwise = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("window length must be >= 1")
        bad = set(self.text) - set(self.alphabet)
        if bad:
            raise AlphabetError(f"symbols {''.join(sorted(bad))!r} not in alphabet {self.alphabet!r}")

    def accepts(self, x: str) -> bool:
        return len(x) == self.n and x in self.text

    def accepts_many(self, examples) -> np.ndarray:
        win = self.windows
        return np.array([x in win for x in examples], dtype=bool)

    @cached_property
    def windows(self) -> frozenset[str]:
        t, n = self.text, self.n
        return frozenset(t[i:i + n] for i in range(len(t) - n + 1))

    def __str__(self):
        return self.text

    def length_bits(self) -> int:
        return bits_per_symbol(self.alphabet) * len(self.text)

    def to_bits(self) -> str:
        return encode_symbols(self.text, self.alphabet)


def encode_symbols(text: str, alphabet: str) -> str:
    width = bits_per_symbol(alphabet)
    index = {c: format(i, f"0{width}b") for i, c in enumerate(alphabet)}
    try:
        return "".join(index[c] for c in text)
    except KeyError as exc:
        raise AlphabetError(f"symbol {exc.args[0]!r} not in alphabet {alphabet!r}") from None


def decode_symbols(bits: str, pos: int, count: int, alphabet: str):
    width = bits_per_symbol(alphabet)
    end = pos + width * count
    if end > len(bits):
        raise CodecError("truncated symbol string")
    out = []
    for k in range(pos, end, width):
        v = int(bits[k:k + width], 2)
        if v >= len(alphabet):
            raise CodecError(f"symbol code {v} outside alphabet {alphabet!r}")
        out.append(alphabet[v])
    return "".join(out), end


# -- exceptions ----------------------------------------------------------------


def exception_cost_bits(n: int, alphabet: str) -> int:
    """Length added per exception: a prefix-coded length plus the symbols."""
    return int_code_length(n) + n * bits_per_symbol(alphabet)


@dataclass(frozen=True)
class ExceptionWrapped:
    """``c(base)`` with the membership of each listed example flipped."""

    base: object
    exceptions: tuple[str, ...] = ()

    system = "exception"

    def __post_init__(self):
        object.__setattr__(self, "exceptions", tuple(self.exceptions))
        if len(set(self.exceptions)) != len(self.exceptions):
            raise ValueError("duplicate exception")
        for x in self.exceptions:
            check_example(x, self.alphabet, self.n)

    @property
    def n(self):
        return self.base.n

    @property
    def pointwise(self):
        return self.base.pointwise

    @property
    def alphabet(self):
        return self.base.alphabet

    @cached_property
    def _flipped(self):
        return frozenset(self.exceptions)

    def accepts(self, x: str) -> bool:
        return self.base.accepts(x) != (x in self._flipped)

    def accepts_many(self, points_or_examples) -> np.ndarray:
        # points for boolean bases, example strings otherwise (mirrors the base)
        out = np.asarray(self.base.accepts_many(points_or_examples), dtype=bool).copy()
        if self.exceptions:
            if self.pointwise:
                keys = [point_to_example(int(p), self.n) for p in points_or_examples]
            else:
                keys = list(points_or_examples)
            out ^= np.array([k in self._flipped for k in keys], dtype=bool)
        return out

    def truth_table(self) -> np.ndarray:
        return self.accepts_many(np.arange(1 << self.n))

    def __str__(self):
        if not self.exceptions:
            return str(self.base)
        return f"{self.base} XOR {{{', '.join(self.exceptions)}}}"

    def length_bits(self) -> int:
        extra = sum(int_code_length(len(x)) + len(x) * bits_per_symbol(self.alphabet)
                    for x in self.exceptions)
        return self.base.length_bits() + extra

    def to_bits(self) -> str:
        return self.base.to_bits() + "".join(
            encode_int(len(x)) + encode_symbols(x, self.alphabet) for x in self.exceptions
        )


SYSTEMS = {
    "monomial": Monomial,
    "dnf": DnfFormula,
    "threshold": ThresholdCircuit,
    "superstring": SuperstringRep,
    "exception": ExceptionWrapped,
}


def _check_system(system_id, rep):
    cls = SYSTEMS.get(system_id)
    if cls is None:
        raise ValueError(f"unknown system {system_id!r}")
    if not isinstance(rep, cls):
        raise TypeError(f"{type(rep).__name__} is not a {system_id} representation")


def evaluate(system_id: str, rep, x: str) -> bool:
    _check_system(system_id, rep)
    check_example(x, rep.alphabet, rep.n, exact=rep.pointwise)
    return rep.accepts(x)


def representation_length_bits(system_id: str, rep) -> int:
    _check_system(system_id, rep)
    return rep.length_bits()


# -- samples, distributions, oracle --------------------------------------------


@dataclass(frozen=True)
class LabeledSample:
    items: tuple[tuple[str, bool], ...]

    def __post_init__(self):
        items = tuple((str(x), bool(y)) for x, y in self.items)
        object.__setattr__(self, "items", items)
        labels = {}
        for x, y in items:
            if labels.setdefault(x, y) != y:
                raise ValueError(f"example {x!r} carries conflicting labels")

    @classmethod
    def from_pairs(cls, pairs):
        return cls(tuple(pairs))

    @classmethod
    def labeled_by(cls, target, examples):
        ex = list(examples)
        return cls(tuple(zip(ex, (bool(v) for v in _accepts_examples(target, ex)))))

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def examples(self) -> list[str]:
        return [x for x, _ in self.items]

    @property
    def positives(self) -> list[str]:
        return [x for x, y in self.items if y]

    @property
    def negatives(self) -> list[str]:
        return [x for x, y in self.items if not y]

    @property
    def distinct_count(self) -> int:
        return len({x for x, _ in self.items})

    def counts(self) -> dict[str, tuple[bool, int]]:
        """Distinct examples in first-seen order with (label, multiplicity)."""
        mult = Counter(x for x, _ in self.items)
        out = {}
        for x, y in self.items:
            out.setdefault(x, (y, mult[x]))
        return out

    def consistent_with(self, rep) -> bool:
        if not self.items:
            return True
        got = _accepts_examples(rep, self.examples)
        return all(bool(g) == y for g, (_, y) in zip(got, self.items))


def _accepts_examples(rep, examples) -> np.ndarray:
    if not examples:
        return np.zeros(0, dtype=bool)
    if rep.pointwise and rep.n <= 64:
        return np.asarray(rep.accepts_many([example_to_point(x) for x in examples]), dtype=bool)
    return np.array([rep.accepts(x) for x in examples], dtype=bool)


PROB_TOLERANCE = 1e-12


@dataclass(frozen=True)
class FiniteDistribution:
    support: tuple[str, ...]
    probabilities: np.ndarray = field(compare=False)

    def __post_init__(self):
        support = tuple(self.support)
        probs = np.asarray(self.probabilities, dtype=float)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probabilities", probs)
        if len(support) != len(probs) or not support:
            raise ValueError("support and probabilities must be nonempty and aligned")
        if len(set(support)) != len(support):
            raise ValueError("support entries must be distinct")
        if (probs < 0).any():
            raise ValueError("probabilities must be nonnegative")
        if abs(probs.sum() - 1.0) > PROB_TOLERANCE:
            raise ValueError(f"probabilities sum to {probs.sum()!r}, not 1")

    @classmethod
    def uniform(cls, support):
        support = tuple(support)
        return cls(support, np.full(len(support), 1.0 / len(support)))

    @classmethod
    def from_weights(cls, support, weights):
        w = np.asarray(weights, dtype=float)
        total = w.sum()
        if total <= 0:
            raise ValueError("weights must have positive total mass")
        return cls(tuple(support), w / total)

    def __len__(self):
        return len(self.support)

    def mass(self, examples) -> float:
        want = set(examples)
        return float(sum(p for x, p in zip(self.support, self.probabilities) if x in want))

    def sample_indices(self, rng: np.random.Generator, k: int) -> np.ndarray:
        return rng.choice(len(self.support), size=k, p=self.probabilities)

    @cached_property
    def points(self) -> list[int]:
        return [example_to_point(x) for x in self.support]


def membership(rep, dist: FiniteDistribution) -> np.ndarray:
    """Membership of every support point, vectorised where the system allows."""
    if rep.pointwise:
        return np.asarray(rep.accepts_many(dist.points), dtype=bool)
    return np.array([rep.accepts(x) for x in dist.support], dtype=bool)


def symmetric_difference_error(r1, r2, dist: FiniteDistribution) -> float:
    """Exact ``D(c(r1) symmetric-difference c(r2))`` over the finite support."""
    if r1.system != r2.system and not ({r1.system, r2.system} & {"exception"}):
        raise TypeError(f"cannot compare {r1.system} with {r2.system}")
    if r1.n != r2.n or r1.alphabet != r2.alphabet:
        raise TypeError("representations disagree on n or alphabet")
    diff = membership(r1, dist) != membership(r2, dist)
    return float(dist.probabilities[diff].sum())


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based Philox stream keyed by ``(seed, stream)``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.Philox(ss))


class Oracle:
    """Draws ``(x, x in c(target))`` with ``x`` distributed by ``dist``."""

    def __init__(self, dist: FiniteDistribution, target, seed: int = 0, stream: int = 0):
        self.distribution = dist
        self.target = target
        self.seed = seed
        self.stream = stream
        self._rng = make_rng(seed, stream)
        self._labels = membership(target, dist)
        self.drawn = 0

    def draw(self, k: int) -> LabeledSample:
        idx = self.distribution.sample_indices(self._rng, k)
        self.drawn += k
        sup, lab = self.distribution.support, self._labels
        return LabeledSample(tuple((sup[i], bool(lab[i])) for i in idx))


def random_monomial(n: int, rng: np.random.Generator, size: int | None = None) -> Monomial:
    """Each variable uniformly absent/positive/negative, or exactly ``size`` present."""
    if size is None:
        return Monomial.from_statuses(list(rng.integers(0, 3, size=n)))
    if not 0 <= size <= n:
        raise ValueError(f"target size {size} outside [0, {n}]")
    chosen = rng.choice(n, size=size, replace=False)
    statuses = [ABSENT] * n
    for i in chosen:
        statuses[int(i)] = int(rng.integers(1, 3))
    return Monomial.from_statuses(statuses)


def truth_table_int(rep) -> int:
    """Truth table packed into an int, bit p = membership of point p."""
    tt = rep.truth_table()
    return int(sum(1 << int(p) for p in np.flatnonzero(tt)))

