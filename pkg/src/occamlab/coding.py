"""Witness codes: explicit encoders and decoders that certify description lengths.

Each encoder takes a hypothesis plus side information the decoder is allowed to
see (the target, ``n``, ``s``) and returns a :class:`WitnessCode`. The bit
length of that code is a concrete upper bound on the conditional description
length of the hypothesis, and :func:`decode` rebuilds the hypothesis exactly.

Three codecs are provided:

``monomial``     a monomial containing the target's literals, one trit per free variable
``superstring``  a merged superstring described by groups of positions in the target
``transcript``   lists of examples, either in order or as sets
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

from . import kernels
from .core import (
    BINARY,
    Monomial,
    SuperstringRep,
    bits_per_symbol,
    check_example,
    decode_symbols,
    encode_symbols,
)
from .errors import CodecError
from .prefix import decode_fixed, decode_int, encode_fixed, encode_int, int_code_length

CODECS = ("monomial", "superstring", "transcript")


@dataclass(frozen=True)
class Conditioning:
    """Side information the decoder receives alongside the bits."""

    target: object = None
    n: int | None = None
    s: int | None = None
    alphabet: str | None = None
    lists: int | None = None


@dataclass(frozen=True)
class WitnessCode:
    """Encoded hypothesis plus the accounting needed to certify its length.

    ``bound`` is the codec's formula bound for this instance; ``header_bits``
    counts the fixed-format bits (flags, counts) included in ``len(bits)``.
    """

    codec: str
    bits: str
    conditioning: Conditioning
    header_bits: int = 0
    bound: int = 0
    stats: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.bits)

    @property
    def length(self) -> int:
        return len(self.bits)


def ceil_log2(k: int) -> int:
    """Bits needed to address ``k`` distinct values (``0`` for ``k <= 1``)."""
    return max(0, int(k) - 1).bit_length()


# -- monomial given target -----------------------------------------------------


def monomial_code_bound(t: int) -> int:
    """``ceil(t * log2 3)`` computed exactly: the smallest w with 2**w >= 3**t."""
    return ceil_log2(3 ** t)


def _free_variables(target: Monomial) -> list[int]:
    mask = target.pos | target.neg
    return [i for i in range(target.n) if not mask >> i & 1]


def encode_monomial_given_target(hypothesis: Monomial, target: Monomial, n: int) -> WitnessCode:
    """One trit per variable the target leaves out: absent, positive or negative.

    Trits are packed base 3 (first free variable least significant). The
    otherwise unused value ``3**t`` stands for the all-literals monomial.
    """
    if hypothesis.n != n or target.n != n:
        raise CodecError(f"monomials must both have n={n}")
    if not target.literals <= hypothesis.literals:
        raise CodecError("hypothesis does not contain every literal of the target")
    free = [] if target.contradictory else _free_variables(target)
    t = len(free)
    width = monomial_code_bound(t)
    cond = Conditioning(target=target, n=n)
    if hypothesis.contradictory and not target.contradictory:
        if t == 0:
            raise CodecError("all-literals hypothesis needs at least one free variable")
        value = 3 ** t
    else:
        value = 0
        for i in reversed(free):
            value = 3 * value + hypothesis.status(i)
    return WitnessCode("monomial", encode_fixed(value, width), cond, 0, width, {"free": t})


def decode_monomial(bits: str, target: Monomial) -> Monomial:
    free = [] if target.contradictory else _free_variables(target)
    t = len(free)
    if len(bits) != monomial_code_bound(t):
        raise CodecError(f"monomial code has {len(bits)} bits, expected {monomial_code_bound(t)}")
    value, _ = decode_fixed(bits, 0, len(bits))
    if target.contradictory:
        return target
    if value == 3 ** t:
        return Monomial.all_literals(target.n)
    if value > 3 ** t:
        raise CodecError("monomial code value out of range")
    statuses = target.statuses()
    for i in free:
        value, statuses[i] = divmod(value, 3)
    return Monomial.from_statuses(statuses)


# -- superstring given target --------------------------------------------------


def superstring_group_cost(s: int, n: int) -> int:
    """Bits per group: two positions in the target and one merge offset."""
    return 2 * ceil_log2(s) + ceil_log2(n)


def superstring_code_bound(groups: int, s: int, n: int) -> int:
    return groups * superstring_group_cost(s, n) + 1


def superstring_group_limit(length: int, n: int) -> int:
    """Most groups a covered superstring of this length can need."""
    return math.ceil(2 * length / n)


def _first_positions(text: str, n: int, wanted) -> dict:
    """First occurrence of each wanted length-``n`` string; missing ones are absent."""
    wanted = set(wanted)
    found = {}
    for i in range(len(text) - n + 1):
        w = text[i:i + n]
        if w in wanted and w not in found:
            found[w] = i
            if len(found) == len(wanted):
                break
    return found


def _groups(where: dict, n: int):
    """Examples sorted by first occurrence, split into groups overlapping their leftmost."""
    placed = sorted((p, x) for x, p in where.items())
    groups = []
    for pos, x in placed:
        if groups and pos < groups[-1][0][0] + n:
            groups[-1].append((pos, x))
        else:
            groups.append([(pos, x)])
    return groups


def encode_superstring_given_target(hypothesis: SuperstringRep, target: SuperstringRep,
                                    examples) -> WitnessCode:
    """Describe ``hypothesis`` by where its example groups sit in ``target``.

    A group is a run of examples (in left-to-right order in the hypothesis)
    that all overlap the group's leftmost example. Each group costs the target
    positions of its first and last example plus their offset; the decoder
    glues the groups back together by maximum overlap. If that does not
    reproduce the hypothesis the code falls back to spelling it out.
    """
    t, tp, n = target.text, hypothesis.text, hypothesis.n
    examples = sorted(set(examples))
    if not examples:
        raise CodecError("superstring codec needs at least one example")
    for x in examples:
        if len(x) != n:
            raise CodecError(f"example {x!r} does not have length {n}")
    in_t = _first_positions(t, n, examples)
    in_tp = _first_positions(tp, n, examples)
    for x in examples:
        if x not in in_t:
            raise CodecError(f"example {x!r} is not a substring of the target")
        if x not in in_tp:
            raise CodecError(f"example {x!r} is not a substring of the hypothesis")
    s = len(t)
    cond = Conditioning(target=target, n=n, s=s, alphabet=hypothesis.alphabet)
    groups = _groups(in_tp, n)
    wpos, woff = ceil_log2(s), ceil_log2(n)
    parts = ["0"]
    for g in groups:
        (p0, first), (p1, last) = g[0], g[-1]
        parts.append(encode_fixed(in_t[first], wpos) + encode_fixed(in_t[last], wpos)
                     + encode_fixed(p1 - p0, woff))
    bits = "".join(parts)
    stats = {"groups": len(groups), "group_limit": superstring_group_limit(len(tp), n),
             "fallback": False}
    try:
        ok = decode_superstring(bits, target, n, hypothesis.alphabet).text == tp
    except CodecError:
        ok = False
    if ok:
        return WitnessCode("superstring", bits, cond, 1,
                           superstring_code_bound(len(groups), s, n), stats)
    bits = "1" + encode_symbols(tp, hypothesis.alphabet)
    stats["fallback"] = True
    return WitnessCode("superstring", bits, cond, 1, len(bits), stats)


def decode_superstring(bits: str, target: SuperstringRep, n: int,
                       alphabet: str | None = None) -> SuperstringRep:
    alphabet = alphabet or target.alphabet
    if not bits:
        raise CodecError("empty superstring code")
    if bits[0] == "1":
        width = bits_per_symbol(alphabet)
        if (len(bits) - 1) % width:
            raise CodecError("literal superstring code has a partial symbol")
        text, _ = decode_symbols(bits, 1, (len(bits) - 1) // width, alphabet)
        return SuperstringRep(text, n, alphabet)
    t, s = target.text, len(target.text)
    wpos, woff = ceil_log2(s), ceil_log2(n)
    w = 2 * wpos + woff
    body = len(bits) - 1
    if w == 0:
        count = 1
    elif body == 0 or body % w:
        raise CodecError("superstring code length is not a whole number of groups")
    else:
        count = body // w
    chunks, tail, pos = [], "", 1
    for _ in range(count):
        p0, pos = decode_fixed(bits, pos, wpos)
        p1, pos = decode_fixed(bits, pos, wpos)
        off, pos = decode_fixed(bits, pos, woff)
        if p0 + n > s or p1 + n > s or off >= n:
            raise CodecError("group field outside the target")
        piece = t[p0:p0 + n][:off] + t[p1:p1 + n]
        # neighbouring groups are glued by their longest suffix/prefix overlap
        piece = piece[kernels.max_overlap(tail[-len(piece):], piece):] if tail else piece
        chunks.append(piece)
        tail = (tail + piece)[-2 * n:]
    return SuperstringRep("".join(chunks), n, alphabet)


# -- example transcripts -------------------------------------------------------


def _rank(x: str, alphabet: str) -> int:
    r = 0
    for c in x:
        r = r * len(alphabet) + alphabet.index(c)
    return r


def _unrank(r: int, n: int, alphabet: str) -> str:
    out = []
    for _ in range(n):
        r, d = divmod(r, len(alphabet))
        out.append(alphabet[d])
    return "".join(reversed(out))


SET_FORM_LIMIT = 1 << 16


def transcript_bound(counts, n: int, alphabet: str) -> int:
    """Format bound for ordered lists: two mode bits, counts, and per example its
    prefix-coded length plus symbols."""
    per = n * bits_per_symbol(alphabet) + int_code_length(n)
    return 2 + sum(int_code_length(c) + c * per for c in counts)


def _encode_list(lst, alphabet, with_lengths):
    parts = [encode_int(len(lst))]
    for x in lst:
        if with_lengths:
            parts.append(encode_int(len(x)))
        parts.append(encode_symbols(x, alphabet))
    return "".join(parts)


def _encode_bitmap(lst, n, alphabet):
    mask = bytearray(b"0" * len(alphabet) ** n)
    for x in lst:
        mask[_rank(x, alphabet)] = ord("1")
    return mask.decode()


def _ordered_form(lists, n, alphabet):
    fixed = all(len(x) == n for lst in lists for x in lst)
    body = "".join(_encode_list(lst, alphabet, not fixed) for lst in lists)
    return "0" + ("0" if fixed else "1") + body


def _unordered_form(lists, n, alphabet):
    # per list: "1" + membership bitmap, or "0" + counted list, whichever is shorter
    parts, bitmaps = ["1"], 0
    for lst in lists:
        listed = "0" + _encode_list(lst, alphabet, False)
        if len(alphabet) ** n < len(listed) - 1:
            parts.append("1" + _encode_bitmap(lst, n, alphabet))
            bitmaps += 1
        else:
            parts.append(listed)
    return "".join(parts), bitmaps


def encode_transcript(lists, n: int, alphabet: str = BINARY, as_set: bool | str = False,
                      ) -> WitnessCode:
    """Encode a fixed number of example lists.

    ``as_set=False`` keeps every list's order and repeats. ``True`` lets each
    list be stored as a membership bitmap over all length-``n`` strings when
    that is shorter, which drops order and repeats. ``"auto"`` tries both and
    keeps the shorter code.
    """
    lists = [list(lst) for lst in lists]
    for lst in lists:
        for x in lst:
            check_example(x, alphabet, n)
    cond = Conditioning(n=n, alphabet=alphabet, lists=len(lists))
    counts = [len(lst) for lst in lists]
    settable = (len(alphabet) ** n <= SET_FORM_LIMIT
                and all(len(x) == n for lst in lists for x in lst))
    if as_set is True and not settable:
        raise CodecError("set form needs fixed-length examples over a small domain")
    bound = transcript_bound(counts, n, alphabet)
    candidates = []
    if as_set is not True:
        bits = _ordered_form(lists, n, alphabet)
        header = 2 + sum(int_code_length(c) for c in counts)
        candidates.append((len(bits), 0, bits, header, 0))
    if as_set and settable:
        bits, bitmaps = _unordered_form(lists, n, alphabet)
        header = 1 + len(lists) + sum(int_code_length(c) for c in counts)
        candidates.append((len(bits), 1, bits, header, bitmaps))
    size, form, bits, header, bitmaps = min(candidates, key=lambda c: c[:2])
    return WitnessCode("transcript", bits, cond, header, bound,
                       {"form": "set" if form else "list", "bitmaps": bitmaps,
                        "counts": counts})


def encode_examples_transcript(fed, exceptions, n: int, alphabet: str = BINARY,
                               as_set: bool | str = False) -> WitnessCode:
    """The examples a learner was fed, then the exceptions found afterwards."""
    return encode_transcript([fed, exceptions], n, alphabet, as_set)


def _decode_list(bits, pos, n, alphabet, with_lengths):
    count, pos = decode_int(bits, pos)
    lst = []
    for _ in range(count):
        length = n
        if with_lengths:
            length, pos = decode_int(bits, pos)
            if not 1 <= length <= n:
                raise CodecError(f"example length {length} outside [1, {n}]")
        x, pos = decode_symbols(bits, pos, length, alphabet)
        lst.append(x)
    return tuple(lst), pos


def decode_transcript(bits: str, n: int, alphabet: str = BINARY, lists: int = 2):
    """Return a tuple of example tuples (bitmap lists come back in rank order)."""
    if len(bits) < 2:
        raise CodecError("truncated transcript header")
    out = []
    if bits[0] == "1":
        size = len(alphabet) ** n
        pos = 1
        for _ in range(lists):
            if pos >= len(bits):
                raise CodecError("truncated transcript")
            if bits[pos] == "1":
                chunk = bits[pos + 1:pos + 1 + size]
                if len(chunk) != size:
                    raise CodecError("truncated membership bitmap")
                out.append(tuple(_unrank(r, n, alphabet)
                                 for r, b in enumerate(chunk) if b == "1"))
                pos += 1 + size
            else:
                lst, pos = _decode_list(bits, pos + 1, n, alphabet, False)
                out.append(lst)
    else:
        with_lengths = bits[1] == "1"
        pos = 2
        for _ in range(lists):
            lst, pos = _decode_list(bits, pos, n, alphabet, with_lengths)
            out.append(lst)
    if pos != len(bits):
        raise CodecError("trailing bits after transcript")
    return tuple(out)


# -- dispatch and bit files ----------------------------------------------------


def decode(code: WitnessCode, conditioning: Conditioning | None = None):
    """Rebuild the encoded object from the bits and the decoder's side information."""
    cond = code.conditioning if conditioning is None else conditioning
    if conditioning is not None and conditioning != code.conditioning:
        raise CodecError("conditioning does not match what the encoder declared")
    if code.codec == "monomial":
        return decode_monomial(code.bits, cond.target)
    if code.codec == "superstring":
        return decode_superstring(code.bits, cond.target, cond.n, cond.alphabet)
    if code.codec == "transcript":
        return decode_transcript(code.bits, cond.n, cond.alphabet, cond.lists)
    raise CodecError(f"unknown codec {code.codec!r}")


def pack_bits(bits: str) -> bytes:
    """8-byte little-endian bit count, then the bits MSB first, zero-padded."""
    if set(bits) - {"0", "1"}:
        raise CodecError("bit strings contain only 0 and 1")
    padded = bits + "0" * (-len(bits) % 8)
    body = int(padded, 2).to_bytes(len(padded) // 8, "big") if padded else b""
    return struct.pack("<Q", len(bits)) + body


def unpack_bits(data: bytes) -> str:
    if len(data) < 8:
        raise CodecError("bit file shorter than its 8-byte header")
    (count,) = struct.unpack("<Q", data[:8])
    body = data[8:]
    if len(body) != (count + 7) // 8:
        raise CodecError("bit file body does not match its declared length")
    bits = "".join(format(b, "08b") for b in body)
    return bits[:count]


def emit_bits_file(bits: str, path) -> int:
    data = pack_bits(bits)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)
