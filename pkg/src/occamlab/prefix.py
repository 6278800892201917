"""Self-delimiting integer codes.

``encode_int(i)`` writes ``i`` in binary preceded by its length in unary and a
``0`` separator, so ``5 -> 111 0 101``. ``bin(0)`` is the empty string, giving
the one-bit code ``"0"``.
"""

from .errors import CodecError


def _bin(i):
    return format(i, "b") if i else ""


def encode_int(i):
    if i < 0:
        raise ValueError(f"prefix-free code needs a nonnegative integer, got {i}")
    b = _bin(i)
    return "1" * len(b) + "0" + b


def int_code_length(i):
    return 2 * int(i).bit_length() + 1


def decode_int(bits, pos=0):
    """Read one code starting at ``pos``; return ``(value, next_pos)``."""
    width = 0
    try:
        while bits[pos] == "1":
            width += 1
            pos += 1
        pos += 1  # separator
    except IndexError:
        raise CodecError("truncated prefix-free integer") from None
    if pos + width > len(bits):
        raise CodecError("truncated prefix-free integer")
    value = int(bits[pos:pos + width], 2) if width else 0
    return value, pos + width


def encode_signed(v):
    """Sign bit then the magnitude's prefix-free code."""
    return ("1" if v < 0 else "0") + encode_int(abs(v))


def signed_code_length(v):
    return 1 + int_code_length(abs(v))


def decode_signed(bits, pos=0):
    if pos >= len(bits):
        raise CodecError("truncated signed integer")
    negative = bits[pos] == "1"
    value, pos = decode_int(bits, pos + 1)
    if negative and value == 0:
        raise CodecError("negative zero is not a canonical signed code")
    return (-value if negative else value), pos


def encode_fixed(value, width):
    """Fixed-width big-endian binary; width 0 encodes only the value 0."""
    if value < 0 or value >= (1 << width):
        raise ValueError(f"{value} does not fit in {width} bits")
    return format(value, f"0{width}b") if width else ""


def decode_fixed(bits, pos, width):
    if pos + width > len(bits):
        raise CodecError("truncated fixed-width field")
    return (int(bits[pos:pos + width], 2) if width else 0), pos + width
