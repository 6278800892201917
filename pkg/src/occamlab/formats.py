"""Reading and writing sample files, FASTA targets and CSV reports.

Sample files hold one item per line, ``<label 0|1><TAB><example>``, UTF-8 with
LF line endings. FASTA files are read by skipping ``>`` header lines and
concatenating the rest in upper case.
"""

from __future__ import annotations

import csv
import io
import math

from .core import LabeledSample
from .errors import InputFormatError


def parse_sample(text: str) -> LabeledSample:
    items = []
    for lineno, line in enumerate(text.split("\n"), 1):
        if not line.strip():
            continue
        label, tab, example = line.rstrip("\r").partition("\t")
        if not tab or label not in ("0", "1") or not example:
            raise InputFormatError(f"line {lineno}: expected '<0|1><TAB><example>'")
        items.append((example, label == "1"))
    try:
        return LabeledSample(tuple(items))
    except ValueError as exc:
        raise InputFormatError(str(exc)) from None


def read_sample(path) -> LabeledSample:
    with open(path, encoding="utf-8") as fh:
        return parse_sample(fh.read())


def format_sample(sample: LabeledSample) -> str:
    return "".join(f"{int(y)}\t{x}\n" for x, y in sample)


def write_sample(sample: LabeledSample, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_sample(sample))


def parse_fasta(text: str) -> str:
    lines = [ln.strip() for ln in text.splitlines()]
    return "".join(ln for ln in lines if ln and not ln.startswith(">")).upper()


def read_sequence(path) -> str:
    """A FASTA file, or a plain file whose non-blank lines are concatenated."""
    with open(path, encoding="utf-8") as fh:
        return parse_fasta(fh.read())


def read_examples(path) -> list[str]:
    """Examples one per line; sample-format lines contribute their example."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\r\n")
            if line.strip():
                out.append(line.partition("\t")[2] if "\t" in line else line.strip())
    return out


def read_text(path) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read().strip()


def format_value(v) -> str:
    """CSV cell text: 12 significant digits for floats, 1/0 for booleans."""
    if isinstance(v, bool):
        return str(int(v))
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return format(v, ".12g")
    return str(v)


def to_csv(rows, fields) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([format_value(row.get(f)) for f in fields])
    return buf.getvalue()
