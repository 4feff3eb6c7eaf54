"""Frame files and JSON report documents.

Frame file: one row per line, two decimal fields separated by a single
space, written with 17 significant digits so that reading the file back
reproduces every bit. Lines starting with ``#`` are comments.
"""
import json
import os
from pathlib import Path

import numpy as np

from .errors import ParseError, SizeError
from .frames import RowPair
from .selection import CaseAStep, Certificate

__all__ = [
    "SCHEMA_VERSION",
    "read_frame",
    "parse_frame",
    "write_frame",
    "format_float",
    "write_report",
    "read_report",
    "certificate_to_list",
    "certificate_from_document",
]

SCHEMA_VERSION = "1"


def format_float(v):
    return format(float(v), ".17g")


def parse_frame(text):
    """Parse frame-file text into an ``(n, 2)`` float array (no validation)."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        if len(fields) != 2:
            raise ParseError(lineno, "expected 2 numeric fields, found %d" % len(fields))
        try:
            rows.append((float(fields[0]), float(fields[1])))
        except ValueError:
            raise ParseError(lineno, "non-numeric field in %r" % stripped) from None
    if len(rows) < 2:
        raise SizeError("a frame file needs at least 2 rows, found %d" % len(rows))
    return np.array(rows, dtype=float)


def read_frame(source):
    """Read a frame file from a path or a text stream."""
    if isinstance(source, (str, os.PathLike)):
        text = Path(source).read_text()
    else:
        text = source.read()
    return parse_frame(text)


def write_frame(frame, header=None):
    """Frame-file text for ``frame`` (an :class:`OrthonormalFrame` or array)."""
    arr = np.asarray(getattr(frame, "array", frame))
    lines = []
    if header:
        lines.extend("# " + h for h in header.splitlines())
    lines.extend("%s %s" % (format_float(x), format_float(y)) for x, y in arr)
    return "\n".join(lines) + "\n"


def write_report(doc):
    """Serialise a report document; key order is preserved, no timestamps are added."""
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def read_report(source):
    if isinstance(source, (str, os.PathLike)):
        text = Path(source).read_text()
    else:
        text = source.read()
    return json.loads(text)


def certificate_to_list(cert):
    return [step.to_dict() for step in cert.steps]


def certificate_from_document(doc):
    """Rebuild a :class:`Certificate` from a select report that carries its steps."""
    steps = [CaseAStep.from_dict(d) for d in doc.get("certificate") or []]
    return Certificate(
        steps=steps,
        terminal=doc["terminal"],
        final_pair=RowPair(*doc["pair"]),
        sigma2=float(doc["sigma2"]),
        bound=float(doc["bound"]),
        margin=None if doc.get("margin") is None else float(doc["margin"]),
    )
