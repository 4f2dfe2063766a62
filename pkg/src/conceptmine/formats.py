"""Context file formats: Burmeister cxt, FIMI transaction lists, and CSV.

cxt and CSV round-trip a context exactly, names included.  FIMI keeps only
the incidence (one whitespace-separated transaction per line); reading it
synthesizes names ``g0..`` / ``m0..`` and sizes the attribute universe as
one plus the largest index seen.
"""

import csv as _csv
import io

import numpy as np

from .context import FormalContext
from .errors import ParseError

FORMATS = ("cxt", "fimi", "csv")


def _text_from_source(source):
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return data
    with open(source, "rb") as fh:
        return fh.read().decode("utf-8")


def read_context(source, format):
    """Parse a context from a path or file-like object."""
    if format not in FORMATS:
        raise ValueError(f"unknown context format {format!r}; expected one of {FORMATS}")
    text = _text_from_source(source)
    if format == "cxt":
        return _read_cxt(text)
    if format == "fimi":
        return _read_fimi(text)
    return _read_csv(text)


def write_context(ctx, format):
    """Serialize a context to bytes in the given format."""
    if format not in FORMATS:
        raise ValueError(f"unknown context format {format!r}; expected one of {FORMATS}")
    if format == "cxt":
        text = _write_cxt(ctx)
    elif format == "fimi":
        text = _write_fimi(ctx)
    else:
        text = _write_csv(ctx)
    return text.encode("utf-8")


# -- Burmeister cxt ----------------------------------------------------------

def _read_cxt(text):
    lines = text.split("\n")

    def get(idx, what):
        if idx >= len(lines):
            raise ParseError(f"unexpected end of file, expected {what}", line=idx + 1)
        return lines[idx]

    if get(0, "format tag 'B'").strip() != "B":
        raise ParseError("cxt file must start with 'B'", line=1)
    if get(1, "blank line").strip() != "":
        raise ParseError("expected blank line after 'B'", line=2)
    try:
        n_obj = int(get(2, "object count").strip())
        n_attr = int(get(3, "attribute count").strip())
    except ValueError:
        raise ParseError("object/attribute counts must be integers", line=3) from None
    if n_obj < 1 or n_attr < 1:
        raise ParseError("object and attribute counts must be positive", line=3)
    if get(4, "blank line").strip() != "":
        raise ParseError("expected blank line after the counts", line=5)
    base = 5
    object_names = [get(base + i, "object name") for i in range(n_obj)]
    attribute_names = [get(base + n_obj + i, "attribute name") for i in range(n_attr)]
    mat = np.zeros((n_obj, n_attr), dtype=bool)
    row_base = base + n_obj + n_attr
    for g in range(n_obj):
        row = get(row_base + g, "incidence row")
        if len(row) != n_attr:
            raise ParseError(
                f"incidence row has {len(row)} characters, expected {n_attr}",
                line=row_base + g + 1,
            )
        for m, ch in enumerate(row):
            if ch == "X":
                mat[g, m] = True
            elif ch != ".":
                raise ParseError(
                    f"invalid incidence character {ch!r}", line=row_base + g + 1, column=m + 1
                )
    try:
        return FormalContext(object_names, attribute_names, mat)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _write_cxt(ctx):
    out = ["B", "", str(ctx.n_objects), str(ctx.n_attributes), ""]
    out.extend(ctx.object_names)
    out.extend(ctx.attribute_names)
    for g in range(ctx.n_objects):
        out.append("".join("X" if v else "." for v in ctx.bools[g]))
    return "\n".join(out) + "\n"


# -- FIMI transaction lists --------------------------------------------------

def _read_fimi(text):
    lines = text.split("\n")
    while lines and lines[-1].strip() == "":
        lines.pop()
    if not lines:
        raise ParseError("empty fimi file", line=1)
    transactions = []
    max_attr = -1
    for lineno, line in enumerate(lines, start=1):
        items = []
        for token in line.split():
            try:
                v = int(token)
            except ValueError:
                raise ParseError(f"invalid item {token!r}", line=lineno) from None
            if v < 0:
                raise ParseError(f"negative item {v}", line=lineno)
            items.append(v)
            max_attr = max(max_attr, v)
        transactions.append(items)
    n_attr = max_attr + 1
    if n_attr < 1:
        raise ParseError("fimi file contains no items")
    names_g = [f"g{i}" for i in range(len(transactions))]
    names_m = [f"m{j}" for j in range(n_attr)]
    return FormalContext(names_g, names_m, transactions)


def _write_fimi(ctx):
    lines = []
    for g in range(ctx.n_objects):
        lines.append(" ".join(str(m) for m in np.flatnonzero(ctx.bools[g])))
    return "\n".join(lines) + "\n"


# -- CSV ---------------------------------------------------------------------

def _read_csv(text):
    reader = _csv.reader(io.StringIO(text))
    rows = [row for row in reader]
    while rows and not any(cell.strip() for cell in rows[-1]):
        rows.pop()
    if not rows:
        raise ParseError("empty csv file", line=1)
    header = rows[0]
    if len(header) < 2:
        raise ParseError("csv header needs a leading empty cell and attribute names", line=1)
    attribute_names = [c for c in header[1:]]
    if len(set(attribute_names)) != len(attribute_names):
        raise ParseError("duplicate attribute names in csv header", line=1)
    object_names = []
    mat = np.zeros((len(rows) - 1, len(attribute_names)), dtype=bool)
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(f"row has {len(row)} cells, expected {len(header)}", line=i)
        object_names.append(row[0])
        for j, cell in enumerate(row[1:]):
            cell = cell.strip()
            if cell == "1":
                mat[i - 2, j] = True
            elif cell != "0":
                raise ParseError(f"csv cells must be 0 or 1, got {cell!r}", line=i, column=j + 2)
    try:
        return FormalContext(object_names, attribute_names, mat)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _write_csv(ctx):
    buf = io.StringIO()
    writer = _csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + list(ctx.attribute_names))
    for g in range(ctx.n_objects):
        writer.writerow([ctx.object_names[g]] + ["1" if v else "0" for v in ctx.bools[g]])
    return buf.getvalue()
