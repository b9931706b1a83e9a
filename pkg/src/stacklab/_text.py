"""Reading and writing of the line-oriented text formats.

Every format in this package is a handful of header lines followed by many
short records such as ``e 12 57 3``.  Records keyed by a single letter are
formatted and parsed by compiled loops so that multi-million-edge files
round-trip in seconds; header lines (multi-letter keywords) go through plain
Python.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

_SPACE, _TAB, _CR, _NL, _HASH = 32, 9, 13, 10, 35


class FormatError(ValueError):
    """Raised when a text file does not follow its declared format."""


@njit(cache=True)
def _format_kernel(key, rows):
    nrows, width = rows.shape
    total = 0
    for r in range(nrows):
        total += key.size + width + 1
        for c in range(width):
            v = rows[r, c]
            total += 1
            while v >= 10:
                v //= 10
                total += 1
    out = np.empty(total, dtype=np.uint8)
    p = 0
    for r in range(nrows):
        for i in range(key.size):
            out[p] = key[i]
            p += 1
        for c in range(width):
            out[p] = _SPACE
            p += 1
            v = rows[r, c]
            digits = 1
            w = v
            while w >= 10:
                w //= 10
                digits += 1
            for d in range(digits - 1, -1, -1):
                out[p + d] = 48 + v % 10
                v //= 10
            p += digits
        out[p] = _NL
        p += 1
    return out


def format_records(keyword: str, rows: np.ndarray) -> bytes:
    """Render ``keyword a b c`` lines for each row of a non-negative int array."""
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    if rows.ndim != 2:
        raise ValueError("rows must be two-dimensional")
    if rows.size and rows.min() < 0:
        raise ValueError("only non-negative integers can be formatted")
    if rows.shape[0] == 0:
        return b""
    key = np.frombuffer(keyword.encode("ascii"), dtype=np.uint8)
    return _format_kernel(key, rows).tobytes()


def format_header(*words: object) -> bytes:
    return (" ".join(str(w) for w in words) + "\n").encode("ascii")


@dataclass
class ParsedText:
    """Header lines plus single-letter records pulled out of a text file."""

    headers: list[tuple[int, list[str]]] = field(default_factory=list)
    values: dict[str, list[np.ndarray]] = field(default_factory=dict)
    counts: dict[str, list[np.ndarray]] = field(default_factory=dict)
    lines: dict[str, list[np.ndarray]] = field(default_factory=dict)

    def header(self, keyword: str) -> list[list[str]]:
        return [words for _, words in self.headers if words[0] == keyword]

    def records(self, letter: str, width: int | None = None) -> np.ndarray:
        """All ``letter`` records as an int array with one row per line.

        When ``width`` is None the width is inferred and must be uniform.
        """
        if letter not in self.values:
            return np.zeros((0, width or 0), dtype=np.int64)
        values = np.concatenate(self.values[letter])
        counts = np.concatenate(self.counts[letter])
        lines = np.concatenate(self.lines[letter])
        expected = width if width is not None else int(counts[0])
        bad = np.flatnonzero(counts != expected)
        if bad.size:
            raise FormatError(
                f"line {int(lines[bad[0]]) + 1}: expected {expected} integers "
                f"after '{letter}', found {int(counts[bad[0]])}"
            )
        return values.reshape(-1, expected)


def parse_text(data: bytes | str) -> ParsedText:
    """Split a text file into header lines and single-letter records.

    Blank lines and ``#`` comments (whole-line or trailing) are ignored.
    """
    if isinstance(data, str):
        data = data.encode("ascii")
    buf = np.frombuffer(data, dtype=np.uint8)
    kind, lead, cut, count, values, err_line, err_code, err_char = _scan(buf)
    if err_code == 1:
        raise FormatError(
            f"line {err_line + 1}: unexpected character {chr(err_char)!r} "
            f"in '{chr(kind[err_line])}' record"
        )
    if err_code == 2:
        raise FormatError(f"line {err_line + 1}: integer too large")
    parsed = ParsedText()
    for i in np.flatnonzero(kind < 0):
        text = data[lead[i]:cut[i]].decode("ascii")
        parsed.headers.append((int(i), text.split()))
    value_kind = np.repeat(kind, count)
    for code in np.unique(kind[kind > 0]):
        letter = chr(int(code))
        line_ids = np.flatnonzero(kind == code)
        parsed.values[letter] = [values[value_kind == code]]
        parsed.counts[letter] = [count[line_ids]]
        parsed.lines[letter] = [line_ids]
    return parsed


@njit(cache=True)
def _is_blank(c):
    return c == _SPACE or c == _TAB or c == _CR


@njit(cache=True)
def _scan(buf):
    """One pass over the bytes: per-line kind (0 blank, -1 header, else the
    record letter), content span, integer count, and all record integers."""
    n = buf.size
    nlines = 0
    ntok = 0
    prev = False
    for i in range(n):
        c = buf[i]
        if c == _NL:
            nlines += 1
        digit = 48 <= c <= 57
        if digit and not prev:
            ntok += 1
        prev = digit
    if n and buf[n - 1] != _NL:
        nlines += 1
    kind = np.zeros(nlines, dtype=np.int64)
    lead = np.zeros(nlines, dtype=np.int64)
    cut = np.zeros(nlines, dtype=np.int64)
    count = np.zeros(nlines, dtype=np.int64)
    values = np.empty(ntok, dtype=np.int64)
    t = 0
    i = 0
    line = 0
    while i < n:
        j = i
        while j < n and buf[j] != _NL:
            j += 1
        e = i
        while e < j and buf[e] != _HASH:
            e += 1
        s = i
        while s < e and _is_blank(buf[s]):
            s += 1
        lead[line] = s
        cut[line] = e
        if s >= e:
            kind[line] = 0
        elif s + 1 >= e or _is_blank(buf[s + 1]):
            kind[line] = buf[s]
            k = s + 1
            cnt = 0
            while k < e:
                c = buf[k]
                if 48 <= c <= 57:
                    v = 0
                    length = 0
                    while k < e and 48 <= buf[k] <= 57:
                        v = v * 10 + (buf[k] - 48)
                        length += 1
                        k += 1
                    if length > 18:
                        return kind, lead, cut, count, values[:t], line, 2, 0
                    values[t] = v
                    t += 1
                    cnt += 1
                elif _is_blank(c):
                    k += 1
                else:
                    return kind, lead, cut, count, values[:t], line, 1, int(c)
            count[line] = cnt
        else:
            kind[line] = -1
        line += 1
        i = j + 1
    return kind, lead, cut, count, values[:t], -1, 0, 0
