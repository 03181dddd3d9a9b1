"""Line-oriented text formats for matroids and encodings.

Matroid records look like ``n=4 r=2 bases=3e``.  Bit i of the basis bitset is
colex vertex i; bits are packed least-significant-bit first into bytes, the
bytes written in increasing order as lowercase hex.  In the example, byte
0x3e = 0b111110 has bit 0 clear, so {1,2} is the only non-basis.

Encoding records look like ``n=6 r=3 S=0,7 Z=38:2;30:1 W=12 T= t=0``.  Ids are
decimal colex vertex ids in increasing order, Z entries are ``hexmask:rank``
pairs with the element mask written as a plain hex integer (bit e-1 for
element e).

Lines starting with ``#`` are header comments and are skipped by readers.
"""
from __future__ import annotations

import re
from math import comb
from typing import Iterable, Iterator

from . import __version__
from .encoder import Encoding, FlatEntry
from .johnson import iter_bits
from .matroid import Matroid, find_exchange_violation, hex_to_bits, to_record


class RecordError(ValueError):
    """A malformed record.  ``column`` is 1-based; ``line`` is set by readers."""

    def __init__(self, message: str, column: int = 1, line: int | None = None):
        self.message = message
        self.column = column
        self.line = line
        super().__init__(self._text())

    def _text(self) -> str:
        where = f"line {self.line}, " if self.line is not None else ""
        return f"{where}column {self.column}: {self.message}"

    def at_line(self, line: int) -> "RecordError":
        self.line = line
        self.args = (self._text(),)
        return self


class ExchangeError(RecordError):
    """The bases in a record break the exchange axiom; ``witness`` is (B1, B2, x)."""

    witness = None


def _fields(line: str, keys: tuple[str, ...]) -> dict[str, tuple[str, int]]:
    """Split ``key=value`` tokens, checking names and order.

    Maps each key to (value, 1-based column of the value).
    """
    out = {}
    tokens = list(re.finditer(r"\S+", line))
    for i, tok in enumerate(tokens):
        col = tok.start() + 1
        key, eq, val = tok.group(0).partition("=")
        if not eq:
            raise RecordError(f"expected key=value, found {tok.group(0)!r}", col)
        if i >= len(keys):
            raise RecordError(f"unexpected field {key!r}", col)
        if key != keys[i]:
            raise RecordError(f"expected field {keys[i]!r}, found {key!r}", col)
        out[key] = (val, col + len(key) + 1)
    if len(tokens) < len(keys):
        raise RecordError(f"missing field {keys[len(tokens)]!r}", len(line) + 1)
    return out


def _int(val: str, col: int, what: str) -> int:
    if not re.fullmatch(r"\d+", val):
        raise RecordError(f"{what} must be a nonnegative integer, found {val!r}", col)
    return int(val)


def _n_r(f: dict) -> tuple[int, int]:
    n = _int(*f["n"], "n")
    r = _int(*f["r"], "r")
    if r > n:
        raise RecordError(f"rank {r} exceeds ground set size {n}", f["r"][1])
    return n, r


def parse_matroid_record(line: str) -> Matroid:
    """Parse and validate one ``n= r= bases=`` record."""
    f = _fields(line.strip(), ("n", "r", "bases"))
    n, r = _n_r(f)
    text, col = f["bases"]
    if not re.fullmatch(r"[0-9a-f]*", text):
        raise RecordError("bases must be lowercase hex", col)
    try:
        bits = hex_to_bits(text, comb(n, r))
    except ValueError as exc:
        raise RecordError(str(exc), col) from None
    if not bits:
        raise RecordError("empty basis family", col)
    bad = find_exchange_violation(n, r, bits)
    if bad is not None:
        err = ExchangeError(
            f"exchange axiom fails for B1={_elems(bad.B1)}, B2={_elems(bad.B2)}, x={bad.x}",
            col,
        )
        err.witness = bad
        raise err
    return Matroid(n, r, bits, check=False)


def _elems(mask: int) -> str:
    return "{" + ",".join(str(b + 1) for b in iter_bits(mask)) + "}"


def format_matroid(M: Matroid) -> str:
    return to_record(M)


def _ids(bits: int) -> str:
    return ",".join(str(i) for i in iter_bits(bits))


def format_encoding(enc: Encoding) -> str:
    Z = ";".join(f"{F.flat:x}:{F.rank}" for F in enc.Z)
    return (f"n={enc.n} r={enc.r} S={_ids(enc.S)} Z={Z} "
            f"W={_ids(enc.W)} T={_ids(enc.T)} t={enc.t}")


def _parse_ids(val: str, col: int, N: int, what: str) -> int:
    if not val:
        return 0
    bits = 0
    prev = -1
    for part in val.split(","):
        i = _int(part, col, what)
        if i >= N:
            raise RecordError(f"{what} id {i} out of range for {N} vertices", col)
        if i <= prev:
            raise RecordError(f"{what} ids must be strictly increasing", col)
        prev = i
        bits |= 1 << i
        col += len(part) + 1
    return bits


def parse_encoding_record(line: str) -> Encoding:
    f = _fields(line.strip(), ("n", "r", "S", "Z", "W", "T", "t"))
    n, r = _n_r(f)
    N = comb(n, r)
    S = _parse_ids(*f["S"], N, "S")
    W = _parse_ids(*f["W"], N, "W")
    T = _parse_ids(*f["T"], N, "T")
    t = _int(*f["t"], "t")
    val, col = f["Z"]
    Z = []
    if val:
        for part in val.split(";"):
            m = re.fullmatch(r"([0-9a-f]+):(\d+)", part)
            if not m:
                raise RecordError(f"Z entry must be hexmask:rank, found {part!r}", col)
            flat = int(m.group(1), 16)
            if flat >> n:
                raise RecordError(f"Z mask {m.group(1)} exceeds {n} elements", col)
            Z.append(FlatEntry(flat, int(m.group(2))))
            col += len(part) + 1
    if bin(T).count("1") != t:
        raise RecordError(f"t={t} but T has {bin(T).count('1')} ids", f["t"][1])
    return Encoding(n, r, S, tuple(Z), W, T, t)


def header(**fields) -> str:
    """``# sparsematroids <version> key=value ...`` with None values omitted."""
    parts = [f"{k}={v}" for k, v in fields.items() if v is not None]
    return " ".join(["# sparsematroids", __version__] + parts)


def data_lines(lines: Iterable[str]) -> Iterator[tuple[int, str]]:
    """(1-based line number, text) for every non-blank, non-comment line."""
    for no, raw in enumerate(lines, 1):
        text = raw.rstrip("\n")
        if text.strip() and not text.lstrip().startswith("#"):
            yield no, text


def read_matroids(lines: Iterable[str]) -> Iterator[Matroid]:
    for no, text in data_lines(lines):
        try:
            yield parse_matroid_record(text)
        except RecordError as exc:
            raise exc.at_line(no) from None


def read_encodings(lines: Iterable[str]) -> Iterator[Encoding]:
    for no, text in data_lines(lines):
        try:
            yield parse_encoding_record(text)
        except RecordError as exc:
            raise exc.at_line(no) from None
