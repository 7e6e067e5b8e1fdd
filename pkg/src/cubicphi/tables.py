"""Text tables of cubic fields and an on-disk cache for generated ones.

The native format is one header line followed by one TAB-separated record
per field::

    # cubicfields v1
    49\t1\t1\t-2\t-1

Records are ``disc a b c d`` with (a, b, c, d) the canonical form, sorted by
(|disc|, disc, a, b, c, d), LF-terminated.  Reading checks every record and
reports the first bad line.  A looser reader accepts tables written by
other tools (any whitespace or commas, optional discriminant column,
polynomial coefficients in either order) and normalises them.
"""

from __future__ import annotations

import io
import json
import logging
import os
import re
import tempfile
from pathlib import Path
from typing import IO, Iterable, Optional

from . import forms
from .fields import CubicField, FieldStore

log = logging.getLogger(__name__)

HEADER = "# cubicfields v1"
VERSION = 1
CACHE_ENV = "CUBIC_TABLE_DIR"

_INT = re.compile(r"0|-?[1-9][0-9]*\Z")


class TableFormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _sort_key(rec):
    disc, a, b, c, d = rec
    return (abs(disc), disc, a, b, c, d)


def _default_coverage(records) -> dict[int, int]:
    cov = {1: 0, -1: 0}
    for rec in records:
        s = 1 if rec[0] > 0 else -1
        cov[s] = max(cov[s], abs(rec[0]))
    return cov


def _check_field(lineno: int, disc: int, F: forms.BinaryCubicForm) -> None:
    if forms.disc(F) != disc:
        raise TableFormatError(lineno, f"discriminant {disc} does not match form {tuple(F)} (disc {forms.disc(F)})")
    if forms.has_rational_root(F):
        raise TableFormatError(lineno, f"form {tuple(F)} is reducible")
    if not forms.is_maximal(F):
        raise TableFormatError(lineno, f"form {tuple(F)} is not maximal")
    if not forms.is_reduced(F):
        raise TableFormatError(lineno, f"form {tuple(F)} is not canonical (expected {tuple(forms.reduce_form(F))})")


def parse_table(
    stream: IO[str], coverage: Optional[dict[int, int]] = None, trusted: bool = False
) -> FieldStore:
    """Read a v1 table into a FieldStore.

    Without ``coverage`` the table is taken to be complete up to its largest
    |disc| of each sign.  ``trusted`` skips the per-record canonicality and
    maximality checks (syntax, discriminant and ordering are always checked);
    it is meant for tables this package wrote itself.
    """
    text = stream.read()
    if not text.startswith(HEADER + "\n"):
        first = text.split("\n", 1)[0]
        raise TableFormatError(1, f"bad header {first!r}, expected {HEADER!r}")
    if not text.endswith("\n"):
        raise TableFormatError(text.count("\n") + 1, "missing final newline")
    records = []
    prev = None
    for lineno, line in enumerate(text.split("\n")[1:-1], start=2):
        parts = line.split("\t")
        if len(parts) != 5 or not all(_INT.match(x) for x in parts):
            raise TableFormatError(lineno, f"expected 5 TAB-separated integers, got {line!r}")
        rec = tuple(int(x) for x in parts)
        disc, F = rec[0], forms.BinaryCubicForm(*rec[1:])
        if disc == 0:
            raise TableFormatError(lineno, "zero discriminant")
        if trusted:
            if forms.disc(F) != disc:
                raise TableFormatError(lineno, f"discriminant {disc} does not match form {tuple(F)}")
        else:
            _check_field(lineno, disc, F)
        if prev is not None:
            if _sort_key(rec) == _sort_key(prev):
                raise TableFormatError(lineno, f"duplicate record {line!r}")
            if _sort_key(rec) < _sort_key(prev):
                raise TableFormatError(lineno, "records out of order")
        prev = rec
        records.append(rec)
    cov = coverage if coverage is not None else _default_coverage(records)
    return FieldStore((CubicField(forms.BinaryCubicForm(*r[1:]), r[0]) for r in records), cov)


def parse_external(
    stream: IO[str], order: str = "descending", coverage: Optional[dict[int, int]] = None
) -> FieldStore:
    """Read a loosely formatted table of cubic polynomials or forms.

    Each non-blank line not starting with '#' holds 4 or 5 integers split by
    whitespace or commas.  With 5, the first is the field discriminant and is
    checked.  The 4 coefficients are for a x^3 + b x^2 + c x + d when
    ``order`` is "descending", or d, c, b, a when it is "ascending".  Every
    entry is replaced by the canonical form of its maximal order.
    """
    if order not in ("descending", "ascending"):
        raise ValueError("order must be 'descending' or 'ascending'")
    seen = {}
    for lineno, line in enumerate(stream, start=1):
        body = line.strip()
        if not body or body.startswith("#"):
            continue
        parts = [x for x in re.split(r"[\s,;]+", body) if x]
        try:
            nums = [int(x) for x in parts]
        except ValueError:
            raise TableFormatError(lineno, f"non-integer entry in {body!r}") from None
        if len(nums) not in (4, 5):
            raise TableFormatError(lineno, f"expected 4 or 5 integers, got {len(nums)}")
        claimed = nums[0] if len(nums) == 5 else None
        coeffs = nums[-4:]
        if order == "ascending":
            coeffs = coeffs[::-1]
        try:
            E = CubicField.from_polynomial(coeffs)
        except ValueError as exc:
            raise TableFormatError(lineno, str(exc)) from None
        if claimed is not None and claimed != E.discriminant:
            raise TableFormatError(lineno, f"stated discriminant {claimed} but the field has {E.discriminant}")
        if E in seen:
            raise TableFormatError(lineno, f"same field as line {seen[E]}")
        seen[E] = lineno
    records = [(E.discriminant, *E.form) for E in seen]
    cov = coverage if coverage is not None else _default_coverage(records)
    return FieldStore(seen, cov)


def _records(store: Iterable[CubicField]):
    return sorted(((E.discriminant, *E.form) for E in store), key=_sort_key)


def emit_table(store: Iterable[CubicField], stream: IO[str]) -> None:
    """Write fields as a v1 table, sorted, one record per line."""
    stream.write(HEADER + "\n")
    for rec in _records(store):
        stream.write("\t".join(str(x) for x in rec) + "\n")


def table_text(store: Iterable[CubicField]) -> str:
    buf = io.StringIO()
    emit_table(store, buf)
    return buf.getvalue()


# --- cache ---

def _cache_name(sign: int, bound: int) -> str:
    return f"cubics_{'pos' if sign > 0 else 'neg'}_{bound}.v{VERSION}"


class TableCache:
    """Generated tables keyed by (sign, bound, format version).

    Each table sits next to a JSON manifest with its header and record
    count; a table whose manifest is missing or disagrees is ignored and
    rebuilt.  Files are written to a temporary name and renamed into place.
    """

    def __init__(self, directory):
        self.dir = Path(directory)

    @classmethod
    def from_env(cls) -> Optional["TableCache"]:
        d = os.environ.get(CACHE_ENV)
        return cls(d) if d else None

    def _paths(self, sign, bound):
        stem = _cache_name(sign, bound)
        return self.dir / f"{stem}.tsv", self.dir / f"{stem}.json"

    def _valid(self, table: Path, manifest: Path, sign: int, bound: int) -> bool:
        try:
            meta = json.loads(manifest.read_text())
        except (OSError, ValueError):
            return False
        if meta.get("version") != VERSION or meta.get("sign") != sign or meta.get("max_abs_disc") != bound:
            return False
        try:
            with table.open() as fh:
                if fh.readline().rstrip("\n") != meta.get("header"):
                    return False
                return sum(1 for _ in fh) == meta.get("records")
        except OSError:
            return False

    def lookup(self, sign: int, bound: int) -> Optional[FieldStore]:
        """A cached store of this sign covering at least ``bound``, if any."""
        if not self.dir.is_dir():
            return None
        best = None
        prefix = f"cubics_{'pos' if sign > 0 else 'neg'}_"
        for path in self.dir.glob(f"{prefix}*.v{VERSION}.tsv"):
            try:
                have = int(path.name[len(prefix):].split(".")[0])
            except ValueError:
                continue
            if have >= bound and (best is None or have < best):
                table, manifest = self._paths(sign, have)
                if self._valid(table, manifest, sign, have):
                    best = have
        if best is None:
            return None
        table, _ = self._paths(sign, best)
        log.info("using cached table %s", table)
        with table.open() as fh:
            return parse_table(fh, coverage={sign: best, -sign: 0}, trusted=True)

    def store(self, sign: int, bound: int, store: FieldStore) -> Path:
        self.dir.mkdir(parents=True, exist_ok=True)
        table, manifest = self._paths(sign, bound)
        fields = [E for E in store if (E.discriminant > 0) == (sign > 0) and abs(E.discriminant) <= bound]
        text = table_text(fields)
        meta = {"version": VERSION, "sign": sign, "max_abs_disc": bound, "header": HEADER, "records": len(fields)}
        for path, payload in ((table, text), (manifest, json.dumps(meta, indent=1) + "\n")):
            fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-")
            with os.fdopen(fd, "w", newline="\n") as fh:
                fh.write(payload)
            os.replace(tmp, path)
        return table


def merge_stores(*stores: FieldStore) -> FieldStore:
    fields = [E for s in stores for E in s]
    cov = {1: max(s.coverage[1] for s in stores), -1: max(s.coverage[-1] for s in stores)}
    return FieldStore(fields, cov)


def obtain_store(
    max_pos: int = 0, max_neg: int = 0, table: Optional[str] = None, workers: int = 1,
    cache: Optional[TableCache] = None,
) -> FieldStore:
    """Fields of each sign up to the given bounds.

    With ``table`` the fields are read from that file (v1 format) and no
    enumeration happens.  Otherwise they are enumerated, going through the
    cache when one is configured.
    """
    if table is not None:
        with open(table) as fh:
            return parse_table(fh)
    if cache is None:
        cache = TableCache.from_env()
    parts = []
    for sign, bound in ((1, max_pos), (-1, max_neg)):
        if bound < 1:
            continue
        got = cache.lookup(sign, bound) if cache else None
        if got is None:
            got = FieldStore.enumerate(**{("max_pos" if sign > 0 else "max_neg"): bound}, workers=workers)
            if cache:
                cache.store(sign, bound, got)
        parts.append(got)
    if not parts:
        return FieldStore()
    return merge_stores(*parts)
