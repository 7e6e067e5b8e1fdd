import io
import json

import pytest

from cubicphi.fields import CubicField, FieldStore
from cubicphi.tables import (
    HEADER,
    TableCache,
    TableFormatError,
    emit_table,
    obtain_store,
    parse_external,
    parse_table,
    table_text,
)


@pytest.fixture(scope="module")
def store():
    return FieldStore.enumerate(max_pos=5000, max_neg=5000)


def _parse(text, **kw):
    return parse_table(io.StringIO(text), **kw)


def test_header_only():
    s = _parse(HEADER + "\n")
    assert len(s) == 0
    buf = io.StringIO()
    emit_table(FieldStore(), buf)
    assert buf.getvalue() == HEADER + "\n"


def test_single_record():
    s = _parse(HEADER + "\n49\t1\t1\t-2\t-1\n")
    assert [E.discriminant for E in s] == [49]
    assert s.fields_of_disc(49)[0].form == (1, 1, -2, -1)


def test_round_trip_is_byte_exact(store):
    text = table_text(store)
    again = table_text(_parse(text))
    assert again == text
    assert text.count("\n") == len(store) + 1


def test_emit_sorts_unsorted_input(store):
    shuffled = list(store)[::-1]
    assert table_text(shuffled) == table_text(store)


def test_ordering_is_by_abs_then_sign():
    text = table_text([CubicField.from_form((1, 1, 2, 1)), CubicField.from_form((1, 1, -2, -1))])
    assert text.splitlines()[1].startswith("-23\t")


@pytest.mark.parametrize(
    "body, lineno, fragment",
    [
        ("49\t1\t1\t-2\t-2\n", 2, "does not match"),
        ("49 1 1 -2 -1\n", 2, "TAB-separated"),
        ("49\t1\t1\t-2\n", 2, "TAB-separated"),
        ("49\t1\t1\t-2\t+1\n", 2, "TAB-separated"),
        ("49\t1\t1\t-2\t-1\n49\t1\t1\t-2\t-1\n", 3, "duplicate"),
        ("81\t1\t0\t-3\t-1\n49\t1\t1\t-2\t-1\n", 3, "out of order"),
        ("49\t1\t-2\t-1\t1\n", 2, "not canonical"),
        ("-3888\t1\t3\t3\t13\n", 2, "not maximal"),
        ("-4\t1\t0\t1\t0\n", 2, "reducible"),
        ("0\t1\t0\t0\t0\n", 2, "zero"),
    ],
)
def test_malformed_records(body, lineno, fragment):
    with pytest.raises(TableFormatError) as info:
        _parse(HEADER + "\n" + body)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)
    assert fragment in str(info.value)


def test_bad_header_and_missing_newline():
    with pytest.raises(TableFormatError) as info:
        _parse("# cubicfields v2\n")
    assert info.value.lineno == 1
    with pytest.raises(TableFormatError):
        _parse(HEADER + "\n49\t1\t1\t-2\t-1")


def test_error_line_number_deep_in_file(store):
    lines = table_text(store).splitlines(keepends=True)
    lines[300] = lines[300].replace("\t", " ", 1)
    with pytest.raises(TableFormatError) as info:
        _parse("".join(lines))
    assert info.value.lineno == 301


def test_external_dialect():
    text = """# any comment
    1, -1, -4, 1
    2917   1 -1 -13 20

    1 0 -138 413
    """
    s = parse_external(io.StringIO(text))
    assert sorted(E.discriminant for E in s) == [321, 2917, 236277]
    asc = parse_external(io.StringIO("1 -4 -1 1\n"), order="ascending")
    assert [E.discriminant for E in asc] == [321]
    with pytest.raises(TableFormatError) as info:
        parse_external(io.StringIO("1 1 1\n"))
    assert info.value.lineno == 1
    with pytest.raises(TableFormatError) as info:
        parse_external(io.StringIO("1 -1 -4 1\n2 -2 -8 2\n"))
    assert info.value.lineno == 2
    with pytest.raises(TableFormatError):
        parse_external(io.StringIO("999 1 -1 -4 1\n"))


def test_external_normalises_to_enumerated_forms(store):
    lines = [" ".join(str(c) for c in E.poly) for E in store if abs(E.discriminant) < 2000]
    ext = parse_external(io.StringIO("\n".join(lines)))
    native = [E for E in store if abs(E.discriminant) < 2000]
    assert sorted(map(str, ext)) == sorted(map(str, native))


def test_cache_round_trip(tmp_path):
    cache = TableCache(tmp_path)
    a = obtain_store(max_pos=3000, max_neg=2000, cache=cache)
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == ["cubics_neg_2000.v1.json", "cubics_neg_2000.v1.tsv", "cubics_pos_3000.v1.json", "cubics_pos_3000.v1.tsv"]
    meta = json.loads((tmp_path / "cubics_pos_3000.v1.json").read_text())
    assert meta["records"] == sum(1 for E in a if E.discriminant > 0)
    b = obtain_store(max_pos=1000, max_neg=2000, cache=cache)
    assert b.coverage[1] == 3000
    assert table_text(b) == table_text(a)


def test_cache_detects_stale_table(tmp_path):
    cache = TableCache(tmp_path)
    obtain_store(max_pos=2000, cache=cache)
    table = tmp_path / "cubics_pos_2000.v1.tsv"
    table.write_text(table.read_text().rsplit("\n", 2)[0] + "\n")
    assert cache.lookup(1, 2000) is None
    s = obtain_store(max_pos=2000, cache=cache)
    assert len(s) == len(FieldStore.enumerate(max_pos=2000))
    assert cache.lookup(1, 2000) is not None
