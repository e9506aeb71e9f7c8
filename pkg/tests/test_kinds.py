"""Mapping compatibility matrix and scalar value checks."""

import pytest

from screenforge.model.kinds import SCALAR_KINDS, kinds_compatible, validate_value

# Full kind x kind table, written out by hand from the design rules
# (identity; any scalar displays as text; text feeds the text-like entry
# kinds; nothing else coerces). 1 = allowed. Row = source, column = dest.
KINDS = ("text", "multiline", "date", "phone", "photo", "address", "number")
EXPECTED = {
    "text":      {"text": 1, "multiline": 1, "date": 0, "phone": 1, "photo": 0, "address": 1, "number": 0},
    "multiline": {"text": 1, "multiline": 1, "date": 0, "phone": 0, "photo": 0, "address": 0, "number": 0},
    "date":      {"text": 1, "multiline": 0, "date": 1, "phone": 0, "photo": 0, "address": 0, "number": 0},
    "phone":     {"text": 1, "multiline": 0, "date": 0, "phone": 1, "photo": 0, "address": 0, "number": 0},
    "photo":     {"text": 1, "multiline": 0, "date": 0, "phone": 0, "photo": 1, "address": 0, "number": 0},
    "address":   {"text": 1, "multiline": 0, "date": 0, "phone": 0, "photo": 0, "address": 1, "number": 0},
    "number":    {"text": 1, "multiline": 0, "date": 0, "phone": 0, "photo": 0, "address": 0, "number": 1},
}


def test_matrix_matches_enumerated_table():
    assert set(KINDS) == set(SCALAR_KINDS)
    for src in KINDS:
        for dst in KINDS:
            assert kinds_compatible(src, dst) == bool(EXPECTED[src][dst]), f"{src} -> {dst}"


def test_nothing_coerces_into_date_number_photo():
    for strict in ("date", "number", "photo"):
        allowed = [src for src in KINDS if kinds_compatible(src, strict)]
        assert allowed == [strict]


@pytest.mark.parametrize(
    "kind,value,ok",
    [
        ("date", "2013-09-02", True),
        ("date", "not-a-date", False),
        ("date", "2013-9-2", False),
        ("number", "42", True),
        ("number", "-3.50", True),
        ("number", "3.5e2", False),
        ("text", "anything at all", True),
        ("multiline", "line1\nline2", True),
        ("phone", "+1-555-0142", True),
        ("photo", "photo:cam-0001", True),
    ],
)
def test_validate_value(kind, value, ok):
    assert (validate_value(kind, value) is None) == ok


def test_structural_kinds_hold_no_value():
    assert validate_value("table", "x") is not None
    assert validate_value("button", "x") is not None
