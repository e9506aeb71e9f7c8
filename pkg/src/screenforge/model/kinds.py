"""Field kinds, capability links, and the mapping compatibility rules."""

import re

FIELD_KINDS = (
    "text",
    "multiline",
    "date",
    "phone",
    "photo",
    "address",
    "number",
    "table",
    "button",
)

# Kinds that carry a single value; tables and buttons are structural.
SCALAR_KINDS = tuple(k for k in FIELD_KINDS if k not in ("table", "button"))

# Device capability -> the only field kind it may attach to.
CAPABILITY_KINDS = {
    "location": "address",
    "dialer": "phone",
    "camera": "photo",
}

_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_NUMBER_RE = re.compile(r"^-?\d+(\.\d+)?$")


def kinds_compatible(source: str, dest: str) -> bool:
    """Decide whether a value of kind ``source`` may be mapped into ``dest``.

    Rules: same kind always maps; every scalar displays as text; text may
    feed the text-like entry kinds. Nothing else coerces, so date, number
    and photo only accept their own kind.
    """
    if source == dest:
        return True
    if dest == "text":
        return True
    if source == "text" and dest in ("multiline", "phone", "address"):
        return True
    return False


def validate_value(kind: str, raw: str) -> str | None:
    """Check a raw string value against a scalar field kind.

    Returns an error message, or None when the value is acceptable.
    Numbers stay decimal strings end to end so round-trips are exact.
    """
    if kind not in SCALAR_KINDS:
        return f"kind '{kind}' does not hold a scalar value"
    if not isinstance(raw, str):
        return "values are transported as strings"
    if kind == "date" and not _DATE_RE.match(raw):
        return f"'{raw}' is not an ISO-8601 calendar date"
    if kind == "number" and not _NUMBER_RE.match(raw):
        return f"'{raw}' is not a decimal number"
    return None


def value_kind(field_kind: str) -> str:
    """Runtime value kind for a scalar field kind (text-like kinds share 'text')."""
    if field_kind in ("text", "multiline", "phone", "address"):
        return "text"
    return field_kind
