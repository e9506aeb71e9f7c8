"""Record-to-record transformation driven by data mappings.

This is the message translation the gateway performs in both directions:
session data -> service request, and service response -> session data.

Semantics:
- the output record contains exactly the mapped destinations;
- an absent source produces no destination (nothing is fabricated);
- a wildcard mapping emits one output row per source list element, order
  preserved (an empty source list emits an empty destination list);
- traversing a scalar (or a list without ``[*]``) as if it were a record
  raises PATH_TYPE_CONFLICT.

Global-scope refs address the ``global`` sub-record, so a session record
looks like ``{"status": "...", "tickets": [...], "global": {...}}``.
"""

from ..model.types import DataMapping, DataRef

_ABSENT = object()


class TransformError(Exception):
    """A mapping path traversed a value of the wrong shape."""

    code = "PATH_TYPE_CONFLICT"


def scoped_segments(ref: DataRef) -> list[tuple[str, bool]]:
    segments = ref.segments()
    if ref.scope == "global":
        return [("global", False)] + segments
    return segments


def _wildcard_index(segments: list[tuple[str, bool]]) -> int | None:
    for i, (_, wild) in enumerate(segments):
        if wild:
            return i
    return None


def _read(record, segments, full_path: str):
    cur = record
    for name, _ in segments:
        if not isinstance(cur, dict):
            raise TransformError(f"path '{full_path}' traverses a non-record value")
        if name not in cur:
            return _ABSENT
        cur = cur[name]
    return cur


def _write(record: dict, segments, value, full_path: str) -> None:
    cur = record
    for name, _ in segments[:-1]:
        nxt = cur.setdefault(name, {})
        if not isinstance(nxt, dict):
            raise TransformError(f"path '{full_path}' writes through a non-record value")
        cur = nxt
    last = segments[-1][0]
    if last in cur and isinstance(cur[last], (dict, list)) and not isinstance(value, type(cur[last])):
        raise TransformError(f"path '{full_path}' overwrites a structured value")
    cur[last] = value


def _ensure_rows(record: dict, segments, full_path: str) -> list:
    cur = record
    for name, _ in segments[:-1]:
        nxt = cur.setdefault(name, {})
        if not isinstance(nxt, dict):
            raise TransformError(f"path '{full_path}' writes through a non-record value")
        cur = nxt
    rows = cur.setdefault(segments[-1][0], [])
    if not isinstance(rows, list):
        raise TransformError(f"path '{full_path}' expects a list destination")
    return rows


def transform(mappings: list[DataMapping], source: dict) -> dict:
    """Apply every mapping to ``source`` and return the assembled record."""
    out: dict = {}
    for m in mappings:
        src_segments = scoped_segments(m.source)
        dst_segments = scoped_segments(m.dest)
        src_wild = _wildcard_index(src_segments)
        dst_wild = _wildcard_index(dst_segments)
        if (src_wild is None) != (dst_wild is None):
            raise TransformError(
                f"mapping '{m.source.path}' -> '{m.dest.path}' repeats on one side only"
            )
        if src_wild is None:
            value = _read(source, src_segments, m.source.path)
            if value is _ABSENT:
                continue
            if isinstance(value, list):
                raise TransformError(f"path '{m.source.path}' reads a list without [*]")
            _write(out, dst_segments, value, m.dest.path)
            continue

        prefix, suffix = src_segments[: src_wild + 1], src_segments[src_wild + 1 :]
        elements = _read(source, prefix, m.source.path)
        if elements is _ABSENT:
            continue
        if not isinstance(elements, list):
            raise TransformError(f"path '{m.source.path}' expects a list, found a scalar")
        d_prefix, d_suffix = dst_segments[: dst_wild + 1], dst_segments[dst_wild + 1 :]
        rows = _ensure_rows(out, d_prefix, m.dest.path)
        while len(rows) < len(elements):
            rows.append({})
        for i, element in enumerate(elements):
            if suffix:
                if not isinstance(element, dict):
                    raise TransformError(f"path '{m.source.path}' traverses a non-record list element")
                value = _read(element, suffix, m.source.path)
                if value is _ABSENT:
                    continue
            else:
                value = element
            if d_suffix:
                row = rows[i]
                if not isinstance(row, dict):
                    raise TransformError(f"path '{m.dest.path}' writes a field into a non-record row")
                _write(row, d_suffix, value, m.dest.path)
            else:
                rows[i] = value
    return out
