"""Published-app catalogue: an append-only log file with compaction.

Each line is one event (publish or archive). Replaying the log gives the
current entries; republishing the same (appName, appVersion, target) triple
replaces its entry atomically. Compaction rewrites the file once enough
superseded events accumulate.
"""

import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path

from .bundles import Bundle, DeployError, verify_checksum

COMPACT_AFTER_DEAD_EVENTS = 64


@dataclass
class CatalogueEntry:
    bundle_id: str
    app_name: str
    app_version: int
    target: str
    status: str  # published | archived
    checksum: str

    def to_doc(self) -> dict:
        return {
            "bundleId": self.bundle_id,
            "appName": self.app_name,
            "appVersion": self.app_version,
            "target": self.target,
            "status": self.status,
            "checksum": self.checksum,
        }


class AppCatalogue:
    def __init__(self, log_path: Path):
        self.log_path = Path(log_path)
        self._lock = threading.Lock()

    # -- log replay -----------------------------------------------------------

    def _events(self) -> list[dict]:
        if not self.log_path.exists():
            return []
        events = []
        for line in self.log_path.read_text("utf-8").splitlines():
            line = line.strip()
            if line:
                events.append(json.loads(line))
        return events

    def _replay(self, events: list[dict]) -> dict:
        entries: dict[tuple, CatalogueEntry] = {}
        for ev in events:
            if ev["event"] == "publish":
                e = ev["entry"]
                key = (e["appName"], e["appVersion"], e["target"])
                entries[key] = CatalogueEntry(
                    bundle_id=e["bundleId"],
                    app_name=e["appName"],
                    app_version=e["appVersion"],
                    target=e["target"],
                    status="published",
                    checksum=e["checksum"],
                )
            elif ev["event"] == "archive":
                for entry in entries.values():
                    if entry.bundle_id == ev["bundleId"]:
                        entry.status = "archived"
        return entries

    def _append(self, event: dict, live_entries: int) -> None:
        self.log_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")
        # compact when the log carries far more events than live entries
        if sum(1 for _ in self._events()) - live_entries > COMPACT_AFTER_DEAD_EVENTS:
            self.compact()

    # -- operations -------------------------------------------------------------

    def publish(self, bundle: Bundle) -> CatalogueEntry:
        """Verify the bundle checksum and enter (or replace) its catalogue row."""
        if not verify_checksum(bundle):
            raise DeployError(
                "CHECKSUM_MISMATCH", f"bundle '{bundle.bundle_id}' does not match its checksum"
            )
        entry = CatalogueEntry(
            bundle_id=bundle.bundle_id,
            app_name=bundle.app_name,
            app_version=bundle.app_version,
            target=bundle.target,
            status="published",
            checksum=bundle.checksum,
        )
        with self._lock:
            live = len(self._replay(self._events()))
            self._append({"event": "publish", "entry": entry.to_doc()}, live)
        return entry

    def archive(self, bundle_id: str) -> CatalogueEntry:
        with self._lock:
            entries = self._replay(self._events())
            match = next((e for e in entries.values() if e.bundle_id == bundle_id), None)
            if match is None:
                raise DeployError("UNKNOWN_BUNDLE", f"no catalogue entry for '{bundle_id}'")
            self._append({"event": "archive", "bundleId": bundle_id}, len(entries))
            match.status = "archived"
        return match

    def list_apps(self) -> list[CatalogueEntry]:
        entries = list(self._replay(self._events()).values())
        entries.sort(key=lambda e: (e.app_name, e.target, e.app_version))
        return entries

    def entry_for_bundle(self, bundle_id: str) -> CatalogueEntry | None:
        for entry in self.list_apps():
            if entry.bundle_id == bundle_id:
                return entry
        return None

    def compact(self) -> None:
        """Rewrite the log with one publish (+ optional archive) per live entry."""
        entries = self._replay(self._events())
        tmp = self.log_path.with_suffix(".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            for entry in entries.values():
                fh.write(json.dumps({"event": "publish", "entry": entry.to_doc()}, sort_keys=True) + "\n")
                if entry.status == "archived":
                    fh.write(json.dumps({"event": "archive", "bundleId": entry.bundle_id}, sort_keys=True) + "\n")
        os.replace(tmp, self.log_path)
