"""Shared fixtures: repo paths, the TechSupport fixture, live test servers."""

import json
import threading
import time
from pathlib import Path

import pytest
import uvicorn

from screenforge.backend_sim.api import create_app as create_sim_app
from screenforge.backend_sim.data import DESCRIPTOR_DOCS, FixtureDataset
from screenforge.model.document import parse_app
from screenforge.registry.descriptors import descriptor_from_doc
from screenforge.registry.registry import ServiceRegistry
from screenforge.workspace import Workspace

REPO = Path(__file__).resolve().parents[1]
FIXTURES = REPO / "fixtures"
FIXTURE_APP_PATH = FIXTURES / "techsupport.app.json"
SEED_PATH = FIXTURES / "techsupport.seed.json"
BROKEN_MANIFEST = FIXTURES / "broken_manifest.json"

# deterministic hash of the sim's host ("127.0.0.1"), port-free by design
SIM_SYSTEM_ID = "sys-12ca17b4"


def load_fixture_app():
    return parse_app(FIXTURE_APP_PATH.read_text("utf-8"))


def load_seed() -> dict:
    return json.loads(SEED_PATH.read_text("utf-8"))


def sim_catalogue():
    """The sim's descriptors, stamped the way discovery would stamp them."""
    return [descriptor_from_doc(doc, system_id=SIM_SYSTEM_ID) for doc in DESCRIPTOR_DOCS.values()]


class ServerThread:
    """A live uvicorn server on an ephemeral port, for tests that need real HTTP."""

    def __init__(self, app):
        self._server = uvicorn.Server(
            uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning", lifespan="off")
        )
        self._thread = threading.Thread(target=self._server.run, daemon=True)
        self.app = app
        self.base_url = ""

    def start(self) -> "ServerThread":
        self._thread.start()
        deadline = time.monotonic() + 15
        while not self._server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("test server did not start")
            time.sleep(0.01)
        port = self._server.servers[0].sockets[0].getsockname()[1]
        self.base_url = f"http://127.0.0.1:{port}"
        return self

    def stop(self) -> None:
        self._server.should_exit = True
        self._thread.join(timeout=10)

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()


@pytest.fixture
def sim_server():
    """A fresh backend sim per test (its history and log are mutable)."""
    dataset = FixtureDataset.from_file(SEED_PATH)
    with ServerThread(create_sim_app(dataset)) as server:
        yield server


@pytest.fixture
def workspace(tmp_path):
    return Workspace(tmp_path / "workspace").ensure()


@pytest.fixture
def discovered_workspace(workspace, sim_server):
    """Workspace whose registry has discovered the live sim."""
    registry = ServiceRegistry(workspace.registry_file)
    system = registry.register_system(sim_server.base_url, "Enterprise sim")
    registry.discover(system.system_id)
    return workspace


def sim_log(client_or_url) -> list[dict]:
    import httpx

    return httpx.get(f"{client_or_url}/admin/log", timeout=5).json()["entries"]


def service_counts(base_url) -> dict[str, int]:
    counts: dict[str, int] = {}
    for entry in sim_log(base_url):
        counts[entry["serviceId"]] = counts.get(entry["serviceId"], 0) + 1
    return counts
