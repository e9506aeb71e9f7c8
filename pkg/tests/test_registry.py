"""Discovery, the catalogue workspace file, and binding checks."""

import hashlib
import json
import socket

import pytest
from fastapi import FastAPI

from screenforge.model.types import DataMapping, DataRef
from screenforge.registry.binding_check import check_binding
from screenforge.registry.registry import RegistryError, ServiceRegistry, system_id_for

from .conftest import SIM_SYSTEM_ID, ServerThread, load_fixture_app, sim_catalogue


def _registry(workspace) -> ServiceRegistry:
    return ServiceRegistry(workspace.registry_file, timeout=2.0)


def test_system_id_is_the_host_path_hash(workspace, sim_server):
    registry = _registry(workspace)
    system = registry.register_system(sim_server.base_url, "Enterprise sim")
    # independent oracle: sha256 over hostname + path, first 8 hex chars
    expected = "sys-" + hashlib.sha256(b"127.0.0.1").hexdigest()[:8]
    assert system.system_id == expected == SIM_SYSTEM_ID
    assert system.display_name == "Enterprise sim"


def test_unreachable_endpoint(workspace):
    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        free_port = probe.getsockname()[1]
    registry = _registry(workspace)
    with pytest.raises(RegistryError) as exc:
        registry.register_system(f"http://127.0.0.1:{free_port}", "dead")
    assert exc.value.code == "UNREACHABLE"


def test_non_discovery_endpoint_is_bad_handshake(workspace):
    html = FastAPI()

    @html.get("/services")
    def services():
        from fastapi.responses import HTMLResponse

        return HTMLResponse("<html>hello</html>")

    with ServerThread(html) as server:
        with pytest.raises(RegistryError) as exc:
            _registry(workspace).register_system(server.base_url, "html")
    assert exc.value.code == "BAD_HANDSHAKE"


def test_invalid_url_is_a_usage_error(workspace):
    with pytest.raises(ValueError):
        _registry(workspace).register_system("not a url", "x")


def test_discover_returns_the_five_fixture_services(workspace, sim_server):
    registry = _registry(workspace)
    system = registry.register_system(sim_server.base_url, "sim")
    result = registry.discover(system.system_id)
    assert result.diagnostics == []
    assert {d.service_id for d in result.descriptors} == {
        "getSchedule",
        "getCustomer",
        "getTicket",
        "getTicketHistory",
        "saveSummary",
    }
    assert all(d.system_id == system.system_id for d in result.descriptors)


def test_discover_twice_is_structurally_identical(workspace, sim_server):
    registry = _registry(workspace)
    system = registry.register_system(sim_server.base_url, "sim")
    first = registry.discover(system.system_id).descriptors
    second = registry.discover(system.system_id).descriptors
    assert first == second


def test_empty_system_yields_empty_list(workspace):
    empty = FastAPI()

    @empty.get("/services")
    def services() -> list[str]:
        return []

    with ServerThread(empty) as server:
        registry = _registry(workspace)
        system = registry.register_system(server.base_url, "empty")
        result = registry.discover(system.system_id)
    assert result.descriptors == [] and result.diagnostics == []
    assert registry.list_catalogue(system.system_id) == []


def _three_service_app(bad_one: bool) -> FastAPI:
    app = FastAPI()
    docs = {}
    for i in range(3):
        sid = f"svc{i}"
        docs[sid] = {
            "serviceId": sid,
            "name": f"Service {i}",
            "description": "test",
            "protocol": "http-json",
            "invocationPath": f"/invoke/{sid}",
            "inputs": [],
            "outputs": [{"name": "value", "kind": "text", "required": False}],
        }
    if bad_one:
        del docs["svc1"]["outputs"]

    @app.get("/services")
    def services() -> list[str]:
        return sorted(docs)

    @app.get("/services/{sid}/descriptor")
    def descriptor(sid: str):
        return docs[sid]

    return app


def test_invalid_descriptor_is_reported_and_skipped(workspace):
    with ServerThread(_three_service_app(bad_one=True)) as server:
        registry = _registry(workspace)
        system = registry.register_system(server.base_url, "flaky")
        result = registry.discover(system.system_id)
    assert {d.service_id for d in result.descriptors} == {"svc0", "svc2"}
    assert [d.code for d in result.diagnostics] == ["INVALID_DESCRIPTOR"]
    assert result.diagnostics[0].location == "svc1"
    # schema gate: the invalid descriptor never reaches the workspace file
    stored = json.loads(workspace.registry_file.read_text())
    stored_ids = {s["serviceId"] for s in stored["catalogue"][system.system_id]["services"]}
    assert stored_ids == {"svc0", "svc2"}


def test_catalogue_rows_are_ordered_and_filterable(workspace, sim_server):
    registry = _registry(workspace)
    system = registry.register_system(sim_server.base_url, "sim")
    registry.discover(system.system_id)
    rows = registry.list_catalogue()
    assert [r.service_id for r in rows] == sorted(r.service_id for r in rows)
    assert registry.list_catalogue("sys-unknown") == []
    assert len(registry.list_catalogue(system.system_id)) == 5


def test_two_systems_group_by_system_id(workspace, sim_server):
    registry = _registry(workspace)
    with ServerThread(_three_service_app(bad_one=False)) as other:
        # same machine, different hostname -> distinct deterministic ids
        localhost_url = other.base_url.replace("127.0.0.1", "localhost")
        a = registry.register_system(sim_server.base_url, "sim")
        b = registry.register_system(localhost_url, "other")
        registry.discover(a.system_id)
        registry.discover(b.system_id)
    assert a.system_id != b.system_id
    assert b.system_id == system_id_for(localhost_url)
    rows = registry.list_catalogue()
    keys = [(r.system_id, r.service_id) for r in rows]
    assert keys == sorted(keys)
    assert len(rows) == 8


def test_registry_persists_across_instances(workspace, sim_server):
    registry = _registry(workspace)
    system = registry.register_system(sim_server.base_url, "sim")
    registry.discover(system.system_id)
    reloaded = _registry(workspace)
    assert len(reloaded.list_catalogue()) == 5
    assert reloaded.system(system.system_id).discovery_endpoint == sim_server.base_url


# -- binding checks ---------------------------------------------------------------


def _descriptor(service_id):
    return next(d for d in sim_catalogue() if d.service_id == service_id)


def test_fixture_bindings_all_check_clean():
    app = load_fixture_app()
    for form in app.forms:
        for _, binding in form.bindings():
            descriptor = _descriptor(binding.service_ref.service_id)
            assert check_binding(binding, descriptor, app, form_id=form.id) == []


def test_missing_required_input():
    app = load_fixture_app()
    binding = app.find_form("summary").save
    binding.inputs = [m for m in binding.inputs if m.dest.path != "ticketId"]
    diags = check_binding(binding, _descriptor("saveSummary"), app, form_id="summary")
    assert [d.code for d in diags] == ["MISSING_REQUIRED_INPUT"]


def test_repeating_output_to_scalar_field():
    app = load_fixture_app()
    binding = app.find_form("customer").prepopulate
    binding.service_ref.service_id = "getSchedule"
    binding.inputs = []
    binding.outputs = [
        DataMapping(source=DataRef("serviceOutput", "contacts[*].lastName"), dest=DataRef("field", "lastName"))
    ]
    diags = check_binding(binding, _descriptor("getSchedule"), app, form_id="customer")
    assert [d.code for d in diags] == ["REPEATING_TO_SCALAR"]


def test_scalar_output_fanned_into_table_is_rejected():
    app = load_fixture_app()
    binding = app.find_form("schedule").prepopulate
    binding.outputs.append(
        DataMapping(source=DataRef("serviceOutput", "contacts[*].lastName"), dest=DataRef("field", "tickets[*].id"))
    )
    clean = check_binding(binding, _descriptor("getSchedule"), app, form_id="schedule")
    assert clean == []  # list-to-list with compatible kinds stays fine
    binding.outputs.append(
        DataMapping(source=DataRef("serviceOutput", "contacts"), dest=DataRef("field", "tickets[*].id"))
    )
    diags = check_binding(binding, _descriptor("getSchedule"), app, form_id="schedule")
    assert "INVALID_DATA_REF" in [d.code for d in diags]


def test_unknown_parameter():
    app = load_fixture_app()
    binding = app.find_form("customer").prepopulate
    binding.outputs[0].source.path = "middleName"
    diags = check_binding(binding, _descriptor("getCustomer"), app, form_id="customer")
    assert [d.code for d in diags] == ["UNKNOWN_PARAMETER"]
