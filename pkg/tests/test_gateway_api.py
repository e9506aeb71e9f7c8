"""The platform HTTP surface: sessions, edits, catalogue, deploy."""

import pytest
from fastapi.testclient import TestClient

from screenforge.deploy.pipeline import deploy_application
from screenforge.gateway.api import create_gateway_app
from screenforge.registry.registry import ServiceRegistry

from .conftest import load_fixture_app


@pytest.fixture
def platform(discovered_workspace):
    """Gateway TestClient with the fixture deployed and available in preview."""
    results = deploy_application(load_fixture_app(), ["ios", "android"], discovered_workspace)
    app = create_gateway_app(discovered_workspace, preview_app=load_fixture_app())
    client = TestClient(app)
    return client, {r.entry.target: r.entry.bundle_id for r in results}


def test_health(platform):
    client, _ = platform
    assert client.get("/health").json() == {"status": "ok"}


def test_session_flow_over_http(platform):
    client, bundles = platform
    created = client.post("/sessions", json={"bundleId": bundles["ios"]})
    assert created.status_code == 200
    session_id = created.json()["sessionId"]
    state = created.json()["formState"]
    assert state["formId"] == "schedule"
    assert len(state["tables"]["tickets"]) == 4

    state = client.post(
        f"/sessions/{session_id}/navigate", json={"navRef": "tickets", "rowIndex": 0}
    ).json()
    assert state["formId"] == "customer"
    assert {f["id"]: f["value"] for f in state["fields"]}["lastName"] == "Smith"

    state = client.post(f"/sessions/{session_id}/open", json={"formId": "summary"}).json()
    assert state["saveEnabled"] is True

    state = client.post(
        f"/sessions/{session_id}/fields", json={"fieldPath": "status", "value": "done"}
    ).json()
    assert {f["id"]: f["value"] for f in state["fields"]}["status"] == "done"

    result = client.post(f"/sessions/{session_id}/save", json={}).json()
    assert result["ok"] is True

    snapshot = client.get(f"/sessions/{session_id}").json()
    assert snapshot["globals"]["currentTicketId"] == "42"
    assert snapshot["history"] == ["schedule", "customer", "summary"]


def test_error_mapping(platform):
    client, bundles = platform
    assert client.post("/sessions", json={"bundleId": "ghost"}).status_code == 404

    session_id = client.post("/sessions", json={"bundleId": bundles["ios"]}).json()["sessionId"]
    assert client.post(f"/sessions/{session_id}/open", json={"formId": "nope"}).status_code == 404
    response = client.post(f"/sessions/{session_id}/navigate", json={"navRef": "tickets"})
    assert response.status_code == 409
    assert response.json()["detail"]["code"] == "ROW_INDEX_REQUIRED"
    response = client.post(
        f"/sessions/{session_id}/navigate", json={"navRef": "tickets", "rowIndex": 9}
    )
    assert response.status_code == 409
    assert response.json()["detail"]["code"] == "ROW_OUT_OF_RANGE"
    assert client.post(f"/sessions/{session_id}/save", json={}).status_code == 409
    assert client.get("/sessions/not-a-session").status_code == 404


def test_preview_bundle_is_available(platform):
    client, _ = platform
    created = client.post("/sessions", json={"bundleId": "preview"})
    assert created.status_code == 200
    assert created.json()["formState"]["formId"] == "schedule"


def test_live_app_sessions_follow_edits(platform):
    client, _ = platform
    created = client.post("/sessions", json={"bundleId": "app:TechSupport"})
    assert created.status_code == 200
    state = created.json()["formState"]
    assert state["formId"] == "schedule"
    assert len(state["tables"]["tickets"]) == 4  # adapters compiled live

    # an accepted edit is visible to the next preview session
    edit = {
        "baseVersion": 1,
        "command": {"op": "setProperty", "target": "forms/schedule", "payload": {"property": "title", "value": "Agenda"}},
    }
    assert client.post("/apps/TechSupport/edits", json=edit).status_code == 200
    again = client.post("/sessions", json={"bundleId": "app:TechSupport"}).json()
    assert again["formState"]["title"] == "Agenda"

    assert client.post("/sessions", json={"bundleId": "app:Nobody"}).status_code == 404


def test_two_previews_have_independent_catalogues(workspace, tmp_path):
    from screenforge.workspace import Workspace

    other = Workspace(tmp_path / "other").ensure()
    a = TestClient(create_gateway_app(workspace, preview_app=load_fixture_app()))
    b = TestClient(create_gateway_app(other))
    assert a.post("/sessions", json={"bundleId": "preview"}).status_code == 200
    assert b.post("/sessions", json={"bundleId": "preview"}).status_code == 404


def test_edit_api_versions_and_conflicts(platform):
    client, _ = platform
    created = client.post("/apps", json={"name": "Inspections"})
    assert created.status_code == 200
    assert created.json() == {
        "appId": "Inspections",
        "version": 1,
        "app": {"name": "Inspections", "version": 1, "globals": [], "forms": []},
    }

    edit = {
        "baseVersion": 1,
        "command": {"op": "addForm", "target": "", "payload": {"id": "walkdown", "title": "Walkdown"}},
    }
    edited = client.post("/apps/Inspections/edits", json=edit)
    assert edited.status_code == 200
    assert edited.json()["version"] == 2
    assert edited.json()["app"]["forms"][0]["id"] == "walkdown"

    stale = client.post("/apps/Inspections/edits", json=edit)
    assert stale.status_code == 409
    assert stale.json()["detail"]["code"] == "VERSION_CONFLICT"

    bad = {
        "baseVersion": 2,
        "command": {"op": "addForm", "target": "", "payload": {"id": "walkdown", "title": "Again"}},
    }
    rejected = client.post("/apps/Inspections/edits", json=bad)
    assert rejected.status_code == 422
    assert rejected.json()["detail"]["diagnostic"]["code"] == "INVALID_PAYLOAD"
    # rejected edits do not advance the version
    assert client.get("/apps/Inspections").json()["version"] == 2


def test_apps_listing_includes_preview(platform):
    client, _ = platform
    assert "TechSupport" in client.get("/apps").json()["apps"]


def test_validation_endpoint_reports_lint(platform):
    client, _ = platform
    report = client.post("/apps/TechSupport/validate").json()
    assert report["diagnostics"] == []
    # unhide the id column: 3 visible columns now lint
    edit = {
        "baseVersion": 1,
        "command": {
            "op": "setProperty",
            "target": "forms/schedule/pages/page1/fields/tickets/columns/id",
            "payload": {"property": "hidden", "value": False},
        },
    }
    assert client.post("/apps/TechSupport/edits", json=edit).status_code == 200
    report = client.post("/apps/TechSupport/validate").json()
    assert [d["code"] for d in report["diagnostics"]] == ["TOO_MANY_VISIBLE_COLUMNS"]


def test_service_catalogue_endpoints(platform):
    client, _ = platform
    rows = client.get("/catalogue").json()["rows"]
    assert len(rows) == 5
    assert [r["serviceId"] for r in rows] == sorted(r["serviceId"] for r in rows)
    descriptor = client.get(f"/catalogue/{rows[0]['systemId']}/getSchedule").json()
    assert descriptor["serviceId"] == "getSchedule"
    assert descriptor["outputs"][0]["name"] == "contacts"
    assert client.get(f"/catalogue/{rows[0]['systemId']}/nope").status_code == 400


def test_deploy_endpoint_publishes_bundles(platform):
    client, _ = platform
    response = client.post("/deploy", json={"appId": "TechSupport", "targets": ["ios", "android"]})
    assert response.status_code == 200
    entries = response.json()["entries"]
    assert [e["target"] for e in entries] == ["ios", "android"]
    listed = client.get("/bundles").json()["entries"]
    assert {e["bundleId"] for e in entries} <= {e["bundleId"] for e in listed}


def test_capability_endpoint(platform):
    client, bundles = platform
    session_id = client.post("/sessions", json={"bundleId": bundles["ios"]}).json()["sessionId"]
    client.post(f"/sessions/{session_id}/navigate", json={"navRef": "tickets", "rowIndex": 0})
    client.post(f"/sessions/{session_id}/navigate", json={"navRef": "viewTicket"})
    state = client.post(f"/sessions/{session_id}/capability", json={"fieldPath": "siteAddress"}).json()
    values = {f["id"]: f["value"] for f in state["fields"]}
    assert values["siteAddress"] == "500 Oceangate Ave, Long Beach, CA 90802"
