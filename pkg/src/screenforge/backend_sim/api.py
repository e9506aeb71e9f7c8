"""HTTP surface of the simulated enterprise backend.

Serves the discovery protocol, the five TechSupport services, an invocation
log for test assertions, and a fault switch for failure-path tests.
"""

import threading
from datetime import datetime, timezone

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .data import DESCRIPTOR_DOCS, SERVICE_IDS, FixtureDataset, ServiceFault, handle_invoke


class FaultRequest(BaseModel):
    on: bool


def create_app(dataset: FixtureDataset) -> FastAPI:
    app = FastAPI(title="screenforge backend sim")
    app.state.dataset = dataset
    app.state.log = []
    app.state.fault = False
    app.state.lock = threading.Lock()

    @app.get("/services")
    def list_services() -> list[str]:
        return SERVICE_IDS

    @app.get("/services/{service_id}/descriptor")
    def descriptor(service_id: str):
        doc = DESCRIPTOR_DOCS.get(service_id)
        if doc is None:
            return JSONResponse({"error": f"unknown service '{service_id}'"}, status_code=404)
        return doc

    @app.post("/invoke/{service_id}")
    async def invoke(service_id: str, request: Request):
        try:
            body = await request.json()
        except Exception:
            body = {}
        if not isinstance(body, dict):
            body = {}
        with app.state.lock:
            app.state.log.append(
                {
                    "serviceId": service_id,
                    "request": body,
                    "timestamp": datetime.now(timezone.utc).isoformat(),
                    "sourceAddress": request.client.host if request.client else "unknown",
                }
            )
            if app.state.fault:
                return JSONResponse({"error": "injected fault"}, status_code=500)
            try:
                return handle_invoke(app.state.dataset, service_id, body)
            except ServiceFault as exc:
                return JSONResponse({"error": str(exc)}, status_code=exc.status)

    @app.get("/admin/log")
    def admin_log():
        with app.state.lock:
            return {"entries": list(app.state.log)}

    @app.post("/admin/fault")
    def admin_fault(request: FaultRequest):
        with app.state.lock:
            app.state.fault = request.on
        return {"fault": app.state.fault}

    return app
