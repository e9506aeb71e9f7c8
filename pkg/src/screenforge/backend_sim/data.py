"""TechSupport fixture backend: dataset, descriptors, and service handlers.

The dataset is seeded from a checked-in file and is the oracle for every
test that asserts on service responses. Only saveSummary mutates state
(it appends a history record); everything else is a pure read.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

SERVICE_IDS = ["getSchedule", "getCustomer", "getTicket", "getTicketHistory", "saveSummary"]


class ServiceFault(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


@dataclass
class FixtureDataset:
    contacts: list[dict] = field(default_factory=list)
    tickets: list[dict] = field(default_factory=list)
    history: list[dict] = field(default_factory=list)

    @classmethod
    def from_file(cls, path: Path) -> "FixtureDataset":
        doc = json.loads(Path(path).read_text("utf-8"))
        dataset = cls(
            contacts=doc["contacts"],
            tickets=doc["tickets"],
            history=doc["history"],
        )
        dataset.check_integrity()
        return dataset

    def check_integrity(self) -> None:
        contact_ids = {c["contactId"] for c in self.contacts}
        ticket_ids = {t["ticketId"] for t in self.tickets}
        for t in self.tickets:
            if t["contactId"] not in contact_ids:
                raise ValueError(f"ticket {t['ticketId']} references unknown contact {t['contactId']}")
        for h in self.history:
            if h["ticketId"] not in ticket_ids:
                raise ValueError(f"history entry references unknown ticket {h['ticketId']}")

    def contact(self, contact_id: str) -> dict | None:
        return next((c for c in self.contacts if c["contactId"] == contact_id), None)

    def ticket(self, ticket_id: str) -> dict | None:
        return next((t for t in self.tickets if t["ticketId"] == ticket_id), None)


# ---------------------------------------------------------------------------
# descriptors (wire documents; the registry stamps its system id on ingest)

DESCRIPTOR_DOCS = {
    "getSchedule": {
        "serviceId": "getSchedule",
        "name": "Get schedule",
        "description": "Today's appointments for the signed-in technician",
        "protocol": "http-json",
        "invocationPath": "/invoke/getSchedule",
        "inputs": [],
        "outputs": [
            {
                "name": "contacts",
                "kind": "list",
                "required": False,
                "items": [
                    {"name": "contactId", "kind": "text", "required": False},
                    {"name": "lastName", "kind": "text", "required": False},
                    {"name": "date", "kind": "date", "required": False},
                ],
            }
        ],
    },
    "getCustomer": {
        "serviceId": "getCustomer",
        "name": "Get customer",
        "description": "Contact details for one customer",
        "protocol": "http-json",
        "invocationPath": "/invoke/getCustomer",
        "inputs": [{"name": "contactId", "kind": "text", "required": True}],
        "outputs": [
            {"name": "contactId", "kind": "text", "required": False},
            {"name": "firstName", "kind": "text", "required": False},
            {"name": "lastName", "kind": "text", "required": False},
            {"name": "phone", "kind": "phone", "required": False},
        ],
    },
    "getTicket": {
        "serviceId": "getTicket",
        "name": "Get ticket",
        "description": "Details of one support ticket",
        "protocol": "http-json",
        "invocationPath": "/invoke/getTicket",
        "inputs": [{"name": "ticketId", "kind": "text", "required": True}],
        "outputs": [
            {"name": "ticketId", "kind": "text", "required": False},
            {"name": "contactId", "kind": "text", "required": False},
            {"name": "date", "kind": "date", "required": False},
            {"name": "status", "kind": "text", "required": False},
            {"name": "description", "kind": "multiline", "required": False},
        ],
    },
    "getTicketHistory": {
        "serviceId": "getTicketHistory",
        "name": "Get ticket history",
        "description": "Work log recorded against one ticket",
        "protocol": "http-json",
        "invocationPath": "/invoke/getTicketHistory",
        "inputs": [{"name": "ticketId", "kind": "text", "required": True}],
        "outputs": [
            {
                "name": "history",
                "kind": "list",
                "required": False,
                "items": [
                    {"name": "date", "kind": "date", "required": False},
                    {"name": "status", "kind": "text", "required": False},
                    {"name": "notes", "kind": "multiline", "required": False},
                ],
            }
        ],
    },
    "saveSummary": {
        "serviceId": "saveSummary",
        "name": "Save work summary",
        "description": "Record the technician's work summary for a ticket",
        "protocol": "http-json",
        "invocationPath": "/invoke/saveSummary",
        "inputs": [
            {"name": "ticketId", "kind": "text", "required": True},
            {"name": "date", "kind": "date", "required": False},
            {"name": "status", "kind": "text", "required": True},
            {"name": "notes", "kind": "multiline", "required": False},
        ],
        "outputs": [{"name": "ack", "kind": "text", "required": False}],
    },
}


def required_inputs(service_id: str) -> list[str]:
    return [p["name"] for p in DESCRIPTOR_DOCS[service_id]["inputs"] if p.get("required")]


# ---------------------------------------------------------------------------
# handlers


def handle_invoke(dataset: FixtureDataset, service_id: str, request: dict) -> dict:
    if service_id not in DESCRIPTOR_DOCS:
        raise ServiceFault(404, f"unknown service '{service_id}'")
    missing = [name for name in required_inputs(service_id) if name not in request]
    if missing:
        raise ServiceFault(400, f"missing required inputs {missing}")

    if service_id == "getSchedule":
        rows = []
        for t in dataset.tickets:
            contact = dataset.contact(t["contactId"]) or {}
            rows.append(
                {
                    "contactId": t["contactId"],
                    "lastName": contact.get("lastName", ""),
                    "date": t["date"],
                }
            )
        return {"contacts": rows}

    if service_id == "getCustomer":
        contact = dataset.contact(request["contactId"])
        if contact is None:
            return {}
        return {
            "contactId": contact["contactId"],
            "firstName": contact["firstName"],
            "lastName": contact["lastName"],
            "phone": contact["phone"],
        }

    if service_id == "getTicket":
        ticket = dataset.ticket(request["ticketId"])
        if ticket is None:
            return {}
        return dict(ticket)

    if service_id == "getTicketHistory":
        rows = [
            {"date": h["date"], "status": h["status"], "notes": h.get("notes", "")}
            for h in dataset.history
            if h["ticketId"] == request["ticketId"]
        ]
        return {"history": rows}

    # saveSummary: the single mutating service
    record = {"ticketId": request["ticketId"], "status": request["status"]}
    for optional in ("date", "notes"):
        if optional in request:
            record[optional] = request[optional]
    record.setdefault("date", "")
    record.setdefault("notes", "")
    dataset.history.append(record)
    return {"ack": "ok"}
