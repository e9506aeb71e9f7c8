"""Deterministic device-capability stubs.

Fields linked to a device capability (address/location, phone/dialer,
photo/camera) keep working when the capability is absent: they degrade to
plain editable values. Present stubs return configured canned values and
record invocations so tests can assert on them.
"""

from dataclasses import dataclass, field


@dataclass
class CapabilityProvider:
    capability: str  # location | dialer | camera
    canned_value: str | None = None  # value injected into the field, None = side effect only


DEFAULT_PROVIDERS = {
    "location": CapabilityProvider("location", canned_value="500 Oceangate Ave, Long Beach, CA 90802"),
    "camera": CapabilityProvider("camera", canned_value="photo:cam-0001"),
    "dialer": CapabilityProvider("dialer", canned_value=None),
}


@dataclass
class CapabilityHub:
    providers: dict = field(default_factory=lambda: dict(DEFAULT_PROVIDERS))
    invocations: list = field(default_factory=list)  # (capability, field_id, current_value)

    def invoke(self, capability: str, field_id: str, current_value: str | None) -> str | None:
        """Run the stub; returns the new field value or None for no change.

        An absent provider is not an error: the field simply keeps its value.
        """
        self.invocations.append((capability, field_id, current_value))
        provider = self.providers.get(capability)
        if provider is None:
            return None
        return provider.canned_value

    def dial_log(self) -> list:
        return [entry for entry in self.invocations if entry[0] == "dialer"]
