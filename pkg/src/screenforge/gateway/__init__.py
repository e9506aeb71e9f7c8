"""Session runtime, adapters, and message transformation.

The FastAPI surface lives in ``screenforge.gateway.api`` and is imported
explicitly; keeping it out of the package init lets the deployer depend on
adapter primitives without dragging the HTTP stack along.
"""

from .adapters import AdapterError, AdapterSpec, AdapterStore, adapter_id_for, generate_adapter, invoke_adapter
from .capabilities import CapabilityHub, CapabilityProvider
from .runtime import GatewayError, GatewayRuntime, Session
from .transform import TransformError, transform

__all__ = [
    "AdapterError",
    "AdapterSpec",
    "AdapterStore",
    "CapabilityHub",
    "CapabilityProvider",
    "GatewayError",
    "GatewayRuntime",
    "Session",
    "TransformError",
    "adapter_id_for",
    "generate_adapter",
    "invoke_adapter",
    "transform",
]
