"""Type-check a form's service binding against a service descriptor."""

from ..model.kinds import kinds_compatible
from ..model.types import Application, DataRef, Diagnostic, ServiceBinding, error
from ..model.validate import RefError, resolve_field_ref, resolve_global_ref
from .descriptors import ParameterSpec, ServiceDescriptor


def check_binding(
    binding: ServiceBinding,
    descriptor: ServiceDescriptor,
    app: Application,
    form_id: str | None = None,
    location: str | None = None,
) -> list[Diagnostic]:
    """Diagnostics for unknown parameters, kind mismatches, missing required
    inputs, and repetition/arity violations. Never raises.

    ``form_id`` names the form whose fields the binding's app-side refs
    resolve in; when omitted, the form carrying this binding is located.
    """
    form = None
    if form_id is not None:
        form = app.find_form(form_id)
    else:
        for candidate in app.forms:
            if binding in (candidate.prepopulate, candidate.save):
                form = candidate
                break
    base = location or f"forms/{form.id if form else '?'}/binding"
    diags: list[Diagnostic] = []

    mapped_inputs: set[str] = set()
    for i, m in enumerate(binding.inputs):
        mpath = f"{base}/inputs[{i}]"
        dst = _resolve_param_ref(m.dest, descriptor.inputs, "input", mpath, diags)
        src = _resolve_app_ref(m.source, form, app, mpath, diags)
        if dst is not None:
            mapped_inputs.add(m.dest.head())
        _check_pair(src, dst, mpath, diags)

    for p in descriptor.inputs:
        if p.required and p.name not in mapped_inputs:
            diags.append(
                error(
                    "MISSING_REQUIRED_INPUT",
                    base,
                    f"required input '{p.name}' of service '{descriptor.service_id}' is unmapped",
                )
            )

    for i, m in enumerate(binding.outputs):
        mpath = f"{base}/outputs[{i}]"
        src = _resolve_param_ref(m.source, descriptor.outputs, "output", mpath, diags)
        dst = _resolve_app_ref(m.dest, form, app, mpath, diags)
        _check_pair(src, dst, mpath, diags)

    return diags


def _check_pair(src, dst, mpath: str, diags: list[Diagnostic]) -> None:
    if src is None or dst is None:
        return
    src_kind, src_repeats = src
    dst_kind, dst_repeats = dst
    if src_repeats and not dst_repeats:
        diags.append(
            error("REPEATING_TO_SCALAR", mpath, "a repeating value cannot land in a scalar destination")
        )
        return
    if dst_repeats and not src_repeats:
        diags.append(
            error("SCALAR_TO_REPEATING", mpath, "a scalar value cannot fan out into rows")
        )
        return
    if not kinds_compatible(src_kind, dst_kind):
        diags.append(error("TYPE_MISMATCH", mpath, f"cannot map '{src_kind}' into '{dst_kind}'"))


def _resolve_param_ref(
    ref: DataRef, params: list[ParameterSpec], side: str, mpath: str, diags: list[Diagnostic]
) -> tuple[str, bool] | None:
    """Resolve a service parameter ref to (scalar kind, repeats)."""
    try:
        segments = ref.segments()
    except ValueError as exc:
        diags.append(error("INVALID_DATA_REF", mpath, str(exc)))
        return None
    head, head_wild = segments[0]
    param = next((p for p in params if p.name == head), None)
    if param is None:
        diags.append(error("UNKNOWN_PARAMETER", mpath, f"service has no {side} parameter '{head}'"))
        return None
    if not param.is_list():
        if head_wild or len(segments) > 1:
            diags.append(error("INVALID_DATA_REF", mpath, f"'{head}' is a scalar parameter"))
            return None
        return param.kind, False
    if not head_wild or len(segments) != 2 or segments[1][1]:
        diags.append(
            error("INVALID_DATA_REF", mpath, f"list parameter '{head}' is addressed as '{head}[*].<field>'")
        )
        return None
    item = param.find_item(segments[1][0])
    if item is None:
        diags.append(
            error("UNKNOWN_PARAMETER", mpath, f"list parameter '{head}' has no field '{segments[1][0]}'")
        )
        return None
    return item.kind, True


def _resolve_app_ref(ref: DataRef, form, app, mpath: str, diags: list[Diagnostic]) -> tuple[str, bool] | None:
    try:
        if ref.scope == "global":
            return resolve_global_ref(ref, app), False
        if ref.scope == "field":
            if form is None:
                diags.append(
                    error("UNRESOLVED_DATA_REF", mpath, "binding is not attached to a form; cannot resolve fields")
                )
                return None
            return resolve_field_ref(ref, form)
    except (RefError, ValueError) as exc:
        code = exc.code if isinstance(exc, RefError) else "INVALID_DATA_REF"
        diags.append(error(code, mpath, str(exc)))
        return None
    # remaining scopes were already rejected by the structural pass
    return None
