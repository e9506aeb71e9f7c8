// Builder gestures, each translated into exactly one EditCommand.
// These are pure so the translation can be unit tested without a server.

import type { BindingDoc, EditCommand, FieldKind, NavigationDoc } from './model.js'
import { fieldPath } from './model.js'

// Palette entries: the capability field kinds carry their device link.
export const PALETTE: { kind: FieldKind; label: string; capability?: string }[] = [
    { kind: 'text', label: 'Single line entry' },
    { kind: 'multiline', label: 'Text' },
    { kind: 'date', label: 'Date' },
    { kind: 'number', label: 'Number' },
    { kind: 'phone', label: 'Phone number', capability: 'dialer' },
    { kind: 'address', label: 'Address', capability: 'location' },
    { kind: 'photo', label: 'Photo', capability: 'camera' },
    { kind: 'table', label: 'Table' },
    { kind: 'button', label: 'Button' },
]

export function addScreenGesture(id: string, title: string): EditCommand {
    return { op: 'addForm', target: '', payload: { id, title } }
}

/** Dropping a palette item onto the canvas. Tables start with one column. */
export function dropFieldGesture(
    formId: string,
    pageId: string,
    kind: FieldKind,
    id: string,
    label: string,
    capability?: string,
): EditCommand {
    const payload: Record<string, unknown> = { id, label, kind }
    if (capability) payload.capability = capability
    if (kind === 'table') {
        payload.editable = false
        payload.columns = [{ id: 'column1', label: 'Column 1', kind: 'text', editable: false }]
    }
    if (kind === 'button') payload.editable = false
    return { op: 'addField', target: `forms/${formId}/pages/${pageId}`, payload }
}

/** Dropping a scalar onto a table adds a column. */
export function addColumnGesture(
    formId: string,
    pageId: string,
    tableId: string,
    id: string,
    label: string,
    kind: FieldKind,
): EditCommand {
    return {
        op: 'addField',
        target: fieldPath(formId, pageId, tableId),
        payload: { id, label, kind, editable: false },
    }
}

/** The 'x' control next to a field or column. */
export function hideGesture(nodePath: string): EditCommand {
    return { op: 'hideField', target: nodePath, payload: {} }
}

export function setPropertyGesture(nodePath: string, property: string, value: unknown): EditCommand {
    return { op: 'setProperty', target: nodePath, payload: { property, value } }
}

export function renameGesture(nodePath: string, newId: string): EditCommand {
    return { op: 'renameNode', target: nodePath, payload: { id: newId } }
}

export function removeGesture(nodePath: string): EditCommand {
    return { op: 'removeNode', target: nodePath, payload: {} }
}

export function addGlobalGesture(name: string, kind: FieldKind): EditCommand {
    return { op: 'addField', target: 'globals', payload: { name, kind } }
}

/** Saving the navigation dialog wires one link onto a table or button. */
export function wireNavigationGesture(nodePath: string, link: NavigationDoc): EditCommand {
    return { op: 'addNavigation', target: nodePath, payload: link as unknown as Record<string, unknown> }
}

/** Saving the mapping dialog replaces the form's binding in one command. */
export function bindServiceGesture(
    formId: string,
    slot: 'prepopulate' | 'save',
    binding: BindingDoc | null,
): EditCommand {
    return { op: 'bindService', target: `forms/${formId}`, payload: { slot, binding } }
}
