// Wire types mirrored from the platform HTTP API. The server is the source
// of truth for all of these; the builder never mutates a document locally.

export type FieldKind =
    | 'text'
    | 'multiline'
    | 'date'
    | 'phone'
    | 'photo'
    | 'address'
    | 'number'
    | 'table'
    | 'button'

export const SCALAR_KINDS: FieldKind[] = ['text', 'multiline', 'date', 'phone', 'photo', 'address', 'number']

export interface DataRefDoc {
    scope: 'field' | 'row' | 'global' | 'serviceInput' | 'serviceOutput'
    path: string
}

export interface MappingDoc {
    from: DataRefDoc
    to: DataRefDoc
}

export interface NavigationDoc {
    sourceKind: 'button' | 'tableRow'
    target: string
    mappings: MappingDoc[]
}

export interface BindingDoc {
    serviceRef: { systemId: string; serviceId: string }
    inputs: MappingDoc[]
    outputs: MappingDoc[]
}

export interface FieldDoc {
    id: string
    label: string
    kind: FieldKind
    editable: boolean
    hidden: boolean
    capability?: string
    columns?: FieldDoc[]
    rowNavigation?: NavigationDoc
    navigation?: NavigationDoc
}

export interface PageDoc {
    id: string
    fields: FieldDoc[]
}

export interface FormDoc {
    id: string
    title: string
    pages: PageDoc[]
    prepopulate?: BindingDoc
    save?: BindingDoc
}

export interface AppDoc {
    name: string
    version: number
    globals: { name: string; kind: FieldKind }[]
    forms: FormDoc[]
}

export interface Diagnostic {
    severity: 'error' | 'warning'
    code: string
    location: string
    message: string
}

export interface EditCommand {
    op: string
    target: string
    payload: Record<string, unknown>
}

export interface AppEnvelope {
    appId: string
    version: number
    app: AppDoc
}

export interface CatalogueRow {
    systemId: string
    serviceId: string
    name: string
    description: string
}

export interface ParameterDoc {
    name: string
    kind: string
    required: boolean
    items?: ParameterDoc[]
}

export interface DescriptorDoc {
    systemId: string
    serviceId: string
    name: string
    description: string
    invocationPath: string
    inputs: ParameterDoc[]
    outputs: ParameterDoc[]
}

export interface FieldState {
    id: string
    label: string
    kind: FieldKind
    editable: boolean
    value: string | null
}

export interface FormState {
    formId: string
    title: string
    saveEnabled: boolean
    fields: FieldState[]
    tables: Record<string, Record<string, string>[]>
    diagnostics: Diagnostic[]
}

export interface BundleEntry {
    bundleId: string
    appName: string
    appVersion: number
    target: string
    status: string
    checksum: string
}

export function findForm(doc: AppDoc, formId: string): FormDoc | undefined {
    return doc.forms.find(f => f.id === formId)
}

export function findField(form: FormDoc, fieldId: string): FieldDoc | undefined {
    for (const page of form.pages) {
        const hit = page.fields.find(f => f.id === fieldId)
        if (hit) return hit
    }
    return undefined
}

export function fieldPath(formId: string, pageId: string, fieldId: string): string {
    return `forms/${formId}/pages/${pageId}/fields/${fieldId}`
}

/** Every mappable destination of a form: scalar fields plus table columns. */
export function mappableFieldRefs(form: FormDoc): { path: string; kind: FieldKind }[] {
    const refs: { path: string; kind: FieldKind }[] = []
    for (const page of form.pages) {
        for (const field of page.fields) {
            if (field.kind === 'table') {
                for (const col of field.columns ?? []) {
                    refs.push({ path: `${field.id}[*].${col.id}`, kind: col.kind })
                }
            } else if (field.kind !== 'button') {
                refs.push({ path: field.id, kind: field.kind })
            }
        }
    }
    return refs
}

/** Every readable service output as a ref path: scalars and list item fields. */
export function outputParamRefs(descriptor: DescriptorDoc): { path: string; kind: string }[] {
    const refs: { path: string; kind: string }[] = []
    for (const param of descriptor.outputs) {
        if (param.kind === 'list') {
            for (const item of param.items ?? []) {
                refs.push({ path: `${param.name}[*].${item.name}`, kind: item.kind })
            }
        } else {
            refs.push({ path: param.name, kind: param.kind })
        }
    }
    return refs
}
