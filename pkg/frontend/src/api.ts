// Thin typed client for the platform service. Every builder interaction
// goes through here; nothing is cached beyond what the store holds.

import type {
    AppEnvelope,
    BindingDoc,
    BundleEntry,
    CatalogueRow,
    DescriptorDoc,
    Diagnostic,
    EditCommand,
    FormState,
} from './model.js'

export class ApiError extends Error {
    status: number
    detail: any

    constructor(status: number, detail: any) {
        super(typeof detail === 'object' && detail?.message ? detail.message : `HTTP ${status}`)
        this.status = status
        this.detail = detail
    }

    diagnostic(): Diagnostic | undefined {
        return this.detail?.diagnostic
    }

    code(): string | undefined {
        return this.detail?.code ?? this.detail?.diagnostic?.code
    }
}

export class Api {
    constructor(private base: string = '') {}

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const response = await fetch(this.base + path, {
            method,
            headers: body === undefined ? {} : { 'content-type': 'application/json' },
            body: body === undefined ? undefined : JSON.stringify(body),
        })
        const text = await response.text()
        const parsed = text ? JSON.parse(text) : null
        if (!response.ok) {
            throw new ApiError(response.status, parsed?.detail ?? parsed)
        }
        return parsed as T
    }

    // design time -----------------------------------------------------------

    listApps(): Promise<{ apps: string[] }> {
        return this.request('GET', '/apps')
    }

    createApp(name: string): Promise<AppEnvelope> {
        return this.request('POST', '/apps', { name })
    }

    getApp(appId: string): Promise<AppEnvelope> {
        return this.request('GET', `/apps/${appId}`)
    }

    postEdit(appId: string, baseVersion: number, command: EditCommand): Promise<AppEnvelope> {
        return this.request('POST', `/apps/${appId}/edits`, { baseVersion, command })
    }

    validateApp(appId: string): Promise<{ diagnostics: Diagnostic[] }> {
        return this.request('POST', `/apps/${appId}/validate`)
    }

    catalogue(): Promise<{ rows: CatalogueRow[] }> {
        return this.request('GET', '/catalogue')
    }

    descriptor(systemId: string, serviceId: string): Promise<DescriptorDoc> {
        return this.request('GET', `/catalogue/${systemId}/${serviceId}`)
    }

    deploy(appId: string, targets: string[]): Promise<{ entries: BundleEntry[] }> {
        return this.request('POST', '/deploy', { appId, targets })
    }

    bundles(): Promise<{ entries: BundleEntry[] }> {
        return this.request('GET', '/bundles')
    }

    // runtime sessions --------------------------------------------------------

    createSession(bundleId: string): Promise<{ sessionId: string; formState: FormState }> {
        return this.request('POST', '/sessions', { bundleId })
    }

    openForm(sessionId: string, formId: string, navParams: Record<string, string> = {}): Promise<FormState> {
        return this.request('POST', `/sessions/${sessionId}/open`, { formId, navParams })
    }

    setField(sessionId: string, fieldPath: string, value: string): Promise<FormState> {
        return this.request('POST', `/sessions/${sessionId}/fields`, { fieldPath, value })
    }

    navigate(sessionId: string, navRef: string, rowIndex?: number): Promise<FormState> {
        return this.request('POST', `/sessions/${sessionId}/navigate`, { navRef, rowIndex: rowIndex ?? null })
    }

    save(sessionId: string): Promise<{ ok: boolean; acknowledgment: any; diagnostics: Diagnostic[] }> {
        return this.request('POST', `/sessions/${sessionId}/save`, {})
    }

    snapshot(sessionId: string): Promise<any> {
        return this.request('GET', `/sessions/${sessionId}`)
    }

    health(): Promise<{ status: string }> {
        return this.request('GET', '/health')
    }
}

export type BindingPayload = BindingDoc | null
