// Server-backed builder state. The browser holds no authoritative state:
// every accepted edit returns the whole model, every render reads from the
// latest envelope, and a reload recovers everything with one GET.

import { Api, ApiError } from './api.js'
import type { AppDoc, Diagnostic, EditCommand, FormDoc, PageDoc } from './model.js'
import { findForm } from './model.js'

export interface Selection {
    formId?: string
    pageId?: string
    fieldId?: string
    columnId?: string
}

type Listener = () => void

export class BuilderStore {
    appId: string | null = null
    version = 0
    doc: AppDoc | null = null
    selection: Selection = {}
    diagnostics: Diagnostic[] = []
    lastError: Diagnostic | null = null

    private listeners: Listener[] = []
    private inflight: Promise<unknown> = Promise.resolve()

    constructor(readonly api: Api) {}

    subscribe(listener: Listener): void {
        this.listeners.push(listener)
    }

    private notify(): void {
        for (const listener of this.listeners) listener()
    }

    /** Resolves once every action started so far has settled. */
    whenIdle(): Promise<unknown> {
        return this.inflight
    }

    /** Chain arbitrary async UI work onto the idle tracker (for dialogs). */
    run<T>(work: Promise<T>): Promise<T> {
        return this.track(work)
    }

    private track<T>(work: Promise<T>): Promise<T> {
        this.inflight = this.inflight.then(() => work.catch(() => undefined))
        return work
    }

    private accept(envelope: { appId: string; version: number; app: AppDoc }): void {
        this.appId = envelope.appId
        this.version = envelope.version
        this.doc = envelope.app
        this.lastError = null
        this.notify()
    }

    createApp(name: string): Promise<void> {
        return this.track(
            this.api.createApp(name).then(envelope => {
                this.accept(envelope)
                this.selection = {}
            }),
        )
    }

    load(appId: string): Promise<void> {
        return this.track(
            this.api.getApp(appId).then(envelope => {
                this.accept(envelope)
                this.selection = {}
                if (this.doc && this.doc.forms.length > 0) {
                    this.select({ formId: this.doc.forms[0].id, pageId: this.doc.forms[0].pages[0]?.id })
                }
            }),
        )
    }

    /**
     * Send one gesture's command. Rejected edits surface their diagnostic
     * inline and leave the model untouched; a version conflict reloads the
     * server model (someone else moved first).
     */
    sendEdit(command: EditCommand): Promise<boolean> {
        if (this.appId === null) return Promise.resolve(false)
        const appId = this.appId
        return this.track(
            this.api.postEdit(appId, this.version, command).then(
                envelope => {
                    this.accept(envelope)
                    return true
                },
                (error: unknown) => {
                    if (error instanceof ApiError) {
                        if (error.code() === 'VERSION_CONFLICT') {
                            return this.api.getApp(appId).then(envelope => {
                                this.accept(envelope)
                                this.lastError = {
                                    severity: 'error',
                                    code: 'VERSION_CONFLICT',
                                    location: command.target,
                                    message: 'model changed on the server; reloaded',
                                }
                                this.notify()
                                return false
                            })
                        }
                        this.lastError = error.diagnostic() ?? {
                            severity: 'error',
                            code: error.code() ?? 'EDIT_REJECTED',
                            location: command.target,
                            message: error.message,
                        }
                        this.notify()
                        return false
                    }
                    throw error
                },
            ),
        )
    }

    refreshDiagnostics(): Promise<Diagnostic[]> {
        if (this.appId === null) return Promise.resolve([])
        return this.track(
            this.api.validateApp(this.appId).then(report => {
                this.diagnostics = report.diagnostics
                this.notify()
                return report.diagnostics
            }),
        )
    }

    select(selection: Selection): void {
        this.selection = { ...this.selection, ...selection }
        this.notify()
    }

    currentForm(): FormDoc | undefined {
        if (!this.doc || !this.selection.formId) return undefined
        return findForm(this.doc, this.selection.formId)
    }

    currentPage(): PageDoc | undefined {
        const form = this.currentForm()
        if (!form) return undefined
        return form.pages.find(p => p.id === this.selection.pageId) ?? form.pages[0]
    }
}
