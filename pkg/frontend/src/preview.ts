// Live preview: a real gateway session over the current server-side model.
// Taps on rows and buttons drive navigate/save exactly like a device would;
// the device frame toggle changes styling tokens only.

import { Api, ApiError } from './api.js'
import type { FormState } from './model.js'
import { BuilderStore } from './store.js'

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    attrs: Record<string, string> = {},
    text = '',
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag)
    for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value)
    if (text) node.textContent = text
    return node
}

export class PreviewPane {
    sessionId: string | null = null
    state: FormState | null = null
    device: 'ios' | 'android' = 'ios'
    private inflight: Promise<unknown> = Promise.resolve()

    constructor(private host: HTMLElement, private api: Api, private store: BuilderStore) {}

    whenIdle(): Promise<unknown> {
        return this.inflight
    }

    private track<T>(work: Promise<T>): Promise<T> {
        this.inflight = this.inflight.then(() => work.catch(() => undefined))
        return work
    }

    /** Validate first; errors are listed instead of a broken preview. */
    start(): Promise<void> {
        return this.track(this.startInner())
    }

    private async startInner(): Promise<void> {
        if (!this.store.appId) return
        const report = await this.api.validateApp(this.store.appId)
        const errors = report.diagnostics.filter(d => d.severity === 'error')
        if (errors.length > 0) {
            this.renderErrors(errors.map(d => `${d.code} at ${d.location}: ${d.message}`))
            return
        }
        try {
            const created = await this.api.createSession(`app:${this.store.appId}`)
            this.sessionId = created.sessionId
            this.state = created.formState
            this.render()
        } catch (error) {
            if (error instanceof ApiError) {
                this.renderErrors([error.message])
                return
            }
            throw error
        }
    }

    tapRow(tableId: string, rowIndex: number): Promise<void> {
        return this.track(
            this.api.navigate(this.sessionId!, tableId, rowIndex).then(state => {
                this.state = state
                this.render()
            }),
        )
    }

    tapButton(fieldId: string): Promise<void> {
        return this.track(
            this.api.navigate(this.sessionId!, fieldId).then(state => {
                this.state = state
                this.render()
            }),
        )
    }

    enterValue(fieldId: string, value: string): Promise<void> {
        return this.track(
            this.api.setField(this.sessionId!, fieldId, value).then(state => {
                this.state = state
                this.render()
            }),
        )
    }

    tapSave(): Promise<void> {
        return this.track(
            this.api.save(this.sessionId!).then(result => {
                this.toast(result.ok ? 'Saved' : `Save failed: ${result.diagnostics[0]?.message ?? ''}`)
            }),
        )
    }

    private renderErrors(messages: string[]): void {
        this.host.innerHTML = ''
        const list = el('ul', { id: 'preview-errors' })
        for (const message of messages) list.appendChild(el('li', {}, message))
        this.host.appendChild(list)
    }

    private toast(message: string): void {
        let node = this.host.querySelector('#preview-toast') as HTMLElement | null
        if (!node) {
            node = el('div', { id: 'preview-toast' })
            this.host.appendChild(node)
        }
        node.textContent = message
    }

    render(): void {
        this.host.innerHTML = ''
        if (!this.state) return
        const frame = el('div', { id: 'preview-frame', class: `device-${this.device}` })

        const deviceToggle = el('select', { id: 'preview-device' })
        deviceToggle.appendChild(el('option', { value: 'ios' }, 'iOS'))
        deviceToggle.appendChild(el('option', { value: 'android' }, 'Android'))
        deviceToggle.value = this.device
        deviceToggle.addEventListener('change', () => {
            this.device = deviceToggle.value as 'ios' | 'android'
            frame.className = `device-${this.device}`
        })
        this.host.appendChild(deviceToggle)

        frame.appendChild(el('h4', { id: 'preview-title' }, this.state.title))
        for (const field of this.state.fields) {
            if (field.kind === 'table') {
                const table = el('table', { class: 'preview-table', 'data-table': field.id })
                const rows = this.state.tables[field.id] ?? []
                rows.forEach((row, index) => {
                    const tr = el('tr', { class: 'preview-row', 'data-index': String(index) })
                    for (const value of Object.values(row)) tr.appendChild(el('td', {}, value))
                    tr.addEventListener('click', () => this.tapRow(field.id, index))
                    table.appendChild(tr)
                })
                frame.appendChild(table)
            } else if (field.kind === 'button') {
                const button = el('button', { class: 'preview-button', 'data-field': field.id }, field.label || field.id)
                button.addEventListener('click', () => this.tapButton(field.id))
                frame.appendChild(button)
            } else {
                const row = el('div', { class: 'preview-field', 'data-field': field.id })
                row.appendChild(el('label', {}, field.label || field.id))
                const input = el('input', { value: field.value ?? '' })
                if (!field.editable) input.setAttribute('disabled', 'disabled')
                input.addEventListener('change', () => this.enterValue(field.id, input.value))
                row.appendChild(input)
                frame.appendChild(row)
            }
        }
        if (this.state.saveEnabled) {
            const save = el('button', { id: 'preview-save' }, 'Save')
            save.addEventListener('click', () => this.tapSave())
            frame.appendChild(save)
        }
        for (const diag of this.state.diagnostics) {
            frame.appendChild(el('p', { class: 'preview-diagnostic' }, `${diag.code}: ${diag.message}`))
        }
        this.host.appendChild(frame)
    }
}
