// The three modal dialogs: service mapping, navigation wiring, deploy.
//
// The mapping dialog never validates links itself; it applies the candidate
// binding as a real edit and asks the server to validate, reverting when
// the server rejects the link. One accepted link = one model version.

import { Api } from './api.js'
import { bindServiceGesture, wireNavigationGesture } from './gestures.js'
import type { BindingDoc, DescriptorDoc, FieldKind, MappingDoc, NavigationDoc } from './model.js'
import { fieldPath, findField, findForm, mappableFieldRefs, outputParamRefs } from './model.js'
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

abstract class Dialog {
    constructor(protected host: HTMLElement) {}

    protected show(content: HTMLElement): void {
        this.close()
        const overlay = el('div', { class: 'dialog-overlay' })
        overlay.appendChild(content)
        this.host.appendChild(overlay)
    }

    close(): void {
        this.host.innerHTML = ''
    }
}

export class MappingDialog extends Dialog {
    private formId = ''
    private slot: 'prepopulate' | 'save' = 'prepopulate'
    private descriptor: DescriptorDoc | null = null

    constructor(host: HTMLElement, private api: Api, private store: BuilderStore) {
        super(host)
    }

    async open(formId: string): Promise<void> {
        this.formId = formId
        this.descriptor = null
        const catalogue = await this.api.catalogue()
        const box = el('div', { class: 'dialog', id: 'mapping-dialog' })
        box.appendChild(el('h3', {}, `Connect ${formId} to a service`))

        if (catalogue.rows.length === 0) {
            box.appendChild(el('p', { id: 'map-empty' }, 'No services discovered yet. Run discovery first.'))
            box.appendChild(this.closeButton())
            this.show(box)
            return
        }

        const slotSelect = el('select', { id: 'map-slot' })
        slotSelect.appendChild(el('option', { value: 'prepopulate' }, 'pre-population service'))
        slotSelect.appendChild(el('option', { value: 'save' }, 'save service'))
        slotSelect.addEventListener('change', () => {
            this.slot = slotSelect.value as 'prepopulate' | 'save'
        })
        box.appendChild(this.labelled('Slot', slotSelect))

        const serviceSelect = el('select', { id: 'map-service' })
        for (const row of catalogue.rows) {
            serviceSelect.appendChild(
                el('option', { value: `${row.systemId}/${row.serviceId}` }, `${row.name} (${row.serviceId})`),
            )
        }
        const pick = el('button', { id: 'map-pick' }, 'Use service')
        pick.addEventListener('click', () =>
            this.store.run(
                this.api.descriptor(...(serviceSelect.value.split('/') as [string, string])).then(descriptor => {
                    this.descriptor = descriptor
                    this.renderLinkEditor(box)
                }),
            ),
        )
        const serviceRow = this.labelled('Service', serviceSelect)
        serviceRow.appendChild(pick)
        box.appendChild(serviceRow)

        box.appendChild(el('div', { id: 'map-editor' }))
        box.appendChild(el('p', { id: 'map-error', class: 'dialog-error' }))
        box.appendChild(this.closeButton())
        this.show(box)
    }

    private currentBinding(): BindingDoc {
        const form = this.store.doc ? findForm(this.store.doc, this.formId) : undefined
        const existing = form?.[this.slot]
        if (
            existing &&
            this.descriptor &&
            existing.serviceRef.systemId === this.descriptor.systemId &&
            existing.serviceRef.serviceId === this.descriptor.serviceId
        ) {
            return existing
        }
        return {
            serviceRef: { systemId: this.descriptor!.systemId, serviceId: this.descriptor!.serviceId },
            inputs: [],
            outputs: [],
        }
    }

    private renderLinkEditor(box: HTMLElement): void {
        const editor = box.querySelector('#map-editor') as HTMLElement
        editor.innerHTML = ''
        const descriptor = this.descriptor!
        const form = findForm(this.store.doc!, this.formId)!

        // outputs: service -> screen
        const outParam = el('select', { id: 'map-param' })
        for (const ref of outputParamRefs(descriptor)) {
            outParam.appendChild(el('option', { value: ref.path }, `${ref.path} (${ref.kind})`))
        }
        const outField = el('select', { id: 'map-field' })
        for (const ref of mappableFieldRefs(form)) {
            outField.appendChild(el('option', { value: ref.path }, `${ref.path} (${ref.kind})`))
        }
        const addOut = el('button', { id: 'map-add-link' }, 'Map output')
        addOut.addEventListener('click', () =>
            this.store.run(this.tryLink({
                from: { scope: 'serviceOutput', path: outParam.value },
                to: { scope: 'field', path: outField.value },
            }, 'outputs', box)),
        )
        const outRow = this.labelled('Output', outParam)
        outRow.appendChild(el('span', {}, ' -> '))
        outRow.appendChild(outField)
        outRow.appendChild(addOut)
        editor.appendChild(outRow)

        // inputs: screen/global -> service
        const inSource = el('select', { id: 'map-input-source' })
        for (const ref of mappableFieldRefs(form)) {
            inSource.appendChild(el('option', { value: `field:${ref.path}` }, `${ref.path} (${ref.kind})`))
        }
        for (const g of this.store.doc?.globals ?? []) {
            inSource.appendChild(el('option', { value: `global:${g.name}` }, `global ${g.name} (${g.kind})`))
        }
        const inParam = el('select', { id: 'map-input-param' })
        for (const param of descriptor.inputs) {
            inParam.appendChild(
                el('option', { value: param.name }, `${param.name} (${param.kind}${param.required ? ', required' : ''})`),
            )
        }
        const addIn = el('button', { id: 'map-add-input' }, 'Map input')
        addIn.addEventListener('click', () => {
            const [scope, ...rest] = inSource.value.split(':')
            this.store.run(this.tryLink({
                from: { scope: scope as 'field' | 'global', path: rest.join(':') },
                to: { scope: 'serviceInput', path: inParam.value },
            }, 'inputs', box))
        })
        const inRow = this.labelled('Input', inSource)
        inRow.appendChild(el('span', {}, ' -> '))
        inRow.appendChild(inParam)
        inRow.appendChild(addIn)
        editor.appendChild(inRow)

        const links = el('ul', { id: 'map-links' })
        editor.appendChild(links)
        this.renderLinks(box)
    }

    private renderLinks(box: HTMLElement): void {
        const list = box.querySelector('#map-links') as HTMLElement | null
        if (!list || !this.descriptor) return
        list.innerHTML = ''
        const binding = this.currentBinding()
        for (const [side, mappings] of [['in', binding.inputs], ['out', binding.outputs]] as const) {
            for (const m of mappings) {
                list.appendChild(
                    el(
                        'li',
                        { class: 'map-link', 'data-side': side, 'data-from': m.from.path, 'data-to': m.to.path },
                        `${m.from.scope} ${m.from.path} -> ${m.to.scope} ${m.to.path}`,
                    ),
                )
            }
        }
    }

    /**
     * Add one link by applying the grown binding as a real edit, then asking
     * the server to validate. A rejected link is rolled back and its
     * diagnostic shown; the dialog never second-guesses the server.
     */
    private async tryLink(link: MappingDoc, side: 'inputs' | 'outputs', box: HTMLElement): Promise<boolean> {
        const error = box.querySelector('#map-error') as HTMLElement
        error.textContent = ''
        const previous = findForm(this.store.doc!, this.formId)?.[this.slot] ?? null
        const grown = this.currentBinding()
        const candidate: BindingDoc = {
            serviceRef: grown.serviceRef,
            inputs: side === 'inputs' ? [...grown.inputs, link] : grown.inputs,
            outputs: side === 'outputs' ? [...grown.outputs, link] : grown.outputs,
        }
        const accepted = await this.store.sendEdit(bindServiceGesture(this.formId, this.slot, candidate))
        if (!accepted) {
            error.textContent = this.store.lastError?.message ?? 'edit rejected'
            return false
        }
        const diagnostics = await this.store.refreshDiagnostics()
        const prefix = `forms/${this.formId}/${this.slot}`
        const offending = diagnostics.filter(d => d.severity === 'error' && d.location.startsWith(prefix))
        if (offending.length > 0) {
            await this.store.sendEdit(bindServiceGesture(this.formId, this.slot, previous))
            await this.store.refreshDiagnostics()
            error.textContent = `${offending[0].code}: ${offending[0].message}`
            this.renderLinks(box)
            return false
        }
        this.renderLinks(box)
        return true
    }

    private labelled(name: string, control: HTMLElement): HTMLElement {
        const row = el('div', { class: 'dialog-row' })
        row.appendChild(el('label', {}, name))
        row.appendChild(control)
        return row
    }

    private closeButton(): HTMLElement {
        const button = el('button', { id: 'map-close' }, 'Done')
        button.addEventListener('click', () => this.close())
        return button
    }
}

export class NavigationDialog extends Dialog {
    private draft: MappingDoc[] = []

    constructor(host: HTMLElement, private store: BuilderStore) {
        super(host)
    }

    open(formId: string, pageId: string, fieldId: string, sourceKind: 'tableRow' | 'button'): void {
        this.draft = []
        const doc = this.store.doc!
        const form = findForm(doc, formId)!
        const field = findField(form, fieldId)!
        const box = el('div', { class: 'dialog', id: 'nav-dialog' })
        box.appendChild(el('h3', {}, `Navigation from ${fieldId}`))

        const target = el('select', { id: 'nav-target' })
        for (const candidate of doc.forms) {
            if (candidate.id !== formId) target.appendChild(el('option', { value: candidate.id }, candidate.title || candidate.id))
        }
        box.appendChild(this.labelled('Target screen', target))

        const source = el('select', { id: 'nav-source' })
        if (sourceKind === 'tableRow') {
            for (const column of field.columns ?? []) {
                source.appendChild(el('option', { value: `row:${column.id}` }, `row ${column.id} (${column.kind})`))
            }
        }
        for (const ref of mappableFieldRefs(form)) {
            if (!ref.path.includes('[*]')) source.appendChild(el('option', { value: `field:${ref.path}` }, `${ref.path} (${ref.kind})`))
        }
        for (const g of doc.globals) {
            source.appendChild(el('option', { value: `global:${g.name}` }, `global ${g.name}`))
        }

        const dest = el('select', { id: 'nav-dest' })
        const renderDest = () => {
            dest.innerHTML = ''
            const targetForm = findForm(doc, target.value)
            for (const ref of targetForm ? mappableFieldRefs(targetForm) : []) {
                if (!ref.path.includes('[*]')) dest.appendChild(el('option', { value: `field:${ref.path}` }, `${ref.path} (${ref.kind})`))
            }
            for (const g of doc.globals) {
                dest.appendChild(el('option', { value: `global:${g.name}` }, `global ${g.name}`))
            }
        }
        renderDest()
        target.addEventListener('change', renderDest)

        const add = el('button', { id: 'nav-add-mapping' }, 'Add mapping')
        const list = el('ul', { id: 'nav-mappings' })
        add.addEventListener('click', () => {
            const [srcScope, ...src] = source.value.split(':')
            const [dstScope, ...dst] = dest.value.split(':')
            this.draft.push({
                from: { scope: srcScope as MappingDoc['from']['scope'], path: src.join(':') },
                to: { scope: dstScope as MappingDoc['to']['scope'], path: dst.join(':') },
            })
            list.appendChild(el('li', { class: 'nav-mapping' }, `${source.value} -> ${dest.value}`))
        })
        const pickRow = this.labelled('Pass', source)
        pickRow.appendChild(el('span', {}, ' -> '))
        pickRow.appendChild(dest)
        pickRow.appendChild(add)
        box.appendChild(pickRow)
        box.appendChild(list)
        box.appendChild(el('p', { id: 'nav-error', class: 'dialog-error' }))

        const save = el('button', { id: 'nav-save' }, 'Wire navigation')
        save.addEventListener('click', () => {
            const link: NavigationDoc = { sourceKind, target: target.value, mappings: this.draft }
            this.store.run(
                this.store
                    .sendEdit(wireNavigationGesture(fieldPath(formId, pageId, fieldId), link))
                    .then(accepted => {
                        if (accepted) {
                            this.close()
                        } else {
                            ;(box.querySelector('#nav-error') as HTMLElement).textContent =
                                this.store.lastError?.message ?? 'edit rejected'
                        }
                    }),
            )
        })
        box.appendChild(save)
        const cancel = el('button', { id: 'nav-close' }, 'Cancel')
        cancel.addEventListener('click', () => this.close())
        box.appendChild(cancel)
        this.show(box)
    }

    private labelled(name: string, control: HTMLElement): HTMLElement {
        const row = el('div', { class: 'dialog-row' })
        row.appendChild(el('label', {}, name))
        row.appendChild(control)
        return row
    }
}

export class DeployDialog extends Dialog {
    constructor(host: HTMLElement, private api: Api, private store: BuilderStore) {
        super(host)
    }

    open(): void {
        const box = el('div', { class: 'dialog', id: 'deploy-dialog' })
        box.appendChild(el('h3', {}, `Deploy ${this.store.appId ?? ''}`))
        const ios = el('input', { type: 'checkbox', id: 'deploy-ios', checked: 'checked' })
        const android = el('input', { type: 'checkbox', id: 'deploy-android', checked: 'checked' })
        const iosRow = el('div', { class: 'dialog-row' })
        iosRow.appendChild(ios)
        iosRow.appendChild(el('label', {}, 'iOS'))
        const androidRow = el('div', { class: 'dialog-row' })
        androidRow.appendChild(android)
        androidRow.appendChild(el('label', {}, 'Android'))
        box.appendChild(iosRow)
        box.appendChild(androidRow)
        const go = el('button', { id: 'deploy-go' }, 'Deploy')
        const entries = el('ul', { id: 'deploy-entries' })
        const error = el('p', { id: 'deploy-error', class: 'dialog-error' })
        go.addEventListener('click', () => {
            const targets = [ios.checked ? 'ios' : '', android.checked ? 'android' : ''].filter(Boolean)
            error.textContent = ''
            entries.innerHTML = ''
            this.store.run(
                this.api.deploy(this.store.appId!, targets).then(
                    result => {
                        for (const entry of result.entries) {
                            entries.appendChild(
                                el(
                                    'li',
                                    { class: 'deploy-entry', 'data-target': entry.target, 'data-bundle': entry.bundleId },
                                    `${entry.bundleId} (${entry.checksum.slice(0, 12)}...)`,
                                ),
                            )
                        }
                    },
                    (err: any) => {
                        error.textContent = err?.message ?? String(err)
                    },
                ),
            )
        })
        box.appendChild(go)
        box.appendChild(entries)
        box.appendChild(error)
        const close = el('button', { id: 'deploy-close' }, 'Close')
        close.addEventListener('click', () => this.close())
        box.appendChild(close)
        this.show(box)
    }
}
