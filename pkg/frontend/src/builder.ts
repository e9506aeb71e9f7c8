// The visual builder shell: app bar, screen tree, canvas, palette,
// properties, diagnostics. Every gesture becomes one EditCommand through
// the store; every render reads back from the server's latest envelope.

import { Api } from './api.js'
import { MappingDialog, NavigationDialog, DeployDialog } from './dialogs.js'
import {
    PALETTE,
    addColumnGesture,
    addGlobalGesture,
    addScreenGesture,
    dropFieldGesture,
    hideGesture,
    removeGesture,
    renameGesture,
    setPropertyGesture,
} from './gestures.js'
import type { FieldDoc, FieldKind } from './model.js'
import { fieldPath } from './model.js'
import { PreviewPane } from './preview.js'
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

export class Builder {
    readonly store: BuilderStore
    readonly preview: PreviewPane
    readonly mappingDialog: MappingDialog
    readonly navigationDialog: NavigationDialog
    readonly deployDialog: DeployDialog

    constructor(readonly root: HTMLElement, readonly api: Api) {
        this.store = new BuilderStore(api)
        this.root.innerHTML = ''
        this.root.appendChild(this.skeleton())
        this.preview = new PreviewPane(this.query('#preview-panel'), api, this.store)
        this.mappingDialog = new MappingDialog(this.query('#dialog-root'), api, this.store)
        this.navigationDialog = new NavigationDialog(this.query('#dialog-root'), this.store)
        this.deployDialog = new DeployDialog(this.query('#dialog-root'), api, this.store)
        this.store.subscribe(() => this.render())
        this.wire()
        this.store.run(this.refreshAppList())
    }

    query<T extends HTMLElement = HTMLElement>(selector: string): T {
        const node = this.root.querySelector(selector)
        if (!node) throw new Error(`missing ${selector}`)
        return node as T
    }

    private skeleton(): HTMLElement {
        const wrap = el('div', { id: 'builder' })
        wrap.innerHTML = `
      <header id="app-bar">
        <input id="new-app-name" placeholder="New application name" />
        <button id="new-app-create">Create</button>
        <select id="app-list"></select>
        <button id="app-load">Open</button>
        <span id="app-title"></span>
        <span id="app-version"></span>
        <button id="btn-validate">Validate</button>
        <button id="btn-preview">Preview</button>
        <button id="btn-deploy">Deploy</button>
      </header>
      <div id="inline-error" class="hidden"></div>
      <main id="layout">
        <aside id="tree-panel">
          <h3>Screens</h3>
          <ul id="tree"></ul>
          <input id="new-screen-id" placeholder="screen id" />
          <button id="btn-add-screen" title="Add screen">+</button>
          <h3>Globals</h3>
          <ul id="globals"></ul>
          <input id="new-global-name" placeholder="global name" />
          <button id="btn-add-global" title="Add global">+</button>
        </aside>
        <section id="canvas-panel">
          <h3 id="canvas-title">No screen selected</h3>
          <div id="canvas"></div>
        </section>
        <aside id="palette-panel">
          <h3>Palette</h3>
          <div id="palette"></div>
        </aside>
        <aside id="props-panel">
          <h3>Properties</h3>
          <div id="props"></div>
        </aside>
      </main>
      <section id="diagnostics-panel">
        <h3>Diagnostics</h3>
        <ul id="diagnostics"></ul>
      </section>
      <section id="preview-panel"></section>
      <div id="dialog-root"></div>
    `
        return wrap
    }

    private wire(): void {
        this.query('#new-app-create').addEventListener('click', () => {
            const name = this.query<HTMLInputElement>('#new-app-name').value.trim()
            if (name) this.store.run(this.store.createApp(name).then(() => this.refreshAppList()))
        })
        this.query('#app-load').addEventListener('click', () => {
            const appId = this.query<HTMLSelectElement>('#app-list').value
            if (appId) this.store.load(appId)
        })
        this.query('#btn-add-screen').addEventListener('click', () => {
            const input = this.query<HTMLInputElement>('#new-screen-id')
            const id = input.value.trim()
            if (!id) return
            this.store.sendEdit(addScreenGesture(id, id)).then(accepted => {
                if (accepted) {
                    input.value = ''
                    this.store.select({ formId: id, pageId: 'page1', fieldId: undefined, columnId: undefined })
                }
            })
        })
        this.query('#btn-add-global').addEventListener('click', () => {
            const input = this.query<HTMLInputElement>('#new-global-name')
            const name = input.value.trim()
            if (!name) return
            this.store.sendEdit(addGlobalGesture(name, 'text')).then(accepted => {
                if (accepted) input.value = ''
            })
        })
        this.query('#btn-validate').addEventListener('click', () => {
            this.store.refreshDiagnostics()
        })
        this.query('#btn-preview').addEventListener('click', () => {
            this.store.run(this.preview.start())
        })
        this.query('#btn-deploy').addEventListener('click', () => {
            this.deployDialog.open()
        })

        const palette = this.query('#palette')
        for (const item of PALETTE) {
            const button = el('button', { class: 'palette-item', 'data-kind': item.kind, draggable: 'true' }, item.label)
            button.addEventListener('click', () => this.dropFromPalette(item.kind, item.capability))
            button.addEventListener('dragstart', event => {
                ;(event as DragEvent).dataTransfer?.setData('text/screenforge-kind', item.kind)
            })
            palette.appendChild(button)
        }
        const canvas = this.query('#canvas')
        canvas.addEventListener('dragover', event => event.preventDefault())
        canvas.addEventListener('drop', event => {
            event.preventDefault()
            const kind = (event as DragEvent).dataTransfer?.getData('text/screenforge-kind') as FieldKind | ''
            if (kind) {
                const item = PALETTE.find(p => p.kind === kind)
                this.dropFromPalette(kind, item?.capability)
            }
        })
    }

    private nextFieldId(kind: FieldKind): string {
        const form = this.store.currentForm()
        let n = 1
        while (form && form.pages.some(p => p.fields.some(f => f.id === `${kind}${n}`))) n += 1
        return `${kind}${n}`
    }

    dropFromPalette(kind: FieldKind, capability?: string): Promise<boolean> {
        const form = this.store.currentForm()
        const page = this.store.currentPage()
        if (!form || !page) return Promise.resolve(false)
        const id = this.nextFieldId(kind)
        const label = PALETTE.find(p => p.kind === kind)?.label ?? kind
        return this.store
            .sendEdit(dropFieldGesture(form.id, page.id, kind, id, label, capability))
            .then(accepted => {
                if (accepted) this.store.select({ fieldId: id, columnId: undefined })
                return accepted
            })
    }

    private async refreshAppList(): Promise<void> {
        const listing = await this.api.listApps()
        const select = this.query<HTMLSelectElement>('#app-list')
        select.innerHTML = ''
        for (const appId of listing.apps) {
            select.appendChild(el('option', { value: appId }, appId))
        }
        if (this.store.appId) select.value = this.store.appId
    }

    // -- rendering -------------------------------------------------------------

    render(): void {
        const { store } = this
        this.query('#app-title').textContent = store.appId ?? ''
        this.query('#app-version').textContent = store.doc ? `v${store.version}` : ''
        const inlineError = this.query('#inline-error')
        if (store.lastError) {
            inlineError.textContent = `${store.lastError.code}: ${store.lastError.message}`
            inlineError.classList.remove('hidden')
        } else {
            inlineError.textContent = ''
            inlineError.classList.add('hidden')
        }
        this.renderTree()
        this.renderCanvas()
        this.renderProps()
        this.renderDiagnostics()
    }

    private renderTree(): void {
        const tree = this.query('#tree')
        tree.innerHTML = ''
        for (const form of this.store.doc?.forms ?? []) {
            const item = el('li', { class: 'tree-form', 'data-form': form.id }, form.title || form.id)
            if (form.id === this.store.selection.formId) item.classList.add('selected')
            item.addEventListener('click', () =>
                this.store.select({ formId: form.id, pageId: form.pages[0]?.id, fieldId: undefined, columnId: undefined }),
            )
            const pages = el('ul', { class: 'tree-pages' })
            for (const page of form.pages) {
                const pageItem = el('li', { class: 'tree-page', 'data-page': page.id }, page.id)
                pageItem.addEventListener('click', event => {
                    event.stopPropagation()
                    this.store.select({ formId: form.id, pageId: page.id, fieldId: undefined, columnId: undefined })
                })
                pages.appendChild(pageItem)
            }
            item.appendChild(pages)
            tree.appendChild(item)
        }
        const globals = this.query('#globals')
        globals.innerHTML = ''
        for (const g of this.store.doc?.globals ?? []) {
            globals.appendChild(el('li', { class: 'tree-global', 'data-global': g.name }, `${g.name} [${g.kind}]`))
        }
    }

    private renderCanvas(): void {
        const canvas = this.query('#canvas')
        const title = this.query('#canvas-title')
        canvas.innerHTML = ''
        const form = this.store.currentForm()
        const page = this.store.currentPage()
        if (!form || !page) {
            title.textContent = 'No screen selected'
            return
        }
        title.textContent = `${form.title || form.id} - ${page.id}`
        for (const field of page.fields) {
            canvas.appendChild(this.renderCanvasField(form.id, page.id, field))
        }
    }

    private renderCanvasField(formId: string, pageId: string, field: FieldDoc): HTMLElement {
        const path = fieldPath(formId, pageId, field.id)
        const row = el('div', { class: 'canvas-field', 'data-field': field.id, 'data-kind': field.kind })
        if (field.hidden) row.classList.add('hidden-node')
        if (field.id === this.store.selection.fieldId) row.classList.add('selected')
        const head = el('div', { class: 'field-head' })
        head.appendChild(el('span', { class: 'field-label' }, `${field.label || field.id} [${field.kind}]`))
        const hide = el('button', { class: 'hide-x', 'data-path': path, title: 'Hide field' }, 'x')
        hide.addEventListener('click', event => {
            event.stopPropagation()
            this.store.sendEdit(hideGesture(path))
        })
        head.appendChild(hide)
        row.appendChild(head)
        row.addEventListener('click', () => this.store.select({ fieldId: field.id, columnId: undefined }))

        if (field.kind === 'table') {
            const columns = el('div', { class: 'canvas-columns' })
            for (const column of field.columns ?? []) {
                const columnPath = `${path}/columns/${column.id}`
                const cell = el('span', { class: 'canvas-column', 'data-column': column.id }, column.label || column.id)
                if (column.hidden) cell.classList.add('hidden-node')
                const colHide = el('button', { class: 'hide-x', 'data-path': columnPath, title: 'Hide column' }, 'x')
                colHide.addEventListener('click', event => {
                    event.stopPropagation()
                    this.store.sendEdit(hideGesture(columnPath))
                })
                cell.appendChild(colHide)
                cell.addEventListener('click', event => {
                    event.stopPropagation()
                    this.store.select({ fieldId: field.id, columnId: column.id })
                })
                columns.appendChild(cell)
            }
            row.appendChild(columns)
        }
        return row
    }

    private renderProps(): void {
        const props = this.query('#props')
        props.innerHTML = ''
        const form = this.store.currentForm()
        const page = this.store.currentPage()
        if (!form || !page) return

        const formRow = el('div', { class: 'prop-row' })
        formRow.appendChild(el('span', {}, `Screen ${form.id}`))
        const mapButton = el('button', { id: 'btn-open-mapping' }, 'Services...')
        mapButton.addEventListener('click', () => this.store.run(this.mappingDialog.open(form.id)))
        formRow.appendChild(mapButton)
        props.appendChild(formRow)

        const field = page.fields.find(f => f.id === this.store.selection.fieldId)
        if (!field) return
        const column = (field.columns ?? []).find(c => c.id === this.store.selection.columnId)
        const node = column ?? field
        const nodePath = column
            ? `${fieldPath(form.id, page.id, field.id)}/columns/${column.id}`
            : fieldPath(form.id, page.id, field.id)

        props.appendChild(el('div', { class: 'prop-row' }, `Selected: ${nodePath}`))

        const labelInput = el('input', { id: 'prop-label', value: node.label })
        labelInput.addEventListener('change', () =>
            this.store.sendEdit(setPropertyGesture(nodePath, 'label', labelInput.value)),
        )
        props.appendChild(this.labelled('Label', labelInput))

        const renameInput = el('input', { id: 'prop-rename', value: node.id })
        const renameButton = el('button', { id: 'btn-rename' }, 'Rename')
        renameButton.addEventListener('click', () =>
            this.store.sendEdit(renameGesture(nodePath, renameInput.value.trim())),
        )
        const renameRow = this.labelled('Id', renameInput)
        renameRow.appendChild(renameButton)
        props.appendChild(renameRow)

        const removeButton = el('button', { id: 'btn-remove' }, 'Delete')
        removeButton.addEventListener('click', () =>
            this.store.sendEdit(removeGesture(nodePath)).then(accepted => {
                if (accepted) this.store.select({ fieldId: undefined, columnId: undefined })
            }),
        )
        props.appendChild(removeButton)

        if (field.kind === 'table' && !column) {
            const colId = el('input', { id: 'new-col-id', placeholder: 'column id' })
            const colKind = el('select', { id: 'new-col-kind' })
            for (const kind of ['text', 'multiline', 'date', 'phone', 'photo', 'address', 'number']) {
                colKind.appendChild(el('option', { value: kind }, kind))
            }
            const addColumn = el('button', { id: 'btn-add-column' }, 'Add column')
            addColumn.addEventListener('click', () => {
                const id = colId.value.trim()
                if (id) {
                    this.store.sendEdit(
                        addColumnGesture(form.id, page.id, field.id, id, id, colKind.value as FieldKind),
                    )
                }
            })
            const row = this.labelled('New column', colId)
            row.appendChild(colKind)
            row.appendChild(addColumn)
            props.appendChild(row)
        }

        if ((field.kind === 'table' || field.kind === 'button') && !column) {
            const navButton = el('button', { id: 'btn-open-nav' }, 'Navigation...')
            navButton.addEventListener('click', () =>
                this.navigationDialog.open(form.id, page.id, field.id, field.kind === 'table' ? 'tableRow' : 'button'),
            )
            props.appendChild(navButton)
        }
    }

    private labelled(name: string, control: HTMLElement): HTMLElement {
        const row = el('div', { class: 'prop-row' })
        row.appendChild(el('label', {}, name))
        row.appendChild(control)
        return row
    }

    private renderDiagnostics(): void {
        const list = this.query('#diagnostics')
        list.innerHTML = ''
        for (const diag of this.store.diagnostics) {
            list.appendChild(
                el(
                    'li',
                    { class: `diag diag-${diag.severity}`, 'data-code': diag.code },
                    `${diag.severity} ${diag.code} at ${diag.location}: ${diag.message}`,
                ),
            )
        }
    }
}
