// Scripted builder walkthrough against the live platform stack:
// backend sim + discovery + gateway run as real processes, and the test
// drives the rendered builder DOM the way a user would - create an app,
// drop a table, grow and hide columns, map service fields in the dialog,
// wire row navigation, preview the populated screen, and deploy for both
// platforms.

import { execFile, spawn, type ChildProcess } from 'node:child_process'
import http from 'node:http'
import net from 'node:net'
import os from 'node:os'
import path from 'node:path'
import fs from 'node:fs'
import { promisify } from 'node:util'
import { afterAll, beforeAll, describe, expect, it } from 'vitest'

import { Api } from '../src/api.js'
import { Builder } from '../src/builder.js'

const execFileAsync = promisify(execFile)
const REPO = path.resolve(__dirname, '..', '..')
const SEED = path.join(REPO, 'fixtures', 'techsupport.seed.json')
const FIXTURE_APP = path.join(REPO, 'fixtures', 'techsupport.app.json')

const children: ChildProcess[] = []
let gatewayUrl = ''
let builder: Builder

function cleanEnv(): NodeJS.ProcessEnv {
    const env = { ...process.env }
    delete env.SCREENFORGE_WORKSPACE
    return env
}

function freePort(): Promise<number> {
    return new Promise(resolve => {
        const server = net.createServer()
        server.listen(0, '127.0.0.1', () => {
            const port = (server.address() as net.AddressInfo).port
            server.close(() => resolve(port))
        })
    })
}

function spawnPython(args: string[]): ChildProcess {
    const child = spawn('python3', args, { cwd: REPO, env: cleanEnv(), stdio: 'ignore' })
    children.push(child)
    return child
}

// plain node http here: window.fetch is same-origin-locked to the gateway
function httpGetStatus(url: string): Promise<number> {
    return new Promise(resolve => {
        const request = http.get(url, response => {
            response.resume()
            resolve(response.statusCode ?? 0)
        })
        request.on('error', () => resolve(0))
    })
}

async function waitFor(url: string, timeoutMs = 60_000): Promise<void> {
    const deadline = Date.now() + timeoutMs
    while (Date.now() < deadline) {
        if ((await httpGetStatus(url)) === 200) return
        await new Promise(resolve => setTimeout(resolve, 100))
    }
    throw new Error(`${url} did not come up`)
}

function q<T extends HTMLElement = HTMLElement>(selector: string): T {
    const node = document.querySelector(selector)
    if (!node) throw new Error(`not in DOM: ${selector}`)
    return node as T
}

function setValue(selector: string, value: string): void {
    q<HTMLInputElement | HTMLSelectElement>(selector).value = value
}

async function click(selector: string): Promise<void> {
    q(selector).click()
    await builder.store.whenIdle()
    await builder.preview.whenIdle()
}

beforeAll(async () => {
    const simPort = await freePort()
    const gatewayPort = await freePort()
    const workspace = fs.mkdtempSync(path.join(os.tmpdir(), 'sf-builder-'))

    spawnPython(['-m', 'screenforge.backend_sim', '--seed', SEED, '--port', String(simPort)])
    await waitFor(`http://127.0.0.1:${simPort}/services`)

    await execFileAsync(
        'python3',
        ['-m', 'screenforge', '--workspace', workspace, 'discover', `http://127.0.0.1:${simPort}`],
        { cwd: REPO, env: cleanEnv() },
    )

    spawnPython([
        '-m',
        'screenforge',
        '--workspace',
        workspace,
        'preview',
        FIXTURE_APP,
        '--port',
        String(gatewayPort),
    ])
    gatewayUrl = `http://127.0.0.1:${gatewayPort}`
    await waitFor(`${gatewayUrl}/health`)
    ;(globalThis as any).happyDOM.setURL(gatewayUrl)
})

afterAll(() => {
    for (const child of children) child.kill('SIGTERM')
})

describe('builder walkthrough', () => {
    it('reproduces the codeless design loop end to end', async () => {
        document.body.innerHTML = '<div id="root"></div>'
        builder = new Builder(q('#root'), new Api(gatewayUrl))
        await builder.store.whenIdle()
        let expectedVersion = 0

        // create a new application
        setValue('#new-app-name', 'FieldOps')
        await click('#new-app-create')
        expectedVersion = 1
        expect(builder.store.appId).toBe('FieldOps')
        expect(builder.store.version).toBe(expectedVersion)

        // add the main screen and drop a table onto it from the palette
        setValue('#new-screen-id', 'jobs')
        await click('#btn-add-screen')
        expectedVersion += 1
        await click('.palette-item[data-kind="table"]')
        expectedVersion += 1
        expect(q('.canvas-field[data-field="table1"]')).toBeTruthy()

        // rename the starter column to "id"
        q('.canvas-column[data-column="column1"]').click()
        setValue('#prop-rename', 'id')
        await click('#btn-rename')
        expectedVersion += 1

        // grow the table: lastName (text) and date columns
        q('.canvas-field[data-field="table1"] .field-head').click()
        setValue('#new-col-id', 'lastName')
        setValue('#new-col-kind', 'text')
        await click('#btn-add-column')
        expectedVersion += 1
        setValue('#new-col-id', 'date')
        setValue('#new-col-kind', 'date')
        await click('#btn-add-column')
        expectedVersion += 1

        // three visible columns do not fit a device screen: lint flags it
        await click('#btn-validate')
        expect(document.querySelector('li.diag[data-code="TOO_MANY_VISIBLE_COLUMNS"]')).toBeTruthy()

        // hiding the id column clears the warning; the column stays listed
        await click('.canvas-column[data-column="id"] .hide-x')
        expectedVersion += 1
        await click('#btn-validate')
        expect(document.querySelector('li.diag[data-code="TOO_MANY_VISIBLE_COLUMNS"]')).toBeNull()
        const hiddenColumn = q('.canvas-column[data-column="id"]')
        expect(hiddenColumn.classList.contains('hidden-node')).toBe(true)

        // a second screen to navigate to, with a field to receive row data
        setValue('#new-screen-id', 'details')
        await click('#btn-add-screen')
        expectedVersion += 1
        await click('.palette-item[data-kind="text"]')
        expectedVersion += 1
        setValue('#prop-rename', 'contactRef')
        await click('#btn-rename')
        expectedVersion += 1

        // back on the jobs screen, open the service mapping dialog
        q('.tree-form[data-form="jobs"]').click()
        await click('#btn-open-mapping')
        setValue('#map-service', 'sys-12ca17b4/getSchedule')
        await click('#map-pick')

        // the walkthrough mapping: service contact id feeds the table's ID column
        setValue('#map-param', 'contacts[*].contactId')
        setValue('#map-field', 'table1[*].id')
        await click('#map-add-link')
        expectedVersion += 1
        expect(
            document.querySelector('li.map-link[data-from="contacts[*].contactId"][data-to="table1[*].id"]'),
        ).toBeTruthy()

        // the dialog refuses a link the server rejects (text into a date column)
        setValue('#map-param', 'contacts[*].contactId')
        setValue('#map-field', 'table1[*].date')
        await click('#map-add-link')
        expectedVersion += 2 // trial edit + rollback, both server round trips
        expect(q('#map-error').textContent).toContain('TYPE_MISMATCH')
        expect(document.querySelector('li.map-link[data-to="table1[*].date"]')).toBeNull()

        // map the remaining visible columns
        setValue('#map-param', 'contacts[*].lastName')
        setValue('#map-field', 'table1[*].lastName')
        await click('#map-add-link')
        expectedVersion += 1
        setValue('#map-param', 'contacts[*].date')
        setValue('#map-field', 'table1[*].date')
        await click('#map-add-link')
        expectedVersion += 1
        await click('#map-close')

        // wire table-row navigation: the hidden id rides along into details
        q('.canvas-field[data-field="table1"] .field-head').click()
        await click('#btn-open-nav')
        setValue('#nav-target', 'details')
        setValue('#nav-source', 'row:id')
        setValue('#nav-dest', 'field:contactRef')
        await click('#nav-add-mapping')
        await click('#nav-save')
        expectedVersion += 1

        // accepted gestures and model versions stay in lockstep
        expect(builder.store.version).toBe(expectedVersion)

        // the model validates clean before preview
        await click('#btn-validate')
        expect(document.querySelectorAll('#diagnostics li').length).toBe(0)

        // live preview: the schedule table is populated from the backend
        await click('#btn-preview')
        expect(q('#preview-title').textContent).toBe('jobs')
        const rows = document.querySelectorAll('tr.preview-row')
        expect(rows.length).toBe(4)
        expect(rows[0].textContent).toContain('Smith')
        // hidden id column stays off the screen
        expect(rows[0].querySelectorAll('td').length).toBe(2)

        // tapping a row navigates and carries the hidden id into the field
        ;(rows[0] as HTMLElement).click()
        await builder.preview.whenIdle()
        expect(q('#preview-title').textContent).toBe('details')
        const carried = q('.preview-field[data-field="contactRef"] input') as HTMLInputElement
        expect(carried.value).toBe('42')

        // deploy for both platforms straight from the builder
        await click('#btn-deploy')
        await click('#deploy-go')
        const entries = document.querySelectorAll('li.deploy-entry')
        expect(entries.length).toBe(2)
        const targets = [...entries].map(entry => entry.getAttribute('data-target')).sort()
        expect(targets).toEqual(['android', 'ios'])
        await click('#deploy-close')

        const catalogue = await new Api(gatewayUrl).bundles()
        const fieldOps = catalogue.entries.filter(e => e.appName === 'FieldOps' && e.status === 'published')
        expect(fieldOps.length).toBe(2)

        // deploying never advanced the model version
        expect(builder.store.version).toBe(expectedVersion)
    })

    it('loses nothing on a browser reload: all state lives on the server', async () => {
        const before = JSON.stringify(builder.store.doc)
        const beforeVersion = builder.store.version

        document.body.innerHTML = '<div id="root"></div>'
        builder = new Builder(q('#root'), new Api(gatewayUrl))
        await builder.store.whenIdle()
        setValue('#app-list', 'FieldOps')
        await click('#app-load')

        expect(builder.store.version).toBe(beforeVersion)
        expect(JSON.stringify(builder.store.doc)).toBe(before)
        // the hidden column survived the reload, still grayed, still listed
        q('.tree-form[data-form="jobs"]').click()
        expect(q('.canvas-column[data-column="id"]').classList.contains('hidden-node')).toBe(true)
    })
})
