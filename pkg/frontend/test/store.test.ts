import { afterEach, describe, expect, it, vi } from 'vitest'

import { Api } from '../src/api.js'
import { BuilderStore } from '../src/store.js'

type Responder = (url: string, init?: RequestInit) => { status: number; body: unknown }

function fakeFetch(responder: Responder) {
    return vi.fn(async (url: string | URL, init?: RequestInit) => {
        const { status, body } = responder(String(url), init)
        return new Response(JSON.stringify(body), {
            status,
            headers: { 'content-type': 'application/json' },
        })
    })
}

const envelope = (version: number) => ({
    appId: 'Demo',
    version,
    app: { name: 'Demo', version, globals: [], forms: [] },
})

afterEach(() => {
    vi.unstubAllGlobals()
})

describe('builder store', () => {
    it('sends exactly one edit per gesture with the current base version', async () => {
        const calls: any[] = []
        vi.stubGlobal(
            'fetch',
            fakeFetch((url, init) => {
                calls.push({ url, body: init?.body && JSON.parse(init.body as string) })
                if (url.endsWith('/apps')) return { status: 200, body: envelope(1) }
                return { status: 200, body: envelope(2) }
            }),
        )
        const store = new BuilderStore(new Api('http://gateway'))
        await store.createApp('Demo')
        expect(store.version).toBe(1)
        const accepted = await store.sendEdit({ op: 'addForm', target: '', payload: { id: 'f1' } })
        expect(accepted).toBe(true)
        expect(store.version).toBe(2)
        const editCalls = calls.filter(c => c.url.includes('/edits'))
        expect(editCalls.length).toBe(1)
        expect(editCalls[0].body).toEqual({
            baseVersion: 1,
            command: { op: 'addForm', target: '', payload: { id: 'f1' } },
        })
    })

    it('shows the server diagnostic inline and keeps the model on rejection', async () => {
        vi.stubGlobal(
            'fetch',
            fakeFetch(url => {
                if (url.endsWith('/apps')) return { status: 200, body: envelope(1) }
                return {
                    status: 422,
                    body: {
                        detail: {
                            diagnostic: {
                                severity: 'error',
                                code: 'INVALID_PAYLOAD',
                                location: 'forms/f1',
                                message: 'duplicate id',
                            },
                        },
                    },
                }
            }),
        )
        const store = new BuilderStore(new Api('http://gateway'))
        await store.createApp('Demo')
        const accepted = await store.sendEdit({ op: 'addForm', target: '', payload: { id: 'f1' } })
        expect(accepted).toBe(false)
        expect(store.version).toBe(1)
        expect(store.lastError?.code).toBe('INVALID_PAYLOAD')
        expect(store.lastError?.message).toBe('duplicate id')
    })

    it('reloads the server model on a version conflict', async () => {
        let step = 0
        vi.stubGlobal(
            'fetch',
            fakeFetch(url => {
                step += 1
                if (url.endsWith('/apps') && step === 1) return { status: 200, body: envelope(1) }
                if (url.includes('/edits')) {
                    return {
                        status: 409,
                        body: { detail: { code: 'VERSION_CONFLICT', message: 'model is at version 5' } },
                    }
                }
                return { status: 200, body: envelope(5) } // the reload GET
            }),
        )
        const store = new BuilderStore(new Api('http://gateway'))
        await store.createApp('Demo')
        const accepted = await store.sendEdit({ op: 'addForm', target: '', payload: { id: 'f1' } })
        expect(accepted).toBe(false)
        expect(store.version).toBe(5)
        expect(store.lastError?.code).toBe('VERSION_CONFLICT')
    })
})
