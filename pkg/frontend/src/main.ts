import { Api } from './api.js'
import { Builder } from './builder.js'

const root = document.getElementById('root')
if (root) {
    new Builder(root, new Api(''))
}
