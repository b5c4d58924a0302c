/**
 * Session persistence for the entered text.
 *
 * Only the text survives a reload (runs live server-side by design).
 * Falls back to an in-memory map outside a browser so the modules stay
 * testable in node.
 */

const TEXT_KEY = 'plumber.input-text';

const memory = new Map<string, string>();

function store(): Pick<Storage, 'getItem' | 'setItem'> {
  if (typeof sessionStorage !== 'undefined') {
    return sessionStorage;
  }
  return {
    getItem: (key: string) => memory.get(key) ?? null,
    setItem: (key: string, value: string) => void memory.set(key, value),
  };
}

export function loadText(): string {
  return store().getItem(TEXT_KEY) ?? '';
}

export function saveText(text: string): void {
  store().setItem(TEXT_KEY, text);
}
