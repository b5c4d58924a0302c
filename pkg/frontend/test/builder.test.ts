import { describe, expect, it } from 'vitest';

import {
  chooseSlot,
  composeView,
  emptyBuilderState,
  isComplete,
  setLinkingMode,
  toSelectionBody,
} from '../src/builder.js';
import type { ComponentInfo } from '../src/types.js';
import { TOY_COMPONENTS } from './mockGateway.js';

const TWO_KG_COMPONENTS: ComponentInfo[] = [
  ...TOY_COMPONENTS,
  { id: 'dbp-entity-linker', name: 'DBpedia entity linker', task: 'entity_linking',
    kgs: ['dbpedia'], target: { kind: 'remote', ref: 'http://linker/el' }, version: '1' },
  { id: 'dbp-relation-linker', name: 'DBpedia relation linker', task: 'relation_linking',
    kgs: ['dbpedia'], target: { kind: 'remote', ref: 'http://linker/rl' }, version: '1' },
];

function fullSelection() {
  let state = emptyBuilderState();
  state = chooseSlot(TOY_COMPONENTS, state, 'coref', 'coref-recency');
  state = chooseSlot(TOY_COMPONENTS, state, 'extractor', 'verb-extractor');
  state = chooseSlot(TOY_COMPONENTS, state, 'entity_linker', 'alias-entity-linker');
  state = chooseSlot(TOY_COMPONENTS, state, 'relation_linker', 'alias-relation-linker');
  state = chooseSlot(TOY_COMPONENTS, state, 'kg', 'toykg');
  return state;
}

describe('composeView', () => {
  it('renders empty groups and a disabled run button without components', () => {
    const view = composeView([], emptyBuilderState());
    expect(view.slots.every((g) => g.options.length === 0)).toBe(true);
    expect(view.kgOptions).toEqual([]);
    expect(view.runEnabled).toBe(false);
  });

  it('enables run once every slot is chosen consistently', () => {
    const state = fullSelection();
    const view = composeView(TOY_COMPONENTS, state);
    expect(view.complete).toBe(true);
    expect(view.runEnabled).toBe(true);
  });

  it('leaves run disabled while any slot is missing', () => {
    let state = emptyBuilderState();
    state = chooseSlot(TOY_COMPONENTS, state, 'coref', 'coref-recency');
    state = chooseSlot(TOY_COMPONENTS, state, 'extractor', 'verb-extractor');
    expect(composeView(TOY_COMPONENTS, state).runEnabled).toBe(false);
  });

  it('restricts linking options to the picked KG', () => {
    let state = emptyBuilderState();
    state = chooseSlot(TWO_KG_COMPONENTS, state, 'kg', 'dbpedia');
    const view = composeView(TWO_KG_COMPONENTS, state);
    const el = view.slots.find((g) => g.slot === 'entity_linker');
    const rl = view.slots.find((g) => g.slot === 'relation_linker');
    expect(el?.options.map((o) => o.id)).toEqual(['dbp-entity-linker']);
    expect(rl?.options.map((o) => o.id)).toEqual(['dbp-relation-linker']);
  });

  it('narrows KG options after a dbpedia-only entity linker is chosen', () => {
    let state = emptyBuilderState();
    state = chooseSlot(TWO_KG_COMPONENTS, state, 'entity_linker', 'dbp-entity-linker');
    const view = composeView(TWO_KG_COMPONENTS, state);
    expect(view.kgOptions).toEqual(['dbpedia']);
  });

  it('clears linkers that stop aligning when the KG changes', () => {
    let state = fullSelection();
    state = chooseSlot(TWO_KG_COMPONENTS, state, 'kg', 'dbpedia');
    expect(state.entityLinker).toBeNull();
    expect(state.relationLinker).toBeNull();
  });

  it('switches to a single joint slot in joint mode', () => {
    const state = setLinkingMode(emptyBuilderState(), 'joint');
    const view = composeView(TOY_COMPONENTS, state);
    const slotNames = view.slots.map((g) => g.slot);
    expect(slotNames).toContain('joint_linker');
    expect(slotNames).not.toContain('entity_linker');
  });
});

describe('isComplete mirrors gateway validation', () => {
  it('rejects a component sitting in the wrong slot', () => {
    const state = { ...fullSelection(), coref: 'verb-extractor' };
    expect(isComplete(TOY_COMPONENTS, state)).toBe(false);
  });

  it('rejects a KG the linkers do not align to', () => {
    const state = { ...fullSelection(), kg: 'dbpedia' };
    expect(isComplete(TOY_COMPONENTS, state)).toBe(false);
  });

  it('accepts a joint selection', () => {
    let state = setLinkingMode(emptyBuilderState(), 'joint');
    state = chooseSlot(TOY_COMPONENTS, state, 'coref', 'coref-identity');
    state = chooseSlot(TOY_COMPONENTS, state, 'extractor', 'verb-extractor');
    state = chooseSlot(TOY_COMPONENTS, state, 'joint_linker', 'alias-joint-linker');
    state = chooseSlot(TOY_COMPONENTS, state, 'kg', 'toykg');
    expect(isComplete(TOY_COMPONENTS, state)).toBe(true);
    expect(toSelectionBody(state)).toEqual({
      coref: 'coref-identity',
      extractor: 'verb-extractor',
      linkers: ['alias-joint-linker'],
      kg: 'toykg',
    });
  });
});

describe('no hardcoded component ids', () => {
  it('offers only ids served by the (mutated) registry', () => {
    const mutated = TOY_COMPONENTS.map((c) => ({ ...c, id: `alt-${c.id}` }));
    const view = composeView(mutated, emptyBuilderState());
    const served = new Set(mutated.map((c) => c.id));
    for (const group of view.slots) {
      expect(group.options.length).toBeGreaterThan(0);
      for (const option of group.options) {
        expect(served.has(option.id)).toBe(true);
      }
    }
    // completeness works against the mutated ids, so nothing in the
    // builder depends on the original names
    let state = emptyBuilderState();
    state = chooseSlot(mutated, state, 'coref', 'alt-coref-recency');
    state = chooseSlot(mutated, state, 'extractor', 'alt-verb-extractor');
    state = chooseSlot(mutated, state, 'entity_linker', 'alt-alias-entity-linker');
    state = chooseSlot(mutated, state, 'relation_linker', 'alt-alias-relation-linker');
    state = chooseSlot(mutated, state, 'kg', 'toykg');
    expect(isComplete(mutated, state)).toBe(true);
  });
});
