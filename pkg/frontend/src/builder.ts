/**
 * Manual pipeline composition state and view model.
 *
 * All selectable ids come from the fetched component list; nothing is
 * hardcoded. Once a KG is picked, linking options narrow to components
 * that align to it; picking linkers first narrows the KG options
 * instead. The completeness flag tracks exactly the conditions the
 * gateway's validate endpoint enforces, so "run" only lights up for
 * selections that would pass it.
 */

import type { ComponentInfo, ManualSelectionBody } from './types.js';

export type LinkingMode = 'pair' | 'joint';

export interface BuilderState {
  coref: string | null;
  extractor: string | null;
  entityLinker: string | null;
  relationLinker: string | null;
  jointLinker: string | null;
  linkingMode: LinkingMode;
  kg: string | null;
}

export interface SlotOption {
  id: string;
  label: string;
}

export interface SlotGroup {
  slot: string;
  options: SlotOption[];
  selected: string | null;
}

export interface ComposeView {
  slots: SlotGroup[];
  kgOptions: string[];
  selectedKg: string | null;
  linkingMode: LinkingMode;
  complete: boolean;
  runEnabled: boolean;
}

export function emptyBuilderState(): BuilderState {
  return {
    coref: null,
    extractor: null,
    entityLinker: null,
    relationLinker: null,
    jointLinker: null,
    linkingMode: 'pair',
    kg: null,
  };
}

function byTask(components: ComponentInfo[], task: ComponentInfo['task']): ComponentInfo[] {
  return components.filter((c) => c.task === task);
}

function kgConsistent(component: ComponentInfo, kg: string | null): boolean {
  return kg === null || component.kgs.includes(kg);
}

function find(components: ComponentInfo[], id: string | null): ComponentInfo | undefined {
  return id === null ? undefined : components.find((c) => c.id === id);
}

/** KGs offered: all linker-supported tags, narrowed by chosen linkers. */
export function kgOptions(components: ComponentInfo[], state: BuilderState): string[] {
  const chosen = [
    find(components, state.linkingMode === 'pair' ? state.entityLinker : null),
    find(components, state.linkingMode === 'pair' ? state.relationLinker : null),
    find(components, state.linkingMode === 'joint' ? state.jointLinker : null),
  ].filter((c): c is ComponentInfo => c !== undefined);

  const all = new Set<string>();
  for (const c of components) {
    for (const kg of c.kgs) {
      all.add(kg);
    }
  }
  return [...all].filter((kg) => chosen.every((c) => c.kgs.includes(kg))).sort();
}

/** True iff the selection would pass POST /pipelines/validate. */
export function isComplete(components: ComponentInfo[], state: BuilderState): boolean {
  if (state.kg === null) return false;
  const coref = find(components, state.coref);
  const extractor = find(components, state.extractor);
  if (coref?.task !== 'coref' || extractor?.task !== 'triple_extraction') return false;

  if (state.linkingMode === 'joint') {
    const joint = find(components, state.jointLinker);
    return joint?.task === 'joint_linking' && joint.kgs.includes(state.kg);
  }
  const el = find(components, state.entityLinker);
  const rl = find(components, state.relationLinker);
  return (
    el?.task === 'entity_linking' &&
    rl?.task === 'relation_linking' &&
    el.kgs.includes(state.kg) &&
    rl.kgs.includes(state.kg)
  );
}

export function composeView(components: ComponentInfo[], state: BuilderState): ComposeView {
  const option = (c: ComponentInfo): SlotOption => ({ id: c.id, label: c.name });
  const slots: SlotGroup[] = [
    {
      slot: 'coref',
      options: byTask(components, 'coref').map(option),
      selected: state.coref,
    },
    {
      slot: 'extractor',
      options: byTask(components, 'triple_extraction').map(option),
      selected: state.extractor,
    },
  ];
  if (state.linkingMode === 'pair') {
    slots.push(
      {
        slot: 'entity_linker',
        options: byTask(components, 'entity_linking')
          .filter((c) => kgConsistent(c, state.kg))
          .map(option),
        selected: state.entityLinker,
      },
      {
        slot: 'relation_linker',
        options: byTask(components, 'relation_linking')
          .filter((c) => kgConsistent(c, state.kg))
          .map(option),
        selected: state.relationLinker,
      },
    );
  } else {
    slots.push({
      slot: 'joint_linker',
      options: byTask(components, 'joint_linking')
        .filter((c) => kgConsistent(c, state.kg))
        .map(option),
      selected: state.jointLinker,
    });
  }
  const complete = isComplete(components, state);
  return {
    slots,
    kgOptions: kgOptions(components, state),
    selectedKg: state.kg,
    linkingMode: state.linkingMode,
    complete,
    runEnabled: complete,
  };
}

/** Apply a slot choice, clearing selections the choice invalidates. */
export function chooseSlot(
  components: ComponentInfo[],
  state: BuilderState,
  slot: string,
  id: string | null,
): BuilderState {
  const next = { ...state };
  switch (slot) {
    case 'coref':
      next.coref = id;
      break;
    case 'extractor':
      next.extractor = id;
      break;
    case 'entity_linker':
      next.entityLinker = id;
      break;
    case 'relation_linker':
      next.relationLinker = id;
      break;
    case 'joint_linker':
      next.jointLinker = id;
      break;
    case 'kg':
      next.kg = id;
      break;
    default:
      return state;
  }
  // a KG choice invalidates linkers that do not align to it
  if (next.kg !== null) {
    for (const key of ['entityLinker', 'relationLinker', 'jointLinker'] as const) {
      const chosen = find(components, next[key]);
      if (chosen && !chosen.kgs.includes(next.kg)) {
        next[key] = null;
      }
    }
  }
  return next;
}

export function setLinkingMode(state: BuilderState, mode: LinkingMode): BuilderState {
  return { ...state, linkingMode: mode };
}

export function toSelectionBody(state: BuilderState): ManualSelectionBody | null {
  if (state.coref === null || state.extractor === null || state.kg === null) return null;
  const linkers =
    state.linkingMode === 'joint'
      ? state.jointLinker !== null
        ? [state.jointLinker]
        : null
      : state.entityLinker !== null && state.relationLinker !== null
        ? [state.entityLinker, state.relationLinker]
        : null;
  if (linkers === null) return null;
  return { coref: state.coref, extractor: state.extractor, linkers, kg: state.kg };
}
