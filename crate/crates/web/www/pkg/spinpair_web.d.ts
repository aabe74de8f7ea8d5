/* tslint:disable */
/* eslint-disable */

/**
 * Ground state and pair report for a preset id or cluster JSON text.
 */
export function cluster_report(source: string): string;

/**
 * C(m) of the maximal-spin states for m = 0..=n, with the explicit-state
 * check for n ≤ 12.
 */
export function dicke_curve(n: number): string;

/**
 * The Γ rule C(Γ) on [−1/4, 1/4] and the energy estimator C1(|e_g|) for
 * the given bond density, plus the named lattice values.
 */
export function estimator_curves(bonds_per_site: number, points: number): string;

/**
 * Preset ids offered by the page.
 */
export function presets(): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly cluster_report: (a: number, b: number) => [number, number, number, number];
    readonly dicke_curve: (a: number) => [number, number, number, number];
    readonly estimator_curves: (a: number, b: number) => [number, number, number, number];
    readonly presets: () => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
