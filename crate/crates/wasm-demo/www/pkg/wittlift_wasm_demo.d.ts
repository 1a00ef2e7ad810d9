/* tslint:disable */
/* eslint-disable */

/**
 * Canonical lift mod `p^2`, its crystalline Frobenius and twist orbit.
 */
export function canonical_lift(a: number, b: number, p: number): string;

/**
 * Hasse invariant and trace of Frobenius of `y^2 = x^3 + ax + b` over `F_p`.
 */
export function hasse(a: number, b: number, p: number): string;

/**
 * Quasi-F-split height, with the level-2 certificate on supersingular curves.
 */
export function qf_height(a: number, b: number, p: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly canonical_lift: (a: number, b: number, c: number) => [number, number];
    readonly hasse: (a: number, b: number, c: number) => [number, number];
    readonly qf_height: (a: number, b: number, c: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
