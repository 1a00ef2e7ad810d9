/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const canonical_lift: (a: number, b: number, c: number) => [number, number];
export const hasse: (a: number, b: number, c: number) => [number, number];
export const qf_height: (a: number, b: number, c: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
