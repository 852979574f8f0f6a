/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_decay_free: (a: number, b: number) => void;
export const basis_curves: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const decay_abs: (a: number) => [number, number];
export const decay_message: (a: number) => [number, number];
export const decay_offset: (a: number) => number;
export const decay_param: (a: number) => number;
export const decay_r2: (a: number) => number;
export const free_schrodinger: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const mt_decay: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
