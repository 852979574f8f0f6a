/* tslint:disable */
/* eslint-disable */

export class Decay {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * |f̂_n| for n = offset, offset+1, …
     */
    readonly abs: Float64Array;
    /**
     * Why the fit failed, or empty.
     */
    readonly message: string;
    readonly offset: number;
    /**
     * ρ, s or κ; NaN when the fit failed.
     */
    readonly param: number;
    readonly r2: number;
}

export function basis_curves(family: string, lo: number, hi: number, x_lo: number, x_hi: number, points: number): Float64Array;

export function free_schrodinger(f0: string, n: number, t: number, x_lo: number, x_hi: number, points: number): Float64Array;

export function mt_decay(f: string, n: number, scale: number, model: string): Decay;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_decay_free: (a: number, b: number) => void;
    readonly basis_curves: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly decay_abs: (a: number) => [number, number];
    readonly decay_message: (a: number) => [number, number];
    readonly decay_offset: (a: number) => number;
    readonly decay_param: (a: number) => number;
    readonly decay_r2: (a: number) => number;
    readonly free_schrodinger: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly mt_decay: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
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
