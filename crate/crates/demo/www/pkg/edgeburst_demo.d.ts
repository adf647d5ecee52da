/* tslint:disable */
/* eslint-disable */

export class Spectra {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly distance: number;
    readonly gap_open: number;
    readonly gap_ring: number;
    /**
     * Open-chain eigenvalues as interleaved `re, im` pairs.
     */
    readonly open: Float64Array;
    /**
     * Ring eigenvalues as interleaved `re, im` pairs.
     */
    readonly ring: Float64Array;
}

export class Walk {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * P_n for n = 1..=N.
     */
    readonly decay: Float64Array;
    readonly edge_fraction: number;
    readonly p1_over_pmin: number;
    readonly p1_over_ps: number;
    readonly rates: Float64Array;
    readonly route: string;
}

/**
 * Averaged mean displacement per sublattice over a list of loss
 * strengths, returned as interleaved `mean_A, mean_B` pairs.
 */
export function displacement_sweep(t1: number, t2: number, n: number, profile: string, gammas: Float64Array, seed: number): Float64Array;

/**
 * Open and ring spectra with their imaginary gaps and Hausdorff distance.
 */
export function spectra(t1: number, t2: number, n: number, profile: string, gamma: number, seed: number): Spectra;

/**
 * Decay distribution of a walker started on site A of cell `s`.
 */
export function walk(t1: number, t2: number, n: number, s: number, profile: string, gamma: number, seed: number): Walk;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_spectra_free: (a: number, b: number) => void;
    readonly __wbg_walk_free: (a: number, b: number) => void;
    readonly displacement_sweep: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly spectra: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly spectra_distance: (a: number) => number;
    readonly spectra_gap_open: (a: number) => number;
    readonly spectra_gap_ring: (a: number) => number;
    readonly spectra_open: (a: number) => [number, number];
    readonly spectra_ring: (a: number) => [number, number];
    readonly walk: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
    readonly walk_decay: (a: number) => [number, number];
    readonly walk_edge_fraction: (a: number) => number;
    readonly walk_p1_over_pmin: (a: number) => number;
    readonly walk_p1_over_ps: (a: number) => number;
    readonly walk_rates: (a: number) => [number, number];
    readonly walk_route: (a: number) => [number, number];
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
