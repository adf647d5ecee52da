/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_spectra_free: (a: number, b: number) => void;
export const __wbg_walk_free: (a: number, b: number) => void;
export const displacement_sweep: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
export const spectra: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const spectra_distance: (a: number) => number;
export const spectra_gap_open: (a: number) => number;
export const spectra_gap_ring: (a: number) => number;
export const spectra_open: (a: number) => [number, number];
export const spectra_ring: (a: number) => [number, number];
export const walk: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
export const walk_decay: (a: number) => [number, number];
export const walk_edge_fraction: (a: number) => number;
export const walk_p1_over_pmin: (a: number) => number;
export const walk_p1_over_ps: (a: number) => number;
export const walk_rates: (a: number) => [number, number];
export const walk_route: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
