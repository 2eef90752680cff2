/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_bbmstepper_free: (a: number, b: number) => void;
export const bbmstepper_cells: (a: number) => [number, number];
export const bbmstepper_height: (a: number) => number;
export const bbmstepper_live: (a: number) => number;
export const bbmstepper_new: (a: number, b: number, c: number, d: number) => [number, number, number];
export const bbmstepper_step: (a: number, b: number) => [number, number];
export const bbmstepper_step_back: (a: number, b: number) => [number, number];
export const bbmstepper_steps: (a: number) => bigint;
export const bbmstepper_toggle: (a: number, b: number, c: number) => void;
export const bbmstepper_width: (a: number) => number;
export const example_iet: () => [number, number];
export const iet_solve: (a: number, b: number, c: bigint, d: number, e: number) => [bigint, number, number];
export const riffle_order: (a: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
