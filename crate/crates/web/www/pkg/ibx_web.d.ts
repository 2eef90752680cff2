/* tslint:disable */
/* eslint-disable */

/**
 * A periodic billiard-ball grid that can be stepped either way.
 */
export class BbmStepper {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Row-major cells, 1 for a ball.
     */
    cells(): Uint8Array;
    height(): number;
    live(): number;
    /**
     * Random grid with roughly `density` of the cells live, from `seed`.
     */
    constructor(width: number, height: number, density: number, seed: number);
    step(n: number): void;
    step_back(n: number): void;
    steps(): bigint;
    toggle(row: number, col: number): void;
    width(): number;
}

/**
 * The exchange used as the page's default input.
 */
export function example_iet(): string;

/**
 * `T^n(i)` for an exchange in the `.iet` text format; `n` is decimal.
 */
export function iet_solve(text: string, i: bigint, n: string): bigint;

/**
 * Number of perfect riffles of `n` cards that restore the deck.
 */
export function riffle_order(n: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_bbmstepper_free: (a: number, b: number) => void;
    readonly bbmstepper_cells: (a: number) => [number, number];
    readonly bbmstepper_height: (a: number) => number;
    readonly bbmstepper_live: (a: number) => number;
    readonly bbmstepper_new: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly bbmstepper_step: (a: number, b: number) => [number, number];
    readonly bbmstepper_step_back: (a: number, b: number) => [number, number];
    readonly bbmstepper_steps: (a: number) => bigint;
    readonly bbmstepper_toggle: (a: number, b: number, c: number) => void;
    readonly bbmstepper_width: (a: number) => number;
    readonly example_iet: () => [number, number];
    readonly iet_solve: (a: number, b: number, c: bigint, d: number, e: number) => [bigint, number, number];
    readonly riffle_order: (a: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
