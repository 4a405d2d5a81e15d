/**
 * Exploration loop: one control change, one API request, one re-render.
 *
 * A new selection aborts any in-flight request, so at most one request
 * is outstanding and only the latest response lands. Failures keep the
 * last good view: validation errors name the offending control, network
 * errors offer a retry.
 */

import { ApiValidationError } from "./api.js";
import type { SelectionState } from "./state.js";
import { applySelection, DEFAULT_STATE } from "./state.js";
import { describeFilter, renderChart } from "./render.js";
import type { ChartSpecPayload } from "./types.js";

export interface ChartApi {
  chart(state: SelectionState, signal?: AbortSignal): Promise<ChartSpecPayload>;
}

export interface ExplorerView {
  svg: string;
  banner: string;
  spec: ChartSpecPayload;
}

export interface ExplorerError {
  message: string;
  parameter: string | null;
  retryable: boolean;
}

export class ExplorerController {
  state: SelectionState;
  view: ExplorerView | null = null;
  error: ExplorerError | null = null;
  onChange: (() => void) | null = null;

  private inflight: AbortController | null = null;
  private sequence = 0;

  constructor(private readonly api: ChartApi, initial: SelectionState = DEFAULT_STATE) {
    this.state = initial;
  }

  /** Apply a control change and issue exactly one chart request for it. */
  async select(patch: Partial<SelectionState>): Promise<void> {
    this.state = applySelection(this.state, patch);
    await this.refresh();
  }

  /** Re-issue the request for the current state (also the retry action). */
  async refresh(): Promise<void> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    this.sequence += 1;
    const ticket = this.sequence;

    let spec: ChartSpecPayload;
    try {
      spec = await this.api.chart(this.state, controller.signal);
    } catch (error) {
      if (ticket !== this.sequence || controller.signal.aborted) {
        return; // superseded; the newer request owns the view
      }
      if (error instanceof ApiValidationError) {
        this.error = { message: error.message, parameter: error.parameter, retryable: false };
      } else {
        this.error = { message: "request failed", parameter: null, retryable: true };
      }
      this.onChange?.();
      return;
    }
    if (ticket !== this.sequence) {
      return;
    }
    this.view = {
      svg: renderChart(spec),
      banner: describeFilter(spec.meta.filter),
      spec,
    };
    this.error = null;
    this.onChange?.();
  }
}
