/**
 * DOM bootstrap: wires the selection panel to the controller and keeps
 * the selection in the URL so exploration states are shareable.
 */

import { FieldmonApi } from "./api.js";
import { ExplorerController } from "./controller.js";
import {
  INDICATORS,
  REGIONS,
  STATUSES,
  SelectionState,
  kindsFor,
  restoreFromUrl,
  serializeState,
} from "./state.js";

const INDICATOR_LABELS: Record<string, string> = {
  activity: "Research activity",
  discipline: "Disciplinary area",
  funding: "Type of funding",
  qualification: "Qualification",
};

const KIND_LABELS: Record<string, string> = {
  bar: "Bar chart",
  line_series: "Line series",
  pie: "Pie chart",
  donut: "Donut chart",
  treemap: "Treemap",
  bubble: "Bubble chart",
  tagcloud: "Tag cloud",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function bootstrap(): void {
  const { state: initial, notices } = restoreFromUrl(window.location.search);
  const controller = new ExplorerController(new FieldmonApi(), initial);

  const panel = document.getElementById("panel")!;
  const chartHost = document.getElementById("chart")!;
  const banner = document.getElementById("banner")!;
  const noticeHost = document.getElementById("notices")!;
  const errorHost = document.getElementById("error")!;

  for (const notice of notices) {
    noticeHost.appendChild(el("div", { class: "notice" }, notice));
  }

  // --- status and region -----------------------------------------------
  const statusSelect = el("select", { id: "status" });
  statusSelect.appendChild(el("option", { value: "" }, "all statuses"));
  for (const status of STATUSES) {
    statusSelect.appendChild(el("option", { value: status }, status));
  }
  const regionSelect = el("select", { id: "region" });
  for (const region of REGIONS) {
    regionSelect.appendChild(
      el("option", { value: region }, region === "dach" ? "Germany, Austria, Switzerland" : "Germany")
    );
  }

  // --- indicator and chart kind ------------------------------------------
  const indicatorSelect = el("select", { id: "indicator" });
  for (const indicator of INDICATORS) {
    indicatorSelect.appendChild(el("option", { value: indicator }, INDICATOR_LABELS[indicator]));
  }
  const kindSelect = el("select", { id: "kind" });

  // --- time slice ---------------------------------------------------------
  const wholePeriod = el("input", { type: "checkbox", id: "whole" });
  const fromInput = el("input", { type: "number", id: "from", placeholder: "from" });
  const toInput = el("input", { type: "number", id: "to", placeholder: "to" });

  function labelled(label: string, ...nodes: HTMLElement[]): HTMLElement {
    const wrap = el("div", { class: "control" });
    wrap.appendChild(el("label", {}, label));
    for (const node of nodes) {
      wrap.appendChild(node);
    }
    return wrap;
  }

  panel.appendChild(labelled("Project status", statusSelect));
  panel.appendChild(labelled("Geographical area", regionSelect));
  panel.appendChild(labelled("Indicator", indicatorSelect));
  panel.appendChild(labelled("Chart kind", kindSelect));
  panel.appendChild(labelled("Whole period", wholePeriod));
  panel.appendChild(labelled("Year slice", fromInput, toInput));

  function syncControls(state: SelectionState): void {
    statusSelect.value = state.status ?? "";
    regionSelect.value = state.region;
    indicatorSelect.value = state.indicator;
    kindSelect.replaceChildren();
    for (const kind of kindsFor(state.indicator)) {
      kindSelect.appendChild(el("option", { value: kind }, KIND_LABELS[kind]));
    }
    kindSelect.value = state.kind;
    wholePeriod.checked = state.wholePeriod;
    fromInput.value = state.yearFrom === null ? "" : String(state.yearFrom);
    toInput.value = state.yearTo === null ? "" : String(state.yearTo);
    fromInput.disabled = state.wholePeriod;
    toInput.disabled = state.wholePeriod;
  }

  function pushUrl(state: SelectionState): void {
    window.history.replaceState(null, "", "?" + serializeState(state));
  }

  async function change(patch: Partial<SelectionState>): Promise<void> {
    await controller.select(patch);
    syncControls(controller.state);
    pushUrl(controller.state);
  }

  statusSelect.addEventListener("change", () => {
    const value = statusSelect.value;
    void change({ status: value === "" ? null : (value as SelectionState["status"]) });
  });
  regionSelect.addEventListener("change", () => {
    void change({ region: regionSelect.value as SelectionState["region"] });
  });
  indicatorSelect.addEventListener("change", () => {
    void change({ indicator: indicatorSelect.value as SelectionState["indicator"] });
  });
  kindSelect.addEventListener("change", () => {
    void change({ kind: kindSelect.value as SelectionState["kind"] });
  });
  wholePeriod.addEventListener("change", () => {
    void change({ wholePeriod: wholePeriod.checked });
  });
  function yearPatch(): Partial<SelectionState> {
    const yearFrom = fromInput.value === "" ? null : Number(fromInput.value);
    const yearTo = toInput.value === "" ? null : Number(toInput.value);
    return { wholePeriod: false, yearFrom, yearTo };
  }
  fromInput.addEventListener("change", () => void change(yearPatch()));
  toInput.addEventListener("change", () => void change(yearPatch()));

  controller.onChange = () => {
    if (controller.error !== null) {
      errorHost.replaceChildren();
      const box = el("div", { class: "error" });
      const where =
        controller.error.parameter === null ? "" : ` (check the ${controller.error.parameter} control)`;
      box.appendChild(el("span", {}, controller.error.message + where));
      if (controller.error.retryable) {
        const retry = el("button", {}, "retry");
        retry.addEventListener("click", () => void controller.refresh());
        box.appendChild(retry);
      }
      errorHost.appendChild(box);
    } else {
      errorHost.replaceChildren();
    }
    if (controller.view !== null) {
      chartHost.innerHTML = controller.view.svg;
      banner.textContent = controller.view.banner;
    }
  };

  syncControls(controller.state);
  pushUrl(controller.state);
  void controller.refresh();
}

if (typeof document !== "undefined") {
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", bootstrap);
  } else {
    bootstrap();
  }
}
