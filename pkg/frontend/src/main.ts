/** Browser bootstrap: dataset picker, edit-mode controls, status line. */

import { ApiClient } from "./api.js";
import { createApp } from "./app.js";
import type { AppState } from "./state.js";

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function bootstrap(): Promise<void> {
  const api = new ApiClient("");
  const app = createApp(byId("chart"), api);
  const store = app.store;

  const datasetSelect = byId<HTMLSelectElement>("dataset-select");
  const fileInput = byId<HTMLInputElement>("file-input");
  const status = byId<HTMLSpanElement>("status");
  const editScratch = byId<HTMLButtonElement>("edit-scratch");
  const editDuplicate = byId<HTMLButtonElement>("edit-duplicate");
  const editCommit = byId<HTMLButtonElement>("edit-commit");
  const editCancel = byId<HTMLButtonElement>("edit-cancel");
  const exportLink = byId<HTMLAnchorElement>("export-link");

  async function refreshDatasetList(selected?: string): Promise<void> {
    const { datasets } = await api.listDatasets();
    datasetSelect.replaceChildren();
    for (const info of datasets) {
      const option = document.createElement("option");
      option.value = info.datasetId;
      option.textContent = `${info.datasetId} (${info.observations} lines)`;
      if (info.datasetId === selected) option.selected = true;
      datasetSelect.appendChild(option);
    }
  }

  datasetSelect.addEventListener("change", () => {
    if (datasetSelect.value) void store.selectDataset(datasetSelect.value);
  });

  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    const text = await file.text();
    await store.loadDocument(JSON.parse(text));
    await refreshDatasetList(store.state.datasetId ?? undefined);
  });

  editScratch.addEventListener("click", () => void store.beginEdit("scratch"));
  editDuplicate.addEventListener("click", () => {
    const hover = store.state.hover;
    if (hover.type === "polyline") {
      void store.beginEdit("duplicate", hover.observationId);
    } else {
      status.textContent = "hover a line first, then duplicate it";
    }
  });
  editCommit.addEventListener("click", () => void store.commitEdit());
  editCancel.addEventListener("click", () => void store.cancelEdit());

  store.subscribe((state: AppState) => {
    const editing = state.session?.active ?? false;
    editScratch.disabled = editing || !state.datasetId;
    editDuplicate.disabled = editing || !state.datasetId;
    editCommit.disabled = !editing;
    editCancel.disabled = !editing;
    document.body.classList.toggle("editing", editing);
    if (state.error) {
      status.textContent = `error: ${state.error}`;
    } else if (editing && state.session) {
      status.textContent = state.session.missing.length
        ? `edit mode: still missing ${state.session.missing.join(", ")}`
        : "edit mode: complete, ready to commit";
    } else if (state.datasetId) {
      status.textContent = `${state.datasetId}: ${state.expansion.length} expanded branches`;
    } else {
      status.textContent = "load a dataset to start";
    }
    if (state.datasetId) {
      exportLink.setAttribute(
        "href", api.exportSvgUrl(state.datasetId, state.expansion),
      );
    }
  });

  await refreshDatasetList();
  if (datasetSelect.value) await store.selectDataset(datasetSelect.value);
}

void bootstrap();
