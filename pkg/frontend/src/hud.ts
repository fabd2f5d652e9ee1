// 2D overlay: error banner, filter controls, search box, follow box and the
// detail panel. The panel renders every field of the record JSON verbatim,
// so whatever the API returns is what the analyst sees.

import type { OpacityMode, TweetDto } from "./types";

export interface HudCallbacks {
  onApplyFilter(from: string | null, to: string | null): void;
  onOpacity(mode: OpacityMode): void;
  onSearch(keyword: string): void;
  onClearWall(): void;
  onFollow(username: string): void;
  onClearPath(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text) node.textContent = text;
  return node;
}

export function formatFieldValue(value: unknown): string {
  if (Array.isArray(value)) return value.join(", ");
  return String(value);
}

export class Hud {
  readonly root: HTMLElement;
  private banner: HTMLElement;
  private detail: HTMLElement;
  private searchMessage: HTMLElement;
  private status: HTMLElement;
  private fromInput: HTMLInputElement;
  private toInput: HTMLInputElement;
  private searchInput: HTMLInputElement;
  private followInput: HTMLInputElement;

  constructor(container: HTMLElement, private callbacks: HudCallbacks) {
    const doc = container.ownerDocument;
    this.root = el(doc, "div", { class: "hud" });

    this.banner = el(doc, "div", { class: "error-banner", "data-role": "error-banner" });
    this.banner.hidden = true;
    this.root.appendChild(this.banner);

    const controls = el(doc, "div", { class: "controls" });

    // time filter
    this.fromInput = el(doc, "input", {
      "data-role": "filter-from",
      placeholder: "from 2013-10-01T00:00:00Z",
    });
    this.toInput = el(doc, "input", {
      "data-role": "filter-to",
      placeholder: "to 2014-02-28T23:59:59Z",
    });
    const applyButton = el(doc, "button", { "data-role": "filter-apply" }, "filter");
    applyButton.addEventListener("click", () =>
      this.callbacks.onApplyFilter(this.fromInput.value || null, this.toInput.value || null),
    );
    controls.append(this.fromInput, this.toInput, applyButton);

    // opacity mode
    const opacity = el(doc, "select", { "data-role": "opacity-mode" }) as HTMLSelectElement;
    for (const mode of ["solid", "wireframe", "transparent"]) {
      opacity.appendChild(el(doc, "option", { value: mode }, mode));
    }
    opacity.addEventListener("change", () =>
      this.callbacks.onOpacity(opacity.value as OpacityMode),
    );
    controls.appendChild(opacity);

    // keyword search
    this.searchInput = el(doc, "input", {
      "data-role": "search-input",
      placeholder: "search tweets",
    });
    const searchButton = el(doc, "button", { "data-role": "search-run" }, "search");
    searchButton.addEventListener("click", () => this.callbacks.onSearch(this.searchInput.value));
    const clearWall = el(doc, "button", { "data-role": "wall-clear" }, "clear wall");
    clearWall.addEventListener("click", () => this.callbacks.onClearWall());
    this.searchMessage = el(doc, "span", { "data-role": "search-message" });
    controls.append(this.searchInput, searchButton, clearWall, this.searchMessage);

    // follow a user
    this.followInput = el(doc, "input", {
      "data-role": "follow-input",
      placeholder: "follow user",
    });
    const followButton = el(doc, "button", { "data-role": "follow-run" }, "follow");
    followButton.addEventListener("click", () => this.callbacks.onFollow(this.followInput.value));
    const clearPath = el(doc, "button", { "data-role": "path-clear" }, "clear path");
    clearPath.addEventListener("click", () => this.callbacks.onClearPath());
    controls.append(this.followInput, followButton, clearPath);

    this.root.appendChild(controls);

    this.status = el(doc, "div", { class: "status", "data-role": "status" });
    this.root.appendChild(this.status);

    this.detail = el(doc, "div", { class: "detail-panel", "data-role": "detail-panel" });
    this.detail.hidden = true;
    this.root.appendChild(this.detail);

    container.appendChild(this.root);
  }

  showErrorBanner(message: string): void {
    this.banner.textContent = message;
    this.banner.hidden = false;
  }

  hideErrorBanner(): void {
    this.banner.hidden = true;
  }

  /** Render every field of the record, in the order the API sent them. */
  showRecord(record: TweetDto): void {
    const doc = this.detail.ownerDocument;
    this.detail.replaceChildren();
    for (const [key, value] of Object.entries(record)) {
      const row = el(doc, "div", { class: "field" });
      row.appendChild(el(doc, "span", { class: "field-name" }, key));
      row.appendChild(
        el(doc, "span", { class: "field-value", "data-field": key }, formatFieldValue(value)),
      );
      this.detail.appendChild(row);
    }
    this.detail.hidden = false;
  }

  showRecordNotFound(recordId: string): void {
    this.detail.replaceChildren();
    this.detail.appendChild(
      el(this.detail.ownerDocument, "div", { "data-role": "not-found" },
        `record ${recordId} is no longer in the loaded dataset`),
    );
    this.detail.hidden = false;
  }

  hideDetail(): void {
    this.detail.hidden = true;
  }

  detailPanel(): HTMLElement {
    return this.detail;
  }

  setSearchMessage(message: string): void {
    this.searchMessage.textContent = message;
  }

  setStatus(message: string): void {
    this.status.textContent = message;
  }
}
