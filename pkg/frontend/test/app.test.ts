// Integration tests: the client drives a real scene service spawned by the
// global setup (no mocks). DOM assertions run under jsdom; scene-graph
// assertions use three.js object math, which needs no WebGL context.

import * as THREE from "three";
import { beforeAll, describe, expect, inject, it, vi } from "vitest";
import { ExplorerApp } from "../src/app";
import { formatFieldValue } from "../src/hud";
import { toSceneVec } from "../src/scene";
import type { PlacementDto, TweetDto, WallDto } from "../src/types";
import { wallSlotPosition } from "../src/wall";

let apiUrl: string;

beforeAll(() => {
  apiUrl = inject("apiUrl");
});

function makeApp(baseUrl?: string): ExplorerApp {
  const container = document.createElement("div");
  document.body.appendChild(container);
  return new ExplorerApp(baseUrl ?? apiUrl, container);
}

async function loadedApp(): Promise<ExplorerApp> {
  const app = makeApp();
  expect(await app.load()).toBe(true);
  return app;
}

async function getJson<T>(path: string): Promise<T> {
  const response = await fetch(apiUrl + path);
  expect(response.ok).toBe(true);
  return (await response.json()) as T;
}

describe("scene rendering", () => {
  it("creates one marker per API placement and one mesh per terrain chunk", async () => {
    const app = await loadedApp();
    const tweets = await getJson<{ placements: PlacementDto[] }>("/tweets");
    const terrain = await getJson<{ chunks: unknown[] }>("/terrain");
    expect(app.sceneManager.markerCount()).toBe(tweets.placements.length);
    expect(app.sceneManager.visibleMarkerCount()).toBe(tweets.placements.length);
    expect(app.sceneManager.terrainChunkCount()).toBe(terrain.chunks.length);
    expect(terrain.chunks.length).toBeGreaterThan(0);
  });

  it("places markers exactly at API coordinates", async () => {
    const app = await loadedApp();
    const { placements } = await getJson<{ placements: PlacementDto[] }>("/tweets");
    for (const placement of placements) {
      const mesh = app.sceneManager.marker(placement.record_id);
      expect(mesh, placement.record_id).toBeDefined();
      expect(mesh!.position.equals(toSceneVec(placement))).toBe(true);
    }
  });

  it("renders skull markers with the alert style", async () => {
    const app = await loadedApp();
    const { placements } = await getJson<{ placements: PlacementDto[] }>("/tweets");
    const skulls = placements.filter((p) => p.model_class === "skull");
    expect(skulls.map((p) => p.record_id).sort()).toEqual(["t04", "t06", "t10"]);
    for (const placement of placements) {
      const mesh = app.sceneManager.marker(placement.record_id)!;
      expect(mesh.userData.modelClass).toBe(placement.model_class);
      const color = (mesh.material as THREE.MeshLambertMaterial).color.getHex();
      if (placement.model_class === "skull") expect(color).toBe(0xcc2222);
      else expect(color).toBe(0x2277ee);
    }
  });

  it("marker screen positions follow the camera projection of API coordinates", async () => {
    const app = await loadedApp();
    const { placements } = await getJson<{ placements: PlacementDto[] }>("/tweets");
    const fov = 60;
    const aspect = 16 / 9;
    const camera = new THREE.PerspectiveCamera(fov, aspect, 0.1, 10_000);
    const target = toSceneVec(placements[0]);
    const distance = 140;
    camera.position.set(target.x, target.y, target.z + distance);
    camera.updateMatrixWorld(true);

    const tanHalf = Math.tan(((fov / 2) * Math.PI) / 180);
    for (const placement of placements.slice(0, 5)) {
      const mesh = app.sceneManager.marker(placement.record_id)!;
      const projected = mesh.position.clone().project(camera);
      // Independent pinhole math: camera looks down -z, no rotation.
      const dx = toSceneVec(placement).x - camera.position.x;
      const dy = toSceneVec(placement).y - camera.position.y;
      const dz = toSceneVec(placement).z - camera.position.z;
      expect(dz).toBeLessThan(0);
      expect(projected.x).toBeCloseTo(dx / -dz / (tanHalf * aspect), 9);
      expect(projected.y).toBeCloseTo(dy / -dz / tanHalf, 9);
    }
  });

  it("co-located records stack with increasing altitude", async () => {
    const { placements } = await getJson<{ placements: PlacementDto[] }>("/tweets");
    const lower = placements.find((p) => p.record_id === "t04")!;
    const upper = placements.find((p) => p.record_id === "t05")!;
    expect(lower.stack_index).toBe(0);
    expect(upper.stack_index).toBe(1);
    expect(upper.z).toBeGreaterThan(lower.z);
    expect(upper.x).toBe(lower.x);
  });

  it("shows an error banner when the service is unreachable", async () => {
    const app = makeApp("http://127.0.0.1:9");
    expect(await app.load()).toBe(false);
    const banner = app.hud.root.querySelector<HTMLElement>('[data-role="error-banner"]')!;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("unreachable");
  });
});

describe("selection and detail-on-demand", () => {
  it("shows every record field exactly as the API returns it", async () => {
    const app = await loadedApp();
    await app.selectRecord("t04");
    const record = await getJson<TweetDto>("/tweets/t04");
    const panel = app.hud.detailPanel();
    expect(panel.hidden).toBe(false);
    const shownKeys = Array.from(panel.querySelectorAll("[data-field]")).map((node) =>
      node.getAttribute("data-field"),
    );
    expect(shownKeys).toEqual(Object.keys(record));
    for (const [key, value] of Object.entries(record)) {
      const cell = panel.querySelector(`[data-field="${key}"]`)!;
      expect(cell.textContent).toBe(formatFieldValue(value));
    }
    expect(panel.querySelector('[data-field="tags"]')!.textContent).toBe("skull");
    expect(app.state.selectedId).toBe("t04");
    expect(app.sceneManager.marker("t04")!.userData.highlighted).toBe(true);
  });

  it("keeps a single selection: the second click deselects the first", async () => {
    const app = await loadedApp();
    await app.selectRecord("t01");
    await app.selectRecord("t02");
    expect(app.state.selectedId).toBe("t02");
    expect(app.sceneManager.highlighted()).toBe("t02");
    expect(app.sceneManager.marker("t01")!.userData.highlighted).toBe(false);
    expect(app.sceneManager.marker("t01")!.scale.x).toBe(1);
    expect(app.sceneManager.marker("t02")!.userData.highlighted).toBe(true);
  });

  it("shows a not-found message for a stale id", async () => {
    const app = await loadedApp();
    await app.selectRecord("gone-after-reload");
    const panel = app.hud.detailPanel();
    expect(panel.querySelector('[data-role="not-found"]')).not.toBeNull();
    expect(app.state.selectedId).toBeNull();
  });

  it("picks the marker under the pointer via the camera ray", async () => {
    const app = await loadedApp();
    const { placements } = await getJson<{ placements: PlacementDto[] }>("/tweets");
    const target = placements.find((p) => p.record_id === "t09")!;
    const camera = new THREE.PerspectiveCamera(60, 1, 0.1, 10_000);
    const at = toSceneVec(target);
    camera.position.set(at.x, at.y, at.z + 50);
    camera.lookAt(at);
    camera.updateMatrixWorld(true);
    await app.selectAt({ x: 0, y: 0 }, camera);
    expect(app.state.selectedId).toBe("t09");
  });

  it("clicking empty space changes nothing", async () => {
    const app = await loadedApp();
    await app.selectRecord("t01");
    const camera = new THREE.PerspectiveCamera(60, 1, 0.1, 10_000);
    camera.position.set(50_000, 50_000, 50_000);
    camera.lookAt(60_000, 60_000, 60_000); // facing away from the scene
    camera.updateMatrixWorld(true);
    await app.selectAt({ x: 0, y: 0 }, camera);
    expect(app.state.selectedId).toBe("t01");
    expect(app.hud.detailPanel().hidden).toBe(false);
  });
});

describe("query wall", () => {
  it("moves matches onto wall slots at the pure-function positions", async () => {
    const app = await loadedApp();
    await app.runSearch("danger");
    const { wall } = (await (
      await fetch(apiUrl + "/query", {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ keyword: "danger" }),
      })
    ).json()) as { wall: WallDto };

    expect(wall.assignments.length).toBe(3);
    expect(app.state.activeKeyword).toBe("danger");
    expect(app.sceneManager.wallActive()).toBe(true);

    wall.assignments.forEach(([recordId], index) => {
      const slot = wallSlotPosition(wall.origin, wall.columns, wall.slot_spacing_m, index);
      const mesh = app.sceneManager.marker(recordId)!;
      expect(mesh.position.equals(toSceneVec(slot))).toBe(true);
    });
  });

  it("row-major slots grow east along a row and upward per row", async () => {
    const origin = { x: 100, y: 200, z: 30 };
    expect(wallSlotPosition(origin, 3, 2.5, 0)).toEqual({ x: 100, y: 200, z: 30 });
    expect(wallSlotPosition(origin, 3, 2.5, 2)).toEqual({ x: 105, y: 200, z: 30 });
    expect(wallSlotPosition(origin, 3, 2.5, 3)).toEqual({ x: 100, y: 200, z: 32.5 });
    expect(wallSlotPosition(origin, 3, 2.5, 7)).toEqual({ x: 102.5, y: 200, z: 35 });
  });

  it("blank search shows a validation message and sends no request", async () => {
    const app = await loadedApp();
    const spy = vi.spyOn(globalThis, "fetch");
    await app.runSearch("   ");
    expect(spy).not.toHaveBeenCalled();
    spy.mockRestore();
    const message = app.hud.root.querySelector('[data-role="search-message"]')!;
    expect(message.textContent).toContain("enter a keyword");
    expect(app.sceneManager.wallActive()).toBe(false);
  });

  it("zero matches give an empty wall and an informational message", async () => {
    const app = await loadedApp();
    await app.runSearch("zzz-no-such-word");
    expect(app.sceneManager.wallActive()).toBe(false);
    const message = app.hud.root.querySelector('[data-role="search-message"]')!;
    expect(message.textContent).toContain("no matches");
  });

  it("clearing the wall returns markers to their placements", async () => {
    const app = await loadedApp();
    const { placements } = await getJson<{ placements: PlacementDto[] }>("/tweets");
    await app.runSearch("danger");
    app.clearWall();
    expect(app.state.activeKeyword).toBeNull();
    for (const placement of placements) {
      const mesh = app.sceneManager.marker(placement.record_id)!;
      expect(mesh.position.equals(toSceneVec(placement))).toBe(true);
    }
  });

  it("a new search replaces the previous wall (at most one wall)", async () => {
    const app = await loadedApp();
    await app.runSearch("danger");
    await app.runSearch("coffee");
    expect(app.state.activeKeyword).toBe("coffee");
    // t04 matches "danger" but not "coffee": it must be back home.
    const { placements } = await getJson<{ placements: PlacementDto[] }>("/tweets");
    const t04 = placements.find((p) => p.record_id === "t04")!;
    expect(app.sceneManager.marker("t04")!.position.equals(toSceneVec(t04))).toBe(true);
  });
});

describe("time filter", () => {
  it("hides markers outside the window; counts match the API", async () => {
    const app = await loadedApp();
    const from = "2013-10-01T00:00:00Z";
    const to = "2013-10-31T23:59:59Z";
    await app.applyTimeFilter(from, to);
    const direct = await getJson<{ placements: PlacementDto[] }>(
      `/tweets?from=${from}&to=${to}`,
    );
    expect(direct.placements.length).toBe(6); // t01..t06 are in October
    expect(app.sceneManager.visibleMarkerCount()).toBe(direct.placements.length);
    expect(app.sceneManager.marker("t09")!.visible).toBe(false);
    expect(app.sceneManager.marker("t01")!.visible).toBe(true);
  });

  it("a full-range filter shows every marker", async () => {
    const app = await loadedApp();
    await app.applyTimeFilter("2013-10-01T00:00:00Z", "2013-10-31T23:59:59Z");
    await app.applyTimeFilter(null, null);
    expect(app.sceneManager.visibleMarkerCount()).toBe(app.sceneManager.markerCount());
  });

  it("the newest filter supersedes an in-flight one", async () => {
    const app = await loadedApp();
    const first = app.applyTimeFilter("2013-10-01T00:00:00Z", "2013-10-31T23:59:59Z");
    const second = app.applyTimeFilter("2014-02-01T00:00:00Z", "2014-02-28T23:59:59Z");
    await Promise.all([first, second]);
    expect(app.state.interval.from).toBe("2014-02-01T00:00:00Z");
    // February fixture records: t10, t11, t12.
    expect(app.sceneManager.visibleMarkerCount()).toBe(3);
  });

  it("filter rejected by the API surfaces as a status, not a crash", async () => {
    const app = await loadedApp();
    await app.applyTimeFilter("not-a-timestamp", null);
    const status = app.hud.root.querySelector('[data-role="status"]')!;
    expect(status.textContent).toContain("bad-timestamp");
  });

  it("filter controls drive the app through the DOM", async () => {
    const app = await loadedApp();
    const fromInput = app.hud.root.querySelector<HTMLInputElement>('[data-role="filter-from"]')!;
    const toInput = app.hud.root.querySelector<HTMLInputElement>('[data-role="filter-to"]')!;
    fromInput.value = "2014-02-01T00:00:00Z";
    toInput.value = "2014-02-28T23:59:59Z";
    app.hud.root.querySelector<HTMLButtonElement>('[data-role="filter-apply"]')!.click();
    await vi.waitFor(() => {
      expect(app.sceneManager.visibleMarkerCount()).toBe(3);
    });
  });
});

describe("user paths", () => {
  it("following a three-tweet user draws exactly two arrows, in time order", async () => {
    const app = await loadedApp();
    await app.followUser("walker");
    expect(app.sceneManager.arrowCount()).toBe(2);
    const path = await getJson<{ tweet_ids: string[]; edges: [string, string][] }>(
      "/users/walker/path",
    );
    expect(path.tweet_ids).toEqual(["t01", "t02", "t03"]);
    expect(path.edges.length).toBe(2);
    const { placements } = await getJson<{ placements: PlacementDto[] }>("/tweets");
    const byId = new Map(placements.map((p) => [p.record_id, p]));
    const arrows = app.sceneManager.scene.getObjectByName("path-arrows")!;
    arrows.children.forEach((arrow, i) => {
      const expected = toSceneVec(byId.get(path.edges[i][0])!);
      expect(arrow.position.equals(expected)).toBe(true);
    });
    expect(app.state.followedUser).toBe("walker");
  });

  it("an unknown user yields no arrows and a status note", async () => {
    const app = await loadedApp();
    await app.followUser("nobody");
    expect(app.sceneManager.arrowCount()).toBe(0);
    expect(app.state.followedUser).toBeNull();
    const status = app.hud.root.querySelector('[data-role="status"]')!;
    expect(status.textContent).toContain("no posts");
  });
});

describe("terrain opacity", () => {
  async function terrainMaterials(app: ExplorerApp): Promise<THREE.MeshLambertMaterial[]> {
    const terrain = app.sceneManager.scene.getObjectByName("terrain")!;
    return terrain.children.map((mesh) => (mesh as THREE.Mesh).material as THREE.MeshLambertMaterial);
  }

  it("cycles solid, wireframe and transparent materials", async () => {
    const app = await loadedApp();
    const materials = await terrainMaterials(app);
    expect(materials.length).toBeGreaterThan(0);

    app.setOpacityMode("wireframe");
    for (const m of materials) expect(m.wireframe).toBe(true);

    app.setOpacityMode("transparent");
    for (const m of materials) {
      expect(m.wireframe).toBe(false);
      expect(m.transparent).toBe(true);
      expect(m.opacity).toBeLessThan(1);
    }

    app.setOpacityMode("solid");
    for (const m of materials) {
      expect(m.wireframe).toBe(false);
      expect(m.transparent).toBe(false);
      expect(m.opacity).toBe(1);
    }
    expect(app.state.opacityMode).toBe("solid");
  });
});
