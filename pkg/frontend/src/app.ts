// Application wiring: fetch scene data, mirror it into the 3D scene graph,
// and run the analytic interactions (filter, search wall, follow, select).
// All view changes flow through here so the ViewState invariants hold:
// one selection, one active wall, newest filter wins.

import type * as THREE from "three";
import { ApiClient, ApiError } from "./api";
import { Hud } from "./hud";
import { SceneManager, toSceneVec } from "./scene";
import { initialViewState, type ViewState } from "./state";
import type { OpacityMode, PlacementDto, SceneFrameDto } from "./types";

export class ExplorerApp {
  readonly api: ApiClient;
  readonly sceneManager = new SceneManager();
  readonly hud: Hud;
  readonly state: ViewState = initialViewState();

  frame: SceneFrameDto | null = null;
  groundImage: string | null = null;
  placementsById = new Map<string, PlacementDto>();

  private filterAbort: AbortController | null = null;

  constructor(baseUrl: string, container: HTMLElement) {
    this.api = new ApiClient(baseUrl);
    this.hud = new Hud(container, {
      onApplyFilter: (from, to) => void this.applyTimeFilter(from, to),
      onOpacity: (mode) => this.setOpacityMode(mode),
      onSearch: (keyword) => void this.runSearch(keyword),
      onClearWall: () => this.clearWall(),
      onFollow: (username) => void this.followUser(username),
      onClearPath: () => this.clearPath(),
    });
  }

  /** Fetch scene, terrain and placements; false (plus banner) on failure. */
  async load(): Promise<boolean> {
    try {
      const [scene, terrain, tweets] = await Promise.all([
        this.api.scene(),
        this.api.terrain(),
        this.api.tweets(),
      ]);
      this.frame = scene.frame;
      this.groundImage = scene.ground_image;
      this.sceneManager.setTerrain(terrain.chunks);
      this.setPlacements(tweets.placements);
      this.hud.hideErrorBanner();
      this.hud.setStatus(
        `${tweets.placements.length} markers, ${terrain.chunks.length} terrain chunks`,
      );
      return true;
    } catch (error) {
      this.hud.showErrorBanner(`scene service unreachable: ${String(error)}`);
      return false;
    }
  }

  private setPlacements(placements: PlacementDto[]): void {
    this.placementsById = new Map(placements.map((p) => [p.record_id, p]));
    this.sceneManager.setMarkers(placements);
    this.state.selectedId = null;
    this.state.activeKeyword = null;
    this.state.followedUser = null;
  }

  /** Select by record id; fetches fresh details so stale ids surface. */
  async selectRecord(recordId: string | null): Promise<void> {
    if (recordId === null) {
      this.state.selectedId = null;
      this.sceneManager.highlight(null);
      this.hud.hideDetail();
      return;
    }
    try {
      const record = await this.api.tweet(recordId);
      this.state.selectedId = recordId;
      this.sceneManager.highlight(recordId);
      this.hud.showRecord(record);
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        this.state.selectedId = null;
        this.sceneManager.highlight(null);
        this.hud.showRecordNotFound(recordId);
        return;
      }
      throw error;
    }
  }

  /** Pointer selection; clicking empty space changes nothing. */
  async selectAt(ndc: { x: number; y: number }, camera: THREE.Camera): Promise<void> {
    const hit = this.sceneManager.pickMarker(ndc, camera);
    if (hit === null) return;
    await this.selectRecord(hit);
  }

  /**
   * Closed time window; markers outside it are hidden. A newer call aborts
   * any in-flight one, so responses cannot apply out of order.
   */
  async applyTimeFilter(from: string | null, to: string | null): Promise<void> {
    this.filterAbort?.abort();
    const abort = new AbortController();
    this.filterAbort = abort;
    try {
      const result = await this.api.tweets(
        { from: from ?? undefined, to: to ?? undefined },
        abort.signal,
      );
      if (abort.signal.aborted) return;
      this.state.interval = { from, to };
      const visible = new Set(result.placements.map((p) => p.record_id));
      this.sceneManager.showOnly(from === null && to === null ? null : visible);
      this.hud.setStatus(`${result.placements.length} markers in window`);
    } catch (error) {
      if ((error as Error).name === "AbortError") return;
      if (error instanceof ApiError) {
        this.hud.setStatus(`filter rejected: ${error.reason}`);
        return;
      }
      throw error;
    }
  }

  setOpacityMode(mode: OpacityMode): void {
    this.state.opacityMode = mode;
    this.sceneManager.setOpacityMode(mode);
  }

  /** Keyword search; matches relocate onto the floating wall. */
  async runSearch(keyword: string): Promise<void> {
    if (keyword.trim() === "") {
      this.hud.setSearchMessage("enter a keyword to search");
      return;
    }
    const { wall } = await this.api.query(keyword);
    this.sceneManager.applyWall(wall);
    this.state.activeKeyword = wall.keyword;
    this.hud.setSearchMessage(
      wall.assignments.length === 0
        ? `no matches for "${wall.keyword}"`
        : `${wall.assignments.length} matches on the wall`,
    );
  }

  clearWall(): void {
    this.sceneManager.clearWall();
    this.state.activeKeyword = null;
    this.hud.setSearchMessage("");
  }

  /** Draw directed arrows along one user's consecutive post locations. */
  async followUser(username: string): Promise<void> {
    if (username.trim() === "") return;
    const path = await this.api.userPath(username.trim());
    const positions = path.tweet_ids
      .map((id) => this.placementsById.get(id))
      .filter((p): p is PlacementDto => p !== undefined)
      .map((p) => toSceneVec(p));
    this.sceneManager.setPathArrows(positions);
    this.state.followedUser = path.tweet_ids.length > 0 ? path.username : null;
    this.hud.setStatus(
      path.tweet_ids.length === 0
        ? `no posts by ${username.trim()}`
        : `following ${path.username}: ${path.edges.length} hops`,
    );
  }

  clearPath(): void {
    this.sceneManager.clearPathArrows();
    this.state.followedUser = null;
  }
}
