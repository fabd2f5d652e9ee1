// Thin typed client for the scene service. One base URL is the only
// configuration; callers can pass an AbortSignal so a newer request can
// cancel a stale in-flight one.

import type {
  PlacementsDto,
  QueryResponseDto,
  SceneInfoDto,
  TerrainDto,
  TweetDto,
  UserPathDto,
} from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    public reason: string,
  ) {
    super(`API ${status}: ${reason}`);
  }
}

export interface TweetFilter {
  from?: string;
  to?: string;
  bbox?: string;
}

export class ApiClient {
  constructor(private baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      let reason = response.statusText;
      try {
        const body = await response.json();
        if (body && typeof body.detail === "string") reason = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, reason);
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("/health");
  }

  scene(): Promise<SceneInfoDto> {
    return this.request("/scene");
  }

  terrain(): Promise<TerrainDto> {
    return this.request("/terrain");
  }

  tweets(filter: TweetFilter = {}, signal?: AbortSignal): Promise<PlacementsDto> {
    const params = new URLSearchParams();
    if (filter.from) params.set("from", filter.from);
    if (filter.to) params.set("to", filter.to);
    if (filter.bbox) params.set("bbox", filter.bbox);
    const qs = params.toString();
    return this.request(`/tweets${qs ? "?" + qs : ""}`, { signal });
  }

  tweet(id: string): Promise<TweetDto> {
    return this.request(`/tweets/${encodeURIComponent(id)}`);
  }

  query(keyword: string): Promise<QueryResponseDto> {
    return this.request("/query", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ keyword }),
    });
  }

  userPath(username: string): Promise<UserPathDto> {
    return this.request(`/users/${encodeURIComponent(username)}/path`);
  }
}
