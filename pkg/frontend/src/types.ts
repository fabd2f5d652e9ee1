// Wire types for the scene service's HTTP/JSON API. The client performs no
// geodetic math of its own: every coordinate here is already in scene metres.

export interface GeoBoundsDto {
  min_lat: number;
  min_lon: number;
  max_lat: number;
  max_lon: number;
}

export interface SceneFrameDto {
  bounds: GeoBoundsDto;
  width_m: number;
  depth_m: number;
}

export interface SceneInfoDto {
  frame: SceneFrameDto;
  ground_image: string | null;
}

export interface ChunkDto {
  chunk_id: number;
  vertices: [number, number, number][];
  triangles: [number, number, number][];
}

export interface TerrainDto {
  chunks: ChunkDto[];
}

export interface PlacementDto {
  record_id: string;
  x: number;
  y: number;
  z: number;
  stack_index: number;
  model_class: string;
}

export interface PlacementsDto {
  placements: PlacementDto[];
}

export interface TweetDto {
  id: string;
  username: string;
  follower_count: number;
  timestamp: string;
  latitude: number;
  longitude: number;
  text: string;
  tags: string[];
}

export interface PointDto {
  x: number;
  y: number;
  z: number;
}

export interface WallDto {
  keyword: string;
  origin: PointDto;
  columns: number;
  slot_spacing_m: number;
  assignments: [string, number, number][];
}

export interface QueryResponseDto {
  wall: WallDto;
}

export interface UserPathDto {
  username: string;
  tweet_ids: string[];
  edges: [string, string][];
}

export type OpacityMode = "solid" | "wireframe" | "transparent";
