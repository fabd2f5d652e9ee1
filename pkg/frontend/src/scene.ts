// Scene graph management: terrain chunks, tweet markers, the query wall and
// user-path arrows. Everything here is plain three.js object math, so it
// runs headless; only main.ts touches a WebGL renderer.

import * as THREE from "three";
import type { ChunkDto, OpacityMode, PlacementDto, PointDto, WallDto } from "./types";
import { wallSlotPosition } from "./wall";

// Service coordinates are metres with x east, y north, z up. three.js is
// y-up right-handed, so north maps to -z. This is the only coordinate
// convention in the client; positions themselves come from the API as-is.
export function toSceneVec(p: PointDto | PlacementDto): THREE.Vector3 {
  return new THREE.Vector3(p.x, p.z, -p.y);
}

const BIRD_COLOR = 0x2277ee;
const SKULL_COLOR = 0xcc2222;
const HIGHLIGHT_COLOR = 0xffcc00;

const birdGeometry = new THREE.ConeGeometry(0.6, 1.4, 8);
const skullGeometry = new THREE.OctahedronGeometry(0.8);

function markerMaterial(modelClass: string): THREE.MeshLambertMaterial {
  return new THREE.MeshLambertMaterial({
    color: modelClass === "skull" ? SKULL_COLOR : BIRD_COLOR,
  });
}

export class SceneManager {
  readonly scene = new THREE.Scene();

  private terrainGroup = new THREE.Group();
  private markerGroup = new THREE.Group();
  private wallGroup = new THREE.Group();
  private arrowGroup = new THREE.Group();
  private terrainMaterials: THREE.MeshLambertMaterial[] = [];
  private markersById = new Map<string, THREE.Mesh>();
  private homePositions = new Map<string, THREE.Vector3>();
  private highlightedId: string | null = null;
  private raycaster = new THREE.Raycaster();

  constructor() {
    this.terrainGroup.name = "terrain";
    this.markerGroup.name = "markers";
    this.wallGroup.name = "wall";
    this.arrowGroup.name = "path-arrows";
    this.scene.add(this.terrainGroup, this.markerGroup, this.wallGroup, this.arrowGroup);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.7));
    const sun = new THREE.DirectionalLight(0xffffff, 1.2);
    sun.position.set(300, 600, -200);
    this.scene.add(sun);
  }

  setTerrain(chunks: ChunkDto[]): void {
    this.terrainGroup.clear();
    this.terrainMaterials = [];
    for (const chunk of chunks) {
      const positions = new Float32Array(chunk.vertices.length * 3);
      chunk.vertices.forEach(([x, y, z], i) => {
        positions[3 * i] = x;
        positions[3 * i + 1] = z;
        positions[3 * i + 2] = -y;
      });
      const geometry = new THREE.BufferGeometry();
      geometry.setAttribute("position", new THREE.BufferAttribute(positions, 3));
      geometry.setIndex(chunk.triangles.flat());
      geometry.computeVertexNormals();
      const material = new THREE.MeshLambertMaterial({
        color: 0x8a9a7b,
        side: THREE.DoubleSide,
      });
      this.terrainMaterials.push(material);
      const mesh = new THREE.Mesh(geometry, material);
      mesh.name = `terrain-chunk-${chunk.chunk_id}`;
      this.terrainGroup.add(mesh);
    }
  }

  terrainChunkCount(): number {
    return this.terrainGroup.children.length;
  }

  setOpacityMode(mode: OpacityMode): void {
    for (const material of this.terrainMaterials) {
      material.wireframe = mode === "wireframe";
      material.transparent = mode === "transparent";
      material.opacity = mode === "transparent" ? 0.15 : 1.0;
      material.needsUpdate = true;
    }
  }

  setMarkers(placements: PlacementDto[]): void {
    this.markerGroup.clear();
    this.markersById.clear();
    this.homePositions.clear();
    this.highlightedId = null;
    for (const placement of placements) {
      const isSkull = placement.model_class === "skull";
      const mesh = new THREE.Mesh(
        isSkull ? skullGeometry : birdGeometry,
        markerMaterial(placement.model_class),
      );
      mesh.position.copy(toSceneVec(placement));
      mesh.userData = { recordId: placement.record_id, modelClass: placement.model_class };
      mesh.name = `marker-${placement.record_id}`;
      this.markerGroup.add(mesh);
      this.markersById.set(placement.record_id, mesh);
      this.homePositions.set(placement.record_id, mesh.position.clone());
    }
  }

  marker(recordId: string): THREE.Mesh | undefined {
    return this.markersById.get(recordId);
  }

  markerCount(): number {
    return this.markerGroup.children.length;
  }

  visibleMarkerCount(): number {
    return this.markerGroup.children.filter((m) => m.visible).length;
  }

  /** Show only the given ids (time filter); null shows everything. */
  showOnly(ids: Set<string> | null): void {
    for (const [recordId, mesh] of this.markersById) {
      mesh.visible = ids === null || ids.has(recordId);
    }
  }

  /** Swap highlight to one marker (or none); enforces single selection. */
  highlight(recordId: string | null): void {
    if (this.highlightedId !== null) {
      const previous = this.markersById.get(this.highlightedId);
      if (previous) {
        (previous.material as THREE.MeshLambertMaterial).color.set(
          previous.userData.modelClass === "skull" ? SKULL_COLOR : BIRD_COLOR,
        );
        previous.scale.setScalar(1);
        previous.userData.highlighted = false;
      }
    }
    this.highlightedId = recordId;
    if (recordId !== null) {
      const mesh = this.markersById.get(recordId);
      if (mesh) {
        (mesh.material as THREE.MeshLambertMaterial).color.set(HIGHLIGHT_COLOR);
        mesh.scale.setScalar(1.6);
        mesh.userData.highlighted = true;
      }
    }
  }

  highlighted(): string | null {
    return this.highlightedId;
  }

  /** Move matched markers to their wall slots and draw the wall backing. */
  applyWall(wall: WallDto): void {
    this.clearWall();
    if (wall.assignments.length === 0) return;

    wall.assignments.forEach(([recordId], index) => {
      const mesh = this.markersById.get(recordId);
      if (!mesh) return;
      const slot = wallSlotPosition(wall.origin, wall.columns, wall.slot_spacing_m, index);
      mesh.position.copy(toSceneVec(slot));
    });

    const rows = Math.ceil(wall.assignments.length / wall.columns);
    const width = wall.columns * wall.slot_spacing_m;
    const height = rows * wall.slot_spacing_m;
    const backing = new THREE.Mesh(
      new THREE.PlaneGeometry(width, height),
      new THREE.MeshBasicMaterial({
        color: 0x223344,
        transparent: true,
        opacity: 0.35,
        side: THREE.DoubleSide,
      }),
    );
    // Centre the backing behind the slot grid (slots grow +x and +z/up).
    const centre = toSceneVec(wall.origin);
    backing.position.set(
      centre.x + width / 2 - wall.slot_spacing_m / 2,
      centre.y + height / 2 - wall.slot_spacing_m / 2,
      centre.z - 0.5,
    );
    backing.name = "wall-backing";
    this.wallGroup.add(backing);
  }

  /** Return wall markers to their placement positions. */
  clearWall(): void {
    this.wallGroup.clear();
    for (const [recordId, mesh] of this.markersById) {
      const home = this.homePositions.get(recordId);
      if (home) mesh.position.copy(home);
    }
  }

  wallActive(): boolean {
    return this.wallGroup.children.length > 0;
  }

  /** Directed arrows along consecutive positions of a user's path. */
  setPathArrows(positions: THREE.Vector3[]): void {
    this.clearPathArrows();
    for (let i = 0; i + 1 < positions.length; i++) {
      const from = positions[i];
      const to = positions[i + 1];
      const direction = to.clone().sub(from);
      const length = direction.length();
      if (length === 0) continue;
      const arrow = new THREE.ArrowHelper(
        direction.normalize(),
        from,
        length,
        0xff8800,
        Math.min(4, length * 0.25),
        Math.min(2, length * 0.12),
      );
      arrow.name = `path-arrow-${i}`;
      this.arrowGroup.add(arrow);
    }
  }

  clearPathArrows(): void {
    this.arrowGroup.clear();
  }

  arrowCount(): number {
    return this.arrowGroup.children.length;
  }

  /** Record id of the closest visible marker under a pointer, if any. */
  pickMarker(ndc: { x: number; y: number }, camera: THREE.Camera): string | null {
    // Matrices normally refresh during render; picking must not rely on it.
    this.scene.updateMatrixWorld(true);
    this.raycaster.setFromCamera(new THREE.Vector2(ndc.x, ndc.y), camera);
    const hits = this.raycaster.intersectObjects(
      this.markerGroup.children.filter((m) => m.visible),
      false,
    );
    if (hits.length === 0) return null;
    return (hits[0].object.userData.recordId as string) ?? null;
  }
}
