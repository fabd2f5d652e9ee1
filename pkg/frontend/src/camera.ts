// Free-form fly camera: WASD/QE movement, mouse look under pointer lock.
// Double-click toggles the lock so single clicks stay free for selection.

import * as THREE from "three";

export interface FlyControls {
  camera: THREE.PerspectiveCamera;
  update(dtSeconds: number): void;
  dispose(): void;
}

export function createFlyControls(dom: HTMLElement, aspect: number): FlyControls {
  const camera = new THREE.PerspectiveCamera(60, aspect, 0.1, 20000);
  camera.position.set(0, 120, 80);
  camera.lookAt(200, 0, -200);

  let yaw = Math.PI / 4;
  let pitch = -0.4;
  const held = new Set<string>();
  let locked = false;
  const speed = 60; // m/s

  const onDoubleClick = () => {
    if (locked) dom.ownerDocument.exitPointerLock();
    else dom.requestPointerLock();
  };
  const onLockChange = () => {
    locked = dom.ownerDocument.pointerLockElement === dom;
  };
  const onMouseMove = (event: MouseEvent) => {
    if (!locked) return;
    yaw -= (event.movementX || 0) * 0.0025;
    pitch -= (event.movementY || 0) * 0.0025;
    pitch = Math.max(-Math.PI / 2 + 0.01, Math.min(Math.PI / 2 - 0.01, pitch));
  };
  const onKeyDown = (event: KeyboardEvent) => held.add(event.key.toLowerCase());
  const onKeyUp = (event: KeyboardEvent) => held.delete(event.key.toLowerCase());

  dom.addEventListener("dblclick", onDoubleClick);
  dom.ownerDocument.addEventListener("pointerlockchange", onLockChange);
  dom.ownerDocument.addEventListener("mousemove", onMouseMove);
  dom.ownerDocument.addEventListener("keydown", onKeyDown);
  dom.ownerDocument.addEventListener("keyup", onKeyUp);

  const forward = new THREE.Vector3();
  const right = new THREE.Vector3();
  const up = new THREE.Vector3(0, 1, 0);

  return {
    camera,
    update(dtSeconds: number) {
      camera.rotation.set(pitch, yaw, 0, "YXZ");
      forward.set(-Math.sin(yaw) * Math.cos(pitch), Math.sin(pitch), -Math.cos(yaw) * Math.cos(pitch));
      right.crossVectors(forward, up).normalize();
      const step = speed * dtSeconds;
      if (held.has("w")) camera.position.addScaledVector(forward, step);
      if (held.has("s")) camera.position.addScaledVector(forward, -step);
      if (held.has("a")) camera.position.addScaledVector(right, -step);
      if (held.has("d")) camera.position.addScaledVector(right, step);
      if (held.has("q")) camera.position.y += step;
      if (held.has("e")) camera.position.y -= step;
    },
    dispose() {
      dom.removeEventListener("dblclick", onDoubleClick);
      dom.ownerDocument.removeEventListener("pointerlockchange", onLockChange);
      dom.ownerDocument.removeEventListener("mousemove", onMouseMove);
      dom.ownerDocument.removeEventListener("keydown", onKeyDown);
      dom.ownerDocument.removeEventListener("keyup", onKeyUp);
    },
  };
}
