// Browser entry point: WebGL renderer, fly camera, pointer selection, and
// the optional ground image from the scene config. The API base URL comes
// from ?api=... and defaults to the page's own origin.

import * as THREE from "three";
import { ExplorerApp } from "./app";
import { createFlyControls } from "./camera";

const container = document.getElementById("app");
if (!container) throw new Error("missing #app container");

const baseUrl =
  new URLSearchParams(window.location.search).get("api") ?? window.location.origin;

const app = new ExplorerApp(baseUrl, container);

const renderer = new THREE.WebGLRenderer({ antialias: true });
renderer.setSize(window.innerWidth, window.innerHeight);
renderer.setPixelRatio(window.devicePixelRatio);
container.prepend(renderer.domElement);

const controls = createFlyControls(renderer.domElement, window.innerWidth / window.innerHeight);

window.addEventListener("resize", () => {
  controls.camera.aspect = window.innerWidth / window.innerHeight;
  controls.camera.updateProjectionMatrix();
  renderer.setSize(window.innerWidth, window.innerHeight);
});

renderer.domElement.addEventListener("click", (event) => {
  const ndc = {
    x: (event.clientX / window.innerWidth) * 2 - 1,
    y: -(event.clientY / window.innerHeight) * 2 + 1,
  };
  void app.selectAt(ndc, controls.camera);
});

void app.load().then((ok) => {
  if (!ok || !app.frame) return;
  // Park the camera over the scene centre looking north.
  const frame = app.frame;
  controls.camera.position.set(frame.width_m / 2, 160, -frame.depth_m * 0.15);

  if (app.groundImage) {
    new THREE.TextureLoader().load(app.groundImage, (texture) => {
      const ground = new THREE.Mesh(
        new THREE.PlaneGeometry(frame.width_m, frame.depth_m),
        new THREE.MeshLambertMaterial({ map: texture }),
      );
      ground.rotation.x = -Math.PI / 2;
      ground.position.set(frame.width_m / 2, -0.05, -frame.depth_m / 2);
      app.sceneManager.scene.add(ground);
    });
  }
});

let last = performance.now();
function frameLoop(now: number) {
  controls.update((now - last) / 1000);
  last = now;
  renderer.render(app.sceneManager.scene, controls.camera);
  requestAnimationFrame(frameLoop);
}
requestAnimationFrame(frameLoop);
