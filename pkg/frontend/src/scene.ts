/**
 * Three.js view of the editor state: instanced unit cubes, a ground
 * grid, simple orbit controls, and picking. Rendering only; every edit
 * goes back through EditorState.
 */
import * as THREE from "three";
import type { EditorState } from "./editor";
import { PALETTE } from "./palette";
import type { Frame } from "./types";
import { parseKey } from "./worldDoc";

const KIND_COLORS: Record<string, string> = {
  structural: "#8d99a8",
  load: "#8c5ad1",
  fixed: "#49566b",
};

export interface PickResult {
  coord: [number, number, number];
  adjacent: [number, number, number];
}

export class VoxelScene {
  private renderer: THREE.WebGLRenderer;
  private scene: THREE.Scene;
  private camera: THREE.PerspectiveCamera;
  private mesh: THREE.InstancedMesh | null = null;
  private exceedsGroup: THREE.Group;
  private coords: [number, number, number][] = [];
  private raycaster = new THREE.Raycaster();
  private groundPlane: THREE.Mesh;
  // orbit state
  private target = new THREE.Vector3(8, 2, 4);
  private spherical = new THREE.Spherical(34, Math.PI / 3, Math.PI / 5);
  private dragging = false;
  private lastPointer = { x: 0, y: 0 };

  constructor(private canvas: HTMLCanvasElement, private editor: EditorState) {
    this.renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
    this.scene = new THREE.Scene();
    this.scene.background = new THREE.Color("#10141a");
    this.camera = new THREE.PerspectiveCamera(50, 1, 0.1, 500);

    const ambient = new THREE.AmbientLight(0xffffff, 0.7);
    const sun = new THREE.DirectionalLight(0xffffff, 1.4);
    sun.position.set(20, 40, 10);
    this.scene.add(ambient, sun);

    const grid = new THREE.GridHelper(64, 64, 0x2e3642, 0x232a33);
    this.scene.add(grid);

    this.groundPlane = new THREE.Mesh(
      new THREE.PlaneGeometry(512, 512),
      new THREE.MeshBasicMaterial({ visible: false })
    );
    this.groundPlane.rotation.x = -Math.PI / 2;
    this.scene.add(this.groundPlane);

    this.exceedsGroup = new THREE.Group();
    this.scene.add(this.exceedsGroup);

    this.bindControls();
    this.syncCamera();
  }

  private bindControls(): void {
    this.canvas.addEventListener("pointerdown", (e) => {
      if (e.button === 2 || e.shiftKey) {
        this.dragging = true;
        this.lastPointer = { x: e.clientX, y: e.clientY };
      }
    });
    window.addEventListener("pointerup", () => (this.dragging = false));
    window.addEventListener("pointermove", (e) => {
      if (!this.dragging) return;
      const dx = e.clientX - this.lastPointer.x;
      const dy = e.clientY - this.lastPointer.y;
      this.lastPointer = { x: e.clientX, y: e.clientY };
      this.spherical.theta -= dx * 0.006;
      this.spherical.phi = Math.min(Math.max(this.spherical.phi - dy * 0.006, 0.1), 1.5);
      this.syncCamera();
    });
    this.canvas.addEventListener(
      "wheel",
      (e) => {
        e.preventDefault();
        this.spherical.radius = Math.min(
          Math.max(this.spherical.radius * (1 + Math.sign(e.deltaY) * 0.1), 4),
          160
        );
        this.syncCamera();
      },
      { passive: false }
    );
    this.canvas.addEventListener("contextmenu", (e) => e.preventDefault());
  }

  private syncCamera(): void {
    this.camera.position.setFromSpherical(this.spherical).add(this.target);
    this.camera.lookAt(this.target);
  }

  resize(width: number, height: number): void {
    this.renderer.setSize(width, height, false);
    this.camera.aspect = width / height;
    this.camera.updateProjectionMatrix();
  }

  /** Rebuild instances from the editor's world and overlay. */
  rebuild(): void {
    if (this.mesh) {
      this.scene.remove(this.mesh);
      this.mesh.geometry.dispose();
      (this.mesh.material as THREE.Material).dispose();
      this.mesh = null;
    }
    this.exceedsGroup.clear();
    const entries = this.editor.world.entries();
    this.coords = entries.map(([k]) => parseKey(k));
    if (!entries.length) return;

    const geometry = new THREE.BoxGeometry(0.98, 0.98, 0.98);
    const material = new THREE.MeshLambertMaterial();
    this.mesh = new THREE.InstancedMesh(geometry, material, entries.length);
    const m = new THREE.Matrix4();
    entries.forEach(([k, kind], i) => {
      const [x, y, z] = parseKey(k);
      m.setPosition(x, y + 0.5, z);
      this.mesh!.setMatrixAt(i, m);
      const color = this.editor.colorOf(x, y, z) ?? KIND_COLORS[kind];
      this.mesh!.setColorAt(i, new THREE.Color(color));
      if (this.editor.visual(x, y, z).exceeds) {
        const marker = new THREE.LineSegments(
          new THREE.EdgesGeometry(geometry),
          new THREE.LineBasicMaterial({ color: 0xff2222 })
        );
        marker.position.set(x, y + 0.5, z);
        this.exceedsGroup.add(marker);
      }
    });
    this.mesh.instanceMatrix.needsUpdate = true;
    if (this.mesh.instanceColor) this.mesh.instanceColor.needsUpdate = true;
    this.scene.add(this.mesh);
  }

  /** Deformed playback: move instances to frame positions, color by bins. */
  showFrame(frame: Frame): void {
    if (!this.mesh) return;
    const byCoord = new Map<string, number>();
    this.coords.forEach(([x, y, z], i) => byCoord.set(`${x},${y},${z}`, i));
    const m = new THREE.Matrix4();
    frame.positions.forEach((p, j) => {
      const c = this.editor.lastResult?.particles[j];
      if (!c) return;
      const i = byCoord.get(`${c[0]},${c[1]},${c[2]}`);
      if (i === undefined) return;
      m.setPosition(p[0], p[1] + 0.5, p[2]);
      this.mesh!.setMatrixAt(i, m);
      this.mesh!.setColorAt(i, new THREE.Color(PALETTE[frame.bins[j]]));
    });
    this.mesh.instanceMatrix.needsUpdate = true;
    if (this.mesh.instanceColor) this.mesh.instanceColor.needsUpdate = true;
  }

  pick(clientX: number, clientY: number): PickResult | null {
    const rect = this.canvas.getBoundingClientRect();
    const ndc = new THREE.Vector2(
      ((clientX - rect.left) / rect.width) * 2 - 1,
      -((clientY - rect.top) / rect.height) * 2 + 1
    );
    this.raycaster.setFromCamera(ndc, this.camera);
    if (this.mesh) {
      const hits = this.raycaster.intersectObject(this.mesh);
      if (hits.length && hits[0].instanceId !== undefined) {
        const coord = this.coords[hits[0].instanceId];
        const n = hits[0].face?.normal ?? new THREE.Vector3(0, 1, 0);
        const adjacent: [number, number, number] = [
          coord[0] + Math.round(n.x),
          coord[1] + Math.round(n.y),
          coord[2] + Math.round(n.z),
        ];
        return { coord, adjacent };
      }
    }
    const ground = this.raycaster.intersectObject(this.groundPlane);
    if (ground.length) {
      const p = ground[0].point;
      const cell: [number, number, number] = [Math.round(p.x), 0, Math.round(p.z)];
      return { coord: cell, adjacent: cell };
    }
    return null;
  }

  render(): void {
    this.renderer.render(this.scene, this.camera);
  }
}
