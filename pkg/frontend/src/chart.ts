/**
 * Minimal canvas line chart for the tracked block's vertical deflection
 * over time. The data-to-pixel mapping is exported separately so it can
 * be unit tested without a canvas.
 */
import type { TimeSeriesSample } from "./types";

export interface ChartPoint {
  x: number;
  y: number;
}

export interface ChartLayout {
  points: ChartPoint[];
  yMin: number;
  yMax: number;
  tMax: number;
}

export function deflectionLayout(
  series: TimeSeriesSample[],
  width: number,
  height: number,
  pad = 8
): ChartLayout {
  const values = series.map((s) => s.u[1]);
  const times = series.map((s) => s.time);
  const tMax = times.length ? Math.max(...times) : 1;
  let yMin = values.length ? Math.min(...values) : 0;
  let yMax = values.length ? Math.max(...values) : 0;
  if (yMin === yMax) {
    yMin -= 1e-9;
    yMax += 1e-9;
  }
  const points = series.map((s) => ({
    x: pad + (s.time / (tMax || 1)) * (width - 2 * pad),
    y: pad + ((yMax - s.u[1]) / (yMax - yMin)) * (height - 2 * pad),
  }));
  return { points, yMin, yMax, tMax };
}

export function drawDeflectionChart(
  canvas: HTMLCanvasElement,
  series: TimeSeriesSample[]
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#181c22";
  ctx.fillRect(0, 0, width, height);
  if (!series.length) return;

  const layout = deflectionLayout(series, width, height);

  // zero-deflection reference line
  if (layout.yMin < 0 && layout.yMax > 0) {
    const zeroY = 8 + (layout.yMax / (layout.yMax - layout.yMin)) * (height - 16);
    ctx.strokeStyle = "#3a4250";
    ctx.beginPath();
    ctx.moveTo(0, zeroY);
    ctx.lineTo(width, zeroY);
    ctx.stroke();
  }

  ctx.strokeStyle = "#6fc3ff";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  layout.points.forEach((p, i) => (i === 0 ? ctx.moveTo(p.x, p.y) : ctx.lineTo(p.x, p.y)));
  ctx.stroke();

  ctx.fillStyle = "#aab4c4";
  ctx.font = "10px system-ui, sans-serif";
  ctx.fillText(`${(layout.yMin * 1000).toFixed(3)} mm`, 4, height - 2);
  ctx.fillText(`${(layout.yMax * 1000).toFixed(3)} mm`, 4, 10);
  ctx.fillText(`${layout.tMax.toFixed(2)} s`, width - 44, height - 2);
}
