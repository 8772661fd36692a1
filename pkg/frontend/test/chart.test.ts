import { describe, expect, it } from "vitest";

import { deflectionLayout } from "../src/chart";
import type { TimeSeriesSample } from "../src/types";

const sample = (time: number, uy: number): TimeSeriesSample => ({
  step: Math.round(time * 1000),
  time,
  u: [0, uy, 0],
  von_mises: 0,
});

describe("deflectionLayout", () => {
  it("maps time to x left-to-right and deflection to y top-down", () => {
    const series = [sample(0, 0), sample(1, -0.002), sample(2, -0.001)];
    const layout = deflectionLayout(series, 200, 100, 10);
    expect(layout.tMax).toBe(2);
    expect(layout.yMin).toBe(-0.002);
    expect(layout.yMax).toBe(0);
    expect(layout.points[0].x).toBe(10);
    expect(layout.points[2].x).toBe(190);
    // the most negative deflection sits at the bottom of the plot
    expect(layout.points[1].y).toBe(90);
    expect(layout.points[0].y).toBe(10);
  });

  it("handles a flat series without dividing by zero", () => {
    const series = [sample(0, 0), sample(1, 0)];
    const layout = deflectionLayout(series, 100, 50);
    expect(Number.isFinite(layout.points[0].y)).toBe(true);
    expect(Number.isFinite(layout.points[1].y)).toBe(true);
  });

  it("handles an empty series", () => {
    const layout = deflectionLayout([], 100, 50);
    expect(layout.points).toEqual([]);
  });
});
