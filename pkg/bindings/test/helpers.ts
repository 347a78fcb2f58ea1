import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { Label } from "../src/core.js";

export const FIXTURES = join(
  dirname(fileURLToPath(import.meta.url)),
  "fixtures",
);

export const IRIS_CSV = join(FIXTURES, "iris.csv");

/** Parse a label-first CSV into feature rows and label strings. */
export function readLabeledCsv(path: string): { X: number[][]; y: string[] } {
  const X: number[][] = [];
  const y: string[] = [];
  for (const line of readFileSync(path, "utf8").trim().split("\n")) {
    const cells = line.split(",");
    y.push(cells[0]);
    X.push(cells.slice(1).map(Number));
  }
  return { X, y };
}

export function accuracy(expected: readonly Label[], got: readonly Label[]): number {
  let hits = 0;
  for (let i = 0; i < expected.length; i++) {
    if (expected[i] === got[i]) {
      hits++;
    }
  }
  return (100 * hits) / expected.length;
}

/** Two well-separated 2-D clusters labeled 1 and -1. */
export function twoClusters(perClass = 10): { X: number[][]; y: number[] } {
  const X: number[][] = [];
  const y: number[] = [];
  for (let i = 0; i < perClass; i++) {
    // Deterministic jitter keeps the clusters separable but not degenerate.
    const dx = 0.3 * Math.sin(3.7 * i);
    const dy = 0.3 * Math.cos(1.9 * i);
    X.push([3 + dx, dy]);
    y.push(1);
    X.push([-3 + dx, -dy]);
    y.push(-1);
  }
  return { X, y };
}

/** Three separable 2-D clusters labeled "a", "b", "c". */
export function threeClusters(perClass = 8): { X: number[][]; y: string[] } {
  const centers: [number, number, string][] = [
    [4, 0, "a"],
    [-4, 0, "b"],
    [0, 4, "c"],
  ];
  const X: number[][] = [];
  const y: string[] = [];
  for (const [cx, cy, label] of centers) {
    for (let i = 0; i < perClass; i++) {
      X.push([cx + 0.4 * Math.sin(2.3 * i), cy + 0.4 * Math.cos(4.1 * i)]);
      y.push(label);
    }
  }
  return { X, y };
}
