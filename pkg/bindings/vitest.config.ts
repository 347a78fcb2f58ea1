import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    // Every fit/predict call round-trips through a spawned CLI process.
    testTimeout: 120_000,
  },
});
