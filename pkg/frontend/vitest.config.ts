import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    globalSetup: ["./tests/setup.ts"],
    testTimeout: 20000,
    hookTimeout: 30000,
  },
});
