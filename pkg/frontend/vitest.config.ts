import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    globals: true,
    environment: "node",
    include: ["test/**/*.test.ts"],
    // the boundary suite spawns the Python service and the CLI
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});
