import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    environment: 'node',
    include: ['tests/**/*.test.ts'],
    // the integration suite kills its spawned server; keep files isolated
    fileParallelism: false,
    testTimeout: 30_000,
  },
});
