import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    include: ['tests/**/*.test.ts'],
    // the e2e file boots the real API server
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
