// Spawns the solver service once for the whole test run. If the service
// cannot start (no Python environment), the live workflow test skips.

import { spawn, type ChildProcess } from "node:child_process";

import type { TestProject } from "vitest/node";

const PORT = 8752 + (process.pid % 997);
const BASE = `http://127.0.0.1:${PORT}`;

async function waitForServer(timeoutMs: number): Promise<boolean> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      await fetch(`${BASE}/sessions/probe`);
      return true; // any HTTP response means the server is up
    } catch {
      await new Promise((resolve) => setTimeout(resolve, 150));
    }
  }
  return false;
}

let server: ChildProcess | null = null;

export default async function setup(project: TestProject): Promise<() => void> {
  server = spawn("polystatics", ["serve", "--port", String(PORT)], {
    stdio: "ignore",
  });
  server.on("error", () => {
    server = null;
  });
  const up = await waitForServer(15000);
  project.provide("serviceUrl", up ? BASE : "");
  return () => {
    server?.kill();
  };
}

declare module "vitest" {
  export interface ProvidedContext {
    serviceUrl: string;
  }
}
