import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import type { SceneDoc } from "../src/types.js";

export const SERVICE_URL = "http://127.0.0.1:8123";

export function fixture(name: string): SceneDoc {
  const here = dirname(fileURLToPath(import.meta.url));
  return JSON.parse(
    readFileSync(join(here, "fixtures", name), "utf-8"),
  ) as SceneDoc;
}
