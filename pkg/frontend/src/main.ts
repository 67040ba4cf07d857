import { start } from "./app.js";

void start().catch((error: unknown) => {
  document.body.textContent = error instanceof Error ? error.message : String(error);
});
