import { z } from "zod";

/** Raised when an input artifact does not match the expected schema. */
export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

/** Sidecar schema version this renderer understands. */
export const SCHEMA_VERSION = 1;

export const sidecarSchema = z.object({
  version: z.string(),
  schema_version: z.number(),
  subcommand: z.string(),
  config: z.record(z.string(), z.unknown()),
  results: z.record(z.string(), z.unknown()),
});

export type Sidecar = z.infer<typeof sidecarSchema>;

export function parseSidecar(text: string, source: string): Sidecar {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    throw new SchemaError(`${source}: sidecar is not valid JSON`);
  }
  const parsed = sidecarSchema.safeParse(raw);
  if (!parsed.success) {
    throw new SchemaError(`${source}: ${parsed.error.issues.map((i) => i.message).join("; ")}`);
  }
  if (parsed.data.schema_version !== SCHEMA_VERSION) {
    throw new SchemaError(
      `${source}: sidecar schema version ${parsed.data.schema_version}, expected ${SCHEMA_VERSION}`,
    );
  }
  return parsed.data;
}

/** Pull a numeric result field out of a sidecar or fail loudly. */
export function numericResult(sidecar: Sidecar, key: string, source: string): number {
  const value = sidecar.results[key];
  if (typeof value !== "number" || !Number.isFinite(value)) {
    throw new SchemaError(`${source}: sidecar results.${key} is missing or not a number`);
  }
  return value;
}

export const recipeSchema = z.discriminatedUnion("kind", [
  z.object({
    kind: z.literal("heatmap"),
    map: z.string(),
    curves: z.array(z.string()).default([]),
    sets: z.string().optional(),
    output: z.string(),
    title: z.string().optional(),
  }),
  z.object({
    kind: z.literal("scaling"),
    data: z.string(),
    output: z.string(),
    title: z.string().optional(),
  }),
  z.object({
    kind: z.literal("memory"),
    data: z.string(),
    output: z.string(),
    title: z.string().optional(),
  }),
]);

export type Recipe = z.infer<typeof recipeSchema>;

export function parseRecipe(text: string, source: string): Recipe {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    throw new SchemaError(`${source}: recipe is not valid JSON`);
  }
  const parsed = recipeSchema.safeParse(raw);
  if (!parsed.success) {
    throw new SchemaError(`${source}: ${parsed.error.issues.map((i) => i.message).join("; ")}`);
  }
  return parsed.data;
}
