import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { dirname, resolve } from "node:path";
import { loadTable } from "./csv.js";
import { parseRecipe, Recipe } from "./schema.js";
import { renderHeatmap } from "./heatmap.js";
import { renderScaling } from "./scaling.js";
import { renderMemory } from "./memory.js";

/** Render one recipe; paths inside the recipe are relative to `baseDir`. */
export function renderRecipe(recipe: Recipe, baseDir: string): string {
  const path = (p: string) => resolve(baseDir, p);
  let svg: string;
  switch (recipe.kind) {
    case "heatmap": {
      const map = loadTable(path(recipe.map), ["az", "a", "r_q"]);
      const curves = recipe.curves.map((c) => loadTable(path(c), ["az", "a"]));
      const sets = recipe.sets ? loadTable(path(recipe.sets), ["a", "az"]) : null;
      svg = renderHeatmap(map, curves, sets, recipe.title);
      break;
    }
    case "scaling": {
      svg = renderScaling(loadTable(path(recipe.data), ["N", "one_minus_r_q"]), recipe.title);
      break;
    }
    case "memory": {
      svg = renderMemory(
        loadTable(path(recipe.data), ["tau_Gamma1D", "one_minus_rf_numeric", "one_minus_rf_approx"]),
        recipe.title,
      );
      break;
    }
  }
  const out = path(recipe.output);
  mkdirSync(dirname(out), { recursive: true });
  writeFileSync(out, svg);
  return out;
}

export function renderRecipeFile(recipePath: string): string {
  const recipe = parseRecipe(readFileSync(recipePath, "utf8"), recipePath);
  return renderRecipe(recipe, dirname(resolve(recipePath)));
}
