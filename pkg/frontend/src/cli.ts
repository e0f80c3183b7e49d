import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { SchemaError } from "./schema.js";
import { renderRecipeFile } from "./render.js";

export async function main(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .scriptName("biarray-figures")
    .command("render <recipes...>", "render figure recipes to SVG", (y) =>
      y.positional("recipes", { type: "string", array: true, demandOption: true }),
    )
    .demandCommand(1)
    .strict()
    .help()
    .parse();

  const recipes = args.recipes as string[];
  for (const recipe of recipes) {
    try {
      const out = renderRecipeFile(recipe);
      console.log(`${recipe} -> ${out}`);
    } catch (err) {
      if (err instanceof SchemaError) {
        console.error(`schema error: ${err.message}`);
        return 1;
      }
      throw err;
    }
  }
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
