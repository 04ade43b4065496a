#!/usr/bin/env node
/**
 * finhyper-export: per-term contextual embeddings in the shared text format.
 *
 * Usage:
 *   finhyper-export --input sentences.tsv --output context_768.txt \
 *       [--encoder bert-base-uncased] [--max-sentences 5] [--debug-per-sentence]
 *
 * Input lines are term<TAB>sentence (a line with an empty sentence field
 * marks a term that has no corpus sentences; it lands in the skip list).
 */

import { exportTermEmbeddings } from "./exporter";
import { UnknownEncoderError } from "./types";

interface CliArgs {
  input: string;
  output: string;
  encoder: string;
  maxSentences: number;
  debugPerSentence: boolean;
}

const USAGE =
  "usage: finhyper-export --input FILE --output FILE " +
  "[--encoder NAME] [--max-sentences N] [--debug-per-sentence]";

function parseArgs(argv: string[]): CliArgs {
  const args: Partial<CliArgs> = { encoder: "bert-base-uncased", maxSentences: 5, debugPerSentence: false };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const needValue = () => {
      const value = argv[++i];
      if (value === undefined) throw new Error(`${flag} needs a value`);
      return value;
    };
    switch (flag) {
      case "--input":
      case "-i":
        args.input = needValue();
        break;
      case "--output":
      case "-o":
        args.output = needValue();
        break;
      case "--encoder":
        args.encoder = needValue();
        break;
      case "--max-sentences": {
        const raw = needValue();
        args.maxSentences = Number.parseInt(raw, 10);
        if (!Number.isFinite(args.maxSentences)) throw new Error(`bad --max-sentences: ${raw}`);
        break;
      }
      case "--debug-per-sentence":
        args.debugPerSentence = true;
        break;
      case "--help":
      case "-h":
        console.log(USAGE);
        process.exit(0);
        break;
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  if (!args.input || !args.output) throw new Error("--input and --output are required");
  return args as CliArgs;
}

async function main(): Promise<number> {
  let args: CliArgs;
  try {
    args = parseArgs(process.argv.slice(2));
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }
  try {
    const result = await exportTermEmbeddings({
      input: args.input,
      output: args.output,
      encoderName: args.encoder,
      maxSentences: args.maxSentences,
      debugPerSentence: args.debugPerSentence,
    });
    console.log(`wrote ${args.output} (${result.written} rows, dim ${result.dim})`);
    if (result.skipped.length) {
      console.log(`skipped ${result.skipped.length} terms with no sentences (see ${args.output}.skipped)`);
    }
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return err instanceof UnknownEncoderError ? 2 : 1;
  }
}

main().then((code) => {
  process.exitCode = code;
});
