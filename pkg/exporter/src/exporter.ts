/**
 * Read term<TAB>sentence lines, encode each term's sentences, and write one
 * row per term in the shared embedding text format. Terms with no usable
 * sentences are omitted from the table and listed in a ".skipped" sidecar;
 * debug mode writes every per-sentence vector to a ".debug" sidecar (the
 * emitted row is their mean).
 */

import * as fs from "node:fs";

import { resolveEncoder } from "./encoders";
import { meanRows, termOccurrenceVector } from "./pooling";

export interface ExportOptions {
  input: string;
  output: string;
  encoderName: string;
  maxSentences: number;
  debugPerSentence: boolean;
}

export interface ExportResult {
  written: number;
  skipped: string[];
  dim: number;
}

/** Parse the input into key -> sentences, preserving first-seen key order. */
export function readSentenceFile(path: string): Map<string, string[]> {
  const byKey = new Map<string, string[]>();
  const text = fs.readFileSync(path, "utf-8");
  text.split("\n").forEach((raw, idx) => {
    const line = raw.replace(/\r$/, "");
    if (!line.trim()) return;
    const tab = line.indexOf("\t");
    if (tab < 0) {
      throw new Error(`${path}:${idx + 1}: expected term<TAB>sentence, got ${JSON.stringify(line)}`);
    }
    const key = line.slice(0, tab);
    const sentence = line.slice(tab + 1).trim();
    if (!key || /\s/.test(key)) {
      throw new Error(`${path}:${idx + 1}: bad term key ${JSON.stringify(key)}`);
    }
    if (!byKey.has(key)) byKey.set(key, []);
    if (sentence) byKey.get(key)!.push(sentence); // empty sentence = zero-sentence marker
  });
  return byKey;
}

function formatRow(key: string, vector: number[]): string {
  return key + " " + vector.map((x) => String(x)).join(" ");
}

export async function exportTermEmbeddings(options: ExportOptions): Promise<ExportResult> {
  if (options.maxSentences < 1) {
    throw new Error(`--max-sentences must be positive, got ${options.maxSentences}`);
  }
  const encoder = await resolveEncoder(options.encoderName);
  const byKey = readSentenceFile(options.input);

  const rows: Array<[string, number[]]> = [];
  const skipped: string[] = [];
  const debugLines: string[] = [];

  const keys = [...byKey.keys()].sort();
  for (const key of keys) {
    const termTokens = key.split("_").filter(Boolean);
    const sentences = byKey.get(key)!.slice(0, options.maxSentences);
    const perSentence: number[][] = [];
    for (const sentence of sentences) {
      const encoding = await encoder.encode(sentence);
      const occurrence = termOccurrenceVector(encoding, termTokens);
      if (occurrence !== null) {
        if (options.debugPerSentence) {
          debugLines.push(`${key} ${perSentence.length} ${occurrence.map(String).join(" ")}`);
        }
        perSentence.push(occurrence);
      }
    }
    if (perSentence.length === 0) {
      skipped.push(key);
    } else {
      rows.push([key, meanRows(perSentence)]);
    }
  }

  const lines = [`${rows.length} ${encoder.dim}`];
  for (const [key, vector] of rows) lines.push(formatRow(key, vector));
  fs.writeFileSync(options.output, lines.join("\n") + "\n", "utf-8");
  fs.writeFileSync(
    options.output + ".skipped",
    skipped.length ? skipped.join("\n") + "\n" : "",
    "utf-8"
  );
  if (options.debugPerSentence) {
    fs.writeFileSync(
      options.output + ".debug",
      debugLines.length ? debugLines.join("\n") + "\n" : "",
      "utf-8"
    );
  }
  return { written: rows.length, skipped, dim: encoder.dim };
}
