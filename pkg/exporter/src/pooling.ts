/**
 * Pooling steps from word pieces up to one vector per term and sentence:
 * pieces of a word are averaged into a word vector first (so multi-piece
 * words are not over-weighted), then the term's constituent words are
 * averaged into the occurrence vector.
 */

import { SentenceEncoding } from "./types";
import { normalizeWord } from "./stem";

export function meanRows(rows: number[][]): number[] {
  const dim = rows[0].length;
  const out = new Array<number>(dim).fill(0);
  for (const row of rows) {
    for (let j = 0; j < dim; j++) out[j] += row[j];
  }
  for (let j = 0; j < dim; j++) out[j] /= rows.length;
  return out;
}

/** Average each word's pieces into one vector per word (null for words with no pieces). */
export function poolPiecesToWords(encoding: SentenceEncoding): Array<number[] | null> {
  const groups: number[][][] = encoding.words.map(() => []);
  encoding.pieceToWord.forEach((wordIdx, pieceIdx) => {
    groups[wordIdx].push(encoding.pieceVectors[pieceIdx]);
  });
  return groups.map((rows) => (rows.length ? meanRows(rows) : null));
}

/**
 * Mean over the sentence's words whose normalized form is one of the term's
 * key tokens (every occurrence counts once). Null when the sentence contains
 * none of the term's words.
 */
export function termOccurrenceVector(
  encoding: SentenceEncoding,
  termTokens: readonly string[]
): number[] | null {
  const wanted = new Set(termTokens);
  const wordVectors = poolPiecesToWords(encoding);
  const hits: number[][] = [];
  encoding.words.forEach((word, idx) => {
    const vec = wordVectors[idx];
    if (vec !== null && wanted.has(normalizeWord(word))) hits.push(vec);
  });
  return hits.length ? meanRows(hits) : null;
}
