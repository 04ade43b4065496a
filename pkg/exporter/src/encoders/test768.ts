/**
 * Deterministic offline encoder for tests and fixtures.
 *
 * Emits 768-dim vectors built from a hash of each word piece plus a small
 * sentence-dependent component, so identical pieces in different sentences
 * get different ("contextual") vectors while everything stays reproducible
 * with no model download. Word-piece splitting mimics subword tokenizers:
 * pieces of at most four characters, continuations marked "##".
 */

import { Encoder, SentenceEncoding } from "../types";
import { tokenize } from "../stem";

export const TEST_ENCODER_NAME = "test-768";
const DIM = 768;
const PIECE_LEN = 4;
const CONTEXT_SCALE = 0.05;

function fnv1a(text: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 0x01000193) >>> 0;
  }
  return h >>> 0;
}

/** mulberry32: tiny deterministic PRNG over a 32-bit seed. */
function makePrng(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function splitWordPieces(word: string, pieceLen: number = PIECE_LEN): string[] {
  if (word.length <= pieceLen) return [word];
  const pieces = [word.slice(0, pieceLen)];
  for (let i = pieceLen; i < word.length; i += pieceLen) {
    pieces.push("##" + word.slice(i, i + pieceLen));
  }
  return pieces;
}

function pieceVector(piece: string, sentenceSeed: number): number[] {
  const base = makePrng(fnv1a("piece:" + piece));
  const ctx = makePrng((sentenceSeed ^ fnv1a(piece)) >>> 0);
  const vec = new Array<number>(DIM);
  for (let j = 0; j < DIM; j++) {
    vec[j] = (base() - 0.5) * 2 + CONTEXT_SCALE * (ctx() - 0.5) * 2;
  }
  return vec;
}

export function createTestEncoder(): Encoder {
  return {
    name: TEST_ENCODER_NAME,
    dim: DIM,
    async encode(sentence: string): Promise<SentenceEncoding> {
      const words = tokenize(sentence).map((w) => w.toLowerCase());
      const sentenceSeed = fnv1a("sent:" + words.join(" "));
      const pieceVectors: number[][] = [];
      const pieceToWord: number[] = [];
      words.forEach((word, wordIdx) => {
        for (const piece of splitWordPieces(word)) {
          pieceVectors.push(pieceVector(piece, sentenceSeed));
          pieceToWord.push(wordIdx);
        }
      });
      return { words, pieceVectors, pieceToWord };
    },
  };
}
