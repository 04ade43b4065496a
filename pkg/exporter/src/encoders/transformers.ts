/**
 * Pretrained transformer encoder backed by @huggingface/transformers
 * (transformers.js). Loads the checkpoint named on the command line and
 * reads last-hidden-layer states; never fine-tunes.
 *
 * Word alignment: each word is tokenized separately to learn its piece
 * count, and the model input is the whitespace join of the cleaned words,
 * which WordPiece-style tokenizers split identically. [CLS]/[SEP] are
 * excluded from pooling.
 */

import { Encoder, SentenceEncoding } from "../types";
import { tokenize } from "../stem";

const TRANSFORMERS_PACKAGE = "@huggingface/transformers";

export async function createTransformersEncoder(model: string): Promise<Encoder> {
  let hf: any;
  try {
    hf = await import(TRANSFORMERS_PACKAGE);
  } catch {
    throw new Error(
      `encoder "${model}" needs the optional ${TRANSFORMERS_PACKAGE} package ` +
        "(npm install it, plus network access to fetch the checkpoint)"
    );
  }
  const tokenizer = await hf.AutoTokenizer.from_pretrained(model);
  const net = await hf.AutoModel.from_pretrained(model);
  const dim: number = net.config.hidden_size;

  async function encode(sentence: string): Promise<SentenceEncoding> {
    const words = tokenize(sentence).map((w) => w.toLowerCase());
    if (words.length === 0) {
      return { words: [], pieceVectors: [], pieceToWord: [] };
    }
    const pieceToWord: number[] = [];
    words.forEach((word, wordIdx) => {
      const pieces: string[] = tokenizer.tokenize(word);
      for (let k = 0; k < pieces.length; k++) pieceToWord.push(wordIdx);
    });

    const inputs = await tokenizer(words.join(" "));
    const output = await net(inputs);
    const hidden = output.last_hidden_state; // [1, seq, dim]
    const seq: number = hidden.dims[1];
    const data: Float32Array = hidden.data;

    // seq = [CLS] + pieces + [SEP]; defend against length drift
    const nPieces = Math.min(pieceToWord.length, seq - 2);
    const pieceVectors: number[][] = [];
    for (let t = 0; t < nPieces; t++) {
      const offset = (t + 1) * dim;
      pieceVectors.push(Array.from(data.subarray(offset, offset + dim)));
    }
    return { words, pieceVectors, pieceToWord: pieceToWord.slice(0, nPieces) };
  }

  return { name: model, dim, encode };
}
