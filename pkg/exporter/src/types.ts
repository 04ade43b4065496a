/** One encoded sentence: last-hidden-layer vectors per word piece. */
export interface SentenceEncoding {
  /** the sentence's words after punctuation stripping, in order */
  words: string[];
  /** one vector per word piece */
  pieceVectors: number[][];
  /** index into `words` for every piece */
  pieceToWord: number[];
}

export interface Encoder {
  readonly name: string;
  /** hidden size of the last layer */
  readonly dim: number;
  encode(sentence: string): Promise<SentenceEncoding>;
}

export class UnknownEncoderError extends Error {
  constructor(name: string, known: string[]) {
    super(`unknown encoder name "${name}" (expected one of: ${known.join(", ")})`);
    this.name = "UnknownEncoderError";
  }
}
