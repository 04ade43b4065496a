import { Encoder, UnknownEncoderError } from "../types";
import { createTestEncoder, TEST_ENCODER_NAME } from "./test768";
import { createTransformersEncoder } from "./transformers";

/**
 * Known encoder names:
 *   - "test-768": deterministic offline encoder (tests, fixtures)
 *   - "bert-base-uncased": the 12-layer base uncased checkpoint via its
 *     ONNX mirror
 *   - "hf:<model-id>": any transformers.js-compatible checkpoint
 */
const BERT_BASE = "bert-base-uncased";
const BERT_BASE_ONNX = "Xenova/bert-base-uncased";
const HF_PREFIX = "hf:";

export const KNOWN_ENCODERS = [TEST_ENCODER_NAME, BERT_BASE, `${HF_PREFIX}<model-id>`];

export async function resolveEncoder(name: string): Promise<Encoder> {
  if (name === TEST_ENCODER_NAME) return createTestEncoder();
  if (name === BERT_BASE) return createTransformersEncoder(BERT_BASE_ONNX);
  if (name.startsWith(HF_PREFIX)) return createTransformersEncoder(name.slice(HF_PREFIX.length));
  throw new UnknownEncoderError(name, KNOWN_ENCODERS);
}
