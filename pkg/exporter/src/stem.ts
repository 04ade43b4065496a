/**
 * Porter suffix stemmer, identical rules to the Python package's stemmer so
 * term keys ("cover_bond") match sentence words ("covered", "bonds") the same
 * way on both sides of the file boundary.
 *
 * `stem` iterates the single pass to a fixed point; lower-case input
 * expected; tokens shorter than three characters or containing non-letters
 * are returned unchanged.
 */

const VOWELS = "aeiou";

function isConsonant(word: string, i: number): boolean {
  const c = word[i];
  if (VOWELS.includes(c)) return false;
  if (c === "y") return i === 0 || !isConsonant(word, i - 1);
  return true;
}

/** Number of vowel->consonant transitions ([C](VC)^m[V] form). */
function measure(stem: string): number {
  let m = 0;
  let prevCons: boolean | null = null;
  for (let i = 0; i < stem.length; i++) {
    const cons = isConsonant(stem, i);
    if (prevCons === false && cons) m++;
    prevCons = cons;
  }
  return m;
}

function containsVowel(stem: string): boolean {
  for (let i = 0; i < stem.length; i++) if (!isConsonant(stem, i)) return true;
  return false;
}

function endsDoubleConsonant(word: string): boolean {
  const n = word.length;
  return n >= 2 && word[n - 1] === word[n - 2] && isConsonant(word, n - 1);
}

function endsCvc(word: string): boolean {
  const n = word.length;
  return (
    n >= 3 &&
    isConsonant(word, n - 3) &&
    !isConsonant(word, n - 2) &&
    isConsonant(word, n - 1) &&
    !"wxy".includes(word[n - 1])
  );
}

type Rule = [suffix: string, replacement: string, condition: ((stem: string) => boolean) | null];

function applyRuleList(word: string, rules: Rule[]): string {
  for (const [suffix, replacement, condition] of rules) {
    if (word.endsWith(suffix)) {
      const stem = word.slice(0, word.length - suffix.length);
      if (condition === null || condition(stem)) return stem + replacement;
      return word;
    }
  }
  return word;
}

function step1a(word: string): string {
  return applyRuleList(word, [
    ["sses", "ss", null],
    ["ies", "i", null],
    ["ss", "ss", null],
    ["s", "", null],
  ]);
}

function step1b(word: string): string {
  if (word.endsWith("eed")) {
    const stem = word.slice(0, -3);
    return measure(stem) > 0 ? stem + "ee" : word;
  }
  for (const suffix of ["ed", "ing"]) {
    if (word.endsWith(suffix)) {
      const stem = word.slice(0, word.length - suffix.length);
      if (!containsVowel(stem)) return word;
      if (stem.endsWith("at") || stem.endsWith("bl") || stem.endsWith("iz")) return stem + "e";
      if (endsDoubleConsonant(stem) && !"lsz".includes(stem[stem.length - 1])) {
        return stem.slice(0, -1);
      }
      if (measure(stem) === 1 && endsCvc(stem)) return stem + "e";
      return stem;
    }
  }
  return word;
}

function step1c(word: string): string {
  if (word.endsWith("y") && containsVowel(word.slice(0, -1))) return word.slice(0, -1) + "i";
  return word;
}

const STEP2_RULES: Array<[string, string]> = [
  ["ational", "ate"], ["tional", "tion"], ["enci", "ence"], ["anci", "ance"],
  ["izer", "ize"], ["abli", "able"], ["alli", "al"], ["entli", "ent"],
  ["eli", "e"], ["ousli", "ous"], ["ization", "ize"], ["ation", "ate"],
  ["ator", "ate"], ["alism", "al"], ["iveness", "ive"], ["fulness", "ful"],
  ["ousness", "ous"], ["aliti", "al"], ["iviti", "ive"], ["biliti", "ble"],
];

const STEP3_RULES: Array<[string, string]> = [
  ["icate", "ic"], ["ative", ""], ["alize", "al"], ["iciti", "ic"],
  ["ical", "ic"], ["ful", ""], ["ness", ""],
];

const STEP4_SUFFIXES = [
  "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
  "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
];

function longestMatch(word: string, suffixes: string[]): string | null {
  let best: string | null = null;
  for (const suffix of suffixes) {
    if (word.endsWith(suffix) && (best === null || suffix.length > best.length)) best = suffix;
  }
  return best;
}

function stepWithTable(word: string, rules: Array<[string, string]>): string {
  const match = longestMatch(word, rules.map(([s]) => s));
  if (match === null) return word;
  const stem = word.slice(0, word.length - match.length);
  if (measure(stem) > 0) {
    const replacement = rules.find(([s]) => s === match)![1];
    return stem + replacement;
  }
  return word;
}

function step4(word: string): string {
  const match = longestMatch(word, STEP4_SUFFIXES);
  if (match === null) return word;
  const stem = word.slice(0, word.length - match.length);
  if (measure(stem) > 1) {
    if (match === "ion" && !(stem.endsWith("s") || stem.endsWith("t"))) return word;
    return stem;
  }
  return word;
}

function step5a(word: string): string {
  if (word.endsWith("e")) {
    const stem = word.slice(0, -1);
    const m = measure(stem);
    if (m > 1 || (m === 1 && !endsCvc(stem))) return stem;
  }
  return word;
}

function step5b(word: string): string {
  if (measure(word) > 1 && endsDoubleConsonant(word) && word.endsWith("l")) {
    return word.slice(0, -1);
  }
  return word;
}

export function stemOnce(token: string): string {
  if (token.length <= 2 || !/^[a-z]+$/.test(token)) return token;
  let word = step1a(token);
  word = step1b(word);
  word = step1c(word);
  word = stepWithTable(word, STEP2_RULES);
  word = stepWithTable(word, STEP3_RULES);
  word = step4(word);
  word = step5a(word);
  word = step5b(word);
  return word;
}

export function stem(token: string): string {
  let current = token;
  for (let i = 0; i < 8; i++) {
    const next = stemOnce(current);
    if (next === current) return current;
    current = next;
  }
  return current;
}

/** Tokenize raw text the same way the Python pipeline does. */
export function tokenize(text: string): string[] {
  return text.match(/[\p{L}\p{N}]+/gu) ?? [];
}

/** Lower-case + stem; the normalized form compared against term key tokens. */
export function normalizeWord(word: string): string {
  return stem(word.toLowerCase());
}
