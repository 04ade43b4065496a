import pytest
from hypothesis import given, strategies as st

from finhyper.stem import stem, stem_once, _step1a, _step1b, _step1c, _step2, _step3, _step4, _step5a, _step5b


# Published example pairs from the algorithm's definition, one list per step.
STEP_CASES = [
    (_step1a, [("caresses", "caress"), ("ponies", "poni"), ("ties", "ti"),
               ("caress", "caress"), ("cats", "cat")]),
    (_step1b, [("feed", "feed"), ("agreed", "agree"), ("plastered", "plaster"),
               ("bled", "bled"), ("motoring", "motor"), ("sing", "sing"),
               ("conflated", "conflate"), ("troubled", "trouble"), ("sized", "size"),
               ("hopping", "hop"), ("tanned", "tan"), ("falling", "fall"),
               ("hissing", "hiss"), ("fizzed", "fizz"), ("failing", "fail"),
               ("filing", "file")]),
    (_step1c, [("happy", "happi"), ("sky", "sky")]),
    (_step2, [("relational", "relate"), ("conditional", "condition"),
              ("rational", "rational"), ("valenci", "valence"),
              ("hesitanci", "hesitance"), ("digitizer", "digitize"),
              ("conformabli", "conformable"), ("radicalli", "radical"),
              ("differentli", "different"), ("vileli", "vile"),
              ("analogousli", "analogous"), ("vietnamization", "vietnamize"),
              ("predication", "predicate"), ("operator", "operate"),
              ("feudalism", "feudal"), ("decisiveness", "decisive"),
              ("hopefulness", "hopeful"), ("callousness", "callous"),
              ("formaliti", "formal"), ("sensitiviti", "sensitive"),
              ("sensibiliti", "sensible")]),
    (_step3, [("triplicate", "triplic"), ("formative", "form"),
              ("formalize", "formal"), ("electriciti", "electric"),
              ("electrical", "electric"), ("hopeful", "hope"), ("goodness", "good")]),
    (_step4, [("revival", "reviv"), ("allowance", "allow"), ("inference", "infer"),
              ("airliner", "airlin"), ("gyroscopic", "gyroscop"),
              ("adjustable", "adjust"), ("defensible", "defens"),
              ("irritant", "irrit"), ("replacement", "replac"),
              ("adjustment", "adjust"), ("dependent", "depend"),
              ("adoption", "adopt"), ("homologou", "homolog"),
              ("communism", "commun"), ("activate", "activ"),
              ("angulariti", "angular"), ("homologous", "homolog"),
              ("effective", "effect"), ("bowdlerize", "bowdler")]),
    (_step5a, [("probate", "probat"), ("rate", "rate"), ("cease", "ceas")]),
    (_step5b, [("controll", "control"), ("roll", "roll")]),
]


@pytest.mark.parametrize(
    "step,word,expected",
    [(fn, w, e) for fn, cases in STEP_CASES for w, e in cases],
    ids=lambda v: getattr(v, "__name__", str(v)),
)
def test_published_step_examples(step, word, expected):
    assert step(word) == expected


# Frozen full-pipeline outputs for the domain vocabulary this package cares
# about; "equities" -> "equiti" is the pinned representative value.
FULL_CASES = {
    "equities": "equiti",
    "equity": "equiti",
    "bonds": "bond",
    "bond": "bond",
    "covered": "cover",
    "futures": "futur",
    "future": "futur",
    "swaps": "swap",
    "options": "option",
    "funds": "fund",
    "currencies": "currenc",
    "currency": "currenc",
    "securities": "secur",
    "debenture": "debentur",
    "convertible": "convert",
    "derivatives": "deriv",
    "maturities": "matur",
    "generalization": "gener",
    "pricing": "price",
}


@pytest.mark.parametrize("word,expected", sorted(FULL_CASES.items()))
def test_frozen_domain_stems(word, expected):
    assert stem(word) == expected


def test_plural_and_singular_agree():
    pairs = [("bonds", "bond"), ("futures", "future"), ("swaps", "swap"),
             ("equities", "equity"), ("currencies", "currency")]
    for plural, singular in pairs:
        assert stem(plural) == stem(singular)


def test_non_alpha_and_short_tokens_unchanged():
    for token in ("2023", "cds1", "ab", "x", "", "credit-default"):
        assert stem(token) == token


@given(st.text(alphabet=st.characters(min_codepoint=97, max_codepoint=122), max_size=20))
def test_stem_is_idempotent(word):
    assert stem(stem(word)) == stem(word)


@given(st.text(alphabet=st.characters(min_codepoint=97, max_codepoint=122), max_size=20))
def test_stem_never_longer_than_word(word):
    # step 1b can append an 'e', but never past the original length
    assert len(stem(word)) <= max(len(word), 3)


def test_fixpoint_reaches_single_pass_stability():
    for word in list(FULL_CASES) + ["relational", "oscillators", "happily"]:
        assert stem_once(stem(word)) == stem(word)
