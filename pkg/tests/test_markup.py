import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emocue.markup import (
    ParsedUtterance,
    SegmentKind,
    UnbalancedAsterisk,
    find_stutter_tokens,
    parse_utterance,
    reconstruct,
)

from helpers import CRIES_EXAMPLE, random_annotated


def kinds(parsed):
    return [s.kind for s in parsed.segments]


def check_invariants(parsed: ParsedUtterance):
    pos = 0
    for seg in parsed.segments:
        assert seg.start == pos, "spans must tile the source with no gap or overlap"
        assert seg.end > seg.start
        pos = seg.end
        if seg.kind is SegmentKind.EMOTION_CUE:
            assert "*" not in seg.payload
        if seg.kind is SegmentKind.PAUSE:
            assert seg.payload >= 3
    assert pos == len(parsed.source)
    assert reconstruct(parsed) == parsed.source


def test_cries_example_disfluencies_and_spoken_clean_text():
    parsed = parse_utterance(CRIES_EXAMPLE)
    assert parsed.disfluencies() == ["cries softly", "Um", "...", "..."]
    clean = parsed.clean_texts()
    assert len(clean) == 5
    # the three spoken segments, verbatim; the first two are blank gaps
    assert clean[2:] == [", trying to, you know", " but it's", " it's hard."]
    assert [c.strip() for c in clean[:2]] == ["", ""]
    check_invariants(parsed)


def test_cries_example_segment_order():
    parsed = parse_utterance(CRIES_EXAMPLE)
    assert kinds(parsed) == [
        SegmentKind.EMOTION_CUE, SegmentKind.CLEAN, SegmentKind.INTERJECTION, SegmentKind.CLEAN,
        SegmentKind.PAUSE, SegmentKind.CLEAN, SegmentKind.PAUSE, SegmentKind.CLEAN,
    ]


def test_plain_text_is_one_clean_segment():
    parsed = parse_utterance("hello")
    assert [(s.kind, s.payload) for s in parsed.segments] == [(SegmentKind.CLEAN, "hello")]
    assert parsed.disfluencies() == []
    assert reconstruct(parsed) == "hello"


def test_moderate_reply_keeps_stutter_and_mid_sentence_filler_in_clean_text():
    parsed = parse_utterance("*sighs* I, uh, y-yeah...I'm trying")
    assert [(s.kind, parsed.text_of(s)) for s in parsed.segments] == [
        (SegmentKind.EMOTION_CUE, "*sighs*"),
        (SegmentKind.CLEAN, " I, uh, y-yeah"),
        (SegmentKind.PAUSE, "..."),
        (SegmentKind.CLEAN, "I'm trying"),
    ]
    assert parsed.segments[0].payload == "sighs"


def test_filler_after_pause_is_extracted():
    parsed = parse_utterance("*sighs heavily* It...uh...helps me cope.")
    assert [s.kind.value for s in parsed.segments] == [
        "EmotionCue", "Clean", "Pause", "Interjection", "Pause", "Clean"]


def test_interjection_matching_is_case_insensitive_and_word_bounded():
    assert parse_utterance("UM, hi").segments[0].kind is SegmentKind.INTERJECTION
    assert parse_utterance("umbrella").segments[0].kind is SegmentKind.CLEAN
    parsed = parse_utterance("...you know it")
    assert parsed.segments[1].payload == "you know"
    parsed = parse_utterance("... I mean, fine")
    assert [s.kind for s in parsed.segments][:3] == [
        SegmentKind.PAUSE, SegmentKind.CLEAN, SegmentKind.INTERJECTION]


def test_trailing_right_is_not_an_interjection():
    parsed = parse_utterance("It helps, right?")
    assert kinds(parsed) == [SegmentKind.CLEAN]


def test_ellipsis_character_and_long_dot_runs_are_one_pause():
    parsed = parse_utterance("wait… no.....ok")
    pauses = [s for s in parsed.segments if s.kind is SegmentKind.PAUSE]
    assert [parsed.text_of(s) for s in pauses] == ["…", "....."]
    assert [s.payload for s in pauses] == [3, 5]
    assert kinds(parse_utterance("a.. b")) == [SegmentKind.CLEAN]


def test_unbalanced_asterisk_strict_and_lenient():
    with pytest.raises(UnbalancedAsterisk) as info:
        parse_utterance("*sighs")
    assert info.value.position == 0
    with pytest.raises(UnbalancedAsterisk) as info:
        parse_utterance("*a* b *c")
    assert info.value.position == 6
    parsed = parse_utterance("*a* b *c", lenient=True)
    assert parsed.segments[-1].kind is SegmentKind.CLEAN
    assert parsed.text_of(parsed.segments[-1]) == " b *c"
    assert reconstruct(parsed) == "*a* b *c"


def test_empty_cue_is_representable():
    parsed = parse_utterance("** ok")
    assert parsed.segments[0].kind is SegmentKind.EMOTION_CUE
    assert parsed.segments[0].payload == ""


def test_leading_interjection_can_be_disabled():
    parsed = parse_utterance("um, fine", leading_interjection=False)
    assert kinds(parsed) == [SegmentKind.CLEAN]


def test_json_round_trip():
    parsed = parse_utterance(CRIES_EXAMPLE)
    assert ParsedUtterance.from_json(parsed.to_json()) == parsed
    doc = parsed.to_json()
    assert set(doc) == {"source", "segments"}
    assert set(doc["segments"][0]) == {"kind", "start", "end", "payload"}


# --- stutters ---------------------------------------------------------------

def test_stutter_examples():
    assert find_stutter_tokens("m-my wife") == [(0, "m", "my")]
    assert find_stutter_tokens("well-known fact") == []
    text = "I-I, uh, r-recently"
    # offsets by direct character count on the literal
    assert text.index("r-recently") == 9
    assert find_stutter_tokens(text) == [(0, "I", "I"), (9, "r", "recently")]


@pytest.mark.parametrize("text,expected", [
    ("M-My wife", [(0, "M", "My")]),
    ("U-uh, wife", [(0, "U", "uh")]),
    ("Not p-proud.", [(4, "p", "proud")]),
    ("x-ray vision", []),
    ("re-enter", []),
    ("y-you know", [(0, "y", "you")]),
])
def test_stutter_variants(text, expected):
    assert find_stutter_tokens(text) == expected


@given(st.text(alphabet="abc -xyz.,", max_size=12), st.sampled_from(["m-my", "r-recently", "I-I", "y-yeah"]))
def test_stutter_positions_shift_with_prefix(prefix, token):
    base = f"{token} wife"
    shifted = prefix + " " + base
    want = [(p + len(prefix) + 1, a, b) for p, a, b in find_stutter_tokens(base)]
    got = [t for t in find_stutter_tokens(shifted) if t.position >= len(prefix) + 1]
    assert got == want


# --- round-trip properties --------------------------------------------------

@settings(max_examples=300)
@given(st.randoms(use_true_random=False))
def test_round_trip_on_generated_annotations(rnd):
    text = random_annotated(rnd)
    check_invariants(parse_utterance(text))


@settings(max_examples=300)
@given(st.text(alphabet=st.sampled_from(list("ab .*…-uhm,\n")), max_size=40))
def test_lenient_parse_is_lossless_on_arbitrary_text(text):
    check_invariants(parse_utterance(text, lenient=True))


def test_projection_counts_are_consistent():
    rng = random.Random(7)
    for _ in range(200):
        parsed = parse_utterance(random_annotated(rng))
        assert len(parsed.clean_texts()) == len(parsed.disfluencies()) + 1
