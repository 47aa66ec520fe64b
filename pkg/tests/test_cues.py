import json
import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from emocue.cues import (
    EmbeddingTable,
    IntensityScale,
    ManifestEmpty,
    ManifestError,
    Provenance,
    ZeroVector,
    cosine_similarity,
    embed_phrase,
    load_embeddings,
    load_manifest,
    rank_intensity,
    resolve_cue,
)
from emocue.config import data_path

_TABLE = load_embeddings(data_path("vectors.txt"))
_MANIFEST = load_manifest(data_path("manifest.json"))

# Frozen from tools/cue_goldens.py (pure-Python brute force over the bundled vectors).
GOLDEN_RANKS = {"deeply": 2, "quietly": 0, "slightly": 0, "loudly": 2, "uncontrollably": 2}
GOLDEN_NEAREST = {"looks down": "cries", "sobs": "cries", "chuckles": "laughs", "looks away": "smiles"}


def test_cosine_examples():
    v = np.array([0.3, -2.0, 5.0])
    assert cosine_similarity(v, v) == pytest.approx(1.0)
    assert cosine_similarity([1, 0], [0, 1]) == 0.0
    assert cosine_similarity([1, 1], [1, 0]) == pytest.approx(1 / math.sqrt(2), abs=1e-6)
    with pytest.raises(ZeroVector):
        cosine_similarity([0, 0], [1, 0])


def test_embed_phrase(table):
    assert np.array_equal(embed_phrase(["heavily"], table), table.get("heavily"))
    assert embed_phrase(["qqqzzz"], table) is None
    a, b = table.get("sighs"), table.get("heavily")
    want = [(x + y) / 2 for x, y in zip(a.tolist(), b.tolist())]
    assert np.allclose(embed_phrase(["sighs", "heavily"], table), want)
    assert np.allclose(embed_phrase(["Sighs", "qqq", "HEAVILY"], table), want)


def test_embedding_file_format(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("2 3\nFoo 1 0 0\nbar 0 1 0\n")
    t = load_embeddings(p)
    assert t.dim == 3 and "foo" in t and t.get("FOO") is not None
    p.write_text("foo 1 0 0\nbar 0 1 0\n")
    assert load_embeddings(p).dim == 3
    p.write_text("foo 1 0 0\nbar 0 1\n")
    with pytest.raises(ValueError):
        load_embeddings(p)


def test_reference_words_rank_themselves(table, scale):
    for rank, words in scale.references.items():
        for w in words:
            assert rank_intensity([w], scale, table) == rank


def test_bare_cue_gets_default_rank(table, scale):
    assert rank_intensity([], scale, table) == 1
    assert rank_intensity(["qqqzzz"], scale, table) == 1


@pytest.mark.parametrize("word,rank", sorted(GOLDEN_RANKS.items()))
def test_golden_ranks(table, scale, word, rank):
    assert rank_intensity([word], scale, table) == rank


def test_ties_go_to_the_lower_rank():
    t = EmbeddingTable.from_dict({"a": [1, 0], "b": [0, 1], "c": [0, 1], "x": [0, 1]})
    s = IntensityScale({0: "a", 1: "b", 2: "c"})
    assert rank_intensity(["x"], s, t) == 1


def test_word_sets_per_rank(table):
    s = IntensityScale({0: ("softly", "quietly"), 1: ("moderately",), 2: ("heavily", "loudly")})
    assert rank_intensity(["quietly"], s, table) == 0
    assert rank_intensity(["loudly"], s, table) == 2


def test_scale_validation(table):
    with pytest.raises(ValueError):
        IntensityScale({0: "softly", 1: "moderately"})
    with pytest.raises(ValueError):
        IntensityScale(default_rank=3)
    with pytest.raises(ValueError):
        IntensityScale({0: "softly", 1: "moderately", 2: "qqqzzz"}).validate(table)


def test_resolve_exact(manifest, scale, table):
    cue = resolve_cue("sighs heavily", manifest, scale, table)
    assert (cue.emotion_head, cue.rank, cue.provenance) == ("sighs", 2, Provenance.EXACT)
    cue = resolve_cue("sighs", manifest, scale, table)
    assert (cue.emotion_head, cue.rank) == ("sighs", 1)
    assert cue.asset == manifest.entries[("sighs", 1)]


def test_resolve_empty_and_oov_go_to_default(manifest, scale, table):
    for phrase in ["", "qqq zzz", "!!!"]:
        cue = resolve_cue(phrase, manifest, scale, table)
        assert cue.provenance is Provenance.DEFAULT
        assert (cue.emotion_head, cue.rank) == manifest.default_entry


@pytest.mark.parametrize("phrase,emotion", sorted(GOLDEN_NEAREST.items()))
def test_resolve_hallucinated(manifest, scale, table, phrase, emotion):
    cue = resolve_cue(phrase, manifest, scale, table)
    assert cue.provenance is Provenance.HALLUCINATED_NEAREST
    assert cue.emotion_head == emotion


def _write_manifest(tmp_path, entries, default):
    from emocue.audio import AudioBuffer, encode_wav
    (tmp_path / "a.wav").write_bytes(encode_wav(AudioBuffer(8000, np.zeros(80))))
    p = tmp_path / "m.json"
    p.write_text(json.dumps({
        "sample_rate": 8000, "default": {"emotion": default[0], "rank": default[1]},
        "entries": [{"emotion": e, "rank": r, "path": "a.wav"} for e, r in entries],
    }))
    return p


def test_missing_rank_falls_back_to_nearest_lower_first(tmp_path, scale, table):
    m = load_manifest(_write_manifest(tmp_path, [("sighs", 0), ("sighs", 2)], ("sighs", 0)))
    assert resolve_cue("sighs", m, scale, table).rank == 0  # wanted 1; 0 and 2 tie, lower wins
    assert resolve_cue("sighs heavily", m, scale, table).rank == 2
    m = load_manifest(_write_manifest(tmp_path, [("cries", 0)], ("cries", 0)))
    assert resolve_cue("cries heavily", m, scale, table).rank == 0


def test_manifest_validation(tmp_path):
    with pytest.raises(ManifestEmpty):
        load_manifest(_write_manifest(tmp_path, [], ("sighs", 0)))
    with pytest.raises(ManifestError):
        load_manifest(_write_manifest(tmp_path, [("sighs", 0)], ("cries", 1)))
    p = _write_manifest(tmp_path, [("sighs", 0)], ("sighs", 0))
    (tmp_path / "a.wav").write_bytes(b"not a wav")
    with pytest.raises(ManifestError):
        load_manifest(p)


def test_resolution_ignores_entry_order(tmp_path, scale, table, manifest):
    entries = list(manifest.entries.items())
    random.Random(3).shuffle(entries)
    shuffled = type(manifest)(manifest.sample_rate, dict(entries), manifest.default_entry, manifest.assets)
    for phrase in ["looks down", "sobs quietly", "nods slowly", "sighs", "bangs head"]:
        assert resolve_cue(phrase, shuffled, scale, table) == resolve_cue(phrase, manifest, scale, table)


def test_nearest_emotion_ties_break_lexicographically(tmp_path, scale):
    t = EmbeddingTable.from_dict({
        "softly": [1, 0, 0], "moderately": [0, 1, 0], "heavily": [0, 0, 1],
        "sighs": [1, 1, 0], "cries": [1, 1, 0], "frowns": [1, 1, 0],
    })
    m = load_manifest(_write_manifest(tmp_path, [("sighs", 1), ("cries", 1)], ("sighs", 1)))
    assert resolve_cue("frowns", m, IntensityScale(), t).emotion_head == "cries"


@given(st.floats(1e-3, 1e3))
def test_positive_rescaling_changes_no_decision(factor):
    table, manifest, scale = _TABLE, _MANIFEST, IntensityScale()
    scaled = table.scaled(factor)
    for words in (["deeply"], ["quietly"], ["sighs", "moderately"], ["down"], ["nods"]):
        assert rank_intensity(words, scale, scaled) == rank_intensity(words, scale, table)
    for phrase in ("looks down", "sobs", "shakes head slightly", "bites lip, struggles"):
        assert resolve_cue(phrase, manifest, scale, scaled) == resolve_cue(phrase, manifest, scale, table)
