"""Brute-force cosine goldens over the bundled vector file (pure Python, no package imports)."""
import math
import sys
from pathlib import Path

path = Path(__file__).resolve().parents[1] / "src" / "emocue" / "data" / "vectors.txt"
vecs = {}
for i, line in enumerate(path.read_text(encoding="utf-8").splitlines()):
    parts = line.split()
    if i == 0 and len(parts) == 2:
        continue
    vecs[parts[0]] = [float(x) for x in parts[1:]]


def cos(a, b):
    dot = sum(x * y for x, y in zip(a, b))
    return dot / (math.sqrt(sum(x * x for x in a)) * math.sqrt(sum(y * y for y in b)))


def mean(words):
    vs = [vecs[w] for w in words if w in vecs]
    return [sum(col) / len(vs) for col in zip(*vs)]


refs = {0: "softly", 1: "moderately", 2: "heavily"}
for cue in sys.argv[1:] or ["deeply", "quietly", "slightly", "loudly", "uncontrollably"]:
    v = mean(cue.split())
    sims = {r: cos(v, vecs[w]) for r, w in refs.items()}
    print("rank", cue, sims, "->", max(sorted(sims), key=lambda r: sims[r]))
for cue in ["looks down", "sobs", "sobs quietly", "nods slowly", "looks away", "chuckles"]:
    v = mean(cue.split())
    sims = {e: cos(v, vecs[e]) for e in ["cries", "laughs", "sighs", "smiles"]}
    print("nearest", cue, {k: round(s, 6) for k, s in sims.items()}, "->", max(sorted(sims), key=lambda e: sims[e]))
