"""Regenerate the bundled demo data in src/storyarcs/data/.

* demo_lexicon.tsv   SYNTHETIC scores for the vocabulary of alice.txt plus the
                     rows of sample_lexicon.csv. The scores are hash-derived
                     placeholders so the pipeline runs end to end; they carry
                     no affective meaning. Use the real NRC-VAD lexicon for
                     any analysis.
* structure_demo.tsv SYNTHETIC labeled segments for the structure tagger.

    python scripts/make_demo_data.py
"""

import hashlib
from collections import Counter
from pathlib import Path

from storyarcs.corpus import read_text, tokenize
from storyarcs.io import atomic_write_text
from storyarcs.lexicon import load_lexicon
from storyarcs.structure import make_synthetic_corpus

DATA = Path(__file__).resolve().parents[1] / "src" / "storyarcs" / "data"

MARKERS = {
    "tension": ["dread", "threat", "suspense", "chase", "ticking", "standoff", "ambush", "danger"],
    "punishment": ["prison", "exile", "sentence", "penalty", "flogged", "banished", "verdict", "jailed"],
    "reward": ["treasure", "bounty", "prize", "gift", "gold", "medal", "inheritance", "bonus"],
    "victory": ["triumph", "win", "conquered", "defeated", "champion", "celebrate", "cheering", "trophy"],
}
FILLER = (
    "the a and he she they it was were is to of in on at with for from then there "
    "door room street night morning city house car walks looks says turns stands "
    "table window hand face voice moment later again still away back down up"
).split()


def pseudo_score(word: str, dim: str) -> float:
    # mean of three uniform draws keeps most words near the middle of [0, 1]
    h = hashlib.sha256(f"{dim}:{word}".encode()).digest()
    u = [int.from_bytes(h[i : i + 4], "big") / 2**32 for i in (0, 4, 8)]
    return round(sum(u) / 3, 3)


def demo_lexicon() -> None:
    table = load_lexicon(DATA / "sample_lexicon.csv")
    known = set(table.words)
    counts = Counter(tokenize(read_text(DATA / "alice.txt")).words)
    vocab = [w for w, _ in counts.most_common() if len(w) > 1 and w not in known]
    rows = ["Word\tRanking\tArousal\tValence\tDominance"]
    head = [e for e in table.entries if e.rank < 6]
    tail = [e for e in table.entries if e.rank >= 6]
    for e in head:
        rows.append(f"{e.word}\t{e.rank}\t{e.arousal:.3f}\t{e.valence:.3f}\t{e.dominance:.3f}")
    for rank, w in enumerate(vocab, start=6):
        a, v, d = (pseudo_score(w, dim) for dim in ("arousal", "valence", "dominance"))
        rows.append(f"{w}\t{rank}\t{a:.3f}\t{v:.3f}\t{d:.3f}")
    for e in tail:
        rows.append(f"{e.word}\t{e.rank}\t{e.arousal:.3f}\t{e.valence:.3f}\t{e.dominance:.3f}")
    atomic_write_text(DATA / "demo_lexicon.tsv", "\n".join(rows) + "\n")


def structure_demo() -> None:
    data = make_synthetic_corpus(per_class=30, markers=MARKERS, filler=FILLER, seed=7)
    lines = ["label\ttext"] + [f"{d.label}\t{d.text}" for d in data]
    atomic_write_text(DATA / "structure_demo.tsv", "\n".join(lines) + "\n")


if __name__ == "__main__":
    demo_lexicon()
    structure_demo()
