"""Score each chapter of the bundled Alice text, label its shape, cluster the chapters.

    python scripts/demo_chapters.py [--out demo_out] [--window 200] [-k 3]

The bundled lexicon is synthetic, so the shapes only demonstrate the
mechanics. Point --lexicon at a real NRC-VAD table for meaningful output.
"""

import argparse
import re
import sys
from pathlib import Path

from storyarcs.cli import main as cli
from storyarcs.corpus import read_text

DATA = Path(__file__).resolve().parents[1] / "src" / "storyarcs" / "data"


def split_chapters(text: str) -> list[str]:
    parts = re.split(r"^CHAPTER [IVXL]+\..*$", text, flags=re.M)
    return [p for p in parts[1:] if p.strip()]


def run(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="demo_out")
    ap.add_argument("--lexicon", default=str(DATA / "demo_lexicon.tsv"))
    ap.add_argument("--window", type=int, default=200)
    ap.add_argument("-k", type=int, default=3)
    args = ap.parse_args(argv)

    out = Path(args.out)
    chapters_dir = out / "chapters"
    chapters_dir.mkdir(parents=True, exist_ok=True)
    docs = []
    for i, body in enumerate(split_chapters(read_text(DATA / "alice.txt")), start=1):
        p = chapters_dir / f"ch{i:02d}.txt"
        p.write_text(body, encoding="utf-8")
        docs.append(str(p))
    rc = cli(["pipeline", *docs, "--lexicon", args.lexicon, "--window", str(args.window),
              "--context", "3", "--smooth-w", "3", "-k", str(args.k), "--out", str(out / "run")])
    if rc == 0:
        print((out / "run" / "arc_labels.csv").read_text().rstrip())
        print((out / "run" / "assignments.csv").read_text().rstrip())
    return rc


if __name__ == "__main__":
    sys.exit(run())
