import sys
from pathlib import Path

import numpy as np
import pytest

from storyarcs.lexicon import load_lexicon

DATA = Path(__file__).resolve().parents[1] / "src" / "storyarcs" / "data"

SAMPLE_ROWS = """\
aaaaaaah, 1, 0.606, 0.479, 0.291
aaaah, 2, 0.636, 0.520, 0.282
aardvark, 3, 0.490, 0.427, 0.437
aback, 4, 0.407, 0.385, 0.288
abacus, 5, 0.276, 0.510, 0.485
zoo, 20003, 0.520, 0.760, 0.580
zoological, 20004, 0.458, 0.667, 0.492
zoology, 20005, 0.347, 0.568, 0.509
zoom, 20006, 0.520, 0.490, 0.462
zucchini, 20007, 0.321, 0.510, 0.250
"""


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def sample_path(tmp_path):
    p = tmp_path / "sample_lex.csv"
    p.write_text(SAMPLE_ROWS, encoding="utf-8")
    return p


@pytest.fixture
def sample_lex(sample_path):
    return load_lexicon(sample_path)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
