"""Shared fixtures: deterministically generated dataset files.

The mushroom fixture mimics the UCI agaricus-lepiota format (23 single-letter
comma-separated fields, class first); the news fixture mimics the MIND
tab-separated behaviors/news pair. Both are seeded so every test session sees
identical bytes.
"""
from __future__ import annotations

import numpy as np
import pytest

from calbandit.environments import MUSHROOM_ATTRIBUTES

# fraction of generated impressions whose slate contains the clicked article
CLICKABLE_FRACTION = 0.38


def make_mushroom_csv(path, n_records: int = 600, seed: int = 97) -> None:
    rng = np.random.default_rng(seed)
    alphabets = []
    for name, words in MUSHROOM_ATTRIBUTES:
        letters = sorted(words)
        k = 3 if len(letters) >= 3 else len(letters)
        alphabets.append(letters[:k])
    odor_col = [name for name, _ in MUSHROOM_ATTRIBUTES].index("odor")
    alphabets[odor_col] = ["a", "f", "n", "p"]
    lines = []
    for _ in range(n_records):
        row = [alpha[int(rng.integers(len(alpha)))] for alpha in alphabets]
        # poisonous iff odor is foul or pungent: a rule one-hot features can learn
        cls = "p" if row[odor_col] in ("f", "p") else "e"
        lines.append(",".join([cls] + row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


_TOPIC_WORDS = {
    "sports": ["league", "season", "coach", "playoff", "score", "team", "finals", "draft"],
    "tech": ["software", "startup", "chip", "gadget", "robot", "cloud", "phone", "code"],
    "finance": ["market", "stocks", "bank", "rates", "budget", "trade", "fund", "tax"],
    "health": ["diet", "fitness", "vaccine", "sleep", "doctor", "study", "heart", "brain"],
}


def make_mind_files(
    news_path,
    behaviors_path,
    n_news: int = 150,
    n_impressions: int = 500,
    K: int = 5,
    seed: int = 131,
    clickable_fraction: float = CLICKABLE_FRACTION,
) -> None:
    rng = np.random.default_rng(seed)
    topics = sorted(_TOPIC_WORDS)
    news_ids = [f"N{1000 + i}" for i in range(n_news)]
    news_lines = []
    for i, nid in enumerate(news_ids):
        topic = topics[i % len(topics)]
        words = _TOPIC_WORDS[topic]
        title_words = [words[int(j)] for j in rng.integers(len(words), size=4)]
        abstract_words = [words[int(j)] for j in rng.integers(len(words), size=8)]
        title = f"{topic} update: " + " ".join(title_words)
        abstract = " ".join(abstract_words)
        news_lines.append("\t".join([nid, topic, topic, title, abstract, "", "[]", "[]"]))
    with open(news_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(news_lines) + "\n")

    behavior_lines = []
    for i in range(n_impressions):
        hist_len = int(rng.integers(0, 15))
        history = " ".join(news_ids[int(j)] for j in rng.integers(n_news, size=hist_len))
        slate_len = int(rng.integers(K + 1, K + 5))
        slate = [news_ids[int(j)] for j in rng.choice(n_news, size=slate_len, replace=False)]
        clicked_pos = int(rng.integers(slate_len)) if rng.random() < clickable_fraction else -1
        cands = " ".join(
            f"{nid}-{1 if j == clicked_pos else 0}" for j, nid in enumerate(slate)
        )
        behavior_lines.append("\t".join([str(i + 1), f"U{i % 40}", "11/11/2019 9:05:58 AM", history, cands]))
    with open(behaviors_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(behavior_lines) + "\n")


@pytest.fixture(scope="session")
def mushroom_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "mushroom.csv"
    make_mushroom_csv(path)
    return str(path)


@pytest.fixture(scope="session")
def mind_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("mind")
    make_mind_files(d / "news.tsv", d / "behaviors.tsv")
    return str(d)
