"""Bandit environments: mushroom classification, news clicks, synthetic linear.

Every environment is a seeded iterator over rounds. A round is consumed in two
steps: ``observe(t)`` returns the per-arm contexts and hidden expected rewards,
and ``realize(t, arm)`` returns the realized reward for the chosen arm and
advances the clock. Realization is the only reward access point, which lets
tests assert that probes happen strictly before rewards are drawn.

Contexts are bias-augmented here, exactly once: the last coordinate of every
emitted context is 1.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

import numpy as np


@dataclass
class EnvStep:
    contexts: np.ndarray          # (K, d), bias-augmented
    expected_rewards: np.ndarray  # (K,), hidden from the policy
    r_star: float
    arm_texts: tuple[str, ...]
    context_text: str

    def __post_init__(self) -> None:
        self.contexts = np.asarray(self.contexts, dtype=np.float64)
        self.expected_rewards = np.asarray(self.expected_rewards, dtype=np.float64)
        k, _ = self.contexts.shape
        if self.expected_rewards.shape != (k,) or len(self.arm_texts) != k:
            raise ValueError("per-arm fields disagree on the number of arms")
        if not np.all(np.isfinite(self.contexts)):
            raise ValueError("contexts contain non-finite entries")
        if not np.all(self.contexts[:, -1] == 1.0):
            raise ValueError("contexts are not bias-augmented")
        if self.r_star != float(np.max(self.expected_rewards)):
            raise ValueError("r_star must equal the best expected reward")


class Environment:
    """Sequencing shell shared by all environments."""

    name = "base"

    def __init__(self) -> None:
        self._t = 0
        self._pending: EnvStep | None = None

    @property
    def num_arms(self) -> int:
        raise NotImplementedError

    @property
    def dim(self) -> int:
        raise NotImplementedError

    @property
    def reward_range(self) -> tuple[float, float] | None:
        return None

    def feature_notes(self) -> str:
        return ""

    def _make_step(self, t: int) -> EnvStep:
        raise NotImplementedError

    def _realize(self, step: EnvStep, arm: int) -> float:
        raise NotImplementedError

    def observe(self, t: int) -> EnvStep:
        if t != self._t:
            raise RuntimeError(f"observe({t}) out of order; environment is at round {self._t}")
        if self._pending is not None:
            raise RuntimeError(f"observe({t}) called twice without realize")
        step = self._make_step(t)
        self._pending = step
        return step

    def realize(self, t: int, arm: int) -> float:
        if self._pending is None:
            raise RuntimeError(f"realize({t}) before observe")
        if t != self._t:
            raise RuntimeError(f"realize({t}) out of order; environment is at round {self._t}")
        if not 0 <= arm < self.num_arms:
            raise IndexError(f"arm {arm} out of range [0, {self.num_arms})")
        reward = float(self._realize(self._pending, arm))
        self._pending = None
        self._t += 1
        return reward


# ---------------------------------------------------------------------------
# Mushroom
# ---------------------------------------------------------------------------

# UCI agaricus-lepiota attribute metadata: names and letter-code meanings,
# used only for human-readable context text. Encoding vocabularies are built
# from the data itself.
MUSHROOM_ATTRIBUTES: tuple[tuple[str, dict[str, str]], ...] = (
    ("cap-shape", {"b": "bell", "c": "conical", "x": "convex", "f": "flat", "k": "knobbed", "s": "sunken"}),
    ("cap-surface", {"f": "fibrous", "g": "grooves", "y": "scaly", "s": "smooth"}),
    ("cap-color", {"n": "brown", "b": "buff", "c": "cinnamon", "g": "gray", "r": "green", "p": "pink", "u": "purple", "e": "red", "w": "white", "y": "yellow"}),
    ("bruises", {"t": "bruises", "f": "no-bruises"}),
    ("odor", {"a": "almond", "l": "anise", "c": "creosote", "y": "fishy", "f": "foul", "m": "musty", "n": "none", "p": "pungent", "s": "spicy"}),
    ("gill-attachment", {"a": "attached", "d": "descending", "f": "free", "n": "notched"}),
    ("gill-spacing", {"c": "close", "w": "crowded", "d": "distant"}),
    ("gill-size", {"b": "broad", "n": "narrow"}),
    ("gill-color", {"k": "black", "n": "brown", "b": "buff", "h": "chocolate", "g": "gray", "r": "green", "o": "orange", "p": "pink", "u": "purple", "e": "red", "w": "white", "y": "yellow"}),
    ("stalk-shape", {"e": "enlarging", "t": "tapering"}),
    ("stalk-root", {"b": "bulbous", "c": "club", "u": "cup", "e": "equal", "z": "rhizomorphs", "r": "rooted", "?": "missing"}),
    ("stalk-surface-above-ring", {"f": "fibrous", "y": "scaly", "k": "silky", "s": "smooth"}),
    ("stalk-surface-below-ring", {"f": "fibrous", "y": "scaly", "k": "silky", "s": "smooth"}),
    ("stalk-color-above-ring", {"n": "brown", "b": "buff", "c": "cinnamon", "g": "gray", "o": "orange", "p": "pink", "e": "red", "w": "white", "y": "yellow"}),
    ("stalk-color-below-ring", {"n": "brown", "b": "buff", "c": "cinnamon", "g": "gray", "o": "orange", "p": "pink", "e": "red", "w": "white", "y": "yellow"}),
    ("veil-type", {"p": "partial", "u": "universal"}),
    ("veil-color", {"n": "brown", "o": "orange", "w": "white", "y": "yellow"}),
    ("ring-number", {"n": "none", "o": "one", "t": "two"}),
    ("ring-type", {"c": "cobwebby", "e": "evanescent", "f": "flaring", "l": "large", "n": "none", "p": "pendant", "s": "sheathing", "z": "zone"}),
    ("spore-print-color", {"k": "black", "n": "brown", "b": "buff", "h": "chocolate", "r": "green", "o": "orange", "u": "purple", "w": "white", "y": "yellow"}),
    ("population", {"a": "abundant", "c": "clustered", "n": "numerous", "s": "scattered", "v": "several", "y": "solitary"}),
    ("habitat", {"g": "grasses", "l": "leaves", "m": "meadows", "p": "paths", "u": "urban", "w": "waste", "d": "woods"}),
)

N_MUSHROOM_ATTRS = len(MUSHROOM_ATTRIBUTES)

ARM_EAT = 0
ARM_NO_EAT = 1


@dataclass
class MushroomRewards:
    eat_edible: float = 5.0
    eat_poisonous: float = -35.0
    no_eat_edible: float = 0.0
    no_eat_poisonous: float = 5.0

    def table(self, edible: bool) -> np.ndarray:
        """Expected reward per arm (eat, no-eat) for a record's class."""
        if edible:
            return np.array([self.eat_edible, self.no_eat_edible])
        return np.array([self.eat_poisonous, self.no_eat_poisonous])


@dataclass
class MushroomConfig:
    data_path: str
    rewards: MushroomRewards = field(default_factory=MushroomRewards)


def _parse_mushroom_file(path) -> tuple[list[bool], list[tuple[str, ...]]]:
    edible: list[bool] = []
    rows: list[tuple[str, ...]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != N_MUSHROOM_ATTRS + 1:
                raise ValueError(
                    f"{path}:{lineno}: expected {N_MUSHROOM_ATTRS + 1} fields, got {len(fields)}"
                )
            if fields[0] not in ("e", "p"):
                raise ValueError(f"{path}:{lineno}: class must be 'e' or 'p', got {fields[0]!r}")
            edible.append(fields[0] == "e")
            rows.append(tuple(fields[1:]))
    if not rows:
        raise ValueError(f"{path}: no records")
    return edible, rows


class MushroomEnv(Environment):
    """2-arm eat / don't-eat bandit over one-hot encoded categorical records.

    The one-hot vocabulary comes from a full pass over the file, so the
    feature dimension is data-derived. Rounds sample records uniformly with
    replacement; both arms see the same context.
    """

    name = "mushroom"
    ARM_TEXTS = ("eat the mushroom", "do not eat the mushroom")

    def __init__(self, config: MushroomConfig, rng: np.random.Generator):
        super().__init__()
        self.config = config
        self.rng = rng
        self._edible, self._rows = _parse_mushroom_file(config.data_path)
        # per-column vocabulary, sorted for a stable column order
        self._vocab: list[dict[str, int]] = []
        offset = 0
        for col in range(N_MUSHROOM_ATTRS):
            values = sorted({row[col] for row in self._rows})
            self._vocab.append({v: offset + i for i, v in enumerate(values)})
            offset += len(values)
        self._onehot_dim = offset
        self._features = np.zeros((len(self._rows), self._onehot_dim), dtype=np.uint8)
        for i, row in enumerate(self._rows):
            for col, value in enumerate(row):
                self._features[i, self._vocab[col][value]] = 1

    @property
    def num_arms(self) -> int:
        return 2

    @property
    def dim(self) -> int:
        return self._onehot_dim + 1

    @property
    def n_records(self) -> int:
        return len(self._rows)

    @property
    def reward_range(self) -> tuple[float, float]:
        r = self.config.rewards
        vals = (r.eat_edible, r.eat_poisonous, r.no_eat_edible, r.no_eat_poisonous)
        return (min(vals), max(vals))

    def encode(self, row: tuple[str, ...]) -> np.ndarray:
        """One-hot + bias for a raw record; unknown values are hard errors."""
        x = np.zeros(self.dim)
        for col, value in enumerate(row):
            if value not in self._vocab[col]:
                name = MUSHROOM_ATTRIBUTES[col][0]
                raise ValueError(f"unknown value {value!r} for attribute {name}")
            x[self._vocab[col][value]] = 1.0
        x[-1] = 1.0
        return x

    @staticmethod
    def describe(row: tuple[str, ...]) -> str:
        parts = []
        for (name, words), value in zip(MUSHROOM_ATTRIBUTES, row):
            parts.append(f"{name}={words.get(value, value)}")
        return ", ".join(parts)

    def feature_notes(self) -> str:
        lines = ["Each context lists 22 categorical attributes of a mushroom."]
        for col, (name, words) in enumerate(MUSHROOM_ATTRIBUTES):
            values = sorted(self._vocab[col])
            decoded = ", ".join(words.get(v, v) for v in values)
            lines.append(f"- {name}: one of {decoded}")
        return "\n".join(lines)

    def _make_step(self, t: int) -> EnvStep:
        idx = int(self.rng.integers(self.n_records))
        x = self.encode(self._rows[idx])
        expected = self.config.rewards.table(self._edible[idx])
        return EnvStep(
            contexts=np.stack([x, x]),
            expected_rewards=expected,
            r_star=float(np.max(expected)),
            arm_texts=self.ARM_TEXTS,
            context_text=self.describe(self._rows[idx]),
        )

    def _realize(self, step: EnvStep, arm: int) -> float:
        # rewards are a deterministic function of (class, arm)
        return float(step.expected_rewards[arm])


# ---------------------------------------------------------------------------
# MIND-style news clicks
# ---------------------------------------------------------------------------


@dataclass
class MindConfig:
    behaviors_path: str
    news_path: str
    K: int = 5
    hash_dim: int = 64
    history_len: int = 10

    def __post_init__(self) -> None:
        if self.K < 2:
            raise ValueError(f"K must be >= 2, got {self.K}")
        if self.hash_dim < 8:
            raise ValueError(f"hash_dim must be >= 8, got {self.hash_dim}")
        if self.history_len < 1:
            raise ValueError(f"history_len must be >= 1, got {self.history_len}")


_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")


def tokenize(text: str) -> list[str]:
    return [tok for tok in _TOKEN_SPLIT.split(text.lower()) if tok]


def hash_tokens(tokens, hash_dim: int) -> np.ndarray:
    """Signed feature hashing; index and sign come from keyed blake2b digests,
    so vectors are stable across processes and platforms."""
    vec = np.zeros(hash_dim)
    for tok in tokens:
        data = tok.encode("utf-8")
        idx = int.from_bytes(hashlib.blake2b(data, digest_size=8, person=b"idx").digest(), "big")
        sgn = hashlib.blake2b(data, digest_size=1, person=b"sgn").digest()[0]
        vec[idx % hash_dim] += 1.0 if sgn & 1 else -1.0
    return vec


@dataclass
class _Impression:
    history: tuple[str, ...]          # news ids, oldest first
    candidates: tuple[tuple[str, bool], ...]  # (news id, clicked)


class MindEnv(Environment):
    """K-arm news recommendation over logged impressions.

    Each round samples one impression. The arm slate keeps one clicked
    candidate when the impression has any, padded with uniformly sampled
    unclicked candidates, then shuffled. Rewards are the logged click labels,
    so realized and expected rewards coincide.
    """

    name = "mind"

    def __init__(self, config: MindConfig, rng: np.random.Generator):
        super().__init__()
        self.config = config
        self.rng = rng
        self._news = self._load_news(config.news_path)
        self._impressions, self.skipped = self._load_behaviors(config.behaviors_path)
        if not self._impressions:
            raise ValueError(f"{config.behaviors_path}: no usable impressions")
        self._vec_cache: dict[tuple[str, bool], np.ndarray] = {}

    @property
    def num_arms(self) -> int:
        return self.config.K

    @property
    def dim(self) -> int:
        return self.config.hash_dim + 1

    @property
    def n_impressions(self) -> int:
        return len(self._impressions)

    @property
    def reward_range(self) -> tuple[float, float]:
        return (0.0, 1.0)

    def _load_news(self, path) -> dict[str, tuple[str, str]]:
        news: dict[str, tuple[str, str]] = {}
        bad = 0
        total = 0
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                total += 1
                fields = line.rstrip("\n").split("\t")
                if len(fields) < 5 or not fields[0]:
                    bad += 1
                    continue
                news[fields[0]] = (fields[3], fields[4])
        self._check_bad_fraction(path, bad, total)
        if not news:
            raise ValueError(f"{path}: no news records")
        return news

    def _load_behaviors(self, path) -> tuple[list[_Impression], dict[str, int]]:
        impressions: list[_Impression] = []
        skipped = {"bad_line": 0, "no_candidates": 0, "short_slate": 0, "unknown_news": 0}
        total = 0
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                total += 1
                fields = line.rstrip("\n").split("\t")
                if len(fields) < 5:
                    skipped["bad_line"] += 1
                    continue
                history = tuple(h for h in fields[3].split() if h)
                raw_cands = fields[4].split()
                if not raw_cands:
                    skipped["no_candidates"] += 1
                    continue
                cands: list[tuple[str, bool]] = []
                ok = True
                for tok in raw_cands:
                    nid, sep, label = tok.rpartition("-")
                    if not sep or label not in ("0", "1") or not nid:
                        ok = False
                        break
                    cands.append((nid, label == "1"))
                if not ok:
                    skipped["bad_line"] += 1
                    continue
                if any(nid not in self._news for nid, _ in cands):
                    skipped["unknown_news"] += 1
                    continue
                n_clicked = sum(1 for _, c in cands if c)
                n_neg = len(cands) - n_clicked
                # need a full slate: one click plus K-1 negatives, or K negatives
                enough = n_neg >= self.config.K - 1 if n_clicked else n_neg >= self.config.K
                if len(cands) < self.config.K or not enough:
                    skipped["short_slate"] += 1
                    continue
                history = tuple(h for h in history if h in self._news)
                impressions.append(_Impression(history=history, candidates=tuple(cands)))
        self._check_bad_fraction(path, skipped["bad_line"], total)
        return impressions, skipped

    @staticmethod
    def _check_bad_fraction(path, bad: int, total: int) -> None:
        if total and bad / total > 0.01:
            raise ValueError(f"{path}: {bad}/{total} lines unparseable (> 1%)")

    def _news_vec(self, news_id: str, with_abstract: bool) -> np.ndarray:
        key = (news_id, with_abstract)
        if key not in self._vec_cache:
            title, abstract = self._news[news_id]
            text = f"{title} {abstract}" if with_abstract else title
            self._vec_cache[key] = hash_tokens(tokenize(text), self.config.hash_dim)
        return self._vec_cache[key]

    def _make_step(self, t: int) -> EnvStep:
        cfg = self.config
        imp = self._impressions[int(self.rng.integers(self.n_impressions))]
        clicked = [c for c in imp.candidates if c[1]]
        negatives = [c for c in imp.candidates if not c[1]]
        slate: list[tuple[str, bool]] = []
        if clicked:
            slate.append(clicked[int(self.rng.integers(len(clicked)))])
        n_neg = cfg.K - len(slate)
        for j in self.rng.choice(len(negatives), size=n_neg, replace=False):
            slate.append(negatives[int(j)])
        order = self.rng.permutation(cfg.K)
        slate = [slate[int(i)] for i in order]

        recent = imp.history[-cfg.history_len:]
        hist_vec = np.zeros(cfg.hash_dim)
        for nid in recent:
            hist_vec += self._news_vec(nid, with_abstract=False)
        contexts = np.ones((cfg.K, cfg.hash_dim + 1))
        expected = np.zeros(cfg.K)
        arm_texts = []
        for a, (nid, is_clicked) in enumerate(slate):
            contexts[a, :-1] = hist_vec + self._news_vec(nid, with_abstract=True)
            expected[a] = 1.0 if is_clicked else 0.0
            arm_texts.append(self._news[nid][0])
        return EnvStep(
            contexts=contexts,
            expected_rewards=expected,
            r_star=float(np.max(expected)),
            arm_texts=tuple(arm_texts),
            context_text="\n".join(self._news[nid][0] for nid in recent),
        )

    def _realize(self, step: EnvStep, arm: int) -> float:
        # click labels are deterministic ground truth
        return float(step.expected_rewards[arm])


# ---------------------------------------------------------------------------
# Synthetic linear
# ---------------------------------------------------------------------------


@dataclass
class SyntheticConfig:
    K: int
    d: int
    noise_sigma: float = 0.0
    theta_seed: int = 0
    theta_star: np.ndarray | None = None  # optional explicit (K, d), raw coords

    def __post_init__(self) -> None:
        if self.K < 2:
            raise ValueError(f"K must be >= 2, got {self.K}")
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if self.noise_sigma < 0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")


class SyntheticEnv(Environment):
    """Linear rewards with unit-norm arm parameters and Gaussian noise.

    The context (shared by all arms) has standard-normal raw entries. Arm
    parameters are drawn from a dedicated seed so the same ground truth can be
    studied across many episode seeds; the bias coordinate of every arm is 0,
    making expected rewards zero-mean.
    """

    name = "synthetic"

    def __init__(self, config: SyntheticConfig, rng: np.random.Generator):
        super().__init__()
        self.config = config
        self.rng = rng
        if config.theta_star is not None:
            raw = np.asarray(config.theta_star, dtype=np.float64)
            if raw.shape != (config.K, config.d):
                raise ValueError(
                    f"theta_star must have shape {(config.K, config.d)}, got {raw.shape}"
                )
        else:
            theta_rng = np.random.default_rng(config.theta_seed)
            raw = theta_rng.normal(size=(config.K, config.d))
            raw /= np.linalg.norm(raw, axis=1, keepdims=True)
        self._theta = np.zeros((config.K, config.d + 1))
        self._theta[:, :-1] = raw

    @property
    def num_arms(self) -> int:
        return self.config.K

    @property
    def dim(self) -> int:
        return self.config.d + 1

    @property
    def theta_star(self) -> np.ndarray:
        """Bias-augmented (K, d+1) ground-truth parameters (bias coord 0)."""
        return self._theta.copy()

    def _make_step(self, t: int) -> EnvStep:
        cfg = self.config
        x = np.ones(cfg.d + 1)
        x[:-1] = self.rng.normal(size=cfg.d)
        expected = self._theta @ x
        return EnvStep(
            contexts=np.tile(x, (cfg.K, 1)),
            expected_rewards=expected,
            r_star=float(np.max(expected)),
            arm_texts=tuple(f"action {a}" for a in range(cfg.K)),
            context_text="features: " + ", ".join(f"{v:.3f}" for v in x[:-1]),
        )

    def _realize(self, step: EnvStep, arm: int) -> float:
        noise = self.rng.normal(0.0, 1.0)
        return float(step.expected_rewards[arm] + self.config.noise_sigma * noise)


# ---------------------------------------------------------------------------
# Construction from config mappings
# ---------------------------------------------------------------------------

ENVIRONMENT_KINDS = ("mushroom", "mind", "synthetic")


def build_environment(spec: dict, rng: np.random.Generator) -> Environment:
    """Construct an environment from {'kind': ..., <params>}."""
    if "kind" not in spec:
        raise ValueError("environment config needs a 'kind' key")
    params = dict(spec)
    kind = params.pop("kind")
    if kind == "mushroom":
        rewards = params.pop("rewards", None)
        if isinstance(rewards, dict):
            rewards = MushroomRewards(**rewards)
        elif isinstance(rewards, (list, tuple)):
            rewards = MushroomRewards(*rewards)
        elif rewards is None:
            rewards = MushroomRewards()
        return MushroomEnv(MushroomConfig(rewards=rewards, **params), rng)
    if kind == "mind":
        return MindEnv(MindConfig(**params), rng)
    if kind == "synthetic":
        return SyntheticEnv(SyntheticConfig(**params), rng)
    raise ValueError(f"unknown environment kind {kind!r}; choose from {ENVIRONMENT_KINDS}")
