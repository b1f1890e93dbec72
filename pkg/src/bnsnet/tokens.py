"""Tokenization, POS tagging and lexicon-based sentiment scoring.

Produces the per-token records both detection channels consume.  POS
tagging goes through a pluggable callable so externally tagged corpora can
bypass the bundled rule tagger; the bundled tagger is deterministic
(closed-class word lists plus suffix rules) and emits tags from the
17-tag universal set.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

UNIVERSAL_TAGS = frozenset({
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
})

# closed class; the only words the default tagger may tag AUX
AUXILIARIES = frozenset({
    "be", "am", "is", "are", "was", "were", "been", "being",
    "do", "does", "did", "have", "has", "had",
    "will", "would", "can", "could", "shall", "should", "may", "might", "must",
})

PUNCT_DETACH = set(".,!?;:'\"()")

# sequence of normalized tokens in, one tag per token out
PosTagger = Callable[[Sequence[str]], list[str]]


class LexiconError(ValueError):
    """Raised for unreadable or malformed lexicon files."""


@dataclass(frozen=True)
class Token:
    """One word of a sentence: surface form, POS tag and signed sentiment."""

    surface: str
    normalized: str
    pos: str
    sentiment: float
    index: int

    def __post_init__(self):
        if self.pos not in UNIVERSAL_TAGS:
            raise ValueError(f"unknown POS tag {self.pos!r}")
        if not -1.0 <= self.sentiment <= 1.0:
            raise ValueError(f"sentiment {self.sentiment} outside [-1, 1]")


@dataclass(frozen=True)
class SentimentLexicon:
    """Word -> signed polarity in [-1, 1]; absent words score 0."""

    entries: Mapping[str, float]

    def score(self, normalized: str) -> float:
        return self.entries.get(normalized, 0.0)

    def __contains__(self, normalized: str) -> bool:
        return normalized in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def tokenize(text: str) -> list[str]:
    """Whitespace split, then peel leading/trailing punctuation into
    separate tokens.  Internal punctuation (don't, e.g.) stays attached."""
    out: list[str] = []
    for piece in text.split():
        leading: list[str] = []
        while len(piece) > 1 and piece[0] in PUNCT_DETACH:
            leading.append(piece[0])
            piece = piece[1:]
        trailing: list[str] = []
        while len(piece) > 1 and piece[-1] in PUNCT_DETACH:
            trailing.append(piece[-1])
            piece = piece[:-1]
        out.extend(leading)
        out.append(piece)
        out.extend(reversed(trailing))
    return out


def tag_pos(tokens: Sequence[str], tagger: PosTagger) -> list[str]:
    """Run a tagger and enforce its two contract points: one tag per
    token, every tag inside the universal set."""
    tags = tagger(tokens)
    if len(tags) != len(tokens):
        raise ValueError(f"tagger returned {len(tags)} tags for {len(tokens)} tokens")
    for t in tags:
        if t not in UNIVERSAL_TAGS:
            raise ValueError(f"tagger produced unknown tag {t!r}")
    return list(tags)


def score_sentiment(tokens: Sequence[str], lexicon: SentimentLexicon) -> list[float]:
    return [lexicon.score(t) for t in tokens]


def analyze(text: str, tagger: PosTagger, lexicon: SentimentLexicon) -> list[Token]:
    """Full per-sentence pipeline: tokenize, lowercase, tag, score."""
    surfaces = tokenize(text)
    normalized = [s.lower() for s in surfaces]
    tags = tag_pos(normalized, tagger)
    scores = score_sentiment(normalized, lexicon)
    return [Token(s, n, p, v, i)
            for i, (s, n, p, v) in enumerate(zip(surfaces, normalized, tags, scores))]


def load_lexicon(path) -> SentimentLexicon:
    """Parse a "word<TAB>value" file; '#' lines are comments, later
    duplicates win, values must lie in [-1, 1]."""
    entries: dict[str, float] = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise LexiconError(f"cannot read lexicon {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconError(f"{path}:{lineno}: expected 'word<TAB>value', got {raw!r}")
        word, value_str = parts
        try:
            value = float(value_str)
        except ValueError as exc:
            raise LexiconError(f"{path}:{lineno}: bad value {value_str!r}") from exc
        if not -1.0 <= value <= 1.0:
            raise LexiconError(f"{path}:{lineno}: value {value} outside [-1, 1]")
        entries[word.lower()] = value
    return SentimentLexicon(entries)


def bundled_lexicon_path() -> Path:
    return Path(__file__).parent / "resources" / "sentiment_lexicon.tsv"


def load_bundled_lexicon() -> SentimentLexicon:
    return load_lexicon(bundled_lexicon_path())


# ---------------------------------------------------------------------------
# default rule tagger

_PRONOUNS = {"i", "you", "he", "she", "it", "we", "they", "me", "him", "her",
             "us", "them", "myself", "yourself", "himself", "herself", "itself",
             "ourselves", "themselves", "who", "whom", "someone", "everyone",
             "anyone", "nothing", "something", "anything", "everything"}

_DETERMINERS = {"the", "a", "an", "this", "that", "these", "those", "my",
                "your", "his", "its", "our", "their", "every", "each",
                "some", "any", "no", "another", "such", "both", "all"}

_ADPOSITIONS = {"in", "on", "at", "of", "for", "with", "from", "by", "about",
                "into", "over", "under", "after", "before", "during",
                "through", "between", "against", "without", "around", "near"}

_PARTICLES = {"to", "not", "n't"}

_CCONJ = {"and", "or", "but", "nor", "so", "yet", "plus"}

_SCONJ = {"if", "because", "while", "although", "when", "since", "unless",
          "though", "whether", "until", "once", "as"}

_INTERJECTIONS = {"oh", "wow", "yay", "ugh", "hey", "ah", "oops", "hmm",
                  "alas", "please", "thanks", "yes", "yeah"}

_ADVERBS = {"very", "really", "always", "never", "again", "forever", "too",
            "just", "quite", "often", "sometimes", "here", "there", "now",
            "then", "today", "yesterday", "tomorrow", "constantly",
            "repeatedly", "totally", "utterly", "even", "still", "already",
            "maybe", "almost", "twice", "away", "back", "more", "most"}

_VERBS = {
    "love", "loves", "loved", "loving", "like", "likes", "liked",
    "hate", "hates", "hated", "hating", "enjoy", "enjoys", "enjoyed",
    "enjoying", "adore", "adores", "adored", "adoring",
    "ignore", "ignores", "ignored", "reject", "rejects", "rejected",
    "wait", "waits", "waited", "waiting", "go", "goes", "went", "gone",
    "going", "get", "gets", "got", "getting", "take", "takes", "took",
    "taken", "make", "makes", "made", "know", "knows", "knew", "think",
    "thinks", "thought", "want", "wants", "wanted", "need", "needs",
    "needed", "run", "runs", "ran", "running", "eat", "eats", "ate",
    "see", "sees", "saw", "seen", "say", "says", "said", "come", "comes",
    "came", "find", "finds", "found", "give", "gives", "gave", "tell",
    "tells", "told", "work", "works", "worked", "call", "calls", "called",
    "try", "tries", "tried", "ask", "asks", "asked", "feel", "feels",
    "felt", "leave", "leaves", "left", "keep", "keeps", "kept", "sit",
    "sits", "sat", "stand", "stands", "stood", "lose", "loses", "lost",
    "pay", "pays", "paid", "meet", "meets", "met", "delay", "delays",
    "delayed", "cancel", "cancels", "cancelled", "canceled", "insult",
    "insults", "insulted", "interrupt", "interrupts", "interrupted",
    "criticize", "criticizes", "criticized", "mock", "mocks", "mocked",
    "miss", "misses", "missed", "break", "breaks", "broke", "broken",
    "fail", "fails", "failed", "rain", "rains", "rained", "cry", "cries",
    "cried", "smile", "smiles", "smiled", "laugh", "laughs", "laughed",
    "dance", "dances", "danced", "sing", "sings", "sang", "read", "reads",
    "write", "writes", "wrote", "listen", "listens", "listened", "walk",
    "walks", "walked", "talk", "talks", "talked", "play", "plays",
    "played", "help", "helps", "helped", "stuck", "overcharged",
    "stranded", "dumped", "robbed", "praised", "thanked", "hugged",
    "welcomed", "blamed", "scolded", "spilled", "crashed", "froze",
    "forgot", "forget", "forgets", "booed", "cheered", "greeted",
}

_ADJECTIVES = {"good", "bad", "great", "terrible", "awful", "horrible",
               "nice", "wonderful", "amazing", "fantastic", "happy", "sad",
               "sunny", "rainy", "cold", "hot", "warm", "new", "old", "big",
               "small", "long", "short", "perfect", "awesome", "brilliant",
               "lovely", "excellent", "miserable", "annoying", "rude",
               "boring", "ugly", "dirty", "clean", "fresh", "sweet",
               "delicious", "charming", "pleasant", "glad", "late", "early",
               "free", "busy", "sick", "tired", "delightful", "best",
               "worst", "fun", "angry", "broken", "slow", "fast", "quiet",
               "loud", "kind", "cruel", "fair", "unfair", "safe"}

_NUMBERS = {"zero", "one", "two", "three", "four", "five", "six", "seven",
            "eight", "nine", "ten", "hundred", "thousand", "million"}

_SYMBOLS = set("$%+=#@&*^~<>/\\|")

_SUFFIX_RULES: tuple[tuple[str, str], ...] = (
    ("ly", "ADV"),
    ("ing", "VERB"),
    ("ed", "VERB"),
    ("tion", "NOUN"),
    ("sion", "NOUN"),
    ("ness", "NOUN"),
    ("ment", "NOUN"),
    ("ship", "NOUN"),
    ("hood", "NOUN"),
    ("ous", "ADJ"),
    ("ful", "ADJ"),
    ("less", "ADJ"),
    ("able", "ADJ"),
    ("ible", "ADJ"),
    ("ive", "ADJ"),
)


def _build_word_table() -> dict[str, str]:
    table: dict[str, str] = {}
    for words, tag in ((_PRONOUNS, "PRON"), (_DETERMINERS, "DET"),
                       (_ADPOSITIONS, "ADP"), (_PARTICLES, "PART"),
                       (_CCONJ, "CCONJ"), (_SCONJ, "SCONJ"),
                       (_INTERJECTIONS, "INTJ"), (_ADVERBS, "ADV"),
                       (_VERBS, "VERB"), (_ADJECTIVES, "ADJ"),
                       (_NUMBERS, "NUM")):
        for w in words:
            table.setdefault(w, tag)
    return table


class RuleTagger:
    """Deterministic tagger: auxiliaries, then word lists, then suffix
    rules; unknown words default to NOUN."""

    version = "rule-1"

    def __init__(self):
        self._table = _build_word_table()

    def __call__(self, tokens: Sequence[str]) -> list[str]:
        return [self._tag_one(t) for t in tokens]

    def _tag_one(self, word: str) -> str:
        if word in AUXILIARIES:
            return "AUX"
        tag = self._table.get(word)
        if tag is not None:
            return tag
        if word.replace(".", "", 1).replace(",", "").isdigit():
            return "NUM"
        if all(c in PUNCT_DETACH or c in "-…—" for c in word):
            return "PUNCT"
        if all(c in _SYMBOLS for c in word):
            return "SYM"
        for suffix, t in _SUFFIX_RULES:
            if len(word) > len(suffix) + 1 and word.endswith(suffix):
                return t
        return "NOUN"


class FixedTagger:
    """Replays externally supplied tags; input must match the tagged text."""

    version = "fixed-1"

    def __init__(self, tags: Sequence[str]):
        self.tags = list(tags)

    def __call__(self, tokens: Sequence[str]) -> list[str]:
        if len(tokens) != len(self.tags):
            raise ValueError(f"pre-tagged input has {len(self.tags)} tags "
                             f"but {len(tokens)} tokens")
        return list(self.tags)
