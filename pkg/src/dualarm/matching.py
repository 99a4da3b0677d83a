"""TF-IDF command matching against a fixed lexicon of executable templates.

Utterances and templates are tokenized, weighted by term frequency times
log inverse document frequency over the lexicon, and compared by cosine
similarity.  The best-scoring entry wins; ties break toward the lowest
entry ordinal.
"""

import re
from dataclasses import dataclass
from enum import Enum

import numpy as np

DEFAULT_THRESHOLD = 0.6

_PUNCT = re.compile(r"[^\w\s]+", re.UNICODE)


class MatchingError(Exception):
    pass


class EmptyLexiconError(MatchingError):
    """An index cannot be built over zero entries."""


class NoMatchError(MatchingError):
    """Every entry scored below the acceptance threshold."""

    def __init__(self, utterance, best=None):
        self.utterance = utterance
        self.best = best  # best-scoring MatchResult (accepted=False), if any
        score = f" (best score {best.score:.3f})" if best else ""
        super().__init__(f"command not understood: {utterance!r}{score}")


class Action(str, Enum):
    PICK_UP = "pick_up"


@dataclass(frozen=True)
class CommandEntry:
    template: str
    action: Action
    object_label: str

    def __post_init__(self):
        if not self.template.strip():
            raise ValueError("command template must be non-empty")
        if not self.object_label.strip():
            raise ValueError("object_label must be non-empty")


@dataclass(frozen=True)
class CommandLexicon:
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        templates = [e.template for e in self.entries]
        if len(set(templates)) != len(templates):
            raise ValueError("command templates must be pairwise distinct")

    def __len__(self):
        return len(self.entries)


def tokenize(text):
    """Lowercase, strip punctuation, split on whitespace."""
    return _PUNCT.sub(" ", text.lower()).split()


@dataclass(frozen=True)
class TfIdfIndex:
    """Immutable TF-IDF weights over a lexicon's vocabulary.

    idf(t) = ln(N / df(t)); entry vectors are raw term counts times idf, one
    dense row per entry over the sorted vocabulary.
    """

    vocabulary: tuple
    idf: np.ndarray
    entry_vectors: np.ndarray

    @property
    def term_ids(self):
        return {term: i for i, term in enumerate(self.vocabulary)}


def _count_terms(tokens, term_ids, size):
    counts = np.zeros(size)
    for token in tokens:
        idx = term_ids.get(token)
        if idx is not None:
            counts[idx] += 1.0
    return counts


def build_index(lexicon):
    """Build the TF-IDF index for a lexicon; raises EmptyLexiconError for
    zero entries."""
    if len(lexicon) == 0:
        raise EmptyLexiconError("cannot index an empty lexicon")
    tokenized = [tokenize(e.template) for e in lexicon.entries]
    vocabulary = tuple(sorted(set(t for tokens in tokenized for t in tokens)))
    term_ids = {term: i for i, term in enumerate(vocabulary)}

    df = np.zeros(len(vocabulary))
    for tokens in tokenized:
        for term in set(tokens):
            df[term_ids[term]] += 1.0
    idf = np.log(len(lexicon) / df) if len(vocabulary) else np.zeros(0)

    vectors = np.zeros((len(lexicon), len(vocabulary)))
    for row, tokens in enumerate(tokenized):
        vectors[row] = _count_terms(tokens, term_ids, len(vocabulary)) * idf
    return TfIdfIndex(vocabulary=vocabulary, idf=idf, entry_vectors=vectors)


def vectorize(index, text):
    """TF-IDF weight vector of arbitrary text over the index vocabulary;
    out-of-vocabulary tokens are ignored."""
    counts = _count_terms(tokenize(text), index.term_ids, len(index.vocabulary))
    return counts * index.idf


def cosine_similarity(v1, v2):
    """Normalized dot product; defined as 0 when either vector has zero norm.

    Clamped to [-1, 1] so exact self-matches cannot drift past 1 by
    round-off.
    """
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    norm = np.linalg.norm(v1) * np.linalg.norm(v2)
    if norm == 0.0:
        return 0.0
    return float(np.clip(np.dot(v1, v2) / norm, -1.0, 1.0))


@dataclass(frozen=True)
class MatchResult:
    entry: CommandEntry
    ordinal: int
    score: float
    accepted: bool


def score_entries(index, utterance):
    """Cosine score of the utterance against every entry, in entry order."""
    query = vectorize(index, utterance)
    return np.array([cosine_similarity(query, row) for row in index.entry_vectors])


def match_command(index, lexicon, utterance, threshold=DEFAULT_THRESHOLD):
    """Best-matching lexicon entry for an utterance.

    Deterministic: ties break to the lowest entry ordinal.  Raises
    NoMatchError (carrying the rejected best candidate) when the top score
    falls below ``threshold``.
    """
    scores = score_entries(index, utterance)
    ordinal = int(np.argmax(scores))
    score = float(scores[ordinal])
    accepted = score >= threshold
    result = MatchResult(entry=lexicon.entries[ordinal], ordinal=ordinal,
                         score=score, accepted=accepted)
    if not accepted:
        raise NoMatchError(utterance, best=result)
    return result
