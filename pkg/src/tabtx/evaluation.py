"""ROUGE-1, ROUGE-L and sentence BLEU against a single reference."""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP
from typing import Iterable, Optional, Sequence

from .errors import EmptyCorpus
from .model import ScoreTriple
from .tx import has_hangul

_WORD = re.compile(r"\d+(?:[.,]\d+)*|\w+|[^\w\s]")


def tokenize(text: str, mode: str = "word") -> list[str]:
    """Split ``text`` into metric tokens.

    ``word`` case-folds and detaches punctuation (numbers such as
    ``2,437`` stay whole); ``char`` yields every non-space character,
    which suits Korean where whitespace units are coarse.
    """
    if mode == "word":
        return _WORD.findall(text.casefold())
    if mode == "char":
        return [ch for ch in text if not ch.isspace()]
    raise ValueError(f"unknown tokenize mode {mode!r}")


def auto_mode(reference: str) -> str:
    return "char" if has_hangul(reference) else "word"


def _f1(match: int, n_cand: int, n_ref: int) -> float:
    if n_cand == 0 or n_ref == 0 or match == 0:
        return 0.0
    p = match / n_cand
    r = match / n_ref
    return 2 * p * r / (p + r)


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def rouge1(candidate: Sequence[str], reference: Sequence[str]) -> float:
    overlap = sum((Counter(candidate) & Counter(reference)).values())
    return _f1(overlap, len(candidate), len(reference))


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rougeL(candidate: Sequence[str], reference: Sequence[str]) -> float:
    return _f1(lcs_length(candidate, reference), len(candidate), len(reference))


def bleu(candidate: Sequence[str], reference: Sequence[str], max_n: int = 4) -> float:
    """Sentence BLEU with uniform weights and a brevity penalty.

    For n >= 2 an n-gram order with no clipped match is smoothed to
    ``1 / (count + 1)``; a zero unigram match still gives 0.
    """
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    if not candidate:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        cand = ngrams(candidate, n)
        total = sum(cand.values())
        match = sum((cand & ngrams(reference, n)).values())
        if match == 0:
            if n == 1:
                return 0.0
            match, total = 1, total + 1
        log_sum += math.log(match / total)
    bp = 1.0
    if len(candidate) < len(reference):
        bp = math.exp(1 - len(reference) / len(candidate))
    return bp * math.exp(log_sum / max_n)


def score_pair(candidate: str, reference: str, mode: str = "auto") -> ScoreTriple:
    if mode == "auto":
        mode = auto_mode(reference)
    c = tokenize(candidate, mode)
    r = tokenize(reference, mode)
    return ScoreTriple(rouge1(c, r), rougeL(c, r), bleu(c, r))


def round2(x: float) -> float:
    return float(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class EvalReport:
    per_document: tuple[tuple[str, ScoreTriple], ...]
    corpus_means: ScoreTriple
    overall_average: float

    @property
    def rounded(self) -> dict[str, float]:
        """Presentation values at two decimals."""
        m = self.corpus_means
        return {
            "rouge1": round2(m.rouge1),
            "rougeL": round2(m.rougeL),
            "bleu": round2(m.bleu),
            "average": round2(self.overall_average),
        }

    def summary(self) -> dict:
        return {
            "documents": len(self.per_document),
            **self.corpus_means.to_dict(),
            "average": self.overall_average,
            "rounded": self.rounded,
        }


def aggregate(per_doc: Iterable[tuple[str, ScoreTriple]]) -> EvalReport:
    per_doc = tuple(per_doc)
    if not per_doc:
        raise EmptyCorpus("nothing to aggregate")
    n = len(per_doc)
    means = ScoreTriple(
        sum(s.rouge1 for _, s in per_doc) / n,
        sum(s.rougeL for _, s in per_doc) / n,
        sum(s.bleu for _, s in per_doc) / n,
    )
    return EvalReport(per_doc, means, means.average)


def evaluate_pairs(
    pairs: Iterable[tuple[str, str, str]], mode: str = "auto"
) -> EvalReport:
    """Score ``(id, candidate, reference)`` triples and aggregate them."""
    return aggregate((doc_id, score_pair(c, r, mode)) for doc_id, c, r in pairs)


def maybe_score(candidate: str, reference: Optional[str], mode: str = "auto") -> Optional[ScoreTriple]:
    if reference is None:
        return None
    return score_pair(candidate, reference, mode)
