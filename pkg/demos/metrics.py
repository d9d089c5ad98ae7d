"""
ROUGE-1, ROUGE-L and BLEU
=========================

Scoring a few candidates against one reference, then aggregating the way
a results table reports them.
"""

from tabtx.evaluation import aggregate, score_pair, tokenize
from tabtx.model import ScoreTriple

reference = "According to the net fiscal cost by year, the cost rose by 9.435 trillion KRW."
print(tokenize(reference))

candidates = {
    "same": reference,
    "reordered": "The cost rose by 9.435 trillion KRW, according to the net fiscal cost by year.",
    "short": "The cost rose.",
    "unrelated": "Seoul has many residents.",
}
for name, text in candidates.items():
    s = score_pair(text, reference)
    print(f"{name:10} R1={s.rouge1:.3f} RL={s.rougeL:.3f} BLEU={s.bleu:.3f}")

# Korean references switch to character tokens
s = score_pair("순재정비용이 증가했다.", "순재정비용은 전년보다 증가했다.")
print(f"{'korean':10} R1={s.rouge1:.3f} RL={s.rougeL:.3f} BLEU={s.bleu:.3f}")

# corpus-level triples and their average, rounded for presentation
print()
for label, triple in [("model A", ScoreTriple(0.51, 0.39, 0.44)), ("model B", ScoreTriple(0.37, 0.28, 0.35))]:
    print(label, aggregate([(label, triple)]).rounded)
