"""Golden values for the metric tests, from nltk's BLEU pieces and a plain
Python LCS. Mention sets are written out by hand."""
import math
from fractions import Fraction

from nltk.translate.bleu_score import brevity_penalty, closest_ref_length, modified_precision

PAIRS = [
    ("the foam is pushed by the screw driver", "the foam is pushed a little by the screw driver",
     {"foam_brick", "screwdriver"}, {"foam_brick", "screwdriver"}),
    ("the the the the", "the foam is pushed", set(), {"foam_brick"}),
    ("the mustard container is pushed by the screw driver", "the screw driver pushes the mustard container",
     {"mustard_bottle", "screwdriver"}, {"mustard_bottle", "screwdriver"}),
    ("the banana falls off the table", "the banana falls off the table", {"banana"}, {"banana"}),
    ("the chocolate box shakes a little from the impact", "the pudding box shakes a little from the impact",
     {"pudding_box"}, {"pudding_box"}),
    ("the coffee can is pushed by the baseball", "the softball pushes the coffee can a little",
     {"coffee_can", "softball"}, {"coffee_can", "softball"}),
    ("the cheese box falls off the table", "the foam is pushed by the cheese box",
     {"cheezit_box"}, {"foam_brick", "cheezit_box"}),
    ("a b c d", "a c d e", set(), set()),
    ("the screw driver is pushed by the screw driver", "the foam is pushed by the screw driver",
     {"screwdriver"}, {"foam_brick", "screwdriver"}),
    ("the foam brick is pushed a little by the mustard bottle", "the mustard bottle shakes a little from the impact",
     {"foam_brick", "mustard_bottle"}, {"mustard_bottle"}),
]


def lcs(a, b):
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            table[i][j] = table[i - 1][j - 1] + 1 if a[i - 1] == b[j - 1] else max(table[i - 1][j], table[i][j - 1])
    return table[-1][-1]


def rouge_l(p, r, beta=1.2):
    l = lcs(p, r)
    if l == 0:
        return 0.0
    prec, rec = l / len(p), l / len(r)
    return (1 + beta ** 2) * prec * rec / (rec + beta ** 2 * prec)


for pred, ref, pm, rm in PAIRS:
    p, r = pred.split(), ref.split()
    pn = [float(modified_precision([r], p, n)) if len(p) >= n else 0.0 for n in range(1, 5)]
    bp = brevity_penalty(closest_ref_length([r], len(p)), len(p))
    bleu = 0.0 if min(pn) == 0 else bp * math.exp(sum(math.log(x) for x in pn) / 4)
    com = 1.0 if not pm and not rm else len(pm & rm) / len(pm | rm)
    vals = pn + [bleu, rouge_l(p, r), com]
    print('    {"%s", "%s", {%s}},' % (pred, ref, ", ".join(repr(v) for v in vals)))
