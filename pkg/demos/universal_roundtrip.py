"""Universal grading of a Schurian-generated presentation, cross-checked
against every connected grading by C2, C3 and C4.

    python3 demos/universal_roundtrip.py [model]
"""
import sys

from gradcat import corpus
from gradcat.grading import Grading
from gradcat.grpkit import cyclic
from gradcat.morph import GradingFamily, enumerate_constricted_gradings, verify_universal_property
from gradcat.schur import universal_grading

name = sys.argv[1] if len(sys.argv) > 1 else "roundtrip"
cat = corpus.load(name).category
res = universal_grading(cat)
print("presentation:", res.presentation)
print("universal group:", res.grading.group)
family = [X for n in (2, 3, 4) for X in enumerate_constricted_gradings(cat, cyclic(n))] + [Grading.trivial(cat)]
report = verify_universal_property(res.grading, GradingFamily(family))
print("%d gradings checked, existence=%s uniqueness=%s" % (len(family), report.all_exist, report.all_unique))
