"""The Kronecker grading V maps to every quotient V/n, usually in two ways.

    python3 demos/kronecker_versal.py
"""
from gradcat import corpus
from gradcat.morph import GradingFamily, compute_fix, enumerate_thin_morphisms, verify_universal_property

V = corpus.load("kronecker").grading("V")
print("endomorphisms of V:", [str(m.mu) for m in enumerate_thin_morphisms(V, V)])
print("fixed subgroup:", compute_fix(V).group)
report = verify_universal_property(V, GradingFamily(corpus.kronecker_quotients(6, V)))
for e in report.entries:
    print("%-4s exists=%s unique=%s via %s: %s" % (e.name, e.exists, e.unique, e.method, ", ".join(map(str, e.mus))))
print("versal:", report.all_exist, " universal:", report.all_unique)
