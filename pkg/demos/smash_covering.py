"""Build the C2 smash product of the round-trip category, check that it is a
Galois covering, and lift a morphism of gradings to a covering morphism.

    python3 demos/smash_covering.py
"""
from gradcat import corpus
from gradcat.grading import Grading, connectors
from gradcat.grpkit import GroupHom
from gradcat.linrep import identity_functor
from gradcat.smash import build_smash, covering_morphism_from_grading_morphism, galois_report, lambda_map, verify_covering

m = corpus.load("roundtrip")
X = m.grading("C2")
S = build_smash(X)
print("objects:", ["(%s,%s)" % (b, s) for b, s in S.objects], "total dim:", S.total_dim())
print("stars match:", verify_covering(S).ok, " galois:", galois_report(S).ok)

G = X.group
Y = Grading.from_arrow_degrees(m.category, G, {"alpha": G.zero, "beta": G.element(torsion=(1,))})
M = covering_morphism_from_grading_morphism(X, Y, GroupHom.identity(G), identity_functor(m.category), connectors(X, "x"))
res = lambda_map(M)
print("shifts:", {b: str(h) for b, h in M.shifts.items()}, " lambda:", res.lam, " mu_J agrees:", res.eq1)
