"""The B_q family: isomorphic categories whose presentations have different
fundamental groups, and a Z grading that is not path-homogeneous.

    python3 demos/bq_family.py
"""
from gradcat import corpus, grpkit
from gradcat.grading import is_connected_grading, validate_grading
from gradcat.schur import presentation_group, sg_closure

for q in (0, 1, 2):
    m = corpus.bq(q)
    cat = m.category
    U = m.grading("U")
    pi1 = grpkit.abelianize(presentation_group(cat)).group
    gamma_in_sg = sg_closure(cat).contains(cat.arrow("gamma"))
    print(
        "q=%d  dim hom(x,z)=%d  U valid=%s connected=%s  gamma in SG closure=%s  presentation group=%s"
        % (q, cat.hom_dim("x", "z"), validate_grading(U).ok, is_connected_grading(U, "x"), gamma_in_sg, pi1)
    )

for q, q2 in ((0, 1), (1, 2)):
    F = corpus.bq_functor(corpus.bq(q), corpus.bq(q2))
    print("B_%d -> B_%d isomorphism: %s" % (q, q2, F.is_isomorphism()))
