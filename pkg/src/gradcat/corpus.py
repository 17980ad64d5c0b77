"""Built-in example models.

The JSON files live next to this module; the helpers below load them and
add the pieces that are easier to write in Python (functors between two
different categories, grading quotients, grading families).
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

from .grading import Grading, quotient_grading, reduction
from .io import Model, parse_model
from .linrep import LinComb, functor_from_arrow_images

NAMES = ("a2", "a3", "bq", "dual_numbers", "kcp2", "kcp3", "kronecker", "roundtrip", "square")


def corpus_path(name):
    return resources.files("gradcat") / "corpus" / ("%s.json" % name)


def raw(name) -> dict:
    if name not in NAMES:
        raise KeyError("no corpus model %r" % name)
    return json.loads(corpus_path(name).read_text())


def load(name, **params) -> Model:
    """Parse a corpus model, overriding parameters such as ``q``."""
    return parse_model(raw(name), {k: str(v) for k, v in params.items()})


def example_corpus():
    """``[(name, Model, expected)]`` for every corpus file (B_q at q = 0, 1, 2)."""
    out = []
    for name in NAMES:
        if name == "bq":
            for q in (0, 1, 2):
                m = load("bq", q=q)
                out.append(("bq[q=%d]" % q, m, m.data["expected"]))
        else:
            m = load(name)
            out.append((name, m, m.data["expected"]))
    return out


# --- B_q -------------------------------------------------------------------------


def bq(q=1) -> Model:
    return load("bq", q=Fraction(q))


def bq_functor(src: Model, tgt: Model):
    """``gamma -> gamma + (q - q') beta alpha``, other arrows fixed."""
    q, q2 = src.params["q"], tgt.params["q"]
    Q = src.category.quiver
    img = LinComb.of(Q, (1, ["gamma"]), (q - q2, ["beta", "alpha"]))
    return functor_from_arrow_images(src.category, tgt.category, {"gamma": img})


# --- truncated polynomials -----------------------------------------------------------


def kcp(p) -> Model:
    return load("kcp%d" % p)


def maximal_quotient(model: Model, n) -> Grading:
    """Maximal grading pushed along ``Z -> Z/n``."""
    X = model.grading("maximal")
    return quotient_grading(X, reduction(X.group, n), name="maximal/%d" % n)


def kcp_family(p, moduli=(2, 4)):
    """Gradings ``{Z, Z/2, Z/4, C_p}`` and the reduction maps between them.

    Returns ``(gradings, arrows)`` with arrows ``(i, j, GroupHom)``.  The
    natural grading sits apart: no automorphism moves it into the maximal
    family, as Hom(C_p, Z) vanishes and every automorphism keeps the
    radical.
    """
    m = kcp(p)
    Zg = m.grading("maximal")
    gradings = [Zg]
    arrows = []
    for n in moduli:
        gradings.append(maximal_quotient(m, n))
        arrows.append((0, len(gradings) - 1, reduction(Zg.group, n)))
    gradings.append(m.grading("natural"))
    return gradings, arrows


# --- Kronecker -------------------------------------------------------------------------


def kronecker_quotients(max_n=6, V=None):
    """Quotients of V along ``Z -> C_n`` for ``n = 1 .. max_n``."""
    V = V or load("kronecker").grading("V")
    return [quotient_grading(V, reduction(V.group, n), name="V/%d" % n) for n in range(1, max_n + 1)]


__all__ = [
    "NAMES",
    "bq",
    "bq_functor",
    "example_corpus",
    "kcp",
    "kcp_family",
    "kronecker_quotients",
    "load",
    "maximal_quotient",
    "raw",
]
