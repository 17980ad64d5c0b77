import pytest

from gradcat import corpus, grpkit
from gradcat.errors import InfiniteGroup
from gradcat.grading import Grading, connectors, quotient_grading, reduction
from gradcat.grpkit import GroupHom
from gradcat.linrep import LinComb, functor_from_arrow_images, identity_functor
from gradcat.morph import verify_grading_morphism
from gradcat.smash import (
    SmashCategory,
    build_smash,
    check_smash_functor,
    compose_covering_morphisms,
    covering_morphism_from_grading_morphism,
    galois_report,
    group_action,
    identity_covering,
    lambda_map,
    verify_covering,
)


def trivial_smash(name="a3"):
    return build_smash(Grading.trivial(corpus.load(name).category))


def dual_smash():
    return build_smash(corpus.load("dual_numbers").grading("C2"))


def roundtrip_smash():
    return build_smash(corpus.load("roundtrip").grading("C2"))


def g(G, k=1):
    return G.element(torsion=(k,))


class TestBuild:
    @pytest.mark.parametrize("name", ["a3", "square", "bq", "kcp3"])
    def test_trivial_group(self, name):
        cat = corpus.load(name).category
        S = build_smash(Grading.trivial(cat))
        assert len(S.objects) == len(cat.objects)
        for (b, s), (b2, t) in S.pairs():
            assert S.hom_dim((b, s), (b2, t)) == cat.hom_dim(b, b2)

    def test_dual_numbers(self):
        S = dual_smash()
        assert len(S.objects) == 2 and S.total_dim() == 4
        for o1, o2 in S.pairs():
            assert S.hom_dim(o1, o2) == 1

    def test_roundtrip(self):
        S = roundtrip_smash()
        G = S.group
        assert len(S.objects) == 4 and S.total_dim() == 8
        # the object (b, s) maps to (b', t) through the component of degree s - t
        assert S.hom_dim(("x", G.zero), ("y", g(G))) == 1
        assert S.hom_dim(("x", G.zero), ("y", G.zero)) == 0

    def test_dimension_total(self):
        for name, X in (("dual", corpus.load("dual_numbers").grading("C2")), ("rt", corpus.load("roundtrip").grading("C2"))):
            S = build_smash(X)
            assert S.total_dim() == X.group.order * X.category.total_dim()

    def test_fibre_sums(self):
        S = roundtrip_smash()
        cat = S.base
        for o in S.objects:
            for b2 in cat.objects:
                assert sum(S.hom_dim(o, (b2, t)) for t in S.elements) == cat.hom_dim(o[0], b2)

    def test_infinite_group(self):
        with pytest.raises(InfiniteGroup):
            build_smash(corpus.load("kronecker").grading("V"))

    def test_composition_projects(self):
        S = roundtrip_smash()
        for o1, o2 in S.pairs():
            for o3 in S.objects:
                for i in range(S.hom_dim(o2, o3)):
                    for j in range(S.hom_dim(o1, o2)):
                        f, h = S.basis_morphism(o2, o3, i), S.basis_morphism(o1, o2, j)
                        assert S.project(S.compose(f, h)) == S.base.compose(S.project(f), S.project(h))


class TestCovering:
    @pytest.mark.parametrize("S", [trivial_smash(), dual_smash(), roundtrip_smash()], ids=["trivial", "dual", "roundtrip"])
    def test_stars_and_galois(self, S):
        assert verify_covering(S).ok
        rep = galois_report(S)
        assert rep.free and rep.fiber_transitive and rep.functorial

    def test_deleted_morphism_detected(self):
        S = roundtrip_smash()
        homs = dict(S.homs)
        G = S.group
        key = (("x", G.zero), ("y", g(G)))
        homs[key] = ()
        broken = SmashCategory(S.grading, S.elements, S.objects, homs)
        rep = verify_covering(broken)
        assert not rep.ok
        assert rep.mismatches[0].obj in key


class TestDeckAction:
    def test_identity_element(self):
        S = roundtrip_smash()
        F = group_action(S, S.group.zero)
        assert all(F.obj_map[o] == o for o in S.objects)

    def test_dual_numbers_swap(self):
        S = dual_smash()
        F = check_smash_functor(group_action(S, g(S.group)))
        assert {F.obj_map[o] for o in S.objects} == set(S.objects)
        assert all(F.obj_map[o] != o for o in S.objects)

    def test_roundtrip_orbits(self):
        S = roundtrip_smash()
        F = group_action(S, g(S.group))
        orbits = {frozenset((o, F.obj_map[o])) for o in S.objects}
        assert len(orbits) == 2 and all(len(o) == 2 for o in orbits)

    def test_action_is_a_homomorphism(self):
        X = quotient_grading(corpus.load("kronecker").grading("V"), reduction(grpkit.Z(), 3))
        S = build_smash(X)
        for u in S.elements:
            for v in S.elements:
                lhs = group_action(S, u).after(group_action(S, v))
                rhs = group_action(S, u + v)
                assert lhs.obj_map == rhs.obj_map


def roundtrip_pair():
    m = corpus.load("roundtrip")
    X = m.grading("C2")
    G = X.group
    Y = Grading.from_arrow_degrees(m.category, G, {"alpha": G.zero, "beta": g(G)})
    return m, X, Y


class TestCoveringMorphisms:
    def test_from_grading_morphism(self):
        m, X, Y = roundtrip_pair()
        J = identity_functor(m.category)
        mu = GroupHom.identity(X.group)
        verify_grading_morphism(X, Y, mu, J, "x")
        M = covering_morphism_from_grading_morphism(X, Y, mu, J, connectors(X, "x"))
        res = lambda_map(M)
        assert res.eq1
        assert res.lam.key() == mu.key() == res.mu_J.key()
        assert M.shifts["x"].is_zero()

    def test_kronecker_swap(self):
        m = corpus.load("kronecker")
        V2 = quotient_grading(m.grading("V"), reduction(grpkit.Z(), 2))
        mu = GroupHom.identity(V2.group)  # inversion is the identity on C2
        J = m.functor("swap")
        verify_grading_morphism(V2, V2, mu, J, "x")
        M = covering_morphism_from_grading_morphism(V2, V2, mu, J, connectors(V2, "x"))
        assert lambda_map(M).eq1

    def test_lambda_functorial(self):
        m, X, Y = roundtrip_pair()
        cat = m.category
        J1 = identity_functor(cat)
        mu = GroupHom.identity(X.group)
        S, T = build_smash(X), build_smash(Y)
        M1 = covering_morphism_from_grading_morphism(X, Y, mu, J1, connectors(X, "x"), S, T)
        J2 = functor_from_arrow_images(cat, cat, {"alpha": LinComb.of(cat.quiver, (3, ["alpha"]))})
        verify_grading_morphism(Y, Y, mu, J2, "x")
        M2 = covering_morphism_from_grading_morphism(Y, Y, mu, J2, connectors(Y, "x"), T, T)
        C = compose_covering_morphisms(M2, M1)
        l1, l2, lc = lambda_map(M1).lam, lambda_map(M2).lam, lambda_map(C).lam
        assert lc.key() == l2.compose(l1).key()

    def test_identity_covering(self):
        S = roundtrip_smash()
        I = identity_covering(S)
        assert lambda_map(I).lam.key() == GroupHom.identity(S.group).key()

    def test_non_composable(self):
        _, X, Y = roundtrip_pair()
        S = build_smash(X)
        with pytest.raises(ValueError):
            compose_covering_morphisms(identity_covering(S), identity_covering(build_smash(Y)))

    def test_json(self):
        doc = roundtrip_smash().to_json()
        assert len(doc["objects"]) == 4 and doc["total_dim"] == 8
