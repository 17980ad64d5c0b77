import random

import pytest
from hypothesis import given, settings, strategies as st

from gradcat import grpkit
from gradcat.grpkit import AbelianGroup, GroupHom, GroupPresentation, Z, cyclic

from oracles import invariant_factors


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def check_snf(A):
    U, D, V = grpkit.smith_normal_form(A)
    assert matmul(matmul(U, A), V) == D
    m, n = len(A), len(A[0])
    for i in range(m):
        for j in range(n):
            if i != j:
                assert D[i][j] == 0
    diag = [D[i][i] for i in range(min(m, n))]
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert diag[: len(nz)] == nz, "zeros must come last"
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    from oracles import det

    if m == n:
        assert abs(det(U)) == 1 and abs(det(V)) == 1
    return diag


class TestSmithNormalForm:
    def test_identity(self):
        U, D, V = grpkit.smith_normal_form([[1, 0], [0, 1]])
        assert D == [[1, 0], [0, 1]]
        assert U == [[1, 0], [0, 1]] and V == [[1, 0], [0, 1]]

    def test_small_example(self):
        assert grpkit.smith_normal_form([[2, 4], [6, 8]])[1] == [[2, 0], [0, 4]]

    def test_zero_matrix(self):
        U, D, V = grpkit.smith_normal_form([[0, 0, 0], [0, 0, 0]])
        assert D == [[0, 0, 0], [0, 0, 0]]
        assert U == [[1, 0], [0, 1]]
        assert V == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]

    def test_against_determinantal_divisors(self):
        rng = random.Random(7)
        for _ in range(60):
            m, n = rng.randint(1, 4), rng.randint(1, 4)
            A = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
            assert check_snf(A) == invariant_factors(A)

    def test_random_reconstruction(self):
        rng = random.Random(2024)
        for _ in range(200):
            m, n = rng.randint(1, 5), rng.randint(1, 5)
            check_snf([[rng.randint(-20, 20) for _ in range(n)] for _ in range(m)])

    def test_deterministic(self):
        A = [[4, 6, 2], [6, 9, 3], [-2, 5, 7]]
        assert grpkit.smith_normal_form(A) == grpkit.smith_normal_form(A)


class TestAbelianGroup:
    def test_canonical_form(self):
        assert AbelianGroup.from_orders(0, (2, 3)) == cyclic(6)
        assert AbelianGroup.from_orders(1, (4, 6)) == AbelianGroup(1, (2, 12))
        assert AbelianGroup.from_orders(0, (1, 0)) == Z()

    def test_rejects_bad_chain(self):
        with pytest.raises(ValueError):
            AbelianGroup(0, (3, 2))
        with pytest.raises(ValueError):
            AbelianGroup(0, (1,))

    def test_elements_of_finite_group(self):
        G = AbelianGroup(0, (2, 2))
        els = G.elements()
        assert len(els) == G.order == 4
        assert len({e.key() for e in els}) == 4

    def test_torsion_residues_normalized(self):
        G = cyclic(5)
        assert G.element(torsion=(7,)) == G.element(torsion=(2,))
        assert (G.element(torsion=(3,)) * 4).coords() == [2]

    def test_element_order(self):
        G = AbelianGroup(0, (2, 6))
        assert G.element(torsion=(1, 3)).order() == 2
        assert Z().element(free=(3,)).order() is None


class TestQuotients:
    def test_full(self):
        G = Z()
        r = grpkit.subgroup_quotient(G, [G.element((2,)), G.element((3,))])
        assert r.is_full and r.quotient.is_trivial

    def test_index_two(self):
        G = Z()
        r = grpkit.subgroup_quotient(G, [G.element((2,))])
        assert not r.is_full and r.quotient == cyclic(2)

    def test_torsion_missed(self):
        G = AbelianGroup(1, (2,))
        r = grpkit.subgroup_quotient(G, [G.element((1,), (0,))])
        assert not r.is_full and r.quotient == cyclic(2)

    @given(st.lists(st.integers(-30, 30), min_size=1, max_size=4))
    def test_subgroup_of_z_matches_gcd(self, xs):
        import math

        G = Z()
        r = grpkit.subgroup_quotient(G, [G.element((x,)) for x in xs])
        g = 0
        for x in xs:
            g = math.gcd(g, x)
        if g == 0:
            assert r.quotient == Z()
        elif g == 1:
            assert r.is_full
        else:
            assert r.quotient == cyclic(g)


class TestHoms:
    def test_hom_cyclic_to_z_is_trivial(self):
        for p in (2, 3, 5):
            assert grpkit.hom_space(cyclic(p), Z()).is_trivial()

    def test_hom_c4_c6(self):
        hs = grpkit.hom_space(cyclic(4), cyclic(6))
        assert hs.group == cyclic(2)
        homs = hs.homs()
        assert sorted(h(cyclic(4).generators()[0]).coords()[0] for h in homs) == [0, 3]

    def test_hom_z_z(self):
        assert grpkit.hom_space(Z(), Z()).group == Z()

    def test_ill_defined_hom_rejected(self):
        with pytest.raises(ValueError):
            GroupHom(cyclic(2), Z(), (Z().element((1,)),))

    def test_composition(self):
        G = cyclic(6)
        f = GroupHom(G, G, (G.element(torsion=(5,)),))
        assert f.compose(f).key() == GroupHom.identity(G).key()

    def test_kernel_and_image(self):
        G = Z()
        f = GroupHom(G, cyclic(4), (cyclic(4).element(torsion=(2,)),))
        assert grpkit.image(f).group == cyclic(2)
        assert grpkit.kernel(f).group == Z()


class TestPresentations:
    def test_free_cyclic(self):
        assert grpkit.abelianize(GroupPresentation(("t",), ())).group == Z()

    def test_commutator_and_power(self):
        p = GroupPresentation(("a", "b"), ((("a", 1), ("b", 1), ("a", -1), ("b", -1)), (("a", 1),) * 3))
        assert grpkit.abelianize(p).group == AbelianGroup(1, (3,))

    def test_killed_generator(self):
        assert grpkit.abelianize(GroupPresentation(("g",), ((("g", 1),),))).group.is_trivial

    def test_free_reduction(self):
        assert grpkit.free_reduce([("a", 1), ("b", 1), ("b", -1), ("a", -1), ("c", 1)]) == (("c", 1),)

    def test_projection_of_words(self):
        ab = grpkit.abelianize(GroupPresentation(("a", "b"), ((("a", 1), ("b", -1)),)))
        assert ab.project([("a", 1), ("b", 1)]) == ab.project([("a", 1), ("a", 1)])

    def test_json_round_trip(self):
        p = GroupPresentation(("a", "b"), ((("a", 1), ("b", -1)),))
        assert GroupPresentation.from_json(p.to_json()) == p


class TestLimits:
    def test_reductions_and_a_loose_node(self):
        Zg = Z()
        red = lambda n: GroupHom(Zg, cyclic(n), (cyclic(n).element(torsion=(1,)),))
        lim = grpkit.diagram_limit([Zg, cyclic(2), cyclic(4), cyclic(3)], [(0, 1, red(2)), (0, 2, red(4))])
        assert lim.group == AbelianGroup(1, (3,))

    def test_equalizer(self):
        Zg = Z()
        double = GroupHom(Zg, Zg, (Zg.element((2,)),))
        lim = grpkit.diagram_limit([Zg, Zg], [(0, 1, double), (0, 1, GroupHom.identity(Zg))])
        assert lim.group.is_trivial

    def test_mismatched_arrow(self):
        with pytest.raises(ValueError):
            grpkit.diagram_limit([Z(), cyclic(2)], [(1, 0, GroupHom.identity(Z()))])


groups = st.builds(
    lambda r, ts: AbelianGroup.from_orders(r, ts),
    st.integers(0, 2),
    st.lists(st.integers(2, 6), max_size=2),
)


@st.composite
def group_and_elements(draw):
    G = draw(groups)
    def el():
        free = tuple(draw(st.integers(-9, 9)) for _ in range(G.rank))
        tor = tuple(draw(st.integers(0, d - 1)) for d in G.torsion)
        return G.element(free, tor)
    return G, el(), el(), el()


class TestGroupLaws:
    @settings(max_examples=60)
    @given(group_and_elements())
    def test_abelian_group_axioms(self, data):
        G, a, b, c = data
        assert a + b == b + a
        assert (a + b) + c == a + (b + c)
        assert a + G.zero == a
        assert (a - a).is_zero()

    @settings(max_examples=40)
    @given(group_and_elements())
    def test_quotient_by_generators_is_trivial(self, data):
        G = data[0]
        assert grpkit.subgroup_quotient(G, G.generators()).is_full

    @settings(max_examples=40)
    @given(group_and_elements())
    def test_json_round_trip(self, data):
        G, a, _, _ = data
        assert AbelianGroup.from_json(G.to_json()) == G
        assert grpkit.element_from_json(G, a.to_json()) == a
