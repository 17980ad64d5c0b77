"""Smash products of graded categories by finite groups and their coverings.

Objects of ``B # X`` are pairs ``(b, s)`` with ``s`` in ``Gamma(X)``.  The
morphisms ``(b, s) -> (b', t)`` are the component of ``hom(b, b')`` of degree
``s - t``; it is stored as the list of homogeneous basis indices with that
degree, so a smash morphism is a coefficient vector over those indices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple

from . import scalars
from .errors import DiagramFails, InfiniteGroup, InvalidGrading, NotEquivariant, NotFunctorial
from .grading import ConnectorFamily, Grading, map_walk, require_valid, walk_degree
from .grpkit import GroupElement, GroupHom
from .linrep import Functor, Morphism


class SmashMorphism(NamedTuple):
    source: tuple  # (b, s)
    target: tuple
    coords: tuple

    def is_zero(self):
        return not any(self.coords)


def _label(obj):
    b, s = obj
    return "(%s,%s)" % (b, s)


@dataclass(eq=False)
class SmashCategory:
    grading: Grading
    elements: list
    objects: list
    homs: dict  # (object, object) -> tuple of homogeneous basis indices

    @property
    def base(self):
        return self.grading.category

    @property
    def group(self):
        return self.grading.group

    def hom_dim(self, o1, o2):
        return len(self.homs[o1, o2])

    def pairs(self):
        return [(a, b) for a in self.objects for b in self.objects]

    def total_dim(self):
        return sum(len(v) for v in self.homs.values())

    def basis_morphism(self, o1, o2, k):
        coords = [self.base.field.zero] * self.hom_dim(o1, o2)
        coords[k] = self.base.field.one
        return SmashMorphism(o1, o2, tuple(coords))

    def project(self, f: SmashMorphism) -> Morphism:
        """The projection functor ``F_X`` on a morphism."""
        (b, _), (b2, _) = f.source, f.target
        X = self.grading
        acc = self.base.zero(b, b2)
        for c, i in zip(f.coords, self.homs[f.source, f.target]):
            if c:
                acc = acc + X.basis_morphism(b, b2, i).scale(c)
        return acc

    def lift(self, o1, o2, m: Morphism):
        """Coordinates of ``m`` in ``hom(o1, o2)``; None if ``m`` leaves that component."""
        X = self.grading
        h = X.homogeneous_coords(m)
        idx = self.homs[o1, o2]
        if any(c for i, c in enumerate(h) if i not in idx):
            return None
        return SmashMorphism(o1, o2, tuple(h[i] for i in idx))

    def identity(self, o):
        b = o[0]
        f = self.lift(o, o, self.base.identity(b))
        if f is None:
            raise InvalidGrading("identity of %s is not of degree 0" % b)
        return f

    def compose(self, f: SmashMorphism, g: SmashMorphism) -> SmashMorphism:
        """``f`` after ``g``."""
        if g.target != f.source:
            raise ValueError("smash morphisms do not compose")
        m = self.base.compose(self.project(f), self.project(g))
        out = self.lift(g.source, f.target, m)
        if out is None:
            raise InvalidGrading("composite leaves its component; the grading is not valid")
        return out

    def to_json(self):
        X = self.grading
        homs = []
        for (o1, o2), idx in self.homs.items():
            if not idx:
                continue
            homs.append(
                {
                    "source": _label(o1),
                    "target": _label(o2),
                    "dim": len(idx),
                    "projection": [[str(c) for c in X.base_change[o1[0], o2[0]][i]] for i in idx],
                }
            )
        return {
            "group": self.group.to_json(),
            "objects": [_label(o) for o in self.objects],
            "base_dims": {"%s->%s" % k: self.base.hom_dim(*k) for k in self.base.pairs()},
            "homs": homs,
            "total_dim": self.total_dim(),
        }


def build_smash(X: Grading) -> SmashCategory:
    """``B # X`` for a valid grading by a finite group."""
    if not X.group.is_finite:
        raise InfiniteGroup("structural group %s is infinite; push the grading to a finite quotient first" % X.group)
    require_valid(X)
    cat = X.category
    elements = X.group.elements()
    objects = [(b, s) for b in cat.objects for s in elements]
    homs = {}
    for o1, o2 in itertools.product(objects, repeat=2):
        (b, s), (b2, t) = o1, o2
        d = s - t
        homs[o1, o2] = tuple(i for i, e in enumerate(X.degrees[b, b2]) if e == d)
    return SmashCategory(X, elements, objects, homs)


# --- covering checks ------------------------------------------------------------------


class StarMismatch(NamedTuple):
    obj: tuple
    other: str
    direction: str
    expected: int
    got: int


@dataclass
class CoveringReport:
    ok: bool
    mismatches: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _star_rank(S, vectors, n):
    return scalars.rank([list(v.coords) for v in vectors], n) if vectors else 0


def verify_covering(S: SmashCategory) -> CoveringReport:
    """Does ``F_X`` induce isomorphisms of stars?

    Checked one base object at a time: for every ``(b, s)`` and ``b'`` the
    projection of ``sum_t hom((b,s),(b',t))`` must be an isomorphism onto
    ``hom(b, b')``, and likewise for incoming morphisms.
    """
    base = S.base
    bad = []
    for o in S.objects:
        b = o[0]
        for b2 in base.objects:
            for direction in ("out", "in"):
                n = base.hom_dim(b, b2) if direction == "out" else base.hom_dim(b2, b)
                vecs = []
                count = 0
                for o2 in S.objects:
                    if o2[0] != b2:
                        continue
                    key = (o, o2) if direction == "out" else (o2, o)
                    for k in range(S.hom_dim(*key)):
                        vecs.append(S.project(S.basis_morphism(*key, k)))
                        count += 1
                r = _star_rank(S, vecs, n)
                if count != n or r != n:
                    bad.append(StarMismatch(o, b2, direction, n, r if count == n else count))
    return CoveringReport(not bad, bad)


# --- functors between smash categories ------------------------------------------------------


@dataclass(eq=False)
class SmashFunctor:
    source: SmashCategory
    target: SmashCategory
    obj_map: dict
    matrices: dict  # (o1, o2) -> matrix from hom(o1, o2) to hom(obj_map o1, obj_map o2)

    def __call__(self, f: SmashMorphism) -> SmashMorphism:
        m = self.matrices[f.source, f.target]
        return SmashMorphism(self.obj_map[f.source], self.obj_map[f.target], tuple(scalars.mat_vec(m, list(f.coords))))

    def after(self, other: "SmashFunctor") -> "SmashFunctor":
        obj = {o: self.obj_map[other.obj_map[o]] for o in other.source.objects}
        mats = {}
        for (o1, o2), m in other.matrices.items():
            outer = self.matrices[other.obj_map[o1], other.obj_map[o2]]
            mats[o1, o2] = _mul(outer, m, other.source.hom_dim(o1, o2))
        return SmashFunctor(other.source, self.target, obj, mats)


def _mul(a, b, ncols):
    if not a:
        return []
    if not b:
        return [[0] * ncols for _ in a]
    return scalars.mat_mul(a, b)


def check_smash_functor(F: SmashFunctor):
    """Raise NotFunctorial unless identities and composition are respected."""
    S, T = F.source, F.target
    for o in S.objects:
        if F(S.identity(o)) != T.identity(F.obj_map[o]):
            raise NotFunctorial("identity of %s is not preserved" % _label(o), witness=o)
    for o1, o2, o3 in itertools.product(S.objects, repeat=3):
        n12, n23 = S.hom_dim(o1, o2), S.hom_dim(o2, o3)
        if not n12 or not n23:
            continue
        for i in range(n23):
            f = S.basis_morphism(o2, o3, i)
            for j in range(n12):
                g = S.basis_morphism(o1, o2, j)
                lhs = F(S.compose(f, g))
                rhs = T.compose(F(f), F(g))
                if lhs.source != rhs.source or lhs.target != rhs.target or list(lhs.coords) != list(rhs.coords):
                    raise NotFunctorial(
                        "composition %s -> %s -> %s is not preserved" % (_label(o1), _label(o2), _label(o3)),
                        witness=(f, g),
                    )
    return F


def group_action(S: SmashCategory, u: GroupElement) -> SmashFunctor:
    """Deck transformation ``(b, t) -> (b, u + t)``, identity on coordinates."""
    obj = {o: (o[0], u + o[1]) for o in S.objects}
    mats = {}
    for o1, o2 in S.pairs():
        n = S.hom_dim(o1, o2)
        if S.homs[obj[o1], obj[o2]] != S.homs[o1, o2]:
            raise AssertionError("translation changes a component")
        mats[o1, o2] = scalars.identity_matrix(n, S.base.field.one)
    return SmashFunctor(S, S, obj, mats)


class GaloisReport(NamedTuple):
    free: bool
    fiber_transitive: bool
    functorial: bool
    witness: object = None

    @property
    def ok(self):
        return self.free and self.fiber_transitive and self.functorial


def is_free_action(S: SmashCategory) -> bool:
    for u in S.elements:
        if u.is_zero():
            continue
        F = group_action(S, u)
        if any(F.obj_map[o] == o for o in S.objects):
            return False
    return True


def is_fiber_transitive(S: SmashCategory) -> bool:
    for b in S.base.objects:
        fiber = {o for o in S.objects if o[0] == b}
        start = (b, S.group.zero)
        orbit = {group_action(S, u).obj_map[start] for u in S.elements}
        if orbit != fiber:
            return False
    return True


def galois_report(S: SmashCategory) -> GaloisReport:
    """Deck group acts by functors, freely, and transitively on every fibre."""
    try:
        for u in S.elements:
            check_smash_functor(group_action(S, u))
        functorial = True
        witness = None
    except NotFunctorial as exc:
        functorial = False
        witness = exc.witness
    return GaloisReport(is_free_action(S), is_fiber_transitive(S), functorial, witness)


# --- covering morphisms --------------------------------------------------------------------------


@dataclass(eq=False)
class CoveringMorphism:
    """A pair ``(H, J)`` with ``F_Y H == J F_X``; ``H(b, s) == (b, H_b(s))``."""

    source: SmashCategory
    target: SmashCategory
    J: Functor
    H: SmashFunctor
    mu: GroupHom | None = None
    shifts: dict | None = None

    def H_b(self, b, s):
        return self.H.obj_map[b, s][1]


def _covering_functor(S, T, J, obj_map):
    mats = {}
    for o1, o2 in S.pairs():
        n = S.hom_dim(o1, o2)
        t1, t2 = obj_map[o1], obj_map[o2]
        cols = []
        for k in range(n):
            f = S.basis_morphism(o1, o2, k)
            img = T.lift(t1, t2, J(S.project(f)))
            if img is None:
                raise DiagramFails(
                    "J sends a basis morphism %s -> %s outside %s -> %s" % (_label(o1), _label(o2), _label(t1), _label(t2)),
                    witness=f,
                )
            cols.append(list(img.coords))
        mats[o1, o2] = scalars.transpose(cols, T.hom_dim(t1, t2))
    return SmashFunctor(S, T, obj_map, mats)


def verify_covering_morphism(M: CoveringMorphism):
    """Exhaustive check of ``F_Y H == J F_X`` plus functoriality of ``H``."""
    S, T, H, J = M.source, M.target, M.H, M.J
    for b in S.base.objects:
        fiber = [H.obj_map[o] for o in S.objects if o[0] == b]
        if any(o[0] != b for o in fiber) or len(set(fiber)) != len(fiber) or len(fiber) != len(T.elements):
            raise DiagramFails("H is not a bijection on the fibre over %s" % b, witness=b)
    for o1, o2 in S.pairs():
        for k in range(S.hom_dim(o1, o2)):
            f = S.basis_morphism(o1, o2, k)
            if T.project(H(f)) != J(S.project(f)):
                raise DiagramFails("F_Y H and J F_X differ on %s -> %s" % (_label(o1), _label(o2)), witness=f)
    check_smash_functor(H)
    return M


def covering_morphism_from_grading_morphism(X: Grading, Y: Grading, mu: GroupHom, J: Functor, conn: ConnectorFamily, S=None, T=None):
    """The ``J``-morphism ``B#X -> B#Y`` built from a morphism of gradings.

    ``h_b = -deg_Y(J v_b)`` for the connectors ``v_b`` and
    ``H(b, s) = (b, mu(s) + h_b)``.
    """
    for w in conn.walks.values():
        if not walk_degree(X, w).is_zero():
            raise ValueError("connectors must have trivial degree")
    S = S or build_smash(X)
    T = T or build_smash(Y)
    shifts = {b: -walk_degree(Y, map_walk(J, conn[b], X, Y)) for b in X.category.objects}
    obj = {(b, s): (b, mu(s) + shifts[b]) for b, s in S.objects}
    H = _covering_functor(S, T, J, obj)
    return verify_covering_morphism(CoveringMorphism(S, T, J, H, mu, shifts))


def normalized(M: CoveringMorphism, b0) -> CoveringMorphism:
    """Compose with the deck transformation making ``H(b0, 0) == (b0, 0)``."""
    c = M.H_b(b0, M.source.group.zero)
    deck = group_action(M.target, -c)
    return CoveringMorphism(M.source, M.target, M.J, deck.after(M.H), M.mu, M.shifts)


def _lambda_raw(M: CoveringMorphism) -> GroupHom:
    S, T = M.source, M.target
    b0 = S.base.objects[0]
    zero = S.group.zero
    images = tuple(M.H_b(b0, g) - M.H_b(b0, zero) for g in S.group.generators())
    try:
        lam = GroupHom(S.group, T.group, images)
    except ValueError as exc:
        raise NotEquivariant("translations do not define a group map: %s" % exc) from exc
    for u in S.elements:
        lu = lam(u)
        for b, s in S.objects:
            if M.H_b(b, u + s) != lu + M.H_b(b, s):
                raise NotEquivariant("H does not intertwine the deck action at (%s,%s)" % (b, s), witness=(u, b, s))
        lhs = group_action(T, lu).after(M.H)
        rhs = M.H.after(group_action(S, u))
        for key, m in lhs.matrices.items():
            if lhs.obj_map[key[0]] != rhs.obj_map[key[0]] or m != rhs.matrices[key]:
                raise NotEquivariant("H f and lambda(f) H differ on morphisms", witness=(u, key))
    return lam


class LambdaResult(NamedTuple):
    lam: GroupHom
    mu_J: GroupHom
    eq1: bool


def lambda_map(M: CoveringMorphism, b0=None) -> LambdaResult:
    """The group map with ``H f = lambda(f) H`` for deck transformations ``f``.

    Also recomputes ``mu_J`` from the normalized morphism and checks that it
    equals ``lambda`` conjugated by ``H_{b0}(0)`` (trivially so here, the
    groups being abelian).
    """
    b0 = b0 or M.source.base.objects[0]
    lam = _lambda_raw(M)
    N = verify_covering_morphism(normalized(M, b0))
    mu_J = _lambda_raw(N)
    c = M.H_b(b0, M.source.group.zero)
    conj = GroupHom(lam.source, lam.target, tuple(-c + im + c for im in lam.images))
    eq1 = conj.key() == mu_J.key()
    if not eq1:
        raise NotEquivariant("mu_J differs from the conjugate of lambda")
    return LambdaResult(lam, mu_J, eq1)


def compose_covering_morphisms(M2: CoveringMorphism, M1: CoveringMorphism) -> CoveringMorphism:
    """``M2 o M1`` (``M1: B#X -> B#Y``, ``M2: B#Y -> B#Z``)."""
    if M1.target is not M2.source:
        raise ValueError("covering morphisms do not compose")
    H = M2.H.after(M1.H)
    J = M2.J.after(M1.J)
    mu = M2.mu.compose(M1.mu) if M1.mu is not None and M2.mu is not None else None
    return verify_covering_morphism(CoveringMorphism(M1.source, M2.target, J, H, mu))


def identity_covering(S: SmashCategory) -> CoveringMorphism:
    from .linrep import identity_functor

    J = identity_functor(S.base)
    H = _covering_functor(S, S, J, {o: o for o in S.objects})
    return verify_covering_morphism(CoveringMorphism(S, S, J, H, GroupHom.identity(S.group), {}))
