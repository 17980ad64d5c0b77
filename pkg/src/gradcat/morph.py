"""Morphisms of gradings: verification, enumeration in the thin case, fixed
subgroups, universality checks against finite families and coherent families.

A morphism of gradings ``X -> Y`` is a group map ``mu`` together with an
identity-on-objects homogeneous isomorphism ``J`` such that
``mu(deg_X w) == deg_Y(J w)`` for every closed homogeneous walk ``w``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from . import grpkit, scalars
from .errors import (
    GroupTooLarge,
    NotConstricted,
    NotFunctorial,
    NotHomogeneous,
    NotHomogeneousWitness,
    NotThin,
    SquareFails,
)
from .grading import (
    Grading,
    Walk,
    homogeneity_violation,
    is_connected_grading,
    map_walk,
    require_valid,
    spanning_data,
    validate_grading,
    walk_degree,
)
from .grpkit import AbelianGroup, GroupHom
from .linrep import Functor, build_functor, identity_functor
from .schur import is_constricted


@dataclass(eq=False)
class GradingMorphism:
    source: Grading
    target: Grading
    mu: GroupHom
    witness: Functor

    def then(self, other: "GradingMorphism") -> "GradingMorphism":
        """``other`` after ``self`` (``mu = other.mu o self.mu``)."""
        return GradingMorphism(self.source, other.target, other.mu.compose(self.mu), other.witness.after(self.witness))


def generator_walks(X: Grading, b0):
    """Closed walks ``v_y^-1 (f, +1) v_x`` for every non-identity basis vector ``f``.

    ``v`` are the spanning-tree walks; these walks generate all closed
    homogeneous walks at ``b0`` up to degree.
    """
    sd = spanning_data(X, b0)
    return [(ref, sd.cycle(ref, m)) for ref, m, _ in sd.edges]


def _check_connected(X, b0, role):
    require_valid(X)
    if not is_connected_grading(X, b0):
        raise ValueError("%s grading is not connected" % role)


def verify_grading_morphism(X: Grading, Y: Grading, mu: GroupHom, J: Functor, b0) -> GradingMorphism:
    """Accept ``(mu, J)`` as a morphism ``X -> Y`` or raise with a witness."""
    if mu.source != X.group or mu.target != Y.group:
        raise ValueError("mu must map %s to %s" % (X.group, Y.group))
    if not (J.source.same_presentation(X.category) and J.target.same_presentation(Y.category)):
        raise ValueError("witness functor must go between the graded categories")
    if not J.is_isomorphism():
        raise NotHomogeneousWitness("witness functor is not an isomorphism")
    bad = homogeneity_violation(J, X, Y)
    if bad is not None:
        raise NotHomogeneousWitness("J does not map the component of %s->%s[%d] into one component" % bad, witness=bad)
    for ref, w in generator_walks(X, b0):
        lhs = mu(walk_degree(X, w))
        rhs = walk_degree(Y, map_walk(J, w, X, Y))
        if lhs != rhs:
            raise SquareFails(
                "walk through %s->%s[%d]: mu(deg) = %s but deg of the image is %s" % (ref + (lhs, rhs)), witness=w
            )
    return GradingMorphism(X, Y, mu, J)


def induced_mu(X: Grading, Y: Grading, J: Functor, b0):
    """The only group map that can pair with ``J``, or None if there is none.

    Needs ``X`` connected: its closed-walk degrees generate ``Gamma(X)``.
    """
    walks = [w for _, w in generator_walks(X, b0)]
    try:
        dx = [walk_degree(X, w) for w in walks]
        dy = [walk_degree(Y, map_walk(J, w, X, Y)) for w in walks]
    except NotHomogeneous:
        return None
    G = X.group
    # relations among the dx must hold among the dy
    M = [d.coords() for d in dx] + G.relation_rows()
    for z in grpkit._left_kernel(M, G.ngens):
        acc = Y.group.zero
        for c, d in zip(z, dy):
            acc = acc + d * c
        if not acc.is_zero():
            return None
    images = []
    for g in G.generators():
        c = grpkit.express(G, dx, g)
        if c is None:
            return None
        acc = Y.group.zero
        for ci, d in zip(c, dy):
            acc = acc + d * ci
        images.append(acc)
    try:
        return GroupHom(G, Y.group, tuple(images))
    except ValueError:
        return None


# --- thin enumeration -------------------------------------------------------------


def _power(x, e, one):
    if e < 0:
        x, e = one / x, -e
    out = one
    while e:
        if e & 1:
            out = out * x
        x = x * x
        e >>= 1
    return out


def _iroot(n, d):
    """Exact nonnegative integer d-th root of ``n`` or None."""
    lo, hi = 0, 1
    while hi**d <= n:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**d < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**d == n else None


def _root(s, d, fld):
    """Some ``r`` in the field with ``r**d == s`` (s nonzero), or None."""
    if d == 1:
        return s
    if fld.char:
        for v in range(1, fld.char):
            r = fld(v)
            if _power(r, d, fld.one) == s:
                return r
        return None
    s = Fraction(s)
    sign = 1
    if s < 0:
        if d % 2 == 0:
            return None
        sign = -1
    num, den = _iroot(abs(s.numerator), d), _iroot(s.denominator, d)
    if num is None or den is None:
        return None
    return Fraction(sign * num, den)


def solve_binomial(rows, consts, nvars, fld):
    """Nonzero ``lam`` with ``prod_k lam_k**rows[i][k] == consts[i]`` for all i.

    Solved exactly through the Smith form of the exponent matrix: after a
    unimodular change of unknowns each equation involves a single unknown.
    Free unknowns are set to 1.  Returns None if there is no solution.
    """
    if nvars == 0:
        return [] if all(c == 1 for c in consts) else None
    if not rows:
        return [fld.one] * nvars
    U, D, V = grpkit.smith_normal_form(rows, nvars)
    one = fld.one
    y = [one] * nvars
    for i in range(len(rows)):
        s = one
        for j, u in enumerate(U[i]):
            if u:
                s = s * _power(consts[j], u, one)
        d = D[i][i] if i < nvars else 0
        if d == 0:
            if s != one:
                return None
            continue
        r = _root(s, d, fld)
        if r is None:
            return None
        y[i] = r
    lam = []
    for k in range(nvars):
        v = one
        for i in range(nvars):
            if V[k][i]:
                v = v * _power(y[i], V[k][i], one)
        lam.append(v)
    return lam


def _line(Y: Grading, m):
    """``(i, c)`` with ``m == c * Y-basis[i]``, ``None`` for zero; ``False`` if spread."""
    coords = Y.homogeneous_coords(m)
    nz = [(i, c) for i, c in enumerate(coords) if c]
    if not nz:
        return None
    return nz[0] if len(nz) == 1 else False


def _candidate_functor(X, Y, perms, order):
    """Scalars making the line bijection ``perms`` a functor; build it or return None."""
    cat, tcat = X.category, Y.category
    fld = tcat.field
    index = {ref: n for n, ref in enumerate(order)}
    rows, consts = [], []

    def equation(exps, const):
        row = [0] * len(order)
        for ref, e in exps:
            row[index[ref]] += e
        if any(row):
            rows.append(row)
            consts.append(const)
            return True
        return const == fld.one

    for x in cat.objects:
        # J(e_x) = e_x
        loc = _line(X, cat.identity(x))
        k, c = loc
        tgt = _line(Y, tcat.identity(x))
        if not tgt or tgt[0] != perms[x, x][k]:
            return None
        if not equation([((x, x, k), 1)], tgt[1] / c):
            return None
    for x, y, z in itertools.product(cat.objects, repeat=3):
        for i in range(cat.hom_dim(y, z)):
            f = X.basis_morphism(y, z, i)
            Jf = Y.basis_morphism(y, z, perms[y, z][i])
            for j in range(cat.hom_dim(x, y)):
                g = X.basis_morphism(x, y, j)
                Jg = Y.basis_morphism(x, y, perms[x, y][j])
                src = _line(X, cat.compose(f, g))
                tgt = _line(Y, tcat.compose(Jf, Jg))
                if src is False or tgt is False:
                    return None
                if src is None or tgt is None:
                    if src is None and tgt is None:
                        continue
                    return None
                k, c = src
                m, d = tgt
                if perms[x, z][k] != m:
                    return None
                # c * lam_k == d * lam_i * lam_j
                if not equation([((x, z, k), 1), ((y, z, i), -1), ((x, y, j), -1)], d / c):
                    return None
    lam = solve_binomial(rows, consts, len(order), fld)
    if lam is None:
        return None
    mats = {}
    for x, y in cat.pairs():
        n = cat.hom_dim(x, y)
        cols = []
        for q in range(n):
            e = cat.basis_morphism(x, y, q)
            h = X.homogeneous_coords(e)
            acc = [fld.zero] * n
            for i, hi in enumerate(h):
                if hi:
                    vec = Y.base_change[x, y][perms[x, y][i]]
                    s = hi * lam[index[(x, y, i)]]
                    acc = [a + s * v for a, v in zip(acc, vec)]
            cols.append(acc)
        mats[x, y] = scalars.transpose(cols, n)
    try:
        return build_functor(cat, tcat, mats)
    except NotFunctorial:
        return None


def enumerate_thin_morphisms(X: Grading, Y: Grading, b0=None):
    """Every morphism ``X -> Y`` when all components are at most lines.

    A homogeneous isomorphism then sends basis lines bijectively to basis
    lines; each bijection is tested for a compatible choice of scalars.
    One morphism per distinct ``mu`` is returned, sorted by ``mu``.
    """
    cat = X.category
    b0 = b0 or cat.objects[0]
    for G, role in ((X, "source"), (Y, "target")):
        if not G.is_thin():
            raise NotThin("%s grading has a homogeneous component of dimension > 1" % role)
    if Y.category.objects != cat.objects:
        return []
    if any(cat.hom_dim(*k) != Y.category.hom_dim(*k) for k in cat.pairs()):
        return []
    _check_connected(X, b0, "source")
    _check_connected(Y, b0, "target")
    order = X.refs()
    pairs = [k for k in cat.pairs() if cat.hom_dim(*k)]
    choices = [list(itertools.permutations(range(cat.hom_dim(*k)))) for k in pairs]
    found = {}
    for combo in itertools.product(*choices):
        perms = dict(zip(pairs, combo))
        J = _candidate_functor(X, Y, perms, order)
        if J is None:
            continue
        mu = induced_mu(X, Y, J, b0)
        if mu is None or mu.key() in found:
            continue
        try:
            found[mu.key()] = verify_grading_morphism(X, Y, mu, J, b0)
        except (SquareFails, NotHomogeneousWitness):
            continue
    return [found[k] for k in sorted(found)]


class FixedSubgroup(NamedTuple):
    group: AbelianGroup
    inclusion: GroupHom
    endomorphisms: list


def compute_fix(X: Grading, b0=None) -> FixedSubgroup:
    """Elements of ``Gamma(X)`` fixed by every endomorphism of ``X``."""
    b0 = b0 or X.category.objects[0]
    endos = enumerate_thin_morphisms(X, X, b0)
    G = X.group
    if not endos:
        sub = grpkit.subgroup(G, G.generators())
        return FixedSubgroup(sub.group, sub.inclusion, [])
    ds = grpkit.direct_sum([G] * len(endos))
    imgs = []
    for g in G.generators():
        acc = ds.group.zero
        for inj, m in zip(ds.injections, endos):
            acc = acc + inj(m.mu(g) - g)
        imgs.append(acc)
    sub = grpkit.kernel(GroupHom(G, ds.group, tuple(imgs)))
    return FixedSubgroup(sub.group, sub.inclusion, endos)


# --- the brute-force oracle ----------------------------------------------------------


def enumerate_constricted_gradings(cat, G: AbelianGroup, cap=10**6, b0=None):
    """All connected path-basis gradings of a constricted presentation by ``G``."""
    rep = is_constricted(cat)
    if not rep.ok:
        raise NotConstricted("path %s is strictly parallel to arrow %s" % (rep.path, rep.arrow), witness=rep)
    if not G.is_finite:
        raise ValueError("the oracle only enumerates finite groups")
    arrows = [a.id for a in cat.quiver.arrows]
    total = G.order ** len(arrows)
    if total > cap:
        raise GroupTooLarge("%d assignments exceed the cap of %d" % (total, cap))
    b0 = b0 or cat.objects[0]
    out = []
    for n, degs in enumerate(itertools.product(G.elements(), repeat=len(arrows))):
        X = Grading.from_arrow_degrees(cat, G, dict(zip(arrows, degs)), name="%s#%d" % (G, n))
        if validate_grading(X).ok and is_connected_grading(X, b0):
            out.append(X)
    return out


# --- families ---------------------------------------------------------------------------


@dataclass
class GradingFamily:
    gradings: list
    morphisms: list = field(default_factory=list)  # (i, j, GradingMorphism)

    def names(self):
        return [X.name or "#%d" % i for i, X in enumerate(self.gradings)]


class UniversalEntry(NamedTuple):
    name: str
    exists: bool | None
    unique: bool | None
    mus: list
    method: str


@dataclass
class UniversalityReport:
    entries: list

    @property
    def all_exist(self):
        return all(e.exists for e in self.entries)

    @property
    def all_unique(self):
        return all(e.unique for e in self.entries)

    @property
    def ok(self):
        return self.all_exist and self.all_unique

    def failures(self):
        return [e for e in self.entries if not (e.exists and e.unique)]


def morphisms_between(X: Grading, Y: Grading, b0):
    """``(morphisms, method)``: complete list when thin, else the identity witness only."""
    if X.is_thin() and Y.is_thin():
        return enumerate_thin_morphisms(X, Y, b0), "thin"
    if not X.category.same_presentation(Y.category):
        return [], "identity"
    J = identity_functor(X.category)
    mu = induced_mu(X, Y, J, b0)
    if mu is None:
        return [], "identity"
    try:
        return [verify_grading_morphism(X, Y, mu, J, b0)], "identity"
    except (SquareFails, NotHomogeneousWitness):
        return [], "identity"


def verify_universal_property(U: Grading, family: GradingFamily, b0=None) -> UniversalityReport:
    """For every member: does a morphism from ``U`` exist, and is its ``mu`` unique?

    Uniqueness is only decided when both gradings are thin; otherwise it is
    reported as None.
    """
    b0 = b0 or U.category.objects[0]
    _check_connected(U, b0, "candidate")
    entries = []
    for name, X in zip(family.names(), family.gradings):
        ms, method = morphisms_between(U, X, b0)
        exists = bool(ms) if (ms or method == "thin") else None
        unique = (len(ms) == 1) if method == "thin" else None
        entries.append(UniversalEntry(name, exists, unique, [m.mu for m in ms], method))
    return UniversalityReport(entries)


def coherent_family_group(family: GradingFamily) -> grpkit.Limit:
    """Families ``(g_X)`` with ``mu(g_X) == g_Y`` for every listed morphism."""
    nodes = [X.group for X in family.gradings]
    arrows = [(i, j, m.mu) for i, j, m in family.morphisms]
    return grpkit.diagram_limit(nodes, arrows)


def family_with_endomorphisms(gradings, b0=None, between=True):
    """Close a list of thin gradings under every morphism found by enumeration."""
    fam = GradingFamily(list(gradings))
    for i, X in enumerate(fam.gradings):
        for j, Y in enumerate(fam.gradings):
            if i != j and not between:
                continue
            for m in enumerate_thin_morphisms(X, Y, b0):
                fam.morphisms.append((i, j, m))
    return fam


def walk_from_refs(X: Grading, start, refs):
    """Walk from ``[((x, y, i), sign), ...]`` basis references."""
    return Walk(start, tuple((X.basis_morphism(*r), e) for r, e in refs))
