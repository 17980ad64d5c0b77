"""Gradings of presented categories, homogeneous walks and connectedness.

A grading is stored as a homogeneous basis of every hom space together with
one degree per basis vector.  Homogeneous components are spans of basis
vectors of equal degree, so a grading need not be aligned with the path
basis (``gamma - q*beta*alpha`` is a legitimate homogeneous vector).

Structural groups are finitely generated abelian and written additively.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

from . import grpkit, scalars
from .errors import (
    DegreeOutsideImage,
    Disconnected,
    InvalidGrading,
    NotConcatenable,
    NotHomogeneous,
    NotSurjective,
)
from .grpkit import AbelianGroup, GroupElement, GroupHom
from .linrep import Morphism, PresentedCategory


@dataclass(eq=False)
class Grading:
    category: PresentedCategory
    group: AbelianGroup
    base_change: dict  # (x, y) -> list of homogeneous basis vectors (quotient coordinates)
    degrees: dict  # (x, y) -> tuple of GroupElement, one per basis vector
    name: str = field(default="", compare=False)

    def __post_init__(self):
        cat = self.category
        self.base_change = dict(self.base_change)
        self.degrees = dict(self.degrees)
        for k in cat.pairs():
            n = cat.hom_dim(*k)
            vecs = self.base_change.get(k)
            if vecs is None:
                vecs = scalars.identity_matrix(n, cat.field.one)
            vecs = [tuple(cat.field(c) for c in v) for v in vecs]
            if len(vecs) != n or any(len(v) != n for v in vecs):
                raise InvalidGrading("base change on %s -> %s must consist of %d vectors of length %d" % (k + (n, n)))
            self.base_change[k] = vecs
            degs = tuple(self.degrees.get(k, ()))
            if len(degs) != n:
                raise InvalidGrading("need %d degrees on %s -> %s, got %d" % (n, k[0], k[1], len(degs)))
            for d in degs:
                if d.group != self.group:
                    raise InvalidGrading("degree %s is not an element of %s" % (d, self.group))
            self.degrees[k] = degs

    # --- constructors -----------------------------------------------------------

    @classmethod
    def from_arrow_degrees(cls, cat, group, arrow_degrees, base_change=None, degrees=None, name=""):
        """Path-basis grading where a path's degree is the sum over its arrows.

        ``base_change``/``degrees`` override individual hom spaces.
        """
        base_change = dict(base_change or {})
        degrees = dict(degrees or {})
        for k in cat.pairs():
            if k in degrees:
                continue
            degs = []
            for p in cat.basis_paths(*k):
                d = group.zero
                for a in p.arrows:
                    d = d + arrow_degrees[a]
                degs.append(d)
            degrees[k] = tuple(degs)
        return cls(cat, group, base_change, degrees, name)

    @classmethod
    def trivial(cls, cat, group=None):
        group = group or grpkit.TRIVIAL
        return cls.from_arrow_degrees(cat, group, {a.id: group.zero for a in cat.quiver.arrows}, name="trivial")

    # --- homogeneous coordinates ----------------------------------------------

    @cached_property
    def _inverses(self):
        out = {}
        for k, vecs in self.base_change.items():
            if not vecs:
                out[k] = []
                continue
            inv = scalars.inverse(scalars.transpose(vecs), self.category.field)
            out[k] = inv
        return out

    def dim(self, x, y):
        return self.category.hom_dim(x, y)

    def refs(self):
        """Every homogeneous basis reference ``(x, y, i)`` in deterministic order."""
        return [(x, y, i) for x, y in self.category.pairs() for i in range(self.dim(x, y))]

    def basis_morphism(self, x, y, i):
        return Morphism(x, y, tuple(self.base_change[x, y][i]))

    def degree_of_ref(self, ref):
        x, y, i = ref
        return self.degrees[x, y][i]

    def homogeneous_coords(self, m):
        inv = self._inverses[m.source, m.target]
        if inv is None:
            raise InvalidGrading("base change on %s -> %s is singular" % (m.source, m.target))
        return scalars.mat_vec(inv, list(m.coords))

    def components(self, m):
        """Map degree -> part of ``m`` in that homogeneous component."""
        coords = self.homogeneous_coords(m)
        degs = self.degrees[m.source, m.target]
        out = {}
        for c, d in zip(coords, degs):
            if c:
                out.setdefault(d.key(), (d, []))[1].append(c)
        return {v[0]: v[1] for v in out.values()}

    def degree(self, m):
        """Degree of a homogeneous morphism; NotHomogeneous otherwise."""
        comps = self.components(m)
        if len(comps) != 1:
            what = "zero" if not comps else "spread over %d components" % len(comps)
            raise NotHomogeneous("morphism %s -> %s is %s" % (m.source, m.target, what), witness=m)
        return next(iter(comps))

    def is_homogeneous(self, m):
        return len(self.components(m)) == 1

    def locate(self, m):
        """``(i, c)`` when ``m == c * basis[i]``, else None."""
        coords = self.homogeneous_coords(m)
        nz = [(i, c) for i, c in enumerate(coords) if c]
        return nz[0] if len(nz) == 1 else None

    def is_thin(self):
        """Every homogeneous component is at most one-dimensional."""
        for k, degs in self.degrees.items():
            keys = [d.key() for d in degs]
            if len(set(keys)) != len(keys):
                return False
        return True

    def is_identity_ref(self, ref):
        x, y, i = ref
        if x != y:
            return False
        cat = self.category
        e = cat.identity(x)
        coords = list(self.base_change[x, y][i])
        return scalars.rank([coords, list(e.coords)], len(coords)) == 1

    def with_degrees(self, group, degrees, name=""):
        return Grading(self.category, group, {k: list(v) for k, v in self.base_change.items()}, degrees, name)

    def to_json(self):
        def key(k):
            return "%s->%s" % k

        return {
            "group": self.group.to_json(),
            "base_change": {key(k): [[str(c) for c in v] for v in vecs] for k, vecs in self.base_change.items() if vecs},
            "degrees": {key(k): [d.to_json() for d in degs] for k, degs in self.degrees.items() if degs},
        }


class Violation(NamedTuple):
    kind: str
    detail: str
    witness: object = None


@dataclass
class GradingReport:
    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


def validate_grading(X: Grading) -> GradingReport:
    """Check that ``X`` really is a grading.

    Every base change must be invertible, every identity must lie in the
    degree-0 component, and the composite of basis vectors of degrees ``s``
    and ``t`` must lie in the component of degree ``s + t``.
    """
    cat = X.category
    violations = []
    for k, inv in X._inverses.items():
        if inv is None:
            violations.append(Violation("singular", "base change on %s -> %s is singular" % k, k))
    if violations:
        return GradingReport(False, violations)
    zero = X.group.zero
    for x in cat.objects:
        comps = X.components(cat.identity(x))
        if list(comps) != [zero]:
            violations.append(Violation("identity", "identity of %s is not of degree 0" % x, x))
    objs = cat.objects
    for x in objs:
        for y in objs:
            if not cat.hom_dim(x, y):
                continue
            for z in objs:
                if not cat.hom_dim(y, z):
                    continue
                for i in range(cat.hom_dim(y, z)):
                    f = X.basis_morphism(y, z, i)
                    s = X.degrees[y, z][i]
                    for j in range(cat.hom_dim(x, y)):
                        g = X.basis_morphism(x, y, j)
                        t = X.degrees[x, y][j]
                        comps = X.components(cat.compose(f, g))
                        bad = [d for d in comps if d != s + t]
                        if bad:
                            violations.append(
                                Violation(
                                    "composition",
                                    "(%s->%s)[%d] o (%s->%s)[%d] has components of degree %s, expected %s"
                                    % (y, z, i, x, y, j, ", ".join(map(str, bad)), s + t),
                                    ((y, z, i), (x, y, j)),
                                )
                            )
    return GradingReport(not violations, violations)


def require_valid(X):
    rep = validate_grading(X)
    if not rep.ok:
        raise InvalidGrading(rep.violations[0].detail, witness=rep.violations[0])


# --- walks ------------------------------------------------------------------------


@dataclass(frozen=True)
class Walk:
    """Sequence of virtual morphisms ``(f, +1)`` / ``(f, -1)``.

    ``steps`` is listed in the order of traversal, the first step leaving
    ``start``.  A step ``(f, -1)`` walks ``f`` backwards.
    """

    start: str
    steps: tuple = ()

    def __post_init__(self):
        steps = tuple((m, int(e)) for m, e in self.steps)
        object.__setattr__(self, "steps", steps)
        here = self.start
        for n, (m, e) in enumerate(steps):
            if e not in (1, -1):
                raise NotConcatenable("step %d has sign %r" % (n, e))
            src, tgt = (m.source, m.target) if e == 1 else (m.target, m.source)
            if src != here:
                raise NotConcatenable("step %d starts at %s, expected %s" % (n, src, here), witness=n)
            here = tgt

    @property
    def end(self):
        here = self.start
        for m, e in self.steps:
            here = m.target if e == 1 else m.source
        return here

    def inverse(self):
        return Walk(self.end, tuple((m, -e) for m, e in reversed(self.steps)))

    def then(self, other):
        """This walk followed by ``other``."""
        if other.start != self.end:
            raise NotConcatenable("walk ends at %s but the next one starts at %s" % (self.end, other.start))
        return Walk(self.start, self.steps + other.steps)

    def __len__(self):
        return len(self.steps)

    def is_closed(self):
        return self.start == self.end


def walk_degree(X: Grading, w: Walk) -> GroupElement:
    d = X.group.zero
    for m, e in w.steps:
        d = d + X.degree(m) * e
    return d


@dataclass
class SpanningData:
    base: str
    tree_walks: dict  # vertex -> Walk from base
    potentials: dict  # vertex -> degree of its tree walk
    edges: list  # (ref, morphism, is_tree)

    def cycle(self, ref, m):
        """Closed walk ``v_tgt^-1 . m . v_src`` at the base."""
        x, y, _ = ref
        return self.tree_walks[x].then(Walk(x, ((m, 1),))).then(self.tree_walks[y].inverse())

    def chords(self):
        return [(ref, m) for ref, m, tree in self.edges if not tree]


def spanning_data(X: Grading, b0) -> SpanningData:
    """Breadth-first spanning tree of the graph of homogeneous basis vectors.

    Multiples of identities are not edges.  Edges are scanned in basis order.
    """
    cat = X.category
    edges = [(ref, X.basis_morphism(*ref)) for ref in X.refs() if not X.is_identity_ref(ref)]
    walks = {b0: Walk(b0)}
    pot = {b0: X.group.zero}
    tree = set()
    queue = deque([b0])
    while queue:
        v = queue.popleft()
        for ref, m in edges:
            x, y, _ = ref
            if x == v and y not in walks:
                walks[y] = walks[v].then(Walk(v, ((m, 1),)))
                pot[y] = pot[v] + X.degrees[x, y][ref[2]]
            elif y == v and x not in walks:
                walks[x] = walks[v].then(Walk(v, ((m, -1),)))
                pot[x] = pot[v] - X.degrees[x, y][ref[2]]
            else:
                continue
            tree.add(ref)
            queue.append(y if x == v else x)
    missing = [b for b in cat.objects if b not in walks]
    if missing:
        raise Disconnected("objects %s are not reached from %s" % (", ".join(missing), b0), witness=missing)
    return SpanningData(b0, walks, pot, [(ref, m, ref in tree) for ref, m in edges])


def closed_walk_subgroup(X: Grading, b0) -> list:
    """Degrees of the fundamental cycles; they generate deg_X of closed walks at b0."""
    sd = spanning_data(X, b0)
    out = []
    for ref, _ in sd.chords():
        x, y, i = ref
        out.append(sd.potentials[x] + X.degrees[x, y][i] - sd.potentials[y])
    return out


def is_connected_grading(X: Grading, b0) -> bool:
    return grpkit.subgroup_quotient(X.group, closed_walk_subgroup(X, b0)).is_full


@dataclass
class ConnectorFamily:
    base: str
    walks: dict  # object -> Walk from base to object

    def __getitem__(self, b):
        return self.walks[b]


def connectors(X: Grading, b0) -> ConnectorFamily:
    """Walks of trivial degree from ``b0`` to every object (needs X connected)."""
    sd = spanning_data(X, b0)
    chords = sd.chords()
    cycles = [sd.cycle(ref, m) for ref, m in chords]
    cyc_deg = [walk_degree(X, c) for c in cycles]
    out = {}
    for b in X.category.objects:
        target = -sd.potentials[b]
        coeffs = grpkit.express(X.group, cyc_deg, target)
        if coeffs is None:
            raise Disconnected("grading is not connected: no closed walk of degree %s" % target)
        w = Walk(b0)
        for c, cyc in zip(coeffs, cycles):
            piece = cyc if c > 0 else cyc.inverse()
            for _ in range(abs(c)):
                w = w.then(piece)
        out[b] = w.then(sd.tree_walks[b])
    return ConnectorFamily(b0, out)


# --- functors acting on walks --------------------------------------------------


def homogeneity_violation(J, X, Y):
    """First X-basis reference witnessing that J is not homogeneous.

    Each X-component must land inside a single Y-component, so the images of
    basis vectors of equal X-degree must share one Y-degree.
    """
    seen = {}
    for ref in X.refs():
        img = J(X.basis_morphism(*ref))
        comps = Y.components(img)
        if len(comps) != 1:
            return ref
        key = (ref[0], ref[1], X.degree_of_ref(ref).key())
        d = next(iter(comps))
        if seen.setdefault(key, d) != d:
            return ref
    return None


def map_walk(J, w: Walk, X: Grading, Y: Grading) -> Walk:
    """Apply an identity-on-objects functor stepwise, keeping the signs."""
    bad = homogeneity_violation(J, X, Y)
    if bad is not None:
        raise NotHomogeneous("J is not homogeneous: basis element %s->%s[%d] is mixed" % bad, witness=bad)
    steps = []
    for m, e in w.steps:
        X.degree(m)
        steps.append((J(m), e))
    return Walk(w.start, tuple(steps))


# --- changing the group ------------------------------------------------------------


def quotient_grading(X: Grading, pi: GroupHom, name="") -> Grading:
    """Push the degrees of ``X`` along a surjection ``pi``."""
    if pi.source != X.group:
        raise ValueError("homomorphism does not start at the structural group")
    if not pi.is_surjective():
        raise NotSurjective("%s is not surjective" % pi)
    Y = X.with_degrees(pi.target, {k: tuple(pi(d) for d in degs) for k, degs in X.degrees.items()}, name)
    require_valid(Y)
    return Y


def reduction(G: AbelianGroup, n: int) -> GroupHom:
    """``Z -> Z/n`` (or ``Z -> Z`` when ``n == 0``)."""
    if G.ngens != 1 or G.rank != 1:
        raise ValueError("reduction needs the group Z")
    H = grpkit.cyclic(n)
    return GroupHom(G, H, (H.from_coords([1]) if H.ngens else H.zero,))


def gauge_fix(X: Grading, b0) -> Grading:
    """Conjugate degrees by the spanning-tree potentials.

    The new degree of ``f: x -> y`` is ``deg f + p(x) - p(y)``; the result is
    an isomorphic grading in which every tree edge has degree 0, so every
    degree is the degree of a closed walk at ``b0``.
    """
    sd = spanning_data(X, b0)
    p = sd.potentials
    degs = {(x, y): tuple(d + p[x] - p[y] for d in ds) for (x, y), ds in X.degrees.items()}
    return X.with_degrees(X.group, degs, X.name)


def restrict_to_image(X: Grading, b0) -> Grading:
    """Replace the structural group by the closed-walk subgroup.

    Needs every degree to lie in that subgroup already (apply
    :func:`gauge_fix` first otherwise).
    """
    sub = grpkit.subgroup(X.group, closed_walk_subgroup(X, b0))
    degs = {}
    for k, ds in X.degrees.items():
        new = []
        for i, d in enumerate(ds):
            pre = sub.preimage(d)
            if pre is None:
                raise DegreeOutsideImage(
                    "degree %s of %s->%s[%d] is not a closed-walk degree" % (d, k[0], k[1], i), witness=k + (i,)
                )
            new.append(pre)
        degs[k] = tuple(new)
    Y = X.with_degrees(sub.group, degs, X.name)
    require_valid(Y)
    if not is_connected_grading(Y, b0):
        raise AssertionError("restricted grading is not connected")
    return Y
