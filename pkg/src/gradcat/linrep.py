"""Quivers with relations and the finite-dimensional linear categories they present.

Hom spaces of ``kQ/I`` are computed by enumerating paths up to a length
bound and echelonizing the ideal spanned by all two-sided translates of the
relations.  The quotient basis of each hom space is the set of non-pivot
paths, so coordinates are reproducible.

Paths are written the usual way, right to left: ``("delta", "beta",
"alpha")`` is alpha followed by beta followed by delta.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Sequence

from . import scalars
from .errors import BadBound, DimensionMismatch, NonAdmissible, NotComposable, NotFunctorial
from .scalars import Field


class Arrow(NamedTuple):
    id: str
    src: str
    tgt: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple

    def __post_init__(self):
        verts = tuple(self.vertices)
        arrows = tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in self.arrows)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "arrows", arrows)
        if len(set(verts)) != len(verts):
            raise ValueError("duplicate vertex ids")
        ids = [a.id for a in arrows]
        if len(set(ids)) != len(ids) or set(ids) & set(verts):
            raise ValueError("arrow ids must be unique and distinct from vertex ids")
        for a in arrows:
            if a.src not in verts or a.tgt not in verts:
                raise ValueError("arrow %s has an undeclared endpoint" % a.id)

    @cached_property
    def arrow_index(self):
        return {a.id: i for i, a in enumerate(self.arrows)}

    @cached_property
    def vertex_index(self):
        return {v: i for i, v in enumerate(self.vertices)}

    def arrow(self, aid):
        return self.arrows[self.arrow_index[aid]]

    def out_arrows(self, v):
        return [a for a in self.arrows if a.src == v]

    def is_acyclic(self):
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.tgt] += 1
        stack = [v for v in self.vertices if indeg[v] == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for a in self.out_arrows(v):
                indeg[a.tgt] -= 1
                if indeg[a.tgt] == 0:
                    stack.append(a.tgt)
        return seen == len(self.vertices)

    def longest_path_length(self):
        """Length of the longest path; only meaningful when acyclic."""
        best = {v: 0 for v in self.vertices}
        for _ in range(len(self.vertices)):
            for a in self.arrows:
                best[a.tgt] = max(best[a.tgt], best[a.src] + 1)
        return max(best.values(), default=0)


class Path(NamedTuple):
    source: str
    target: str
    arrows: tuple = ()

    @property
    def length(self):
        return len(self.arrows)

    def after(self, other):
        """Concatenation ``self * other`` (``other`` applied first)."""
        if other.target != self.source:
            raise NotComposable("cannot compose %s after %s" % (self, other))
        return Path(other.source, self.target, self.arrows + other.arrows)

    def __str__(self):
        return "".join(self.arrows) if self.arrows else "e_%s" % self.source


def trivial_path(v):
    return Path(v, v, ())


def path_from_arrows(quiver, arrow_ids, at=None):
    """Build a path from arrow ids written right to left."""
    arrow_ids = tuple(arrow_ids)
    if not arrow_ids:
        if at is None:
            raise ValueError("an empty path needs a base vertex")
        return trivial_path(at)
    arrows = [quiver.arrow(a) for a in arrow_ids]
    for left, right in zip(arrows, arrows[1:]):
        if right.tgt != left.src:
            raise NotComposable("arrows %s and %s do not concatenate" % (right.id, left.id))
    return Path(arrows[-1].src, arrows[0].tgt, arrow_ids)


def path_key(quiver, p):
    return (p.length, tuple(quiver.arrow_index[a] for a in p.arrows))


def enumerate_paths(quiver, src, tgt, max_len):
    """All paths ``src -> tgt`` of length ``< max_len``.

    Ordered by length, then lexicographically by arrow declaration index.
    """
    if src not in quiver.vertices or tgt not in quiver.vertices:
        raise ValueError("unknown vertex")
    out = []
    level = [trivial_path(src)]
    length = 0
    while level and length < max_len:
        out.extend(p for p in level if p.target == tgt)
        nxt = []
        for p in level:
            for a in quiver.out_arrows(p.target):
                nxt.append(Path(src, a.tgt, (a.id,) + p.arrows))
        level = nxt
        length += 1
    out.sort(key=lambda p: path_key(quiver, p))
    return out


@dataclass(frozen=True)
class LinComb:
    """Linear combination of parallel paths with nonzero coefficients."""

    source: str
    target: str
    terms: tuple = ()  # ((Path, coefficient), ...)

    def __post_init__(self):
        acc = {}
        for p, c in self.terms:
            if p.source != self.source or p.target != self.target:
                raise ValueError("path %s is not parallel to %s -> %s" % (p, self.source, self.target))
            acc[p] = acc.get(p, 0) + c
        object.__setattr__(self, "terms", tuple((p, c) for p, c in acc.items() if c))

    @classmethod
    def of(cls, quiver, *terms, at=None):
        """``LinComb.of(Q, (1, ["delta", "gamma"]), (-q, ["delta", "beta", "alpha"]))``."""
        paths = [(path_from_arrows(quiver, arrows, at), c) for c, arrows in terms]
        return cls(paths[0][0].source, paths[0][0].target, tuple(paths))

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join("%s*%s" % (c, p) for p, c in self.terms)


@dataclass(frozen=True)
class Morphism:
    """Element of a hom space, in quotient-basis coordinates."""

    source: str
    target: str
    coords: tuple

    def __add__(self, other):
        self._check(other)
        return Morphism(self.source, self.target, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return Morphism(self.source, self.target, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return Morphism(self.source, self.target, tuple(-a for a in self.coords))

    def scale(self, c):
        return Morphism(self.source, self.target, tuple(c * a for a in self.coords))

    def __rmul__(self, c):
        return self.scale(c)

    def _check(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("morphisms are not parallel")

    def is_zero(self):
        return not any(self.coords)

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return (self.source, self.target) == (other.source, other.target) and all(
            a == b for a, b in zip(self.coords, other.coords)
        )

    def __hash__(self):
        return hash((self.source, self.target, len(self.coords)))


@dataclass(frozen=True)
class _HomData:
    paths: tuple
    ideal: tuple  # echelon rows over path coordinates
    pivots: tuple
    basis: tuple  # indices into paths


@dataclass(eq=False)
class PresentedCategory:
    """``kQ/I`` with its hom spaces computed.

    Use :func:`build_category` rather than the constructor.
    """

    quiver: Quiver
    field: Field
    relations: tuple
    bound: int | None
    max_len: int
    homs: dict = field(repr=False)
    _mult: dict = field(default_factory=dict, repr=False)

    @property
    def objects(self):
        return self.quiver.vertices

    def pairs(self):
        """All ordered object pairs ``(source, target)`` in vertex order."""
        return [(x, y) for x in self.objects for y in self.objects]

    def hom_dim(self, x, y):
        return len(self.homs[x, y].basis)

    def basis_paths(self, x, y):
        h = self.homs[x, y]
        return [h.paths[i] for i in h.basis]

    def paths(self, x, y):
        return list(self.homs[x, y].paths)

    def total_dim(self):
        return sum(self.hom_dim(x, y) for x, y in self.pairs())

    def zero(self, x, y):
        return Morphism(x, y, tuple(self.field.zero for _ in range(self.hom_dim(x, y))))

    def basis_morphism(self, x, y, i):
        coords = [self.field.zero] * self.hom_dim(x, y)
        coords[i] = self.field.one
        return Morphism(x, y, tuple(coords))

    def identity(self, x):
        return self.path_morphism(trivial_path(x))

    def _reduce(self, x, y, vec):
        h = self.homs[x, y]
        v = scalars.reduce_vector(vec, h.ideal, h.pivots)
        return tuple(v[i] for i in h.basis)

    def path_vector(self, lc):
        """Coordinates of a LinComb over the enumerated paths (long paths dropped)."""
        h = self.homs[lc.source, lc.target]
        index = {p: i for i, p in enumerate(h.paths)}
        vec = [self.field.zero] * len(h.paths)
        for p, c in lc.terms:
            if p in index:
                vec[index[p]] += self.field(c)
            elif p.length < self.max_len:
                raise ValueError("path %s is not enumerated" % (p,))
        return vec

    def morphism(self, lc):
        return Morphism(lc.source, lc.target, self._reduce(lc.source, lc.target, self.path_vector(lc)))

    def path_morphism(self, p):
        return self.morphism(LinComb(p.source, p.target, ((p, 1),)))

    def arrow(self, aid):
        a = self.quiver.arrow(aid)
        return self.path_morphism(Path(a.src, a.tgt, (aid,)))

    def _product(self, x, y, z, i, j):
        key = (x, y, z, i, j)
        if key not in self._mult:
            p = self.homs[y, z].paths[self.homs[y, z].basis[i]]
            q = self.homs[x, y].paths[self.homs[x, y].basis[j]]
            pq = p.after(q)
            if pq.length >= self.max_len:
                self._mult[key] = None
            else:
                out = self.path_morphism(pq)
                self._mult[key] = None if out.is_zero() else out.coords
        return self._mult[key]

    def compose(self, f, g):
        """``f`` after ``g`` (``g: x -> y``, ``f: y -> z``)."""
        if g.target != f.source:
            raise NotComposable("cannot compose %s->%s after %s->%s" % (f.source, f.target, g.source, g.target))
        x, y, z = g.source, g.target, f.target
        acc = [self.field.zero] * self.hom_dim(x, z)
        for i, a in enumerate(f.coords):
            if not a:
                continue
            for j, b in enumerate(g.coords):
                if not b:
                    continue
                prod = self._product(x, y, z, i, j)
                if prod is not None:
                    ab = a * b
                    acc = [u + ab * v for u, v in zip(acc, prod)]
        return Morphism(x, z, tuple(acc))

    def ideal_rank(self, x, y):
        return len(self.homs[x, y].ideal)

    def same_presentation(self, other):
        """Built from the same quiver, field, bound and ideal."""
        if self is other:
            return True
        if (self.quiver, self.field, self.max_len) != (other.quiver, other.field, other.max_len):
            return False
        return all(self.homs[k] == other.homs[k] for k in self.pairs())


def _translates(quiver, rel, max_len):
    """All prefix * rel * suffix, truncated to paths shorter than max_len."""
    shortest = min(p.length for p, _ in rel.terms)
    room = max_len - shortest
    suffixes = []  # paths ending at rel.source
    prefixes = []  # paths starting at rel.target
    for v in quiver.vertices:
        suffixes += [p for p in enumerate_paths(quiver, v, rel.source, room)]
        prefixes += [p for p in enumerate_paths(quiver, rel.target, v, room)]
    out = []
    for u in prefixes:
        for v in suffixes:
            if u.length + v.length + shortest >= max_len:
                continue
            terms = []
            for p, c in rel.terms:
                t = u.after(p.after(v))
                if t.length < max_len:
                    terms.append((t, c))
            if terms:
                out.append(LinComb(v.source, u.target, tuple(terms)))
    return out


def _hom_spaces(quiver, fld, relations, max_len):
    paths = {(x, y): enumerate_paths(quiver, x, y, max_len) for x in quiver.vertices for y in quiver.vertices}
    index = {k: {p: i for i, p in enumerate(ps)} for k, ps in paths.items()}
    rows = {k: [] for k in paths}
    for rel in relations:
        for t in _translates(quiver, rel, max_len):
            k = (t.source, t.target)
            vec = [fld.zero] * len(paths[k])
            for p, c in t.terms:
                vec[index[k][p]] += fld(c)
            rows[k].append(vec)
    homs = {}
    for k, ps in paths.items():
        ideal, pivots = scalars.rref(rows[k], len(ps))
        basis = tuple(i for i in range(len(ps)) if i not in set(pivots))
        homs[k] = _HomData(tuple(ps), tuple(tuple(r) for r in ideal), tuple(pivots), basis)
    return homs


def build_category(quiver: Quiver, relations: Sequence[LinComb] = (), bound=None, field: Field | None = None):
    """Compute the hom spaces of ``kQ/I``.

    For an acyclic quiver ``bound`` may be omitted.  Otherwise every path of
    length ``bound`` must lie in the ideal; this is checked modulo paths of
    length ``bound + 1``, which is exact for admissible ideals.
    """
    fld = field or Field.rationals()
    relations = tuple(relations)
    for r in relations:
        if not r.terms:
            raise NonAdmissible("zero relation %s -> %s" % (r.source, r.target))
        short = [p for p, _ in r.terms if p.length < 2]
        if short:
            raise NonAdmissible("relation %s involves the short path %s" % (r, short[0]), witness=short[0])
    acyclic = quiver.is_acyclic()
    if bound is None:
        if not acyclic:
            raise BadBound("a quiver with oriented cycles needs an explicit length bound")
        max_len = quiver.longest_path_length() + 1
    else:
        bound = int(bound)
        if bound < 2:
            raise BadBound("length bound must be at least 2")
        max_len = bound
        wide = _hom_spaces(quiver, fld, relations, bound + 1)
        for (x, y), h in wide.items():
            for i, p in enumerate(h.paths):
                if p.length != bound:
                    continue
                unit = [fld.zero] * len(h.paths)
                unit[i] = fld.one
                if any(scalars.reduce_vector(unit, h.ideal, h.pivots)):
                    raise BadBound("path %s of length %d is not in the ideal" % (p, bound), witness=p)
    homs = _hom_spaces(quiver, fld, relations, max_len)
    return PresentedCategory(quiver, fld, relations, bound, max_len, homs)


def ideal_membership(cat: PresentedCategory, v: LinComb) -> bool:
    return cat.morphism(v).is_zero()


# --- functors ---------------------------------------------------------------------


@dataclass(eq=False)
class Functor:
    """Identity-on-objects linear functor given by one matrix per hom space.

    ``matrices[x, y]`` has one column per source basis element, written in
    the target's quotient basis.
    """

    source: PresentedCategory
    target: PresentedCategory
    matrices: dict

    def __call__(self, f):
        m = self.matrices[f.source, f.target]
        return Morphism(f.source, f.target, tuple(scalars.mat_vec(m, list(f.coords))))

    def invertible(self):
        """Per hom space: is the matrix invertible?"""
        out = {}
        for k, m in self.matrices.items():
            n = len(m)
            cols = len(m[0]) if m else self.source.hom_dim(*k)
            out[k] = n == cols and scalars.rank(m, cols) == n
        return out

    def is_isomorphism(self):
        return all(self.invertible().values())

    def inverse(self):
        mats = {}
        for k, m in self.matrices.items():
            inv = scalars.inverse(m, self.source.field) if m else []
            if inv is None:
                raise ValueError("functor is not invertible on %s -> %s" % k)
            mats[k] = inv
        return build_functor(self.target, self.source, mats)

    def after(self, other):
        """Composite ``self o other``."""
        mats = {k: scalars.mat_mul(self.matrices[k], other.matrices[k]) if self.matrices[k] else [] for k in self.matrices}
        return build_functor(other.source, self.target, mats)

    def is_identity(self):
        if self.source is not self.target:
            return False
        for (x, y), m in self.matrices.items():
            n = self.source.hom_dim(x, y)
            if any(m[i][j] != (1 if i == j else 0) for i in range(n) for j in range(n)):
                return False
        return True


def build_functor(source, target, matrices):
    """Validate and wrap per-hom-space matrices as a functor.

    Raises ``NotFunctorial`` with the first composable basis pair that is not
    respected, or ``DimensionMismatch``.
    """
    if source.objects != target.objects:
        raise DimensionMismatch("source and target must have the same objects")
    mats = {}
    for x, y in source.pairs():
        m = [list(r) for r in matrices.get((x, y), [])]
        ns, nt = source.hom_dim(x, y), target.hom_dim(x, y)
        if nt == 0 or ns == 0:
            if any(any(r) for r in m):
                raise DimensionMismatch("nonzero matrix on a zero hom space %s -> %s" % (x, y))
            m = [[target.field.zero] * ns for _ in range(nt)]
        elif len(m) != nt or any(len(r) != ns for r in m):
            raise DimensionMismatch("matrix for %s -> %s must be %d x %d" % (x, y, nt, ns))
        mats[x, y] = [[target.field(c) for c in r] for r in m]
    F = Functor(source, target, mats)
    for x in source.objects:
        if F(source.identity(x)) != target.identity(x):
            raise NotFunctorial("identity of %s is not preserved" % x, witness=("identity", x))
    for x, y, z in _triples(source):
        for i in range(source.hom_dim(y, z)):
            f = source.basis_morphism(y, z, i)
            for j in range(source.hom_dim(x, y)):
                g = source.basis_morphism(x, y, j)
                if F(source.compose(f, g)) != target.compose(F(f), F(g)):
                    raise NotFunctorial(
                        "composition of basis elements %s and %s is not preserved"
                        % (source.basis_paths(y, z)[i], source.basis_paths(x, y)[j]),
                        witness=((y, z, i), (x, y, j)),
                    )
    return F


def _triples(cat):
    objs = cat.objects
    return [
        (x, y, z)
        for x in objs
        for y in objs
        for z in objs
        if cat.hom_dim(x, y) and cat.hom_dim(y, z)
    ]


def identity_functor(cat):
    mats = {k: scalars.identity_matrix(cat.hom_dim(*k), cat.field.one) for k in cat.pairs()}
    return build_functor(cat, cat, mats)


def functor_from_arrow_images(source, target, images):
    """Extend arrow images (LinComb or Morphism in ``target``) to a functor.

    Arrows not mentioned are sent to themselves.  The resulting matrices are
    checked by :func:`build_functor`, which fails when the relations of the
    source are not sent into the ideal of the target.
    """
    q = source.quiver
    arrow_img = {}
    for a in q.arrows:
        img = images.get(a.id)
        if img is None:
            img = target.arrow(a.id)
        elif isinstance(img, LinComb):
            img = target.morphism(img)
        if (img.source, img.target) != (a.src, a.tgt):
            raise DimensionMismatch("image of %s has the wrong endpoints" % a.id)
        arrow_img[a.id] = img
    mats = {}
    for x, y in source.pairs():
        cols = []
        for p in source.basis_paths(x, y):
            m = target.identity(x)
            for aid in reversed(p.arrows):
                m = target.compose(arrow_img[aid], m)
            cols.append(list(m.coords))
        mats[x, y] = scalars.transpose(cols, target.hom_dim(x, y))
    return build_functor(source, target, mats)
