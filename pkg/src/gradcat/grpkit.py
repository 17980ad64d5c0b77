"""Finitely generated abelian groups, presentations and finite diagram limits.

Everything is integer arithmetic on Python ints (arbitrary precision).  The
workhorse is :func:`smith_normal_form`; kernels, images, cokernels and
limits are all read off from it.

An :class:`AbelianGroup` is stored in invariant-factor form
``Z^rank + Z/d_1 + ... + Z/d_k`` with ``d_1 | d_2 | ... | d_k`` and every
``d_i >= 2``, so two groups are isomorphic iff they compare equal.  Its
*generators* are the ``rank`` free generators followed by the ``k`` torsion
generators; element coordinates are listed in that order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence


# --- Smith normal form -------------------------------------------------------


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _snf(A, ncols=None):
    """Smith normal form with both transforms and the inverse of ``V``."""
    D = [list(map(int, row)) for row in A]
    m = len(D)
    n = len(D[0]) if m else (ncols or 0)
    U = _identity(m)
    V = _identity(n)
    Vinv = _identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vinv[src] = [a - q * b for a, b in zip(Vinv[src], Vinv[dst])]

    for s in range(min(m, n)):
        while True:
            best = None
            for i in range(s, m):
                for j in range(s, n):
                    if D[i][j] and (best is None or abs(D[i][j]) < best[0]):
                        best = (abs(D[i][j]), i, j)
            if best is None:
                return U, D, V, Vinv
            _, i, j = best
            if i != s:
                swap_rows(s, i)
            if j != s:
                swap_cols(s, j)
            p = D[s][s]
            clean = True
            for i in range(s + 1, m):
                if D[i][s]:
                    add_row(i, s, -(D[i][s] // p))
                    clean = clean and D[i][s] == 0
            for j in range(s + 1, n):
                if D[s][j]:
                    add_col(j, s, -(D[s][j] // p))
                    clean = clean and D[s][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(s + 1, m) for j in range(s + 1, n) if D[i][j] % p),
                None,
            )
            if bad is not None:
                add_row(s, bad, 1)
                continue
            break
        if D[s][s] < 0:
            D[s] = [-x for x in D[s]]
            U[s] = [-x for x in U[s]]
    return U, D, V, Vinv


def smith_normal_form(A, ncols=None):
    """Return ``(U, D, V)`` with ``U @ A @ V == D``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with nonnegative
    entries ``d_1 | d_2 | ...`` (zeros last).  The pivot is always the
    nonzero entry of least absolute value, ties broken row-major, so the
    transforms are deterministic.  ``ncols`` is only needed when ``A`` has
    no rows.

    >>> smith_normal_form([[2, 4], [6, 8]])[1]
    [[2, 0], [0, 4]]
    """
    U, D, V, _ = _snf(A, ncols)
    return U, D, V


def _diagonal(D):
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def _left_kernel(M, ncols):
    """Integer basis of ``{z : z @ M == 0}`` (rows of length ``len(M)``)."""
    if not M:
        return []
    U, D, _, _ = _snf(M, ncols)
    r = sum(1 for d in _diagonal(D) if d)
    return [U[i] for i in range(r, len(M))]


def _solve_left(M, ncols, h):
    """Integer ``z`` with ``z @ M == h``, or None."""
    m = len(M)
    if m == 0:
        return [] if not any(h) else None
    U, D, V, _ = _snf(M, ncols)
    hv = [sum(h[k] * V[k][j] for k in range(ncols)) for j in range(ncols)]
    diag = _diagonal(D)
    w = [0] * m
    for j in range(ncols):
        d = diag[j] if j < len(diag) else 0
        if d:
            if hv[j] % d:
                return None
            w[j] = hv[j] // d
        elif hv[j]:
            return None
    return [sum(w[i] * U[i][k] for i in range(m)) for k in range(m)]


# --- groups and elements ------------------------------------------------------


@dataclass(frozen=True)
class AbelianGroup:
    rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        t = tuple(int(d) for d in self.torsion)
        object.__setattr__(self, "torsion", t)
        if self.rank < 0:
            raise ValueError("negative rank")
        if any(d < 2 for d in t):
            raise ValueError("invariant factors must be >= 2: %r" % (t,))
        if any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError("invariant factors must form a divisibility chain: %r" % (t,))

    @classmethod
    def from_orders(cls, rank=0, orders=()):
        """Canonical form of ``Z^rank + Z/o_1 + ...`` for arbitrary orders.

        Orders equal to 0 count as extra free summands; orders equal to 1
        are dropped.
        """
        orders = [int(o) for o in orders]
        n = rank + len(orders)
        rows = []
        for i, o in enumerate(orders):
            if o != 0:
                row = [0] * n
                row[rank + i] = o
                rows.append(row)
        return cokernel(rows, n).group

    @property
    def ngens(self):
        return self.rank + len(self.torsion)

    @property
    def is_finite(self):
        return self.rank == 0

    @property
    def is_trivial(self):
        return self.rank == 0 and not self.torsion

    @property
    def order(self):
        """Number of elements, or None when infinite."""
        if self.rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def relation_rows(self):
        n = self.ngens
        rows = []
        for i, d in enumerate(self.torsion):
            row = [0] * n
            row[self.rank + i] = d
            rows.append(row)
        return rows

    def element(self, free=(), torsion=()):
        free = tuple(int(x) for x in free) or (0,) * self.rank
        torsion = tuple(int(x) for x in torsion) or (0,) * len(self.torsion)
        return GroupElement(self, free, torsion)

    def from_coords(self, coords):
        coords = list(coords)
        if len(coords) != self.ngens:
            raise ValueError("expected %d coordinates, got %d" % (self.ngens, len(coords)))
        return GroupElement(self, tuple(coords[: self.rank]), tuple(coords[self.rank:]))

    @property
    def zero(self):
        return self.from_coords([0] * self.ngens)

    def generators(self):
        out = []
        for i in range(self.ngens):
            v = [0] * self.ngens
            v[i] = 1
            out.append(self.from_coords(v))
        return out

    def elements(self):
        """All elements in lexicographic coordinate order (finite groups only)."""
        if not self.is_finite:
            raise ValueError("cannot enumerate the infinite group %s" % self)
        return [GroupElement(self, (), tuple(t)) for t in itertools.product(*(range(d) for d in self.torsion))]

    def to_json(self):
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj.get("rank", 0)), tuple(obj.get("torsion", ())))

    def __str__(self):
        parts = ["Z"] * self.rank + ["Z/%d" % d for d in self.torsion]
        return " + ".join(parts) if parts else "trivial"


def Z(rank=1):
    return AbelianGroup(rank, ())


def cyclic(n):
    """Cyclic group of order ``n``; ``cyclic(0)`` is Z."""
    return AbelianGroup.from_orders(0, [n])


TRIVIAL = AbelianGroup()


@dataclass(frozen=True)
class GroupElement:
    group: AbelianGroup
    free: tuple
    torsion: tuple

    def __post_init__(self):
        g = self.group
        free = tuple(int(x) for x in self.free)
        tors = tuple(int(x) % d for x, d in zip(self.torsion, g.torsion))
        if len(free) != g.rank or len(tors) != len(g.torsion) or len(self.torsion) != len(g.torsion):
            raise ValueError("element shape does not match %s" % g)
        object.__setattr__(self, "free", free)
        object.__setattr__(self, "torsion", tors)

    def coords(self):
        return list(self.free) + list(self.torsion)

    def _check(self, other):
        if not isinstance(other, GroupElement) or other.group != self.group:
            raise TypeError("elements of different groups")

    def __add__(self, other):
        self._check(other)
        return GroupElement(
            self.group,
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
        )

    def __neg__(self):
        return GroupElement(self.group, tuple(-a for a in self.free), tuple(-a for a in self.torsion))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return GroupElement(self.group, tuple(k * a for a in self.free), tuple(k * a for a in self.torsion))

    __rmul__ = __mul__

    def is_zero(self):
        return not any(self.free) and not any(self.torsion)

    def order(self):
        """Additive order, or None for elements of infinite order."""
        if any(self.free):
            return None
        from math import gcd

        out = 1
        for a, d in zip(self.torsion, self.group.torsion):
            o = d // gcd(a, d)
            out = out * o // gcd(out, o)
        return out

    def key(self):
        return self.free + self.torsion

    def to_json(self):
        return {"free": list(self.free), "torsion": list(self.torsion)}

    def __str__(self):
        if self.group.is_trivial:
            return "0"
        return "(" + ", ".join(str(c) for c in self.coords()) + ")"

    __repr__ = __str__


def element_from_json(group, obj):
    if isinstance(obj, int):
        if group.ngens != 1:
            raise ValueError("integer shorthand needs a cyclic group, got %s" % group)
        return group.from_coords([obj])
    if isinstance(obj, list):
        return group.from_coords(obj)
    return group.element(obj.get("free", ()), obj.get("torsion", ()))


# --- homomorphisms -------------------------------------------------------------


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by the images of the source generators."""

    source: AbelianGroup
    target: AbelianGroup
    images: tuple

    def __post_init__(self):
        imgs = tuple(self.images)
        object.__setattr__(self, "images", imgs)
        if len(imgs) != self.source.ngens:
            raise ValueError("need one image per source generator")
        for im in imgs:
            if im.group != self.target:
                raise ValueError("image %s is not in %s" % (im, self.target))
        for d, im in zip(self.source.torsion, imgs[self.source.rank:]):
            if not (im * d).is_zero():
                raise ValueError("not well defined: a generator of order %d maps to %s" % (d, im))

    @classmethod
    def identity(cls, G):
        return cls(G, G, tuple(G.generators()))

    @classmethod
    def zero(cls, G, H):
        return cls(G, H, tuple(H.zero for _ in range(G.ngens)))

    @classmethod
    def from_matrix(cls, G, H, rows):
        return cls(G, H, tuple(H.from_coords(r) for r in rows))

    def __call__(self, x):
        if x.group != self.source:
            raise TypeError("%s is not in %s" % (x, self.source))
        out = self.target.zero
        for c, im in zip(x.coords(), self.images):
            if c:
                out = out + im * c
        return out

    def matrix(self):
        return [im.coords() for im in self.images]

    def compose(self, other):
        """``self`` after ``other``."""
        if other.target != self.source:
            raise TypeError("homomorphisms do not compose")
        return GroupHom(other.source, self.target, tuple(self(im) for im in other.images))

    def __neg__(self):
        return GroupHom(self.source, self.target, tuple(-im for im in self.images))

    def __add__(self, other):
        return GroupHom(self.source, self.target, tuple(a + b for a, b in zip(self.images, other.images)))

    def __sub__(self, other):
        return self + (-other)

    def key(self):
        return tuple(im.key() for im in self.images)

    def is_surjective(self):
        return subgroup_quotient(self.target, self.images).is_full

    def is_injective(self):
        return kernel(self).group.is_trivial

    def to_json(self):
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "images": [im.to_json() for im in self.images],
        }

    @classmethod
    def from_json(cls, obj):
        G = AbelianGroup.from_json(obj["source"])
        H = AbelianGroup.from_json(obj["target"])
        return cls(G, H, tuple(element_from_json(H, e) for e in obj["images"]))

    def __str__(self):
        return "%s -> %s: %s" % (self.source, self.target, ", ".join(map(str, self.images)))


# --- cokernels, subgroups, kernels ------------------------------------------


class Cokernel(NamedTuple):
    """``Z^n / rowspace(R)`` in canonical form.

    ``project`` maps an integer vector of length n to its class;
    ``section[j]`` is an integer vector representing generator j.
    """

    group: AbelianGroup
    project: Callable
    section: list


def cokernel(R, n):
    U, D, V, Vinv = _snf(R, n)
    diag = _diagonal(D)
    d = [diag[i] if i < len(diag) else 0 for i in range(n)]
    free_idx = [i for i in range(n) if d[i] == 0]
    tors_idx = [i for i in range(n) if d[i] > 1]
    G = AbelianGroup(len(free_idx), tuple(d[i] for i in tors_idx))

    def project(x):
        y = [sum(x[k] * V[k][j] for k in range(n)) for j in range(n)]
        return GroupElement(G, tuple(y[i] for i in free_idx), tuple(y[i] for i in tors_idx))

    section = [Vinv[i] for i in free_idx + tors_idx]
    return Cokernel(G, project, section)


class Subgroup(NamedTuple):
    group: AbelianGroup
    inclusion: GroupHom
    gens: tuple

    def contains(self, x):
        return express(self.inclusion.target, self.gens, x) is not None

    def preimage(self, x):
        """Coordinates of ``x`` in the canonical form of the subgroup."""
        G = self.inclusion.target
        c = express(G, self.gens, x)
        if c is None:
            return None
        return _subgroup_cokernel(G, self.gens).project(c)


def express(G, gens, h):
    """Integers ``c`` with ``sum(c_i * gens[i]) == h`` in ``G``, or None."""
    gens = list(gens)
    M = [g.coords() for g in gens] + G.relation_rows()
    z = _solve_left(M, G.ngens, h.coords())
    return None if z is None else z[: len(gens)]


def _subgroup_cokernel(G, gens):
    S = [g.coords() for g in gens]
    M = S + G.relation_rows()
    rels = [z[: len(S)] for z in _left_kernel(M, G.ngens)]
    return cokernel(rels, len(S))


def subgroup(G, gens):
    """Subgroup of ``G`` generated by ``gens`` with its inclusion map."""
    gens = tuple(gens)
    ck = _subgroup_cokernel(G, gens)
    images = []
    for c in ck.section:
        x = G.zero
        for ci, g in zip(c, gens):
            if ci:
                x = x + g * ci
        images.append(x)
    return Subgroup(ck.group, GroupHom(ck.group, G, tuple(images)), gens)


class QuotientResult(NamedTuple):
    is_full: bool
    quotient: AbelianGroup
    projection: GroupHom


def subgroup_quotient(G, gens):
    """Decide whether ``gens`` generate ``G``; return ``G/<gens>`` as well."""
    rows = G.relation_rows() + [g.coords() for g in gens]
    ck = cokernel(rows, G.ngens)
    proj = GroupHom(G, ck.group, tuple(ck.project(g.coords()) for g in G.generators()))
    return QuotientResult(ck.group.is_trivial, ck.group, proj)


def kernel(phi):
    G, H = phi.source, phi.target
    M = phi.matrix() + H.relation_rows()
    gens = [G.from_coords(z[: G.ngens]) for z in _left_kernel(M, H.ngens)]
    return subgroup(G, gens)


def image(phi):
    return subgroup(phi.target, phi.images)


class DirectSum(NamedTuple):
    group: AbelianGroup
    injections: list
    projections: list


def direct_sum(groups):
    groups = list(groups)
    n = sum(g.ngens for g in groups)
    offsets = list(itertools.accumulate([0] + [g.ngens for g in groups]))
    rows = []
    for off, g in zip(offsets, groups):
        for r in g.relation_rows():
            rows.append([0] * off + r + [0] * (n - off - len(r)))
    ck = cokernel(rows, n)
    S = ck.group
    injections = []
    for off, g in zip(offsets, groups):
        imgs = []
        for k in range(g.ngens):
            e = [0] * n
            e[off + k] = 1
            imgs.append(ck.project(e))
        injections.append(GroupHom(g, S, tuple(imgs)))
    projections = []
    for off, g in zip(offsets, groups):
        imgs = tuple(g.from_coords(sec[off: off + g.ngens]) for sec in ck.section)
        projections.append(GroupHom(S, g, imgs))
    return DirectSum(S, injections, projections)


# --- Hom groups -----------------------------------------------------------------


@dataclass
class HomSpace:
    """All homomorphisms ``source -> target``, as an abelian group.

    ``group`` is Hom(source, target) in canonical form and ``to_hom`` turns
    one of its elements into an actual :class:`GroupHom`.
    """

    source: AbelianGroup
    target: AbelianGroup
    group: AbelianGroup
    _sub: Subgroup = field(repr=False)
    _prod: DirectSum = field(repr=False)

    def to_hom(self, x):
        y = self._sub.inclusion(x)
        return GroupHom(self.source, self.target, tuple(p(y) for p in self._prod.projections))

    def generators(self):
        return [self.to_hom(g) for g in self.group.generators()]

    def homs(self):
        """Every homomorphism (finite Hom groups only)."""
        return [self.to_hom(x) for x in self.group.elements()]

    def is_trivial(self):
        return self.group.is_trivial


def hom_space(G, H):
    """Parametrize Hom(G, H) as the subgroup of H^ngens(G) cut out by torsion."""
    prod = direct_sum([H] * G.ngens)
    orders = list(G.torsion)
    cod = direct_sum([H] * len(orders))
    imgs = []
    for gen in prod.group.generators():
        parts = [p(gen) for p in prod.projections]
        out = cod.group.zero
        for i, d in enumerate(orders):
            out = out + cod.injections[i](parts[G.rank + i] * d)
        imgs.append(out)
    psi = GroupHom(prod.group, cod.group, tuple(imgs))
    sub = kernel(psi)
    return HomSpace(G, H, sub.group, sub, prod)


# --- limits of finite diagrams -------------------------------------------------


class Limit(NamedTuple):
    group: AbelianGroup
    projections: list


def diagram_limit(nodes: Sequence[AbelianGroup], arrows):
    """Limit of a finite diagram of abelian groups.

    ``arrows`` is a list of ``(i, j, hom)`` with ``hom: nodes[i] -> nodes[j]``.
    The result is the group of families ``(g_i)`` with ``hom(g_i) == g_j``
    for every arrow, i.e. the kernel of the difference map out of the
    product, together with the projections onto each node.
    """
    nodes = list(nodes)
    for i, j, h in arrows:
        if h.source != nodes[i] or h.target != nodes[j]:
            raise ValueError("arrow %d -> %d does not match its nodes" % (i, j))
    prod = direct_sum(nodes)
    cod = direct_sum([h.target for _, _, h in arrows])
    imgs = []
    for gen in prod.group.generators():
        parts = [p(gen) for p in prod.projections]
        out = cod.group.zero
        for k, (i, j, h) in enumerate(arrows):
            out = out + cod.injections[k](h(parts[i]) - parts[j])
        imgs.append(out)
    delta = GroupHom(prod.group, cod.group, tuple(imgs))
    sub = kernel(delta)
    projections = [p.compose(sub.inclusion) for p in prod.projections]
    return Limit(sub.group, projections)


# --- presentations ---------------------------------------------------------------


def free_reduce(word):
    out = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def invert_word(word):
    return tuple((g, -e) for g, e in reversed(word))


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple
    relators: tuple = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate generator names")
        rels = []
        for w in self.relators:
            w = tuple((g, int(e)) for g, e in w)
            for g, e in w:
                if g not in gens:
                    raise ValueError("relator mentions undeclared generator %r" % (g,))
                if e not in (1, -1):
                    raise ValueError("exponents must be +1 or -1")
            rels.append(free_reduce(w))
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(rels))

    def to_json(self):
        return {
            "generators": list(self.generators),
            "relators": [[[g, e] for g, e in w] for w in self.relators],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(obj["generators"]), tuple(tuple((g, e) for g, e in w) for w in obj["relators"]))

    def __str__(self):
        def word(w):
            if not w:
                return "1"
            return "*".join(g if e == 1 else g + "^-1" for g, e in w)

        return "< %s | %s >" % (", ".join(self.generators), ", ".join(word(w) for w in self.relators))


class Abelianization(NamedTuple):
    group: AbelianGroup
    generator_images: dict

    def project(self, word):
        out = self.group.zero
        for g, e in word:
            out = out + self.generator_images[g] * e
        return out


def abelianize(p: GroupPresentation):
    idx = {g: i for i, g in enumerate(p.generators)}
    n = len(p.generators)
    rows = []
    for w in p.relators:
        row = [0] * n
        for g, e in w:
            row[idx[g]] += e
        rows.append(row)
    ck = cokernel(rows, n)
    images = {}
    for g, i in idx.items():
        e = [0] * n
        e[i] = 1
        images[g] = ck.project(e)
    return Abelianization(ck.group, images)
