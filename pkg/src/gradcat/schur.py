"""Schurian morphisms, Schurian-generated closure, minimal relations and the
universal grading of a constricted Schurian-generated presentation.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from . import grpkit, scalars
from .errors import NotConnectedResult, NotConstricted, NotSG, TooManyPaths
from .grading import Grading, is_connected_grading, validate_grading
from .grpkit import GroupPresentation, abelianize, invert_word
from .linrep import Morphism, PresentedCategory

PATH_CAP = 20


def schurian_morphisms(cat: PresentedCategory):
    """Hom spaces ``(x, y)`` of dimension exactly one."""
    return [k for k in cat.pairs() if cat.hom_dim(*k) == 1]


@dataclass
class SGClosure:
    spaces: dict  # (x, y) -> echelon basis of the subspace (quotient coordinates)
    is_sg: bool

    def dim(self, x, y):
        return len(self.spaces[x, y])

    def contains(self, m: Morphism) -> bool:
        rows = self.spaces[m.source, m.target]
        n = len(m.coords)
        return scalars.rank(list(rows) + [list(m.coords)], n) == len(rows)


def sg_closure(cat: PresentedCategory) -> SGClosure:
    """Least family of subspaces containing the 1-dimensional hom spaces and
    closed under composition."""
    spaces = {}
    for k in cat.pairs():
        n = cat.hom_dim(*k)
        spaces[k] = [list(cat.basis_morphism(*k, 0).coords)] if n == 1 else []
    objs = cat.objects
    changed = True
    while changed:
        changed = False
        for x, y, z in itertools.product(objs, repeat=3):
            if not spaces[x, y] or not spaces[y, z]:
                continue
            n = cat.hom_dim(x, z)
            new = list(spaces[x, z])
            for f in spaces[y, z]:
                for g in spaces[x, y]:
                    h = cat.compose(Morphism(y, z, tuple(f)), Morphism(x, y, tuple(g)))
                    if not h.is_zero():
                        new.append(list(h.coords))
            red, _ = scalars.rref(new, n)
            if len(red) > len(spaces[x, z]):
                spaces[x, z] = red
                changed = True
    is_sg = all(len(spaces[k]) == cat.hom_dim(*k) for k in cat.pairs())
    return SGClosure(spaces, is_sg)


class ConstrictedReport(NamedTuple):
    ok: bool
    arrow: str | None = None
    path: object = None

    def __bool__(self):
        return self.ok


def is_constricted(cat: PresentedCategory) -> ConstrictedReport:
    """Every path strictly parallel to an arrow must vanish in the quotient."""
    for a in cat.quiver.arrows:
        for p in cat.paths(a.src, a.tgt):
            if p.arrows == (a.id,):
                continue
            if not cat.path_morphism(p).is_zero():
                return ConstrictedReport(False, a.id, p)
    return ConstrictedReport(True)


# --- homogeneity partitions -------------------------------------------------------


@dataclass
class HomogeneityPartition:
    source: str
    target: str
    paths: tuple
    blocks: tuple  # tuples of path indices
    circuits: tuple  # supports of the minimal relations

    def path_blocks(self):
        return [[self.paths[i] for i in b] for b in self.blocks]


def _ideal_rows(cat, x, y):
    return [list(r) for r in cat.homs[x, y].ideal]


def circuits(rows, n, field):
    """Supports of the support-minimal nonzero vectors in the row space."""
    r = len(rows)
    found = []
    if r == 0:
        return found
    for size in range(1, n + 1):
        for S in itertools.combinations(range(n), size):
            s = set(S)
            if any(c <= s for c in found):
                continue
            outside = [j for j in range(n) if j not in s]
            cols = [[row[j] for j in outside] for row in rows]
            if scalars.rank(cols, len(outside)) < r:
                found.append(frozenset(S))
    return found


def homogeneity_partition(cat, x, y, cap=PATH_CAP) -> HomogeneityPartition:
    """Finest partition of the paths ``x -> y`` splitting the ideal as a
    direct sum; blocks are connected components of minimal-relation supports.
    """
    paths = cat.paths(x, y)
    n = len(paths)
    rows = _ideal_rows(cat, x, y)
    if n > cap and rows:
        raise TooManyPaths("%d paths from %s to %s exceed the cap of %d" % (n, x, y, cap))
    circ = circuits(rows, n, cat.field)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for c in circ:
        c = sorted(c)
        for j in c[1:]:
            a, b = find(c[0]), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    blocks = tuple(tuple(g) for g in sorted(groups.values()))
    part = HomogeneityPartition(x, y, tuple(paths), blocks, tuple(tuple(sorted(c)) for c in circ))
    if not splits_ideal(rows, n, blocks):
        raise AssertionError("partition from circuits does not split the ideal")
    return part


def splits_ideal(rows, n, blocks):
    """Does the ideal contain the projection of each of its vectors on each block?"""
    r = scalars.rank(list(rows), n)
    for row in rows:
        for b in blocks:
            proj = [row[j] if j in b else row[j] * 0 for j in range(n)]
            if scalars.rank(list(rows) + [proj], n) != r:
                return False
    return True


# --- presentation fundamental group and the universal grading ----------------------


def spanning_tree_arrows(cat, b0):
    """Arrows of a breadth-first spanning tree of the quiver's underlying graph."""
    q = cat.quiver
    seen = {b0}
    tree = set()
    queue = deque([b0])
    while queue:
        v = queue.popleft()
        for a in q.arrows:
            if a.src == v and a.tgt not in seen:
                other = a.tgt
            elif a.tgt == v and a.src not in seen:
                other = a.src
            else:
                continue
            seen.add(other)
            tree.add(a.id)
            queue.append(other)
    if seen != set(q.vertices):
        from .errors import Disconnected

        raise Disconnected("quiver is not connected")
    return tree


def _symbol(aid):
    return "g_" + aid


def path_word(p, tree):
    """Word of a path in the chord symbols, in the order the arrows are applied."""
    return tuple((_symbol(a), 1) for a in reversed(p.arrows) if a not in tree)


def presentation_group(cat: PresentedCategory, b0=None) -> GroupPresentation:
    """Fundamental group of the presentation (minimal-relation homotopy).

    One generator per arrow outside a spanning tree; one relator
    ``word(p) word(q)^-1`` for every pair of paths sharing a block of a
    homogeneity partition.  Depends on the presentation, not only on the
    category.
    """
    b0 = b0 or cat.objects[0]
    tree = spanning_tree_arrows(cat, b0)
    gens = tuple(_symbol(a.id) for a in cat.quiver.arrows if a.id not in tree)
    rels = []
    for x, y in cat.pairs():
        if not cat.homs[x, y].ideal:
            continue
        part = homogeneity_partition(cat, x, y)
        for block in part.blocks:
            for i, j in itertools.combinations(block, 2):
                w = grpkit.free_reduce(path_word(part.paths[i], tree) + invert_word(path_word(part.paths[j], tree)))
                if w:
                    rels.append(w)
    return GroupPresentation(gens, tuple(rels))


class UniversalGrading(NamedTuple):
    presentation: GroupPresentation
    grading: Grading


def universal_grading(cat: PresentedCategory, b0=None) -> UniversalGrading:
    """Universal grading of a constricted Schurian-generated presentation.

    Arrows in the spanning tree get degree 0; every other arrow gets the
    class of its own generator in the abelianized presentation group.
    """
    b0 = b0 or cat.objects[0]
    if not sg_closure(cat).is_sg:
        raise NotSG("category is not Schurian generated")
    rep = is_constricted(cat)
    if not rep.ok:
        raise NotConstricted("path %s is strictly parallel to arrow %s" % (rep.path, rep.arrow), witness=rep)
    pres = presentation_group(cat, b0)
    ab = abelianize(pres)
    tree = spanning_tree_arrows(cat, b0)
    degs = {
        a.id: ab.group.zero if a.id in tree else ab.generator_images[_symbol(a.id)] for a in cat.quiver.arrows
    }
    U = Grading.from_arrow_degrees(cat, ab.group, degs, name="universal")
    rep = validate_grading(U)
    if not rep.ok:
        raise NotConnectedResult("constructed grading is invalid: %s" % rep.violations[0].detail)
    if not is_connected_grading(U, b0):
        raise NotConnectedResult("constructed grading is not connected")
    return UniversalGrading(pres, U)
