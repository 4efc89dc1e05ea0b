"""Validated finite-category kernel.

A finite category is stored as dense integer tables: objects are
``0..n-1``, morphisms are ``0..m-1`` with dom/cod arrays, an identity
morphism per object and a total composition table on composable pairs.
Everything downstream (limit solving, completions, checkers) assumes a
category that passed :func:`validate_category`, so hom-sets are
precomputed here once and never mutated afterwards.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field


class CategoryError(Exception):
    """Base class for structural errors raised by this package."""


class MalformedTable(CategoryError):
    """Raw tables reference dangling ids or miss a required composite."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(v[0] + ": " + str(v[1:]) for v in self.violations))


class LawViolation(CategoryError):
    """A category law (identity, associativity, typing) fails."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(v[0] + ": " + str(v[1:]) for v in self.violations))


class UnknownObject(CategoryError):
    pass


class UnknownMorphism(CategoryError):
    pass


class NotComposable(CategoryError):
    pass


@dataclass(frozen=True)
class FiniteCategory:
    """A finite category with dense integer ids and precomputed hom-sets.

    ``compose_table[g][f]`` is ``g o f`` when ``cod(f) == dom(g)`` and -1
    otherwise.  Instances are immutable; the hom caches are filled at
    construction time, so values are safe to share across threads.
    """

    num_objects: int
    dom: tuple[int, ...]
    cod: tuple[int, ...]
    identity: tuple[int, ...]
    compose_table: tuple[tuple[int, ...], ...]
    _hom: dict = field(default_factory=dict, compare=False, repr=False)
    _into: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self._hom:
            hom = {}
            for f in range(len(self.dom)):
                hom.setdefault((self.dom[f], self.cod[f]), []).append(f)
            for key, val in hom.items():
                self._hom[key] = tuple(val)
            for b in range(self.num_objects):
                self._into[b] = tuple(
                    f for f in range(len(self.dom)) if self.cod[f] == b
                )

    @property
    def objects(self) -> range:
        return range(self.num_objects)

    @property
    def num_morphisms(self) -> int:
        return len(self.dom)

    @property
    def morphisms(self) -> range:
        return range(len(self.dom))

    def hom(self, a: int, b: int) -> tuple[int, ...]:
        return self._hom.get((a, b), ())

    def morphisms_into(self, b: int) -> tuple[int, ...]:
        return self._into[b]

    def compose(self, g: int, f: int) -> int:
        """Return ``g o f``; raises NotComposable when cod(f) != dom(g)."""
        h = self.compose_table[g][f]
        if h < 0:
            raise NotComposable(f"cod of {f} is {self.cod[f]}, dom of {g} is {self.dom[g]}")
        return h

    def is_identity(self, f: int) -> bool:
        return self.identity[self.dom[f]] == f

    def check_object(self, x: int) -> None:
        if not 0 <= x < self.num_objects:
            raise UnknownObject(x)

    def check_morphism(self, f: int) -> None:
        if not 0 <= f < len(self.dom):
            raise UnknownMorphism(f)


def validate_category(num_objects, dom, cod, identity, compose) -> FiniteCategory:
    """Check raw tables and return a :class:`FiniteCategory`.

    ``compose`` maps pairs ``(g, f)`` with ``cod(f) == dom(g)`` to ``g o f``;
    it must be total on exactly the composable pairs.  Violations are
    collected and raised together: dangling ids and missing/extra
    composites as :class:`MalformedTable`, broken identity/associativity/
    typing laws as :class:`LawViolation`, each naming the offending ids.
    """
    dom = tuple(dom)
    cod = tuple(cod)
    identity = tuple(identity)
    num_morphisms = len(dom)
    malformed = []
    if len(cod) != num_morphisms:
        malformed.append(("table-shape", len(dom), len(cod)))
    if len(identity) != num_objects:
        malformed.append(("identity-shape", num_objects, len(identity)))
    for f in range(num_morphisms):
        if not 0 <= dom[f] < num_objects:
            malformed.append(("dangling-dom", f, dom[f]))
        if not 0 <= cod[f] < num_objects:
            malformed.append(("dangling-cod", f, cod[f]))
    for x, i in enumerate(identity):
        if not 0 <= i < num_morphisms:
            malformed.append(("dangling-identity", x, i))
    if malformed:
        raise MalformedTable(malformed)

    for (g, f), h in compose.items():
        if not (0 <= f < num_morphisms and 0 <= g < num_morphisms and 0 <= h < num_morphisms):
            malformed.append(("dangling-composite", g, f, h))
    if malformed:
        raise MalformedTable(malformed)
    for g in range(num_morphisms):
        for f in range(num_morphisms):
            if cod[f] == dom[g]:
                if (g, f) not in compose:
                    malformed.append(("missing-composite", g, f))
            elif (g, f) in compose:
                malformed.append(("spurious-composite", g, f))
    if malformed:
        raise MalformedTable(malformed)

    violations = []
    for x, i in enumerate(identity):
        if dom[i] != x or cod[i] != x:
            violations.append(("identity-endpoints", x, i))
    if violations:
        raise LawViolation(violations)
    for (g, f), h in compose.items():
        if dom[h] != dom[f] or cod[h] != cod[g]:
            violations.append(("composite-typing", g, f, h))
    for f in range(num_morphisms):
        if compose[(f, identity[dom[f]])] != f:
            violations.append(("right-identity", f))
        if compose[(identity[cod[f]], f)] != f:
            violations.append(("left-identity", f))
    for h in range(num_morphisms):
        for g in range(num_morphisms):
            if cod[g] != dom[h]:
                continue
            hg = compose[(h, g)]
            for f in range(num_morphisms):
                if cod[f] != dom[g]:
                    continue
                if compose[(h, compose[(g, f)])] != compose[(hg, f)]:
                    violations.append(("associativity", h, g, f))
    if violations:
        raise LawViolation(violations)

    table = [[-1] * num_morphisms for _ in range(num_morphisms)]
    for (g, f), h in compose.items():
        table[g][f] = h
    return FiniteCategory(
        num_objects=num_objects,
        dom=dom,
        cod=cod,
        identity=identity,
        compose_table=tuple(tuple(row) for row in table),
    )


def build_category(num_objects, arrows, compose_fn=None, compose=None) -> FiniteCategory:
    """Assemble and validate a category from non-identity arrow data.

    ``arrows`` is a list of (dom, cod) pairs; identities are created
    automatically and get the first ids (one per object, in object order).
    Composition of non-identity pairs comes either from ``compose_fn``
    (called with the two arrow indices *as positioned in the final table*)
    or from an explicit ``compose`` dict over final ids.
    """
    dom = list(range(num_objects)) + [a for a, _ in arrows]
    cod = list(range(num_objects)) + [b for _, b in arrows]
    identity = list(range(num_objects))
    m = len(dom)
    table = {}
    for g in range(m):
        for f in range(m):
            if cod[f] != dom[g]:
                continue
            if f < num_objects:
                table[(g, f)] = g
            elif g < num_objects:
                table[(g, f)] = f
            elif compose_fn is not None:
                table[(g, f)] = compose_fn(g, f)
            else:
                table[(g, f)] = compose[(g, f)]
    return validate_category(num_objects, dom, cod, identity, table)


@dataclass(frozen=True)
class MorphismFlags:
    mono: bool
    epi: bool
    split_mono: bool
    split_epi: bool
    iso: bool


def classify_morphism(K: FiniteCategory, f: int) -> MorphismFlags:
    """Classify ``f`` by exhaustive cancellation and one-sided-inverse search."""
    K.check_morphism(f)
    a, b = K.dom[f], K.cod[f]
    mono = True
    for x in K.objects:
        pairs = K.hom(x, a)
        for g, h in itertools.combinations(pairs, 2):
            if K.compose(f, g) == K.compose(f, h):
                mono = False
                break
        if not mono:
            break
    epi = True
    for y in K.objects:
        pairs = K.hom(b, y)
        for g, h in itertools.combinations(pairs, 2):
            if K.compose(g, f) == K.compose(h, f):
                epi = False
                break
        if not epi:
            break
    split_mono = any(K.compose(r, f) == K.identity[a] for r in K.hom(b, a))
    split_epi = any(K.compose(f, s) == K.identity[b] for s in K.hom(b, a))
    return MorphismFlags(
        mono=mono,
        epi=epi,
        split_mono=split_mono,
        split_epi=split_epi,
        iso=split_mono and split_epi,
    )


def is_iso(K: FiniteCategory, f: int) -> bool:
    a, b = K.dom[f], K.cod[f]
    return any(
        K.compose(r, f) == K.identity[a] and K.compose(f, r) == K.identity[b]
        for r in K.hom(b, a)
    )


def dual_category(K: FiniteCategory) -> FiniteCategory:
    """The formal dual: same ids, dom/cod swapped, composition transposed."""
    m = K.num_morphisms
    compose = {}
    for g in range(m):
        for f in range(m):
            if K.dom[f] == K.cod[g]:
                compose[(g, f)] = K.compose_table[f][g]
    return validate_category(K.num_objects, K.cod, K.dom, K.identity, compose)


@dataclass(frozen=True)
class FunctorData:
    """A functor between finite categories, given by its two maps."""

    source: FiniteCategory
    target: FiniteCategory
    object_map: tuple[int, ...]
    morphism_map: tuple[int, ...]

    def __post_init__(self):
        S, T = self.source, self.target
        violations = []
        if len(self.object_map) != S.num_objects or len(self.morphism_map) != S.num_morphisms:
            raise MalformedTable([("functor-shape",)])
        for x in self.object_map:
            T.check_object(x)
        for f, ff in enumerate(self.morphism_map):
            T.check_morphism(ff)
            if T.dom[ff] != self.object_map[S.dom[f]] or T.cod[ff] != self.object_map[S.cod[f]]:
                violations.append(("functor-endpoints", f))
        for x in S.objects:
            if self.morphism_map[S.identity[x]] != T.identity[self.object_map[x]]:
                violations.append(("functor-identity", x))
        for g in S.morphisms:
            for f in S.morphisms:
                if S.cod[f] != S.dom[g]:
                    continue
                lhs = self.morphism_map[S.compose_table[g][f]]
                rhs = T.compose(self.morphism_map[g], self.morphism_map[f])
                if lhs != rhs:
                    violations.append(("functor-composition", g, f))
        if violations:
            raise LawViolation(violations)

    def is_faithful(self) -> bool:
        S = self.source
        seen = set()
        for f in S.morphisms:
            key = (S.dom[f], S.cod[f], self.morphism_map[f])
            if key in seen:
                return False
            seen.add(key)
        return True


@dataclass(frozen=True)
class Diagram:
    """A diagram in an ambient category: a shape plus a labeling functor."""

    shape: FiniteCategory
    labeling: FunctorData

    def __post_init__(self):
        if self.labeling.source is not self.shape and self.labeling.source != self.shape:
            raise MalformedTable([("diagram-shape-mismatch",)])

    @property
    def ambient(self) -> FiniteCategory:
        return self.labeling.target


def diagram_from_graph(K: FiniteCategory, node_labels, edges) -> Diagram:
    """Build the diagram generated by a labeled multigraph.

    ``edges`` is a list of (src-node, dst-node, morphism-id) with matching
    endpoints.  The shape is the category generated inside K: its
    morphisms between two nodes are the K-values of all paths, so the
    labeling is a genuine functor even when the graph has cycles.
    """
    n = len(node_labels)
    for x in node_labels:
        K.check_object(x)
    for s, t, f in edges:
        K.check_morphism(f)
        if K.dom[f] != node_labels[s] or K.cod[f] != node_labels[t]:
            raise MalformedTable([("edge-label-endpoints", s, t, f)])
    # Path values per node pair, closed under postcomposition with edges.
    values = {(x, x): {K.identity[node_labels[x]]} for x in range(n)}
    changed = True
    while changed:
        changed = False
        for s, t, f in edges:
            for (x, y), vals in list(values.items()):
                if y != s:
                    continue
                bucket = values.setdefault((x, t), set())
                for v in vals:
                    w = K.compose(f, v)
                    if w not in bucket:
                        bucket.add(w)
                        changed = True
    arrows = []
    arrow_value = []
    for x in range(n):
        for y in range(n):
            for v in sorted(values.get((x, y), ())):
                if x == y and v == K.identity[node_labels[x]]:
                    continue
                arrows.append((x, y))
                arrow_value.append(v)

    def compose_fn(g, f):
        v = K.compose(arrow_value[g - n], arrow_value[f - n])
        x = arrows[f - n][0]
        y = arrows[g - n][1]
        if v == K.identity[node_labels[x]] and x == y:
            return x
        return n + next(
            i for i, (a, val) in enumerate(zip(arrows, arrow_value))
            if a == (x, y) and val == v
        )

    shape = build_category(n, arrows, compose_fn=compose_fn)
    object_map = tuple(node_labels)
    morphism_map = tuple(
        [K.identity[node_labels[x]] for x in range(n)] + arrow_value
    )
    return Diagram(shape=shape, labeling=FunctorData(shape, K, object_map, morphism_map))


def empty_diagram(K: FiniteCategory) -> Diagram:
    return diagram_from_graph(K, [], [])


def discrete_diagram(K: FiniteCategory, labels) -> Diagram:
    return diagram_from_graph(K, list(labels), [])


def cospan_diagram(K: FiniteCategory, f: int, g: int) -> Diagram:
    """Shape x -> z <- y labeled by two morphisms with a common codomain."""
    if K.cod[f] != K.cod[g]:
        raise NotComposable((f, g))
    return diagram_from_graph(
        K, [K.dom[f], K.dom[g], K.cod[f]], [(0, 2, f), (1, 2, g)]
    )


@dataclass(frozen=True)
class SliceCategory:
    """The slice over an anchor object, with maps back to base ids."""

    base: FiniteCategory
    anchor: int
    category: FiniteCategory
    object_to_base: tuple[int, ...]
    morphism_to_base: tuple[int, ...]

    def projection(self) -> FunctorData:
        return FunctorData(
            source=self.category,
            target=self.base,
            object_map=tuple(self.base.dom[f] for f in self.object_to_base),
            morphism_map=self.morphism_to_base,
        )


def slice_category(K: FiniteCategory, anchor: int) -> SliceCategory:
    """Objects are morphisms into ``anchor``; morphisms are commuting triangles."""
    K.check_object(anchor)
    objs = list(K.morphisms_into(anchor))
    obj_index = {f: i for i, f in enumerate(objs)}
    arrows = []
    arrow_base = []
    for i, f in enumerate(objs):
        for j, g in enumerate(objs):
            for h in K.hom(K.dom[f], K.dom[g]):
                if K.compose(g, h) == f and h != K.identity[K.dom[f]]:
                    arrows.append((i, j))
                    arrow_base.append(h)
    n = len(objs)

    def compose_fn(g, f):
        h = K.compose(arrow_base[g - n], arrow_base[f - n])
        i = arrows[f - n][0]
        j = arrows[g - n][1]
        if i == j and h == K.identity[K.dom[objs[i]]]:
            return i
        return n + next(
            k for k, (a, hb) in enumerate(zip(arrows, arrow_base))
            if a == (i, j) and hb == h
        )

    cat = build_category(n, arrows, compose_fn=compose_fn)
    morphism_to_base = tuple(
        [K.identity[K.dom[f]] for f in objs] + arrow_base
    )
    return SliceCategory(
        base=K,
        anchor=anchor,
        category=cat,
        object_to_base=tuple(objs),
        morphism_to_base=morphism_to_base,
    )


def initial_objects(K: FiniteCategory) -> list[int]:
    return [
        x for x in K.objects
        if all(len(K.hom(x, y)) == 1 for y in K.objects)
    ]


def is_strict_initial(K: FiniteCategory, x: int) -> bool:
    """Initial, and anything mapping into it is itself initial."""
    K.check_object(x)
    inits = set(initial_objects(K))
    if x not in inits:
        return False
    for f in K.morphisms_into(x):
        if K.dom[f] not in inits:
            return False
    return True


def categories_isomorphic(K: FiniteCategory, L: FiniteCategory) -> bool:
    """Decide isomorphism by backtracking over object bijections.

    Intended for small fixtures (<= 8 objects); hom-set size profiles
    prune the object search, morphism bijections are filled in per
    hom-set and checked against identities and composition.
    """
    if K.num_objects != L.num_objects or K.num_morphisms != L.num_morphisms:
        return False

    def hom_profile(C, x):
        row = sorted(len(C.hom(x, y)) for y in C.objects)
        col = sorted(len(C.hom(y, x)) for y in C.objects)
        return (row, col, len(C.hom(x, x)))

    kp = [hom_profile(K, x) for x in K.objects]
    lp = [hom_profile(L, x) for x in L.objects]

    for perm in itertools.permutations(L.objects):
        if any(kp[x] != lp[perm[x]] for x in K.objects):
            continue
        if _morphism_bijection_exists(K, L, perm):
            return True
    return False


def _morphism_bijection_exists(K, L, perm) -> bool:
    hom_pairs = []
    for a in K.objects:
        for b in K.objects:
            hk = K.hom(a, b)
            hl = L.hom(perm[a], perm[b])
            if len(hk) != len(hl):
                return False
            if hk:
                hom_pairs.append((hk, hl))

    assignment = {}

    def extend(idx):
        if idx == len(hom_pairs):
            return _functor_laws_hold(K, L, perm, assignment)
        hk, hl = hom_pairs[idx]
        for images in itertools.permutations(hl):
            ok = True
            for f, ff in zip(hk, images):
                if K.is_identity(f) != L.is_identity(ff):
                    ok = False
                    break
            if not ok:
                continue
            for f, ff in zip(hk, images):
                assignment[f] = ff
            if _partial_composition_ok(K, L, assignment) and extend(idx + 1):
                return True
            for f in hk:
                del assignment[f]
        return False

    return extend(0)


def _partial_composition_ok(K, L, assignment) -> bool:
    for g in assignment:
        for f in assignment:
            if K.cod[f] != K.dom[g]:
                continue
            h = K.compose_table[g][f]
            if h in assignment:
                if L.compose(assignment[g], assignment[f]) != assignment[h]:
                    return False
    return True


def _functor_laws_hold(K, L, perm, assignment) -> bool:
    for g in K.morphisms:
        for f in K.morphisms:
            if K.cod[f] != K.dom[g]:
                continue
            if L.compose(assignment[g], assignment[f]) != assignment[K.compose_table[g][f]]:
                return False
    return True
