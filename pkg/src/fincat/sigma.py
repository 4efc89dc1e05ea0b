"""The free coproduct completion of a finite category.

Objects are finite families of base objects (index set = positions
``0..n-1``); a morphism is an index function together with one base
component per position.  Coproducts concatenate, pullbacks/products/
exponentials and the subobject classifier are built from the base
category's multi-limit calculus.  The completion is infinite even for a
finite base, so every "for all objects" quantification downstream is
truncated to families of bounded size; constructions themselves are
exact.

Morphism equality is on the nose (same index function, same component
ids); isomorphism-invariant comparisons go through the explicit search
helpers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import CategoryError, FiniteCategory, classify_morphism, is_iso
from .limits import (
    Cone,
    MultiLimitResult,
    MultiUniversalFamily,
    NoMultiLimit,
    NotProductComplete,
    ProductsWithLeft,
    multi_exponential,
    multi_product,
    multi_terminal_objects,
    pullback,
)


class NotComposableSigma(CategoryError):
    pass


class NotMono(CategoryError):
    pass


class NotAClassifier(CategoryError):
    def __init__(self, witness, reason=""):
        self.witness = witness
        super().__init__(reason or f"witness {witness}")


class NotFinitelyComplete(CategoryError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"missing finite limit: {witness}")


@dataclass(frozen=True)
class SigmaObject:
    family: tuple[int, ...]

    def __len__(self):
        return len(self.family)


@dataclass(frozen=True)
class SigmaMorphism:
    dom: SigmaObject
    cod: SigmaObject
    index_map: tuple[int, ...]
    components: tuple[int, ...]


def sigma_object(K: FiniteCategory, family) -> SigmaObject:
    fam = tuple(family)
    for x in fam:
        K.check_object(x)
    return SigmaObject(fam)


def sigma_morphism(K, dom: SigmaObject, cod: SigmaObject, index_map, components) -> SigmaMorphism:
    index_map = tuple(index_map)
    components = tuple(components)
    if len(index_map) != len(dom) or len(components) != len(dom):
        raise CategoryError("index/component arity mismatch")
    for i, (j, c) in enumerate(zip(index_map, components)):
        if not 0 <= j < len(cod):
            raise CategoryError(f"index {j} out of range at position {i}")
        if K.dom[c] != dom.family[i] or K.cod[c] != cod.family[j]:
            raise CategoryError(f"component {c} has wrong endpoints at position {i}")
    return SigmaMorphism(dom, cod, index_map, components)


def sigma_identity(K, A: SigmaObject) -> SigmaMorphism:
    return SigmaMorphism(
        A, A,
        tuple(range(len(A))),
        tuple(K.identity[x] for x in A.family),
    )


def sigma_compose(K, g: SigmaMorphism, f: SigmaMorphism) -> SigmaMorphism:
    if f.cod != g.dom:
        raise NotComposableSigma((g, f))
    index_map = tuple(g.index_map[j] for j in f.index_map)
    components = tuple(
        K.compose(g.components[f.index_map[i]], f.components[i])
        for i in range(len(f.dom))
    )
    return SigmaMorphism(f.dom, g.cod, index_map, components)


def sigma_hom(K, A: SigmaObject, B: SigmaObject) -> list[SigmaMorphism]:
    """All morphisms A -> B, positionwise choices in (index, component) order."""
    per_position = []
    for x in A.family:
        choices = []
        for j, y in enumerate(B.family):
            for c in K.hom(x, y):
                choices.append((j, c))
        if not choices:
            return []
        per_position.append(choices)
    out = []
    for combo in itertools.product(*per_position):
        out.append(SigmaMorphism(
            A, B,
            tuple(j for j, _ in combo),
            tuple(c for _, c in combo),
        ))
    return out


def all_families(K, max_size: int) -> list[SigmaObject]:
    fams = []
    for n in range(max_size + 1):
        for fam in itertools.product(K.objects, repeat=n):
            fams.append(SigmaObject(fam))
    return fams


def sigma_is_mono(K, f: SigmaMorphism) -> bool:
    if len(set(f.index_map)) != len(f.index_map):
        return False
    return all(classify_morphism(K, c).mono for c in f.components)


def sigma_is_epi(K, f: SigmaMorphism) -> bool:
    if set(f.index_map) != set(range(len(f.cod))):
        return False
    return all(classify_morphism(K, c).epi for c in f.components)


def sigma_is_iso(K, f: SigmaMorphism) -> bool:
    if sorted(f.index_map) != list(range(len(f.cod))):
        return False
    return all(is_iso(K, c) for c in f.components)


def sigma_objects_isomorphic(K, A: SigmaObject, B: SigmaObject) -> bool:
    if len(A) != len(B):
        return False
    return any(sigma_is_iso(K, h) for h in sigma_hom(K, A, B))


def sigma_coproduct(K, parts: list[SigmaObject]):
    """Concatenated family plus the evident injections."""
    family = tuple(x for p in parts for x in p.family)
    total = SigmaObject(family)
    injections = []
    offset = 0
    for p in parts:
        injections.append(SigmaMorphism(
            p, total,
            tuple(range(offset, offset + len(p))),
            tuple(K.identity[x] for x in p.family),
        ))
        offset += len(p)
    return total, injections


@dataclass(frozen=True)
class NoPullback:
    witness: tuple[int, int]


def sigma_pullback(K, f: SigmaMorphism, g: SigmaMorphism):
    """Pullback computed indexwise: matched index pairs, base pullbacks per pair.

    Returns (apex, p, q) or NoPullback carrying the base cospan that lacks
    a singleton pullback.
    """
    if f.cod != g.cod:
        raise NotComposableSigma((f, g))
    pairs = []
    data = []
    for ia in range(len(f.dom)):
        for ib in range(len(g.dom)):
            if f.index_map[ia] != g.index_map[ib]:
                continue
            pb = pullback(K, f.components[ia], g.components[ib])
            if pb is None:
                return NoPullback(witness=(f.components[ia], g.components[ib]))
            pairs.append((ia, ib))
            data.append(pb)
    apex = SigmaObject(tuple(d[0] for d in data))
    p = SigmaMorphism(
        apex, f.dom,
        tuple(ia for ia, _ in pairs),
        tuple(d[1] for d in data),
    )
    q = SigmaMorphism(
        apex, g.dom,
        tuple(ib for _, ib in pairs),
        tuple(d[2] for d in data),
    )
    return apex, p, q


def check_sigma_pullback_ump(K, f, g, apex, p, q, bound: int) -> bool:
    """Oracle: every competing square with apex family <= bound factors once."""
    for D in all_families(K, bound):
        for u in sigma_hom(K, D, f.dom):
            fu = sigma_compose(K, f, u)
            for v in sigma_hom(K, D, g.dom):
                if fu != sigma_compose(K, g, v):
                    continue
                hits = [
                    h for h in sigma_hom(K, D, apex)
                    if sigma_compose(K, p, h) == u and sigma_compose(K, q, h) == v
                ]
                if len(hits) != 1:
                    return False
    return True


@dataclass(frozen=True)
class ProductBlock:
    choice: tuple[int, ...]
    offset: int
    result: MultiLimitResult


@dataclass(frozen=True)
class SigmaProductResult:
    factors: tuple[SigmaObject, ...]
    obj: SigmaObject
    projections: tuple[SigmaMorphism, ...]
    blocks: tuple[ProductBlock, ...]


@dataclass(frozen=True)
class NoProduct:
    choice: tuple[int, ...]
    detail: NoMultiLimit


def sigma_product(K, parts: list[SigmaObject]):
    """Product of families: one base multi-product per choice function.

    For each choice function picking one position per factor, the base
    multi-product of the chosen objects contributes a block of members;
    the product family is the concatenation over all choice functions.
    Returns NoProduct naming the first failing choice function.
    """
    parts = tuple(parts)
    choices = list(itertools.product(*(range(len(p)) for p in parts)))
    blocks = []
    family = []
    offset = 0
    for phi in choices:
        labels = [parts[i].family[phi[i]] for i in range(len(parts))]
        res = multi_product(K, labels)
        if isinstance(res, NoMultiLimit):
            return NoProduct(choice=phi, detail=res)
        blocks.append(ProductBlock(choice=phi, offset=offset, result=res))
        family.extend(c.apex for c in res.cones)
        offset += len(res.cones)
    obj = SigmaObject(tuple(family))
    projections = []
    for i, part in enumerate(parts):
        index_map = []
        components = []
        for block in blocks:
            for cone in block.result.cones:
                index_map.append(block.choice[i])
                components.append(cone.legs[i])
        projections.append(SigmaMorphism(obj, part, tuple(index_map), tuple(components)))
    return SigmaProductResult(
        factors=parts, obj=obj, projections=tuple(projections), blocks=tuple(blocks)
    )


def induce_into_product(K, prod: SigmaProductResult, legs: list[SigmaMorphism]) -> SigmaMorphism:
    """The unique h: C -> product with projection o h = legs, via certificates."""
    if len(legs) != len(prod.factors):
        raise CategoryError("leg count mismatch")
    C = legs[0].dom if legs else None
    if C is None:
        raise CategoryError("empty products need an explicit source; use sigma_hom")
    block_by_choice = {b.choice: b for b in prod.blocks}
    index_map = []
    components = []
    for pos in range(len(C)):
        phi = tuple(leg.index_map[pos] for leg in legs)
        block = block_by_choice[phi]
        cone = Cone(apex=C.family[pos],
                    legs=tuple(leg.components[pos] for leg in legs))
        member, h = block.result.certificate[block.result.all_cones.index(cone)]
        index_map.append(block.offset + member)
        components.append(h)
    return SigmaMorphism(C, prod.obj, tuple(index_map), tuple(components))


def check_sigma_product_ump(K, prod: SigmaProductResult, bound: int) -> bool:
    """Oracle: every cone from a bounded family factors through exactly one member."""
    for C in all_families(K, bound):
        legs_spaces = [sigma_hom(K, C, f) for f in prod.factors]
        for legs in itertools.product(*legs_spaces):
            hits = [
                h for h in sigma_hom(K, C, prod.obj)
                if all(
                    sigma_compose(K, pi, h) == leg
                    for pi, leg in zip(prod.projections, legs)
                )
            ]
            if len(hits) != 1:
                return False
    return True


def sigma_binary_product(K, A: SigmaObject, B: SigmaObject):
    res = sigma_product(K, [A, B])
    if isinstance(res, NoProduct):
        raise NotProductComplete((A.family[res.choice[0]], B.family[res.choice[1]]))
    return res


@dataclass(frozen=True)
class SigmaExponentialResult:
    base: SigmaObject
    target: SigmaObject
    obj: SigmaObject
    ev: SigmaMorphism
    product: SigmaProductResult


@dataclass(frozen=True)
class NoExponential:
    witness: object


def _single_exponential_family(K, a: int, B: SigmaObject):
    """[a, B] for a base object a: one multi-universal family per target member.

    Returns (family object, tags) where tags[pos] = (target position j,
    ev component a x obj -> B_j), or the offending NoFamily.
    """
    family = []
    tags = []
    for j, b in enumerate(B.family):
        fam = multi_exponential(K, a, b)
        if not isinstance(fam, MultiUniversalFamily):
            return None, fam
        for obj, ev in fam.pairs:
            family.append(obj)
            tags.append((j, ev))
    return SigmaObject(tuple(family)), tags


def sigma_exponential(K, A: SigmaObject, B: SigmaObject):
    """Exponential [A, B] with its evaluation, or NoExponential with a witness.

    Per-member exponentials are glued over the target family first; a
    multi-member base is finished with a product over its positions.
    """
    singles = []
    for a in A.family:
        obj, tags = _single_exponential_family(K, a, B)
        if obj is None:
            return NoExponential(witness=tags)
        singles.append((obj, tags))
    prod = sigma_product(K, [obj for obj, _ in singles])
    if isinstance(prod, NoProduct):
        return NoExponential(witness=prod)
    exp_obj = prod.obj
    base_prod = sigma_product(K, [A, exp_obj])
    if isinstance(base_prod, NoProduct):
        return NoExponential(witness=base_prod)
    lifters = {a: ProductsWithLeft(K, a) for a in set(A.family)}
    index_map = []
    components = []
    for pos in range(len(base_prod.obj)):
        l = base_prod.projections[0].index_map[pos]
        a = A.family[l]
        left_leg = base_prod.projections[0].components[pos]
        right_leg = base_prod.projections[1].components[pos]
        member = base_prod.projections[1].index_map[pos]
        _, tags = singles[l]
        inner_proj = prod.projections[l]
        inner_member = inner_proj.index_map[member]
        inner_comp = inner_proj.components[member]
        j, ev = tags[inner_member]
        # position object is a x P_member; pair into a x E_inner, then evaluate
        paired = lifters[a].pair(left_leg, K.compose(inner_comp, right_leg))
        index_map.append(j)
        components.append(K.compose(ev, paired))
    ev_mor = sigma_morphism(K, base_prod.obj, B, index_map, components)
    return SigmaExponentialResult(
        base=A, target=B, obj=exp_obj, ev=ev_mor, product=base_prod
    )


def exponential_transpose_apply(K, exp: SigmaExponentialResult, cbar: SigmaMorphism) -> SigmaMorphism:
    """Send cbar: C -> [A,B] to ev o (A x cbar): A x C -> B."""
    A = exp.base
    C = cbar.dom
    axc = sigma_binary_product(K, A, C)
    a_leg = axc.projections[0]
    lifted = induce_into_product(
        K, exp.product, [a_leg, sigma_compose(K, cbar, axc.projections[1])]
    )
    return sigma_compose(K, exp.ev, lifted)


def check_exponential_bijection(K, exp: SigmaExponentialResult, C: SigmaObject) -> bool:
    """|hom(A x C, B)| = |hom(C, [A,B])| realized by evaluation composition."""
    axc = sigma_binary_product(K, exp.base, C)
    direct = {(m.index_map, m.components) for m in sigma_hom(K, axc.obj, exp.target)}
    images = [exponential_transpose_apply(K, exp, cbar)
              for cbar in sigma_hom(K, C, exp.obj)]
    image_keys = {(m.index_map, m.components) for m in images}
    return len(images) == len(image_keys) and image_keys == direct


def finitely_complete_witness(K):
    """None when K has a terminal object and all pullbacks, else a witness."""
    res = multi_terminal_objects(K)
    if not isinstance(res, MultiLimitResult) or len(res.cones) != 1:
        return ("terminal",)
    for f in K.morphisms:
        for g in K.morphisms:
            if K.cod[f] != K.cod[g]:
                continue
            if pullback(K, f, g) is None:
                return ("pullback", f, g)
    return None


def _bang(K, x: int, terminal: int) -> int:
    h = K.hom(x, terminal)
    if len(h) != 1:
        raise NotFinitelyComplete(("terminal", x))
    return h[0]


def _is_k_pullback_square(K, f, g, eps, terminal) -> bool:
    """Is (dom f, f, !) the pullback of g: B -> Omega along eps: 1 -> Omega?"""
    a, b = K.dom[f], K.cod[f]
    if K.compose(g, f) != K.compose(eps, _bang(K, a, terminal)):
        return False
    for d_obj in K.objects:
        for d in K.hom(d_obj, b):
            if K.compose(g, d) != K.compose(eps, _bang(K, d_obj, terminal)):
                continue
            hits = [u for u in K.hom(d_obj, a) if K.compose(f, u) == d]
            if len(hits) != 1:
                return False
    return True


def validate_base_classifier(K, eps: int) -> dict[int, int]:
    """Exhaustively confirm eps: 1 -> Omega classifies every base mono.

    Returns the map mono id -> unique characteristic morphism id; raises
    NotAClassifier with the first unclassifiable mono.
    """
    from .limits import terminal_object

    terminal = terminal_object(K)
    if terminal is None or K.dom[eps] != terminal:
        raise NotAClassifier(eps, "domain of the truth arrow is not terminal")
    omega = K.cod[eps]
    if not classify_morphism(K, eps).mono:
        raise NotAClassifier(eps, "truth arrow is not monic")
    char = {}
    for f in K.morphisms:
        if not classify_morphism(K, f).mono:
            continue
        b = K.cod[f]
        hits = [g for g in K.hom(b, omega)
                if _is_k_pullback_square(K, f, g, eps, terminal)]
        if len(hits) != 1:
            raise NotAClassifier(f, f"mono {f} has {len(hits)} characteristic maps")
        char[f] = hits[0]
    return char


def search_base_classifier(K):
    """Exhaustive (Omega, eps) search; None when no classifier exists."""
    from .limits import terminal_object

    terminal = terminal_object(K)
    if terminal is None:
        return None
    for omega in K.objects:
        for eps in K.hom(terminal, omega):
            try:
                char = validate_base_classifier(K, eps)
            except NotAClassifier:
                continue
            return eps, char
    return None


@dataclass(frozen=True)
class SigmaClassifier:
    """The subobject classifier of the completion, built from a base one.

    The truth object is the two-member family (Omega, 1); monos are
    classified positionwise through the base characteristic maps, with
    missed positions sent to the 1-member.
    """

    eps: int
    omega: int
    terminal: int
    char: dict
    omega_obj: SigmaObject
    unit: SigmaObject
    truth: SigmaMorphism


def sigma_subobject_classifier(K, eps: int | None = None) -> SigmaClassifier:
    """Build the classifier of the completion from a validated base one.

    When ``eps`` is None an exhaustive search over candidate truth arrows
    runs first (intended for small fixtures).  Raises NotFinitelyComplete
    or NotAClassifier accordingly.
    """
    wit = finitely_complete_witness(K)
    if wit is not None:
        raise NotFinitelyComplete(wit)
    if eps is None:
        found = search_base_classifier(K)
        if found is None:
            raise NotAClassifier(None, "no (Omega, eps) candidate classifies all monos")
        eps, char = found
    else:
        char = validate_base_classifier(K, eps)
    from .limits import terminal_object

    terminal = terminal_object(K)
    omega = K.cod[eps]
    unit = SigmaObject((terminal,))
    omega_obj = SigmaObject((omega, terminal))
    truth = SigmaMorphism(unit, omega_obj, (0,), (eps,))
    return SigmaClassifier(
        eps=eps, omega=omega, terminal=terminal, char=char,
        omega_obj=omega_obj, unit=unit, truth=truth,
    )


def classify_sigma_mono(K, cls: SigmaClassifier, f: SigmaMorphism) -> SigmaMorphism:
    """Characteristic morphism cod(f) -> (Omega, 1) of a mono of the completion."""
    if not sigma_is_mono(K, f):
        raise NotMono(f)
    position_of = {j: i for i, j in enumerate(f.index_map)}
    index_map = []
    components = []
    for j, b in enumerate(f.cod.family):
        if j in position_of:
            index_map.append(0)
            components.append(cls.char[f.components[position_of[j]]])
        else:
            index_map.append(1)
            components.append(_bang(K, b, cls.terminal))
    return sigma_morphism(K, f.cod, cls.omega_obj, index_map, components)


def is_sigma_characteristic(K, cls: SigmaClassifier, f: SigmaMorphism, chi: SigmaMorphism) -> bool:
    """Does chi make (dom f, f, !) the pullback of the truth arrow?

    Decided exactly by computing the pullback of (chi, truth) and
    comparing it with f as a subobject of cod(f).
    """
    res = sigma_pullback(K, chi, cls.truth)
    if isinstance(res, NoPullback):
        return False
    apex, p, _ = res
    if len(apex) != len(f.dom):
        return False
    for h in sigma_hom(K, f.dom, apex):
        if sigma_is_iso(K, h) and sigma_compose(K, p, h) == f:
            return True
    return False
