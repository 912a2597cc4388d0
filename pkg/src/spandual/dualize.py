"""Span-based dualization of fibrations over a product: the associated
adequate triple, the dual fibration with its edge classification, fibre
preservation, the double-dual round trip, and compatibility with
straightening."""

from __future__ import annotations

from .errors import InvalidTriple, MissingCartesianLifts, NotOrtho
from .fincat import (
    FinCat,
    FinFunctor,
    compose_functors,
    equivalent_over_base,
    opposite,
    opposite_functor,
    pair_obj,
    product,
    _split_pair,
)
from .fibrations import FibredFunctor, classify, edge_types
from .grothendieck import straighten_cc, straighten_ortho, unstraighten_cc
from .triplespan import (
    AdequateTriple,
    SpanCategory,
    TripleMap,
    perp_triple,
    span_functor,
    span_homotopy_category,
    triple_from_fibration,
)


def build_dual_triple(p: FibredFunctor) -> AdequateTriple:
    """The triple (X, p^{-1}(A×ιB), X†) on the total category, where X† is
    spanned by the p-cartesian edges over ιA×B; requires cartesian lifts
    over B."""
    return triple_from_fibration(p.proj, perp_triple(p.base_a, p.base_b))


def perp_span_iso(cat_a: FinCat, cat_b: FinCat, span_cat: SpanCategory) -> FinFunctor:
    """The constructed isomorphism Span(A×B^⊥) ≅ A×B^op.

    A span (a,b) ← (a0,b0) → (a',b') with egressive left leg (iso A-component)
    and ingressive right leg (iso B-component) is sent to the pair of its
    composite components (a → a', b' → b)."""
    prod_op, _, _ = product(cat_a, opposite(cat_b))
    object_map = {x: x for x in span_cat.fincat.objects}
    morphism_map = {}
    for name, span in span_cat.spans.items():
        carrier = span_cat.triple.carrier
        l_a, l_b = _split_pair(span.left)
        r_a, r_b = _split_pair(span.right)
        a_component = cat_a.compose(r_a, cat_a.inverse(l_a))
        b_component = cat_b.compose(l_b, cat_b.inverse(r_b))
        morphism_map[name] = pair_obj(a_component, b_component)
    functor = FinFunctor(span_cat.fincat, prod_op, object_map, morphism_map)
    functor.validate()
    if len(set(morphism_map.values())) != len(morphism_map) or len(morphism_map) != len(
        prod_op.morphisms
    ):
        raise InvalidTriple("perpendicular span comparison is not bijective")
    return functor


class DualResult:
    """The dual fibration: span homotopy category of the associated triple,
    projected onto A × B^op through the perpendicular span comparison."""

    def __init__(
        self,
        original: FibredFunctor,
        triple: AdequateTriple,
        span_cat: SpanCategory,
        fibred: FibredFunctor,
        span_proj: FinFunctor,
    ):
        self.original = original
        self.triple = triple
        self.span_cat = span_cat
        self.fibred = fibred
        self.span_proj = span_proj

    @property
    def total(self) -> FinCat:
        return self.fibred.total

    @property
    def proj(self) -> FinFunctor:
        return self.fibred.proj


def dual_cc(p: FibredFunctor) -> DualResult:
    """Dualize a fibration with cartesian lifts over B into one with
    cocartesian lifts over B^op, without opposing the fibres."""
    triple = build_dual_triple(p)
    span_cat = span_homotopy_category(triple, check=False)
    if not span_cat.rigid:
        raise InvalidTriple(
            "span automorphisms are nontrivial; homotopy-category truncation unsound"
        )
    base_perp = perp_triple(p.base_a, p.base_b)
    perp_spans = span_homotopy_category(base_perp, check=False)
    tm = TripleMap(triple, base_perp, p.proj)
    sp = span_functor(tm, span_cat, perp_spans)
    comparison = perp_span_iso(p.base_a, p.base_b, perp_spans)
    proj = compose_functors(comparison, sp)
    fibred = FibredFunctor(span_cat.fincat, p.base_a, opposite(p.base_b), proj)
    return DualResult(p, triple, span_cat, fibred, sp)


def _opposite_fibred(p: FibredFunctor) -> FibredFunctor:
    total_op = opposite(p.total)
    base_a_op = opposite(p.base_a)
    base_b_op = opposite(p.base_b)
    prod_op, _, _ = product(base_a_op, base_b_op)
    proj = FinFunctor(total_op, prod_op, dict(p.proj.object_map), dict(p.proj.morphism_map))
    return FibredFunctor(total_op, base_a_op, base_b_op, proj)


def dual_ct(q: FibredFunctor) -> DualResult:
    """Dualize a fibration with cocartesian lifts over B: the composite
    opposite∘dual_cc∘opposite."""
    q_op = _opposite_fibred(q)
    inner = dual_cc(q_op)
    fibred = _opposite_fibred(inner.fibred)
    return DualResult(q, inner.triple, inner.span_cat, fibred, inner.span_proj)


def classify_dual_edge(dual: DualResult, m: str) -> dict:
    """Classify a dual edge by the leg types of its canonical span and
    cross-check against direct edge detection on the dual projection.

    Labels: "iso" (both legs invertible), "dual-cocartesian" (cartesian left
    leg, invertible right leg, over ιA×B^op), "dual-l-cocartesian" and
    "dual-l-cartesian" (invertible left leg, p_l-co/cartesian right leg)."""
    span = dual.span_cat.spans[m]
    p = dual.original
    carrier = p.total
    left_iso = carrier.is_iso(span.left)
    right_iso = carrier.is_iso(span.right)
    p_l = p.restriction("l")
    l_types = edge_types(p_l)
    labels = []
    if left_iso and right_iso:
        labels.append("iso")
    if right_iso and span.left in dual.triple.egressives:
        labels.append("dual-cocartesian")
    if left_iso and span.right in l_types and l_types[span.right].cocartesian:
        labels.append("dual-l-cocartesian")
    if left_iso and span.right in l_types and l_types[span.right].cartesian:
        labels.append("dual-l-cartesian")

    dual_types = dual.fibred.edge_types()
    dl = dual.fibred.restriction("l")
    dl_types = edge_types(dl)
    checks = {}
    if "iso" in labels:
        checks["iso"] = dual.total.is_iso(m)
    if "dual-cocartesian" in labels:
        checks["dual-cocartesian"] = (
            dual_types[m].cocartesian and dual.fibred.base_of(m) in dual.fibred.over_b()
        )
    if "dual-l-cocartesian" in labels:
        checks["dual-l-cocartesian"] = m in dl_types and dl_types[m].cocartesian
    if "dual-l-cartesian" in labels:
        checks["dual-l-cartesian"] = m in dl_types and dl_types[m].cartesian
    return {"labels": labels, "edge_type_agreement": checks}


def fiber_preservation_check(p: FibredFunctor, dual: DualResult):
    """Check p^{-1}(a,b) ≅ Dual(p)^{-1}(a,b) for every (a,b), via the
    degenerate-span embedding; returns (ok, witness)."""
    from .triplespan import Span, _canonical_span, span_name

    carrier = p.total
    for a in p.base_a.objects:
        for b in p.base_b.objects:
            fiber = p.fiber(a, b)
            dual_fiber = dual.fibred.fiber(a, b)
            if set(fiber.objects) != set(dual_fiber.objects):
                return False, (a, b, "object mismatch")
            image = {}
            for phi, (x, y) in fiber.morphisms.items():
                canon = _canonical_span(
                    carrier, Span(x, y, x, carrier.identity[x], phi)
                )
                name = span_name(canon)
                if name not in dual_fiber.morphisms:
                    return False, (a, b, phi, "image not in dual fibre")
                image[phi] = name
            if len(set(image.values())) != len(image):
                return False, (a, b, "embedding not injective")
            if len(image) != len(dual_fiber.morphisms):
                return False, (a, b, "embedding not surjective")
            embedding = FinFunctor(
                fiber, dual_fiber, {x: x for x in fiber.objects}, image
            )
            embedding.validate()
    return True, None


def double_dual_check(p: FibredFunctor, budget=None) -> bool:
    """Whether dual_ct(dual_cc(p)) is equivalent to p over A×B."""
    d1 = dual_cc(p)
    d2 = dual_ct(d1.fibred)
    return equivalent_over_base(d2.proj, p.proj, budget) is not None


def diagrams_equivalent(d1, d2, budget=None) -> bool:
    """Diagram equivalence tested through the Grothendieck construction:
    the unstraightenings must be equivalent over the shared index."""
    if d1.index != d2.index:
        return False
    r1 = unstraighten_cc(d1)
    r2 = unstraighten_cc(d2)
    return equivalent_over_base(r1.proj, r2.proj, budget) is not None


def straightening_compatibility_check(p: FibredFunctor, budget=None) -> bool:
    """Compare the straightening through the dual cocartesian fibration with
    the direct two-step orthocartesian straightening."""
    report = classify(p)
    if not report.ortho:
        raise NotOrtho("straightening compatibility requires an orthofibration")
    via_dual = straighten_cc(dual_cc(p).proj)
    direct = straighten_ortho(p)
    return diagrams_equivalent(via_dual, direct, budget)
