"""Deterministic instance generators shared by the acceptance suite and the
tests: poset zoos, adequate triples, fibration corpora, lax transformations
with adjunctions, and monoidal examples."""

from __future__ import annotations

import itertools
import random

from .fincat import (
    FinCat,
    FinFunctor,
    NatTrans,
    compose_functors,
    enumerate_functors,
    find_isomorphism,
    identity_functor,
    opposite,
    pair_obj,
    product,
)
from .errors import IncoherentDiagram
from .fibrations import FibredFunctor
from .grothendieck import CatDiagram, constant_diagram, product_diagram, strict_diagram, unstraighten_ortho
from .mates import Adjunction, Collage, LaxTransformation, find_left_adjoint
from .monoidal import LaxMonFunctor, StrictMonCat
from .shapes import arrow_category, discrete, parallel_pair, poset_category, simplex, walking_iso
from .triplespan import AdequateTriple, validate_triple


def all_posets(max_objects: int):
    """All posets with at most max_objects elements, one per isomorphism
    class, ordered by size then by a canonical relation signature."""
    result = []
    for n in range(1, max_objects + 1):
        seen = []
        elements = [str(i) for i in range(n)]
        comparable_pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        for mask in itertools.product([False, True], repeat=len(comparable_pairs)):
            rel = {(i, i) for i in range(n)}
            rel.update(p for p, keep in zip(comparable_pairs, mask) if keep)
            if any((j, i) in rel for (i, j) in rel if i != j):
                continue
            transitive = all(
                ((i, l) in rel)
                for (i, j) in rel
                for (k, l) in rel
                if j == k
            )
            if not transitive:
                continue
            cat = poset_category(elements, lambda x, y, r=rel: (int(x), int(y)) in r)
            if any(find_isomorphism(cat, other) is not None for other in seen):
                continue
            seen.append(cat)
        result.extend(seen)
    return result


def closed_morphism_classes(cat: FinCat):
    """All wide subcategory member sets: subsets containing the isomorphisms
    and closed under composition."""
    mandatory = frozenset(f for f in cat.morphisms if cat.is_iso(f))
    optional = [f for f in cat.morphisms if f not in mandatory]
    classes = []
    for mask in itertools.product([False, True], repeat=len(optional)):
        members = set(mandatory)
        members.update(f for f, keep in zip(optional, mask) if keep)
        if all(
            gf in members
            for (g, f), gf in cat.composition.items()
            if g in members and f in members
        ):
            classes.append(frozenset(members))
    return classes


def adequate_triples_on(cat: FinCat):
    """Every valid adequate triple structure on the given carrier."""
    classes = closed_morphism_classes(cat)
    triples = []
    for ing in classes:
        for egr in classes:
            triple = AdequateTriple(cat, ing, egr)
            ok, _ = validate_triple(triple)
            if ok:
                triples.append(triple)
    return triples


def fiber_pool():
    return [simplex(0), simplex(1), discrete(["0", "1"]), walking_iso()]


def base_pairs():
    """Base pairs (A, B) whose product has at most two non-identity arrows,
    plus the two-variable pair used for curry-order checks."""
    pt = simplex(0)
    seg = simplex(1)
    vee = poset_category(["0", "1", "2"], lambda x, y: x == y or x == "0")
    disc = discrete(["0", "1"])
    return [
        ("pt_pt", pt, pt),
        ("seg_pt", seg, pt),
        ("pt_seg", pt, seg),
        ("vee_pt", vee, pt),
        ("pt_vee", pt, vee),
        ("disc_seg", disc, seg),
        ("seg_disc", seg, disc),
    ]


def strict_diagrams_over(base_a: FinCat, base_b: FinCat, pool=None, limit: int | None = None, seed: int = 0):
    """Strict diagrams A×B^op → Cat with values in the pool, enumerated
    deterministically; when a limit is given, a seeded sample is returned."""
    if pool is None:
        pool = fiber_pool()
    base_bop = opposite(base_b)
    index, _, _ = product(base_a, base_bop)
    nonid = [m for m in index.morphisms if not index.is_identity(m)]
    diagrams = []
    pool_functors = {}

    def functors_between(i, j):
        if (i, j) not in pool_functors:
            pool_functors[(i, j)] = list(enumerate_functors(pool[i], pool[j]))
        return pool_functors[(i, j)]

    object_choices = list(itertools.product(range(len(pool)), repeat=len(index.objects)))
    for obj_choice in object_choices:
        values = {a: pool[i] for a, i in zip(index.objects, obj_choice)}
        pool_of = dict(zip(index.objects, obj_choice))
        options = []
        for m in nonid:
            src, tgt = index.morphisms[m]
            options.append(functors_between(pool_of[src], pool_of[tgt]))
        if any(not opts for opts in options):
            continue
        for arrow_choice in itertools.product(*options):
            arrows = dict(zip(nonid, arrow_choice))
            for a in index.objects:
                arrows[index.identity[a]] = identity_functor(values[a])
            try:
                diagrams.append(strict_diagram(index, values, arrows))
            except IncoherentDiagram:
                continue
    if limit is not None and len(diagrams) > limit:
        rng = random.Random(seed)
        diagrams = rng.sample(diagrams, limit)
    return diagrams


def ortho_corpus(limit_per_pair: int = 24, seed: int = 0):
    """Named orthofibration-candidates: unstraightenings of strict diagrams
    over the small base pairs plus a seeded batch over [1]×[1]."""
    instances = []
    for name, base_a, base_b in base_pairs():
        for k, diagram in enumerate(
            strict_diagrams_over(base_a, base_b, limit=limit_per_pair, seed=seed)
        ):
            p = unstraighten_ortho(diagram, base_a, base_b)
            instances.append((f"{name}_{k}", p, diagram, base_a, base_b))
    seg = simplex(1)
    for k, diagram in enumerate(two_by_two_diagrams(limit=6, seed=seed)):
        p = unstraighten_ortho(diagram, seg, seg)
        instances.append((f"square_{k}", p, diagram, seg, seg))
    return instances


def two_by_two_diagrams(limit: int = 6, seed: int = 0):
    """Strict diagrams over [1]×[1]^op with small poset fibers, found by
    enumerating transports that satisfy interchange on the nose."""
    seg = simplex(1)
    pool = [simplex(0), simplex(1)]
    found = []
    for vals in itertools.product(range(len(pool)), repeat=4):
        values = {
            ("0", "0"): pool[vals[0]],
            ("0", "1"): pool[vals[1]],
            ("1", "0"): pool[vals[2]],
            ("1", "1"): pool[vals[3]],
        }
        push_opts_0 = list(enumerate_functors(values[("0", "0")], values[("1", "0")]))
        push_opts_1 = list(enumerate_functors(values[("0", "1")], values[("1", "1")]))
        pull_opts_0 = list(enumerate_functors(values[("0", "1")], values[("0", "0")]))
        pull_opts_1 = list(enumerate_functors(values[("1", "1")], values[("1", "0")]))
        for push0, push1, pull0, pull1 in itertools.product(
            push_opts_0, push_opts_1, pull_opts_0, pull_opts_1
        ):
            if compose_functors(push0, pull0) != compose_functors(pull1, push1):
                continue
            try:
                diagram = product_diagram(
                    seg,
                    seg,
                    values,
                    {("0<=1", "0"): push0, ("0<=1", "1"): push1},
                    {("0<=1", "0"): pull0, ("0<=1", "1"): pull1},
                )
            except IncoherentDiagram:
                continue
            found.append(diagram)
    rng = random.Random(seed)
    if len(found) > limit:
        found = rng.sample(found, limit)
    return found


def arrow_fibration(cat: FinCat) -> FibredFunctor:
    ar, proj = arrow_category(cat)
    return FibredFunctor(ar, cat, cat, proj)


def identity_fibration(base_a: FinCat, base_b: FinCat) -> FibredFunctor:
    prod, _, _ = product(base_a, base_b)
    return FibredFunctor(prod, base_a, base_b, identity_functor(prod))


def non_ortho_collage() -> FibredFunctor:
    """A local orthofibration over [1]×[1] with a non-invertible interpolating
    edge: the collage of a lax cell pushing everything to the top."""
    seg = simplex(1)
    const_top = FinFunctor(
        seg, seg, {"0": "1", "1": "1"}, {"id_0": "id_1", "id_1": "id_1", "0<=1": "id_1"}
    )
    x_diag = CatDiagram(
        seg,
        {"0": seg, "1": seg},
        {"id_0": identity_functor(seg), "id_1": identity_functor(seg), "0<=1": const_top},
    )
    y_diag = constant_diagram(seg, seg)
    components = {a: identity_functor(seg) for a in seg.objects}
    cells = {}
    for f in seg.morphisms:
        src = compose_functors(y_diag.arrows[f], components[seg.source(f)])
        tgt = compose_functors(components[seg.target(f)], x_diag.arrows[f])
        cells[f] = NatTrans(
            src, tgt, {x: seg.hom(src.object_map[x], tgt.object_map[x])[0] for x in seg.objects}
        )
    rho = LaxTransformation(x_diag, y_diag, components, cells)
    return Collage(rho).fibred


def missing_lift_fibration() -> FibredFunctor:
    """Two fibre points over [1]×[0] with no arrow between them: cartesian over
    the trivial factor, but no cocartesian lifts over the segment."""
    seg, pt = simplex(1), simplex(0)
    total = discrete(["x", "y"])
    return FibredFunctor.from_components(
        total,
        seg,
        pt,
        {"x": pair_obj("0", "0"), "y": pair_obj("1", "0")},
        {"id_x": pair_obj("id_0", "id_0"), "id_y": pair_obj("id_1", "id_0")},
    )


def rcart_corpus(seed: int = 0):
    """Fibrations with cartesian lifts over B: the ortho corpus, arrow
    fibrations, identity fibrations, and a non-ortho collage."""
    instances = [(name, p) for name, p, _, _, _ in ortho_corpus(seed=seed)]
    instances.append(("arrow_seg", arrow_fibration(simplex(1))))
    instances.append(("arrow_two", arrow_fibration(simplex(2))))
    instances.append(("arrow_iso", arrow_fibration(walking_iso())))
    instances.append(("identity_seg_seg", identity_fibration(simplex(1), simplex(1))))
    instances.append(("identity_iso_seg", identity_fibration(walking_iso(), simplex(1))))
    instances.append(("collage_nonortho", non_ortho_collage()))
    return instances


def taxonomy_corpus(seed: int = 0):
    """Instances for the fibration-taxonomy laws, including ones that are not
    in RCart at all."""
    instances = rcart_corpus(seed=seed)
    instances.append(("missing_lifts", missing_lift_fibration()))
    pp = parallel_pair()
    prod, _, _ = product(simplex(1), simplex(0))
    proj = FinFunctor(
        pp,
        prod,
        {"0": pair_obj("0", "0"), "1": pair_obj("1", "0")},
        {
            "id_0": pair_obj("id_0", "id_0"),
            "id_1": pair_obj("id_1", "id_0"),
            "u": pair_obj("0<=1", "id_0"),
            "v": pair_obj("0<=1", "id_0"),
        },
    )
    instances.append(("parallel_over_seg", FibredFunctor(pp, simplex(1), simplex(0), proj)))
    return instances


# -- lax transformation corpus ----------------------------------------------


def _poset_diagram(base: FinCat, values, arrows) -> CatDiagram:
    full_arrows = dict(arrows)
    for a in base.objects:
        full_arrows[base.identity[a]] = identity_functor(values[a])
    return strict_diagram(base, values, full_arrows)


def lax_corpus(base: FinCat, limit: int = 10, seed: int = 0):
    """Lax transformations over a poset base whose components admit left
    adjoints, with the witnessing adjunctions; cells are forced in poset
    fibres, so coherence is automatic once they exist."""
    pool = [simplex(1), simplex(2)]
    rng = random.Random(seed)
    nonid = [f for f in base.morphisms if not base.is_identity(f)]
    instances = []

    pool_functors = {}

    def functors_between(i, j):
        if (i, j) not in pool_functors:
            pool_functors[(i, j)] = list(enumerate_functors(pool[i], pool[j]))
        return pool_functors[(i, j)]

    choices = list(itertools.product(range(len(pool)), repeat=2 * len(base.objects)))
    rng.shuffle(choices)
    for choice in choices:
        if len(instances) >= limit:
            break
        x_vals = {a: pool[choice[i]] for i, a in enumerate(base.objects)}
        y_vals = {
            a: pool[choice[len(base.objects) + i]] for i, a in enumerate(base.objects)
        }
        x_of = {a: choice[i] for i, a in enumerate(base.objects)}
        y_of = {a: choice[len(base.objects) + i] for i, a in enumerate(base.objects)}
        component_options = {}
        ok = True
        for a in base.objects:
            adjointable = [
                g
                for g in functors_between(x_of[a], y_of[a])
                if find_left_adjoint(g) is not None
            ]
            if not adjointable:
                ok = False
                break
            component_options[a] = adjointable
        if not ok:
            continue
        arrow_options = []
        for f in nonid:
            a, a2 = base.morphisms[f]
            pairs = [
                (fx, fy)
                for fx in functors_between(x_of[a], x_of[a2])
                for fy in functors_between(y_of[a], y_of[a2])
            ]
            arrow_options.append(pairs)
        if any(not opts for opts in arrow_options):
            continue
        for comp_choice in itertools.product(*(component_options[a] for a in base.objects)):
            if len(instances) >= limit:
                break
            components = dict(zip(base.objects, comp_choice))
            for arrow_choice in itertools.product(*arrow_options):
                x_arrows = {f: fx for f, (fx, _) in zip(nonid, arrow_choice)}
                y_arrows = {f: fy for f, (_, fy) in zip(nonid, arrow_choice)}
                try:
                    x_diag = _poset_diagram(base, x_vals, x_arrows)
                    y_diag = _poset_diagram(base, y_vals, y_arrows)
                except IncoherentDiagram:
                    continue
                cells = {}
                valid = True
                for f in base.morphisms:
                    a, a2 = base.morphisms[f]
                    src = compose_functors(y_diag.arrows[f], components[a])
                    tgt = compose_functors(components[a2], x_diag.arrows[f])
                    comps = {}
                    for x in x_vals[a].objects:
                        hom = y_vals[a2].hom(src.object_map[x], tgt.object_map[x])
                        if not hom:
                            valid = False
                            break
                        comps[x] = hom[0]
                    if not valid:
                        break
                    cells[f] = NatTrans(src, tgt, comps)
                if not valid:
                    continue
                rho = LaxTransformation(x_diag, y_diag, components, cells)
                try:
                    rho.validate()
                except Exception:
                    continue
                adjunctions = {a: find_left_adjoint(components[a]) for a in base.objects}
                instances.append((rho, adjunctions))
                break
    return instances


# -- monoidal corpus ---------------------------------------------------------


def max_monoidal(cat: FinCat) -> StrictMonCat:
    """A chain poset with join as tensor and the bottom as unit."""
    prod, _, _ = product(cat, cat)
    obj = {
        pair_obj(x, y): str(max(int(x), int(y)))
        for x in cat.objects
        for y in cat.objects
    }
    mor = {}
    for f in cat.morphisms:
        for h in cat.morphisms:
            sx, tx = cat.morphisms[f]
            sy, ty = cat.morphisms[h]
            s, t = obj[pair_obj(sx, sy)], obj[pair_obj(tx, ty)]
            mor[pair_obj(f, h)] = cat.identity[s] if s == t else f"{s}<={t}"
    return StrictMonCat(cat, FinFunctor(prod, cat, obj, mor), "0")


def join_square_monoidal() -> StrictMonCat:
    """The four-element boolean lattice with componentwise join."""
    sq, pa, pb = product(simplex(1), simplex(1))

    def join(x, y):
        xa, xb = x[1], x[3]
        ya, yb = y[1], y[3]
        return pair_obj(str(max(int(xa), int(ya))), str(max(int(xb), int(yb))))

    prod2, _, _ = product(sq, sq)
    obj = {pair_obj(x, y): join(x, y) for x in sq.objects for y in sq.objects}
    mor = {}
    for f in sq.morphisms:
        for h in sq.morphisms:
            s = obj[pair_obj(sq.source(f), sq.source(h))]
            t = obj[pair_obj(sq.target(f), sq.target(h))]
            hom = sq.hom(s, t)
            mor[pair_obj(f, h)] = hom[0]
    return StrictMonCat(sq, FinFunctor(prod2, sq, obj, mor), pair_obj("0", "0"))


def monoidal_pool():
    return [
        ("chain1", max_monoidal(simplex(1))),
        ("chain2", max_monoidal(simplex(2))),
        ("chain3", max_monoidal(simplex(3))),
        ("square", join_square_monoidal()),
    ]


def lax_monoidal_corpus(limit: int = 12, seed: int = 0):
    """Lax monoidal right adjoints between the pool monoidal posets: the lax
    structure is the forced comparison in the thin carrier."""
    instances = []
    pool = monoidal_pool()
    for (name_c, mon_c), (name_d, mon_d) in itertools.product(pool, pool):
        for k, g in enumerate(enumerate_functors(mon_c.carrier, mon_d.carrier)):
            adj = find_left_adjoint(g)
            if adj is None:
                continue
            mu = {}
            lax_ok = True
            for x in mon_c.carrier.objects:
                for y in mon_c.carrier.objects:
                    src = mon_d.tensor_obj(g.object_map[x], g.object_map[y])
                    tgt = g.object_map[mon_c.tensor_obj(x, y)]
                    hom = mon_d.carrier.hom(src, tgt)
                    if not hom:
                        lax_ok = False
                        break
                    mu[(x, y)] = hom[0]
                if not lax_ok:
                    break
            if not lax_ok:
                continue
            hom0 = mon_d.carrier.hom(mon_d.unit, g.object_map[mon_c.unit])
            if not hom0:
                continue
            lax = LaxMonFunctor(mon_c, mon_d, g, mu, hom0[0])
            try:
                lax.validate()
            except Exception:
                continue
            instances.append((f"{name_c}->{name_d}#{k}", lax, adj))
    if len(instances) > limit:
        rng = random.Random(seed)
        instances = rng.sample(instances, limit)
    return instances
