"""Standard indexing categories: simplices, (double) twisted arrows, arrow
categories, and the five-object interpolation shapes, together with their
ingressive/egressive markings."""

from __future__ import annotations

from functools import lru_cache

from .errors import InvalidCategory
from .fincat import FinCat, FinFunctor, opposite, pair_obj, product


class MarkedPoset:
    """A carrier category with named wide subcategory classes."""

    def __init__(self, carrier: FinCat, classes: dict[str, frozenset]):
        self.carrier = carrier
        self.classes = {name: frozenset(members) for name, members in classes.items()}

    def validate(self) -> None:
        for name, members in self.classes.items():
            for f in self.carrier.morphisms:
                if self.carrier.is_iso(f) and f not in members:
                    raise InvalidCategory(f"class {name!r} misses isomorphism {f!r}")
            for (g, f), gf in self.carrier.composition.items():
                if g in members and f in members and gf not in members:
                    raise InvalidCategory(f"class {name!r} not closed under composition")


def poset_category(elements, leq) -> FinCat:
    """The thin category of a partial order. leq(x, y) must be reflexive,
    transitive and antisymmetric on the given elements."""
    elements = [str(e) for e in elements]
    identity = {x: f"id_{x}" for x in elements}
    morphisms = {f"id_{x}": (x, x) for x in elements}
    for x in elements:
        for y in elements:
            if x != y and leq(x, y):
                morphisms[f"{x}<={y}"] = (x, y)
    arrow = {}
    for f, (s, t) in morphisms.items():
        arrow[(s, t)] = f
    composition = {}
    for g, (gs, gt) in morphisms.items():
        for f, (fs, ft) in morphisms.items():
            if ft == gs:
                composition[(g, f)] = arrow[(fs, gt)]
    return FinCat(elements, morphisms, identity, composition)


@lru_cache(maxsize=None)
def simplex(n: int) -> FinCat:
    """The linear poset [n] with n+1 objects."""
    if n < 0:
        raise ValueError("simplex needs n >= 0")
    return poset_category([str(i) for i in range(n + 1)], lambda x, y: int(x) <= int(y))


def discrete(names) -> FinCat:
    names = [str(x) for x in names]
    return FinCat(names, {f"id_{x}": (x, x) for x in names}, {x: f"id_{x}" for x in names}, {})


def walking_iso() -> FinCat:
    morphisms = {"id_0": ("0", "0"), "id_1": ("1", "1"), "u": ("0", "1"), "v": ("1", "0")}
    composition = {("v", "u"): "id_0", ("u", "v"): "id_1"}
    return FinCat(["0", "1"], morphisms, {"0": "id_0", "1": "id_1"}, composition)


def group_z2() -> FinCat:
    """Z/2 as a one-object groupoid."""
    morphisms = {"e": ("*", "*"), "s": ("*", "*")}
    composition = {("s", "s"): "e"}
    return FinCat(["*"], morphisms, {"*": "e"}, composition)


def parallel_pair() -> FinCat:
    morphisms = {"id_0": ("0", "0"), "id_1": ("1", "1"), "u": ("0", "1"), "v": ("0", "1")}
    return FinCat(["0", "1"], morphisms, {"0": "id_0", "1": "id_1"}, {})


def tw_morphism(a: str, b: str, v: str) -> str:
    return f"tw[{a}|{b}]>{v}"


@lru_cache(maxsize=None)
def tw_of_simplex(n: int):
    """Cached twisted arrow category of [n] with its projection."""
    return twisted_arrow(simplex(n))


def twisted_arrow(cat: FinCat):
    """The twisted arrow category with its projection (s,t): Tw(C) → C×C^op.

    Objects are the morphisms of C; an arrow u → v is a factorisation
    u = b∘v∘a with a: src(u)→src(v) and b: tgt(v)→tgt(u).
    """
    objects = list(cat.morphisms)
    morphisms = {}
    identity = {}
    data = {}
    for v in objects:
        for a in cat.morphisms_to(cat.source(v)):
            va = cat.compose(v, a)
            for b in cat.morphisms_from(cat.target(v)):
                u = cat.compose(b, va)
                name = tw_morphism(a, b, v)
                morphisms[name] = (u, v)
                data[name] = (a, b, v)
    for u in objects:
        identity[u] = tw_morphism(cat.identity[cat.source(u)], cat.identity[cat.target(u)], u)
    composition = {}
    for n2, (a2, b2, w) in data.items():
        mid = morphisms[n2][0]
        for n1, (a1, b1, v) in data.items():
            if morphisms[n1][1] != mid or v != mid:
                continue
            composition[(n2, n1)] = tw_morphism(cat.compose(a2, a1), cat.compose(b1, b2), w)
    tw = FinCat(objects, morphisms, identity, composition)
    cat_op = opposite(cat)
    prod, _, _ = product(cat, cat_op)
    proj = FinFunctor(
        tw,
        prod,
        {u: pair_obj(cat.source(u), cat.target(u)) for u in objects},
        {name: pair_obj(a, b) for name, (a, b, _) in data.items()},
    )
    return tw, proj


def twisted_arrow_op(cat: FinCat):
    """The opposite twisted arrow category fibred over C×C^op by target and
    source: objects are arrows of C, morphisms u → v are enlargements
    v = b∘u∘a, lying over (b, a).

    This is the shape of the span dual of the arrow fibration (t,s):
    transport is covariant in the target and contravariant in the source."""
    tw, _ = twisted_arrow(cat)
    tw_op = opposite(tw)
    cat_op = opposite(cat)
    prod, _, _ = product(cat, cat_op)
    proj = FinFunctor(
        tw_op,
        prod,
        {u: pair_obj(cat.target(u), cat.source(u)) for u in tw_op.objects},
        {name: pair_obj(_tw_parts(name)[1], _tw_parts(name)[0]) for name in tw_op.morphisms},
    )
    return tw_op, proj


@lru_cache(maxsize=None)
def tw_simplex_triple(n: int) -> MarkedPoset:
    """Tw([n]) marked with its ingressive/egressive classes: an arrow is
    egressive when its source component is an isomorphism and ingressive when
    its target component is."""
    cat = simplex(n)
    tw, _ = tw_of_simplex(n)
    egressive = set()
    ingressive = set()
    for name in tw.morphisms:
        a, b, _ = _tw_parts(name)
        if cat.is_iso(a):
            egressive.add(name)
        if cat.is_iso(b):
            ingressive.add(name)
    return MarkedPoset(tw, {"ingressive": frozenset(ingressive), "egressive": frozenset(egressive)})


def _tw_parts(name: str):
    inner, v = name[3:].split("]>", 1)
    a, b = inner.split("|", 1)
    return a, b, v


def tw_of_monotone(delta, m: int, n: int) -> FinFunctor:
    """Tw applied to the monotone map [m] → [n] given by the sequence delta."""
    return _tw_of_monotone_cached(tuple(delta), m, n)


@lru_cache(maxsize=None)
def _tw_of_monotone_cached(delta, m: int, n: int) -> FinFunctor:
    src_cat = simplex(m)
    tgt_cat = simplex(n)
    tw_src, _ = twisted_arrow(src_cat)
    tw_tgt, _ = twisted_arrow(tgt_cat)

    def on_simplex_arrow(f: str) -> str:
        i, j = src_cat.morphisms[f]
        di, dj = delta[int(i)], delta[int(j)]
        return tgt_cat.identity[str(di)] if di == dj else f"{di}<={dj}"

    object_map = {u: on_simplex_arrow(u) for u in tw_src.objects}
    morphism_map = {}
    for name in tw_src.morphisms:
        a, b, v = _tw_parts(name)
        morphism_map[name] = tw_morphism(on_simplex_arrow(a), on_simplex_arrow(b), object_map[v])
    return FinFunctor(tw_src, tw_tgt, object_map, morphism_map)


def ttw_obj(a: int, b: int, c: int, d: int) -> str:
    return f"{a}{b}{c}{d}"


def double_twisted_poset(n: int) -> MarkedPoset:
    """TTw([n]): tuples a≤b≤c≤d ordered by a≤a'≤b'≤b≤c≤c'≤d'≤d, with the four
    single-coordinate edge classes."""
    tuples = [
        (a, b, c, d)
        for a in range(n + 1)
        for b in range(a, n + 1)
        for c in range(b, n + 1)
        for d in range(c, n + 1)
    ]
    names = {t: ttw_obj(*t) for t in tuples}

    def leq(s, t):
        (a, b, c, d), (a2, b2, c2, d2) = s, t
        return a <= a2 <= b2 <= b <= c <= c2 <= d2 <= d

    carrier = poset_category(
        [names[t] for t in tuples],
        lambda x, y: leq(_parse_tuple(x), _parse_tuple(y)),
    )
    classes: dict[str, set] = {"1": set(), "2": set(), "3": set(), "4": set()}
    for f, (s, t) in carrier.morphisms.items():
        ts, tt = _parse_tuple(s), _parse_tuple(t)
        diff = [i for i in range(4) if ts[i] != tt[i]]
        if not diff:
            for k in classes:
                classes[k].add(f)
        elif len(diff) == 1:
            classes[str(diff[0] + 1)].add(f)
    return MarkedPoset(carrier, {k: frozenset(v) for k, v in classes.items()})


def _parse_tuple(name: str):
    return tuple(int(ch) for ch in name)


def arrow_simplex_triple(n: int) -> MarkedPoset:
    """Ar([n]) with egressives generated by the edges moving the first index
    and ingressives by the edges moving the second.

    The classes are pinned by how triple maps out of Ar([n]) are used: in a
    diagram over a perpendicular product triple the first-index edges must land
    on cartesian transports (egressives) and the second-index edges on the
    ingressive side, and the restriction to the diagonal inverts exactly the
    egressives.
    """
    pairs = [(i, j) for i in range(n + 1) for j in range(i, n + 1)]
    carrier = poset_category(
        [f"{i}{j}" for i, j in pairs],
        lambda x, y: int(x[0]) <= int(y[0]) and int(x[1]) <= int(y[1]),
    )
    egressive = set()
    ingressive = set()
    for f, (s, t) in carrier.morphisms.items():
        if s[1] == t[1]:
            egressive.add(f)
        if s[0] == t[0]:
            ingressive.add(f)
    return MarkedPoset(carrier, {"ingressive": frozenset(ingressive), "egressive": frozenset(egressive)})


def z_map(n: int) -> FinFunctor:
    """The comparison TTw([n]) → Ar([n]) sending abcd to ac."""
    ttw = double_twisted_poset(n).carrier
    ar = arrow_simplex_triple(n).carrier
    object_map = {}
    for o in ttw.objects:
        a, _, c, _ = _parse_tuple(o)
        object_map[o] = f"{a}{c}"
    morphism_map = {}
    for f, (s, t) in ttw.morphisms.items():
        os, ot = object_map[s], object_map[t]
        morphism_map[f] = ar.identity[os] if os == ot else f"{os}<={ot}"
    return FinFunctor(ttw, ar, object_map, morphism_map)


def square_morphism(a: str, b: str, u: str, v: str) -> str:
    return f"sq[{a}|{b}]{u}>{v}"


def arrow_category(cat: FinCat):
    """The arrow category Fun([1], C) with the projection (t,s): Ar(C) → C×C.

    Objects are the morphisms of C; an arrow u → v is a commuting square
    (a: src u → src v, b: tgt u → tgt v) with v∘a = b∘u.
    """
    objects = list(cat.morphisms)
    morphisms = {}
    identity = {}
    data = {}
    for u in objects:
        for a in cat.morphisms_from(cat.source(u)):
            for v in cat.morphisms_from(cat.target(a)):
                va = cat.compose(v, a)
                for b in cat.hom(cat.target(u), cat.target(v)):
                    if cat.compose(b, u) == va:
                        name = square_morphism(a, b, u, v)
                        morphisms[name] = (u, v)
                        data[name] = (a, b, u, v)
    for u in objects:
        identity[u] = square_morphism(cat.identity[cat.source(u)], cat.identity[cat.target(u)], u, u)
    composition = {}
    for n2, (a2, b2, u2, v2) in data.items():
        for n1, (a1, b1, u1, v1) in data.items():
            if v1 != u2:
                continue
            composition[(n2, n1)] = square_morphism(
                cat.compose(a2, a1), cat.compose(b2, b1), u1, v2
            )
    ar = FinCat(objects, morphisms, identity, composition)
    prod, _, _ = product(cat, cat)
    proj = FinFunctor(
        ar,
        prod,
        {u: pair_obj(cat.target(u), cat.source(u)) for u in objects},
        {name: pair_obj(b, a) for name, (a, b, _, _) in data.items()},
    )
    return ar, proj


GRAY_SHAPE_RELATIONS = (("0", "1"), ("1", "2"), ("2", "4"), ("0", "3"), ("3", "4"))
ORTHO_SHAPE_RELATIONS = (("1", "0"), ("1", "2"), ("0", "3"), ("2", "4"), ("4", "3"))


def interpolation_shape(flavor: str) -> FinCat:
    """The five-object shape Q (gray) or Q' (ortho), as the poset generated by
    the drawn edges; the drawn composites exist automatically."""
    if flavor == "gray":
        relations = GRAY_SHAPE_RELATIONS
    elif flavor == "ortho":
        relations = ORTHO_SHAPE_RELATIONS
    else:
        raise ValueError(f"unknown interpolation flavor {flavor!r}")
    closure = {(x, x) for x in "01234"}
    closure.update(relations)
    changed = True
    while changed:
        changed = False
        for x, y in list(closure):
            for y2, z in list(closure):
                if y == y2 and (x, z) not in closure:
                    closure.add((x, z))
                    changed = True
    return poset_category(list("01234"), lambda x, y: (x, y) in closure)
