"""Edge-level detection of (co)cartesian morphisms and classification of
functors into a product base: local orthofibrations, orthofibrations, Gray
fibrations, bifibrations, and their interpolating edges."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidFunctor, MissingLifts
from .fincat import (
    FinCat,
    FinFunctor,
    product,
    wide_subcategory,
)
from .shapes import (
    GRAY_SHAPE_RELATIONS,
    ORTHO_SHAPE_RELATIONS,
    interpolation_shape,
    simplex,
)


@dataclass(frozen=True)
class EdgeType:
    cartesian: bool
    cocartesian: bool
    locally_cartesian: bool
    locally_cocartesian: bool


def _is_cartesian(p: FinFunctor, f: str) -> bool:
    cat_x, cat_s = p.source, p.target
    y, z = cat_x.morphisms[f]
    pf = p.morphism_map[f]
    py = cat_s.target(p.morphism_map[cat_x.identity[y]])
    for x in cat_x.objects:
        px = p.object_map[x]
        seen = {}
        for u in cat_x.hom(x, y):
            key = (cat_x.compose(f, u), p.morphism_map[u])
            if key in seen:
                return False
            seen[key] = u
        count = 0
        for v in cat_x.hom(x, z):
            pv = p.morphism_map[v]
            for w in cat_s.hom(px, py):
                if pv == cat_s.compose(pf, w):
                    count += 1
                    if (v, w) not in seen:
                        return False
        if count != len(seen):
            return False
    return True


def _is_cocartesian(p: FinFunctor, f: str) -> bool:
    cat_x, cat_s = p.source, p.target
    y, z = cat_x.morphisms[f]
    pf = p.morphism_map[f]
    pz = p.object_map[z]
    for x in cat_x.objects:
        px = p.object_map[x]
        seen = {}
        for u in cat_x.hom(z, x):
            key = (cat_x.compose(u, f), p.morphism_map[u])
            if key in seen:
                return False
            seen[key] = u
        count = 0
        for v in cat_x.hom(y, x):
            pv = p.morphism_map[v]
            for w in cat_s.hom(pz, px):
                if pv == cat_s.compose(w, pf):
                    count += 1
                    if (v, w) not in seen:
                        return False
        if count != len(seen):
            return False
    return True


def _interval_restriction(p: FinFunctor, f: str):
    """Strict pullback of p along [1] → S classifying p(f), with the image
    edge of f.  Used for the locally (co)cartesian flags."""
    cat_x, cat_s = p.source, p.target
    pf = p.morphism_map[f]
    s0, s1 = cat_s.morphisms[pf]
    objects = []
    for x in cat_x.objects:
        if p.object_map[x] == s0:
            objects.append(f"{x}@0")
        if p.object_map[x] == s1:
            objects.append(f"{x}@1")
    morphisms = {}
    identity = {}
    levels = {}
    underlying = {}
    for name in objects:
        x, level = name.rsplit("@", 1)
        levels[name] = (x, int(level))
    for name, (x, i) in levels.items():
        identity[name] = f"{cat_x.identity[x]}@{i}{i}"
    for src_name, (x, i) in levels.items():
        for tgt_name, (x2, j) in levels.items():
            if i > j:
                continue
            for u in cat_x.hom(x, x2):
                pu = p.morphism_map[u]
                if i == j and pu != cat_s.identity[s0 if i == 0 else s1]:
                    continue
                if i < j and pu != pf:
                    continue
                mname = f"{u}@{i}{j}"
                morphisms[mname] = (src_name, tgt_name)
                underlying[mname] = (u, i, j)
    composition = {}
    for n2, (u2, i2, j2) in underlying.items():
        for n1, (u1, i1, j1) in underlying.items():
            if j1 != i2 or morphisms[n1][1] != morphisms[n2][0]:
                continue
            composition[(n2, n1)] = f"{cat_x.compose(u2, u1)}@{i1}{j2}"
    interval = FinCat(objects, morphisms, identity, composition)
    arrow = simplex(1)
    proj = FinFunctor(
        interval,
        arrow,
        {name: str(i) for name, (_, i) in levels.items()},
        {
            n: (arrow.identity[str(i)] if i == j else "0<=1")
            for n, (_, i, j) in underlying.items()
        },
    )
    return proj, f"{f}@01"


def edge_type(p: FinFunctor, f: str) -> EdgeType:
    """All four (co)cartesianness flags of an edge, by exhaustive comparison of
    hom sets against the fibre-product description."""
    cart = _is_cartesian(p, f)
    cocart = _is_cocartesian(p, f)
    if cart and cocart:
        return EdgeType(True, True, True, True)
    restricted, image = _interval_restriction(p, f)
    loc_cart = cart or _is_cartesian(restricted, image)
    loc_cocart = cocart or _is_cocartesian(restricted, image)
    return EdgeType(cart, cocart, loc_cart, loc_cocart)


def edge_types(p: FinFunctor) -> dict[str, EdgeType]:
    return {f: edge_type(p, f) for f in p.source.morphisms}


def has_sufficient_lifts(p: FinFunctor, members, direction: str, types: dict[str, EdgeType] | None = None):
    """Whether every arrow in the base class has a (co)cartesian lift at every
    strictly matching endpoint.

    Lifts are sought with the endpoint on the nose on the side the lift starts
    from and up to a base isomorphism on the other, matching the
    equivalence-closed reading of fibrations; in particular lifts over base
    isomorphisms always exist (identities qualify).
    Returns (ok, witnesses) where witnesses lists failing (base arrow, object).
    """
    cat_x, cat_s = p.source, p.target
    if types is None:
        types = {}
    witnesses = []
    for e in members:
        es, et = cat_s.morphisms[e]
        if direction == "cocartesian":
            for x in cat_x.objects:
                if p.object_map[x] != es:
                    continue
                found = False
                for f in cat_x.morphisms_from(x):
                    pf = p.morphism_map[f]
                    if not any(
                        cat_s.is_iso(j) and cat_s.compose(j, pf) == e
                        for j in cat_s.hom(cat_s.target(pf), et)
                    ):
                        continue
                    t = types.get(f)
                    if t is None:
                        t = types[f] = edge_type(p, f)
                    if t.cocartesian:
                        found = True
                        break
                if not found:
                    witnesses.append((e, x))
        elif direction == "cartesian":
            for x in cat_x.objects:
                if p.object_map[x] != et:
                    continue
                found = False
                for f in cat_x.morphisms_to(x):
                    pf = p.morphism_map[f]
                    if not any(
                        cat_s.is_iso(j) and cat_s.compose(pf, j) == e
                        for j in cat_s.hom(es, cat_s.source(pf))
                    ):
                        continue
                    t = types.get(f)
                    if t is None:
                        t = types[f] = edge_type(p, f)
                    if t.cartesian:
                        found = True
                        break
                if not found:
                    witnesses.append((e, x))
        else:
            raise ValueError(f"unknown direction {direction!r}")
    return not witnesses, witnesses


class FibredFunctor:
    """A functor p: X → A×B with cached factor projections and restrictions."""

    def __init__(self, total: FinCat, base_a: FinCat, base_b: FinCat, proj: FinFunctor):
        self.total = total
        self.base_a = base_a
        self.base_b = base_b
        self.proj = proj
        prod, proj_a, proj_b = product(base_a, base_b)
        if proj.target != prod:
            raise InvalidFunctor("projection target is not the product of the bases")
        self.product = prod
        self.proj_a = proj_a
        self.proj_b = proj_b
        self._over_a = frozenset(
            m for m in prod.morphisms if base_b.is_iso(proj_b.morphism_map[m])
        )  # A × ιB
        self._over_b = frozenset(
            m for m in prod.morphisms if base_a.is_iso(proj_a.morphism_map[m])
        )  # ιA × B
        self._types: dict[str, EdgeType] | None = None

    @classmethod
    def from_components(cls, total, base_a, base_b, object_map, morphism_map):
        prod, _, _ = product(base_a, base_b)
        proj = FinFunctor(total, prod, object_map, morphism_map)
        return cls(total, base_a, base_b, proj)

    def over_a(self) -> frozenset:
        """Morphisms of the product lying in A × ιB."""
        return self._over_a

    def over_b(self) -> frozenset:
        """Morphisms of the product lying in ιA × B."""
        return self._over_b

    def base_of(self, f: str) -> str:
        return self.proj.morphism_map[f]

    def p1(self) -> FinFunctor:
        from .fincat import compose_functors

        return compose_functors(self.proj_a, self.proj)

    def p2(self) -> FinFunctor:
        from .fincat import compose_functors

        return compose_functors(self.proj_b, self.proj)

    def restriction(self, side: str):
        """p_l (side="l", over A×ιB) or p_r (side="r", over ιA×B) as a functor
        between wide subcategories."""
        members = self._over_a if side == "l" else self._over_b
        total_members = frozenset(
            f for f in self.total.morphisms if self.proj.morphism_map[f] in members
        )
        sub_total = wide_subcategory(self.total, total_members)
        sub_base = wide_subcategory(self.product, members)
        return FinFunctor(
            sub_total,
            sub_base,
            dict(self.proj.object_map),
            {f: self.proj.morphism_map[f] for f in total_members},
        )

    def edge_types(self) -> dict[str, EdgeType]:
        if self._types is None:
            self._types = edge_types(self.proj)
        return self._types

    def fiber(self, a: str, b: str) -> FinCat:
        """The strict fibre over (a, b): objects over it, morphisms over its identity."""
        from .fincat import pair_obj

        target_obj = pair_obj(a, b)
        objs = [x for x in self.total.objects if self.proj.object_map[x] == target_obj]
        keep = set(objs)
        ident = self.product.identity[target_obj]
        morphisms = {
            f: st
            for f, st in self.total.morphisms.items()
            if st[0] in keep and st[1] in keep and self.proj.morphism_map[f] == ident
        }
        composition = {
            (g, f): gf
            for (g, f), gf in self.total.composition.items()
            if g in morphisms and f in morphisms
        }
        return FinCat(objs, morphisms, {x: self.total.identity[x] for x in objs}, composition)


@dataclass
class FibrationReport:
    cocart_over_a: bool
    cart_over_b: bool
    cocart_over_b: bool
    cart_over_a: bool
    local_ortho: bool
    ortho: bool
    gray: bool
    gray_op: bool
    cocartesian_fibration: bool
    cartesian_fibration: bool
    left_fib: bool
    right_fib: bool
    bifib: bool
    conservative: bool
    groupoid_fibers: bool
    witnesses: dict = field(default_factory=dict)

    def check_implications(self) -> None:
        implications = [
            ("bifib", "ortho"),
            ("ortho", "local_ortho"),
            ("cocartesian_fibration", "gray"),
            ("left_fib", "cocartesian_fibration"),
            ("right_fib", "cartesian_fibration"),
        ]
        for weak, strong in implications:
            if getattr(self, weak) and not getattr(self, strong):
                raise AssertionError(f"implication {weak} => {strong} violated")

    def as_dict(self) -> dict:
        return {
            name: getattr(self, name)
            for name in (
                "cocart_over_a",
                "cart_over_b",
                "cocart_over_b",
                "cart_over_a",
                "local_ortho",
                "ortho",
                "gray",
                "gray_op",
                "cocartesian_fibration",
                "cartesian_fibration",
                "left_fib",
                "right_fib",
                "bifib",
                "conservative",
                "groupoid_fibers",
            )
        }


def _diagram_search(p: FibredFunctor, shape: FinCat, relations, edge_conditions, commute_check):
    """All functors from an interpolation shape into the total category whose
    generating edges satisfy the given predicates."""
    cat_x = p.total
    results = []
    hasse = list(relations)
    assignment_obj: dict[str, str] = {}
    assignment_mor: dict[tuple[str, str], str] = {}

    def rec(k):
        if k == len(hasse):
            if commute_check(assignment_mor):
                results.append((dict(assignment_obj), dict(assignment_mor)))
            return
        s, t = hasse[k]
        sources = [assignment_obj[s]] if s in assignment_obj else list(cat_x.objects)
        for so in sources:
            targets = [assignment_obj[t]] if t in assignment_obj else list(cat_x.objects)
            placed_s = s not in assignment_obj
            assignment_obj[s] = so
            for to in targets:
                placed_t = t not in assignment_obj
                assignment_obj[t] = to
                for m in cat_x.hom(so, to):
                    if not edge_conditions[(s, t)](m):
                        continue
                    assignment_mor[(s, t)] = m
                    rec(k + 1)
                    del assignment_mor[(s, t)]
                if placed_t:
                    del assignment_obj[t]
                else:
                    assignment_obj[t] = to
            if placed_s:
                del assignment_obj[s]
            else:
                assignment_obj[s] = so

    rec(0)
    return results


def interpolating_diagrams(p: FibredFunctor, flavor: str):
    """Enumerate the Q/Q'-shaped diagrams of chosen lifts.

    Gray flavor: edges 0→1, 3→4 are p-cocartesian over an A-isomorphism, edges
    1→2, 0→3 are p_l-cocartesian over a B-isomorphism, and the comparison edge
    2→4 lies over an isomorphism of A×B.  Ortho flavor: 1→0, 4→3 are
    p-cartesian over an A-isomorphism and 1→2, 0→3 are p-cocartesian over a
    B-isomorphism.  Returns (shape, list of (object assignment, edge assignment)).
    """
    cat_x = p.total
    prod = p.product
    types = p.edge_types()
    base = p.base_of

    def over_a_iso(m):
        return p.base_a.is_iso(p.proj_a.morphism_map[base(m)])

    def over_b_iso(m):
        return p.base_b.is_iso(p.proj_b.morphism_map[base(m)])

    def over_iso(m):
        return prod.is_iso(base(m))

    if flavor == "gray":
        ok, witnesses = has_sufficient_lifts(p.proj, p.over_b(), "cocartesian", types)
        if not ok:
            raise MissingLifts("gray interpolation requires cocartesian lifts over B", witnesses[0])
        p_l = p.restriction("l")
        l_types = edge_types(p_l)
        ok, witnesses = has_sufficient_lifts(p_l, p_l.target.morphisms, "cocartesian", l_types)
        if not ok:
            raise MissingLifts("gray interpolation requires p_l to be cocartesian", witnesses[0])

        def l_cocart(m):
            return m in l_types and l_types[m].cocartesian

        conditions = {
            ("0", "1"): lambda m: over_a_iso(m) and types[m].cocartesian,
            ("3", "4"): lambda m: over_a_iso(m) and types[m].cocartesian,
            ("1", "2"): lambda m: over_b_iso(m) and l_cocart(m),
            ("0", "3"): lambda m: over_b_iso(m) and l_cocart(m),
            ("2", "4"): over_iso,
        }
        relations = GRAY_SHAPE_RELATIONS

        def commutes(mor):
            left = cat_x.compose_path(mor[("2", "4")], mor[("1", "2")], mor[("0", "1")])
            right = cat_x.compose(mor[("3", "4")], mor[("0", "3")])
            return left == right

    elif flavor == "ortho":
        ok, witnesses = has_sufficient_lifts(p.proj, p.over_a(), "cocartesian", types)
        if not ok:
            raise MissingLifts("ortho interpolation requires cocartesian lifts over A", witnesses[0])
        ok, witnesses = has_sufficient_lifts(p.proj, p.over_b(), "cartesian", types)
        if not ok:
            raise MissingLifts("ortho interpolation requires cartesian lifts over B", witnesses[0])

        conditions = {
            ("1", "0"): lambda m: over_a_iso(m) and types[m].cartesian,
            ("4", "3"): lambda m: over_a_iso(m) and types[m].cartesian,
            ("1", "2"): lambda m: over_b_iso(m) and types[m].cocartesian,
            ("0", "3"): lambda m: over_b_iso(m) and types[m].cocartesian,
            ("2", "4"): over_iso,
        }
        relations = ORTHO_SHAPE_RELATIONS

        def commutes(mor):
            left = cat_x.compose(mor[("0", "3")], mor[("1", "0")])
            right = cat_x.compose_path(mor[("4", "3")], mor[("2", "4")], mor[("1", "2")])
            return left == right

    else:
        raise ValueError(f"unknown interpolation flavor {flavor!r}")

    shape = interpolation_shape(flavor)
    diagrams = _diagram_search(p, shape, relations, conditions, commutes)
    return shape, diagrams


def interpolating_edges(p: FibredFunctor, flavor: str):
    """The evaluations at 2→4 of all interpolating diagrams, without duplicates."""
    _, diagrams = interpolating_diagrams(p, flavor)
    seen = []
    for _, mor in diagrams:
        m = mor[("2", "4")]
        if m not in seen:
            seen.append(m)
    return seen


def classify(p: FibredFunctor) -> FibrationReport:
    """Compute the full fibration taxonomy report with failure witnesses."""
    types = p.edge_types()
    prod = p.product
    witnesses = {}

    def lifts(members, direction, key):
        ok, found = has_sufficient_lifts(p.proj, members, direction, types)
        if not ok:
            witnesses[key] = found[0]
        return ok

    cocart_over_a = lifts(p.over_a(), "cocartesian", "cocart_over_a")
    cart_over_b = lifts(p.over_b(), "cartesian", "cart_over_b")
    cocart_over_b = lifts(p.over_b(), "cocartesian", "cocart_over_b")
    cart_over_a = lifts(p.over_a(), "cartesian", "cart_over_a")
    cocartesian_fibration = lifts(prod.morphisms, "cocartesian", "cocartesian_fibration")
    cartesian_fibration = lifts(prod.morphisms, "cartesian", "cartesian_fibration")

    p_l = p.restriction("l")
    l_types = edge_types(p_l)
    p_l_cocart, wit = has_sufficient_lifts(p_l, p_l.target.morphisms, "cocartesian", l_types)
    if not p_l_cocart:
        witnesses["p_l_cocartesian"] = wit[0]
    p_l_cart, wit = has_sufficient_lifts(p_l, p_l.target.morphisms, "cartesian", l_types)

    local_ortho = cocart_over_a and cart_over_b
    gray = cocart_over_b and p_l_cocart
    gray_op = cart_over_b and p_l_cart

    conservative = True
    for f in p.total.morphisms:
        if prod.is_iso(p.base_of(f)) and not p.total.is_iso(f):
            conservative = False
            witnesses["conservative"] = f
            break
    groupoid_fibers = True
    for f in p.total.morphisms:
        if prod.is_identity(p.base_of(f)) and not p.total.is_iso(f):
            groupoid_fibers = False
            witnesses["groupoid_fibers"] = f
            break

    ortho = False
    if local_ortho:
        ortho = True
        for m in interpolating_edges(p, "ortho"):
            if not p.total.is_iso(m):
                ortho = False
                witnesses["ortho"] = m
                break

    left_fib = cocartesian_fibration and all(types[f].cocartesian for f in p.total.morphisms)
    right_fib = cartesian_fibration and all(types[f].cartesian for f in p.total.morphisms)
    bifib = local_ortho and conservative

    report = FibrationReport(
        cocart_over_a=cocart_over_a,
        cart_over_b=cart_over_b,
        cocart_over_b=cocart_over_b,
        cart_over_a=cart_over_a,
        local_ortho=local_ortho,
        ortho=ortho,
        gray=gray,
        gray_op=gray_op,
        cocartesian_fibration=cocartesian_fibration,
        cartesian_fibration=cartesian_fibration,
        left_fib=left_fib,
        right_fib=right_fib,
        bifib=bifib,
        conservative=conservative,
        groupoid_fibers=groupoid_fibers,
        witnesses=witnesses,
    )
    report.check_implications()
    return report


def check_factor_criterion(p: FibredFunctor) -> bool:
    """Agreement of the two characterisations of lifts over B: sufficient
    p-(co)cartesian lifts over ιA×B versus p_2 being a (co)cartesian fibration
    whose (co)cartesian edges project into ιA×B."""
    types = p.edge_types()
    p2 = p.p2()
    p2_types = edge_types(p2)

    def criterion(direction):
        direct, _ = has_sufficient_lifts(p.proj, p.over_b(), direction, types)
        fib, _ = has_sufficient_lifts(p2, p.base_b.morphisms, direction, p2_types)
        edges_ok = True
        for f in p.total.morphisms:
            flag = p2_types[f].cocartesian if direction == "cocartesian" else p2_types[f].cartesian
            if flag and p.base_of(f) not in p.over_b():
                edges_ok = False
                break
        return direct == (fib and edges_ok)

    return criterion("cocartesian") and criterion("cartesian")
