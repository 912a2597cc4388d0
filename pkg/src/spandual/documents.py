"""Line-oriented document format for categories, triples, fibrations,
diagrams, adjunctions, transformations and monoidal data.

A document is a KIND line followed by sections (OBJECTS, MORPHISMS, COMPOSE,
...) and nested BEGIN <name> ... END blocks.  Identities are implicit and
named id_<object> unless declared.  serialize∘parse is the canonical form."""

from __future__ import annotations

from .errors import ParseError
from .fincat import (
    FinCat,
    FinFunctor,
    NatTrans,
    compose_functors,
    identity_functor,
    pair_obj,
    product,
)
from .fibrations import FibredFunctor
from .grothendieck import CatDiagram
from .mates import Adjunction, LaxTransformation
from .monoidal import LaxMonFunctor, StrictMonCat
from .triplespan import AdequateTriple

KINDS = (
    "category",
    "triple",
    "fibration",
    "diagram",
    "adjunction",
    "transformation",
    "monoidal",
)

_RESERVED = set("();|,@")


class Document:
    def __init__(self, kind: str, payload):
        self.kind = kind
        self.payload = payload


class _Block:
    """Parsed block: named sections of rows plus named sub-blocks."""

    def __init__(self, name=""):
        self.name = name
        self.sections: dict[str, list[tuple[list[str], int]]] = {}
        self.blocks: list[_Block] = []
        self.line = 0

    def rows(self, section: str):
        return [row for row, _ in self.sections.get(section, [])]

    def block(self, name: str):
        for b in self.blocks:
            if b.name == name:
                return b
        return None

    def blocks_named(self, prefix: str):
        return [b for b in self.blocks if b.name.split(" ")[0] == prefix]


_SECTION_NAMES = {
    "OBJECTS",
    "MORPHISMS",
    "COMPOSE",
    "INGRESSIVE",
    "EGRESSIVE",
    "OBJECTMAP",
    "MORPHISMMAP",
    "UNIT",
    "COUNIT",
    "TENSOR-OBJECTS",
    "TENSOR-MORPHISMS",
    "UNIT-OBJECT",
    "MU",
    "MU0",
    "ROWS",
}


def _tokenize(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        yield lineno, line.split()


def _parse_block(tokens, name, opening_line):
    block = _Block(name)
    block.line = opening_line
    section = None
    for lineno, words in tokens:
        head = words[0]
        if head == "END":
            return block
        if head == "BEGIN":
            if len(words) < 2:
                raise ParseError("BEGIN requires a block name", lineno)
            block.blocks.append(_parse_block(tokens, " ".join(words[1:]), lineno))
            section = None
            continue
        if head in _SECTION_NAMES:
            section = head
            block.sections.setdefault(section, [])
            if len(words) > 1:
                block.sections[section].append((words[1:], lineno))
            continue
        if section is None:
            raise ParseError(f"row outside any section: {head!r}", lineno)
        block.sections[section].append((words, lineno))
    if name:
        raise ParseError(f"unterminated block {name!r}", opening_line)
    return block


def _check_id(identifier: str, lineno: int) -> str:
    if any(ch in _RESERVED for ch in identifier):
        raise ParseError(f"identifier {identifier!r} uses a reserved character", lineno)
    return identifier


def _build_category(block: _Block) -> FinCat:
    objects = []
    for row, lineno in block.sections.get("OBJECTS", []):
        for obj in row:
            objects.append(_check_id(obj, lineno))
    if not objects:
        raise ParseError("category has no OBJECTS section", block.line)
    morphisms = {}
    identity = {x: f"id_{x}" for x in objects}
    for x in objects:
        morphisms[f"id_{x}"] = (x, x)
    for row, lineno in block.sections.get("MORPHISMS", []):
        if len(row) != 3:
            raise ParseError("MORPHISMS rows are: name source target", lineno)
        name, src, tgt = row
        _check_id(name, lineno)
        if src not in identity or tgt not in identity:
            raise ParseError(f"unknown endpoint in morphism {name!r}", lineno)
        if name in morphisms:
            raise ParseError(f"duplicate morphism {name!r}", lineno)
        morphisms[name] = (src, tgt)
    composition = {}
    for row, lineno in block.sections.get("COMPOSE", []):
        if len(row) != 3:
            raise ParseError("COMPOSE rows are: g f composite", lineno)
        g, f, gf = row
        for m in (g, f, gf):
            if m not in morphisms:
                raise ParseError(f"unknown morphism {m!r} in COMPOSE", lineno)
        if morphisms[f][1] != morphisms[g][0]:
            raise ParseError(f"COMPOSE pair ({g!r},{f!r}) is not composable", lineno)
        composition[(g, f)] = gf
    return FinCat(objects, morphisms, identity, composition)


def _build_functor(block: _Block, source: FinCat, target: FinCat) -> FinFunctor:
    object_map = {}
    for row, lineno in block.sections.get("OBJECTMAP", []):
        if len(row) != 2:
            raise ParseError("OBJECTMAP rows are: object image", lineno)
        object_map[row[0]] = row[1]
    morphism_map = {}
    for row, lineno in block.sections.get("MORPHISMMAP", []):
        if len(row) != 2:
            raise ParseError("MORPHISMMAP rows are: morphism image", lineno)
        morphism_map[row[0]] = row[1]
    for x, image in object_map.items():
        if x not in source.identity:
            raise ParseError(f"unknown object {x!r} in OBJECTMAP", block.line)
        if image not in target.identity:
            raise ParseError(f"unknown image object {image!r}", block.line)
        morphism_map.setdefault(source.identity[x], target.identity[image])
    missing = [x for x in source.objects if x not in object_map]
    if missing:
        raise ParseError(f"OBJECTMAP misses objects {missing}", block.line)
    for f in source.morphisms:
        if f not in morphism_map:
            raise ParseError(f"MORPHISMMAP misses morphism {f!r}", block.line)
    return FinFunctor(source, target, object_map, morphism_map)


def _build_triple(block: _Block) -> AdequateTriple:
    carrier = _build_category(block)
    ingressives = set()
    egressives = set()
    for row, _ in block.sections.get("INGRESSIVE", []):
        ingressives.update(row)
    for row, _ in block.sections.get("EGRESSIVE", []):
        egressives.update(row)
    for m in list(ingressives | egressives):
        if m not in carrier.morphisms:
            raise ParseError(f"unknown morphism {m!r} in class list", block.line)
    for f in carrier.morphisms:
        if carrier.is_iso(f):
            ingressives.add(f)
            egressives.add(f)
    return AdequateTriple(carrier, frozenset(ingressives), frozenset(egressives))


def _build_fibration(block: _Block) -> FibredFunctor:
    total_b = block.block("TOTAL")
    base_a_b = block.block("BASEA")
    base_b_b = block.block("BASEB")
    if total_b is None or base_a_b is None or base_b_b is None:
        raise ParseError("fibration needs TOTAL, BASEA and BASEB blocks", block.line)
    total = _build_category(total_b)
    base_a = _build_category(base_a_b)
    base_b = _build_category(base_b_b)
    object_map = {}
    for row, lineno in block.sections.get("OBJECTMAP", []):
        if len(row) != 3:
            raise ParseError("fibration OBJECTMAP rows are: object imageA imageB", lineno)
        object_map[row[0]] = pair_obj(row[1], row[2])
    morphism_map = {}
    for row, lineno in block.sections.get("MORPHISMMAP", []):
        if len(row) != 3:
            raise ParseError("fibration MORPHISMMAP rows are: morphism imageA imageB", lineno)
        morphism_map[row[0]] = pair_obj(row[1], row[2])
    for x in total.objects:
        if x not in object_map:
            raise ParseError(f"OBJECTMAP misses object {x!r}", block.line)
        morphism_map.setdefault(
            total.identity[x],
            pair_obj(
                base_a.identity[_unpair(object_map[x])[0]],
                base_b.identity[_unpair(object_map[x])[1]],
            ),
        )
    for f in total.morphisms:
        if f not in morphism_map:
            raise ParseError(f"MORPHISMMAP misses morphism {f!r}", block.line)
    return FibredFunctor.from_components(total, base_a, base_b, object_map, morphism_map)


def _unpair(name: str):
    from .fincat import _split_pair

    return _split_pair(name)


def _build_diagram(block: _Block) -> CatDiagram:
    index_b = block.block("INDEX")
    if index_b is None:
        raise ParseError("diagram needs an INDEX block", block.line)
    index = _build_category(index_b)
    values = {}
    for b in block.blocks_named("VALUE"):
        parts = b.name.split(" ")
        if len(parts) != 2:
            raise ParseError("VALUE blocks are named: VALUE <object>", b.line)
        values[parts[1]] = _build_category(b)
    for a in index.objects:
        if a not in values:
            raise ParseError(f"diagram misses VALUE block for {a!r}", block.line)
    arrows = {}
    for b in block.blocks_named("ARROW"):
        parts = b.name.split(" ")
        if len(parts) != 2 or parts[1] not in index.morphisms:
            raise ParseError("ARROW blocks are named: ARROW <morphism>", b.line)
        f = parts[1]
        arrows[f] = _build_functor(b, values[index.source(f)], values[index.target(f)])
    for a in index.objects:
        arrows.setdefault(index.identity[a], identity_functor(values[a]))
    for f in index.morphisms:
        if f not in arrows:
            raise ParseError(f"diagram misses ARROW block for {f!r}", block.line)
    compositors = {}
    for b in block.blocks_named("COMPOSITOR"):
        parts = b.name.split(" ")
        if len(parts) != 3:
            raise ParseError("COMPOSITOR blocks are named: COMPOSITOR <g> <f>", b.line)
        g, f = parts[1], parts[2]
        if (g, f) not in index.composition:
            raise ParseError(f"({g!r},{f!r}) is not a composable pair", b.line)
        components = {}
        for row, lineno in b.sections.get("ROWS", []):
            if len(row) != 2:
                raise ParseError("COMPOSITOR ROWS are: object morphism", lineno)
            components[row[0]] = row[1]
        gf = index.compose(g, f)
        compositors[(g, f)] = NatTrans(
            arrows[gf], compose_functors(arrows[g], arrows[f]), components
        )
    return CatDiagram(index, values, arrows, compositors)


def _build_adjunction(block: _Block) -> Adjunction:
    source_b = block.block("SOURCE")
    target_b = block.block("TARGET")
    left_b = block.block("LEFT")
    right_b = block.block("RIGHT")
    if None in (source_b, target_b, left_b, right_b):
        raise ParseError("adjunction needs SOURCE, TARGET, LEFT, RIGHT blocks", block.line)
    source = _build_category(source_b)
    target = _build_category(target_b)
    left = _build_functor(left_b, source, target)
    right = _build_functor(right_b, target, source)
    unit = {}
    for row, lineno in block.sections.get("UNIT", []):
        if len(row) != 2:
            raise ParseError("UNIT rows are: object morphism", lineno)
        unit[row[0]] = row[1]
    counit = {}
    for row, lineno in block.sections.get("COUNIT", []):
        if len(row) != 2:
            raise ParseError("COUNIT rows are: object morphism", lineno)
        counit[row[0]] = row[1]
    return Adjunction(
        left,
        right,
        NatTrans(identity_functor(source), compose_functors(right, left), unit),
        NatTrans(compose_functors(left, right), identity_functor(target), counit),
    )


def _build_transformation(block: _Block):
    base_b = block.block("BASE")
    src_b = block.block("SOURCEDIAGRAM")
    tgt_b = block.block("TARGETDIAGRAM")
    if None in (base_b, src_b, tgt_b):
        raise ParseError(
            "transformation needs BASE, SOURCEDIAGRAM, TARGETDIAGRAM blocks", block.line
        )
    base = _build_category(base_b)

    def with_index(b):
        if b.block("INDEX") is None:
            clone = _Block(b.name)
            clone.sections = b.sections
            index_block = _Block("INDEX")
            index_block.sections = base_b.sections
            clone.blocks = [index_block] + b.blocks
            return clone
        return b

    source_diagram = _build_diagram(with_index(src_b))
    target_diagram = _build_diagram(with_index(tgt_b))
    components = {}
    for b in block.blocks_named("COMPONENT"):
        parts = b.name.split(" ")
        if len(parts) != 2:
            raise ParseError("COMPONENT blocks are named: COMPONENT <object>", b.line)
        a = parts[1]
        components[a] = _build_functor(
            b, source_diagram.values[a], target_diagram.values[a]
        )
    cells = {}
    for b in block.blocks_named("CELL"):
        parts = b.name.split(" ")
        if len(parts) != 2 or parts[1] not in base.morphisms:
            raise ParseError("CELL blocks are named: CELL <morphism>", b.line)
        f = parts[1]
        comps = {}
        for row, lineno in b.sections.get("ROWS", []):
            if len(row) != 2:
                raise ParseError("CELL ROWS are: object morphism", lineno)
            comps[row[0]] = row[1]
        a, a2 = base.morphisms[f]
        cells[f] = NatTrans(
            compose_functors(target_diagram.arrows[f], components[a]),
            compose_functors(components[a2], source_diagram.arrows[f]),
            comps,
        )
    for a in base.objects:
        if a not in components:
            raise ParseError(f"transformation misses COMPONENT {a!r}", block.line)
    for f in base.morphisms:
        if f not in cells:
            if base.is_identity(f):
                from .fincat import identity_nat

                cells[f] = identity_nat(
                    compose_functors(
                        target_diagram.arrows[f], components[base.source(f)]
                    )
                )
            else:
                raise ParseError(f"transformation misses CELL {f!r}", block.line)
    transformation = LaxTransformation(source_diagram, target_diagram, components, cells)
    adjunctions = {}
    for b in block.blocks_named("ADJUNCTION"):
        parts = b.name.split(" ")
        if len(parts) != 2:
            raise ParseError("ADJUNCTION blocks are named: ADJUNCTION <object>", b.line)
        a = parts[1]
        left = _build_functor(
            b.block("LEFT") or _missing(b, "LEFT"),
            target_diagram.values[a],
            source_diagram.values[a],
        )
        unit = {}
        for row, lineno in b.sections.get("UNIT", []):
            unit[row[0]] = row[1]
        counit = {}
        for row, lineno in b.sections.get("COUNIT", []):
            counit[row[0]] = row[1]
        adjunctions[a] = Adjunction(
            left,
            components[a],
            NatTrans(
                identity_functor(target_diagram.values[a]),
                compose_functors(components[a], left),
                unit,
            ),
            NatTrans(
                compose_functors(left, components[a]),
                identity_functor(source_diagram.values[a]),
                counit,
            ),
        )
    return transformation, adjunctions


def _missing(block, name):
    raise ParseError(f"missing {name} block", block.line)


def _build_mon_cat(block: _Block) -> StrictMonCat:
    carrier_b = block.block("CARRIER")
    if carrier_b is None:
        raise ParseError("monoidal block needs a CARRIER", block.line)
    carrier = _build_category(carrier_b)
    prod, _, _ = product(carrier, carrier)
    obj_rows = block.sections.get("TENSOR-OBJECTS", [])
    mor_rows = block.sections.get("TENSOR-MORPHISMS", [])
    object_map = {}
    for row, lineno in obj_rows:
        if len(row) != 3:
            raise ParseError("TENSOR-OBJECTS rows are: x y product", lineno)
        object_map[pair_obj(row[0], row[1])] = row[2]
    morphism_map = {}
    for row, lineno in mor_rows:
        if len(row) != 3:
            raise ParseError("TENSOR-MORPHISMS rows are: f g product", lineno)
        morphism_map[pair_obj(row[0], row[1])] = row[2]
    for x in carrier.objects:
        for y in carrier.objects:
            if pair_obj(x, y) not in object_map:
                raise ParseError(f"TENSOR-OBJECTS misses ({x!r},{y!r})", block.line)
    for f in carrier.morphisms:
        for g in carrier.morphisms:
            key = pair_obj(f, g)
            if key not in morphism_map:
                sx, tx = carrier.morphisms[f]
                sy, ty = carrier.morphisms[g]
                if carrier.is_identity(f) and carrier.is_identity(g):
                    morphism_map[key] = carrier.identity[object_map[pair_obj(sx, sy)]]
                else:
                    raise ParseError(f"TENSOR-MORPHISMS misses ({f!r},{g!r})", block.line)
    unit_rows = block.sections.get("UNIT-OBJECT", [])
    if len(unit_rows) != 1 or len(unit_rows[0][0]) != 1:
        raise ParseError("UNIT-OBJECT must contain exactly one object", block.line)
    tensor = FinFunctor(prod, carrier, object_map, morphism_map)
    return StrictMonCat(carrier, tensor, unit_rows[0][0][0])


def _build_monoidal(block: _Block):
    source_b = block.block("SOURCEMON")
    if source_b is None:
        raise ParseError("monoidal document needs a SOURCEMON block", block.line)
    source = _build_mon_cat(source_b)
    target_b = block.block("TARGETMON")
    target = _build_mon_cat(target_b) if target_b is not None else None
    functor_b = block.block("FUNCTOR")
    lax = None
    adjunction = None
    if functor_b is not None and target is not None:
        underlying = _build_functor(functor_b, source.carrier, target.carrier)
        mu = {}
        for row, lineno in block.sections.get("MU", []):
            if len(row) != 3:
                raise ParseError("MU rows are: x y morphism", lineno)
            mu[(row[0], row[1])] = row[2]
        mu0_rows = block.sections.get("MU0", [])
        if len(mu0_rows) != 1 or len(mu0_rows[0][0]) != 1:
            raise ParseError("MU0 must contain exactly one morphism", block.line)
        lax = LaxMonFunctor(source, target, underlying, mu, mu0_rows[0][0][0])
        adj_b = block.block("ADJUNCTION")
        if adj_b is not None:
            left = _build_functor(adj_b.block("LEFT") or _missing(adj_b, "LEFT"), target.carrier, source.carrier)
            unit = {row[0]: row[1] for row, _ in adj_b.sections.get("UNIT", [])}
            counit = {row[0]: row[1] for row, _ in adj_b.sections.get("COUNIT", [])}
            adjunction = Adjunction(
                left,
                underlying,
                NatTrans(
                    identity_functor(target.carrier), compose_functors(underlying, left), unit
                ),
                NatTrans(
                    compose_functors(left, underlying), identity_functor(source.carrier), counit
                ),
            )
    return source, target, lax, adjunction


def parse(text: str) -> Document:
    tokens = _tokenize(text)
    kind = None
    for lineno, words in tokens:
        if words[0] != "KIND" or len(words) != 2:
            raise ParseError("document must start with: KIND <kind>", lineno)
        kind = words[1]
        if kind not in KINDS:
            raise ParseError(f"unknown kind {kind!r}", lineno)
        break
    if kind is None:
        raise ParseError("empty document", 1)
    root = _parse_block(tokens, "", 1)
    if kind == "category":
        return Document(kind, _build_category(root))
    if kind == "triple":
        return Document(kind, _build_triple(root))
    if kind == "fibration":
        return Document(kind, _build_fibration(root))
    if kind == "diagram":
        return Document(kind, _build_diagram(root))
    if kind == "adjunction":
        return Document(kind, _build_adjunction(root))
    if kind == "transformation":
        return Document(kind, _build_transformation(root))
    return Document(kind, _build_monoidal(root))


# -- serialization ---------------------------------------------------------


def _category_lines(cat: FinCat, indent: str = ""):
    lines = [f"{indent}OBJECTS"]
    for x in sorted(cat.objects):
        lines.append(f"{indent}{x}")
    lines.append(f"{indent}MORPHISMS")
    for f in sorted(cat.morphisms):
        if cat.is_identity(f) and f == f"id_{cat.source(f)}":
            continue
        src, tgt = cat.morphisms[f]
        lines.append(f"{indent}{f} {src} {tgt}")
    lines.append(f"{indent}COMPOSE")
    for (g, f), gf in sorted(cat.composition.items()):
        if cat.is_identity(g) or cat.is_identity(f):
            continue
        lines.append(f"{indent}{g} {f} {gf}")
    return lines


def serialize_category(cat: FinCat) -> str:
    return "\n".join(["KIND category"] + _category_lines(cat)) + "\n"


def serialize_triple(triple: AdequateTriple) -> str:
    lines = ["KIND triple"] + _category_lines(triple.carrier)
    lines.append("INGRESSIVE")
    for f in sorted(triple.ingressives):
        if not triple.carrier.is_iso(f):
            lines.append(f)
    lines.append("EGRESSIVE")
    for f in sorted(triple.egressives):
        if not triple.carrier.is_iso(f):
            lines.append(f)
    return "\n".join(lines) + "\n"


def serialize_fibration(p: FibredFunctor) -> str:
    lines = ["KIND fibration", "BEGIN TOTAL"]
    lines += _category_lines(p.total)
    lines.append("END")
    lines.append("BEGIN BASEA")
    lines += _category_lines(p.base_a)
    lines.append("END")
    lines.append("BEGIN BASEB")
    lines += _category_lines(p.base_b)
    lines.append("END")
    lines.append("OBJECTMAP")
    for x in sorted(p.total.objects):
        a, b = _unpair(p.proj.object_map[x])
        lines.append(f"{x} {a} {b}")
    lines.append("MORPHISMMAP")
    for f in sorted(p.total.morphisms):
        if p.total.is_identity(f) and f == f"id_{p.total.source(f)}":
            continue
        fa, fb = _unpair(p.proj.morphism_map[f])
        lines.append(f"{f} {fa} {fb}")
    return "\n".join(lines) + "\n"


def serialize_diagram(diagram: CatDiagram) -> str:
    lines = ["KIND diagram", "BEGIN INDEX"]
    lines += _category_lines(diagram.index)
    lines.append("END")
    for a in sorted(diagram.index.objects):
        lines.append(f"BEGIN VALUE {a}")
        lines += _category_lines(diagram.values[a])
        lines.append("END")
    for f in sorted(diagram.index.morphisms):
        if diagram.index.is_identity(f):
            continue
        lines.append(f"BEGIN ARROW {f}")
        functor = diagram.arrows[f]
        lines.append("OBJECTMAP")
        for x in sorted(functor.object_map):
            lines.append(f"{x} {functor.object_map[x]}")
        lines.append("MORPHISMMAP")
        for m in sorted(functor.morphism_map):
            if functor.source.is_identity(m):
                continue
            lines.append(f"{m} {functor.morphism_map[m]}")
        lines.append("END")
    for (g, f), kappa in sorted(diagram.compositors.items()):
        if diagram.index.is_identity(g) or diagram.index.is_identity(f):
            continue
        if all(kappa.source.target.is_identity(c) for c in kappa.components.values()):
            continue
        lines.append(f"BEGIN COMPOSITOR {g} {f}")
        lines.append("ROWS")
        for x in sorted(kappa.components):
            lines.append(f"{x} {kappa.components[x]}")
        lines.append("END")
    return "\n".join(lines) + "\n"


def serialize(document: Document) -> str:
    if document.kind == "category":
        return serialize_category(document.payload)
    if document.kind == "triple":
        return serialize_triple(document.payload)
    if document.kind == "fibration":
        return serialize_fibration(document.payload)
    if document.kind == "diagram":
        return serialize_diagram(document.payload)
    raise ParseError(f"serialization of kind {document.kind!r} is not supported")
