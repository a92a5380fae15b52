"""Domain ontology with hierarchy-distance similarity.

Every node in a single-rooted taxonomy gets a milestone value
0.5 / K**depth (K > 1).  The distance between two concepts is the sum
of the milestone gaps from each concept up to their closest common
parent, and similarity is one minus that distance.  Declared synonym or
acronym pairs are distance 0 (similarity exactly 1).  The same
machinery runs over a second, independent hierarchy of relation types.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

_ROOT = None  # parent value for the root node

_CONCEPT_RE = re.compile(r"^CONCEPT\s+(\S+)\s+(ROOT|PARENT\s+\S+)\s+LABEL\s+(.+)$")
_RELATION_RE = re.compile(r"^RELATION\s+(\S+)\s+(ROOT|PARENT\s+\S+)$")


class OntologyFormatError(ValueError):
    """Raised when an ontology file violates the line grammar or invariants."""


@dataclass
class Concept:
    concept_id: str
    label: str
    parent: str | None
    depth: int = 0
    synonyms: frozenset[str] = field(default_factory=frozenset)
    acronyms: frozenset[str] = field(default_factory=frozenset)


@dataclass
class RelationType:
    relation_id: str
    parent: str | None
    depth: int = 0


@dataclass(frozen=True)
class Edge:
    subject: str
    relation: str
    object: str


def _compute_depths(
    parents: dict[str, str | None], decl_lines: dict[str, int], kind: str, path: str
) -> dict[str, int]:
    """Depth of every node from parent links, detecting cycles and orphans."""
    roots = [n for n, p in parents.items() if p is _ROOT]
    if not roots:
        raise OntologyFormatError(f"{path}: no ROOT {kind} declared")
    depths: dict[str, int] = {}
    for node in parents:
        chain = []
        cur: str | None = node
        while cur is not None and cur not in depths:
            if cur in chain:
                raise OntologyFormatError(
                    f"{path}:{decl_lines[cur]}: {kind} {cur!r} participates in a parent cycle"
                )
            chain.append(cur)
            parent = parents[cur]
            if parent is not None and parent not in parents:
                raise OntologyFormatError(
                    f"{path}:{decl_lines[cur]}: {kind} {cur!r} names unknown parent {parent!r}"
                )
            cur = parent
        base = -1 if cur is None else depths[cur]
        for i, n in enumerate(reversed(chain)):
            depths[n] = base + 1 + i
    return depths


@dataclass
class OntologyGraph:
    """Immutable-after-load concept and relation hierarchies plus edges."""

    concepts: dict[str, Concept]
    relations: dict[str, RelationType]
    edges: list[Edge]
    factor: float = 2.0

    def __post_init__(self) -> None:
        # id, lowercased label, and every alias all resolve to the concept
        self._alias_index: dict[str, str] = {}
        for cid, c in self.concepts.items():
            for key in (cid.lower(), c.label.lower(), *c.synonyms, *c.acronyms):
                self._alias_index.setdefault(key, cid)

    def resolve(self, name: str) -> str | None:
        """Concept id for an id, label, synonym, or acronym (case-insensitive)."""
        return self._alias_index.get(name.lower())

    def _concept(self, concept_id: str) -> Concept:
        try:
            return self.concepts[concept_id]
        except KeyError:
            raise ValueError(f"unknown concept {concept_id!r}") from None

    def _relation(self, relation_id: str) -> RelationType:
        try:
            return self.relations[relation_id]
        except KeyError:
            raise ValueError(f"unknown relation {relation_id!r}") from None

    def milestone(self, concept_id: str) -> float:
        """0.5 / K**depth — 0.5 at the root, halving (for K=2) per level."""
        return 0.5 / self.factor ** self._concept(concept_id).depth

    def _ancestors_or_self(self, concept_id: str) -> list[str]:
        chain = []
        cur: str | None = concept_id
        while cur is not None:
            chain.append(cur)
            cur = self.concepts[cur].parent
        return chain

    def ccp(self, c1: str, c2: str) -> str:
        """Closest common parent: the deepest ancestor-or-self shared by both."""
        self._concept(c1), self._concept(c2)
        chain1 = set(self._ancestors_or_self(c1))
        for node in self._ancestors_or_self(c2):  # walks upward, deepest first
            if node in chain1:
                return node
        raise ValueError(f"{c1!r} and {c2!r} share no common ancestor")

    def _declared_pair(self, a: Concept, b: Concept, kind: str) -> bool:
        a_set: frozenset[str] = getattr(a, kind)
        b_set: frozenset[str] = getattr(b, kind)
        return bool(
            b.concept_id.lower() in a_set
            or a.concept_id.lower() in b_set
            or b.label.lower() in a_set
            or a.label.lower() in b_set
            or (a_set & b_set)
        )

    def synonym_or_acronym_pair(self, c1: str, c2: str) -> bool:
        """True when the two concepts are declared synonyms or acronyms of each other."""
        a, b = self._concept(c1), self._concept(c2)
        return self._declared_pair(a, b, "synonyms") or self._declared_pair(a, b, "acronyms")

    def concept_distance(self, c1: str, c2: str) -> float:
        """Milestone-gap distance; 0 for identical or declared synonym/acronym pairs."""
        a, b = self._concept(c1), self._concept(c2)
        if c1 == c2 or self.synonym_or_acronym_pair(c1, c2):
            return 0.0
        top = self.milestone(self.ccp(c1, c2))
        return (top - self.milestone(c1)) + (top - self.milestone(c2))

    def concept_similarity(self, c1: str, c2: str) -> float:
        """1 - concept_distance; exactly 1 for synonym/acronym pairs."""
        return 1.0 - self.concept_distance(c1, c2)

    def _relation_milestone(self, relation_id: str) -> float:
        return 0.5 / self.factor ** self._relation(relation_id).depth

    def relation_similarity(self, r1: str, r2: str) -> float:
        """Same milestone-gap similarity, computed on the relation hierarchy."""
        self._relation(r1), self._relation(r2)
        if r1 == r2:
            return 1.0
        chain1 = set(self._relation_ancestors(r1))
        ccp = next(n for n in self._relation_ancestors(r2) if n in chain1)
        top = self._relation_milestone(ccp)
        d = (top - self._relation_milestone(r1)) + (top - self._relation_milestone(r2))
        return 1.0 - d

    def _relation_ancestors(self, relation_id: str) -> list[str]:
        chain = []
        cur: str | None = relation_id
        while cur is not None:
            chain.append(cur)
            cur = self.relations[cur].parent
        return chain

    def children(self, concept_id: str) -> list[Concept]:
        """Direct children, sorted by concept id for deterministic iteration."""
        self._concept(concept_id)
        kids = [c for c in self.concepts.values() if c.parent == concept_id]
        return sorted(kids, key=lambda c: c.concept_id)

    def edges_at(self, concept_id: str) -> list[Edge]:
        """Edges whose subject or object is the given concept, in file order."""
        return [e for e in self.edges if concept_id in (e.subject, e.object)]


def load_ontology(path: str | Path) -> OntologyGraph:
    """Parse and validate an ontology file.

    Grammar (one record per line, '#' comments):
    ``FACTOR <K>`` | ``CONCEPT <id> ROOT|PARENT <pid> LABEL <text>`` |
    ``SYNONYM <id> <alias...>`` | ``ACRONYM <id> <alias...>`` |
    ``RELATION <id> ROOT|PARENT <pid>`` | ``EDGE <subj> <rel> <obj>``.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    factor: float | None = None
    parents: dict[str, str | None] = {}
    labels: dict[str, str] = {}
    syn: dict[str, set[str]] = {}
    acr: dict[str, set[str]] = {}
    rel_parents: dict[str, str | None] = {}
    decl: dict[str, int] = {}
    rel_decl: dict[str, int] = {}
    edge_lines: list[tuple[int, str, str, str]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        keyword = line.split(None, 1)[0]
        if keyword == "FACTOR":
            parts = line.split()
            if factor is not None:
                raise OntologyFormatError(f"{path}:{lineno}: duplicate FACTOR line")
            try:
                factor = float(parts[1])
            except (IndexError, ValueError):
                raise OntologyFormatError(f"{path}:{lineno}: FACTOR needs a numeric value") from None
            if factor <= 1.0:
                raise OntologyFormatError(f"{path}:{lineno}: FACTOR must be > 1, got {parts[1]}")
        elif keyword == "CONCEPT":
            m = _CONCEPT_RE.match(line)
            if not m:
                raise OntologyFormatError(
                    f"{path}:{lineno}: expected CONCEPT <id> ROOT|PARENT <id> LABEL <text>"
                )
            cid, parent_part, label = m.group(1), m.group(2), m.group(3).strip()
            if cid in parents:
                raise OntologyFormatError(f"{path}:{lineno}: duplicate concept id {cid!r}")
            parent = _ROOT if parent_part == "ROOT" else parent_part.split()[1]
            if parent is _ROOT and any(p is _ROOT for p in parents.values()):
                raise OntologyFormatError(f"{path}:{lineno}: multiple ROOT concepts")
            parents[cid] = parent
            labels[cid] = label
            decl[cid] = lineno
        elif keyword in ("SYNONYM", "ACRONYM"):
            parts = line.split()
            if len(parts) < 3:
                raise OntologyFormatError(f"{path}:{lineno}: {keyword} needs an id and at least one alias")
            cid = parts[1]
            if cid not in parents:
                raise OntologyFormatError(f"{path}:{lineno}: {keyword} for unknown concept {cid!r}")
            target = syn if keyword == "SYNONYM" else acr
            target.setdefault(cid, set()).update(a.lower() for a in parts[2:])
        elif keyword == "RELATION":
            m = _RELATION_RE.match(line)
            if not m:
                raise OntologyFormatError(f"{path}:{lineno}: expected RELATION <id> ROOT|PARENT <id>")
            rid, parent_part = m.group(1), m.group(2)
            if rid in rel_parents:
                raise OntologyFormatError(f"{path}:{lineno}: duplicate relation id {rid!r}")
            parent = _ROOT if parent_part == "ROOT" else parent_part.split()[1]
            if parent is _ROOT and any(p is _ROOT for p in rel_parents.values()):
                raise OntologyFormatError(f"{path}:{lineno}: multiple ROOT relations")
            rel_parents[rid] = parent
            rel_decl[rid] = lineno
        elif keyword == "EDGE":
            parts = line.split()
            if len(parts) != 4:
                raise OntologyFormatError(f"{path}:{lineno}: expected EDGE <subject> <relation> <object>")
            edge_lines.append((lineno, parts[1], parts[2], parts[3]))
        else:
            raise OntologyFormatError(f"{path}:{lineno}: unknown record {keyword!r}")

    if not parents:
        raise OntologyFormatError(f"{path}: no CONCEPT records")
    depths = _compute_depths(parents, decl, "concept", str(path))
    rel_depths = _compute_depths(rel_parents, rel_decl, "relation", str(path)) if rel_parents else {}

    concepts = {
        cid: Concept(
            concept_id=cid,
            label=labels[cid],
            parent=parents[cid],
            depth=depths[cid],
            synonyms=frozenset(syn.get(cid, ())),
            acronyms=frozenset(acr.get(cid, ())),
        )
        for cid in parents
    }
    relations = {
        rid: RelationType(relation_id=rid, parent=rel_parents[rid], depth=rel_depths[rid])
        for rid in rel_parents
    }
    edges = []
    for lineno, s, r, o in edge_lines:
        if s not in concepts:
            raise OntologyFormatError(f"{path}:{lineno}: EDGE subject {s!r} is not a concept")
        if o not in concepts:
            raise OntologyFormatError(f"{path}:{lineno}: EDGE object {o!r} is not a concept")
        if r not in relations:
            raise OntologyFormatError(f"{path}:{lineno}: EDGE relation {r!r} is not a relation type")
        edges.append(Edge(subject=s, relation=r, object=o))
    return OntologyGraph(
        concepts=concepts,
        relations=relations,
        edges=edges,
        factor=2.0 if factor is None else factor,
    )
