"""WordNet-style sense inventory: synsets, lexical relations, neighborhoods.

A synset is a set of lemmas sharing one meaning, with a gloss and links
to hypernym/hyponym/meronym synsets.  The expansion pipeline uses two
queries against it: ``senses(lemma)`` for disambiguation candidates and
``neighborhood(sense_id)`` for weighted expansion terms (synonyms at
1.0, one-hop related lemmas at 0.5).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

_SENSE_RE = re.compile(r"^SENSE\s+(\S+)\s+WORDS\s+(.+?)\s+GLOSS\s+(.*)$")


class ThesaurusFormatError(ValueError):
    """Raised when a thesaurus file violates the line grammar or invariants."""


@dataclass
class Synset:
    sense_id: str
    words: list[str]
    gloss: str
    hypernyms: list[str] = field(default_factory=list)
    hyponyms: list[str] = field(default_factory=list)
    meronyms: list[str] = field(default_factory=list)


@dataclass
class Thesaurus:
    """Sense table plus a lemma index in SENSE-line order."""

    synsets: dict[str, Synset] = field(default_factory=dict)
    lemma_index: dict[str, list[str]] = field(default_factory=dict)

    @property
    def sense_count(self) -> int:
        return len(self.synsets)

    def senses(self, lemma: str) -> list[Synset]:
        """All synsets containing the lemma, in file order; [] when unknown."""
        return [self.synsets[sid] for sid in self.lemma_index.get(lemma.lower(), [])]

    def neighborhood(
        self, sense_id: str, source_lemma: str | None = None
    ) -> list[tuple[str, float, str]]:
        """Weighted expansion lemmas for one sense.

        Synonyms (the synset's other words) carry weight 1.0; lemmas of
        directly linked hyponym, hypernym, and meronym synsets carry
        0.5.  The source lemma — the word the user actually typed,
        defaulting to the synset's first word — is excluded, and
        duplicates keep their maximum weight.
        """
        syn = self.synsets.get(sense_id)
        if syn is None:
            raise ValueError(f"unknown sense_id {sense_id!r}")
        source = (source_lemma or syn.words[0]).lower()
        out: dict[str, tuple[float, str]] = {}

        def add(lemma: str, weight: float, tag: str) -> None:
            if lemma == source:
                return
            if lemma not in out or weight > out[lemma][0]:
                out[lemma] = (weight, tag)

        for w in syn.words:
            add(w, 1.0, "synonym")
        for tag, linked in (
            ("hyponym", syn.hyponyms),
            ("hypernym", syn.hypernyms),
            ("meronym", syn.meronyms),
        ):
            for sid in linked:
                for w in self.synsets[sid].words:
                    add(w, 0.5, tag)
        return [(lemma, weight, tag) for lemma, (weight, tag) in out.items()]


def _parse_words(segment: str, path: str, lineno: int) -> list[str]:
    words = []
    for raw in segment.split("|"):
        w = raw.strip().lower()
        if not w:
            raise ThesaurusFormatError(f"{path}:{lineno}: empty lemma in WORDS list")
        if w not in words:
            words.append(w)
    return words


def load_thesaurus(path: str | Path) -> Thesaurus:
    """Parse a thesaurus file, completing inverse links and validating.

    Grammar: ``SENSE <id> WORDS <w1|w2|...> GLOSS <text>``,
    ``HYPERNYM <child> <parent>``, ``HYPONYM <parent> <child>``,
    ``MERONYM <part> <whole>``, ``#`` comments.  Declaring either
    direction of the hypernym/hyponym relation implies the other.
    """
    path = Path(path)
    synsets: dict[str, Synset] = {}
    sense_lines: dict[str, int] = {}
    hyper_edges: dict[tuple[str, str], int] = {}  # (child, parent) -> lineno
    mero_edges: dict[tuple[str, str], int] = {}  # (part, whole) -> lineno

    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        keyword = line.split(None, 1)[0]
        if keyword == "SENSE":
            m = _SENSE_RE.match(line)
            if not m:
                raise ThesaurusFormatError(
                    f"{path}:{lineno}: expected SENSE <id> WORDS <w1|w2|...> GLOSS <text>"
                )
            sid, words_seg, gloss = m.group(1), m.group(2), m.group(3).strip()
            if sid in synsets:
                raise ThesaurusFormatError(f"{path}:{lineno}: duplicate sense_id {sid!r}")
            synsets[sid] = Synset(sense_id=sid, words=_parse_words(words_seg, str(path), lineno), gloss=gloss)
            sense_lines[sid] = lineno
        elif keyword in ("HYPERNYM", "HYPONYM", "MERONYM"):
            parts = line.split()
            if len(parts) != 3:
                raise ThesaurusFormatError(f"{path}:{lineno}: expected {keyword} <id> <id>")
            a, b = parts[1], parts[2]
            if a == b:
                raise ThesaurusFormatError(f"{path}:{lineno}: self-link on {a!r}")
            if keyword == "HYPERNYM":
                hyper_edges.setdefault((a, b), lineno)
            elif keyword == "HYPONYM":
                hyper_edges.setdefault((b, a), lineno)  # HYPONYM parent child
            else:
                mero_edges.setdefault((a, b), lineno)
        else:
            raise ThesaurusFormatError(f"{path}:{lineno}: unknown record {keyword!r}")

    for (child, parent), lineno in hyper_edges.items():
        for sid in (child, parent):
            if sid not in synsets:
                raise ThesaurusFormatError(f"{path}:{lineno}: reference to undeclared sense {sid!r}")
        synsets[child].hypernyms.append(parent)
        synsets[parent].hyponyms.append(child)
    for (part, whole), lineno in mero_edges.items():
        for sid in (part, whole):
            if sid not in synsets:
                raise ThesaurusFormatError(f"{path}:{lineno}: reference to undeclared sense {sid!r}")
        synsets[whole].meronyms.append(part)

    _reject_hypernym_cycles(synsets, hyper_edges, str(path))

    for syn in synsets.values():
        syn.hypernyms.sort()
        syn.hyponyms.sort()
        syn.meronyms.sort()

    lemma_index: dict[str, list[str]] = {}
    for sid, syn in synsets.items():
        for w in syn.words:
            bucket = lemma_index.setdefault(w, [])
            if sid not in bucket:
                bucket.append(sid)
    return Thesaurus(synsets=synsets, lemma_index=lemma_index)


def _reject_hypernym_cycles(
    synsets: dict[str, Synset], edges: dict[tuple[str, str], int], path: str
) -> None:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {sid: WHITE for sid in synsets}

    def visit(sid: str, stack: list[str]) -> None:
        color[sid] = GRAY
        stack.append(sid)
        for parent in synsets[sid].hypernyms:
            if color[parent] == GRAY:
                cycle_edge = (sid, parent)
                lineno = edges.get(cycle_edge, 0)
                raise ThesaurusFormatError(
                    f"{path}:{lineno}: hypernym cycle through {parent!r}"
                )
            if color[parent] == WHITE:
                visit(parent, stack)
        stack.pop()
        color[sid] = BLACK

    for sid in synsets:
        if color[sid] == WHITE:
            visit(sid, [])


def save_thesaurus(thesaurus: Thesaurus, path: str | Path) -> None:
    """Write the canonical form: SENSE lines in stored order, sorted relations.

    HYPONYM declarations collapse into their HYPERNYM inverses, so
    load -> save -> load is idempotent.
    """
    lines = []
    for syn in thesaurus.synsets.values():
        lines.append(f"SENSE {syn.sense_id} WORDS {'|'.join(syn.words)} GLOSS {syn.gloss}")
    hyper = sorted(
        (child.sense_id, parent)
        for child in thesaurus.synsets.values()
        for parent in child.hypernyms
    )
    for child, parent in hyper:
        lines.append(f"HYPERNYM {child} {parent}")
    mero = sorted(
        (part, whole.sense_id)
        for whole in thesaurus.synsets.values()
        for part in whole.meronyms
    )
    for part, whole in mero:
        lines.append(f"MERONYM {part} {whole}")
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
