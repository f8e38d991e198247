"""Verb-oriented extraction: predicate frames, seed-verb bootstrapping,
semantic relations, and the aggregated network.

Frames attach role fillers to each verb group of a sentence.  The subject
slot maps to `agent` (or `object` under a passive *être* + participle),
unmarked right-hand chunks map to `object` and are retyped `money`/`time`
when the filler's concept category says so, *à*-marked chunks map to
`beneficiary`, *en*-marked product fillers to `material`, *par*-marked
chunks to `agent` in passives, and date mentions fill `time`.

Bootstrapping expands a seed verb lexicon over syntactic paths: abstract
path shapes supported by enough in-lexicon, in-cluster instances admit new
verbs that share enough cluster fillers with the current lexicon through
the same shape.  Growth is monotone and every addition records its path
provenance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .concepts import ConceptCluster, ConceptMention
from .entities import EntityMention
from .errors import EmptySeeds
from .grammar import Chunk, SentenceAnalysis, SyntacticPath

ROLES = ("agent", "object", "beneficiary", "money", "material", "time", "location")

PASSIVE_AUX = "être"

VERB_SHAPE_SLOT = "V"


@dataclass(frozen=True)
class RoleFiller:
    kind: str  # concept | entity | chunk
    text: str
    span: tuple[int, int]
    category: str | None = None


@dataclass(frozen=True)
class PredicateFrame:
    doc_id: str
    sentence_index: int
    predicate: str
    predicate_token: int
    roles: dict[str, RoleFiller]

    def role_items(self) -> list[tuple[str, RoleFiller]]:
        return [(r, self.roles[r]) for r in ROLES if r in self.roles]


@dataclass
class SeedLexicon:
    category: str
    generation: int
    members: set[str]
    provenance: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_text(cls, category: str, text: str) -> "SeedLexicon":
        members = {
            line.strip() for line in text.splitlines()
            if line.strip() and not line.startswith("#")
        }
        return cls(category=category, generation=0, members=members,
                   provenance={m: "seed" for m in members})


@dataclass
class BootstrapResult:
    lexicon: SeedLexicon
    accepted_paths: dict[tuple[str, str], int]  # (abstract shape, slot) -> support
    generations: list[set[str]]


@dataclass(frozen=True)
class SemanticRelation:
    relation_id: str
    predicate: str
    arguments: dict[str, str]  # role -> argument value
    doc_id: str
    sentence_index: int


@dataclass(frozen=True)
class NetworkEdge:
    source: str
    target: str
    label: str
    weight: int


@dataclass
class SemanticNetwork:
    nodes: list[str]
    edges: list[NetworkEdge]


def find_predicates(
    analysis: SentenceAnalysis,
    concept_mentions: list[ConceptMention],
    entity_mentions: list[EntityMention],
) -> list[PredicateFrame]:
    """One frame per verb group with at least one fillable role."""
    tagged = analysis.tagged
    token_by_index = analysis.token_by_index()
    by_index = analysis.tagged_by_index()
    concept_at = {}
    for cm in concept_mentions:
        for idx in range(cm.token_range[0], cm.token_range[1] + 1):
            concept_at[idx] = cm
    entity_at = {}
    for em in entity_mentions:
        for idx in range(em.token_range[0], em.token_range[1] + 1):
            entity_at[idx] = em

    frames: list[PredicateFrame] = []
    groups = _verb_groups(tagged)
    verb_positions = {p for g in groups for p in g}
    for group in groups:
        first, last = tagged[group[0]], tagged[group[-1]]
        passive = len(group) > 1 and first.lemma == PASSIVE_AUX
        predicate = last
        roles: dict[str, RoleFiller] = {}

        subject = _find_subject_chunk(analysis, group[0])
        if subject is not None:
            filler = _filler_for(subject, by_index, token_by_index, concept_at, entity_at)
            roles["object" if passive else "agent"] = filler

        for chunk_, marker in _objects_with_markers(analysis, group[-1], verb_positions):
            filler = _filler_for(chunk_, by_index, token_by_index, concept_at, entity_at)
            role = _role_for(marker, filler, passive)
            if role is not None and role not in roles:
                roles[role] = filler

        if "time" not in roles:
            for em in entity_mentions:
                if em.etype == "DATE" and em.iso_value:
                    roles["time"] = RoleFiller("entity", em.iso_value, em.span, None)
                    break

        if roles:
            frames.append(
                PredicateFrame(
                    doc_id=analysis.doc_id,
                    sentence_index=analysis.index,
                    predicate=predicate.lemma,
                    predicate_token=predicate.token_index,
                    roles=roles,
                )
            )
    return frames


def _verb_groups(tagged) -> list[list[int]]:
    groups, run = [], []
    for pos_i, t in enumerate(tagged):
        if t.pos == "VERB":
            run.append(pos_i)
        elif run:
            groups.append(run)
            run = []
    if run:
        groups.append(run)
    return groups


def _find_subject_chunk(analysis: SentenceAnalysis, verb_pos: int) -> Chunk | None:
    from .grammar import _find_subject

    return _find_subject(analysis.tagged, analysis.chunks, verb_pos)


def _objects_with_markers(
    analysis: SentenceAnalysis, verb_pos: int, verb_positions: set[int]
) -> list[tuple[Chunk, str | None]]:
    from .grammar import OBJECT_WINDOW, _find_objects

    return _find_objects(analysis.tagged, analysis.chunks, verb_pos, verb_positions, OBJECT_WINDOW)


def _filler_for(chunk_, by_index, token_by_index, concept_at, entity_at) -> RoleFiller:
    head_index = chunk_.head
    span = (token_by_index[chunk_.token_range[0]].span[0],
            token_by_index[chunk_.token_range[1]].span[1])
    cm = concept_at.get(head_index)
    if cm is not None:
        return RoleFiller("concept", cm.matched_member, cm.span, cm.category)
    em = entity_at.get(head_index)
    if em is not None:
        return RoleFiller("entity", em.surface, em.span, em.etype)
    return RoleFiller("chunk", by_index[head_index].lemma, span, None)


def _role_for(marker: str | None, filler: RoleFiller, passive: bool) -> str | None:
    if filler.kind == "entity" and filler.category == "LOCATION":
        return "location"
    if marker is None:
        if filler.category == "money":
            return "money"
        if filler.category == "time":
            return "time"
        return "object"
    if marker == "à":
        return "beneficiary"
    if marker == "par" and passive:
        return "agent"
    if marker in ("en", "avec") and filler.category == "product":
        return "material"
    if marker in ("dans", "chez", "en", "sur"):
        return "location"
    return None


def bootstrap(
    seeds: SeedLexicon,
    corpus: list[SentenceAnalysis],
    clusters: list[ConceptCluster],
    min_path_support: int = 2,
    max_iterations: int = 5,
    target_categories: set[str] | None = None,
) -> BootstrapResult:
    """Expand the seed verb lexicon to a fixpoint over shared path fillers.

    Each iteration (1) accepts abstract path shapes whose in-lexicon
    instances have at least `min_path_support` cluster-member fillers,
    then (2) admits every verb sharing at least `min_path_support` such
    fillers with the current lexicon through an accepted shape.
    """
    if not seeds.members:
        raise EmptySeeds(seeds.category)

    cluster_members: set[str] = set()
    for c in clusters:
        if target_categories is None or c.category in target_categories:
            cluster_members |= c.members

    # (shape, slot, verb, filler) instances over the whole corpus
    instances: list[tuple[str, str, str, str]] = []
    for analysis in corpus:
        for path in analysis.paths:
            verb = path.verb_lemma
            shape = _abstract_shape(path)
            for endpoint in path.noun_endpoints():
                filler = _endpoint_target(endpoint)
                if filler in cluster_members:
                    instances.append((shape, endpoint.slot, verb, filler))

    members = set(seeds.members)
    provenance = dict(seeds.provenance)
    for m in members:
        provenance.setdefault(m, "seed")
    generations = [set(members)]
    accepted: dict[tuple[str, str], int] = {}

    iteration = 0
    while iteration < max_iterations:
        iteration += 1
        support: dict[tuple[str, str], int] = {}
        lexicon_fillers: dict[tuple[str, str], set[str]] = {}
        candidate_fillers: dict[tuple[str, str], dict[str, set[str]]] = {}
        for shape, slot, verb, filler in instances:
            key = (shape, slot)
            if verb in members:
                support[key] = support.get(key, 0) + 1
                lexicon_fillers.setdefault(key, set()).add(filler)
            else:
                candidate_fillers.setdefault(key, {}).setdefault(verb, set()).add(filler)
        accepted = {k: n for k, n in support.items() if n >= min_path_support}

        added: dict[str, tuple[int, str]] = {}
        for key in accepted:
            shape, slot = key
            seed_fillers = lexicon_fillers.get(key, set())
            for verb, fillers in candidate_fillers.get(key, {}).items():
                shared = len(fillers & seed_fillers)
                if shared >= min_path_support:
                    note = f"path:{shape}[{slot}] shared={shared}"
                    prev = added.get(verb)
                    if prev is None or (shared, note) > prev:
                        added[verb] = (shared, note)
        if not added:
            break
        for verb in sorted(added):
            members.add(verb)
            provenance[verb] = added[verb][1]
        generations.append(set(members))

    lexicon = SeedLexicon(
        category=seeds.category,
        generation=len(generations) - 1,
        members=members,
        provenance=provenance,
    )
    return BootstrapResult(lexicon=lexicon, accepted_paths=accepted, generations=generations)


def _abstract_shape(path: SyntacticPath) -> str:
    verb = path.verb_lemma
    return "→".join(VERB_SHAPE_SLOT if s == verb else s for s in path.signature)


def _endpoint_target(endpoint) -> str:
    if len(endpoint.seq) > 1:
        return " ".join(endpoint.seq)
    return endpoint.lemma


def extract_relations(
    frames: list[PredicateFrame],
    lexicon: SeedLexicon,
) -> list[SemanticRelation]:
    """One relation per frame whose predicate belongs to the lexicon."""
    ordered = sorted(frames, key=lambda f: (f.doc_id, f.sentence_index, f.predicate_token))
    relations = []
    for frame in ordered:
        if frame.predicate not in lexicon.members:
            continue
        relations.append(
            SemanticRelation(
                relation_id=f"rel-{len(relations):04d}",
                predicate=frame.predicate,
                arguments={role: filler.text for role, filler in frame.role_items()},
                doc_id=frame.doc_id,
                sentence_index=frame.sentence_index,
            )
        )
    return relations


def build_network(relations: list[SemanticRelation]) -> SemanticNetwork:
    """Aggregate relations into a weighted graph over argument values.

    Every typed argument pair of a relation contributes one unit of weight
    to the edge (earlier role's value, later role's value, `<later>-of`),
    so the sum of edge weights equals the number of typed arg-pair
    instances.
    """
    weights: dict[tuple[str, str, str], int] = {}
    nodes: set[str] = set()
    for relation in relations:
        items = [(r, v) for r, v in relation.arguments.items()]
        items.sort(key=lambda rv: ROLES.index(rv[0]))
        for v in relation.arguments.values():
            nodes.add(v)
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                role_a, val_a = items[i]
                role_b, val_b = items[j]
                key = (val_a, val_b, f"{role_b}-of")
                weights[key] = weights.get(key, 0) + 1
    edges = [
        NetworkEdge(source=s, target=t, label=label, weight=w)
        for (s, t, label), w in sorted(weights.items())
    ]
    return SemanticNetwork(nodes=sorted(nodes), edges=edges)
