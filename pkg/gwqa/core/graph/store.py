# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

"""
Knowledge Graph Store.

Loads the knowledge graph emitted by a Graph-RAG indexer from three JSONL
files and indexes it for the graph walk.

Files
-----

    entities.jsonl      : {"id", "name", "description"}
    relationships.jsonl : {"source", "target", "predicate", "description"}
    chunks.jsonl        : {"id", "text", "entities": [ids]}

Unknown keys are ignored. Relationships are traversed as undirected edges;
duplicate edges collapse and self-loops are dropped.

"""
import json
import logging
import os

from dataclasses import dataclass
from dataclasses import field

import networkx

logger = logging.getLogger(__name__)

ENTITIES_FILENAME = "entities.jsonl"
RELATIONSHIPS_FILENAME = "relationships.jsonl"
CHUNKS_FILENAME = "chunks.jsonl"


class GraphError(Exception):
    pass


class GraphParseError(GraphError):

    def __init__(self, path, line, reason):
        super(GraphParseError, self).__init__(
            "{}:{}: {}".format(path, line, reason))

        self.path = path
        self.line = line


class GraphIntegrityError(GraphError):

    def __init__(self, ids, reason="dangling entity reference"):
        self.ids = sorted(ids)

        super(GraphIntegrityError, self).__init__(
            "{}: {}".format(reason, ", ".join(self.ids)))


class EntityNotFoundError(GraphError, KeyError):

    def __init__(self, ids):
        self.ids = sorted(ids)

        super(EntityNotFoundError, self).__init__(
            "unknown entity: {}".format(", ".join(self.ids)))

    def __str__(self):
        return self.args[0]


@dataclass(frozen=True)
class Entity:
    id: str
    name: str
    description: str = ""


@dataclass(frozen=True)
class Relationship:
    source: str
    target: str
    predicate: str = ""
    description: str = ""


@dataclass(frozen=True)
class TextChunk:
    id: str
    text: str
    mentioned_entities: frozenset = field(default_factory=frozenset)


class KnowledgeGraph(object):

    """Immutable knowledge graph with adjacency and mention indices.
    """

    def __init__(self, entities, relationships, chunks):

        # Entities accessed by id.
        self._entities = dict((e.id, e) for e in entities)

        # Relationships in file order (duplicates kept, they carry text).
        self._relationships = list(relationships)

        # Chunks accessed by id.
        self._chunks = dict((c.id, c) for c in chunks)

        self._check_integrity()

        # Undirected entity graph.
        self._graph = self._build_graph()

        # Entity id -> set of chunk ids.
        self._mention_index = self._build_mention_index()

    @property
    def entities(self):
        return self._entities

    @property
    def relationships(self):
        return self._relationships

    @property
    def chunks(self):
        return self._chunks

    @property
    def graph(self):
        """Get the undirected networkx graph (read only).
        """
        return self._graph

    @property
    def adjacency(self):
        return dict((n, set(self._graph.adj[n])) for n in self._graph.nodes)

    @property
    def mention_index(self):
        return dict((e, set(cs)) for e, cs in self._mention_index.items())

    def entity(self, entity_id):
        try:
            return self._entities[entity_id]
        except KeyError:
            raise EntityNotFoundError([entity_id])

    def neighbors(self, entity_id):
        """Return the neighbor set of an entity.
        """
        self._require([entity_id])

        return set(self._graph.adj[entity_id])

    def chunks_mentioning(self, entity_ids):
        """Return the ids of the chunks mentioning any of the entities.
        """
        entity_ids = set(entity_ids)

        self._require(entity_ids)

        chunk_ids = set()

        for entity_id in entity_ids:
            chunk_ids |= self._mention_index.get(entity_id, set())

        return chunk_ids

    def subgraph(self, entity_ids):
        """Return the induced (read only) subgraph over the entities.
        """
        self._require(entity_ids)

        return self._graph.subgraph(entity_ids)

    def canonical(self):
        """Return a canonical serialization of the graph.
        """
        state = {
            "entities": [
                [e.id, e.name, e.description] for e in
                sorted(self._entities.values(), key=lambda e: e.id)
            ],
            "edges": sorted(sorted(edge) for edge in self._graph.edges),
            "chunks": [
                [c.id, c.text, sorted(c.mentioned_entities)] for c in
                sorted(self._chunks.values(), key=lambda c: c.id)
            ],
            "mentions": dict(
                (e, sorted(cs)) for e, cs in sorted(self._mention_index.items())
            ),
        }

        return json.dumps(state, sort_keys=True, ensure_ascii=False)

    # Auxiliary functions
    # ======================================================================== #
    def _require(self, entity_ids):
        missing = [e for e in entity_ids if e not in self._entities]

        if missing:
            raise EntityNotFoundError(missing)

    def _check_integrity(self):
        dangling = set()

        for rel in self._relationships:
            for entity_id in (rel.source, rel.target):
                if entity_id not in self._entities:
                    dangling.add(entity_id)

        for chunk in self._chunks.values():
            dangling |= set(chunk.mentioned_entities) - set(self._entities)

        if dangling:
            raise GraphIntegrityError(dangling)

    def _build_graph(self):
        graph = networkx.Graph()

        # add nodes
        for entity_id in sorted(self._entities):
            graph.add_node(entity_id)

        # add edges (self-loops dropped, duplicates collapse)
        for rel in self._relationships:
            if rel.source == rel.target:
                continue

            graph.add_edge(rel.source, rel.target)

        return networkx.freeze(graph)

    def _build_mention_index(self):
        index = {}

        for chunk in self._chunks.values():
            for entity_id in chunk.mentioned_entities:
                index.setdefault(entity_id, set()).add(chunk.id)

        return index

    def __len__(self):
        return len(self._entities)

    def __contains__(self, entity_id):
        return entity_id in self._entities


def _read_jsonl(path, required):
    """Yield (line number, record) for every non-blank line of a JSONL file.
    """
    with open(path, "rb") as f:
        for lineno, raw in enumerate(f, 1):
            try:
                line = raw.decode("utf-8").strip()
            except UnicodeDecodeError as e:
                raise GraphParseError(path, lineno, "invalid UTF-8 ({})".format(e))

            if not line:
                continue

            try:
                record = json.loads(line)
            except ValueError as e:
                raise GraphParseError(path, lineno, "invalid JSON ({})".format(e))

            if not isinstance(record, dict):
                raise GraphParseError(path, lineno, "expected a JSON object")

            for key in required:
                if key not in record:
                    raise GraphParseError(path, lineno, "missing key '{}'".format(key))

            yield lineno, record


def load_graph(entities_path, relationships_path, chunks_path):
    """Load a knowledge graph from the three interchange files.
    """
    entities = []
    seen = set()

    for lineno, record in _read_jsonl(entities_path, ("id", "name")):
        entity_id = str(record["id"])
        name = str(record["name"])

        if entity_id in seen:
            raise GraphParseError(entities_path, lineno, "duplicate entity id '{}'".format(entity_id))

        if not name.strip():
            raise GraphParseError(entities_path, lineno, "empty entity name")

        seen.add(entity_id)
        entities.append(Entity(entity_id, name, str(record.get("description", ""))))

    relationships = []

    for _, record in _read_jsonl(relationships_path, ("source", "target")):
        relationships.append(Relationship(
            str(record["source"]),
            str(record["target"]),
            str(record.get("predicate", "")),
            str(record.get("description", "")),
        ))

    chunks = []
    seen = set()

    for lineno, record in _read_jsonl(chunks_path, ("id", "text")):
        chunk_id = str(record["id"])

        if chunk_id in seen:
            raise GraphParseError(chunks_path, lineno, "duplicate chunk id '{}'".format(chunk_id))

        mentions = record.get("entities", [])

        if not isinstance(mentions, list):
            raise GraphParseError(chunks_path, lineno, "'entities' must be a list")

        seen.add(chunk_id)
        chunks.append(TextChunk(chunk_id, str(record["text"]), frozenset(str(m) for m in mentions)))

    graph = KnowledgeGraph(entities, relationships, chunks)

    logger.info("Loaded graph: %d entities, %d edges, %d chunks",
                len(graph.entities), graph.graph.number_of_edges(), len(graph.chunks))

    return graph


def load_graph_dir(directory):
    """Load a knowledge graph from a directory holding the three files.
    """
    return load_graph(
        os.path.join(directory, ENTITIES_FILENAME),
        os.path.join(directory, RELATIONSHIPS_FILENAME),
        os.path.join(directory, CHUNKS_FILENAME),
    )
