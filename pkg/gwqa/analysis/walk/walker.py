# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

"""
Graph Walk.

Bounded breadth-first search from the seed entities and co-occurrence
expansion through shared text chunks.

"""
import logging

from dataclasses import dataclass
from dataclasses import field

import networkx

from gwqa.config import DEFAULT_BUDGET
from gwqa.config import DEFAULT_MAX_DEPTH
from gwqa.core.context.tokens import ApproximateTokenCounter
from gwqa.core.graph import EntityNotFoundError

logger = logging.getLogger(__name__)

ORIGIN_BFS = "bfs"
ORIGIN_COOCCURRENCE = "cooccurrence"

PACKING_PREFIX = "prefix"
PACKING_SKIP = "skip"


@dataclass(frozen=True)
class WalkConfig:
    max_depth: int = DEFAULT_MAX_DEPTH
    budget_tokens: int = DEFAULT_BUDGET
    counter: object = field(default_factory=ApproximateTokenCounter)
    packing: str = PACKING_PREFIX

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")

        if self.budget_tokens < 1:
            raise ValueError("budget_tokens must be >= 1")

        if self.packing not in (PACKING_PREFIX, PACKING_SKIP):
            raise ValueError("unknown packing mode: {}".format(self.packing))


@dataclass(frozen=True)
class HopMap:
    distances: dict = field(default_factory=dict)
    origin: dict = field(default_factory=dict)

    def hop(self, entity_id):
        return self.distances[entity_id]

    def entities_with_origin(self, origin):
        return set(e for e, o in self.origin.items() if o == origin)

    def restrict(self, entity_ids):
        """Return the hop map restricted to the given entities.
        """
        return HopMap(
            dict((e, d) for e, d in self.distances.items() if e in entity_ids),
            dict((e, o) for e, o in self.origin.items() if e in entity_ids),
        )

    def __contains__(self, entity_id):
        return entity_id in self.distances

    def __len__(self):
        return len(self.distances)

    def __iter__(self):
        return iter(sorted(self.distances))


def bfs_hops(graph, seeds, max_depth=DEFAULT_MAX_DEPTH):
    """Tag every entity within max_depth hops with its distance to the
    nearest seed.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")

    seeds = set(seeds)

    missing = [s for s in seeds if s not in graph.entities]

    if missing:
        raise EntityNotFoundError(missing)

    if not seeds:
        return HopMap()

    lengths = networkx.multi_source_dijkstra_path_length(graph.graph, seeds, cutoff=max_depth)

    distances = dict((e, int(d)) for e, d in lengths.items())
    origin = dict((e, ORIGIN_BFS) for e in distances)

    logger.debug("BFS from %d seeds reached %d entities", len(seeds), len(distances))

    return HopMap(distances, origin)


def cooccur_expand(graph, hop_map):
    """Add the entities that share a text chunk with a BFS-reached entity.

    An added entity sits one hop past the closest bridging entity.
    """
    bfs_entities = hop_map.entities_with_origin(ORIGIN_BFS)

    added = {}

    for chunk_id in sorted(graph.chunks):
        mentioned = graph.chunks[chunk_id].mentioned_entities

        bridges = [e for e in mentioned if e in bfs_entities]

        if not bridges:
            continue

        bridge_hop = min(hop_map.distances[e] for e in bridges)

        for entity_id in mentioned:
            if entity_id in hop_map.distances:
                continue

            if entity_id not in added or bridge_hop + 1 < added[entity_id]:
                added[entity_id] = bridge_hop + 1

    distances = dict(hop_map.distances)
    origin = dict(hop_map.origin)

    for entity_id, hop in added.items():
        distances[entity_id] = hop
        origin[entity_id] = ORIGIN_COOCCURRENCE

    logger.debug("Co-occurrence expansion added %d entities", len(added))

    return HopMap(distances, origin)
