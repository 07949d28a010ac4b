# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

"""
Compressed Context Assembly.

Packs the retrieved context into a token budget by structural proximity to
the question:

    1. entity and relationship descriptions, by hop distance
    2. tier-1 chunks: mention walked entities, by mention count
    3. tier-2 chunks: share question keywords only, by keyword count
    4. community reports, in original order

The output is organized by hop level:

    ## Hop 0
    ...
    ## Hop 1
    ...
    ## Sources
    ...
    ## Reports
    ...

"""
import itertools
import json
import logging

from dataclasses import dataclass
from dataclasses import field

from gwqa.analysis.walk.seeds import StopWordPolicy
from gwqa.analysis.walk.seeds import match_seeds
from gwqa.analysis.walk.seeds import segment
from gwqa.analysis.walk.walker import HopMap
from gwqa.analysis.walk.walker import ORIGIN_BFS
from gwqa.analysis.walk.walker import ORIGIN_COOCCURRENCE
from gwqa.analysis.walk.walker import PACKING_PREFIX
from gwqa.analysis.walk.walker import bfs_hops
from gwqa.analysis.walk.walker import cooccur_expand
from gwqa.core.context import render_context

logger = logging.getLogger(__name__)

TIER_1 = 1
TIER_2 = 2

SECTION_DESCRIPTIONS = "descriptions"
SECTION_TIER_1 = "tier1"
SECTION_TIER_2 = "tier2"
SECTION_REPORTS = "reports"

HOP_HEADER_TPL = "## Hop {}"
SOURCES_HEADER = "## Sources"
REPORTS_HEADER = "## Reports"

BLOCK_SEPARATOR = "\n\n"
ITEM_SEPARATOR = "\n"


@dataclass(frozen=True)
class CompressedContext:
    question_id: str
    rendered: str
    included_entities: HopMap = field(default_factory=HopMap)
    included_chunks: tuple = field(default_factory=tuple)
    stats: dict = field(default_factory=dict)

    @property
    def fallback(self):
        return self.stats.get("fallback", False)

    def to_json(self):
        record = {
            "question_id": self.question_id,
            "rendered": self.rendered,
            "stats": self.stats,
        }

        return json.dumps(record, ensure_ascii=False, sort_keys=True)


@dataclass(frozen=True)
class _Item:
    section: str
    header: str
    text: str
    kind: str
    key: tuple


def _description_items(ctx, hop_map):
    items = []

    for index, (entity_id, text) in enumerate(ctx.entity_descriptions):
        if entity_id not in hop_map:
            continue

        hop = hop_map.hop(entity_id)
        sort_key = (hop, 0, entity_id, "", index)

        items.append((sort_key, _Item(SECTION_DESCRIPTIONS, HOP_HEADER_TPL.format(hop), text,
                                      "entity", (entity_id,))))

    for index, (source, target, text) in enumerate(ctx.relationship_descriptions):
        hops = [hop_map.hop(e) for e in (source, target) if e in hop_map]

        if not hops:
            continue

        hop = min(hops)
        sort_key = (hop, 1, source, target, index)

        items.append((sort_key, _Item(SECTION_DESCRIPTIONS, HOP_HEADER_TPL.format(hop), text,
                                      "relationship", (source, target))))

    return [item for _, item in sorted(items, key=lambda pair: pair[0])]


def _chunk_items(graph, ctx, hop_map, keywords):
    tier1 = []
    tier2 = []

    for index, (chunk_id, text) in enumerate(ctx.text_chunks):
        chunk = graph.chunks.get(chunk_id)
        mentioned = chunk.mentioned_entities if chunk is not None else frozenset()

        mention_count = len([e for e in mentioned if e in hop_map])

        if mention_count > 0:
            item = _Item(SECTION_TIER_1, SOURCES_HEADER, text, "chunk", (chunk_id, TIER_1))
            tier1.append(((-mention_count, chunk_id, index), item))
            continue

        shared = len(keywords & set(segment(text)))

        if shared > 0:
            item = _Item(SECTION_TIER_2, SOURCES_HEADER, text, "chunk", (chunk_id, TIER_2))
            tier2.append(((-shared, chunk_id, index), item))

    tier1 = [item for _, item in sorted(tier1, key=lambda pair: pair[0])]
    tier2 = [item for _, item in sorted(tier2, key=lambda pair: pair[0])]

    return tier1, tier2


def _report_items(ctx):
    return [
        _Item(SECTION_REPORTS, REPORTS_HEADER, text, "report", (index,))
        for index, text in enumerate(ctx.community_reports)
    ]


def _pack(items, counter, budget, packing):
    """Greedily pack items (already in priority order) into the budget.

    With prefix packing the first overflowing item ends the packing. With
    skip packing an overflowing item is left out and the next one is tried;
    packing ends after a section whose items overflowed from some point to
    its end.
    """
    rendered = ""
    header = None
    included = []

    for section, group in itertools.groupby(items, key=lambda item: item.section):
        overflowing = False

        for item in group:
            if item.header == header:
                candidate = rendered + ITEM_SEPARATOR + item.text
            else:
                prefix = rendered + BLOCK_SEPARATOR if rendered else ""
                candidate = prefix + item.header + ITEM_SEPARATOR + item.text

            if counter.count(candidate) <= budget:
                rendered = candidate
                header = item.header
                included.append(item)
                overflowing = False
                continue

            logger.debug("Item %s %s overflows the budget", item.kind, item.key)

            if packing == PACKING_PREFIX:
                return rendered, included

            overflowing = True

        if overflowing:
            logger.debug("Every remaining %s item overflows the budget", section)
            break

    return rendered, included


def assemble(graph, ctx, hop_map, question, config, policy=None):
    """Assemble the hop-organized compressed context of a question.
    """
    if not hop_map:
        raise ValueError("hop map must not be empty")

    if policy is None:
        policy = StopWordPolicy.default()

    keywords = set(policy.content_words(question))

    tier1, tier2 = _chunk_items(graph, ctx, hop_map, keywords)

    items = _description_items(ctx, hop_map) + tier1 + tier2 + _report_items(ctx)

    rendered, included = _pack(items, config.counter, config.budget_tokens, config.packing)

    rendered_entities = set()
    included_chunks = []

    for item in included:
        if item.kind == "entity":
            rendered_entities.add(item.key[0])
        elif item.kind == "relationship":
            rendered_entities |= set(e for e in item.key if e in hop_map)
        elif item.kind == "chunk":
            included_chunks.append(item.key)

    input_tokens = config.counter.count(render_context(ctx))
    output_tokens = config.counter.count(rendered)

    stats = {
        "input_tokens": input_tokens,
        "output_tokens": output_tokens,
        "compression_ratio": 1.0 - float(output_tokens) / input_tokens if input_tokens else 0.0,
        "fallback": False,
        "seed_count": len([e for e, d in hop_map.distances.items()
                           if d == 0 and hop_map.origin[e] == ORIGIN_BFS]),
        "bfs_entities": len(hop_map.entities_with_origin(ORIGIN_BFS)),
        "cooccurrence_entities": len(hop_map.entities_with_origin(ORIGIN_COOCCURRENCE)),
        "tier1_chunks": len([c for c in included_chunks if c[1] == TIER_1]),
        "tier2_chunks": len([c for c in included_chunks if c[1] == TIER_2]),
    }

    return CompressedContext(
        question_id=ctx.question_id,
        rendered=rendered,
        included_entities=hop_map.restrict(rendered_entities),
        included_chunks=tuple(included_chunks),
        stats=stats,
    )


def fallback_context(ctx, config):
    """Return the uncompressed rendering of a context.
    """
    rendered = render_context(ctx)
    tokens = config.counter.count(rendered)

    stats = {
        "input_tokens": tokens,
        "output_tokens": tokens,
        "compression_ratio": 0.0,
        "fallback": True,
        "seed_count": 0,
        "bfs_entities": 0,
        "cooccurrence_entities": 0,
        "tier1_chunks": 0,
        "tier2_chunks": 0,
    }

    return CompressedContext(question_id=ctx.question_id, rendered=rendered, stats=stats)


def compress(graph, ctx, question, config, policy):
    """Compress a retrieved context by walking the knowledge graph from the
    question's seed entities.
    """
    seeds = match_seeds(question, graph, policy)

    if not seeds:
        logger.warning("No seed entities for question %s, using uncompressed context", ctx.question_id)

        return fallback_context(ctx, config)

    hop_map = bfs_hops(graph, [m.entity_id for m in seeds], config.max_depth)
    hop_map = cooccur_expand(graph, hop_map)

    compressed = assemble(graph, ctx, hop_map, question, config, policy)

    if not compressed.rendered:
        logger.warning("Nothing packed for question %s, using uncompressed context", ctx.question_id)

        return fallback_context(ctx, config)

    logger.debug("Compressed %s: %d -> %d tokens", ctx.question_id,
                 compressed.stats["input_tokens"], compressed.stats["output_tokens"])

    return compressed
