# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

import json
import os

from gwqa.core.context import QuestionRecord
from gwqa.core.context import RetrievedContext
from gwqa.core.graph import Entity
from gwqa.core.graph import KnowledgeGraph
from gwqa.core.graph import Relationship
from gwqa.core.graph import TextChunk

FILLER_WORDS = [
    "amber", "basalt", "cobalt", "dune", "ember", "fjord", "glacier", "harbor",
    "indigo", "juniper", "kelp", "lagoon", "meadow", "nectar", "opal", "prairie",
]


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record) + "\n")


def write_graph_dir(directory, entities, relationships, chunks):
    """Write the three graph files. Arguments are lists of dicts.
    """
    write_jsonl(os.path.join(directory, "entities.jsonl"), entities)
    write_jsonl(os.path.join(directory, "relationships.jsonl"), relationships)
    write_jsonl(os.path.join(directory, "chunks.jsonl"), chunks)


def make_graph(names, edges=(), chunks=()):
    """Build a graph in memory.

    names  : {entity id: name}
    edges  : [(source, target)]
    chunks : [(chunk id, text, [entity ids])]
    """
    entities = [Entity(i, n, "{} description".format(n)) for i, n in sorted(names.items())]
    relationships = [Relationship(s, t, "related", "{} - {}".format(s, t)) for s, t in edges]
    text_chunks = [TextChunk(c, text, frozenset(ids)) for c, text, ids in chunks]

    return KnowledgeGraph(entities, relationships, text_chunks)


def filler_text(prefix, length, rng):
    """Return a text of exactly `length` characters starting with prefix.
    """
    text = prefix

    while len(text) < length:
        text += " " + rng.choice(FILLER_WORDS)

    return text[:length]


def synthetic_case(rng, n_entities, n_chunks, entity_len, chunk_len, n_reports=1, report_len=200,
                   tag="", matched=True):
    """Build a (graph, context, question) triple over a random tree.

    Entity k is named Node{k:02d}x (names never contain each other). The
    question names Node00x when `matched` is set.
    """
    names = dict(("E{:02d}".format(k), "Node{}{:02d}x".format(tag, k)) for k in range(n_entities))
    ids = sorted(names)

    edges = [(ids[k], ids[rng.randrange(k)]) for k in range(1, n_entities)]

    chunks = []

    for k in range(n_chunks):
        mentioned = set([ids[0]]) if rng.random() < 0.7 else set()
        mentioned |= set(rng.sample(ids, rng.randint(0, min(2, n_entities))))

        chunks.append(("C{:02d}".format(k), filler_text("chunk {}".format(k), chunk_len, rng), mentioned))

    graph = make_graph(names, edges, chunks)

    ctx = RetrievedContext(
        question_id="Q{}".format(tag),
        entity_descriptions=tuple(
            (e, filler_text(names[e], entity_len, rng)) for e in ids
        ),
        relationship_descriptions=tuple(
            (s, t, filler_text("{} to {}".format(s, t), entity_len, rng)) for s, t in edges
        ),
        community_reports=tuple(
            filler_text("report {}".format(k), report_len, rng) for k in range(n_reports)
        ),
        text_chunks=tuple((c, text) for c, text, _ in chunks),
    )

    if matched:
        question = "What about {}?".format(names[ids[0]])
    else:
        question = "What about nothing?"

    return graph, ctx, question


def pipeline_dataset(n_questions):
    """Build a graph, contexts and questions with one small cluster per
    question.

    Question q asks about Harbor{q:03d}; its gold answer is River{q:03d}.
    """
    names = {}
    edges = []
    chunks = []
    contexts = {}
    questions = []

    qtypes = ["bridge", "comparison", "inference"]

    for q in range(n_questions):
        cluster = ["Harbor", "River", "Mount", "Valley"]
        ids = ["{}{:03d}".format(kind[0], q) for kind in cluster]

        for entity_id, kind in zip(ids, cluster):
            names[entity_id] = "{}{:03d}".format(kind, q)

        cluster_edges = list(zip(ids, ids[1:]))
        edges.extend(cluster_edges)

        chunk_a = ("c{:03d}a".format(q), "Harbor{0:03d} drains into River{0:03d}.".format(q), [ids[0], ids[1]])
        chunk_b = ("c{:03d}b".format(q), "Valley{:03d} lies below the peaks.".format(q), [ids[3]])
        chunks.extend([chunk_a, chunk_b])

        qid = "q{:03d}".format(q)

        contexts[qid] = RetrievedContext(
            question_id=qid,
            entity_descriptions=tuple((e, "{} is a place.".format(names[e])) for e in ids),
            relationship_descriptions=tuple(
                (s, t, "{} borders {}.".format(names[s], names[t])) for s, t in cluster_edges
            ),
            community_reports=("Cluster {} report.".format(q),),
            text_chunks=((chunk_a[0], chunk_a[1]), (chunk_b[0], chunk_b[1])),
        )

        questions.append(QuestionRecord(
            id=qid,
            text="Where does Harbor{:03d} drain?".format(q),
            gold_answers=("River{:03d}".format(q),),
            qtype=qtypes[q % len(qtypes)],
            hops=2 + q % 3,
        ))

    return make_graph(names, edges, chunks), contexts, questions
