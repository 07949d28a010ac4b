# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

import logging

from pydot import Dot
from pydot import Edge
from pydot import Node

logger = logging.getLogger(__name__)


class SubgraphRenderer(object):

    def save(self, graph, hop_map, filename, format='dot'):
        raise NotImplementedError()


class SubgraphSimpleRenderer(SubgraphRenderer):

    """Render the reasoning subgraph reached by a graph walk.
    """

    fontname = 'Ubuntu Mono'

    graph_format = {
        'graph_type': 'graph',
        'rankdir':    'LR',
        'nodesep':    '0.6',
    }

    node_format = {
        'shape':    'box',
        'fontname': fontname,
        'fontsize': 9.0,
        'penwidth': 0.5,
    }

    edge_format = {
        'fontname': fontname,
        'fontsize': 8.0,
        'penwidth': 0.5,
    }

    # Seeds first, then fading with distance.
    hop_color = {
        0: 'red',
        1: 'orange',
        2: 'blue',
        3: 'gray40',
    }

    node_tpl = '{name}\\n(hop {hop})'

    def save(self, graph, hop_map, filename, format='dot'):
        """Save the walked subgraph into a file.
        """
        try:
            dot_graph = self.to_dot(graph, hop_map)

            # Plain dot output does not need graphviz.
            prog_format = 'raw' if format == 'dot' else format

            dot_graph.write("{}.{}".format(filename, format), format=prog_format)
        except Exception:
            logger.error("Failed to save subgraph: %s (%s)", filename, format, exc_info=True)

    def to_dot(self, graph, hop_map):
        dot_graph = Dot(**self.graph_format)

        entity_ids = sorted(hop_map.distances)

        # add nodes
        nodes = {}
        for entity_id in entity_ids:
            nodes[entity_id] = self._create_node(graph, hop_map, entity_id)

            dot_graph.add_node(nodes[entity_id])

        # add edges
        for src, dst in sorted(sorted(e) for e in graph.subgraph(entity_ids).edges):
            dot_graph.add_edge(Edge(nodes[src], nodes[dst], **self.edge_format))

        return dot_graph

    def _create_node(self, graph, hop_map, entity_id):
        hop = hop_map.distances[entity_id]

        label = self.node_tpl.format(name=_escape(graph.entity(entity_id).name), hop=hop)

        style = 'dashed' if hop_map.origin[entity_id] == 'cooccurrence' else 'solid'

        return Node(
            '"{}"'.format(_escape(entity_id)),
            label='"{}"'.format(label),
            color=self.hop_color.get(hop, 'gray70'),
            style=style,
            **self.node_format)


def _escape(text):
    return text.replace('\\', '\\\\').replace('"', '\\"')


def render_subgraph(graph, hop_map, filename, format='dot'):
    """Write the walked subgraph of a question to `filename`.`format`.
    """
    SubgraphSimpleRenderer().save(graph, hop_map, filename, format)
