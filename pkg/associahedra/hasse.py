"""
Hasse Diagrams

Covering graphs of K_m and the Tamari poset L_m as networkx digraphs, with
hand-written DOT and canonical JSON export.

To plot a diagram save the DOT output and run:

    dot -Tpng k4.gv > k4.png
"""

import logging
from typing import Any, Callable, Dict, List, Optional

import networkx as nx

from .kposet import covers, enumerate_words, leq
from .reports import make_report, register_replay, witness
from .tamari import binary_key, binary_trees, render_binary, rotation_covers, tamari_leq
from .wordtree import render, word_key

logger = logging.getLogger(__name__)


def k_hasse(m: int, n=None) -> nx.DiGraph:
    """Nodes are rendered words; an edge drops one interval"""
    graph = nx.DiGraph(name=f"K{m}", poset='K', m=m)
    words = enumerate_words(m, n)
    present = set(words)
    for w in words:
        graph.add_node(render(w), key=word_key(w), intervals=len(w.intervals))
    for w in words:
        for f in covers(w):
            if f.target in present:
                graph.add_edge(render(w), render(f.target))
    logger.debug(f"K{m} Hasse diagram: {graph.number_of_nodes()} nodes, {graph.number_of_edges()} covers")
    return graph


def tamari_hasse(m: int) -> nx.DiGraph:
    """Nodes are rendered binary trees; an edge is one right rotation"""
    graph = nx.DiGraph(name=f"L{m}", poset='L', m=m)
    trees = binary_trees(m)
    for t in trees:
        graph.add_node(render_binary(t), key=binary_key(t))
    for t in trees:
        for u in rotation_covers(t):
            graph.add_edge(render_binary(t), render_binary(u))
    logger.debug(f"L{m} Hasse diagram: {graph.number_of_nodes()} nodes, {graph.number_of_edges()} covers")
    return graph


def _sorted_nodes(graph: nx.DiGraph) -> List[str]:
    return sorted(graph.nodes, key=lambda v: graph.nodes[v].get('key', v))


def _sorted_edges(graph: nx.DiGraph) -> List[tuple]:
    order = {v: i for i, v in enumerate(_sorted_nodes(graph))}
    return sorted(graph.edges, key=lambda e: (order[e[0]], order[e[1]]))


def to_dot(graph: nx.DiGraph) -> str:
    lines = [f'digraph "{graph.graph.get("name", "hasse")}" {{', '\tgraph [rankdir=BT];']
    write_line = lines.append
    for v in _sorted_nodes(graph):
        write_line(f'\t"{v}";')
    for u, v in _sorted_edges(graph):
        write_line(f'\t"{u}" -> "{v}";')
    write_line('}')
    return '\n'.join(lines) + '\n'


def to_json(graph: nx.DiGraph) -> Dict[str, Any]:
    return {
        'name': graph.graph.get('name', 'hasse'),
        'nodes': _sorted_nodes(graph),
        'edges': [list(e) for e in _sorted_edges(graph)]
    }


def check_covers(graph: nx.DiGraph, elements: List[Any], label: Callable[[Any], str],
                 order: Callable[[Any, Any], bool]) -> Dict[str, Any]:
    """The cover edges equal the transitive reduction of the full order"""
    full = nx.DiGraph()
    full.add_nodes_from(label(x) for x in elements)
    for x in elements:
        for y in elements:
            if x != y and order(x, y):
                full.add_edge(label(x), label(y))
    reduced = nx.transitive_reduction(full)
    checked = full.number_of_edges()
    expected, actual = set(reduced.edges), set(graph.edges)
    if expected != actual:
        return make_report('hasse_covers', checked, witness(
            'hasse_mismatch', {'graph': graph.graph.get('name'), 'poset': graph.graph.get('poset'),
                               'm': graph.graph.get('m')},
            expected=sorted(map(list, expected - actual)), actual=sorted(map(list, actual - expected))))
    return make_report('hasse_covers', checked)


def check_k_hasse(m: int) -> Dict[str, Any]:
    return check_covers(k_hasse(m), enumerate_words(m), render, leq)


def check_tamari_hasse(m: int) -> Dict[str, Any]:
    return check_covers(tamari_hasse(m), binary_trees(m), render_binary, tamari_leq)


@register_replay('hasse_mismatch')
def _replay_hasse(instance: Dict[str, Any], graph: Optional[nx.DiGraph] = None, **_) -> bool:
    """Recheck the named diagram, or the graph passed in its place"""
    m = instance['m']
    if instance['poset'] == 'K':
        report = check_covers(graph if graph is not None else k_hasse(m), enumerate_words(m), render, leq)
    else:
        report = check_covers(graph if graph is not None else tamari_hasse(m), binary_trees(m),
                              render_binary, tamari_leq)
    return not report['success']
