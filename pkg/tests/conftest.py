import numpy as np
import pytest

from rdftopo.graph import Graph


def graph_from(edges, n, attrs=None):
    """Graph over vertices 0..n-1 from (src, dst) pairs; attrs default to 0."""
    edges = list(edges)
    src = np.array([e[0] for e in edges], dtype=np.int64)
    dst = np.array([e[1] for e in edges], dtype=np.int64)
    if attrs is None:
        attrs = np.zeros(len(edges), dtype=np.uint64)
    return Graph(
        np.arange(n, dtype=np.uint64),
        src,
        dst,
        np.asarray(attrs, dtype=np.uint64),
    )


@pytest.fixture
def tiny_graph():
    # a->b, b->a, a->c
    return graph_from([(0, 1), (1, 0), (0, 2)], n=3)


@pytest.fixture
def parallel_pair_graph():
    # { s p1 o . s p2 o }
    return graph_from([(0, 1), (0, 1)], n=2, attrs=[11, 22])


ROMA_LINE = (
    b"<http://data.linkedopendata.it/musei/resource/Roma> "
    b'<http://www.w3.org/2000/01/rdf-schema#label> "Roma" .\n'
)
ROMA_EDGELIST_LINE = "43f2f4f2e41ae099 c9643559faeed68e 02325f53aeba2f02"
