import io
from pathlib import Path

import pytest

import commsim as cs

FIXTURES = Path(__file__).parent / "fixtures"
FOOTBALL_GML = FIXTURES / "football.gml"

TWO_TRIANGLES = "a b\nb c\nc a\nd e\ne f\nf d\nc d\n"
PATH3 = "x y\ny z\n"


def graph_from(text: str) -> cs.Graph:
    return cs.load_edge_list(io.StringIO(text)).graph


@pytest.fixture
def two_triangles() -> cs.Graph:
    return graph_from(TWO_TRIANGLES)


@pytest.fixture
def path3() -> cs.Graph:
    return graph_from(PATH3)


def require_football() -> Path:
    """Path of the bundled Football fixture, failing loudly when absent.

    The file is the public college-football game network (115 nodes, 613
    edges). It could not be redistributed with this build environment; see
    scripts/fetch_football.py and README.md for how to obtain it. Tests
    that depend on it fail (not skip) so the gap stays visible.
    """
    if not FOOTBALL_GML.exists():
        pytest.fail(
            f"missing fixture {FOOTBALL_GML}: the Football network "
            "(115 nodes / 613 edges) is not bundled because this build "
            "environment has no access to the public download; run "
            "scripts/fetch_football.py on a machine with network access "
            "and re-run the suite"
        )
    return FOOTBALL_GML
