import pytest

from treehecke import Workspace

_WS = {}


def _get_ws(p, e, f, radius):
    """Session-wide workspace cache: ball tables and echelon caches are
    expensive, and every test module wants the same few contexts."""
    key = (p, e, f, radius)
    if key not in _WS:
        _WS[key] = Workspace(p, e, f, radius=radius)
    return _WS[key]


@pytest.fixture(scope="session")
def ws_factory():
    return _get_ws
