import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from wilsonloops._kernels_py import STEP
from wilsonloops.lattice import Loop

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def close_walk(moves: str) -> str:
    """Append the monotone path home: right/left first, then up/down."""
    x = sum(STEP[c][0] for c in moves)
    y = sum(STEP[c][1] for c in moves)
    return moves + ("L" if x > 0 else "R") * abs(x) + ("D" if y > 0 else "U") * abs(y)


words = st.text(alphabet="URDL", min_size=0, max_size=24)


@st.composite
def closed_loops(draw, max_walk: int = 8, origin=True):
    walk = draw(st.text(alphabet="URDL", min_size=1, max_size=max_walk))
    o = (draw(st.integers(-5, 5)), draw(st.integers(-5, 5))) if origin else (0, 0)
    return Loop(o, close_walk(walk))
