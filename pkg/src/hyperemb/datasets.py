"""Bundled example networks."""
from __future__ import annotations

from importlib import resources

from .graph import Graph, load_edge_list


def football_standin() -> Graph:
    """Synthetic 115-node graph with the college football network's statistics.

    613 links (mean degree 10.661), smallest degree 7, twelve conference-like
    groups. It is not the real schedule; ``demos/make_football_standin.py``
    rebuilds it.
    """
    data = resources.files(__package__).joinpath("data", "football_standin.txt").read_bytes()
    return load_edge_list(data)
