"""Reading and writing complete graph-spec documents (topology + coins)."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .coins import CoinMatrix, coins_from_doc, coins_to_doc
from .topology import GraphTopology, parse_document, to_spec, topology_from_doc


def loads(text: str) -> tuple[GraphTopology, dict[int, CoinMatrix]]:
    doc = parse_document(text)
    g = topology_from_doc(doc)
    return g, coins_from_doc(doc, g)


def load(path) -> tuple[GraphTopology, dict[int, CoinMatrix]]:
    return loads(Path(path).read_text())


def dumps(g: GraphTopology, coins: dict[int, CoinMatrix]) -> str:
    return to_spec(g, coins_to_doc(coins))


def shipped(name: str) -> Path:
    """Path of a spec file bundled with the package (``diamond_grover.json`` ...)."""
    return Path(str(resources.files("sqwalk") / "data" / name))


def shipped_names() -> list[str]:
    return sorted(p.name for p in (resources.files("sqwalk") / "data").iterdir() if p.name.endswith(".json"))
