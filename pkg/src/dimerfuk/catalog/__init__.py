"""Bundled dimer models with their expected headline statistics."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from ..dimer import DimerModel, parse_dimer, trace_faces
from ..matchings import enumerate_matchings, is_internal
from ..quiver import dual_quiver


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    text: str
    note: str
    expected: dict

    def model(self) -> DimerModel:
        return parse_dimer(self.text)


# |B|, |W|, |E|, F, #matchings, #internal matchings
_EXPECTED = {
    "g0": (1, 1, 3, 1, 3, 0),
    "p2": (3, 3, 9, 3, 6, 3),
    "f0": (2, 2, 8, 4, 8, 4),
    "p2d": (4, 4, 11, 3, 6, 3),
}
STAT_KEYS = ("black", "white", "edges", "faces", "matchings", "internal")


def _note(text: str) -> str:
    for line in text.splitlines():
        if line.startswith("#"):
            return line.lstrip("# ").strip()
    return ""


def names() -> list[str]:
    return list(_EXPECTED)


def get(name: str) -> CatalogEntry:
    if name not in _EXPECTED:
        raise KeyError(name)
    text = resources.files(__name__).joinpath(f"{name}.dimer").read_text()
    return CatalogEntry(name, text, _note(text), dict(zip(STAT_KEYS, _EXPECTED[name])))


def entries() -> list[CatalogEntry]:
    return [get(n) for n in names()]


def stats(model: DimerModel) -> dict:
    q = dual_quiver(model)
    ms = enumerate_matchings(model)
    return {
        "black": len(model.black_nodes),
        "white": len(model.white_nodes),
        "edges": len(model.edges),
        "faces": len(trace_faces(model)),
        "matchings": len(ms),
        "internal": sum(is_internal(q, m) for m in ms),
    }


def drift(entry: CatalogEntry) -> dict:
    """Stats whose recomputed value differs from the stored one."""
    live = stats(entry.model())
    return {k: {"expected": entry.expected[k], "actual": live[k]} for k in STAT_KEYS if live[k] != entry.expected[k]}
