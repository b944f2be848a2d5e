"""Named instances bundled with the package."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from importlib import resources

from .chain_ring import RingSpec
from .matrix_algebra import RMatrix


@dataclass(frozen=True)
class InstanceDescriptor:
    name: str
    ring: dict
    n: int
    r: int
    kind: str
    matrix: list | None = None
    family: dict | None = None
    expect: dict = field(default_factory=dict)
    notes: str = ""

    @property
    def spec(self) -> RingSpec:
        return RingSpec.from_json(self.ring)

    def matrix_over(self, length: int | None = None) -> RMatrix:
        """The bundled matrix, with entries read in O_length (default O_r)."""
        if self.matrix is None:
            raise ValueError(f"instance {self.name} carries a family, not a matrix")
        spec = self.spec.with_length(length or self.r)
        return RMatrix.from_json({"ring": spec.to_json(), "n": self.n, "entries": self.matrix})

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_json(cls, d: dict) -> "InstanceDescriptor":
        return cls(
            name=d["name"],
            ring=dict(d["ring"]),
            n=int(d["n"]),
            r=int(d["r"]),
            kind=d["kind"],
            matrix=d.get("matrix"),
            family=d.get("family"),
            expect=dict(d.get("expect", {})),
            notes=d.get("notes", ""),
        )


def _load(name: str):
    return json.loads(resources.files("chainrep").joinpath("data", name).read_text())


def corpus_list() -> list[InstanceDescriptor]:
    return [InstanceDescriptor.from_json(d) for d in _load("corpus.json")]


def corpus_get(name: str) -> InstanceDescriptor:
    for inst in corpus_list():
        if inst.name == name:
            return inst
    raise KeyError(f"no corpus instance named {name!r}")


def stable_representatives(ring_name: str, n: int) -> list[RMatrix]:
    """Bundled stable class representatives (generated by stability.stable_orbit_representatives)."""
    data = _load("stable_representatives.json")
    key = f"{ring_name}:{n}"
    if key not in data:
        raise KeyError(f"no bundled representatives for {key}")
    entry = data[key]
    return [RMatrix.from_json({"ring": entry["ring"], "n": n, "entries": rows}) for rows in entry["matrices"]]
