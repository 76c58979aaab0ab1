"""Combinatorics of the semi-simplex category: strictly monotone maps
between finite ordinals, their face decompositions, and the boundary-cell
enumeration that drives matching-object telescopes.

The object ``[n]`` is the ordinal with n+1 elements, so a map [k] -> [n]
is a strictly increasing list of k+1 values below n+1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb


class DomainMismatch(Exception):
    pass


@dataclass(frozen=True)
class MonoMap:
    dom: int
    cod: int
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.dom < 0 or self.cod < 0:
            raise ValueError("objects of the semi-simplex category are [n] with n >= 0")
        if len(self.images) != self.dom + 1:
            raise ValueError(f"expected {self.dom + 1} images, got {len(self.images)}")
        if any(b <= a for a, b in zip(self.images, self.images[1:])):
            raise ValueError(f"images not strictly increasing: {self.images}")
        if self.images and (self.images[0] < 0 or self.images[-1] > self.cod):
            raise ValueError(f"images {self.images} escape codomain [{self.cod}]")

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __str__(self) -> str:
        return ",".join(str(i) for i in self.images)


def identity(n: int) -> MonoMap:
    return MonoMap(n, n, tuple(range(n + 1)))


def coface(n: int, i: int) -> MonoMap:
    """The elementary coface d_i : [n-1] -> [n] skipping i."""
    if not 0 <= i <= n:
        raise ValueError(f"coface index {i} out of range for [{n}]")
    return MonoMap(n - 1, n, tuple(j for j in range(n + 1) if j != i))


def compose(g: MonoMap, f: MonoMap) -> MonoMap:
    """Pointwise composite g . f (f applied first)."""
    if f.cod != g.dom:
        raise DomainMismatch(f"cannot compose [{g.dom}]->[{g.cod}] after [{f.dom}]->[{f.cod}]")
    return MonoMap(f.dom, g.cod, tuple(g(i) for i in f.images))


def enumerate_mono(k: int, n: int) -> list[MonoMap]:
    """All strictly monotone [k] -> [n] in lexicographic order of images."""
    if k < 0 or n < 0:
        return []
    return [MonoMap(k, n, images) for images in combinations(range(n + 1), k + 1)]


def face_decompose(f: MonoMap) -> list[int]:
    """Indices i1 > i2 > ... with f = d_{i1} . ... . d_{im}; the canonical
    form is the complement of the image, listed decreasing."""
    missing = [i for i in range(f.cod + 1) if i not in set(f.images)]
    return sorted(missing, reverse=True)


def recompose(dom: int, cod: int, faces: list[int]) -> MonoMap:
    """Fold a decreasing coface list back into a map [dom] -> [cod]."""
    acc = identity(dom)
    target = dom
    for i in reversed(faces):
        target += 1
        acc = compose(coface(target, i), acc)
    if acc.cod != cod:
        raise DomainMismatch(f"decomposition targets [{acc.cod}], expected [{cod}]")
    return acc


@dataclass(frozen=True)
class Cell:
    """A face of the n-simplex boundary, named by its vertex set."""

    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.vertices:
            raise ValueError("cells have a non-empty vertex set")
        if any(b <= a for a, b in zip(self.vertices, self.vertices[1:])):
            raise ValueError(f"vertices not strictly increasing: {self.vertices}")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def subcell(self, picks: tuple[int, ...]) -> "Cell":
        """The face of this cell spanned by the given vertex positions."""
        return Cell(tuple(self.vertices[i] for i in picks))


def boundary_cells(n: int) -> list[Cell]:
    """All proper non-empty faces of the n-simplex, dimension-major and
    lexicographic within a dimension.  This order fixes the binder order of
    generated matching telescopes."""
    cells = []
    for k in range(n):
        for verts in combinations(range(n + 1), k + 1):
            cells.append(Cell(verts))
    return cells


def binomial(n: int, k: int) -> int:
    return comb(n, k)
