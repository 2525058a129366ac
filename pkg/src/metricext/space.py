"""Countable discrete spaces enumerated in finite blocks.

A space is a sequence of finite blocks of hashable point ids. Finite
rosters have finitely many blocks; lazy spaces draw blocks on demand from a
generator and cache them. In the discrete category every subset is closed,
every function is continuous and compact means finite.
"""
from __future__ import annotations

import threading
from itertools import count
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .errors import EmptySubset

Point = Hashable


class BlockGenerator:
    """Protocol for block sources. ``n_blocks`` is None for infinite spaces."""

    name = "custom"
    n_blocks: int | None = None

    def block(self, k: int) -> tuple:
        raise NotImplementedError

    def block_of(self, x) -> int:
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def params(self) -> dict:
        return {}


class FiniteBlocks(BlockGenerator):
    name = "finite"

    def __init__(self, blocks: Sequence[Sequence[Point]]):
        self.blocks = [tuple(b) for b in blocks]
        self.n_blocks = len(self.blocks)
        self._where = {}
        for k, b in enumerate(self.blocks):
            for x in b:
                if x in self._where:
                    raise ValueError(f"duplicate point {x!r}")
                self._where[x] = k

    def block(self, k):
        return self.blocks[k] if 0 <= k < self.n_blocks else ()

    def block_of(self, x):
        try:
            return self._where[x]
        except (KeyError, TypeError):
            raise KeyError(f"{x!r} is not a point of this space") from None

    def contains(self, x):
        try:
            return x in self._where
        except TypeError:
            return False


class Naturals(BlockGenerator):
    """``0, 1, 2, ...`` in consecutive blocks of ``block_size`` points."""

    name = "naturals"

    def __init__(self, block_size: int = 1):
        if block_size < 1:
            raise ValueError("block_size must be >= 1")
        self.block_size = block_size

    def block(self, k):
        s = self.block_size
        return tuple(range(k * s, (k + 1) * s))

    def contains(self, x):
        return isinstance(x, int) and not isinstance(x, bool) and x >= 0

    def block_of(self, x):
        if not self.contains(x):
            raise KeyError(f"{x!r} is not a natural number")
        return x // self.block_size

    def params(self):
        return {"block_size": self.block_size}


class Dyadic(BlockGenerator):
    """Naturals in dyadic blocks ``{0}, {1}, {2, 3}, {4..7}, ...``."""

    name = "dyadic"

    def block(self, k):
        if k == 0:
            return (0,)
        return tuple(range(2 ** (k - 1), 2**k))

    def contains(self, x):
        return isinstance(x, int) and not isinstance(x, bool) and x >= 0

    def block_of(self, x):
        if not self.contains(x):
            raise KeyError(f"{x!r} is not a natural number")
        return x.bit_length()


class Product(BlockGenerator):
    """Pairs ``(x, z)``; block ``j`` holds the pairs whose block indices sum to ``j``.

    The second factor must be infinite so that every block is nonempty.
    """

    name = "product"

    def __init__(self, left: Space, right: Space):
        if right.is_finite:
            raise ValueError("the second factor of a product must be infinite")
        self.left, self.right = left, right

    def block(self, j):
        out = []
        top = j if self.left.n_blocks is None else min(j, self.left.n_blocks - 1)
        for i in range(top + 1):
            zs = self.right.block(j - i)
            out.extend((x, z) for x in self.left.block(i) for z in zs)
        return tuple(out)

    def contains(self, p):
        return (
            isinstance(p, tuple) and len(p) == 2
            and p[0] in self.left and p[1] in self.right
        )

    def block_of(self, p):
        if not self.contains(p):
            raise KeyError(f"{p!r} is not a point of the product")
        return self.left.block_of(p[0]) + self.right.block_of(p[1])


class _SubsetBlocks(BlockGenerator):
    name = "subset"

    def __init__(self, subset: Subset):
        self.subset = subset
        self.n_blocks = subset.n_blocks

    def block(self, k):
        return self.subset.block(k)

    def contains(self, x):
        return x in self.subset

    def block_of(self, x):
        if x not in self.subset:
            raise KeyError(f"{x!r} is not in the subset")
        return self.subset.space.block_of(x)


GENERATORS = {"naturals": Naturals, "dyadic": Dyadic}


class Space:
    """A countable discrete space with a designated basepoint.

    Blocks may be empty only for subspaces; their indices always agree with
    the ambient space so that properness witnesses transfer unchanged.
    """

    def __init__(self, generator: BlockGenerator, basepoint=None, name: str | None = None):
        self.generator = generator
        self.name = name or generator.name
        self._blocks: list[tuple] = []
        self._index: dict = {}
        self._lock = threading.Lock()
        if basepoint is None:
            basepoint = self._first_point()
        elif basepoint not in self:
            raise KeyError(f"basepoint {basepoint!r} is not a point of the space")
        self.basepoint = basepoint

    @classmethod
    def finite(cls, points: Iterable[Point], basepoint=None, name=None) -> Space:
        points = list(points)
        if not points:
            raise EmptySubset("a space needs at least one point")
        return cls(FiniteBlocks([points]), basepoint, name)

    @classmethod
    def from_blocks(cls, blocks, basepoint=None, name=None) -> Space:
        blocks = [list(b) for b in blocks]
        if not blocks or any(not b for b in blocks):
            raise ValueError("blocks must be finite and nonempty")
        return cls(FiniteBlocks(blocks), basepoint, name)

    @classmethod
    def naturals(cls, block_size: int = 1) -> Space:
        return cls(Naturals(block_size))

    @classmethod
    def dyadic(cls) -> Space:
        return cls(Dyadic())

    @classmethod
    def product(cls, left: Space, right: Space) -> Space:
        return cls(Product(left, right), (left.basepoint, right.basepoint))

    def _first_point(self):
        for k in self.block_range():
            b = self.block(k)
            if b:
                return b[0]
        raise EmptySubset("space has no points")

    @property
    def n_blocks(self) -> int | None:
        return self.generator.n_blocks

    @property
    def is_finite(self) -> bool:
        return self.generator.n_blocks is not None

    def block_range(self) -> Iterable[int]:
        return range(self.n_blocks) if self.is_finite else count()

    def _extend_to(self, k: int):
        with self._lock:
            while len(self._blocks) <= k:
                j = len(self._blocks)
                b = tuple(self.generator.block(j))
                base = len(self._index)
                for i, x in enumerate(b):
                    self._index[x] = base + i
                self._blocks.append(b)

    def block(self, k: int) -> tuple:
        if k < 0 or (self.is_finite and k >= self.n_blocks):
            return ()
        if k >= len(self._blocks):
            self._extend_to(k)
        return self._blocks[k]

    def block_of(self, x) -> int:
        return self.generator.block_of(x)

    def index(self, x) -> int:
        """Position of ``x`` in the enumeration (blocks in order)."""
        try:
            return self._index[x]
        except KeyError:
            self._extend_to(self.block_of(x))
            return self._index[x]

    def points(self, depth: int | None = None) -> list:
        """All points of the first ``depth`` blocks (all blocks when finite and depth is None)."""
        if depth is None:
            if not self.is_finite:
                raise ValueError("a lazy space needs an explicit depth")
            depth = self.n_blocks
        if self.is_finite:
            depth = min(depth, self.n_blocks)
        out = []
        for k in range(depth):
            out.extend(self.block(k))
        return out

    def iter_points(self) -> Iterator:
        for k in self.block_range():
            yield from self.block(k)

    def __contains__(self, x) -> bool:
        return self.generator.contains(x)

    def __len__(self):
        if not self.is_finite:
            raise TypeError("lazy spaces are infinite")
        return len(self.points())

    def permuted(self, order: Sequence[Point]) -> Space:
        """The same finite point set enumerated in ``order`` (one block)."""
        if not self.is_finite or sorted(map(repr, order)) != sorted(map(repr, self.points())):
            raise ValueError("order must list every point of a finite space once")
        return Space.finite(order, basepoint=order[0], name=self.name)

    def __repr__(self):
        if self.is_finite:
            return f"Space({self.points()!r}, basepoint={self.basepoint!r})"
        return f"Space(<{self.name} {self.generator.params()}>, basepoint={self.basepoint!r})"


class Subset:
    """A subset of a space: explicit finite members or a membership predicate.

    Predicate subsets of lazy spaces are declared infinite; the caller is
    responsible for that claim (``evens`` is infinite, ``n < 3`` is not and
    should be given as explicit members).
    """

    def __init__(self, space: Space, members: Iterable[Point] | None = None,
                 predicate: Callable[[Point], bool] | None = None, label: str = ""):
        if (members is None) == (predicate is None):
            raise ValueError("give exactly one of members or predicate")
        self.space = space
        self.label = label
        self._subspace = None
        if predicate is not None and space.is_finite:
            members = [x for x in space.iter_points() if predicate(x)]
            predicate = None
        if members is not None:
            ms = set()
            for x in members:
                if x not in space:
                    raise KeyError(f"{x!r} is not a point of the ambient space")
                ms.add(x)
            self._members = ms
            self._sorted = sorted(ms, key=space.index)
            self.predicate = None
        else:
            self._members = None
            self._sorted = None
            self.predicate = predicate

    @classmethod
    def everything(cls, space: Space) -> Subset:
        if space.is_finite:
            return cls(space, space.points(), label="all")
        return cls(space, predicate=lambda x: True, label="all")

    @property
    def is_finite(self) -> bool:
        return self._members is not None

    @property
    def is_empty(self) -> bool:
        return self.is_finite and not self._members

    @property
    def is_everything(self) -> bool:
        if self.label == "all":
            return True
        return self.space.is_finite and self.is_finite and len(self._members) == len(self.space)

    @property
    def n_blocks(self) -> int | None:
        if not self.is_finite:
            return None
        return 1 + max((self.space.block_of(x) for x in self._members), default=-1)

    @property
    def last_block(self) -> int:
        if not self.is_finite:
            raise ValueError("infinite subsets have no last block")
        return self.n_blocks - 1

    def __contains__(self, x) -> bool:
        if self._members is not None:
            try:
                return x in self._members
            except TypeError:
                return False
        return x in self.space and bool(self.predicate(x))

    def __len__(self):
        if not self.is_finite:
            raise TypeError("subset is infinite")
        return len(self._members)

    def block(self, k: int) -> tuple:
        if self.is_finite and k >= self.n_blocks:
            return ()
        return tuple(x for x in self.space.block(k) if x in self)

    def block_range(self):
        return range(self.n_blocks) if self.is_finite else count()

    def members(self, depth: int | None = None) -> list:
        if self.is_finite and depth is None:
            return list(self._sorted)
        if depth is None:
            raise ValueError("an infinite subset needs an explicit depth")
        return [x for k in range(depth) for x in self.block(k)]

    def iter_members(self) -> Iterator:
        for k in self.block_range():
            yield from self.block(k)

    def first(self):
        for x in self.iter_members():
            return x
        raise EmptySubset("subset is empty")

    def as_space(self) -> Space:
        """The subspace, with block indices inherited from the ambient space."""
        if self._subspace is None:
            if self.is_empty:
                raise EmptySubset("the empty subset is not a space")
            self._subspace = Space(_SubsetBlocks(self), name=f"{self.space.name}|{self.label or 'A'}")
        return self._subspace

    def __repr__(self):
        if self.is_finite:
            return f"Subset({self._sorted!r})"
        return f"Subset(<{self.label or 'predicate'}>)"


def subspace_of(space: Space) -> Subset | None:
    """The Subset a subspace was built from, or None for a top-level space."""
    gen = space.generator
    return gen.subset if isinstance(gen, _SubsetBlocks) else None
