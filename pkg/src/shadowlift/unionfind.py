"""Union-find over sign variables with parity labels and undo."""

from __future__ import annotations


class ParityUnionFind:
    """Disjoint sets where each member carries a parity relative to its root.

    ``union(x, y, p)`` asserts ``parity(x) xor parity(y) == p``: ``p = 0``
    means equal signs, ``p = 1`` opposite signs.  No path compression, so any
    sequence of unions can be rolled back to a :meth:`mark`.
    """

    def __init__(self):
        self.parent: dict = {}
        self.parity: dict = {}
        self.rank: dict = {}
        self._log: list = []

    def add(self, x) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.parity[x] = 0
            self.rank[x] = 0
            self._log.append(("add", x))

    def find(self, x):
        """Return (root, parity of x relative to root)."""
        self.add(x)
        p = 0
        while self.parent[x] != x:
            p ^= self.parity[x]
            x = self.parent[x]
        return x, p

    def relation(self, x, y):
        """Known parity between x and y, or None if unrelated."""
        rx, px = self.find(x)
        ry, py = self.find(y)
        if rx != ry:
            return None
        return px ^ py

    def union(self, x, y, p: int) -> bool:
        """Merge with parity ``p``; False (and no change) on contradiction."""
        rx, px = self.find(x)
        ry, py = self.find(y)
        if rx == ry:
            return (px ^ py) == p
        if self.rank[rx] < self.rank[ry]:
            rx, ry, px, py = ry, rx, py, px
        self.parent[ry] = rx
        self.parity[ry] = px ^ py ^ p
        bumped = self.rank[rx] == self.rank[ry]
        if bumped:
            self.rank[rx] += 1
        self._log.append(("link", ry, rx, bumped))
        return True

    def mark(self) -> int:
        return len(self._log)

    def rollback(self, mark: int) -> None:
        while len(self._log) > mark:
            entry = self._log.pop()
            if entry[0] == "add":
                x = entry[1]
                del self.parent[x], self.parity[x], self.rank[x]
            else:
                _, child, root, bumped = entry
                self.parent[child] = child
                self.parity[child] = 0
                if bumped:
                    self.rank[root] -= 1
