"""Immutable variable assignments used as model states and lasso letters."""

from __future__ import annotations

from collections.abc import Iterator, Mapping


class State(Mapping):
    """A hashable, ordered assignment ``variable -> value``.

    Iteration follows construction order (models build states in declaration
    order), equality and hashing ignore order.
    """

    __slots__ = ("_items", "_map", "_hash")

    def __init__(self, assignment: Mapping[str, str] | None = None, **kwargs: str):
        data = dict(assignment or {})
        data.update(kwargs)
        self._items = tuple(data.items())
        self._map = data
        self._hash = hash(frozenset(self._items))

    @classmethod
    def of(cls, value: Mapping[str, str]) -> "State":
        return value if isinstance(value, State) else cls(value)

    def __getitem__(self, key: str) -> str:
        return self._map[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._items)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, State):
            return self._hash == other._hash and self._map == other._map
        if isinstance(other, Mapping):
            return self._map == dict(other)
        return NotImplemented

    def replace(self, **updates: str) -> "State":
        data = dict(self._map)
        data.update(updates)
        return State(data)

    def to_dict(self) -> dict[str, str]:
        return dict(self._items)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self._items)
        return f"State({inner})"
