"""Priority queue backends for monotone flooding.

Two backends realize the optimal bounds for the two data regimes: a binary
heap with a total order (floats, O(log n) per op) and a monotone bucket queue
(integers, O(1) per op). Both are *stable*: entries with equal priority pop in
insertion order, enforced by a serial counter. A plain FIFO queue rounds out
the set for the pit-queue fast path.

DecreaseKey is deliberately unsupported: flooding never lowers a key after
insertion, so none of the structures need it. Queues are single-owner
structures: safe to move between threads, never to share concurrently.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass
from typing import Optional

__all__ = [
    "QueueEntry",
    "TotalOrderHeap",
    "BucketQueue",
    "FifoQueue",
    "QueueEmptyError",
    "MonotonicityError",
    "BucketRangeError",
]

_SERIAL_LIMIT = 2**64


class QueueEmptyError(IndexError):
    """Raised when popping or peeking an empty queue."""


class MonotonicityError(ValueError):
    """Raised when a push would go below a bucket queue's pop cursor."""


class BucketRangeError(ValueError):
    """Raised when a priority is non-integral or outside the bucket range."""


@dataclass(frozen=True)
class QueueEntry:
    """A queued cell: (priority elevation, insertion serial, cell)."""

    priority: float
    serial: int
    cell: object

    def key(self) -> tuple[float, int]:
        return (self.priority, self.serial)


class TotalOrderHeap:
    """Binary min-heap ordered lexicographically by (priority, serial).

    Equal priorities pop in insertion order, so the pop sequence is a total
    order and runs are reproducible. Priorities may be any non-NaN float,
    including -inf (the logical key of NoData cells).
    """

    def __init__(self):
        self._heap: list[tuple[float, int, object]] = []
        self._next_serial = 0

    def __len__(self) -> int:
        return len(self._heap)

    def push(self, priority: float, cell) -> int:
        """Insert ``cell``; returns the serial assigned to the entry."""
        if math.isnan(priority):
            raise ValueError("priority may not be NaN")
        serial = self._next_serial
        assert serial < _SERIAL_LIMIT, "serial counter wrapped"
        self._next_serial = serial + 1
        heapq.heappush(self._heap, (float(priority), serial, cell))
        return serial

    def pop(self) -> QueueEntry:
        if not self._heap:
            raise QueueEmptyError("pop from empty heap")
        priority, serial, cell = heapq.heappop(self._heap)
        return QueueEntry(priority, serial, cell)

    def peek_min_priority(self) -> Optional[float]:
        if not self._heap:
            return None
        return self._heap[0][0]


class BucketQueue:
    """Monotone bucket (hierarchical) queue for integer priorities.

    Valid priorities are integers in [offset, offset + nbuckets). Each bucket
    is FIFO, which yields a total order for free. Pops advance a cursor that
    never moves backward; pushing below the cursor raises
    :class:`MonotonicityError`. Priority flooding satisfies this contract
    because popped priorities are non-decreasing and every push is at or
    above the current flood level.
    """

    def __init__(self, offset: int, nbuckets: int):
        if nbuckets < 1:
            raise ValueError(f"nbuckets must be >= 1, got {nbuckets}")
        self.offset = int(offset)
        self.nbuckets = int(nbuckets)
        self._buckets: list[deque] = [deque() for _ in range(self.nbuckets)]
        self._cursor = 0
        self._size = 0
        self._next_serial = 0

    def __len__(self) -> int:
        return self._size

    def _bucket_of(self, priority) -> int:
        p = float(priority)
        if not p.is_integer():
            raise BucketRangeError(f"priority {priority!r} is not integral")
        idx = int(p) - self.offset
        if not (0 <= idx < self.nbuckets):
            raise BucketRangeError(
                f"priority {priority!r} outside [{self.offset}, {self.offset + self.nbuckets})"
            )
        return idx

    def push(self, priority, cell) -> int:
        idx = self._bucket_of(priority)
        if idx < self._cursor:
            raise MonotonicityError(
                f"push priority {priority!r} below cursor {self._cursor + self.offset}"
            )
        serial = self._next_serial
        assert serial < _SERIAL_LIMIT, "serial counter wrapped"
        self._next_serial = serial + 1
        self._buckets[idx].append((serial, cell))
        self._size += 1
        return serial

    def _advance(self) -> None:
        while self._cursor < self.nbuckets and not self._buckets[self._cursor]:
            self._cursor += 1

    def pop(self) -> QueueEntry:
        if self._size == 0:
            raise QueueEmptyError("pop from empty bucket queue")
        self._advance()
        serial, cell = self._buckets[self._cursor].popleft()
        self._size -= 1
        return QueueEntry(float(self._cursor + self.offset), serial, cell)

    def peek_min_priority(self) -> Optional[float]:
        if self._size == 0:
            return None
        self._advance()
        return float(self._cursor + self.offset)


class FifoQueue:
    """Plain first-in first-out queue with amortized O(1) push and pop.

    Backed by :class:`collections.deque`, which provides the ring-buffer
    cost profile without per-element Python overhead.
    """

    def __init__(self):
        self._items = deque()

    def __len__(self) -> int:
        return len(self._items)

    def push(self, item) -> None:
        self._items.append(item)

    def pop(self):
        if not self._items:
            raise QueueEmptyError("pop from empty FIFO")
        return self._items.popleft()

    def peek(self):
        if not self._items:
            raise QueueEmptyError("peek into empty FIFO")
        return self._items[0]
