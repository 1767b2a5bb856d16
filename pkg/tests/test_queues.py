"""Queue backend contracts: total order, monotonicity, model equivalence."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floodfill.queues import (
    BucketQueue,
    BucketRangeError,
    FifoQueue,
    MonotonicityError,
    QueueEmptyError,
    TotalOrderHeap,
)
from helpers import SortedModel


class TestTotalOrderHeap:
    def test_equal_priorities_pop_in_insertion_order(self):
        h = TotalOrderHeap()
        h.push(5.0, "A")
        h.push(3.0, "B")
        h.push(5.0, "C")
        assert [h.pop().cell for _ in range(3)] == ["B", "A", "C"]

    def test_fifo_among_equals(self):
        h = TotalOrderHeap()
        for name in "ABC":
            h.push(1.0, name)
        assert [h.pop().cell for _ in range(3)] == ["A", "B", "C"]

    def test_serials_strictly_increase(self):
        h = TotalOrderHeap()
        serials = [h.push(0.0, i) for i in range(10)]
        assert serials == list(range(10))
        entry = h.pop()
        assert entry.serial == 0

    def test_nan_rejected(self):
        h = TotalOrderHeap()
        with pytest.raises(ValueError):
            h.push(float("nan"), None)

    def test_neg_inf_allowed_and_first(self):
        h = TotalOrderHeap()
        h.push(0.0, "data")
        h.push(float("-inf"), "nodata")
        assert h.pop().cell == "nodata"

    def test_empty_pop_and_peek(self):
        h = TotalOrderHeap()
        with pytest.raises(QueueEmptyError):
            h.pop()
        assert h.peek_min_priority() is None

    def test_peek_does_not_remove(self):
        h = TotalOrderHeap()
        h.push(2.0, "a")
        h.push(4.0, "b")
        assert h.peek_min_priority() == 2.0
        assert len(h) == 2
        h.pop()
        assert h.peek_min_priority() == 4.0


class TestBucketQueue:
    def test_monotonicity_violation(self):
        q = BucketQueue(offset=0, nbuckets=16)
        q.push(7, "x")
        assert q.pop().priority == 7.0  # cursor now at 7
        with pytest.raises(MonotonicityError):
            q.push(5, "y")

    def test_range_violations(self):
        q = BucketQueue(offset=10, nbuckets=4)
        with pytest.raises(BucketRangeError):
            q.push(9, None)
        with pytest.raises(BucketRangeError):
            q.push(14, None)
        with pytest.raises(BucketRangeError):
            q.push(10.5, None)

    def test_fifo_within_bucket(self):
        q = BucketQueue(offset=0, nbuckets=4)
        for name in "ABC":
            q.push(2, name)
        q.push(1, "Z")
        assert [q.pop().cell for _ in range(4)] == ["Z", "A", "B", "C"]

    def test_empty_pop_and_peek(self):
        q = BucketQueue(offset=0, nbuckets=2)
        with pytest.raises(QueueEmptyError):
            q.pop()
        assert q.peek_min_priority() is None
        q.push(1, "a")
        assert q.peek_min_priority() == 1.0

    def test_pop_sequence_matches_heap(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            heap = TotalOrderHeap()
            bucket = BucketQueue(offset=0, nbuckets=32)
            popped_h, popped_b = [], []
            floor = 0
            for _ in range(int(rng.integers(1, 60))):
                if rng.random() < 0.6 or not len(heap):
                    p = int(rng.integers(floor, 32))
                    heap.push(float(p), None)
                    bucket.push(p, None)
                else:
                    eh = heap.pop()
                    eb = bucket.pop()
                    floor = int(eh.priority)
                    popped_h.append(eh.key())
                    popped_b.append(eb.key())
            while len(heap):
                popped_h.append(heap.pop().key())
                popped_b.append(bucket.pop().key())
            assert popped_h == popped_b


class TestModelEquivalence:
    def test_heap_matches_sorted_model_1000_programs(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            heap = TotalOrderHeap()
            model = SortedModel()
            trace_h, trace_m = [], []
            for _ in range(int(rng.integers(1, 30))):
                if rng.random() < 0.65 or not len(heap):
                    # few distinct priorities to force heavy tie traffic
                    p = float(rng.integers(0, 6)) if rng.random() < 0.8 else rng.uniform(0, 5)
                    heap.push(p, None)
                    model.push(p)
                else:
                    trace_h.append(heap.pop().key())
                    trace_m.append(model.pop()[:2])
                assert heap.peek_min_priority() == model.peek_min_priority()
            while len(heap):
                trace_h.append(heap.pop().key())
                trace_m.append(model.pop()[:2])
            assert trace_h == trace_m

    def test_interleaved_10k_ops(self):
        rng = np.random.default_rng(12)
        heap = TotalOrderHeap()
        model = SortedModel()
        for _ in range(10_000):
            if rng.random() < 0.55 or not len(heap):
                p = float(rng.integers(0, 40))
                heap.push(p, None)
                model.push(p)
            else:
                assert heap.pop().key() == model.pop()[:2]
        while len(heap):
            assert heap.pop().key() == model.pop()[:2]

    @settings(max_examples=300, deadline=None)
    @given(st.lists(st.one_of(
        st.floats(allow_nan=False, allow_infinity=True, width=64),
        st.just("pop"),
    ), max_size=40))
    def test_heap_model_property(self, program):
        heap = TotalOrderHeap()
        model = SortedModel()
        for step in program:
            if step == "pop":
                if len(heap):
                    assert heap.pop().key() == model.pop()[:2]
                else:
                    with pytest.raises(QueueEmptyError):
                        heap.pop()
            else:
                heap.push(step, None)
                model.push(step)
        while len(heap):
            assert heap.pop().key() == model.pop()[:2]


class TestFifoQueue:
    def test_order(self):
        q = FifoQueue()
        for i in range(5):
            q.push(i)
        assert [q.pop() for _ in range(5)] == list(range(5))

    def test_peek_and_empty(self):
        q = FifoQueue()
        with pytest.raises(QueueEmptyError):
            q.pop()
        with pytest.raises(QueueEmptyError):
            q.peek()
        q.push("x")
        assert q.peek() == "x"
        assert len(q) == 1
