"""Per-interval store for active clock values and their state sets.

One InnerStructure owns every configuration whose clock value currently lies
in a fixed interval of the guard partition.  It never touches values one by
one on a time shift: a single elapsed-time offset is kept for the whole
store, each stored node remembers only the timestamp at which its value was
zero, and the value of a node is recovered as ``elapsed - timestamp``.

Distinct values live in a doubly linked list ordered by increasing value.
The state set attached to each value is not stored on the list node.  Nodes
are leaves of a ranked forest whose roots carry the state sets, so a letter
update that maps two different state sets to the same successor set can fuse
whole groups of values by linking one root under another, in constant time,
instead of relabelling every node.  Ranks bound how deep those fused chains
can get, which keeps the leaf-to-root walk constant for a fixed automaton.

State sets are bitmasks over the automaton's state indices.  Every mutating
method charges its structural work to a shared OpCounters, which is how the
benchmark harness certifies the amortised cost claims.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Optional, Sequence

from .automata import Rat
from .intervals import Interval


@dataclass
class OpCounters:
    """Structural operation tallies shared by all stores of one monitor."""

    node_inserts: int = 0
    node_removals: int = 0
    forest_links: int = 0
    root_merges: int = 0
    parent_hops: int = 0
    evictions: int = 0
    migrations: int = 0

    def total(self) -> int:
        return (self.node_inserts + self.node_removals + self.forest_links
                + self.root_merges + self.parent_hops + self.evictions
                + self.migrations)

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def snapshot(self) -> tuple[int, ...]:
        return tuple(getattr(self, f.name) for f in fields(self))


class ValueNode:
    """List node for one active clock value; also a leaf of the forest."""

    __slots__ = ("prev", "next", "timestamp", "parent")

    def __init__(self, timestamp: Rat) -> None:
        self.prev: Optional[ValueNode] = None
        self.next: Optional[ValueNode] = None
        self.timestamp = timestamp
        self.parent: Optional[ForestNode] = None


class ForestNode:
    """Forest root or interior node.

    While on the root list the node carries a state-set bitmask and a rank
    and its parent is None.  After being fused under another root it keeps
    only the parent link and its child count; states and rank are cleared.
    """

    __slots__ = ("parent", "child_count", "states", "rank", "prev", "next")

    def __init__(self, states: int, rank: int) -> None:
        self.parent: Optional[ForestNode] = None
        self.child_count = 0
        self.states: Optional[int] = states
        self.rank: Optional[int] = rank
        self.prev: Optional[ForestNode] = None
        self.next: Optional[ForestNode] = None


class InnerStructure:
    """Configurations whose clock value lies in one partition interval.

    ``rank_limit`` must be 2**n for n automaton states: state sets on roots
    are non-empty and pairwise distinct, so there are at most rank_limit - 1
    roots and a free rank in 1..rank_limit always exists.
    """

    __slots__ = ("interval", "rank_limit", "counters", "elapsed",
                 "head", "tail", "roots_head", "roots_tail")

    def __init__(self, interval: Interval, rank_limit: int,
                 counters: Optional[OpCounters] = None) -> None:
        self.interval = interval
        self.rank_limit = rank_limit
        self.counters = counters if counters is not None else OpCounters()
        self.elapsed = Fraction(0)
        self.head: Optional[ValueNode] = None
        self.tail: Optional[ValueNode] = None
        self.roots_head: Optional[ForestNode] = None
        self.roots_tail: Optional[ForestNode] = None

    # ----- queries ---------------------------------------------------

    def accepted(self, final_mask: int) -> bool:
        """Does some stored configuration sit in a final state?

        One pass over the root list; the list is never longer than
        rank_limit - 1 regardless of how many values are stored.
        """
        root = self.roots_head
        while root is not None:
            if root.states & final_mask:
                return True
            root = root.next
        return False

    def is_empty(self) -> bool:
        return self.head is None

    def min_value(self) -> Rat:
        if self.head is None:
            raise ValueError("empty structure has no minimum")
        return self.elapsed - self.head.timestamp

    def items(self) -> list[tuple[Rat, int]]:
        """(value, state mask) pairs in increasing value order.

        Test and extraction helper; walks the whole structure and charges no
        counters.
        """
        out: list[tuple[Rat, int]] = []
        node = self.head
        while node is not None:
            anc = node.parent
            while anc.parent is not None:
                anc = anc.parent
            out.append((self.elapsed - node.timestamp, anc.states))
            node = node.next
        return out

    # ----- root list plumbing ----------------------------------------

    def _root_of(self, node: ValueNode) -> ForestNode:
        anc = node.parent
        hops = 1
        while anc.parent is not None:
            anc = anc.parent
            hops += 1
        self.counters.parent_hops += hops
        return anc

    def _push_root(self, root: ForestNode) -> None:
        root.prev = None
        root.next = self.roots_head
        if self.roots_head is not None:
            self.roots_head.prev = root
        self.roots_head = root
        if self.roots_tail is None:
            self.roots_tail = root

    def _unlink_root(self, root: ForestNode) -> None:
        if root.prev is not None:
            root.prev.next = root.next
        else:
            self.roots_head = root.next
        if root.next is not None:
            root.next.prev = root.prev
        else:
            self.roots_tail = root.prev
        root.prev = None
        root.next = None

    def _smallest_free_rank(self) -> int:
        used = set()
        root = self.roots_head
        while root is not None:
            used.add(root.rank)
            root = root.next
        for rank in range(1, self.rank_limit + 1):
            if rank not in used:
                return rank
        raise AssertionError("no free rank: more roots than distinct state sets")

    def _find_root(self, mask: int) -> Optional[ForestNode]:
        root = self.roots_head
        while root is not None:
            if root.states == mask:
                return root
            root = root.next
        return None

    def _attach_front(self, timestamp: Rat, mask: int) -> None:
        """New front list node holding ``mask``, hooked under the matching root."""
        node = ValueNode(timestamp)
        self.counters.node_inserts += 1
        node.next = self.head
        if self.head is not None:
            self.head.prev = node
        self.head = node
        if self.tail is None:
            self.tail = node
        root = self._find_root(mask)
        if root is None:
            root = ForestNode(mask, self._smallest_free_rank())
            self.counters.node_inserts += 1
            self._push_root(root)
        node.parent = root
        root.child_count += 1
        self.counters.forest_links += 1

    # ----- mutations --------------------------------------------------

    def insert(self, state: int, value: Rat) -> None:
        """Add configuration (state, value).

        The caller promises that ``value`` lies in this store's interval and
        is not larger than any value already stored; the monitor discharges
        that promise by re-inserting evictions in decreasing value order.
        Checked by assert, trusted under python -O.
        """
        assert self.interval.contains(value), \
            f"insert of {value} outside {self.interval}"
        bit = 1 << state
        if self.head is None:
            self._attach_front(self.elapsed - value, bit)
            return
        front_value = self.elapsed - self.head.timestamp
        assert value <= front_value, \
            f"insert of {value} above current minimum {front_value}"
        if value < front_value:
            self._attach_front(self.elapsed - value, bit)
            return
        root = self._root_of(self.head)
        mask = root.states
        if mask & bit:
            return
        timestamp = self.head.timestamp
        self.cascade_remove(self.head)
        self._attach_front(timestamp, mask | bit)

    def cascade_remove(self, node: ValueNode) -> None:
        """Unlink a value node and prune ancestors left without children."""
        if node.prev is not None:
            node.prev.next = node.next
        else:
            self.head = node.next
        if node.next is not None:
            node.next.prev = node.prev
        else:
            self.tail = node.prev
        self.counters.node_removals += 1
        anc = node.parent
        node.parent = None
        while anc is not None:
            self.counters.parent_hops += 1
            anc.child_count -= 1
            if anc.child_count > 0:
                break
            up = anc.parent
            if up is None:
                self._unlink_root(anc)
            self.counters.node_removals += 1
            anc.parent = None
            anc = up

    def update_time(self, span: Rat) -> list[tuple[int, Rat]]:
        """Advance the store's clock by ``span`` and evict what left the interval.

        Returns the evicted configurations sorted by non-decreasing value.
        Values only grow, so everything that leaves the interval leaves
        through the top and sits in a suffix of the list; the walk from the
        back touches one node beyond the evicted ones.  Cost is linear in the
        number of evicted configurations, zero when nothing is evicted.
        """
        if span <= 0:
            raise ValueError(f"time span must be positive, got {span}")
        self.elapsed += span
        contains = self.interval.contains
        evicted: list[tuple[int, Rat]] = []
        node = self.tail
        while node is not None:
            value = self.elapsed - node.timestamp
            if contains(value):
                break
            mask = self._root_of(node).states
            remaining = mask
            while remaining:
                low = remaining & -remaining
                evicted.append((low.bit_length() - 1, value))
                remaining ^= low
            prev = node.prev
            self.cascade_remove(node)
            node = prev
        evicted.reverse()
        self.counters.evictions += len(evicted)
        return evicted

    def update_letter(self, keep_table: Sequence[int], reset_table: Sequence[int]) -> int:
        """Apply one letter via precomputed successor tables for this interval.

        ``keep_table[mask]`` is the union of targets of enabled non-resetting
        transitions out of ``mask``; ``reset_table[mask]`` the same for
        resetting transitions.  Every root's state set is replaced through
        keep_table, then roots that ended up with equal sets are fused under
        the one of largest rank, which keeps chain depth below the rank.
        Returns the bitmask of states entered with a fresh zero clock; the
        caller inserts those into the store of the interval containing 0.

        Cost is proportional to the number of roots, independent of the
        number of stored values.
        """
        union = 0
        root = self.roots_head
        while root is not None:
            union |= root.states
            root = root.next
        reset_mask = reset_table[union]

        snapshot: list[ForestNode] = []
        root = self.roots_head
        while root is not None:
            snapshot.append(root)
            root = root.next
        for root in snapshot:
            new_states = keep_table[root.states]
            assert new_states, "letter update emptied a state set; automaton not completed"
            root.states = new_states

        for beta in snapshot:
            if beta.parent is not None:
                continue
            best = beta
            other = self.roots_head
            while other is not None:
                if other.states == beta.states and other.rank > best.rank:
                    best = other
                other = other.next
            if best is not beta:
                self._unlink_root(beta)
                beta.parent = best
                best.child_count += 1
                beta.states = None
                beta.rank = None
                self.counters.root_merges += 1
        return reset_mask

    # ----- diagnostics -------------------------------------------------

    def check_invariants(self) -> list[str]:
        """Full structural audit; returns violation descriptions, empty if sound.

        Covers interval membership (I2), list ordering (I3), forest shape and
        child counts (I4), root distinctness and rank domain (I5), and the
        depth-vs-rank bound (I6).  Walks everything; meant for tests, not for
        the monitoring path.
        """
        problems: list[str] = []

        leaves: list[ValueNode] = []
        seen_nodes: set[int] = set()
        node = self.head
        prev = None
        while node is not None:
            if id(node) in seen_nodes:
                problems.append("LINK: value list contains a cycle")
                return problems
            seen_nodes.add(id(node))
            if node.prev is not prev:
                problems.append("LINK: broken prev pointer in value list")
            leaves.append(node)
            prev = node
            node = node.next
        if self.tail is not prev:
            problems.append("LINK: tail does not reach the last list node")

        for leaf in leaves:
            value = self.elapsed - leaf.timestamp
            if not self.interval.contains(value):
                problems.append(f"I2: value {value} outside interval {self.interval}")
        for a, b in zip(leaves, leaves[1:]):
            if not a.timestamp > b.timestamp:
                problems.append("I3: timestamps not strictly decreasing along the list")

        roots: list[ForestNode] = []
        seen_roots: set[int] = set()
        root = self.roots_head
        prev_root = None
        while root is not None:
            if id(root) in seen_roots:
                problems.append("LINK: root list contains a cycle")
                return problems
            seen_roots.add(id(root))
            if root.prev is not prev_root:
                problems.append("LINK: broken prev pointer in root list")
            roots.append(root)
            prev_root = root
            root = root.next
        if self.roots_tail is not prev_root:
            problems.append("LINK: roots_tail does not reach the last root")

        masks: list[int] = []
        ranks: list[int] = []
        for root in roots:
            if root.parent is not None:
                problems.append("I4: listed root has a parent")
            if not root.states:
                problems.append("I5: root with empty state set")
            else:
                masks.append(root.states)
            if root.rank is None or not 1 <= root.rank <= self.rank_limit:
                problems.append(f"I5: root rank {root.rank} outside 1..{self.rank_limit}")
            else:
                ranks.append(root.rank)
            if root.child_count <= 0:
                problems.append("I4: root with no children")
        if len(set(masks)) != len(masks):
            problems.append("I5: duplicate state sets among roots")
        if len(set(ranks)) != len(ranks):
            problems.append("I5: duplicate ranks among roots")

        # Discover the forest by walking up from every leaf, then rebuild
        # child counts exactly from the parent pointers found.
        by_id: dict[int, ForestNode] = {}
        depth_by_root: dict[int, int] = {}
        step_cap = self.rank_limit + len(leaves) + len(roots) + 2
        for leaf in leaves:
            if leaf.parent is None:
                problems.append("I4: list node without a forest parent")
                continue
            anc = leaf.parent
            edges = 1
            while True:
                by_id[id(anc)] = anc
                if anc.parent is None:
                    break
                anc = anc.parent
                edges += 1
                if edges > step_cap:
                    problems.append("LINK: parent chain does not terminate")
                    return problems
            if id(anc) not in seen_roots:
                problems.append("I4: leaf's chain ends outside the root list")
            depth_by_root[id(anc)] = max(depth_by_root.get(id(anc), 0), edges - 1)

        computed: dict[int, int] = {}
        all_forest: dict[int, ForestNode] = dict(by_id)
        for leaf in leaves:
            if leaf.parent is not None:
                computed[id(leaf.parent)] = computed.get(id(leaf.parent), 0) + 1
        for fnode in all_forest.values():
            if fnode.parent is not None:
                computed[id(fnode.parent)] = computed.get(id(fnode.parent), 0) + 1
        for fnode in all_forest.values():
            want = computed.get(id(fnode), 0)
            if fnode.child_count != want:
                problems.append(
                    f"I4: stored child count {fnode.child_count} != actual {want}")
        for root in roots:
            if id(root) not in all_forest:
                problems.append("I4: root unreachable from any list node")
        for root in roots:
            depth = depth_by_root.get(id(root))
            if depth is not None and root.rank is not None and depth > root.rank:
                problems.append(f"I6: tree depth {depth} exceeds rank {root.rank}")

        return problems

    def assert_invariants(self) -> None:
        problems = self.check_invariants()
        if problems:
            raise AssertionError("; ".join(problems))
