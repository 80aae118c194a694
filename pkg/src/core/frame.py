""" Frames of discernment and subsets of them, stored as integer bitmasks """

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from src.errors import (
    DuplicateLabelError,
    EmptyFrameError,
    FrameError,
    FrameMismatchError,
    FrameSizeError,
)

# Subsets are packed into a single machine word
MAX_FRAME_SIZE = 30


def iter_indexes(mask: int) -> Iterator[int]:
    """Yields the indexes of the set bits of mask, lowest first."""
    index = 0
    while mask:
        if mask & 1:
            yield index
        mask >>= 1
        index += 1


def make_bitset(indexes: Iterable[int]) -> int:
    mask = 0
    for index in indexes:
        mask |= 1 << index
    return mask


class Frame:
    """
    An ordered set of mutually exclusive hypothesis labels.

    Frames compare by identity: two frames built from the same labels are still different
    frames, and evidence defined on one cannot be combined with evidence defined on the other.
    """

    __slots__ = ("_labels", "_index", "_full_mask")

    def __init__(self, labels: Sequence[str]):
        labels = tuple(labels)
        if len(labels) == 0:
            raise EmptyFrameError("A frame needs at least one label")
        if len(labels) > MAX_FRAME_SIZE:
            raise FrameSizeError(
                f"A frame holds at most {MAX_FRAME_SIZE} labels, got {len(labels)}"
            )

        index: Dict[str, int] = {}
        for position, label in enumerate(labels):
            if not isinstance(label, str):
                raise FrameError(f"Frame labels must be strings, got {label!r}")
            if label in index:
                raise DuplicateLabelError(f"Duplicate frame label {label!r}")
            index[label] = position

        self._labels: Tuple[str, ...] = labels
        self._index = index
        self._full_mask = (1 << len(labels)) - 1

    @property
    def labels(self) -> Tuple[str, ...]:
        return self._labels

    @property
    def size(self) -> int:
        return len(self._labels)

    @property
    def full_mask(self) -> int:
        return self._full_mask

    def __len__(self) -> int:
        return len(self._labels)

    def __repr__(self) -> str:
        return f"Frame({list(self._labels)})"

    def index(self, label: str) -> int:
        """Returns the position of label in the frame, raising a KeyError if it is unknown."""
        if label not in self._index:
            raise KeyError(f"Label {label!r} is not part of {self}")
        return self._index[label]

    def label(self, index: int) -> str:
        return self._labels[index]

    def subset(self, labels: Iterable[str]) -> "SubsetRef":
        return SubsetRef(self, make_bitset(self.index(label) for label in labels))

    def subset_of_indexes(self, indexes: Iterable[int]) -> "SubsetRef":
        mask = make_bitset(indexes)
        assert mask & ~self._full_mask == 0, "Subset index out of range for frame"
        return SubsetRef(self, mask)

    def singleton(self, index: int) -> "SubsetRef":
        assert 0 <= index < self.size, f"Index {index} out of range for {self}"
        return SubsetRef(self, 1 << index)

    def theta(self) -> "SubsetRef":
        return SubsetRef(self, self._full_mask)

    def empty(self) -> "SubsetRef":
        return SubsetRef(self, 0)

    def all_subsets(self) -> Iterator["SubsetRef"]:
        """Enumerates all 2^|frame| subsets, in increasing bitmask order."""
        for mask in range(self._full_mask + 1):
            yield SubsetRef(self, mask)


@dataclass(frozen=True)
class SubsetRef:
    """A subset of a frame, identified by its frame and the bitmask of its members."""

    frame: Frame
    mask: int

    def __post_init__(self):
        assert (
            self.mask >= 0 and self.mask & ~self.frame.full_mask == 0
        ), f"Mask {self.mask:b} does not fit {self.frame}"

    @property
    def members(self) -> List[int]:
        return list(iter_indexes(self.mask))

    @property
    def labels(self) -> List[str]:
        return [self.frame.label(index) for index in iter_indexes(self.mask)]

    def is_empty(self) -> bool:
        return self.mask == 0

    def is_theta(self) -> bool:
        return self.mask == self.frame.full_mask

    def complement(self) -> "SubsetRef":
        return SubsetRef(self.frame, self.frame.full_mask & ~self.mask)

    def _check(self, other: "SubsetRef") -> None:
        if other.frame is not self.frame:
            raise FrameMismatchError("Subsets belong to different frames")

    def __and__(self, other: "SubsetRef") -> "SubsetRef":
        self._check(other)
        return SubsetRef(self.frame, self.mask & other.mask)

    def __or__(self, other: "SubsetRef") -> "SubsetRef":
        self._check(other)
        return SubsetRef(self.frame, self.mask | other.mask)

    def issubset(self, other: "SubsetRef") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def __contains__(self, index: int) -> bool:
        return bool(self.mask >> index & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __repr__(self) -> str:
        if self.is_theta():
            return "Θ"
        return "{" + ",".join(self.labels) + "}"


def make_frame(labels: Sequence[str]) -> Frame:
    """
    Builds a frame of discernment.

    Args:
        * labels (Sequence[str]): Distinct hypothesis names; their order fixes the label indexes
    Returns:
        * Frame: the frame, with index(labels[i]) == i
    """
    return Frame(labels)
