"""Actor identifiers: 64-bit ids whose top 4 bits carry the entity kind.

The remaining 60 bits hold the index of the entity in its object pool, so
kind tests and pool lookups are single mask operations. Tag values are laid
out so that the broad classifications used in the hot path reduce to one
mask-and-compare each:

* care units (ER, DID) have bit 3 of the tag set,
* school-like places (daycare, school, college) share the ``01xx`` prefix.

Id 0 is never valid (tag 0 is reserved), which makes 0 usable as a "no
actor" sentinel in packed arrays.
"""

from __future__ import annotations

from enum import IntEnum

__all__ = [
    "Kind",
    "KIND_SHIFT",
    "INDEX_MASK",
    "MAX_POOL_INDEX",
    "encode_actor_id",
    "decode_actor_id",
    "kind_of",
    "index_of",
    "is_person",
    "is_house",
    "is_care_unit",
    "is_school",
    "is_workplace_like",
]

KIND_SHIFT = 60
INDEX_MASK = (1 << KIND_SHIFT) - 1
MAX_POOL_INDEX = INDEX_MASK

_CARE_BIT = 0b1000
_SCHOOL_PREFIX_MASK = 0b1100
_SCHOOL_PREFIX = 0b0100


class Kind(IntEnum):
    PERSON = 0b0001
    HOME = 0b0010
    WORKPLACE = 0b0011
    DAYCARE = 0b0100
    SCHOOL = 0b0101
    COLLEGE = 0b0110
    ER = 0b1000
    DID = 0b1001


_VALID_TAGS = {int(k) for k in Kind}

# wp_type codes used in the workplace file (1=daycare, 2=school 6-16,
# 3=college 16-19, 4=other school, 5=workplace).
WP_TYPE_TO_KIND = {
    1: Kind.DAYCARE,
    2: Kind.SCHOOL,
    3: Kind.COLLEGE,
    4: Kind.SCHOOL,
    5: Kind.WORKPLACE,
}

KIND_NAMES = {k: k.name.lower() for k in Kind}


def encode_actor_id(kind: Kind | int, pool_index: int) -> int:
    """Pack an entity kind and pool index into one 64-bit id."""
    if not 0 <= pool_index <= MAX_POOL_INDEX:
        raise ValueError(f"pool index {pool_index} does not fit in 60 bits")
    tag = int(kind)
    if tag not in _VALID_TAGS:
        raise ValueError(f"unknown kind tag {tag}")
    return (tag << KIND_SHIFT) | pool_index


def decode_actor_id(actor_id: int) -> tuple[Kind, int]:
    """Split an actor id into (kind, pool index); rejects unknown tags."""
    tag = (actor_id >> KIND_SHIFT) & 0xF
    if tag not in _VALID_TAGS:
        raise ValueError(f"actor id {actor_id:#x} has unknown kind tag {tag}")
    return Kind(tag), actor_id & INDEX_MASK


def kind_of(actor_id: int) -> Kind:
    return Kind((actor_id >> KIND_SHIFT) & 0xF)


def index_of(actor_id: int) -> int:
    return actor_id & INDEX_MASK


def is_person(actor_id: int) -> bool:
    return (actor_id >> KIND_SHIFT) == Kind.PERSON


def is_house(actor_id: int) -> bool:
    tag = actor_id >> KIND_SHIFT
    return tag in _VALID_TAGS and tag != Kind.PERSON


def is_care_unit(actor_id: int) -> bool:
    """True for ER and infectious-disease-department houses."""
    return bool((actor_id >> KIND_SHIFT) & _CARE_BIT)


def is_school(actor_id: int) -> bool:
    """True for daycare, school and college houses."""
    return ((actor_id >> KIND_SHIFT) & _SCHOOL_PREFIX_MASK) == _SCHOOL_PREFIX


def is_workplace_like(actor_id: int) -> bool:
    return (actor_id >> KIND_SHIFT) == Kind.WORKPLACE
