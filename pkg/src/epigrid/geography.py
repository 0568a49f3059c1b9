"""Grid geography: combined coordinates, dense square indexing, care units.

Coordinates are meters on a national grid. Occupied 100-meter squares are
identified by the combined 14-digit number (eastern coordinate in the first
seven digits, northern in the last seven) marking the square's lower-left
corner, and renamed to a dense xy-index so location fits in 20 bits for up
to 2^20 occupied squares.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .ids import Kind, decode_actor_id, encode_actor_id

__all__ = [
    "combine_coords",
    "split_coords",
    "compress_coord",
    "decompress_coord",
    "GridTable",
    "build_grid_index",
    "CareUnit",
    "CareUnitMap",
    "nearest_care_unit",
    "precompute_care_map",
    "write_care_map",
    "read_care_map",
]

_COORD_LO = 1_000_000  # smallest 7-digit number
_COORD_HI = 9_999_999
_SPLIT = 10_000_000

CARE_MAP_MAGIC = b"EPGCMAP1"


class GeographyError(ValueError):
    pass


def _check_coord(value: int, label: str) -> None:
    if not _COORD_LO <= value <= _COORD_HI:
        raise GeographyError(f"{label} coordinate {value} is not a 7-digit number")
    if value % 100:
        raise GeographyError(f"{label} coordinate {value} is not a multiple of 100 m")


def combine_coords(east: int, north: int) -> int:
    """Pack 7-digit east/north meter coordinates into one 14-digit number."""
    _check_coord(east, "east")
    _check_coord(north, "north")
    return east * _SPLIT + north


def split_coords(combined: int) -> tuple[int, int]:
    """Inverse of `combine_coords`: first seven digits east, last seven north."""
    if not 10**13 <= combined < 10**14:
        raise GeographyError(f"combined coordinate {combined} is not 14 digits")
    return combined // _SPLIT, combined % _SPLIT


def compress_coord(east: int, north: int, origin: tuple[int, int]) -> int:
    """Pack a coordinate pair into 32 bits of 100-m cell offsets from an
    origin: east cells in the high 16 bits, north cells in the low 16."""
    east0, north0 = origin
    de = east - east0
    dn = north - north0
    if de < 0 or dn < 0:
        raise GeographyError(f"coordinate ({east}, {north}) lies before origin {origin}")
    if de % 100 or dn % 100:
        raise GeographyError(f"offset ({de}, {dn}) is not a multiple of 100 m")
    ce, cn = de // 100, dn // 100
    if ce >= 1 << 16 or cn >= 1 << 16:
        raise GeographyError(f"cell offset ({ce}, {cn}) overflows 16 bits")
    return (ce << 16) | cn


def decompress_coord(packed: int, origin: tuple[int, int]) -> tuple[int, int]:
    east0, north0 = origin
    return east0 + (packed >> 16) * 100, north0 + (packed & 0xFFFF) * 100


class GridTable:
    """Bidirectional map between dense xy-indexes and (east, north) meters.

    Indexes are assigned 0..n-1 in the order records are given; both lookup
    directions are O(1) expected.
    """

    def __init__(self, east: np.ndarray, north: np.ndarray):
        self.east = np.ascontiguousarray(east, dtype=np.uint32)
        self.north = np.ascontiguousarray(north, dtype=np.uint32)
        if self.east.shape != self.north.shape:
            raise GeographyError("east/north arrays differ in length")
        self._by_coord: dict[tuple[int, int], int] = {}
        for i, (e, n) in enumerate(zip(self.east.tolist(), self.north.tolist())):
            key = (e, n)
            if key in self._by_coord:
                raise GeographyError(f"duplicate coordinate {key}")
            self._by_coord[key] = i

    def __len__(self) -> int:
        return len(self.east)

    def index_of(self, east: int, north: int) -> int:
        try:
            return self._by_coord[(east, north)]
        except KeyError:
            raise GeographyError(f"({east}, {north}) is not an occupied square") from None

    def coords_of(self, xy_index: int) -> tuple[int, int]:
        if not 0 <= xy_index < len(self.east):
            raise GeographyError(f"xy-index {xy_index} out of range")
        return int(self.east[xy_index]), int(self.north[xy_index])

    def max_index(self) -> int:
        return len(self.east) - 1


def build_grid_index(xyrecords) -> GridTable:
    """Build the dense-square table from xyfile records (objects or tuples
    with xy_index/east/north); records must arrive sorted by xy_index."""
    n = len(xyrecords)
    east = np.empty(n, dtype=np.uint32)
    north = np.empty(n, dtype=np.uint32)
    for rec in xyrecords:
        idx, e, no = rec.xy_index, rec.east, rec.north
        if not 0 <= idx < n:
            raise GeographyError(f"xy-index {idx} not dense in 0..{n - 1}")
        east[idx] = e
        north[idx] = no
    return GridTable(east, north)


@dataclass(frozen=True)
class CareUnit:
    """A care house (ER or infectious-disease department) on the grid."""

    house_id: int  # actor id; kind must be ER or DID
    east: int
    north: int
    capacity: int = 0  # 0 = unlimited


def nearest_care_unit(square: tuple[int, int], units: Sequence) -> int:
    """House id of the unit closest (Euclidean, square corners) to a square;
    distance ties break toward the lowest house id."""
    if not units:
        raise GeographyError("no care units to choose from")
    e, n = square
    best = min(units, key=lambda u: ((u.east - e) ** 2 + (u.north - n) ** 2, u.house_id))
    return best.house_id


@dataclass
class CareUnitMap:
    """Per-square assignment of the nearest ER and DID houses."""

    er_units: list[CareUnit]
    did_units: list[CareUnit]
    er_of_square: np.ndarray = field(repr=False)  # uint64 actor ids, by xy-index
    did_of_square: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.er_of_square)

    def lookup(self, xy_index: int) -> tuple[int, int]:
        return int(self.er_of_square[xy_index]), int(self.did_of_square[xy_index])


def _nearest_all(grid: GridTable, units: Sequence[CareUnit]) -> np.ndarray:
    """Vectorized nearest-unit id per occupied square (ties: lowest id)."""
    order = sorted(units, key=lambda u: u.house_id)
    ue = np.array([u.east for u in order], dtype=np.float64)
    un = np.array([u.north for u in order], dtype=np.float64)
    ids = np.array([u.house_id for u in order], dtype=np.uint64)
    out = np.empty(len(grid), dtype=np.uint64)
    e = grid.east.astype(np.float64)
    n = grid.north.astype(np.float64)
    # chunked to bound the distance-matrix size; argmin takes the first
    # minimum, and units are id-sorted, so ties resolve to the lowest id
    step = 65536
    for lo in range(0, len(grid), step):
        hi = min(lo + step, len(grid))
        d2 = (e[lo:hi, None] - ue[None, :]) ** 2 + (n[lo:hi, None] - un[None, :]) ** 2
        out[lo:hi] = ids[np.argmin(d2, axis=1)]
    return out


def precompute_care_map(
    grid: GridTable,
    er_units: Iterable[CareUnit],
    did_units: Iterable[CareUnit],
) -> CareUnitMap:
    """Assign every occupied square its nearest ER and DID."""
    er_units = list(er_units)
    did_units = list(did_units)
    if not er_units or not did_units:
        raise GeographyError("care map needs at least one ER and one DID unit")
    for u in er_units:
        if decode_actor_id(u.house_id)[0] != Kind.ER:
            raise GeographyError(f"unit {u.house_id:#x} is not an ER id")
    for u in did_units:
        if decode_actor_id(u.house_id)[0] != Kind.DID:
            raise GeographyError(f"unit {u.house_id:#x} is not a DID id")
    return CareUnitMap(
        er_units=er_units,
        did_units=did_units,
        er_of_square=_nearest_all(grid, er_units),
        did_of_square=_nearest_all(grid, did_units),
    )


_UNIT_STRUCT = struct.Struct("<IIIQ")  # east, north, capacity, house_id
_ROW_DTYPE = np.dtype([("xy", "<u4"), ("er", "<u8"), ("did", "<u8")])


def write_care_map(path, care_map: CareUnitMap) -> None:
    """Binary care-map file: unit tables followed by one row per square."""
    n = len(care_map)
    with open(path, "wb") as fh:
        fh.write(CARE_MAP_MAGIC)
        fh.write(struct.pack("<IIQ", len(care_map.er_units), len(care_map.did_units), n))
        for unit in care_map.er_units + care_map.did_units:
            fh.write(_UNIT_STRUCT.pack(unit.east, unit.north, unit.capacity, unit.house_id))
        rows = np.empty(n, dtype=_ROW_DTYPE)
        rows["xy"] = np.arange(n, dtype=np.uint32)
        rows["er"] = care_map.er_of_square
        rows["did"] = care_map.did_of_square
        fh.write(rows.tobytes())


def read_care_map(path) -> CareUnitMap:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != CARE_MAP_MAGIC:
            raise GeographyError(f"bad care-map magic {magic!r}")
        n_er, n_did, n_rows = struct.unpack("<IIQ", fh.read(16))

        def read_units(count: int, kind: Kind) -> list[CareUnit]:
            units = []
            for _ in range(count):
                east, north, capacity, house_id = _UNIT_STRUCT.unpack(fh.read(_UNIT_STRUCT.size))
                if decode_actor_id(house_id)[0] != kind:
                    raise GeographyError(f"care-map unit id {house_id:#x} has wrong kind")
                units.append(CareUnit(house_id, east, north, capacity))
            return units

        er_units = read_units(n_er, Kind.ER)
        did_units = read_units(n_did, Kind.DID)
        payload = fh.read()
    expected = n_rows * _ROW_DTYPE.itemsize
    if len(payload) != expected:
        raise GeographyError(
            f"care-map truncated: expected {expected} row bytes, found {len(payload)}"
        )
    rows = np.frombuffer(payload, dtype=_ROW_DTYPE)
    if not np.array_equal(rows["xy"], np.arange(n_rows, dtype=np.uint32)):
        raise GeographyError("care-map rows are not dense in xy-index order")
    return CareUnitMap(
        er_units=er_units,
        did_units=did_units,
        er_of_square=rows["er"].copy(),
        did_of_square=rows["did"].copy(),
    )


def make_care_unit_id(kind: Kind, position: int) -> int:
    """Care units are numbered by their position in the unit table."""
    if kind not in (Kind.ER, Kind.DID):
        raise GeographyError(f"{kind} is not a care-unit kind")
    return encode_actor_id(kind, position)
