"""
Order-Type Catalog

Builds and persists the set of realizable order types for small point
counts. Realizability is certified only by exhibiting integer witnesses:
grid enumeration (exhaustive or seeded sampling), extension of smaller
catalogs, and ingestion of published point-set databases.

Native file layout (little-endian):
    header   magic "OTCAT" | version u8 | n u8 | entry count u32
    entries  packed signature bits | 2n signed 32-bit coordinates
    trailer  metadata length u32 | UTF-8 JSON metadata
"""

import json
import struct
from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.config import get_settings
from app.models.catalog import OrderTypeCatalog
from app.models.geometry import Configuration, OrderTypeSignature
from app.services.geom import canonicalize, find_collinear_triple, order_type, signs_of_coords
from app.utils.errors import CatalogFormatError, DegeneracyError, ParameterError
from app.utils.logger import app_logger as logger

MAGIC = b"OTCAT"
VERSION = 1
_HEADER = struct.Struct("<5sBBI")
_LENGTH = struct.Struct("<I")
INT32_MIN, INT32_MAX = -(2 ** 31), 2 ** 31 - 1

MIN_N, MAX_N = 3, 10


class Canonicalizer:
    """Caches raw sign vector -> canonical signature for one point count"""

    def __init__(self, n: int):
        self.n = n
        self._cache: Dict[Tuple[int, ...], OrderTypeSignature] = {}

    def __call__(self, signs: Tuple[int, ...]) -> OrderTypeSignature:
        key = self._cache.get(signs)
        if key is None:
            key = canonicalize(OrderTypeSignature(self.n, signs))
            self._cache[signs] = key
        return key

    @property
    def cache_size(self) -> int:
        return len(self._cache)


def _normalize_witness(coords: Sequence[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Translate to the origin corner and divide out the common factor"""
    min_x = min(x for x, _ in coords)
    min_y = min(y for _, y in coords)
    shifted = [(x - min_x, y - min_y) for x, y in coords]
    g = 0
    for x, y in shifted:
        g = gcd(g, gcd(x, y))
    if g > 1:
        shifted = [(x // g, y // g) for x, y in shifted]
    return shifted


def _check_n(n: int):
    if not MIN_N <= n <= MAX_N:
        raise ParameterError(f"catalogs support {MIN_N} <= n <= {MAX_N}, got n={n}")


def enumerate_grid_order_types(
    n: int,
    grid_side: int,
    budget: Optional[int] = None,
    seed: Optional[int] = None,
) -> OrderTypeCatalog:
    """
    Collect one witness per canonical order type among general-position
    n-subsets of the grid_side x grid_side integer grid.

    Exhaustive when C(grid_side^2, n) <= budget, otherwise `budget` seeded
    random n-subsets are tested.
    """
    if n < MIN_N or grid_side < 2:
        raise ParameterError(f"need n >= {MIN_N} and grid_side >= 2 (got n={n}, grid_side={grid_side})")
    _check_n(n)
    settings = get_settings()
    budget = settings.ENUM_BUDGET if budget is None else budget
    seed = settings.ENUM_SAMPLE_SEED if seed is None else seed

    grid = [(x, y) for x in range(grid_side) for y in range(grid_side)]
    total = comb(len(grid), n)
    exhaustive = total <= budget

    if exhaustive:
        subsets: Iterable[Sequence[int]] = combinations(range(len(grid)), n)
        tested = total
    else:
        rng = np.random.default_rng(seed)
        subsets = (sorted(rng.choice(len(grid), size=n, replace=False).tolist()) for _ in range(budget))
        tested = budget

    catalog = OrderTypeCatalog(n, metadata={
        "strategy": "exhaustive" if exhaustive else "sampled",
        "grid_side": grid_side,
        "tested": tested,
        "seed": None if exhaustive else seed,
    })
    canonical = Canonicalizer(n)
    degenerate = 0

    for subset in subsets:
        coords = [grid[i] for i in subset]
        signs = signs_of_coords(coords)
        if signs is None:
            degenerate += 1
            continue
        key = canonical(signs)
        if key not in catalog.entries:
            catalog.entries[key] = Configuration.from_coords(coords)

    catalog.metadata["degenerate"] = degenerate
    logger.info(
        f"[Catalog] n={n} grid={grid_side} {catalog.metadata['strategy']}: "
        f"{len(catalog)} order types from {tested} subsets ({degenerate} degenerate)"
    )
    return catalog


def extend_catalog(base: OrderTypeCatalog, scale: int = 3, margin: int = 2) -> OrderTypeCatalog:
    """
    Add one point to every base witness in every possible lattice position.

    Each witness is scaled by `scale`; candidate points are the integer
    points of its bounding box grown by `margin` base units. Covers every
    cell of the witness' line arrangement that contains such a point.
    """
    if scale < 1 or margin < 0:
        raise ParameterError("extension needs scale >= 1 and margin >= 0")
    n = base.n + 1
    _check_n(n)
    catalog = OrderTypeCatalog(n, metadata={
        "strategy": "extended",
        "base_n": base.n,
        "scale": scale,
        "margin": margin,
    })
    canonical = Canonicalizer(n)

    for _, witness in base.sorted_entries():
        coords = [(int(x) * scale, int(y) * scale) for x, y in witness.coords()]
        xs = [x for x, _ in coords]
        ys = [y for _, y in coords]
        pad = margin * scale
        taken = set(coords)
        for x in range(min(xs) - pad, max(xs) + pad + 1):
            for y in range(min(ys) - pad, max(ys) + pad + 1):
                if (x, y) in taken:
                    continue
                extended = coords + [(x, y)]
                signs = signs_of_coords(extended)
                if signs is None:
                    continue
                key = canonical(signs)
                if key not in catalog.entries:
                    catalog.entries[key] = Configuration.from_coords(_normalize_witness(extended))

    logger.info(f"[Catalog] extended n={base.n} -> n={n}: {len(catalog)} order types")
    return catalog


def merge_catalogs(a: OrderTypeCatalog, b: OrderTypeCatalog) -> OrderTypeCatalog:
    """Union by canonical key; the preferred (smaller) witness wins"""
    if a.n != b.n:
        raise ParameterError(f"cannot merge catalogs for n={a.n} and n={b.n}")
    strategies = sorted({a.metadata.get("strategy", "?"), b.metadata.get("strategy", "?")})
    merged = OrderTypeCatalog(a.n, metadata={"strategy": "+".join(strategies)})
    for cat in (a, b):
        for key, witness in cat.entries.items():
            merged.offer(key, witness)
    return merged


def ingest_database(n: int, blob: bytes) -> OrderTypeCatalog:
    """
    Parse raw concatenated n-point records: unsigned 8-bit coordinates for
    n <= 8, unsigned 16-bit little-endian for n in {9, 10}; no header.
    """
    _check_n(n)
    dtype = np.dtype(np.uint8) if n <= 8 else np.dtype("<u2")
    record_size = n * 2 * dtype.itemsize
    if len(blob) % record_size:
        raise CatalogFormatError(
            f"database length {len(blob)} is not a multiple of the {record_size}-byte record size for n={n}"
        )
    records = np.frombuffer(blob, dtype=dtype).reshape(-1, n, 2)

    catalog = OrderTypeCatalog(n, metadata={"strategy": "ingested", "records": int(records.shape[0])})
    canonical = Canonicalizer(n)
    for index, record in enumerate(records):
        coords = [(int(x), int(y)) for x, y in record]
        signs = signs_of_coords(coords)
        if signs is None:
            triple = find_collinear_triple(coords)
            raise DegeneracyError(
                f"record {index} is not in general position (points {triple})",
                indices=triple or (),
                record=index,
            )
        catalog.offer(canonical(signs), Configuration.from_coords(coords))

    logger.info(f"[Catalog] ingested {records.shape[0]} records for n={n}: {len(catalog)} order types")
    return catalog


def _witness_ints(witness: Configuration) -> List[int]:
    values = []
    for x, y in witness.coords():
        for v in (x, y):
            if not isinstance(v, int) and (not isinstance(v, Fraction) or v.denominator != 1):
                raise CatalogFormatError(f"witness coordinate {v} is not an integer")
            v = int(v)
            if not INT32_MIN <= v <= INT32_MAX:
                raise CatalogFormatError(f"witness coordinate {v} does not fit in 32 bits")
            values.append(v)
    return values


def save_catalog(catalog: OrderTypeCatalog) -> bytes:
    entries = catalog.sorted_entries()
    out = bytearray(_HEADER.pack(MAGIC, VERSION, catalog.n, len(entries)))
    coord_struct = struct.Struct(f"<{2 * catalog.n}i")
    for key, witness in entries:
        out += key.to_bytes()
        out += coord_struct.pack(*_witness_ints(witness))
    meta = json.dumps(catalog.metadata, sort_keys=True, default=str).encode("utf-8")
    out += _LENGTH.pack(len(meta))
    out += meta
    return bytes(out)


def load_catalog(blob: bytes) -> OrderTypeCatalog:
    if len(blob) < _HEADER.size:
        raise CatalogFormatError("catalog blob shorter than its header")
    magic, version, n, count = _HEADER.unpack_from(blob, 0)
    if magic != MAGIC:
        raise CatalogFormatError("not an order-type catalog (bad magic)")
    if version != VERSION:
        raise CatalogFormatError(f"unsupported catalog version {version}")
    if not MIN_N <= n <= MAX_N:
        raise CatalogFormatError(f"catalog header names unsupported n={n}")

    sig_size = OrderTypeSignature.packed_size(n)
    coord_struct = struct.Struct(f"<{2 * n}i")
    entry_size = sig_size + coord_struct.size
    body_end = _HEADER.size + count * entry_size
    if len(blob) < body_end + _LENGTH.size:
        raise CatalogFormatError(f"catalog truncated: {count} entries for n={n} need {body_end + _LENGTH.size} bytes")
    (meta_len,) = _LENGTH.unpack_from(blob, body_end)
    if len(blob) != body_end + _LENGTH.size + meta_len:
        raise CatalogFormatError("catalog length disagrees with its header")
    try:
        metadata = json.loads(blob[body_end + _LENGTH.size:].decode("utf-8")) if meta_len else {}
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CatalogFormatError(f"corrupt catalog metadata: {e}")

    catalog = OrderTypeCatalog(n, metadata=metadata)
    offset = _HEADER.size
    for index in range(count):
        key = OrderTypeSignature.from_bytes(n, blob[offset:offset + sig_size])
        values = coord_struct.unpack_from(blob, offset + sig_size)
        offset += entry_size
        witness = Configuration.from_coords(zip(values[0::2], values[1::2]))
        try:
            realized = canonicalize(order_type(witness))
        except DegeneracyError:
            raise CatalogFormatError(f"catalog entry {index} has a degenerate witness")
        if realized != key:
            raise CatalogFormatError(f"catalog entry {index}: witness does not realize its key")
        if key in catalog.entries:
            raise CatalogFormatError(f"catalog entry {index} duplicates an earlier key")
        catalog.entries[key] = witness
    return catalog
