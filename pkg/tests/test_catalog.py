import struct

import numpy as np
import pytest

from app.models.catalog import OrderTypeCatalog
from app.models.geometry import Configuration
from app.services.catalog import (
    MAGIC,
    enumerate_grid_order_types,
    extend_catalog,
    ingest_database,
    load_catalog,
    merge_catalogs,
    save_catalog,
)
from app.services.catalog_store import EXTENSION_ROUNDS, CatalogStore
from app.services.geom import canonicalize, is_convex_position, order_type
from app.utils.errors import CatalogFormatError, DegeneracyError, ParameterError
from tests.conftest import KNOWN_ORDER_TYPE_COUNTS, slow


def keys_of(catalog: OrderTypeCatalog):
    return set(catalog.entries)


class TestGridEnumeration:
    def test_three_points(self):
        assert len(enumerate_grid_order_types(3, 2)) == KNOWN_ORDER_TYPE_COUNTS[3]

    def test_four_points_convex_and_not(self):
        catalog = enumerate_grid_order_types(4, 3)
        assert len(catalog) == KNOWN_ORDER_TYPE_COUNTS[4]
        assert catalog.metadata["strategy"] == "exhaustive"
        assert sorted(is_convex_position(w) for _, w in catalog) == [False, True]

    @pytest.mark.parametrize("side", [4, 5])
    def test_five_points_saturate(self, side):
        assert len(enumerate_grid_order_types(5, side)) == KNOWN_ORDER_TYPE_COUNTS[5]

    def test_witnesses_realize_their_keys(self):
        for key, witness in enumerate_grid_order_types(5, 5):
            assert canonicalize(order_type(witness)) == key

    def test_sampling_is_seeded(self):
        a = enumerate_grid_order_types(6, 8, budget=3000, seed=11)
        b = enumerate_grid_order_types(6, 8, budget=3000, seed=11)
        assert a.metadata["strategy"] == "sampled"
        assert save_catalog(a) == save_catalog(b)
        assert len(a) <= KNOWN_ORDER_TYPE_COUNTS[6]

    def test_tiny_grid_has_nothing_in_general_position(self):
        assert len(enumerate_grid_order_types(5, 2)) == 0

    def test_rejects_unsupported_n(self):
        with pytest.raises(ParameterError):
            enumerate_grid_order_types(11, 12)


class TestExtendAndMerge:
    def test_extension_recovers_all_five_point_types(self):
        extended = extend_catalog(enumerate_grid_order_types(4, 3))
        assert extended.n == 5
        assert keys_of(extended) == keys_of(enumerate_grid_order_types(5, 5))

    def test_merge_is_commutative_and_idempotent(self):
        a = enumerate_grid_order_types(5, 4)
        b = extend_catalog(enumerate_grid_order_types(4, 3))
        ab, ba = merge_catalogs(a, b), merge_catalogs(b, a)
        assert keys_of(ab) == keys_of(ba) == keys_of(a) | keys_of(b)
        assert {k: w.coords() for k, w in ab} == {k: w.coords() for k, w in ba}
        assert keys_of(merge_catalogs(ab, ab)) == keys_of(ab)

    def test_merge_rejects_mixed_sizes(self):
        with pytest.raises(ParameterError):
            merge_catalogs(enumerate_grid_order_types(4, 3), enumerate_grid_order_types(5, 4))


class TestIngest:
    def test_single_square_record(self):
        blob = bytes([0, 0, 1, 0, 1, 1, 0, 1])
        catalog = ingest_database(4, blob)
        assert len(catalog) == 1
        (_, witness), = catalog
        assert is_convex_position(witness)

    def test_sixteen_bit_records(self):
        coords = [(0, 0), (300, 0), (600, 10), (900, 40), (1200, 90), (1500, 160),
                  (1800, 250), (2100, 360), (2400, 490)]
        blob = np.array(coords, dtype="<u2").tobytes()
        assert len(ingest_database(9, blob)) == 1

    def test_duplicate_records_collapse(self):
        square = bytes([0, 0, 1, 0, 1, 1, 0, 1])
        assert len(ingest_database(4, square * 3)) == 1

    def test_length_not_multiple_of_record(self):
        with pytest.raises(CatalogFormatError):
            ingest_database(4, bytes(7))

    def test_collinear_record_reports_index(self):
        good = bytes([0, 0, 1, 0, 1, 1, 0, 1])
        bad = bytes([0, 0, 1, 1, 2, 2, 0, 1])
        with pytest.raises(DegeneracyError) as exc:
            ingest_database(4, good + bad)
        assert exc.value.record == 1


class TestFileFormat:
    def test_round_trip(self):
        catalog = enumerate_grid_order_types(5, 5)
        blob = save_catalog(catalog)
        assert blob.startswith(MAGIC)
        loaded = load_catalog(blob)
        assert loaded.n == 5
        assert keys_of(loaded) == keys_of(catalog)
        assert save_catalog(loaded) == blob

    def test_empty_catalog(self):
        loaded = load_catalog(save_catalog(OrderTypeCatalog(4)))
        assert loaded.n == 4 and len(loaded) == 0

    def test_bad_magic(self):
        blob = bytearray(save_catalog(enumerate_grid_order_types(4, 3)))
        blob[0:5] = b"XXXXX"
        with pytest.raises(CatalogFormatError):
            load_catalog(bytes(blob))

    def test_truncated(self):
        blob = save_catalog(enumerate_grid_order_types(4, 3))
        with pytest.raises(CatalogFormatError):
            load_catalog(blob[:-12])

    def test_header_size_mismatch(self):
        blob = bytearray(save_catalog(enumerate_grid_order_types(4, 3)))
        blob[6] = 5  # n byte
        with pytest.raises(CatalogFormatError):
            load_catalog(bytes(blob))

    def test_witness_not_realizing_key(self):
        catalog = enumerate_grid_order_types(4, 3)
        blob = bytearray(save_catalog(catalog))
        header = struct.calcsize("<5sBBI")
        # swap the two entries' coordinates so each key gets the other's witness
        sig_size, coord_size = 1, 8 * 4
        entry = sig_size + coord_size
        first = blob[header + sig_size:header + entry]
        second = blob[header + entry + sig_size:header + 2 * entry]
        blob[header + sig_size:header + entry] = second
        blob[header + entry + sig_size:header + 2 * entry] = first
        with pytest.raises(CatalogFormatError):
            load_catalog(bytes(blob))

    def test_non_integer_witness_cannot_be_saved(self):
        catalog = OrderTypeCatalog(3)
        witness = Configuration.from_coords([(0, 0), (1, 0), ("1/2", 1)])
        catalog.offer(canonicalize(order_type(witness)), witness)
        with pytest.raises(CatalogFormatError):
            save_catalog(catalog)


class TestCatalogStore:
    def test_builds_saves_and_reloads(self, tmp_path):
        store = CatalogStore(str(tmp_path))
        built = store.get(4)
        assert store.path_for(4).exists()
        reloaded = CatalogStore(str(tmp_path)).get(4)
        assert keys_of(reloaded) == keys_of(built)

    def test_six_point_catalog(self, catalog_store):
        catalog = catalog_store.get(6)
        assert len(catalog) == KNOWN_ORDER_TYPE_COUNTS[6]
        assert catalog.metadata["complete"]
        # extension of the convex pentagon yields the convex hexagon
        assert any(is_convex_position(w) for _, w in catalog)

    @slow
    def test_seven_point_catalog(self, catalog_store):
        catalog = catalog_store.get(7)
        assert len(catalog) == KNOWN_ORDER_TYPE_COUNTS[7]
        rounds = catalog.metadata["extension_rounds"]
        assert len(rounds) >= 1
        assert rounds[-1]["entries"] == KNOWN_ORDER_TYPE_COUNTS[7]

    def test_extension_rounds_are_recorded_and_reloaded(self, tmp_path):
        store = CatalogStore(str(tmp_path), budget=2000, seed=3)
        built = store.get(6)
        rounds = built.metadata["extension_rounds"]
        assert [r["scale"] for r in rounds] == [s for s, _ in EXTENSION_ROUNDS[:len(rounds)]]
        assert all(a["entries"] <= b["entries"] for a, b in zip(rounds, rounds[1:]))
        reloaded = CatalogStore(str(tmp_path)).get(6)
        assert reloaded.metadata["extension_rounds"] == rounds

    def test_smaller_enumeration_cannot_shrink_the_stored_catalog(self, tmp_path):
        store = CatalogStore(str(tmp_path))
        assert len(store.get(5)) == KNOWN_ORDER_TYPE_COUNTS[5]
        partial = OrderTypeCatalog(5)
        key, witness = next(iter(enumerate_grid_order_types(5, 5)))
        partial.offer(key, witness)
        assert len(store.merge_into_stored(partial)) == KNOWN_ORDER_TYPE_COUNTS[5]
        assert len(CatalogStore(str(tmp_path)).get(5)) == KNOWN_ORDER_TYPE_COUNTS[5]

    def test_ingest_merges_into_stored_file(self, tmp_path):
        store = CatalogStore(str(tmp_path))
        store.ingest(4, bytes([0, 0, 1, 0, 1, 1, 0, 1]))
        assert len(store.ingest(4, bytes([0, 0, 4, 0, 0, 4, 1, 1]))) == 2
        assert len(CatalogStore(str(tmp_path)).get(4)) == 2

    def test_wrong_file_for_size(self, tmp_path):
        store = CatalogStore(str(tmp_path))
        store.path_for(5).write_bytes(save_catalog(enumerate_grid_order_types(4, 3)))
        with pytest.raises(ParameterError):
            store.get(5)
