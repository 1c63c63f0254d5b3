"""
Catalog Store

File-backed cache of order-type catalogs, one file per point count in
CATALOG_DIR. Missing catalogs are built on demand and saved.
"""

from math import comb
from pathlib import Path
from typing import Dict, Optional

from app.config import get_settings
from app.models.catalog import OrderTypeCatalog
from app.services.catalog import (
    enumerate_grid_order_types,
    extend_catalog,
    ingest_database,
    load_catalog,
    merge_catalogs,
    save_catalog,
)
from app.utils.errors import ParameterError
from app.utils.logger import app_logger as logger

# grid sides on which exhaustive enumeration is complete
EXHAUSTIVE_GRID = {3: 3, 4: 3, 5: 5}

# number of order types of n points in general position
ORDER_TYPE_TOTALS = {3: 1, 4: 2, 5: 3, 6: 16, 7: 135, 8: 3315, 9: 158817, 10: 14309547}

# (scale, margin) of successive one-point extension passes
EXTENSION_ROUNDS = ((3, 2), (5, 3), (8, 4), (12, 6))


class CatalogStore:
    """Loads catalogs from disk, building and saving missing ones"""

    def __init__(self, directory: Optional[str] = None, budget: Optional[int] = None, seed: Optional[int] = None):
        settings = get_settings()
        self.directory = Path(directory or settings.CATALOG_DIR)
        self.budget = settings.ENUM_BUDGET if budget is None else budget
        self.seed = settings.ENUM_SAMPLE_SEED if seed is None else seed
        self._loaded: Dict[int, OrderTypeCatalog] = {}

    def path_for(self, n: int) -> Path:
        return self.directory / f"order_types_n{n}.otc"

    def get(self, n: int) -> OrderTypeCatalog:
        if n in self._loaded:
            return self._loaded[n]
        path = self.path_for(n)
        if path.exists():
            catalog = load_catalog(path.read_bytes())
            if catalog.n != n:
                raise ParameterError(f"{path} holds a catalog for n={catalog.n}")
            logger.debug(f"[CatalogStore] loaded {path} ({len(catalog)} order types)")
        else:
            catalog = self.build(n)
            self.save(catalog)
        self._loaded[n] = catalog
        return catalog

    def build(self, n: int) -> OrderTypeCatalog:
        """
        Exhaustive grid enumeration for n <= 5. Above that, a sampled grid
        merged with one-point extensions of the n-1 catalog over growing
        scales, until the known total is reached or a round adds nothing.
        """
        if n in EXHAUSTIVE_GRID:
            side = EXHAUSTIVE_GRID[n]
            return enumerate_grid_order_types(n, side, budget=max(self.budget, comb(side * side, n)))
        logger.info(f"[CatalogStore] building n={n} catalog (sampled grid + extension of n={n - 1})")
        base = self.get(n - 1)
        catalog = enumerate_grid_order_types(n, n + 2, budget=self.budget, seed=self.seed)
        target = ORDER_TYPE_TOTALS.get(n)
        rounds = []
        for scale, margin in EXTENSION_ROUNDS:
            before = len(catalog)
            catalog = merge_catalogs(catalog, extend_catalog(base, scale=scale, margin=margin))
            rounds.append({"scale": scale, "margin": margin, "entries": len(catalog)})
            logger.debug(f"[CatalogStore] n={n} extension scale={scale} margin={margin}: {before} -> {len(catalog)}")
            if len(catalog) == target or (len(rounds) > 1 and len(catalog) == before):
                break
        catalog.metadata.update({
            "grid_side": n + 2,
            "seed": self.seed,
            "extension_rounds": rounds,
            "complete": len(catalog) == target,
        })
        if len(catalog) != target:
            logger.warning(f"[CatalogStore] n={n} catalog has {len(catalog)} of {target} order types")
        return catalog

    def merge_into_stored(self, catalog: OrderTypeCatalog) -> OrderTypeCatalog:
        """Union with the stored catalog for the same n, so a save never drops entries"""
        path = self.path_for(catalog.n)
        if path.exists():
            catalog = merge_catalogs(load_catalog(path.read_bytes()), catalog)
        self.save(catalog)
        return catalog

    def save(self, catalog: OrderTypeCatalog) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path_for(catalog.n)
        path.write_bytes(save_catalog(catalog))
        self._loaded[catalog.n] = catalog
        logger.info(f"[CatalogStore] saved {path} ({len(catalog)} order types)")
        return path

    def ingest(self, n: int, blob: bytes) -> OrderTypeCatalog:
        """Merge an ingested point-set database into the stored catalog"""
        return self.merge_into_stored(ingest_database(n, blob))
