"""
Registry Loader

Scans app/knowledge/<module>/_index.yaml files and serves their parsed
entries: identity catalogue, conjecture tables and discrepancy ledger.
Parsed modules are kept in an LRU cache with TTL expiration, so edits to
the YAML files are picked up without restarting.
"""

from collections import OrderedDict
from typing import Any, Dict, List, Optional
from pathlib import Path
from datetime import datetime, timedelta
import asyncio
import hashlib
import logging
import yaml

from app.core.config import settings
from app.core.exceptions import RegistryError
from app.knowledge.schemas import (
    CachedModule,
    ConjectureTable,
    Discrepancy,
    IdentityEntry,
    ModuleConfig,
    RegistryModule,
)

logger = logging.getLogger(__name__)

_PARSERS = {
    RegistryModule.IDENTITIES.value: IdentityEntry.from_dict,
    RegistryModule.CONJECTURES.value: ConjectureTable.from_dict,
    RegistryModule.DISCREPANCIES.value: Discrepancy.from_dict,
}


class RegistryCache:
    """
    Parsed modules keyed by module id, least recently used first.

    An entry older than its TTL (its module's cache_ttl, else the default)
    is dropped on lookup; the manager also compares file hashes, so an
    edited index is re-parsed.
    """

    def __init__(self, max_size: int = 16, ttl_seconds: int = 300):
        self._items: "OrderedDict[str, CachedModule]" = OrderedDict()
        self._max_size = max_size
        self._ttl = timedelta(seconds=ttl_seconds)

    def get(self, key: str) -> Optional[CachedModule]:
        item = self._items.get(key)
        if item is None:
            return None
        ttl = self._ttl if item.ttl_seconds is None else timedelta(seconds=item.ttl_seconds)
        if datetime.now() - item.last_loaded > ttl:
            del self._items[key]
            return None
        self._items.move_to_end(key)
        return item

    def put(self, key: str, item: CachedModule):
        self._items[key] = item
        self._items.move_to_end(key)
        while len(self._items) > self._max_size:
            self._items.popitem(last=False)

    def invalidate(self, key: Optional[str] = None):
        """Drop one module, or everything when key is None."""
        if key is None:
            self._items.clear()
        else:
            self._items.pop(key, None)

    def stats(self) -> Dict[str, Any]:
        return {
            "size": len(self._items),
            "max_size": self._max_size,
            "ttl_seconds": self._ttl.total_seconds(),
        }


class RegistryManager:
    """
    Central access to the data registry.

    Features:
    - Singleton pattern for global access
    - One `_index.yaml` per module directory, parsed with yaml.safe_load
    - Caching with TTL and file-hash checks for hot-reload

    Usage:
        rm = get_registry_manager()
        entry = rm.identity("c5_32n_31_mod4")
        table = rm.conjecture_table("c9_c13_c17_mod2")
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return

        self._registry_dir = Path(__file__).parent
        self._cache = RegistryCache(ttl_seconds=settings.REGISTRY_CACHE_TTL_SECONDS)
        self._registry: Dict[str, ModuleConfig] = {}
        self._initialized = True

        self._scan_registry()

    def _index_path(self, module_id: str) -> Path:
        return self._registry_dir / module_id / "_index.yaml"

    def _scan_registry(self):
        """Scan all module directories and build registry from _index.yaml files"""
        for module_dir in sorted(self._registry_dir.iterdir()):
            if not module_dir.is_dir():
                continue
            if module_dir.name.startswith('_') or module_dir.name.startswith('.'):
                continue

            index_file = module_dir / '_index.yaml'
            if not index_file.exists():
                continue
            try:
                with open(index_file, 'r', encoding='utf-8') as f:
                    config_data = yaml.safe_load(f) or {}

                module_info = config_data.get('module', {})
                loading = config_data.get('loading_strategy', {})

                self._registry[module_dir.name] = ModuleConfig(
                    id=module_info.get('id', module_dir.name),
                    name=module_info.get('name', module_dir.name),
                    description=module_info.get('description', ''),
                    eager_load=loading.get('eager', False),
                    cache_enabled=loading.get('cache', True),
                    cache_ttl=loading.get('cache_ttl', settings.REGISTRY_CACHE_TTL_SECONDS),
                    entries=config_data.get('entries', [])
                )
                logger.info(f"Registered registry module: {module_dir.name}")
            except Exception as e:
                logger.error(f"Failed to load index for {module_dir.name}: {e}")

        for module_id, config in self._registry.items():
            if config.eager_load:
                self._load_module_sync(module_id)

    def _compute_file_hash(self, file_path: Path) -> str:
        """Compute MD5 hash of file content for change detection"""
        if not file_path.exists():
            return ""
        try:
            return hashlib.md5(file_path.read_bytes()).hexdigest()
        except OSError:
            return ""

    def _load_module_sync(self, module_id: str) -> CachedModule:
        """Parse a module's entries from its index file"""
        if module_id not in self._registry:
            raise RegistryError(f"Unknown registry module: {module_id}")

        index_file = self._index_path(module_id)
        with open(index_file, 'r', encoding='utf-8') as f:
            config_data = yaml.safe_load(f) or {}

        parser = _PARSERS.get(module_id)
        raw_entries = config_data.get('entries', [])
        entries = [parser(e) for e in raw_entries] if parser else list(raw_entries)

        item = CachedModule(
            module_id=module_id,
            entries=entries,
            last_loaded=datetime.now(),
            file_hash=self._compute_file_hash(index_file),
            ttl_seconds=self._registry[module_id].cache_ttl,
        )
        if self._registry[module_id].cache_enabled:
            self._cache.put(module_id, item)
        return item

    def get_entries(self, module_id: str, force_reload: bool = False) -> List[Any]:
        """
        Parsed entries of a module, in file order.

        Args:
            module_id: identities, conjectures or discrepancies
            force_reload: Bypass the cache
        """
        if not force_reload:
            cached = self._cache.get(module_id)
            if cached and self._compute_file_hash(self._index_path(module_id)) == cached.file_hash:
                return cached.entries
        return self._load_module_sync(module_id).entries

    async def aget_entries(self, module_id: str, force_reload: bool = False) -> List[Any]:
        """get_entries on the default executor, for async callers"""
        loop = asyncio.get_running_loop()
        return await loop.run_in_executor(None, self.get_entries, module_id, force_reload)

    # ============== Identities ==============

    def list_identities(self) -> List[IdentityEntry]:
        return list(self.get_entries(RegistryModule.IDENTITIES.value))

    def identity(self, identity_id: str) -> IdentityEntry:
        for entry in self.list_identities():
            if entry.id == identity_id:
                return entry
        raise RegistryError(f"Unknown identity id: {identity_id}")

    # ============== Conjectures ==============

    def list_conjectures(self) -> List[ConjectureTable]:
        return list(self.get_entries(RegistryModule.CONJECTURES.value))

    def conjecture_table(self, conjecture_id: str) -> ConjectureTable:
        for table in self.list_conjectures():
            if table.id == conjecture_id:
                return table
        raise RegistryError(f"Unknown conjecture id: {conjecture_id}")

    # ============== Discrepancies ==============

    def discrepancies(self, ids: Optional[List[str]] = None) -> List[Discrepancy]:
        """The ledger, optionally restricted to the given ids (ledger order kept)."""
        ledger = list(self.get_entries(RegistryModule.DISCREPANCIES.value))
        if ids is None:
            return ledger
        known = {d.id for d in ledger}
        unknown = [i for i in ids if i not in known]
        if unknown:
            raise RegistryError(f"Unknown discrepancy ids: {', '.join(unknown)}")
        return [d for d in ledger if d.id in ids]

    def list_modules(self) -> List[str]:
        """List all registered module ids"""
        return list(self._registry.keys())

    def refresh_registry(self):
        """Refresh the registry by re-scanning all modules"""
        self._registry.clear()
        self._cache.invalidate()
        self._scan_registry()

    def get_cache_stats(self) -> Dict[str, Any]:
        """Get cache statistics"""
        return self._cache.stats()


# Singleton accessor
_registry_manager: Optional[RegistryManager] = None


def get_registry_manager() -> RegistryManager:
    """Get the global RegistryManager instance"""
    global _registry_manager
    if _registry_manager is None:
        _registry_manager = RegistryManager()
    return _registry_manager
