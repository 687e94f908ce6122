"""
Cache Manager Module

JSON file cache for computed coefficient lists.
"""

import hashlib
import json
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .logger import get_logger


class SeriesCache:
    """Stores coefficient lists as decimal strings, keyed by computation parameters."""

    def __init__(self, cache_dir: Optional[Union[str, Path]] = None, version: str = "0"):
        """
        Initialize the cache.

        Args:
            cache_dir: Cache directory path
            version: Package version folded into every key
        """
        self.cache_dir = Path(cache_dir).expanduser() if cache_dir else Path.home() / ".cache" / "fc-affine-enumerator"
        self.version = version
        self.logger = get_logger(__name__)
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        self.cache_file = self.cache_dir / "series_cache.json"

    def _get_cache_key(self, key: Union[str, dict]) -> str:
        """Hash a key dictionary (sorted) together with the version."""
        if isinstance(key, dict):
            key_str = json.dumps({**key, "version": self.version}, sort_keys=True)
        else:
            key_str = f"{key}|{self.version}"
        return hashlib.md5(key_str.encode()).hexdigest()

    def _read(self) -> Dict[str, Any]:
        if not self.cache_file.exists():
            return {}
        try:
            with open(self.cache_file, 'r') as f:
                return json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            self.logger.warning(f"Cache read error: {e}")
            return {}

    def _write(self, data: Dict[str, Any]) -> None:
        try:
            with open(self.cache_file, 'w') as f:
                json.dump(data, f, indent=2)
        except OSError as e:
            self.logger.warning(f"Cache write error: {e}")

    def get(self, key: Union[str, dict]) -> Optional[List[int]]:
        """
        Get a cached coefficient list.

        Returns:
            Coefficients as integers, or None if absent
        """
        entry = self._read().get(self._get_cache_key(key))
        if entry is None:
            return None
        self.logger.debug(f"Cache hit for {key}")
        return [int(c) for c in entry['value']]

    def set(self, key: Union[str, dict], coefficients: List[int]) -> None:
        data = self._read()
        data[self._get_cache_key(key)] = {
            'key': key,
            'value': [str(c) for c in coefficients],
            'created_at': datetime.now().isoformat(),
        }
        self._write(data)

    def delete(self, key: Union[str, dict]) -> None:
        data = self._read()
        if data.pop(self._get_cache_key(key), None) is not None:
            self._write(data)

    def clear(self) -> None:
        if self.cache_file.exists():
            self.cache_file.unlink()

    def get_stats(self) -> Dict[str, Any]:
        stats: Dict[str, Any] = {'cache_dir': str(self.cache_dir), 'file': str(self.cache_file)}
        if not self.cache_file.exists():
            stats['status'] = 'not_found'
            return stats
        stats['entries'] = len(self._read())
        stats['size_kb'] = self.cache_file.stat().st_size / 1024
        return stats
