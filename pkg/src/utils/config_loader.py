"""
Configuration Loader Module

Loads configuration from YAML with environment variable support. A ``.env``
file in the working directory is read first; ``config/local_config.yaml``,
when present next to the main file, is merged on top.
"""

import os
import re
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from dotenv import load_dotenv


LOCAL_CONFIG_NAME = "local_config.yaml"


class ConfigLoader:
    """Loads and manages application configuration."""

    def __init__(self, config_path: Optional[str] = None, use_local: bool = True):
        """
        Initialize the configuration loader.

        Args:
            config_path: Path to main configuration file
            use_local: Merge local_config.yaml from the same directory if present
        """
        load_dotenv()
        self.config_path = config_path or self._get_default_config_path()
        self.use_local = use_local
        self.config = self._load_config()

    def _get_default_config_path(self) -> str:
        """Get the default configuration file path."""
        current_dir = Path(__file__).parent
        config_path = current_dir.parent.parent / "config" / "default_config.yaml"
        return str(config_path)

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from YAML file."""
        if not os.path.exists(self.config_path):
            raise FileNotFoundError(f"Configuration file not found: {self.config_path}")

        with open(self.config_path, 'r') as f:
            config = yaml.safe_load(f) or {}

        local_path = Path(self.config_path).parent / LOCAL_CONFIG_NAME
        if self.use_local and local_path.exists() and local_path != Path(self.config_path):
            with open(local_path, 'r') as f:
                config = self._merge_configs(config, yaml.safe_load(f) or {})

        return self._process_env_vars(config)

    def _process_env_vars(self, config: Any) -> Any:
        """
        Recursively process environment variables in configuration.

        Replaces ${VAR_NAME} and ${VAR_NAME:default}.
        """
        if isinstance(config, dict):
            return {k: self._process_env_vars(v) for k, v in config.items()}
        elif isinstance(config, list):
            return [self._process_env_vars(item) for item in config]
        elif isinstance(config, str):
            pattern = r'\$\{([^}]+)\}'

            def replacer(match):
                var_name = match.group(1)
                if ':' in var_name:
                    var_name, default = var_name.split(':', 1)
                    return os.getenv(var_name, default)
                return os.getenv(var_name, match.group(0))

            return re.sub(pattern, replacer, config)
        else:
            return config

    def _merge_configs(self, base: Dict[str, Any], overlay: Dict[str, Any]) -> Dict[str, Any]:
        """
        Recursively merge two configuration dictionaries.

        Args:
            base: Base configuration
            overlay: Configuration to overlay on top

        Returns:
            Merged configuration
        """
        result = base.copy()

        for key, value in overlay.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self._merge_configs(result[key], value)
            else:
                result[key] = value

        return result

    def get(self, key_path: str, default: Any = None) -> Any:
        """
        Get a configuration value using dot notation.

        Args:
            key_path: Dot-separated path to configuration key
            default: Default value if key not found

        Returns:
            Configuration value or default
        """
        value = self.config
        for key in key_path.split('.'):
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default
        return default if value is None else value

    def get_path(self, key_path: str, default: Optional[str] = None) -> Optional[Path]:
        """
        Get a configuration path value and expand it.

        Relative paths are resolved against the configuration file's directory.
        """
        path_str = self.get(key_path, default)
        if path_str is None:
            return None

        path = Path(os.path.expanduser(path_str))
        if not path.is_absolute():
            path = Path(self.config_path).parent / path
        return path

    def set(self, key_path: str, value: Any) -> None:
        """Override a value in memory (used for command-line flags)."""
        keys = key_path.split('.')
        node = self.config
        for key in keys[:-1]:
            node = node.setdefault(key, {})
        node[keys[-1]] = value

    def validate(self, required_keys: List[str]) -> bool:
        """True if every dot-path in ``required_keys`` is present."""
        return all(self.get(key_path) is not None for key_path in required_keys)
