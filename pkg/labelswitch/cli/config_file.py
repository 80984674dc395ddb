"""
Plain-text configuration files: UTF-8 ``key = value`` lines with ``#``
comments. Keys are long flag names without the leading dashes; dashes and
underscores are interchangeable. List values are comma separated.
"""

from pathlib import Path
from typing import Dict, Union

from ..utils.errors import ConfigError


def normalize_key(key: str) -> str:
    return key.strip().lstrip("-").replace("-", "_").lower()


def parse_config_text(text: str, source: str = "<config>") -> Dict[str, str]:
    values: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}, line {number}: expected 'key = value', got '{raw.strip()}'")
        key, value = line.split("=", 1)
        key = normalize_key(key)
        if not key:
            raise ConfigError(f"{source}, line {number}: empty key")
        if key in values:
            raise ConfigError(f"{source}, line {number}: duplicate key '{key}'")
        values[key] = value.strip()
    return values


def read_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """
    Parse a configuration file into normalized keys and raw string values.

    Raises:
        ConfigError: On unreadable files or malformed lines
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e.strerror}") from None
    except UnicodeDecodeError:
        raise ConfigError(f"config file {path} is not valid UTF-8") from None
    return parse_config_text(text, str(path))


def write_config_file(values: Dict[str, object], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{key} = {value}" for key, value in values.items()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
