"""
Artifact readers and writers with a provenance header

CSV files start with "# key = value" lines followed by a commented column
line; binary files are npz archives holding the same header as JSON.
"""

import configparser
import io
import json
import zipfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np

from .. import __version__
from ..utils.logging import storage_logger
from ..utils.exceptions import DataIOError, UsageError

FORMATS = ("csv", "binary")
HEADER_KEY = "__header__"
ZIP_EPOCH = (1980, 1, 1, 0, 0, 0)


@dataclass(frozen=True)
class Provenance:
    config_hash: str
    seed: Optional[int]
    command: str = ""
    version: str = __version__
    extra: Dict[str, Any] = field(default_factory=dict)

    def header(self, **metadata: Any) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "tool": "levsqueeze",
            "version": self.version,
            "command": self.command,
            "config_hash": self.config_hash,
            "seed": self.seed,
        }
        out.update(self.extra)
        out.update(metadata)
        return out


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return json.dumps(list(value))
    return str(value)


def _parse_value(text: str) -> Any:
    text = text.strip()
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    if text in ("True", "False"):
        return text == "True"
    if text == "None":
        return None
    if text.startswith("["):
        try:
            return json.loads(text)
        except json.JSONDecodeError:
            pass
    return text


def _ensure_parent(path: Path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise DataIOError(f"Cannot create directory {path.parent}: {e}")
    return path


def write_csv(path: Path, columns: Mapping[str, np.ndarray], header: Mapping[str, Any]) -> Path:
    """Columns of equal length under a '# key = value' header"""
    path = _ensure_parent(path)
    names = list(columns)
    data = np.column_stack([np.asarray(columns[name], dtype=float) for name in names])
    lines = [f"{key} = {_format_value(value)}" for key, value in header.items()]
    lines.append(",".join(names))
    try:
        np.savetxt(path, data, delimiter=",", fmt="%.17g", header="\n".join(lines), comments="# ")
    except OSError as e:
        raise DataIOError(f"Cannot write {path}: {e}")
    storage_logger.debug(f"Wrote {path} ({len(data)} rows)")
    return path


def read_csv(path: Path) -> Tuple[Dict[str, np.ndarray], Dict[str, Any]]:
    path = Path(path)
    if not path.exists():
        raise DataIOError(f"File not found: {path}")
    header: Dict[str, Any] = {}
    comment_lines = []
    try:
        with path.open("r", encoding="utf-8") as handle:
            for line in handle:
                if not line.startswith("#"):
                    break
                comment_lines.append(line[1:].strip())
        data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    except (OSError, ValueError) as e:
        raise DataIOError(f"Cannot read {path}: {e}")
    if not comment_lines:
        raise DataIOError(f"{path} has no column header")
    for line in comment_lines[:-1]:
        key, _, value = line.partition("=")
        header[key.strip()] = _parse_value(value)
    names = comment_lines[-1].split(",")
    if data.size == 0:
        data = np.zeros((0, len(names)))
    if data.shape[1] != len(names):
        raise DataIOError(f"{path}: {data.shape[1]} columns but {len(names)} names")
    return {name: data[:, k] for k, name in enumerate(names)}, header


def write_npz(path: Path, arrays: Mapping[str, np.ndarray], header: Mapping[str, Any]) -> Path:
    path = _ensure_parent(path)
    payload = {name: np.asarray(value) for name, value in arrays.items()}
    payload[HEADER_KEY] = np.array(json.dumps(dict(header), sort_keys=True, default=str))
    try:
        # fixed entry timestamps keep reruns byte-identical
        with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_DEFLATED) as archive:
            for name, value in payload.items():
                buffer = io.BytesIO()
                np.lib.format.write_array(buffer, value, allow_pickle=False)
                info = zipfile.ZipInfo(f"{name}.npy", date_time=ZIP_EPOCH)
                info.compress_type = zipfile.ZIP_DEFLATED
                archive.writestr(info, buffer.getvalue())
    except OSError as e:
        raise DataIOError(f"Cannot write {path}: {e}")
    storage_logger.debug(f"Wrote {path}")
    return path


def read_npz(path: Path) -> Tuple[Dict[str, np.ndarray], Dict[str, Any]]:
    path = Path(path)
    if not path.exists():
        raise DataIOError(f"File not found: {path}")
    try:
        with np.load(path, allow_pickle=False) as archive:
            arrays = {name: archive[name] for name in archive.files if name != HEADER_KEY}
            header = json.loads(str(archive[HEADER_KEY])) if HEADER_KEY in archive.files else {}
    except (OSError, ValueError) as e:
        raise DataIOError(f"Cannot read {path}: {e}")
    return arrays, header


def write_table(path: Path, columns: Mapping[str, np.ndarray], header: Mapping[str, Any],
                fmt: str = "csv") -> Path:
    """CSV or npz depending on fmt; the suffix is set accordingly"""
    if fmt not in FORMATS:
        raise UsageError(f"Unknown format '{fmt}'. Expected one of {FORMATS}")
    path = Path(path)
    if fmt == "csv":
        return write_csv(path.with_suffix(".csv"), columns, header)
    return write_npz(path.with_suffix(".npz"), columns, header)


def read_table(path: Path) -> Tuple[Dict[str, np.ndarray], Dict[str, Any]]:
    path = Path(path)
    if path.suffix == ".npz":
        return read_npz(path)
    return read_csv(path)


def write_report(path: Path, sections: Mapping[str, Mapping[str, Any]], header: Mapping[str, Any]) -> Path:
    """Structured text: '# key = value' provenance, then [section] blocks of key = value"""
    path = _ensure_parent(path)
    lines = [f"# {key} = {_format_value(value)}" for key, value in header.items()]
    for name, values in sections.items():
        lines.append("")
        lines.append(f"[{name}]")
        lines.extend(f"{key} = {_format_value(value)}" for key, value in values.items())
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as e:
        raise DataIOError(f"Cannot write {path}: {e}")
    storage_logger.debug(f"Wrote report {path}")
    return path


def read_report(path: Path) -> Dict[str, Dict[str, Any]]:
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#",))
    parser.optionxform = str
    try:
        with path.open("r", encoding="utf-8") as handle:
            parser.read_file(handle)
    except (OSError, configparser.Error) as e:
        raise DataIOError(f"Cannot read report {path}: {e}")
    return {name: {k: _parse_value(v) for k, v in parser[name].items()} for name in parser.sections()}
