"""Flat binary array files with sidecar shape descriptors.

``<name>.f32`` holds raw little-endian float32 in row-major order and
``<name>.u8`` raw bytes; the sidecar ``<name>.shape`` lists comma-separated
dimensions. The format is deliberately trivial so any language can read it
and round-trips are bit-exact.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import SchemaMismatch


def _shape_path(path: Path) -> Path:
    return path.with_suffix(".shape")


def _write_shape(path: Path, shape: tuple[int, ...]) -> None:
    _shape_path(path).write_text(",".join(str(d) for d in shape) + "\n")


def _read_shape(path: Path) -> tuple[int, ...]:
    text = _shape_path(path).read_text().strip()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise SchemaMismatch(f"bad shape descriptor {_shape_path(path)}: {text!r}") from exc


def write_f32(path: Path, arr: np.ndarray) -> None:
    data = np.ascontiguousarray(arr, dtype="<f4")
    path.write_bytes(data.tobytes())
    _write_shape(path, data.shape)


def read_f32(path: Path) -> np.ndarray:
    shape = _read_shape(path)
    raw = path.read_bytes()
    expected = int(np.prod(shape)) * 4
    if len(raw) != expected:
        raise SchemaMismatch(f"{path}: {len(raw)} bytes but shape {shape} needs {expected}")
    return np.frombuffer(raw, dtype="<f4").reshape(shape).copy()


def write_u8(path: Path, arr: np.ndarray) -> None:
    data = np.ascontiguousarray(arr, dtype=np.uint8)
    path.write_bytes(data.tobytes())
    _write_shape(path, data.shape)


def read_u8(path: Path) -> np.ndarray:
    shape = _read_shape(path)
    raw = path.read_bytes()
    expected = int(np.prod(shape))
    if len(raw) != expected:
        raise SchemaMismatch(f"{path}: {len(raw)} bytes but shape {shape} needs {expected}")
    return np.frombuffer(raw, dtype=np.uint8).reshape(shape).copy()
