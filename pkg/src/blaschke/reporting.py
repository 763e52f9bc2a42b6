"""Deterministic CSV / key-value emission with provenance headers.

Every artifact starts with a ``# key: value`` comment block carrying the
resolved configuration, the package version and the kernel implementation,
followed by a plain CSV body.  Numbers are printed with 17 significant
digits; nothing time-dependent is written, so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import os

from . import __version__
from .kernels import COMPILED


def fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, complex):
        return f"{value.real:.17g}{value.imag:+.17g}j"
    return str(value)


def provenance(extra=None) -> dict:
    meta = {"version": __version__, "kernel": "compiled" if COMPILED else "python"}
    if extra:
        meta.update(extra)
    return meta


def flatten_config(obj, prefix="config"):
    """Depth-first flattening of a nested dict/list structure into sorted rows."""
    rows = []

    def walk(node, path):
        if isinstance(node, dict):
            for key in sorted(node):
                walk(node[key], f"{path}.{key}")
        elif isinstance(node, (list, tuple)):
            for idx, item in enumerate(node):
                walk(item, f"{path}[{idx}]")
        else:
            rows.append((path, fmt(node)))

    walk(obj, prefix)
    return rows


def write_csv(path, columns, rows, meta=None, config=None):
    """Write one artifact: header comment block, column line, data rows."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for key, val in sorted(provenance(meta).items()):
            fh.write(f"# {key}: {fmt(val)}\n")
        if config is not None:
            for key, val in flatten_config(config):
                fh.write(f"# {key}: {val}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def write_kv(path, pairs, meta=None, config=None):
    """Flat key-value report (one `key = value` line per entry)."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for key, val in sorted(provenance(meta).items()):
            fh.write(f"# {key}: {fmt(val)}\n")
        if config is not None:
            for key, val in flatten_config(config):
                fh.write(f"# {key}: {val}\n")
        for key, val in pairs:
            fh.write(f"{key} = {fmt(val)}\n")


def csv_body(path) -> bytes:
    """The file content after the header comment block (used by determinism checks)."""
    with open(path, "rb") as fh:
        lines = fh.readlines()
    return b"".join(line for line in lines if not line.startswith(b"#"))
