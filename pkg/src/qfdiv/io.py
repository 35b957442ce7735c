"""JSON formats for matrices, channels and reports.

Matrix:   {"dims": [r, c], "entries": [[re, im], ...]}   (row-major)
Channel:  {"d_in": m, "d_out": n, "kraus": [matrix, ...]} or {..., "choi": matrix}
"""
import json
import os
import tempfile

import numpy as np

from .channels import Channel
from .errors import InputFormatError
from .xreal import to_json


def matrix_to_json(A):
    A = np.asarray(A, dtype=complex)
    return {"dims": [int(A.shape[0]), int(A.shape[1])],
            "entries": [[float(z.real), float(z.imag)] for z in A.ravel()]}


def matrix_from_json(obj, where="matrix"):
    if not isinstance(obj, dict):
        raise InputFormatError(f"{where}: expected an object with 'dims' and 'entries'")
    for key in ("dims", "entries"):
        if key not in obj:
            raise InputFormatError(f"{where}: missing field '{key}'")
    dims = obj["dims"]
    if not (isinstance(dims, list) and len(dims) == 2 and all(isinstance(d, int) and d >= 1 for d in dims)):
        raise InputFormatError(f"{where}.dims: expected [rows, cols] with positive integers")
    entries = obj["entries"]
    if not isinstance(entries, list) or len(entries) != dims[0] * dims[1]:
        raise InputFormatError(f"{where}.entries: expected {dims[0] * dims[1]} entries")
    vals = []
    for k, e in enumerate(entries):
        if isinstance(e, (int, float)) and not isinstance(e, bool):
            vals.append(complex(e))
            continue
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, (int, float)) for x in e)):
            raise InputFormatError(f"{where}.entries[{k}]: expected [re, im]")
        vals.append(complex(e[0], e[1]))
    return np.array(vals, dtype=complex).reshape(dims)


def channel_to_json(phi):
    d = {"d_in": phi.d_in, "d_out": phi.d_out}
    if phi.kraus is not None:
        d["kraus"] = [matrix_to_json(K) for K in phi.kraus]
    else:
        d["choi"] = matrix_to_json(phi.choi)
    return d


def channel_from_json(obj, where="channel"):
    if not isinstance(obj, dict):
        raise InputFormatError(f"{where}: expected an object")
    for key in ("d_in", "d_out"):
        if not isinstance(obj.get(key), int):
            raise InputFormatError(f"{where}.{key}: expected an integer")
    if "kraus" in obj:
        if not isinstance(obj["kraus"], list) or not obj["kraus"]:
            raise InputFormatError(f"{where}.kraus: expected a nonempty list")
        ks = [matrix_from_json(K, f"{where}.kraus[{i}]") for i, K in enumerate(obj["kraus"])]
        return Channel(obj["d_in"], obj["d_out"], kraus=ks)
    if "choi" in obj:
        return Channel(obj["d_in"], obj["d_out"], choi=matrix_from_json(obj["choi"], f"{where}.choi"))
    raise InputFormatError(f"{where}: needs 'kraus' or 'choi'")


def read_json(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputFormatError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def load_matrix(path):
    return matrix_from_json(read_json(path), str(path))


def load_channel(path):
    return channel_from_json(read_json(path), str(path))


def save_json(obj, path):
    write_atomic(path, dumps(obj))


def clean(obj):
    """Make a report JSON-safe: numpy scalars to floats, infinities to strings."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return to_json(float(obj))
    if isinstance(obj, np.ndarray):
        return matrix_to_json(obj) if obj.ndim == 2 else clean(obj.tolist())
    return obj


def dumps(obj):
    return json.dumps(clean(obj), indent=2, sort_keys=True) + "\n"


def write_atomic(path, data, mode="w"):
    """Write to a temporary file in the same directory, then rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
