""" Helpers without an obvious logical home. """

import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from logging import getLogger
from typing import Any, Callable, Iterable, List
from urllib.request import urlopen

import numpy as np
import yaml
from rich.console import Console
from rich.progress import track
from ubiquerg import expandpath, is_url

from .const import PKG_NAME, THREADS_ENV_VAR
from .exceptions import DomainFileError, InvalidInputError

_LOGGER = getLogger(PKG_NAME)


def read_text(filepath):
    """
    Read a local or remote text file

    :param str filepath: path or URL of the file to read
    :raises DomainFileError: if the file cannot be read
    :return str: file contents
    """
    if is_url(filepath):
        _LOGGER.debug(f"Got URL: {filepath}")
        try:
            response = urlopen(filepath)
        except Exception as e:
            raise DomainFileError(
                filepath,
                reason=f"could not load remote file "
                f"({getattr(e, 'message', repr(e))})",
            )
        return response.read().decode("utf-8")
    path = os.path.abspath(expandpath(filepath))
    if not os.path.exists(path):
        raise DomainFileError(filepath, reason="path does not exist")
    with open(path, "r") as f:
        return f.read()


def load_yaml(filepath):
    """
    Load a local or remote YAML (or JSON) file into a Python dict

    :param str filepath: path or URL of the file to read
    :raises DomainFileError: if the file cannot be read or parsed
    :return dict: read data
    """
    try:
        return yaml.safe_load(read_text(filepath))
    except yaml.YAMLError as e:
        raise DomainFileError(filepath, reason=f"invalid YAML ({e})")


def thread_count():
    """
    Number of worker threads for parallel sweeps.

    :return int: value of the thread-cap environment variable, else CPU count
    """
    cap = os.environ.get(THREADS_ENV_VAR)
    if cap is None:
        return os.cpu_count() or 1
    try:
        n = int(cap)
    except ValueError:
        raise InvalidInputError(f"{THREADS_ENV_VAR} must be an integer, got '{cap}'")
    return max(1, n)


def ordered_map(
    func: Callable,
    items: Iterable,
    threads: int = None,
    description: str = "Working",
    progressbar: bool = False,
) -> List[Any]:
    """
    Apply a function to items in parallel, preserving input order.

    :param callable func: function of one argument
    :param Iterable items: arguments
    :param int threads: worker cap; defaults to thread_count()
    :param str description: progress bar label
    :param bool progressbar: show a progress bar on stderr
    :return list: results in the order of items
    """
    items = list(items)
    threads = threads or thread_count()

    def _progress(results):
        return list(
            track(
                results,
                total=len(items),
                description=description,
                disable=not progressbar,
                console=Console(file=sys.stderr),
            )
        )

    if threads == 1 or len(items) < 2:
        return _progress(func(i) for i in items)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return _progress(pool.map(func, items))


def to_serializable(obj):
    """
    Convert numpy and complex values into JSON-native objects, recursively.

    :param object obj: value to convert
    :return object: JSON-serializable representation
    """
    if isinstance(obj, dict):
        return {str(k): to_serializable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_serializable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_serializable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        obj = float(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    return obj


def dump_json(data, path=None):
    """
    Render data as deterministic JSON (sorted keys, round-trip float repr).

    :param object data: data to render
    :param str path: file to write; if omitted only the text is returned
    :return str: JSON text
    """
    text = json.dumps(to_serializable(data), sort_keys=True, indent=2)
    if path is not None:
        with open(path, "w") as f:
            f.write(text + "\n")
        _LOGGER.debug(f"Wrote JSON: {path}")
    return text
