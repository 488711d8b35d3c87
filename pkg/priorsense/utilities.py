"""Miscellaneous tools shared by the recovery, geometry and experiment modules.

"""
import csv
import io
import os
from numbers import Number
from typing import Iterable, Sequence, Union

import numpy as np

SeedLike = Union[None, int, Sequence[int], np.random.SeedSequence, np.random.Generator]


def make_rng(seed: SeedLike = None) -> np.random.Generator:
    """Returns a :class:`numpy.random.Generator` for `seed`.

    Parameters
    ----------
    seed : int, sequence of int, SeedSequence or Generator, optional
        Seed material.  A Generator is returned unchanged so callers can thread
        one stream through several samplers, by default None

    Returns
    -------
    numpy.random.Generator
        Random generator

    """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def trial_stream(master_seed: int, *keys: int) -> np.random.SeedSequence:
    """Returns the independent stream keyed by `master_seed` and `keys`.

    The stream only depends on the key values, never on the order in which
    trials are scheduled, so results are identical for any degree of
    parallelism.

    Parameters
    ----------
    master_seed : int
        Experiment master seed
    *keys : int
        Cell and trial identifiers (e.g. level, measurement count, trial index)

    Returns
    -------
    numpy.random.SeedSequence
        Seed sequence for the trial

    """
    entropy = [int(master_seed)] + [int(k) for k in keys]
    if any(v < 0 for v in entropy):
        raise ValueError(f'Seed keys must be non-negative, got {entropy}!')
    return np.random.SeedSequence(entropy)


def relative_error(x_hat, x_star) -> float:
    """Returns ||x_hat - x_star|| / ||x_star|| (Frobenius norm for matrices).

    Raises
    ------
    ValueError
        Raised if `x_star` is zero

    """
    x_hat = np.asarray(x_hat, dtype=float)
    x_star = np.asarray(x_star, dtype=float)
    if x_hat.shape != x_star.shape:
        raise ValueError(f'Shape mismatch: {x_hat.shape} vs {x_star.shape}!')
    ref = np.linalg.norm(x_star)
    if ref == 0:
        raise ValueError('The reference signal is zero; relative error is undefined!')
    return float(np.linalg.norm(x_hat - x_star) / ref)


def num_to_str(num: Number, places: int, allow_less=False) -> str:
    """Converts a number to a string with a given number of decimal places.

    Parameters
    ----------
    num : Number
        Number to be converted.  None and NaN give an empty string.
    places : int
        Number of decimal places to use
    allow_less : bool, optional
        If True, trailing zeros after the decimal point are dropped (so 1.2500
        prints as 1.25, the way the bound tables are written), by default False

    Returns
    -------
    str
        Formatted number

    """
    if num is None or (isinstance(num, float) and np.isnan(num)):
        return ''

    string = f'{num:.{places}f}'

    if allow_less and '.' in string:
        string = string.rstrip('0').rstrip('.')
        if string in ('-0', ''):
            string = '0'

    return string


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence], filename: Union[os.PathLike, str, None] = None) -> str:
    """Writes `rows` under `header` as CSV with '\\n' line endings.

    Parameters
    ----------
    header : list of str
        Column names
    rows : iterable of sequences
        Row values (already formatted or plain numbers)
    filename : path, optional
        If given, the text is also written to this file, by default None

    Returns
    -------
    str
        The CSV text

    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    text = buffer.getvalue()

    if filename is not None:
        with open(filename, 'w', newline='') as outfile:
            outfile.write(text)

    return text
