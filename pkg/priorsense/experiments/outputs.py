"""CSV and JSON sidecar output of experiment results.

"""
import json
import logging
import os
from pathlib import Path
from typing import List, Sequence, Union

import pandas as pd

import priorsense
from priorsense.experiments.studies import CSV_COLUMNS, PhaseMap, SuccessCurve

logger = logging.getLogger(__name__)

Result = Union[PhaseMap, SuccessCurve]


def _as_list(result) -> List[Result]:
    if isinstance(result, (PhaseMap, SuccessCurve)):
        return [result]
    return list(result)


def _cells(result: Result) -> list:
    levels = result.levels if isinstance(result, PhaseMap) else [result.level]
    return [{'axes': [level, m],
             'seeds': [[result.master_seed, level, m, trial] for trial in range(result.trials)]}
            for level in levels for m in result.measurements]


def write_outputs(result: Union[Result, Sequence[Result]], path: Union[str, os.PathLike]) -> List[Path]:
    """Writes `result` to a CSV file at `path` and a JSON sidecar next to it.

    The CSV has one row per grid cell and method (columns CSV_COLUMNS).  The
    sidecar holds the resolved configuration, the master seed, the seed keys
    of every cell and the package version.  Both files depend only on the
    results, so equal configurations give byte-identical files.

    Parameters
    ----------
    result : PhaseMap, SuccessCurve or list of them
        Results sharing one configuration
    path : path
        CSV file to write; the sidecar uses the same name with a .json suffix

    Returns
    -------
    list of Path
        The CSV and sidecar paths

    Raises
    ------
    OSError
        Raised if the files cannot be written

    """
    results = _as_list(result)
    csv_path = Path(path)
    sidecar_path = csv_path.with_suffix('.json')

    frames = [r.to_frame() for r in results]
    frame = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=CSV_COLUMNS)
    frame.to_csv(csv_path, index=False, float_format='%.6f')

    sidecar = {
        'config': results[0].config if results else {},
        'master_seed': results[0].master_seed if results else None,
        'cells': _cells(results[0]) if results else [],
        'methods': [r.method if isinstance(r, PhaseMap) else r.methods for r in results],
        'version': priorsense.__version__,
    }
    with open(sidecar_path, 'w') as outfile:
        json.dump(sidecar, outfile, indent=2, sort_keys=True)
        outfile.write('\n')

    logger.info('Wrote %s and %s', csv_path, sidecar_path)
    return [csv_path, sidecar_path]
