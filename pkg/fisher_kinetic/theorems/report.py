# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)


@dataclass
class GapRecord:
    """
    One asserted gap. A non-strict gap passes when value >= -tolerance * (1 + |scale|),
    a strict gap when value > 0.
    """
    name: str
    value: float
    tolerance: float
    scale: float = 0.0
    strict: bool = False

    @property
    def passed(self):
        if not np.isfinite(self.value):
            return False
        if self.strict:
            return self.value > 0.0
        return self.value >= -self.tolerance * (1.0 + abs(self.scale))

    def to_json(self):
        return {'name': self.name, 'value': float(self.value), 'tolerance': self.tolerance,
                'scale': float(self.scale), 'strict': self.strict, 'passed': self.passed}


@dataclass
class TrialRecord:
    index: int
    seed: int
    digest: str
    kind: str
    gaps: List[GapRecord] = field(default_factory=list)
    extras: dict = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def passed(self):
        return self.error is None and all(g.passed for g in self.gaps)

    @property
    def min_gap(self):
        return min((g.value for g in self.gaps), default=None)

    def to_json(self):
        return {'index': self.index, 'seed': self.seed, 'digest': self.digest, 'kind': self.kind,
                'passed': self.passed, 'gaps': [g.to_json() for g in self.gaps],
                'extras': self.extras, 'error': self.error}


@dataclass
class SuiteReport:
    """
    Outcome of one suite run: pass <=> every trial passes (no error, every gap passes)
    """
    suite: str
    records: List[TrialRecord]
    tolerance: float
    config: dict = field(default_factory=dict)
    runtime: float = 0.0

    @property
    def trial_count(self):
        return len(self.records)

    def _gap_values(self):
        return np.array([g.value for r in self.records for g in r.gaps], dtype=np.float64)

    @property
    def min_gap(self):
        values = self._gap_values()
        return float(values.min()) if values.size else None

    @property
    def max_gap(self):
        values = self._gap_values()
        return float(values.max()) if values.size else None

    @property
    def mean_gap(self):
        values = self._gap_values()
        return float(values.mean()) if values.size else None

    @property
    def passed(self):
        return all(r.passed for r in self.records)

    def to_json(self, include_runtime: bool = True):
        out = {
            'suite': self.suite,
            'trials': self.trial_count,
            'tolerance': self.tolerance,
            'passed': self.passed,
            'min_gap': self.min_gap,
            'max_gap': self.max_gap,
            'mean_gap': self.mean_gap,
            'config': self.config,
            'records': [r.to_json() for r in self.records],
        }
        if include_runtime:
            out['runtime'] = self.runtime
        return out

    def digest(self):
        payload = json.dumps(self.to_json(include_runtime=False), sort_keys=True, default=str)
        return hashlib.sha256(payload.encode()).hexdigest()

    def to_frame(self):
        """One line per trial: identification, pass flag, min gap and one column per named gap."""
        rows = []
        for r in self.records:
            row = {'trial': r.index, 'seed': r.seed, 'digest': r.digest, 'kind': r.kind,
                   'passed': r.passed, 'min_gap': r.min_gap, 'error': r.error}
            row.update({'gap_' + g.name: g.value for g in r.gaps})
            rows.append(row)
        columns = ['trial', 'seed', 'digest', 'kind', 'passed', 'min_gap', 'error']
        frame = pd.DataFrame(rows)
        if frame.empty:
            return pd.DataFrame(columns=columns)
        return frame

    def write(self, directory):
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        json_path = directory / '{}.json'.format(self.suite)
        csv_path = directory / '{}.csv'.format(self.suite)
        json_path.write_text(json.dumps(self.to_json(), indent=2, default=str))
        self.to_frame().to_csv(csv_path, index=False)
        logger.info("write(): %s report written to %s", self.suite, directory)
        return json_path, csv_path

    def summary(self):
        return {'passed': self.passed, 'trials': self.trial_count, 'min_gap': self.min_gap,
                'runtime': self.runtime}
