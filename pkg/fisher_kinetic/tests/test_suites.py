import json

import pytest
from gym.envs.registration import load as gym_load

import fisher_kinetic
from fisher_kinetic import registration
from fisher_kinetic.errors import FisherKineticError, UnknownSuiteError
from fisher_kinetic.theorems import TheoremSuite, run_suite
from fisher_kinetic.theorems.report import GapRecord, SuiteReport, TrialRecord

SUITE_IDS = ['superadd', 'monotone', 'affinity', 'diamagnetic', 'convexity', 'split', 'hoffmann', 'monomial',
             'bbm', 'method-agreement']

# small runs that still reach every trial kind of each suite
QUICK_CONFIG = {
    'superadd': {'trials': 7},
    'monotone': {'trials': 8},
    'affinity': {'trials': 3, 'n_max': 4},
    'diamagnetic': {'trials': 8},
    'convexity': {'trials': 10},
    'split': {'trials': 4},
    'hoffmann': {'trials': 4},
    'monomial': {'trials': 4},
    'bbm': {'trials': 2},
    'method-agreement': {'trials': 2},
}


def test_every_suite_is_registered():
    assert fisher_kinetic.get_suite_ids() == SUITE_IDS


def test_unknown_suite():
    with pytest.raises(UnknownSuiteError):
        registration.make('nope')


def test_ids_cannot_be_registered_twice():
    with pytest.raises(FisherKineticError):
        registration.register('split', entry_point='fisher_kinetic.theorems.suites:SplitSuite')


def test_entry_points_resolve_through_gym():
    assert registration.load is gym_load
    assert registration.load('fisher_kinetic.theorems.suites:SplitSuite') is type(registration.make('split'))


def test_make_applies_defaults_and_overrides():
    suite = registration.make('superadd', trials=3)
    assert suite.name == 'superadd'
    assert suite._trials == 3
    assert suite._symbol == 'lattice'


@pytest.mark.parametrize("name", SUITE_IDS)
def test_quick_run_passes(name):
    report = run_suite(name, **QUICK_CONFIG[name])
    failures = [r.to_json() for r in report.records if not r.passed]
    assert report.passed, failures
    assert report.suite == name
    assert report.trial_count >= QUICK_CONFIG[name]['trials']


@pytest.mark.parametrize("name", SUITE_IDS)
def test_zero_trials_is_an_empty_pass(name, tmp_path):
    report = run_suite(name, trials=0)
    assert report.passed
    assert report.trial_count == 0
    assert report.min_gap is None
    json_path, csv_path = report.write(tmp_path)
    assert json.loads(json_path.read_text())['trials'] == 0
    assert csv_path.read_text().startswith('trial,seed,digest,kind,passed,min_gap,error')


def test_structured_superadditivity_trial():
    record = run_suite('superadd', trials=1).records[0]
    assert record.kind == 'structured'
    names = [g.name for g in record.gaps]
    assert names == ['superadditivity', 'structured_margin']
    assert record.passed


@pytest.mark.slow
def test_affinity_fixture_defect_shrinks():
    record = run_suite('affinity', trials=1, n_max=6).records[0]
    assert record.kind == 'fixture'
    assert 'defect_trend_2_6' in [g.name for g in record.gaps]
    defect = record.extras['defect']
    assert defect['6'] < defect['2']
    assert record.passed


def test_method_agreement_rejects_the_s_offset():
    report = run_suite('method-agreement', trials=1)
    ensemble = report.records[-1]
    assert ensemble.kind == 'ensemble'
    assert ensemble.gaps[0].name == 'offset_s_rejected'
    assert ensemble.extras['accepted_offset'] == '2s'
    assert report.passed


def test_reports_are_reproducible():
    first = run_suite('convexity', trials=10)
    second = run_suite('convexity', trials=10)
    assert first.digest() == second.digest()
    other = run_suite('convexity', trials=10, master_seed=1)
    assert [r.digest for r in other.records] != [r.digest for r in first.records]


def test_reports_do_not_depend_on_the_schedule():
    serial = run_suite('diamagnetic', trials=8)
    threaded = run_suite('diamagnetic', trials=8, workers=3)
    assert [r.seed for r in threaded.records] == [r.seed for r in serial.records]
    assert [r.digest for r in threaded.records] == [r.digest for r in serial.records]
    for a, b in zip(serial.records, threaded.records):
        assert [g.value for g in a.gaps] == pytest.approx([g.value for g in b.gaps], rel=1e-12, abs=1e-15)


class FailingSuite(TheoremSuite):
    name = 'failing'

    def sample(self, rng, index):
        return {'kind': 'broken', 'x': index}

    def evaluate(self, inputs):
        raise ValueError("no evaluation for {}".format(inputs['x']))


def test_trial_errors_are_recorded():
    report = FailingSuite(trials=2).run()
    assert not report.passed
    assert all(r.error is not None and 'ValueError' in r.error for r in report.records)
    assert [r.kind for r in report.records] == ['broken', 'broken']


def test_gap_record_semantics():
    assert GapRecord('g', -1e-10, tolerance=1e-9).passed
    assert not GapRecord('g', -1e-8, tolerance=1e-9).passed
    assert GapRecord('g', -1e-8, tolerance=1e-9, scale=100.0).passed
    assert not GapRecord('g', 0.0, tolerance=1e-9, strict=True).passed
    assert not GapRecord('g', float('nan'), tolerance=1e-9).passed


def test_suite_report_statistics():
    records = [TrialRecord(0, 1, 'a', 'k', gaps=[GapRecord('x', 0.5, 1e-9), GapRecord('y', -0.5, 1e-9)]),
               TrialRecord(1, 2, 'b', 'k', gaps=[GapRecord('x', 1.5, 1e-9)])]
    report = SuiteReport('demo', records, tolerance=1e-9)
    assert report.min_gap == -0.5
    assert report.max_gap == 1.5
    assert report.mean_gap == pytest.approx(0.5)
    assert not report.passed
    frame = report.to_frame()
    assert list(frame['gap_x']) == [0.5, 1.5]
    assert report.summary()['trials'] == 2


@pytest.mark.slow
@pytest.mark.parametrize("name", SUITE_IDS)
def test_default_run_passes(name):
    report = run_suite(name)
    failures = [r.to_json() for r in report.records if not r.passed]
    assert report.passed, failures
