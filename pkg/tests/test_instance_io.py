import csv
import json

import numpy as np
import pytest

from processors.errors import DimensionMismatch, InstanceParseError, InstanceValidationError
from processors.instance_io import (
    GENERATOR_NAME,
    InstanceFile,
    RunReport,
    gen_product,
    gen_random,
    instance_from_dict,
    load_instance,
    save_instance,
    save_report,
    write_plot_csv,
)


def write_json(path, data):
    path.write_text(json.dumps(data), encoding='utf-8')
    return path


def read_report(path):
    return json.loads(path.read_text(encoding='utf-8'))


class TestLoadInstance:
    def test_round_trip(self, tmp_path):
        instance = gen_random(3, 4, seed=5)
        loaded = load_instance(save_instance(instance, tmp_path / 'inst.json'))
        np.testing.assert_allclose(loaded.joint().p, instance.joint().p, atol=1e-12)
        assert loaded.name == instance.name
        assert loaded.seed == 5

    def test_optional_fields(self, tmp_path):
        path = write_json(tmp_path / 'a.json', {
            'x_labels': ['a', 'b'], 'y_labels': ['u', 'v', 'w'],
            'pxy': [[0.2, 0.1, 0.2], [0.1, 0.2, 0.2]],
            'phi_y': [0, 1, 1], 'l_size': 2, 'm_size': 2,
        })
        instance = load_instance(path)
        assert instance.encoder().map == (0, 1, 1)
        assert instance.joint().x_labels == ('a', 'b')

    def test_malformed_json_has_line(self, tmp_path):
        path = tmp_path / 'bad.json'
        path.write_text('{"pxy": [[0.5, 0.5]\n', encoding='utf-8')
        with pytest.raises(InstanceParseError) as excinfo:
            load_instance(path)
        assert excinfo.value.line is not None

    def test_missing_file(self, tmp_path):
        with pytest.raises(InstanceParseError):
            load_instance(tmp_path / 'missing.json')

    def test_missing_pxy(self):
        with pytest.raises(InstanceParseError):
            instance_from_dict({'x_labels': ['a']})

    def test_negative_entry_locus(self):
        with pytest.raises(InstanceValidationError) as excinfo:
            instance_from_dict({'pxy': [[0.6, 0.5], [-0.1, 0.0]]})
        assert (excinfo.value.row, excinfo.value.column) == (1, 0)

    def test_non_numeric_entry(self):
        with pytest.raises(InstanceValidationError) as excinfo:
            instance_from_dict({'pxy': [[0.5, 'x']]})
        assert excinfo.value.column == 1

    def test_not_normalized(self):
        with pytest.raises(InstanceValidationError):
            instance_from_dict({'pxy': [[0.5, 0.4]]})

    def test_ragged_rows(self):
        with pytest.raises(InstanceValidationError) as excinfo:
            instance_from_dict({'pxy': [[0.5, 0.25], [0.25]]})
        assert excinfo.value.row == 1

    def test_phi_y_label_beyond_l_size(self):
        with pytest.raises(InstanceValidationError):
            instance_from_dict({'pxy': [[0.5, 0.5]], 'phi_y': [0, 2], 'l_size': 2})

    def test_phi_y_wrong_length(self):
        with pytest.raises(InstanceValidationError):
            instance_from_dict({'pxy': [[0.5, 0.5]], 'phi_y': [0]})

    @pytest.mark.parametrize('field, value', [
        ('phi_y', 3),
        ('phi_y', {'0': 1}),
        ('x_labels', 5),
        ('y_labels', 'uv'),
    ])
    def test_non_list_fields(self, field, value):
        with pytest.raises(InstanceParseError):
            instance_from_dict({'pxy': [[0.5, 0.5]], field: value})

    @pytest.mark.parametrize('extra', [
        {'l_size': True},
        {'m_size': False},
        {'m_size': 2.0},
        {'phi_y': [0, True]},
    ])
    def test_bools_are_not_sizes_or_labels(self, extra):
        with pytest.raises(InstanceValidationError):
            instance_from_dict({'pxy': [[0.5, 0.5]], **extra})

    def test_label_count_mismatch(self):
        with pytest.raises(InstanceValidationError):
            instance_from_dict({'pxy': [[0.5, 0.5]], 'x_labels': ['a', 'b']})


class TestGenerators:
    def test_deterministic(self):
        assert gen_random(2, 2, 1.0, seed=7) == gen_random(2, 2, 1.0, seed=7)
        assert gen_random(2, 2, 1.0, seed=7) != gen_random(2, 2, 1.0, seed=8)

    def test_high_concentration_is_near_uniform(self):
        table = np.asarray(gen_random(3, 3, 1e6, seed=1).pxy)
        np.testing.assert_allclose(table, 1 / 9, atol=1e-3)

    def test_product_form(self):
        p = np.asarray(gen_product(3, 4, seed=2).pxy)
        np.testing.assert_allclose(p, np.outer(p.sum(axis=1), p.sum(axis=0)), atol=1e-12)

    def test_bad_sizes(self):
        with pytest.raises(DimensionMismatch):
            gen_random(0, 2)
        with pytest.raises(ValueError):
            gen_random(2, 2, concentration=0.0)


class TestReports:
    def test_report_json_fields(self, tmp_path):
        report = RunReport(command='verify', tool_version='1.0.0', seed=3)
        report.verification = {'thm1': {'checked': 10, 'violations': 0}}
        data = read_report(save_report(report, tmp_path / 'r.json'))
        assert data['generator'] == GENERATOR_NAME
        assert data['verification']['thm1']['checked'] == 10
        assert report.violations == 0

    def test_reports_identical_apart_from_wall_time(self, tmp_path):
        a = RunReport(command='bound', mi_bits={'phi_y': 0.25}, wall_time_seconds=1.0)
        b = RunReport(command='bound', mi_bits={'phi_y': 0.25}, wall_time_seconds=2.0)
        da = read_report(save_report(a, tmp_path / 'a.json'))
        db = read_report(save_report(b, tmp_path / 'b.json'))
        da.pop('wall_time_seconds')
        db.pop('wall_time_seconds')
        assert da == db

    def test_plot_csv_leaves_missing_values_empty(self, tmp_path):
        path = write_plot_csv([
            {'nu': 0.5, 'thm1_bound': 1.2, 'cor_bound': None, 'exact_pc': 0.8, 'p_max': 0.5},
        ], tmp_path / 'plot.csv')
        with open(path, newline='', encoding='utf-8') as f:
            rows = list(csv.reader(f))
        assert rows[0] == ['nu', 'thm1_bound', 'cor_bound', 'exact_pc', 'p_max']
        assert rows[1][2] == ''
        assert float(rows[1][1]) == 1.2

    def test_instance_to_dict_drops_none(self):
        instance = InstanceFile(x_labels=['a'], y_labels=['u'], pxy=[[1.0]])
        assert set(instance.to_dict()) == {'x_labels', 'y_labels', 'pxy'}
