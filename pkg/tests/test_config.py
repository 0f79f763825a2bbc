import json

import pytest

from diversified_influence.config import (
    RunConfig,
    list_presets,
    load_config_custom,
    load_config_preset,
)
from diversified_influence.errors import ConfigError


def test_defaults_validate():
    cfg = RunConfig(network='graph.txt').validate()
    assert cfg.model == 'IC'
    assert cfg.resolved_final_trials() == 2 * cfg.trials


def test_network_is_required():
    with pytest.raises(ConfigError) as e:
        RunConfig().validate()
    assert e.value.field == 'network'
    assert e.value.exit_code == 2
    RunConfig().validate(require_network=False)


def test_from_config_layers_on_a_base():
    base = RunConfig.from_config({'network': 'g.txt', 'k': 5})
    cfg = RunConfig.from_config({'k': None, 'trials': 40, 'model': 'lt'}, base=base)
    assert cfg.k == 5
    assert cfg.trials == 40
    assert cfg.model == 'LT'
    assert cfg.network == 'g.txt'


@pytest.mark.parametrize('key, value', [
    ('k', 2.5),
    ('k', True),
    ('lazy', 'yes'),
    ('rho', 'half'),
    ('alpha', 'one'),
    ('alpha', [1, 'two']),
    ('family', 3),
])
def test_from_config_type_errors(key, value):
    with pytest.raises(ConfigError) as e:
        RunConfig.from_config({key: value})
    assert e.value.field == key


def test_unknown_field():
    with pytest.raises(ConfigError, match='unknown'):
        RunConfig.from_config({'budget': 3})


@pytest.mark.parametrize('changes, field', [
    (dict(model='SIR'), 'model'),
    (dict(task='ADIM', family='min'), 'family'),
    (dict(task='SDIM', family='ces'), 'family'),
    (dict(rho=0.0), 'rho'),
    (dict(rho=1.5), 'rho'),
    (dict(alpha=[1.0, -1.0]), 'alpha'),
    (dict(alpha=[1.0], num_communities=2), 'alpha'),
    (dict(beta=0.0), 'beta'),
    (dict(a=0.7, b=0.5), 'b'),
    (dict(k=-1), 'k'),
    (dict(task='SDIM', family='substitutes', k=1), 'k'),
    (dict(trials=0), 'trials'),
    (dict(final_trials=0), 'final_trials'),
    (dict(master_seed=-1), 'master_seed'),
    (dict(threads=0), 'threads'),
    (dict(task='SDIM', family='complements', algorithm='upper-greedy'), 'algorithm'),
    (dict(task='SDIM', family='complements', similarity='embedding'), 'embeddings'),
    (dict(share_weighting='weighted'), 'share_weighting'),
])
def test_validation_names_the_field(changes, field):
    cfg = RunConfig.from_config(dict(network='g.txt', **changes))
    with pytest.raises(ConfigError) as e:
        cfg.validate()
    assert e.value.field == field


@pytest.mark.parametrize('task, family, expected', [
    ('ADIM', 'ces', 'greedy'),
    ('ADIM', 'substitutes', 'greedy'),
    ('ADIM', 'complements', 'upper-greedy'),
    ('ADIM', 'cobb-douglas', 'upper-greedy'),
    ('SDIM', 'substitutes', 'random-greedy'),
    ('SDIM', 'cobb-douglas', 'random-greedy'),
])
def test_resolved_algorithm(task, family, expected):
    assert RunConfig(task=task, family=family).resolved_algorithm() == expected
    assert RunConfig(task=task, family=family, algorithm='im').resolved_algorithm() == 'im'


def test_resolved_beta():
    assert RunConfig().resolved_beta(200) == pytest.approx(10.0)
    assert RunConfig(beta=3.0).resolved_beta(200) == 3.0


def test_config_hash():
    cfg = RunConfig(network='g.txt', k=4)
    assert len(cfg.config_hash()) == 16
    assert cfg.config_hash() == RunConfig(network='g.txt', k=4).config_hash()
    assert cfg.config_hash() == RunConfig(network='g.txt', k=4, threads=8, output_dir='out').config_hash()
    assert cfg.config_hash() != RunConfig(network='g.txt', k=5).config_hash()
    assert cfg.config_hash() != RunConfig(network='g.txt', k=4, master_seed=1).config_hash()


def test_presets():
    names = list_presets()
    assert names == ['adim_cd', 'adim_ces', 'adim_pc', 'sdim_cd', 'sdim_pc', 'sdim_ps']
    for name in names:
        cfg = RunConfig.from_config(load_config_preset(name), base=RunConfig(network='g.txt'))
        cfg.validate()
    ces = RunConfig.from_config(load_config_preset('adim_ces'))
    assert ces.rho == 0.5
    assert ces.alpha_rule == 'uniform'
    assert RunConfig.from_config(load_config_preset('sdim_ps')).resolved_algorithm() == 'random-greedy'


def test_unknown_preset():
    with pytest.raises(ConfigError) as e:
        load_config_preset('adim_min')
    assert e.value.field == 'preset'


def test_custom_json_and_toml(tmp_path):
    json_fp = tmp_path / 'run.json'
    json_fp.write_text(json.dumps({'task': 'SDIM', 'family': 'complements', 'k': 3}))
    toml_fp = tmp_path / 'run.toml'
    toml_fp.write_text('task = "SDIM"\nfamily = "complements"\nk = 3\n')
    assert load_config_custom(json_fp) == load_config_custom(toml_fp)


@pytest.mark.parametrize('name, text', [
    ('run.yaml', 'k: 3\n'),
    ('broken.json', '{"k": '),
    ('broken.toml', 'k = = 3\n'),
    ('list.json', '[1, 2]'),
])
def test_custom_config_errors(tmp_path, name, text):
    fp = tmp_path / name
    fp.write_text(text)
    with pytest.raises(ConfigError):
        load_config_custom(fp)


def test_missing_custom_config(tmp_path):
    with pytest.raises(ConfigError, match='does not exist'):
        load_config_custom(tmp_path / 'absent.json')
