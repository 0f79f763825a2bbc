r"""
Command line front door.

Subcommands:

* ``select``: choose ``k`` seeds, write ``seeds.json``,
  ``diagnostics.json``, ``diagnostics.txt`` and ``id_map.tsv``
* ``evaluate``: diagnostics and every utility value for a given seed
  file, written to ``evaluate.json`` and ``evaluate.txt``
* ``simulate``: per-trial cascade sizes for a given seed file, written to
  ``simulate.csv``
* ``oracle``: exact spreads (and optionally the exhaustive optimum) on a
  tiny instance, written to ``oracle.json``
* ``compare``: the influence-maximization baseline against each utility
  family, written to ``compare.csv`` and ``compare.txt``

Settings are layered: built-in defaults, then ``--preset``, then the
flags, then a ``--config`` file (JSON or TOML). The environment variable
``DIVERSIFIED_INFLUENCE_THREADS`` supplies the default thread count.

Example::

    > diversified-influence select --network graph.txt --communities comms.txt \
        --preset adim_pc -k 10 -o results
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from ._constants import __version__
from .config import RunConfig, load_config_custom, load_config_preset, list_presets
from .config.run_config import (
    ADIM_FAMILIES,
    ALGORITHMS,
    ALPHA_RULES,
    MODELS,
    SHARE_WEIGHTINGS,
    SIMILARITIES,
    TASKS,
)
from .data_loader import load_seeds
from .errors import ConfigError, DiversifiedInfluenceError
from .optimize import SeedResult
from .pipeline import (
    compare_methods,
    diagnose,
    final_spread,
    load_dataset,
    run_algorithm,
    run_oracle,
    run_simulation,
    utility_values,
)
from .report_generator import KeyValueSection, ReportGenerator, SeedListSection, TableSection, TextBlockSection

logger = logging.getLogger(__name__)

THREADS_ENV = 'DIVERSIFIED_INFLUENCE_THREADS'
LOG_FORMAT = '%(asctime)s |%(levelname)s: %(message)s'
BETA_NOTE = "Cobb-Douglas seed diversity omits the constant factor beta**b from the objective."


def _add_run_flags(parser: argparse.ArgumentParser):
    """Flags mirroring ``RunConfig`` fields. Unset flags stay ``None``."""
    inputs = parser.add_argument_group('inputs')
    inputs.add_argument('--network', help="Edge list ('src dst [p] [b]' per line)")
    inputs.add_argument(
        '--undirected', dest='directed', action='store_const', const=False,
        help="Treat every edge as undirected")
    inputs.add_argument('--id-map', dest='id_map', help="Sidecar id-map for the edge list")
    inputs.add_argument('--communities', help="Community membership file")
    inputs.add_argument(
        '-C', '--num-communities', dest='num_communities', type=int,
        help="Number of communities (inferred from the file if omitted)")
    inputs.add_argument('--embeddings', help="Node embedding file")
    inputs.add_argument('--attributes', help="Node attribute file")

    model = parser.add_argument_group('model and utility')
    model.add_argument('--model', type=str.upper, choices=MODELS)
    model.add_argument('--task', type=str.upper, choices=TASKS)
    model.add_argument('--family', choices=ADIM_FAMILIES)
    model.add_argument('--rho', type=float, help="CES exponent in (0, 1]")
    model.add_argument('--alpha', type=float, nargs='+', help="Community weights")
    model.add_argument('--alpha-rule', dest='alpha_rule', choices=ALPHA_RULES)
    model.add_argument('--beta', type=float, help="Diversity weight (default 0.05 |V|)")
    model.add_argument('--beta-fraction', dest='beta_fraction', type=float)
    model.add_argument('-a', type=float, help="Cobb-Douglas exponent of the spread")
    model.add_argument('-b', type=float, help="Cobb-Douglas exponent of the diversity")
    model.add_argument('--similarity', choices=SIMILARITIES)

    run = parser.add_argument_group('run')
    run.add_argument('-k', type=int, help="Seed budget")
    run.add_argument('-M', '--trials', type=int, help="Monte-Carlo cascades per evaluation")
    run.add_argument('--final-trials', dest='final_trials', type=int)
    run.add_argument('--master-seed', dest='master_seed', type=int)
    run.add_argument('--algorithm', choices=ALGORITHMS)
    run.add_argument('--lazy', action='store_const', const=True)
    run.add_argument('--coupled', action='store_const', const=True)
    run.add_argument('--share-weighting', dest='share_weighting', choices=SHARE_WEIGHTINGS)
    run.add_argument('--coverage-attributes', dest='coverage_attributes', nargs='+')
    run.add_argument('--threads', type=int, help=f"Worker threads (default: ${THREADS_ENV})")
    run.add_argument('-o', '--output-dir', dest='output_dir', help="Directory for output files")

    layers = parser.add_argument_group('configuration files')
    layers.add_argument('--preset', help=f"One of {list_presets()}")
    layers.add_argument('--config', help="A .json or .toml file; overrides the flags")
    parser.add_argument(
        '-v', '--verbose', action='count', default=0,
        help="-v for progress, -vv for every selection step")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diversified-influence",
        description="Audience- and seed-diversified influence maximization",
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest='command', required=True)

    select = commands.add_parser('select', help="Select k seeds")
    _add_run_flags(select)

    for name, help_text in (
            ('evaluate', "Diagnose a seed set and report every utility"),
            ('simulate', "Write per-trial cascade sizes for a seed set")):
        sub = commands.add_parser(name, help=help_text)
        _add_run_flags(sub)
        sub.add_argument('--seeds', help="Seed file (labels, or seeds.json)")

    oracle = commands.add_parser('oracle', help="Exact results on a tiny instance")
    _add_run_flags(oracle)
    oracle.add_argument('--seeds', help="Seed file (labels, or seeds.json)")
    oracle.add_argument(
        '--exhaustive', action='store_true',
        help="Also find the optimal k-set of the configured utility")

    compare = commands.add_parser('compare', help="Compare the utility families to plain IM")
    _add_run_flags(compare)
    return parser


def _env_threads():
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == '':
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigError('threads', f"${THREADS_ENV} = {raw!r} is not an integer") from None


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """
    Layer the settings: defaults, environment, preset, flags, config file.
    """
    cfg = RunConfig.from_config({'threads': _env_threads()})
    if args.preset:
        cfg = RunConfig.from_config(load_config_preset(args.preset), base=cfg)
    flags = {
        name: getattr(args, name) for name in RunConfig.field_names()
        if hasattr(args, name)
    }
    cfg = RunConfig.from_config(flags, base=cfg)
    if args.config:
        cfg = RunConfig.from_config(load_config_custom(args.config), base=cfg)
    return cfg.validate()


def _reproducibility(cfg: RunConfig, command: str) -> dict:
    return {
        'command': command,
        'config_hash': cfg.config_hash(),
        'master_seed': cfg.master_seed,
        'trials': cfg.trials,
        'final_trials': cfg.resolved_final_trials(),
    }


def _write_json(fp: Path, data: dict) -> None:
    with open(fp, 'w', newline='\n') as file:
        file.write(json.dumps(data, indent=2) + '\n')


def _header_section(cfg: RunConfig, command: str) -> TextBlockSection:
    items = [f"{key}: {value}" for key, value in _reproducibility(cfg, command).items()]
    return TextBlockSection('\n'.join(items), header=f"diversified-influence {command}")


def _labels(dataset, nodes) -> list:
    return [dataset.network.id_map.label_of(n) for n in nodes]


def seed_result_dict(cfg: RunConfig, dataset, result: SeedResult) -> dict:
    data = _reproducibility(cfg, 'select')
    data.update({
        'task': cfg.task,
        'family': cfg.family,
        'model': cfg.model,
        'algorithm': result.algorithm,
        'k': cfg.k,
        'seeds': _labels(dataset, result.seeds),
        'objective': result.objective,
        'objective_se': result.diagnostics.get('objective_se'),
        'final_objective': result.diagnostics.get('final_objective'),
        'final_objective_se': result.diagnostics.get('final_objective_se'),
        'ratio_bound': result.ratio_bound,
        'candidate_log': [
            {
                'node': None if step.node is None else dataset.network.id_map.label_of(step.node),
                'gain': step.gain,
                'note': step.note,
            }
            for step in result.candidate_log
        ],
    })
    if 'candidates' in result.diagnostics:
        data['upper_greedy_candidates'] = [
            dict(candidate, seeds=_labels(dataset, candidate['seeds']))
            for candidate in result.diagnostics['candidates']
        ]
    if cfg.task == 'SDIM' and cfg.family == 'cobb-douglas':
        data['note'] = BETA_NOTE
    return data


def cmd_select(cfg: RunConfig) -> int:
    out = Path(cfg.output_dir)
    os.makedirs(out, exist_ok=True)
    dataset = load_dataset(cfg)
    result = run_algorithm(cfg, dataset)
    report = diagnose(cfg, dataset, result.seeds)

    seeds_data = seed_result_dict(cfg, dataset, result)
    _write_json(out / 'seeds.json', seeds_data)
    with open(out / 'diagnostics.json', 'w', newline='\n') as file:
        file.write(report.to_json(**_reproducibility(cfg, 'select')))
    dataset.network.id_map.write(out / 'id_map.tsv')

    summary = [
        ('Algorithm', result.algorithm),
        ('Objective', result.objective),
        ('Final objective', seeds_data['final_objective']),
        ('Ratio bound', result.ratio_bound),
    ]
    sections = [
        _header_section(cfg, 'select'),
        KeyValueSection(summary, header='SELECTION'),
        SeedListSection(
            seeds_data['seeds'], gains=[step.gain for step in result.candidate_log
                                        if step.node is not None],
            subheader='Selection order'),
    ]
    if 'note' in seeds_data:
        sections.append(TextBlockSection(seeds_data['note']))
    sections += report.report_sections()
    text = ReportGenerator(sections).write_report_to_file(out / 'diagnostics.txt', mode='w')
    print(text, end='')
    return 0


def cmd_evaluate(cfg: RunConfig, seeds_fp) -> int:
    out = Path(cfg.output_dir)
    os.makedirs(out, exist_ok=True)
    dataset = load_dataset(cfg)
    seeds = load_seeds(seeds_fp, dataset.network.id_map)
    spread = final_spread(cfg, dataset, seeds)
    utilities = utility_values(cfg, dataset, seeds, spread=spread)
    report = diagnose(cfg, dataset, seeds, utilities=utilities, spread=spread)
    with open(out / 'evaluate.json', 'w', newline='\n') as file:
        file.write(report.to_json(**_reproducibility(cfg, 'evaluate')))
    sections = [_header_section(cfg, 'evaluate')] + report.report_sections()
    text = ReportGenerator(sections).write_report_to_file(out / 'evaluate.txt', mode='w')
    print(text, end='')
    return 0


def cmd_simulate(cfg: RunConfig, seeds_fp) -> int:
    out = Path(cfg.output_dir)
    os.makedirs(out, exist_ok=True)
    dataset = load_dataset(cfg)
    seeds = load_seeds(seeds_fp, dataset.network.id_map)
    df = run_simulation(cfg, dataset, seeds)
    fp = out / 'simulate.csv'
    with open(fp, 'w', newline='\n') as file:
        for key, value in _reproducibility(cfg, 'simulate').items():
            file.write(f"# {key}: {value}\n")
        df.to_csv(file, index=False, lineterminator='\n')
    print(f"{len(df)} trials, mean cascade size {df['size'].mean()!r}. Written to {fp}")
    return 0


def cmd_oracle(cfg: RunConfig, seeds_fp=None, exhaustive: bool = False) -> int:
    out = Path(cfg.output_dir)
    os.makedirs(out, exist_ok=True)
    dataset = load_dataset(cfg)
    seeds = None if seeds_fp is None else load_seeds(seeds_fp, dataset.network.id_map)
    data = _reproducibility(cfg, 'oracle')
    data.update(run_oracle(cfg, dataset, seeds, exhaustive=exhaustive))
    _write_json(out / 'oracle.json', data)
    print(json.dumps(data, indent=2))
    return 0


def cmd_compare(cfg: RunConfig) -> int:
    out = Path(cfg.output_dir)
    os.makedirs(out, exist_ok=True)
    dataset = load_dataset(cfg)
    results, reports, table = compare_methods(cfg, dataset)
    table.insert(1, 'seeds', [' '.join(reports[name].seeds) for name in table['method']])
    fp = out / 'compare.csv'
    with open(fp, 'w', newline='\n') as file:
        for key, value in _reproducibility(cfg, 'compare').items():
            file.write(f"# {key}: {value}\n")
        table.to_csv(file, index=False, lineterminator='\n')
    sections = [
        _header_section(cfg, 'compare'),
        TableSection(table.drop(columns=['seeds']), header='COMPARISON (against im)'),
    ]
    text = ReportGenerator(sections).write_report_to_file(out / 'compare.txt', mode='w')
    print(text, end='')
    return 0


def _require_seeds(cfg: RunConfig):
    if cfg.seeds is None:
        raise ConfigError('seeds', "a seed file is required")
    return cfg.seeds


def _configure_logging(verbosity: int):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(format=LOG_FORMAT, level=level)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        cfg = build_run_config(args)
        if args.command == 'select':
            return cmd_select(cfg)
        if args.command == 'evaluate':
            return cmd_evaluate(cfg, _require_seeds(cfg))
        if args.command == 'simulate':
            return cmd_simulate(cfg, _require_seeds(cfg))
        if args.command == 'oracle':
            return cmd_oracle(cfg, cfg.seeds, exhaustive=args.exhaustive)
        return cmd_compare(cfg)
    except DiversifiedInfluenceError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except (ValueError, ArithmeticError) as e:
        logger.debug("Run failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1


__all__ = [
    'build_parser',
    'build_run_config',
    'main',
]
